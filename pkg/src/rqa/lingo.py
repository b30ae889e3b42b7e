"""Language primitives for operators.

Tokenization, sentence splitting, a coarse rule-based part-of-speech tagger,
dictionary phrase matching and k-shingling with exact and MinHash Jaccard
similarity. Everything here is a pure function of its inputs.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from rqa import kernels
from rqa.errors import EmptySet, InvalidK, MissingDictionary, MixedShingleLength

DEFAULT_K = 3


class TokenKind(str, enum.Enum):
    WORD = "Word"
    NUMBER = "Number"
    PUNCT = "Punct"


class PosTag(str, enum.Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    MODAL = "MODAL"
    ADJ = "ADJ"
    ADV = "ADV"
    NUM = "NUM"
    DET = "DET"
    PRON = "PRON"
    PREP = "PREP"
    CONJ = "CONJ"
    PUNCT = "PUNCT"
    OTHER = "OTHER"


@dataclass(frozen=True, slots=True)
class Token:
    text: str
    kind: TokenKind
    start: int
    end: int
    lower: str = field(compare=False, default="")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


_TOKEN_RE = re.compile(r"[0-9]+\.[0-9]+(?![^\W_])|[^\W_]+|\S")
_NUMBER_RE = re.compile(r"[0-9]+(?:\.[0-9]+)?")


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into Word, Number and Punct tokens with offsets."""
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        s = m.group()
        if _NUMBER_RE.fullmatch(s):
            kind = TokenKind.NUMBER
        elif s[0].isalnum():
            kind = TokenKind.WORD
        else:
            kind = TokenKind.PUNCT
        tokens.append(Token(s, kind, m.start(), m.end(), s.lower()))
    return tokens


# -- lexicons ---------------------------------------------------------------


@dataclass(frozen=True)
class Lexicon:
    closed_class: dict[str, PosTag]
    verbs: frozenset[str]
    abbreviations: tuple[str, ...]

    def __hash__(self) -> int:
        return id(self)


def _data_lines(text: str) -> Iterable[str]:
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line


def _read_data(name: str, directory: Path | None) -> str:
    if directory is not None and (directory / name).is_file():
        return (directory / name).read_text(encoding="utf-8")
    return resources.files("rqa").joinpath("data", name).read_text(encoding="utf-8")


def load_lexicon(directory: str | Path | None = None) -> Lexicon:
    """Load seed lexicons, preferring files found in ``directory``."""
    d = Path(directory) if directory is not None else None
    closed = {}
    for line in _data_lines(_read_data("closed_class.txt", d)):
        word, tag = line.split()
        closed[word.lower()] = PosTag(tag)
    verbs = frozenset(w.lower() for w in _data_lines(_read_data("verbs.txt", d)))
    abbrevs = tuple(_data_lines(_read_data("abbreviations.txt", d)))
    return Lexicon(closed, verbs, abbrevs)


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    return load_lexicon()


def load_dictionary(path: str | Path | None = None, name: str = "ambiguous_adverbs.txt") -> frozenset[str]:
    """Read a phrase dictionary: one lowercase phrase per line, ``#`` comments."""
    if path is None:
        text = resources.files("rqa").joinpath("data", name).read_text(encoding="utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise MissingDictionary(str(path)) from exc
    return frozenset(line.lower() for line in _data_lines(text))


# -- sentences --------------------------------------------------------------

_BOUNDARY_RE = re.compile(r"[.!?](?=\s+[A-Z0-9])")


def split_sentences(text: str, abbreviations: Sequence[str] | None = None) -> list[tuple[int, int]]:
    """Return (start, end) offsets of sentences, trimmed of surrounding whitespace."""
    if abbreviations is None:
        abbreviations = default_lexicon().abbreviations
    abbrevs = [a.lower() for a in abbreviations]
    cuts = []
    for m in _BOUNDARY_RE.finditer(text):
        head = text[: m.end()].lower()
        if any(_ends_with_word(head, a) for a in abbrevs):
            continue
        cuts.append(m.end())
    spans = []
    start = 0
    for end in [*cuts, len(text)]:
        chunk = text[start:end]
        stripped = chunk.strip()
        if stripped:
            s = start + (len(chunk) - len(chunk.lstrip()))
            spans.append((s, s + len(stripped)))
        start = end
    return spans


def _ends_with_word(head: str, abbrev: str) -> bool:
    if not head.endswith(abbrev):
        return False
    before = len(head) - len(abbrev) - 1
    return before < 0 or not head[before].isalnum()


# -- tagging ----------------------------------------------------------------

_SUFFIXES = (
    ("ly", PosTag.ADV),
    ("ness", PosTag.NOUN),
    ("tion", PosTag.NOUN),
    ("able", PosTag.ADJ),
    ("ive", PosTag.ADJ),
)


def pos_tag(tokens: Sequence[Token], lexicon: Lexicon | None = None) -> list[PosTag]:
    """Tag each token with one coarse part of speech.

    Closed-class lexicon first, then numbers, the verb lexicon and suffix
    heuristics; anything left is a NOUN.
    """
    lex = lexicon or default_lexicon()
    tags = []
    for tok in tokens:
        if tok.kind is TokenKind.PUNCT:
            tags.append(PosTag.PUNCT)
            continue
        word = tok.lower or tok.text.lower()
        tag = lex.closed_class.get(word)
        if tag is None:
            if tok.kind is TokenKind.NUMBER:
                tag = PosTag.NUM
            elif word in lex.verbs:
                tag = PosTag.VERB
            else:
                tag = _suffix_tag(word)
        tags.append(tag)
    return tags


def _suffix_tag(word: str) -> PosTag:
    for suffix, tag in _SUFFIXES:
        if len(word) > len(suffix) + 2 and word.endswith(suffix):
            return tag
    return PosTag.NOUN


# -- dictionary matching ----------------------------------------------------


@lru_cache(maxsize=64)
def _compile_dictionary(dictionary: frozenset[str]) -> tuple[dict[tuple[str, ...], str], int]:
    index = {}
    longest = 0
    for phrase in dictionary:
        key = tuple(t.lower for t in tokenize(phrase))
        if key:
            index[key] = phrase
            longest = max(longest, len(key))
    return index, longest


def dict_match(tokens: Sequence[Token], dictionary: Iterable[str]) -> list[tuple[str, tuple[int, int]]]:
    """Find dictionary phrases in ``tokens``: case-insensitive, longest match first, non-overlapping."""
    index, longest = _compile_dictionary(frozenset(dictionary))
    if not index:
        return []
    words = [t.lower or t.text.lower() for t in tokens]
    out = []
    i = 0
    while i < len(words):
        for size in range(min(longest, len(words) - i), 0, -1):
            phrase = index.get(tuple(words[i : i + size]))
            if phrase is not None:
                out.append((phrase, (tokens[i].start, tokens[i + size - 1].end)))
                i += size
                break
        else:
            i += 1
    return out


# -- shingling --------------------------------------------------------------


@dataclass(frozen=True)
class ShingleSet:
    k: int
    shingles: frozenset[int]

    def __len__(self) -> int:
        return len(self.shingles)


def shingle_words(tokens: Sequence[Token]) -> list[str]:
    return [t.lower or t.text.lower() for t in tokens if t.kind is not TokenKind.PUNCT]


def shingles(tokens: Sequence[Token], k: int = DEFAULT_K) -> ShingleSet:
    """Hash every lowercase k-gram of Word/Number tokens with 64-bit FNV-1a."""
    if k < 1:
        raise InvalidK(k)
    words = shingle_words(tokens)
    grams = ["\x1f".join(words[i : i + k]).encode("utf-8") for i in range(len(words) - k + 1)]
    if not grams:
        return ShingleSet(k, frozenset())
    return ShingleSet(k, frozenset(int(h) for h in kernels.fnv1a64_many(grams)))


def jaccard(a: ShingleSet, b: ShingleSet) -> float:
    if a.k != b.k:
        raise MixedShingleLength(a.k, b.k)
    if not a.shingles and not b.shingles:
        return 1.0
    if not a.shingles or not b.shingles:
        return 0.0
    inter = len(a.shingles & b.shingles)
    return inter / (len(a.shingles) + len(b.shingles) - inter)


def minhash_signature(s: ShingleSet, num_hashes: int = 128, seed: int = 0) -> np.ndarray:
    """MinHash signature of ``s`` as a uint64 vector of length ``num_hashes``."""
    if num_hashes < 1:
        raise ValueError(f"num_hashes must be >= 1, got {num_hashes}")
    if not s.shingles:
        raise EmptySet()
    hashes = np.fromiter(sorted(s.shingles), dtype=np.uint64, count=len(s.shingles))
    offsets = np.array([0, len(hashes)], dtype=np.int64)
    return kernels.minhash_signatures(hashes, offsets, kernels.minhash_salts(num_hashes, seed))[0]


def minhash_estimate(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise ValueError("signatures differ in length")
    return float(np.count_nonzero(a == b)) / a.shape[0]


def signature_matrix(sets: Sequence[ShingleSet], num_hashes: int, seed: int) -> np.ndarray:
    """Signatures for many sets at once; rows of empty sets are all ones."""
    sizes = [len(s) for s in sets]
    offsets = np.zeros(len(sets) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    hashes = np.fromiter(
        (h for s in sets for h in sorted(s.shingles)), dtype=np.uint64, count=int(offsets[-1])
    )
    return kernels.minhash_signatures(hashes, offsets, kernels.minhash_salts(num_hashes, seed))
