"""Executable operators: writing rules and smell detectors that produce located findings.

Each operator is described by an :class:`OperatorDescriptor` (the quality
attribute it characterizes, the context it must read and the linguistic level
it works at) and implemented by a pure function ``(spec, config, lexicon) ->
findings``. :class:`OperatorRegistry` binds the two and applies configuration.
"""
from __future__ import annotations

import enum
import json
import math
import re
import sys
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Any

from rqa import kernels, lingo
from rqa.corpus import Caption, CaptionKind, Requirement, RequirementsSpec
from rqa.errors import ConfigError, InvalidThreshold, MissingDictionary, UnknownOperator
from rqa.lingo import Lexicon, PosTag, Token, TokenKind

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ContextScope(str, enum.Enum):
    LOCAL = "Local"
    REGIONAL = "Regional"
    GLOBAL = "Global"


class LinguisticLevel(str, enum.Enum):
    STATISTICAL = "Statistical"
    LEXICAL = "Lexical"
    SYNTACTIC = "Syntactic"
    SEMANTIC = "Semantic"


class Severity(str, enum.Enum):
    INFO = "Info"
    WARNING = "Warning"
    VIOLATION = "Violation"


@dataclass(frozen=True)
class Span:
    ref: str
    start: int
    end: int


@dataclass(frozen=True)
class Finding:
    op_id: str
    doc_id: str
    req_ids: tuple[str, ...]
    spans: tuple[Span, ...]
    message: str
    evidence: str
    severity: Severity
    score: float | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "op_id": self.op_id,
            "doc_id": self.doc_id,
            "req_ids": list(self.req_ids),
            "span": [{"ref": s.ref, "start": s.start, "end": s.end} for s in self.spans],
            "message": self.message,
            "evidence": self.evidence,
            "severity": self.severity.value,
        }
        if self.score is not None:
            out["score"] = round(self.score, 6)
        return out

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Finding":
        return cls(
            d["op_id"],
            d["doc_id"],
            tuple(d["req_ids"]),
            tuple(Span(s["ref"], s["start"], s["end"]) for s in d["span"]),
            d["message"],
            d["evidence"],
            Severity(d["severity"]),
            d.get("score"),
        )


@dataclass(frozen=True)
class OperatorDescriptor:
    op_id: str
    name: str
    attribute_id: str | None
    context_scope: ContextScope
    linguistic_level: LinguisticLevel
    needs_domain_knowledge: bool = False
    config: Mapping[str, Any] = field(default_factory=dict)
    description: str = ""


OperatorFn = Callable[[RequirementsSpec, Mapping[str, Any], Lexicon], list[Finding]]


@lru_cache(maxsize=1 << 16)
def _analyse(text: str, lexicon: Lexicon) -> tuple[tuple[Token, ...], tuple[PosTag, ...]]:
    tokens = tuple(lingo.tokenize(text))
    return tokens, tuple(lingo.pos_tag(tokens, lexicon))


def _finding(op_id, spec, el, start, end, message, evidence, severity) -> Finding:
    return Finding(op_id, spec.doc_id, (el.ref,), (Span(el.ref, start, end),), message, evidence, severity)


# -- time references --------------------------------------------------------

_MONTHS = (
    "January|February|March|April|May|June|July|August|September|October|November|December"
    "|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sept|Sep|Oct|Nov|Dec"
)
_NUMBER_WORDS = ("one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve")
_DATE_PATTERNS = [
    r"\b\d{4}-\d{2}-\d{2}\b",
    rf"\b\d{{1,2}}(?:st|nd|rd|th)?\s+(?:{_MONTHS})\.?,?\s+\d{{4}}\b",
    r"\b\d{1,2}[./]\d{1,2}[./]\d{4}\b",
    r"\b(?:[01]?\d|2[0-3]):[0-5]\d\b",
]
_DATE_RE = re.compile("|".join(f"(?:{p})" for p in _DATE_PATTERNS), re.IGNORECASE)
_DURATION_RE = re.compile(
    rf"\bwithin\s+(?:\d+|{'|'.join(_NUMBER_WORDS)})(?:\s*\(\d+\))?\s+(?:day|week|month|year)s?\b",
    re.IGNORECASE,
)


def time_spans(text: str, relative_deadlines: bool = True) -> list[tuple[int, int]]:
    """Non-overlapping spans of dates, clock times and (optionally) 'within N <unit>' deadlines."""
    found = [m.span() for m in _DATE_RE.finditer(text)]
    if relative_deadlines:
        found += [m.span() for m in _DURATION_RE.finditer(text)]
    found.sort(key=lambda s: (s[0], -s[1]))
    out: list[tuple[int, int]] = []
    for s, e in found:
        if out and s < out[-1][1]:
            continue
        out.append((s, e))
    return out


def _exempt_from_time_rule(spec: RequirementsSpec, el, marker: str) -> bool:
    if marker in spec.title.lower():
        return True
    for number in el.section_path:
        sec = spec.section(number)
        if sec is not None and marker in sec.title.lower():
            return True
    return False


def _time_refs(spec: RequirementsSpec, cfg: Mapping[str, Any], lex: Lexicon) -> list[Finding]:
    marker = str(cfg["exempt_title"]).lower()
    out = []
    for el in [*spec.requirements, *spec.prose]:
        if marker and _exempt_from_time_rule(spec, el, marker):
            continue
        for s, e in time_spans(el.text, bool(cfg["relative_deadlines"])):
            ev = el.text[s:e]
            out.append(
                _finding(
                    "op_time_refs", spec, el, s, e,
                    f"time reference {ev!r} in a technical document; refer to the Schedule document instead",
                    ev, Severity.VIOLATION,
                )
            )
    return out


# -- caption numbering ------------------------------------------------------


def _numbering(spec: RequirementsSpec, cfg: Mapping[str, Any], lex: Lexicon) -> list[Finding]:
    by_kind: dict[CaptionKind, list[Caption]] = defaultdict(list)
    for c in spec.captions:
        by_kind[c.kind].append(c)
    out = []
    for kind in CaptionKind:
        caps = by_kind.get(kind, [])
        expected = 1
        for i, cap in enumerate(caps):
            found = cap.number
            if found == expected:
                expected += 1
                continue
            if i == 0 and expected == 1:
                what = "wrong start"
            elif found < expected:
                what = "duplicate or out-of-order number"
            else:
                what = "gap in numbering"
            start = len(kind.value) + 1
            out.append(
                _finding(
                    "op_numbering", spec, cap, start, start + len(str(found)),
                    f"{kind.value} numbering: {what}, expected {expected}, found {found}",
                    cap.label, Severity.VIOLATION,
                )
            )
            # An isolated wrong number keeps the count; otherwise resynchronise on it.
            nxt = caps[i + 1].number if i + 1 < len(caps) else None
            expected = expected + 1 if nxt == expected + 1 else found + 1
    return out


# -- numerals 1-12 ----------------------------------------------------------

_REFERENCE_WORDS = frozenset({"figure", "fig", "table", "section", "chapter", "illustration"})
_RANGE_WORDS = frozenset({"-", "–", "to", "and"})


def _int_value(tok: Token) -> int | None:
    if tok.kind is TokenKind.NUMBER and tok.text.isdigit():
        return int(tok.text)
    return None


def _glued(a: Token, b: Token) -> bool:
    return a.end == b.start


def _in_identifier(tokens: Sequence[Token], i: int) -> bool:
    tok = tokens[i]
    if i >= 2:
        p, pp = tokens[i - 1], tokens[i - 2]
        if p.text in ("-", ".") and _glued(p, tok) and _glued(pp, p) and pp.kind is not TokenKind.PUNCT:
            return True
    if i + 2 < len(tokens):
        n, nn = tokens[i + 1], tokens[i + 2]
        if n.text in ("-", ".") and _glued(tok, n) and _glued(n, nn) and nn.kind is not TokenKind.PUNCT:
            return True
    return i >= 1 and tokens[i - 1].lower in _REFERENCE_WORDS


def _in_large_range(tokens: Sequence[Token], i: int) -> bool:
    for mid, other in ((i + 1, i + 2), (i - 1, i - 2)):
        if 0 <= other < len(tokens) and tokens[mid].lower in _RANGE_WORDS:
            if tokens[other].kind is TokenKind.NUMBER and float(tokens[other].text) > 12:
                return True
    return False


def _conforming(tokens: Sequence[Token], i: int, value: int) -> bool:
    return (
        i >= 2
        and i + 1 < len(tokens)
        and tokens[i - 1].text == "("
        and tokens[i + 1].text == ")"
        and tokens[i - 2].lower == _NUMBER_WORDS[value - 1]
    )


def _bare_numerals(spec: RequirementsSpec, cfg: Mapping[str, Any], lex: Lexicon) -> list[Finding]:
    lo, hi = int(cfg["min_value"]), int(cfg["max_value"])
    out = []
    for req in spec.requirements:
        tokens, tags = _analyse(req.text, lex)
        dates = None
        for i, (tok, tag) in enumerate(zip(tokens, tags)):
            if tag is not PosTag.NUM:
                continue
            value = _int_value(tok)
            if value is None or not lo <= value <= hi:
                continue
            if _conforming(tokens, i, value) or _in_identifier(tokens, i) or _in_large_range(tokens, i):
                continue
            if dates is None:
                dates = time_spans(req.text, relative_deadlines=False)
            if any(s <= tok.start and tok.end <= e for s, e in dates):
                continue
            word = _NUMBER_WORDS[value - 1] if 1 <= value <= 12 else str(value)
            out.append(
                _finding(
                    "op_bare_numerals", spec, req, tok.start, tok.end,
                    f"numeral {tok.text} should be written as '{word} ({value})'",
                    tok.text, Severity.VIOLATION,
                )
            )
    return out


# -- consistent terms -------------------------------------------------------


def _synonym_groups(cfg: Mapping[str, Any]) -> list[list[str]]:
    groups = cfg["synonym_groups"]
    if not isinstance(groups, (list, tuple)):
        raise ConfigError("synonym_groups", "expected a list of term lists")
    out = []
    for g in groups:
        if not isinstance(g, (list, tuple)) or not all(isinstance(t, str) for t in g):
            raise ConfigError("synonym_groups", "expected a list of term lists")
        terms = list(dict.fromkeys(t.strip().lower() for t in g if t.strip()))
        if len(terms) < 2:
            raise ConfigError("synonym_groups", f"group {list(g)!r} has fewer than 2 terms")
        out.append(terms)
    return out


def _term_consistency(spec: RequirementsSpec, cfg: Mapping[str, Any], lex: Lexicon) -> list[Finding]:
    out = []
    for terms in _synonym_groups(cfg):
        forms = {}
        for t in terms:
            forms[t] = t
            forms.setdefault(t + "s", t)
        hits: list[tuple[str, Requirement, tuple[int, int]]] = []
        for req in spec.requirements:
            tokens, _ = _analyse(req.text, lex)
            for phrase, span in lingo.dict_match(tokens, forms):
                hits.append((forms[phrase], req, span))
        counts = {t: sum(1 for h in hits if h[0] == t) for t in terms}
        used = [t for t in terms if counts[t]]
        if len(used) < 2:
            continue
        req_ids = tuple(dict.fromkeys(h[1].req_id for h in hits))
        spans = tuple(Span(h[1].req_id, *h[2]) for h in hits)
        listing = ", ".join(f"{t} ({counts[t]})" for t in used)
        out.append(
            Finding(
                "op_term_consistency", spec.doc_id, req_ids, spans,
                f"terms for one concept are mixed: {listing}; pick one",
                ", ".join(used), Severity.VIOLATION,
            )
        )
    return out


# -- atomicity --------------------------------------------------------------


def _atomicity(spec: RequirementsSpec, cfg: Mapping[str, Any], lex: Lexicon) -> list[Finding]:
    window = int(cfg["verb_window"])
    conjunctions = {c.lower() for c in cfg["conjunctions"]}
    out = []
    for req in spec.requirements:
        tokens, tags = _analyse(req.text, lex)
        modals = [i for i, t in enumerate(tags) if t is PosTag.MODAL]
        if not modals:
            continue
        sentences = lingo.split_sentences(req.text, lex.abbreviations)

        def sentence_end(i: int) -> int:
            for s, e in sentences:
                if s <= tokens[i].start < e:
                    return e
            return len(req.text)

        reasons = []
        anchor = None
        if len(modals) >= 2:
            reasons.append(f"{len(modals)} modal verbs")
            anchor = tokens[modals[1]]
            with_modal = {next((j for j, (s, e) in enumerate(sentences) if s <= tokens[m].start < e), -1) for m in modals}
            if len(with_modal) >= 2:
                reasons.append(f"{len(with_modal)} sentences with a modal verb")
        for m in modals:
            end = sentence_end(m)
            j = m + 1
            while j < len(tokens) and tokens[j].start < end:
                if tags[j] is PosTag.CONJ and tokens[j].lower in conjunctions:
                    for k in range(j + 1, min(j + 1 + window, len(tokens))):
                        if tokens[k].start >= end or tags[k] in (PosTag.CONJ, PosTag.MODAL):
                            break
                        if tags[k] is PosTag.VERB:
                            reasons.append(f"'{tokens[j].text}' joins a second action '{tokens[k].text}'")
                            anchor = anchor or tokens[j]
                            break
                j += 1
        if reasons:
            reasons = list(dict.fromkeys(reasons))
            out.append(
                _finding(
                    "op_atomicity", spec, req, anchor.start, anchor.end,
                    "requirement is not atomic (" + "; ".join(reasons) + "); split it into separate requirements",
                    anchor.text, Severity.VIOLATION,
                )
            )
    return out


# -- smells: dictionaries ---------------------------------------------------


@lru_cache(maxsize=32)
def _dictionary_file(path: str) -> frozenset[str]:
    return lingo.load_dictionary(path)


def _dictionary_terms(cfg: Mapping[str, Any]) -> frozenset[str]:
    terms = cfg.get("terms")
    if terms is not None:
        if not isinstance(terms, (list, tuple)) or not all(isinstance(t, str) for t in terms):
            raise ConfigError("terms", "expected a list of phrases")
        return frozenset(t.strip().lower() for t in terms if t.strip())
    path = cfg.get("dictionary")
    if path:
        if not Path(path).is_file():
            raise MissingDictionary(str(path))
        return _dictionary_file(str(path))
    return lingo.load_dictionary()


def _dictionary_operator(op_id: str) -> OperatorFn:
    def run(spec: RequirementsSpec, cfg: Mapping[str, Any], lex: Lexicon) -> list[Finding]:
        terms = _dictionary_terms(cfg)
        severity = Severity(cfg.get("severity", Severity.WARNING.value))
        out = []
        for req in spec.requirements:
            tokens, _ = _analyse(req.text, lex)
            for phrase, (s, e) in lingo.dict_match(tokens, terms):
                out.append(
                    _finding(op_id, spec, req, s, e, f"vague term {req.text[s:e]!r}; state a measurable criterion",
                             req.text[s:e], severity)
                )
        return out

    return run


# -- smells: redundancy -----------------------------------------------------


def similar_pairs(
    sets: Sequence[lingo.ShingleSet],
    threshold: float,
    *,
    pair_budget: int = 1_000_000,
    num_hashes: int = 128,
    seed: int = 42,
    margin: float = 0.1,
) -> list[tuple[int, int, float]]:
    """Index pairs ``(i, j, J)`` with ``i < j`` and exact Jaccard ``J >= threshold``.

    Empty sets are never paired here. Below ``pair_budget`` candidate pairs are
    those sharing at least one shingle; above it, MinHash signatures whose
    estimate reaches ``threshold - margin`` nominate candidates.
    """
    live = [i for i, s in enumerate(sets) if s.shingles]
    n = len(live)
    if n * (n - 1) // 2 <= pair_budget:
        index: dict[int, list[int]] = defaultdict(list)
        for pos, i in enumerate(live):
            for h in sets[i].shingles:
                index[h].append(pos)
        candidates = set()
        for posting in index.values():
            for a in range(len(posting)):
                for b in range(a + 1, len(posting)):
                    candidates.add((posting[a], posting[b]))
        pairs = sorted(candidates)
    else:
        sigs = lingo.signature_matrix([sets[i] for i in live], num_hashes, seed)
        min_matches = max(0, math.ceil((threshold - margin) * num_hashes - 1e-9))
        found, _ = kernels.similar_pairs(sigs, min_matches)
        pairs = [(int(a), int(b)) for a, b in found]
    out = []
    for a, b in pairs:
        i, j = live[a], live[b]
        sim = lingo.jaccard(sets[i], sets[j])
        if sim >= threshold:
            out.append((i, j, sim))
    return out


def _redundancy(spec: RequirementsSpec, cfg: Mapping[str, Any], lex: Lexicon) -> list[Finding]:
    threshold = cfg["threshold"]
    if not isinstance(threshold, (int, float)) or not 0 < threshold <= 1:
        raise InvalidThreshold(threshold)
    k = int(cfg["k"])
    reqs = spec.requirements
    sets = [lingo.shingles(_analyse(r.text, lex)[0], k) for r in reqs]
    pairs = similar_pairs(
        sets,
        float(threshold),
        pair_budget=int(cfg["pair_budget"]),
        num_hashes=int(cfg["num_hashes"]),
        seed=int(cfg["minhash_seed"]),
        margin=float(cfg["prefilter_margin"]),
    )
    # Requirements too short to shingle only pair when their words are identical.
    short: dict[tuple[str, ...], list[int]] = defaultdict(list)
    for i, s in enumerate(sets):
        if not s.shingles:
            words = tuple(lingo.shingle_words(_analyse(reqs[i].text, lex)[0]))
            if words:
                short[words].append(i)
    for group in short.values():
        pairs += [(a, b, 1.0) for x, a in enumerate(group) for b in group[x + 1 :]]
    out = []
    for i, j, sim in sorted(pairs):
        a, b = reqs[i], reqs[j]
        out.append(
            Finding(
                "op_redundancy", spec.doc_id, (a.req_id, b.req_id),
                (Span(a.req_id, 0, len(a.text)), Span(b.req_id, 0, len(b.text))),
                f"{a.req_id} and {b.req_id} repeat each other (Jaccard {sim:.4f} >= {threshold}); "
                "keep one and refer to it",
                b.text, Severity.WARNING, sim,
            )
        )
    return out


# -- registry ---------------------------------------------------------------

DEFAULT_SYNONYM_GROUPS = [["user", "dispatcher", "operator"]]

BUILTIN_DESCRIPTORS: tuple[OperatorDescriptor, ...] = (
    OperatorDescriptor(
        "op_ambiguous_adverbs", "Ambiguous adverbs", "unambiguous", ContextScope.LOCAL, LinguisticLevel.LEXICAL,
        False, {"dictionary": None, "terms": None},
        "Flags vague adverbs and qualifiers found in a dictionary.",
    ),
    OperatorDescriptor(
        "op_atomicity", "Separate supplementary requirements", "atomic", ContextScope.LOCAL, LinguisticLevel.SYNTACTIC,
        False, {"verb_window": 4, "conjunctions": ["and", "or"]},
        "Flags requirements with several modal verbs or a conjunction joining two actions.",
    ),
    OperatorDescriptor(
        "op_bare_numerals", "Numbers one to twelve in words and digits", "unambiguous", ContextScope.LOCAL,
        LinguisticLevel.SYNTACTIC, False, {"min_value": 1, "max_value": 12},
        "Flags numerals 1-12 not written as 'two (2)'.",
    ),
    OperatorDescriptor(
        "op_numbering", "Consecutive caption numbering", "organized", ContextScope.GLOBAL,
        LinguisticLevel.STATISTICAL, False, {},
        "Checks that figures, tables and illustrations are numbered 1, 2, 3, ... per kind.",
    ),
    OperatorDescriptor(
        "op_redundancy", "Repeated requirements", "non_redundant", ContextScope.GLOBAL, LinguisticLevel.STATISTICAL,
        False,
        {"threshold": 0.6, "k": 3, "pair_budget": 1_000_000, "num_hashes": 128, "minhash_seed": 42,
         "prefilter_margin": 0.1},
        "Flags requirement pairs whose word 3-gram Jaccard similarity reaches the threshold.",
    ),
    OperatorDescriptor(
        "op_term_consistency", "Consistent terms", "unambiguous", ContextScope.GLOBAL, LinguisticLevel.LEXICAL,
        False, {"synonym_groups": DEFAULT_SYNONYM_GROUPS},
        "Flags synonym groups whose members are mixed across the document.",
    ),
    OperatorDescriptor(
        "op_time_refs", "No times in technical documents", "non_redundant", ContextScope.GLOBAL,
        LinguisticLevel.LEXICAL, False, {"relative_deadlines": True, "exempt_title": "schedule"},
        "Flags dates, clock times and 'within N days' deadlines outside the Schedule document.",
    ),
)

_BUILTIN_FNS: dict[str, OperatorFn] = {
    "op_ambiguous_adverbs": _dictionary_operator("op_ambiguous_adverbs"),
    "op_atomicity": _atomicity,
    "op_bare_numerals": _bare_numerals,
    "op_numbering": _numbering,
    "op_redundancy": _redundancy,
    "op_term_consistency": _term_consistency,
    "op_time_refs": _time_refs,
}

_CUSTOM_FIELDS = {
    "op_id", "name", "attribute_id", "context_scope", "linguistic_level", "needs_domain_knowledge",
    "terms", "dictionary", "severity", "description", "enabled",
}


def canonical_order(findings: Iterable[Finding], spec: RequirementsSpec) -> list[Finding]:
    pos = spec.positions()

    def key(f: Finding):
        return (
            [pos.get(r, len(pos)) for r in f.req_ids],
            f.spans[0].start if f.spans else 0,
            f.op_id,
            f.message,
        )

    return sorted(findings, key=key)


class OperatorRegistry:
    """Registered operators with their effective configuration."""

    def __init__(self, lexicon: Lexicon | None = None):
        self.lexicon = lexicon or lingo.default_lexicon()
        self._ops: dict[str, tuple[OperatorDescriptor, OperatorFn]] = {}

    def register(self, desc: OperatorDescriptor, fn: OperatorFn) -> None:
        if desc.op_id in self._ops:
            raise ConfigError(desc.op_id, "operator id registered twice")
        self._ops[desc.op_id] = (desc, fn)

    def __contains__(self, op_id: object) -> bool:
        return op_id in self._ops

    def descriptor(self, op_id: str) -> OperatorDescriptor:
        try:
            return self._ops[op_id][0]
        except KeyError:
            raise UnknownOperator(op_id) from None

    def catalog(self) -> list[OperatorDescriptor]:
        return [self._ops[k][0] for k in sorted(self._ops)]

    def run(self, op: str | OperatorDescriptor, spec: RequirementsSpec) -> list[Finding]:
        op_id = op if isinstance(op, str) else op.op_id
        if op_id not in self._ops:
            raise UnknownOperator(op_id)
        desc, fn = self._ops[op_id]
        if isinstance(op, OperatorDescriptor):
            desc = op
        return canonical_order(fn(spec, desc.config, self.lexicon), spec)

    def restrict(self, op_ids: Iterable[str]) -> "OperatorRegistry":
        sub = OperatorRegistry(self.lexicon)
        for op_id in op_ids:
            self.descriptor(op_id)
            sub._ops[op_id] = self._ops[op_id]
        return sub


def _resolve_path(value: Any, base: Path | None) -> Any:
    if isinstance(value, str) and value and base is not None and not Path(value).is_absolute():
        return str(base / value)
    return value


def default_registry(
    config: Mapping[str, Any] | None = None,
    lexicon: Lexicon | None = None,
    base_dir: str | Path | None = None,
) -> OperatorRegistry:
    """Registry with the built-in operators, adjusted by an operator config mapping.

    ``config`` maps op ids to tables of overrides (``enabled = false`` drops
    the operator) and may hold a ``custom`` list of dictionary-based
    operators. Relative file paths resolve against ``base_dir``.
    """
    config = dict(config or {})
    base = Path(base_dir) if base_dir is not None else None
    registry = OperatorRegistry(lexicon)
    builtin_ids = {d.op_id for d in BUILTIN_DESCRIPTORS}
    for key in config:
        if key != "custom" and key not in builtin_ids:
            raise UnknownOperator(key)
    for desc in BUILTIN_DESCRIPTORS:
        table = config.get(desc.op_id, {})
        if not isinstance(table, Mapping):
            raise ConfigError(desc.op_id, "expected a table")
        if not table.get("enabled", True):
            continue
        merged = dict(desc.config)
        for key, value in table.items():
            if key == "enabled":
                continue
            if key == "synonym_groups_file" and desc.op_id == "op_term_consistency":
                merged["synonym_groups"] = _read_groups(_resolve_path(value, base))
                continue
            if key not in merged:
                raise ConfigError(f"{desc.op_id}.{key}", "unknown setting")
            merged[key] = _resolve_path(value, base) if key == "dictionary" else value
        registry.register(replace(desc, config=merged), _BUILTIN_FNS[desc.op_id])
    for i, entry in enumerate(config.get("custom", [])):
        desc = _custom_descriptor(entry, i, base)
        if desc is not None:
            registry.register(desc, _dictionary_operator(desc.op_id))
    return registry


def _read_groups(path: str) -> list[list[str]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("synonym_groups_file", f"cannot read {path}") from exc
    return [[t.strip() for t in line.split(",")] for line in lingo._data_lines(text)]


def _custom_descriptor(entry: Any, i: int, base: Path | None) -> OperatorDescriptor | None:
    where = f"custom[{i}]"
    if not isinstance(entry, Mapping):
        raise ConfigError(where, "expected a table")
    for key in entry:
        if key not in _CUSTOM_FIELDS:
            raise ConfigError(f"{where}.{key}", "unknown setting")
    if not entry.get("enabled", True):
        return None
    try:
        scope = ContextScope(entry.get("context_scope", "Local"))
        level = LinguisticLevel(entry.get("linguistic_level", "Lexical"))
        severity = Severity(entry.get("severity", "Warning"))
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from None
    op_id = entry.get("op_id")
    if not isinstance(op_id, str) or not op_id:
        raise ConfigError(f"{where}.op_id", "required")
    if entry.get("terms") is None and not entry.get("dictionary"):
        raise ConfigError(f"{where}.terms", "a custom operator needs 'terms' or 'dictionary'")
    attribute = entry.get("attribute_id") or None
    cfg = {
        "terms": entry.get("terms"),
        "dictionary": _resolve_path(entry.get("dictionary"), base),
        "severity": severity.value,
    }
    return OperatorDescriptor(
        op_id, entry.get("name", op_id), attribute, scope, level,
        bool(entry.get("needs_domain_knowledge", False)), cfg, entry.get("description", ""),
    )


def load_operator_config(path: str | Path) -> dict[str, Any]:
    """Read an operator config file (TOML, or JSON when the extension is ``.json``)."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    try:
        if p.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(str(p), f"cannot parse: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(str(p), "expected a table at top level")
    return data


_DEFAULT: OperatorRegistry | None = None


def _default() -> OperatorRegistry:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = default_registry()
    return _DEFAULT


def registry_catalog(registry: OperatorRegistry | None = None) -> list[OperatorDescriptor]:
    """All registered operators sorted by id."""
    return (registry or _default()).catalog()


def run_operator(
    op: str | OperatorDescriptor, spec: RequirementsSpec, registry: OperatorRegistry | None = None
) -> list[Finding]:
    return (registry or _default()).run(op, spec)


def lint(
    specs: Sequence[RequirementsSpec],
    registry: OperatorRegistry | None = None,
    op_ids: Sequence[str] | None = None,
    jobs: int = 1,
) -> list[Finding]:
    """Run operators over documents; the result order does not depend on ``jobs``."""
    registry = registry or _default()
    ids = list(op_ids) if op_ids is not None else [d.op_id for d in registry.catalog()]
    for op_id in ids:
        registry.descriptor(op_id)
    tasks = [(d, op_id) for d in range(len(specs)) for op_id in ids]
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda t: registry.run(t[1], specs[t[0]]), tasks))
    else:
        results = [registry.run(op_id, specs[d]) for d, op_id in tasks]
    out = []
    for d, spec in enumerate(specs):
        merged = [f for (doc, _), res in zip(tasks, results) if doc == d for f in res]
        out.extend(canonical_order(merged, spec))
    return out


# Public per-operator entry points with the built-in defaults.


def _public(op_id: str):
    desc = next(d for d in BUILTIN_DESCRIPTORS if d.op_id == op_id)

    def run(spec: RequirementsSpec, config: Mapping[str, Any] | None = None, *, lexicon: Lexicon | None = None,
            **overrides: Any) -> list[Finding]:
        cfg = {**desc.config, **(config or {}), **overrides}
        lex = lexicon or lingo.default_lexicon()
        return canonical_order(_BUILTIN_FNS[op_id](spec, cfg, lex), spec)

    run.__name__ = op_id
    run.__doc__ = desc.description
    return run


op_time_refs = _public("op_time_refs")
op_numbering = _public("op_numbering")
op_bare_numerals = _public("op_bare_numerals")
op_term_consistency = _public("op_term_consistency")
op_atomicity = _public("op_atomicity")
op_ambiguous_adverbs = _public("op_ambiguous_adverbs")
op_redundancy = _public("op_redundancy")
