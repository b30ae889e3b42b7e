"""Operator accuracy by seeded defect injection, and correlation between operators."""
from __future__ import annotations

import enum
import json
import random
import re
import statistics
import sys
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from rqa import corpus
from rqa.corpus import RequirementsSpec
from rqa.decision import AccuracyEstimate, Provenance
from rqa.errors import ConfigError, CorpusTooSmall, InsufficientSites, NotClean
from rqa.operators import Finding, OperatorRegistry, lint, _dictionary_terms, _synonym_groups, default_registry

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class DefectKind(str, enum.Enum):
    INSERT_AMBIGUOUS_ADVERB = "InsertAmbiguousAdverb"
    DUPLICATE_REQUIREMENT = "DuplicateRequirement"
    BREAK_NUMBERING = "BreakNumbering"
    MERGE_REQUIREMENTS = "MergeRequirements"
    INSERT_BARE_NUMERAL = "InsertBareNumeral"
    INSERT_DATE = "InsertDate"
    SWAP_SYNONYM = "SwapSynonym"


TARGET_OP = {
    DefectKind.INSERT_AMBIGUOUS_ADVERB: "op_ambiguous_adverbs",
    DefectKind.DUPLICATE_REQUIREMENT: "op_redundancy",
    DefectKind.BREAK_NUMBERING: "op_numbering",
    DefectKind.MERGE_REQUIREMENTS: "op_atomicity",
    DefectKind.INSERT_BARE_NUMERAL: "op_bare_numerals",
    DefectKind.INSERT_DATE: "op_time_refs",
    DefectKind.SWAP_SYNONYM: "op_term_consistency",
}

# Substitutions used when duplicating a requirement, so copies are near rather than exact.
DUPLICATE_SYNONYMS = {
    "system": "application",
    "display": "show",
    "start": "begin",
    "stop": "halt",
    "send": "transmit",
    "receive": "obtain",
    "store": "keep",
    "record": "register",
    "check": "inspect",
    "provide": "supply",
}


@dataclass(frozen=True)
class DefectSpec:
    kind: DefectKind
    count: int
    seed: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise ConfigError("count", f"must be >= 0, got {self.count}")


@dataclass(frozen=True)
class TruthEntry:
    defect_kind: DefectKind
    doc_id: str
    req_ids: tuple[str, ...]
    op_id: str


GroundTruth = tuple[TruthEntry, ...]


@dataclass(frozen=True)
class OpAccuracy:
    op_id: str
    true_positives: int
    false_positives: int
    false_negatives: int

    @property
    def precision(self) -> float:
        d = self.true_positives + self.false_positives
        return self.true_positives / d if d else 1.0

    @property
    def recall(self) -> float:
        d = self.true_positives + self.false_negatives
        return self.true_positives / d if d else 1.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class AccuracyReport:
    operators: tuple[OpAccuracy, ...]

    def __getitem__(self, op_id: str) -> OpAccuracy:
        for acc in self.operators:
            if acc.op_id == op_id:
                return acc
        raise KeyError(op_id)

    def __contains__(self, op_id: object) -> bool:
        return any(a.op_id == op_id for a in self.operators)

    def estimates(self) -> dict[str, AccuracyEstimate]:
        return {a.op_id: AccuracyEstimate(a.precision, a.recall, Provenance.MEASURED) for a in self.operators}

    def to_dict(self) -> dict[str, Any]:
        return {
            "operators": {
                a.op_id: {
                    "true_positives": a.true_positives,
                    "false_positives": a.false_positives,
                    "false_negatives": a.false_negatives,
                    "precision": round(a.precision, 6),
                    "recall": round(a.recall, 6),
                    "f1": round(a.f1, 6),
                }
                for a in self.operators
            }
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "AccuracyReport":
        ops = data.get("operators")
        if not isinstance(ops, Mapping):
            raise ConfigError("operators", "accuracy report needs an 'operators' table")
        return cls(
            tuple(
                OpAccuracy(op_id, int(v["true_positives"]), int(v["false_positives"]), int(v["false_negatives"]))
                for op_id, v in sorted(ops.items())
            )
        )


def load_accuracy_estimates(text: str) -> dict[str, AccuracyEstimate]:
    """Measured estimates from an accuracy report JSON (as written by ``rqa eval``)."""
    data = json.loads(text)
    report = data.get("report", data)
    return AccuracyReport.from_dict(report).estimates()


def load_defect_config(path: str | Path) -> list[DefectSpec]:
    """Read ``[[defect]]`` tables (TOML) or ``{"defects": [...]}`` (JSON)."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    try:
        data = json.loads(text) if p.suffix.lower() == ".json" else tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(str(p), f"cannot parse: {exc}") from exc
    entries = data.get("defect", data.get("defects", []))
    out = []
    for i, e in enumerate(entries):
        try:
            out.append(DefectSpec(DefectKind(e["kind"]), int(e.get("count", 1)), int(e.get("seed", 0))))
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"defect[{i}]", str(exc)) from None
    return out


# -- injection --------------------------------------------------------------

_END_PUNCT = ".!?"


def _insert_before_end(text: str, phrase: str) -> str:
    text = text.rstrip()
    if text and text[-1] in _END_PUNCT:
        return text[:-1] + phrase + text[-1]
    return text + phrase


def _lower_first(text: str) -> str:
    m = re.match(r"[A-Z][a-z]", text)
    return text[0].lower() + text[1:] if m else text


def _rng(d: DefectSpec, doc_id: str) -> random.Random:
    return random.Random(f"{d.seed}:{doc_id}:{d.kind.value}")


class _Workbench:
    """Mutable copy of a spec's JSON form plus bookkeeping of touched sites."""

    def __init__(self, spec: RequirementsSpec, registry: OperatorRegistry):
        self.doc_id = spec.doc_id
        self.data = corpus.to_dict(spec)
        self.registry = registry
        self.touched: set[str] = set()
        self.touched_captions: set[int] = set()
        self.truth: list[TruthEntry] = []

    @property
    def reqs(self) -> list[dict]:
        return self.data["requirements"]

    def free(self) -> list[int]:
        return [i for i, r in enumerate(self.reqs) if r["id"] not in self.touched]

    def record(self, kind: DefectKind, req_ids: Sequence[str]) -> None:
        self.truth.append(TruthEntry(kind, self.doc_id, tuple(req_ids), TARGET_OP[kind]))

    def fresh_id(self, base: str) -> str:
        ids = {r["id"] for r in self.reqs}
        n = 1
        while f"{base}-D{n}" in ids:
            n += 1
        return f"{base}-D{n}"


def _pick(rng: random.Random, kind: DefectKind, candidates: list, count: int) -> list:
    if count > len(candidates):
        raise InsufficientSites(kind.value, count, len(candidates))
    return rng.sample(candidates, count)


def _append_phrase(wb: _Workbench, d: DefectSpec, rng: random.Random, make_phrase) -> None:
    for i in sorted(_pick(rng, d.kind, wb.free(), d.count)):
        req = wb.reqs[i]
        req["text"] = _insert_before_end(req["text"], make_phrase(rng))
        wb.touched.add(req["id"])
        wb.record(d.kind, [req["id"]])


def _inject_adverb(wb: _Workbench, d: DefectSpec, rng: random.Random) -> None:
    desc = wb.registry.descriptor("op_ambiguous_adverbs")
    words = sorted(t for t in _dictionary_terms(desc.config) if re.fullmatch(r"[a-z]+", t))
    if not words:
        raise InsufficientSites(d.kind.value, d.count, 0)
    _append_phrase(wb, d, rng, lambda r: " " + r.choice(words))


def _inject_numeral(wb: _Workbench, d: DefectSpec, rng: random.Random) -> None:
    _append_phrase(wb, d, rng, lambda r: f" at least {r.randint(2, 12)} times")


def _inject_date(wb: _Workbench, d: DefectSpec, rng: random.Random) -> None:
    _append_phrase(
        wb, d, rng, lambda r: f" by {r.randint(2020, 2035)}-{r.randint(1, 12):02d}-{r.randint(1, 28):02d}"
    )


def _inject_merge(wb: _Workbench, d: DefectSpec, rng: random.Random) -> None:
    for _ in range(d.count):
        reqs = wb.reqs
        sites = [
            i for i in range(len(reqs) - 1)
            if reqs[i]["id"] not in wb.touched
            and reqs[i + 1]["id"] not in wb.touched
            and reqs[i]["section"] == reqs[i + 1]["section"]
        ]
        if not sites:
            raise InsufficientSites(d.kind.value, d.count, 0)
        i = rng.choice(sites)
        first, second = reqs[i], reqs[i + 1]
        first["text"] = first["text"].rstrip().rstrip(_END_PUNCT) + " and " + _lower_first(second["text"])
        del reqs[i + 1]
        wb.touched.add(first["id"])
        wb.record(d.kind, [first["id"]])


def _inject_duplicate(wb: _Workbench, d: DefectSpec, rng: random.Random) -> None:
    for _ in range(d.count):
        sites = wb.free()
        if not sites:
            raise InsufficientSites(d.kind.value, d.count, 0)
        i = rng.choice(sites)
        orig = wb.reqs[i]
        words = orig["text"].split(" ")
        swappable = [j for j, w in enumerate(words) if w.lower().strip(".,;:") in DUPLICATE_SYNONYMS]
        for j in sorted(rng.sample(swappable, min(len(swappable), rng.randint(0, 2)))):
            core = words[j].strip(".,;:")
            sub = DUPLICATE_SYNONYMS[core.lower()]
            if core[:1].isupper():
                sub = sub.capitalize()
            words[j] = words[j].replace(core, sub, 1)
        copy = {"id": wb.fresh_id(orig["id"]), "section": orig["section"], "text": " ".join(words)}
        wb.reqs.insert(i + 1, copy)
        wb.touched.update((orig["id"], copy["id"]))
        wb.record(d.kind, [orig["id"], copy["id"]])


def _inject_synonym(wb: _Workbench, d: DefectSpec, rng: random.Random) -> None:
    groups = _synonym_groups(wb.registry.descriptor("op_term_consistency").config)
    patterns = [(g, re.compile(r"\b(" + "|".join(map(re.escape, g)) + r")\b", re.IGNORECASE)) for g in groups]

    def hits(text: str):
        return [(g, m) for g, pat in patterns for m in pat.finditer(text)]

    sites = [i for i in wb.free() if hits(wb.reqs[i]["text"])]
    for i in sorted(_pick(rng, d.kind, sites, d.count)):
        req = wb.reqs[i]
        group, m = rng.choice(hits(req["text"]))
        current = m.group(1).lower()
        sub = rng.choice([t for t in group if t != current])
        if m.group(1)[:1].isupper():
            sub = sub.capitalize()
        req["text"] = req["text"][: m.start(1)] + sub + req["text"][m.end(1) :]
        wb.touched.add(req["id"])
        wb.record(d.kind, [req["id"]])


def _inject_numbering(wb: _Workbench, d: DefectSpec, rng: random.Random) -> None:
    caps = wb.data["captions"]
    ordinals: list[int] = []
    seen: Counter = Counter()
    for c in caps:
        seen[c["kind"]] += 1
        ordinals.append(seen[c["kind"]])
    for _ in range(d.count):
        # neighbours of a broken caption stay intact so each break yields exactly one finding
        sites = []
        for i, c in enumerate(caps):
            if i in wb.touched_captions:
                continue
            same = [j for j, o in enumerate(caps) if o["kind"] == c["kind"]]
            pos = same.index(i)
            near = same[max(0, pos - 1) : pos + 2]
            if not any(j in wb.touched_captions for j in near):
                sites.append(i)
        if not sites:
            raise InsufficientSites(d.kind.value, d.count, 0)
        i = rng.choice(sites)
        caps[i]["number"] = caps[i]["number"] + rng.randint(5, 9)
        wb.touched_captions.add(i)
        wb.record(d.kind, [f"{caps[i]['kind']}#{ordinals[i]}"])


_INJECTORS = {
    DefectKind.INSERT_AMBIGUOUS_ADVERB: _inject_adverb,
    DefectKind.INSERT_BARE_NUMERAL: _inject_numeral,
    DefectKind.INSERT_DATE: _inject_date,
    DefectKind.MERGE_REQUIREMENTS: _inject_merge,
    DefectKind.DUPLICATE_REQUIREMENT: _inject_duplicate,
    DefectKind.SWAP_SYNONYM: _inject_synonym,
    DefectKind.BREAK_NUMBERING: _inject_numbering,
}


def inject_defects(
    spec: RequirementsSpec, defects: Sequence[DefectSpec], registry: OperatorRegistry | None = None
) -> tuple[RequirementsSpec, GroundTruth]:
    """Inject seeded defects into a clean spec and log each one as ground truth.

    Sites are drawn uniformly with a generator seeded from the defect seed, the
    document id and the defect kind; every requirement or caption is mutated
    at most once.
    """
    registry = registry or default_registry()
    active = [d for d in defects if d.count > 0]
    if not active:
        return spec, ()
    for op_id in sorted({TARGET_OP[d.kind] for d in active}):
        if registry.run(op_id, spec):
            raise NotClean(op_id, spec.doc_id)
    wb = _Workbench(spec, registry)
    for d in active:
        _INJECTORS[d.kind](wb, d, _rng(d, spec.doc_id))
    mutated = corpus.from_dict(wb.data)
    return mutated, tuple(wb.truth)


# -- scoring ----------------------------------------------------------------


def _finding_key(f: Finding):
    return (f.doc_id, f.op_id, f.req_ids, tuple((s.ref, s.start, s.end) for s in f.spans), f.message)


def score(findings: Iterable[Finding], truth: Sequence[TruthEntry], op_ids: Iterable[str] | None = None) -> AccuracyReport:
    """Match findings to injected defects one-to-one (same op, same document, shared reference)."""
    findings = sorted(findings, key=_finding_key)
    ops = set(op_ids) if op_ids is not None else {f.op_id for f in findings} | {t.op_id for t in truth}
    tp: Counter = Counter()
    fp: Counter = Counter()
    matched: set[int] = set()
    for f in findings:
        if f.op_id not in ops:
            continue
        refs = set(f.req_ids)
        for idx, t in enumerate(truth):
            if idx not in matched and t.op_id == f.op_id and t.doc_id == f.doc_id and refs.intersection(t.req_ids):
                matched.add(idx)
                tp[f.op_id] += 1
                break
        else:
            fp[f.op_id] += 1
    fn: Counter = Counter(t.op_id for idx, t in enumerate(truth) if idx not in matched and t.op_id in ops)
    return AccuracyReport(tuple(OpAccuracy(op, tp[op], fp[op], fn[op]) for op in sorted(ops)))


def format_report(report: AccuracyReport) -> str:
    rows = [("op_id", "TP", "FP", "FN", "precision", "recall", "F1")]
    for a in report.operators:
        rows.append((a.op_id, str(a.true_positives), str(a.false_positives), str(a.false_negatives),
                     f"{a.precision:.3f}", f"{a.recall:.3f}", f"{a.f1:.3f}"))
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows) + "\n"


@dataclass(frozen=True)
class EvalResult:
    report: AccuracyReport
    truth: GroundTruth
    findings: tuple[Finding, ...]
    mutated: tuple[RequirementsSpec, ...]
    defects: tuple[DefectSpec, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {
            "documents": [s.doc_id for s in self.mutated],
            "defects": [{"kind": d.kind.value, "count": d.count, "seed": d.seed} for d in self.defects],
            "injected": len(self.truth),
            "truth": [
                {"kind": t.defect_kind.value, "doc_id": t.doc_id, "req_ids": list(t.req_ids), "op_id": t.op_id}
                for t in self.truth
            ],
            "report": self.report.to_dict(),
        }


def run_evaluation(
    specs: Sequence[RequirementsSpec],
    defects: Sequence[DefectSpec],
    registry: OperatorRegistry | None = None,
    jobs: int = 1,
) -> EvalResult:
    """Inject defects into every document, run the targeted operators and score them."""
    registry = registry or default_registry()
    op_ids = sorted({TARGET_OP[d.kind] for d in defects if d.count > 0})
    truth: list[TruthEntry] = []
    mutated = []
    for spec in specs:
        m, t = inject_defects(spec, defects, registry)
        mutated.append(m)
        truth.extend(t)
    findings = lint(mutated, registry, op_ids, jobs=jobs) if op_ids else []
    return EvalResult(score(findings, truth, op_ids), tuple(truth), tuple(findings), tuple(mutated), tuple(defects))


# -- correlation ------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationMatrix:
    op_ids: tuple[str, ...]
    values: Mapping[tuple[str, str], float]
    undefined: tuple[str, ...] = ()

    def __getitem__(self, pair: tuple[str, str]) -> float:
        return self.values[pair]

    def get(self, a: str, b: str) -> float | None:
        return self.values.get((a, b))

    def to_dict(self) -> dict[str, Any]:
        return {
            "op_ids": list(self.op_ids),
            "matrix": [[round(self.values[(a, b)], 6) for b in self.op_ids] for a in self.op_ids],
            "undefined": list(self.undefined),
        }


def _pearson(x: Sequence[float], y: Sequence[float]) -> float:
    r = statistics.correlation(x, y)
    return max(-1.0, min(1.0, r))


def correlate_operators(
    findings: Iterable[Finding],
    specs: Sequence[RequirementsSpec],
    ops: Sequence[str],
    granularity: str = "requirement",
) -> CorrelationMatrix:
    """Pearson correlation of per-requirement (or per-document) finding counts.

    Operators whose counts never vary have no defined correlation and are
    listed in ``undefined`` instead of the matrix.
    """
    if granularity == "requirement":
        units = [(s.doc_id, r.req_id) for s in specs for r in s.requirements]
    elif granularity == "document":
        units = [(s.doc_id, "") for s in specs]
    else:
        raise ValueError(f"granularity must be 'requirement' or 'document', got {granularity!r}")
    if len(units) < 2:
        raise CorpusTooSmall(len(units))
    index = {u: i for i, u in enumerate(units)}
    counts = {op: [0] * len(units) for op in ops}
    for f in findings:
        if f.op_id not in counts:
            continue
        refs = [""] if granularity == "document" else list(dict.fromkeys(f.req_ids))
        for ref in refs:
            i = index.get((f.doc_id, ref))
            if i is not None:
                counts[f.op_id][i] += 1
    defined = [op for op in ops if len(set(counts[op])) > 1]
    undefined = tuple(op for op in ops if op not in defined)
    values = {}
    for a in defined:
        for b in defined:
            if a == b:
                values[(a, b)] = 1.0
            elif (b, a) in values:
                values[(a, b)] = values[(b, a)]
            else:
                values[(a, b)] = _pearson(counts[a], counts[b])
    return CorrelationMatrix(tuple(defined), values, undefined)
