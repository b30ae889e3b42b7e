from __future__ import annotations

import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rqa import corpus, evalharness, operators
from rqa.errors import ConfigError, CorpusTooSmall, InsufficientSites, NotClean
from rqa.evalharness import DefectKind, DefectSpec, TruthEntry
from rqa.operators import Finding, Severity, Span
from rqa.synth import generate_reqspec

from conftest import FIXTURES


@pytest.fixture(scope="module")
def clean50():
    return corpus.load_spec(FIXTURES / "corpus_50" / "clean_50.reqspec")


def finding(op_id, doc, *ids):
    return Finding(op_id, doc, tuple(ids), (Span(ids[0], 0, 1),), "m", "e", Severity.WARNING)


def truth(op_id, doc, *ids, kind=DefectKind.INSERT_AMBIGUOUS_ADVERB):
    return TruthEntry(kind, doc, tuple(ids), op_id)


# -- injection --------------------------------------------------------------


def test_zero_counts_leave_spec_unchanged(clean50):
    mutated, gt = evalharness.inject_defects(clean50, [DefectSpec(k, 0) for k in DefectKind])
    assert mutated == clean50 and gt == ()


def test_adverb_injection_seed_9(clean50):
    mutated, gt = evalharness.inject_defects(clean50, [DefectSpec(DefectKind.INSERT_AMBIGUOUS_ADVERB, 3, 9)])
    assert len(gt) == 3
    found = operators.op_ambiguous_adverbs(mutated)
    assert sorted(f.req_ids for f in found) == sorted(t.req_ids for t in gt)


def test_break_numbering_without_captions():
    s = corpus.parse_reqspec("[R1] The pump shall start.\n[R2] The pump shall stop.", "d")
    with pytest.raises(InsufficientSites):
        evalharness.inject_defects(s, [DefectSpec(DefectKind.BREAK_NUMBERING, 1)])


def test_not_clean():
    s = corpus.parse_reqspec("[R1] The pump shall start quickly.", "d")
    with pytest.raises(NotClean) as exc:
        evalharness.inject_defects(s, [DefectSpec(DefectKind.INSERT_AMBIGUOUS_ADVERB, 1)])
    assert exc.value.op_id == "op_ambiguous_adverbs"


def test_too_many_sites(clean50):
    with pytest.raises(InsufficientSites):
        evalharness.inject_defects(clean50, [DefectSpec(DefectKind.INSERT_DATE, 51)])


def test_negative_count():
    with pytest.raises(ConfigError):
        DefectSpec(DefectKind.INSERT_DATE, -1)


def test_injection_deterministic_and_seed_sensitive(clean50):
    defects = [DefectSpec(DefectKind.INSERT_DATE, 4, 1), DefectSpec(DefectKind.MERGE_REQUIREMENTS, 2, 1)]
    a = evalharness.inject_defects(clean50, defects)
    assert a == evalharness.inject_defects(clean50, defects)
    other = [DefectSpec(d.kind, d.count, 2) for d in defects]
    assert a[1] != evalharness.inject_defects(clean50, other)[1]


def test_each_site_mutated_once(clean50):
    defects = [DefectSpec(k, 3, 5) for k in (
        DefectKind.INSERT_AMBIGUOUS_ADVERB, DefectKind.INSERT_BARE_NUMERAL, DefectKind.INSERT_DATE,
        DefectKind.MERGE_REQUIREMENTS, DefectKind.DUPLICATE_REQUIREMENT,
    )]
    _, gt = evalharness.inject_defects(clean50, defects)
    ids = [i for t in gt for i in t.req_ids]
    assert len(ids) == len(set(ids)) == 3 * 4 + 3 * 2


def test_merge_and_duplicate_shapes(clean50):
    mutated, gt = evalharness.inject_defects(clean50, [DefectSpec(DefectKind.MERGE_REQUIREMENTS, 2, 3)])
    assert len(mutated.requirements) == 48
    merged = {r.req_id: r.text for r in mutated.requirements}[gt[0].req_ids[0]]
    assert " and " in merged and merged.count("shall") == 2
    mutated, gt = evalharness.inject_defects(clean50, [DefectSpec(DefectKind.DUPLICATE_REQUIREMENT, 2, 3)])
    assert len(mutated.requirements) == 52
    orig, copy = gt[0].req_ids
    assert copy.startswith(orig + "-D")
    ids = [r.req_id for r in mutated.requirements]
    assert ids.index(copy) == ids.index(orig) + 1


def test_swap_synonym_needs_terms(clean50):
    text = "\n".join(f"[R{i}] The operator shall confirm alarm {i}." for i in range(13, 20))
    s = corpus.parse_reqspec(text, "ops")
    mutated, gt = evalharness.inject_defects(s, [DefectSpec(DefectKind.SWAP_SYNONYM, 1, 4)])
    assert len(operators.op_term_consistency(mutated)) == 1
    with pytest.raises(InsufficientSites):
        evalharness.inject_defects(
            corpus.parse_reqspec("[R1] The pump shall start.", "p"), [DefectSpec(DefectKind.SWAP_SYNONYM, 1)]
        )


def test_defect_config_formats(tmp_path):
    specs = evalharness.load_defect_config(FIXTURES / "defects_deterministic.toml")
    assert [(d.kind, d.count, d.seed) for d in specs] == [
        (DefectKind.INSERT_AMBIGUOUS_ADVERB, 3, 9), (DefectKind.INSERT_BARE_NUMERAL, 3, 9),
        (DefectKind.INSERT_DATE, 3, 9), (DefectKind.BREAK_NUMBERING, 3, 9),
    ]
    j = tmp_path / "d.json"
    j.write_text(json.dumps({"defects": [{"kind": "InsertDate", "count": 2}]}))
    assert evalharness.load_defect_config(j) == [DefectSpec(DefectKind.INSERT_DATE, 2, 0)]
    j.write_text(json.dumps({"defects": [{"kind": "Nope"}]}))
    with pytest.raises(ConfigError):
        evalharness.load_defect_config(j)


# -- scoring ----------------------------------------------------------------


def test_score_perfect_detector():
    gt = [truth("op_a", "d", "R1"), truth("op_a", "d", "R2")]
    rep = evalharness.score([finding("op_a", "d", "R1"), finding("op_a", "d", "R2")], gt)
    assert (rep["op_a"].precision, rep["op_a"].recall) == (1.0, 1.0)


def test_score_vacuous_precision():
    gt = [truth("op_a", "d", f"R{i}") for i in range(4)]
    rep = evalharness.score([], gt)
    assert (rep["op_a"].precision, rep["op_a"].recall) == (1.0, 0.0)


def test_score_three_one_one():
    gt = [truth("op_a", "d", f"R{i}") for i in range(4)]
    found = [finding("op_a", "d", f"R{i}") for i in range(3)] + [finding("op_a", "d", "X")]
    a = evalharness.score(found, gt)["op_a"]
    assert (a.true_positives, a.false_positives, a.false_negatives) == (3, 1, 1)
    assert (a.precision, a.recall, a.f1) == (0.75, 0.75, 0.75)


def test_score_is_one_to_one_and_doc_scoped():
    gt = [truth("op_a", "d", "R1")]
    rep = evalharness.score([finding("op_a", "d", "R1"), finding("op_a", "d", "R1"), finding("op_a", "e", "R1")], gt)
    assert (rep["op_a"].true_positives, rep["op_a"].false_positives) == (1, 2)


@given(st.permutations(list(range(6))))
def test_score_permutation_invariant(order):
    gt = [truth("op_a", "d", f"R{i}") for i in range(4)] + [truth("op_b", "d", "R9")]
    found = [finding("op_a", "d", "R0"), finding("op_a", "d", "R1"), finding("op_a", "d", "R1"),
             finding("op_b", "d", "R9"), finding("op_b", "d", "R8"), finding("op_a", "d", "R3")]
    base = evalharness.score(found, gt)
    assert evalharness.score([found[i] for i in order], gt) == base


def test_report_round_trip_and_estimates():
    rep = evalharness.score([finding("op_a", "d", "R1")], [truth("op_a", "d", "R1"), truth("op_a", "d", "R2")])
    again = evalharness.AccuracyReport.from_dict(json.loads(json.dumps(rep.to_dict())))
    assert again == rep
    est = evalharness.load_accuracy_estimates(json.dumps({"report": rep.to_dict()}))
    assert est["op_a"].recall == 0.5 and est["op_a"].provenance.value == "Measured"


def test_run_evaluation_jobs_independent(clean50):
    docs = [clean50] + [corpus.parse_reqspec(generate_reqspec(24, s, figures=4, tables=2), f"g{s}") for s in (2, 3)]
    defects = evalharness.load_defect_config(FIXTURES / "defects_deterministic.toml")
    one = evalharness.run_evaluation(docs, defects, jobs=1)
    assert one == evalharness.run_evaluation(docs, defects, jobs=3)
    assert len(one.truth) == 36
    assert all(a.f1 == 1.0 for a in one.report.operators)


# -- correlation ------------------------------------------------------------


def two_req_spec():
    return corpus.parse_reqspec("[R1] a\n[R2] b", "d")


def test_correlation_examples():
    s = two_req_spec()
    f = [finding("op_a", "d", "R1"), finding("op_b", "d", "R2")]
    m = evalharness.correlate_operators(f, [s], ["op_a", "op_b", "op_c"])
    assert m[("op_a", "op_a")] == 1.0
    assert m[("op_a", "op_b")] == pytest.approx(-1.0)
    assert m.undefined == ("op_c",) and m.get("op_c", "op_a") is None
    assert m.to_dict()["op_ids"] == ["op_a", "op_b"]


def test_correlation_needs_two_units():
    with pytest.raises(CorpusTooSmall):
        evalharness.correlate_operators([], [corpus.parse_reqspec("[R1] a", "d")], ["op_a"])


def test_correlation_symmetric_and_bounded():
    rng = random.Random(2)
    s = corpus.parse_reqspec("\n".join(f"[R{i}] x" for i in range(30)), "d")
    f = [finding(op, "d", f"R{rng.randrange(30)}") for op in ("op_a", "op_b", "op_c") for _ in range(15)]
    m = evalharness.correlate_operators(f, [s], ["op_a", "op_b", "op_c"])
    for a in ("op_a", "op_b", "op_c"):
        for b in ("op_a", "op_b", "op_c"):
            assert m[(a, b)] == m[(b, a)]
            assert -1.0 <= m[(a, b)] <= 1.0
    doc_level = evalharness.correlate_operators(
        f, [s, corpus.parse_reqspec("[Z] y", "e")], ["op_a"], granularity="document"
    )
    assert doc_level.undefined == ()
