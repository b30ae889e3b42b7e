from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rqa import taxonomy
from rqa.errors import (
    BadBallotSum, BallotError, DuplicateAttribute, DuplicateEdge, ModelError, NoBallots, SelfLoop,
    UnknownAttribute,
)
from rqa.taxonomy import Ballot, InfluenceEdge, QualityAttribute, QualityModel, Sign

from conftest import FIXTURES

SEED_EDGES = {
    ("atomic", "+", "design_independent"),
    ("atomic", "+", "traceable"),
    ("atomic", "+", "precise"),
    ("unambiguous", "-", "understandable"),
    ("design_independent", "+", "verifiable"),
}


def model_of(ids, edges=()):
    return QualityModel(
        tuple(QualityAttribute(a, a) for a in ids),
        tuple(InfluenceEdge(s, t, Sign(g)) for s, g, t in edges),
    )


def oracle_ranking(ballots):
    totals = {}
    for b in ballots:
        for k, v in b.points.items():
            totals[k] = totals.get(k, 0) + v
    order = sorted(totals, key=lambda k: (-totals[k], k))
    return [(k, totals[k], i + 1) for i, k in enumerate(order)]


def as_tuples(ranking):
    return [(e.attribute_id, e.points, e.position) for e in ranking]


def random_ballots(rng, voters, attrs, total=100):
    out = []
    for v in range(voters):
        cuts = sorted(rng.randint(0, total) for _ in range(len(attrs) - 1))
        pts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        out.append(Ballot(f"v{v}", dict(zip(attrs, pts))))
    return out


# -- model loading ----------------------------------------------------------


def test_seed_model_contents():
    m = taxonomy.seed_quality_model()
    assert len(m.attributes) == 12
    assert {(e.source, e.sign.value, e.target) for e in m.edges} == SEED_EDGES
    assert "atomic" in m and "nonexistent" not in m


def test_self_loop():
    with pytest.raises(SelfLoop):
        taxonomy.load_quality_model('[[attribute]]\nid="x"\n[[edge]]\nsource="x"\ntarget="x"\nsign="+"\n')


def test_empty_model():
    m = taxonomy.load_quality_model("")
    assert m.attributes == () and m.edges == ()


@pytest.mark.parametrize(
    "text, error",
    [
        ('[[attribute]]\nid="a"\n[[attribute]]\nid="a"\n', DuplicateAttribute),
        ('[[attribute]]\nid="a"\n[[edge]]\nsource="a"\ntarget="b"\nsign="+"\n', UnknownAttribute),
        ('[[attribute]]\nid="a"\n[[attribute]]\nid="b"\n'
         '[[edge]]\nsource="a"\ntarget="b"\nsign="+"\n[[edge]]\nsource="a"\ntarget="b"\nsign="-"\n', DuplicateEdge),
        ('[[attribute]]\nid="a"\n[[attribute]]\nid="b"\n[[edge]]\nsource="a"\ntarget="b"\nsign="*"\n', ModelError),
        ('[[goal]]\nid="g"\nattributes=["zz"]\n', UnknownAttribute),
        ("not = [valid", ModelError),
    ],
)
def test_model_errors(text, error):
    with pytest.raises(error):
        taxonomy.load_quality_model(text)


def test_json_model_and_cycles_allowed():
    m = taxonomy.load_quality_model(
        '{"attributes":[{"id":"a"},{"id":"b"}],'
        '"edges":[{"source":"a","target":"b","sign":"+"},{"source":"b","target":"a","sign":"-"}],'
        '"goals":[{"id":"g","attributes":["a"]}]}'
    )
    assert len(m.edges) == 2 and m.goals[0].attribute_ids == ("a",)


def test_fixture_model_has_24_attributes():
    m = taxonomy.load_quality_model_file(FIXTURES / "model_24.toml")
    assert len(m.attributes) == 24
    assert SEED_EDGES <= {(e.source, e.sign.value, e.target) for e in m.edges}


# -- voting -----------------------------------------------------------------


def test_single_ballot():
    r = taxonomy.aggregate_votes([Ballot("v", {"verifiable": 60, "complete": 40})])
    assert r.order() == ["verifiable", "complete"]


def test_tie_broken_by_id():
    r = taxonomy.aggregate_votes([Ballot("1", {"b": 50, "a": 50}), Ballot("2", {"a": 50, "b": 50})])
    assert [(e.attribute_id, e.position) for e in r] == [("a", 1), ("b", 2)]


def test_three_random_ballots_seed_7():
    ballots = random_ballots(random.Random(7), 3, list("abcdefgh"))
    assert as_tuples(taxonomy.aggregate_votes(ballots)) == oracle_ranking(ballots)


def test_zero_point_attributes_ranked_last():
    r = taxonomy.aggregate_votes([Ballot("v", {"b": 100})], attributes=["a", "b", "c"])
    assert as_tuples(r) == [("b", 100, 1), ("a", 0, 2), ("c", 0, 3)]


def test_ballot_errors():
    with pytest.raises(NoBallots):
        taxonomy.aggregate_votes([])
    with pytest.raises(BadBallotSum) as exc:
        taxonomy.aggregate_votes([Ballot("v9", {"a": 90})])
    assert (exc.value.voter_id, exc.value.actual) == ("v9", 90)
    with pytest.raises(BallotError):
        taxonomy.aggregate_votes([Ballot("v", {"a": 110, "b": -10})])
    assert taxonomy.aggregate_votes([Ballot("v", {"a": 7})], total=7).order() == ["a"]


def test_ballot_csv():
    text = "voter_id,attribute_id,points\nv1,a,60\nv1,b,40\n\nv2,a,100\n"
    ballots = taxonomy.load_ballots_csv(text)
    assert [(b.voter_id, dict(b.points)) for b in ballots] == [("v1", {"a": 60, "b": 40}), ("v2", {"a": 100})]
    assert taxonomy.load_ballots_csv("v1,a,100\n")[0].points == {"a": 100}
    for bad in ("v1,a\n", "v1,a,x\n", "v1,a,50\nv1,a,50\n"):
        with pytest.raises(BallotError):
            taxonomy.load_ballots_csv(bad)


def test_validate_ballots():
    m = model_of(["a"])
    taxonomy.validate_ballots([Ballot("v", {"a": 100})], m)
    with pytest.raises(UnknownAttribute):
        taxonomy.validate_ballots([Ballot("v", {"z": 100})], m)


ATTRS = [f"q{i:02d}" for i in range(10)]


@st.composite
def ballot_sets(draw, total=100):
    n = draw(st.integers(1, 6))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return random_ballots(rng, n, ATTRS, total)


@given(ballot_sets(), st.randoms())
def test_votes_permutation_invariant(ballots, rnd):
    base = taxonomy.aggregate_votes(ballots)
    shuffled = [Ballot(b.voter_id, dict(sorted(b.points.items(), key=lambda _: rnd.random()))) for b in ballots]
    rnd.shuffle(shuffled)
    assert taxonomy.aggregate_votes(shuffled) == base
    assert as_tuples(base) == oracle_ranking(ballots)


@given(ballot_sets(), st.integers(2, 10))
def test_votes_scaling_keeps_order(ballots, factor):
    scaled = [Ballot(b.voter_id, {k: v * factor for k, v in b.points.items()}) for b in ballots]
    assert taxonomy.aggregate_votes(scaled, total=100 * factor).order() == taxonomy.aggregate_votes(ballots).order()


# -- effective weights and conflicts ---------------------------------------


def test_effective_weights_examples():
    r = taxonomy.aggregate_votes([Ballot("v", {"a": 10, "b": 30, "c": 60})])
    assert taxonomy.effective_weights(r, model_of("abc")) == {"a": 10, "b": 30, "c": 60}
    m = model_of("abc", [("a", "+", "b")])
    assert taxonomy.effective_weights(r, m)["a"] == 25
    assert taxonomy.effective_weights(r, m, damping=0) == {"a": 10, "b": 30, "c": 60}


def test_effective_weights_negative_floor():
    r = taxonomy.aggregate_votes([Ballot("v", {"a": 10, "b": 90})])
    assert taxonomy.effective_weights(r, model_of("ab", [("a", "-", "b")]))["a"] == 0.0


def test_effective_weights_transitive_opt_in():
    r = taxonomy.aggregate_votes([Ballot("v", {"a": 10, "b": 20, "c": 40, "d": 30})])
    m = model_of("abcd", [("a", "+", "b"), ("b", "-", "c"), ("c", "+", "a")])
    one = taxonomy.effective_weights(r, m)
    assert one["a"] == 10 + 0.5 * 20
    two = taxonomy.effective_weights(r, m, max_hops=2)
    assert two["a"] == 10 + 0.5 * 20 - 0.25 * 40
    # the cycle back to "a" is never followed
    assert taxonomy.effective_weights(r, m, max_hops=5) == two
    with pytest.raises(ValueError):
        taxonomy.effective_weights(r, m, damping=1.5)


def test_conflict_examples():
    m = taxonomy.load_quality_model_file(FIXTURES / "model_24.toml")
    ballots = taxonomy.load_ballots_csv((FIXTURES / "ballots_24.csv").read_text())
    r = taxonomy.aggregate_votes(ballots, attributes=m.attribute_ids)
    assert r.position("verifiable") == 3 and r.position("design_independent") == 21
    conflicts = taxonomy.detect_ranking_conflicts(r, m)
    assert [(c.source, c.target, c.sign, c.source_position, c.target_position) for c in conflicts] == [
        ("design_independent", "verifiable", Sign.POSITIVE, 21, 3)
    ]
    assert "design_independent" in conflicts[0].describe()
    every = taxonomy.detect_ranking_conflicts(r, m, k=len(r))
    assert len(every) == sum(1 for e in m.edges if e.sign is Sign.POSITIVE)


def test_no_conflict_when_sources_rank_high():
    r = taxonomy.aggregate_votes([Ballot("v", {"a": 60, "b": 40})])
    assert taxonomy.detect_ranking_conflicts(r, model_of("ab", [("a", "+", "b")]), k=1) == []
    with pytest.raises(ValueError):
        taxonomy.detect_ranking_conflicts(r, model_of("ab"), k=0)


@settings(max_examples=50)
@given(ballot_sets(), st.integers(0, 2**16), st.integers(1, 10), st.integers(1, 10))
def test_conflicts_monotone_in_k(ballots, edge_seed, k1, k2):
    k1, k2 = sorted((k1, k2))
    rng = random.Random(edge_seed)
    pairs = rng.sample([(a, b) for a in ATTRS for b in ATTRS if a != b], 12)
    m = model_of(ATTRS, [(a, rng.choice("+-"), b) for a, b in pairs])
    r = taxonomy.aggregate_votes(ballots, attributes=ATTRS)
    small = set(taxonomy.detect_ranking_conflicts(r, m, k1))
    assert small <= set(taxonomy.detect_ranking_conflicts(r, m, k2))
