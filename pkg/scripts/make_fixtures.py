#!/usr/bin/env python3
"""Regenerate the committed test fixtures under tests/fixtures.

Run from the repository root:  python3 scripts/make_fixtures.py
Output is deterministic; re-running it must leave git clean.
"""
from __future__ import annotations

import json
import random
from pathlib import Path

from rqa.synth import generate_reqspec

ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# Twelve extra attributes configured for the 24-attribute ballot fixture.
# These are user configuration, not part of the seed model.
EXTRA_ATTRIBUTES = [
    ("feasible", "Feasible"), ("necessary", "Necessary"), ("prioritized", "Prioritized"),
    ("modifiable", "Modifiable"), ("compliant", "Compliant"), ("stable", "Stable"),
    ("concise", "Concise"), ("measurable", "Measurable"), ("annotated", "Annotated"),
    ("bounded", "Bounded"), ("reusable", "Reusable"), ("well_formed", "Well formed"),
]
EXTRA_EDGES = [
    ("measurable", "+", "verifiable"),
    ("modifiable", "+", "reusable"),
    ("concise", "+", "understandable"),
    ("bounded", "-", "feasible"),
]

# Intended aggregate order for the ballot fixture (position 1 first).
BALLOT_ORDER = [
    "correct", "complete", "verifiable", "feasible", "necessary", "understandable",
    "traceable", "precise", "atomic", "measurable", "prioritized", "stable",
    "unambiguous", "modifiable", "compliant", "consistent", "organized", "concise",
    "non_redundant", "annotated", "design_independent", "bounded", "reusable", "well_formed",
]
VOTERS = 6


def _write(name: str, text: str) -> None:
    path = ROOT / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def model_24() -> str:
    seed = (Path(__file__).resolve().parent.parent / "src" / "rqa" / "data" / "seed_model.toml").read_text()
    lines = ["# 24-attribute model: the seed model plus twelve configured attributes.", ""]
    lines.append(seed.split("\n", 2)[2].lstrip("\n").rstrip() + "\n")
    for aid, name in EXTRA_ATTRIBUTES:
        lines += ["[[attribute]]", f'id = "{aid}"', f'name = "{name}"', ""]
    for src, sign, dst in EXTRA_EDGES:
        lines += ["[[edge]]", f'source = "{src}"', f'sign = "{sign}"', f'target = "{dst}"', ""]
    return "\n".join(lines)


def ballots_24(seed: int = 24) -> str:
    """Six ballots of 100 points whose column totals are 48, 46, ..., 2 in BALLOT_ORDER."""
    rng = random.Random(seed)
    totals = [2 * (len(BALLOT_ORDER) - i) for i in range(len(BALLOT_ORDER))]
    grid = []
    for t in totals:
        cuts = sorted(rng.randint(0, t) for _ in range(VOTERS - 1))
        grid.append([b - a for a, b in zip([0] + cuts, cuts + [t])])
    # move single points within a row until every voter spends exactly 100
    while True:
        sums = [sum(row[v] for row in grid) for v in range(VOTERS)]
        over = [v for v in range(VOTERS) if sums[v] > 100]
        if not over:
            break
        under = [v for v in range(VOTERS) if sums[v] < 100]
        src, dst = rng.choice(over), rng.choice(under)
        row = grid[rng.choice([i for i, r in enumerate(grid) if r[src] > 0])]
        row[src] -= 1
        row[dst] += 1
    lines = ["voter_id,attribute_id,points"]
    for v in range(VOTERS):
        for i, aid in enumerate(BALLOT_ORDER):
            if grid[i][v]:
                lines.append(f"v{v + 1},{aid},{grid[i][v]}")
    return "\n".join(lines) + "\n"


# Plan fixtures. Ordered by automation cost, priority never increases, so
# taking the densest prefix is also the best subset at every budget.
PLAN_FIXTURES = {
    "plan_3ops": {
        "attributes": [("alpha", 50), ("beta", 30), ("gamma", 20)],
        "edges": [],
        "operators": [
            ("op_alpha", "alpha", "Local", "Statistical", False),
            ("op_beta", "beta", "Regional", "Lexical", False),
            ("op_gamma", "gamma", "Global", "Syntactic", True),
        ],
    },
    "plan_7ops": {
        "attributes": [("organized", 40), ("non_redundant", 30), ("unambiguous", 20), ("atomic", 10)],
        "edges": [],
        "operators": [
            ("op_numbering", "organized", "Global", "Statistical", False),
            ("op_redundancy", "non_redundant", "Global", "Statistical", False),
            ("op_time_refs", "non_redundant", "Global", "Lexical", False),
            ("op_ambiguous_adverbs", "unambiguous", "Local", "Lexical", False),
            ("op_term_consistency", "unambiguous", "Global", "Lexical", False),
            ("op_bare_numerals", "unambiguous", "Local", "Syntactic", False),
            ("op_atomicity", "atomic", "Local", "Syntactic", False),
        ],
    },
    "plan_10ops": {
        "attributes": [(f"q{i}", p) for i, p in enumerate([19, 17, 15, 13, 11, 9, 7, 5, 3, 1])],
        "edges": [("q8", "+", "q9"), ("q4", "-", "q9")],
        "operators": [
            ("op_q0", "q0", "Local", "Statistical", False),
            ("op_q1", "q1", "Regional", "Statistical", False),
            ("op_q2", "q2", "Global", "Statistical", False),
            ("op_q3", "q3", "Local", "Lexical", False),
            ("op_q4", "q4", "Global", "Lexical", True),
            ("op_q5", "q5", "Local", "Syntactic", False),
            ("op_q6", "q6", "Regional", "Syntactic", True),
            ("op_q7", "q7", "Global", "Syntactic", False),
            ("op_q8", "q8", "Local", "Semantic", True),
            ("op_q9", "q9", "Global", "Semantic", True),
        ],
    },
}


def plan_fixture(name: str) -> str:
    fx = PLAN_FIXTURES[name]
    doc = {
        "attributes": [{"id": a, "points": p} for a, p in fx["attributes"]],
        "edges": [{"source": s, "sign": g, "target": t} for s, g, t in fx["edges"]],
        "operators": [
            {"op_id": o, "attribute_id": a, "context_scope": sc, "linguistic_level": lv, "needs_domain_knowledge": dk}
            for o, a, sc, lv, dk in fx["operators"]
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def main() -> None:
    for name in PLAN_FIXTURES:
        _write(f"plans/{name}.json", plan_fixture(name))
    _write("corpus_50/clean_50.reqspec", generate_reqspec(50, 1, title="Clean signalling requirements", figures=8, tables=4))
    for i, seed in enumerate(range(2, 7), start=1):
        _write(
            f"merge_corpus/doc_{i}.reqspec",
            generate_reqspec(24, seed, title=f"Merge suite document {i}", figures=4, tables=2, prefix=f"M{i}"),
        )
    _write(
        "defects_deterministic.toml",
        "".join(
            f'[[defect]]\nkind = "{k}"\ncount = 3\nseed = 9\n\n'
            for k in ("InsertAmbiguousAdverb", "InsertBareNumeral", "InsertDate", "BreakNumbering")
        ).rstrip() + "\n",
    )
    _write("defects_merge.toml", '[[defect]]\nkind = "MergeRequirements"\ncount = 4\nseed = 11\n')
    # the 7-op plan fixture as CLI inputs (model + one ballot) for the built-in catalog
    fx = PLAN_FIXTURES["plan_7ops"]
    _write("plan_7ops_model.toml", "".join(f'[[attribute]]\nid = "{a}"\nname = "{a}"\n\n' for a, _ in fx["attributes"]).rstrip() + "\n")
    _write("plan_7ops_ballots.csv", "voter_id,attribute_id,points\n" + "".join(f"v1,{a},{p}\n" for a, p in fx["attributes"]))
    _write("model_24.toml", model_24())
    _write("ballots_24.csv", ballots_24())


if __name__ == "__main__":
    main()
