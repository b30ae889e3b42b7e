from __future__ import annotations

import io
import json
import sys
from pathlib import Path

import pytest

from rqa import cli
from rqa.operators import ContextScope, LinguisticLevel, OperatorDescriptor
from rqa.taxonomy import Ballot, InfluenceEdge, QualityAttribute, QualityModel, Sign, aggregate_votes

FIXTURES = Path(__file__).parent / "fixtures"
SCHEMAS = Path(__file__).resolve().parent.parent / "src" / "rqa" / "schemas"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def run_cli(*argv: str, stdin: str | None = None) -> tuple[int, str, str]:
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    old_err, old_in = sys.stderr, sys.stdin
    sys.stderr = err
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        try:
            code = cli.main([str(a) for a in argv], out=out)
        except SystemExit as exc:  # argparse usage errors
            code = exc.code
    finally:
        sys.stderr, sys.stdin = old_err, old_in
    return code, out.getvalue(), err.getvalue()


def load_plan_fixture(name: str):
    """(catalog, ranking, model) from a tests/fixtures/plans JSON file."""
    data = json.loads((FIXTURES / "plans" / f"{name}.json").read_text())
    model = QualityModel(
        tuple(QualityAttribute(a["id"], a["id"]) for a in data["attributes"]),
        tuple(InfluenceEdge(e["source"], e["target"], Sign(e["sign"])) for e in data["edges"]),
    )
    points = {a["id"]: a["points"] for a in data["attributes"]}
    ranking = aggregate_votes([Ballot("v", points)], total=sum(points.values()))
    catalog = [
        OperatorDescriptor(
            o["op_id"], o["op_id"], o["attribute_id"], ContextScope(o["context_scope"]),
            LinguisticLevel(o["linguistic_level"]), o["needs_domain_knowledge"], {}, "",
        )
        for o in data["operators"]
    ]
    return catalog, ranking, model


def schema(name: str) -> dict:
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())
