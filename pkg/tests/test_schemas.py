from __future__ import annotations

import json

import jsonschema
import pytest

from rqa import corpus
from rqa.synth import generate_reqspec

from conftest import FIXTURES, SCHEMAS, run_cli, schema


def validate(doc, name):
    jsonschema.Draft202012Validator(schema(name)).validate(doc)


@pytest.mark.parametrize("path", sorted(SCHEMAS.glob("*.schema.json")), ids=lambda p: p.stem)
def test_schemas_are_valid(path):
    jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_lint_findings(tmp_path):
    p = tmp_path / "dirty.reqspec"
    p.write_text(
        "# 1 Power\nTable 2: Loads\n[P-1] The unit shall respond quickly within 5 seconds.\n"
        "[P-2] The unit shall log faults and the unit shall raise alarms.\n"
        "[P-3] The unit shall log faults and the unit shall raise alarms.\n"
    )
    _, out, _ = run_cli("--format", "json", "lint", p)
    rows = [json.loads(line) for line in out.splitlines()]
    assert len({r["op_id"] for r in rows}) >= 4
    for row in rows:
        validate(row, "finding")


def test_rank_output():
    _, out, _ = run_cli("--format", "json", "--quality-model", FIXTURES / "model_24.toml",
                        "rank", FIXTURES / "ballots_24.csv", "--check-conflicts")
    validate(json.loads(out), "ranking")


def test_plan_output():
    _, out, _ = run_cli("--format", "json", "--quality-model", FIXTURES / "plan_7ops_model.toml",
                        "plan", FIXTURES / "plan_7ops_ballots.csv", "--budget", "6")
    validate(json.loads(out), "plan")


def test_eval_output():
    _, out, _ = run_cli("--format", "json", "eval", FIXTURES / "corpus_50",
                        "--defects", FIXTURES / "defects_deterministic.toml", "--correlate")
    validate(json.loads(out), "eval")


def test_reqspec_dump():
    s = corpus.parse_reqspec(generate_reqspec(20, 3, figures=2, tables=1), "g")
    validate(corpus.to_dict(s), "reqspec")


def test_schema_rejects_bad_finding():
    with pytest.raises(jsonschema.ValidationError):
        validate({"op_id": "x", "doc_id": "d", "req_ids": [], "span": [], "message": "",
                  "evidence": "", "severity": "Fatal"}, "finding")
