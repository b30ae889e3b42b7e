"""``rqa`` command line: lint, rank, plan, eval and explain.

Exit codes: 0 success (no violations for ``lint``), 1 violations found by
``lint``, 2 usage, input or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence, TextIO

from rqa import corpus, decision, evalharness, lingo, operators, taxonomy
from rqa.errors import RQAError
from rqa.operators import OperatorRegistry, Severity

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2
SPEC_SUFFIXES = (".reqspec", ".json", ".txt")

_GLOBAL_DEFAULTS = {
    "format": "text",
    "seed": 0,
    "config": None,
    "quality_model": None,
    "operators": None,
    "lexicon_dir": None,
    "jobs": 1,
}


class UsageError(RQAError):
    pass


def _add_global_flags(p: argparse.ArgumentParser) -> None:
    # SUPPRESS so flags given before or after the subcommand both survive
    s = argparse.SUPPRESS
    p.add_argument("--format", choices=("text", "json"), default=s, help="output format (default: text)")
    p.add_argument("--seed", type=int, default=s, help="seed added to every defect seed (default: 0)")
    p.add_argument("--config", default=s, metavar="PATH", help="operator config file (TOML or JSON)")
    p.add_argument("--quality-model", default=s, metavar="PATH", help="quality model file (default: seed model)")
    p.add_argument("--operators", default=s, metavar="IDS", help="comma-separated operator ids to enable")
    p.add_argument("--lexicon-dir", default=s, metavar="DIR", help="directory overriding the seed lexicons")
    p.add_argument("--jobs", type=int, default=s, metavar="N", help="worker threads (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rqa", description="Requirements quality assurance.")
    _add_global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lint", help="run operators over specification files")
    _add_global_flags(p)
    p.add_argument("specs", nargs="+", metavar="SPEC", help=".reqspec/.json files, directories, or - for stdin")

    p = sub.add_parser("rank", help="aggregate cumulative-voting ballots")
    _add_global_flags(p)
    p.add_argument("ballots", nargs="+", metavar="CSV", help="ballot files: voter_id,attribute_id,points")
    p.add_argument("--total", type=int, default=100, help="points per ballot (default: 100)")
    p.add_argument("--check-conflicts", action="store_true", help="report influence edges the ranking contradicts")
    p.add_argument("-k", "--band", type=int, default=5, dest="band", help="top/bottom band size (default: 5)")

    p = sub.add_parser("plan", help="build an automate-vs-manual QA plan")
    _add_global_flags(p)
    p.add_argument("ballots", nargs="+", metavar="CSV")
    p.add_argument("--budget", type=float, required=True, help="automation budget in complexity units")
    p.add_argument("--total", type=int, default=100)
    p.add_argument("--accuracy", metavar="JSON", help="accuracy report from 'rqa eval'")
    p.add_argument("--damping", type=float, default=0.5)
    p.add_argument("--manual-threshold", type=int, default=4, help="highest cognitive load done manually")

    p = sub.add_parser("eval", help="measure operator accuracy by defect injection")
    _add_global_flags(p)
    p.add_argument("corpus", metavar="DIR", help="directory of clean specification files")
    p.add_argument("--defects", required=True, metavar="PATH", help="defect config (TOML or JSON)")
    p.add_argument("--save-mutated", metavar="DIR", help="write the mutated documents as JSON")
    p.add_argument("--correlate", action="store_true", help="add the operator correlation matrix")

    p = sub.add_parser("explain", help="describe an operator")
    _add_global_flags(p)
    p.add_argument("op_id")
    return parser


def _registry(args: argparse.Namespace) -> OperatorRegistry:
    config: dict[str, Any] = {}
    base = None
    if args.config:
        config = operators.load_operator_config(args.config)
        base = Path(args.config).parent
    lexicon = lingo.load_lexicon(args.lexicon_dir) if args.lexicon_dir else None
    registry = operators.default_registry(config, lexicon, base)
    if args.operators:
        ids = [s.strip() for s in args.operators.split(",") if s.strip()]
        registry = registry.restrict(ids)
    return registry


def _model(args: argparse.Namespace) -> taxonomy.QualityModel:
    if args.quality_model:
        return taxonomy.load_quality_model_file(args.quality_model)
    return taxonomy.seed_quality_model()


def _spec_paths(items: Sequence[str]) -> list[Path]:
    out = []
    for item in items:
        p = Path(item)
        if p.is_dir():
            out += sorted(f for f in p.iterdir() if f.is_file() and f.suffix.lower() in SPEC_SUFFIXES)
        elif p.is_file():
            out.append(p)
        else:
            raise UsageError(f"no such file or directory: {item}")
    return out


def _load_specs(items: Sequence[str]) -> list[corpus.RequirementsSpec]:
    specs = []
    for item in items:
        if item == "-":
            specs.append(corpus.parse_reqspec(sys.stdin.read(), "stdin", "-"))
        else:
            specs += [corpus.load_spec(p) for p in _spec_paths([item])]
    seen: set[str] = set()
    for s in specs:
        if s.doc_id in seen:
            raise UsageError(f"two documents share doc_id {s.doc_id!r}")
        seen.add(s.doc_id)
    return specs


def _ballots(paths: Sequence[str]) -> list[taxonomy.Ballot]:
    out = []
    for path in paths:
        out += taxonomy.load_ballots_csv(Path(path).read_text(encoding="utf-8"))
    return out


def _json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


# -- commands ---------------------------------------------------------------


def cmd_lint(args: argparse.Namespace, out: TextIO) -> int:
    registry = _registry(args)
    specs = _load_specs(args.specs)
    findings = operators.lint(specs, registry, jobs=args.jobs)
    sources = {s.doc_id: s.source_path or s.doc_id for s in specs}
    if args.format == "json":
        for f in findings:
            out.write(json.dumps(f.to_dict(), ensure_ascii=False) + "\n")
    else:
        for f in findings:
            sp = f.spans[0]
            out.write(
                f"{sources[f.doc_id]}:{sp.ref}:{sp.start}-{sp.end}: {f.severity.value} "
                f"[{f.op_id}] {f.message}\n"
            )
    violations = sum(1 for f in findings if f.severity is Severity.VIOLATION)
    print(f"{len(findings)} finding(s), {violations} violation(s) in {len(specs)} document(s)", file=sys.stderr)
    return EXIT_VIOLATIONS if violations else EXIT_OK


def cmd_rank(args: argparse.Namespace, out: TextIO) -> int:
    ballots = _ballots(args.ballots)
    model = _model(args)
    attributes = None
    if args.quality_model:
        taxonomy.validate_ballots(ballots, model)
        attributes = model.attribute_ids
    ranking = taxonomy.aggregate_votes(ballots, args.total, attributes)
    conflicts = taxonomy.detect_ranking_conflicts(ranking, model, args.band) if args.check_conflicts else None
    if args.format == "json":
        doc: dict[str, Any] = {
            "ranking": [{"attribute_id": e.attribute_id, "points": e.points, "position": e.position} for e in ranking]
        }
        if conflicts is not None:
            doc["conflicts"] = [
                {"source": c.source, "target": c.target, "sign": c.sign.value,
                 "source_position": c.source_position, "target_position": c.target_position}
                for c in conflicts
            ]
        out.write(_json(doc))
        return EXIT_OK
    width = max([len("attribute")] + [len(e.attribute_id) for e in ranking])
    out.write(f"{'pos':>3}  {'attribute'.ljust(width)}  points\n")
    for e in ranking:
        out.write(f"{e.position:>3}  {e.attribute_id.ljust(width)}  {e.points:g}\n")
    if conflicts is not None:
        out.write(f"\nconflicts (top/bottom {args.band}): {len(conflicts)}\n")
        for c in conflicts:
            out.write(f"  {c.source}->{c.sign.value}{c.target}: {c.describe()}\n")
    return EXIT_OK


def cmd_plan(args: argparse.Namespace, out: TextIO) -> int:
    registry = _registry(args)
    model = _model(args)
    ballots = _ballots(args.ballots)
    taxonomy.validate_ballots(ballots, model)
    ranking = taxonomy.aggregate_votes(ballots, args.total, model.attribute_ids)
    accuracy = None
    if args.accuracy:
        accuracy = evalharness.load_accuracy_estimates(Path(args.accuracy).read_text(encoding="utf-8"))
    cfg = decision.PlanConfig(damping=args.damping, manual_load_threshold=args.manual_threshold)
    plan = decision.build_plan(registry.catalog(), ranking, model, args.budget, accuracy, cfg)
    if args.format == "json":
        out.write(_json(plan.to_dict()))
    else:
        out.write(decision.format_plan(plan))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, out: TextIO) -> int:
    registry = _registry(args)
    corpus_dir = Path(args.corpus)
    if not corpus_dir.is_dir():
        raise UsageError(f"corpus must be a directory: {args.corpus}")
    specs = _load_specs([args.corpus])
    defects = [
        evalharness.DefectSpec(d.kind, d.count, d.seed + args.seed)
        for d in evalharness.load_defect_config(args.defects)
    ]
    result = evalharness.run_evaluation(specs, defects, registry, jobs=args.jobs)
    correlation = None
    if args.correlate:
        ops = [d.op_id for d in registry.catalog()]
        findings = operators.lint(list(result.mutated), registry, jobs=args.jobs)
        correlation = evalharness.correlate_operators(findings, result.mutated, ops)
    if args.save_mutated:
        target = Path(args.save_mutated)
        target.mkdir(parents=True, exist_ok=True)
        for spec in result.mutated:
            (target / f"{spec.doc_id}.json").write_text(corpus.dump_reqspec_json(spec), encoding="utf-8")
    if args.format == "json":
        doc = result.to_dict()
        if correlation is not None:
            doc["correlation"] = correlation.to_dict()
        out.write(_json(doc))
    else:
        out.write(f"{len(specs)} document(s), {len(result.truth)} injected defect(s)\n")
        out.write(evalharness.format_report(result.report))
        if correlation is not None:
            out.write("\ncorrelation (per requirement)\n")
            for a in correlation.op_ids:
                cells = " ".join(f"{correlation[(a, b)]:+.2f}" for b in correlation.op_ids)
                out.write(f"  {a}: {cells}\n")
            if correlation.undefined:
                out.write(f"  undefined (no variance): {', '.join(correlation.undefined)}\n")
    return EXIT_OK


def cmd_explain(args: argparse.Namespace, out: TextIO) -> int:
    registry = _registry(args)
    desc = registry.descriptor(args.op_id)
    load = decision.score_cognitive_load(desc)
    complexity = decision.score_automation_complexity(desc)
    model = _model(args)
    attr = next((a for a in model.attributes if a.id == desc.attribute_id), None)
    if args.format == "json":
        out.write(_json({
            "op_id": desc.op_id,
            "name": desc.name,
            "attribute_id": desc.attribute_id,
            "context_scope": desc.context_scope.value,
            "linguistic_level": desc.linguistic_level.value,
            "needs_domain_knowledge": desc.needs_domain_knowledge,
            "cognitive_load": load.value,
            "automation_complexity": complexity.value,
            "config": {k: v for k, v in sorted(desc.config.items())},
            "description": desc.description,
        }))
        return EXIT_OK
    lines = [
        f"{desc.op_id}: {desc.name}",
        f"  {desc.description}" if desc.description else None,
        f"  attribute:              {desc.attribute_id or 'none'}" + (f" ({attr.name})" if attr else ""),
        f"  context scope:          {desc.context_scope.value}",
        f"  linguistic level:       {desc.linguistic_level.value}",
        f"  needs domain knowledge: {'yes' if desc.needs_domain_knowledge else 'no'}",
        f"  cognitive load:         {load.value}",
        f"  automation complexity:  {complexity.value}",
        "  config keys:            " + (", ".join(sorted(desc.config)) or "none"),
    ]
    out.write("\n".join(line for line in lines if line is not None) + "\n")
    return EXIT_OK


COMMANDS = {"lint": cmd_lint, "rank": cmd_rank, "plan": cmd_plan, "eval": cmd_eval, "explain": cmd_explain}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    out = out or sys.stdout
    try:
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        return COMMANDS[args.command](args, out)
    except (RQAError, OSError, ValueError) as exc:
        print(f"rqa {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
