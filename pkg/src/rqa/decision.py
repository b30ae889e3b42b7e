"""Automate-vs-manual planning over the operator catalog.

Operators are scored for the human effort of applying them (cognitive load)
and the effort of implementing them (automation complexity), weighted by the
priority of the attribute they serve, and assigned to automated, manual or
skipped execution under an automation budget.
"""
from __future__ import annotations

import enum
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from rqa.errors import UnknownAttribute
from rqa.operators import ContextScope, LinguisticLevel, OperatorDescriptor
from rqa.taxonomy import QualityModel, Ranking, effective_weights

SCOPE_POINTS = {ContextScope.LOCAL: 1, ContextScope.REGIONAL: 2, ContextScope.GLOBAL: 3}
LEVEL_COST = {
    LinguisticLevel.STATISTICAL: 1,
    LinguisticLevel.LEXICAL: 2,
    LinguisticLevel.SYNTACTIC: 3,
    LinguisticLevel.SEMANTIC: 4,
}


class Provenance(str, enum.Enum):
    MEASURED = "Measured"
    ASSUMED = "Assumed"


class Decision(str, enum.Enum):
    AUTOMATE = "Automate"
    MANUAL = "Manual"
    SKIP = "Skip"


@dataclass(frozen=True)
class CognitiveLoadScore:
    value: int
    domain_knowledge: bool
    scope: ContextScope


@dataclass(frozen=True)
class AutomationComplexity:
    value: int
    level: LinguisticLevel


@dataclass(frozen=True)
class AccuracyEstimate:
    precision: float
    recall: float
    provenance: Provenance = Provenance.ASSUMED

    @property
    def f1(self) -> float:
        if self.precision + self.recall == 0:
            return 0.0
        return 2 * self.precision * self.recall / (self.precision + self.recall)


@dataclass(frozen=True)
class PlanConfig:
    """Heuristic knobs; the defaults are the documented scoring rules."""

    damping: float = 0.5
    max_hops: int = 1
    manual_load_threshold: int = 4
    assumed_precision: float = 0.75
    assumed_recall: float = 0.75
    domain_knowledge_points: int = 3
    scope_points: Mapping[ContextScope, int] = field(default_factory=lambda: dict(SCOPE_POINTS))
    level_cost: Mapping[LinguisticLevel, int] = field(default_factory=lambda: dict(LEVEL_COST))


@dataclass(frozen=True)
class PlanItem:
    op_id: str
    decision: Decision
    priority_score: float
    cost: int
    load: int
    rationale: str
    accuracy: AccuracyEstimate | None = None


@dataclass(frozen=True)
class QAPlan:
    items: tuple[PlanItem, ...]
    budget: float
    budget_used: float

    def automated(self) -> list[str]:
        return [i.op_id for i in self.items if i.decision is Decision.AUTOMATE]

    def decision(self, op_id: str) -> Decision:
        for item in self.items:
            if item.op_id == op_id:
                return item.decision
        raise KeyError(op_id)

    def to_dict(self) -> dict:
        return {
            "items": [
                {
                    "op_id": i.op_id,
                    "decision": i.decision.value,
                    "priority_score": round(i.priority_score, 6),
                    "cost": i.cost,
                    "load": i.load,
                    "rationale": i.rationale,
                    "accuracy": None if i.accuracy is None else {
                        "precision": round(i.accuracy.precision, 6),
                        "recall": round(i.accuracy.recall, 6),
                        "f1": round(i.accuracy.f1, 6),
                        "provenance": i.accuracy.provenance.value,
                    },
                }
                for i in self.items
            ],
            "budget": self.budget,
            "budget_used": self.budget_used,
        }


def score_cognitive_load(desc: OperatorDescriptor, config: PlanConfig | None = None) -> CognitiveLoadScore:
    cfg = config or PlanConfig()
    value = cfg.scope_points[desc.context_scope]
    if desc.needs_domain_knowledge:
        value += cfg.domain_knowledge_points
    return CognitiveLoadScore(value, desc.needs_domain_knowledge, desc.context_scope)


def score_automation_complexity(
    desc: OperatorDescriptor | LinguisticLevel, config: PlanConfig | None = None
) -> AutomationComplexity:
    cfg = config or PlanConfig()
    level = desc if isinstance(desc, LinguisticLevel) else desc.linguistic_level
    return AutomationComplexity(cfg.level_cost[level], level)


def build_plan(
    catalog: Sequence[OperatorDescriptor],
    ranking: Ranking,
    model: QualityModel,
    budget: float,
    accuracy: Mapping[str, AccuracyEstimate] | None = None,
    config: PlanConfig | None = None,
) -> QAPlan:
    """Assign each operator to Automate, Manual or Skip.

    Operators are taken in order of priority per unit of automation cost
    (ties by op id) and automated while the next one still fits the budget;
    the first that does not fit ends automation, which keeps plans monotone in
    the budget. The rest are Manual when their cognitive load stays within the
    threshold and Skip otherwise.
    """
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    cfg = config or PlanConfig()
    accuracy = accuracy or {}
    known = set(model.attribute_ids)
    for desc in catalog:
        if desc.attribute_id is not None and desc.attribute_id not in known:
            raise UnknownAttribute(desc.attribute_id)
    weights = effective_weights(ranking, model, cfg.damping, cfg.max_hops)
    assumed = AccuracyEstimate(cfg.assumed_precision, cfg.assumed_recall, Provenance.ASSUMED)

    scored = []
    for desc in catalog:
        load = score_cognitive_load(desc, cfg)
        cost = score_automation_complexity(desc, cfg).value
        est = accuracy.get(desc.op_id, assumed)
        if desc.attribute_id is None:
            scored.append((desc, None, 0.0, cost, load, est))
            continue
        weight = weights.get(desc.attribute_id, 0.0)
        scored.append((desc, weight, weight * est.f1, cost, load, est))

    order = sorted(
        (s for s in scored if s[1] is not None), key=lambda s: (-s[2] / s[3], s[0].op_id)
    )
    automated = set()
    used = 0
    for desc, _, _, cost, _, _ in order:
        if used + cost > budget:
            break
        automated.add(desc.op_id)
        used += cost

    items = []
    for desc, weight, score, cost, load, est in scored:
        if weight is None:
            items.append(PlanItem(desc.op_id, Decision.SKIP, 0.0, cost, load.value,
                                  "no quality attribute mapped; excluded from scoring", est))
            continue
        facts = (
            f"attribute {desc.attribute_id} (effective weight {weight:.2f}); "
            f"F1 {est.f1:.3f} ({est.provenance.value}); load {load.value}; complexity {cost}; "
            f"score {score:.3f}"
        )
        if desc.op_id in automated:
            decision, why = Decision.AUTOMATE, "automated within budget"
        elif load.value <= cfg.manual_load_threshold:
            decision, why = Decision.MANUAL, "manual review"
        else:
            decision, why = Decision.SKIP, "exceeds manual load threshold"
        items.append(PlanItem(desc.op_id, decision, score, cost, load.value, f"{why}: {facts}", est))
    items.sort(key=lambda i: (-i.priority_score, i.op_id))
    return QAPlan(tuple(items), budget, used)


def format_plan(plan: QAPlan) -> str:
    """Aligned-column text table."""
    rows = [("op_id", "decision", "score", "cost", "load")]
    rows += [(i.op_id, i.decision.value, f"{i.priority_score:.3f}", str(i.cost), str(i.load)) for i in plan.items]
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.append(f"budget {plan.budget:g}, used {plan.budget_used:g}")
    for i in plan.items:
        lines.append(f"  {i.op_id}: {i.rationale}")
    return "\n".join(lines) + "\n"
