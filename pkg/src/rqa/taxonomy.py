"""Quality attributes, their signed influence graph, goals and cumulative-voting priorities."""
from __future__ import annotations

import csv
import enum
import io
import json
import sys
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from rqa.errors import (
    BadBallotSum,
    BallotError,
    DuplicateAttribute,
    DuplicateEdge,
    ModelError,
    NoBallots,
    SelfLoop,
    UnknownAttribute,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class Sign(str, enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.POSITIVE else -1


@dataclass(frozen=True)
class QualityAttribute:
    id: str
    name: str
    definition: str = ""


@dataclass(frozen=True)
class InfluenceEdge:
    source: str
    target: str
    sign: Sign


@dataclass(frozen=True)
class Goal:
    id: str
    description: str
    attribute_ids: tuple[str, ...]


@dataclass(frozen=True)
class QualityModel:
    attributes: tuple[QualityAttribute, ...] = ()
    edges: tuple[InfluenceEdge, ...] = ()
    goals: tuple[Goal, ...] = ()

    def __post_init__(self):
        ids = set()
        for a in self.attributes:
            if a.id in ids:
                raise DuplicateAttribute(a.id)
            ids.add(a.id)
        pairs = set()
        for e in self.edges:
            if e.source == e.target:
                raise SelfLoop(e.source)
            for end in (e.source, e.target):
                if end not in ids:
                    raise UnknownAttribute(end)
            if (e.source, e.target) in pairs:
                raise DuplicateEdge(e.source, e.target)
            pairs.add((e.source, e.target))
        for g in self.goals:
            if not g.attribute_ids:
                raise ModelError(f"goal {g.id!r} names no attributes")
            for aid in g.attribute_ids:
                if aid not in ids:
                    raise UnknownAttribute(aid)

    @property
    def attribute_ids(self) -> list[str]:
        return [a.id for a in self.attributes]

    def __contains__(self, attribute_id: object) -> bool:
        return any(a.id == attribute_id for a in self.attributes)

    def outgoing(self, attribute_id: str) -> list[InfluenceEdge]:
        return [e for e in self.edges if e.source == attribute_id]


def _entries(data: Mapping[str, Any], *keys: str) -> list[dict]:
    for key in keys:
        if key in data:
            value = data[key]
            if not isinstance(value, list) or not all(isinstance(v, dict) for v in value):
                raise ModelError(f"{key!r} must be a list of tables")
            return value
    return []


def _str(entry: Mapping[str, Any], key: str, where: str, default: str | None = None) -> str:
    value = entry.get(key, default)
    if not isinstance(value, str):
        raise ModelError(f"{where}: field {key!r} must be a string")
    return value


def load_quality_model(text: str) -> QualityModel:
    """Parse a quality-model file (TOML with ``[[attribute]]``/``[[edge]]``/``[[goal]]``, or JSON)."""
    try:
        data = json.loads(text) if text.lstrip().startswith("{") else tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ModelError(f"cannot parse quality model: {exc}") from exc
    attrs = []
    for i, a in enumerate(_entries(data, "attribute", "attributes")):
        aid = _str(a, "id", f"attribute[{i}]")
        attrs.append(QualityAttribute(aid, _str(a, "name", f"attribute[{i}]", aid), _str(a, "definition", f"attribute[{i}]", "")))
    edges = []
    for i, e in enumerate(_entries(data, "edge", "edges")):
        sign = _str(e, "sign", f"edge[{i}]")
        if sign not in ("+", "-"):
            raise ModelError(f"edge[{i}]: sign must be '+' or '-', got {sign!r}")
        edges.append(InfluenceEdge(_str(e, "source", f"edge[{i}]"), _str(e, "target", f"edge[{i}]"), Sign(sign)))
    goals = []
    for i, g in enumerate(_entries(data, "goal", "goals")):
        ids = g.get("attributes", [])
        if not isinstance(ids, list) or not all(isinstance(x, str) for x in ids):
            raise ModelError(f"goal[{i}]: 'attributes' must be a list of ids")
        goals.append(Goal(_str(g, "id", f"goal[{i}]"), _str(g, "description", f"goal[{i}]", ""), tuple(ids)))
    return QualityModel(tuple(attrs), tuple(edges), tuple(goals))


def seed_model_text() -> str:
    return resources.files("rqa").joinpath("data", "seed_model.toml").read_text(encoding="utf-8")


def seed_quality_model() -> QualityModel:
    return load_quality_model(seed_model_text())


def load_quality_model_file(path: str | Path) -> QualityModel:
    return load_quality_model(Path(path).read_text(encoding="utf-8"))


# -- cumulative voting ------------------------------------------------------


@dataclass(frozen=True)
class Ballot:
    voter_id: str
    points: Mapping[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.points.values())


@dataclass(frozen=True)
class RankEntry:
    attribute_id: str
    points: float
    position: int


@dataclass(frozen=True)
class Ranking:
    entries: tuple[RankEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def position(self, attribute_id: str) -> int | None:
        for e in self.entries:
            if e.attribute_id == attribute_id:
                return e.position
        return None

    def points(self) -> dict[str, float]:
        return {e.attribute_id: e.points for e in self.entries}

    def order(self) -> list[str]:
        return [e.attribute_id for e in self.entries]


def load_ballots_csv(text: str) -> list[Ballot]:
    """Read ``voter_id,attribute_id,points`` rows; a header row is optional."""
    rows: dict[str, dict[str, int]] = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 3:
            raise BallotError(f"line {lineno}: expected voter_id,attribute_id,points")
        voter, attr, pts = (c.strip() for c in row)
        if lineno == 1 and pts.lower() == "points":
            continue
        try:
            value = int(pts)
        except ValueError:
            raise BallotError(f"line {lineno}: points must be an integer, got {pts!r}") from None
        ballot = rows.setdefault(voter, {})
        if attr in ballot:
            raise BallotError(f"line {lineno}: {voter!r} awards {attr!r} twice")
        ballot[attr] = value
    return [Ballot(v, p) for v, p in rows.items()]


def validate_ballots(ballots: Iterable[Ballot], model: QualityModel) -> None:
    known = set(model.attribute_ids)
    for b in ballots:
        for aid in b.points:
            if aid not in known:
                raise UnknownAttribute(aid)


def aggregate_votes(
    ballots: Sequence[Ballot], total: int = 100, attributes: Iterable[str] | None = None
) -> Ranking:
    """Sum the points each attribute received and rank by total, ties by id.

    ``attributes`` adds ids that got no points at all so they still appear
    (at the bottom).
    """
    if not ballots:
        raise NoBallots()
    sums: dict[str, int] = {aid: 0 for aid in attributes or ()}
    for b in ballots:
        if any(p < 0 for p in b.points.values()):
            raise BallotError(f"ballot of {b.voter_id!r} awards negative points")
        if b.total != total:
            raise BadBallotSum(b.voter_id, b.total, total)
        for aid, p in b.points.items():
            sums[aid] = sums.get(aid, 0) + p
    ordered = sorted(sums.items(), key=lambda kv: (-kv[1], kv[0]))
    return Ranking(tuple(RankEntry(aid, pts, i) for i, (aid, pts) in enumerate(ordered, start=1)))


# -- influence analysis -----------------------------------------------------


def effective_weights(
    ranking: Ranking, model: QualityModel, damping: float = 0.5, max_hops: int = 1
) -> dict[str, float]:
    """Attribute priority adjusted by the points of the attributes it influences.

    With ``max_hops=1`` each attribute gains ``damping`` times the points of
    every attribute it positively influences and loses the same for negative
    edges. Larger ``max_hops`` follow simple paths, attenuating by
    ``damping ** hops`` and multiplying signs along the way. Results are
    floored at zero.
    """
    if not 0.0 <= damping <= 1.0:
        raise ValueError(f"damping must lie in [0, 1], got {damping}")
    points = ranking.points()
    ids = list(dict.fromkeys([*model.attribute_ids, *points]))
    adjacency: dict[str, list[InfluenceEdge]] = {}
    for e in model.edges:
        adjacency.setdefault(e.source, []).append(e)

    weights = {}
    for aid in ids:
        bonus = 0.0
        stack = [(aid, 1, 1.0, frozenset([aid]))]
        while stack:
            node, hops, factor, seen = stack.pop()
            if hops > max_hops:
                continue
            for e in adjacency.get(node, ()):
                if e.target in seen:
                    continue
                f = factor * damping * e.sign.factor
                bonus += f * points.get(e.target, 0.0)
                stack.append((e.target, hops + 1, f, seen | {e.target}))
        weights[aid] = max(0.0, points.get(aid, 0.0) + bonus)
    return weights


@dataclass(frozen=True)
class Conflict:
    source: str
    target: str
    sign: Sign
    source_position: int
    target_position: int

    def describe(self) -> str:
        return (
            f"{self.target} is ranked {self.target_position} but is positively influenced by "
            f"{self.source}, ranked {self.source_position}"
        )


def detect_ranking_conflicts(ranking: Ranking, model: QualityModel, k: int = 5) -> list[Conflict]:
    """Positive edges whose target ranks in the top ``k`` while the source ranks in the bottom ``k``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = len(ranking)
    pos = {e.attribute_id: e.position for e in ranking}
    out = []
    for e in model.edges:
        if e.sign is not Sign.POSITIVE or e.source not in pos or e.target not in pos:
            continue
        if pos[e.target] <= k and pos[e.source] > n - k:
            out.append(Conflict(e.source, e.target, e.sign, pos[e.source], pos[e.target]))
    out.sort(key=lambda c: (c.target_position, c.source_position))
    return out
