"""Seeded generator of clean synthetic requirements documents.

Each requirement has one modal verb, no conjunction, no vague adverb, no date
and no numeral between 1 and 12, so the built-in operators report nothing on
small documents. Used for fixtures, scale tests and benchmarks.
"""
from __future__ import annotations

import itertools
import random

SUBJECTS = [
    "The pump controller", "The signalling unit", "The track circuit", "The interlocking",
    "The level crossing barrier", "The traffic management system", "The power supply unit",
    "The ventilation fan", "The tunnel lighting", "The passenger information display",
    "The axle counter", "The point machine", "The radio block centre", "The drainage station",
    "The fire detection panel", "The emergency telephone",
]
VERBS = [
    "monitor", "record", "report", "detect", "display", "isolate", "measure", "store",
    "send", "validate", "log", "check", "protect", "indicate", "verify", "signal",
]
OBJECTS = [
    "the inlet pressure", "every train movement", "the barrier position", "the supply voltage",
    "the fan speed", "the lamp status", "each occupied section", "the switch position",
    "the movement authority", "the water level", "the smoke density", "the call duration",
    "the cabinet temperature", "the earth leakage current", "the brake status", "the door state",
    "the axle count", "the alarm history", "the battery charge", "the route request",
]
QUALIFIERS = [
    "to the control centre", "in the maintenance log", "for at least 30 seconds",
    "above 40 degrees Celsius", "to the operator workstation", "with two (2) redundant channels",
    "at a rate of 50 samples per second", "during degraded operation", "for every track section",
    "within the safety envelope", "on the local display", "over the maintenance network",
    "with a resolution of 100 millivolts", "at the trackside cabinet", "through the fibre backbone",
]
SECTION_TITLES = [
    "General", "Train detection", "Interlocking", "Power and environment", "Communication",
    "Diagnostics", "Safety functions", "Maintenance",
]
CAPTION_TITLES = [
    "System overview", "Cabinet layout", "Signal aspects", "Power distribution", "Network topology",
    "Alarm flow", "Maintenance interfaces", "Sensor placement", "Cable routing", "Test sequence",
]


def requirement_texts(n: int, seed: int = 0) -> list[str]:
    """``n`` distinct requirement sentences; subject-verb-object triples never repeat within the first
    ``len(SUBJECTS) * len(VERBS) * len(OBJECTS)`` sentences."""
    rng = random.Random(seed)
    triples = list(itertools.product(range(len(SUBJECTS)), range(len(VERBS)), range(len(OBJECTS))))
    out = []
    while len(out) < n:
        rng.shuffle(triples)
        for s, v, o in triples[: n - len(out)]:
            out.append(f"{SUBJECTS[s]} shall {VERBS[v]} {OBJECTS[o]} {rng.choice(QUALIFIERS)}.")
    return out


def generate_reqspec(
    n_requirements: int,
    seed: int = 0,
    *,
    title: str = "Synthetic signalling requirements",
    sections: int = 4,
    figures: int = 8,
    tables: int = 4,
    prefix: str = "R",
) -> str:
    """Render a clean ``.reqspec`` document with consecutive caption numbering."""
    rng = random.Random(seed + 7919)
    texts = requirement_texts(n_requirements, seed)
    sections = max(1, sections)
    captions = [("Figure", i + 1) for i in range(figures)] + [("Table", i + 1) for i in range(tables)]
    # spread captions over sections, keeping each kind in ascending order
    cap_slots: list[list[tuple[str, int]]] = [[] for _ in range(sections)]
    for idx, cap in enumerate(sorted(captions, key=lambda c: (c[1], c[0]))):
        cap_slots[min(sections - 1, idx * sections // max(1, len(captions)))].append(cap)
    lines = [f"Title: {title}", ""]
    per = -(-n_requirements // sections) if n_requirements else 0
    k = 0
    for s in range(sections):
        lines.append(f"# {s + 1} {SECTION_TITLES[s % len(SECTION_TITLES)]}")
        lines.append(f"This section covers {SECTION_TITLES[s % len(SECTION_TITLES)].lower()} functions.")
        for kind, number in cap_slots[s]:
            lines.append(f"{kind} {number}: {rng.choice(CAPTION_TITLES)}")
        lines.append("")
        for _ in range(per):
            if k >= n_requirements:
                break
            k += 1
            lines.append(f"[{prefix}-{k}] {texts[k - 1]}")
        lines.append("")
    return "\n".join(lines)
