"""Requirements documents: the ``.reqspec`` text format, JSON interchange and the document model.

Text grammar (line oriented, UTF-8, LF or CRLF)::

    Title: Signalling system requirements      optional, before the first header
    # 1.2 Title                                 section header
    [REQ-ID] body                               requirement; indented lines continue it
    Figure 3: caption                           also Table N: and Illustration N:
    anything else                               prose

Offsets are code-point offsets into the decoded source text.
"""
from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from rqa.errors import (
    DuplicateRequirementId,
    MalformedHeader,
    MalformedRequirement,
    SchemaError,
)

ROOT_SECTION = "0"

_HEADER_RE = re.compile(r"#+[ \t]*(\d+(?:\.\d+)*)\.?(?:[ \t]+(.*))?$")
_REQ_RE = re.compile(r"\[([^\]\s]+)\](.*)$")
_CAPTION_RE = re.compile(r"(Figure|Table|Illustration)[ \t]+(\d+)[ \t]*:(.*)$")
_TITLE_RE = re.compile(r"Title:[ \t]*(.+)$")


class CaptionKind(str, enum.Enum):
    FIGURE = "Figure"
    TABLE = "Table"
    ILLUSTRATION = "Illustration"


@dataclass(frozen=True)
class Section:
    number: str
    title: str
    level: int
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Requirement:
    req_id: str
    section_path: tuple[str, ...]
    text: str
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def ref(self) -> str:
        return self.req_id

    @property
    def section(self) -> str:
        return self.section_path[-1]


@dataclass(frozen=True)
class Caption:
    kind: CaptionKind
    number: int
    title: str
    section_path: tuple[str, ...]
    ordinal: int
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def ref(self) -> str:
        """Position-based id (``Figure#2`` is the second figure), stable when numbers change."""
        return f"{self.kind.value}#{self.ordinal}"

    @property
    def label(self) -> str:
        return f"{self.kind.value} {self.number}"

    @property
    def text(self) -> str:
        return f"{self.label}: {self.title}" if self.title else f"{self.label}:"


@dataclass(frozen=True)
class Prose:
    ordinal: int
    section_path: tuple[str, ...]
    text: str
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def ref(self) -> str:
        return f"prose#{self.ordinal}"


@dataclass(frozen=True)
class RequirementsSpec:
    doc_id: str
    sections: tuple[Section, ...] = ()
    requirements: tuple[Requirement, ...] = ()
    captions: tuple[Caption, ...] = ()
    prose: tuple[Prose, ...] = ()
    title: str = ""
    source_path: str = field(default="", compare=False)

    def section(self, number: str) -> Section | None:
        for s in self.sections:
            if s.number == number:
                return s
        return None

    def elements(self) -> list[Requirement | Caption | Prose]:
        """All requirements, captions and prose in source order."""
        items: list[Requirement | Caption | Prose] = [*self.requirements, *self.captions, *self.prose]
        items.sort(key=lambda e: e.span[0])
        return items

    def positions(self) -> dict[str, int]:
        """Map every element ref to its rank in source order."""
        return {e.ref: i for i, e in enumerate(self.elements())}


def _level(number: str) -> int:
    return number.count(".") + 1


def _section_path(number: str, declared: dict[str, Section]) -> tuple[str, ...]:
    parts = number.split(".")
    chain = [".".join(parts[:i]) for i in range(1, len(parts))]
    return (*[n for n in chain if n in declared], number)


def parse_reqspec(text: str, doc_id: str, source_path: str = "") -> RequirementsSpec:
    """Parse the ``.reqspec`` plain-text format."""
    declared: dict[str, Section] = {}
    requirements: list[Requirement] = []
    captions: list[Caption] = []
    prose: list[Prose] = []
    seen_ids: set[str] = set()
    ordinals: dict[CaptionKind, int] = {}
    title = ""
    current: tuple[str, ...] | None = None
    # open requirement: [req_id, section_path, body parts, start, end]
    pending: list[Any] | None = None

    def root_path() -> tuple[str, ...]:
        if ROOT_SECTION not in declared:
            declared[ROOT_SECTION] = Section(ROOT_SECTION, "", 1, (0, 0))
        return (ROOT_SECTION,)

    def flush() -> None:
        nonlocal pending
        if pending is None:
            return
        req_id, path, parts, start, end = pending
        body = " ".join(p for p in parts if p)
        if not body:
            raise MalformedRequirement(req_id)
        requirements.append(Requirement(req_id, path, body, (start, end)))
        pending = None

    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.rstrip("\r\n")
        start = offset
        offset += len(raw)
        if pending is not None and line[:1] in (" ", "\t") and line.strip():
            pending[2].append(line.strip())
            pending[4] = start + len(line.rstrip())
            continue
        flush()
        stripped = line.strip()
        if not stripped:
            continue
        lead = len(line) - len(line.lstrip())
        s0, s1 = start + lead, start + lead + len(stripped)
        if stripped.startswith("#"):
            m = _HEADER_RE.match(stripped)
            if not m:
                raise MalformedHeader(line)
            number, sec_title = m.group(1), (m.group(2) or "").strip()
            if number not in declared:
                declared[number] = Section(number, sec_title, _level(number), (s0, s1))
            current = _section_path(number, declared)
            continue
        m = _REQ_RE.match(stripped)
        if m:
            req_id = m.group(1)
            if req_id in seen_ids:
                raise DuplicateRequirementId(req_id)
            seen_ids.add(req_id)
            pending = [req_id, current or root_path(), [m.group(2).strip()], s0, s1]
            continue
        m = _CAPTION_RE.match(stripped)
        if m and int(m.group(2)) >= 1:
            kind = CaptionKind(m.group(1))
            ordinals[kind] = ordinals.get(kind, 0) + 1
            captions.append(
                Caption(kind, int(m.group(2)), m.group(3).strip(), current or root_path(), ordinals[kind], (s0, s1))
            )
            continue
        m = _TITLE_RE.match(stripped)
        if m and current is None and not title and not requirements and not captions:
            title = m.group(1).strip()
            continue
        prose.append(Prose(len(prose) + 1, current or root_path(), stripped, (s0, s1)))
    flush()

    sections = sorted(declared.values(), key=lambda s: (s.number != ROOT_SECTION, s.span[0]))
    return RequirementsSpec(
        doc_id=doc_id,
        sections=tuple(sections),
        requirements=tuple(requirements),
        captions=tuple(captions),
        prose=tuple(prose),
        title=title,
        source_path=source_path,
    )


# -- JSON -------------------------------------------------------------------


def to_dict(spec: RequirementsSpec) -> dict[str, Any]:
    """Canonical JSON-ready form of ``spec`` (spans are not part of it)."""
    out: dict[str, Any] = {"doc_id": spec.doc_id}
    if spec.title:
        out["title"] = spec.title
    out["sections"] = [{"number": s.number, "title": s.title} for s in spec.sections]
    out["requirements"] = [{"id": r.req_id, "section": r.section, "text": r.text} for r in spec.requirements]
    out["captions"] = [
        {"kind": c.kind.value, "number": c.number, "title": c.title, "section": c.section_path[-1]}
        for c in spec.captions
    ]
    out["prose"] = [{"section": p.section_path[-1], "text": p.text} for p in spec.prose]
    return out


def dump_reqspec_json(spec: RequirementsSpec) -> str:
    return json.dumps(to_dict(spec), indent=2, ensure_ascii=False) + "\n"


def _field(obj: Any, key: str, kind: type | tuple[type, ...], path: str, required: bool = True) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError(path or "$", "expected an object")
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}" if path else key)
        return None
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}" if path else key, "wrong type")
    return value


def from_dict(data: Any) -> RequirementsSpec:
    """Build a spec from its JSON form; spans come from rendering it as ``.reqspec`` text."""
    return parse_reqspec(_dict_to_text(data), data["doc_id"])


def _dict_to_text(data: Any) -> str:
    _field(data, "doc_id", str, "")
    reqs = _field(data, "requirements", list, "")
    title = _field(data, "title", str, "", required=False) or ""
    sections_in = _field(data, "sections", list, "", required=False) or []
    captions_in = _field(data, "captions", list, "", required=False) or []
    prose_in = _field(data, "prose", list, "", required=False) or []

    titles: dict[str, str] = {}
    order: list[str] = []

    def note(number: str, path: str) -> str:
        number = number.strip() or ROOT_SECTION
        if not re.fullmatch(r"\d+(?:\.\d+)*", number):
            raise SchemaError(path, f"bad section number {number!r}")
        if number not in titles:
            titles[number] = ""
            order.append(number)
        return number

    for i, s in enumerate(sections_in):
        p = f"sections[{i}]"
        number = note(_field(s, "number", str, p), f"{p}.number")
        titles[number] = _field(s, "title", str, p, required=False) or titles[number]
    members: dict[str, list[str]] = {}
    seen: set[str] = set()
    for i, r in enumerate(reqs):
        p = f"requirements[{i}]"
        rid = _field(r, "id", str, p)
        if not re.fullmatch(r"[^\]\s]+", rid):
            raise SchemaError(f"{p}.id", f"bad requirement id {rid!r}")
        if rid in seen:
            raise DuplicateRequirementId(rid)
        seen.add(rid)
        sec = note(_field(r, "section", str, p), f"{p}.section")
        text = " ".join(_field(r, "text", str, p).split())
        if not text:
            raise MalformedRequirement(rid)
        members.setdefault(sec, []).append(f"[{rid}] {text}")
    captions_by: dict[str, list[str]] = {}
    for i, c in enumerate(captions_in):
        p = f"captions[{i}]"
        kind = _field(c, "kind", str, p)
        if kind not in {k.value for k in CaptionKind}:
            raise SchemaError(f"{p}.kind", f"unknown caption kind {kind!r}")
        number = _field(c, "number", int, p)
        if number < 1:
            raise SchemaError(f"{p}.number", "caption numbers start at 1")
        ctitle = " ".join((_field(c, "title", str, p, required=False) or "").split())
        sec = note(_field(c, "section", str, p, required=False) or ROOT_SECTION, f"{p}.section")
        captions_by.setdefault(sec, []).append(f"{kind} {number}: {ctitle}".rstrip())
    prose_by: dict[str, list[str]] = {}
    for i, pr in enumerate(prose_in):
        p = f"prose[{i}]"
        sec = note(_field(pr, "section", str, p, required=False) or ROOT_SECTION, f"{p}.section")
        ptext = " ".join(_field(pr, "text", str, p).split())
        if ptext:
            prose_by.setdefault(sec, []).append(ptext)

    lines = []
    if title:
        lines.append(f"Title: {title}")
    for number in sorted(order, key=lambda n: n != ROOT_SECTION):
        if number != ROOT_SECTION:
            lines.append(f"# {number} {titles[number]}".rstrip())
        lines.extend(prose_by.get(number, []))
        lines.extend(captions_by.get(number, []))
        lines.extend(members.get(number, []))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_reqspec_json(text: str) -> RequirementsSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg}") from exc
    return from_dict(data)


def render_reqspec(spec: RequirementsSpec) -> str:
    """Render ``spec`` as ``.reqspec`` text; per section: prose, then captions, then requirements."""
    return _dict_to_text(to_dict(spec))


def load_spec(path: str | Path) -> RequirementsSpec:
    """Read a ``.json`` or ``.reqspec`` (any other extension) file."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".json":
        spec = parse_reqspec_json(text)
    else:
        spec = parse_reqspec(text, p.stem)
    return replace(spec, source_path=str(p))
