"""Reading and writing lattices: the JSON lattice format and DOT output.

Lattice file (format_version 1)::

    {"format_version": 1,
     "description": "...",                      optional
     "elements": [{"id": 0, "name": "1234"}, ...],
     "covers": [{"upper": 1, "lower": 0, "label": "S3", "highlight": false}, ...],
     "labels": [{"label": "S3", "attrs": ["survives_I"]}, ...]}   optional

Ids may be integers or strings; elements are numbered in the order listed.
Either every cover has a label or none does, and likewise for ``highlight``.
Unknown fields are rejected. :func:`emit_json` writes the canonical form
(integer ids 0..N-1, covers sorted), which :func:`load_lattice` reads back
to the same bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import CycleError, NotLatticeError, NotReducedError, ParseError, ValidationError
from .poset_core import FiniteLattice, LabelledHasse, build_from_covers

FORMAT_VERSION = 1
_TOP_FIELDS = {"format_version", "description", "elements", "covers", "labels"}
_ELEMENT_FIELDS = {"id", "name"}
_COVER_FIELDS = {"upper", "lower", "label", "highlight"}
_LABEL_FIELDS = {"label", "attrs"}


def fixtures_dir() -> Path:
    return Path(str(resources.files("torslat") / "fixtures"))


def resolve_path(path) -> Path:
    """A filesystem path, falling back to the bundled fixtures ("fixtures/x.json" or "x")."""
    p = Path(path)
    if p.exists():
        return p
    bundled = fixtures_dir() / p.name
    if bundled.exists():
        return bundled
    if bundled.with_suffix(".json").exists():
        return bundled.with_suffix(".json")
    raise FileNotFoundError(path)


@dataclass(frozen=True)
class LatticeDocument:
    lattice: FiniteLattice
    labelled: LabelledHasse | None
    highlight: frozenset | None
    description: str | None

    @property
    def value(self):
        return self.labelled if self.labelled is not None else self.lattice


def _require(obj, fields, where):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(obj) - fields
    if unknown:
        raise ParseError(f"{where}: unknown field(s) {sorted(unknown)}")


def parse_document(doc: dict, source: str = "<document>") -> LatticeDocument:
    _require(doc, _TOP_FIELDS, source)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"{source}: format_version must be {FORMAT_VERSION}")
    for key in ("elements", "covers"):
        if not isinstance(doc.get(key), list):
            raise ParseError(f"{source}: field {key!r} must be a list")
    ids, names = {}, []
    for k, el in enumerate(doc["elements"]):
        where = f"{source}: elements[{k}]"
        _require(el, _ELEMENT_FIELDS, where)
        if "id" not in el or not isinstance(el["id"], (int, str)) or isinstance(el["id"], bool):
            raise ParseError(f"{where}: id must be an integer or string")
        if el["id"] in ids:
            raise ParseError(f"{where}: duplicate id {el['id']!r}")
        ids[el["id"]] = k
        names.append(str(el.get("name", el["id"])))
    covers, seen, labels, highlight = [], set(), {}, set()
    has_label = has_hl = None
    for k, cv in enumerate(doc["covers"]):
        where = f"{source}: covers[{k}]"
        _require(cv, _COVER_FIELDS, where)
        try:
            c = (ids[cv["upper"]], ids[cv["lower"]])
        except KeyError as exc:
            raise ParseError(f"{where}: missing or unknown element {exc}") from None
        if c in seen:
            raise ParseError(f"{where}: duplicate cover {cv['upper']!r} -> {cv['lower']!r}")
        for flag, key in ((has_label, "label"), (has_hl, "highlight")):
            if flag is not None and flag != (key in cv):
                raise ParseError(f"{where}: {key!r} must be given on every cover or none")
        has_label, has_hl = "label" in cv, "highlight" in cv
        covers.append(c)
        seen.add(c)
        if has_label:
            labels[c] = cv["label"]
        if has_hl:
            if not isinstance(cv["highlight"], bool):
                raise ParseError(f"{where}: highlight must be true or false")
            if cv["highlight"]:
                highlight.add(c)
    attrs = {}
    for k, entry in enumerate(doc.get("labels", [])):
        where = f"{source}: labels[{k}]"
        _require(entry, _LABEL_FIELDS, where)
        if "label" not in entry or entry["label"] in attrs:
            raise ParseError(f"{where}: missing or duplicate label")
        attrs[entry["label"]] = frozenset(entry.get("attrs", []))
    if attrs and not has_label:
        raise ParseError(f"{source}: label attributes given but covers are unlabelled")
    if has_label and attrs and set(labels.values()) - set(attrs):
        raise ParseError(f"{source}: labels missing from the label list: "
                         f"{sorted(set(labels.values()) - set(attrs), key=str)}")
    try:
        L = build_from_covers(len(names), covers, names)
    except (CycleError, NotReducedError, NotLatticeError, ValueError) as exc:
        err = ValidationError(f"{source}: {exc}")
        err.witness = exc
        raise err from exc
    LH = LabelledHasse(L, labels, attrs) if has_label else None
    return LatticeDocument(L, LH, frozenset(highlight) if has_hl else None, doc.get("description"))


def read_document(path) -> LatticeDocument:
    p = resolve_path(path)
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_document(doc, str(p))


def load_lattice(path):
    """LabelledHasse if the file carries labels, FiniteLattice otherwise."""
    return read_document(path).value


def _split(obj):
    if isinstance(obj, LabelledHasse):
        return obj.lattice, obj
    if isinstance(obj, FiniteLattice):
        return obj, None
    raise TypeError(f"expected a lattice, got {type(obj).__name__}")


def lattice_document(obj, highlight: Iterable | None = None, description: str | None = None) -> dict:
    L, LH = _split(obj)
    hl = None if highlight is None else set(map(tuple, highlight))
    doc = {"format_version": FORMAT_VERSION}
    if description is not None:
        doc["description"] = description
    doc["elements"] = [{"id": i, "name": nm} for i, nm in enumerate(L.names)]
    covers = []
    for c in L.covers:
        entry = {"upper": c[0], "lower": c[1]}
        if LH is not None:
            entry["label"] = str(LH.labels[c])
        if hl is not None:
            entry["highlight"] = c in hl
        covers.append(entry)
    doc["covers"] = covers
    if LH is not None:
        attrs = {str(k): v for k, v in LH.label_attrs.items()}
        doc["labels"] = [{"label": lab, "attrs": sorted(attrs.get(lab, ()))}
                         for lab in sorted({str(x) for x in LH.labels.values()})]
    return doc


def emit_json(obj, highlight: Iterable | None = None, description: str | None = None) -> str:
    return json.dumps(lattice_document(obj, highlight, description), indent=1, ensure_ascii=False) + "\n"


def save_document(path, doc: LatticeDocument) -> None:
    Path(path).write_text(emit_json(doc.value, doc.highlight, doc.description))


def heights(L: FiniteLattice) -> list[int]:
    'length of the longest chain from the bottom to each element'
    h = [0] * L.n_elements
    for x in L.order:
        for v in L.lower_covers[x]:
            h[x] = max(h[x], h[v] + 1)
    return h


def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(obj, highlight: Iterable = (), name: str = "hasse") -> str:
    """DOT text with one rank per height; highlighted arrows are drawn doubled."""
    L, LH = _split(obj)
    hl = set(map(tuple, highlight))
    h = heights(L)
    lines = [f"digraph {name} {{", "  node [shape=plaintext];", "  edge [arrowsize=0.6];"]
    for x in range(L.n_elements):
        lines.append(f"  n{x} [label={_quote(L.names[x])}];")
    for level in range(max(h) + 1):
        members = " ".join(f"n{x};" for x in range(L.n_elements) if h[x] == level)
        lines.append(f"  {{ rank=same; {members} }}")
    for c in L.covers:
        attrs = []
        if LH is not None:
            attrs.append(f"label={_quote(LH.labels[c])}")
        if c in hl:
            attrs.append('color="black:invis:black"')
        tail = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  n{c[0]} -> n{c[1]}{tail};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ForcingQuiver:
    """A transcribed forcing quiver on named strings: ``arrows`` go from forcing to forced."""
    strings: dict  # name -> StringBrick
    arrows: frozenset
    description: str | None = None


def load_forcing_quiver(path) -> ForcingQuiver:
    from .typea_bricks import StringBrick

    p = resolve_path(path)
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: line {exc.lineno}: {exc.msg}") from None
    _require(doc, {"format_version", "kind", "description", "bricks", "arrows"}, str(p))
    if doc.get("kind") != "forcing_quiver" or doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"{p}: not a forcing quiver document")
    strings = {}
    for k, b in enumerate(doc.get("bricks", [])):
        _require(b, {"name", "string"}, f"{p}: bricks[{k}]")
        if b.get("name") in strings:
            raise ParseError(f"{p}: duplicate brick {b.get('name')!r}")
        strings[b["name"]] = StringBrick.parse(b["string"])
    arrows = set()
    for k, a in enumerate(doc.get("arrows", [])):
        if not (isinstance(a, list) and len(a) == 2 and all(x in strings for x in a)):
            raise ParseError(f"{p}: arrows[{k}] must name two listed bricks")
        if tuple(a) in arrows:
            raise ParseError(f"{p}: duplicate arrow {a}")
        arrows.add(tuple(a))
    return ForcingQuiver(strings, frozenset(arrows), doc.get("description"))

