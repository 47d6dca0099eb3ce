"""Canonical document file format (`.muml`) and the preferences file.

The document format is a small XML element tree with one element per
diagram object, written in a single canonical form: elements ordered by id,
attributes in a fixed order, two-space indentation, UTF-8, LF line endings,
no trailing whitespace.  Canonical bytes double as the document equality
test used throughout the engine, so serialize(parse(serialize(d))) is
byte-identical to serialize(d).  The schema is documented in
docs/file-format.md.

Preferences are flat `key=value` lines; anything missing or malformed
falls back to a default so a broken config never blocks the user.
"""

from __future__ import annotations

import logging
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .codegen import CodegenTarget
from .model import (
    ClassBox,
    Connection,
    ConnectionKind,
    Document,
    Glyph,
    Point,
    StickyNote,
)
from .render import Orientation, PageSize

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
DOCUMENT_SUFFIX = ".muml"
PREFS_ENV_VAR = "MINUML_CONFIG"
PREFS_FILENAME = "umldraw.cfg"


class ParseError(Exception):
    """The payload is not a well-formed document file."""


class UnsupportedVersion(ParseError):
    """The file's format version is not one this build can read."""


class IntegrityError(Exception):
    """The file parsed but violates document invariants (e.g. a connection
    referencing a missing class); nothing is loaded."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


# -- escaping ----------------------------------------------------------------

_ATTR_ESCAPES = [
    ("&", "&amp;"),
    ("<", "&lt;"),
    (">", "&gt;"),
    ('"', "&quot;"),
    ("\t", "&#9;"),
    ("\n", "&#10;"),
    ("\r", "&#13;"),
]

_TEXT_ESCAPES = [
    ("&", "&amp;"),
    ("<", "&lt;"),
    (">", "&gt;"),
    ("\n", "&#10;"),
    ("\r", "&#13;"),
]


def _escape_attr(value: str) -> str:
    for raw, ref in _ATTR_ESCAPES:
        value = value.replace(raw, ref)
    return value


def _escape_text(value: str) -> str:
    for raw, ref in _TEXT_ESCAPES:
        value = value.replace(raw, ref)
    return value


def _fmt(value: float) -> str:
    return repr(float(value))


# -- serialization ------------------------------------------------------------


def serialize(doc: Document) -> bytes:
    """Canonical UTF-8 bytes for a document."""
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append(
        f'<muml version="{FORMAT_VERSION}" next-id="{doc.next_id}"'
        f' name-counter="{doc.name_counter}">'
    )
    for element in doc.by_id():
        if isinstance(element, ClassBox):
            head = (
                f'  <class id="{element.id}" x="{_fmt(element.origin.x)}"'
                f' y="{_fmt(element.origin.y)}" name="{_escape_attr(element.name)}"'
                f' interface="{_bool(element.is_interface)}"'
            )
            if not element.variables and not element.methods:
                out.append(head + " />")
            else:
                out.append(head + ">")
                for line in element.variables:
                    out.append(f"    <variable>{_escape_text(line)}</variable>")
                for line in element.methods:
                    out.append(f"    <method>{_escape_text(line)}</method>")
                out.append("  </class>")
        elif isinstance(element, Connection):
            out.append(
                f'  <connection id="{element.id}" source="{element.source}"'
                f' target="{element.target}" kind="{element.kind.value}" />'
            )
        elif isinstance(element, StickyNote):
            head = (
                f'  <note id="{element.id}" x="{_fmt(element.origin.x)}"'
                f' y="{_fmt(element.origin.y)}" pinned="{_bool(element.pinned_open)}"'
            )
            if element.text:
                out.append(head + f">{_escape_text(element.text)}</note>")
            else:
                out.append(head + " />")
        elif isinstance(element, Glyph):
            out.append(f'  <glyph id="{element.id}">')
            for p in element.points:
                out.append(f'    <point x="{_fmt(p.x)}" y="{_fmt(p.y)}" />')
            out.append("  </glyph>")
    out.append("</muml>")
    out.append("")
    return "\n".join(out).encode("utf-8")


def _bool(value: bool) -> str:
    return "true" if value else "false"


# -- parsing ------------------------------------------------------------------


def parse(data: Union[bytes, str]) -> Document:
    """Parse canonical bytes back into a Document.

    Raises ParseError for malformed input, UnsupportedVersion for a format
    version other than 1, and IntegrityError (loading nothing) when the
    parsed document would violate model invariants.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    else:
        text = data
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}") from None
    if root.tag != "muml":
        raise ParseError(f"root element is <{root.tag}>, expected <muml>")
    version = _int_attr(root, "version", "muml")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"file format version {version}; this build reads version {FORMAT_VERSION}"
        )
    doc = Document()
    doc.next_id = _int_attr(root, "next-id", "muml")
    doc.name_counter = _int_attr(root, "name-counter", "muml")
    if doc.next_id < 1 or doc.name_counter < 1:
        raise ParseError("next-id and name-counter must be positive")
    for child in root:
        eid = _int_attr(child, "id", child.tag)
        if eid in doc.elements:
            raise ParseError(f"duplicate element id {eid} at <{child.tag}>")
        context = f"<{child.tag} id={eid}>"
        if child.tag == "class":
            element = ClassBox(
                id=eid,
                name=_str_attr(child, "name", context),
                origin=Point(
                    _float_attr(child, "x", context),
                    _float_attr(child, "y", context),
                ),
                is_interface=_bool_attr(child, "interface", context),
                variables=[gc.text or "" for gc in child if gc.tag == "variable"],
                methods=[gc.text or "" for gc in child if gc.tag == "method"],
            )
            for gc in child:
                if gc.tag not in ("variable", "method"):
                    raise ParseError(f"unexpected <{gc.tag}> inside {context}")
        elif child.tag == "connection":
            element = Connection(
                id=eid,
                source=_int_attr(child, "source", context),
                target=_int_attr(child, "target", context),
                kind=_kind_attr(child, context),
            )
        elif child.tag == "note":
            element = StickyNote(
                id=eid,
                origin=Point(
                    _float_attr(child, "x", context),
                    _float_attr(child, "y", context),
                ),
                text=child.text or "",
                pinned_open=_bool_attr(child, "pinned", context),
            )
        elif child.tag == "glyph":
            points = []
            for gc in child:
                if gc.tag != "point":
                    raise ParseError(f"unexpected <{gc.tag}> inside {context}")
                points.append(
                    Point(_float_attr(gc, "x", context), _float_attr(gc, "y", context))
                )
            element = Glyph(id=eid, points=tuple(points))
        else:
            raise ParseError(f"unknown element <{child.tag}>")
        doc.elements[eid] = element
    problems = doc.check_invariants()
    if problems:
        raise IntegrityError(problems)
    return doc


def _str_attr(el: ET.Element, name: str, context: str) -> str:
    value = el.get(name)
    if value is None:
        raise ParseError(f"missing attribute {name!r} on {context}")
    return value


def _int_attr(el: ET.Element, name: str, context: str) -> int:
    raw = _str_attr(el, name, context)
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"attribute {name}={raw!r} on {context} is not an integer") from None


def _float_attr(el: ET.Element, name: str, context: str) -> float:
    raw = _str_attr(el, name, context)
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"attribute {name}={raw!r} on {context} is not a number") from None


def _bool_attr(el: ET.Element, name: str, context: str) -> bool:
    raw = _str_attr(el, name, context)
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise ParseError(f"attribute {name}={raw!r} on {context} is not true/false")


def _kind_attr(el: ET.Element, context: str) -> ConnectionKind:
    raw = _str_attr(el, "kind", context)
    try:
        return ConnectionKind(raw)
    except ValueError:
        raise ParseError(f"unknown connection kind {raw!r} on {context}") from None


# -- preferences --------------------------------------------------------------


@dataclass
class Preferences:
    code_language: CodegenTarget = CodegenTarget.JAVA
    page_size: PageSize = PageSize.LETTER
    orientation: Orientation = Orientation.PORTRAIT


_PREF_PARSERS = {
    "code_language": {"java": CodegenTarget.JAVA, "cpp": CodegenTarget.CPP},
    "page_size": {"letter": PageSize.LETTER, "a4": PageSize.A4},
    "orientation": {
        "portrait": Orientation.PORTRAIT,
        "landscape": Orientation.LANDSCAPE,
    },
}


def load_prefs(text: Optional[str]) -> Preferences:
    """Parse preferences text; anything absent or malformed keeps its
    default (a warning is logged, never an error)."""
    prefs = Preferences()
    if text is None:
        return prefs
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            log.warning("prefs line %d ignored (no '='): %r", lineno, line)
            continue
        key = key.strip().lower()
        value = value.strip().lower()
        table = _PREF_PARSERS.get(key)
        if table is None:
            log.warning("prefs line %d ignored (unknown key %r)", lineno, key)
            continue
        parsed = table.get(value)
        if parsed is None:
            log.warning("prefs line %d ignored (bad value %r for %s)", lineno, value, key)
            continue
        setattr(prefs, key, parsed)
    return prefs


def save_prefs(prefs: Preferences) -> str:
    return (
        f"code_language={prefs.code_language.value}\n"
        f"orientation={prefs.orientation.value}\n"
        f"page_size={prefs.page_size.value}\n"
    )


def prefs_path() -> Path:
    """Location of the preferences file; MINUML_CONFIG overrides it."""
    override = os.environ.get(PREFS_ENV_VAR)
    if override:
        return Path(override)
    return Path(PREFS_FILENAME)


def read_prefs_file(path: Optional[Path] = None) -> Preferences:
    """Load preferences from disk; a missing file means all defaults."""
    path = path or prefs_path()
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        return Preferences()
    return load_prefs(text)


def write_prefs_file(prefs: Preferences, path: Optional[Path] = None) -> Path:
    path = path or prefs_path()
    path.write_text(save_prefs(prefs), encoding="utf-8")
    return path
