"""Copy/cut/paste payloads with multiple flavors; drag-and-drop reuses them.

A payload always carries the structured sub-document; when the selection
contains at least one class it also carries the equivalent code text, and it
always carries a vector image.  Connections never travel alone: one rides
along exactly when both of its endpoint classes are in the selection.

Host-clipboard integration is a thin adapter concern for UIs; the engine
deals only in Payload values so the rules stay testable headlessly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import codegen, persistence, render
from .commands import Command, CommandStack, Delete, PasteInsert
from .geometry import TextMetrics
from .model import ClassBox, Connection, Document, Element, Glyph, Point, StickyNote

STRUCTURED_FLAVOR = "application/x-minuml+xml"
CODE_FLAVOR = "text/plain"
IMAGE_FLAVOR = "image/svg+xml"

PASTE_OFFSET = Point(16.0, 16.0)


class EmptyEffectiveSelection(Exception):
    """Nothing copyable: the selection holds no classes, notes, or glyphs."""


@dataclass(frozen=True)
class Payload:
    """One copied selection in up to three equivalent representations."""

    structured: bytes
    code_text: Optional[str]
    vector_image: bytes

    def flavors(self) -> dict[str, object]:
        """Flavor-id keyed views for host clipboard adapters."""
        out: dict[str, object] = {
            STRUCTURED_FLAVOR: self.structured,
            IMAGE_FLAVOR: self.vector_image,
        }
        if self.code_text is not None:
            out[CODE_FLAVOR] = self.code_text
        return out


def effective_selection(doc: Document, selection: Iterable[int]) -> list[Element]:
    """Selected classes/notes/glyphs plus every connection both of whose
    endpoints are selected; raises when nothing copyable remains."""
    chosen = set(selection)
    kept: list[Element] = []
    class_ids: set[int] = set()
    for eid in sorted(chosen):
        element = doc.get(eid)
        if isinstance(element, Connection):
            continue  # connections only ride along with their endpoints
        kept.append(element)
        if isinstance(element, ClassBox):
            class_ids.add(eid)
    if not kept:
        raise EmptyEffectiveSelection(
            "selection contains no copyable elements (connections cannot be "
            "copied on their own)"
        )
    for conn in doc.connections():
        if conn.source in class_ids and conn.target in class_ids:
            kept.append(conn)
    kept.sort(key=lambda e: e.id)
    return kept


def _sub_document(elements: list[Element]) -> Document:
    sub = Document()
    for element in elements:
        sub.elements[element.id] = element
    sub.next_id = max(sub.elements) + 1
    return sub


def build_payload(
    doc: Document,
    selection: Iterable[int],
    prefs: persistence.Preferences,
    metrics: Optional[TextMetrics] = None,
) -> Payload:
    """Assemble all flavors for a selection (copy and drag share this)."""
    m = metrics or TextMetrics()
    kept = effective_selection(doc, selection)
    sub = _sub_document(kept)
    structured = persistence.serialize(sub)
    has_class = any(isinstance(e, ClassBox) for e in kept)
    code_text = codegen.clipboard_code(sub, prefs) if has_class else None
    scene = render.render_scene(sub, m)
    vector_image = render.export_svg(scene)
    return Payload(
        structured=structured, code_text=code_text, vector_image=vector_image
    )


def paste(
    doc: Document,
    payload: Payload,
    anchor: Optional[Point] = None,
) -> PasteInsert:
    """Build the insert command for a payload; execute it through a
    CommandStack so one undo removes the whole paste.

    Without an anchor the copies land offset (+16, +16) from the recorded
    positions; with one, the content's top-left corner lands on the anchor.
    """
    sub = persistence.parse(payload.structured)
    elements = tuple(sub.by_id())
    if anchor is None:
        offset = PASTE_OFFSET
    else:
        top_left = _content_origin(elements)
        offset = Point(anchor.x - top_left.x, anchor.y - top_left.y)
    return PasteInsert(elements=elements, offset=offset)


def _content_origin(elements: tuple[Element, ...]) -> Point:
    xs: list[float] = []
    ys: list[float] = []
    for element in elements:
        if isinstance(element, (ClassBox, StickyNote)):
            xs.append(element.origin.x)
            ys.append(element.origin.y)
        elif isinstance(element, Glyph):
            xs.extend(p.x for p in element.points)
            ys.extend(p.y for p in element.points)
    return Point(min(xs), min(ys)) if xs else Point(0.0, 0.0)


def cut(
    doc: Document,
    stack: CommandStack,
    selection: Iterable[int],
    prefs: persistence.Preferences,
    metrics: Optional[TextMetrics] = None,
) -> tuple[Payload, Command]:
    """Copy, then delete the selection as a single undoable command."""
    chosen = frozenset(selection)
    payload = build_payload(doc, chosen, prefs, metrics)
    cmd = stack.execute(doc, Delete(ids=chosen))
    return payload, cmd
