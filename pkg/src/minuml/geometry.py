"""Deterministic layout and spatial queries.

All layout derives from abstract text metrics (fixed character cell sizes in
world units) so results are reproducible everywhere; real font metrics are a
presentation concern.  Hit testing and rectangle selection are served by a
uniform-grid spatial index keyed on the document's revision counter, which
keeps point queries well below linear cost even with hundreds of glyph
strokes on the canvas.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from typing import Optional

from .model import (
    ClassBox,
    Connection,
    Document,
    Glyph,
    Point,
    Rect,
    StickyNote,
)

INTERFACE_MARKER = "«interface»"
MIN_CLASS_WIDTH = 80.0
NOTE_ICON_SIZE = 16.0
DEFAULT_HIT_TOLERANCE = 4.0

ZOOM_MIN = 0.10
ZOOM_MAX = 5.00


@dataclass(frozen=True)
class TextMetrics:
    """Abstract monospace metrics, in world units per character cell."""

    char_width: float = 8.0
    line_height: float = 16.0
    padding: float = 8.0


@dataclass
class Viewport:
    """Zoom/pan mapping between world and screen space.

    Zoom is always clamped to [0.10, 5.00] (10% to 500%).
    """

    zoom: float = 1.0
    pan_x: float = 0.0
    pan_y: float = 0.0

    def __post_init__(self) -> None:
        self.zoom = _clamp_zoom(self.zoom)

    def set_zoom(self, zoom: float) -> float:
        self.zoom = _clamp_zoom(zoom)
        return self.zoom

    def world_to_screen(self, p: Point) -> Point:
        return Point(p.x * self.zoom + self.pan_x, p.y * self.zoom + self.pan_y)

    def screen_to_world(self, p: Point) -> Point:
        return Point((p.x - self.pan_x) / self.zoom, (p.y - self.pan_y) / self.zoom)


def _clamp_zoom(zoom: float) -> float:
    return min(ZOOM_MAX, max(ZOOM_MIN, zoom))


# -- element extents -------------------------------------------------------


def class_bounds(cls: ClassBox, m: TextMetrics) -> Rect:
    """Auto-sized box: wide enough for the longest line, tall enough for the
    name row, both member compartments, and two separator rows."""
    lines = [cls.name]
    if cls.is_interface:
        lines.append(INTERFACE_MARKER)
    lines.extend(cls.variables)
    lines.extend(cls.methods)
    longest = max(len(line) for line in lines)
    width = max(MIN_CLASS_WIDTH, 2 * m.padding + m.char_width * longest)
    rows = 1 + (1 if cls.is_interface else 0) + len(cls.variables) + len(cls.methods)
    height = 2 * m.padding + m.line_height * (rows + 2)
    return Rect(cls.origin.x, cls.origin.y, width, height)


def note_text_lines(note: StickyNote) -> list[str]:
    return note.text.split("\n") if note.text else [""]


def note_expanded_bounds(note: StickyNote, m: TextMetrics) -> Rect:
    lines = note_text_lines(note)
    longest = max(len(line) for line in lines)
    width = max(NOTE_ICON_SIZE, 2 * m.padding + m.char_width * longest)
    height = 2 * m.padding + m.line_height * len(lines)
    return Rect(note.origin.x, note.origin.y, width, height)


def note_bounds(note: StickyNote, m: TextMetrics) -> Rect:
    """Resting extent: the 16x16 icon unless the note is pinned open."""
    if note.pinned_open:
        return note_expanded_bounds(note, m)
    return Rect(note.origin.x, note.origin.y, NOTE_ICON_SIZE, NOTE_ICON_SIZE)


def glyph_bounds(glyph: Glyph) -> Rect:
    xs = [p.x for p in glyph.points]
    ys = [p.y for p in glyph.points]
    return Rect.from_corners(min(xs), min(ys), max(xs), max(ys))


# -- connection routing ----------------------------------------------------


@dataclass(frozen=True)
class RouteResult:
    """A routed connection: boundary anchors, a label anchor one text row
    off the midpoint, and the symbol drawn at the target end."""

    source_anchor: Point
    target_anchor: Point
    label_anchor: Point
    decoration: Optional[str]
    degenerate: bool = False


_DECORATION = {
    "generic": None,
    "association": "arrow",
    "aggregation": "diamond",
    "inheritance": "triangle",
}


def _boundary_exit(rect: Rect, cx: float, cy: float, ox: float, oy: float):
    """First crossing of the ray center->other with the rect boundary, with
    the crossed coordinate pinned exactly onto the edge.  None when the
    other point lies inside the rect (no exit before reaching it)."""
    dx = ox - cx
    dy = oy - cy
    best_t = math.inf
    axis = ""
    edge = 0.0
    if dx > 0:
        best_t, axis, edge = (rect.right - cx) / dx, "x", rect.right
    elif dx < 0:
        best_t, axis, edge = (rect.x - cx) / dx, "x", rect.x
    if dy > 0:
        t = (rect.bottom - cy) / dy
        if t < best_t:
            best_t, axis, edge = t, "y", rect.bottom
    elif dy < 0:
        t = (rect.y - cy) / dy
        if t < best_t:
            best_t, axis, edge = t, "y", rect.y
    if not axis or best_t >= 1.0:
        return None
    if axis == "x":
        return Point(edge, cy + dy * best_t)
    return Point(cx + dx * best_t, edge)


def route_connection(conn: Connection, src_bounds: Rect, dst_bounds: Rect) -> RouteResult:
    """Straight center-to-center segment clipped to each box boundary.

    When one box's center sits inside the other box (or the centers
    coincide) there is no clean crossing; the route degenerates to the raw
    centers instead of failing, so editing is never blocked.
    """
    sc = src_bounds.center
    tc = dst_bounds.center
    source_anchor = _boundary_exit(src_bounds, sc.x, sc.y, tc.x, tc.y)
    target_anchor = _boundary_exit(dst_bounds, tc.x, tc.y, sc.x, sc.y)
    degenerate = source_anchor is None or target_anchor is None
    if degenerate:
        source_anchor, target_anchor = sc, tc
    label = _label_anchor(source_anchor, target_anchor)
    return RouteResult(
        source_anchor=source_anchor,
        target_anchor=target_anchor,
        label_anchor=label,
        decoration=_DECORATION[conn.kind.value],
        degenerate=degenerate,
    )


def _label_anchor(a: Point, b: Point, line_height: float = 16.0) -> Point:
    mx = (a.x + b.x) / 2
    my = (a.y + b.y) / 2
    dx = b.x - a.x
    dy = b.y - a.y
    length = math.hypot(dx, dy)
    if length == 0:
        return Point(mx, my - line_height)
    # Perpendicular chosen so a left-to-right segment labels above the line.
    nx = dy / length
    ny = -dx / length
    return Point(mx + nx * line_height, my + ny * line_height)


# -- low-level intersection helpers ----------------------------------------


def _seg_dist_sq(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        ex = px - ax
        ey = py - ay
        return ex * ex + ey * ey
    t = ((px - ax) * dx + (py - ay) * dy) / length_sq
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    ex = px - (ax + t * dx)
    ey = py - (ay + t * dy)
    return ex * ex + ey * ey


def _seg_intersects_rect(ax, ay, bx, by, x0, y0, x1, y1):
    # Liang-Barsky interval clipping; touching counts as intersecting.
    dx = bx - ax
    dy = by - ay
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, ax - x0), (dx, x1 - ax), (-dy, ay - y0), (dy, y1 - ay)):
        if p == 0.0:
            if q < 0.0:
                return False
        else:
            r = q / p
            if p < 0.0:
                if r > t1:
                    return False
                if r > t0:
                    t0 = r
            else:
                if r < t0:
                    return False
                if r < t1:
                    t1 = r
    return True


# -- spatial index ----------------------------------------------------------

_RECT = 0
_SEGMENT = 1
_POLYLINE = 2


class HitTester:
    """Uniform-grid index over element hit regions.

    The grid is rebuilt lazily whenever the document's revision moves, so
    callers can keep one tester per document and query freely.  Hit regions:
    class boxes and notes use their derived rectangles, connections their
    routed segment, glyphs their polyline; 1-D targets are hit within a
    caller-supplied tolerance.
    """

    def __init__(self, doc: Document, metrics: TextMetrics, cell_size: float = 64.0):
        self._doc = doc
        self._metrics = metrics
        self._cell = cell_size
        self._revision = -1
        self._grid: dict[tuple[int, int], list] = {}
        self._entries: list = []

    def _sync(self) -> None:
        if self._revision == self._doc.revision:
            return
        self._rebuild()
        self._revision = self._doc.revision

    def _rebuild(self) -> None:
        doc, m = self._doc, self._metrics
        grid: dict[tuple[int, int], list] = {}
        entries = []
        class_rects: dict[int, Rect] = {}
        for element in doc.by_id():
            if isinstance(element, ClassBox):
                class_rects[element.id] = class_bounds(element, m)
        for element in doc.by_id():
            if isinstance(element, ClassBox):
                r = class_rects[element.id]
                entry = (element.id, _RECT, (r.x, r.y, r.right, r.bottom))
                bbox = (r.x, r.y, r.right, r.bottom)
            elif isinstance(element, StickyNote):
                r = note_bounds(element, m)
                entry = (element.id, _RECT, (r.x, r.y, r.right, r.bottom))
                bbox = (r.x, r.y, r.right, r.bottom)
            elif isinstance(element, Connection):
                route = route_connection(
                    element, class_rects[element.source], class_rects[element.target]
                )
                a, b = route.source_anchor, route.target_anchor
                entry = (element.id, _SEGMENT, (a.x, a.y, b.x, b.y))
                bbox = (min(a.x, b.x), min(a.y, b.y), max(a.x, b.x), max(a.y, b.y))
            else:
                coords = tuple(c for p in element.points for c in (p.x, p.y))
                r = glyph_bounds(element)
                entry = (element.id, _POLYLINE, ((r.x, r.y, r.right, r.bottom), coords))
                bbox = (r.x, r.y, r.right, r.bottom)
            entries.append(entry)
            for key in self._cells_for(bbox):
                grid.setdefault(key, []).append(entry)
        self._grid = grid
        self._entries = entries

    def _cells_for(self, bbox):
        cell = self._cell
        x0 = math.floor(bbox[0] / cell)
        y0 = math.floor(bbox[1] / cell)
        x1 = math.floor(bbox[2] / cell)
        y1 = math.floor(bbox[3] / cell)
        return [(ix, iy) for ix in range(x0, x1 + 1) for iy in range(y0, y1 + 1)]

    def hit(self, x: float, y: float, tolerance: float = DEFAULT_HIT_TOLERANCE) -> Optional[int]:
        """Topmost element at (x, y); creation order breaks ties (later wins)."""
        self._sync()
        cell = self._cell
        grid = self._grid
        tol_sq = tolerance * tolerance
        x0 = math.floor((x - tolerance) / cell)
        x1 = math.floor((x + tolerance) / cell)
        y0 = math.floor((y - tolerance) / cell)
        y1 = math.floor((y + tolerance) / cell)
        best = -1
        for ix in range(x0, x1 + 1):
            for iy in range(y0, y1 + 1):
                bucket = grid.get((ix, iy))
                if not bucket:
                    continue
                for eid, kind, data in bucket:
                    if eid <= best:
                        continue
                    if _entry_hits(kind, data, x, y, tolerance, tol_sq):
                        best = eid
        return best if best >= 0 else None

    def in_rect(self, r: Rect) -> set[int]:
        """Ids of every element whose hit region touches r (intersection,
        not containment); a zero-area rect behaves like a point probe."""
        self._sync()
        found: set[int] = set()
        x0c = math.floor(r.x / self._cell)
        x1c = math.floor(r.right / self._cell)
        y0c = math.floor(r.y / self._cell)
        y1c = math.floor(r.bottom / self._cell)
        for ix in range(x0c, x1c + 1):
            for iy in range(y0c, y1c + 1):
                bucket = self._grid.get((ix, iy))
                if not bucket:
                    continue
                for eid, kind, data in bucket:
                    if eid in found:
                        continue
                    if _entry_intersects(kind, data, r):
                        found.add(eid)
        return found


def _entry_hits(kind, data, x, y, tolerance, tol_sq):
    if kind == _RECT:
        x0, y0, x1, y1 = data
        return x0 <= x <= x1 and y0 <= y <= y1
    if kind == _SEGMENT:
        x0, y0, x1, y1 = data
        return _seg_dist_sq(x, y, x0, y0, x1, y1) <= tol_sq
    bbox, coords = data
    if not (
        bbox[0] - tolerance <= x <= bbox[2] + tolerance
        and bbox[1] - tolerance <= y <= bbox[3] + tolerance
    ):
        return False
    for i in range(0, len(coords) - 2, 2):
        if _seg_dist_sq(x, y, coords[i], coords[i + 1], coords[i + 2], coords[i + 3]) <= tol_sq:
            return True
    return False


def _entry_intersects(kind, data, r: Rect):
    if kind == _RECT:
        x0, y0, x1, y1 = data
        return x0 <= r.right and r.x <= x1 and y0 <= r.bottom and r.y <= y1
    if kind == _SEGMENT:
        x0, y0, x1, y1 = data
        return _seg_intersects_rect(x0, y0, x1, y1, r.x, r.y, r.right, r.bottom)
    bbox, coords = data
    if not (bbox[0] <= r.right and r.x <= bbox[2] and bbox[1] <= r.bottom and r.y <= bbox[3]):
        return False
    for i in range(0, len(coords) - 2, 2):
        if _seg_intersects_rect(
            coords[i], coords[i + 1], coords[i + 2], coords[i + 3],
            r.x, r.y, r.right, r.bottom,
        ):
            return True
    return False


_testers: "weakref.WeakKeyDictionary[Document, HitTester]" = weakref.WeakKeyDictionary()


def _tester(doc: Document, m: TextMetrics) -> HitTester:
    tester = _testers.get(doc)
    if tester is None or tester._metrics != m:
        tester = HitTester(doc, m)
        _testers[doc] = tester
    return tester


def hit_test(
    doc: Document,
    m: TextMetrics,
    p: Point,
    tolerance: float = DEFAULT_HIT_TOLERANCE,
) -> Optional[int]:
    """Topmost element whose hit region contains p (within tolerance for
    lines and strokes); None on a miss."""
    return _tester(doc, m).hit(p.x, p.y, tolerance)


def rect_select(doc: Document, m: TextMetrics, r: Rect) -> set[int]:
    """Every element whose hit region intersects the selection box."""
    return _tester(doc, m).in_rect(r)


def content_bounds(doc: Document, m: TextMetrics) -> Optional[Rect]:
    """Tight bounding box of all elements, or None for an empty document."""
    box: Optional[Rect] = None
    class_rects: dict[int, Rect] = {}
    for element in doc.by_id():
        if isinstance(element, ClassBox):
            r = class_bounds(element, m)
            class_rects[element.id] = r
        elif isinstance(element, StickyNote):
            r = note_bounds(element, m)
        elif isinstance(element, Glyph):
            r = glyph_bounds(element)
        else:
            continue  # a connection stays inside the union box of its endpoints
        box = r if box is None else box.union(r)
    return box
