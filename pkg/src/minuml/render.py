"""Scene rendering, pagination, and vector/raster export.

A document snapshot renders to a flat list of device-independent drawing
commands in world units; exporters map those commands onto SVG or PNG.
Printing tiles a world-space region into a page grid at scale 1, or shrinks
the whole region onto a single page for an overview; each rendered page
carries a miniature key showing its position in the grid.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .geometry import (
    INTERFACE_MARKER,
    NOTE_ICON_SIZE,
    RouteResult,
    TextMetrics,
    class_bounds,
    content_bounds,
    glyph_bounds,
    note_expanded_bounds,
    note_text_lines,
    route_connection,
)
from .model import (
    ClassBox,
    Connection,
    ConnectionKind,
    Document,
    Glyph,
    Rect,
    StickyNote,
)


class EmptyPrintRegion(Exception):
    """Nothing to print: empty document and no explicit region."""


class RasterTooLarge(Exception):
    """Requested raster output exceeds the 16384x16384 pixel ceiling."""


class PageSize(Enum):
    LETTER = "letter"
    A4 = "a4"


class Orientation(Enum):
    PORTRAIT = "portrait"
    LANDSCAPE = "landscape"


PAGE_POINTS = {
    PageSize.LETTER: (612.0, 792.0),
    PageSize.A4: (595.0, 842.0),
}

HIGHLIGHT_COLOR = "#3b82f6"
NOTE_FILL = "#fdf6b2"
RASTER_LIMIT = 16384


# -- drawing commands ---------------------------------------------------------


@dataclass(frozen=True)
class LineCmd:
    x1: float
    y1: float
    x2: float
    y2: float
    width: float = 1.0
    color: str = "black"
    dash: tuple[float, ...] = ()
    tag: str = ""


@dataclass(frozen=True)
class PolylineCmd:
    points: tuple[tuple[float, float], ...]
    width: float = 1.0
    color: str = "black"
    tag: str = ""


@dataclass(frozen=True)
class RectCmd:
    x: float
    y: float
    width: float
    height: float
    stroke_width: float = 1.0
    color: str = "black"
    fill: bool = False
    fill_color: str = "white"
    dash: tuple[float, ...] = ()
    tag: str = ""


@dataclass(frozen=True)
class PolygonCmd:
    points: tuple[tuple[float, float], ...]
    stroke_width: float = 1.0
    color: str = "black"
    fill: bool = False
    fill_color: str = "white"
    tag: str = ""


@dataclass(frozen=True)
class TextCmd:
    x: float
    y: float  # baseline
    text: str
    size: float = 12.0
    color: str = "black"
    anchor: str = "start"  # or "middle"
    tag: str = ""


DrawCmd = Union[LineCmd, PolylineCmd, RectCmd, PolygonCmd, TextCmd]


@dataclass(frozen=True)
class ViewState:
    """Transient presentation state; never part of the document."""

    selected: frozenset[int] = frozenset()
    hover: Optional[int] = None
    notes_expanded_all: bool = False


# -- scene rendering ----------------------------------------------------------


def render_scene(
    doc: Document,
    m: TextMetrics,
    view_state: Optional[ViewState] = None,
) -> list[DrawCmd]:
    """Draw every element in z-order (creation order, later on top).

    Classes are three-compartment boxes; connections carry their kind symbol
    and a text label, except that a generic connection's label appears only
    while it is selected or hovered; notes show as icons unless pinned open,
    selected, hovered, or globally expanded; selected elements get a
    highlight outline.
    """
    vs = view_state or ViewState()
    cmds: list[DrawCmd] = []
    class_rects: dict[int, Rect] = {}
    for element in doc.by_id():
        if isinstance(element, ClassBox):
            class_rects[element.id] = class_bounds(element, m)
    for element in doc.by_id():
        active = element.id in vs.selected or element.id == vs.hover
        if isinstance(element, ClassBox):
            bounds = class_rects[element.id]
            cmds.extend(_class_cmds(element, bounds, m))
            if element.id in vs.selected:
                cmds.append(_highlight_rect(bounds))
        elif isinstance(element, Connection):
            route = route_connection(
                element, class_rects[element.source], class_rects[element.target]
            )
            cmds.extend(_connection_cmds(element, route, active))
            if element.id in vs.selected:
                cmds.append(
                    LineCmd(
                        route.source_anchor.x,
                        route.source_anchor.y,
                        route.target_anchor.x,
                        route.target_anchor.y,
                        width=3.0,
                        color=HIGHLIGHT_COLOR,
                        tag="highlight",
                    )
                )
        elif isinstance(element, StickyNote):
            expanded = (
                element.pinned_open
                or active
                or vs.notes_expanded_all
            )
            bounds = _note_cmds(cmds, element, m, expanded)
            if element.id in vs.selected:
                cmds.append(_highlight_rect(bounds))
        elif isinstance(element, Glyph):
            cmds.append(
                PolylineCmd(
                    points=tuple((p.x, p.y) for p in element.points),
                    width=1.5,
                    tag="glyph",
                )
            )
            if element.id in vs.selected:
                cmds.append(_highlight_rect(glyph_bounds(element)))
    return cmds


def _highlight_rect(bounds: Rect) -> RectCmd:
    r = bounds.inflated(3.0)
    return RectCmd(
        r.x, r.y, r.width, r.height,
        color=HIGHLIGHT_COLOR, dash=(4.0, 2.0), tag="highlight",
    )


def _class_cmds(cls: ClassBox, bounds: Rect, m: TextMetrics) -> list[DrawCmd]:
    cmds: list[DrawCmd] = [
        RectCmd(
            bounds.x, bounds.y, bounds.width, bounds.height,
            fill=True, fill_color="white", tag="class",
        )
    ]
    size = 0.75 * m.line_height
    x = bounds.x + m.padding
    row_top = bounds.y + m.padding

    def text_row(text: str, tag: str) -> None:
        nonlocal row_top
        cmds.append(TextCmd(x, row_top + size, text, size=size, tag=tag))
        row_top += m.line_height

    def separator() -> None:
        nonlocal row_top
        y = row_top + m.line_height / 2
        cmds.append(LineCmd(bounds.x, y, bounds.right, y, tag="class-separator"))
        row_top += m.line_height

    if cls.is_interface:
        text_row(INTERFACE_MARKER, "class-stereotype")
    text_row(cls.name, "class-name")
    separator()
    for line in cls.variables:
        text_row(line, "class-variable")
    separator()
    for line in cls.methods:
        text_row(line, "class-method")
    return cmds


_DECORATION_LENGTH = 12.0
_DECORATION_HALF_WIDTH = 5.0


def _connection_cmds(conn: Connection, route: RouteResult, active: bool) -> list[DrawCmd]:
    sa, ta = route.source_anchor, route.target_anchor
    cmds: list[DrawCmd] = [LineCmd(sa.x, sa.y, ta.x, ta.y, tag="connection")]
    dx = ta.x - sa.x
    dy = ta.y - sa.y
    length = math.hypot(dx, dy)
    if route.decoration and length > 0:
        ux, uy = dx / length, dy / length
        nx, ny = -uy, ux
        tip = (ta.x, ta.y)
        back_x = ta.x - ux * _DECORATION_LENGTH
        back_y = ta.y - uy * _DECORATION_LENGTH
        left = (
            back_x + nx * _DECORATION_HALF_WIDTH,
            back_y + ny * _DECORATION_HALF_WIDTH,
        )
        right = (
            back_x - nx * _DECORATION_HALF_WIDTH,
            back_y - ny * _DECORATION_HALF_WIDTH,
        )
        if route.decoration == "triangle":
            cmds.append(
                PolygonCmd(
                    points=(tip, left, right),
                    fill=True, fill_color="white", tag="connection-decoration",
                )
            )
        elif route.decoration == "diamond":
            mid = (
                ta.x - ux * _DECORATION_LENGTH / 2,
                ta.y - uy * _DECORATION_LENGTH / 2,
            )
            cmds.append(
                PolygonCmd(
                    points=(
                        tip,
                        (mid[0] + nx * _DECORATION_HALF_WIDTH, mid[1] + ny * _DECORATION_HALF_WIDTH),
                        (back_x, back_y),
                        (mid[0] - nx * _DECORATION_HALF_WIDTH, mid[1] - ny * _DECORATION_HALF_WIDTH),
                    ),
                    fill=True, fill_color="white", tag="connection-decoration",
                )
            )
        elif route.decoration == "arrow":
            cmds.append(
                PolylineCmd(
                    points=(left, tip, right), tag="connection-decoration",
                )
            )
    show_label = conn.kind is not ConnectionKind.GENERIC or active
    if show_label:
        cmds.append(
            TextCmd(
                route.label_anchor.x,
                route.label_anchor.y,
                conn.kind.value,
                anchor="middle",
                tag="connection-label",
            )
        )
    return cmds


def _note_cmds(cmds: list, note: StickyNote, m: TextMetrics, expanded: bool) -> Rect:
    if not expanded:
        x, y = note.origin.x, note.origin.y
        s = NOTE_ICON_SIZE
        fold = s * 0.35
        cmds.append(
            RectCmd(x, y, s, s, fill=True, fill_color=NOTE_FILL, tag="note-icon")
        )
        cmds.append(LineCmd(x + s - fold, y, x + s - fold, y + fold, tag="note-icon"))
        cmds.append(LineCmd(x + s - fold, y + fold, x + s, y + fold, tag="note-icon"))
        return Rect(x, y, s, s)
    bounds = note_expanded_bounds(note, m)
    cmds.append(
        RectCmd(
            bounds.x, bounds.y, bounds.width, bounds.height,
            fill=True, fill_color=NOTE_FILL, tag="note",
        )
    )
    size = 0.75 * m.line_height
    for i, line in enumerate(note_text_lines(note)):
        cmds.append(
            TextCmd(
                bounds.x + m.padding,
                bounds.y + m.padding + i * m.line_height + size,
                line,
                size=size,
                tag="note-text",
            )
        )
    return bounds


# -- pagination ----------------------------------------------------------------


@dataclass(frozen=True)
class PageSetup:
    """Physical page description plus the world-to-point scale."""

    page_size: PageSize = PageSize.LETTER
    orientation: Orientation = Orientation.PORTRAIT
    margin: float = 36.0
    units_per_point: float = 1.0

    def page_points(self) -> tuple[float, float]:
        w, h = PAGE_POINTS[self.page_size]
        if self.orientation is Orientation.LANDSCAPE:
            return h, w
        return w, h

    def printable_points(self) -> tuple[float, float]:
        w, h = self.page_points()
        return w - 2 * self.margin, h - 2 * self.margin

    def printable_world(self) -> tuple[float, float]:
        w, h = self.printable_points()
        return w * self.units_per_point, h * self.units_per_point


@dataclass(frozen=True)
class PageCell:
    col: int
    row: int
    source: Rect  # world-space region this page shows


@dataclass(frozen=True)
class PagePlan:
    """A print region tiled into a cols x rows grid of pages (row-major).

    The page source rects partition the region exactly: edge pages are
    clipped to the region instead of spilling past it.
    """

    region: Rect
    setup: PageSetup
    cols: int
    rows: int
    scale: float
    pages: tuple[PageCell, ...]

    def page_at(self, col: int, row: int) -> PageCell:
        if not (0 <= col < self.cols and 0 <= row < self.rows):
            raise IndexError(
                f"page ({col}, {row}) outside {self.cols}x{self.rows} plan"
            )
        return self.pages[row * self.cols + col]


def paginate(
    doc: Document,
    m: TextMetrics,
    setup: PageSetup,
    region: Optional[Rect] = None,
    fit_one_page: bool = False,
) -> PagePlan:
    """Plan pages for a region (default: content bounds plus one padding).

    fit_one_page shrinks the whole region onto a single page; it never
    enlarges a small diagram past 1:1.
    """
    if region is None:
        box = content_bounds(doc, m)
        if box is None:
            raise EmptyPrintRegion("empty document and no explicit print region")
        region = box.inflated(m.padding)
    if region.width <= 0 or region.height <= 0:
        raise EmptyPrintRegion(f"print region {region} has no area")
    pw, ph = setup.printable_world()
    if fit_one_page:
        scale = min(1.0, pw / region.width, ph / region.height)
        return PagePlan(
            region=region,
            setup=setup,
            cols=1,
            rows=1,
            scale=scale,
            pages=(PageCell(0, 0, region),),
        )
    cols = max(1, math.ceil(region.width / pw))
    rows = max(1, math.ceil(region.height / ph))
    pages = []
    for row in range(rows):
        for col in range(cols):
            x = region.x + col * pw
            y = region.y + row * ph
            pages.append(
                PageCell(
                    col,
                    row,
                    Rect(x, y, min(pw, region.right - x), min(ph, region.bottom - y)),
                )
            )
    return PagePlan(
        region=region, setup=setup, cols=cols, rows=rows, scale=1.0,
        pages=tuple(pages),
    )


KEY_CELL_POINTS = 10.0


def _page_key_cmds(plan: PagePlan, cell: PageCell) -> list[DrawCmd]:
    """Miniature grid at the page's bottom-left; this page's cell is filled."""
    page_w, page_h = plan.setup.page_points()
    margin = plan.setup.margin
    key_top = page_h - margin - plan.rows * KEY_CELL_POINTS
    cmds: list[DrawCmd] = []
    for row in range(plan.rows):
        for col in range(plan.cols):
            filled = col == cell.col and row == cell.row
            cmds.append(
                RectCmd(
                    margin + col * KEY_CELL_POINTS,
                    key_top + row * KEY_CELL_POINTS,
                    KEY_CELL_POINTS,
                    KEY_CELL_POINTS,
                    fill=filled,
                    fill_color="black",
                    tag="page-key-cell" if filled else "page-key",
                )
            )
    return cmds


def render_page(
    plan: PagePlan,
    index: tuple[int, int],
    doc: Document,
    m: TextMetrics,
) -> list[DrawCmd]:
    """One page's commands in page coordinates (points): the content clipped
    to the page's source rect, plus the position key."""
    cell = plan.page_at(*index)
    setup = plan.setup
    scale = plan.scale / setup.units_per_point
    ox = setup.margin - cell.source.x * scale
    oy = setup.margin - cell.source.y * scale
    clip = Rect(
        setup.margin,
        setup.margin,
        cell.source.width * scale,
        cell.source.height * scale,
    )
    out: list[DrawCmd] = []
    for cmd in render_scene(doc, m):
        transformed = _transform_cmd(cmd, scale, ox, oy)
        out.extend(_clip_cmd(transformed, clip))
    out.extend(_page_key_cmds(plan, cell))
    return out


def page_boundary_overlay(plan: PagePlan) -> list[DrawCmd]:
    """World-space page boundaries plus the darker print-region outline,
    produced on request; never document state."""
    cmds: list[DrawCmd] = []
    for cell in plan.pages:
        r = cell.source
        cmds.append(
            RectCmd(
                r.x, r.y, r.width, r.height,
                color="#888888", dash=(6.0, 4.0), tag="page-boundary",
            )
        )
    region = plan.region
    cmds.append(
        RectCmd(
            region.x, region.y, region.width, region.height,
            stroke_width=2.0, color="#444444", tag="print-region",
        )
    )
    return cmds


# -- transform + clip ----------------------------------------------------------


def _transform_cmd(cmd: DrawCmd, s: float, ox: float, oy: float) -> DrawCmd:
    if isinstance(cmd, LineCmd):
        return LineCmd(
            cmd.x1 * s + ox, cmd.y1 * s + oy, cmd.x2 * s + ox, cmd.y2 * s + oy,
            width=cmd.width * s, color=cmd.color,
            dash=tuple(d * s for d in cmd.dash), tag=cmd.tag,
        )
    if isinstance(cmd, PolylineCmd):
        return PolylineCmd(
            points=tuple((x * s + ox, y * s + oy) for x, y in cmd.points),
            width=cmd.width * s, color=cmd.color, tag=cmd.tag,
        )
    if isinstance(cmd, RectCmd):
        return RectCmd(
            cmd.x * s + ox, cmd.y * s + oy, cmd.width * s, cmd.height * s,
            stroke_width=cmd.stroke_width * s, color=cmd.color,
            fill=cmd.fill, fill_color=cmd.fill_color,
            dash=tuple(d * s for d in cmd.dash), tag=cmd.tag,
        )
    if isinstance(cmd, PolygonCmd):
        return PolygonCmd(
            points=tuple((x * s + ox, y * s + oy) for x, y in cmd.points),
            stroke_width=cmd.stroke_width * s, color=cmd.color,
            fill=cmd.fill, fill_color=cmd.fill_color, tag=cmd.tag,
        )
    return TextCmd(
        cmd.x * s + ox, cmd.y * s + oy, cmd.text,
        size=cmd.size * s, color=cmd.color, anchor=cmd.anchor, tag=cmd.tag,
    )


def _clip_segment(x1, y1, x2, y2, clip: Rect):
    dx = x2 - x1
    dy = y2 - y1
    t0, t1 = 0.0, 1.0
    for p, q in (
        (-dx, x1 - clip.x),
        (dx, clip.right - x1),
        (-dy, y1 - clip.y),
        (dy, clip.bottom - y1),
    ):
        if p == 0.0:
            if q < 0.0:
                return None
        else:
            r = q / p
            if p < 0.0:
                if r > t1:
                    return None
                if r > t0:
                    t0 = r
            else:
                if r < t0:
                    return None
                if r < t1:
                    t1 = r
    return (x1 + t0 * dx, y1 + t0 * dy, x1 + t1 * dx, y1 + t1 * dy)


def _clip_polygon_points(points, clip: Rect):
    # Sutherland-Hodgman against each clip edge in turn.
    def clip_edge(pts, inside, intersect):
        out = []
        for i, current in enumerate(pts):
            previous = pts[i - 1]
            cur_in = inside(current)
            prev_in = inside(previous)
            if cur_in:
                if not prev_in:
                    out.append(intersect(previous, current))
                out.append(current)
            elif prev_in:
                out.append(intersect(previous, current))
        return out

    def x_cross(a, b, x):
        t = (x - a[0]) / (b[0] - a[0])
        return (x, a[1] + t * (b[1] - a[1]))

    def y_cross(a, b, y):
        t = (y - a[1]) / (b[1] - a[1])
        return (a[0] + t * (b[0] - a[0]), y)

    pts = list(points)
    for inside, intersect in (
        (lambda p: p[0] >= clip.x, lambda a, b: x_cross(a, b, clip.x)),
        (lambda p: p[0] <= clip.right, lambda a, b: x_cross(a, b, clip.right)),
        (lambda p: p[1] >= clip.y, lambda a, b: y_cross(a, b, clip.y)),
        (lambda p: p[1] <= clip.bottom, lambda a, b: y_cross(a, b, clip.bottom)),
    ):
        if not pts:
            return None
        pts = clip_edge(pts, inside, intersect)
    return tuple(pts) if len(pts) >= 3 else None


def _clip_cmd(cmd: DrawCmd, clip: Rect) -> list[DrawCmd]:
    if isinstance(cmd, LineCmd):
        seg = _clip_segment(cmd.x1, cmd.y1, cmd.x2, cmd.y2, clip)
        if seg is None:
            return []
        return [
            LineCmd(*seg, width=cmd.width, color=cmd.color, dash=cmd.dash, tag=cmd.tag)
        ]
    if isinstance(cmd, PolylineCmd):
        runs: list[list[tuple[float, float]]] = []
        for i in range(len(cmd.points) - 1):
            seg = _clip_segment(*cmd.points[i], *cmd.points[i + 1], clip)
            if seg is None:
                continue
            a = (seg[0], seg[1])
            b = (seg[2], seg[3])
            if runs and runs[-1][-1] == a:
                runs[-1].append(b)
            else:
                runs.append([a, b])
        return [
            PolylineCmd(points=tuple(run), width=cmd.width, color=cmd.color, tag=cmd.tag)
            for run in runs
        ]
    if isinstance(cmd, RectCmd):
        x = max(cmd.x, clip.x)
        y = max(cmd.y, clip.y)
        right = min(cmd.x + cmd.width, clip.right)
        bottom = min(cmd.y + cmd.height, clip.bottom)
        if right <= x or bottom <= y:
            return []
        return [
            RectCmd(
                x, y, right - x, bottom - y,
                stroke_width=cmd.stroke_width, color=cmd.color,
                fill=cmd.fill, fill_color=cmd.fill_color,
                dash=cmd.dash, tag=cmd.tag,
            )
        ]
    if isinstance(cmd, PolygonCmd):
        pts = _clip_polygon_points(cmd.points, clip)
        if pts is None:
            return []
        return [
            PolygonCmd(
                points=pts, stroke_width=cmd.stroke_width, color=cmd.color,
                fill=cmd.fill, fill_color=cmd.fill_color, tag=cmd.tag,
            )
        ]
    if clip.contains(cmd.x, cmd.y):
        return [cmd]
    return []


# -- export ---------------------------------------------------------------------


def _fmt_num(v: float) -> str:
    if v == int(v):
        return str(int(v))
    text = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _cmd_bounds(cmd: DrawCmd) -> Rect:
    if isinstance(cmd, LineCmd):
        return Rect.from_corners(cmd.x1, cmd.y1, cmd.x2, cmd.y2)
    if isinstance(cmd, (PolylineCmd, PolygonCmd)):
        xs = [p[0] for p in cmd.points]
        ys = [p[1] for p in cmd.points]
        return Rect.from_corners(min(xs), min(ys), max(xs), max(ys))
    if isinstance(cmd, RectCmd):
        return Rect(cmd.x, cmd.y, cmd.width, cmd.height)
    return Rect(cmd.x, cmd.y - cmd.size, cmd.size * 0.6 * len(cmd.text), cmd.size)


def commands_bounds(cmds: Sequence[DrawCmd], pad: float = 8.0) -> Rect:
    """Bounding box of a command list, padded; a 1x1 box when empty."""
    if not cmds:
        return Rect(0.0, 0.0, 1.0, 1.0)
    box = _cmd_bounds(cmds[0])
    for cmd in cmds[1:]:
        box = box.union(_cmd_bounds(cmd))
    return box.inflated(pad)


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def export_svg(
    cmds: Sequence[DrawCmd],
    viewbox: Optional[Rect] = None,
    background: Optional[str] = None,
) -> bytes:
    """Serialize commands to standalone SVG 1.1 bytes (deterministic)."""
    vb = viewbox or commands_bounds(cmds)
    f = _fmt_num
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1"'
        f' viewBox="{f(vb.x)} {f(vb.y)} {f(vb.width)} {f(vb.height)}"'
        f' width="{f(vb.width)}" height="{f(vb.height)}">',
    ]
    if background:
        out.append(
            f'<rect x="{f(vb.x)}" y="{f(vb.y)}" width="{f(vb.width)}"'
            f' height="{f(vb.height)}" fill="{background}" stroke="none"/>'
        )
    for cmd in cmds:
        out.append(_svg_element(cmd))
    out.append("</svg>")
    out.append("")
    return "\n".join(out).encode("utf-8")


def _dash_attr(dash: tuple[float, ...]) -> str:
    if not dash:
        return ""
    return f' stroke-dasharray="{",".join(_fmt_num(d) for d in dash)}"'


def _svg_element(cmd: DrawCmd) -> str:
    f = _fmt_num
    if isinstance(cmd, LineCmd):
        return (
            f'<line x1="{f(cmd.x1)}" y1="{f(cmd.y1)}" x2="{f(cmd.x2)}" y2="{f(cmd.y2)}"'
            f' stroke="{cmd.color}" stroke-width="{f(cmd.width)}"'
            f"{_dash_attr(cmd.dash)}/>"
        )
    if isinstance(cmd, PolylineCmd):
        pts = " ".join(f"{f(x)},{f(y)}" for x, y in cmd.points)
        return (
            f'<polyline points="{pts}" fill="none" stroke="{cmd.color}"'
            f' stroke-width="{f(cmd.width)}"/>'
        )
    if isinstance(cmd, RectCmd):
        fill = cmd.fill_color if cmd.fill else "none"
        return (
            f'<rect x="{f(cmd.x)}" y="{f(cmd.y)}" width="{f(cmd.width)}"'
            f' height="{f(cmd.height)}" fill="{fill}" stroke="{cmd.color}"'
            f' stroke-width="{f(cmd.stroke_width)}"{_dash_attr(cmd.dash)}/>'
        )
    if isinstance(cmd, PolygonCmd):
        pts = " ".join(f"{f(x)},{f(y)}" for x, y in cmd.points)
        fill = cmd.fill_color if cmd.fill else "none"
        return (
            f'<polygon points="{pts}" fill="{fill}" stroke="{cmd.color}"'
            f' stroke-width="{f(cmd.stroke_width)}"/>'
        )
    anchor = ' text-anchor="middle"' if cmd.anchor == "middle" else ""
    return (
        f'<text x="{f(cmd.x)}" y="{f(cmd.y)}" font-family="monospace"'
        f' font-size="{f(cmd.size)}" fill="{cmd.color}"{anchor}>'
        f"{_xml_escape(cmd.text)}</text>"
    )


def export_png(
    cmds: Sequence[DrawCmd],
    dpi: float = 96.0,
    viewbox: Optional[Rect] = None,
    background: str = "white",
) -> bytes:
    """Rasterize commands to PNG bytes at the given dpi (72 world units per
    inch); dash patterns are drawn solid.  Fixed settings keep the output
    byte-deterministic for identical inputs."""
    from PIL import Image, ImageDraw, ImageFont

    vb = viewbox or commands_bounds(cmds)
    scale = dpi / 72.0
    width = max(1, math.ceil(vb.width * scale))
    height = max(1, math.ceil(vb.height * scale))
    if width > RASTER_LIMIT or height > RASTER_LIMIT:
        raise RasterTooLarge(f"{width}x{height} exceeds {RASTER_LIMIT} pixel limit")
    img = Image.new("RGB", (width, height), background)
    draw = ImageDraw.Draw(img)

    def tx(x: float, y: float) -> tuple[float, float]:
        return (x - vb.x) * scale, (y - vb.y) * scale

    for cmd in cmds:
        if isinstance(cmd, LineCmd):
            draw.line(
                [tx(cmd.x1, cmd.y1), tx(cmd.x2, cmd.y2)],
                fill=cmd.color,
                width=max(1, round(cmd.width * scale)),
            )
        elif isinstance(cmd, PolylineCmd):
            draw.line(
                [tx(x, y) for x, y in cmd.points],
                fill=cmd.color,
                width=max(1, round(cmd.width * scale)),
            )
        elif isinstance(cmd, RectCmd):
            a = tx(cmd.x, cmd.y)
            b = tx(cmd.x + cmd.width, cmd.y + cmd.height)
            draw.rectangle(
                [a, b],
                outline=cmd.color,
                fill=cmd.fill_color if cmd.fill else None,
                width=max(1, round(cmd.stroke_width * scale)),
            )
        elif isinstance(cmd, PolygonCmd):
            draw.polygon(
                [tx(x, y) for x, y in cmd.points],
                outline=cmd.color,
                fill=cmd.fill_color if cmd.fill else None,
            )
        elif isinstance(cmd, TextCmd):
            font = ImageFont.load_default(size=cmd.size * scale)
            anchor = "ms" if cmd.anchor == "middle" else "ls"
            draw.text(
                tx(cmd.x, cmd.y), cmd.text, fill=cmd.color, font=font, anchor=anchor
            )
    buf = io.BytesIO()
    img.save(buf, format="PNG", optimize=False, compress_level=6)
    return buf.getvalue()
