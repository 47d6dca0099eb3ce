"""Diagram document model: elements, lifecycle, and cascade deletion.

A Document owns four element kinds (class boxes, connections, sticky notes,
freehand glyphs) keyed by monotonically allocated integer ids.  Connections
are dependent objects: deleting a class box removes every connection touching
it, and the combined removal is reported as one unit so it can be undone as
one unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, Union


class ModelError(Exception):
    """Base class for document model errors."""


class IdMismatch(ModelError):
    """An id is unknown or refers to an element of the wrong kind."""


class DanglingEndpoint(ModelError):
    """A connection endpoint does not refer to an existing class box."""


class SelfLoopRejected(ModelError):
    """A connection's source and target are the same class box."""


class TooFewPoints(ModelError):
    """A glyph needs at least two points."""


@dataclass(frozen=True)
class Point:
    """A position (or displacement) in world units, y-down."""

    x: float
    y: float

    def translated(self, dx: float, dy: float) -> "Point":
        return Point(self.x + dx, self.y + dy)


@dataclass(frozen=True)
class Rect:
    """An axis-aligned rectangle in world units; width and height are >= 0."""

    x: float
    y: float
    width: float
    height: float

    @classmethod
    def from_corners(cls, x1: float, y1: float, x2: float, y2: float) -> "Rect":
        x, y = min(x1, x2), min(y1, y2)
        return cls(x, y, max(x1, x2) - x, max(y1, y2) - y)

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def center(self) -> Point:
        return Point(self.x + self.width / 2, self.y + self.height / 2)

    def contains(self, px: float, py: float) -> bool:
        return self.x <= px <= self.right and self.y <= py <= self.bottom

    def intersects(self, other: "Rect") -> bool:
        return (
            self.x <= other.right
            and other.x <= self.right
            and self.y <= other.bottom
            and other.y <= self.bottom
        )

    def union(self, other: "Rect") -> "Rect":
        x1 = min(self.x, other.x)
        y1 = min(self.y, other.y)
        x2 = max(self.right, other.right)
        y2 = max(self.bottom, other.bottom)
        return Rect(x1, y1, x2 - x1, y2 - y1)

    def inflated(self, amount: float) -> "Rect":
        return Rect(
            self.x - amount,
            self.y - amount,
            self.width + 2 * amount,
            self.height + 2 * amount,
        )


class ConnectionKind(Enum):
    """Relationship kinds a connection can take; GENERIC is the default."""

    GENERIC = "generic"
    ASSOCIATION = "association"
    AGGREGATION = "aggregation"
    INHERITANCE = "inheritance"


@dataclass
class ClassBox:
    """A class or interface with free-text member lines.

    Member lines are stored verbatim: no identifier, type, or punctuation
    rules are ever applied to them.
    """

    id: int
    name: str
    origin: Point
    is_interface: bool = False
    variables: list[str] = field(default_factory=list)
    methods: list[str] = field(default_factory=list)


@dataclass
class Connection:
    """A dependent edge between two class boxes.

    Direction is fixed at creation; only the kind may change afterwards.
    Geometry (anchors, label position) is derived, never stored.
    """

    id: int
    source: int
    target: int
    kind: ConnectionKind = ConnectionKind.GENERIC


@dataclass
class StickyNote:
    """A typed annotation, shown as an icon at rest unless pinned open."""

    id: int
    origin: Point
    text: str = ""
    pinned_open: bool = False


@dataclass
class Glyph:
    """A freehand polyline annotation; its point sequence is immutable."""

    id: int
    points: tuple[Point, ...]


Element = Union[ClassBox, Connection, StickyNote, Glyph]


@dataclass(frozen=True)
class DeletionRecord:
    """Everything removed by one delete, including cascaded connections."""

    removed: tuple[Element, ...]

    @property
    def ids(self) -> frozenset[int]:
        return frozenset(e.id for e in self.removed)


class Document:
    """Id-keyed element store with monotone id allocation.

    A document is a single-writer value: all mutation happens on one logical
    thread.  ``revision`` increments on every mutation so derived caches
    (e.g. spatial indexes) can tell when they are stale.
    """

    def __init__(self) -> None:
        self.elements: dict[int, Element] = {}
        self.next_id: int = 1
        self.name_counter: int = 1
        self.revision: int = 0

    # -- allocation -------------------------------------------------------

    def _allocate_id(self) -> int:
        eid = self.next_id
        self.next_id += 1
        return eid

    def _default_name(self) -> str:
        name = f"Class{self.name_counter}"
        self.name_counter += 1
        return name

    # -- lookup -----------------------------------------------------------

    def __contains__(self, eid: int) -> bool:
        return eid in self.elements

    def get(self, eid: int) -> Element:
        try:
            return self.elements[eid]
        except KeyError:
            raise IdMismatch(f"no element with id {eid}") from None

    def _get_typed(self, eid: int, kind: type) -> Element:
        element = self.get(eid)
        if not isinstance(element, kind):
            raise IdMismatch(
                f"element {eid} is {type(element).__name__}, not {kind.__name__}"
            )
        return element

    def class_box(self, eid: int) -> ClassBox:
        return self._get_typed(eid, ClassBox)  # type: ignore[return-value]

    def connection(self, eid: int) -> Connection:
        return self._get_typed(eid, Connection)  # type: ignore[return-value]

    def note(self, eid: int) -> StickyNote:
        return self._get_typed(eid, StickyNote)  # type: ignore[return-value]

    def glyph(self, eid: int) -> Glyph:
        return self._get_typed(eid, Glyph)  # type: ignore[return-value]

    def by_id(self) -> list[Element]:
        """Elements in id order, which is also creation and z-order."""
        return [self.elements[eid] for eid in sorted(self.elements)]

    def class_boxes(self) -> Iterator[ClassBox]:
        return (e for e in self.by_id() if isinstance(e, ClassBox))

    def connections(self) -> Iterator[Connection]:
        return (e for e in self.by_id() if isinstance(e, Connection))

    def connections_incident(self, ids: Iterable[int]) -> list[Connection]:
        wanted = set(ids)
        return [
            c
            for c in self.connections()
            if c.source in wanted or c.target in wanted
        ]

    # -- mutation ---------------------------------------------------------

    def create_class(self, origin: Point, name: Optional[str] = None) -> int:
        """Add a class box; an empty or missing name gets the next default."""
        self.revision += 1
        if not name:
            name = self._default_name()
        eid = self._allocate_id()
        self.elements[eid] = ClassBox(id=eid, name=name, origin=origin)
        return eid

    def edit_class(
        self,
        eid: int,
        name: str,
        is_interface: bool,
        variables: Sequence[str],
        methods: Sequence[str],
    ) -> None:
        """Replace all four editable fields in one step."""
        cls = self.class_box(eid)
        self.revision += 1
        cls.name = name if name else self._default_name()
        cls.is_interface = is_interface
        cls.variables = list(variables)
        cls.methods = list(methods)

    def create_connection(self, source: int, target: int) -> int:
        if source == target:
            raise SelfLoopRejected(f"connection endpoints are both {source}")
        for endpoint in (source, target):
            element = self.elements.get(endpoint)
            if not isinstance(element, ClassBox):
                raise DanglingEndpoint(f"endpoint {endpoint} is not a class box")
        self.revision += 1
        eid = self._allocate_id()
        self.elements[eid] = Connection(id=eid, source=source, target=target)
        return eid

    def set_connection_kind(self, eid: int, kind: ConnectionKind) -> None:
        conn = self.connection(eid)
        self.revision += 1
        conn.kind = kind

    def create_note(self, origin: Point, text: str = "") -> int:
        self.revision += 1
        eid = self._allocate_id()
        self.elements[eid] = StickyNote(id=eid, origin=origin, text=text)
        return eid

    def edit_note(self, eid: int, text: str, pinned_open: bool) -> None:
        note = self.note(eid)
        self.revision += 1
        note.text = text
        note.pinned_open = pinned_open

    def create_glyph(self, points: Sequence[Point]) -> int:
        if len(points) < 2:
            raise TooFewPoints(f"glyph needs >= 2 points, got {len(points)}")
        self.revision += 1
        eid = self._allocate_id()
        self.elements[eid] = Glyph(id=eid, points=tuple(points))
        return eid

    def translate_elements(self, ids: Iterable[int], delta: Point) -> None:
        """Shift class boxes, notes, and glyphs; connections in the set are
        skipped because their geometry is derived from their endpoints."""
        targets = [self.get(eid) for eid in sorted(set(ids))]
        self.revision += 1
        for element in targets:
            if isinstance(element, (ClassBox, StickyNote)):
                element.origin = element.origin.translated(delta.x, delta.y)
            elif isinstance(element, Glyph):
                element.points = tuple(
                    p.translated(delta.x, delta.y) for p in element.points
                )

    def delete_elements(self, ids: Iterable[int]) -> DeletionRecord:
        """Remove the given elements plus every connection incident to a
        removed class box; returns the full removed set as one unit."""
        requested = sorted(set(ids))
        for eid in requested:
            self.get(eid)
        doomed = set(requested)
        doomed_classes = {
            eid for eid in doomed if isinstance(self.elements[eid], ClassBox)
        }
        for conn in self.connections_incident(doomed_classes):
            doomed.add(conn.id)
        self.revision += 1
        removed = tuple(self.elements.pop(eid) for eid in sorted(doomed))
        return DeletionRecord(removed=removed)

    def restore_elements(self, record: DeletionRecord) -> None:
        """Reinsert a deletion's elements under their original ids."""
        for element in record.removed:
            if element.id in self.elements:
                raise IdMismatch(f"id {element.id} is already occupied")
        self.revision += 1
        for element in record.removed:
            self.elements[element.id] = element

    # -- integrity --------------------------------------------------------

    def check_invariants(self) -> list[str]:
        """Full-scan invariant check; returns a list of violation messages."""
        problems = []
        for eid, element in self.elements.items():
            if eid != element.id:
                problems.append(f"element keyed {eid} carries id {element.id}")
            if eid <= 0:
                problems.append(f"element id {eid} is not positive")
            if eid >= self.next_id:
                problems.append(
                    f"element id {eid} is not below next_id {self.next_id}"
                )
        for conn in list(self.connections()):
            for endpoint in (conn.source, conn.target):
                if not isinstance(self.elements.get(endpoint), ClassBox):
                    problems.append(
                        f"connection {conn.id} endpoint {endpoint} "
                        "is not a live class box"
                    )
            if conn.source == conn.target:
                problems.append(f"connection {conn.id} is a self-loop")
        for element in self.elements.values():
            if isinstance(element, ClassBox) and not element.name:
                problems.append(f"class {element.id} has an empty name")
            if isinstance(element, Glyph) and len(element.points) < 2:
                problems.append(f"glyph {element.id} has fewer than 2 points")
        return problems
