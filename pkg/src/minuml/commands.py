"""Invertible command engine with an unbounded undo/redo history.

Every document edit is a Command that knows how to apply itself and how to
revert itself exactly, including restoring the id and name counters it
advanced.  That makes apply/revert a true inverse pair: reverting a command
returns the document to a byte-identical canonical serialization.

Loading a file is itself a command whose inverse is a snapshot of the whole
prior document, so opening a file can be undone like any other action.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import (
    ClassBox,
    Connection,
    ConnectionKind,
    DeletionRecord,
    Document,
    Element,
    Glyph,
    Point,
    StickyNote,
)


class Command:
    """One undoable edit.  apply() then revert() restores the pre-state
    exactly; revert() then apply() restores the post-state exactly."""

    def apply(self, doc: Document) -> None:
        raise NotImplementedError

    def revert(self, doc: Document) -> None:
        raise NotImplementedError


@dataclass
class CreateClass(Command):
    origin: Point
    name: Optional[str] = None
    created_id: Optional[int] = None
    _prior_next_id: int = 0
    _prior_name_counter: int = 0

    def apply(self, doc: Document) -> None:
        self._prior_next_id = doc.next_id
        self._prior_name_counter = doc.name_counter
        self.created_id = doc.create_class(self.origin, self.name)

    def revert(self, doc: Document) -> None:
        assert self.created_id is not None
        del doc.elements[self.created_id]
        doc.next_id = self._prior_next_id
        doc.name_counter = self._prior_name_counter
        doc.revision += 1


@dataclass
class EditClass(Command):
    target: int
    name: str
    is_interface: bool
    variables: Sequence[str]
    methods: Sequence[str]
    _prior: Optional[ClassBox] = None
    _prior_name_counter: int = 0

    def apply(self, doc: Document) -> None:
        cls = doc.class_box(self.target)
        self._prior = copy.deepcopy(cls)
        self._prior_name_counter = doc.name_counter
        doc.edit_class(
            self.target, self.name, self.is_interface, self.variables, self.methods
        )

    def revert(self, doc: Document) -> None:
        assert self._prior is not None
        cls = doc.class_box(self.target)
        cls.name = self._prior.name
        cls.is_interface = self._prior.is_interface
        cls.variables = list(self._prior.variables)
        cls.methods = list(self._prior.methods)
        doc.name_counter = self._prior_name_counter
        doc.revision += 1


@dataclass
class CreateConnection(Command):
    source: int
    target: int
    created_id: Optional[int] = None
    _prior_next_id: int = 0

    def apply(self, doc: Document) -> None:
        self._prior_next_id = doc.next_id
        self.created_id = doc.create_connection(self.source, self.target)

    def revert(self, doc: Document) -> None:
        assert self.created_id is not None
        del doc.elements[self.created_id]
        doc.next_id = self._prior_next_id
        doc.revision += 1


@dataclass
class SetConnectionKind(Command):
    target: int
    kind: ConnectionKind
    _prior_kind: Optional[ConnectionKind] = None

    def apply(self, doc: Document) -> None:
        self._prior_kind = doc.connection(self.target).kind
        doc.set_connection_kind(self.target, self.kind)

    def revert(self, doc: Document) -> None:
        assert self._prior_kind is not None
        doc.set_connection_kind(self.target, self._prior_kind)


@dataclass
class CreateNote(Command):
    origin: Point
    text: str = ""
    created_id: Optional[int] = None
    _prior_next_id: int = 0

    def apply(self, doc: Document) -> None:
        self._prior_next_id = doc.next_id
        self.created_id = doc.create_note(self.origin, self.text)

    def revert(self, doc: Document) -> None:
        assert self.created_id is not None
        del doc.elements[self.created_id]
        doc.next_id = self._prior_next_id
        doc.revision += 1


@dataclass
class EditNote(Command):
    target: int
    text: str
    pinned_open: bool
    _prior_text: str = ""
    _prior_pinned: bool = False

    def apply(self, doc: Document) -> None:
        note = doc.note(self.target)
        self._prior_text = note.text
        self._prior_pinned = note.pinned_open
        doc.edit_note(self.target, self.text, self.pinned_open)

    def revert(self, doc: Document) -> None:
        doc.edit_note(self.target, self._prior_text, self._prior_pinned)


@dataclass
class CreateGlyph(Command):
    points: Sequence[Point]
    created_id: Optional[int] = None
    _prior_next_id: int = 0

    def apply(self, doc: Document) -> None:
        self._prior_next_id = doc.next_id
        self.created_id = doc.create_glyph(self.points)

    def revert(self, doc: Document) -> None:
        assert self.created_id is not None
        del doc.elements[self.created_id]
        doc.next_id = self._prior_next_id
        doc.revision += 1


@dataclass
class Translate(Command):
    """One drag's displacement; a continuous drag arrives as one command.

    The prior positions are captured rather than recomputed by shifting
    back, so revert is exact even where float addition would not be.
    """

    ids: frozenset[int]
    delta: Point
    _prior_positions: dict[int, object] = field(default_factory=dict)

    def apply(self, doc: Document) -> None:
        positions: dict[int, object] = {}
        for eid in sorted(self.ids):
            element = doc.get(eid)
            if isinstance(element, (ClassBox, StickyNote)):
                positions[eid] = element.origin
            elif isinstance(element, Glyph):
                positions[eid] = element.points
        self._prior_positions = positions
        doc.translate_elements(self.ids, self.delta)

    def revert(self, doc: Document) -> None:
        for eid, prior in self._prior_positions.items():
            element = doc.get(eid)
            if isinstance(element, (ClassBox, StickyNote)):
                element.origin = prior  # type: ignore[assignment]
            elif isinstance(element, Glyph):
                element.points = prior  # type: ignore[assignment]
        doc.revision += 1


@dataclass
class Delete(Command):
    ids: frozenset[int]
    record: Optional[DeletionRecord] = None

    def apply(self, doc: Document) -> None:
        self.record = doc.delete_elements(self.ids)

    def revert(self, doc: Document) -> None:
        assert self.record is not None
        doc.restore_elements(self.record)


@dataclass
class PasteInsert(Command):
    """Insert copies of a parsed clipboard payload under fresh ids.

    ``elements`` keep their payload-local ids; apply() remaps them (and the
    connection endpoints among them) onto newly allocated ids, shifted by
    ``offset``.
    """

    elements: tuple[Element, ...]
    offset: Point
    new_ids: tuple[int, ...] = ()
    _prior_next_id: int = 0

    def apply(self, doc: Document) -> None:
        self._prior_next_id = doc.next_id
        mapping: dict[int, int] = {}
        ordered = sorted(self.elements, key=lambda e: e.id)
        for element in ordered:
            mapping[element.id] = doc._allocate_id()
        dx, dy = self.offset.x, self.offset.y
        doc.revision += 1
        for element in ordered:
            eid = mapping[element.id]
            if isinstance(element, ClassBox):
                doc.elements[eid] = ClassBox(
                    id=eid,
                    name=element.name,
                    origin=element.origin.translated(dx, dy),
                    is_interface=element.is_interface,
                    variables=list(element.variables),
                    methods=list(element.methods),
                )
            elif isinstance(element, Connection):
                doc.elements[eid] = Connection(
                    id=eid,
                    source=mapping[element.source],
                    target=mapping[element.target],
                    kind=element.kind,
                )
            elif isinstance(element, StickyNote):
                doc.elements[eid] = StickyNote(
                    id=eid,
                    origin=element.origin.translated(dx, dy),
                    text=element.text,
                    pinned_open=element.pinned_open,
                )
            elif isinstance(element, Glyph):
                doc.elements[eid] = Glyph(
                    id=eid,
                    points=tuple(p.translated(dx, dy) for p in element.points),
                )
        self.new_ids = tuple(mapping[e.id] for e in ordered)

    def revert(self, doc: Document) -> None:
        for eid in self.new_ids:
            del doc.elements[eid]
        doc.next_id = self._prior_next_id
        doc.revision += 1


@dataclass
class LoadDocument(Command):
    """Replace the whole document; the inverse is the prior document."""

    incoming: Document
    _snapshot: Optional[Document] = None

    def apply(self, doc: Document) -> None:
        self._snapshot = _copy_state(doc)
        _install_state(doc, self.incoming)

    def revert(self, doc: Document) -> None:
        assert self._snapshot is not None
        _install_state(doc, self._snapshot)


@dataclass
class Composite(Command):
    """Several commands applied as one undoable unit."""

    parts: tuple[Command, ...]

    def apply(self, doc: Document) -> None:
        done = []
        try:
            for part in self.parts:
                part.apply(doc)
                done.append(part)
        except Exception:
            for part in reversed(done):
                part.revert(doc)
            raise

    def revert(self, doc: Document) -> None:
        for part in reversed(self.parts):
            part.revert(doc)


def _copy_state(doc: Document) -> Document:
    snapshot = Document()
    snapshot.elements = copy.deepcopy(doc.elements)
    snapshot.next_id = doc.next_id
    snapshot.name_counter = doc.name_counter
    return snapshot


def _install_state(doc: Document, source: Document) -> None:
    doc.elements = copy.deepcopy(source.elements)
    doc.next_id = source.next_id
    doc.name_counter = source.name_counter
    doc.revision += 1


class CommandStack:
    """Unbounded undo/redo history for one document session.

    Executing any new command clears the redo list.  On a failed apply the
    document and both lists are left untouched.
    """

    def __init__(self) -> None:
        self._undo: list[Command] = []
        self._redo: list[Command] = []

    def execute(self, doc: Document, cmd: Command) -> Command:
        cmd.apply(doc)
        self._undo.append(cmd)
        self._redo.clear()
        return cmd

    def undo(self, doc: Document) -> bool:
        if not self._undo:
            return False
        cmd = self._undo.pop()
        cmd.revert(doc)
        self._redo.append(cmd)
        return True

    def redo(self, doc: Document) -> bool:
        if not self._redo:
            return False
        cmd = self._redo.pop()
        cmd.apply(doc)
        self._undo.append(cmd)
        return True

    def history_depth(self) -> tuple[int, int]:
        return len(self._undo), len(self._redo)
