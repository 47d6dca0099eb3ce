"""Shared helpers: seeded random documents and random command streams."""

from __future__ import annotations

import copy
import random
from pathlib import Path

import pytest

from minuml import commands as cmd
from minuml.model import ConnectionKind, Document, Point
from minuml.persistence import serialize

FIXTURES = Path(__file__).parent / "fixtures"

# Deliberately messy but XML-1.0-encodable text (the documented format limit).
TEXT_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    " _-+*/:;.,()[]{}<>!?'\"&=#@$%^~|\\\t"
    "éü«»世界→"
)

KINDS = list(ConnectionKind)


def canon(doc: Document) -> bytes:
    return serialize(doc)


def random_text(rng: random.Random, max_len: int = 24, newlines: bool = False) -> str:
    alphabet = TEXT_ALPHABET + ("\n" if newlines else "")
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))


def random_point(rng: random.Random, span: float = 1200.0) -> Point:
    return Point(rng.uniform(-span / 4, span), rng.uniform(-span / 4, span))


def random_document(
    rng: random.Random,
    max_classes: int = 8,
    max_connections: int = 10,
    max_notes: int = 4,
    max_glyphs: int = 4,
) -> Document:
    doc = Document()
    class_ids = []
    for _ in range(rng.randint(0, max_classes)):
        name = random_text(rng, 16) if rng.random() < 0.6 else None
        cid = doc.create_class(random_point(rng), name or None)
        class_ids.append(cid)
        if rng.random() < 0.7:
            doc.edit_class(
                cid,
                doc.class_box(cid).name,
                rng.random() < 0.25,
                [random_text(rng, 20) for _ in range(rng.randint(0, 4))],
                [random_text(rng, 20) for _ in range(rng.randint(0, 4))],
            )
    if len(class_ids) >= 2:
        for _ in range(rng.randint(0, max_connections)):
            source, target = rng.sample(class_ids, 2)
            conn = doc.create_connection(source, target)
            doc.set_connection_kind(conn, rng.choice(KINDS))
    for _ in range(rng.randint(0, max_notes)):
        nid = doc.create_note(random_point(rng), random_text(rng, 30, newlines=True))
        if rng.random() < 0.3:
            doc.edit_note(nid, doc.note(nid).text, True)
    for _ in range(rng.randint(0, max_glyphs)):
        doc.create_glyph([random_point(rng) for _ in range(rng.randint(2, 12))])
    return doc


def random_command(rng: random.Random, doc: Document) -> cmd.Command:
    """One applicable command for the document's current state."""
    ids = sorted(doc.elements)
    class_ids = [e.id for e in doc.class_boxes()]
    conn_ids = [e.id for e in doc.connections()]
    note_ids = [e for e in ids if type(doc.elements[e]).__name__ == "StickyNote"]
    choices: list[str] = ["create_class", "create_class", "create_note", "create_glyph"]
    if class_ids:
        choices += ["edit_class", "edit_class"]
    if len(class_ids) >= 2:
        choices += ["create_connection", "create_connection"]
    if conn_ids:
        choices.append("set_kind")
    if note_ids:
        choices.append("edit_note")
    if ids:
        choices += ["translate", "translate", "delete", "paste"]
    if rng.random() < 0.02:
        choices.append("load")
    match rng.choice(choices):
        case "create_class":
            name = random_text(rng, 12) if rng.random() < 0.5 else None
            return cmd.CreateClass(origin=random_point(rng), name=name or None)
        case "edit_class":
            return cmd.EditClass(
                target=rng.choice(class_ids),
                name=random_text(rng, 12),
                is_interface=rng.random() < 0.3,
                variables=[random_text(rng, 16) for _ in range(rng.randint(0, 3))],
                methods=[random_text(rng, 16) for _ in range(rng.randint(0, 3))],
            )
        case "create_connection":
            source, target = rng.sample(class_ids, 2)
            return cmd.CreateConnection(source=source, target=target)
        case "set_kind":
            return cmd.SetConnectionKind(
                target=rng.choice(conn_ids), kind=rng.choice(KINDS)
            )
        case "create_note":
            return cmd.CreateNote(origin=random_point(rng), text=random_text(rng, 20))
        case "edit_note":
            return cmd.EditNote(
                target=rng.choice(note_ids),
                text=random_text(rng, 20, newlines=True),
                pinned_open=rng.random() < 0.5,
            )
        case "create_glyph":
            points = [random_point(rng) for _ in range(rng.randint(2, 8))]
            return cmd.CreateGlyph(points=points)
        case "translate":
            chosen = frozenset(rng.sample(ids, rng.randint(1, min(4, len(ids)))))
            return cmd.Translate(
                ids=chosen, delta=Point(rng.uniform(-50, 50), rng.uniform(-50, 50))
            )
        case "delete":
            chosen = frozenset(rng.sample(ids, rng.randint(1, min(3, len(ids)))))
            return cmd.Delete(ids=chosen)
        case "paste":
            chosen = rng.sample(ids, rng.randint(1, min(3, len(ids))))
            blueprint = tuple(
                copy.deepcopy(doc.elements[eid])
                for eid in chosen
                if type(doc.elements[eid]).__name__ != "Connection"
            )
            if not blueprint:
                return cmd.CreateNote(origin=random_point(rng), text="")
            return cmd.PasteInsert(
                elements=blueprint, offset=Point(16.0, 16.0)
            )
        case "load":
            return cmd.LoadDocument(incoming=random_document(rng, max_classes=4))
    raise AssertionError("unreachable")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
