"""Undo/redo engine: exact inverses, unbounded history, load-as-command."""

from __future__ import annotations

import random

import pytest

from minuml import commands as cmd
from minuml.model import ConnectionKind, DanglingEndpoint, Document, Point
from minuml.persistence import parse, serialize

from conftest import canon, random_command, random_document


def stacked_pair():
    doc = Document()
    stack = cmd.CommandStack()
    return doc, stack


class TestStackBasics:
    def test_first_execute(self):
        doc, stack = stacked_pair()
        stack.execute(doc, cmd.CreateClass(origin=Point(0, 0)))
        assert stack.history_depth() == (1, 0)

    def test_depth_counting(self):
        doc, stack = stacked_pair()
        for _ in range(5):
            stack.execute(doc, cmd.CreateClass(origin=Point(0, 0)))
        stack.undo(doc)
        stack.undo(doc)
        assert stack.history_depth() == (3, 2)

    def test_execute_clears_redo(self):
        doc, stack = stacked_pair()
        for _ in range(5):
            stack.execute(doc, cmd.CreateClass(origin=Point(0, 0)))
        stack.undo(doc)
        stack.undo(doc)
        stack.execute(doc, cmd.CreateNote(origin=Point(0, 0)))
        assert stack.history_depth() == (4, 0)

    def test_undo_empty_is_noop(self):
        doc, stack = stacked_pair()
        before = canon(doc)
        assert stack.undo(doc) is False
        assert stack.redo(doc) is False
        assert canon(doc) == before

    def test_failed_execute_leaves_everything_unchanged(self):
        doc, stack = stacked_pair()
        stack.execute(doc, cmd.CreateClass(origin=Point(0, 0)))
        stack.undo(doc)
        before = canon(doc)
        with pytest.raises(DanglingEndpoint):
            stack.execute(doc, cmd.CreateConnection(source=1, target=99))
        assert canon(doc) == before
        assert stack.history_depth() == (0, 1)  # redo list survives the error


class TestDeleteRestore:
    def test_cascade_restores_connections_with_original_ids(self):
        doc, stack = stacked_pair()
        a = doc.create_class(Point(0, 0), "A")
        b = doc.create_class(Point(200, 0), "B")
        c = doc.create_class(Point(0, 200), "C")
        ab = doc.create_connection(a, b)
        ca = doc.create_connection(c, a)
        before = canon(doc)
        stack.execute(doc, cmd.Delete(ids=frozenset({a})))
        assert set(doc.elements) == {b, c}
        assert stack.undo(doc) is True
        assert canon(doc) == before
        assert doc.connection(ab).source == a
        assert doc.connection(ca).target == a

    def test_redo_after_undo_deletes_again(self):
        doc, stack = stacked_pair()
        a = doc.create_class(Point(0, 0), "A")
        b = doc.create_class(Point(200, 0), "B")
        doc.create_connection(a, b)
        stack.execute(doc, cmd.Delete(ids=frozenset({a})))
        after = canon(doc)
        stack.undo(doc)
        assert stack.redo(doc) is True
        assert canon(doc) == after


class TestLoadCommand:
    def test_undo_of_load_restores_prior_document(self):
        doc, stack = stacked_pair()
        stack.execute(doc, cmd.CreateClass(origin=Point(5, 5), name="Before"))
        before = canon(doc)
        incoming = random_document(random.Random(3))
        stack.execute(doc, cmd.LoadDocument(incoming=incoming))
        assert canon(doc) == canon(incoming)
        assert stack.undo(doc) is True
        assert canon(doc) == before
        assert stack.redo(doc) is True
        assert canon(doc) == canon(incoming)

    def test_loaded_document_does_not_alias_the_source(self):
        doc, stack = stacked_pair()
        incoming = Document()
        incoming.create_class(Point(0, 0), "Shared")
        stack.execute(doc, cmd.LoadDocument(incoming=incoming))
        doc.edit_class(1, "Mutated", False, [], [])
        assert incoming.class_box(1).name == "Shared"


def apply_revert_roundtrip(seed: int, trials: int) -> None:
    rng = random.Random(seed)
    for _ in range(trials):
        doc = random_document(rng)
        command = random_command(rng, doc)
        before = canon(doc)
        command.apply(doc)
        after = canon(doc)
        command.revert(doc)
        assert canon(doc) == before
        command.apply(doc)
        assert canon(doc) == after
        command.revert(doc)
        assert canon(doc) == before


class TestInverses:
    def test_random_commands_round_trip(self):
        apply_revert_roundtrip(seed=101, trials=400)

    def test_full_history_reversal_small(self):
        rng = random.Random(23)
        for _ in range(25):
            doc = random_document(rng, max_classes=4)
            stack = cmd.CommandStack()
            initial = canon(doc)
            steps = rng.randint(1, 60)
            for _ in range(steps):
                stack.execute(doc, random_command(rng, doc))
            final = canon(doc)
            while stack.undo(doc):
                pass
            assert canon(doc) == initial
            while stack.redo(doc):
                pass
            assert canon(doc) == final

    def test_full_history_reversal_thousand_commands(self):
        rng = random.Random(29)
        doc = Document()
        stack = cmd.CommandStack()
        initial = canon(doc)
        for _ in range(1000):
            stack.execute(doc, random_command(rng, doc))
        final = canon(doc)
        assert stack.history_depth() == (1000, 0)
        for _ in range(1000):
            assert stack.undo(doc)
        assert canon(doc) == initial
        for _ in range(1000):
            assert stack.redo(doc)
        assert canon(doc) == final

    def test_replay_determinism(self):
        seed = 31
        docs = []
        for _ in range(2):
            rng = random.Random(seed)
            doc = Document()
            stack = cmd.CommandStack()
            for _ in range(200):
                stack.execute(doc, random_command(rng, doc))
            docs.append(canon(doc))
        assert docs[0] == docs[1]

    def test_round_trip_via_serialized_form(self):
        # revert(apply(D, c)) equals D through the canonical codec as well
        rng = random.Random(37)
        doc = random_document(rng)
        reparsed = parse(serialize(doc))
        command = cmd.CreateConnection(
            source=min(c.id for c in doc.class_boxes()),
            target=max(c.id for c in doc.class_boxes()),
        ) if len(list(doc.class_boxes())) >= 2 else cmd.CreateClass(origin=Point(1, 1))
        command.apply(reparsed)
        command.revert(reparsed)
        assert serialize(reparsed) == serialize(doc)


class TestComposite:
    def test_composite_is_one_undo_unit(self):
        doc, stack = stacked_pair()
        composite = cmd.Composite(
            parts=(
                cmd.CreateClass(origin=Point(0, 0), name="A"),
                cmd.CreateClass(origin=Point(100, 0), name="B"),
            )
        )
        stack.execute(doc, composite)
        assert stack.history_depth() == (1, 0)
        assert len(doc.elements) == 2
        stack.undo(doc)
        assert doc.elements == {}

    def test_composite_failure_rolls_back_applied_parts(self):
        doc, stack = stacked_pair()
        before = canon(doc)
        bad = cmd.Composite(
            parts=(
                cmd.CreateClass(origin=Point(0, 0), name="A"),
                cmd.CreateConnection(source=1, target=77),
            )
        )
        with pytest.raises(DanglingEndpoint):
            stack.execute(doc, bad)
        assert canon(doc) == before
        assert stack.history_depth() == (0, 0)


class TestSetKindCommand:
    def test_noop_set_still_recorded(self):
        doc, stack = stacked_pair()
        a = doc.create_class(Point(0, 0), "A")
        b = doc.create_class(Point(100, 0), "B")
        conn = doc.create_connection(a, b)
        doc.set_connection_kind(conn, ConnectionKind.INHERITANCE)
        stack.execute(
            doc, cmd.SetConnectionKind(target=conn, kind=ConnectionKind.INHERITANCE)
        )
        assert stack.history_depth() == (1, 0)
        assert doc.connection(conn).kind is ConnectionKind.INHERITANCE
