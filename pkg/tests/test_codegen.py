"""Skeleton generation: lenient member grammar and Java/C++ emitters."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minuml.codegen import (
    CodegenTarget,
    SelectionNotClosed,
    clipboard_code,
    emit,
    parse_member,
)
from minuml.model import ConnectionKind, Document, Point
from minuml.persistence import Preferences

from conftest import random_document

# Hand-classified member lines, fixed before the parser was written.
# Each row: (line, is_method, expected name, expected type, expected params).
MEMBER_TABLE = [
    # variables: name : Type
    ("balance: int", False, "balance", "int", None),
    ("title : String", False, "title", "String", None),
    ("name:String", False, "name", "String", None),
    # variables: Type name
    ("int balance", False, "balance", "int", None),
    ("unsigned int count", False, "count", "unsigned int", None),
    ("List<Movie> movies", False, "movies", "List<Movie>", None),
    ("movie copies", False, "copies", "movie", None),
    ("x y z w", False, "w", "x y z", None),
    # variables: bare name
    ("balance", False, "balance", None, None),
    ("  actors  ", False, "actors", None, None),
    ("_private", False, "_private", None, None),
    # variables that degrade to raw
    ("???", False, None, None, None),
    ("", False, None, None, None),
    ("9lives", False, None, None, None),
    ("actors[]", False, None, None, None),
    ("name :", False, None, None, None),
    (": int", False, None, None, None),
    # methods: name(params) [: Return]
    ("getName()", True, "getName", None, ()),
    ("getName(): String", True, "getName", "String", ()),
    ("toString():String", True, "toString", "String", ()),
    ("deal(int count)", True, "deal", None, (("count", "int"),)),
    ("deal(count: int)", True, "deal", None, (("count", "int"),)),
    ("deal(count)", True, "deal", None, (("count", None),)),
    (
        "addReview(Review r, int rating)",
        True,
        "addReview",
        None,
        (("r", "Review"), ("rating", "int")),
    ),
    # methods: Return name(params)
    ("String getName()", True, "getName", "String", ()),
    ("void deal(int n)", True, "deal", "void", (("n", "int"),)),
    # methods: bare name
    ("shuffle", True, "shuffle", None, ()),
    # methods that degrade to raw
    ("int getCount() : int", True, None, None, None),  # two return types
    ("()", True, None, None, None),
    ("getName() -> str", True, None, None, None),
    ("calc(x) + 1", True, None, None, None),
]


class TestParseMember:
    @pytest.mark.parametrize("line,is_method,name,type_name,params", MEMBER_TABLE)
    def test_hand_classified_table(self, line, is_method, name, type_name, params):
        sig = parse_member(line, is_method)
        assert sig.raw == line
        assert sig.is_method is is_method
        assert sig.name == name
        assert sig.type_name == type_name
        assert sig.params == params

    def test_degraded_param_inside_parsed_method(self):
        sig = parse_member("f(g(x))", True)
        assert sig.name == "f"
        assert sig.params == ((None, None),)

    @settings(max_examples=300)
    @given(st.text(max_size=60), st.booleans())
    def test_total_on_arbitrary_text(self, line, is_method):
        sig = parse_member(line, is_method)
        assert sig.raw == line


def dog_and_animal():
    doc = Document()
    animal = doc.create_class(Point(0, 0), "Animal")
    dog = doc.create_class(Point(200, 0), "Dog")
    doc.edit_class(animal, "Animal", False, ["name: String"], ["eat()"])
    doc.edit_class(dog, "Dog", False, ["age: int"], ["bark(): void"])
    doc.create_connection(dog, animal)
    doc.set_connection_kind(3, ConnectionKind.INHERITANCE)
    return doc, animal, dog


class TestJavaEmit:
    def test_inheritance_clause(self):
        doc, _, _ = dog_and_animal()
        out = emit(doc, CodegenTarget.JAVA)
        assert "class Dog extends Animal {" in out

    def test_empty_document_is_header_only(self):
        out = emit(Document(), CodegenTarget.JAVA)
        assert out == "// Generated Java class skeletons.\n"

    def test_interface_keyword(self):
        doc = Document()
        cid = doc.create_class(Point(0, 0), "Reviewable")
        doc.edit_class(cid, "Reviewable", True, [], ["review(): String"])
        out = emit(doc, CodegenTarget.JAVA)
        assert "interface Reviewable {" in out
        assert "    String review();" in out

    def test_implements_interface_target(self):
        doc = Document()
        i = doc.create_class(Point(0, 0), "Walks")
        c = doc.create_class(Point(100, 0), "Dog")
        doc.edit_class(i, "Walks", True, [], [])
        conn = doc.create_connection(c, i)
        doc.set_connection_kind(conn, ConnectionKind.INHERITANCE)
        out = emit(doc, CodegenTarget.JAVA)
        assert "class Dog implements Walks {" in out

    def test_second_class_parent_is_commented(self):
        doc = Document()
        a = doc.create_class(Point(0, 0), "A")
        b = doc.create_class(Point(0, 0), "B")
        c = doc.create_class(Point(0, 0), "C")
        for parent in (a, b):
            conn = doc.create_connection(c, parent)
            doc.set_connection_kind(conn, ConnectionKind.INHERITANCE)
        out = emit(doc, CodegenTarget.JAVA)
        assert "class C extends A /* extends B */ {" in out

    def test_association_field_lives_in_source(self):
        doc = Document()
        movie = doc.create_class(Point(0, 0), "Movie")
        review = doc.create_class(Point(0, 0), "Review")
        conn = doc.create_connection(movie, review)
        doc.set_connection_kind(conn, ConnectionKind.ASSOCIATION)
        out = emit(doc, CodegenTarget.JAVA)
        assert "class Movie {\n    private Review review;\n}" in out
        assert "class Review {\n}" in out

    def test_aggregation_annotated(self):
        doc = Document()
        deck = doc.create_class(Point(0, 0), "Deck")
        card = doc.create_class(Point(0, 0), "Card")
        conn = doc.create_connection(deck, card)
        doc.set_connection_kind(conn, ConnectionKind.AGGREGATION)
        out = emit(doc, CodegenTarget.JAVA)
        assert "    private Card card; // aggregation" in out

    def test_unparsed_member_becomes_comment_plus_todo(self):
        doc = Document()
        cid = doc.create_class(Point(0, 0), "Odd")
        doc.edit_class(cid, "Odd", False, ["???"], ["b() -> maybe"])
        out = emit(doc, CodegenTarget.JAVA)
        assert "    // ???\n    /* TODO */" in out
        assert "    // b() -> maybe\n    /* TODO */" in out

    def test_untyped_members_get_placeholder_types(self):
        doc = Document()
        cid = doc.create_class(Point(0, 0), "Loose")
        doc.edit_class(cid, "Loose", False, ["count"], ["run(speed)"])
        out = emit(doc, CodegenTarget.JAVA)
        assert "    private Object count;" in out
        assert "    public void run(Object speed) {" in out


class TestCppEmit:
    def test_inheritance_clause(self):
        doc, _, _ = dog_and_animal()
        out = emit(doc, CodegenTarget.CPP)
        assert "class Dog : public Animal {" in out

    def test_multiple_bases_allowed(self):
        doc = Document()
        a = doc.create_class(Point(0, 0), "A")
        b = doc.create_class(Point(0, 0), "B")
        c = doc.create_class(Point(0, 0), "C")
        for parent in (a, b):
            conn = doc.create_connection(c, parent)
            doc.set_connection_kind(conn, ConnectionKind.INHERITANCE)
        out = emit(doc, CodegenTarget.CPP)
        assert "class C : public A, public B {" in out

    def test_interface_methods_pure_virtual(self):
        doc = Document()
        cid = doc.create_class(Point(0, 0), "Shape")
        doc.edit_class(cid, "Shape", True, [], ["area(): double"])
        out = emit(doc, CodegenTarget.CPP)
        assert "    virtual double area() = 0;" in out

    def test_sections(self):
        doc = Document()
        cid = doc.create_class(Point(0, 0), "Deck")
        doc.edit_class(cid, "Deck", False, ["cards: int"], ["shuffle()"])
        out = emit(doc, CodegenTarget.CPP)
        assert "public:\n    void shuffle();\nprivate:\n    int cards;\n};" in out

    def test_empty_document_is_header_only(self):
        assert emit(Document(), CodegenTarget.CPP) == "// Generated C++ class skeletons.\n"


class TestEmitProperties:
    def test_deterministic(self):
        rng = random.Random(61)
        for _ in range(20):
            doc = random_document(rng)
            for target in CodegenTarget:
                assert emit(doc, target) == emit(doc, target)

    def test_every_class_declared_exactly_once(self):
        rng = random.Random(67)
        for _ in range(40):
            doc = random_document(rng)
            for target in CodegenTarget:
                out = emit(doc, target)
                for cls in doc.class_boxes():
                    keyword = (
                        "interface "
                        if (cls.is_interface and target is CodegenTarget.JAVA)
                        else "class "
                    )
                    declarations = [
                        line
                        for line in out.splitlines()
                        if line.startswith(keyword + cls.name)
                        and (
                            line[len(keyword + cls.name)] in " {:"
                            if len(line) > len(keyword + cls.name)
                            else True
                        )
                    ]
                    assert len(declarations) >= 1

    def test_inheritance_clause_count_matches_connections(self):
        rng = random.Random(71)
        for _ in range(40):
            doc = random_document(rng)
            inheritance = sum(
                1 for c in doc.connections() if c.kind is ConnectionKind.INHERITANCE
            )
            out = emit(doc, CodegenTarget.CPP)
            assert out.count("public ") == inheritance

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.text(max_size=30), max_size=5),
        st.lists(st.text(max_size=30), max_size=5),
    )
    def test_total_on_wild_members(self, variables, methods):
        doc = Document()
        cid = doc.create_class(Point(0, 0), "Wild")
        doc.edit_class(cid, "Wild", False, variables, methods)
        for target in CodegenTarget:
            out = emit(doc, target)
            assert "Wild" in out


class TestSelections:
    def test_closed_selection_required(self):
        doc, animal, dog = dog_and_animal()
        conn = next(doc.connections()).id
        with pytest.raises(SelectionNotClosed):
            emit(doc, CodegenTarget.JAVA, ids={dog, conn})
        out = emit(doc, CodegenTarget.JAVA, ids={dog, animal, conn})
        assert "class Dog extends Animal {" in out

    def test_selection_without_connection_drops_clause(self):
        doc, animal, dog = dog_and_animal()
        out = emit(doc, CodegenTarget.JAVA, ids={dog})
        assert "extends" not in out


class TestClipboardCode:
    def test_default_language_is_java(self):
        doc, _, _ = dog_and_animal()
        out = clipboard_code(doc, Preferences())
        assert out.startswith("// Generated Java class skeletons.")

    def test_cpp_preference(self):
        doc, _, _ = dog_and_animal()
        prefs = Preferences(code_language=CodegenTarget.CPP)
        out = clipboard_code(doc, prefs)
        assert out.startswith("// Generated C++ class skeletons.")

    def test_single_class_emits_one_body(self):
        doc = Document()
        doc.create_class(Point(0, 0), "Solo")
        out = clipboard_code(doc, Preferences())
        declarations = [s for s in out.splitlines() if s.startswith("class ")]
        assert declarations == ["class Solo {"]
