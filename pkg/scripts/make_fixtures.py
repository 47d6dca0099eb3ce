#!/usr/bin/env python3
"""Build the movie-rental fixture diagram and its pinned golden outputs.

Run from the repository root:  python scripts/make_fixtures.py
Outputs land in tests/fixtures/.  Goldens are reviewed by hand before being
committed; tests compare against the committed bytes, not this script.
"""

from __future__ import annotations

from pathlib import Path

from minuml.codegen import CodegenTarget, emit
from minuml.geometry import TextMetrics
from minuml.model import ConnectionKind, Document, Point
from minuml.persistence import serialize
from minuml.render import export_png, export_svg, render_scene

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def movie_rental_document() -> Document:
    """A reasonable solution to the movie-rental design task: ~11 classes
    exercising aggregation, association, inheritance, and one undecided
    (generic) relationship, with deliberately mixed member-line styles."""
    doc = Document()

    movie = doc.create_class(Point(340, 40), "Movie")
    doc.edit_class(
        movie, "Movie", False,
        ["title: String", "id: int", "actors", "releaseDate", "studio: String"],
        ["getTitle(): String", "addCopy(MovieCopy c)", "findCopy"],
    )
    movie_table = doc.create_class(Point(40, 40), "MovieTable")
    doc.edit_class(
        movie_table, "MovieTable", False,
        ["titleIndex", "idIndex", "actorIndex"],
        ["lookupByTitle(title: String)", "lookupById(id: int)", "lookupByActor"],
    )
    customer = doc.create_class(Point(340, 320), "Customer")
    doc.edit_class(
        customer, "Customer", False,
        ["name: String", "id: int", "address", "balance: double"],
        ["getRentals()", "addReview(CustomerReview r)"],
    )
    customer_table = doc.create_class(Point(40, 320), "CustomerTable")
    doc.edit_class(
        customer_table, "CustomerTable", False,
        ["nameIndex", "idIndex"],
        ["lookupByName(name: String)", "lookupById(id: int)"],
    )
    movie_copy = doc.create_class(Point(660, 40), "MovieCopy")
    doc.edit_class(
        movie_copy, "MovieCopy", False,
        ["copyId: int", "status"],
        ["isRented(): boolean", "getRenter(): Customer"],
    )
    review = doc.create_class(Point(660, 320), "Review")
    doc.edit_class(
        review, "Review", True, [],
        ["getReviewer(): String", "getRating(): int", "getText(): String"],
    )
    critic_review = doc.create_class(Point(520, 560), "CriticReview")
    doc.edit_class(
        critic_review, "CriticReview", False,
        ["sourceFile"],
        ["parse()", "getReviewer(): String", "getRating(): int", "getText(): String"],
    )
    studio_review = doc.create_class(Point(760, 560), "StudioReview")
    doc.edit_class(
        studio_review, "StudioReview", False,
        ["promoEvents: String"],
        [
            "getPromoEvents(): String",
            "getReviewer(): String",
            "getRating(): int",
            "getText(): String",
        ],
    )
    customer_review = doc.create_class(Point(280, 560), "CustomerReview")
    doc.edit_class(
        customer_review, "CustomerReview", False,
        ["text"],
        ["getReviewer(): String", "getRating(): int", "getText(): String"],
    )
    xml_file = doc.create_class(Point(520, 760), "XMLFileClass")
    doc.edit_class(xml_file, "XMLFileClass", False, [], ["read()"])
    studio_row = doc.create_class(Point(760, 760), "StudioReviewTableRowClass")
    doc.edit_class(studio_row, "StudioReviewTableRowClass", False, [], ["getColumn(i: int)"])

    def connect(source: int, target: int, kind: ConnectionKind) -> int:
        conn = doc.create_connection(source, target)
        doc.set_connection_kind(conn, kind)
        return conn

    connect(movie_table, movie, ConnectionKind.AGGREGATION)
    connect(customer_table, customer, ConnectionKind.AGGREGATION)
    connect(movie, movie_copy, ConnectionKind.AGGREGATION)
    connect(movie, review, ConnectionKind.ASSOCIATION)
    connect(movie_copy, customer, ConnectionKind.ASSOCIATION)
    connect(customer, customer_review, ConnectionKind.ASSOCIATION)
    connect(critic_review, review, ConnectionKind.INHERITANCE)
    connect(studio_review, review, ConnectionKind.INHERITANCE)
    connect(customer_review, review, ConnectionKind.INHERITANCE)
    connect(critic_review, xml_file, ConnectionKind.ASSOCIATION)
    connect(studio_review, studio_row, ConnectionKind.ASSOCIATION)
    connect(customer, movie_copy, ConnectionKind.GENERIC)  # "rents"? undecided

    note = doc.create_note(Point(40, 560), "Ask about late fees:\nnot in the brief.")
    doc.edit_note(note, "Ask about late fees:\nnot in the brief.", True)
    doc.create_glyph(
        [Point(40, 700), Point(80, 680), Point(120, 700), Point(160, 680)]
    )
    return doc


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    doc = movie_rental_document()
    (FIXTURES / "movie_rental.muml").write_bytes(serialize(doc))
    (FIXTURES / "movie_rental.java").write_text(
        emit(doc, CodegenTarget.JAVA), encoding="utf-8"
    )
    (FIXTURES / "movie_rental.cpp").write_text(
        emit(doc, CodegenTarget.CPP), encoding="utf-8"
    )
    metrics = TextMetrics()
    cmds = render_scene(doc, metrics)
    (FIXTURES / "movie_rental.svg").write_bytes(export_svg(cmds, background="white"))
    (FIXTURES / "movie_rental.png").write_bytes(export_png(cmds, dpi=96))
    for name in (
        "movie_rental.muml",
        "movie_rental.java",
        "movie_rental.cpp",
        "movie_rental.svg",
        "movie_rental.png",
    ):
        print(f"wrote {FIXTURES / name}")


if __name__ == "__main__":
    main()
