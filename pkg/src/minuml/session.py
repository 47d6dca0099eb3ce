"""Editor session protocol: length-delimited JSON messages over stdio.

One session owns one document, its undo/redo history, and the transient
view state (selection, hover, expanded notes, zoom).  Clients hold no
authoritative state: every mutation round-trips through here and each
response carries the full document snapshot (canonical document text),
the current selection, and the history depths; drawing commands for the
current scene are included on request so clients render exactly what the
headless exporters would.

Framing: ASCII decimal byte length, LF, payload bytes, LF.  The payload is
one JSON object.  The message catalog is documented in
docs/session-protocol.md.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from typing import BinaryIO, Optional

from . import clipboard, codegen, persistence, render
from .commands import CommandStack, Delete, LoadDocument
from . import commands as cmd
from .geometry import (
    TextMetrics,
    Viewport,
    class_bounds,
    glyph_bounds,
    hit_test,
    note_bounds,
    rect_select,
    route_connection,
)
from .model import (
    ClassBox,
    Connection,
    ConnectionKind,
    Document,
    Glyph,
    Point,
    Rect,
    StickyNote,
)

PROTOCOL_VERSION = 1


class ProtocolError(Exception):
    """The byte stream does not follow the framing rules."""


def write_frame(stream: BinaryIO, payload: bytes) -> None:
    stream.write(str(len(payload)).encode("ascii") + b"\n")
    stream.write(payload)
    stream.write(b"\n")
    stream.flush()


def read_frame(stream: BinaryIO) -> Optional[bytes]:
    """Next frame payload, or None at a clean end of stream."""
    header = stream.readline()
    if not header:
        return None
    try:
        length = int(header.strip())
    except ValueError:
        raise ProtocolError(f"bad frame header {header!r}") from None
    if length < 0:
        raise ProtocolError(f"negative frame length {length}")
    payload = stream.read(length)
    if len(payload) != length:
        raise ProtocolError("stream ended mid-frame")
    terminator = stream.read(1)
    if terminator not in (b"\n", b""):
        raise ProtocolError(f"missing frame terminator, got {terminator!r}")
    return payload


def _cmd_to_dict(draw_cmd) -> dict:
    kind = {
        render.LineCmd: "line",
        render.PolylineCmd: "polyline",
        render.RectCmd: "rect",
        render.PolygonCmd: "polygon",
        render.TextCmd: "text",
    }[type(draw_cmd)]
    out = dataclasses.asdict(draw_cmd)
    out["kind"] = kind
    return out


_KINDS = {k.value: k for k in ConnectionKind}


class Session:
    """One document session behind the message protocol."""

    def __init__(self, prefs: Optional[persistence.Preferences] = None):
        self.doc = Document()
        self.stack = CommandStack()
        self.metrics = TextMetrics()
        self.viewport = Viewport()
        self.prefs = prefs or persistence.Preferences()
        self.selection: set[int] = set()
        self.hover: Optional[int] = None
        self.notes_expanded_all = False

    # -- plumbing ----------------------------------------------------------

    def handle(self, message: dict) -> dict:
        request_id = message.get("id")
        op = message.get("op")
        handler = getattr(self, f"_op_{op}", None) if isinstance(op, str) else None
        if handler is None:
            return self._error(request_id, "UnknownOp", f"unknown op {op!r}")
        try:
            result = handler(message)
        except Exception as exc:  # the session must survive any bad request
            return self._error(request_id, type(exc).__name__, str(exc))
        response = {
            "id": request_id,
            "ok": True,
            "result": result,
            "state": self._state(),
        }
        if message.get("scene") or op == "render":
            response["scene"] = self._scene()
        return response

    def _error(self, request_id, error_type: str, message: str) -> dict:
        return {
            "id": request_id,
            "ok": False,
            "error": {"type": error_type, "message": message},
            "state": self._state(),
        }

    def _state(self) -> dict:
        undo_count, redo_count = self.stack.history_depth()
        return {
            "doc": persistence.serialize(self.doc).decode("utf-8"),
            "selection": sorted(self.selection),
            "hover": self.hover,
            "notes_expanded_all": self.notes_expanded_all,
            "zoom": self.viewport.zoom,
            "history": [undo_count, redo_count],
        }

    def _scene(self) -> list[dict]:
        view = render.ViewState(
            selected=frozenset(self.selection),
            hover=self.hover,
            notes_expanded_all=self.notes_expanded_all,
        )
        return [_cmd_to_dict(c) for c in render.render_scene(self.doc, self.metrics, view)]

    def _prune_selection(self) -> None:
        self.selection &= set(self.doc.elements)
        if self.hover is not None and self.hover not in self.doc:
            self.hover = None

    def _execute(self, command) -> None:
        self.stack.execute(self.doc, command)
        self._prune_selection()

    # -- document lifecycle --------------------------------------------------

    def _op_ping(self, msg) -> dict:
        return {"engine": "minuml", "protocol": PROTOCOL_VERSION}

    def _op_new(self, msg) -> dict:
        self.doc = Document()
        self.stack = CommandStack()
        self.selection.clear()
        self.hover = None
        return {}

    def _op_load(self, msg) -> dict:
        incoming = persistence.parse(msg["data"])
        self._execute(LoadDocument(incoming=incoming))
        return {}

    def _op_save(self, msg) -> dict:
        return {"data": persistence.serialize(self.doc).decode("utf-8")}

    # -- edits ---------------------------------------------------------------

    def _op_create_class(self, msg) -> dict:
        command = cmd.CreateClass(
            origin=Point(float(msg["x"]), float(msg["y"])), name=msg.get("name")
        )
        self._execute(command)
        return {"id": command.created_id}

    def _op_edit_class(self, msg) -> dict:
        self._execute(
            cmd.EditClass(
                target=int(msg["id"]),
                name=msg["name"],
                is_interface=bool(msg["is_interface"]),
                variables=[str(v) for v in msg["variables"]],
                methods=[str(v) for v in msg["methods"]],
            )
        )
        return {}

    def _op_create_connection(self, msg) -> dict:
        command = cmd.CreateConnection(
            source=int(msg["source"]), target=int(msg["target"])
        )
        self._execute(command)
        return {"id": command.created_id}

    def _op_set_connection_kind(self, msg) -> dict:
        kind = _KINDS.get(msg["kind"])
        if kind is None:
            raise ValueError(f"unknown connection kind {msg['kind']!r}")
        self._execute(cmd.SetConnectionKind(target=int(msg["id"]), kind=kind))
        return {}

    def _op_create_note(self, msg) -> dict:
        command = cmd.CreateNote(
            origin=Point(float(msg["x"]), float(msg["y"])), text=msg.get("text", "")
        )
        self._execute(command)
        return {"id": command.created_id}

    def _op_edit_note(self, msg) -> dict:
        self._execute(
            cmd.EditNote(
                target=int(msg["id"]),
                text=msg["text"],
                pinned_open=bool(msg["pinned_open"]),
            )
        )
        return {}

    def _op_create_glyph(self, msg) -> dict:
        points = [Point(float(x), float(y)) for x, y in msg["points"]]
        command = cmd.CreateGlyph(points=points)
        self._execute(command)
        return {"id": command.created_id}

    def _op_translate(self, msg) -> dict:
        self._execute(
            cmd.Translate(
                ids=frozenset(int(i) for i in msg["ids"]),
                delta=Point(float(msg["dx"]), float(msg["dy"])),
            )
        )
        return {}

    def _op_delete(self, msg) -> dict:
        command = Delete(ids=frozenset(int(i) for i in msg["ids"]))
        self._execute(command)
        assert command.record is not None
        return {"removed": sorted(command.record.ids)}

    def _op_undo(self, msg) -> dict:
        changed = self.stack.undo(self.doc)
        self._prune_selection()
        return {"changed": changed}

    def _op_redo(self, msg) -> dict:
        changed = self.stack.redo(self.doc)
        self._prune_selection()
        return {"changed": changed}

    def _op_history(self, msg) -> dict:
        undo_count, redo_count = self.stack.history_depth()
        return {"undo": undo_count, "redo": redo_count}

    # -- clipboard -------------------------------------------------------------

    def _ids_or_selection(self, msg) -> set[int]:
        if "ids" in msg and msg["ids"] is not None:
            return {int(i) for i in msg["ids"]}
        return set(self.selection)

    def _payload_result(self, payload: clipboard.Payload) -> dict:
        return {
            "flavors": {
                clipboard.STRUCTURED_FLAVOR: payload.structured.decode("utf-8"),
                clipboard.CODE_FLAVOR: payload.code_text,
                clipboard.IMAGE_FLAVOR: payload.vector_image.decode("utf-8"),
            }
        }

    def _op_copy(self, msg) -> dict:
        payload = clipboard.build_payload(
            self.doc, self._ids_or_selection(msg), self.prefs, self.metrics
        )
        return self._payload_result(payload)

    def _op_cut(self, msg) -> dict:
        payload, _ = clipboard.cut(
            self.doc, self.stack, self._ids_or_selection(msg), self.prefs, self.metrics
        )
        self._prune_selection()
        return self._payload_result(payload)

    def _op_paste(self, msg) -> dict:
        payload = clipboard.Payload(
            structured=msg["structured"].encode("utf-8"),
            code_text=None,
            vector_image=b"",
        )
        anchor = None
        if "x" in msg and msg["x"] is not None:
            anchor = Point(float(msg["x"]), float(msg["y"]))
        command = clipboard.paste(self.doc, payload, anchor)
        self._execute(command)
        self.selection = set(command.new_ids)
        return {"ids": sorted(command.new_ids)}

    def _op_code(self, msg) -> dict:
        language = msg.get("language")
        target = (
            codegen.CodegenTarget(language)
            if language
            else self.prefs.code_language
        )
        ids = self._ids_or_selection(msg) or None
        return {"code": codegen.emit(self.doc, target, ids)}

    # -- view state --------------------------------------------------------------

    def _op_select_set(self, msg) -> dict:
        ids = {int(i) for i in msg["ids"]}
        unknown = ids - set(self.doc.elements)
        if unknown:
            raise KeyError(f"unknown ids {sorted(unknown)}")
        self.selection = ids
        return {"selection": sorted(self.selection)}

    def _op_select_toggle(self, msg) -> dict:
        eid = int(msg["id"])
        self.doc.get(eid)
        if eid in self.selection:
            self.selection.discard(eid)
            selected = False
        else:
            self.selection.add(eid)
            selected = True
        return {"selected": selected, "selection": sorted(self.selection)}

    def _op_select_rect(self, msg) -> dict:
        r = Rect(
            float(msg["x"]), float(msg["y"]), float(msg["w"]), float(msg["h"])
        )
        self.selection = rect_select(self.doc, self.metrics, r)
        return {"selection": sorted(self.selection)}

    def _op_select_clear(self, msg) -> dict:
        self.selection.clear()
        return {"selection": []}

    def _op_hover(self, msg) -> dict:
        eid = msg.get("id")
        self.hover = int(eid) if eid is not None else None
        return {}

    def _op_set_notes_expanded(self, msg) -> dict:
        self.notes_expanded_all = bool(msg["value"])
        return {}

    def _op_set_zoom(self, msg) -> dict:
        return {"zoom": self.viewport.set_zoom(float(msg["value"]))}

    # -- queries -------------------------------------------------------------------

    def _op_hit_test(self, msg) -> dict:
        tolerance = float(msg.get("tolerance", 4.0))
        eid = hit_test(
            self.doc,
            self.metrics,
            Point(float(msg["x"]), float(msg["y"])),
            tolerance,
        )
        return {"id": eid}

    def _op_bounds(self, msg) -> dict:
        element = self.doc.get(int(msg["id"]))
        if isinstance(element, ClassBox):
            r = class_bounds(element, self.metrics)
        elif isinstance(element, StickyNote):
            r = note_bounds(element, self.metrics)
        elif isinstance(element, Glyph):
            r = glyph_bounds(element)
        else:
            assert isinstance(element, Connection)
            route = route_connection(
                element,
                class_bounds(self.doc.class_box(element.source), self.metrics),
                class_bounds(self.doc.class_box(element.target), self.metrics),
            )
            r = Rect.from_corners(
                route.source_anchor.x,
                route.source_anchor.y,
                route.target_anchor.x,
                route.target_anchor.y,
            )
        return {"x": r.x, "y": r.y, "width": r.width, "height": r.height}

    def _op_element_kind(self, msg) -> dict:
        element = self.doc.get(int(msg["id"]))
        kind = {
            ClassBox: "class",
            Connection: "connection",
            StickyNote: "note",
            Glyph: "glyph",
        }[type(element)]
        return {"kind": kind}

    def _op_render(self, msg) -> dict:
        return {}

    def _op_page_overlay(self, msg) -> dict:
        size = render.PageSize(msg.get("page_size", self.prefs.page_size.value))
        orientation = render.Orientation(
            msg.get("orientation", self.prefs.orientation.value)
        )
        setup = render.PageSetup(page_size=size, orientation=orientation)
        region = None
        if msg.get("region"):
            rx, ry, rw, rh = (float(v) for v in msg["region"])
            region = Rect(rx, ry, rw, rh)
        plan = render.paginate(
            self.doc,
            self.metrics,
            setup,
            region=region,
            fit_one_page=bool(msg.get("fit_one_page", False)),
        )
        return {
            "cols": plan.cols,
            "rows": plan.rows,
            "overlay": [_cmd_to_dict(c) for c in render.page_boundary_overlay(plan)],
        }


def serve(stdin: BinaryIO, stdout: BinaryIO) -> None:
    """Run one session over a frame stream until end of input."""
    session = Session()
    while True:
        payload = read_frame(stdin)
        if payload is None:
            return
        try:
            message = json.loads(payload.decode("utf-8"))
            if not isinstance(message, dict):
                raise ValueError("message must be a JSON object")
        except (ValueError, UnicodeDecodeError) as exc:
            response = session._error(None, "BadMessage", str(exc))
        else:
            response = session.handle(message)
        write_frame(stdout, json.dumps(response).encode("utf-8"))


def main() -> int:
    serve(sys.stdin.buffer, sys.stdout.buffer)
    return 0


if __name__ == "__main__":
    sys.exit(main())
