"""Java and C++ skeleton generation from a diagram or a selection.

Member lines are free text, so parsing is best-effort: a small lenient
grammar recovers names, types, and parameters where it can, and anything it
cannot read is carried into the output as a commented raw line with a TODO
placeholder.  Generation never fails on any input; the output is a starting
point for implementation, not guaranteed-compilable code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .model import ClassBox, Connection, ConnectionKind, Document


class CodegenTarget(Enum):
    JAVA = "java"
    CPP = "cpp"


class SelectionNotClosed(Exception):
    """A selected connection's endpoints are not both in the selection."""


@dataclass(frozen=True)
class MemberSig:
    """Best-effort reading of one member line; raw is always preserved."""

    raw: str
    is_method: bool
    name: Optional[str] = None
    type_name: Optional[str] = None
    params: Optional[tuple[tuple[Optional[str], Optional[str]], ...]] = None


_IDENT = re.compile(r"^[A-Za-z_]\w*$")
_METHOD = re.compile(r"^([^()]*)\((.*)\)([^()]*)$")


def _split_name_type(text: str) -> Optional[tuple[str, Optional[str]]]:
    """`name : Type`, `Type name`, or a lone `name`; None when unreadable."""
    if ":" in text:
        name, _, type_name = text.partition(":")
        name = name.strip()
        type_name = type_name.strip()
        if _IDENT.match(name) and type_name:
            return name, type_name
        return None
    tokens = text.split()
    if len(tokens) == 1 and _IDENT.match(tokens[0]):
        return tokens[0], None
    if len(tokens) >= 2 and _IDENT.match(tokens[-1]):
        return tokens[-1], " ".join(tokens[:-1])
    return None


def _parse_params(args: str) -> tuple[tuple[Optional[str], Optional[str]], ...]:
    params = []
    for chunk in args.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        split = _split_name_type(chunk)
        params.append(split if split else (None, None))
    return tuple(params)


def parse_member(line: str, is_method: bool) -> MemberSig:
    """Read one member line with the lenient grammar; never raises.

    Variables: `name : Type`, `Type name`, `name`.  Methods additionally:
    `name(params)`, `name(params) : Return`, `Return name(params)`.  A line
    matching none of these yields a signature holding only the raw text.
    """
    text = line.strip()
    if not text:
        return MemberSig(raw=line, is_method=is_method)
    if is_method:
        matched = _METHOD.match(text)
        if matched:
            pre, args, post = matched.groups()
            pre_tokens = pre.split()
            if not pre_tokens or not _IDENT.match(pre_tokens[-1]):
                return MemberSig(raw=line, is_method=True)
            name = pre_tokens[-1]
            pre_type = " ".join(pre_tokens[:-1]) or None
            post = post.strip()
            post_type = None
            if post:
                if not post.startswith(":"):
                    return MemberSig(raw=line, is_method=True)
                post_type = post[1:].strip()
                if not post_type:
                    return MemberSig(raw=line, is_method=True)
            if pre_type and post_type:
                return MemberSig(raw=line, is_method=True)
            return MemberSig(
                raw=line,
                is_method=True,
                name=name,
                type_name=pre_type or post_type,
                params=_parse_params(args),
            )
        if "(" in text or ")" in text:
            return MemberSig(raw=line, is_method=True)
        if _IDENT.match(text):
            return MemberSig(raw=line, is_method=True, name=text, params=())
        return MemberSig(raw=line, is_method=True)
    split = _split_name_type(text)
    if split is None:
        return MemberSig(raw=line, is_method=False)
    return MemberSig(raw=line, is_method=False, name=split[0], type_name=split[1])


# -- emission ----------------------------------------------------------------

_HEADERS = {
    CodegenTarget.JAVA: "// Generated Java class skeletons.",
    CodegenTarget.CPP: "// Generated C++ class skeletons.",
}


def _scope(doc: Document, ids: Optional[Iterable[int]]):
    """Classes and connections in scope, id-ordered; selections must be
    closed (no connection without both endpoint classes)."""
    if ids is None:
        classes = [e for e in doc.by_id() if isinstance(e, ClassBox)]
        connections = [e for e in doc.by_id() if isinstance(e, Connection)]
        return classes, connections
    chosen = set(ids)
    classes = []
    connections = []
    for eid in sorted(chosen):
        element = doc.get(eid)
        if isinstance(element, ClassBox):
            classes.append(element)
        elif isinstance(element, Connection):
            connections.append(element)
    class_ids = {c.id for c in classes}
    for conn in connections:
        if conn.source not in class_ids or conn.target not in class_ids:
            raise SelectionNotClosed(
                f"connection {conn.id} joins classes outside the selection"
            )
    return classes, connections


def emit(
    doc: Document,
    target: CodegenTarget,
    ids: Optional[Iterable[int]] = None,
) -> str:
    """One deterministic compilation-unit text for the given scope."""
    classes, connections = _scope(doc, ids)
    lines = [_HEADERS[target]]
    if not classes:
        return "\n".join(lines) + "\n"
    by_id = {c.id: c for c in classes}
    inherits: dict[int, list[Connection]] = {}
    fields: dict[int, list[Connection]] = {}
    for conn in connections:
        if conn.kind is ConnectionKind.INHERITANCE:
            inherits.setdefault(conn.source, []).append(conn)
        elif conn.kind in (ConnectionKind.ASSOCIATION, ConnectionKind.AGGREGATION):
            fields.setdefault(conn.source, []).append(conn)
    for cls in classes:
        lines.append("")
        if target is CodegenTarget.JAVA:
            lines.extend(
                _emit_java_class(cls, inherits.get(cls.id, []), fields.get(cls.id, []), by_id)
            )
        else:
            lines.extend(
                _emit_cpp_class(cls, inherits.get(cls.id, []), fields.get(cls.id, []), by_id)
            )
    return "\n".join(lines) + "\n"


def clipboard_code(doc: Document, prefs, ids: Optional[Iterable[int]] = None) -> str:
    """Code text for clipboard/drag flavors in the preferred language."""
    return emit(doc, prefs.code_language, ids)


def _field_name(type_name: str, used: set[str]) -> str:
    base = re.sub(r"\W", "_", type_name)
    base = (base[0].lower() + base[1:]) if base else "ref"
    if not _IDENT.match(base):
        base = "ref"
    name = base
    ordinal = 2
    while name in used:
        name = f"{base}{ordinal}"
        ordinal += 1
    used.add(name)
    return name


def _relationship_fields(cls, rel_conns, by_id, used, fmt):
    out = []
    for conn in rel_conns:
        target_name = by_id[conn.target].name
        name = _field_name(target_name, used)
        suffix = " // aggregation" if conn.kind is ConnectionKind.AGGREGATION else ""
        out.append(fmt.format(type=target_name, name=name) + suffix)
    return out


def _emit_java_class(cls, inherit_conns, rel_conns, by_id):
    decl = ("interface " if cls.is_interface else "class ") + cls.name
    extends: list[str] = []
    implements: list[str] = []
    commented: list[str] = []
    for conn in inherit_conns:
        parent = by_id[conn.target]
        if cls.is_interface:
            # An interface may extend interfaces; a class parent is noted only.
            (extends if parent.is_interface else commented).append(parent.name)
        elif parent.is_interface:
            implements.append(parent.name)
        elif not extends:
            extends.append(parent.name)
        else:
            commented.append(parent.name)
    if extends:
        decl += " extends " + ", ".join(extends)
    for name in commented:
        decl += f" /* extends {name} */"
    if implements:
        decl += " implements " + ", ".join(implements)
    lines = [decl + " {"]
    used: set[str] = set()
    field_lines = []
    for raw in cls.variables:
        sig = parse_member(raw, is_method=False)
        if sig.name is None:
            field_lines.append(f"    // {raw}")
            field_lines.append("    /* TODO */")
        else:
            used.add(sig.name)
            type_name = sig.type_name or "Object"
            prefix = "" if cls.is_interface else "private "
            field_lines.append(f"    {prefix}{type_name} {sig.name};")
    field_lines.extend(
        _relationship_fields(
            cls, rel_conns, by_id, used,
            "    " + ("" if cls.is_interface else "private ") + "{type} {name};",
        )
    )
    method_lines = []
    for raw in cls.methods:
        sig = parse_member(raw, is_method=True)
        if sig.name is None:
            method_lines.append(f"    // {raw}")
            method_lines.append("    /* TODO */")
            continue
        ret = sig.type_name or "void"
        params = _java_params(sig.params or ())
        if cls.is_interface:
            method_lines.append(f"    {ret} {sig.name}({params});")
        else:
            method_lines.append(f"    public {ret} {sig.name}({params}) {{")
            if ret != "void":
                # a body that satisfies any return type
                method_lines.append("        throw new UnsupportedOperationException();")
            method_lines.append("    }")
    lines.extend(field_lines)
    if field_lines and method_lines:
        lines.append("")
    lines.extend(method_lines)
    lines.append("}")
    return lines


def _java_params(params) -> str:
    rendered = []
    for i, (name, type_name) in enumerate(params):
        rendered.append(f"{type_name or 'Object'} {name or f'arg{i}'}")
    return ", ".join(rendered)


def _emit_cpp_class(cls, inherit_conns, rel_conns, by_id):
    decl = "class " + cls.name
    bases = [by_id[conn.target].name for conn in inherit_conns]
    if bases:
        decl += " : " + ", ".join(f"public {name}" for name in bases)
    lines = [decl + " {" + (" // interface" if cls.is_interface else "")]
    method_lines = []
    for raw in cls.methods:
        sig = parse_member(raw, is_method=True)
        if sig.name is None:
            method_lines.append(f"    // {raw}")
            method_lines.append("    /* TODO */")
            continue
        ret = sig.type_name or "void"
        params = _cpp_params(sig.params or ())
        if cls.is_interface:
            method_lines.append(f"    virtual {ret} {sig.name}({params}) = 0;")
        else:
            method_lines.append(f"    {ret} {sig.name}({params});")
    used: set[str] = set()
    field_lines = []
    for raw in cls.variables:
        sig = parse_member(raw, is_method=False)
        if sig.name is None:
            field_lines.append(f"    // {raw}")
            field_lines.append("    /* TODO */")
        else:
            used.add(sig.name)
            field_lines.append(f"    {sig.type_name or 'void*'} {sig.name};")
    field_lines.extend(
        _relationship_fields(cls, rel_conns, by_id, used, "    {type} {name};")
    )
    if method_lines:
        lines.append("public:")
        lines.extend(method_lines)
    if field_lines:
        lines.append("private:")
        lines.extend(field_lines)
    lines.append("};")
    return lines


def _cpp_params(params) -> str:
    rendered = []
    for i, (name, type_name) in enumerate(params):
        rendered.append(f"{type_name or 'void*'} {name or f'arg{i}'}")
    return ", ".join(rendered)
