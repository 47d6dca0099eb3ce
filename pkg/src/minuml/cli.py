"""Headless command line: validate, export, and paginate diagram files.

Each subcommand is a thin composition of engine calls; exit codes are the
only success/failure channel and stdout is machine-parsable (one summary
line, then key=value lines).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import codegen, persistence, render
from .geometry import TextMetrics
from .model import Rect


def _parse_region(text: str) -> Rect:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("region must be x,y,w,h")
    try:
        x, y, w, h = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("region values must be numbers") from None
    if w <= 0 or h <= 0:
        raise argparse.ArgumentTypeError("region width and height must be positive")
    return Rect(x, y, w, h)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minuml",
        description="Validate, export, and paginate .muml diagram files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a file against all invariants")
    p_validate.add_argument("path", type=Path)

    p_export = sub.add_parser("export", help="write code or an image for a file")
    p_export.add_argument("path", type=Path)
    p_export.add_argument(
        "--format", required=True, choices=["java", "cpp", "svg", "png"]
    )
    p_export.add_argument("--out", required=True, type=Path)
    p_export.add_argument("--region", type=_parse_region, default=None,
                          help="world-space crop x,y,w,h (svg/png only)")
    p_export.add_argument("--dpi", type=float, default=96.0)

    p_pages = sub.add_parser("pages", help="tile a file into printable pages")
    p_pages.add_argument("path", type=Path)
    p_pages.add_argument("--page-size", choices=["letter", "a4"], default=None)
    p_pages.add_argument("--orientation", choices=["p", "l", "portrait", "landscape"],
                         default=None)
    p_pages.add_argument("--fit-one-page", action="store_true")
    p_pages.add_argument("--region", type=_parse_region, default=None)
    p_pages.add_argument("--out-dir", type=Path, default=Path("."))
    return parser


def _load(path: Path):
    return persistence.parse(path.read_bytes())


def cmd_validate(path: Path) -> int:
    try:
        data = path.read_bytes()
    except OSError as exc:
        print("parse-error")
        print(f"error={exc}")
        return 2
    try:
        doc = persistence.parse(data)
    except persistence.IntegrityError as exc:
        print("invalid")
        for problem in exc.problems:
            print(f"violation={problem}")
        return 1
    except persistence.ParseError as exc:
        print("parse-error")
        print(f"error={exc}")
        return 2
    problems = doc.check_invariants()
    if problems:
        print("invalid")
        for problem in problems:
            print(f"violation={problem}")
        return 1
    print("ok")
    print(f"elements={len(doc.elements)}")
    return 0


def cmd_export(
    path: Path,
    fmt: str,
    out: Path,
    region: Optional[Rect],
    dpi: float,
) -> int:
    doc = _load(path)
    m = TextMetrics()
    if fmt in ("java", "cpp"):
        target = codegen.CodegenTarget.JAVA if fmt == "java" else codegen.CodegenTarget.CPP
        data = codegen.emit(doc, target).encode("utf-8")
    else:
        cmds = render.render_scene(doc, m)
        if fmt == "svg":
            data = render.export_svg(cmds, viewbox=region)
        else:
            data = render.export_png(cmds, dpi=dpi, viewbox=region)
    out.write_bytes(data)
    print("written")
    print(f"out={out}")
    print(f"format={fmt}")
    print(f"bytes={len(data)}")
    return 0


def cmd_pages(
    path: Path,
    page_size: Optional[str],
    orientation: Optional[str],
    fit_one_page: bool,
    region: Optional[Rect],
    out_dir: Path,
) -> int:
    doc = _load(path)
    m = TextMetrics()
    prefs = persistence.read_prefs_file()
    size = {
        "letter": render.PageSize.LETTER,
        "a4": render.PageSize.A4,
        None: prefs.page_size,
    }[page_size]
    orient = {
        "p": render.Orientation.PORTRAIT,
        "portrait": render.Orientation.PORTRAIT,
        "l": render.Orientation.LANDSCAPE,
        "landscape": render.Orientation.LANDSCAPE,
        None: prefs.orientation,
    }[orientation]
    setup = render.PageSetup(page_size=size, orientation=orient)
    plan = render.paginate(doc, m, setup, region=region, fit_one_page=fit_one_page)
    print(f"{plan.cols}x{plan.rows}")
    print(f"pages={len(plan.pages)}")
    print(f"page-size={size.value}")
    print(f"orientation={orient.value}")
    out_dir.mkdir(parents=True, exist_ok=True)
    page_w, page_h = setup.page_points()
    viewbox = Rect(0.0, 0.0, page_w, page_h)
    for cell in plan.pages:
        cmds = render.render_page(plan, (cell.col, cell.row), doc, m)
        out_path = out_dir / f"{path.stem}-page-{cell.col}x{cell.row}.svg"
        out_path.write_bytes(
            render.export_svg(cmds, viewbox=viewbox, background="white")
        )
        print(f"file={out_path}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args.path)
        if args.command == "export":
            return cmd_export(args.path, args.format, args.out, args.region, args.dpi)
        return cmd_pages(
            args.path,
            args.page_size,
            args.orientation,
            args.fit_one_page,
            args.region,
            args.out_dir,
        )
    except (persistence.ParseError, persistence.IntegrityError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 2
    except (render.EmptyPrintRegion, render.RasterTooLarge, OSError) as exc:
        parser.exit(2, f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
