"""minuml: a minimal UML class-diagram engine.

Core pieces: the document model (classes, connections, notes, glyphs), an
unbounded undo/redo command stack, deterministic layout and hit testing,
Java/C++ skeleton generation, a canonical `.muml` file format, SVG/PNG
export with flexible pagination, and multi-flavor clipboard payloads.
"""

from .model import (
    ClassBox,
    Connection,
    ConnectionKind,
    DanglingEndpoint,
    DeletionRecord,
    Document,
    Glyph,
    IdMismatch,
    ModelError,
    Point,
    Rect,
    SelfLoopRejected,
    StickyNote,
    TooFewPoints,
)
from .commands import (
    Command,
    CommandStack,
    Composite,
    CreateClass,
    CreateConnection,
    CreateGlyph,
    CreateNote,
    Delete,
    EditClass,
    EditNote,
    LoadDocument,
    PasteInsert,
    SetConnectionKind,
    Translate,
)
from .geometry import (
    HitTester,
    RouteResult,
    TextMetrics,
    Viewport,
    class_bounds,
    content_bounds,
    hit_test,
    rect_select,
    route_connection,
)
from .codegen import CodegenTarget, MemberSig, SelectionNotClosed, emit, parse_member
from .persistence import (
    IntegrityError,
    ParseError,
    Preferences,
    UnsupportedVersion,
    load_prefs,
    parse,
    save_prefs,
    serialize,
)
from .render import (
    DrawCmd,
    EmptyPrintRegion,
    LineCmd,
    Orientation,
    PagePlan,
    PageSetup,
    PageSize,
    PolygonCmd,
    PolylineCmd,
    RasterTooLarge,
    RectCmd,
    TextCmd,
    ViewState,
    export_png,
    export_svg,
    page_boundary_overlay,
    paginate,
    render_page,
    render_scene,
)
from .clipboard import (
    EmptyEffectiveSelection,
    Payload,
    build_payload,
    cut,
    paste,
)

__version__ = "0.1.0"
