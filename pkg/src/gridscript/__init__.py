"""A spreadsheet engine where the grid and a generated program are one document."""

from .addresses import AddressError, BoundsRect, CellAddress
from .engine import (
    EngineConfig,
    RecalcResult,
    SheetResult,
    load_file,
    recalculate,
    save_file,
    set_user_section,
)
from .errors import (
    DerivedCycleError,
    DerivedSheetError,
    DocumentError,
    FormatError,
    LockedError,
    SheetInUseError,
    UnknownSheetError,
)
from .model import (
    SECTION_ORDER,
    Cell,
    Constant,
    DataSource,
    FormatSpec,
    Formula,
    SectionKind,
    UserSections,
    Workbook,
    Worksheet,
)
from .program import (
    GeneratedProgram,
    Section,
    export_data_only,
    export_library,
    export_standalone,
    generate_program,
    load,
    save,
)
from .runtime import ExecutionLimits
from .values import (
    EnforcedType,
    ErrorKind,
    ErrorValue,
    TypeConformanceError,
    infer_literal,
    render_value,
)

__version__ = "0.1.0"

__all__ = [
    "AddressError",
    "BoundsRect",
    "Cell",
    "CellAddress",
    "Constant",
    "DataSource",
    "DerivedCycleError",
    "DerivedSheetError",
    "DocumentError",
    "EngineConfig",
    "EnforcedType",
    "ErrorKind",
    "ErrorValue",
    "ExecutionLimits",
    "FormatError",
    "FormatSpec",
    "Formula",
    "GeneratedProgram",
    "LockedError",
    "RecalcResult",
    "SECTION_ORDER",
    "Section",
    "SectionKind",
    "SheetInUseError",
    "SheetResult",
    "TypeConformanceError",
    "UnknownSheetError",
    "UserSections",
    "Workbook",
    "Worksheet",
    "export_data_only",
    "export_library",
    "export_standalone",
    "generate_program",
    "infer_literal",
    "load",
    "load_file",
    "recalculate",
    "render_value",
    "save",
    "save_file",
    "set_user_section",
]
