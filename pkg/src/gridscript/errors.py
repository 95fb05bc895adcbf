"""Document-level errors surfaced through the API and CLI."""


class DocumentError(Exception):
    kind = "DOCUMENT"


class UnknownSheetError(DocumentError):
    kind = "UNKNOWN_SHEET"


class LockedError(DocumentError):
    kind = "LOCKED"


class DerivedSheetError(DocumentError):
    """Derived worksheets (formula- or import-fed) hold no user cells."""

    kind = "DERIVED_SHEET"


class SheetInUseError(DocumentError):
    kind = "SHEET_IN_USE"


class DerivedCycleError(DocumentError):
    kind = "DERIVED_CYCLE"


class FormatError(DocumentError):
    """A document file is not in canonical form."""

    kind = "FORMAT"

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line
