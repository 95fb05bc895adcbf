"""A1-notation cell addresses and bounding rectangles."""

from __future__ import annotations

import re
from dataclasses import dataclass

MAX_COLUMNS = 16384
MAX_ROWS = 1048576

_ADDR_RE = re.compile(r"^\$?([A-Za-z]{1,3})\$?([0-9]+)$")
_COLUMN_RE = re.compile(r"^[A-Za-z]{1,3}$")


class AddressError(ValueError):
    """Raised for text that is not a valid cell address or column."""


def column_number(letters: str) -> int:
    """Convert column letters to a 1-based column number ("A" -> 1)."""
    if not _COLUMN_RE.match(letters):
        raise AddressError(f"invalid column letters: {letters!r}")
    num = 0
    for ch in letters.upper():
        num = num * 26 + (ord(ch) - ord("A") + 1)
    if num > MAX_COLUMNS:
        raise AddressError(f"column {letters!r} exceeds the engine limit")
    return num


def column_letters(num: int) -> str:
    """Convert a 1-based column number to letters (1 -> "A")."""
    if num < 1 or num > MAX_COLUMNS:
        raise AddressError(f"column number out of range: {num}")
    letters = ""
    while num:
        num, rem = divmod(num - 1, 26)
        letters = chr(ord("A") + rem) + letters
    return letters


@dataclass(frozen=True, order=True)
class CellAddress:
    # Row-major ordering: (row, col) is the sort key.
    row: int
    col: int

    def __post_init__(self) -> None:
        if not (1 <= self.col <= MAX_COLUMNS and 1 <= self.row <= MAX_ROWS):
            raise AddressError(f"address out of range: col={self.col} row={self.row}")

    @classmethod
    def parse(cls, text: str) -> "CellAddress":
        """Parse A1 notation; "$" markers are accepted and dropped."""
        m = _ADDR_RE.match(text)
        if not m:
            raise AddressError(f"invalid cell address: {text!r}")
        return cls(row=int(m.group(2)), col=column_number(m.group(1)))

    def __str__(self) -> str:
        return f"{column_letters(self.col)}{self.row}"


def is_address_text(text: str) -> bool:
    if not _ADDR_RE.match(text):
        return False
    try:
        CellAddress.parse(text)
    except AddressError:
        return False
    return True


@dataclass(frozen=True)
class BoundsRect:
    """Minimal rectangle around content; empty rectangles carry no corners."""

    empty: bool
    min: CellAddress | None = None
    max: CellAddress | None = None

    @classmethod
    def of(cls, addresses) -> "BoundsRect":
        addresses = list(addresses)
        rows = [a.row for a in addresses]
        cols = [a.col for a in addresses]
        if not rows:
            return cls(empty=True)
        return cls(
            empty=False,
            min=CellAddress(row=min(rows), col=min(cols)),
            max=CellAddress(row=max(rows), col=max(cols)),
        )

    def union(self, other: "BoundsRect") -> "BoundsRect":
        if self.empty:
            return other
        if other.empty:
            return self
        return BoundsRect(
            empty=False,
            min=CellAddress(row=min(self.min.row, other.min.row), col=min(self.min.col, other.min.col)),
            max=CellAddress(row=max(self.max.row, other.max.row), col=max(self.max.col, other.max.col)),
        )

    def contains(self, addr: CellAddress) -> bool:
        if self.empty:
            return False
        return self.min.row <= addr.row <= self.max.row and self.min.col <= addr.col <= self.max.col

    def cells(self):
        """Row-major iteration over every address in the rectangle."""
        if self.empty:
            return
        for row in range(self.min.row, self.max.row + 1):
            for col in range(self.min.col, self.max.col + 1):
                yield CellAddress(row=row, col=col)
