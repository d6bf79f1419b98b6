"""Board geometry: cells, lines, bitmask layout, symmetries, board text I/O.

Cells are laid out row-major, cell ``(r, c)`` at bit ``r * n + c``, with row 0
at the top.  Bit vectors are plain Python ints.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

MAX_N = 11


class BoardParseError(ValueError):
    """Base class for malformed board text."""


class RaggedRowsError(BoardParseError):
    pass


class IllegalCharacterError(BoardParseError):
    pass


class BoardSizeError(BoardParseError):
    pass


class DeclaredSizeMismatchError(BoardParseError):
    pass


def check_size(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_N:
        raise BoardSizeError(f"board size must be an integer in [1, {MAX_N}], got {n!r}")
    return n


class Cell(NamedTuple):
    row: int
    col: int


class LineKind(enum.Enum):
    ROW = "row"
    COL = "col"
    MAIN_DIAG = "main_diag"
    ANTI_DIAG = "anti_diag"


@dataclass(frozen=True)
class CellSet:
    """A subset of the n*n squares, stored as a bit vector."""

    n: int
    bits: int = 0

    def __post_init__(self):
        check_size(self.n)
        if self.bits < 0 or self.bits >> (self.n * self.n):
            raise ValueError(f"bits 0x{self.bits:x} do not fit an {self.n}x{self.n} board")

    @classmethod
    def empty(cls, n: int) -> CellSet:
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> CellSet:
        return cls(n, full_mask(n))

    @classmethod
    def from_cells(cls, n: int, cells: Iterable[tuple[int, int]]) -> CellSet:
        bits = 0
        for r, c in cells:
            if not (0 <= r < n and 0 <= c < n):
                raise ValueError(f"cell {(r, c)} is off an {n}x{n} board")
            bits |= 1 << (r * n + c)
        return cls(n, bits)

    def _same_board(self, other: CellSet) -> None:
        if not isinstance(other, CellSet):
            raise TypeError(f"expected CellSet, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"board size mismatch: {self.n} vs {other.n}")

    def __or__(self, other: CellSet) -> CellSet:
        self._same_board(other)
        return CellSet(self.n, self.bits | other.bits)

    def __and__(self, other: CellSet) -> CellSet:
        self._same_board(other)
        return CellSet(self.n, self.bits & other.bits)

    def __sub__(self, other: CellSet) -> CellSet:
        self._same_board(other)
        return CellSet(self.n, self.bits & ~other.bits)

    def __xor__(self, other: CellSet) -> CellSet:
        self._same_board(other)
        return CellSet(self.n, self.bits ^ other.bits)

    def __invert__(self) -> CellSet:
        return CellSet(self.n, full_mask(self.n) & ~self.bits)

    def __le__(self, other: CellSet) -> bool:
        self._same_board(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: CellSet) -> bool:
        return self <= other and self.bits != other.bits

    def __ge__(self, other: CellSet) -> bool:
        return other <= self

    def __gt__(self, other: CellSet) -> bool:
        return other < self

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, cell: tuple[int, int]) -> bool:
        r, c = cell
        if not (0 <= r < self.n and 0 <= c < self.n):
            return False
        return bool(self.bits >> (r * self.n + c) & 1)

    def __iter__(self) -> Iterator[Cell]:
        bits, n = self.bits, self.n
        while bits:
            low = bits & -bits
            i = low.bit_length() - 1
            yield Cell(*divmod(i, n))
            bits ^= low

    def is_full(self) -> bool:
        return self.bits == full_mask(self.n)

    def __repr__(self) -> str:
        return f"CellSet(n={self.n}, cells={sorted(self)})"


@dataclass(frozen=True)
class Line:
    kind: LineKind
    index: int
    mask: CellSet

    @property
    def key(self) -> tuple[str, int]:
        return (self.kind.value, self.index)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "index": self.index}

    def __repr__(self) -> str:
        return f"Line({self.kind.value}, {self.index})"


def full_mask(n: int) -> int:
    return (1 << (n * n)) - 1


def cell_index(n: int, row: int, col: int) -> int:
    return row * n + col


@lru_cache(maxsize=None)
def make_lines(n: int) -> tuple[Line, ...]:
    """All 2n+2 lines: rows 0..n-1, cols 0..n-1, main diagonal, anti-diagonal."""
    check_size(n)
    lines = [Line(LineKind.ROW, i, CellSet.from_cells(n, ((i, c) for c in range(n)))) for i in range(n)]
    lines += [Line(LineKind.COL, j, CellSet.from_cells(n, ((r, j) for r in range(n)))) for j in range(n)]
    lines.append(Line(LineKind.MAIN_DIAG, 0, CellSet.from_cells(n, ((i, i) for i in range(n)))))
    lines.append(Line(LineKind.ANTI_DIAG, 0, CellSet.from_cells(n, ((i, n - 1 - i) for i in range(n)))))
    return tuple(lines)


@lru_cache(maxsize=None)
def line_masks(n: int) -> tuple[int, ...]:
    return tuple(line.mask.bits for line in make_lines(n))


def lines_through(n: int, cell: tuple[int, int]) -> list[Line]:
    return [line for line in make_lines(n) if cell in line.mask]


# Each transform maps (r, c) on an n x n board; identity first.
_TRANSFORMS = (
    ("identity", lambda r, c, m: (r, c)),
    ("rot90", lambda r, c, m: (c, m - r)),
    ("rot180", lambda r, c, m: (m - r, m - c)),
    ("rot270", lambda r, c, m: (m - c, r)),
    ("flip_rows", lambda r, c, m: (m - r, c)),
    ("flip_cols", lambda r, c, m: (r, m - c)),
    ("transpose", lambda r, c, m: (c, r)),
    ("anti_transpose", lambda r, c, m: (m - c, m - r)),
)

TRANSFORM_NAMES = tuple(name for name, _ in _TRANSFORMS)


@lru_cache(maxsize=None)
def dihedral_transforms(n: int) -> tuple[tuple[int, ...], ...]:
    """The 8 symmetries of the square as permutations of cell indices.

    ``perm[i]`` is the index that cell ``i`` is sent to.
    """
    check_size(n)
    m = n - 1
    perms = []
    for _, f in _TRANSFORMS:
        perm = [0] * (n * n)
        for r in range(n):
            for c in range(n):
                r2, c2 = f(r, c, m)
                perm[r * n + c] = r2 * n + c2
        perms.append(tuple(perm))
    return tuple(perms)


def permute_bits(bits: int, perm: tuple[int, ...]) -> int:
    out = 0
    while bits:
        low = bits & -bits
        out |= 1 << perm[low.bit_length() - 1]
        bits ^= low
    return out


def apply_transform(cells: CellSet, perm: tuple[int, ...]) -> CellSet:
    return CellSet(cells.n, permute_bits(cells.bits, perm))


_SIZE_DECL = re.compile(r"^\s*n\s*=\s*(\S+)\s*$")


def parse_board(text: str) -> tuple[int, CellSet]:
    """Parse board text: optional ``n=K`` line, then n rows of ``#``/``.``."""
    rows = text.split()
    declared: Optional[int] = None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if lines:
        m = _SIZE_DECL.match(lines[0])
        if m:
            try:
                declared = int(m.group(1))
            except ValueError:
                raise BoardSizeError(f"bad size declaration {lines[0].strip()!r}") from None
            check_size(declared)
            rows = "\n".join(lines[1:]).split()

    if not rows:
        raise BoardSizeError("board has no rows")
    for i, row in enumerate(rows):
        bad = set(row) - {"#", "."}
        if bad:
            raise IllegalCharacterError(f"row {i} contains illegal characters {sorted(bad)}")
    widths = {len(row) for row in rows}
    if len(widths) > 1:
        raise RaggedRowsError(f"rows have differing lengths {sorted(widths)}")
    n = len(rows)
    if declared is not None and declared != n:
        raise DeclaredSizeMismatchError(f"declared n={declared} but found {n} rows")
    check_size(n)
    if widths.pop() != n:
        raise RaggedRowsError(f"board has {n} rows of length {len(rows[0])}; rows must have length n")
    cells = [(r, c) for r, row in enumerate(rows) for c, ch in enumerate(row) if ch == "#"]
    return n, CellSet.from_cells(n, cells)


def render_board(
    cells: CellSet,
    labels: Optional[Mapping[tuple[int, int], int]] = None,
    pretty: bool = False,
) -> str:
    """Render a board.

    Without labels (and not pretty) the output is board file text.  With
    labels, cells are space separated and right-aligned, occupied cells drawn
    as ``#`` (``•`` when ``pretty``) and empty cells carrying their label or ``.``.
    """
    n = cells.n
    occupied_glyph = "•" if pretty else "#"
    if labels is None and not pretty:
        return "\n".join(
            "".join("#" if (r, c) in cells else "." for c in range(n)) for r in range(n)
        )
    labels = dict(labels or {})
    for cell in labels:
        if tuple(cell) in cells:
            raise ValueError(f"label given for occupied cell {tuple(cell)}")
    width = max([1] + [len(str(v)) for v in labels.values()])
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            if (r, c) in cells:
                tok = occupied_glyph
            elif (r, c) in labels:
                tok = str(labels[(r, c)])
            else:
                tok = "."
            row.append(tok.rjust(width))
        out.append(" ".join(row))
    return "\n".join(out)


def parse_labeled_board(text: str) -> tuple[CellSet, dict[Cell, int]]:
    """Inverse of ``render_board`` with labels: returns occupied cells and labels."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    n = len(rows)
    check_size(n)
    occupied, labels = [], {}
    for r, toks in enumerate(rows):
        if len(toks) != n:
            raise RaggedRowsError(f"row {r} has {len(toks)} cells, expected {n}")
        for c, tok in enumerate(toks):
            if tok in ("#", "•"):
                occupied.append((r, c))
            elif tok.isdigit():
                labels[Cell(r, c)] = int(tok)
            elif tok != ".":
                raise IllegalCharacterError(f"unexpected token {tok!r} at {(r, c)}")
    return CellSet.from_cells(n, occupied), labels
