"""Catalogued boards and the spiral-ring construction of depth-2n spanning sets.

Every board this module hands out has been run through the closure engine;
a construction that does not reproduce its expected labels raises instead of
returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .closure import ClosureTrace, closure
from .grid import Cell, CellSet, LineKind, MAX_N


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class CatalogBoard:
    name: str
    n: int
    labels: dict[Cell, int]
    expected_depth: int
    expected_spanning: bool
    occupied_override: Optional[CellSet] = None

    @property
    def occupied(self) -> CellSet:
        if self.occupied_override is not None:
            return self.occupied_override
        return ~CellSet.from_cells(self.n, self.labels)

    def trace(self) -> ClosureTrace:
        return closure(self.occupied)


def _labels(pairs: dict[tuple[int, int], int]) -> dict[Cell, int]:
    return {Cell(*rc): v for rc, v in pairs.items()}


BOARD1_CELLS = (
    (0, 0), (0, 2), (0, 4), (1, 0), (1, 4), (2, 2),
    (3, 0), (3, 1), (3, 3), (3, 4), (4, 0), (4, 4),
)

_BOARD2 = {
    (0, 2): 1, (0, 0): 2, (4, 4): 3, (3, 4): 4, (3, 1): 5, (4, 1): 6,
    (4, 0): 7, (1, 3): 8, (1, 0): 9, (2, 3): 9, (2, 0): 10,
}
_BOARD3 = {(2, 2): 1, (0, 2): 2, (1, 1): 3, (0, 0): 4, (0, 1): 4, (1, 0): 4}
_BOARD4 = {
    (0, 1): 1, (0, 3): 2, (3, 3): 3, (2, 2): 4, (3, 0): 4, (1, 2): 5, (2, 0): 5, (1, 0): 6,
}
_BOARD_S = {
    (0, 3): 1, (0, 0): 2, (5, 5): 3, (4, 5): 4, (4, 1): 5, (3, 1): 6, (3, 2): 7,
    (5, 2): 8, (5, 0): 9, (1, 4): 10, (1, 0): 11, (2, 4): 11, (2, 0): 12,
}
_RING9 = {(8, 8): 1, (8, 0): 2, (0, 0): 3, (0, 7): 4, (7, 7): 5, (7, 1): 6, (1, 1): 7, (1, 4): 8}
_RING10 = {(9, 9): 1, (9, 0): 2, (0, 0): 3, (0, 8): 4, (8, 8): 5, (8, 1): 6, (1, 1): 7, (1, 5): 8}


def _spiral(ring: dict, base: dict, shift: int = 2, delay: int = 8) -> dict:
    out = dict(ring)
    out.update({(r + shift, c + shift): v + delay for (r, c), v in base.items()})
    return out


def _board1() -> CatalogBoard:
    occupied = CellSet.from_cells(5, BOARD1_CELLS)
    # labels of the cells the closure reaches; the 6 unreached cells stay unlabeled
    labels = {
        (1, 1): 1, (1, 3): 1, (2, 0): 1, (2, 4): 1, (3, 2): 1, (1, 2): 2, (4, 2): 3,
    }
    return CatalogBoard("board1", 5, _labels(labels), 3, False, occupied)


@lru_cache(maxsize=None)
def catalog() -> tuple[CatalogBoard, ...]:
    return (
        _board1(),
        CatalogBoard("board2", 5, _labels(_BOARD2), 10, True),
        CatalogBoard("board3", 3, _labels(_BOARD3), 4, True),
        CatalogBoard("board4", 4, _labels(_BOARD4), 6, True),
        CatalogBoard("boardS", 6, _labels(_BOARD_S), 12, True),
        CatalogBoard("board9", 9, _labels(_spiral(_RING9, _BOARD2)), 18, True),
        CatalogBoard("board10", 10, _labels(_spiral(_RING10, _BOARD_S)), 20, True),
    )


def get_board(name: str) -> CatalogBoard:
    for board in catalog():
        if board.name == name:
            return board
    raise KeyError(f"no catalog board named {name!r}; choose from {[b.name for b in catalog()]}")


def has_chain_property(trace: ClosureTrace) -> bool:
    """Every step k >= 2 fires a line containing a cell added at step k-1."""
    for prev, step in zip(trace.steps, trace.steps[1:]):
        if not any(
            ln.mask.bits & prev.added.bits
            for lines in step.firing_lines.values()
            for ln in lines
        ):
            return False
    return True


def first_column(trace: ClosureTrace) -> int:
    """Column of the single step-1 cell, which must fire along a column only."""
    if not trace.steps or len(trace.steps[0].added) != 1:
        raise ConstructionError("base must add exactly one cell at step 1")
    (cell,) = trace.steps[0].added
    kinds = {ln.kind for ln in trace.steps[0].firing_lines[cell]}
    if kinds != {LineKind.COL}:
        raise ConstructionError(f"base step-1 cell {tuple(cell)} does not fire along a column alone")
    return cell.col


def verify_board(board: CatalogBoard) -> ClosureTrace:
    trace = board.trace()
    if trace.depth != board.expected_depth:
        raise ConstructionError(f"{board.name}: depth {trace.depth}, expected {board.expected_depth}")
    if trace.spans != board.expected_spanning:
        raise ConstructionError(f"{board.name}: spanning={trace.spans}, expected {board.expected_spanning}")
    if trace.labels() != board.labels:
        raise ConstructionError(f"{board.name}: closure labels differ from the recorded labels")
    return trace


def _check_base(base: CatalogBoard) -> tuple[ClosureTrace, int]:
    trace = base.trace()
    n = base.n
    if not trace.spans or trace.depth != 2 * n:
        raise ConstructionError(f"{base.name}: base must span with depth {2 * n}, got depth {trace.depth}")
    if trace.labels() != base.labels:
        raise ConstructionError(f"{base.name}: closure labels differ from the recorded labels")
    if not has_chain_property(trace):
        raise ConstructionError(f"{base.name}: trace is not a strict chain")
    return trace, first_column(trace)


def ring_gates(n: int, width: int, first_col: int) -> list[Cell]:
    """Gate cells, in firing order, of a ring wrapped around an n x n base."""
    if width == 2:
        N = n + 4
        gates = [(N - 1, N - 1), (N - 1, 0), (0, 0), (0, N - 2),
                 (N - 2, N - 2), (N - 2, 1), (1, 1), (1, first_col + 2)]
    elif width == 1:
        N = n + 2
        gates = [(N - 1, N - 1), (N - 1, 0), (0, 0), (0, first_col + 1)]
    else:
        raise ValueError(f"ring width must be 1 or 2, got {width}")
    return [Cell(*g) for g in gates]


def wrap_ring(base: CatalogBoard, width: int) -> CatalogBoard:
    """Wrap a ring of the given width around a depth-2n spanning base board."""
    if width not in (1, 2):
        raise ValueError(f"ring width must be 1 or 2, got {width}")
    _, col = _check_base(base)
    N = base.n + 2 * width
    if N > MAX_N:
        raise ConstructionError(f"wrapping {base.name} would exceed the {MAX_N}x{MAX_N} cap")
    gates = ring_gates(base.n, width, col)
    delay = len(gates)
    labels = {g: i + 1 for i, g in enumerate(gates)}
    labels.update({Cell(r + width, c + width): v + delay for (r, c), v in base.labels.items()})
    board = CatalogBoard(f"spiral{N}", N, labels, 2 * N, True)
    trace = verify_board(board)
    if not has_chain_property(trace):
        raise ConstructionError(f"{board.name}: wrapped trace lost the chain property")
    return board


def ring_plan(n: int, width: str | int = "auto") -> tuple[str, list[int]]:
    """Base board name and ring widths that reach side n."""
    if not 5 <= n <= MAX_N:
        raise ValueError(f"constructions cover 5 <= n <= {MAX_N}, got {n}")
    base = "board2" if n % 2 else "boardS"
    gap = n - (5 if n % 2 else 6)
    if width == "auto":
        widths = [2] * (gap // 4) + [1] * ((gap % 4) // 2)
    else:
        w = int(width)
        if w not in (1, 2):
            raise ValueError(f"ring width must be auto, 1 or 2, got {width!r}")
        if gap % (2 * w):
            raise ValueError(f"n={n} is not reachable with rings of width {w}")
        widths = [w] * (gap // (2 * w))
    return base, widths


def construct_max_depth(n: int, width: str | int = "auto") -> CatalogBoard:
    """A spanning n x n board of depth exactly 2n, verified by the closure engine."""
    base_name, widths = ring_plan(n, width)
    board = get_board(base_name)
    verify_board(board)
    for w in widths:
        board = wrap_ring(board, w)
    trace = verify_board(board)
    if board.n != n or trace.depth != 2 * n or not trace.spans:
        raise ConstructionError(f"construction for n={n} failed verification")
    return board


def final_rectangle(trace: ClosureTrace) -> Optional[frozenset[Cell]]:
    """The four corners filled last in a spanning trace, if they form a rectangle.

    The last step must add a single cell z; the step before must add a cell in
    z's row and one in z's column; the opposite corner must have been added in
    one of the last three steps.
    """
    if not trace.spans or trace.depth < 3:
        return None
    last = list(trace.steps[-1].added)
    if len(last) != 1:
        return None
    z = last[0]
    penult = list(trace.steps[-2].added)
    labels = trace.labels()
    d = trace.depth
    for p in penult:
        if p.row != z.row or p.col == z.col:
            continue
        for q in penult:
            if q.col != z.col or q.row == z.row:
                continue
            w = Cell(q.row, p.col)
            if labels.get(w, 0) >= d - 2:
                return frozenset((z, p, q, w))
    return None
