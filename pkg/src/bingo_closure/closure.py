"""The Bingo dependency map, its dolmatic extension, closures and depth.

A square ``s`` depends on a set ``S`` when some line through ``s`` has all of
its other squares in ``S``.  The dolmatic step adds every dependent square at
once; iterating it reaches the closure, and the number of productive
iterations is the depth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import Cell, CellSet, Line, full_mask, line_masks, make_lines, render_board

MAX_ORACLE_CELLS = 18


class SubsetBudgetError(ValueError):
    pass


def _dependent_bits(n: int, bits: int) -> int:
    out = 0
    for mask in line_masks(n):
        missing = mask & ~bits
        if missing == 0:
            # a complete line: every square on it completes it
            out |= mask
        elif missing & (missing - 1) == 0:
            out |= missing
    return out


def _step_bits(n: int, bits: int) -> int:
    add = 0
    for mask in line_masks(n):
        missing = mask & ~bits
        if missing and missing & (missing - 1) == 0:
            add |= missing
    return bits | add


def closure_bits(n: int, bits: int) -> tuple[int, int]:
    """Return ``(final_bits, depth)`` without building a trace."""
    d = 0
    while True:
        nxt = _step_bits(n, bits)
        if nxt == bits:
            return bits, d
        bits = nxt
        d += 1


def dependent_set(state: CellSet) -> CellSet:
    return CellSet(state.n, _dependent_bits(state.n, state.bits))


def dolmatic_step(state: CellSet) -> CellSet:
    return CellSet(state.n, _step_bits(state.n, state.bits))


@dataclass(frozen=True)
class TraceStep:
    index: int
    added: CellSet
    firing_lines: dict[Cell, tuple[Line, ...]]
    completed_lines: tuple[Line, ...]

    def to_dict(self) -> dict:
        cells = sorted(self.added)
        return {
            "index": self.index,
            "added": [[c.row, c.col] for c in cells],
            "firing": [[ln.to_dict() for ln in self.firing_lines[c]] for c in cells],
            "completed": [ln.to_dict() for ln in self.completed_lines],
        }


@dataclass(frozen=True)
class ClosureTrace:
    start: CellSet
    steps: tuple[TraceStep, ...]
    final: CellSet
    depth: int

    @property
    def n(self) -> int:
        return self.start.n

    @property
    def spans(self) -> bool:
        return self.final.is_full()

    def labels(self) -> dict[Cell, int]:
        """Map each added cell to the step that added it."""
        return {cell: step.index for step in self.steps for cell in step.added}

    def completed_counts(self) -> list[int]:
        return [len(step.completed_lines) for step in self.steps]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "start": render_board(self.start),
            "depth": self.depth,
            "steps": [s.to_dict() for s in self.steps],
            "final": render_board(self.final),
        }

    def render(self, pretty: bool = False) -> str:
        return render_board(self.start, self.labels(), pretty=pretty)


def closure(start: CellSet) -> ClosureTrace:
    n = start.n
    lines = make_lines(n)
    state = start.bits
    steps = []
    while True:
        nxt = _step_bits(n, state)
        if nxt == state:
            break
        added = nxt & ~state
        firing: dict[Cell, tuple[Line, ...]] = {}
        for cell in CellSet(n, added):
            bit = 1 << (cell.row * n + cell.col)
            firing[cell] = tuple(ln for ln in lines if ln.mask.bits & ~state == bit)
        completed = tuple(
            ln for ln in lines
            if ln.mask.bits & ~nxt == 0 and ln.mask.bits & ~state != 0
        )
        steps.append(TraceStep(len(steps) + 1, CellSet(n, added), firing, completed))
        state = nxt
    return ClosureTrace(start, tuple(steps), CellSet(n, state), len(steps))


def depth(start: CellSet) -> int:
    return closure_bits(start.n, start.bits)[1]


def closure_set(start: CellSet) -> CellSet:
    return CellSet(start.n, closure_bits(start.n, start.bits)[0])


def is_closed(cells: CellSet) -> bool:
    return _dependent_bits(cells.n, cells.bits) & ~cells.bits == 0


def spans(cells: CellSet) -> bool:
    return closure_bits(cells.n, cells.bits)[0] == full_mask(cells.n)


def general_dolmatic_extension(state: CellSet) -> CellSet:
    """``A`` united with ``phi(S)`` for every subset ``S`` of ``A``, by enumeration.

    Exponential in ``|A|``; meant as an oracle for ``dolmatic_step``.
    """
    k = len(state)
    if k > MAX_ORACLE_CELLS:
        raise SubsetBudgetError(f"{k} cells exceeds the {MAX_ORACLE_CELLS}-cell subset budget")
    n, a = state.n, state.bits
    if n * n <= 64 and k > 8:
        return CellSet(n, a | _union_phi_of_submasks(n, a))
    out = a
    sub = a
    while True:
        out |= _dependent_bits(n, sub)
        if sub == 0:
            break
        sub = (sub - 1) & a
    return CellSet(n, out)


def _union_phi_of_submasks(n: int, a: int) -> int:
    positions = [i for i in range(n * n) if a >> i & 1]
    idx = np.arange(1 << len(positions), dtype=np.uint64)
    subs = np.zeros_like(idx)
    for j, p in enumerate(positions):
        subs |= ((idx >> np.uint64(j)) & np.uint64(1)) << np.uint64(p)
    out = 0
    zero, one = np.uint64(0), np.uint64(1)
    for mask in line_masks(n):
        m = np.uint64(mask)
        missing = m & ~subs
        hits = np.where(missing == zero, m, np.where((missing & (missing - one)) == zero, missing, zero))
        out |= int(np.bitwise_or.reduce(hits))
    return out


@dataclass
class LawReport:
    isotone: bool
    expansive: bool
    counterexample: Optional[tuple[CellSet, CellSet]] = None
    pairs_checked: int = 0

    @property
    def dolmatic(self) -> bool:
        return self.isotone and self.expansive


SET_MAPS: dict[str, Callable[[CellSet], CellSet]] = {
    "dependency": dependent_set,
    "dolmatic_step": dolmatic_step,
}


def _nested_pairs(n: int, budget: int, seed: int):
    cells = n * n
    if n <= 2:
        for b in range(1 << cells):
            a = b
            while True:
                yield a, b
                if a == 0:
                    break
                a = (a - 1) & b
        return
    rng = random.Random(seed)
    for _ in range(budget):
        p = rng.random()
        b = sum(1 << i for i in range(cells) if rng.random() < p)
        a = b & rng.getrandbits(cells)
        yield a, b


def check_laws(n: int, set_map: str = "dependency", budget: int = 1000, seed: int = 0) -> LawReport:
    """Check isotonicity and expansivity of a named set map.

    Exhaustive over nested pairs ``A <= B`` for n <= 2, seeded sampling otherwise.
    The counterexample is ``(A, B)`` for an isotonicity failure, or
    ``(A, map(A))`` for an expansivity failure.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    f = SET_MAPS[set_map]
    isotone = expansive = True
    counter = None
    checked = 0
    for a, b in _nested_pairs(n, budget, seed):
        checked += 1
        A, B = CellSet(n, a), CellSet(n, b)
        fa, fb = f(A), f(B)
        if isotone and not fa <= fb:
            isotone = False
            counter = counter or (A, B)
        for X, fx in ((A, fa), (B, fb)):
            if expansive and not X <= fx:
                expansive = False
                counter = counter or (X, fx)
    return LawReport(isotone, expansive, counter, checked)
