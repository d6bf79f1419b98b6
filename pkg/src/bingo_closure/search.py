"""Maximum-depth search and the bound / lemma verification sweeps.

Boards with n <= 8 fit a uint64 and are processed in numpy batches; larger
boards fall back to the scalar engine in :mod:`bingo_closure.closure`.
Exhaustive search walks subsets as integers ``0 .. 2**(n*n) - 1`` in fixed
shards, so the merged result never depends on the number of workers.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .closure import closure_bits
from .grid import CellSet, dihedral_transforms, full_mask, line_masks, permute_bits, render_board

BATCH_MAX_N = 8
SHARD_SIZE = 1 << 16
WITNESS_CAP = 16


class SearchTooLargeError(ValueError):
    pass


class Scope(enum.Enum):
    ALL = "all"
    SPANNING = "spanning"
    NON_SPANNING = "nonspanning"


def resolve_threads(flag: Optional[int] = None) -> int:
    if flag:
        return max(1, int(flag))
    env = os.environ.get("BINGO_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


# -- batched kernel ---------------------------------------------------------

@lru_cache(maxsize=None)
def _mask_array(n: int) -> np.ndarray:
    return np.array(line_masks(n), dtype=np.uint64)


def batch_closure(n: int, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closure and depth of every board in ``states`` (uint64 array, n <= 8)."""
    if n > BATCH_MAX_N:
        raise ValueError(f"batched kernel supports n <= {BATCH_MAX_N}")
    state = np.asarray(states, dtype=np.uint64).copy()
    depth = np.zeros(state.shape, dtype=np.int16)
    one = np.uint64(1)
    zero = np.uint64(0)
    active = np.arange(state.size)
    cur = state
    masks = _mask_array(n)
    while active.size:
        add = np.zeros_like(cur)
        for m in masks:
            missing = m & ~cur
            single = (missing != zero) & ((missing & (missing - one)) == zero)
            add |= np.where(single, missing, zero)
        nxt = cur | add
        grew = nxt != cur
        active = active[grew]
        cur = nxt[grew]
        depth[active] += 1
        state[active] = cur
    return state, depth


@lru_cache(maxsize=None)
def _byte_tables(n: int) -> np.ndarray:
    """Per-transform lookup tables: image of each byte at each byte offset."""
    perms = dihedral_transforms(n)
    nbytes = (n * n + 7) // 8
    tables = np.zeros((len(perms), nbytes, 256), dtype=np.uint64)
    for t, perm in enumerate(perms):
        for k in range(nbytes):
            for b in range(256):
                bits = (b << (8 * k)) & full_mask(n)
                tables[t, k, b] = permute_bits(bits, perm)
    return tables


def batch_images(n: int, states: np.ndarray) -> np.ndarray:
    """Images of every board under all 8 transforms, shape ``(8, len(states))``."""
    tables = _byte_tables(n)
    states = np.asarray(states, dtype=np.uint64)
    out = np.zeros((tables.shape[0], states.size), dtype=np.uint64)
    for k in range(tables.shape[1]):
        byte = ((states >> np.uint64(8 * k)) & np.uint64(0xFF)).astype(np.intp)
        out |= tables[:, k, :][:, byte]
    return out


def batch_canonical(n: int, states: np.ndarray) -> np.ndarray:
    return batch_images(n, states).min(axis=0)


# -- scalar helpers ---------------------------------------------------------

def canonical_bits(n: int, bits: int) -> int:
    return min(permute_bits(bits, p) for p in dihedral_transforms(n))


def canonical_form(cells: CellSet) -> CellSet:
    """Smallest image (as an unsigned integer) of ``cells`` under the 8 symmetries."""
    return CellSet(cells.n, canonical_bits(cells.n, cells.bits))


def orbit_size(n: int, bits: int) -> int:
    return len({permute_bits(bits, p) for p in dihedral_transforms(n)})


def _scalar_closure(n: int, states) -> tuple[list[int], list[int]]:
    finals, depths = [], []
    for s in states:
        f, d = closure_bits(n, int(s))
        finals.append(f)
        depths.append(d)
    return finals, depths


# -- search -----------------------------------------------------------------

@dataclass
class SearchReport:
    n: int
    scope: Scope
    max_depth: Optional[int]
    witnesses: list[CellSet]
    witness_count: int
    boards_examined: int
    seed: Optional[int] = None
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "scope": self.scope.value,
            "max_depth": self.max_depth,
            "witness_count": self.witness_count,
            "witnesses": [render_board(w) for w in self.witnesses],
            "boards_examined": self.boards_examined,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "seed": self.seed,
        }


@dataclass
class _Partial:
    max_depth: int = -1
    witnesses: tuple[int, ...] = ()
    count: int = 0
    examined: int = 0

    def merge(self, other: _Partial) -> _Partial:
        examined = self.examined + other.examined
        if self.max_depth != other.max_depth:
            best = self if self.max_depth > other.max_depth else other
            return _Partial(best.max_depth, best.witnesses, best.count, examined)
        wits = tuple(sorted(set(self.witnesses) | set(other.witnesses))[:WITNESS_CAP])
        return _Partial(self.max_depth, wits, self.count + other.count, examined)


def _in_scope(scope: Scope, spanning):
    if scope is Scope.SPANNING:
        return spanning
    if scope is Scope.NON_SPANNING:
        return ~spanning
    return np.ones_like(spanning, dtype=bool)


def _reduce(n: int, states: np.ndarray, finals, depths, weights, scope: Scope) -> _Partial:
    full = full_mask(n)
    finals = np.asarray(finals, dtype=object if n > BATCH_MAX_N else np.uint64)
    depths = np.asarray(depths, dtype=np.int64)
    spanning = finals == (full if n > BATCH_MAX_N else np.uint64(full))
    keep = _in_scope(scope, np.asarray(spanning, dtype=bool))
    if not keep.any():
        return _Partial(examined=int(states.size))
    best = int(depths[keep].max())
    hit = keep & (depths == best)
    count = int(np.asarray(weights)[hit].sum())
    if n <= BATCH_MAX_N:
        wits = [int(w) for w in np.unique(batch_canonical(n, states[hit]))[:WITNESS_CAP]]
    else:
        wits = sorted({canonical_bits(n, int(s)) for s in states[hit]})[:WITNESS_CAP]
    return _Partial(best, tuple(wits), count, int(states.size))


def _exhaustive_shard(n: int, lo: int, hi: int, scope: Scope, use_symmetry: bool) -> _Partial:
    states = np.arange(lo, hi, dtype=np.uint64)
    examined = states.size
    if use_symmetry:
        images = batch_images(n, states)
        canon = images.min(axis=0) == states
        states, images = states[canon], images[:, canon]
        # orbit size = number of distinct images
        srt = np.sort(images, axis=0)
        weights = 1 + (srt[1:] != srt[:-1]).sum(axis=0)
    else:
        weights = np.ones(states.size, dtype=np.int64)
    finals, depths = batch_closure(n, states)
    part = _reduce(n, states, finals, depths, weights, scope)
    part.examined = int(examined)
    return part


def _shards(total: int, size: int) -> Iterator[tuple[int, int]]:
    for lo in range(0, total, size):
        yield lo, min(total, lo + size)


def max_depth_exhaustive(
    n: int,
    scope: Scope | str = Scope.ALL,
    use_symmetry: bool = True,
    thread_hint: Optional[int] = None,
    allow_large: bool = False,
    progress=None,
) -> SearchReport:
    """Maximum depth over every subset of the n x n board."""
    scope = Scope(scope)
    if n > 5 or (n == 5 and not allow_large):
        raise SearchTooLargeError(
            f"exhaustive search is limited to n <= 4 (n = 5 needs allow_large), got n={n}"
        )
    t0 = time.perf_counter()
    total = 1 << (n * n)
    shards = list(_shards(total, SHARD_SIZE))
    threads = resolve_threads(thread_hint)
    result = _Partial()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_exhaustive_shard, n, lo, hi, scope, use_symmetry) for lo, hi in shards]
        for i, fut in enumerate(futures):
            result = result.merge(fut.result())
            if progress is not None:
                progress(i + 1, len(futures))
    return _report(n, scope, result, None, time.perf_counter() - t0)


def _report(n, scope, part: _Partial, seed, elapsed) -> SearchReport:
    return SearchReport(
        n=n,
        scope=scope,
        max_depth=part.max_depth if part.max_depth >= 0 else None,
        witnesses=[CellSet(n, w) for w in part.witnesses],
        witness_count=part.count,
        boards_examined=part.examined,
        seed=seed,
        elapsed=elapsed,
    )


def sample_boards(n: int, samples: int, seed: int) -> np.ndarray:
    """Seeded random boards; each board draws its own fill density uniformly.

    Returns uint64 for n <= 8 and an object array of Python ints otherwise.
    """
    rng = np.random.default_rng(seed)
    cells = n * n
    density = rng.random(samples)
    bits = rng.random((samples, cells)) < density[:, None]
    if n <= BATCH_MAX_N:
        weights = np.uint64(1) << np.arange(cells, dtype=np.uint64)
        return (bits.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
    out = np.empty(samples, dtype=object)
    for i, row in enumerate(bits):
        out[i] = sum(1 << int(j) for j in np.flatnonzero(row))
    return out


def _closure_any(n: int, states: np.ndarray):
    if n <= BATCH_MAX_N:
        return batch_closure(n, states)
    finals, depths = _scalar_closure(n, states)
    return np.array(finals, dtype=object), np.array(depths, dtype=np.int64)


def _sampled_shard(n: int, states: np.ndarray, scope: Scope) -> _Partial:
    finals, depths = _closure_any(n, states)
    return _reduce(n, states, finals, depths, np.ones(states.size, dtype=np.int64), scope)


def max_depth_sampled(
    n: int,
    samples: int,
    seed: int,
    scope: Scope | str = Scope.ALL,
    thread_hint: Optional[int] = None,
) -> SearchReport:
    """Maximum depth over seeded random boards; witness_count counts sampled hits."""
    scope = Scope(scope)
    if samples < 1:
        raise ValueError("samples must be positive")
    t0 = time.perf_counter()
    states = sample_boards(n, samples, seed)
    threads = resolve_threads(thread_hint)
    result = _Partial()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_sampled_shard, n, states[lo:hi], scope)
                   for lo, hi in _shards(samples, SHARD_SIZE)]
        for fut in futures:
            result = result.merge(fut.result())
    return _report(n, scope, result, seed, time.perf_counter() - t0)


# -- verification sweeps ----------------------------------------------------

@dataclass(frozen=True)
class BoundViolation:
    board: CellSet
    observed_depth: int
    bound: int
    spanning: bool


def _sweep_states(n: int, mode: str, samples: int, seed: int) -> np.ndarray:
    if mode == "exhaustive":
        if n > 4:
            raise SearchTooLargeError(f"exhaustive sweeps are limited to n <= 4, got n={n}")
        return np.arange(1 << (n * n), dtype=np.uint64)
    if mode == "sampled":
        return sample_boards(n, samples, seed)
    raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")


def bound_sweep(n: int, mode: str = "exhaustive", samples: int = 100_000, seed: int = 0) -> list[BoundViolation]:
    """Boards whose depth exceeds 2n-2 (non-spanning) or 2n (spanning)."""
    states = _sweep_states(n, mode, samples, seed)
    finals, depths = _closure_any(n, states)
    full = full_mask(n)
    out = []
    for s, f, d in zip(states, finals, depths):
        span = int(f) == full
        bound = 2 * n if span else 2 * n - 2
        if d > bound:
            out.append(BoundViolation(CellSet(n, int(s)), int(d), bound, span))
    return out


def incomplete_line_count(n: int, bits: int) -> int:
    return sum(1 for m in line_masks(n) if m & ~bits)


def lemma1_sweep(n: int, mode: str = "exhaustive", samples: int = 100_000, seed: int = 0) -> list[CellSet]:
    """Proper closed sets missing fewer than 4 cells or 4 lines (expected none)."""
    states = _sweep_states(n, mode, samples, seed)
    finals, _ = _closure_any(n, states)
    full = full_mask(n)
    bad = []
    for k in sorted({int(f) for f in finals}):
        if k == full:
            continue
        if (full & ~k).bit_count() < 4 or incomplete_line_count(n, k) < 4:
            bad.append(CellSet(n, k))
    return bad
