import numpy as np
import pytest
from hypothesis import given, strategies as st

from bingo_closure.closure import closure, closure_bits, depth
from bingo_closure.constructions import final_rectangle
from bingo_closure.grid import CellSet, LineKind, apply_transform, dihedral_transforms, make_lines
from bingo_closure.search import (
    SearchTooLargeError,
    batch_canonical,
    batch_closure,
    bound_sweep,
    canonical_form,
    incomplete_line_count,
    lemma1_sweep,
    max_depth_exhaustive,
    max_depth_sampled,
    orbit_size,
    resolve_threads,
    sample_boards,
)


def brute_max_depth(n, scope="all"):
    full = (1 << n * n) - 1
    best = None
    for bits in range(1 << n * n):
        final, d = closure_bits(n, bits)
        span = final == full
        if scope == "spanning" and not span or scope == "nonspanning" and span:
            continue
        best = d if best is None else max(best, d)
    return best


@pytest.mark.parametrize("n", range(1, 9))
def test_batch_closure_matches_scalar(n):
    states = sample_boards(n, 2000, seed=n)
    finals, depths = batch_closure(n, states)
    for s, f, d in zip(states, finals, depths):
        assert (int(f), int(d)) == closure_bits(n, int(s))


def test_batch_closure_rejects_wide_boards():
    with pytest.raises(ValueError):
        batch_closure(9, np.zeros(1, dtype=np.uint64))


@pytest.mark.parametrize("n", range(1, 9))
def test_batch_canonical_matches_scalar(n):
    states = sample_boards(n, 300, seed=100 + n)
    canon = batch_canonical(n, states)
    for s, c in zip(states, canon):
        assert int(c) == canonical_form(CellSet(n, int(s))).bits


def test_canonical_form_examples():
    assert canonical_form(CellSet.from_cells(2, [(0, 1)])) == CellSet.from_cells(2, [(0, 0)])


@given(st.integers(1, 11).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n * n) - 1))))
def test_canonical_form_idempotent_and_orbit_invariant(nb):
    n, bits = nb
    cs = CellSet(n, bits)
    c = canonical_form(cs)
    assert canonical_form(c) == c
    for perm in dihedral_transforms(n):
        assert canonical_form(apply_transform(cs, perm)) == c
    assert c.bits <= bits


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orbit_sizes_sum_to_all_subsets(n):
    total = sum(orbit_size(n, b) for b in range(1 << n * n) if canonical_form(CellSet(n, b)).bits == b)
    assert total == 1 << n * n


def test_orbit_sum_n2_is_16():
    canon = {canonical_form(CellSet(2, b)).bits for b in range(16)}
    assert sum(orbit_size(2, b) for b in canon) == 16


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 1), (3, 4), (4, 6)])
def test_exhaustive_maxima(n, expected):
    rep = max_depth_exhaustive(n, thread_hint=1)
    assert rep.max_depth == expected
    assert rep.boards_examined == 1 << n * n


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("scope", ["all", "spanning", "nonspanning"])
def test_exhaustive_agrees_with_brute_force(n, scope):
    rep = max_depth_exhaustive(n, scope, use_symmetry=True)
    assert rep.max_depth == brute_max_depth(n, scope)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("scope", ["all", "spanning", "nonspanning"])
def test_symmetry_reduction_changes_nothing(n, scope):
    with_sym = max_depth_exhaustive(n, scope, use_symmetry=True)
    without = max_depth_exhaustive(n, scope, use_symmetry=False)
    assert with_sym == without


def test_witness_count_by_brute_force_n3():
    rep = max_depth_exhaustive(3)
    count = sum(1 for b in range(512) if closure_bits(3, b)[1] == 4)
    assert rep.witness_count == count


@pytest.mark.parametrize("n", [2, 3, 4])
def test_witnesses_reproduce_max_and_are_sorted_canonical(n):
    rep = max_depth_exhaustive(n)
    bits = [w.bits for w in rep.witnesses]
    assert bits == sorted(bits)
    for w in rep.witnesses:
        assert depth(w) == rep.max_depth
        assert canonical_form(w) == w


def test_n4_spanning_witness_rectangles_meet_both_diagonals():
    rep = max_depth_exhaustive(4, "spanning")
    lines = {ln.kind: ln.mask for ln in make_lines(4)}
    assert rep.witnesses
    for w in rep.witnesses:
        rect = final_rectangle(closure(w))
        assert rect is not None
        assert any(c in lines[LineKind.MAIN_DIAG] for c in rect)
        assert any(c in lines[LineKind.ANTI_DIAG] for c in rect)


def test_nonspanning_maxima_respect_bound():
    for n in (3, 4):
        assert max_depth_exhaustive(n, "nonspanning").max_depth <= 2 * n - 2


def test_empty_scope_gives_no_maximum():
    rep = max_depth_exhaustive(1, "nonspanning")
    assert rep.max_depth is None and rep.witnesses == [] and rep.witness_count == 0


def test_exhaustive_size_guard():
    with pytest.raises(SearchTooLargeError):
        max_depth_exhaustive(5)
    with pytest.raises(SearchTooLargeError):
        max_depth_exhaustive(6, allow_large=True)


@pytest.mark.parametrize("n", [3, 4])
def test_reports_independent_of_threads(n):
    reports = [max_depth_exhaustive(n, thread_hint=t) for t in (1, 2, 8)]
    assert reports[0] == reports[1] == reports[2]
    assert len({str(r.to_dict() | {"elapsed_ms": 0}) for r in reports}) == 1


def test_sampled_search_deterministic_and_threads_independent():
    reps = [max_depth_sampled(6, 5000, seed=3, thread_hint=t) for t in (1, 2, 8)]
    assert reps[0] == reps[1] == reps[2]
    assert reps[0].seed == 3
    assert reps[0].boards_examined == 5000
    assert 0 < reps[0].max_depth <= 12


def test_sampled_search_wide_board():
    rep = max_depth_sampled(9, 200, seed=1)
    assert rep.boards_examined == 200
    for w in rep.witnesses:
        assert depth(w) == rep.max_depth


def test_sample_boards_reproducible():
    assert np.array_equal(sample_boards(5, 100, 7), sample_boards(5, 100, 7))
    assert not np.array_equal(sample_boards(5, 100, 7), sample_boards(5, 100, 8))
    wide = sample_boards(10, 5, 1)
    assert all(0 <= int(b) < 1 << 100 for b in wide)


def test_report_json_fields():
    doc = max_depth_exhaustive(3).to_dict()
    assert list(doc) == ["n", "scope", "max_depth", "witness_count", "witnesses",
                         "boards_examined", "elapsed_ms", "seed"]
    assert doc["max_depth"] == 4


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bound_sweep_exhaustive(n):
    assert bound_sweep(n, "exhaustive") == []


@pytest.mark.parametrize("n", [5, 8, 9])
def test_bound_sweep_sampled(n):
    assert bound_sweep(n, "sampled", samples=2000, seed=42) == []


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lemma1_sweep_exhaustive(n):
    assert lemma1_sweep(n, "exhaustive") == []


def test_lemma1_sweep_sampled_wide():
    assert lemma1_sweep(10, "sampled", samples=300, seed=5) == []


def test_lemma1_counts_on_board1(board1):
    k = closure(board1).final
    assert len(~k) == 6 >= 4
    assert incomplete_line_count(5, k.bits) == 5 >= 4


def test_sweep_mode_errors():
    with pytest.raises(SearchTooLargeError):
        bound_sweep(5, "exhaustive")
    with pytest.raises(ValueError):
        lemma1_sweep(3, "bogus")


def test_resolve_threads(monkeypatch):
    monkeypatch.setenv("BINGO_THREADS", "3")
    assert resolve_threads(5) == 5
    assert resolve_threads(None) == 3
    monkeypatch.delenv("BINGO_THREADS")
    assert resolve_threads(None) >= 1


@pytest.mark.parametrize("n", range(2, 9))
def test_depth_invariant_under_symmetry_sampled(n):
    states = sample_boards(n, 200, seed=n)
    for s in states:
        cs = CellSet(n, int(s))
        d = depth(cs)
        for perm in dihedral_transforms(n):
            assert depth(apply_transform(cs, perm)) == d


@pytest.mark.slow
def test_n5_exhaustive():
    rep = max_depth_exhaustive(5, allow_large=True, thread_hint=4)
    assert rep.max_depth == 10
