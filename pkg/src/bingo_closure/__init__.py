"""Bingo closure on n x n boards: dependency, dolmatic iteration, depth, search."""

from .closure import (
    ClosureTrace,
    LawReport,
    TraceStep,
    check_laws,
    closure,
    closure_set,
    dependent_set,
    depth,
    dolmatic_step,
    general_dolmatic_extension,
    is_closed,
    spans,
)
from .constructions import CatalogBoard, catalog, construct_max_depth, final_rectangle, wrap_ring
from .grid import Cell, CellSet, Line, LineKind, dihedral_transforms, make_lines, parse_board, render_board
from .search import (
    BoundViolation,
    Scope,
    SearchReport,
    bound_sweep,
    canonical_form,
    lemma1_sweep,
    max_depth_exhaustive,
    max_depth_sampled,
)

__version__ = "0.1.0"
