"""Finite-dimensional representations of the non-linear sl(2) algebra.

The algebra is fixed by a characteristic function f through

    J0 J- = J- f(J0),   J+ J0 = f(J0) J+,
    [J+, J-] = J0 (J0 + 1) - f(J0) (f(J0) + 1).

f(x) = x - 1 gives ordinary sl(2); linear f gives a deformation related to
sl_q(2); non-linear f has representations built on cycles of f.
"""
from .charfunc import CharFunc, DivergenceError
from .dynsys import (
    CycleReport,
    DeltaClassification,
    Region,
    allowed_region,
    classify_delta,
    cobweb_trace,
    find_cycles,
    fixed_points,
    normal_form,
)
from .hwsolver import (
    CutSolution,
    WeightLadder,
    classify_start,
    ladder_from_cut,
    ladder_from_cycle,
    marginal_two_cycle,
    solve_cut_general,
    solve_cut_linear,
    solve_cut_linear_r1,
)
from .repbuilder import ALGEBRAIC, UNITARY, Representation, build, casimir
from .algver import (
    RelationReport,
    check_case1_transform,
    check_quadratic_form,
    check_rdeformed_form,
    check_relations,
)
from .qmap import (
    QDeformParams,
    bracket_q,
    build_slq2,
    gauss_number,
    map_j0,
    map_jplus,
    verify_map,
)

__version__ = "0.1.0"
