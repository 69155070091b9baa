import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgallee.bifurcation import (
    BOUNDARY,
    depress,
    fold_curves,
    fold_discriminant,
    fold_points,
    sweep,
    sweep_cell,
    unfolding_coords,
)
from lgallee.equilibria import CubicCoefficients, equilibrium_cubic
from lgallee.errors import ParameterError
from lgallee.model import ScaledParams

M, LAM = 0.1, 0.2


def test_unfolding_vanishes_exactly_at_cusp(ref_point):
    e = unfolding_coords(ScaledParams(M, LAM, ref_point.a1, ref_point.h1, 0.1))
    assert e.eta1 == 0.0 and e.eta2 == 0.0


@settings(max_examples=100, deadline=None)
@given(c=st.tuples(st.floats(0.2, 5), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3)))
def test_depress_reconstructs_cubic(c):
    d = depress(CubicCoefficients(*c))
    np.testing.assert_allclose(d.cubic().as_tuple(), c, rtol=1e-10, atol=1e-10)


@settings(max_examples=100, deadline=None)
@given(a=st.floats(0.5, 3.0), h=st.floats(1e-4, 0.02))
def test_unfolding_agrees_with_generic_depression(a, h):
    p = ScaledParams(M, LAM, a, h, 0.1)
    e = unfolding_coords(p)
    d = depress(equilibrium_cubic(p))
    assert e.eta1 == pytest.approx(d.eta1, rel=1e-9, abs=1e-14)
    assert e.eta2 == pytest.approx(d.eta2, rel=1e-9, abs=1e-14)


def test_eta2_sign_tracks_cooperation(ref_point):
    for a, sign in ((ref_point.a1 - 0.1, -1), (ref_point.a1 + 0.1, 1)):
        e = unfolding_coords(ScaledParams(M, LAM, a, ref_point.h1, 0.1))
        assert np.sign(e.eta2) == sign


@pytest.mark.parametrize("a", [1.5, 1.6, 1.65, 1.69])
def test_fold_points_are_double_roots(a):
    lo, hi = fold_points(M, LAM, a)
    assert lo < hi
    for h in (lo, hi):
        assert abs(fold_discriminant(M, LAM, a, h)) < 1e-15
        roots = np.roots(equilibrium_cubic(ScaledParams(M, LAM, a, h, 0.1)).as_tuple())
        real = np.sort(roots.real)
        assert np.min(np.diff(real)) < 1e-5
    mid = 0.5 * (lo + hi)
    assert sweep_cell(ScaledParams(M, LAM, a, mid, 0.1)).n_positive_roots == 3


def test_no_fold_past_cusp(ref_point):
    assert fold_points(M, LAM, ref_point.a1 + 0.05) is None
    with pytest.raises(ParameterError):
        fold_curves(M, LAM, (1.8, 2.0))


def test_fold_branches_meet_at_cusp(ref_point):
    folds = fold_curves(M, LAM, (1.5, ref_point.a1), resolution=101)
    assert folds.lower[-1, 1] == pytest.approx(ref_point.h1, abs=1e-9)
    assert folds.upper[-1, 1] == pytest.approx(ref_point.h1, abs=1e-9)
    assert np.all(folds.upper[:, 1] >= folds.lower[:, 1])


def test_sweep_ordering_and_counts():
    grid = sweep(M, LAM, 0.1, (1.5, 1.9), (0.002, 0.006), (5, 4))
    assert len(grid) == 5 and all(len(row) == 4 for row in grid)
    assert grid[1][2].a == pytest.approx(1.6) and grid[1][2].h == pytest.approx(0.002 + 2 * 0.004 / 3)
    for row in grid:
        for cell in row:
            roots = np.roots(equilibrium_cubic(ScaledParams(M, LAM, cell.a, cell.h, 0.1)).as_tuple())
            n = sum(1 for r in roots if abs(r.imag) < 1e-9 and r.real > 0)
            if cell.n_positive_roots == 3 or n == 3:
                assert cell.n_positive_roots == n
            assert len(cell.kinds) == cell.n_positive_roots


def test_sweep_marks_triple_point_boundary_free(ref_point):
    cell = sweep_cell(ScaledParams(M, LAM, ref_point.a1, ref_point.h1, 0.1))
    assert cell.multiplicities == (3,)
    assert cell.kinds != (BOUNDARY,)


def test_sweep_rejects_bad_ranges():
    with pytest.raises(ParameterError):
        sweep(M, LAM, 0.1, (1.9, 1.5), (0.002, 0.006), (3, 3))
    with pytest.raises(ParameterError):
        sweep(M, LAM, 0.1, (1.5, 1.9), (0.002, 0.006), (1, 3))
