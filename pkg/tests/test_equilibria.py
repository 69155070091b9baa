import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgallee.equilibria import (
    CubicCoefficients,
    degenerate_point,
    equilibrium_cubic,
    interior_equilibria,
    lambda_max,
    shengjin_classify,
    triple_point_params,
)
from lgallee.errors import ExistenceError, ParameterError
from lgallee.model import ScaledParams, rates


def test_reference_triple_point(ref_point):
    assert ref_point.a1 == pytest.approx(1.7, rel=1e-14)
    assert ref_point.h1 == pytest.approx(1 / 270, rel=1e-14)
    assert ref_point.x1 == pytest.approx(1 / 9, rel=1e-14)


def test_cubic_coefficients(generic_params):
    c = equilibrium_cubic(generic_params)
    p = generic_params
    assert c.as_tuple() == pytest.approx((1 + p.a, -(p.m + 1 - p.lam), p.m, -p.h))


def test_cubic_vanishes_on_equilibria(generic_params):
    for eq in interior_equilibria(generic_params):
        assert eq.y == eq.x
        assert max(map(abs, rates(eq.x, eq.y, generic_params))) < 1e-12


def test_triple_point_cubic_is_perfect_cube(triple):
    st_ = shengjin_classify(equilibrium_cubic(triple(0.1)))
    assert abs(st_.A) < 1e-14 and abs(st_.B) < 1e-14
    assert st_.roots == ((pytest.approx(1 / 9, rel=1e-13), 3),)


def test_random_cubics_against_numpy_roots():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        coeffs = rng.normal(size=4)
        c = CubicCoefficients(*coeffs)
        got = sorted(r for r, k in shengjin_classify(c).roots for _ in range(k))
        ref = np.roots(coeffs)
        real = sorted(r.real for r in ref if abs(r.imag) < 1e-7 * max(1, abs(r)))
        assert len(got) == len(real)
        np.testing.assert_allclose(got, real, rtol=1e-7, atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(r=st.lists(st.floats(-3, 3), min_size=3, max_size=3), lead=st.floats(0.2, 5))
def test_cubic_from_separated_roots(r, lead):
    r = sorted(r)
    if min(r[1] - r[0], r[2] - r[1]) < 1e-2:
        return
    coeffs = lead * np.poly(r)
    st_ = shengjin_classify(CubicCoefficients(*coeffs))
    assert st_.Delta < 0
    np.testing.assert_allclose([x for x, _ in st_.roots], r, atol=1e-8)


@settings(max_examples=100, deadline=None)
@given(r=st.floats(-2, 2), q=st.floats(-2, 2), lead=st.floats(0.2, 5))
def test_double_root_detected(r, q, lead):
    if abs(r - q) < 0.05:
        return
    st_ = shengjin_classify(CubicCoefficients(*(lead * np.poly([r, r, q]))))
    mult = dict((round(x, 6), k) for x, k in st_.roots)
    assert mult.get(round(r, 6)) == 2 and mult.get(round(q, 6)) == 1


def test_complex_pair_reported():
    st_ = shengjin_classify(CubicCoefficients(*np.poly([0.5, 1 + 2j, 1 - 2j]).real))
    assert st_.n_real == 1 and len(st_.complex_roots) == 2
    assert st_.roots[0][0] == pytest.approx(0.5)


def test_degenerate_point_domain_errors():
    with pytest.raises(ParameterError):
        degenerate_point(1.2, 0.1)
    with pytest.raises(ExistenceError):
        degenerate_point(0.1, lambda_max(0.1) + 1e-3)


@settings(max_examples=100, deadline=None)
@given(m=st.floats(0.02, 0.95), frac=st.floats(0.02, 0.98))
def test_triple_point_is_triple_root(m, frac):
    lam = frac * lambda_max(m)
    dp = degenerate_point(m, lam)
    c = equilibrium_cubic(triple_point_params(m, lam, 1.0))
    # c3 (x - x1)**3 expanded
    c3 = c.c3
    expected = (c3, -3 * c3 * dp.x1, 3 * c3 * dp.x1**2, -c3 * dp.x1**3)
    np.testing.assert_allclose(c.as_tuple(), expected, rtol=1e-11, atol=1e-14)


def test_lambda_max_closed_form():
    assert lambda_max(0.1) == pytest.approx(1.1 - math.sqrt(0.3))


def test_three_interior_equilibria_in_cusp():
    p = ScaledParams(m=0.1, lam=0.2, a=1.6, h=0.0035, s=0.1)
    eqs = interior_equilibria(p)
    ref = sorted(r.real for r in np.roots(equilibrium_cubic(p).as_tuple()) if abs(r.imag) < 1e-12)
    assert [e.multiplicity for e in eqs] == [1, 1, 1]
    np.testing.assert_allclose([e.x for e in eqs], ref, rtol=1e-10)
