import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lgallee.polymap import (
    Poly,
    PolyMap2,
    homological_operator,
    invert_near_identity,
    linear_change,
    near_identity_change,
)

X, Y = sp.symbols("x y")
coef = st.floats(-2, 2, allow_nan=False)


def random_poly(rng, lowest=0, degree=4):
    return Poly({(i, j): rng.normal() for i in range(degree + 1) for j in range(degree + 1 - i)
                 if i + j >= lowest}, degree)


def to_sympy(p: Poly):
    return sum(sp.Float(v) * X**i * Y**j for (i, j), v in p.terms().items())


def truncate(expr, n=4):
    poly = sp.Poly(sp.expand(expr), X, Y)
    return {m: float(c) for m, c in poly.terms() if sum(m) <= n}


def assert_matches(p: Poly, expr, tol=1e-10):
    ref = truncate(expr)
    keys = set(ref) | set(p.terms())
    for k in keys:
        assert p[k] == pytest.approx(ref.get(k, 0.0), abs=tol), k


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), x=coef, y=coef)
def test_arithmetic_and_evaluation(seed, x, y):
    rng = np.random.default_rng(seed)
    a, b = random_poly(rng), random_poly(rng)
    assert (a + b)(x, y) == pytest.approx(a(x, y) + b(x, y), abs=1e-9)
    assert (a - b)(x, y) == pytest.approx(a(x, y) - b(x, y), abs=1e-9)


def test_product_truncates_like_sympy(rng):
    a, b = random_poly(rng), random_poly(rng)
    assert_matches(a * b, to_sympy(a) * to_sympy(b))
    assert_matches(a**3, to_sympy(a) ** 3)


def test_diff_matches_sympy(rng):
    a = random_poly(rng)
    assert_matches(a.diff("x"), sp.diff(to_sympy(a), X))
    assert_matches(a.diff("y"), sp.diff(to_sympy(a), Y))


def test_compose_matches_sympy(rng):
    f = random_poly(rng)
    gx, gy = random_poly(rng, lowest=1), random_poly(rng, lowest=1)
    expr = to_sympy(f).subs({X: to_sympy(gx), Y: to_sympy(gy)}, simultaneous=True)
    assert_matches(f.compose(gx, gy), expr, tol=1e-8)


def test_linear_change_conjugates(rng):
    F = PolyMap2(random_poly(rng, 1), random_poly(rng, 1))
    T = np.array([[1.0, 0.3], [-0.4, 2.0]])
    G = linear_change(F, T)
    w = np.array([0.01, -0.02])
    z = T @ w
    lhs = T @ np.array(G(*w))
    rhs = np.array(F(*z))
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_near_identity_change_solves_conjugacy(rng):
    F = PolyMap2(random_poly(rng, 1), random_poly(rng, 1))
    h = PolyMap2(random_poly(rng, 2), random_poly(rng, 2))
    G = near_identity_change(F, h)
    # (I + Dh) G = F(w + h), compared symbolically up to degree four
    Hx, Hy = to_sympy(h.p), to_sympy(h.q)
    Gx, Gy = to_sympy(G.p), to_sympy(G.q)
    subs = {X: X + Hx, Y: Y + Hy}
    res_x = Gx + sp.diff(Hx, X) * Gx + sp.diff(Hx, Y) * Gy - to_sympy(F.p).subs(subs, simultaneous=True)
    res_y = Gy + sp.diff(Hy, X) * Gx + sp.diff(Hy, Y) * Gy - to_sympy(F.q).subs(subs, simultaneous=True)
    for res in (res_x, res_y):
        assert all(abs(v) < 1e-8 for v in truncate(res).values())


def test_near_identity_change_requires_degree_two(rng):
    with pytest.raises(ValueError):
        near_identity_change(PolyMap2.identity(), PolyMap2.identity())


def test_inverse_of_near_identity(rng):
    h = PolyMap2(random_poly(rng, 2), random_poly(rng, 2))
    k = invert_near_identity(h)
    ident = PolyMap2.identity()
    round_trip = (ident + h).compose(ident + k)
    assert round_trip.allclose(ident, atol=1e-10)


@pytest.mark.parametrize("k", [2, 3])
def test_homological_operator_definition(k):
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    L, monos = homological_operator(A, k)
    rng = np.random.default_rng(k)
    vec = rng.normal(size=2 * (k + 1))
    hp = sum(vec[i] * X**a * Y**b for i, (a, b) in enumerate(monos))
    hq = sum(vec[k + 1 + i] * X**a * Y**b for i, (a, b) in enumerate(monos))
    # Dh . A w - A h with A w = (y, 0)
    lx = sp.diff(hp, X) * Y - hq
    ly = sp.diff(hq, X) * Y
    out = L @ vec
    for comp, expr in ((0, lx), (1, ly)):
        ref = truncate(expr, k)
        for i, m in enumerate(monos):
            assert out[comp * (k + 1) + i] == pytest.approx(ref.get(m, 0.0), abs=1e-12)
    # nilpotent case: rank deficit equals the complement dimension
    assert np.linalg.matrix_rank(L) == 2 * (k + 1) - 2


def test_changes_revert_to_prior_expansion(rng):
    F = PolyMap2(random_poly(rng, 1), random_poly(rng, 1))
    T = np.array([[0.7, -1.2], [0.5, 0.9]])
    assert linear_change(linear_change(F, T), np.linalg.inv(T)).allclose(F, atol=1e-10)
    h = PolyMap2(random_poly(rng, 2) * 0.3, random_poly(rng, 2) * 0.3)
    G = near_identity_change(F, h)
    back = near_identity_change(G, invert_near_identity(h))
    assert back.allclose(F, atol=1e-10)
