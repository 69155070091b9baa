"""Truncated bivariate polynomials and planar polynomial maps.

A :class:`Poly` stores the coefficients ``c[i, j]`` of ``x**i y**j`` for
total degree ``i + j <= degree``; everything above the truncation degree is
discarded consistently by every operation. Composition assumes the inner
maps vanish at the origin, so truncation commutes with substitution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_DEGREE = 4


def _mask(n):
    i, j = np.indices((n + 1, n + 1))
    return (i + j) <= n


class Poly:
    __slots__ = ("c", "degree")

    def __init__(self, coeffs=None, degree=DEFAULT_DEGREE):
        self.degree = degree
        c = np.zeros((degree + 1, degree + 1))
        if isinstance(coeffs, dict):
            for (i, j), v in coeffs.items():
                if i + j <= degree:
                    c[i, j] += v
        elif coeffs is not None:
            coeffs = np.asarray(coeffs, dtype=float)
            k = min(coeffs.shape[0], degree + 1)
            l = min(coeffs.shape[1], degree + 1)
            c[:k, :l] = coeffs[:k, :l]
        c[~_mask(degree)] = 0.0
        self.c = c

    @classmethod
    def var(cls, which, degree=DEFAULT_DEGREE):
        return cls({(1, 0) if which == "x" else (0, 1): 1.0}, degree)

    @classmethod
    def const(cls, value, degree=DEFAULT_DEGREE):
        return cls({(0, 0): value}, degree)

    def __getitem__(self, ij):
        i, j = ij
        if i + j > self.degree:
            return 0.0
        return self.c[i, j]

    def terms(self):
        """``{(i, j): coefficient}`` over the nonzero coefficients."""
        return {(int(i), int(j)): float(self.c[i, j]) for i, j in zip(*np.nonzero(self.c))}

    def homogeneous(self, k):
        out = Poly(degree=self.degree)
        for i in range(k + 1):
            if k <= self.degree:
                out.c[i, k - i] = self.c[i, k - i]
        return out

    def order(self):
        """Lowest total degree carrying a nonzero coefficient (``None`` if zero)."""
        for k in range(self.degree + 1):
            if any(self.c[i, k - i] != 0 for i in range(k + 1)):
                return k
        return None

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(other, self.degree)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.degree, other.degree)
        return Poly(self.c[: n + 1, : n + 1] + other.c[: n + 1, : n + 1], n)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self.c, self.degree)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.c * other, self.degree)
        n = min(self.degree, other.degree)
        out = np.zeros((n + 1, n + 1))
        for (i, j), v in self.terms().items():
            if i + j > n:
                continue
            k = n - i - j
            block = other.c[: k + 1, : k + 1] * _mask(k)
            out[i : i + k + 1, j : j + k + 1] += v * block
        return Poly(out, n)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Poly(self.c / scalar, self.degree)

    def __pow__(self, k):
        out = Poly.const(1.0, self.degree)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x, y):
        total = 0.0
        for (i, j), v in self.terms().items():
            total = total + v * x**i * y**j
        return total

    def diff(self, var):
        out = np.zeros_like(self.c)
        if var == "x":
            for i in range(1, self.degree + 1):
                out[i - 1, :] = i * self.c[i, :]
        else:
            for j in range(1, self.degree + 1):
                out[:, j - 1] = j * self.c[:, j]
        return Poly(out, self.degree)

    def compose(self, X: "Poly", Y: "Poly") -> "Poly":
        """Substitute ``x = X(u, v)``, ``y = Y(u, v)``; both must vanish at 0."""
        if X[0, 0] != 0 or Y[0, 0] != 0:
            raise ValueError("substituted polynomials must vanish at the origin")
        n = min(self.degree, X.degree, Y.degree)
        xp = [Poly.const(1.0, n)]
        yp = [Poly.const(1.0, n)]
        for _ in range(n):
            xp.append(xp[-1] * X)
            yp.append(yp[-1] * Y)
        out = Poly(degree=n)
        for (i, j), v in self.terms().items():
            if i + j <= n:
                out = out + v * (xp[i] * yp[j])
        return out

    def truncate(self, n):
        return Poly(self.c, n)

    def allclose(self, other, atol=1e-12):
        return np.allclose(self.c, self._coerce(other).c, rtol=0, atol=atol)

    def __repr__(self):
        body = " + ".join(f"{v:.6g}*x^{i}y^{j}" for (i, j), v in sorted(self.terms().items()))
        return f"Poly({body or '0'}; deg<={self.degree})"


def series_1d(poly: Poly) -> np.ndarray:
    """Coefficients of a polynomial in ``x`` alone (``y``-free part)."""
    return poly.c[:, 0].copy()


@dataclass(frozen=True)
class PolyMap2:
    """Planar polynomial map ``(x, y) -> (p(x, y), q(x, y))``.

    Used both for vector fields (right-hand sides) and coordinate changes.
    """

    p: Poly
    q: Poly

    @property
    def degree(self):
        return min(self.p.degree, self.q.degree)

    @classmethod
    def identity(cls, degree=DEFAULT_DEGREE):
        return cls(Poly.var("x", degree), Poly.var("y", degree))

    @classmethod
    def linear(cls, M, degree=DEFAULT_DEGREE):
        M = np.asarray(M, dtype=float)
        return cls(
            Poly({(1, 0): M[0, 0], (0, 1): M[0, 1]}, degree),
            Poly({(1, 0): M[1, 0], (0, 1): M[1, 1]}, degree),
        )

    def __call__(self, x, y):
        return self.p(x, y), self.q(x, y)

    def __add__(self, other):
        return PolyMap2(self.p + other.p, self.q + other.q)

    def __sub__(self, other):
        return PolyMap2(self.p - other.p, self.q - other.q)

    def scale(self, k):
        return PolyMap2(self.p * k, self.q * k)

    def linear_part(self) -> np.ndarray:
        return np.array(
            [[self.p[1, 0], self.p[0, 1]], [self.q[1, 0], self.q[0, 1]]], dtype=float
        )

    def homogeneous(self, k):
        return PolyMap2(self.p.homogeneous(k), self.q.homogeneous(k))

    def compose(self, inner: "PolyMap2") -> "PolyMap2":
        """``self o inner``."""
        return PolyMap2(self.p.compose(inner.p, inner.q), self.q.compose(inner.p, inner.q))

    def apply_matrix(self, M) -> "PolyMap2":
        """Left-multiply the pair ``(p, q)`` by the constant matrix ``M``."""
        M = np.asarray(M, dtype=float)
        return PolyMap2(self.p * M[0, 0] + self.q * M[0, 1], self.p * M[1, 0] + self.q * M[1, 1])

    def jacobian(self):
        return [[self.p.diff("x"), self.p.diff("y")], [self.q.diff("x"), self.q.diff("y")]]

    def allclose(self, other, atol=1e-12):
        return self.p.allclose(other.p, atol) and self.q.allclose(other.q, atol)

    def __repr__(self):
        return f"PolyMap2(\n  p={self.p!r},\n  q={self.q!r})"


def linear_change(field: PolyMap2, T) -> PolyMap2:
    """Vector field in coordinates ``w`` where ``z = T w``: ``T^-1 F(T w)``."""
    T = np.asarray(T, dtype=float)
    Tinv = np.linalg.inv(T)
    return field.compose(PolyMap2.linear(T, field.degree)).apply_matrix(Tinv)


def near_identity_change(field: PolyMap2, h: PolyMap2) -> PolyMap2:
    """Vector field in coordinates ``w`` where ``z = w + h(w)``.

    ``h`` must start at degree two. The transformed field ``G`` solves
    ``(I + Dh(w)) G(w) = F(w + h(w))``, obtained by fixed-point iteration;
    each sweep fixes one more order, so ``degree`` sweeps are exact.
    """
    if h.linear_part().any() or h.p[0, 0] or h.q[0, 0]:
        raise ValueError("near-identity change must start at degree two")
    n = field.degree
    rhs = field.compose(PolyMap2.identity(n) + h)
    J = h.jacobian()
    G = rhs
    for _ in range(n):
        G = PolyMap2(
            rhs.p - (J[0][0] * G.p + J[0][1] * G.q),
            rhs.q - (J[1][0] * G.p + J[1][1] * G.q),
        )
    return G


def invert_near_identity(h: PolyMap2) -> PolyMap2:
    """``k`` such that ``z = w + h(w)`` inverts to ``w = z + k(z)``."""
    n = h.degree
    ident = PolyMap2.identity(n)
    k = h.scale(-1.0)
    for _ in range(n):
        k = h.compose(ident + k).scale(-1.0)
    return k


def homological_operator(A, k):
    """Matrix of ``L(h) = Dh . A w - A h`` on homogeneous degree-``k`` maps.

    Basis ordering: first component monomials ``x**(k-i) y**i`` for
    ``i = 0..k``, then the second component in the same order.
    """
    A = np.asarray(A, dtype=float)
    monos = [(k - i, i) for i in range(k + 1)]
    size = 2 * (k + 1)
    L = np.zeros((size, size))
    Aw = PolyMap2.linear(A, k)
    for col in range(size):
        comp, idx = divmod(col, k + 1)
        unit = Poly({monos[idx]: 1.0}, k)
        zero = Poly(degree=k)
        h = PolyMap2(unit, zero) if comp == 0 else PolyMap2(zero, unit)
        J = h.jacobian()
        Dh_Aw = PolyMap2(J[0][0] * Aw.p + J[0][1] * Aw.q, J[1][0] * Aw.p + J[1][1] * Aw.q)
        Lh = Dh_Aw - h.apply_matrix(A)
        L[:, col] = flatten_homogeneous(Lh, k)
    return L, monos


def flatten_homogeneous(f: PolyMap2, k):
    monos = [(k - i, i) for i in range(k + 1)]
    return np.array([f.p[m] for m in monos] + [f.q[m] for m in monos])


def unflatten_homogeneous(vec, k, degree):
    monos = [(k - i, i) for i in range(k + 1)]
    p = Poly({m: vec[i] for i, m in enumerate(monos)}, degree)
    q = Poly({m: vec[k + 1 + i] for i, m in enumerate(monos)}, degree)
    return PolyMap2(p, q)
