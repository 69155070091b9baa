"""Interior equilibria from the equilibrium cubic and Shengjin's discriminants.

On the interior the predator equation forces ``y = x``; substituting into
the prey equation leaves::

    (1 + a) x**3 - (m + 1 - lambda) x**2 + m x - h = 0

Root multiplicity is read off Shengjin's discriminants

    A = b**2 - 3ac,  B = bc - 9ad,  C = c**2 - 3bd,  Delta = B**2 - 4AC

for ``a x**3 + b x**2 + c x + d``. The closed-form branches keep the
triple root of the degenerate point exact, which iterative solvers do not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ExistenceError, ParameterError
from .model import ScaledParams

#: roots closer than this are reported as one root with multiplicity
MERGE_TOL = 1e-7


@dataclass(frozen=True)
class CubicCoefficients:
    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, x):
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x):
        return (3 * self.c3 * x + 2 * self.c2) * x + self.c1

    def as_tuple(self):
        return (self.c3, self.c2, self.c1, self.c0)


@dataclass(frozen=True)
class CubicRootStructure:
    """Discriminant data and real roots of a cubic.

    ``roots`` holds ``(root, multiplicity)`` pairs in nondecreasing order;
    ``complex_roots`` holds the conjugate pair when only one root is real.
    """

    A: float
    B: float
    C: float
    Delta: float
    roots: tuple
    complex_roots: tuple = ()

    @property
    def n_real(self) -> int:
        """Number of distinct real roots."""
        return len(self.roots)

    def all_roots(self) -> list:
        out = []
        for r, k in self.roots:
            out.extend([r] * k)
        return out + list(self.complex_roots)


@dataclass(frozen=True)
class DegeneratePoint:
    a1: float
    h1: float
    x1: float
    lambda_max: float


@dataclass(frozen=True)
class Equilibrium:
    x: float
    y: float
    multiplicity: int = 1


def equilibrium_cubic(p: ScaledParams) -> CubicCoefficients:
    return CubicCoefficients(1 + p.a, -(p.m + 1 - p.lam), p.m, -p.h)


def _cbrt(v):
    return math.copysign(abs(v) ** (1 / 3), v)


def _merge(roots):
    roots = sorted(roots)
    groups = [[roots[0]]]
    for r in roots[1:]:
        if abs(r - groups[-1][-1]) < MERGE_TOL:
            groups[-1].append(r)
        else:
            groups.append([r])
    return tuple((math.fsum(g) / len(g), len(g)) for g in groups)


def shengjin_classify(c: CubicCoefficients, tol: float = 1e-12) -> CubicRootStructure:
    """Classify and solve a real cubic with Shengjin's formulas.

    ``tol`` is relative: a discriminant counts as zero when it is below
    ``tol`` times the magnitude of the terms it was formed from.
    """
    a, b, cc, d = c.as_tuple()
    if a == 0 or not math.isfinite(a):
        raise ParameterError("leading coefficient of the cubic must be nonzero")
    A = b * b - 3 * a * cc
    B = b * cc - 9 * a * d
    C = cc * cc - 3 * b * d
    Delta = B * B - 4 * A * C

    a_zero = abs(A) <= tol * (b * b + 3 * abs(a * cc))
    b_zero = abs(B) <= tol * (abs(b * cc) + 9 * abs(a * d))
    if a_zero and b_zero:
        return CubicRootStructure(A, B, C, Delta, ((-b / (3 * a), 3),))

    complex_roots = ()
    if abs(Delta) <= tol * (B * B + 4 * abs(A * C)):
        K = B / A
        roots = [-b / a + K, -K / 2, -K / 2]
    elif Delta > 0:
        sq = math.sqrt(Delta)
        y1 = A * b + 3 * a * (-B + sq) / 2
        y2 = A * b + 3 * a * (-B - sq) / 2
        r1, r2 = _cbrt(y1), _cbrt(y2)
        roots = [(-b - (r1 + r2)) / (3 * a)]
        re = (-2 * b + r1 + r2) / (6 * a)
        im = math.sqrt(3) * (r1 - r2) / (6 * a)
        complex_roots = (complex(re, im), complex(re, -im))
    else:
        # Delta < 0 forces A > 0
        sqa = math.sqrt(A)
        T = (2 * A * b - 3 * a * B) / (2 * A * sqa)
        theta = math.acos(min(1.0, max(-1.0, T)))
        ct, st = math.cos(theta / 3), math.sin(theta / 3)
        roots = [
            (-b - 2 * sqa * ct) / (3 * a),
            (-b + sqa * (ct + math.sqrt(3) * st)) / (3 * a),
            (-b + sqa * (ct - math.sqrt(3) * st)) / (3 * a),
        ]
    return CubicRootStructure(A, B, C, Delta, _merge(roots), complex_roots)


def interior_equilibria(p: ScaledParams) -> list[Equilibrium]:
    """Positive equilibria ``(x*, x*)`` with their multiplicities."""
    structure = shengjin_classify(equilibrium_cubic(p))
    return [Equilibrium(r, r, k) for r, k in structure.roots if r > 0]


def lambda_max(m: float) -> float:
    """Upper bound on the attack rate for the triple point to exist."""
    return m + 1 - math.sqrt(3 * m)


def degenerate_point(m: float, lam: float) -> DegeneratePoint:
    """Cooperation ``a1`` and stocking ``h1`` giving a triple interior root.

    Raises
    ------
    ExistenceError
        If ``lam`` is not in ``(0, m + 1 - sqrt(3 m))``.
    """
    if not 0 < m < 1:
        raise ParameterError(f"need 0 < m < 1, got m={m!r}")
    bound = lambda_max(m)
    if not 0 < lam < bound:
        raise ExistenceError(
            f"lambda={lam!r} outside (0, {bound!r}); no positive triple equilibrium"
        )
    w = m + 1 - lam
    a1 = (w * w - 3 * m) / (3 * m)
    h1 = w * m / (9 * (a1 + 1))
    x1 = w / (3 * (a1 + 1))
    return DegeneratePoint(a1=a1, h1=h1, x1=x1, lambda_max=bound)


def triple_point_params(m: float, lam: float, s: float) -> ScaledParams:
    """Parameter set placing the system exactly at the triple point."""
    dp = degenerate_point(m, lam)
    return ScaledParams(m=m, lam=lam, a=dp.a1, h=dp.h1, s=s)
