"""Cusp unfolding in the (a, h) plane.

Equilibria of the unfolded flow ``u' = eta1 + eta2 u + u**3`` are the roots
of the depressed equilibrium cubic, so the unfolding coordinates are read
off the cubic directly: shift ``x = u - c2 / (3 c3)`` and divide by ``c3``.
The fold (saddle-node) locus is ``4 eta2**3 + 27 eta1**2 = 0``; its two
branches meet at the triple point ``(a1, h1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .classification import UNCLASSIFIED, classify
from .equilibria import (
    CubicCoefficients,
    Equilibrium,
    degenerate_point,
    equilibrium_cubic,
    shengjin_classify,
)
from .errors import ClassificationError, ParameterError
from .model import ScaledParams

BOUNDARY = "boundary"


@dataclass(frozen=True)
class UnfoldingCoords:
    eta1: float
    eta2: float


@dataclass(frozen=True)
class Depressed:
    """``c3 * ((x - shift)**3 + eta2 (x - shift) + eta1)``."""

    eta1: float
    eta2: float
    shift: float
    c3: float

    def cubic(self) -> CubicCoefficients:
        s, e1, e2, c3 = self.shift, self.eta1, self.eta2, self.c3
        return CubicCoefficients(c3, -3 * c3 * s, c3 * (3 * s * s + e2), c3 * (-(s**3) - e2 * s + e1))


@dataclass(frozen=True)
class SweepCell:
    a: float
    h: float
    n_positive_roots: int
    multiplicities: tuple
    kinds: tuple
    eta: UnfoldingCoords


@dataclass(frozen=True)
class FoldCurves:
    lower: np.ndarray  # rows (a, h)
    upper: np.ndarray
    a1: float
    h1: float


def depress(c: CubicCoefficients) -> Depressed:
    """Depressed form of a general cubic."""
    a, b, cc, d = c.as_tuple()
    A = b * b - 3 * a * cc
    B = b * cc - 9 * a * d
    eta2 = -A / (3 * a * a)
    eta1 = (2 * b * A - 3 * a * B) / (27 * a**3)
    return Depressed(eta1=eta1, eta2=eta2, shift=-b / (3 * a), c3=a)


def _eta(m, lam, a, h):
    w = m + 1 - lam
    c3 = 1 + a
    A = 3 * m * ((w * w - 3 * m) / (3 * m) - a)
    B = 9 * c3 * (h - w * m / (9 * c3))
    return (-2 * w * A - 3 * c3 * B) / (27 * c3**3), -A / (3 * c3 * c3)


def unfolding_coords(p: ScaledParams) -> UnfoldingCoords:
    """Unfolding parameters ``(eta1, eta2)`` of the equilibrium cubic.

    Uses ``A = 3 m (a_c - a)`` and ``B = 9 (1 + a)(h - h_c(a))``, where
    ``a_c`` and ``h_c`` are the triple-point formulas, so both coordinates
    vanish exactly (not just to rounding) at the triple point.
    """
    eta1, eta2 = _eta(p.m, p.lam, p.a, p.h)
    return UnfoldingCoords(eta1=eta1, eta2=eta2)


def _kinds(p: ScaledParams, roots) -> tuple:
    kinds = []
    for r, k in roots:
        try:
            kind = classify(p, Equilibrium(r, r, k)).kind
        except ClassificationError:
            kind = BOUNDARY
        kinds.append(BOUNDARY if kind == UNCLASSIFIED else kind)
    return tuple(kinds)


def sweep_cell(p: ScaledParams) -> SweepCell:
    roots = [(r, k) for r, k in shengjin_classify(equilibrium_cubic(p)).roots if r > 0]
    return SweepCell(
        a=p.a,
        h=p.h,
        n_positive_roots=len(roots),
        multiplicities=tuple(k for _, k in roots),
        kinds=_kinds(p, roots),
        eta=unfolding_coords(p),
    )


def grid_axis(lo, hi, n):
    if not (0 < lo < hi) or n < 2:
        raise ParameterError(f"invalid range ({lo!r}, {hi!r}) with {n} points")
    return np.linspace(lo, hi, n)


def sweep(m, lam, s, a_range, h_range, resolution=(21, 21)) -> list[list[SweepCell]]:
    """Classify the (a, h) grid; ``result[i][j]`` is ``(a_i, h_j)``."""
    a_axis = grid_axis(*a_range, resolution[0])
    h_axis = grid_axis(*h_range, resolution[1])
    base = ScaledParams(m=m, lam=lam, a=float(a_axis[0]), h=float(h_axis[0]), s=s)
    return [
        [sweep_cell(base.replace(a=float(a), h=float(h))) for h in h_axis]
        for a in a_axis
    ]


def fold_discriminant(m, lam, a, h) -> float:
    """``4 eta2**3 + 27 eta1**2``: zero on the fold, negative inside the cusp."""
    eta1, eta2 = _eta(m, lam, a, h)
    return 4 * eta2**3 + 27 * eta1**2


def fold_points(m, lam, a):
    """Fold values ``(h_lower, h_upper)`` at cooperation ``a`` or ``None``.

    Each is located by bisection of the discriminant in ``h``, bracketed on
    either side of the ``eta1 = 0`` line (``eta1`` falls with slope ``-1/c3``).
    """
    c3 = 1 + a
    eta1_at_zero, eta2 = _eta(m, lam, a, 0.0)
    if eta2 > 0:
        return None
    h_mid = c3 * eta1_at_zero
    half = 2 * c3 * math.sqrt(-4 * eta2**3 / 27)
    disc = lambda h: fold_discriminant(m, lam, a, h)  # noqa: E731
    # at the cusp the bracket collapses below rounding
    if half == 0.0 or disc(h_mid) >= 0 or disc(h_mid - half) <= 0 or disc(h_mid + half) <= 0:
        return h_mid, h_mid
    lo = bisect(disc, h_mid - half, h_mid, xtol=1e-15, rtol=1e-15, maxiter=400)
    hi = bisect(disc, h_mid, h_mid + half, xtol=1e-15, rtol=1e-15, maxiter=400)
    return lo, hi


def fold_curves(m, lam, a_range, resolution=201) -> FoldCurves:
    """Both fold branches over ``a_range`` (only ``h > 0`` points are kept).

    Raises
    ------
    ParameterError
        If no cooperation value in the range admits a fold.
    """
    dp = degenerate_point(m, lam)
    a_axis = grid_axis(*a_range, resolution)
    lower, upper = [], []
    for a in a_axis:
        pts = fold_points(m, lam, float(a))
        if pts is None:
            continue
        lo, hi = pts
        if lo > 0:
            lower.append((float(a), lo))
        if hi > 0:
            upper.append((float(a), hi))
    if not lower and not upper:
        raise ParameterError(f"no fold in a-range {a_range!r} (a1={dp.a1!r})")
    return FoldCurves(
        lower=np.array(lower).reshape(-1, 2),
        upper=np.array(upper).reshape(-1, 2),
        a1=dp.a1,
        h1=dp.h1,
    )
