"""Equilibrium classification: hyperbolic types from trace/determinant and the
degenerate triple point (codimension-2 node or codimension-3 point)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibria import Equilibrium, degenerate_point
from .errors import ClassificationError, ModelError
from .model import ScaledParams, State, jacobian
from .normal_form import TRACE_GATE, analyze

STABLE_NODE = "stable node"
UNSTABLE_NODE = "unstable node"
STABLE_FOCUS = "stable focus"
UNSTABLE_FOCUS = "unstable focus"
SADDLE = "saddle"
CENTER_CANDIDATE = "center-candidate"
CODIM2_STABLE = "codim2-node-stable"
CODIM2_UNSTABLE = "codim2-node-unstable"
CODIM3 = "codim3-degenerate"
UNCLASSIFIED = "unclassified-degenerate"

DEGENERATE_KINDS = (CODIM2_STABLE, CODIM2_UNSTABLE, CODIM3, UNCLASSIFIED)

DET_GATE = 1e-10
BORDERLINE_TOL = 1e-9

#: bound on m for the a1 > 3/2 region: (11 - sqrt(105)) / 4
M_STAR = (11 - math.sqrt(105)) / 4


@dataclass
class Classification:
    kind: str
    trace: float
    det: float
    s1: float
    certificates: list = field(default_factory=list)
    borderline: bool = False

    @property
    def is_degenerate(self):
        return self.kind in DEGENERATE_KINDS


def s1_threshold(p: ScaledParams, x1: float) -> float:
    """Predator growth rate at which the trace at the triple point vanishes."""
    return x1 * (2 * p.a * x1 + p.lam)


def strong_cooperation_region(m: float, lam: float):
    """Whether ``(m, lambda)`` lies in the region guaranteeing ``a1 > 3/2``.

    Returns ``(in_region, a1)``; ``a1`` is the cooperation value of the
    triple point (``nan`` when ``lambda`` is past the existence bound).
    """
    bound = m + 1 - math.sqrt(30 * m) / 2
    in_region = m < M_STAR and 0 < lam < bound
    w = m + 1 - lam
    a1 = (w * w - 3 * m) / (3 * m) if lam < m + 1 - math.sqrt(3 * m) else math.nan
    return in_region, a1


def _hyperbolic_kind(tr, det):
    if det < 0:
        return SADDLE, False
    disc = tr * tr - 4 * det
    borderline = abs(disc) <= BORDERLINE_TOL * max(tr * tr, 4 * abs(det), 1e-300)
    if tr == 0:
        return CENTER_CANDIDATE, borderline
    if disc < 0 and not borderline:
        return (STABLE_FOCUS if tr < 0 else UNSTABLE_FOCUS), False
    return (STABLE_NODE if tr < 0 else UNSTABLE_NODE), borderline


def classify(p: ScaledParams, eq: Equilibrium) -> Classification:
    """Classify an interior equilibrium.

    Raises
    ------
    ClassificationError
        If the multiplicity contradicts the determinant (simple roots have a
        nonsingular Jacobian and multiple roots a singular one).
    """
    J = jacobian(State(eq.x, eq.y), p)
    tr, det = float(np.trace(J)), float(np.linalg.det(J))
    s1 = s1_threshold(p, eq.x)
    singular = abs(det) <= DET_GATE * max(1.0, float(np.abs(J).max()))

    if eq.multiplicity == 1:
        if singular:
            raise ClassificationError(
                f"simple equilibrium at x={eq.x!r} has singular Jacobian (det={det:.3e})"
            )
        kind, borderline = _hyperbolic_kind(tr, det)
        return Classification(kind, tr, det, s1, borderline=borderline)

    if not singular:
        raise ClassificationError(
            f"equilibrium of multiplicity {eq.multiplicity} has det={det:.3e} != 0"
        )
    if eq.multiplicity == 2:
        # saddle-node type points on the fold are not analysed further
        return Classification(UNCLASSIFIED, tr, det, s1)

    if abs(p.s - s1) <= TRACE_GATE:
        report = analyze(p, State(eq.x, eq.y))
        certs = [
            ("j11", report.j11),
            ("j30", report.j30),
            ("j21_plus_3i30", report.j21_plus_3i30),
        ]
        in_region, _ = strong_cooperation_region(p.m, p.lam)
        kind = CODIM3 if in_region and report.all_nondegenerate else UNCLASSIFIED
        return Classification(kind, tr, det, s1, certificates=certs)

    report = analyze(p, State(eq.x, eq.y))
    certs = [("e30", report.e30), ("e11f30", report.e11f30)]
    if not report.all_nondegenerate:
        return Classification(UNCLASSIFIED, tr, det, s1, certificates=certs)
    # the reduced flow in original time is orientation * e30 * u**3
    unstable = report.orientation * report.e30 > 0
    kind = CODIM2_UNSTABLE if unstable else CODIM2_STABLE
    return Classification(kind, tr, det, s1, certificates=certs)


def snap_to_triple_point(p: ScaledParams, rtol: float = 1e-8):
    """Replace ``(a, h)`` (and ``s``) by exact triple-point values when close.

    Decimal inputs such as ``h = 0.0037037037`` split the triple root at the
    scale ``|dh|**(1/3)``, far above any root-merging tolerance. Returns
    ``(params, snapped)``; ``s`` is snapped to ``s1`` only together with
    ``(a, h)``.
    """
    if rtol <= 0:
        return p, False
    try:
        dp = degenerate_point(p.m, p.lam)
    except ModelError:
        return p, False
    if abs(p.a - dp.a1) > rtol * dp.a1 or abs(p.h - dp.h1) > rtol * dp.h1:
        return p, False
    q = p.replace(a=dp.a1, h=dp.h1)
    s1 = s1_threshold(q, dp.x1)
    if abs(p.s - s1) <= rtol * s1:
        q = q.replace(s=s1)
    return q, True
