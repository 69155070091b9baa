"""Normal forms at the triple equilibrium.

Two branches, both run on the degree-4 jet of the translated system:

* single zero eigenvalue (trace ``s1 - s`` nonzero): linear change to the
  eigenbasis ``(1, 1), (s1, s)``, time rescale by the trace, then a center
  manifold ``v = sigma2 u**2 + sigma3 u**3 + ...`` and the reduced flow
  ``u' = e30 u**3 - e11 f30 u**4 + O(u**5)``;
* double zero eigenvalue (``s = s1``): linear change to the nilpotent Jordan
  block, then near-identity changes that solve the homological equation
  degree by degree, leaving ``U' = V``, ``V' = j20 U**2 + j11 U V + j30 U**3
  + (j21 + 3 i30) U**2 V + O(4)``.

All coefficients come from exact truncated polynomial composition. The
closed-form expressions are reported alongside as cross-checks only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClassificationError
from .model import ScaledParams, State, TaylorCoefficients, taylor_jet
from .polymap import (
    DEFAULT_DEGREE,
    Poly,
    PolyMap2,
    flatten_homogeneous,
    homological_operator,
    linear_change,
    near_identity_change,
    series_1d,
    unflatten_homogeneous,
)

#: |s - s1| at or below this selects the double-zero branch
TRACE_GATE = 1e-9
#: a certificate is nonzero when it exceeds this fraction of its degree's scale
CERT_TOL = 1e-10

NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]])


@dataclass(frozen=True)
class CenterManifold:
    sigma: np.ndarray  # sigma[k] multiplies u**k
    reduced: np.ndarray  # reduced[k] multiplies u**k in du/dtau

    @property
    def sigma1(self):
        # sigma1 multiplies u**2, sigma2 multiplies u**3
        return float(self.sigma[2])

    @property
    def sigma2(self):
        return float(self.sigma[3])


@dataclass
class NormalFormReport:
    case: str
    e30: float = None
    e11f30: float = None
    sigma1: float = None
    sigma2: float = None
    orientation: int = None
    reduced_cubic: float = None
    reduced_quartic: float = None
    j20: float = None
    j11: float = None
    j30: float = None
    j21_plus_3i30: float = None
    nondegenerate: dict = field(default_factory=dict)
    closed_forms: dict = field(default_factory=dict)
    stages: dict = field(default_factory=dict, repr=False)

    @property
    def all_nondegenerate(self):
        return all(self.nondegenerate.values())

    def to_flat(self) -> dict:
        doc = {"case": self.case}
        for key in (
            "e30", "e11f30", "sigma1", "sigma2", "orientation", "reduced_cubic",
            "reduced_quartic", "j20", "j11", "j30", "j21_plus_3i30",
        ):
            value = getattr(self, key)
            if value is not None:
                doc[key] = value
        for key, ok in self.nondegenerate.items():
            doc[f"nondegenerate_{key}"] = ok
        for key, value in self.closed_forms.items():
            doc[f"closed_{key}"] = value
        return doc


def jet_field(jet: TaylorCoefficients, degree=DEFAULT_DEGREE) -> PolyMap2:
    return PolyMap2(Poly(jet.prey_terms(), degree), Poly(jet.predator_terms(), degree))


def _degree_scale(f: PolyMap2, k):
    h = f.homogeneous(k)
    return float(np.abs(h.p.c).sum() + np.abs(h.q.c).sum())


def _nonzero(value, scale):
    return abs(value) > CERT_TOL * max(scale, 1e-300)


def linear_normalize_single_zero(jet: TaylorCoefficients, p: ScaledParams) -> PolyMap2:
    """Bring the jet to ``u' = O(2)``, ``v' = v + O(2)``.

    Coordinates: ``(u, v) = u1 * null + v1 * col`` with ``null`` the kernel
    vector of the linear part scaled to first entry one and ``col`` its
    first column; at the triple point these are ``(1, 1)`` and ``(s1, s)``.
    Time is then divided by the trace ``s1 - s``; when the trace is negative
    this reverses time, recorded as ``orientation`` by :func:`single_zero_report`.
    """
    F = jet_field(jet)
    J = F.linear_part()
    tr = float(np.trace(J))
    if abs(tr) <= TRACE_GATE:
        raise ClassificationError(
            f"trace {tr:.3e} is inside the degeneracy gate; use the double-zero chain"
        )
    det = float(np.linalg.det(J))
    if abs(det) > 1e-10 * max(1.0, np.abs(J).max()):
        raise ClassificationError(f"linear part is not singular (det={det:.3e})")
    null = np.array([-J[0, 1], J[0, 0]])
    if not null.any():
        null = np.array([-J[1, 1], J[1, 0]])
    null = null / null[0] if null[0] != 0 else null / np.linalg.norm(null)
    col = J[:, 0] if J[:, 0].any() else J[:, 1]
    T = np.column_stack([null, col])
    G = linear_change(F, T).scale(1.0 / tr)
    # kill round-off in the linear part, which is exact in theory
    for poly, (a, b) in ((G.p, (0.0, 0.0)), (G.q, (0.0, 1.0))):
        poly.c[1, 0], poly.c[0, 1] = a, b
    return G


def center_manifold_reduce(sys: PolyMap2) -> CenterManifold:
    """Center manifold of ``u' = f(u, v)``, ``v' = v + g(u, v)``.

    Solves ``h'(u) f(u, h(u)) = h(u) + g(u, h(u))`` order by order.
    """
    L = sys.linear_part()
    if abs(L[0]).max() > 1e-9 or abs(L[1, 0]) > 1e-9 or abs(L[1, 1] - 1) > 1e-9:
        raise ClassificationError(
            f"expected linear part [[0, 0], [0, 1]], got {L.tolist()}"
        )
    n = sys.degree
    u = Poly.var("x", n)
    g = sys.q - Poly.var("y", n)
    sigma = np.zeros(n + 1)
    for k in range(2, n + 1):
        H = Poly({(i, 0): sigma[i] for i in range(2, n + 1)}, n)
        lhs = H.diff("x") * sys.p.compose(u, H)
        sigma[k] = (lhs - g.compose(u, H))[k, 0]
    H = Poly({(i, 0): sigma[i] for i in range(2, n + 1)}, n)
    reduced = series_1d(sys.p.compose(u, H))
    return CenterManifold(sigma=sigma, reduced=reduced)


def single_zero_report(jet: TaylorCoefficients, p: ScaledParams) -> NormalFormReport:
    G = linear_normalize_single_zero(jet, p)
    cm = center_manifold_reduce(G)
    tr = jet.a10 + jet.b01
    e30 = float(G.p[3, 0])
    e11, f30 = float(G.p[1, 1]), float(G.q[3, 0])
    scale3 = _degree_scale(G, 3)
    report = NormalFormReport(
        case="single-zero",
        e30=e30,
        e11f30=e11 * f30,
        sigma1=cm.sigma1,
        sigma2=cm.sigma2,
        orientation=1 if tr > 0 else -1,
        reduced_cubic=float(cm.reduced[3]),
        reduced_quartic=float(cm.reduced[4]),
        nondegenerate={
            "e30": e30 > CERT_TOL * scale3,
            "e11f30": _nonzero(e11 * f30, _degree_scale(G, 2) * scale3),
        },
        stages={"translated": jet_field(jet), "eigenbasis": G, "center_manifold": cm},
    )
    return report


def double_zero_chain(jet: TaylorCoefficients, p: ScaledParams) -> NormalFormReport:
    """Reduce a jet with nilpotent linear part to Bogdanov normal form."""
    F0 = jet_field(jet)
    J = F0.linear_part()
    tr = float(np.trace(J))
    if abs(tr) > TRACE_GATE:
        raise ClassificationError(f"trace {tr:.3e} is nonzero; use the single-zero branch")
    w = np.array([0.0, 1.0])
    if not (J @ w).any():
        w = np.array([1.0, 0.0])
    T = np.column_stack([J @ w, w])
    F = linear_change(F0, T)
    residue = F.linear_part() - NILPOTENT
    if abs(residue).max() > 1e-8:
        raise ClassificationError(f"linear part not nilpotent: {F.linear_part().tolist()}")
    F.p.c[1, 0], F.p.c[0, 1] = 0.0, 1.0
    F.q.c[1, 0], F.q.c[0, 1] = 0.0, 0.0
    stages = {"translated": F0, "nilpotent": F}

    for k in (2, 3):
        L, _ = homological_operator(NILPOTENT, k)
        fk = flatten_homogeneous(F.homogeneous(k), k)
        keep = [k + 1, k + 2]  # (0, x**k) and (0, x**(k-1) y)
        rows = [i for i in range(2 * (k + 1)) if i not in keep]
        hvec, *_ = np.linalg.lstsq(L[rows], fk[rows], rcond=None)
        defect = L[rows] @ hvec - fk[rows]
        if abs(defect).max() > 1e-12 * max(1.0, abs(fk).max()):
            raise ClassificationError(f"homological equation inconsistent at degree {k}")
        F = near_identity_change(F, unflatten_homogeneous(hvec, k, F.degree))
        left = flatten_homogeneous(F.homogeneous(k), k)
        left[keep] = 0.0
        if abs(left).max() > 1e-10 * max(1.0, abs(fk).max()):
            raise ClassificationError(f"truncation inconsistency after degree-{k} change")
        stages[f"degree{k}"] = F

    nil = stages["nilpotent"]
    s2, s3 = _degree_scale(nil, 2), _degree_scale(nil, 3)
    j11, j30, jmix = float(F.q[1, 1]), float(F.q[3, 0]), float(F.q[2, 1])
    return NormalFormReport(
        case="double-zero",
        j20=float(F.q[2, 0]),
        j11=j11,
        j30=j30,
        j21_plus_3i30=jmix,
        nondegenerate={
            "j11": _nonzero(j11, s2),
            "j30": _nonzero(j30, s3),
            "j21_plus_3i30": _nonzero(jmix, s3),
        },
        stages=stages,
    )


def closed_forms(p: ScaledParams, x1: float) -> dict:
    """Closed-form certificate expressions at the triple point.

    ``*_printed`` entries reproduce published expressions verbatim;
    ``*_derived`` entries follow from the jet by hand algebra. Only the
    pipeline values are authoritative.
    """
    a, lam, m, s = p.a, p.lam, p.m, p.s
    s1 = x1 * (2 * a * x1 + lam)
    out = {"s1": s1}
    if s != s1:
        d = s1 - s
        out["e30"] = s * (a + 1) / d**2
        out["e11f30_printed"] = s**2 * s1 * (a + 1) * d * (4 * a * x1 + lam) / d**4
        out["e11f30_derived"] = s * (a + 1) * (4 * a * x1 + lam) / d**3
    out["j30"] = -(s1**3) * (a + 1)
    out["j11_printed"] = -s1 * (m + 1 + 4 * a * x1)
    out["j11_derived"] = -s1 * (lam + 4 * a * x1)
    out["j21_plus_3i30_printed"] = (
        s1**3
        + s1**2 * lam * x1
        + 2 * s1 * a * lam * x1**3
        + 2 * a**2 * s1 * x1**4
        + 2 * s1**2 * x1**2 * (2 * a - 3)
    ) / (2 * x1**2)
    return out


def analyze(p: ScaledParams, eq: State, gate: float = TRACE_GATE) -> NormalFormReport:
    """Jet at ``eq`` and the normal form of the matching branch."""
    jet = taylor_jet(eq, p)
    tr = jet.a10 + jet.b01
    if abs(tr) <= gate:
        report = double_zero_chain(jet, p)
    else:
        report = single_zero_report(jet, p)
    report.closed_forms = closed_forms(p, eq.x)
    return report


def is_finite(report: NormalFormReport) -> bool:
    values = [v for v in report.to_flat().values() if isinstance(v, float)]
    return all(math.isfinite(v) for v in values)
