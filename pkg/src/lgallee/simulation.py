"""Numerical integration, stability probes and phase-portrait data.

The integrator is the Dormand-Prince 5(4) embedded pair with the usual
per-step error control. It stops on the horizon, on blow-up, or when the
prey density reaches ``x_floor`` (the predator equation is singular at
``x = 0``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .equilibria import Equilibrium, interior_equilibria
from .errors import DomainError, IntegrationError, ParameterError
from .model import ScaledParams, State, rates

HORIZON = "horizon"
BLOW_UP = "blow-up"
X_FLOOR = "x-floor"

ATTRACTING = "attracting"
REPELLING = "repelling"
INCONCLUSIVE = "inconclusive"

# Dormand-Prince 5(4)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = _A[6] + (0.0,)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


@dataclass(frozen=True)
class SolverConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = 10.0
    min_step: float = 1e-12
    t_end: float = 100.0
    x_floor: float = 1e-9
    blow_up: float = 1e6

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError("tolerances must be positive")
        if not 0 < self.min_step <= self.max_step:
            raise ParameterError("need 0 < min_step <= max_step")
        if not self.x_floor > 0:
            raise ParameterError("x_floor must be positive")
        if not self.t_end > 0:
            raise ParameterError("t_end must be positive")

    def replace(self, **changes) -> "SolverConfig":
        values = dict(self.__dict__)
        values.update(changes)
        return SolverConfig(**values)


#: long horizon for probes near degenerate (algebraically attracting) points
PROBE_CONFIG = SolverConfig(t_end=5e3, max_step=50.0)


@dataclass
class Trajectory:
    samples: np.ndarray  # rows (t, x, y)
    terminated: str
    max_error_ratio: float = 0.0

    @property
    def t(self):
        return self.samples[:, 0]

    @property
    def x(self):
        return self.samples[:, 1]

    @property
    def y(self):
        return self.samples[:, 2]

    @property
    def final(self) -> State:
        return State(float(self.samples[-1, 1]), float(self.samples[-1, 2]))


def integrate(p: ScaledParams, init: State, cfg: SolverConfig = SolverConfig(), t0: float = 0.0) -> Trajectory:
    """Integrate the scaled system from ``init`` over ``[t0, t0 + cfg.t_end]``.

    Raises
    ------
    IntegrationError
        When the step size underflows ``cfg.min_step``; the exception carries
        the last accepted time and state.
    """
    if not init.x > cfg.x_floor:
        raise DomainError(f"initial prey density {init.x!r} not above x_floor={cfg.x_floor!r}")
    t, x, y = t0, float(init.x), float(init.y)
    t_stop = t0 + cfg.t_end
    out = [(t, x, y)]
    k1 = rates(x, y, p)
    h = min(cfg.max_step, 1e-3 * max(1.0, cfg.t_end) / 100)
    worst = 0.0
    reason = HORIZON

    while t < t_stop:
        h = min(h, cfg.max_step, t_stop - t)
        if h < cfg.min_step and t_stop - t > cfg.min_step:
            raise IntegrationError(f"step size underflow at t={t!r}", t=t, state=State(x, y))
        ks = [k1]
        try:
            for i in range(1, 7):
                xi = x + h * sum(a * k[0] for a, k in zip(_A[i], ks))
                yi = y + h * sum(a * k[1] for a, k in zip(_A[i], ks))
                ks.append(rates(xi, yi, p))
        except DomainError:
            h *= 0.25
            continue
        # 5th-order solution is the last stage point (FSAL)
        xn, yn = xi, yi
        ex = h * sum(e * k[0] for e, k in zip(_E, ks))
        ey = h * sum(e * k[1] for e, k in zip(_E, ks))
        sx = cfg.abs_tol + cfg.rel_tol * max(abs(x), abs(xn))
        sy = cfg.abs_tol + cfg.rel_tol * max(abs(y), abs(yn))
        err = max(abs(ex) / sx, abs(ey) / sy)
        if not math.isfinite(err):
            h *= 0.25
            continue
        if err <= 1.0:
            worst = max(worst, err)
            t += h
            x, y = xn, yn
            k1 = ks[6]
            if x <= cfg.x_floor:
                reason = X_FLOOR
                break
            out.append((t, x, y))
            if max(abs(x), abs(y)) > cfg.blow_up:
                reason = BLOW_UP
                break
            factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
        else:
            factor = max(0.2, 0.9 * err ** -0.2)
        h *= factor
    return Trajectory(np.array(out), reason, worst)


@dataclass
class ProbeResult:
    verdict: str
    seed_verdicts: list
    final_distances: list
    checkpoints: list = field(default_factory=list)


def probe(
    p: ScaledParams,
    eq: Equilibrium,
    radius: float = 1e-2,
    n: int = 8,
    cfg: SolverConfig = PROBE_CONFIG,
) -> ProbeResult:
    """Integrate ``n`` seeds on a circle of ``radius`` around ``eq``.

    A seed is attracted once its distance drops below ``radius / 10`` at a
    checkpoint, repelled once it exceeds ``10 * radius`` (or hits a guard).
    Checkpoints are geometric, ``t_end * 10**-k`` for ``k = 4..0``.
    """
    checkpoints = [cfg.t_end * 10.0**-k for k in range(4, -1, -1)]
    verdicts, finals = [], []
    for i in range(n):
        ang = 2 * math.pi * i / n
        state = State(eq.x + radius * math.cos(ang), eq.y + radius * math.sin(ang))
        t, verdict, dist = 0.0, INCONCLUSIVE, radius
        for tc in checkpoints:
            traj = integrate(p, state, cfg.replace(t_end=tc - t), t0=t)
            d = np.hypot(traj.x - eq.x, traj.y - eq.y)
            dist = float(d[-1])
            if traj.terminated != HORIZON or d.max() > 10 * radius:
                verdict = REPELLING
                break
            if dist < radius / 10:
                verdict = ATTRACTING
                break
            t, state = tc, traj.final
        verdicts.append(verdict)
        finals.append(dist)
    if all(v == ATTRACTING for v in verdicts):
        overall = ATTRACTING
    elif all(v == REPELLING for v in verdicts):
        overall = REPELLING
    else:
        overall = INCONCLUSIVE
    return ProbeResult(overall, verdicts, finals, checkpoints)


def stability_probe(p, eq, radius=1e-2, n=8, cfg=PROBE_CONFIG) -> str:
    return probe(p, eq, radius, n, cfg).verdict


@dataclass
class PortraitData:
    trajectories: list
    prey_nullcline: np.ndarray  # rows (x, y); y is nan where no y >= 0 exists
    predator_nullcline: np.ndarray
    equilibria: list
    intersections: list


def prey_nullcline_y(x, p: ScaledParams):
    """Nonnegative ``y`` with zero prey rate at ``x`` (``nan`` if none).

    The prey rate is quadratic in ``y``; its product of roots is negative
    exactly when the growth-plus-stocking term is positive, so at most one
    root is nonnegative.
    """
    growth = x * (1 - x) * (x - p.m) + p.h
    if growth < 0:
        return math.nan
    if p.a == 0:
        return growth / (p.lam * x)
    disc = (p.lam * x) ** 2 + 4 * p.a * x * growth
    return 2 * growth / (p.lam * x + math.sqrt(disc))


def phase_portrait(
    p: ScaledParams,
    window=(0.01, 1.0, 0.0, 1.0),
    grid=(5, 5),
    cfg: SolverConfig = SolverConfig(t_end=200.0),
    samples: int = 2001,
) -> PortraitData:
    x_lo, x_hi, y_lo, y_hi = window
    if not x_lo > 0:
        raise DomainError(f"portrait window must lie in x > 0 (got x_lo={x_lo!r})")
    if not (x_hi > x_lo and y_hi > y_lo):
        raise ParameterError("empty portrait window")
    nx, ny = grid
    xs_seed = x_lo + (np.arange(nx) + 0.5) * (x_hi - x_lo) / nx
    ys_seed = y_lo + (np.arange(ny) + 0.5) * (y_hi - y_lo) / ny
    trajectories = []
    for y0 in ys_seed:
        for x0 in xs_seed:
            try:
                trajectories.append(integrate(p, State(float(x0), float(y0)), cfg))
            except IntegrationError as exc:
                trajectories.append(Trajectory(np.array([(0.0, x0, y0), (exc.t, exc.state.x, exc.state.y)]), X_FLOOR))

    xs = np.linspace(x_lo, x_hi, samples)
    prey = np.array([prey_nullcline_y(float(x), p) for x in xs])
    predator = xs.copy()

    def gap(x):
        return prey_nullcline_y(x, p) - x

    # multiple roots are flat or tangential crossings that bracketing cannot
    # resolve, so they come from the closed-form cubic roots
    eqs = [e for e in interior_equilibria(p) if x_lo <= e.x <= x_hi and y_lo <= e.y <= y_hi]
    multiple = [e.x for e in eqs if e.multiplicity > 1]
    cell = (x_hi - x_lo) / (samples - 1)
    diff = prey - xs
    intersections = list(multiple)
    for i in range(samples - 1):
        d0, d1 = diff[i], diff[i + 1]
        if not (np.isfinite(d0) and np.isfinite(d1)):
            continue
        if any(xs[i] - cell <= x <= xs[i + 1] + cell for x in multiple):
            continue
        if d0 == 0:
            intersections.append(float(xs[i]))
        elif d0 * d1 < 0:
            intersections.append(brentq(gap, xs[i], xs[i + 1], xtol=1e-15, rtol=1e-15))
    if np.isfinite(diff[-1]) and diff[-1] == 0 and not multiple:
        intersections.append(float(xs[-1]))
    intersections.sort()

    return PortraitData(
        trajectories=trajectories,
        prey_nullcline=np.column_stack([xs, prey]),
        predator_nullcline=np.column_stack([xs, predator]),
        equilibria=eqs,
        intersections=[(x, x) for x in intersections],
    )
