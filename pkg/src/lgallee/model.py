"""Leslie-Gower predator-prey model with strong Allee effect, hunting
cooperation and constant prey stocking.

The raw model reads::

    dx/dt = r x (1 - x/K)(x - m) - (lambda + a y) x y + h
    dy/dt = s y (1 - y/(c x))

and the scale change ``x -> x/K``, ``y -> y/(cK)``, ``t -> rK t`` turns it
into the five-parameter dimensionless system::

    dx/dt = x (1 - x)(x - m) - (lambda + a y) x y + h
    dy/dt = s y (1 - y/x)

Every function here is written with plain arithmetic so it accepts floats as
well as arbitrary-precision numbers (``mpmath.mpf``), which the test-suite
uses for finite-difference oracles.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import DomainError, ModelError, ParameterError

#: residual admitted for an equilibrium handed to :func:`taylor_jet`
EQUILIBRIUM_TOL = 1e-10

SCALED_KEYS = ("m", "lambda", "a", "h", "s")
RAW_KEYS = ("r", "K", "m_raw", "lambda_raw", "a_raw", "h_raw", "s_raw", "c")


@dataclass(frozen=True)
class RawParams:
    """Dimensional parameters of the unscaled model."""

    r: float
    K: float
    m_raw: float
    lambda_raw: float
    a_raw: float
    h_raw: float
    s_raw: float
    c: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ParameterError(f"raw parameter {f.name} must be positive, got {value!r}")
        if not self.m_raw < self.K:
            raise ParameterError(
                f"Allee threshold m_raw={self.m_raw!r} must be below the carrying capacity K={self.K!r}"
            )


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless parameters ``(m, lambda, a, h, s)``.

    ``lambda`` is a Python keyword, so the attribute is spelled ``lam``; the
    serialized form (see :meth:`to_dict`) uses the key ``lambda``.
    """

    m: float
    lam: float
    a: float
    h: float
    s: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                name = "lambda" if f.name == "lam" else f.name
                raise ParameterError(f"parameter {name} must be positive, got {value!r}")
        if not self.m < 1:
            raise ParameterError(f"strong Allee threshold needs 0 < m < 1, got m={self.m!r}")

    def replace(self, **changes) -> "ScaledParams":
        values = dict(m=self.m, lam=self.lam, a=self.a, h=self.h, s=self.s)
        if "lambda" in changes:
            changes["lam"] = changes.pop("lambda")
        values.update(changes)
        return ScaledParams(**values)

    def to_dict(self) -> dict:
        return dict(zip(SCALED_KEYS, astuple(self)))

    @classmethod
    def from_dict(cls, doc) -> "ScaledParams":
        missing = [k for k in SCALED_KEYS if k not in doc]
        if missing:
            raise ParameterError(f"missing scaled parameter(s): {', '.join(missing)}")
        return cls(*(float(doc[k]) for k in SCALED_KEYS))


@dataclass(frozen=True)
class State:
    x: float
    y: float


@dataclass(frozen=True)
class TaylorCoefficients:
    """Jet of the vector field about an interior equilibrium.

    ``aij`` multiplies ``u**i v**j`` in the prey equation, ``bij`` the same
    monomial in the predator equation, with ``u = x - x*`` and ``v = y - y*``.
    Monomials not listed are identically zero up to total degree four.
    """

    a10: float
    a01: float
    a20: float
    a11: float
    a02: float
    a30: float
    a12: float
    b10: float
    b01: float
    b20: float
    b11: float
    b02: float
    b30: float
    b21: float
    b12: float
    b40: float
    b31: float
    b22: float

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def prey_terms(self) -> dict:
        """``{(i, j): aij}`` for the prey equation."""
        return {(int(k[1]), int(k[2])): v for k, v in self.items() if k[0] == "a"}

    def predator_terms(self) -> dict:
        return {(int(k[1]), int(k[2])): v for k, v in self.items() if k[0] == "b"}


def nondimensionalize(p: RawParams) -> ScaledParams:
    """Apply the scale transformation of the raw model.

    Time is rescaled as ``tau = r K t``, so trajectories of the two systems
    agree after mapping ``x -> x/K``, ``y -> y/(c K)``.
    """
    return ScaledParams(
        m=p.m_raw / p.K,
        lam=p.c * p.lambda_raw / p.r,
        a=p.c**2 * p.K * p.a_raw / p.r,
        h=p.h_raw / (p.r * p.K**2),
        s=p.s_raw / (p.r * p.K),
    )


def rates(x, y, p: ScaledParams):
    """Right-hand side of the scaled system at ``(x, y)``."""
    if not x > 0:
        raise DomainError(f"vector field undefined for x <= 0 (x={x!r})")
    dx = x * (1 - x) * (x - p.m) - (p.lam + p.a * y) * x * y + p.h
    dy = p.s * y * (1 - y / x)
    return dx, dy


def vector_field(st: State, p: ScaledParams):
    return rates(st.x, st.y, p)


def raw_vector_field(x, y, p: RawParams):
    """Right-hand side of the dimensional model."""
    if not x > 0:
        raise DomainError(f"vector field undefined for x <= 0 (x={x!r})")
    dx = (
        p.r * x * (1 - x / p.K) * (x - p.m_raw)
        - (p.lambda_raw + p.a_raw * y) * x * y
        + p.h_raw
    )
    dy = p.s_raw * y * (1 - y / (p.c * x))
    return dx, dy


def jacobian(st: State, p: ScaledParams) -> np.ndarray:
    x, y = st.x, st.y
    if not x > 0:
        raise DomainError(f"Jacobian undefined for x <= 0 (x={x!r})")
    fx = -3 * x**2 + 2 * (1 + p.m) * x - p.m - (p.lam + p.a * y) * y
    fy = -p.lam * x - 2 * p.a * x * y
    gx = p.s * y**2 / x**2
    gy = p.s - 2 * p.s * y / x
    return np.array([[fx, fy], [gx, gy]], dtype=float)


def taylor_jet(eq: State, p: ScaledParams) -> TaylorCoefficients:
    """Taylor coefficients of the system translated to the equilibrium ``eq``.

    The prey equation is a cubic polynomial, so its jet is exact. The predator
    term ``-s y**2 / x`` is expanded with the geometric series of ``1/x``.

    Raises
    ------
    ModelError
        If ``eq`` is not an equilibrium to within ``EQUILIBRIUM_TOL``.
    """
    x, y = eq.x, eq.y
    dx, dy = rates(x, y, p)
    residual = math.hypot(dx, dy)
    if residual > EQUILIBRIUM_TOL:
        raise ModelError(f"state ({x!r}, {y!r}) is not an equilibrium (residual {residual:.3e})")
    m, lam, a, s = p.m, p.lam, p.a, p.s

    # coefficient of u**k v**j in y**2/x about (x, y)
    def quot(k, j):
        base = (-1) ** k / x ** (k + 1)
        return base * (y**2, 2 * y, 1)[j]

    return TaylorCoefficients(
        a10=-3 * x**2 + 2 * (1 + m) * x - m - (lam + a * y) * y,
        a01=-lam * x - 2 * a * x * y,
        a20=1 + m - 3 * x,
        a11=-lam - 2 * a * y,
        a02=-a * x,
        a30=-1.0,
        a12=-a,
        b10=-s * quot(1, 0),
        b01=s - s * quot(0, 1),
        b20=-s * quot(2, 0),
        b11=-s * quot(1, 1),
        b02=-s * quot(0, 2),
        b30=-s * quot(3, 0),
        b21=-s * quot(2, 1),
        b12=-s * quot(1, 2),
        b40=-s * quot(4, 0),
        b31=-s * quot(3, 1),
        b22=-s * quot(2, 2),
    )
