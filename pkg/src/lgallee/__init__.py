"""Scaled Leslie-Gower predator-prey model with Allee effect, cooperative
hunting and prey stocking: equilibria, degenerate-point normal forms,
simulation and the cusp unfolding."""
from .bifurcation import fold_curves, sweep, unfolding_coords
from .classification import classify, snap_to_triple_point
from .equilibria import (
    degenerate_point,
    equilibrium_cubic,
    interior_equilibria,
    shengjin_classify,
    triple_point_params,
)
from .errors import (
    ClassificationError,
    DomainError,
    ExistenceError,
    IntegrationError,
    ModelError,
    ParameterError,
)
from .model import RawParams, ScaledParams, State, jacobian, nondimensionalize, taylor_jet, vector_field
from .normal_form import analyze
from .simulation import SolverConfig, integrate, phase_portrait, stability_probe

__all__ = [
    "ClassificationError", "DomainError", "ExistenceError", "IntegrationError",
    "ModelError", "ParameterError", "RawParams", "ScaledParams", "SolverConfig",
    "State", "analyze", "classify", "degenerate_point", "equilibrium_cubic",
    "fold_curves", "integrate", "interior_equilibria", "jacobian",
    "nondimensionalize", "phase_portrait", "shengjin_classify",
    "snap_to_triple_point", "stability_probe", "sweep", "taylor_jet",
    "triple_point_params", "unfolding_coords", "vector_field",
]
