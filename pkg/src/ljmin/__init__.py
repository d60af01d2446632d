"""Lennard-Jones cluster minimization, distance geometry and steric contact repair."""
__version__ = "0.1.0"

from .potential import (
    ABParams,
    Configuration,
    HBParams,
    PairPotentialParams,
    SingularityError,
    ab_from_eps_sigma,
    eps_sigma_from_ab,
    hb_energy,
    hb_params_from_depth,
    lj_energy,
    lj_gradient,
    lj_pair_energy,
    total_energy,
)
from .localopt import LocalOptOptions, LocalOptResult, line_search, minimize_local
from .globalopt import BasinHopOptions, OptimizerReport, basin_hop, multi_start, perturb, random_configuration
from .distgeom import (
    ConstraintSet,
    PerturbationVector,
    check_feasibility,
    complete_constraints,
    embed,
    stress,
    stress_gradient,
    stress_perturbed,
    triangle_violations,
)
