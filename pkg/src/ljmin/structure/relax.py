"""
Clash removal by minimizing pairwise LJ + 12-10 hydrogen-bond energy.

Only atoms that appear in a listed pair move; every other atom keeps its
input coordinates.
"""
from dataclasses import dataclass
import logging

import numpy as np

from ..localopt import LocalOptOptions, NonFiniteError, minimize_local
from ..potential import (
    WELL_FACTOR,
    PairPotentialParams,
    ab_from_eps_sigma,
    hb_params_from_depth,
    total_energy_and_gradient,
)
from .contacts import DEFAULT_OVERLAP_TOL, ContactReport, find_clashes, pair_clashes
from .radii import vdw_radius

__all__ = ["VdwPair", "HBPair", "RelaxResult", "DEFAULT_PAIR_EPSILON", "relax_structure",
           "parse_pairs", "read_pairs"]

logger = logging.getLogger(__name__)

#: well depth for listed vdW pairs, arbitrary energy units
DEFAULT_PAIR_EPSILON = 0.2


@dataclass(frozen=True)
class VdwPair:
    i: int
    j: int
    epsilon: float = DEFAULT_PAIR_EPSILON


@dataclass(frozen=True)
class HBPair:
    i: int
    j: int
    depth: float
    r_min: float


@dataclass
class RelaxResult:
    structure: object
    before: ContactReport
    after: ContactReport
    success: bool
    message: str
    energy_before: float
    energy_after: float
    listed_clashes: list
    iters: int = 0


def _check_index(n, p, kind):
    if not (0 <= p.i < n and 0 <= p.j < n):
        raise IndexError(f"{kind} pair ({p.i}, {p.j}) out of range for {n} atoms")
    if p.i == p.j:
        raise ValueError(f"{kind} pair joins atom {p.i} to itself")


def _pair_terms(structure, vdw_pairs, hb_pairs, radii):
    n = len(structure)
    atoms = structure.atoms
    vdw_terms = []
    for p in vdw_pairs:
        _check_index(n, p, "vdw")
        d_star = vdw_radius(atoms[p.i].element, radii) + vdw_radius(atoms[p.j].element, radii)
        params = ab_from_eps_sigma(PairPotentialParams(p.epsilon, d_star / WELL_FACTOR))
        vdw_terms.append((p.i, p.j, params))
    hb_terms = []
    for p in hb_pairs:
        _check_index(n, p, "hb")
        hb_terms.append((p.i, p.j, hb_params_from_depth(p.depth, p.r_min)))
    return vdw_terms, hb_terms


def relax_structure(structure, vdw_pairs=(), hb_pairs=(), local_opts=None, radii=None,
                    overlap_tol=DEFAULT_OVERLAP_TOL):
    """Relax the listed pairs and report clashes before and after.

    Parameters
    ----------
    structure : Structure
    vdw_pairs : sequence of VdwPair
        Each pair gets an LJ term with ``sigma = (ri + rj) / 2**(1/6)``, so its
        minimum sits at the vdW contact distance ``ri + rj``.
    hb_pairs : sequence of HBPair
        12-10 terms with their minimum ``-depth`` at ``r_min``.
    local_opts : LocalOptOptions, optional
    radii : dict, optional
        Element radius overrides.

    Returns
    -------
    RelaxResult
        ``success`` is only True when the minimizer converged and none of the
        listed pairs clash afterwards; otherwise ``message`` says why and
        ``structure`` carries the best coordinates found.
    """
    local_opts = local_opts or LocalOptOptions()
    vdw_terms, hb_terms = _pair_terms(structure, vdw_pairs, hb_pairs, radii)
    before = find_clashes(structure, overlap_tol, radii)
    listed = [(p.i, p.j) for p in vdw_pairs] + [(p.i, p.j) for p in hb_pairs]
    if not listed:
        return RelaxResult(structure, before, before, True, "no pairs to relax", 0.0, 0.0, [])

    pos0 = structure.coordinates()
    moving = sorted({k for pair in listed for k in pair})
    local = {k: n for n, k in enumerate(moving)}
    vdw_local = [(local[i], local[j], p) for i, j, p in vdw_terms]
    hb_local = [(local[i], local[j], p) for i, j, p in hb_terms]

    def fun(x):
        return total_energy_and_gradient(x.reshape(-1, 3), vdw_local, hb_local)

    x0 = pos0[moving].reshape(-1)
    e0 = fun(x0)[0]
    try:
        res = minimize_local(fun, x0, local_opts)
        x_best, e_best, converged, iters = res.x_star, res.f_star, res.converged, res.iters
        message = res.message
    except NonFiniteError as exc:
        x_best = exc.x if exc.x is not None else x0
        e_best, converged, iters = fun(x_best)[0], False, 0
        message = str(exc)

    pos = pos0.copy()
    pos[moving] = x_best.reshape(-1, 3)
    relaxed = structure.with_coordinates(pos)
    after = find_clashes(relaxed, overlap_tol, radii)
    remaining = pair_clashes(relaxed, listed, overlap_tol, radii)
    if not converged:
        message = message or "minimizer did not converge"
    elif remaining:
        message = f"{len(remaining)} listed pair(s) still clash after relaxation"
    success = converged and not remaining
    if not success:
        logger.warning("relaxation failed: %s", message)
    return RelaxResult(relaxed, before, after, success, message, e0, e_best, remaining, iters)


def parse_pairs(text, structure, source="<pairs>"):
    """Read a pair list that names atoms by PDB serial number.

    ::

        # kind  serial_i serial_j  [parameters]
        vdw     12       40        [epsilon]
        hb      7        33        depth r_min
    """
    index = structure.index_of_serial()
    vdw, hb = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        where = f"{source}:{lineno}"
        kind = parts[0].lower()
        if not ((kind == "vdw" and len(parts) in (3, 4)) or (kind == "hb" and len(parts) == 5)):
            raise ValueError(f"{where}: cannot parse {raw.strip()!r}")
        try:
            serials = [int(t) for t in parts[1:3]]
            params = [float(t) for t in parts[3:]]
        except ValueError:
            raise ValueError(f"{where}: bad number in {raw.strip()!r}") from None
        missing = [s for s in serials if s not in index]
        if missing:
            raise ValueError(f"{where}: no atom with serial {missing[0]}")
        i, j = (index[s] for s in serials)
        if kind == "vdw":
            vdw.append(VdwPair(i, j, params[0] if params else DEFAULT_PAIR_EPSILON))
        else:
            hb.append(HBPair(i, j, params[0], params[1]))
    return vdw, hb


def read_pairs(path, structure):
    with open(path) as fh:
        return parse_pairs(fh.read(), structure, source=str(path))
