"""
Distance geometry: constraint sets, stress objectives and 3-D embedding.

A constraint set S lists atom pairs with target distances ``r_ij`` and
positive weights ``w_ij``.  The stress

    P(x) = sum_S w_ij (|X_i - X_j|**2 - r_ij**2)**2

vanishes exactly on configurations that realize every target.  When the
targets cannot be realized (for instance a violated triangle inequality) a
linear perturbation ``-eps . x`` with ``eps >= 0`` may be subtracted.
"""
from dataclasses import dataclass
import itertools
import logging

import numpy as np

from .globalopt import restart_streams
from .localopt import LocalOptOptions, NonFiniteError, minimize_local

__all__ = [
    "Constraint",
    "ConstraintSet",
    "PerturbationVector",
    "Violation",
    "EmbedResult",
    "DEFAULT_EPS",
    "FEASIBILITY_TOL",
    "stress",
    "stress_gradient",
    "stress_perturbed",
    "stress_perturbed_gradient",
    "check_feasibility",
    "triangle_violations",
    "embed",
    "complete_constraints",
]

logger = logging.getLogger(__name__)

#: per-component perturbation used when perturbed mode is asked for without values
DEFAULT_EPS = 1e-3
FEASIBILITY_TOL = 1e-4
_TRIANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class Constraint:
    i: int
    j: int
    r: float
    w: float = 1.0


class ConstraintSet:
    """Sparse set of pair-distance targets over ``n_atoms`` atoms."""

    def __init__(self, n_atoms, entries):
        if n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        seen = set()
        items = []
        for e in entries:
            c = e if isinstance(e, Constraint) else Constraint(*e)
            i, j = int(c.i), int(c.j)
            if i == j:
                raise ValueError(f"constraint joins atom {i} to itself")
            if not (0 <= i < n_atoms and 0 <= j < n_atoms):
                raise IndexError(f"constraint ({i}, {j}) out of range for {n_atoms} atoms")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate constraint for pair {key}")
            if not (np.isfinite(c.r) and c.r > 0):
                raise ValueError(f"target distance for {key} must be positive and finite")
            if not (np.isfinite(c.w) and c.w > 0):
                raise ValueError(f"weight for {key} must be positive and finite")
            seen.add(key)
            items.append(Constraint(i, j, float(c.r), float(c.w)))
        self.n_atoms = int(n_atoms)
        self.entries = tuple(items)
        self._i = np.array([c.i for c in items], dtype=int)
        self._j = np.array([c.j for c in items], dtype=int)
        self._r2 = np.array([c.r * c.r for c in items])
        self._w = np.array([c.w for c in items])

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return self.n_atoms == other.n_atoms and self.entries == other.entries

    def __repr__(self):
        return f"ConstraintSet(n_atoms={self.n_atoms}, entries={len(self.entries)})"

    def distance_map(self):
        return {(min(c.i, c.j), max(c.i, c.j)): c.r for c in self.entries}

    def with_weights(self, factor):
        return ConstraintSet(self.n_atoms, [Constraint(c.i, c.j, c.r, c.w * factor)
                                            for c in self.entries])


class PerturbationVector:
    __slots__ = ("eps",)

    def __init__(self, eps):
        eps = np.array(eps, dtype=float).reshape(-1)
        if not np.all(np.isfinite(eps)) or np.any(eps < 0):
            raise ValueError("perturbation components must be finite and >= 0")
        eps.setflags(write=False)
        self.eps = eps

    @classmethod
    def uniform(cls, n_atoms, value=DEFAULT_EPS):
        return cls(np.full(3 * n_atoms, value))

    def __len__(self):
        return self.eps.size


def _positions(x, s):
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != 3 * s.n_atoms:
        raise ValueError(f"coordinate vector has {x.size} entries, expected {3 * s.n_atoms}")
    return x.reshape(-1, 3)


def _residuals(pos, s):
    d = pos[s._i] - pos[s._j]
    return d, np.einsum("ij,ij->i", d, d) - s._r2


def stress(x, s):
    pos = _positions(x, s)
    if not len(s):
        return 0.0
    _, res = _residuals(pos, s)
    return float(np.sum(s._w * res * res))


def stress_gradient(x, s):
    pos = _positions(x, s)
    grad = np.zeros_like(pos)
    if len(s):
        d, res = _residuals(pos, s)
        fij = (4.0 * s._w * res)[:, None] * d
        np.add.at(grad, s._i, fij)
        np.add.at(grad, s._j, -fij)
    return grad.reshape(-1)


def _eps_array(eps, x):
    e = eps.eps if isinstance(eps, PerturbationVector) else PerturbationVector(eps).eps
    if e.size != np.size(x):
        raise ValueError(f"perturbation has {e.size} components, coordinates have {np.size(x)}")
    return e


def stress_perturbed(x, s, eps):
    e = _eps_array(eps, x)
    return stress(x, s) - float(np.dot(e, np.asarray(x, dtype=float).reshape(-1)))


def stress_perturbed_gradient(x, s, eps):
    e = _eps_array(eps, x)
    return stress_gradient(x, s) - e


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    distance: float
    target: float

    @property
    def deviation(self):
        return abs(self.distance - self.target)


def check_feasibility(x, s, tol=FEASIBILITY_TOL):
    """Constraints whose realized distance misses the target by more than ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    pos = _positions(x, s)
    out = []
    for c in s.entries:
        dist = float(np.linalg.norm(pos[c.i] - pos[c.j]))
        if abs(dist - c.r) > tol:
            out.append(Violation(c.i, c.j, dist, c.r))
    return out


def triangle_violations(s):
    """Fully constrained triples (i<j<k) that break the triangle inequality."""
    dist = s.distance_map()
    neighbours = {}
    for i, j in dist:
        neighbours.setdefault(i, set()).add(j)
        neighbours.setdefault(j, set()).add(i)
    out = []
    for i, j in sorted(dist):
        for k in sorted(neighbours[i] & neighbours[j]):
            if k <= j:
                continue
            a, b, c = dist[(i, j)], dist[(i, k)], dist[(j, k)]
            longest = max(a, b, c)
            if longest > (a + b + c - longest) + _TRIANGLE_SLACK:
                out.append((i, j, k))
    return out


@dataclass
class EmbedResult:
    x_star: np.ndarray
    objective: float
    stress: float
    violations: list
    converged: bool
    grad_norm: float
    restarts: int
    perturbed: bool
    per_restart: list

    @property
    def feasible(self):
        return not self.violations

    @property
    def positions(self):
        return self.x_star.reshape(-1, 3)


def _center(v):
    p = v.reshape(-1, 3)
    return (p - p.mean(axis=0)).reshape(-1)


def embed(s, eps=None, restarts=20, seed=0, local_opts=None):
    """Embed a constraint set in 3-D by multi-start stress minimization.

    Starts are uniform in a cube of side ``max r_ij``.  With ``eps`` given
    the perturbed stress is minimized instead.  The perturbation term is not
    bounded below along rigid translations, so in that mode the search runs
    on centred coordinates (centroid fixed at the origin) and the reported
    gradient norm is that of the translation-free part.

    Returns the best result over all restarts, with its feasibility report
    at ``FEASIBILITY_TOL``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    local_opts = local_opts or LocalOptOptions()
    n = s.n_atoms
    side = max((c.r for c in s.entries), default=1.0)

    if eps is None:
        def fun(x):
            return stress(x, s), stress_gradient(x, s)
    else:
        e = _eps_array(eps, np.zeros(3 * n))

        def fun(x):
            xc = _center(x)
            return (stress(xc, s) - float(np.dot(e, xc)),
                    _center(stress_gradient(xc, s) - e))

    best = None
    per_restart = []
    for rng in restart_streams(seed, restarts):
        x0 = rng.uniform(0.0, side, size=3 * n)
        if eps is not None:
            x0 = _center(x0)
        try:
            res = minimize_local(fun, x0, local_opts)
        except NonFiniteError as exc:
            logger.debug("embed restart failed: %s", exc)
            per_restart.append(np.inf)
            continue
        per_restart.append(res.f_star)
        # a converged run beats an unconverged one; ties keep the earlier run
        if best is None or (res.converged, -res.f_star) > (best.converged, -best.f_star):
            best = res
    if best is None:
        raise NonFiniteError("every embedding restart failed")
    x_star = _center(best.x_star) if eps is not None else best.x_star
    return EmbedResult(
        x_star=x_star,
        objective=best.f_star,
        stress=stress(x_star, s),
        violations=check_feasibility(x_star, s, FEASIBILITY_TOL),
        converged=best.converged,
        grad_norm=best.grad_norm,
        restarts=restarts,
        perturbed=eps is not None,
        per_restart=per_restart,
    )


def complete_constraints(points, weight=1.0):
    """Constraints for every pair of ``points`` at their true distances."""
    pos = np.asarray(points, dtype=float).reshape(-1, 3)
    entries = [(i, j, float(np.linalg.norm(pos[i] - pos[j])), weight)
               for i, j in itertools.combinations(range(len(pos)), 2)]
    return ConstraintSet(len(pos), entries)
