"""
Lennard-Jones and 12-10 hydrogen-bond pair potentials.

Cluster work uses reduced units (epsilon = sigma = 1) and a flat coordinate
vector ``x`` of length 3N, atom ``i`` occupying ``x[3*i:3*i+3]``.  In those
units the cluster energy is

    f(x) = 4 * sum_{i<j} (tau_ij**-6 - tau_ij**-3),   tau_ij = |X_i - X_j|**2

The same pair interaction can be written as ``A/r**12 - B/r**6`` and the
hydrogen-bond interaction as ``C/r**12 - D/r**10``; converters between the
parameter forms live here too.
"""
from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "SINGULAR_TAU",
    "WELL_FACTOR",
    "SingularityError",
    "Configuration",
    "PairPotentialParams",
    "ABParams",
    "HBParams",
    "lj_pair_energy",
    "lj_energy",
    "lj_gradient",
    "lj_energy_and_gradient",
    "ab_from_eps_sigma",
    "eps_sigma_from_ab",
    "ab_energy",
    "hb_energy",
    "hb_params_from_depth",
    "total_energy",
    "total_energy_and_gradient",
]

#: squared distances below this are treated as coincident atoms
SINGULAR_TAU = 1e-30

#: ratio between the well-bottom distance and sigma
WELL_FACTOR = 2.0 ** (1.0 / 6.0)


class SingularityError(ValueError):
    """Two atoms coincide (or a pair distance is non-positive)."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class Configuration:
    """Ordered set of N points in 3-space.

    Coordinates are stored as a read-only ``(N, 3)`` float array; ``x`` gives
    the flat length-3N view used by the optimizers.
    """

    __slots__ = ("_pos",)

    def __init__(self, coords):
        pos = np.array(coords, dtype=float)
        if pos.ndim == 1:
            if pos.size % 3:
                raise ValueError("flat coordinate vector length must be a multiple of 3")
            pos = pos.reshape(-1, 3)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError("coordinates must have shape (N, 3) or (3N,)")
        if pos.shape[0] < 1:
            raise ValueError("a configuration needs at least one atom")
        if not np.all(np.isfinite(pos)):
            raise ValueError("coordinates must be finite")
        pos.setflags(write=False)
        self._pos = pos

    @property
    def positions(self):
        return self._pos

    @property
    def x(self):
        return self._pos.reshape(-1)

    @property
    def n_atoms(self):
        return self._pos.shape[0]

    def __len__(self):
        return self._pos.shape[0]

    def squared_distances(self):
        """Condensed vector of tau_ij for i<j (row-major over i)."""
        i, j = np.triu_indices(self.n_atoms, k=1)
        d = self._pos[i] - self._pos[j]
        return np.einsum("ij,ij->i", d, d)

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return np.array_equal(self._pos, other._pos)

    def __hash__(self):
        return hash(self._pos.tobytes())

    def __repr__(self):
        return f"Configuration(n_atoms={self.n_atoms})"


@dataclass(frozen=True)
class PairPotentialParams:
    epsilon: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.epsilon > 0 and np.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def r_min(self):
        """Distance of the well bottom, 2**(1/6) * sigma."""
        return WELL_FACTOR * self.sigma


@dataclass(frozen=True)
class ABParams:
    """Coefficients of ``a/r**12 - b/r**6``."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and np.isfinite(self.a)):
            raise ValueError(f"a must be positive, got {self.a}")
        if not (self.b > 0 and np.isfinite(self.b)):
            raise ValueError(f"b must be positive, got {self.b}")

    @property
    def r_min(self):
        return (2.0 * self.a / self.b) ** (1.0 / 6.0)

    @property
    def depth(self):
        return self.b * self.b / (4.0 * self.a)


@dataclass(frozen=True)
class HBParams:
    """Coefficients of ``c/r**12 - d/r**10``."""

    c: float
    d: float

    def __post_init__(self):
        if not (self.c > 0 and np.isfinite(self.c)):
            raise ValueError(f"c must be positive, got {self.c}")
        if not (self.d > 0 and np.isfinite(self.d)):
            raise ValueError(f"d must be positive, got {self.d}")

    @property
    def r_min(self):
        return np.sqrt(6.0 * self.c / (5.0 * self.d))


def _as_positions(config):
    if isinstance(config, Configuration):
        return config.positions
    return Configuration(config).positions


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise SingularityError(f"pair distance must be positive, got {r}")
    return r


def lj_pair_energy(r, params=PairPotentialParams()):
    """4 eps [(sigma/r)**12 - (sigma/r)**6]; accepts scalars or arrays."""
    r = _check_r(r)
    # same tau arithmetic as the cluster sum so a lone pair agrees bit for bit
    u = r / params.sigma
    tau = u * u
    inv3 = 1.0 / (tau * tau * tau)
    e = 4.0 * params.epsilon * (inv3 * inv3 - inv3)
    return float(e) if e.ndim == 0 else e


def _dense_pairs(pos):
    d = pos[:, None, :] - pos[None, :, :]
    tau = np.einsum("ijk,ijk->ij", d, d)
    n = pos.shape[0]
    np.fill_diagonal(tau, np.inf)
    if n > 1 and tau.min() < SINGULAR_TAU:
        i, j = sorted(np.unravel_index(int(np.argmin(tau)), tau.shape))
        raise SingularityError(f"atoms {i} and {j} coincide", pair=(int(i), int(j)))
    return d, tau


def lj_energy_and_gradient(config):
    """Reduced-unit cluster energy and its gradient as a flat 3N vector."""
    pos = _as_positions(config)
    d, tau = _dense_pairs(pos)
    inv3 = 1.0 / (tau * tau * tau)
    # every pair appears twice in the dense matrix; fsum keeps the result
    # independent of atom order
    energy = 2.0 * math.fsum((inv3 * inv3 - inv3).ravel())
    # d f / d X_i for one pair: 8 (3 tau**-4 - 6 tau**-7) (X_i - X_j)
    coef = 8.0 * (3.0 * inv3 - 6.0 * inv3 * inv3) / tau
    grad = np.einsum("ij,ijk->ik", coef, d)
    return energy, grad.reshape(-1)


def lj_energy(config):
    return lj_energy_and_gradient(config)[0]


def lj_gradient(config):
    return lj_energy_and_gradient(config)[1]


def ab_from_eps_sigma(params):
    s6 = params.sigma ** 6
    return ABParams(a=4.0 * params.epsilon * s6 * s6, b=4.0 * params.epsilon * s6)


def eps_sigma_from_ab(params):
    return PairPotentialParams(epsilon=params.b * params.b / (4.0 * params.a),
                               sigma=(params.a / params.b) ** (1.0 / 6.0))


def ab_energy(r, params):
    r = _check_r(r)
    r6 = r ** -6
    e = params.a * r6 * r6 - params.b * r6
    return float(e) if e.ndim == 0 else e


def hb_energy(r, params):
    r = _check_r(r)
    r2 = r ** -2
    r10 = r2 ** 5
    e = params.c * r10 * r2 - params.d * r10
    return float(e) if e.ndim == 0 else e


def hb_params_from_depth(depth, r_min):
    """12-10 constants whose unique minimum is ``-depth`` at ``r_min``."""
    if not (depth > 0 and np.isfinite(depth)):
        raise ValueError(f"depth must be positive, got {depth}")
    if not (r_min > 0 and np.isfinite(r_min)):
        raise ValueError(f"r_min must be positive, got {r_min}")
    return HBParams(c=5.0 * depth * r_min ** 12, d=6.0 * depth * r_min ** 10)


def _pair_arrays(pairs, n_atoms, kind):
    if not pairs:
        return None
    idx = np.array([(p[0], p[1]) for p in pairs], dtype=int).reshape(-1, 2)
    if idx.min() < 0 or idx.max() >= n_atoms:
        bad = next(p for p in pairs if not (0 <= p[0] < n_atoms and 0 <= p[1] < n_atoms))
        raise IndexError(f"{kind} pair {tuple(bad[:2])} out of range for {n_atoms} atoms")
    if np.any(idx[:, 0] == idx[:, 1]):
        raise ValueError(f"{kind} pair joins an atom to itself")
    return idx


def total_energy_and_gradient(config, vdw_pairs=(), hb_pairs=()):
    """Sum of A/B terms over ``vdw_pairs`` and C/D terms over ``hb_pairs``.

    Each pair list holds ``(i, j, params)`` triples with ``ABParams`` or
    ``HBParams`` respectively.
    """
    pos = _as_positions(config)
    n = pos.shape[0]
    energy = 0.0
    grad = np.zeros_like(pos)
    for pairs, kind in ((vdw_pairs, "vdw"), (hb_pairs, "hb")):
        idx = _pair_arrays(pairs, n, kind)
        if idx is None:
            continue
        d = pos[idx[:, 0]] - pos[idx[:, 1]]
        tau = np.einsum("ij,ij->i", d, d)
        if tau.min() < SINGULAR_TAU:
            k = int(np.argmin(tau))
            pair = (int(idx[k, 0]), int(idx[k, 1]))
            raise SingularityError(f"atoms {pair[0]} and {pair[1]} coincide", pair=pair)
        inv2 = 1.0 / tau
        if kind == "vdw":
            a = np.array([p[2].a for p in pairs])
            b = np.array([p[2].b for p in pairs])
            inv6 = inv2 ** 3
            energy += float(np.sum(a * inv6 * inv6 - b * inv6))
            # dE/dtau = -6 a tau**-7 + 3 b tau**-4
            dedtau = (-6.0 * a * inv6 * inv6 + 3.0 * b * inv6) * inv2
        else:
            c = np.array([p[2].c for p in pairs])
            dd = np.array([p[2].d for p in pairs])
            inv10 = inv2 ** 5
            energy += float(np.sum(c * inv10 * inv2 - dd * inv10))
            dedtau = (-6.0 * c * inv10 * inv2 + 5.0 * dd * inv10) * inv2
        fij = (2.0 * dedtau)[:, None] * d
        np.add.at(grad, idx[:, 0], fij)
        np.add.at(grad, idx[:, 1], -fij)
    return energy, grad.reshape(-1)


def total_energy(config, vdw_pairs=(), hb_pairs=()):
    return total_energy_and_gradient(config, vdw_pairs, hb_pairs)[0]
