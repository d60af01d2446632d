"""
Basin hopping and plain multi-start search for reduced LJ cluster minima.

Every restart draws from its own random stream, spawned from the user seed
with :class:`numpy.random.SeedSequence`, so the report does not depend on the
order restarts run in or on how many worker processes they are spread over.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .localopt import LocalOptOptions, NonFiniteError, minimize_local
from .potential import Configuration, lj_energy, lj_energy_and_gradient

__all__ = [
    "BasinHopOptions",
    "OptimizerReport",
    "PlacementError",
    "random_configuration",
    "perturb",
    "basin_hop",
    "multi_start",
    "restart_streams",
]

logger = logging.getLogger(__name__)

MIN_START_DISTANCE = 0.5
_PLACEMENT_ATTEMPTS = 100
# energies closer than this count as the same minimum; the earlier one is kept
TIE_TOL = 1e-12


class PlacementError(RuntimeError):
    pass


@dataclass(frozen=True)
class BasinHopOptions:
    n_atoms: int
    hops: int = 1000
    restarts: int = 10
    perturb_magnitude: float = 0.35
    temperature: float = 0.8
    seed: int = 0
    local_opts: LocalOptOptions = field(default_factory=LocalOptOptions)

    def __post_init__(self):
        if self.n_atoms < 2:
            raise ValueError("basin hopping needs n_atoms >= 2")
        if self.hops < 1:
            raise ValueError("hops must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.perturb_magnitude > 0:
            raise ValueError("perturb_magnitude must be positive")
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")


@dataclass
class OptimizerReport:
    best_energy: float
    best_config: Configuration
    hops_taken: int
    accepted: int
    restarts_used: int
    per_restart_best: list
    failed: int = 0

    def to_dict(self):
        return {
            "best_energy": self.best_energy,
            "best_config": self.best_config.positions.tolist(),
            "hops_taken": self.hops_taken,
            "accepted": self.accepted,
            "restarts_used": self.restarts_used,
            "per_restart_best": list(self.per_restart_best),
            "failed": self.failed,
        }


def restart_streams(seed, restarts):
    """One independent generator per restart, fixed by ``seed`` alone.

    Restart 0 uses ``seed`` directly; the others use children spawned from
    it, so a one-restart run matches ``default_rng(seed)``.
    """
    root = np.random.SeedSequence(seed)
    seqs = [root] + root.spawn(restarts - 1)
    return [np.random.default_rng(s) for s in seqs]


def random_configuration(n_atoms, seed):
    """Uniform random atoms in a cube of side ``1.2 * n_atoms**(1/3)``.

    No two atoms end up closer than 0.5; an offending atom is redrawn up to
    100 times.  ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    rng = np.random.default_rng(seed)
    side = 1.2 * n_atoms ** (1.0 / 3.0)
    pos = np.empty((n_atoms, 3))
    min_d2 = MIN_START_DISTANCE ** 2
    for i in range(n_atoms):
        for _ in range(_PLACEMENT_ATTEMPTS):
            p = rng.uniform(0.0, side, size=3)
            if i == 0 or np.min(np.sum((pos[:i] - p) ** 2, axis=1)) >= min_d2:
                pos[i] = p
                break
        else:
            raise PlacementError(f"could not place atom {i} after {_PLACEMENT_ATTEMPTS} attempts")
    return Configuration(pos)


def perturb(config, magnitude, rng):
    """Displace every coordinate by U(-magnitude, magnitude); returns a new config."""
    if not magnitude > 0:
        raise ValueError("magnitude must be positive")
    pos = config.positions
    return Configuration(pos + rng.uniform(-magnitude, magnitude, size=pos.shape))


def _local(x0, local_opts):
    try:
        res = minimize_local(lj_energy_and_gradient, x0, local_opts)
    except (NonFiniteError, ValueError) as exc:
        logger.debug("local minimization failed: %s", exc)
        return None
    return res if res.converged else None


@dataclass
class _RestartOutcome:
    best_energy: float
    best_x: np.ndarray
    hops: int
    accepted: int
    failed: int
    trace: list


def _hop_restart(n_atoms, hops, magnitude, temperature, local_opts, rng):
    failed = 0
    current = None
    # the starting minimum must itself be a converged local minimum
    for _ in range(_PLACEMENT_ATTEMPTS):
        current = _local(random_configuration(n_atoms, rng).x, local_opts)
        if current is not None:
            break
        failed += 1
    if current is None:
        raise PlacementError("no converged starting minimum")
    best_f, best_x = current.f_star, current.x_star
    trace = [best_f]
    accepted = 0
    for _ in range(hops):
        trial_cfg = perturb(Configuration(current.x_star), magnitude, rng)
        trial = _local(trial_cfg.x, local_opts)
        # drawn unconditionally so the stream does not depend on failures
        u = rng.random()
        if trial is None:
            failed += 1
            trace.append(best_f)
            continue
        delta = trial.f_star - current.f_star
        if delta <= 0 or u < math.exp(-delta / temperature):
            current = trial
            accepted += 1
        if trial.f_star < best_f - TIE_TOL:
            best_f, best_x = trial.f_star, trial.x_star
        trace.append(best_f)
    return _RestartOutcome(best_f, best_x, hops, accepted, failed, trace)


def _single_start(n_atoms, local_opts, rng):
    failed = 0
    for _ in range(_PLACEMENT_ATTEMPTS):
        res = _local(random_configuration(n_atoms, rng).x, local_opts)
        if res is not None:
            return _RestartOutcome(res.f_star, res.x_star, 0, 0, failed, [res.f_star])
        failed += 1
    raise PlacementError("no converged local minimum from random starts")


def _run_restarts(worker, args_list, workers):
    if workers is None or workers <= 1:
        return [worker(*args) for args in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker, *args) for args in args_list]
        return [f.result() for f in futures]


def _reduce(outcomes):
    best = None
    for out in outcomes:
        if best is None or out.best_energy < best.best_energy - TIE_TOL:
            best = out
    cfg = Configuration(best.best_x)
    return OptimizerReport(
        best_energy=lj_energy(cfg),
        best_config=cfg,
        hops_taken=sum(o.hops for o in outcomes),
        accepted=sum(o.accepted for o in outcomes),
        restarts_used=len(outcomes),
        per_restart_best=[o.best_energy for o in outcomes],
        failed=sum(o.failed for o in outcomes),
    )


def basin_hop(opts, workers=None, trace=None):
    """Basin hopping with Metropolis acceptance, repeated over independent restarts.

    Each restart minimizes a random configuration, then performs
    ``opts.hops`` perturb-and-minimize steps.  An uphill hop of ``df`` is
    accepted with probability ``exp(-df / temperature)``.  Hops whose local
    minimization fails are discarded and counted in ``report.failed``.

    Pass a list as ``trace`` to collect the running best energy of every
    restart (one list per restart).
    """
    streams = restart_streams(opts.seed, opts.restarts)
    args = [(opts.n_atoms, opts.hops, opts.perturb_magnitude, opts.temperature,
             opts.local_opts, rng) for rng in streams]
    outcomes = _run_restarts(_hop_restart, args, workers)
    if trace is not None:
        trace.extend(o.trace for o in outcomes)
    return _reduce(outcomes)


def multi_start(n_atoms, restarts, seed, local_opts=None, workers=None):
    """Best of ``restarts`` local minimizations from random configurations."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    local_opts = local_opts or LocalOptOptions()
    args = [(n_atoms, local_opts, rng) for rng in restart_streams(seed, restarts)]
    return _reduce(_run_restarts(_single_start, args, workers))
