"""
Limited-memory BFGS with a backtracking Armijo line search.

The driver works on any smooth objective given as a callable
``fun(x) -> (f, grad)``.  Energies, distance-geometry stress and the
perturbed stress all go through the same code path.
"""
from dataclasses import dataclass, field
import logging

import numpy as np

from .potential import SingularityError

__all__ = [
    "LocalOptOptions",
    "LocalOptResult",
    "LineSearchError",
    "NonFiniteError",
    "line_search",
    "minimize_local",
]

logger = logging.getLogger(__name__)

ARMIJO_C1 = 1e-4
MIN_STEP = 1e-16
_SHRINK = 0.5
# relative size of objective changes that are indistinguishable from rounding
_ROUNDOFF = 1e-13


@dataclass(frozen=True)
class LocalOptOptions:
    grad_tol: float = 1e-8
    max_iters: int = 10_000
    initial_step: float = 1.0
    memory: int = 10
    # cap on the infinity norm of a single displacement; None means no cap
    max_step: float = None

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not (isinstance(self.max_iters, (int, np.integer)) and 0 < self.max_iters <= 10 ** 7):
            raise ValueError("max_iters must be an integer in [1, 1e7]")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if not (isinstance(self.memory, (int, np.integer)) and self.memory >= 1):
            raise ValueError("memory must be an integer >= 1")
        if self.max_step is not None and not self.max_step > 0:
            raise ValueError("max_step must be positive or None")


@dataclass
class LocalOptResult:
    x_star: np.ndarray
    f_star: float
    grad_norm: float
    iters: int
    converged: bool
    message: str = ""
    history: list = field(default_factory=list, repr=False)


class LineSearchError(RuntimeError):
    """No step above ``MIN_STEP`` satisfied the decrease condition."""


class NonFiniteError(FloatingPointError):
    """The objective or its gradient stopped being finite.

    ``x``, ``f`` and ``grad`` hold the last iterate where everything was
    finite.
    """

    def __init__(self, msg, x=None, f=None, grad=None):
        super().__init__(msg)
        self.x = x
        self.f = f
        self.grad = grad


def _evaluate(fun, x):
    f, g = fun(x)
    return float(f), np.asarray(g, dtype=float)


def _backtrack(fun, x, direction, f_x, slope, step=1.0, g_max=None):
    if not slope < 0:
        raise ValueError(f"not a descent direction (slope={slope})")
    floor = _ROUNDOFF * max(1.0, abs(f_x))
    while step >= MIN_STEP:
        x_new = x + step * direction
        if np.array_equal(x_new, x):
            # the step vanished in rounding; smaller ones will too
            raise LineSearchError("no acceptable step before the displacement "
                                  "rounded to zero")
        try:
            f_new, g_new = _evaluate(fun, x_new)
        except SingularityError:
            f_new = np.inf
        if np.isfinite(f_new):
            expected = ARMIJO_C1 * step * slope
            # difference form: f_x + expected may round back to f_x
            if f_new - f_x <= expected:
                return step, x_new, f_new, g_new
            # below rounding level the decrease test cannot see progress; the
            # driver (which passes g_max) may take a step that does not raise f
            # and strictly shrinks the gradient
            if (g_max is not None and -expected <= floor and f_new <= f_x
                    and np.max(np.abs(g_new)) < g_max):
                return step, x_new, f_new, g_new
        step *= _SHRINK
    raise LineSearchError(f"no acceptable step above {MIN_STEP:g}")


def line_search(objective, x, direction, f_x, slope, step=1.0):
    """Backtrack from ``step`` until the Armijo condition holds (c1 = 1e-4).

    ``objective`` is ``fun(x) -> (f, grad)`` and ``slope`` the directional
    derivative ``grad(x) . direction``, which must be negative.  Raises
    ``LineSearchError`` when the step underflows ``MIN_STEP``.
    """
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    return _backtrack(objective, x, direction, f_x, slope, step)[0]


def _two_loop(g, pairs):
    q = g.copy()
    alpha = []
    for s, y, rho in reversed(pairs):
        a = rho * float(s @ q)
        alpha.append(a)
        q -= a * y
    s, y, _ = pairs[-1]
    q *= float(s @ y) / float(y @ y)
    for (s, y, rho), a in zip(pairs, reversed(alpha)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return -q


def minimize_local(objective, x0, opts=None):
    """Minimize ``objective`` from ``x0`` with L-BFGS.

    Parameters
    ----------
    objective : callable
        ``fun(x) -> (f, grad)`` for a flat float vector ``x``.
    x0 : array_like
        Starting point.
    opts : LocalOptOptions, optional

    Returns
    -------
    LocalOptResult
        ``converged`` is True when the infinity norm of the gradient reached
        ``opts.grad_tol``.  Budget exhaustion and an unrecoverable line search
        both return ``converged=False`` with a diagnostic ``message``.

    Raises
    ------
    NonFiniteError
        If the objective or gradient is not finite at ``x0`` or at an
        accepted iterate.
    """
    opts = opts or LocalOptOptions()
    x = np.array(x0, dtype=float).reshape(-1)
    f, g = _evaluate(objective, x)
    if not (np.isfinite(f) and np.all(np.isfinite(g))):
        raise NonFiniteError("objective not finite at the starting point", x=None)
    history = [f]
    pairs = []
    gnorm = float(np.max(np.abs(g))) if g.size else 0.0
    iters = 0
    message = ""

    while gnorm > opts.grad_tol:
        if iters >= opts.max_iters:
            message = f"iteration budget of {opts.max_iters} exhausted"
            break
        fallback = not pairs
        while True:
            if fallback:
                d = -g
                step = opts.initial_step / gnorm
            else:
                d = _two_loop(g, pairs)
                step = 1.0
            slope = float(np.dot(g, d))
            if not slope < 0:
                # quasi-Newton direction lost descent, restart from the gradient
                pairs.clear()
                fallback = True
                continue
            if opts.max_step is not None:
                dmax = float(np.max(np.abs(d)))
                step = min(step, opts.max_step / dmax)
            try:
                step, x_new, f_new, g_new = _backtrack(objective, x, d, f, slope, step, gnorm)
                break
            except LineSearchError as exc:
                if fallback:
                    message = f"line search failed along steepest descent: {exc}"
                    break
                logger.debug("line search failed at iter %d, retrying steepest descent", iters)
                pairs.clear()
                fallback = True
        if message:
            break
        if not np.all(np.isfinite(g_new)):
            raise NonFiniteError(f"gradient not finite at iteration {iters + 1}",
                                 x=x.copy(), f=f, grad=g.copy())
        s = x_new - x
        y = g_new - g
        sy = float(np.dot(s, y))
        if sy > 0 and np.isfinite(1.0 / sy):
            pairs.append((s, y, 1.0 / sy))
            if len(pairs) > opts.memory:
                del pairs[0]
        else:
            # negative curvature: the stored pairs describe a different region
            # and would keep the steps tiny, so start over from the gradient
            pairs.clear()
        x, f, g = x_new, f_new, g_new
        gnorm = float(np.max(np.abs(g)))
        iters += 1
        history.append(f)

    converged = gnorm <= opts.grad_tol
    return LocalOptResult(x_star=x, f_star=f, grad_norm=gnorm, iters=iters,
                          converged=converged, message=message, history=history)
