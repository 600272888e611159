"""Distribution-free bounds for treatment-effect CDFs and their criterion.

With only the marginal CDFs of a level under policy k and under the status
quo, the CDF of the individual change is not identified, but it is bracketed
pointwise by the classical sharp envelopes

* lower: ``L(x) = max(0, sup_u(G_treat(u) - G_control((u - x)^-)))``
* upper: ``U(x) = 1 + min(0, inf_u(G_treat(u) - G_control(u - x)))``

For step-function marginals both extrema are attained on a finite candidate
set (the treatment atoms for the supremum, the shifted control atoms for
the infimum), so the plug-in bounds here are exact, not grid approximations.
The left limit inside the lower bound matters only for atoms; it is what
makes a degenerate pair (identical constant samples) produce the unit step
at zero instead of a vacuous bound.

The partially-identified dominance criterion combines the bounds of both
policies into a single process over nonnegative x,

    ``t3(x) = L_A(-x) + L_A(x) - U_B(-x) - U_B(x)``,

computed via the four-supremum expansion.  The necessary dominance
condition fails where ``t3 > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ecdf import DEFAULT_EPS, EmpiricalCdf, Sample, StepFunction

_BOUND_TOL = 1e-12


@dataclass(frozen=True)
class Grid2D:
    """Inner optimization grid (u) and nonnegative outer grid (x).

    ``u_points`` carries pooled observations plus a probe just left of each
    one, so grid maxima of CDF differences pick up both the jump values and
    the open-segment values.  Needed for analytic inputs and for the
    bootstrap machinery; the plug-in bounds on empirical inputs do not use
    it.
    """

    u_points: np.ndarray
    x_points: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u_points, dtype=np.float64)
        x = np.asarray(self.x_points, dtype=np.float64)
        if u.ndim != 1 or u.size == 0 or np.any(np.diff(u) <= 0):
            raise ValueError("u_points must be nonempty and strictly increasing")
        if x.ndim != 1 or x.size == 0 or np.any(np.diff(x) <= 0) or x[0] < 0.0:
            raise ValueError("x_points must be nonnegative and strictly increasing")
        object.__setattr__(self, "u_points", u)
        object.__setattr__(self, "x_points", x)
        u.setflags(write=False)
        x.setflags(write=False)


def build_grid2d(samples, n_x: int = 512, eps: float | None = None) -> Grid2D:
    """Default grids for a (control, A, B) triple of samples.

    u: pooled observations and left probes.  x: ``n_x`` uniform points on
    [0, x_max] where x_max is the largest possible treatment-control
    difference magnitude across both policy samples.
    """
    if len(samples) != 3:
        raise ValueError("expected exactly three samples: control, A, B")
    control, sample_a, sample_b = samples
    pooled = np.concatenate([np.asarray(s.values, dtype=np.float64) for s in samples])
    offsets = DEFAULT_EPS * np.maximum(1.0, np.abs(pooled))
    u_points = np.unique(np.concatenate((pooled, pooled - offsets)))
    hi = max(sample_a.values[-1], sample_b.values[-1]) - control.values[0]
    lo = control.values[-1] - min(sample_a.values[0], sample_b.values[0])
    x_max = max(hi, lo, DEFAULT_EPS)
    if n_x < 2:
        raise ValueError("n_x must be at least 2")
    return Grid2D(u_points=u_points, x_points=np.linspace(0.0, x_max, int(n_x)))


@dataclass(frozen=True)
class BoundPair:
    """Lower/upper bound functions of one policy, on a shared x grid."""

    lower: StepFunction
    upper: StepFunction
    source: tuple[str, str]

    def __post_init__(self) -> None:
        lo, hi = self.lower.values, self.upper.values
        if lo.shape != hi.shape or np.any(self.lower.breakpoints != self.upper.breakpoints):
            raise ValueError("lower and upper must share one breakpoint grid")
        if np.any(lo < -_BOUND_TOL) or np.any(hi > 1.0 + _BOUND_TOL) or np.any(lo > hi + _BOUND_TOL):
            raise ValueError("bounds must satisfy 0 <= lower <= upper <= 1")
        if np.any(np.diff(lo) < -_BOUND_TOL) or np.any(np.diff(hi) < -_BOUND_TOL):
            raise ValueError("bound functions must be nondecreasing in x")


def _lower_exact(g_treat: EmpiricalCdf, g_control: EmpiricalCdf, x: np.ndarray) -> np.ndarray:
    # sup attained at treatment atoms; left limit on the control term.
    atoms = g_treat.sorted_values
    treat_at = np.arange(1, g_treat.n + 1) / g_treat.n  # G_treat at its own atoms
    cand = treat_at[:, None] - g_control.left_limit(atoms[:, None] - x[None, :])
    return np.maximum(0.0, cand.max(axis=0))


def _upper_exact(g_treat: EmpiricalCdf, g_control: EmpiricalCdf, x: np.ndarray) -> np.ndarray:
    # inf attained at shifted control atoms; plain evaluation on both terms.
    atoms = g_control.sorted_values
    control_at = np.arange(1, g_control.n + 1) / g_control.n
    cand = g_treat.evaluate(atoms[:, None] + x[None, :]) - control_at[:, None]
    return 1.0 + np.minimum(0.0, cand.min(axis=0))


def _dense_extremum(treat_fn, control_fn, x: np.ndarray, u: np.ndarray, which: str) -> np.ndarray:
    # chunk over x: the (n_u, n_x) candidate table can be huge on fine grids
    treat_u = np.asarray(treat_fn(u), dtype=np.float64)[:, None]
    chunk = max(1, (1 << 22) // u.size)
    out = np.empty(x.size)
    reduce = np.max if which == "lower" else np.min
    for start in range(0, x.size, chunk):
        stop = min(start + chunk, x.size)
        cand = treat_u - np.asarray(control_fn(u[:, None] - x[None, start:stop]))
        out[start:stop] = reduce(cand, axis=0)
    return out


def _lower_dense(treat_fn, control_fn, x: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, _dense_extremum(treat_fn, control_fn, x, u, "lower"))


def _upper_dense(treat_fn, control_fn, x: np.ndarray, u: np.ndarray) -> np.ndarray:
    return 1.0 + np.minimum(0.0, _dense_extremum(treat_fn, control_fn, x, u, "upper"))


def _as_fn(g):
    return g.evaluate if isinstance(g, EmpiricalCdf) else g


def _bound_many(g_treat, g_control, x: np.ndarray, grid: Grid2D | None, which: str) -> np.ndarray:
    empirical = isinstance(g_treat, EmpiricalCdf) and isinstance(g_control, EmpiricalCdf)
    if empirical:
        f = _lower_exact if which == "lower" else _upper_exact
        out = f(g_treat, g_control, x)
    else:
        if grid is None:
            raise ValueError("analytic CDF inputs need a Grid2D with u_points")
        f = _lower_dense if which == "lower" else _upper_dense
        out = f(_as_fn(g_treat), _as_fn(g_control), x, grid.u_points)
    return np.clip(out, 0.0, 1.0)


def makarov_lower(g_treat, g_control, x, grid: Grid2D | None = None):
    """Sharp lower bound on P(change <= x); exact for empirical marginals.

    Analytic (callable) marginals are optimized over ``grid.u_points``
    instead, with accuracy set by the grid density.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = _bound_many(g_treat, g_control, xs, grid, "lower")
    return float(out[0]) if np.isscalar(x) else out


def makarov_upper(g_treat, g_control, x, grid: Grid2D | None = None):
    """Sharp upper bound on P(change <= x); exact for empirical marginals."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = _bound_many(g_treat, g_control, xs, grid, "upper")
    return float(out[0]) if np.isscalar(x) else out


def bound_functions(g_treat, g_control, x_points, grid: Grid2D | None = None,
                    source: tuple[str, str] = ("treat", "control")) -> BoundPair:
    """Both bounds evaluated over a (typically symmetric) grid of x values."""
    xs = np.asarray(x_points, dtype=np.float64)
    lower = _bound_many(g_treat, g_control, xs, grid, "lower")
    upper = _bound_many(g_treat, g_control, xs, grid, "upper")
    return BoundPair(
        lower=StepFunction.from_grid(xs, lower),
        upper=StepFunction.from_grid(xs, upper),
        source=source,
    )


def t3_process(g0, ga, gb, grid: Grid2D) -> StepFunction:
    """Partially-identified criterion on grid.x_points.

    Computed as ``L_A(-x) + L_A(x) - U_B(-x) - U_B(x)`` through the same
    bound evaluators as :func:`makarov_lower` / :func:`makarov_upper`: exact
    suprema for empirical marginals, dense u-grid otherwise.  Values are in
    [-2, 0] wherever the necessary dominance condition holds and positive
    where it fails; the process vanishes beyond the pooled difference range.
    """
    x = grid.x_points
    la_neg = _bound_many(ga, g0, -x, grid, "lower")
    la_pos = _bound_many(ga, g0, x, grid, "lower")
    ub_neg = _bound_many(gb, g0, -x, grid, "upper")
    ub_pos = _bound_many(gb, g0, x, grid, "upper")
    return StepFunction.from_grid(x, la_neg + la_pos - ub_neg - ub_pos)


def status_quo_bound_check(g0, ga, grid: Grid2D) -> dict:
    """Diagnostics for comparing policy A against the no-change status quo.

    sufficient_holds: the upper bound at every -x (x in the grid) is zero,
    which forces dominance over the status quo.  necessary_holds: the lower
    bound at every -x is zero, which dominance requires.  Both are checked
    on the caller's x grid; note an empirical marginal pair has a positive
    lower bound at x = 0 (the largest atom mass), so grids for the
    necessary check typically start above 0.
    """
    x = grid.x_points
    upper_neg = _bound_many(ga, g0, -x, grid, "upper")
    lower_neg = _bound_many(ga, g0, -x, grid, "lower")
    return {
        "sufficient_holds": bool(np.max(upper_neg) <= _BOUND_TOL),
        "necessary_holds": bool(np.max(lower_neg) <= _BOUND_TOL),
    }
