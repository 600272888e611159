"""Dominance criterion processes and social value evaluation.

The ordering under test compares two distributions of gains and losses
through every nondecreasing value function that weights a loss at least as
heavily as the equal-sized gain.  Checking all such value functions reduces
to a pair of pointwise conditions on the two CDFs, expressed here as
processes over a nonnegative evaluation grid:

* the reflected gap ``m1(x) = F_A(-x) - F_B(-x)``,
* the two-sided gap ``m2(x) = m1(x) + F_A(x) - F_B(x)``,
* their envelope ``t1(x) = (F_A(x) - F_B(x))^+ + F_A(-x) - F_B(-x)``,
  which equals ``max(m1(x), m2(x))`` identically.

Dominance of A over B holds exactly when ``t1 <= 0`` on the whole positive
half-line, equivalently when both coordinates stay nonpositive.  The same
plumbing also supplies a plain CDF-gap process on levels for first-order
dominance checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .ecdf import (
    EmpiricalCdf,
    EvaluationSet,
    Sample,
    StepFunction,
    evaluation_set_from_values,
)


class ValueFunctionError(ValueError):
    """A candidate value function failed one of its defining properties."""


class GridMismatchError(ValueError):
    """An evaluation grid does not cover the inputs it is used with."""


# Default probe grid for value-function property checks: symmetric around 0.
_PROBE_POINTS = np.linspace(-10.0, 10.0, 201)
_FD_STEP = 1e-5
_SIGN_SLACK = 1e-9
_LOSS_AVERSION_SLACK = 1e-6


@dataclass(frozen=True)
class ValueFunction:
    """A value function over gains and losses, with an optional derivative.

    The defining properties are checked on a finite probe grid, so the
    checks are necessarily partial: they can reject a bad function but
    cannot certify a pathological one that misbehaves off the grid.

    Properties checked by :meth:`validate`:

    1. sign: ``eval(x) <= 0`` for ``x < 0``, ``eval(0) == 0``,
       ``eval(x) >= 0`` for ``x > 0``;
    2. monotonicity: nondecreasing along the probe grid;
    3. loss aversion: ``deriv(-x) >= deriv(x)`` for probe ``x > 0``, using
       central finite differences when ``deriv`` is absent.
    """

    eval: Callable[[float], float]
    deriv: Optional[Callable[[float], float]] = None

    def validate(self, probe: np.ndarray | None = None) -> None:
        probe = _PROBE_POINTS if probe is None else np.asarray(probe, dtype=np.float64)
        vals = np.array([self.eval(float(p)) for p in probe])

        neg, pos = probe < 0.0, probe > 0.0
        at_zero = probe == 0.0
        if (
            np.any(vals[neg] > _SIGN_SLACK)
            or np.any(vals[pos] < -_SIGN_SLACK)
            or np.any(np.abs(vals[at_zero]) > _SIGN_SLACK)
        ):
            raise ValueFunctionError(
                "value function failed property 'sign': needs v(x) <= 0 for "
                "x < 0, v(0) = 0 and v(x) >= 0 for x > 0"
            )

        if np.any(np.diff(vals) < -_SIGN_SLACK):
            raise ValueFunctionError(
                "value function failed property 'monotonicity': must be "
                "nondecreasing"
            )

        xs = probe[pos]
        if self.deriv is not None:
            d_gain = np.array([self.deriv(float(x)) for x in xs])
            d_loss = np.array([self.deriv(float(-x)) for x in xs])
        else:
            d_gain = np.array(
                [(self.eval(x + _FD_STEP) - self.eval(x - _FD_STEP)) / (2 * _FD_STEP) for x in xs]
            )
            d_loss = np.array(
                [(self.eval(-x + _FD_STEP) - self.eval(-x - _FD_STEP)) / (2 * _FD_STEP) for x in xs]
            )
        if np.any(d_loss < d_gain - _LOSS_AVERSION_SLACK):
            raise ValueFunctionError(
                "value function failed property 'loss_aversion': needs "
                "v'(-x) >= v'(x) for x > 0"
            )


def named_value_functions() -> dict[str, ValueFunction]:
    """The built-in value functions selectable by name."""
    return {
        "cube": ValueFunction(eval=lambda x: x**3, deriv=lambda x: 3.0 * x**2),
        "signed_cbrt": ValueFunction(
            eval=lambda x: float(np.sign(x)) * abs(x) ** (1.0 / 3.0),
        ),
        "linear": ValueFunction(eval=lambda x: x, deriv=lambda x: 1.0),
    }


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finitely supported distribution used for exact evaluation in tests."""

    locations: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        loc = np.asarray(self.locations, dtype=np.float64)
        mas = np.asarray(self.masses, dtype=np.float64)
        if loc.shape != mas.shape or loc.ndim != 1 or loc.size == 0:
            raise ValueError("locations and masses must be matching nonempty 1-d arrays")
        if np.any(mas <= 0.0):
            raise ValueError("masses must be positive")
        if abs(float(mas.sum()) - 1.0) > 1e-12:
            raise ValueError("masses must sum to 1 within 1e-12")
        order = np.argsort(loc)
        loc, mas = loc[order], mas[order]
        if np.any(np.diff(loc) == 0.0):
            raise ValueError("locations must be distinct")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "masses", mas)
        object.__setattr__(self, "_cum", np.concatenate(([0.0], np.cumsum(mas))))
        loc.setflags(write=False)
        mas.setflags(write=False)

    @classmethod
    def from_pairs(cls, pairs) -> "DiscreteDistribution":
        locations = [p[0] for p in pairs]
        masses = [p[1] for p in pairs]
        return cls(np.asarray(locations), np.asarray(masses))

    def cdf(self, x):
        idx = np.searchsorted(self.locations, x, side="right")
        out = self._cum[idx]
        return float(out) if np.isscalar(x) else out

    def cdf_left(self, x):
        idx = np.searchsorted(self.locations, x, side="left")
        out = self._cum[idx]
        return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class CriterionEval:
    """Criterion processes of a two-sample comparison on a shared grid."""

    grid: EvaluationSet
    t1: StepFunction
    t2_m1: StepFunction
    t2_m2: StepFunction


@dataclass(frozen=True)
class LasdCheck:
    dominates: bool
    violated_at: np.ndarray


def evaluate_svf(dist: DiscreteDistribution, v: ValueFunction, check: bool = True) -> float:
    """Aggregate value sum(v(location) * mass), exact for discrete inputs.

    With ``check`` (the default) the value function's probe-grid properties
    are verified first; pass ``check=False`` to evaluate anyway.
    """
    if check:
        v.validate()
    return float(sum(v.eval(float(l)) * float(m) for l, m in zip(dist.locations, dist.masses)))


def _require_grid_covers(grid: EvaluationSet, fa: EmpiricalCdf, fb: EmpiricalCdf) -> None:
    atoms = np.concatenate((fa.sorted_values, fb.sorted_values))
    positives = np.unique(atoms[atoms > 0.0])
    if positives.size and not np.all(np.isin(positives, grid.points)):
        missing = positives[~np.isin(positives, grid.points)]
        raise GridMismatchError(
            f"grid is missing required breakpoints at positive observations {missing[:5]}"
        )
    if float(np.max(np.abs(atoms))) > grid.x_max:
        raise GridMismatchError("grid x_max does not cover the pooled observation magnitudes")


def _gap_arrays(fa: EmpiricalCdf, fb: EmpiricalCdf, grid: EvaluationSet):
    pos = grid.points
    neg = -pos
    gap = fa.evaluate(pos) - fb.evaluate(pos)
    reflected = fa.evaluate(neg) - fb.evaluate(neg)
    return gap, reflected


def t1_process(fa: EmpiricalCdf, fb: EmpiricalCdf, grid: EvaluationSet) -> StepFunction:
    """Envelope process (F_A(x) - F_B(x))^+ + F_A(-x) - F_B(-x) on the grid.

    The reflected arguments land on probe points of the grid, which produces
    left-limit behavior at sample magnitudes without special casing.  The
    process is identically zero above the grid's x_max.
    """
    _require_grid_covers(grid, fa, fb)
    gap, reflected = _gap_arrays(fa, fb, grid)
    return StepFunction.from_grid(grid.points, np.maximum(gap, 0.0) + reflected)


def t2_process(
    fa: EmpiricalCdf, fb: EmpiricalCdf, grid: EvaluationSet
) -> tuple[StepFunction, StepFunction]:
    """Coordinate processes (m1, m2) with m1 the reflected gap, m2 = m1 + gap."""
    _require_grid_covers(grid, fa, fb)
    gap, reflected = _gap_arrays(fa, fb, grid)
    m1 = StepFunction.from_grid(grid.points, reflected)
    m2 = StepFunction.from_grid(grid.points, reflected + gap)
    return m1, m2


def criterion_eval(fa: EmpiricalCdf, fb: EmpiricalCdf, grid: EvaluationSet) -> CriterionEval:
    """All three criterion processes in one pass over the grid."""
    _require_grid_covers(grid, fa, fb)
    gap, reflected = _gap_arrays(fa, fb, grid)
    return CriterionEval(
        grid=grid,
        t1=StepFunction.from_grid(grid.points, np.maximum(gap, 0.0) + reflected),
        t2_m1=StepFunction.from_grid(grid.points, reflected),
        t2_m2=StepFunction.from_grid(grid.points, reflected + gap),
    )


def _as_cdf_callable(dist):
    """Vectorized CDF evaluation for the input kinds check_lasd_exact accepts."""
    if isinstance(dist, DiscreteDistribution):
        return dist.cdf, dist.locations
    if isinstance(dist, EmpiricalCdf):
        return dist.evaluate, dist.sorted_values
    if callable(dist):
        return dist, None
    raise TypeError(f"cannot interpret {type(dist).__name__} as a CDF")


def check_lasd_exact(fa, fb, grid=None, tol: float = 1e-12) -> LasdCheck:
    """Decide whether A dominates B by evaluating the envelope on a grid.

    ``fa`` and ``fb`` may be :class:`DiscreteDistribution`,
    :class:`EmpiricalCdf`, or plain callables.  For atom-based inputs the
    grid defaults to the probe grid of their pooled atoms, on which the
    envelope attains its supremum; callables require an explicit grid (for
    smooth CDFs a fine uniform grid).

    Returns the decision plus every grid point where the envelope exceeds
    ``tol``.
    """
    cdf_a, atoms_a = _as_cdf_callable(fa)
    cdf_b, atoms_b = _as_cdf_callable(fb)
    if grid is None:
        if atoms_a is None or atoms_b is None:
            raise ValueError("callable CDFs need an explicit evaluation grid")
        points = evaluation_set_from_values(np.concatenate((atoms_a, atoms_b))).points
    elif isinstance(grid, EvaluationSet):
        points = grid.points
    else:
        points = np.asarray(grid, dtype=np.float64)
    gap = np.asarray(cdf_a(points)) - np.asarray(cdf_b(points))
    reflected = np.asarray(cdf_a(-points)) - np.asarray(cdf_b(-points))
    envelope = np.maximum(gap, 0.0) + reflected
    violated = points[envelope > tol]
    return LasdCheck(dominates=violated.size == 0, violated_at=violated)


def mean_gap(fa: Sample, fb: Sample) -> float:
    """Mean of A minus mean of B.

    Dominance of A over B implies a nonnegative mean gap, so a negative
    value is direct evidence against the null; reported as a diagnostic.
    """
    return float(np.mean(fa.values) - np.mean(fb.values))


def fosd_process(ga: EmpiricalCdf, gb: EmpiricalCdf, grid_points) -> StepFunction:
    """Plain CDF gap ga - gb on a grid of levels, for first-order dominance.

    Positive values mean A's CDF lies above B's, i.e. evidence against A
    first-order dominating B.
    """
    points = np.asarray(grid_points, dtype=np.float64)
    lo = min(ga.min, gb.min)
    hi = max(ga.max, gb.max)
    if points[0] > lo or points[-1] < hi:
        raise GridMismatchError("grid must span the pooled support of both samples")
    return StepFunction.from_grid(points, ga.evaluate(points) - gb.evaluate(points))
