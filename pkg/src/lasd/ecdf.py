"""Empirical distribution functions and step-function plumbing.

Everything downstream (criterion processes, bound functions, bootstrap
deviations) is piecewise constant, so this module fixes the three shared
representations once:

* :class:`Sample` labelled, sorted observations,
* :class:`EmpiricalCdf` right-continuous evaluation plus left limits,
* :class:`StepFunction` breakpoint/value pairs with exact integration of
  the squared positive part.

It also builds the nonnegative evaluation grid on which the criterion
processes attain their suprema: 0, every positive pooled observation, and
a probe just above the magnitude of every nonpositive observation.  The
probes matter because the processes look at reflected arguments, which are
left-discontinuous at sample points; evaluating just past the magnitude
recovers the open-segment value without any dedicated left-limit code in
the hot paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VALID_LABELS = ("A", "B", "Control")

# Base offset for the left probes: square root of double precision.
DEFAULT_EPS = float(np.sqrt(np.finfo(np.float64).eps))


@dataclass(frozen=True)
class Sample:
    """A labelled sample of real-valued outcomes, stored sorted ascending.

    Parameters
    ----------
    values : numpy.ndarray
        Sorted observations, finite, nonempty.
    label : str
        One of ``"A"``, ``"B"``, ``"Control"``.
    """

    values: np.ndarray
    label: str

    def __post_init__(self) -> None:
        if self.label not in VALID_LABELS:
            raise ValueError(f"label must be one of {VALID_LABELS}, got {self.label!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("sample must be a nonempty 1-d array of values")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample values must all be finite (no NaN or Inf)")
        object.__setattr__(self, "values", np.sort(values))
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_values(cls, values, label: str) -> "Sample":
        return cls(np.asarray(values, dtype=np.float64), label)


@dataclass(frozen=True)
class EmpiricalCdf:
    """Empirical CDF of a sample: right-continuous, jumps of k/n at ties."""

    sorted_values: np.ndarray
    n: int

    def evaluate(self, x):
        """Fraction of observations <= x (scalar in, scalar out)."""
        idx = np.searchsorted(self.sorted_values, x, side="right")
        out = idx / self.n
        return float(out) if np.isscalar(x) else out

    def left_limit(self, x):
        """Fraction of observations strictly below x."""
        idx = np.searchsorted(self.sorted_values, x, side="left")
        out = idx / self.n
        return float(out) if np.isscalar(x) else out

    @property
    def min(self) -> float:
        return float(self.sorted_values[0])

    @property
    def max(self) -> float:
        return float(self.sorted_values[-1])


def build_ecdf(sample: Sample) -> EmpiricalCdf:
    """Construct the empirical CDF of a sample.

    The returned function evaluates to exact rationals k/n: there is no
    interpolation and no smoothing.
    """
    cdf = EmpiricalCdf(sample.values, sample.n)
    cdf.sorted_values.setflags(write=False)
    return cdf


def left_limit(cdf: EmpiricalCdf, x) -> float:
    """Left limit of an empirical CDF at x, i.e. the strict count / n."""
    return cdf.left_limit(x)


def tie_fraction(sample: Sample) -> float:
    """Share of observations that duplicate another observation."""
    n_unique = np.unique(sample.values).size
    return 1.0 - n_unique / sample.n


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant function.

    ``values`` holds one value per segment: the leading segment below the
    first breakpoint, one value for each ``[b_i, b_{i+1})``, and the
    trailing segment at and above the last breakpoint, so
    ``len(values) == len(breakpoints) + 1``.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        bp = np.asarray(self.breakpoints, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        if bp.ndim != 1 or bp.size == 0:
            raise ValueError("breakpoints must be a nonempty 1-d array")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if vals.shape != (bp.size + 1,):
            raise ValueError(
                "values must have one entry per segment incl. the leading and "
                f"trailing ones: expected {bp.size + 1}, got {vals.size}"
            )
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        bp.setflags(write=False)
        vals.setflags(write=False)

    @classmethod
    def from_grid(cls, points, point_values) -> "StepFunction":
        """Step function holding ``point_values[i]`` on ``[points[i], points[i+1])``.

        Below the first point the leading value is extended constantly; at and
        above the last point the final value holds.
        """
        points = np.asarray(points, dtype=np.float64)
        point_values = np.asarray(point_values, dtype=np.float64)
        if points.shape != point_values.shape:
            raise ValueError("points and point_values must have matching shapes")
        values = np.concatenate(([point_values[0]], point_values))
        return cls(points, values)

    def evaluate(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="right")
        out = self.values[idx]
        return float(out) if np.isscalar(x) else out

    def positive_sq_integral(self, lo: float, hi: float) -> float:
        """Integral of max(f, 0)^2 over [lo, hi], exactly.

        The integrand is constant between breakpoints, so the integral is a
        finite sum of segment contributions; there is no quadrature error.
        """
        if hi <= lo:
            return 0.0
        inner = self.breakpoints[(self.breakpoints > lo) & (self.breakpoints < hi)]
        edges = np.concatenate(([lo], inner, [hi]))
        seg_vals = self.values[np.searchsorted(self.breakpoints, edges[:-1], side="right")]
        pos = np.maximum(seg_vals, 0.0)
        return float(np.sum(pos * pos * np.diff(edges)))


@dataclass(frozen=True)
class EvaluationSet:
    """Nonnegative evaluation grid for the criterion processes.

    ``points`` always contains 0.  ``x_max`` is the largest point; every
    criterion process built from the generating samples is identically zero
    above it.  ``eps`` records the base probe offset.
    """

    points: np.ndarray
    x_max: float
    eps: float

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("points must be a nonempty 1-d array")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("points must be strictly increasing")
        if pts[0] != 0.0:
            raise ValueError("evaluation set must contain 0 as its first point")
        object.__setattr__(self, "points", pts)
        pts.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.points.size)

    def segment_lengths(self) -> np.ndarray:
        """Length of [p_i, p_{i+1}) per point; the last point gets 0.

        Integrals over [0, x_max] stop at the last point, so its segment is
        empty by convention.
        """
        return np.concatenate((np.diff(self.points), [0.0]))


def evaluation_set_from_values(pooled, eps: float | None = None) -> EvaluationSet:
    """Evaluation grid from an array of pooled atom locations.

    Points are 0, every positive value, and ``|w| + eps`` for every value
    ``w <= 0``.  A value at exactly 0 gets a probe too: the reflected CDF
    argument is left-discontinuous there just like at any negative
    observation, and skipping it can hide a criterion violation on the
    first open segment.

    When ``eps`` is given it is used as-is.  By default each probe uses
    ``sqrt(machine eps) * max(1, |w|)`` so the probe stays strictly inside
    its segment for large-magnitude data.
    """
    pooled = np.asarray(pooled, dtype=np.float64)
    if pooled.size == 0:
        raise ValueError("at least one value is required")
    positives = pooled[pooled > 0.0]
    nonpos = np.abs(pooled[pooled <= 0.0])
    if eps is None:
        base = DEFAULT_EPS
        probes = nonpos + base * np.maximum(1.0, nonpos)
    else:
        if eps <= 0.0:
            raise ValueError("eps must be positive")
        base = float(eps)
        probes = nonpos + base
    points = np.unique(np.concatenate(([0.0], positives, probes)))
    return EvaluationSet(points=points, x_max=float(points[-1]), eps=base)


def build_evaluation_set(samples, eps: float | None = None) -> EvaluationSet:
    """Build the evaluation grid from one or more samples (pooled)."""
    pooled = np.concatenate([np.asarray(s.values, dtype=np.float64) for s in samples])
    return evaluation_set_from_values(pooled, eps)
