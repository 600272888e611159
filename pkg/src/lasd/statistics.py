"""Scaled test statistics computed from tabulated step processes.

Supremum statistics take the largest positive excursion of a process over
its grid; integral statistics accumulate the squared positive part exactly,
segment by segment, so there is no quadrature error.  Both are scaled by the
square root of the pooled sample size.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .ecdf import StepFunction


@dataclass(frozen=True)
class StatisticValue:
    """One computed statistic: its kind, value, scaling, and domain."""

    kind: str
    value: float
    scale_n: int
    domain_max: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.value):
            raise ValueError("statistic value must be finite")
        if self.value < 0.0:
            raise ValueError("statistic value must be nonnegative")
        if self.scale_n < 1:
            raise ValueError("scale_n must be a positive sample size")


def _sup(proc: StepFunction) -> float:
    # values[0] describes the segment below the grid; the domain starts at
    # the first breakpoint, so the supremum runs over values[1:]
    return float(proc.values[1:].max())


def _positive_sq_integral(proc: StepFunction) -> float:
    return proc.positive_sq_integral(proc.breakpoints[0], proc.breakpoints[-1])


def v1_stat(t1: StepFunction, n: int) -> StatisticValue:
    """Supremum statistic of the combined one-sided criterion process."""
    value = sqrt(n) * max(0.0, _sup(t1))
    return StatisticValue("V1", value, n, float(t1.breakpoints[-1]))


def v2_stat(m1: StepFunction, m2: StepFunction, n: int) -> StatisticValue:
    """Supremum statistic of the two coordinate processes jointly."""
    value = sqrt(n) * max(0.0, _sup(m1), _sup(m2))
    return StatisticValue("V2", value, n, float(m1.breakpoints[-1]))


def w1_stat(t1: StepFunction, n: int) -> StatisticValue:
    """Integral statistic of the combined process' squared positive part."""
    value = sqrt(n) * sqrt(_positive_sq_integral(t1))
    return StatisticValue("W1", value, n, float(t1.breakpoints[-1]))


def w2_stat(m1: StepFunction, m2: StepFunction, n: int) -> StatisticValue:
    """Integral statistic summing both coordinates' squared positive parts."""
    value = sqrt(n) * sqrt(_positive_sq_integral(m1) + _positive_sq_integral(m2))
    return StatisticValue("W2", value, n, float(m1.breakpoints[-1]))


def v3_stat(t3: StepFunction, n: int) -> StatisticValue:
    """Supremum statistic of the bound-gap process (three-sample design)."""
    value = sqrt(n) * max(0.0, _sup(t3))
    return StatisticValue("V3", value, n, float(t3.breakpoints[-1]))


def w3_stat(t3: StepFunction, n: int) -> StatisticValue:
    """Integral statistic of the bound-gap process (three-sample design)."""
    value = sqrt(n) * sqrt(_positive_sq_integral(t3))
    return StatisticValue("W3", value, n, float(t3.breakpoints[-1]))


def fosd_ks_stat(d: StepFunction, n: int) -> StatisticValue:
    """One-sided Kolmogorov-Smirnov statistic for first-order dominance."""
    value = sqrt(n) * max(0.0, _sup(d))
    return StatisticValue("FOSD_KS", value, n, float(d.breakpoints[-1]))


def fosd_cvm_stat(d: StepFunction, n: int) -> StatisticValue:
    """One-sided Cramer-von Mises statistic for first-order dominance."""
    value = sqrt(n) * sqrt(_positive_sq_integral(d))
    return StatisticValue("FOSD_CvM", value, n, float(d.breakpoints[-1]))
