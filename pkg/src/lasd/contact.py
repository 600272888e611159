"""Contact sets and epsilon-maximizer sets with their tuning constants.

The bootstrap imposes the null only where the criterion is close to
binding.  "Close" is controlled by slowly vanishing constants: a_n for
contact sets (|process| <= a_n), b_n for near-argmax sets, c_n for deciding
whether two coordinate maxima are distinguishable, d_n for the joint
near-argmax set of the partially-identified sum.  Defaults follow
4*log(log n)/sqrt(n) and sqrt(log(log n)/n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ecdf import EvaluationSet, StepFunction


@dataclass(frozen=True)
class TuningSequences:
    a_n: float
    b_n: float
    c_n: float
    d_n: float
    n: int

    def __post_init__(self) -> None:
        if min(self.a_n, self.b_n, self.c_n, self.d_n) <= 0.0:
            raise ValueError("tuning constants must be positive")


@dataclass(frozen=True)
class SetEstimate:
    """Subset of a grid, as a boolean mask (1-d over x or u, 2-d over (x, u))."""

    mask: np.ndarray
    kind: str
    fallback_used: bool = False
    points: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("contact", "eps_max"):
            raise ValueError("kind must be 'contact' or 'eps_max'")
        object.__setattr__(self, "mask", np.asarray(self.mask, dtype=bool))

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask) if self.mask.ndim == 1 else np.argwhere(self.mask)


def default_tuning(
    n: int,
    a_mult: float = 1.0,
    b_mult: float = 1.0,
    c_mult: float = 1.0,
    d_mult: float = 1.0,
) -> TuningSequences:
    """Default constants at total sample size n, with optional multipliers.

    d_n defaults to b_n: it plays the same near-argmax role and needs the
    same rate.
    """
    if n < 8:
        raise ValueError(
            "total sample size must be at least 8: the log(log n) tuning "
            "constants need log log n safely positive"
        )
    loglog = math.log(math.log(n))
    root = math.sqrt(n)
    b = math.sqrt(loglog / n)
    return TuningSequences(
        a_n=a_mult * 4.0 * loglog / root,
        b_n=b_mult * b,
        c_n=c_mult * b,
        d_n=d_mult * b,
        n=int(n),
    )


def _grid_values(process: StepFunction, points: np.ndarray) -> np.ndarray:
    return process.evaluate(points)


def contact_sets_point(
    m1: StepFunction, m2: StepFunction, grid: EvaluationSet, a_n: float
) -> tuple[SetEstimate, SetEstimate]:
    """Grid points where each coordinate is within a_n of zero.

    If both sets come out empty the data look far from the null boundary
    everywhere; both fall back to the full grid (least favorable case).  An
    individually empty set stays empty and simply contributes nothing
    downstream.
    """
    pts = grid.points
    masks = [np.abs(_grid_values(m, pts)) <= a_n for m in (m1, m2)]
    fallback = not (masks[0].any() or masks[1].any())
    if fallback:
        masks = [np.ones_like(masks[0]), np.ones_like(masks[1])]
    return tuple(
        SetEstimate(mask=mk, kind="contact", fallback_used=fallback, points=pts[mk])
        for mk in masks
    )


def eps_maximizer_sets_point(
    m1: StepFunction, m2: StepFunction, grid: EvaluationSet, b_n: float, c_n: float
) -> tuple[SetEstimate, SetEstimate, str]:
    """Near-argmax sets of both coordinates plus the branch selector.

    selected is "1" or "2" when one coordinate's maximum exceeds the other's
    by more than c_n, else "both".  Each set contains its argmax, so neither
    is ever empty.
    """
    pts = grid.points
    vals1 = _grid_values(m1, pts)
    vals2 = _grid_values(m2, pts)
    max1, max2 = float(vals1.max()), float(vals2.max())
    set1 = SetEstimate(mask=vals1 >= max1 - b_n, kind="eps_max", points=pts[vals1 >= max1 - b_n])
    set2 = SetEstimate(mask=vals2 >= max2 - b_n, kind="eps_max", points=pts[vals2 >= max2 - b_n])
    if abs(max1 - max2) > c_n:
        selected = "1" if max1 > max2 else "2"
    else:
        selected = "both"
    return set1, set2, selected


def contact_set_partial(t3: StepFunction, x_points, a_n: float) -> SetEstimate:
    """x points where the bound criterion is within a_n of zero; full-grid fallback."""
    pts = np.asarray(x_points, dtype=np.float64)
    mask = np.abs(_grid_values(t3, pts)) <= a_n
    fallback = not mask.any()
    if fallback:
        mask = np.ones_like(mask)
    return SetEstimate(mask=mask, kind="contact", fallback_used=fallback, points=pts[mask])


def eps_maximizer_sets_partial(
    mk_grids, b_n: float, d_n: float
) -> tuple[tuple[SetEstimate, SetEstimate, SetEstimate, SetEstimate], SetEstimate]:
    """Near-argmax sets for the four coordinate functions on a (x, u) grid.

    mk_grids: four arrays of shape (n_x, n_u), coordinate k evaluated at
    (x_i, u_j).  Per coordinate: for each x, the u's within b_n of that
    row's maximum (2-d mask).  Joint: the (x, u) cells within d_n of the
    global maximum of the four-term sum.
    """
    grids = [np.asarray(g, dtype=np.float64) for g in mk_grids]
    if len(grids) != 4 or any(g.shape != grids[0].shape or g.ndim != 2 for g in grids):
        raise ValueError("expected four arrays of identical (n_x, n_u) shape")
    per_coord = []
    for g in grids:
        row_max = g.max(axis=1, keepdims=True)
        per_coord.append(SetEstimate(mask=g >= row_max - b_n, kind="eps_max"))
    total = grids[0] + grids[1] + grids[2] + grids[3]
    joint = SetEstimate(mask=total >= float(total.max()) - d_n, kind="eps_max")
    return tuple(per_coord), joint
