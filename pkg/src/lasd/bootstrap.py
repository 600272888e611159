"""Resampling engine producing critical values and p-values for all tests.

The scheme is the standard multinomial bootstrap, drawn independently within
each sample.  Every repetition derives its own generator from
(seed, repetition index), so results do not depend on evaluation order or on
how work is scheduled; within a repetition, samples are drawn in a fixed
order (A then B, or control then A then B).

The null hypothesis is imposed through the sets estimated from the original
data (never from bootstrap draws): supremum statistics are re-maximized only
over near-argmax sets, integral statistics are re-integrated only over
contact sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, sqrt
from typing import Optional

import numpy as np

from .contact import (
    SetEstimate,
    TuningSequences,
    contact_set_partial,
    contact_sets_point,
    default_tuning,
    eps_maximizer_sets_partial,
    eps_maximizer_sets_point,
)
from .criterion import criterion_eval, fosd_process, mean_gap
from .ecdf import (
    EvaluationSet,
    Sample,
    StepFunction,
    build_ecdf,
    build_evaluation_set,
    tie_fraction,
)
from .makarov import Grid2D, build_grid2d, t3_process
from .statistics import (
    StatisticValue,
    fosd_cvm_stat,
    fosd_ks_stat,
    v1_stat,
    v2_stat,
    v3_stat,
    w1_stat,
    w2_stat,
    w3_stat,
)

POINT_KINDS = ("V1", "V2", "W1", "W2")
PARTIAL_KINDS = ("V3", "W3")
FOSD_KINDS = ("FOSD_KS", "FOSD_CvM")
ALL_KINDS = POINT_KINDS + PARTIAL_KINDS + FOSD_KINDS

_TIE_WARN_FRACTION = 0.10


# ---------------------------------------------------------------------------
# configuration and result containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BootstrapConfig:
    """Knobs of one test run.

    reps=None picks a default by pooled sample size (499 / 999 / 1999).
    tuning=None derives the default constants at the pooled size, scaled by
    tuning_multipliers (a, b, c, d order).
    """

    reps: Optional[int] = None
    seed: int = 0
    scheme: str = "multinomial"
    alpha: float = 0.05
    tuning: Optional[TuningSequences] = None
    tuning_multipliers: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    grid_size: int = 512

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.reps is not None and self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.scheme != "multinomial":
            raise ValueError("only the multinomial scheme is implemented")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if any(m <= 0 for m in self.tuning_multipliers):
            raise ValueError("tuning multipliers must be positive")
        if self.grid_size < 2:
            raise ValueError("grid_size must be at least 2")


@dataclass(frozen=True)
class BootstrapDistribution:
    """Draws of one resampled statistic, with the quantile convention fixed.

    quantile(q) is the ceil(q*R)-th order statistic (conservative in finite
    R); p_value(s) = (1 + #{draws >= s}) / (R + 1).
    """

    draws: np.ndarray
    statistic_kind: str

    def __post_init__(self) -> None:
        draws = np.asarray(self.draws, dtype=np.float64)
        if draws.ndim != 1 or draws.size == 0:
            raise ValueError("draws must be a nonempty 1-d array")
        object.__setattr__(self, "draws", draws)
        object.__setattr__(self, "_sorted", np.sort(draws))

    @property
    def reps(self) -> int:
        return int(self.draws.size)

    def quantile(self, q: float) -> float:
        if not 0.0 < q < 1.0:
            raise ValueError("quantile level must lie strictly between 0 and 1")
        k = min(max(ceil(q * self.reps), 1), self.reps)
        return float(self._sorted[k - 1])

    def p_value(self, statistic: float) -> float:
        return float((1 + np.sum(self.draws >= statistic)) / (self.reps + 1))


@dataclass(frozen=True)
class TestReport:
    statistic: StatisticValue
    critical_value: float
    p_value: float
    reject: bool
    contact_diagnostics: dict
    mean_gap: Optional[float]
    seed: int
    reps: int
    alpha: float
    tuning: TuningSequences
    kind: str = field(default="")

    def to_dict(self) -> dict:
        return {
            "kind": self.statistic.kind,
            "statistic": self.statistic.value,
            "scale_n": self.statistic.scale_n,
            "domain_max": self.statistic.domain_max,
            "critical_value": self.critical_value,
            "p_value": self.p_value,
            "reject": self.reject,
            "alpha": self.alpha,
            "reps": self.reps,
            "seed": self.seed,
            "mean_gap": self.mean_gap,
            "tuning": {
                "a_n": self.tuning.a_n,
                "b_n": self.tuning.b_n,
                "c_n": self.tuning.c_n,
                "d_n": self.tuning.d_n,
                "n": self.tuning.n,
            },
            "diagnostics": self.contact_diagnostics,
        }


def default_reps(pooled_n: int) -> int:
    """Repetition count by pooled size, following the 499/999/1999 ladder."""
    if pooled_n < 600:
        return 499
    if pooled_n < 1500:
        return 999
    return 1999


# ---------------------------------------------------------------------------
# multinomial resampling primitives
# ---------------------------------------------------------------------------

def _rep_generator(seed: int, rep: int) -> np.random.Generator:
    # one independent, reproducible stream per (seed, repetition)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, rep])))


def _draw_counts(sizes: tuple[int, ...], reps: int, seed: int) -> list[np.ndarray]:
    """Multinomial weight counts for every repetition and sample.

    Within a repetition the samples are drawn in the order given, from a
    single generator keyed by (seed, rep).
    """
    out = [np.empty((reps, n), dtype=np.int64) for n in sizes]
    probs = [np.full(n, 1.0 / n) for n in sizes]
    for r in range(reps):
        rng = _rep_generator(seed, r)
        for s, n in enumerate(sizes):
            out[s][r] = rng.multinomial(n, probs[s])
    return out


def _deviations(counts: np.ndarray, n: int) -> np.ndarray:
    """Bootstrap-minus-original ECDF deviation, tabulated at sorted-value ranks.

    Row r, column j holds (G*_r - G)(v_(j)) where v_(j) is the j-th order
    statistic (column 0 is the value below every observation, always 0).
    Evaluating the deviation at any query point q reduces to indexing column
    searchsorted(values, q, side='right').
    """
    reps = counts.shape[0]
    cum = np.cumsum(counts, axis=1)
    dev = np.concatenate((np.zeros((reps, 1), dtype=np.float64), cum), axis=1) / n
    dev -= np.arange(n + 1, dtype=np.float64) / n
    return dev


# ---------------------------------------------------------------------------
# single-repetition operations (the contract-level building blocks)
# ---------------------------------------------------------------------------

def resample_point_processes(
    sample_a: Sample, sample_b: Sample, grid: EvaluationSet, rng: np.random.Generator
) -> tuple[StepFunction, StepFunction]:
    """One repetition of the centered, root-n scaled two-sample processes."""
    n = sample_a.n + sample_b.n
    counts_a = rng.multinomial(sample_a.n, np.full(sample_a.n, 1.0 / sample_a.n))
    counts_b = rng.multinomial(sample_b.n, np.full(sample_b.n, 1.0 / sample_b.n))
    dev_a = _deviations(counts_a[None, :], sample_a.n)[0]
    dev_b = _deviations(counts_b[None, :], sample_b.n)[0]
    pts = grid.points
    ja_neg = np.searchsorted(sample_a.values, -pts, side="right")
    jb_neg = np.searchsorted(sample_b.values, -pts, side="right")
    ja_pos = np.searchsorted(sample_a.values, pts, side="right")
    jb_pos = np.searchsorted(sample_b.values, pts, side="right")
    root = sqrt(n)
    f1 = root * (dev_a[ja_neg] - dev_b[jb_neg])
    f2 = f1 + root * (dev_a[ja_pos] - dev_b[jb_pos])
    return StepFunction.from_grid(pts, f1), StepFunction.from_grid(pts, f2)


def resampled_v_stat(
    processes: tuple[StepFunction, StepFunction],
    eps_max_sets: tuple[SetEstimate, SetEstimate],
    selected: str,
) -> float:
    """Resampled supremum statistic under the branch selector."""
    f1, f2 = processes
    set1, set2 = eps_max_sets
    max1 = float(f1.values[1:][set1.mask].max()) if set1.mask.any() else -np.inf
    max2 = float(f2.values[1:][set2.mask].max()) if set2.mask.any() else -np.inf
    if selected == "1":
        return max(0.0, max1)
    if selected == "2":
        return max(0.0, max2)
    return max(0.0, max1, max2)


def resampled_w_stat(
    processes: tuple[StepFunction, StepFunction],
    contact_sets: tuple[SetEstimate, SetEstimate],
) -> float:
    """Resampled integral statistic over the two estimated contact sets."""
    total = 0.0
    for proc, cset in zip(processes, contact_sets):
        if not cset.mask.any():
            continue
        lengths = np.concatenate((np.diff(proc.breakpoints), [0.0]))
        pos = np.maximum(proc.values[1:], 0.0)
        total += float(np.sum((pos * pos * lengths)[cset.mask]))
    return sqrt(total)


def resample_partial_processes(
    control: Sample, sample_a: Sample, sample_b: Sample,
    grid: Grid2D, rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One repetition of the four centered coordinate processes on (x, u).

    Order of the returned arrays matches the coordinate functions: the two
    policy-A coordinates first (shift +x then -x), then the two policy-B
    ones (sign-flipped, shift +x then -x).  Shapes are (n_x, n_u).
    """
    n = control.n + sample_a.n + sample_b.n
    devs = {}
    for s in (control, sample_a, sample_b):
        counts = rng.multinomial(s.n, np.full(s.n, 1.0 / s.n))
        devs[s.label] = (_deviations(counts[None, :], s.n)[0], s.values)
    root = sqrt(n)
    u = grid.u_points
    x = grid.x_points

    def dev_at(label: str, q: np.ndarray) -> np.ndarray:
        dev, values = devs[label]
        return root * dev[np.searchsorted(values, q, side="right")]

    d0_up = dev_at("Control", u[None, :] + x[:, None])
    d0_um = dev_at("Control", u[None, :] - x[:, None])
    da_u = dev_at("A", u)[None, :]
    db_u = dev_at("B", u)[None, :]
    return (da_u - d0_up, da_u - d0_um, d0_up - db_u, d0_um - db_u)


def resampled_v3_stat(processes, joint_set: SetEstimate, per_coord_sets) -> float:
    """Sum of per-coordinate inner maxima, maximized over the joint set's x rows."""
    sums = None
    for proc, cset in zip(processes, per_coord_sets):
        inner = np.where(cset.mask, proc, -np.inf).max(axis=1)
        sums = inner if sums is None else sums + inner
    proj = joint_set.mask.any(axis=1)
    return max(0.0, float(sums[proj].max()))


def resampled_w3_stat(processes, contact_set: SetEstimate, per_coord_sets, x_points) -> float:
    """Integral of the squared positive summed inner maxima over the contact set."""
    sums = None
    for proc, cset in zip(processes, per_coord_sets):
        inner = np.where(cset.mask, proc, -np.inf).max(axis=1)
        sums = inner if sums is None else sums + inner
    x_points = np.asarray(x_points, dtype=np.float64)
    lengths = np.concatenate((np.diff(x_points), [0.0]))
    pos = np.maximum(sums, 0.0)
    return sqrt(float(np.sum((pos * pos * lengths)[contact_set.mask])))


# ---------------------------------------------------------------------------
# family runners: one bootstrap pass feeding every statistic of the family
# ---------------------------------------------------------------------------

def _set_summary(est: SetEstimate) -> dict:
    out = {"kind": est.kind, "size": est.size, "fallback_used": est.fallback_used}
    if est.points is not None and est.points.size:
        out["min"] = float(est.points.min())
        out["max"] = float(est.points.max())
    return out


def _finish_report(stat, dist, config, tuning, reps, diagnostics, gap) -> TestReport:
    cv = dist.quantile(1.0 - config.alpha)
    return TestReport(
        statistic=stat,
        critical_value=cv,
        p_value=dist.p_value(stat.value),
        reject=bool(stat.value > cv),
        contact_diagnostics=diagnostics,
        mean_gap=gap,
        seed=config.seed,
        reps=reps,
        alpha=config.alpha,
        tuning=tuning,
        kind=stat.kind,
    )


def run_point_family(sample_a: Sample, sample_b: Sample, config: BootstrapConfig) -> dict:
    """All four point-identified reports from one shared bootstrap pass.

    V1 and V2 are compared against the same resampled supremum distribution,
    W1 and W2 against the same resampled integral distribution; that is the
    prescription, not an optimization.
    """
    grid = build_evaluation_set([sample_a, sample_b])
    fa, fb = build_ecdf(sample_a), build_ecdf(sample_b)
    ce = criterion_eval(fa, fb, grid)
    n = sample_a.n + sample_b.n
    tuning = config.tuning or default_tuning(n, *config.tuning_multipliers)
    reps = config.reps or default_reps(n)

    # step 1: everything set-like comes from the original data only
    contact1, contact2 = contact_sets_point(ce.t2_m1, ce.t2_m2, grid, tuning.a_n)
    emax1, emax2, selected = eps_maximizer_sets_point(
        ce.t2_m1, ce.t2_m2, grid, tuning.b_n, tuning.c_n
    )

    stats = {
        "V1": v1_stat(ce.t1, n),
        "V2": v2_stat(ce.t2_m1, ce.t2_m2, n),
        "W1": w1_stat(ce.t1, n),
        "W2": w2_stat(ce.t2_m1, ce.t2_m2, n),
    }

    # step 2: centered multinomial deviations, all repetitions at once
    counts_a, counts_b = _draw_counts((sample_a.n, sample_b.n), reps, config.seed)
    dev_a = _deviations(counts_a, sample_a.n)
    dev_b = _deviations(counts_b, sample_b.n)
    pts = grid.points
    ja_neg = np.searchsorted(sample_a.values, -pts, side="right")
    jb_neg = np.searchsorted(sample_b.values, -pts, side="right")
    ja_pos = np.searchsorted(sample_a.values, pts, side="right")
    jb_pos = np.searchsorted(sample_b.values, pts, side="right")
    root = sqrt(n)
    f1 = root * (dev_a[:, ja_neg] - dev_b[:, jb_neg])
    f2 = f1 + root * (dev_a[:, ja_pos] - dev_b[:, jb_pos])

    # step 3: resampled statistics restricted to the estimated sets
    max1 = f1[:, emax1.mask].max(axis=1)
    max2 = f2[:, emax2.mask].max(axis=1)
    if selected == "1":
        v_draws = np.maximum(max1, 0.0)
    elif selected == "2":
        v_draws = np.maximum(max2, 0.0)
    else:
        v_draws = np.maximum(np.maximum(max1, max2), 0.0)

    lengths = grid.segment_lengths()
    w_sq = np.zeros(reps)
    for proc, cset in ((f1, contact1), (f2, contact2)):
        if cset.mask.any():
            pos = np.maximum(proc[:, cset.mask], 0.0)
            w_sq += (pos * pos) @ lengths[cset.mask]
    w_draws = np.sqrt(w_sq)

    dist_v = BootstrapDistribution(v_draws, "V*")
    dist_w = BootstrapDistribution(w_draws, "W*")

    gap = mean_gap(sample_a, sample_b)
    ties = {"A": tie_fraction(sample_a), "B": tie_fraction(sample_b)}
    diagnostics = {
        "contact_set_1": _set_summary(contact1),
        "contact_set_2": _set_summary(contact2),
        "eps_max_set_1": _set_summary(emax1),
        "eps_max_set_2": _set_summary(emax2),
        "selected_coordinate": selected,
        "grid_size": grid.size,
        "tie_fraction": ties,
        "tie_warning": bool(max(ties.values()) > _TIE_WARN_FRACTION),
    }

    return {
        kind: _finish_report(
            stats[kind],
            dist_v if kind.startswith("V") else dist_w,
            config, tuning, reps, diagnostics, gap,
        )
        for kind in POINT_KINDS
    }


def run_fosd_family(sample_a: Sample, sample_b: Sample, config: BootstrapConfig) -> dict:
    """First-order dominance tests on levels, same contact-set machinery."""
    levels = np.unique(np.concatenate((sample_a.values, sample_b.values)))
    fa, fb = build_ecdf(sample_a), build_ecdf(sample_b)
    d = fosd_process(fa, fb, levels)
    vals = d.values[1:]
    n = sample_a.n + sample_b.n
    tuning = config.tuning or default_tuning(n, *config.tuning_multipliers)
    reps = config.reps or default_reps(n)

    contact_mask = np.abs(vals) <= tuning.a_n
    fallback = not contact_mask.any()
    if fallback:
        contact_mask = np.ones_like(contact_mask)
    contact = SetEstimate(contact_mask, "contact", fallback, points=levels[contact_mask])
    emax_mask = vals >= float(vals.max()) - tuning.b_n
    emax = SetEstimate(emax_mask, "eps_max", points=levels[emax_mask])

    stats = {"FOSD_KS": fosd_ks_stat(d, n), "FOSD_CvM": fosd_cvm_stat(d, n)}

    counts_a, counts_b = _draw_counts((sample_a.n, sample_b.n), reps, config.seed)
    dev_a = _deviations(counts_a, sample_a.n)
    dev_b = _deviations(counts_b, sample_b.n)
    ja = np.searchsorted(sample_a.values, levels, side="right")
    jb = np.searchsorted(sample_b.values, levels, side="right")
    dstar = sqrt(n) * (dev_a[:, ja] - dev_b[:, jb])

    ks_draws = np.maximum(dstar[:, emax.mask].max(axis=1), 0.0)
    lengths = np.concatenate((np.diff(levels), [0.0]))
    pos = np.maximum(dstar[:, contact.mask], 0.0)
    cvm_draws = np.sqrt((pos * pos) @ lengths[contact.mask])

    dist_ks = BootstrapDistribution(ks_draws, "FOSD_KS*")
    dist_cvm = BootstrapDistribution(cvm_draws, "FOSD_CvM*")

    gap = mean_gap(sample_a, sample_b)
    diagnostics = {
        "contact_set": _set_summary(contact),
        "eps_max_set": _set_summary(emax),
        "grid_size": int(levels.size),
        "tie_fraction": {"A": tie_fraction(sample_a), "B": tie_fraction(sample_b)},
        "tie_warning": bool(
            max(tie_fraction(sample_a), tie_fraction(sample_b)) > _TIE_WARN_FRACTION
        ),
    }
    return {
        "FOSD_KS": _finish_report(stats["FOSD_KS"], dist_ks, config, tuning, reps, diagnostics, gap),
        "FOSD_CvM": _finish_report(stats["FOSD_CvM"], dist_cvm, config, tuning, reps, diagnostics, gap),
    }


def _coordinate_grids(g0, ga, gb, grid: Grid2D):
    """The four coordinate functions tabulated on (x, u)."""
    u, x = grid.u_points, grid.x_points
    ga_u = ga.evaluate(u)[None, :]
    gb_u = gb.evaluate(u)[None, :]
    g0_up = g0.evaluate(u[None, :] + x[:, None])
    g0_um = g0.evaluate(u[None, :] - x[:, None])
    return ga_u - g0_up, ga_u - g0_um, g0_up - gb_u, g0_um - gb_u


def run_partial_family(
    control: Sample, sample_a: Sample, sample_b: Sample, config: BootstrapConfig
) -> dict:
    """Both partially-identified reports from one shared bootstrap pass."""
    grid = build_grid2d((control, sample_a, sample_b), n_x=config.grid_size)
    g0, ga, gb = build_ecdf(control), build_ecdf(sample_a), build_ecdf(sample_b)
    t3 = t3_process(g0, ga, gb, grid)
    n = control.n + sample_a.n + sample_b.n
    tuning = config.tuning or default_tuning(n, *config.tuning_multipliers)
    reps = config.reps or default_reps(n)

    # step 1: sets from the original data
    contact = contact_set_partial(t3, grid.x_points, tuning.a_n)
    coord_grids = _coordinate_grids(g0, ga, gb, grid)
    per_coord, joint = eps_maximizer_sets_partial(coord_grids, tuning.b_n, tuning.d_n)

    stats = {"V3": v3_stat(t3, n), "W3": w3_stat(t3, n)}

    # the x rows the resampled statistics ever look at
    proj = joint.mask.any(axis=1)
    needed = proj | contact.mask
    rows = np.flatnonzero(needed)

    # CSR-style gather tables per coordinate, restricted to the needed rows.
    # Each selected (x, u) cell stores the two deviation-table columns whose
    # difference is the coordinate's resampled process value there.
    u, x = grid.u_points, grid.x_points
    j0_up = np.searchsorted(control.values, u[None, :] + x[:, None], side="right")
    j0_um = np.searchsorted(control.values, u[None, :] - x[:, None], side="right")
    ja_u = np.searchsorted(sample_a.values, u, side="right")
    jb_u = np.searchsorted(sample_b.values, u, side="right")

    tables = []  # (pos_sample, pos_cols, neg_sample, neg_cols, row_starts)
    specs = (
        ("A", lambda r, c: np.broadcast_to(ja_u[c], c.shape), "0", lambda r, c: j0_up[r, c]),
        ("A", lambda r, c: np.broadcast_to(ja_u[c], c.shape), "0", lambda r, c: j0_um[r, c]),
        ("0", lambda r, c: j0_up[r, c], "B", lambda r, c: np.broadcast_to(jb_u[c], c.shape)),
        ("0", lambda r, c: j0_um[r, c], "B", lambda r, c: np.broadcast_to(jb_u[c], c.shape)),
    )
    for k in range(4):
        mask_rows = per_coord[k].mask[rows]
        cells_per_row = mask_rows.sum(axis=1)
        row_starts = np.concatenate(([0], np.cumsum(cells_per_row)))[:-1]
        rr, cc = np.nonzero(mask_rows)
        abs_rows = rows[rr]
        pos_label, pos_fn, neg_label, neg_fn = specs[k]
        tables.append(
            (
                pos_label,
                pos_fn(abs_rows, cc).astype(np.int64),
                neg_label,
                neg_fn(abs_rows, cc).astype(np.int64),
                row_starts,
            )
        )

    # step 2: deviations for all repetitions, then a per-repetition pass
    counts = _draw_counts((control.n, sample_a.n, sample_b.n), reps, config.seed)
    root = sqrt(n)
    devs = {
        "0": root * _deviations(counts[0], control.n),
        "A": root * _deviations(counts[1], sample_a.n),
        "B": root * _deviations(counts[2], sample_b.n),
    }

    lengths = np.concatenate((np.diff(x), [0.0]))
    proj_in_rows = proj[rows]
    contact_in_rows = contact.mask[rows]
    contact_lengths = lengths[rows][contact_in_rows]

    v_draws = np.empty(reps)
    w_draws = np.empty(reps)
    for r in range(reps):
        sums = None
        for pos_label, pos_cols, neg_label, neg_cols, row_starts in tables:
            vals = devs[pos_label][r][pos_cols] - devs[neg_label][r][neg_cols]
            inner = np.maximum.reduceat(vals, row_starts)
            sums = inner if sums is None else sums + inner
        v_draws[r] = max(0.0, float(sums[proj_in_rows].max()))
        pos = np.maximum(sums[contact_in_rows], 0.0)
        w_draws[r] = sqrt(float(np.sum(pos * pos * contact_lengths)))

    dist_v = BootstrapDistribution(v_draws, "V3*")
    dist_w = BootstrapDistribution(w_draws, "W3*")

    ties = {
        "Control": tie_fraction(control),
        "A": tie_fraction(sample_a),
        "B": tie_fraction(sample_b),
    }
    diagnostics = {
        "contact_set": _set_summary(contact),
        "joint_eps_max_cells": joint.size,
        "joint_x_projection_size": int(proj.sum()),
        "grid_size": {"u": int(u.size), "x": int(x.size)},
        "tie_fraction": ties,
        "tie_warning": bool(max(ties.values()) > _TIE_WARN_FRACTION),
    }
    return {
        "V3": _finish_report(stats["V3"], dist_v, config, tuning, reps, diagnostics, None),
        "W3": _finish_report(stats["W3"], dist_w, config, tuning, reps, diagnostics, None),
    }


# ---------------------------------------------------------------------------
# the one-call entry point
# ---------------------------------------------------------------------------

def _find_label(samples, label: str) -> Sample:
    found = [s for s in samples if s.label == label]
    if len(found) != 1:
        raise ValueError(
            f"expected exactly one sample labelled {label!r}, got {len(found)}"
        )
    return found[0]


def normalize_kind(kind: str) -> str:
    lookup = {k.upper(): k for k in ALL_KINDS}
    try:
        return lookup[kind.upper()]
    except KeyError:
        raise ValueError(f"unknown statistic kind {kind!r}; choose from {ALL_KINDS}")


def run_test(samples, config: BootstrapConfig, kind: str) -> TestReport:
    """Full pipeline for one statistic kind.

    Two samples labelled A and B for the point-identified and first-order
    kinds; three samples labelled Control, A and B for the
    partially-identified kinds.  Deterministic given (data, config).
    """
    kind = normalize_kind(kind)
    if kind in PARTIAL_KINDS:
        if len(samples) != 3:
            raise ValueError("partially-identified kinds need Control, A and B samples")
        reports = run_partial_family(
            _find_label(samples, "Control"),
            _find_label(samples, "A"),
            _find_label(samples, "B"),
            config,
        )
    else:
        if len(samples) != 2:
            raise ValueError("two-sample kinds need exactly the A and B samples")
        a, b = _find_label(samples, "A"), _find_label(samples, "B")
        runner = run_fosd_family if kind in FOSD_KINDS else run_point_family
        reports = runner(a, b, config)
    return reports[kind]
