"""Monte Carlo harness: size and power of the tests in three designed models.

Families:

normal_point     two independent unit-variance normal samples, A centered at
                 zero and B at mu_b; the null holds (with equality at zero)
                 for mu_b <= 0.
triangular_point two triangular samples, A with corners (-1, 0, 1) and B with
                 corners (-1-e/sqrt(n), -e/sqrt(n), 1+e/sqrt(n)); dominance
                 holds for e >= 0 and fails for e < 0.
normal_partial   three independent unit-variance normals with means
                 (0, 0, mu_b); the testable bound-gap implication crosses
                 zero near mu_b = 2.8.

Normal variates come from numpy's Generator.standard_normal (the ziggurat
method); triangular variates are drawn by the closed-form inverse CDF applied
to Generator.random uniforms.  Every Monte Carlo repetition derives its own
generator and bootstrap seed from (seed, parameter index, repetition), so
tables are reproducible bit for bit regardless of thread count.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from math import sqrt
from typing import Optional

import numpy as np

from .bootstrap import (
    ALL_KINDS,
    FOSD_KINDS,
    PARTIAL_KINDS,
    POINT_KINDS,
    BootstrapConfig,
    default_reps,
    normalize_kind,
    run_fosd_family,
    run_partial_family,
    run_point_family,
)
from .ecdf import Sample

logger = logging.getLogger(__name__)

FAMILIES = ("normal_point", "triangular_point", "normal_partial")


@dataclass(frozen=True)
class ScenarioSpec:
    family: str
    parameter_grid: tuple[float, ...]
    n_per_sample: int
    reps_mc: int = 1000
    bootstrap: BootstrapConfig = BootstrapConfig()
    kinds: tuple[str, ...] = ("V1",)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        grid = tuple(float(p) for p in self.parameter_grid)
        if not grid:
            raise ValueError("parameter grid must be nonempty")
        object.__setattr__(self, "parameter_grid", grid)
        if self.reps_mc < 1:
            raise ValueError("reps_mc must be at least 1")
        if self.n_per_sample < 1:
            raise ValueError("n_per_sample must be at least 1")
        kinds = tuple(normalize_kind(k) for k in self.kinds)
        if not kinds:
            raise ValueError("at least one statistic kind is required")
        partial = self.family == "normal_partial"
        for k in kinds:
            if partial and k not in PARTIAL_KINDS:
                raise ValueError(f"kind {k} needs a two-sample family")
            if not partial and k in PARTIAL_KINDS:
                raise ValueError(f"kind {k} needs the normal_partial family")
        object.__setattr__(self, "kinds", kinds)


@dataclass(frozen=True)
class RejectionTable:
    """Aggregated rejection rates, one row per (parameter, kind)."""

    family: str
    n_per_sample: int
    reps_mc: int
    bootstrap_reps: int
    seed: int
    rows: tuple[dict, ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            rate = row["rate"]
            if not 0.0 <= rate <= 1.0:
                raise ValueError("rejection rates must lie in [0, 1]")
            expect = sqrt(rate * (1.0 - rate) / self.reps_mc)
            if abs(row["mc_se"] - expect) > 1e-12:
                raise ValueError("mc_se inconsistent with rate and reps_mc")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["family", "parameter", "n", "kind", "rate", "mc_se", "reps_mc", "R", "seed"]
            )
            for row in self.rows:
                writer.writerow(
                    [
                        self.family,
                        repr(row["parameter"]),
                        self.n_per_sample,
                        row["kind"],
                        repr(row["rate"]),
                        repr(row["mc_se"]),
                        self.reps_mc,
                        self.bootstrap_reps,
                        self.seed,
                    ]
                )


# ---------------------------------------------------------------------------
# data generators
# ---------------------------------------------------------------------------

def gen_normal_point(mu_b: float, n: int, rng: np.random.Generator) -> tuple[Sample, Sample]:
    """Independent N(0,1) and N(mu_b,1) samples of size n each."""
    a = rng.standard_normal(n)
    b = rng.standard_normal(n) + mu_b
    return Sample.from_values(a, "A"), Sample.from_values(b, "B")


def _triangular_inverse(u: np.ndarray, lower: float, mode: float, upper: float) -> np.ndarray:
    if not lower <= mode <= upper or lower == upper:
        raise ValueError("triangular corners must satisfy lower <= mode <= upper, lower < upper")
    span = upper - lower
    split = (mode - lower) / span
    left = lower + np.sqrt(u * span * (mode - lower))
    right = upper - np.sqrt((1.0 - u) * span * (upper - mode))
    return np.where(u < split, left, right)


def gen_triangular(eps: float, n: int, rng: np.random.Generator) -> tuple[Sample, Sample]:
    """Triangular samples whose corner gap shrinks at the root-n rate.

    eps must lie in [-1/2, 1/2]; negative values tilt B so that A no longer
    dominates it.
    """
    if not -0.5 <= eps <= 0.5:
        raise ValueError("eps must lie in [-1/2, 1/2]")
    shift = eps / sqrt(n)
    a = _triangular_inverse(rng.random(n), -1.0, 0.0, 1.0)
    b = _triangular_inverse(rng.random(n), -1.0 - shift, -shift, 1.0 + shift)
    return Sample.from_values(a, "A"), Sample.from_values(b, "B")


def gen_normal_partial(
    mu_b: float, n: int, rng: np.random.Generator
) -> tuple[Sample, Sample, Sample]:
    """Independent unit normals with means (0, 0, mu_b), size n each."""
    z0 = rng.standard_normal(n)
    za = rng.standard_normal(n)
    zb = rng.standard_normal(n) + mu_b
    return (
        Sample.from_values(z0, "Control"),
        Sample.from_values(za, "A"),
        Sample.from_values(zb, "B"),
    )


# ---------------------------------------------------------------------------
# scenario runner
# ---------------------------------------------------------------------------

def _one_rep(spec: ScenarioSpec, param_idx: int, rep: int) -> dict:
    """Rejection flags of one Monte Carlo repetition, one per requested kind."""
    seq = np.random.SeedSequence([spec.bootstrap.seed, param_idx, rep])
    data_stream, boot_stream = seq.spawn(2)
    rng = np.random.Generator(np.random.PCG64(data_stream))
    boot_seed = int(boot_stream.generate_state(1, np.uint64)[0])
    config = replace(spec.bootstrap, seed=boot_seed)
    parameter = spec.parameter_grid[param_idx]

    if spec.family == "normal_partial":
        samples = gen_normal_partial(parameter, spec.n_per_sample, rng)
        reports = run_partial_family(*samples, config)
    else:
        if spec.family == "normal_point":
            a, b = gen_normal_point(parameter, spec.n_per_sample, rng)
        else:
            a, b = gen_triangular(parameter, spec.n_per_sample, rng)
        reports = {}
        if any(k in POINT_KINDS for k in spec.kinds):
            reports.update(run_point_family(a, b, config))
        if any(k in FOSD_KINDS for k in spec.kinds):
            reports.update(run_fosd_family(a, b, config))
    return {k: reports[k].reject for k in spec.kinds}


def run_scenario(spec: ScenarioSpec, threads: int = 1) -> RejectionTable:
    """Rejection-rate table over the whole parameter grid.

    Repetitions run as independent tasks; with threads > 1 they are spread
    over a pool, and because every repetition owns a derived RNG stream the
    aggregate is identical for any thread count.
    """
    if threads < 1:
        raise ValueError("threads must be at least 1")
    n_samples = 3 if spec.family == "normal_partial" else 2
    pooled = n_samples * spec.n_per_sample
    reps_r = spec.bootstrap.reps or default_reps(pooled)

    rows = []
    for param_idx, parameter in enumerate(spec.parameter_grid):
        counts = dict.fromkeys(spec.kinds, 0)
        if threads == 1:
            flag_sets = (_one_rep(spec, param_idx, rep) for rep in range(spec.reps_mc))
            for flags in flag_sets:
                for kind, flag in flags.items():
                    counts[kind] += flag
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for flags in pool.map(
                    lambda rep: _one_rep(spec, param_idx, rep), range(spec.reps_mc)
                ):
                    for kind, flag in flags.items():
                        counts[kind] += flag
        for kind in spec.kinds:
            rate = counts[kind] / spec.reps_mc
            rows.append(
                {
                    "parameter": parameter,
                    "kind": kind,
                    "rate": rate,
                    "mc_se": sqrt(rate * (1.0 - rate) / spec.reps_mc),
                }
            )
        logger.info(
            "%s parameter %g done: %s",
            spec.family,
            parameter,
            {k: counts[k] / spec.reps_mc for k in spec.kinds},
        )

    return RejectionTable(
        family=spec.family,
        n_per_sample=spec.n_per_sample,
        reps_mc=spec.reps_mc,
        bootstrap_reps=reps_r,
        seed=spec.bootstrap.seed,
        rows=tuple(rows),
    )
