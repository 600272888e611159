import csv
import math

import numpy as np
import pytest

from lasd.bootstrap import BootstrapConfig
from lasd.criterion import check_lasd_exact
from lasd.simulate import (
    FAMILIES,
    RejectionTable,
    ScenarioSpec,
    _one_rep,
    _triangular_inverse,
    gen_normal_partial,
    gen_normal_point,
    gen_triangular,
    run_scenario,
)


def triangular_cdf(lower, mode, upper):
    def cdf(x):
        x = np.asarray(x, dtype=np.float64)
        up = (x - lower) ** 2 / ((upper - lower) * (mode - lower))
        down = 1.0 - (upper - x) ** 2 / ((upper - lower) * (upper - mode))
        out = np.where(x <= mode, up, down)
        return np.clip(out, 0.0, 1.0) * (x > lower) + 0.0

    return cdf


class TestGenerators:
    def test_normal_point_moments_and_determinism(self):
        a1, b1 = gen_normal_point(1.5, 4000, np.random.default_rng(0))
        a2, b2 = gen_normal_point(1.5, 4000, np.random.default_rng(0))
        assert np.array_equal(a1.values, a2.values)
        assert np.array_equal(b1.values, b2.values)
        assert a1.label == "A" and b1.label == "B"
        assert abs(a1.values.mean()) < 0.05
        assert abs(b1.values.mean() - 1.5) < 0.05
        assert abs(a1.values.std() - 1.0) < 0.05

    def test_triangular_support_and_median(self):
        a, b = gen_triangular(0.0, 5000, np.random.default_rng(1))
        assert a.values.min() >= -1.0 and a.values.max() <= 1.0
        assert abs(np.median(a.values)) < 0.03
        assert np.array_equal(a.values, np.sort(a.values))
        # eps = 0 makes the two populations identical
        assert b.values.min() >= -1.0 and b.values.max() <= 1.0

    def test_triangular_eps_range(self):
        rng = np.random.default_rng(2)
        gen_triangular(0.5, 10, rng)
        gen_triangular(-0.5, 10, rng)
        with pytest.raises(ValueError, match="eps"):
            gen_triangular(0.51, 10, rng)
        with pytest.raises(ValueError, match="eps"):
            gen_triangular(-0.6, 10, rng)

    def test_triangular_inverse_corners(self):
        u = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        got = _triangular_inverse(u, -1.0, 0.0, 1.0)
        # F(x) = (1+x)^2/2 on the left half, so F^{-1}(1/4) = sqrt(1/2) - 1
        assert got[0] == -1.0
        assert got[1] == pytest.approx(math.sqrt(0.5) - 1.0)
        assert got[2] == pytest.approx(0.0, abs=1e-15)
        assert got[4] == 1.0
        with pytest.raises(ValueError, match="corners"):
            _triangular_inverse(u, 1.0, 0.0, -1.0)
        with pytest.raises(ValueError, match="corners"):
            _triangular_inverse(u, 0.0, 0.0, 0.0)

    def test_triangular_population_ordering(self):
        # the stretched-and-tilted population dominates for positive eps
        # and breaks dominance for negative eps
        grid = np.linspace(0.0, 2.5, 8001)
        base = triangular_cdf(-1.0, 0.0, 1.0)
        wide = triangular_cdf(-1.25, -0.25, 1.25)
        narrow = triangular_cdf(-0.75, 0.25, 0.75)
        assert check_lasd_exact(base, wide, grid=grid).dominates
        assert not check_lasd_exact(base, narrow, grid=grid).dominates

    def test_normal_partial_labels(self):
        c, a, b = gen_normal_partial(2.0, 3000, np.random.default_rng(3))
        assert (c.label, a.label, b.label) == ("Control", "A", "B")
        assert abs(b.values.mean() - 2.0) < 0.06
        assert abs(c.values.mean()) < 0.06


class TestScenarioSpec:
    def test_family_and_kind_checks(self):
        with pytest.raises(ValueError, match="unknown family"):
            ScenarioSpec("cauchy_point", (0.0,), 50)
        with pytest.raises(ValueError, match="nonempty"):
            ScenarioSpec("normal_point", (), 50)
        with pytest.raises(ValueError, match="reps_mc"):
            ScenarioSpec("normal_point", (0.0,), 50, reps_mc=0)
        with pytest.raises(ValueError, match="normal_partial"):
            ScenarioSpec("normal_point", (0.0,), 50, kinds=("V3",))
        with pytest.raises(ValueError, match="two-sample"):
            ScenarioSpec("normal_partial", (0.0,), 50, kinds=("V1",))

    def test_kind_normalization(self):
        spec = ScenarioSpec("normal_point", (0.0,), 50, kinds=("v1", "fosd_ks"))
        assert spec.kinds == ("V1", "FOSD_KS")
        assert spec.parameter_grid == (0.0,)

    def test_families_constant(self):
        assert FAMILIES == ("normal_point", "triangular_point", "normal_partial")


class TestRejectionTable:
    def test_mc_se_consistency_enforced(self):
        row = {"parameter": 0.0, "kind": "V1", "rate": 0.25, "mc_se": 0.1}
        with pytest.raises(ValueError, match="mc_se"):
            RejectionTable("normal_point", 50, 10, 499, 0, (row,))
        row["mc_se"] = math.sqrt(0.25 * 0.75 / 10)
        RejectionTable("normal_point", 50, 10, 499, 0, (row,))

    def test_rate_bounds(self):
        row = {"parameter": 0.0, "kind": "V1", "rate": 1.5, "mc_se": 0.0}
        with pytest.raises(ValueError, match="rates"):
            RejectionTable("normal_point", 50, 10, 499, 0, (row,))


class TestRunScenario:
    SPEC = ScenarioSpec(
        "normal_point",
        (0.0, 3.0),
        n_per_sample=50,
        reps_mc=6,
        bootstrap=BootstrapConfig(reps=39, seed=11),
        kinds=("V1", "W1"),
    )

    def test_one_rep_deterministic(self):
        flags = _one_rep(self.SPEC, 1, 4)
        assert flags == _one_rep(self.SPEC, 1, 4)
        assert set(flags) == {"V1", "W1"}

    def test_table_shape_and_power_direction(self):
        table = run_scenario(self.SPEC)
        assert len(table.rows) == 4
        rates = {(r["parameter"], r["kind"]): r["rate"] for r in table.rows}
        # a B-sample three sigmas above A is an obvious violation
        assert rates[(3.0, "V1")] >= 0.5
        assert rates[(3.0, "V1")] >= rates[(0.0, "V1")]
        assert table.bootstrap_reps == 39

    def test_thread_count_invariance(self):
        t1 = run_scenario(self.SPEC, threads=1)
        t3 = run_scenario(self.SPEC, threads=3)
        assert t1.rows == t3.rows

    def test_csv_output(self, tmp_path):
        table = run_scenario(self.SPEC)
        path = tmp_path / "rates.csv"
        table.to_csv(path)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == [
            "family", "parameter", "n", "kind", "rate", "mc_se", "reps_mc", "R", "seed",
        ]
        assert len(rows) == 5
        got = rows[1]
        assert got[0] == "normal_point"
        assert float(got[1]) == 0.0
        assert got[2] == "50" and got[3] == "V1"
        # repr round-trips the rate and its standard error exactly
        assert float(got[4]) == table.rows[0]["rate"]
        assert float(got[5]) == table.rows[0]["mc_se"]
        assert got[6:] == ["6", "39", "11"]

    def test_partial_family_smoke(self):
        spec = ScenarioSpec(
            "normal_partial",
            (0.0,),
            n_per_sample=12,
            reps_mc=2,
            bootstrap=BootstrapConfig(reps=19, seed=0, grid_size=24),
            kinds=("V3", "W3"),
        )
        table = run_scenario(spec)
        assert {r["kind"] for r in table.rows} == {"V3", "W3"}

    def test_threads_validation(self):
        with pytest.raises(ValueError, match="threads"):
            run_scenario(self.SPEC, threads=0)
