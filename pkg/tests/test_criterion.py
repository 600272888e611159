import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lasd.criterion import (
    DiscreteDistribution,
    GridMismatchError,
    ValueFunction,
    ValueFunctionError,
    check_lasd_exact,
    criterion_eval,
    evaluate_svf,
    fosd_process,
    mean_gap,
    named_value_functions,
    t1_process,
    t2_process,
)
from lasd.ecdf import Sample, build_ecdf, build_evaluation_set

# Worked discrete distribution: half the mass is a loss of 2, the rest gains.
GAINS_LOSSES = DiscreteDistribution.from_pairs([(-2.0, 0.5), (1.0, 0.25), (3.0, 0.25)])

# Cube-root aggregate of GAINS_LOSSES, frozen from an independent computation:
# 0.5*(-2)^(1/3)... evaluated as -0.5*2**(1/3) + 0.25 + 0.25*3**(1/3).
SIGNED_CBRT_VALUE = -0.01939813237058452


def uniform_pair_cdf(y: float):
    """CDF of the uniform distribution on [-1-y, -y] union [y, 1+y]."""

    def cdf(x):
        x = np.asarray(x, dtype=np.float64)
        return 0.5 * np.clip(x + 1.0 + y, 0.0, 1.0) + 0.5 * np.clip(x - y, 0.0, 1.0)

    return cdf


class TestValueFunctions:
    def test_named_set(self):
        fns = named_value_functions()
        assert set(fns) == {"cube", "signed_cbrt", "linear"}
        for vf in fns.values():
            vf.validate()

    def test_sign_violation(self):
        with pytest.raises(ValueFunctionError, match="sign"):
            ValueFunction(eval=lambda x: x + 1.0).validate()

    def test_monotonicity_violation(self):
        # odd, sign-correct, but dips where 1 + 2*cos(4x) < 0
        wavy = ValueFunction(eval=lambda x: x + 0.5 * np.sin(4.0 * x))
        with pytest.raises(ValueFunctionError, match="monotonicity"):
            wavy.validate()

    def test_loss_aversion_violation(self):
        # gains valued at twice the slope of losses
        gain_loving = ValueFunction(eval=lambda x: 2.0 * x if x > 0 else x)
        with pytest.raises(ValueFunctionError, match="loss_aversion"):
            gain_loving.validate()

    def test_derivative_used_when_given(self):
        # eval alone looks fine; the supplied derivative betrays the violation
        vf = ValueFunction(eval=lambda x: x, deriv=lambda x: 2.0 if x > 0 else 1.0)
        with pytest.raises(ValueFunctionError, match="loss_aversion"):
            vf.validate()


class TestDiscreteDistribution:
    def test_cdf_and_left_limit(self):
        d = GAINS_LOSSES
        assert d.cdf(-2.0) == 0.5
        assert d.cdf_left(-2.0) == 0.0
        assert d.cdf(0.0) == 0.5
        assert d.cdf(1.0) == 0.75
        assert d.cdf(10.0) == 1.0
        assert np.array_equal(d.cdf(np.array([-3.0, 2.0])), [0.0, 0.75])

    def test_validation(self):
        with pytest.raises(ValueError, match="sum to 1"):
            DiscreteDistribution(np.array([0.0, 1.0]), np.array([0.5, 0.4]))
        with pytest.raises(ValueError, match="positive"):
            DiscreteDistribution(np.array([0.0, 1.0]), np.array([1.1, -0.1]))
        with pytest.raises(ValueError, match="distinct"):
            DiscreteDistribution(np.array([1.0, 1.0]), np.array([0.5, 0.5]))

    def test_sorts_locations(self):
        d = DiscreteDistribution(np.array([3.0, -1.0]), np.array([0.25, 0.75]))
        assert np.array_equal(d.locations, [-1.0, 3.0])


class TestEvaluateSvf:
    def test_cube_worked_value(self):
        v = named_value_functions()["cube"]
        assert evaluate_svf(GAINS_LOSSES, v) == pytest.approx(3.0, abs=1e-12)

    def test_signed_cbrt_worked_value(self):
        v = named_value_functions()["signed_cbrt"]
        got = evaluate_svf(GAINS_LOSSES, v)
        assert got == pytest.approx(SIGNED_CBRT_VALUE, abs=1e-12)

    def test_linear_is_mean(self):
        v = named_value_functions()["linear"]
        d = DiscreteDistribution(np.array([-1.0, 2.0]), np.array([0.5, 0.5]))
        assert evaluate_svf(d, v) == pytest.approx(0.5)

    def test_check_flag(self):
        bad = ValueFunction(eval=lambda x: -x)
        with pytest.raises(ValueFunctionError):
            evaluate_svf(GAINS_LOSSES, bad, check=True)
        # check=False evaluates anyway
        assert evaluate_svf(GAINS_LOSSES, bad, check=False) == pytest.approx(-0.0)


class TestCriterionProcesses:
    """Two opposite two-point samples; all values worked out by hand.

    A = {-1, 2} against B = {-2, 1}: a gain of 2 versus a loss of 2 in the
    tails, so A dominates.  Swapping the samples flips every sign that
    matters and breaks dominance with a unit-height violation.
    """

    def _fixture(self, flip=False):
        a_vals, b_vals = ([-1.0, 2.0], [-2.0, 1.0]) if not flip else ([-2.0, 1.0], [-1.0, 2.0])
        a = Sample.from_values(a_vals, "A")
        b = Sample.from_values(b_vals, "B")
        grid = build_evaluation_set([a, b])
        return build_ecdf(a), build_ecdf(b), grid

    def test_grid_points(self):
        _, _, grid = self._fixture()
        eps = grid.eps
        assert np.allclose(grid.points, [0.0, 1.0, 1.0 + eps, 2.0, 2.0 + 2 * eps])

    def test_dominant_direction_values(self):
        fa, fb, grid = self._fixture()
        t1 = t1_process(fa, fb, grid)
        assert np.array_equal(t1.values[1:], [0.0, 0.0, -0.5, -0.5, 0.0])
        m1, m2 = t2_process(fa, fb, grid)
        assert np.array_equal(m1.values[1:], [0.0, 0.0, -0.5, -0.5, 0.0])
        assert np.array_equal(m2.values[1:], [0.0, -0.5, -1.0, -0.5, 0.0])
        assert t1.evaluate(1.5) == -0.5

    def test_reversed_direction_values(self):
        fa, fb, grid = self._fixture(flip=True)
        t1 = t1_process(fa, fb, grid)
        assert np.array_equal(t1.values[1:], [0.0, 0.5, 1.0, 0.5, 0.0])

    def test_envelope_identity_is_bitwise(self):
        for flip in (False, True):
            fa, fb, grid = self._fixture(flip)
            ce = criterion_eval(fa, fb, grid)
            assert np.array_equal(
                ce.t1.values, np.maximum(ce.t2_m1.values, ce.t2_m2.values)
            )

    @given(
        st.lists(st.floats(min_value=-8, max_value=8, allow_nan=False), min_size=1, max_size=25),
        st.lists(st.floats(min_value=-8, max_value=8, allow_nan=False), min_size=1, max_size=25),
    )
    @settings(max_examples=80, deadline=None)
    def test_envelope_identity_random(self, a_vals, b_vals):
        a = Sample.from_values(a_vals, "A")
        b = Sample.from_values(b_vals, "B")
        grid = build_evaluation_set([a, b])
        ce = criterion_eval(build_ecdf(a), build_ecdf(b), grid)
        assert np.array_equal(ce.t1.values, np.maximum(ce.t2_m1.values, ce.t2_m2.values))

    def test_grid_mismatch_raises(self):
        fa, fb, _ = self._fixture()
        short = build_evaluation_set([Sample.from_values([0.5], "A")])
        with pytest.raises(GridMismatchError):
            t1_process(fa, fb, short)

    def test_identical_samples_zero_processes(self):
        a = Sample.from_values([-1.0, 0.0, 2.5], "A")
        b = Sample.from_values([-1.0, 0.0, 2.5], "B")
        grid = build_evaluation_set([a, b])
        ce = criterion_eval(build_ecdf(a), build_ecdf(b), grid)
        assert np.all(ce.t1.values == 0.0)
        assert np.all(ce.t2_m1.values == 0.0)
        assert np.all(ce.t2_m2.values == 0.0)


class TestCheckLasdExact:
    def test_hand_fixture_orders(self):
        a = build_ecdf(Sample.from_values([-1.0, 2.0], "A"))
        b = build_ecdf(Sample.from_values([-2.0, 1.0], "B"))
        ok = check_lasd_exact(a, b)
        assert ok.dominates and ok.violated_at.size == 0
        bad = check_lasd_exact(b, a)
        assert not bad.dominates
        assert bad.violated_at[0] == 1.0  # first violated grid point

    def test_uniform_pair_family(self):
        # the y-indexed family is ordered by y, with the envelope exactly 0
        grid = np.linspace(0.0, 2.0, 4001)
        low, high = uniform_pair_cdf(0.25), uniform_pair_cdf(0.5)
        assert check_lasd_exact(low, high, grid=grid).dominates
        rev = check_lasd_exact(high, low, grid=grid)
        assert not rev.dominates
        # violation opens just past 0.25 and plateaus at 0.125 on [0.5, 1.25]
        assert rev.violated_at.min() == pytest.approx(0.25, abs=1e-3)

    def test_discrete_inputs_default_grid(self):
        gains = DiscreteDistribution(np.array([1.0, 2.0]), np.array([0.5, 0.5]))
        status_quo = DiscreteDistribution(np.array([0.0]), np.array([1.0]))
        assert check_lasd_exact(gains, status_quo).dominates
        assert not check_lasd_exact(status_quo, gains).dominates

    def test_callables_need_grid(self):
        with pytest.raises(ValueError, match="grid"):
            check_lasd_exact(lambda x: x, lambda x: x)


class TestMeanGapAndFosd:
    def test_mean_gap(self):
        a = Sample.from_values([0.0, 2.0], "A")
        b = Sample.from_values([1.0, 1.0], "B")
        assert mean_gap(a, b) == 0.0
        assert mean_gap(Sample.from_values([3.0], "A"), b) == 2.0

    def test_fosd_process_values(self):
        ga = build_ecdf(Sample.from_values([1.0, 3.0], "A"))
        gb = build_ecdf(Sample.from_values([2.0, 4.0], "B"))
        levels = np.array([1.0, 2.0, 3.0, 4.0])
        d = fosd_process(ga, gb, levels)
        assert np.array_equal(d.values[1:], [0.5, 0.0, 0.5, 0.0])

    def test_fosd_grid_must_span(self):
        ga = build_ecdf(Sample.from_values([1.0, 3.0], "A"))
        gb = build_ecdf(Sample.from_values([2.0, 4.0], "B"))
        with pytest.raises(GridMismatchError):
            fosd_process(ga, gb, np.array([1.0, 2.0, 3.0]))
