import math

import numpy as np
import pytest

from lasd.contact import (
    SetEstimate,
    TuningSequences,
    contact_set_partial,
    contact_sets_point,
    default_tuning,
    eps_maximizer_sets_partial,
    eps_maximizer_sets_point,
)
from lasd.ecdf import StepFunction, evaluation_set_from_values


def step_on(points, values):
    return StepFunction.from_grid(np.asarray(points, dtype=np.float64), np.asarray(values, dtype=np.float64))


GRID = evaluation_set_from_values(np.array([1.0, 2.0, 3.0]))  # points 0,1,2,3


class TestTuning:
    def test_frozen_values_at_200(self):
        t = default_tuning(200)
        assert t.a_n == 0.4716089101404253
        assert t.b_n == 0.09130688068654681
        assert t.c_n == t.b_n and t.d_n == t.b_n
        assert t.n == 200

    def test_multipliers(self):
        loglog = math.log(math.log(200))
        t = default_tuning(200, a_mult=2.0, b_mult=0.5, c_mult=3.0, d_mult=4.0)
        assert t.a_n == 2.0 * 4.0 * loglog / math.sqrt(200)
        assert t.b_n == 0.5 * math.sqrt(loglog / 200)
        assert t.c_n == 3.0 * math.sqrt(loglog / 200)
        assert t.d_n == 4.0 * math.sqrt(loglog / 200)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError, match=r"log\(log n\)"):
            default_tuning(7)
        default_tuning(8)  # boundary is allowed

    def test_positive_required(self):
        with pytest.raises(ValueError, match="positive"):
            TuningSequences(a_n=0.0, b_n=0.1, c_n=0.1, d_n=0.1, n=10)


class TestSetEstimate:
    def test_kind_validated(self):
        with pytest.raises(ValueError, match="kind"):
            SetEstimate(mask=np.array([True]), kind="argmax")

    def test_size_and_indices_1d(self):
        s = SetEstimate(mask=np.array([True, False, True]), kind="contact")
        assert s.size == 2
        assert np.array_equal(s.indices, [0, 2])

    def test_indices_2d(self):
        s = SetEstimate(mask=np.array([[False, True], [True, False]]), kind="eps_max")
        assert s.size == 2
        assert np.array_equal(s.indices, [[0, 1], [1, 0]])


class TestContactSetsPoint:
    def test_hand_masks(self):
        m1 = step_on(GRID.points, [0.0, -0.05, -0.5, -0.2])
        m2 = step_on(GRID.points, [-0.01, -0.3, -0.02, -1.0])
        s1, s2 = contact_sets_point(m1, m2, GRID, a_n=0.1)
        assert np.array_equal(s1.mask, [True, True, False, False])
        assert np.array_equal(s2.mask, [True, False, True, False])
        assert not s1.fallback_used and not s2.fallback_used
        assert np.array_equal(s1.points, [0.0, 1.0])
        assert s1.kind == "contact"

    def test_both_empty_falls_back_to_full_grid(self):
        far = step_on(GRID.points, [-5.0, -4.0, -3.0, -2.0])
        s1, s2 = contact_sets_point(far, far, GRID, a_n=0.1)
        assert s1.fallback_used and s2.fallback_used
        assert s1.size == GRID.points.size and s2.size == GRID.points.size

    def test_single_empty_stays_empty(self):
        near = step_on(GRID.points, [0.0, -5.0, -5.0, -5.0])
        far = step_on(GRID.points, [-5.0, -5.0, -5.0, -5.0])
        s1, s2 = contact_sets_point(near, far, GRID, a_n=0.1)
        assert s1.size == 1
        assert s2.size == 0
        assert not s2.fallback_used


class TestEpsMaximizerSetsPoint:
    def test_masks_and_selector_one(self):
        m1 = step_on(GRID.points, [0.1, 0.45, 0.5, -1.0])
        m2 = step_on(GRID.points, [-0.2, -0.6, -0.25, -0.21])
        s1, s2, selected = eps_maximizer_sets_point(m1, m2, GRID, b_n=0.1, c_n=0.5)
        assert np.array_equal(s1.mask, [False, True, True, False])
        assert np.array_equal(s2.mask, [True, False, True, True])
        assert selected == "1"  # max gap 0.7 exceeds c_n

    def test_selector_two_and_both(self):
        lo = step_on(GRID.points, [-1.0, -1.0, -0.9, -1.0])
        hi = step_on(GRID.points, [0.0, -1.0, -1.0, -1.0])
        _, _, selected = eps_maximizer_sets_point(lo, hi, GRID, b_n=0.1, c_n=0.5)
        assert selected == "2"
        _, _, selected = eps_maximizer_sets_point(lo, hi, GRID, b_n=0.1, c_n=0.95)
        assert selected == "both"  # gap 0.9 within c_n

    def test_never_empty(self):
        m = step_on(GRID.points, [-9.0, -8.0, -7.5, -9.5])
        s1, s2, _ = eps_maximizer_sets_point(m, m, GRID, b_n=1e-6, c_n=0.1)
        assert s1.size >= 1 and s2.size >= 1
        assert s1.mask[2]  # argmax always included


class TestContactSetPartial:
    def test_hand_mask(self):
        x = np.array([0.0, 1.0, 2.0])
        t3 = step_on(x, [-0.05, -0.5, 0.0])
        s = contact_set_partial(t3, x, a_n=0.1)
        assert np.array_equal(s.mask, [True, False, True])
        assert not s.fallback_used

    def test_fallback(self):
        x = np.array([0.0, 1.0, 2.0])
        t3 = step_on(x, [-1.0, -1.0, -1.0])
        s = contact_set_partial(t3, x, a_n=0.1)
        assert s.fallback_used and s.size == 3


class TestEpsMaximizerSetsPartial:
    def test_hand_masks(self):
        g1 = np.array([[0.0, -0.2, -0.05], [-1.0, -0.3, -0.4]])
        g2 = np.zeros((2, 3))
        g3 = np.array([[-0.5, -0.5, -0.5], [0.2, 0.1, 0.0]])
        g4 = np.array([[0.1, 0.0, 0.0], [0.0, 0.0, 0.0]])
        per_coord, joint = eps_maximizer_sets_partial((g1, g2, g3, g4), b_n=0.1, d_n=0.25)
        assert np.array_equal(per_coord[0].mask, [[True, False, True], [False, True, True]])
        assert np.array_equal(per_coord[1].mask, np.ones((2, 3), dtype=bool))
        assert np.array_equal(per_coord[2].mask, [[True, True, True], [True, True, False]])
        assert np.array_equal(per_coord[3].mask, np.ones((2, 3), dtype=bool))
        # four-term sum peaks at -0.2 in cell (1,1); within 0.25 of that
        assert np.array_equal(joint.mask, [[True, False, False], [False, True, True]])
        assert joint.kind == "eps_max"

    def test_every_row_keeps_its_argmax(self):
        rng = np.random.default_rng(3)
        grids = [rng.normal(size=(5, 11)) for _ in range(4)]
        per_coord, joint = eps_maximizer_sets_partial(grids, b_n=1e-9, d_n=1e-9)
        for g, s in zip(grids, per_coord):
            assert np.array_equal(s.mask.sum(axis=1), np.ones(5, dtype=int))
            assert np.all(np.take_along_axis(g, np.argmax(g, axis=1)[:, None], 1).ravel() == g[s.mask])
        assert joint.size >= 1

    def test_shape_validation(self):
        good = np.zeros((2, 3))
        with pytest.raises(ValueError, match="four arrays"):
            eps_maximizer_sets_partial((good, good, good), b_n=0.1, d_n=0.1)
        with pytest.raises(ValueError, match="four arrays"):
            eps_maximizer_sets_partial((good, good, good, np.zeros((3, 2))), b_n=0.1, d_n=0.1)
