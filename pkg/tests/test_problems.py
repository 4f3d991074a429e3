import numpy as np
import pytest

from dascmop.core import overall_violation
from dascmop.metrics import feasible_ratio_mc
from dascmop.problems import (
    _dist_rastrigin2,
    constraint_count,
    make_problem,
    parse_problem_name,
    unconstrained_pf_point,
)


class TestEvaluate:
    def test_cmop1_distance_vanishes_by_construction(self):
        inst = make_problem(1, (0, 0, 0))
        x = np.empty(30)
        x[0] = 0.5
        x[2::2] = np.sin(0.25 * np.pi)  # odd 1-based indices >= 3
        x[1::2] = np.cos(0.25 * np.pi)  # even 1-based indices
        f, _ = inst.evaluate(x)
        assert f == pytest.approx([0.5, 0.75], abs=1e-12)

    def test_cmop4_minimum_at_half(self):
        inst = make_problem(4, (0, 0, 0))
        x = np.full(30, 0.5)
        x[0] = 0.3
        f, _ = inst.evaluate(x)
        assert f == pytest.approx([0.3, 1 - 0.3**2], abs=1e-9)

    def test_cmop7_simplex_corner(self):
        inst = make_problem(7, (0, 0, 0))
        x = np.full(30, 0.5)
        x[0] = x[1] = 1.0
        f, _ = inst.evaluate(x)
        assert f == pytest.approx([1.0, 0.0, 0.0], abs=1e-9)

    def test_deterministic(self):
        inst = make_problem(9, (0.5, 0.5, 0.5))
        x = np.random.default_rng(3).random(30)
        f1, c1 = inst.evaluate(x)
        f2, c2 = inst.evaluate(x)
        assert np.array_equal(f1, f2) and np.array_equal(c1, c2)

    def test_out_of_bounds_rejected(self):
        inst = make_problem(1, (0, 0, 0))
        x = np.full(30, 0.5)
        x[3] = 1.01
        with pytest.raises(ValueError):
            inst.evaluate(x)


class TestConstraintCounts:
    @pytest.mark.parametrize("pid,count", [(1, 12), (2, 12), (3, 12), (4, 11), (5, 11), (6, 11), (7, 7), (8, 7), (9, 7)])
    def test_counts(self, pid, count):
        assert constraint_count(make_problem(pid, (0.5, 0.5, 0.5))) == count


class TestUnconstrainedFront:
    def test_cmop1_convex(self):
        inst = make_problem(1, (0, 0, 0))
        assert unconstrained_pf_point(inst, 0.5) == pytest.approx([0.5, 0.75])

    def test_cmop2_concave(self):
        inst = make_problem(2, (0, 0, 0))
        assert unconstrained_pf_point(inst, 0.25) == pytest.approx([0.25, 0.5])

    def test_cmop8_sphere_pole(self):
        inst = make_problem(8, (0, 0, 0))
        assert unconstrained_pf_point(inst, (0, 0)) == pytest.approx([1.0, 0.0, 0.0])

    def test_parameter_validation(self):
        inst = make_problem(1, (0, 0, 0))
        with pytest.raises(ValueError):
            unconstrained_pf_point(inst, (0.5, 0.5))
        with pytest.raises(ValueError):
            unconstrained_pf_point(inst, 1.5)


class TestDistanceProperties:
    def test_rastrigin_distance_nonnegative_over_box(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            g = _dist_rastrigin2(rng.random((100_000, 30)))
            assert np.all(g >= 0)
        assert _dist_rastrigin2(np.full((1, 30), 0.5))[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_band_membership_at_feasible_points(self):
        # any feasible point of DAS-CMOP1 with Type-II active has g1, g2 in [d, e]
        inst = make_problem(1, (0, 0.25, 0))
        rng = np.random.default_rng(5)
        x = rng.random((20_000, 30))
        f, c = inst.evaluate_batch(x)
        feasible = (c >= 0).all(axis=1)
        assert feasible.any()
        alpha = inst.pf_shape(x[feasible, :1])
        beta = f[feasible] - alpha
        assert np.all(beta >= inst.params.d - 1e-12)
        assert np.all(beta <= inst.params.e + 1e-12)


class TestFeasibleRatios:
    def test_zero_triplet_fully_feasible(self):
        for pid in (1, 4, 7):
            assert feasible_ratio_mc(make_problem(pid, (0, 0, 0)), 10_000, seed=0) == 1.0

    def test_collapsed_band_measure_zero(self):
        assert feasible_ratio_mc(make_problem(1, (0, 1.0, 0)), 10_000, seed=0) == 0.0

    def test_deterministic_given_seed(self):
        inst = make_problem(1, (0, 0.5, 0))
        a = feasible_ratio_mc(inst, 5000, seed=123)
        b = feasible_ratio_mc(inst, 5000, seed=123)
        assert a == b

    def test_violation_matches_constraints(self):
        inst = make_problem(3, (0.5, 0.5, 0.5))
        rng = np.random.default_rng(9)
        for x in rng.random((20, 30)):
            _, c = inst.evaluate(x)
            assert overall_violation(c) == pytest.approx(-np.minimum(c, 0).sum())


class TestNaming:
    def test_parse(self):
        assert parse_problem_name("das-cmop3") == 3
        assert parse_problem_name("DASCMOP7") == 7
        assert parse_problem_name("5") == 5
        with pytest.raises(ValueError):
            parse_problem_name("das-cmop10")
        with pytest.raises(ValueError):
            parse_problem_name("zdt1")
