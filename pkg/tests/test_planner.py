import math

import numpy as np
import pytest

from strategizer import (
    BimatrixGame,
    InputError,
    MWU,
    PreconditionError,
    Schedule,
    alternating_gain,
    alternating_plan,
    asymptotic_lower_bound,
    frank_wolfe,
    fw_rate_constant,
    game_value,
    hjb_residual,
    optimize_continuous,
    reward_bounds,
    reward_cont,
    simulate,
    unique_br_game,
)
from strategizer.planner import _objective_terms


def constant_schedule(x, total):
    return Schedule.constant(x, total, mode="continuous")


class TestRewardCont:
    def test_all_zeros(self):
        a = np.zeros((3, 4))
        sched = Schedule("continuous", ((2.0, [1, 0, 0]), (3.0, [0, 0.5, 0.5])))
        assert reward_cont(sched, None, 5.0, a, 0.7) == 0.0

    def test_matching_pennies_optimum_is_zero(self, mp_matrix):
        uniform = constant_schedule([0.5, 0.5], 10.0)
        assert abs(reward_cont(uniform, None, 10.0, mp_matrix, 0.5)) <= 1e-12
        skewed = constant_schedule([0.8, 0.2], 10.0)
        assert reward_cont(skewed, None, 10.0, mp_matrix, 0.5) < 0.0

    def test_depends_only_on_time_average(self, mp_matrix, rng):
        for _ in range(10):
            x1, x2 = rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(2))
            split = Schedule("continuous", ((1.0, x1), (1.0, x2)))
            merged = constant_schedule((x1 + x2) / 2, 2.0)
            swapped = Schedule("continuous", ((1.0, x2), (1.0, x1)))
            r = reward_cont(split, None, 2.0, mp_matrix, 0.9)
            assert abs(r - reward_cont(merged, None, 2.0, mp_matrix, 0.9)) <= 1e-12
            assert abs(r - reward_cont(swapped, None, 2.0, mp_matrix, 0.9)) <= 1e-12

    def test_rejects_general_sum(self):
        game = BimatrixGame([[1.0, 0.0]], [[1.0, 0.0]])
        sched = constant_schedule([1.0], 1.0)
        with pytest.raises(PreconditionError, match="B = -A"):
            reward_cont(sched, None, 1.0, game, 0.5)

    def test_horizon_mismatch(self, mp_matrix):
        with pytest.raises(InputError):
            reward_cont(constant_schedule([0.5, 0.5], 2.0), None, 3.0, mp_matrix, 0.5)


class TestOptimizeContinuous:
    def test_matching_pennies(self, mp_matrix):
        res = optimize_continuous(mp_matrix, None, 100.0, 0.5, 1e-6)
        assert np.allclose(res.x_star.weights, [0.5, 0.5], atol=1e-5)
        assert abs(res.r_star) <= 1e-6
        assert res.epsilon <= 1e-6
        assert res.iterations >= 1

    def test_all_zeros(self):
        res = optimize_continuous(np.zeros((3, 4)), None, 10.0, 1.0, 1e-6)
        assert res.r_star == 0.0

    def test_unique_br_example(self):
        a = unique_br_game(3)
        res = optimize_continuous(a, None, 50.0, 1.0, 1e-6)
        assert abs(res.r_star - (50.0 + math.log(6))) <= 0.01

    def test_fixed_step_variant(self, mp_matrix):
        res = optimize_continuous(mp_matrix, None, 5.0, 0.5, 1e-3, step="fixed", away=False)
        assert abs(res.r_star) <= 1e-3

    def test_epsilon_validated(self, mp_matrix):
        with pytest.raises(InputError):
            optimize_continuous(mp_matrix, None, 10.0, 0.5, 0.0)

    def test_bracket_on_random_games(self, rng):
        for _ in range(10):
            a = rng.uniform(-1, 1, size=(rng.integers(2, 5), rng.integers(2, 5)))
            eps = 1e-4
            res = optimize_continuous(a, None, 20.0, 0.5, eps)
            lo, hi = reward_bounds(a, 20.0, 0.5)
            assert lo - eps <= res.r_star <= hi + eps


class TestRewardBounds:
    def test_matching_pennies(self, mp_matrix):
        lo, hi = reward_bounds(mp_matrix, 100.0, 0.5)
        assert abs(lo) <= 1e-9
        assert abs(hi - 2 * math.log(2)) <= 1e-9

    def test_all_zeros(self):
        lo, hi = reward_bounds(np.zeros((2, 4)), 7.0, 1.0)
        assert lo == 0.0 and abs(hi - math.log(4)) <= 1e-12

    def test_2x2(self):
        lo, hi = reward_bounds(np.array([[2.0, 0.0], [0.0, 1.0]]), 10.0, 1.0)
        assert abs(lo - 20.0 / 3) <= 1e-8
        assert abs(hi - (20.0 / 3 + math.log(2))) <= 1e-8


class TestAsymptoticLowerBound:
    def test_matching_pennies_degenerates(self, mp_matrix):
        assert abs(asymptotic_lower_bound(mp_matrix, 100.0, 0.5)) <= 1e-9

    def test_unique_br_example(self):
        a = unique_br_game(3)
        want = 50.0 + math.log(6)
        assert abs(asymptotic_lower_bound(a, 50.0, 1.0) - want) <= 1e-8

    def test_all_zeros(self):
        assert abs(asymptotic_lower_bound(np.zeros((3, 3)), 10.0, 1.0)) <= 1e-12


class TestAlternatingPlan:
    def test_matching_pennies_default_delta(self, mp_matrix):
        plan = alternating_plan(mp_matrix)
        assert abs(plan.delta - 0.5) <= 1e-9
        assert np.allclose(np.sort(plan.x_odd.weights), [0.25, 0.75], atol=1e-9)
        assert np.allclose((plan.x_odd.weights + plan.x_even.weights) / 2, plan.base.weights, atol=1e-12)
        # sign conditions
        a = mp_matrix
        assert plan.x_odd.weights @ a[:, plan.i1] > plan.x_odd.weights @ a[:, plan.i2]
        assert plan.x_even.weights @ a[:, plan.i1] < plan.x_even.weights @ a[:, plan.i2]

    def test_full_delta_is_pure_alternation(self, mp_matrix):
        plan = alternating_plan(mp_matrix, delta_scale=1.0)
        assert set(map(tuple, [plan.x_odd.weights, plan.x_even.weights])) == {
            (1.0, 0.0), (0.0, 1.0),
        }
        game = BimatrixGame.from_zero_sum(mp_matrix)
        traj = simulate(game, plan.to_schedule(1000), MWU, eta=0.1)
        assert abs(traj.totals[0] - 500 * math.tanh(0.1)) <= 1e-9

    def test_pair_reward_beats_value(self, mp_matrix):
        plan = alternating_plan(mp_matrix)  # default half perturbation
        game = BimatrixGame.from_zero_sum(mp_matrix)
        traj = simulate(game, plan.to_schedule(2), MWU, eta=0.3)
        assert traj.totals[0] > 2 * game_value(mp_matrix).value

    def test_odd_horizon_plays_base_last(self, mp_matrix):
        plan = alternating_plan(mp_matrix)
        sched = plan.to_schedule(5)
        rows = sched.round_strategies()
        assert np.array_equal(rows[-1], plan.base.weights)

    def test_assumption_failure_raises(self):
        with pytest.raises(PreconditionError, match="no-pure"):
            alternating_plan(np.zeros((2, 2)))

    def test_gain_positive(self, mp_matrix):
        gain = alternating_gain(mp_matrix, 0.2, 400)
        assert gain > 0


class TestHjbResidual:
    def test_all_zeros_exact(self):
        assert hjb_residual(np.zeros(3), 2.0, np.zeros((3, 3)), 0.5, 1e-4) == 0.0

    def test_matching_pennies_point(self, mp_matrix):
        assert hjb_residual(np.zeros(2), 5.0, mp_matrix, 0.5, 1e-4) <= 1e-3

    def test_random_points(self, rng):
        a = rng.uniform(-1, 1, size=(3, 3))
        for _ in range(10):
            h = rng.uniform(-1, 1, size=3)
            t = float(rng.uniform(1.0, 4.0))
            assert hjb_residual(h, t, a, 0.5, 1e-4) <= 1e-3

    def test_small_t_rejected(self, mp_matrix):
        with pytest.raises(InputError):
            hjb_residual(np.zeros(2), 1e-5, mp_matrix, 0.5, 1e-4)


class TestFrankWolfe:
    def test_linesearch_objective_monotone(self, rng):
        a = rng.uniform(-1, 1, size=(4, 5))
        z0, mat = _objective_terms(a, np.zeros(5), 20.0, 0.5)
        _, gap, _, log = frank_wolfe(z0, mat, gap_target=1e-9, log_objective=True)
        assert gap <= 1e-9
        diffs = np.diff(np.array(log))
        assert np.all(diffs <= 1e-12)

    def test_fixed_step_rate_bound(self, rng):
        eta, big_t = 0.5, 5.0
        for _ in range(3):
            a = rng.uniform(-1, 1, size=(3, 4))
            z0, mat = _objective_terms(a, np.zeros(4), big_t, eta)
            x_ref, _, _, _ = frank_wolfe(z0, mat, gap_target=1e-11)
            f_ref = float(np.logaddexp.reduce(z0 + mat @ x_ref))
            cert = fw_rate_constant(a, big_t, eta)
            _, _, _, log = frank_wolfe(
                z0, mat, gap_target=0.0, step="fixed", max_iter=200,
                log_objective=True, raise_on_cap=False,
            )
            for s in range(1, len(log)):
                assert log[s] - f_ref <= 2.0 * cert / (s + 1)

    def test_gradient_matches_finite_differences(self, rng):
        a = rng.uniform(-1, 1, size=(4, 4))
        z0, mat = _objective_terms(a, np.zeros(4), 10.0, 0.5)
        for _ in range(5):
            x = rng.dirichlet(np.ones(4))
            p = np.exp(z0 + mat @ x - np.max(z0 + mat @ x))
            p /= p.sum()
            grad = mat.T @ p
            fd = np.zeros(4)
            delta = 1e-6
            for i in range(4):
                e = np.zeros(4)
                e[i] = delta
                fp = np.logaddexp.reduce(z0 + mat @ (x + e))
                fm = np.logaddexp.reduce(z0 + mat @ (x - e))
                fd[i] = (fp - fm) / (2 * delta)
            assert np.linalg.norm(fd - grad) <= 1e-5 * max(1.0, np.linalg.norm(grad))


class TestDiscreteVsContinuous:
    def test_discrete_dominance(self, rng):
        for _ in range(5):
            a = rng.uniform(-1, 1, size=(3, 3))
            game = BimatrixGame.from_zero_sum(a)
            res = optimize_continuous(a, None, 50.0, 0.5, 1e-6)
            cont = reward_cont(constant_schedule(res.x_star, 50.0), None, 50.0, a, 0.5)
            disc = simulate(game, Schedule.constant(res.x_star, 50), MWU, eta=0.5)
            assert disc.totals[0] >= cont - 1e-9

    def test_gap_ceiling(self, rng):
        for _ in range(5):
            a = rng.uniform(-1, 1, size=(3, 3))
            game = BimatrixGame.from_zero_sum(a)
            eta, rounds, eps = 0.5, 50, 1e-4
            res = optimize_continuous(a, None, float(rounds), eta, eps)
            for _ in range(5):
                plays = rng.dirichlet(np.ones(3), size=rounds)
                traj = simulate(game, Schedule.from_rounds(plays), MWU, eta=eta)
                assert traj.totals[0] <= res.r_star + 2 * eps + eta * rounds / 2
