import itertools

import cvxpy as cp
import numpy as np
import pytest

from apps.auto_binning.application.optimization import prox_group, prox_penalty, prox_tv1d
from apps.auto_binning.domain import PenaltyParams


def _objective(u: np.ndarray, v: np.ndarray, lambda1: float, lambda2: float) -> float:
    return 0.5 * float(np.sum((u - v) ** 2)) + lambda1 * float(np.abs(np.diff(u)).sum()) + lambda2 * float(np.linalg.norm(u))


def _enumerate_penalty_prox(v: np.ndarray, lambda1: float, lambda2: float) -> np.ndarray:
    """
    Exact minimiser by enumerating every fused-block layout and jump sign pattern.

    With blocks and signs fixed the fused term is linear, so the block values
    solve a weighted group shrink in closed form. The minimiser is one of these
    candidates and every candidate is feasible, so the lowest objective wins.
    """
    best, best_value = np.zeros_like(v), _objective(np.zeros_like(v), v, lambda1, lambda2)
    for jumps in itertools.product((False, True), repeat=v.size - 1):
        labels = np.concatenate(([0], np.cumsum(jumps, dtype=np.int64)))
        blocks = int(labels[-1]) + 1
        sizes = np.bincount(labels).astype(np.float64)
        means = np.bincount(labels, weights=v) / sizes

        for signs in itertools.product((-1.0, 1.0), repeat=blocks - 1):
            padded = np.concatenate(([0.0], signs, [0.0]))
            shifted = means - lambda1 * (padded[:-1] - padded[1:]) / sizes
            scaled = np.sqrt(sizes) * shifted
            norm = float(np.linalg.norm(scaled))
            shrink = max(0.0, 1.0 - lambda2 / norm) if norm > 0.0 else 0.0
            candidate = (shrink * scaled / np.sqrt(sizes))[labels]

            value = _objective(candidate, v, lambda1, lambda2)
            if value < best_value:
                best, best_value = candidate, value
    return best


def _solve_penalty_prox(v: np.ndarray, lambda1: float, lambda2: float) -> tuple[np.ndarray, str]:
    u = cp.Variable(v.size)
    objective = 0.5 * cp.sum_squares(u - v) + lambda2 * cp.norm(u, 2)
    if v.size > 1:
        objective = objective + lambda1 * cp.norm1(cp.diff(u))
    problem = cp.Problem(cp.Minimize(objective))
    problem.solve(solver=cp.CLARABEL)
    return np.asarray(u.value), problem.status

def test_tv_two_entries():
    np.testing.assert_allclose(prox_tv1d(np.array([0.0, 3.0]), 1.0), [1.0, 2.0])

    fused = prox_tv1d(np.array([0.0, 3.0]), 1.5)
    assert fused[0] == fused[1]
    np.testing.assert_allclose(fused, [1.5, 1.5])


def test_tv_large_threshold_returns_mean():
    v = np.array([1.0, 2.0, 3.0, -4.0, 8.0])

    u = prox_tv1d(v, 100.0)

    assert np.unique(u).size == 1
    np.testing.assert_allclose(u, np.full(5, v.mean()))


@pytest.mark.parametrize("v", [np.array([2.5]), np.full(6, -1.25), np.array([3.0, 1.0, 2.0])])
def test_tv_identity_cases(v):
    np.testing.assert_array_equal(prox_tv1d(v, 0.0), v)
    if np.all(v == v[0]):
        np.testing.assert_array_equal(prox_tv1d(v, 7.0), v)


def test_tv_does_not_alias_input():
    v = np.array([1.0, 1.0])

    u = prox_tv1d(v, 0.3)
    u[0] = 5.0

    assert v[0] == 1.0


def test_group_shrinks_radially():
    np.testing.assert_allclose(prox_group(np.array([3.0, 4.0]), 1.0), [2.4, 3.2])
    np.testing.assert_array_equal(prox_group(np.array([3.0, 4.0]), 5.0), [0.0, 0.0])
    np.testing.assert_array_equal(prox_group(np.array([3.0, 4.0]), 6.0), [0.0, 0.0])


def test_penalty_prox_matches_enumeration(rng):
    worst = 0.0
    for _ in range(1000):
        size = int(rng.integers(1, 7))
        v = rng.normal(scale=2.0, size=size)
        lambda1, lambda2 = rng.uniform(0.0, 2.0, size=2)
        params = PenaltyParams(lambda1=lambda1, lambda2=lambda2, group_weights=(1.0,))

        (u,) = prox_penalty([v], 1.0, params)
        worst = max(worst, float(np.max(np.abs(u - _enumerate_penalty_prox(v, lambda1, lambda2)))))

    assert worst <= 1e-6


def test_penalty_prox_never_loses_to_convex_solver(rng):
    for _ in range(200):
        size = int(rng.integers(1, 7))
        v = rng.normal(scale=2.0, size=size)
        lambda1, lambda2 = rng.uniform(0.0, 2.0, size=2)
        params = PenaltyParams(lambda1=lambda1, lambda2=lambda2, group_weights=(1.0,))

        (u,) = prox_penalty([v], 1.0, params)
        reference, status = _solve_penalty_prox(v, lambda1, lambda2)
        assert status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)

        gap = _objective(reference, v, lambda1, lambda2) - _objective(u, v, lambda1, lambda2)
        assert gap >= -1e-9
        # the objective is 1-strongly convex, so any point sits within sqrt(2 gap) of the minimiser
        assert float(np.sum((u - reference) ** 2)) <= 2.0 * max(gap, 0.0) + 1e-9


def test_literal_prox_examples():
    np.testing.assert_allclose(prox_tv1d(np.array([1.0, -1.0]), 0.5), [0.5, -0.5], rtol=0, atol=1e-15)
    np.testing.assert_array_equal(prox_tv1d(np.array([5.0, -2.0, 7.0]), 0.0), [5.0, -2.0, 7.0])
    np.testing.assert_allclose(prox_group(np.array([3.0, 4.0]), 2.5), [1.5, 2.0], rtol=0, atol=1e-15)

    (single,) = prox_penalty([np.array([1.0, -1.0])], 1.0, PenaltyParams(lambda1=0.5, lambda2=0.0, group_weights=(1.0,)))
    np.testing.assert_allclose(single, [0.5, -0.5], rtol=0, atol=1e-15)


def test_tv_three_points_against_enumeration():
    v = np.array([0.0, 3.0, 0.0])

    np.testing.assert_allclose(prox_tv1d(v, 1.0), _enumerate_penalty_prox(v, 1.0, 0.0), rtol=0, atol=1e-12)
    np.testing.assert_allclose(prox_tv1d(v, 1.0), [1.0, 1.0, 1.0], rtol=0, atol=1e-12)


def test_penalty_prox_reduces_to_components(rng):
    for _ in range(50):
        v = rng.normal(size=int(rng.integers(2, 9)))
        t = float(rng.uniform(0.0, 1.5))

        (tv_only,) = prox_penalty([v], 2.0, PenaltyParams(lambda1=t, lambda2=0.0, group_weights=(1.0,)))
        (group_only,) = prox_penalty([v], 2.0, PenaltyParams(lambda1=0.0, lambda2=t, group_weights=(3.0,)))

        np.testing.assert_array_equal(tv_only, prox_tv1d(v, 2.0 * t))
        np.testing.assert_array_equal(group_only, prox_group(v, 6.0 * t))


def test_penalty_prox_is_colinear_with_tv_prox(rng):
    v = rng.normal(size=7)
    params = PenaltyParams(lambda1=0.4, lambda2=0.3, group_weights=(1.0,))

    (u,) = prox_penalty([v], 1.0, params)
    tv = prox_tv1d(v, 0.4)

    scale = np.linalg.norm(u) / np.linalg.norm(tv)
    np.testing.assert_allclose(u, scale * tv, atol=1e-14)
    assert 0.0 <= scale <= 1.0


def test_penalty_prox_is_nonexpansive(rng):
    params = PenaltyParams(lambda1=0.7, lambda2=0.4, group_weights=(1.5, 2.0))
    for _ in range(200):
        a = [rng.normal(size=4), rng.normal(size=6)]
        b = [rng.normal(size=4), rng.normal(size=6)]

        prox_a = np.concatenate(prox_penalty(a, 0.8, params))
        prox_b = np.concatenate(prox_penalty(b, 0.8, params))

        assert np.linalg.norm(prox_a - prox_b) <= np.linalg.norm(np.concatenate(a) - np.concatenate(b)) + 1e-12


def test_tv_jumps_never_reappear_as_threshold_grows(rng):
    for _ in range(100):
        v = rng.normal(size=12)
        jumps = [int(np.count_nonzero(np.diff(prox_tv1d(v, t)))) for t in np.linspace(0.0, 3.0, 31)]

        assert all(later <= earlier for earlier, later in zip(jumps, jumps[1:]))


def test_tv_of_prox_output_never_grows_with_threshold(rng):
    for _ in range(100):
        v = rng.normal(size=10)
        totals = [float(np.abs(np.diff(prox_tv1d(v, t))).sum()) for t in np.linspace(0.0, 4.0, 41)]

        assert all(later <= earlier + 1e-12 for earlier, later in zip(totals, totals[1:]))
        assert np.unique(prox_tv1d(v, 1e3)).size == 1


def test_penalty_prox_leaves_zero_groups_exactly_zero():
    params = PenaltyParams(lambda1=0.1, lambda2=10.0, group_weights=(1.0, 1.0))

    small, large = prox_penalty([np.array([0.1, -0.2, 0.05]), np.array([50.0, 60.0])], 1.0, params)

    assert np.all(small == 0.0)
    assert np.all(large != 0.0)


def test_penalty_prox_checks_weight_count():
    params = PenaltyParams(lambda1=0.1, lambda2=0.1, group_weights=(1.0,))

    with pytest.raises(ValueError, match="group weights"):
        prox_penalty([np.zeros(2), np.zeros(3)], 1.0, params)
