import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from onetrough import (
    LevelNotBracketedError,
    admissible_window,
    count_levels,
    eval_L,
    lemma_bound,
    make_params,
    p0,
    p_threshold,
    solve_level,
    theorem_check,
    theta_min,
)
from onetrough.counting import ROOT_TOL, branch_limits, levels_between
from onetrough.transcendental import C_MAX, C_MIN


def brute_count(params, n=2000):
    """Integer-level sign changes of L - k on n interior samples per branch."""
    w = admissible_window(params)
    total = 0
    for a, b in w.branches:
        th = np.linspace(a, b, n + 2)[1:-1]
        vals = np.array([eval_L(params, t) for t in th])
        for k in range(1, 8):
            s = np.sign(vals - k)
            total += int(np.count_nonzero(s[1:] != s[:-1]))
    return total


def test_five_point(five_count):
    assert five_count.count == 5
    assert five_count.levels == [2, 3, 4, 5, 6]
    assert five_count.count <= five_count.lemma_bound


def test_zero_point():
    res = count_levels(make_params(0.99, 0.4))
    assert res.count == 0
    assert not res.window_empty


def test_empty_window_counts_zero():
    res = count_levels(make_params(1.40, 0.999))
    assert res.window_empty and res.count == 0 and res.candidates == ()


def test_candidates_ordered_within_branch(five_count):
    for b in {cd.branch for cd in five_count.candidates}:
        cands = [cd for cd in five_count.candidates if cd.branch == b]
        thetas = [cd.theta for cd in cands]
        ks = [cd.k for cd in cands]
        # L decreases, so larger k sits at smaller theta
        assert thetas == sorted(thetas, reverse=True)
        assert ks == sorted(ks)
        assert len({(cd.k, cd.branch) for cd in cands}) == len(cands)


def test_candidates_interior_and_accurate(five_params, five_count):
    w = five_count.window
    for cd in five_count.candidates:
        a, b = w.branches[cd.branch]
        assert a < cd.theta < b
        assert cd.residual <= ROOT_TOL
        assert abs(eval_L(five_params, cd.theta) - cd.k) <= ROOT_TOL


def test_solve_level_not_bracketed(five_params):
    w = admissible_window(five_params)
    br = w.branches[0]
    lim = branch_limits(five_params, w, 0)
    with pytest.raises(LevelNotBracketedError):
        solve_level(five_params, 1, br, lim)
    with pytest.raises(LevelNotBracketedError):
        solve_level(five_params, 7, br, lim)


def test_solve_level_limits_recovered(five_params):
    w = admissible_window(five_params)
    a = solve_level(five_params, 4, w.branches[0])
    b = solve_level(five_params, 4, w.branches[0], branch_limits(five_params, w, 0))
    assert a.theta == b.theta


@pytest.mark.parametrize("seed", range(5))
def test_root_unique_under_shuffled_bisection(five_params, five_count, seed):
    rng = np.random.default_rng(seed)
    w = five_count.window
    for cd in five_count.candidates:
        lim = branch_limits(five_params, w, cd.branch)
        again = solve_level(five_params, cd.k, w.branches[cd.branch], lim, cd.branch, rng=rng)
        assert abs(again.theta - cd.theta) <= 2e-10


def test_levels_between_ties_excluded():
    assert levels_between(6.4, 1.2) == [2, 3, 4, 5, 6]
    assert levels_between(3.0 + 1e-12, 0.5) == [1, 2]
    assert levels_between(2.5, 1.0 - 1e-12) == [2]
    assert levels_between(0.9, 0.1) == []


def test_p0_values():
    assert p0(1.0) == 0.0
    assert p0(math.sqrt(2)) == pytest.approx(1.0, abs=1e-15)
    assert p0(0.61005) < 0


def test_p_threshold_values():
    assert p_threshold(2) == pytest.approx(16 / 25, abs=1e-15)
    assert p_threshold(3) == pytest.approx(1 - 0.8 ** 2, abs=1e-15)
    with pytest.raises(ValueError):
        p_threshold(1)


@pytest.mark.parametrize("k", range(2, 12))
def test_p_threshold_inverse(k):
    assert make_params(1.0, p_threshold(k)).ratio == pytest.approx(k, abs=1e-12 * k)


def test_p_threshold_decreasing():
    vals = [p_threshold(k) for k in range(2, 200)]
    assert np.all(np.diff(vals) < 0)
    assert vals[-1] < 1e-3


@given(st.floats(C_MIN, C_MAX), st.floats(0.6401, 1 - 1e-6))
def test_high_p_strip_bound_zero(c, p):
    assume(p > p0(c))
    assert lemma_bound(make_params(c, p)) == 0


@given(st.floats(C_MIN, C_MAX), st.floats(0.3601, 0.6399))
def test_second_strip_bound_two(c, p):
    assume(p > p0(c))
    assert lemma_bound(make_params(c, p)) == 2


@given(st.floats(C_MIN, C_MAX), st.floats(1e-6, 1 - 1e-6))
def test_bound_capped(c, p):
    assert 0 <= lemma_bound(make_params(c, p)) <= 6


def test_bound_below_p0_uses_single_branch_formula():
    # c=1.2, p=0.3 < p0: kappa ratio ~ 3.6, k = 4, ceil(5/2) - 1 = 2
    prm = make_params(1.2, 0.3)
    assert prm.p < p0(1.2)
    assert math.floor(prm.ratio) + 1 == 4
    assert lemma_bound(prm) == 2


def test_theorem_check():
    rep = theorem_check(np.linspace(0.01, 1.40, 1000))
    assert rep.passed and rep.max_sup < 7
    one = theorem_check([1.0])
    assert one.max_sup == pytest.approx(1 - (1 + theta_min(1.0).theta_min) / math.pi)
    empty = theorem_check([])
    assert empty.passed and empty.max_sup == -math.inf


@pytest.mark.parametrize("seed", [1, 2])
def test_brute_force_equivalence(seed):
    rng = np.random.default_rng(seed)
    for _ in range(15):
        c = rng.uniform(0.05, 1.40)
        p = 10 ** rng.uniform(-4, math.log10(0.99))
        prm = make_params(c, p)
        assert count_levels(prm).count == brute_count(prm)


@given(st.floats(C_MIN, C_MAX), st.floats(1e-6, 1 - 1e-6))
def test_count_invariants(c, p):
    res = count_levels(make_params(c, p))
    assert res.count == len(res.candidates) <= min(res.lemma_bound, 6)
