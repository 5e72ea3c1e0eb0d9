import math
from fractions import Fraction

import numpy as np
import pytest

from quartic_sieve.gaussian import GaussianInteger
from quartic_sieve.harness import (
    REGIMES,
    duality_checks,
    empirical_B1,
    empirical_theorem2,
    exponent_iteration,
    piecewise_regime,
    power_iteration,
    quadratic_form,
    squarefree_range,
    symbol_matrix,
    sweep,
    transformation_check,
    xi_fixed_points,
    xi_step,
)
from quartic_sieve.symbol import quartic_symbol

G = GaussianInteger


def test_symbol_matrix_examples():
    assert symbol_matrix(1, 1).shape == (0, 0)
    S = symbol_matrix(4, 4)
    assert set(S.rows) == {G(-1, 2), G(-1, -2)} and S.rows == S.cols
    T = S.to_complex()
    assert T[0, 0] == 0 and T[1, 1] == 0
    assert abs(abs(T[0, 1]) - 1) == 0 and abs(abs(T[1, 0]) - 1) == 0
    for i, m in enumerate(S.rows):
        for j, n in enumerate(S.cols):
            assert complex(quartic_symbol(n, m)) == T[i, j]


def test_zero_entries_for_common_factors():
    S = symbol_matrix(20, 20)
    T = S.to_complex()
    from quartic_sieve.gaussian import coprime

    for i, m in enumerate(S.rows):
        for j, n in enumerate(S.cols):
            assert (T[i, j] == 0) == (not coprime(m, n))


def test_empirical_B1_examples():
    assert empirical_B1(1, 1).empirical_norm == 0
    assert empirical_B1(4, 4).empirical_norm == pytest.approx(1.0, abs=1e-12)
    r = empirical_B1(16, 32)
    assert r.bound_terms["(MN)^{3/4}"] == pytest.approx(512 ** 0.75)
    assert r.ratio == pytest.approx(r.empirical_norm / (16 + 32 + 512 ** 0.75))
    assert math.isfinite(r.extra["initial_estimate_ratio"])


def test_power_iteration_vs_svd_random():
    rng = np.random.default_rng(3)
    for shape in [(5, 9), (30, 12), (60, 60)]:
        T = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        p = power_iteration(T).value
        s = np.linalg.svd(T, compute_uv=False)[0] ** 2
        assert abs(p - s) <= 1e-7 * s


def test_power_iteration_symmetric_matrix():
    # the all-ones vector is orthogonal to the top eigenvector here
    T = np.array([[1.0, -1.0], [-1.0, 1.0]]) * 3 + np.eye(2)
    assert power_iteration(T).value == pytest.approx(np.linalg.svd(T, compute_uv=False)[0] ** 2)


@pytest.mark.parametrize("M,N", [(4, 4), (4, 16), (16, 4), (8, 64), (4, 1)])
def test_duality(M, N):
    r = duality_checks(M, N)
    assert r.ok, r.counterexamples


def test_quadratic_form_consistency():
    S = symbol_matrix(16, 32)
    T = S.to_complex()
    norm = empirical_B1(16, 32).empirical_norm
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = rng.standard_normal(len(S.cols)) + 1j * rng.standard_normal(len(S.cols))
        a /= np.linalg.norm(a)
        direct = quadratic_form(S, dict(zip(S.cols, a)))
        matrix = np.linalg.norm(T @ a) ** 2
        assert abs(direct - matrix) <= 1e-10 * matrix
        assert direct <= norm * (1 + 1e-7)


def test_theorem2_examples():
    r = empirical_theorem2(4, 4)
    assert (r.rows, r.cols) == (2, 3)
    assert r.bound == min(r.bound_terms.values())
    assert r.empirical_norm > 0
    # (3, 6]: only q = 4, 5, 6 -> q = 5 qualifies; (2, 4]: q = 3, 4 -> none
    assert empirical_theorem2(2, 4).empirical_norm == 0
    with pytest.raises(ValueError):
        empirical_theorem2(3000, 4)


def test_squarefree_range():
    assert squarefree_range(4, 8) == [5, 6, 7]
    assert squarefree_range(4, 8, odd_only=True) == [5, 7]


@pytest.mark.parametrize("q", [5, 13, 17])
def test_transformation(q):
    M = 30
    n = len(squarefree_range(M, 2 * M, odd_only=True))
    rng = np.random.default_rng(q)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    r = transformation_check(q, M, a)
    assert r.rel_err < 1e-10
    assert abs(r.zi_side_pm - r.zi_side) < 1e-10 * r.zi_side


def test_regime_examples():
    M = 2.0**20
    assert piecewise_regime(M**0.5, M).label == "M"
    assert piecewise_regime(M**0.7, M).label == "Q^{7/4}"
    assert piecewise_regime(M**3, M).label == "Q"
    b = piecewise_regime(2.0**16, 2.0**20)  # x = 4/5 exactly
    assert b.boundary
    with pytest.raises(ValueError):
        piecewise_regime(1, 4)


def test_regime_argmin_every_row():
    M = 2.0**30
    uppers = [float(u) for u, *_ in REGIMES if u is not None]
    lows = [0.3] + uppers
    highs = uppers + [3.5]
    for lo, hi, (_, label, _, _) in zip(lows, highs, REGIMES):
        r = piecewise_regime(M ** ((lo + hi) / 2), M)
        assert r.label == label and r.consistent and not r.boundary


def test_xi():
    assert exponent_iteration(2, 1).xi_history[-1] == Fraction(12, 7)
    assert xi_step(Fraction(3, 2)) == Fraction(3, 2)
    assert xi_fixed_points() == [Fraction(1), Fraction(3, 2)]
    h = exponent_iteration(Fraction(7, 4), 50).xi_history
    assert all(b < a for a, b in zip(h, h[1:])) and all(x > Fraction(3, 2) for x in h)
    for bad in (Fraction(3, 2), 3, 1):
        with pytest.raises(ValueError):
            exponent_iteration(bad, 1)


def test_sweep_order_and_parallel_equal():
    a = sweep("t1", [4, 8, 16], jobs=1)
    b = sweep("t1", [4, 8, 16], jobs=2)
    assert [r.params for r in a] == [{"M": x, "N": y} for x in (4, 8, 16) for y in (4, 8, 16)]
    assert [r.empirical_norm for r in a] == [r.empirical_norm for r in b]
    with pytest.raises(ValueError):
        sweep("t3", [4])
