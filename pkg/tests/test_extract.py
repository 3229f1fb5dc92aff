"""Round-trip coefficient recovery, the shift trick, and the sup bound."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from holoflow import (DiagonalField, ExtractionError, ExtractionParams,
                      HolomorphicExpansion, extract_coefficients, level_grid,
                      residual, sampled_sup, shift_difference,
                      verify_cauchy_bound)
from holoflow.extract import aligned_window, quadrature_nodes
from holoflow.reports import fitted_decay_rate

from conftest import random_expansion_sixths

SIXTH_GRID = level_grid(DiagonalField((Fraction(1, 6),)), 10)


def default_params(grid=SIXTH_GRID) -> ExtractionParams:
    return ExtractionParams(grid=grid)


def test_params_validation():
    with pytest.raises(ValueError):
        ExtractionParams(grid=SIXTH_GRID, x0=0.0)
    with pytest.raises(ValueError):
        ExtractionParams(grid=SIXTH_GRID, nodes=1)
    with pytest.raises(ValueError):
        ExtractionParams(grid=SIXTH_GRID, tol=-1.0)


def test_window_is_common_period_multiple():
    L, q, K = aligned_window(SIXTH_GRID, 64.0)
    assert q == 6
    assert L == pytest.approx(math.pi * q * K)
    # every pair of grid frequencies completes整 whole periods: L * (1/q) multiple of pi
    assert (L / math.pi) % 1 == pytest.approx(0.0, abs=1e-12)


def test_zero_oracle_recovers_all_zeros():
    rec = extract_coefficients(lambda z: np.zeros_like(z), default_params())
    assert all(c == 0 for c in rec.coeffs)


def test_synthesis_example_recovers_exact_coefficients():
    src = HolomorphicExpansion([(Fraction(1), 3.0), (Fraction(5, 2), 1 + 1j)])
    grid = level_grid(DiagonalField((Fraction(1, 2),)), 3)
    rec = extract_coefficients(src, default_params(grid))
    assert rec.coefficient(Fraction(0)) == 0
    assert rec.coefficient(Fraction(2)) == 0
    assert abs(rec.coefficient(Fraction(1)) - 3.0) < 1e-8
    assert abs(rec.coefficient(Fraction(5, 2)) - (1 + 1j)) < 1e-8


def test_square_of_exponential_lands_on_level_two():
    oracle = lambda z: np.exp(-z) * np.exp(-z)
    grid = level_grid(DiagonalField((Fraction(1),)), 2)
    rec = extract_coefficients(oracle, default_params(grid))
    assert [rec.coefficient(lam) for lam in grid.levels] == [0, 0, pytest.approx(1.0)]


def test_round_trip_random_corpus(rng):
    for _ in range(30):
        src = random_expansion_sixths(rng)
        rec = extract_coefficients(src, default_params())
        err = max(abs(rec.coefficient(lam) - src.coefficient(lam))
                  for lam in SIXTH_GRID.levels)
        assert err < 1e-6, err


def test_trace_rows_match_levels():
    src = HolomorphicExpansion([(Fraction(1), 1.0)])
    grid = level_grid(DiagonalField((Fraction(1),)), 3)
    trace = []
    extract_coefficients(src, default_params(grid), trace=trace)
    assert [row[0] for row in trace] == [0.0, 1.0, 2.0, 3.0]
    # residual norm collapses once the only term is removed
    assert trace[0][2] > 0.1 and trace[1][2] < 1e-12


def test_n_levels_truncates_the_loop():
    src = HolomorphicExpansion([(Fraction(1), 1.0)])
    grid = level_grid(DiagonalField((Fraction(1),)), 5)
    rec = extract_coefficients(src, default_params(grid), n_levels=2)
    assert rec.levels == (Fraction(0), Fraction(1))


def test_non_finite_sample_raises_named_point():
    def oracle(z):
        return np.where(np.abs(np.imag(z)) > 50.0, np.nan, np.exp(-z))

    grid = level_grid(DiagonalField((Fraction(1),)), 2)
    with pytest.raises(ExtractionError, match="non-finite"):
        extract_coefficients(oracle, default_params(grid))


def test_inconsistent_oracle_rejected_by_final_residual():
    oracle = lambda z: np.exp(+0.5 * z)  # growing: not a sum of grid decays
    grid = level_grid(DiagonalField((Fraction(1),)), 4)
    with pytest.raises(ExtractionError, match="inconsistent"):
        extract_coefficients(oracle, default_params(grid))


def test_off_grid_frequency_rejected():
    oracle = lambda z: np.exp(-0.5 * z)  # decays, but off the integer grid
    grid = level_grid(DiagonalField((Fraction(1),)), 4)
    with pytest.raises(ExtractionError, match="inconsistent"):
        extract_coefficients(oracle, default_params(grid))


def test_shift_difference_closed_forms():
    f = lambda z: np.exp(-z)
    g = shift_difference(f, math.pi)
    for x in (0.5, 1.0, 2.5):
        assert g(x) == pytest.approx(-2.0 * math.exp(-x))
    const = shift_difference(lambda z: 3.5 + 0j, 1.234)
    assert const(1.0) == 0
    f2 = lambda z: np.exp(-2 * z)
    g2 = shift_difference(f2, math.pi / 2)
    assert g2(1.0) == pytest.approx(-2.0 * math.exp(-2.0))


def test_shift_consistency_random(rng):
    for _ in range(10):
        src = random_expansion_sixths(rng, max_terms=5)
        a = float(rng.uniform(0.0, 2 * math.pi))
        rec = extract_coefficients(shift_difference(src, a), default_params())
        for lam, c in src.nonzero_pairs():
            expected = (cmath.exp(-1j * a * float(lam)) - 1.0) * c
            assert abs(rec.coefficient(lam) - expected) < 1e-6


def test_shift_pi_over_lambda_gives_exact_minus_two():
    src = HolomorphicExpansion([(Fraction(1), 0.3 - 0.4j), (Fraction(3), 0.8j)])
    lam = Fraction(3)
    a = math.pi / float(lam)
    rec = extract_coefficients(shift_difference(src, a), default_params())
    assert abs(rec.coefficient(lam) - (-2.0) * src.coefficient(lam)) < 1e-12


def test_sampled_sup_dominates_every_coefficient(rng):
    for _ in range(10):
        src = random_expansion_sixths(rng)
        M = sampled_sup(src, default_params())
        report = verify_cauchy_bound(src, src, M)
        assert report.passed, (report.max_ratio, report.worst_level)


def test_cauchy_bound_flags_oversized_coefficient():
    e = HolomorphicExpansion([(Fraction(2), 3.0)])
    report = verify_cauchy_bound(e, e, 1.0)
    assert not report.passed
    assert report.max_ratio == pytest.approx(3.0)
    assert report.worst_level == 2.0


def test_cauchy_bound_single_exponential_attains_one():
    e = HolomorphicExpansion([(Fraction(1), 1.0)])
    report = verify_cauchy_bound(e, e, 1.0)
    assert report.passed
    assert report.max_ratio == pytest.approx(1.0)


def test_residual_decay_rate_after_each_level(rng):
    # removing j levels leaves a residual decaying at the next level's rate
    for _ in range(8):
        src = random_expansion_sixths(rng, max_terms=5)
        pairs = src.nonzero_pairs()
        if len(pairs) < 2:
            continue
        y = quadrature_nodes(default_params())
        for j in range(len(pairs) - 1):
            lam_next = float(pairs[j + 1][0])
            f_j = residual(src, src, j)
            xs = np.linspace(1.0, min(3.0, 22.0 / max(lam_next, 1.0)), 5)
            sups = [float(np.max(np.abs(f_j(x + 1j * y)))) for x in xs]
            rate = fitted_decay_rate(xs, sups)
            assert rate is not None
            assert rate >= lam_next - 0.05


def test_cauchy_bound_two_term_difference():
    # both coefficients 1/2; the boundary-segment sup exceeds them
    e = HolomorphicExpansion([(Fraction(1), 0.5), (Fraction(2), -0.5)])
    grid = level_grid(DiagonalField((Fraction(1),)), 3)
    M = sampled_sup(e, default_params(grid))
    report = verify_cauchy_bound(e, e, M)
    assert report.passed
    assert report.max_ratio <= 1.0
