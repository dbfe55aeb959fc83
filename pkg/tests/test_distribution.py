import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invperm.distribution import (
    adaptive_gauss,
    charfn,
    charfn_abs,
    charfn_poly,
    convolve,
    cross_inv_counts,
    cross_inv_counts_bruteforce,
    cross_inv_grid,
    encloses,
    in_neighborhood,
    integral_abs_charfn,
    integral_abs_charfn_riemann,
    interval_matching,
    inversion_counts,
    max_probability,
    max_probability_grid,
    pole_reduction_check,
    probabilities_via_inverse_ft,
    probability_via_inverse_ft,
    real_part,
)
from invperm.errors import LimitExceeded, OutOfRange, QuadratureFailure

import oracles


def test_counts_small():
    assert cross_inv_counts(2, 2).counts == (1, 1, 2, 1, 1)
    assert cross_inv_counts(1, 3).counts == (1, 1, 1, 1)
    assert cross_inv_counts(0, 4).counts == (1,)
    t = cross_inv_counts(2, 2)
    assert t.total == 6 and t.probability(2) == Fraction(1, 3) and t.probability(9) == 0
    assert list(t.csv_rows())[2] == (2, 2, 2, 2, 1, 3)


@pytest.mark.parametrize("a,b", [(a, b) for a in range(0, 7) for b in range(0, 7) if a + b <= 9])
def test_counts_match_oracle(a, b):
    assert list(cross_inv_counts(a, b).counts) == oracles.xinv_counts(a, b)
    assert cross_inv_counts(a, b).counts == cross_inv_counts_bruteforce(a, b)


@given(st.integers(0, 25), st.integers(0, 25))
@settings(max_examples=50, deadline=None)
def test_count_invariants(a, b):
    c = cross_inv_counts(a, b).counts
    assert sum(c) == math.comb(a + b, a)
    assert c == c[::-1]
    assert c == cross_inv_counts(b, a).counts
    mid = len(c) // 2
    assert all(c[i] <= c[i + 1] for i in range(mid))


def test_mahonian_factorization():
    # inversions of a+b items = inversions within A, within B, and across
    for a, b in [(2, 3), (3, 3), (4, 2)]:
        lhs = convolve(convolve(inversion_counts(a), inversion_counts(b)), cross_inv_counts(a, b).counts)
        assert lhs == inversion_counts(a + b)
    assert inversion_counts(3) == (1, 2, 2, 1)


def test_grid_matches_single_tables():
    for a, b, c in cross_inv_grid(6, 6):
        assert tuple(int(x) for x in c) == cross_inv_counts(a, b).counts


def test_table_limit():
    with pytest.raises(LimitExceeded):
        cross_inv_counts(1500, 1500)


def test_max_probability():
    p, norm = max_probability(2, 2)
    assert p == Fraction(1, 3) and norm == pytest.approx(4 / 3)
    with pytest.raises(OutOfRange):
        max_probability(0, 3)
    rep = max_probability_grid(10)
    assert rep.values[(2, 2)] == pytest.approx(4 / 3)
    assert rep.sup <= 1.5 and rep.sup_within(5) <= rep.sup


def test_charfn_matches_polynomial():
    t = np.linspace(-math.pi, math.pi, 41)
    for a, b in [(1, 1), (2, 3), (4, 4), (3, 7)]:
        got = charfn(a, b, t)
        want = np.array([charfn_poly(a, b, x) for x in t])
        assert np.max(np.abs(got - want)) < 1e-12
        assert np.allclose(charfn_abs(a, b, t), np.abs(want))
    assert charfn(3, 3, 0.0) == pytest.approx(1)


def test_real_part_near_poles():
    # sin(jt/2) vanishes at t = 2 pi m / j; the polynomial fallback takes over there
    for t in (2 * math.pi / 3, 2 * math.pi / 3 + 1e-9, math.pi, 1e-7):
        want = charfn_poly(3, 5, t) * np.exp(-1j * 7.5 * t)
        assert real_part(3, 5, t)[0] == pytest.approx(want.real, abs=1e-12)


def test_adaptive_gauss():
    val = adaptive_gauss(np.sin, [0.0, math.pi], 1e-12)
    assert float(val) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(QuadratureFailure):
        adaptive_gauss(lambda t: np.sign(t - 0.1234567), [0.0, 1.0], 0.0, budget=2000)


@pytest.mark.parametrize("a,b", [(1, 1), (2, 2), (3, 5), (6, 9), (10, 12)])
def test_inverse_ft(a, b):
    exact = cross_inv_counts(a, b).probabilities()
    got = probabilities_via_inverse_ft(a, b)
    assert np.max(np.abs(got - exact)) < 1e-9
    k = a * b // 2
    assert probability_via_inverse_ft(a, b, k) == pytest.approx(exact[k], abs=1e-9)
    with pytest.raises(OutOfRange):
        probability_via_inverse_ft(a, b, a * b + 1)


def test_integral():
    val, norm = integral_abs_charfn(2, 2)
    assert val == pytest.approx(2.1522464657, abs=1e-8)
    assert norm == pytest.approx(val * 2 * math.sqrt(2))
    assert integral_abs_charfn_riemann(2, 2) == pytest.approx(val, abs=1e-6)
    assert integral_abs_charfn(5, 9)[0] == pytest.approx(integral_abs_charfn_riemann(5, 9), abs=1e-6)
    with pytest.raises(OutOfRange):
        integral_abs_charfn(1, 4)
    with pytest.raises(OutOfRange):
        integral_abs_charfn(5, 4)


def test_encloses():
    assert encloses(1, 3, Fraction(1, 2))        # [1/3, 2/3) inside [0, 1)
    assert not encloses(2, 3, Fraction(1, 2))    # [1/3, 2/3) vs [1/2, 1)
    assert encloses(2, 3, Fraction(3, 4))        # [2/3, 1) inside [1/2, 1)
    assert in_neighborhood(5, [2, 3])
    assert not in_neighborhood(5, [2])


@given(st.integers(1, 9), st.integers(1, 9), st.fractions(0, 1, max_denominator=1000))
@settings(max_examples=200, deadline=None)
def test_interval_matching(a, b, t):
    m = interval_matching(a, b, t)
    assert m.is_valid()


def test_pole_check():
    rng = np.random.default_rng(7)
    rep = pole_reduction_check(4, 6, rng.uniform(0, math.pi, 2000))
    assert rep.ok and rep.samples == 2000
