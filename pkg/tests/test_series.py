import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypsing.series import (
    BadConstantTerm,
    BranchCutHit,
    BranchSpec,
    DivisionByZeroSeries,
    InnerNotVanishing,
    ShiftMismatch,
    TruncSeries,
    compose,
    derive,
    evaluate,
    exp_unit,
    geometric,
    integrate,
    log_unit,
    max_difference,
    pow_unit,
)
from oracles import polynomial_substitution


def S(*c, shift=0):
    return TruncSeries(c, shift)


def coeffs_close(f, expected, tol=1e-14):
    expected = np.asarray(expected, dtype=complex)
    got = f.coeffs[: expected.size]
    assert np.max(np.abs(got - expected)) < tol, (got, expected)


def random_series(seed, order, constant):
    rng = np.random.default_rng(seed)
    r = rng.uniform(0, 1, order + 1)
    c = r * np.exp(2j * np.pi * rng.uniform(size=order + 1))
    c[0] = constant
    return TruncSeries(c)


def test_multiplication():
    coeffs_close(S(1, 1, 0) * S(1, -1, 0), [1, 0, -1])


def test_division_geometric():
    one = TruncSeries.constant(1, 10)
    coeffs_close(one / TruncSeries.from_poly([1, -1], 10), np.ones(11))


def test_long_division():
    coeffs_close(S(1, 2, 1, 0, 0) / S(1, 1, 0, 0, 0), [1, 1, 0, 0, 0])


def test_division_by_series_with_zero_constant():
    with pytest.raises(DivisionByZeroSeries):
        S(1, 1) / S(0, 1)


def test_shift_algebra():
    f = S(1, 2, shift=Fraction(1, 2))
    g = S(3, 0, shift=Fraction(1, 3))
    assert (f * g).shift == Fraction(5, 6)
    assert (f / g).shift == Fraction(1, 6)
    with pytest.raises(ShiftMismatch):
        f + g


def test_compose_examples():
    f = S(1, 2, 1, 0)
    coeffs_close(compose(f, TruncSeries.variable(3)), [1, 2, 1, 0])
    coeffs_close(compose(S(1, 2, 1, 0, 0), S(0, 2, 0, 0, 0)), [1, 4, 4, 0, 0])
    expected = polynomial_substitution(np.ones(4), [0, 1, 1, 0], 3)
    coeffs_close(compose(geometric(3), S(0, 1, 1, 0)), expected)
    coeffs_close(compose(geometric(3), S(0, 1, 1, 0)), [1, 1, 2, 3])


def test_compose_needs_vanishing_inner():
    with pytest.raises(InnerNotVanishing):
        compose(S(1, 1), S(1, 1))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_compose_matches_substitution_oracle(seed):
    f = random_series(seed, 12, 0.3)
    g = random_series(seed + 1, 12, 0)
    expected = polynomial_substitution(f.coeffs, g.coeffs, 12)
    assert np.max(np.abs(compose(f, g).coeffs - expected)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_compose_associative(seed):
    f = random_series(seed, 16, 0.5)
    g = random_series(seed + 1, 16, 0)
    h = random_series(seed + 2, 16, 0)
    left = compose(compose(f, g), h)
    right = compose(f, compose(g, h))
    assert max_difference(left, right) < 1e-12


def test_derive_examples():
    coeffs_close(derive(TruncSeries.constant(1, 3)), [0, 0, 0])
    d = derive(S(1, 0, 0, shift=Fraction(1, 2)))
    assert d.shift == Fraction(-1, 2)
    coeffs_close(d, [0.5, 0, 0])
    coeffs_close(derive(S(1, 3, 5)), [3, 10])


def test_integrate_inverts_derive():
    f = S(0, 1, 2, 3, 4)
    coeffs_close(integrate(derive(f)), f.coeffs)


def test_exp_examples():
    coeffs_close(exp_unit(TruncSeries.zeros(5)), [1, 0, 0, 0, 0, 0])
    coeffs_close(exp_unit(S(0, 1, 0, 0, 0)), [1, 1, 1 / 2, 1 / 6, 1 / 24])
    coeffs_close(log_unit(exp_unit(S(0, 1, 1, 0, 0, 0))), [0, 1, 1, 0, 0, 0])


def test_exp_log_preconditions():
    with pytest.raises(BadConstantTerm):
        exp_unit(S(1, 1))
    with pytest.raises(BadConstantTerm):
        log_unit(S(2, 1))


def test_pow_examples():
    coeffs_close(pow_unit(S(1, 2, 1, 0, 0), 0.5), [1, 1, 0, 0, 0])
    binom = [math.comb(1, 0)] + [
        np.prod([0.5 - j for j in range(k)]) / math.factorial(k) for k in range(1, 8)
    ]
    coeffs_close(pow_unit(TruncSeries.from_poly([1, 1], 7), 0.5), binom)
    coeffs_close(pow_unit(S(1, 3, 2), 0), [1, 0, 0])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 32))
def test_exp_log_inverse(seed, order):
    f = random_series(seed, order, 0)
    g = random_series(seed + 7, order, 1)
    assert max_difference(log_unit(exp_unit(f)), f) < 1e-12
    # log g grows like the inverse distance to the nearest zero of g; rounding scales with it
    lg = log_unit(g)
    scale = max(1.0, float(np.max(np.abs(lg.coeffs))))
    assert max_difference(exp_unit(lg), g) < 1e-14 * scale + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(-3, 5))
def test_integer_power_is_repeated_product(seed, n):
    f = random_series(seed, 16, 1)
    expected = TruncSeries.constant(1, 16)
    for _ in range(abs(n)):
        expected = expected * f
    if n < 0:
        expected = TruncSeries.constant(1, 16) / expected
    assert max_difference(pow_unit(f, n), expected) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_mul_commutative_associative(seed):
    f, g, h = (random_series(seed + k, 20, 0.7) for k in range(3))
    assert max_difference(f * g, g * f) < 1e-12
    assert max_difference((f * g) * h, f * (g * h)) < 1e-12


def test_evaluate_examples():
    assert evaluate(S(1, 1), 0.5) == 1.5
    assert abs(evaluate(S(1, 0, shift=Fraction(1, 2)), -1 + 0j) - 1j) < 1e-15
    n = 32
    assert abs(evaluate(geometric(n), 0.1) - 1 / 0.9) <= 0.1 ** (n + 1) / 0.9 + 1e-15


def test_branch_choice():
    below = BranchSpec(cut=0.0)
    assert abs(below.log(-1).imag + math.pi) < 1e-15
    assert abs(BranchSpec().log(-1).imag - math.pi) < 1e-15
    with pytest.raises(BranchCutHit):
        BranchSpec(strict=True).log(-1.0)
    with pytest.raises(BranchCutHit):
        evaluate(S(1, shift=Fraction(1, 2)), 0)


def test_log_override():
    f = S(1, shift=Fraction(1, 2))
    # continuing once around the origin flips the sign of sqrt
    assert abs(evaluate(f, 0.25, log_x=complex(math.log(0.25), 2 * math.pi)) + 0.5) < 1e-15
