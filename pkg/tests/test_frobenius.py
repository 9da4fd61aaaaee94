import math
from fractions import Fraction

import numpy as np
import pytest

from hypsing.frobenius import (
    EqualRootsLog,
    LogRatio,
    LogSolution,
    NotIntegerDifference,
    ObstructedLogRatio,
    OutsideHypothesesWarning,
    PowerRatio,
    PowerSolution,
    ResonantIndex,
    basis_residual,
    derivative_coefficients,
    frobenius_coefficients,
    frobenius_series,
    indicial_roots,
    local_monodromy,
    obstruction_Rm,
    projective_ratio,
    solve_basis,
)
from hypsing.mobius import MobiusMap, apply, is_identity, projective_distance
from hypsing.schwarzian import OperatorCoeffs, SingularityData, ode_from_schwarzian
from hypsing.series import TruncSeries

from generators import random_data
from oracles import brute_force_frobenius, continue_ratio, fd_in_s


def op_of(theta, d=0, phi=None, order=32):
    return ode_from_schwarzian(SingularityData(Fraction(theta), d, None if phi is None else TruncSeries(phi)), order)


def test_indicial_examples():
    ind = indicial_roots(op_of("1/2"))
    assert (ind.s1, ind.s2) == (Fraction(1, 4), Fraction(3, 4))
    ind = indicial_roots(op_of(0))
    assert ind.s1 == ind.s2 == Fraction(1, 2)
    ind = indicial_roots(op_of(3))
    assert (ind.s1, ind.s2) == (-1, 2)
    assert ind.s1 + ind.s2 == 1 and ind.s1 * ind.s2 == -2


def test_constant_q_gives_pure_power():
    u = frobenius_series(op_of("1/2"), Fraction(3, 4))
    assert u.coeffs[0] == 1 and np.all(u.coeffs[1:] == 0)


def test_hand_recurrence_and_oracle():
    op = op_of("1/2", d=1, order=12)
    u = frobenius_series(op, Fraction(3, 4))
    assert abs(u.coeffs[1] + 1 / 3) < 1e-15
    ref = brute_force_frobenius(op.b, 0.75, 12)
    assert np.max(np.abs(u.coeffs - ref)) < 1e-13


def test_resonant_index():
    with pytest.raises(ResonantIndex) as err:
        frobenius_series(op_of(2, d=2), Fraction(-1, 2))
    assert err.value.n == 2


def test_obstruction_examples():
    assert obstruction_Rm(op_of(2)) == 0
    assert abs(obstruction_Rm(op_of(2, d=2)) - 1) < 1e-15
    assert abs(obstruction_Rm(op_of(2, d=2, phi=[-1])) - 0.5) < 1e-15
    with pytest.raises(NotIntegerDifference):
        obstruction_Rm(op_of("1/2"))


def test_basis_examples():
    b = solve_basis(op_of("1/2"))
    assert isinstance(b.second, PowerSolution)
    assert b.second.u1.shift == Fraction(1, 4) and b.u2.shift == Fraction(3, 4)
    assert np.all(b.second.u1.coeffs[1:] == 0)

    b = solve_basis(op_of(0))
    assert isinstance(b.second, EqualRootsLog)
    assert np.all(b.second.partner.coeffs == 0)

    b = solve_basis(op_of(2, d=2))
    assert isinstance(b.second, LogSolution)
    assert abs(b.second.v.coeffs[0] + 2) < 1e-15
    assert abs(b.Rm - 1) < 1e-15


def test_resonant_but_unobstructed_is_power():
    b = solve_basis(op_of(2))
    assert isinstance(b.second, PowerSolution) and b.Rm == 0
    assert b.second.u1.coeffs[2] == 0


def test_derivative_coefficient_example():
    dc = derivative_coefficients(op_of(0, d=1), Fraction(1, 2), 8)
    assert abs(dc.coeffs[1] - 1) < 1e-15
    assert np.all(derivative_coefficients(op_of("1/3"), Fraction(2, 3), 8).coeffs == 0)


def test_derivative_coefficients_against_finite_difference():
    rng = np.random.default_rng(21)
    for _ in range(20):
        data = random_data(rng)
        op = ode_from_schwarzian(data, 10)
        s = float(indicial_roots(op).s2)
        dc = derivative_coefficients(op, indicial_roots(op).s2, 10).coeffs
        ref = fd_in_s(op.b, s, 10)
        assert np.max(np.abs(dc - ref) / (1 + np.abs(ref))) < 1e-6


def test_frobenius_coefficients_accepts_complex_exponent():
    op = op_of("1/2", d=1, order=6)
    c = frobenius_coefficients(op, 0.3 + 0.2j)
    ref = brute_force_frobenius(op.b, 0.3 + 0.2j, 6)
    assert np.max(np.abs(c - ref)) < 1e-13


def test_ratio_examples():
    r = projective_ratio(solve_basis(op_of("1/2")))
    assert isinstance(r, PowerRatio) and r.alpha == Fraction(1, 2)
    assert np.all(np.abs(r.unit.coeffs - np.r_[1, np.zeros(r.unit.order)]) < 1e-15)
    r = projective_ratio(solve_basis(op_of(0)))
    assert isinstance(r, LogRatio) and np.all(r.psi.coeffs == 0)
    r = projective_ratio(solve_basis(op_of(2, d=2)))
    assert isinstance(r, ObstructedLogRatio) and r.m == 2 and abs(r.phi.coeffs[0] + 2) < 1e-15


def test_local_monodromy_examples():
    m = local_monodromy(solve_basis(op_of("1/2")))
    assert projective_distance(m, MobiusMap(-1, 0, 0, 1)) < 1e-15
    assert is_identity(local_monodromy(solve_basis(op_of(3))))
    m = local_monodromy(solve_basis(op_of(0)))
    assert projective_distance(m, MobiusMap.translation(2j * math.pi)) < 1e-15


def test_ratio_invariants():
    rng = np.random.default_rng(2)
    for _ in range(50):
        basis = solve_basis(ode_from_schwarzian(random_data(rng)))
        r = projective_ratio(basis)
        if isinstance(r, PowerRatio):
            assert abs(r.unit.coeffs[0] - 1) < 1e-15
        elif isinstance(r, LogRatio):
            assert r.psi.coeffs[0] == 0
        else:
            f2 = float(2 * basis.indicial.s2 - 1)
            assert abs(r.phi.coeffs[0] + f2 / basis.Rm) < 1e-12
            assert r.phi.coeffs[0] != 0


def test_case_exhaustiveness():
    rng = np.random.default_rng(4)
    seen = set()
    for _ in range(200):
        data = random_data(rng)
        basis = solve_basis(ode_from_schwarzian(data))
        seen.add(type(basis.second).__name__ + ("0" if basis.Rm == 0 else ""))
        assert basis_residual(basis) < 1e-12
    # cases (i) and (ii) share PowerSolution; (ii) is tagged by Rm == 0
    assert {"PowerSolution", "LogSolution", "EqualRootsLog"} <= seen


def test_unobstructed_integer_case_reached():
    # tune phi(0) so that R_2 vanishes: R_2 = b_2 + c_1 b_1 with c_1 = -b_1/f(s1+1)
    basis = solve_basis(op_of(2, d=2, phi=[-2]))
    assert isinstance(basis.second, PowerSolution) and basis.Rm == 0
    assert basis_residual(basis) < 1e-12


def test_exponent_difference_one_warns():
    op = OperatorCoeffs(TruncSeries([0.0, 0.5, 0.1]), Fraction(1))
    with pytest.warns(OutsideHypothesesWarning):
        basis = solve_basis(op)
    assert basis_residual(basis) < 1e-12


def test_brute_force_oracle_random():
    rng = np.random.default_rng(9)
    for _ in range(50):
        op = ode_from_schwarzian(random_data(rng), 8)
        basis = solve_basis(op)
        ref = brute_force_frobenius(op.b, float(basis.indicial.s2), 8)
        assert np.max(np.abs(basis.u2.coeffs[:9] - ref) / (1 + np.abs(ref))) < 1e-12


def _continuation_gap(basis):
    r0 = 0.1
    ua, ub = basis.solutions(r0)
    ea, eb = continue_ratio(basis.op.b, ua, ub, r0)
    before = ub[0] / ua[0]
    after = eb[0] / ea[0]
    expected = apply(local_monodromy(basis), before)
    return abs(after - expected) / (1 + abs(expected))


def test_monodromy_matches_continuation():
    rng = np.random.default_rng(17)
    for _ in range(5):
        basis = solve_basis(ode_from_schwarzian(random_data(rng), 32))
        assert _continuation_gap(basis) < 1e-6
