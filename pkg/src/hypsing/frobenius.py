"""Frobenius solutions of ``x**2 u'' + q(x) u = 0`` at the regular singular point 0.

With ``q = sum b_k x**k`` the indicial polynomial is ``f(s) = s(s-1) + b_0``
with roots ``s1 = (1 - theta)/2 <= s2 = (1 + theta)/2``.  A trial solution
``x**s sum c_k x**k`` (``c_0 = 1``) satisfies the equation iff

    f(s + n) c_n + R_n = 0,   R_n = sum_{i<n} c_i b_{n-i},

for every ``n >= 1``.  The second solution is chosen by case:

* ``theta`` not an integer: power solution at ``s1``;
* ``theta = m`` integer, ``R_m = 0``: power solution at ``s1`` with ``c_m := 0``;
* ``theta = m`` integer, ``R_m != 0``: ``u2 log x + x**s1 v(x)``;
* ``theta = 0``: ``u2 log x + x**s2 sum c'_k(s2) x**k``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .mobius import MobiusMap
from .schwarzian import OperatorCoeffs
from .series import PRINCIPAL, TruncSeries, as_fraction, evaluate

RESONANCE_TOL = 1e-12
OBSTRUCTION_TOL = 1e-12


class ResonantIndex(ArithmeticError):
    def __init__(self, n: int):
        super().__init__(f"f(s + {n}) vanishes; the recurrence cannot be continued")
        self.n = n


class NotIntegerDifference(ValueError):
    pass


class OutsideHypothesesWarning(UserWarning):
    """Exponent difference 1, which a compatible hyperbolic germ never has."""


@dataclass(frozen=True)
class IndicialData:
    s1: Fraction
    s2: Fraction

    @property
    def difference(self) -> Fraction:
        return self.s2 - self.s1

    @property
    def integer_flag(self) -> bool:
        return self.difference.denominator == 1

    def f(self, s):
        return (s - self.s1) * (s - self.s2)

    def fprime(self, s):
        return 2 * s - 1


def indicial_roots(op: OperatorCoeffs) -> IndicialData:
    """Roots of ``s(s-1) + b_0``, ordered ``s1 <= s2``."""
    th = op.theta
    return IndicialData((1 - th) / 2, (1 + th) / 2)


def _is_zero(value, scale: float = 1.0) -> bool:
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= RESONANCE_TOL * max(1.0, scale)


def _recurrence(b: np.ndarray, ind: IndicialData, s, order: int, skip: int | None = None) -> np.ndarray:
    """Coefficients ``c_0..c_order`` at exponent ``s``; index ``skip`` is forced to 0."""
    c = np.zeros(order + 1, dtype=complex)
    c[0] = 1
    for n in range(1, order + 1):
        if n == skip:
            continue
        fn = ind.f(s + n)
        if _is_zero(fn):
            raise ResonantIndex(n)
        c[n] = -np.dot(c[:n], b[n:0:-1]) / complex(fn)
    return c


def _b(op: OperatorCoeffs, order: int) -> np.ndarray:
    b = np.zeros(order + 1, dtype=complex)
    m = min(order, op.order) + 1
    b[:m] = op.b[:m]
    return b


def frobenius_series(op: OperatorCoeffs, s, order: int | None = None) -> TruncSeries:
    """Solution ``x**s sum c_k x**k`` with ``c_0 = 1``, or :class:`ResonantIndex`."""
    order = op.order if order is None else order
    ind = indicial_roots(op)
    c = _recurrence(_b(op, order), ind, s, order)
    return TruncSeries(c, as_fraction(s))


def frobenius_coefficients(op: OperatorCoeffs, s, order: int | None = None) -> np.ndarray:
    """Raw ``c_k(s)`` for any (possibly non-rational) exponent ``s``."""
    order = op.order if order is None else order
    return _recurrence(_b(op, order), indicial_roots(op), s, order)


def derivative_coefficients(op: OperatorCoeffs, s, order: int | None = None) -> TruncSeries:
    """``c'_k(s)``: the s-derivative of the recurrence, ``f(s+n) c'_n + f'(s+n) c_n + R'_n = 0``."""
    order = op.order if order is None else order
    ind = indicial_roots(op)
    b = _b(op, order)
    c = _recurrence(b, ind, s, order)
    dc = np.zeros(order + 1, dtype=complex)
    for n in range(1, order + 1):
        fn = ind.f(s + n)
        if _is_zero(fn):
            raise ResonantIndex(n)
        fn = complex(fn)
        dr = np.dot(dc[:n], b[n:0:-1])
        dc[n] = -(complex(ind.fprime(s + n)) * c[n] + dr) / fn
    return TruncSeries(dc)


def obstruction_Rm(op: OperatorCoeffs) -> complex:
    """``R_m`` at ``s = s1`` for integer exponent difference ``m >= 1``."""
    ind = indicial_roots(op)
    diff = ind.difference
    if diff.denominator != 1 or diff < 1:
        raise NotIntegerDifference(f"exponent difference {diff} is not a positive integer")
    m = int(diff)
    b = _b(op, max(m, op.order))
    c = _recurrence(b, ind, ind.s1, m - 1)
    return complex(np.dot(c[:m], b[m:0:-1]))


def _obstruction_scale(op: OperatorCoeffs, m: int) -> float:
    ind = indicial_roots(op)
    b = _b(op, max(m, op.order))
    c = _recurrence(b, ind, ind.s1, m - 1)
    return float(np.sum(np.abs(c[:m] * b[m:0:-1])))


@dataclass(frozen=True)
class PowerSolution:
    u1: TruncSeries


@dataclass(frozen=True)
class LogSolution:
    """``u_log = u2 log x + x**s1 v(x)``."""

    v: TruncSeries


@dataclass(frozen=True)
class EqualRootsLog:
    """``u_log = u2 log x + x**s2 partner(x)``."""

    partner: TruncSeries


@dataclass(frozen=True)
class FrobeniusBasis:
    op: OperatorCoeffs
    indicial: IndicialData
    u2: TruncSeries
    second: PowerSolution | LogSolution | EqualRootsLog
    Rm: complex | None = None

    def solutions(self, x: complex, log_x: complex | None = None):
        """Values ``(u_a, u_b)`` of the basis pair and their derivatives at ``x``.

        The pair is ``(u1, u2)`` for a power basis and ``(u2, u_log)`` for a
        logarithmic one, so that the projective ratio is always ``u_b / u_a``.
        """
        lx = PRINCIPAL.log(x) if log_x is None else log_x
        u2, du2 = _eval_with_derivative(self.u2, x, lx)
        sec = self.second
        if isinstance(sec, PowerSolution):
            u1, du1 = _eval_with_derivative(sec.u1, x, lx)
            return (u1, du1), (u2, du2)
        w = sec.v if isinstance(sec, LogSolution) else sec.partner
        wv, dw = _eval_with_derivative(w, x, lx)
        ul = u2 * lx + wv
        dul = du2 * lx + u2 / x + dw
        return (u2, du2), (ul, dul)


def _eval_with_derivative(u: TruncSeries, x: complex, log_x: complex):
    k = np.arange(u.coeffs.size)
    s = float(u.shift)
    poly = np.polynomial.polynomial.polyval(x, u.coeffs)
    dpoly = np.polynomial.polynomial.polyval(x, (s + k) * u.coeffs)
    xs = cmath.exp(s * log_x)
    return poly * xs, dpoly * xs / x


def solve_basis(op: OperatorCoeffs, order: int | None = None) -> FrobeniusBasis:
    order = op.order if order is None else order
    ind = indicial_roots(op)
    b = _b(op, order)
    u2 = TruncSeries(_recurrence(b, ind, ind.s2, order), ind.s2)
    diff = ind.difference
    if diff == 0:
        partner = derivative_coefficients(op, ind.s2, order)
        return FrobeniusBasis(op, ind, u2, EqualRootsLog(TruncSeries(partner.coeffs, ind.s2)))
    if diff.denominator != 1:
        u1 = TruncSeries(_recurrence(b, ind, ind.s1, order), ind.s1)
        return FrobeniusBasis(op, ind, u2, PowerSolution(u1))
    m = int(diff)
    if m == 1:
        warnings.warn("exponent difference 1 lies outside theta != 1", OutsideHypothesesWarning, stacklevel=2)
    rm = obstruction_Rm(op)
    if abs(rm) <= OBSTRUCTION_TOL * max(1.0, _obstruction_scale(op, m)):
        u1 = TruncSeries(_recurrence(b, ind, ind.s1, order, skip=m), ind.s1)
        return FrobeniusBasis(op, ind, u2, PowerSolution(u1), Rm=0j)
    # c_k(s1) continued past the resonance with c_m := 0, which makes
    # L(x^s1 sum c_k x^k) = R_m x^(s1+m) exactly.
    w = _recurrence(b, ind, ind.s1, order, skip=m)
    v0 = -complex(ind.fprime(ind.s2)) / rm
    dc = derivative_coefficients(op, ind.s2, order).coeffs
    v = v0 * w
    v[m:] += dc[: order + 1 - m]
    return FrobeniusBasis(op, ind, u2, LogSolution(TruncSeries(v, ind.s1)), Rm=rm)


# -- projective ratio -------------------------------------------------------


@dataclass(frozen=True)
class PowerRatio:
    """``x**alpha * unit(x)`` with ``unit(0) = 1``."""

    alpha: Fraction
    unit: TruncSeries

    def __call__(self, x: complex, log_x: complex | None = None) -> complex:
        lx = PRINCIPAL.log(x) if log_x is None else log_x
        return cmath.exp(float(self.alpha) * lx) * evaluate(self.unit, x)


@dataclass(frozen=True)
class LogRatio:
    """``log x + psi(x)`` with ``psi(0) = 0``."""

    psi: TruncSeries

    def __call__(self, x: complex, log_x: complex | None = None) -> complex:
        lx = PRINCIPAL.log(x) if log_x is None else log_x
        return lx + evaluate(self.psi, x)


@dataclass(frozen=True)
class ObstructedLogRatio:
    """``log x + x**-m phi(x)`` with ``phi(0) = -f'(s2)/R_m != 0``."""

    m: int
    phi: TruncSeries

    def __call__(self, x: complex, log_x: complex | None = None) -> complex:
        lx = PRINCIPAL.log(x) if log_x is None else log_x
        return lx + evaluate(self.phi, x) / x**self.m


RatioForm = PowerRatio | LogRatio | ObstructedLogRatio


def projective_ratio(basis: FrobeniusBasis) -> RatioForm:
    a = TruncSeries(basis.u2.coeffs)
    sec = basis.second
    if isinstance(sec, PowerSolution):
        return PowerRatio(basis.indicial.difference, a / TruncSeries(sec.u1.coeffs))
    if isinstance(sec, LogSolution):
        return ObstructedLogRatio(int(basis.indicial.difference), TruncSeries(sec.v.coeffs) / a)
    return LogRatio(TruncSeries(sec.partner.coeffs) / a)


def local_monodromy(basis_or_ratio) -> MobiusMap:
    """Action on the ratio of one positive turn ``x -> e^{2 pi i} x``."""
    ratio = basis_or_ratio
    if isinstance(ratio, FrobeniusBasis):
        ratio = projective_ratio(ratio)
    if isinstance(ratio, PowerRatio):
        alpha = ratio.alpha
        if alpha.denominator == 1:
            return MobiusMap.identity()
        return MobiusMap(cmath.exp(2j * math.pi * float(alpha)), 0, 0, 1)
    return MobiusMap.translation(2j * math.pi)


# -- residual checks ----------------------------------------------------------


def _apply_operator(op: OperatorCoeffs, u: TruncSeries) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of ``L u`` at the shift of ``u`` and the matching magnitude scale."""
    n = u.coeffs.size
    k = np.arange(n)
    s = float(u.shift)
    second = (s + k) * (s + k - 1) * u.coeffs
    b = _b(op, n - 1)
    qu = np.convolve(b, u.coeffs)[:n]
    scale = np.abs(second) + np.convolve(np.abs(b), np.abs(u.coeffs))[:n]
    return second + qu, scale


def ode_residual(op: OperatorCoeffs, u: TruncSeries) -> np.ndarray:
    """Relative residual of each coefficient of ``x**2 u'' + q u``."""
    res, scale = _apply_operator(op, u)
    return np.abs(res) / np.maximum(scale, 1.0)


def log_ode_residual(op: OperatorCoeffs, u: TruncSeries, w: TruncSeries) -> tuple[np.ndarray, np.ndarray]:
    """Residual streams of ``L(u log x + w)``: the log-carrying part ``L u`` and the log-free part.

    ``L(u log x) = (L u) log x + 2 x u' - u``, so the log-free stream is
    ``2 x u' - u + L w``, expressed at the shift of ``w``.
    """
    log_part = ode_residual(op, u)
    k = np.arange(u.coeffs.size)
    cross = (2 * (float(u.shift) + k) - 1) * u.coeffs
    cross_s = TruncSeries(cross, u.shift).with_shift(w.shift)
    n = min(cross_s.coeffs.size, w.coeffs.size)
    lw, scale = _apply_operator(op, w.truncate(n - 1))
    free = cross_s.coeffs[:n] + lw
    free_scale = np.abs(cross_s.coeffs[:n]) + scale
    return log_part, np.abs(free) / np.maximum(free_scale, 1.0)


def basis_residual(basis: FrobeniusBasis, through: int | None = None) -> float:
    """Largest relative residual over every produced solution, through ``through``."""
    op = basis.op
    n = (basis.u2.order if through is None else through) + 1
    worst = float(np.max(ode_residual(op, basis.u2)[:n]))
    sec = basis.second
    if isinstance(sec, PowerSolution):
        worst = max(worst, float(np.max(ode_residual(op, sec.u1)[:n])))
    else:
        w = sec.v if isinstance(sec, LogSolution) else sec.partner
        lp, fp = log_ode_residual(op, basis.u2, w)
        worst = max(worst, float(np.max(lp[:n])), float(np.max(fp[:n])))
    return worst
