"""Truncated complex power series with an exact rational exponent shift.

``TruncSeries(coeffs, shift)`` stands for ``x**shift * sum(c_k x**k, k=0..N)``
where ``N = len(coeffs) - 1`` is the truncation order.  Coefficients past
``N`` are unknown, not zero, so binary operations truncate to the smaller
order.  Shifts are kept as :class:`fractions.Fraction` so that exponent
bookkeeping (for instance ``s2 - s1`` in a Frobenius basis) stays exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np

DEFAULT_ORDER = 32


class SeriesError(ValueError):
    pass


class ShiftMismatch(SeriesError):
    pass


class DivisionByZeroSeries(SeriesError, ZeroDivisionError):
    pass


class InnerNotVanishing(SeriesError):
    pass


class BadConstantTerm(SeriesError):
    pass


class BranchCutHit(SeriesError):
    pass


def as_fraction(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise TypeError(f"shift must be rational, got {s!r}")


@dataclass(frozen=True)
class BranchSpec:
    """Branch of ``log x``: arguments are taken in ``(cut - 2 pi, cut]``.

    With ``strict=True`` points lying exactly on the cut are refused.
    """

    cut: float = math.pi
    strict: bool = False

    def log(self, x: complex) -> complex:
        if x == 0:
            raise BranchCutHit("log of zero")
        arg = cmath.phase(x)
        lo = self.cut - 2 * math.pi
        while arg <= lo:
            arg += 2 * math.pi
        while arg > self.cut:
            arg -= 2 * math.pi
        if self.strict and abs(arg - self.cut) < 1e-15:
            raise BranchCutHit(f"{x} lies on the branch cut at angle {self.cut}")
        return complex(math.log(abs(x)), arg)


PRINCIPAL = BranchSpec()


class TruncSeries:
    __slots__ = ("coeffs", "shift")

    def __init__(self, coeffs, shift=0):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise SeriesError("a series needs at least one coefficient")
        c.flags.writeable = False
        self.coeffs = c
        self.shift = as_fraction(shift)

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER) -> "TruncSeries":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def zeros(cls, order: int = DEFAULT_ORDER, shift=0) -> "TruncSeries":
        return cls(np.zeros(order + 1, dtype=complex), shift)

    @classmethod
    def variable(cls, order: int = DEFAULT_ORDER) -> "TruncSeries":
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = 1
        return cls(c)

    @classmethod
    def from_poly(cls, coeffs, order: int = DEFAULT_ORDER, shift=0) -> "TruncSeries":
        """Exact polynomial zero-padded (or cut) to ``order``."""
        c = np.zeros(order + 1, dtype=complex)
        src = np.asarray(coeffs, dtype=complex).ravel()[: order + 1]
        c[: src.size] = src
        return cls(c, shift)

    # -- basic properties ---------------------------------------------------
    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        sh = f", shift={self.shift}" if self.shift else ""
        return f"TruncSeries({np.array2string(self.coeffs, precision=6, threshold=8)}{sh})"

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend order {self.order} to {order}")
        return TruncSeries(self.coeffs[: order + 1], self.shift)

    def with_shift(self, shift) -> "TruncSeries":
        """Re-express with a smaller shift by prepending zeros (integer gap only)."""
        shift = as_fraction(shift)
        gap = self.shift - shift
        if gap.denominator != 1 or gap < 0:
            raise ShiftMismatch(f"cannot move shift {self.shift} down to {shift}")
        return TruncSeries(np.concatenate([np.zeros(int(gap), dtype=complex), self.coeffs]), shift)

    def scale(self, k) -> "TruncSeries":
        return TruncSeries(self.coeffs * k, self.shift)

    def shifted(self, delta) -> "TruncSeries":
        """Multiply by ``x**delta``."""
        return TruncSeries(self.coeffs, self.shift + as_fraction(delta))

    def rescale_variable(self, lam) -> "TruncSeries":
        """Coefficients of ``f(lam x)`` without the ``lam**shift`` factor."""
        return TruncSeries(self.coeffs * lam ** np.arange(self.coeffs.size), self.shift)

    # -- operators ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, Number):
            return TruncSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return arith("add", self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return arith("sub", self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return arith("sub", other, self)

    def __neg__(self):
        return TruncSeries(-self.coeffs, self.shift)

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if isinstance(other, TruncSeries):
            return arith("mul", self, other)
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self.scale(1 / other)
        if isinstance(other, TruncSeries):
            return arith("div", self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return arith("div", other, self)

    def __call__(self, x, branch: BranchSpec = PRINCIPAL, log_x=None):
        return evaluate(self, x, branch, log_x)

    def close_to(self, other: "TruncSeries", tol: float = 1e-12) -> bool:
        return max_difference(self, other) <= tol


def max_difference(f: TruncSeries, g: TruncSeries) -> float:
    """Max coefficient difference relative to ``1 + max |input coefficient|``."""
    if f.shift != g.shift:
        raise ShiftMismatch(f"shifts {f.shift} and {g.shift} differ")
    n = min(f.order, g.order) + 1
    a, b = f.coeffs[:n], g.coeffs[:n]
    scale = 1.0 + max(np.max(np.abs(a)), np.max(np.abs(b)))
    return float(np.max(np.abs(a - b)) / scale)


def _mul_coeffs(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return np.convolve(a[:n], b[:n])[:n]


def _inv_coeffs(g: np.ndarray, n: int) -> np.ndarray:
    if abs(g[0]) <= 1e-300:
        raise DivisionByZeroSeries("series with vanishing leading coefficient is not invertible")
    out = np.zeros(n, dtype=complex)
    out[0] = 1 / g[0]
    for k in range(1, n):
        m = min(k, g.size - 1)
        out[k] = -sum(g[j] * out[k - j] for j in range(1, m + 1)) / g[0]
    return out


def arith(kind: str, f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """``add``/``sub`` need equal shifts; ``mul`` adds shifts, ``div`` subtracts them."""
    n = min(f.order, g.order) + 1
    if kind in ("add", "sub"):
        if f.shift != g.shift:
            raise ShiftMismatch(f"cannot {kind} series with shifts {f.shift} and {g.shift}")
        sign = 1 if kind == "add" else -1
        return TruncSeries(f.coeffs[:n] + sign * g.coeffs[:n], f.shift)
    if kind == "mul":
        return TruncSeries(_mul_coeffs(f.coeffs, g.coeffs, n), f.shift + g.shift)
    if kind == "div":
        return TruncSeries(_mul_coeffs(f.coeffs, _inv_coeffs(g.coeffs, n), n), f.shift - g.shift)
    raise ValueError(f"unknown operation {kind!r}")


def compose(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """Taylor coefficients of ``f(g(x))`` for ``g(0) = 0``."""
    if f.shift != 0 or g.shift != 0:
        raise ShiftMismatch("composition needs zero-shift series")
    if g.coeffs[0] != 0:
        raise InnerNotVanishing(f"inner series must vanish at 0, got {g.coeffs[0]}")
    n = min(f.order, g.order) + 1
    gc = g.coeffs[:n]
    out = np.zeros(n, dtype=complex)
    # Horner: f0 + g (f1 + g (f2 + ...))
    for c in f.coeffs[:n][::-1]:
        out = _mul_coeffs(out, gc, n)
        out[0] += c
    return TruncSeries(out)


def derive(f: TruncSeries) -> TruncSeries:
    """Termwise derivative, including the ``x**shift`` factor."""
    k = np.arange(f.coeffs.size)
    if f.shift == 0:
        if f.order == 0:
            return TruncSeries([0.0])
        return TruncSeries(k[1:] * f.coeffs[1:])
    return TruncSeries((float(f.shift) + k) * f.coeffs, f.shift - 1)


def integrate(f: TruncSeries) -> TruncSeries:
    """Antiderivative vanishing at 0 (zero shift only), order grows by one."""
    if f.shift != 0:
        raise ShiftMismatch("integrate needs a zero-shift series")
    k = np.arange(1, f.coeffs.size + 1)
    return TruncSeries(np.concatenate([[0], f.coeffs / k]))


def exp_unit(f: TruncSeries) -> TruncSeries:
    """``exp(f)`` for ``f(0) = 0``."""
    if f.shift != 0 or abs(f.coeffs[0]) > 1e-14:
        raise BadConstantTerm("exp_unit needs a zero-shift series with f(0) = 0")
    n = f.coeffs.size
    a = f.coeffs
    e = np.zeros(n, dtype=complex)
    e[0] = 1
    ka = np.arange(n) * a
    for k in range(1, n):
        e[k] = np.dot(ka[1 : k + 1], e[k - 1 :: -1][:k]) / k
    return TruncSeries(e)


def log_unit(g: TruncSeries) -> TruncSeries:
    """``log(g)`` for ``g(0) = 1``."""
    if g.shift != 0 or abs(g.coeffs[0] - 1) > 1e-14:
        raise BadConstantTerm("log_unit needs a zero-shift series with g(0) = 1")
    n = g.coeffs.size
    b = g.coeffs
    out = np.zeros(n, dtype=complex)
    # k L_k = k b_k - sum_{j=1}^{k-1} j L_j b_{k-j}
    for k in range(1, n):
        s = k * b[k]
        if k > 1:
            j = np.arange(1, k)
            s -= np.dot(j * out[1:k], b[k - 1 : 0 : -1])
        out[k] = s / k
    return TruncSeries(out)


def pow_unit(f: TruncSeries, beta) -> TruncSeries:
    """Principal ``f**beta`` for ``f(0) = 1``."""
    return exp_unit(log_unit(f).scale(beta))


def evaluate(f: TruncSeries, x, branch: BranchSpec = PRINCIPAL, log_x=None) -> complex:
    """``x**shift * sum c_k x**k``; ``log_x`` overrides the branch for ``x**shift``."""
    x = complex(x)
    poly = np.polynomial.polynomial.polyval(x, f.coeffs)
    s = f.shift
    if s == 0:
        return complex(poly)
    if log_x is None:
        if s.denominator == 1 and s > 0:
            return complex(poly * x ** int(s))
        if x == 0:
            raise BranchCutHit("x = 0 with a non-integer or negative shift")
        if s.denominator == 1:
            return complex(poly * x ** int(s))
        log_x = branch.log(x)
    return complex(poly * cmath.exp(float(s) * log_x))


def geometric(order: int = DEFAULT_ORDER) -> TruncSeries:
    """``1/(1 - x)``."""
    return TruncSeries(np.ones(order + 1))
