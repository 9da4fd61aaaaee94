"""Fractional linear transformations and their classification.

A :class:`MobiusMap` is a 2x2 complex matrix taken modulo nonzero scalars.
Two models of the hyperbolic plane are supported, the Poincare disk and the
upper half-plane, and isometries of either model can be classified as
elliptic, parabolic or hyperbolic and conjugated into a standard form.

Standard forms used here:

* Disk: rotation ``z -> e^{i theta} z`` for elliptic maps; the Cayley image of
  ``z -> z + t`` (parabolic) or ``z -> lambda z`` (hyperbolic) otherwise.
* HalfPlane: ``z -> z + t`` (parabolic), ``z -> lambda z`` (hyperbolic); the
  Cayley pull-back of a rotation about ``i`` for elliptic maps.
"""

from __future__ import annotations

import cmath
import math
import sys
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

INF = complex(math.inf, 0.0)

DET_TOL = 1e-14
MODEL_TOL = 1e-9
TRACE_EPS = 1e-9


class DegenerateMatrix(ValueError):
    pass


class NotAnIsometry(ValueError):
    pass


class IdentityInput(ValueError):
    pass


class NearParabolicWarning(UserWarning):
    """Squared trace fell within the parabolic tolerance band without being exactly 4."""


class Model(Enum):
    DISK = "disk"
    HALFPLANE = "halfplane"


class Kind(Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


def is_inf(z) -> bool:
    return cmath.isinf(z)


@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if scale == 0 or not math.isfinite(scale) or abs(self.det) <= DET_TOL * scale * scale:
            raise DegenerateMatrix(f"degenerate Mobius matrix {self.matrix.tolist()}")

    @classmethod
    def from_matrix(cls, m) -> "MobiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, t) -> "MobiusMap":
        return cls(1, t, 0, 1)

    @classmethod
    def scaling(cls, lam) -> "MobiusMap":
        return cls(lam, 0, 0, 1)

    @classmethod
    def rotation(cls, theta: float) -> "MobiusMap":
        return cls(cmath.exp(1j * theta), 0, 0, 1)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __call__(self, z):
        return apply(self, z)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return compose(self, other)

    def derivative(self, z: complex) -> complex:
        """Derivative of the map at a finite point."""
        return self.det / (self.c * z + self.d) ** 2

    def __repr__(self):
        return f"MobiusMap(a={self.a:.6g}, b={self.b:.6g}, c={self.c:.6g}, d={self.d:.6g})"


def compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """The map ``z -> m1(m2(z))``."""
    return MobiusMap.from_matrix(m1.matrix @ m2.matrix)


def inverse(m: MobiusMap) -> MobiusMap:
    return MobiusMap(m.d, -m.b, -m.c, m.a)


def conjugate_by(k: MobiusMap, m: MobiusMap) -> MobiusMap:
    """``k o m o k^{-1}``."""
    return compose(k, compose(m, inverse(k)))


def apply(m: MobiusMap, z):
    """Evaluate ``(az+b)/(cz+d)`` on the Riemann sphere; infinity is ``INF``."""
    if is_inf(z):
        return INF if m.c == 0 else m.a / m.c
    num = m.a * z + m.b
    den = m.c * z + m.d
    if den == 0:
        return INF
    return num / den


def normalize_det(m: MobiusMap) -> MobiusMap:
    """Representative with determinant 1.

    The remaining sign is fixed so that the first nonzero entry (in the
    order a, b, c, d) has positive real part, or zero real part and positive
    imaginary part.
    """
    r = cmath.sqrt(m.det)
    entries = [m.a / r, m.b / r, m.c / r, m.d / r]
    scale = max(abs(e) for e in entries)
    for e in entries:
        if abs(e) > 1e-15 * scale:
            if e.real < 0 or (e.real == 0 and e.imag < 0):
                entries = [-x for x in entries]
            break
    return MobiusMap(*entries)


def canonical_entries(m: MobiusMap) -> np.ndarray:
    """Entries scaled so the largest-modulus entry equals 1 (phase removed).

    Entries within a relative 1e-6 of the largest modulus count as tied and
    the first of them is used, so rounding noise cannot switch the pivot.
    """
    entries = np.array([m.a, m.b, m.c, m.d], dtype=complex)
    mods = np.abs(entries)
    k = int(np.flatnonzero(mods >= (1 - 1e-6) * mods.max())[0])
    return entries / entries[k]


def projective_distance(m1: MobiusMap, m2: MobiusMap) -> float:
    """Max entrywise difference between scalar-canonical representatives."""
    return float(np.max(np.abs(canonical_entries(m1) - canonical_entries(m2))))


def is_identity(m: MobiusMap, tol: float = MODEL_TOL) -> bool:
    return projective_distance(m, MobiusMap.identity()) <= tol


def preserves(m: MobiusMap, model: Model, tol: float = MODEL_TOL) -> bool:
    """True iff some scalar multiple of ``m`` lies in PSU(1,1) (disk) or PSL(2,R) (half-plane).

    The test works on the entries scaled to unit size and never takes a
    square root of the determinant, whose rounding error would otherwise be
    amplified by the size of the entries.
    """
    a, b, c, d = canonical_entries(m)
    if model is Model.DISK:
        # d = k conj(a), c = k conj(b) for a common unimodular k, and |a| > |b|
        err = max(abs(abs(d) - abs(a)), abs(abs(c) - abs(b)), abs(d * b.conjugate() - c * a.conjugate()))
        return err <= tol and abs(a) - abs(b) > tol
    err = max(abs(a.imag), abs(b.imag), abs(c.imag), abs(d.imag))
    return err <= tol and (a * d - b * c).real > tol


def cayley() -> MobiusMap:
    """``z -> (z - i)/(z + i)``, carrying the half-plane onto the disk and ``i`` to 0."""
    return MobiusMap(1, -1j, 1, 1j)


def to_halfplane(m: MobiusMap, model: Model) -> MobiusMap:
    """Express an isometry of ``model`` as a real determinant-1 half-plane map."""
    if model is Model.DISK:
        c = cayley()
        m = compose(inverse(c), compose(m, c))
    n = normalize_det(m)
    return MobiusMap(n.a.real, n.b.real, n.c.real, n.d.real)


def fixed_points(m: MobiusMap, tol: float = 1e-12) -> list:
    """Fixed points on the Riemann sphere (one entry for a double root)."""
    n = normalize_det(m)
    a, b, c, d = n.a, n.b, n.c, n.d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= tol * scale:
        if abs(a - d) <= tol * scale:
            return [INF]
        return [b / (d - a), INF]
    disc = cmath.sqrt((a - d) ** 2 + 4 * b * c)
    p1 = ((a - d) + disc) / (2 * c)
    p2 = ((a - d) - disc) / (2 * c)
    if abs(disc) <= math.sqrt(tol) * scale:
        return [(a - d) / (2 * c)]
    return [p1, p2]


def multiplier(m: MobiusMap, p) -> complex:
    """Derivative of ``m`` at its fixed point ``p`` (conjugation invariant)."""
    if is_inf(p):
        return m.d / m.a
    return m.derivative(p)


@dataclass(frozen=True)
class IsometryClass:
    """Conjugacy type of an isometry plus its standard-form parameter.

    ``parameter`` is the rotation angle theta in (-pi, pi] for elliptic maps,
    the translation length t for parabolic maps and the stretch factor
    lambda > 1 for hyperbolic maps (None for the identity).  ``trace_gap``
    records |tr^2 - 4| of the determinant-1 representative.
    """

    kind: Kind
    parameter: float | None = None
    trace_gap: float = 0.0


def squared_trace(m: MobiusMap) -> complex:
    n = normalize_det(m)
    return (n.a + n.d) ** 2


def _require_isometry(m: MobiusMap, model: Model):
    if not preserves(m, model):
        raise NotAnIsometry(f"{m!r} is not an isometry of the {model.value} model")


def _interior_fixed_point(m: MobiusMap, model: Model):
    for p in fixed_points(m):
        if is_inf(p):
            continue
        if model is Model.DISK and abs(p) < 1:
            return p
        if model is Model.HALFPLANE and p.imag > 0:
            return p
    raise NotAnIsometry("elliptic map without an interior fixed point")


def _parabolic_conjugator_h(mh: MobiusMap) -> MobiusMap:
    """Real determinant-1 map sending the boundary fixed point of ``mh`` to infinity."""
    (p,) = fixed_points(mh, tol=1e-7)[:1]
    if is_inf(p) or abs(mh.c) <= 1e-12 * max(abs(mh.a), abs(mh.d)):
        return MobiusMap.identity()
    return MobiusMap(0, -1, 1, -p.real)


def _hyperbolic_conjugator_h(mh: MobiusMap) -> MobiusMap:
    """Real positive-determinant map sending the repelling fixed point to 0 and the attracting one to infinity."""
    pts = fixed_points(mh)
    pts.sort(key=lambda p: -abs(multiplier(mh, p)))
    rep, att = pts
    if is_inf(att):
        k = MobiusMap(1, -rep.real, 0, 1)
    elif is_inf(rep):
        k = MobiusMap(0, 1, 1, -att.real)
    else:
        k = MobiusMap(1, -rep.real, 1, -att.real)
    if k.det.real < 0:
        k = MobiusMap(-k.a, -k.b, k.c, k.d)
    return k


def _elliptic_conjugator_d(md: MobiusMap) -> MobiusMap:
    p = _interior_fixed_point(md, Model.DISK)
    return MobiusMap(1, -p, -p.conjugate(), 1)


def classify(m: MobiusMap, model: Model, eps: float = TRACE_EPS) -> IsometryClass:
    """Classify an isometry of ``model`` by the squared trace of its det-1 representative."""
    _require_isometry(m, model)
    if is_identity(m):
        return IsometryClass(Kind.IDENTITY)
    tr2 = squared_trace(m)
    # rounding level of tr^2 for a det-1 matrix with entries of this size
    n = normalize_det(m)
    noise = 64 * sys.float_info.epsilon * max(abs(n.a), abs(n.b), abs(n.c), abs(n.d), 1.0) ** 2
    if abs(tr2.imag) > max(eps * max(1.0, abs(tr2)), noise):
        raise NotAnIsometry(f"squared trace {tr2} is not real")
    x = tr2.real
    gap = abs(x - 4.0)
    if gap <= max(eps, noise):
        if noise < gap:
            warnings.warn(
                f"squared trace {x!r} within {eps} of 4; classified parabolic but the "
                "classification is ill-conditioned",
                NearParabolicWarning,
                stacklevel=2,
            )
        mh = to_halfplane(m, model)
        k = _parabolic_conjugator_h(mh)
        std = normalize_det(conjugate_by(k, mh))
        t = (std.b / std.d).real
        return IsometryClass(Kind.PARABOLIC, t, gap)
    if x < 4.0:
        p = _interior_fixed_point(m, model)
        theta = cmath.phase(m.derivative(p))
        return IsometryClass(Kind.ELLIPTIC, theta, gap)
    mh = to_halfplane(m, model)
    rep = max(fixed_points(mh), key=lambda p: abs(multiplier(mh, p)))
    return IsometryClass(Kind.HYPERBOLIC, abs(multiplier(mh, rep)), gap)


def classify_by_fixed_points(m: MobiusMap, model: Model, tol: float = 1e-7) -> Kind:
    """Fixed-point based classification, independent of the trace test."""
    _require_isometry(m, model)
    if is_identity(m):
        return Kind.IDENTITY
    interior = boundary = 0
    for p in fixed_points(m, tol=1e-10):
        if model is Model.DISK:
            r = abs(p) if not is_inf(p) else math.inf
            if r < 1 - tol:
                interior += 1
            elif abs(r - 1) <= tol:
                boundary += 1
        else:
            if is_inf(p) or abs(p.imag) <= tol * max(1.0, abs(p)):
                boundary += 1
            elif p.imag > 0:
                interior += 1
    if interior:
        return Kind.ELLIPTIC
    if boundary == 1:
        return Kind.PARABOLIC
    if boundary == 2:
        return Kind.HYPERBOLIC
    raise NotAnIsometry("no fixed point in the closed model")


def standard_form(cls: IsometryClass, model: Model) -> MobiusMap:
    """The representative of ``cls`` that :func:`conjugate_to_normal_form` targets."""
    c = cayley()
    if cls.kind is Kind.IDENTITY:
        return MobiusMap.identity()
    if cls.kind is Kind.ELLIPTIC:
        rot = MobiusMap.rotation(cls.parameter)
        return rot if model is Model.DISK else conjugate_by(inverse(c), rot)
    std = MobiusMap.translation(cls.parameter) if cls.kind is Kind.PARABOLIC else MobiusMap.scaling(cls.parameter)
    return std if model is Model.HALFPLANE else conjugate_by(c, std)


def conjugate_to_normal_form(m: MobiusMap, model: Model) -> tuple[MobiusMap, IsometryClass]:
    """Find an isometry ``k`` of ``model`` with ``k m k^{-1}`` in standard form.

    The conjugator is not unique; one canonical choice is returned.
    """
    cls = classify(m, model)
    if cls.kind is Kind.IDENTITY:
        raise IdentityInput("the identity has no normal-form conjugator")
    c = cayley()
    if cls.kind is Kind.ELLIPTIC:
        md = m if model is Model.DISK else conjugate_by(c, m)
        kd = _elliptic_conjugator_d(md)
        k = kd if model is Model.DISK else compose(inverse(c), compose(kd, c))
    else:
        mh = to_halfplane(m, model)
        if cls.kind is Kind.PARABOLIC:
            kh = _parabolic_conjugator_h(mh)
        else:
            kh = _hyperbolic_conjugator_h(mh)
        k = kh if model is Model.HALFPLANE else compose(c, compose(kh, inverse(c)))
    return normalize_det(k), cls
