"""Classification of a puncture and its normalizing coordinate.

Given a germ ``F = M o B o w`` of a developing map, the monodromy around the
puncture decides the singularity type:

* power branch, elliptic or trivial monodromy: cone of angle ``2 pi alpha``;
  in the normal coordinate ``z`` the developing map is ``z**alpha`` (disk);
* log branch, parabolic monodromy with positive translation in the
  half-plane: cusp; the developing map becomes ``-i log z`` (half-plane);
* every other combination is one of the contradictions in :class:`Reason`.

The normal coordinate is unique up to ``z -> lambda z`` with ``|lambda| = 1``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .frobenius import (
    FrobeniusBasis,
    ObstructedLogRatio,
    PowerRatio,
    RatioForm,
    local_monodromy,
    projective_ratio,
    solve_basis,
)
from .germ import DevelopingGerm, Log, Power, in_model
from .metric import Conical, Cusp, OutOfDomain, model_density, pullback_density
from .mobius import (
    Kind,
    MobiusMap,
    Model,
    cayley,
    classify,
    compose,
    conjugate_to_normal_form,
    inverse,
    normalize_det,
    preserves,
    projective_distance,
)
from .schwarzian import SingularityData, ode_from_schwarzian
from .series import DEFAULT_ORDER, TruncSeries, compose as series_compose, derive, evaluate, exp_unit, max_difference, pow_unit

COEFF_TOL = 1e-8


class MonodromyNotIsometric(ValueError):
    pass


class MonodromyMismatch(ValueError):
    """A declared monodromy disagrees with the one the germ itself induces."""


class NotNormalizable(ValueError):
    pass


class InconsistentGerm(NotNormalizable):
    """The germ cannot be a developing map (for instance its center leaves the model)."""


class NotRotationRelated(ValueError):
    pass


class WitnessNotFound(RuntimeError):
    pass


class BranchChoiceWarning(UserWarning):
    """A root was taken on the principal branch next to its cut."""


class Reason(Enum):
    HYPERBOLIC_MONODROMY_CONICAL = "HyperbolicMonodromyConical"
    PARABOLIC_MONODROMY_CONICAL = "ParabolicMonodromyConical"
    ELLIPTIC_MONODROMY_CUSP = "EllipticMonodromyCusp"
    HYPERBOLIC_MONODROMY_CUSP = "HyperbolicMonodromyCusp"
    WRONG_LOG_ORIENTATION = "WrongLogOrientation"
    OBSTRUCTED_LOG_ESCAPE = "ObstructedLogEscape"
    CENTER_OUTSIDE_MODEL = "CenterOutsideModel"


@dataclass(frozen=True)
class Inconsistency:
    reason: Reason
    witness: complex | None = None
    detail: str = ""


def germ_monodromy(germ: DevelopingGerm) -> MobiusMap:
    """Deck action on ``F`` of one positive turn around the puncture."""
    if isinstance(germ.branch, Power):
        if germ.branch.is_integer:
            return MobiusMap.identity()
        deck = MobiusMap(cmath.exp(2j * math.pi * float(germ.branch.alpha)), 0, 0, 1)
    else:
        deck = MobiusMap.translation(2j * math.pi)
    return normalize_det(compose(germ.moebius, compose(deck, inverse(germ.moebius))))


def classify_singularity(germ: DevelopingGerm, monodromy: MobiusMap | None = None):
    """Return :class:`Conical`, :class:`Cusp` or an :class:`Inconsistency`.

    ``monodromy`` is the monodromy declared for the metric.  When omitted the
    germ's own monodromy is used; a declared value of a compatible type must
    agree with it.
    """
    own = germ_monodromy(germ)
    L = own if monodromy is None else monodromy
    if not preserves(L, germ.model):
        raise MonodromyNotIsometric(f"monodromy {L!r} is not an isometry of the {germ.model.value} model")
    cls = classify(L, germ.model)
    power = isinstance(germ.branch, Power)

    if power:
        if cls.kind is Kind.HYPERBOLIC:
            return Inconsistency(Reason.HYPERBOLIC_MONODROMY_CONICAL, detail=f"lambda={cls.parameter}")
        if cls.kind is Kind.PARABOLIC:
            return Inconsistency(Reason.PARABOLIC_MONODROMY_CONICAL, detail=f"t={cls.parameter}")
    else:
        if cls.kind is Kind.ELLIPTIC:
            return Inconsistency(Reason.ELLIPTIC_MONODROMY_CUSP, detail=f"theta={cls.parameter}")
        if cls.kind is Kind.HYPERBOLIC:
            return Inconsistency(Reason.HYPERBOLIC_MONODROMY_CUSP, detail=f"lambda={cls.parameter}")

    if monodromy is not None and projective_distance(own, monodromy) > 1e-8:
        raise MonodromyMismatch("declared monodromy differs from the germ's own monodromy")

    if power:
        center = germ.center_value()
        if not in_model(center, germ.model):
            return Inconsistency(Reason.CENTER_OUTSIDE_MODEL, detail=f"F(0)={center}")
        return Conical(float(germ.branch.alpha))
    if cls.kind is not Kind.PARABOLIC:
        raise MonodromyMismatch("a log branch always has parabolic monodromy")
    if cls.parameter < 0:
        return Inconsistency(Reason.WRONG_LOG_ORIENTATION, detail=f"t={cls.parameter}")
    return Cusp()


@dataclass(frozen=True)
class NormalForm:
    """Normal coordinate ``z(xi)`` of a germ.

    In ``z`` the developing map is ``z**alpha`` into the disk (cone) or
    ``-i log z`` into the half-plane (cusp).  Any ``lambda * coord`` with
    ``|lambda| = 1`` is an equally valid normal coordinate.
    """

    kind: Conical | Cusp
    coord: TruncSeries
    developing_map: MobiusMap = field(default_factory=MobiusMap.identity)

    def rotated(self, lam: complex) -> "NormalForm":
        if abs(abs(lam) - 1) > 1e-12:
            raise ValueError("rotation factor must have modulus 1")
        return NormalForm(self.kind, self.coord.scale(lam), self.developing_map)


def _root(mu: complex, alpha) -> complex:
    """Principal ``mu**(1/alpha)``."""
    if abs(abs(cmath.phase(mu)) - math.pi) < 1e-9:
        warnings.warn(f"principal root of {mu} taken next to the branch cut", BranchChoiceWarning, stacklevel=3)
    return cmath.exp(cmath.log(mu) / float(alpha))


def _center_map(p: complex, model: Model) -> MobiusMap:
    """Model-to-disk isometry sending ``p`` to 0."""
    if model is Model.DISK:
        return MobiusMap(1, -p, -p.conjugate(), 1)
    return MobiusMap(1, -p, 1, -p.conjugate())


def _with_inner(series: TruncSeries, germ: DevelopingGerm) -> TruncSeries:
    if germ.inner is None:
        return series
    return series_compose(series, germ.inner)


def _conical_coordinate(germ: DevelopingGerm, order: int) -> NormalForm:
    alpha = germ.branch.alpha
    L = germ_monodromy(germ)
    if germ.branch.is_integer:
        n = int(round(float(alpha)))
        A = _center_map(germ.center_value(), germ.model)
    else:
        n = None
        K, cls = conjugate_to_normal_form(L, germ.model)
        A = K if germ.model is Model.DISK else compose(cayley(), K)
    G = normalize_det(compose(A, germ.moebius))
    scale = max(abs(G.a), abs(G.d))
    if abs(G.b) > COEFF_TOL * scale:
        raise InconsistentGerm(f"normalized germ does not vanish at the puncture (b={G.b})")
    if abs(G.d) < COEFF_TOL * scale:
        raise InconsistentGerm("normalized germ has a pole at the puncture")
    mu = G.a / G.d
    lead = _root(mu, alpha)
    if n is None:
        if abs(G.c) > COEFF_TOL * scale:
            raise InconsistentGerm(f"off-diagonal entry c={G.c} should vanish for elliptic monodromy")
        z = TruncSeries.variable(order).scale(lead)
    else:
        # z = xi (mu / (1 + (c/d) xi^n))^(1/n)
        u = np.zeros(order + 1, dtype=complex)
        u[0] = 1
        if n <= order:
            u[n] = G.c / G.d
        root = pow_unit(TruncSeries(u), -1.0 / n)
        z = TruncSeries(np.concatenate([[0], root.coeffs[:order]])).scale(lead)
    return NormalForm(Conical(float(alpha)), _with_inner(z, germ), A)


def _cusp_coordinate(germ: DevelopingGerm, order: int) -> NormalForm:
    Mh = germ.moebius if germ.model is Model.HALFPLANE else compose(inverse(cayley()), germ.moebius)
    deck = MobiusMap.translation(2j * math.pi)
    Lh = compose(Mh, compose(deck, inverse(Mh)))
    K, cls = conjugate_to_normal_form(Lh, Model.HALFPLANE)
    G = normalize_det(compose(K, Mh))
    scale = max(abs(G.a), abs(G.d))
    if abs(G.c) > COEFF_TOL * scale:
        raise InconsistentGerm(f"normalized cusp germ keeps c={G.c}")
    a2 = G.a / G.d
    delta = (a2 / 1j)
    if abs(delta.imag) > 1e-9 * max(1.0, abs(delta)):
        raise InconsistentGerm(f"a^2 = {a2} is not purely imaginary")
    if delta.real >= 0:
        raise InconsistentGerm("log branch oriented the wrong way")
    shift = G.b / G.a
    z = TruncSeries.variable(order).scale(cmath.exp(shift))
    sq = math.sqrt(-delta.real)
    H = compose(MobiusMap(1 / sq, 0, 0, sq), K)
    if germ.model is Model.DISK:
        H = compose(H, inverse(cayley()))
    return NormalForm(Cusp(), _with_inner(z, germ), normalize_det(H))


def normal_coordinate(germ: DevelopingGerm, order: int = DEFAULT_ORDER) -> NormalForm:
    """Series ``z(xi)`` with ``z(0) = 0``, ``z'(0) != 0`` putting the metric in model form.

    ``developing_map`` of the result is the model isometry ``A`` with
    ``A o F = z**alpha`` (cone, disk valued) or ``A o F = -i log z`` (cusp,
    half-plane valued), up to the rotation freedom.
    """
    verdict = classify_singularity(germ)
    if isinstance(verdict, Inconsistency):
        if verdict.reason is Reason.CENTER_OUTSIDE_MODEL:
            raise InconsistentGerm(f"germ center is outside the model: {verdict.detail}")
        raise NotNormalizable(f"germ is inconsistent: {verdict.reason.value}")
    if isinstance(verdict, Conical):
        return _conical_coordinate(germ, order)
    return _cusp_coordinate(germ, order)


def _tail_bound(series: TruncSeries, r: float) -> float:
    c = np.abs(series.coeffs)
    k = np.arange(c.size)
    top = c[-3:] * r ** k[-3:]
    return float(np.max(top))


def default_samples(nf: NormalForm, germ: DevelopingGerm, count: int = 50, seed: int = 0) -> list[complex]:
    """Points on ``|xi| = 0.05`` and ``0.15`` at random phases off the negative axis.

    The two radii are halved together until the germ maps every point into
    its model, ``|z(xi)| < 1`` and the coordinate series' truncated tail is
    negligible there.
    """
    rng = np.random.default_rng(seed)
    phases = rng.uniform(-math.pi + 0.05, math.pi - 0.05, size=count)
    radii = np.where(np.arange(count) < count // 2, 0.05, 0.15)
    lead = abs(nf.coord.coeffs[1])
    for _ in range(60):
        pts = [r * cmath.exp(1j * p) for r, p in zip(radii, phases)]
        rmax = float(np.max(radii))
        ok = _tail_bound(nf.coord, rmax) <= 1e-15 * lead * rmax
        if ok and germ.inner is not None:
            ok = _tail_bound(germ.inner, rmax) <= 1e-15 * abs(germ.inner.coeffs[1]) * rmax
        if ok:
            for x in pts:
                try:
                    if not in_model(germ(x), germ.model) or not 0 < abs(evaluate(nf.coord, x)) < 1:
                        ok = False
                        break
                except (ValueError, ZeroDivisionError):
                    ok = False
                    break
        if ok:
            return pts
        radii = radii / 2
    raise OutOfDomain("could not find sample points inside the germ's domain")


def verify_normal_form(nf: NormalForm, germ: DevelopingGerm, samples=None) -> float:
    """Max relative gap between the germ's metric and the model metric pulled back through ``z``."""
    if samples is None:
        samples = default_samples(nf, germ)
    dz = derive(nf.coord)
    worst = 0.0
    for x in samples:
        if abs(x) > 0.2:
            raise OutOfDomain(f"sample {x} outside |xi| <= 0.2")
        rho = pullback_density(germ, x)
        z = evaluate(nf.coord, x)
        model = model_density(nf.kind, z) * abs(evaluate(dz, x)) ** 2
        worst = max(worst, abs(rho - model) / rho)
    return worst


def rotation_class(z1: TruncSeries, z2: TruncSeries, tol: float = 1e-10) -> complex:
    """Unimodular ``lambda`` with ``z2 = lambda z1``."""
    if abs(z1.coeffs[1]) == 0:
        raise NotRotationRelated("z1 is not a coordinate")
    lam = complex(z2.coeffs[1] / z1.coeffs[1])
    if abs(abs(lam) - 1) > tol:
        raise NotRotationRelated(f"|lambda| = {abs(lam)} differs from 1")
    if max_difference(z2, z1.scale(lam)) > tol:
        raise NotRotationRelated("coordinates are not proportional")
    return lam


# -- obstructed logarithmic case ----------------------------------------------


def obstructed_value(m: int, phi: TruncSeries, a: complex, c: complex, d: complex, x: complex) -> complex:
    """``F = (a R + b)/(c R + d)`` with ``R = log x + x**-m phi(x)`` and ``b = (ad - 1)/c``."""
    b = (a * d - 1) / c
    R = cmath.log(x) + evaluate(phi, x) / x**m
    return (a * R + b) / (c * R + d)


def _escape_h(m, phi, a, c, d, x):
    return -1 / (a * c * (x**m * cmath.log(x) + evaluate(phi, x)) + a * d * x**m)


def escape_witness(m: int, phi: TruncSeries, a: complex, c: complex, d: complex,
                   max_radius: float = 0.1, min_radius: float = 1e-8) -> complex:
    """Point ``x`` with ``|F(x)| > 1`` for the obstructed ratio ``log x + x**-m phi``.

    ``F = (a/c)(1 + h(x) x**m)``; since ``|a| = |c|``, any ``x`` with
    ``Re(h(x) x**m) > 0`` escapes the disk.  The argument of ``x`` is chosen
    to cancel ``arg h(0)``, then ``|x|`` is halved until the direct evaluation
    confirms ``|F(x)| > 1``.
    """
    a, c, d = complex(a), complex(c), complex(d)
    if m < 1:
        raise ValueError("m must be a positive integer")
    if a == 0 or c == 0 or abs(abs(a) - abs(c)) > 1e-12 * max(abs(a), abs(c)):
        raise ValueError("need a != 0, c != 0 and |a| = |c|")
    phi0 = complex(phi.coeffs[0])
    if phi0 == 0:
        raise ValueError("phi(0) must be nonzero")
    h0 = -1 / (a * c * phi0)
    base = -cmath.phase(h0) / m
    candidates = []
    for k in range(m):
        ang = math.remainder(base + 2 * math.pi * k / m, 2 * math.pi)
        candidates.append(ang)
    candidates.sort(key=lambda t: abs(t))
    spread = math.pi / (4 * m)
    offsets = [0.0] + [s * spread * j / 4 for j in range(1, 5) for s in (1, -1)]
    for ang0 in candidates:
        for off in offsets:
            ang = ang0 + off
            if abs(ang) >= math.pi - 1e-9:
                continue
            r = max_radius
            while r >= min_radius:
                x = r * cmath.exp(1j * ang)
                if abs(obstructed_value(m, phi, a, c, d, x)) > 1:
                    return x
                r /= 2
    raise WitnessNotFound("no escaping point found down to |x| = %g" % min_radius)


# -- end-to-end from Schwarzian data ------------------------------------------


@dataclass(frozen=True)
class ConeCandidate:
    alpha: float


@dataclass(frozen=True)
class CuspCandidate:
    pass


@dataclass(frozen=True)
class NeverDiskValued:
    m: int
    Rm: complex


@dataclass(frozen=True)
class SchwarzianReport:
    data: SingularityData
    basis: FrobeniusBasis
    ratio: RatioForm
    local_monodromy: MobiusMap
    verdict: ConeCandidate | CuspCandidate | NeverDiskValued


def germ_from_ratio(ratio: RatioForm, moebius: MobiusMap | None = None, model: Model | None = None) -> DevelopingGerm:
    """Germ ``M o B o w`` whose branch part equals the projective ratio.

    ``x**alpha unit(x) = (x unit**(1/alpha))**alpha`` and
    ``log x + psi(x) = log(x e**psi)``.  Without an explicit Mobius factor
    the canonical realizable choice is used: identity into the disk for a
    cone, ``-i w`` into the half-plane for a cusp.
    """
    if isinstance(ratio, ObstructedLogRatio):
        raise NotNormalizable("an obstructed logarithmic ratio never yields a disk-valued developing map")
    if isinstance(ratio, PowerRatio):
        unit = pow_unit(ratio.unit, 1 / float(ratio.alpha))
        inner = TruncSeries(np.concatenate([[0], unit.coeffs]))
        moebius = MobiusMap.identity() if moebius is None else moebius
        return DevelopingGerm(moebius, Power(ratio.alpha), Model.DISK if model is None else model, inner)
    inner = TruncSeries(np.concatenate([[0], exp_unit(ratio.psi).coeffs]))
    moebius = MobiusMap(-1j, 0, 0, 1) if moebius is None else moebius
    return DevelopingGerm(moebius, Log(), Model.HALFPLANE if model is None else model, inner)


def analyze_schwarzian(data: SingularityData, order: int = DEFAULT_ORDER) -> SchwarzianReport:
    op = ode_from_schwarzian(data, order)
    basis = solve_basis(op)
    ratio = projective_ratio(basis)
    mono = local_monodromy(ratio)
    if isinstance(ratio, ObstructedLogRatio):
        verdict = NeverDiskValued(ratio.m, basis.Rm)
    elif data.is_cusp:
        verdict = CuspCandidate()
    else:
        verdict = ConeCandidate(float(data.theta))
    return SchwarzianReport(data, basis, ratio, mono, verdict)
