"""Random inputs shared by the property and acceptance tests."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from hypsing.germ import DevelopingGerm, Log, Power
from hypsing.mobius import MobiusMap, Model, cayley, compose, inverse
from hypsing.schwarzian import SingularityData
from hypsing.series import TruncSeries


def random_theta(rng) -> Fraction:
    """Mix of cusps, integer differences and generic rationals in [0, 4]."""
    kind = rng.integers(4)
    if kind == 0:
        return Fraction(0)
    if kind == 1:
        return Fraction(int(rng.integers(2, 5)))
    while True:
        th = Fraction(int(rng.integers(1, 40)), int(rng.integers(2, 11)))
        if th.denominator != 1 and th <= 4:
            return th


def random_data(rng, phi_terms: int = 6) -> SingularityData:
    d = complex(*rng.normal(size=2))
    phi = (rng.normal(size=phi_terms) + 1j * rng.normal(size=phi_terms)) * 0.5
    return SingularityData(random_theta(rng), d, TruncSeries(phi))


def disk_isometry(rng) -> MobiusMap:
    a = complex(*rng.normal(size=2))
    b = complex(*rng.normal(size=2))
    a = a / abs(a) * math.sqrt(1 + abs(b) ** 2)
    return MobiusMap(a, b, b.conjugate(), a.conjugate())


def halfplane_isometry(rng) -> MobiusMap:
    while True:
        m = rng.normal(size=4)
        det = m[0] * m[3] - m[1] * m[2]
        if det > 0.1:
            return MobiusMap(*(m / math.sqrt(det)))


def random_inner(rng, order: int = 24, spread: float = 0.3) -> TruncSeries:
    c = np.zeros(order + 1, dtype=complex)
    c[1] = np.exp(2j * np.pi * rng.uniform()) * rng.uniform(0.5, 1.5)
    c[2:5] = (rng.normal(size=3) + 1j * rng.normal(size=3)) * spread
    return TruncSeries(c)


def random_cusp_mobius(rng, sign=1.0):
    lam = sign * rng.uniform(0.2, 3)
    beta = rng.normal()
    return compose(halfplane_isometry(rng), MobiusMap(-1j * lam, beta, 0, 1))


def realizable_germ(rng):
    pick = rng.integers(5)
    inner = random_inner(rng) if rng.uniform() < 0.5 else None
    if pick == 0:
        alpha = Fraction(int(rng.integers(1, 12)), int(rng.integers(2, 5)))
        if alpha.denominator == 1:
            alpha += Fraction(1, 3)
        return DevelopingGerm(disk_isometry(rng), Power(alpha), Model.DISK, inner)
    if pick == 1:
        # integer cone: any Mobius map whose centre lies in the disk
        while True:
            m = MobiusMap(*(rng.normal(size=4) + 1j * rng.normal(size=4)))
            if abs(m.b / m.d) < 0.8:
                return DevelopingGerm(m, Power(int(rng.integers(2, 5))), Model.DISK, inner)
    if pick == 2:
        m = compose(halfplane_isometry(rng), compose(inverse(cayley()), disk_isometry(rng)))
        return DevelopingGerm(m, Power(Fraction(int(rng.integers(1, 10)), 4) + Fraction(1, 8)), Model.HALFPLANE, inner)
    if pick == 3:
        return DevelopingGerm(random_cusp_mobius(rng), Log(), Model.HALFPLANE, inner)
    return DevelopingGerm(compose(cayley(), random_cusp_mobius(rng)), Log(), Model.DISK, inner)


def model_isometry(rng, model):
    return disk_isometry(rng) if model is Model.DISK else halfplane_isometry(rng)
