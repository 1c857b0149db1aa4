"""Concrete walks, loci, SDEs and closed-form solutions used throughout.

Everything lives over :data:`STANDARD`: odd parameters ``eta``, ``eps``, the
even nilpotent ``y`` and the commuting indeterminates ``t`` and ``B``.
``k`` is the rational sample value of sqrt(kappa).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .grassmann import GrassmannAlgebra, as_fraction
from .itocalc import SdeSpec
from .linkmaps import WalkSpec
from .superalg import NS, RAMOND, VIRASORO, AlgebraElement, G, L, SuperVirasoro
from .superspace import ALT, CONV, SuperFunction, SuperMap

STANDARD = GrassmannAlgebra(["y", "eta", "eps"], even=["y"], symbols=["t", "B"])

_y, _eta, _eps = STANDARD.gens("y", "eta", "eps")
_t, _B = STANDARD.sym("t"), STANDARD.sym("B")
HALF = Fraction(1, 2)


def _c(x) -> SuperFunction:
    return SuperFunction.const(STANDARD, x)


def _z(p=1) -> SuperFunction:
    return SuperFunction.z(STANDARD, p)


_TH = SuperFunction.theta(STANDARD)


# ---------------------------------------------------------------- loci

def locus_classical(kappa) -> tuple[Fraction, Fraction]:
    """(c, Delta) making -2L_{-2} + (kappa/2)L_{-1}^2 singular."""
    k = as_fraction(kappa)
    return 1 - 3 * (4 - k) ** 2 / (2 * k), (6 - k) / (2 * k)


def c_kappa(kappa) -> Fraction:
    k = as_fraction(kappa)
    return Fraction(15, 2) - 3 * (k + 1 / k)


def locus_ns(kappa) -> tuple[Fraction, Fraction]:
    """Locus of the NS walk on the kappa(Delta + 1/2) = 1 branch."""
    k = as_fraction(kappa)
    return c_kappa(k), (2 - k) / (2 * k)


def locus_ramond(kappa) -> tuple[Fraction, Fraction]:
    k = as_fraction(kappa)
    return c_kappa(k), (6 * k - 3) / 16


def ns_level_three_halves(c, delta) -> Fraction:
    """(2D+1)c - 3D(3-2D); zero iff the NS level-3/2 singular vector exists."""
    c, d = as_fraction(c), as_fraction(delta)
    return (2 * d + 1) * c - 3 * d * (3 - 2 * d)


def ramond_level_one(c, delta) -> Fraction:
    """(16D+3)c - 8D(9-16D); zero iff the Ramond level-1 singular vector exists."""
    c, d = as_fraction(c), as_fraction(delta)
    return (16 * d + 3) * c - 8 * d * (9 - 16 * d)


def virasoro_level_two(c, delta) -> Fraction:
    """Level-2 Virasoro Kac factor 16D^2 + 2(c-5)D + c."""
    c, d = as_fraction(c), as_fraction(delta)
    return 16 * d * d + 2 * (c - 5) * d + c


# ---------------------------------------------------------------- walks

def walk_ns(k, c=None, delta=None, structure: str = CONV) -> WalkSpec:
    """alpha0 = -y eta G_{-3/2}, beta = k (y L_{-1} + eta G_{-1/2})."""
    k = as_fraction(k)
    lc, ld = locus_ns(k * k) if k else (Fraction(0), Fraction(0))
    alg = SuperVirasoro(NS, lc if c is None else as_fraction(c))
    alpha0 = AlgebraElement(alg, STANDARD, {(G(Fraction(-3, 2)),): -(_y * _eta)})
    beta = AlgebraElement(alg, STANDARD, {(L(-1),): _y, (G(Fraction(-1, 2)),): _eta})
    return WalkSpec(NS, structure, alg.c, ld if delta is None else delta, k * k, alpha0, (beta,),
                    name="ns")


def walk_ramond(k, c=None, delta=None, structure: str = CONV) -> WalkSpec:
    """alpha0 = -1/2 eps eta L_{-1}, beta = k (eps G_{-1} + eta G_0)."""
    k = as_fraction(k)
    lc, ld = locus_ramond(k * k) if k else (Fraction(0), Fraction(0))
    alg = SuperVirasoro(RAMOND, lc if c is None else as_fraction(c))
    alpha0 = AlgebraElement(alg, STANDARD, {(L(-1),): -HALF * (_eps * _eta)})
    beta = AlgebraElement(alg, STANDARD, {(G(-1),): _eps, (G(0),): _eta})
    return WalkSpec(RAMOND, structure, alg.c, ld if delta is None else delta, k * k, alpha0, (beta,),
                    name="ramond")


def walk_classical(kappa, c=None, delta=None) -> WalkSpec:
    """alpha0 = -2 L_{-2}, beta = sqrt(kappa) L_{-1}."""
    kappa = as_fraction(kappa)
    lc, ld = locus_classical(kappa)
    alg = SuperVirasoro(VIRASORO, lc if c is None else as_fraction(c))
    one = STANDARD.one()
    alpha0 = AlgebraElement(alg, STANDARD, {(L(-2),): -2 * one})
    beta = AlgebraElement(alg, STANDARD, {(L(-1),): one})
    return WalkSpec(VIRASORO, CONV, alg.c, ld if delta is None else delta, kappa, alpha0, (beta,),
                    name="classical")


# ---------------------------------------------------------------- SDEs

def sde_ns_conv(k) -> SdeSpec:
    k = as_fraction(k)
    zf = _c(_y) * _TH * _c(_eta) * _z(-1)
    tf = _c(_y * _eta) * _z(-1)
    zd = -(_c(_y) + _TH * _c(_eta)) * k
    td = _c(_eta) * (-k)
    return SdeSpec((zf, tf), ((zd, td),))


def _ramond_root(k) -> SuperFunction:
    return (_c(_eps) * _z(-HALF) + _c(_eta) * _z(HALF)) * as_fraction(k)


def sde_ramond_conv(k) -> SdeSpec:
    k = as_fraction(k)
    r = _ramond_root(k)
    zf = _c(HALF * _eps * _eta)
    tf = _c(_eps * _eta) * _TH * _z(-1) * (k * k / 2)
    return SdeSpec((zf, tf), ((r * _TH, -r),))


def sde_ramond_alt(k) -> SdeSpec:
    k = as_fraction(k)
    zf = _c(HALF * _eps * _eta)
    tf = _c(_eps * _eta) * _TH * _z(-1) * ((k * k - HALF) / 2)
    zd = (_c(_eta) * _z() + _c(_eps)) * _TH * k
    td = -(_c(_eta) + _c(_eps) * _z(-1)) * k
    return SdeSpec((zf, tf), ((zd, td),))


def sde_ns_alt(k) -> SdeSpec:
    k = as_fraction(k)
    zf = -_c(_y * _eta) * _TH * _z(-HALF)
    tf = _c(_y * _eta) * _z(Fraction(-3, 2)) * (1 - k * k / 2)
    zd = (_c(_eta) * _TH * _z(HALF) - _c(_y)) * k
    td = (_c(_y) * _TH * _z(-1) * HALF - _c(_eta) * _z(-HALF)) * k
    return SdeSpec((zf, tf), ((zd, td),))


# ---------------------------------------------------------------- solutions

def solution_ns_conv(k) -> SuperMap:
    k = as_fraction(k)
    zmap = _z() + _TH * _c(_y * _eta * _t) * _z(-1) - (_c(_y) + _TH * _c(_eta)) * (k * _B)
    tmap = _TH + _c(_y * _eta * _t) * _z(-1) - _c(_eta * _B) * k
    return SuperMap(zmap, tmap)


def solution_ramond_conv(k) -> SuperMap:
    k = as_fraction(k)
    r = _ramond_root(k)
    zmap = _z() + _c(HALF * _eps * _eta * _t) + r * _TH * _c(_B)
    tmap = _TH - r * _c(_B) + _c(_eps * _eta) * _TH * _z(-1) * _c(_B * _B) * (k * k / 2)
    return SuperMap(zmap, tmap)


def solution_ramond_alt(k) -> SuperMap:
    k = as_fraction(k)
    ez = _c(_eps * _eta) * _TH * _z(-1)
    zmap = _z() + _c(HALF * _eps * _eta * _t) + (_c(_eta) * _z() + _c(_eps)) * _TH * _c(_B) * k
    tmap = (_TH - ez * _c(_t) * Fraction(1, 4) - (_c(_eta) + _c(_eps) * _z(-1)) * _c(_B) * k
            + ez * _c(_B * _B) * (k * k / 2))
    return SuperMap(zmap, tmap)


def solution_ns_alt(k) -> SuperMap:
    k = as_fraction(k)
    yez = _c(_y * _eta) * _z(Fraction(-3, 2))
    zmap = (_z() - _c(_y * _eta) * _TH * _z(-HALF) * _c(_t)
            + (_c(_eta) * _TH * _z(HALF) - _c(_y)) * _c(_B) * k)
    tmap = (_TH + yez * _c(_t) + (_c(_y) * _TH * _z(-1) * HALF - _c(_eta) * _z(-HALF)) * _c(_B) * k
            - yez * _c(_B * _B) * (k * k / 2))
    return SuperMap(zmap, tmap)


# ---------------------------------------------------------------- intermediate processes

@dataclass(frozen=True)
class Intermediate:
    """An auxiliary process: definition in (z', theta'), claimed SDE and closed form."""

    name: str
    definition: SuperFunction
    drift: SuperFunction
    diffusion: SuperFunction
    value: SuperFunction


def intermediates_ramond_conv(k) -> list[Intermediate]:
    k = as_fraction(k)
    r = _ramond_root(k)
    ez = _c(_eps * _eta) * _TH * _z(-1)
    w = Intermediate("w'", _z() - r * _TH * _c(_B), _c(HALF * _eps * _eta), _c(0),
                     _z() + _c(HALF * _eps * _eta * _t))
    chi = Intermediate("chi'", _TH + r * _c(_B), -ez * (k * k / 2), -ez * _c(_B) * (k * k),
                       _TH - ez * _c(_B * _B) * (k * k / 2))
    return [w, chi]


def intermediates_ramond_alt(k) -> list[Intermediate]:
    k = as_fraction(k)
    ez = _c(_eps * _eta) * _TH * _z(-1)
    w = Intermediate("w'", _z() - (_c(_eta) * _z() + _c(_eps)) * _TH * _c(_B) * k,
                     _c(HALF * _eps * _eta), _c(0), _z() + _c(HALF * _eps * _eta * _t))
    chi = Intermediate("chi'", _TH + (_c(_eta) + _c(_eps) * _z(-1)) * _c(_B) * k + ez * _c(_B * _B) * (k * k / 2),
                       -ez * Fraction(1, 4), _c(0), _TH - ez * _c(_t) * Fraction(1, 4))
    return [w, chi]


def intermediates_ns_alt(k) -> list[Intermediate]:
    k = as_fraction(k)
    yez = _c(_y * _eta) * _z(Fraction(-3, 2))
    ytz = _c(_y * _eta) * _TH * _z(-HALF)
    w = Intermediate("w'", _z() + (_c(_y) - _c(_eta) * _TH * _z(HALF)) * _c(_B) * k,
                     -ytz, _c(0), _z() - ytz * _c(_t))
    chi = Intermediate("chi'", _TH + (_c(_eta) * _z(-HALF) - _c(_y) * _TH * _z(-1) * HALF) * _c(_B) * k,
                       yez * (1 + k * k / 2), yez * _c(_B) * (k * k),
                       _TH + yez * _c(_t) + yez * _c(_B * _B) * (k * k / 2))
    return [w, chi]


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class Configuration:
    """A (walk, structure) pair with its transcribed SDE and closed-form solution."""

    key: str
    walk: callable
    structure: str
    sde: callable
    solution: callable
    intermediates: callable | None = None


CONFIGURATIONS = {
    "ns-conv": Configuration("ns-conv", walk_ns, CONV, sde_ns_conv, solution_ns_conv),
    "r-conv": Configuration("r-conv", walk_ramond, CONV, sde_ramond_conv, solution_ramond_conv,
                            intermediates_ramond_conv),
    "r-alt": Configuration("r-alt", walk_ramond, ALT, sde_ramond_alt, solution_ramond_alt,
                           intermediates_ramond_alt),
    "ns-alt": Configuration("ns-alt", walk_ns, ALT, sde_ns_alt, solution_ns_alt, intermediates_ns_alt),
}
