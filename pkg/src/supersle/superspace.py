"""Superfunctions of (z, theta), superderivatives and superconformal maps.

A :class:`SuperFunction` is a finite sum ``sum_e (a_e + theta*b_e) z^e`` with
half-integer exponents ``e`` and Grassmann-valued coefficients.  Exponents are
stored doubled so ``z^(1/2)`` is the key ``1``.  ``z^(1/2)`` is purely formal:
``(z^(1/2))^2 = z`` and no branch is ever chosen.

theta is kept in its own slot and always written to the left of its
coefficient.  Moving an odd coefficient past theta costs a sign, which the
multiplication rules below take care of.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .grassmann import (GrassmannAlgebra, GrassmannNumber, as_fraction, binomial,
                        fraction_sqrt)

__all__ = [
    "SuperFunction",
    "SuperMap",
    "SubstitutionError",
    "superD",
    "superDalt",
    "substitute",
    "check_superconformal",
    "gts_residuals",
    "chain_rule_check",
]

CONV = "conv"
ALT = "alt"


class SubstitutionError(ValueError):
    """Raised when a substitution would need an infinite expansion."""


def _exp2(e) -> int:
    e2 = as_fraction(e) * 2
    if e2.denominator != 1:
        raise ValueError(f"exponent {e} is not a half-integer")
    return int(e2)


def _fmt_exp(e2: int) -> str:
    return str(e2 // 2) if e2 % 2 == 0 else f"{e2}/2"


class SuperFunction:
    """Immutable finite Laurent-type superfunction with Grassmann coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GrassmannAlgebra,
                 terms: Mapping[int, tuple[GrassmannNumber, GrassmannNumber]] | None = None):
        self.algebra = algebra
        clean = {}
        for e2, (a, b) in (terms or {}).items():
            if a or b:
                clean[e2] = (a, b)
        self.terms = clean

    # constructors
    @classmethod
    def const(cls, algebra: GrassmannAlgebra, value=1) -> "SuperFunction":
        return cls(algebra, {0: (algebra.coerce(value), algebra.zero())})

    @classmethod
    def z(cls, algebra: GrassmannAlgebra, power=1, coeff=1) -> "SuperFunction":
        return cls(algebra, {_exp2(power): (algebra.coerce(coeff), algebra.zero())})

    @classmethod
    def theta(cls, algebra: GrassmannAlgebra, power=0, coeff=1) -> "SuperFunction":
        """theta * coeff * z^power."""
        return cls(algebra, {_exp2(power): (algebra.zero(), algebra.coerce(coeff))})

    @classmethod
    def zero(cls, algebra: GrassmannAlgebra) -> "SuperFunction":
        return cls(algebra, {})

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, SuperFunction):
            if other.algebra != self.algebra:
                raise ValueError("mismatched generator lists")
            return other
        if isinstance(other, GrassmannNumber) or (isinstance(other, (int, Fraction))
                                                  and not isinstance(other, bool)):
            return SuperFunction.const(self.algebra, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        zero = self.algebra.zero()
        terms = dict(self.terms)
        for e2, (a, b) in other.terms.items():
            a0, b0 = terms.get(e2, (zero, zero))
            terms[e2] = (a0 + a, b0 + b)
        return SuperFunction(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return SuperFunction(self.algebra, {e: (-a, -b) for e, (a, b) in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SuperFunction(self.algebra, {e: (a * other, b * other) for e, (a, b) in self.terms.items()})
        if isinstance(other, GrassmannNumber):
            # (a + theta b) g = a g + theta (b g)
            return SuperFunction(self.algebra, {e: (a * other, b * other) for e, (a, b) in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        zero = self.algebra.zero()
        for e, (a, b) in self.terms.items():
            sa = a.involution()
            for f, (c, d) in other.terms.items():
                # (a + theta b)(c + theta d) = ac + theta (bc + sigma(a) d)
                even = a * c
                odd = b * c + sa * d
                a0, b0 = out.get(e + f, (zero, zero))
                out[e + f] = (a0 + even, b0 + odd)
        return SuperFunction(self.algebra, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * other
        if isinstance(other, GrassmannNumber):
            # g (a + theta b) = g a + theta sigma(g) b
            sg = other.involution()
            return SuperFunction(self.algebra, {e: (other * a, sg * b) for e, (a, b) in self.terms.items()})
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("use zpow for negative or fractional powers")
        out = SuperFunction.const(self.algebra, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted((e, a, b) for e, (a, b) in self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    # inspection
    def even_coeff(self, e) -> GrassmannNumber:
        return self.terms.get(_exp2(e), (self.algebra.zero(), None))[0]

    def theta_coeff(self, e) -> GrassmannNumber:
        return self.terms.get(_exp2(e), (None, self.algebra.zero()))[1]

    def exponents(self) -> list[Fraction]:
        return [Fraction(e2, 2) for e2 in sorted(self.terms)]

    def has_half_integer_exponents(self) -> bool:
        return any(e2 % 2 for e2 in self.terms)

    def even_component(self) -> "SuperFunction":
        """The theta-free part (the g of g + theta*gamma)."""
        zero = self.algebra.zero()
        return SuperFunction(self.algebra, {e: (a, zero) for e, (a, _) in self.terms.items()})

    def theta_component(self) -> "SuperFunction":
        """The coefficient of theta, as a theta-free superfunction."""
        zero = self.algebra.zero()
        return SuperFunction(self.algebra, {e: (b, zero) for e, (_, b) in self.terms.items()})

    def parity(self) -> str:
        """Parity counting theta as odd: 'even', 'odd' or 'mixed'."""
        seen = set()
        for a, b in self.terms.values():
            for x, shift in ((a, 0), (b, 1)):
                p = x.parity()
                if x.is_zero():
                    continue
                if p == "mixed":
                    return "mixed"
                seen.add((p == "odd") ^ shift)
        if not seen or seen == {False}:
            return "even"
        return "odd" if seen == {True} else "mixed"

    def involution(self) -> "SuperFunction":
        """Grade involution, with theta odd."""
        return SuperFunction(self.algebra, {e: (a.involution(), -b.involution())
                                            for e, (a, b) in self.terms.items()})

    def map_coefficients(self, fn: Callable[[GrassmannNumber], GrassmannNumber]) -> "SuperFunction":
        """Apply an even linear map to every Grassmann coefficient."""
        return SuperFunction(self.algebra, {e: (fn(a), fn(b)) for e, (a, b) in self.terms.items()})

    def embed(self, target: GrassmannAlgebra) -> "SuperFunction":
        return SuperFunction(target, {e: (a.embed(target), b.embed(target)) for e, (a, b) in self.terms.items()})

    # derivatives
    def dz(self, jet: Mapping[str, GrassmannNumber] | None = None) -> "SuperFunction":
        """z-derivative; ``jet`` lists generators/symbols that are themselves functions of z."""
        out = {}
        for e2, (a, b) in self.terms.items():
            if e2:
                f = Fraction(e2, 2)
                out[e2 - 2] = (a * f, b * f)
        res = SuperFunction(self.algebra, out)
        if jet:
            res = res + SuperFunction(self.algebra, {e2: (a.derive(jet), b.derive(jet))
                                                     for e2, (a, b) in self.terms.items()})
        return res

    def dtheta(self) -> "SuperFunction":
        """Left derivative in theta."""
        zero = self.algebra.zero()
        return SuperFunction(self.algebra, {e2: (b, zero) for e2, (_, b) in self.terms.items()})

    def times_theta(self) -> "SuperFunction":
        """theta * self."""
        zero = self.algebra.zero()
        return SuperFunction(self.algebra, {e2: (zero, a) for e2, (a, _) in self.terms.items()})

    def times_z(self, power=1) -> "SuperFunction":
        s = _exp2(power)
        return SuperFunction(self.algebra, {e2 + s: ab for e2, ab in self.terms.items()})

    def D(self, jet=None) -> "SuperFunction":
        return self.dtheta() + self.dz(jet).times_theta()

    def Dalt(self, jet=None) -> "SuperFunction":
        return self.dtheta() + self.dz(jet).times_z(1).times_theta()

    # rendering
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e2 in sorted(self.terms):
            a, b = self.terms[e2]
            zpart = "" if e2 == 0 else f" z^{_fmt_exp(e2)}"
            if a:
                parts.append(f"({a}){zpart}")
            if b:
                parts.append(f"({b}) θ{zpart}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> list:
        out = []
        for e2 in sorted(self.terms):
            a, b = self.terms[e2]
            if a:
                out.append({"exp": _fmt_exp(e2), "theta": False, "coeff": a.to_json()})
            if b:
                out.append({"exp": _fmt_exp(e2), "theta": True, "coeff": b.to_json()})
        return out


@dataclass(frozen=True)
class SuperMap:
    """A coordinate change (z, theta) -> (z', theta')."""

    zmap: SuperFunction
    thetamap: SuperFunction

    @classmethod
    def identity(cls, algebra: GrassmannAlgebra) -> "SuperMap":
        return cls(SuperFunction.z(algebra), SuperFunction.theta(algebra))

    @property
    def algebra(self) -> GrassmannAlgebra:
        return self.zmap.algebra

    def validate(self) -> None:
        """Check parities and the algebraic invertibility proxy."""
        if self.zmap.parity() != "even":
            raise ValueError("z' must be even")
        if self.thetamap.parity() not in ("odd",) and not self.thetamap.is_zero():
            raise ValueError("theta' must be odd")
        lead = self.zmap.even_coeff(1).body()
        if lead.is_zero():
            raise ValueError("the body of z' has no z^1 term")


def superD(f: SuperFunction) -> SuperFunction:
    """D = d/dtheta + theta d/dz.

    >>> from .grassmann import GrassmannAlgebra
    >>> z = SuperFunction.z(GrassmannAlgebra([]), 2)
    >>> print(superD(superD(z)))
    (2) z^1
    """
    return f.D()


def superDalt(f: SuperFunction) -> SuperFunction:
    return f.Dalt()


class _PowerCache:
    """Powers (z')^e of a map whose displacement from c*z is nilpotent."""

    def __init__(self, zmap: SuperFunction):
        alg = zmap.algebra
        lead = zmap.even_coeff(1)
        c = lead.body()
        if c.is_zero() or not c.is_scalar():
            raise SubstitutionError(f"z' = {zmap} does not start with a nonzero constant times z")
        self.c = c.scalar()
        disp = zmap - SuperFunction.z(alg, 1, self.c)
        for e2, (a, _) in disp.terms.items():
            if not a.is_nilpotent():
                raise SubstitutionError(
                    f"displacement term ({a}) z^{_fmt_exp(e2)} of z' = {zmap} is not nilpotent; "
                    "the expansion would not terminate")
        self.u = disp.times_z(-1) * (1 / self.c)
        self._upow = [SuperFunction.const(alg, 1)]
        self._cache: dict[int, SuperFunction] = {}
        self.algebra = alg

    def _u(self, j: int):
        while len(self._upow) <= j:
            self._upow.append(self._upow[-1] * self.u)
        return self._upow[j]

    def power(self, e2: int) -> SuperFunction:
        if e2 in self._cache:
            return self._cache[e2]
        e = Fraction(e2, 2)
        if e2 % 2:
            try:
                scale = fraction_sqrt(self.c) ** e2
            except ValueError:
                raise SubstitutionError(f"z^{_fmt_exp(e2)} needs an exact square root of {self.c}") from None
        else:
            scale = self.c ** (e2 // 2)
        series = SuperFunction.zero(self.algebra)
        j = 0
        while True:
            uj = self._u(j)
            if uj.is_zero():
                break
            series = series + uj * binomial(e, j)
            j += 1
        out = series.times_z(e) * Fraction(scale)
        self._cache[e2] = out
        return out


def substitute(f: SuperFunction, m: SuperMap) -> SuperFunction:
    """f(z', theta') expanded exactly; the displacement of z' must be nilpotent."""
    if f.algebra != m.algebra:
        raise ValueError("mismatched generator lists")
    powers = _PowerCache(m.zmap)
    out = SuperFunction.zero(f.algebra)
    for e2, (a, b) in f.terms.items():
        zp = powers.power(e2)
        piece = SuperFunction.const(f.algebra, a)
        if b:
            piece = piece + m.thetamap * b
        out = out + piece * zp
    return out


def check_superconformal(m: SuperMap, structure: str = CONV) -> SuperFunction:
    """Dz' - theta' D theta' (conv) or Dalt z' - theta' z' Dalt theta' (alt); zero iff superconformal."""
    zp, tp = m.zmap, m.thetamap
    if structure == CONV:
        return zp.D() - tp * tp.D()
    if structure == ALT:
        return zp.Dalt() - tp * zp * tp.Dalt()
    raise ValueError(f"unknown structure {structure!r}")


def gts_residuals(m: SuperMap) -> tuple[SuperFunction, SuperFunction]:
    """Componentwise form of the conventional condition: (gamma - tau s, g' - s^2 + tau tau')."""
    g, gamma = m.zmap.even_component(), m.zmap.theta_component()
    tau, s = m.thetamap.even_component(), m.thetamap.theta_component()
    return gamma - tau * s, g.dz() - (s * s - tau * tau.dz())


def chain_rule_check(m: SuperMap, f: SuperFunction, structure: str = CONV) -> SuperFunction:
    """D(f o m) - (D theta') (D'f) o m, or the alternative analogue."""
    composed = substitute(f, m)
    if structure == CONV:
        return composed.D() - m.thetamap.D() * substitute(f.D(), m)
    if structure == ALT:
        return composed.Dalt() - m.thetamap.Dalt() * substitute(f.Dalt(), m)
    raise ValueError(f"unknown structure {structure!r}")
