"""Exact arithmetic in a finitely generated Grassmann algebra.

A :class:`GrassmannAlgebra` fixes an ordered list of nilpotent generators
(each squares to zero) and, optionally, a list of commuting polynomial
indeterminates.  Generators are odd by default and anticommute with each
other; generators declared ``even`` (such as a nilpotent ``y`` with
``y*y == 0``) commute with everything.  Indeterminates like the time symbol
``t`` or a Brownian symbol ``B`` are even and not nilpotent.

Elements are :class:`GrassmannNumber` instances.  A term is keyed by a pair
``(mask, exps)`` where ``mask`` is a bit set over the generators (stored in
increasing generator order) and ``exps`` is the tuple of exponents of the
indeterminates.  Coefficients are :class:`fractions.Fraction`.

>>> A = GrassmannAlgebra(["eta", "eps"])
>>> eta, eps = A.gen("eta"), A.gen("eps")
>>> eps * eta == -(eta * eps)
True
>>> (1 + eps * eta).inverse()
1 + eta*eps
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping, Union

__all__ = [
    "GrassmannAlgebra",
    "GrassmannNumber",
    "Scalar",
    "as_fraction",
    "binomial",
    "fraction_sqrt",
    "gmul",
    "ginv",
    "gpow",
    "parity",
    "body",
    "soul",
]

Scalar = Union[int, Fraction]
Key = tuple  # (mask: int, exps: tuple[int, ...])

MAX_GENERATORS = 64


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def fraction_sqrt(x) -> Fraction:
    """Exact square root of a non-negative rational; ValueError if irrational."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError(f"negative radicand {x}")
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise ValueError(f"{x} is not the square of a rational")
    return Fraction(rn, rd)


def binomial(p, j: int) -> Fraction:
    """Generalized binomial coefficient C(p, j) for rational p."""
    p = as_fraction(p)
    out = Fraction(1)
    for i in range(j):
        out = out * (p - i) / (i + 1)
    return out


def _reorder_sign(a: int, b: int) -> int:
    # sign of moving the odd generators of b left past those of a
    swaps = 0
    while b:
        low = b & -b
        swaps += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if swaps & 1 else 1


class GrassmannAlgebra:
    """Ordered generator list plus commuting indeterminates."""

    __slots__ = ("generators", "even", "symbols", "odd_mask", "_gindex", "_sindex", "_zero_exps")

    def __init__(self, generators: Iterable[str], even: Iterable[str] = (), symbols: Iterable[str] = ()):
        gens = tuple(generators)
        syms = tuple(symbols)
        even = frozenset(even)
        if len(set(gens)) != len(gens) or len(set(syms)) != len(syms):
            raise ValueError("duplicate names")
        if set(gens) & set(syms):
            raise ValueError("a name cannot be both a generator and a symbol")
        if len(gens) > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators are supported")
        if not even <= set(gens):
            raise ValueError(f"unknown even generators: {sorted(even - set(gens))}")
        self.generators = gens
        self.even = even
        self.symbols = syms
        self.odd_mask = sum(1 << i for i, g in enumerate(gens) if g not in even)
        self._gindex = {g: i for i, g in enumerate(gens)}
        self._sindex = {s: i for i, s in enumerate(syms)}
        self._zero_exps = (0,) * len(syms)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GrassmannAlgebra):
            return NotImplemented
        return (self.generators, self.even, self.symbols) == (other.generators, other.even, other.symbols)

    def __hash__(self):
        return hash((self.generators, self.even, self.symbols))

    def __repr__(self):
        return (f"GrassmannAlgebra({list(self.generators)!r}, even={sorted(self.even)!r}, "
                f"symbols={list(self.symbols)!r})")

    def extend(self, generators: Iterable[str] = (), even: Iterable[str] = (),
               symbols: Iterable[str] = ()) -> "GrassmannAlgebra":
        """A larger algebra with extra names appended after the existing ones."""
        return GrassmannAlgebra(self.generators + tuple(generators), self.even | frozenset(even),
                                self.symbols + tuple(symbols))

    def has(self, name: str) -> bool:
        return name in self._gindex or name in self._sindex

    def is_odd(self, name: str) -> bool:
        return name in self._gindex and name not in self.even

    # constructors
    def scalar(self, x) -> "GrassmannNumber":
        return GrassmannNumber(self, {(0, self._zero_exps): as_fraction(x)})

    def zero(self) -> "GrassmannNumber":
        return GrassmannNumber(self, {})

    def one(self) -> "GrassmannNumber":
        return self.scalar(1)

    def gen(self, name: str) -> "GrassmannNumber":
        if name in self._sindex:
            return self.sym(name)
        try:
            i = self._gindex[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None
        return GrassmannNumber(self, {(1 << i, self._zero_exps): Fraction(1)})

    def sym(self, name: str, power: int = 1) -> "GrassmannNumber":
        try:
            i = self._sindex[name]
        except KeyError:
            raise KeyError(f"unknown symbol {name!r}") from None
        exps = list(self._zero_exps)
        exps[i] = power
        return GrassmannNumber(self, {(0, tuple(exps)): Fraction(1)})

    def gens(self, *names: str):
        return tuple(self.gen(n) for n in names)

    def coerce(self, x) -> "GrassmannNumber":
        if isinstance(x, GrassmannNumber):
            if x.algebra != self:
                raise ValueError("mismatched generator lists")
            return x
        return self.scalar(x)

    def monomial(self, names: Iterable[str]) -> "GrassmannNumber":
        """Ordered product of the named generators/symbols."""
        out = self.one()
        for n in names:
            out = out * self.gen(n)
        return out


class GrassmannNumber:
    """Immutable element of a :class:`GrassmannAlgebra`."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GrassmannAlgebra, terms: Mapping[Key, Fraction] | None = None):
        self.algebra = algebra
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}
        self._hash = None

    # coercion helpers
    def _other(self, other):
        if isinstance(other, GrassmannNumber):
            if other.algebra != self.algebra:
                raise ValueError("mismatched generator lists")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.algebra.scalar(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return GrassmannNumber(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannNumber(self.algebra, {k: -v for k, v in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return GrassmannNumber(self.algebra, {})
            return GrassmannNumber(self.algebra, {k: v * other for k, v in self.terms.items()})
        other = self._other(other)
        if other is None:
            return NotImplemented
        odd = self.algebra.odd_mask
        out: dict = {}
        for (ma, ea), ca in self.terms.items():
            for (mb, eb), cb in other.terms.items():
                if ma & mb:
                    continue
                sign = _reorder_sign(ma & odd, mb & odd)
                key = (ma | mb, tuple(x + y for x, y in zip(ea, eb)) if ea else ea)
                out[key] = out.get(key, 0) + sign * ca * cb
        return GrassmannNumber(self.algebra, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("integer powers must be non-negative; use gpow for rational powers")
        out = self.algebra.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure
    def parity(self) -> str:
        """'even', 'odd' or 'mixed'; zero counts as even."""
        odd = self.algebra.odd_mask
        seen = {(m & odd).bit_count() & 1 for m, _ in self.terms}
        if not seen or seen == {0}:
            return "even"
        if seen == {1}:
            return "odd"
        return "mixed"

    def even_part(self):
        odd = self.algebra.odd_mask
        return GrassmannNumber(self.algebra, {k: v for k, v in self.terms.items()
                                              if not (k[0] & odd).bit_count() & 1})

    def odd_part(self):
        odd = self.algebra.odd_mask
        return GrassmannNumber(self.algebra, {k: v for k, v in self.terms.items()
                                              if (k[0] & odd).bit_count() & 1})

    def involution(self):
        """Grade involution: even part minus odd part (moving an odd factor past self)."""
        odd = self.algebra.odd_mask
        return GrassmannNumber(self.algebra, {k: (-v if (k[0] & odd).bit_count() & 1 else v)
                                              for k, v in self.terms.items()})

    def body(self):
        """Generator-free part (a polynomial in the indeterminates, if any)."""
        return GrassmannNumber(self.algebra, {k: v for k, v in self.terms.items() if k[0] == 0})

    def soul(self):
        return GrassmannNumber(self.algebra, {k: v for k, v in self.terms.items() if k[0] != 0})

    def is_scalar(self) -> bool:
        zero = self.algebra._zero_exps
        return all(k == (0, zero) for k in self.terms)

    def scalar(self) -> Fraction:
        """The value of a pure constant; ValueError otherwise."""
        if not self.is_scalar():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get((0, self.algebra._zero_exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0, self.algebra._zero_exps), Fraction(0))

    def is_nilpotent(self) -> bool:
        return not any(k[0] == 0 for k in self.terms)

    def inverse(self):
        """Exact inverse; the body must be a nonzero constant."""
        if self.parity() != "even":
            raise ValueError("only even elements are inverted")
        b = self.body()
        if not b.is_scalar() or b.is_zero():
            raise ZeroDivisionError(f"body of {self} is not an invertible constant")
        b0 = b.scalar()
        u = self.soul() * (-1 / b0)
        out = self.algebra.one()
        term = self.algebra.one()
        while True:
            term = term * u
            if term.is_zero():
                break
            out = out + term
        return out * (1 / b0)

    def gpow(self, p):
        """(1 + s)^p as a finite binomial series; requires body exactly 1."""
        if self.parity() != "even":
            raise ValueError("only even elements have rational powers")
        if self.body() != 1:
            raise ValueError("gpow requires body 1; factor the body out first")
        p = as_fraction(p)
        s = self.soul()
        out = self.algebra.one()
        term = self.algebra.one()
        j = 0
        while True:
            j += 1
            term = term * s
            if term.is_zero():
                break
            out = out + term * binomial(p, j)
        return out

    # calculus over the indeterminates
    def diff(self, symbol: str):
        """Partial derivative with respect to an indeterminate."""
        i = self.algebra._sindex[symbol]
        out = {}
        for (m, e), v in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[(m, ne)] = out.get((m, ne), 0) + v * e[i]
        return GrassmannNumber(self.algebra, out)

    def degree(self, symbol: str) -> int:
        i = self.algebra._sindex[symbol]
        return max((e[i] for _, e in self.terms), default=0)

    def substitute(self, values: Mapping[str, "GrassmannNumber | Scalar"]):
        """Replace indeterminates by elements (even, so placement does not matter)."""
        alg = self.algebra
        idx = [(alg._sindex[s], alg.coerce(v)) for s, v in values.items()]
        out = alg.zero()
        for (m, e), c in self.terms.items():
            ne = list(e)
            factor = alg.one()
            for i, v in idx:
                if ne[i]:
                    factor = factor * v ** ne[i]
                    ne[i] = 0
            out = out + GrassmannNumber(alg, {(m, tuple(ne)): c}) * factor
        return out

    def derive(self, images: Mapping[str, "GrassmannNumber"]):
        """Apply the even derivation sending each named generator/symbol to its image."""
        alg = self.algebra
        out = alg.zero()
        for name, image in images.items():
            image = alg.coerce(image)
            if name in alg._sindex:
                out = out + self.diff(name) * image
                continue
            bit = 1 << alg._gindex[name]
            for (m, e), c in self.terms.items():
                if not m & bit:
                    continue
                # split the ordered product at the generator being replaced
                below = m & (bit - 1)
                above = m & ~((bit << 1) - 1)
                left = GrassmannNumber(alg, {(below, e): c})
                right = GrassmannNumber(alg, {(above, alg._zero_exps): Fraction(1)})
                out = out + left * image * right
        return out

    def embed(self, target: GrassmannAlgebra):
        """Re-express in a larger algebra containing all used names."""
        src = self.algebra
        if src == target:
            return self
        out = target.zero()
        for (m, e), c in self.terms.items():
            term = target.scalar(c)
            for i, g in enumerate(src.generators):
                if m >> i & 1:
                    term = term * target.gen(g)
            for i, s in enumerate(src.symbols):
                if e[i]:
                    term = term * target.sym(s, e[i])
            out = out + term
        return out

    def coefficient(self, names: Iterable[str] = ()) -> Fraction:
        """Coefficient of the ordered monomial given by generator/symbol names."""
        probe = self.algebra.monomial(names)
        (key, sign), = probe.terms.items()
        return self.terms.get(key, Fraction(0)) * sign

    # rendering and serialization
    def _names(self, key):
        m, e = key
        alg = self.algebra
        names = [g for i, g in enumerate(alg.generators) if m >> i & 1]
        for i, s in enumerate(alg.symbols):
            names.extend([s] * e[i])
        return names

    def _order_key(self, key):
        m, e = key
        return (m.bit_count() + sum(e), m, e)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        alg = self.algebra
        for key in sorted(self.terms, key=self._order_key):
            c = self.terms[key]
            m, e = key
            factors = [g for i, g in enumerate(alg.generators) if m >> i & 1]
            factors += [s if e[i] == 1 else f"{s}^{e[i]}" for i, s in enumerate(alg.symbols) if e[i]]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return str(self)

    def to_json(self) -> list:
        """List of ``[names, "p/q"]`` pairs; names in algebra order, symbols repeated by power."""
        return [[self._names(k), str(self.terms[k])] for k in sorted(self.terms, key=self._order_key)]

    @classmethod
    def from_json(cls, algebra: GrassmannAlgebra, data) -> "GrassmannNumber":
        out = algebra.zero()
        for names, coeff in data:
            out = out + algebra.monomial(names) * as_fraction(coeff)
        return out


# functional aliases used across the package
def gmul(a: GrassmannNumber, b: GrassmannNumber) -> GrassmannNumber:
    return a * b


def ginv(a: GrassmannNumber) -> GrassmannNumber:
    return a.inverse()


def gpow(a: GrassmannNumber, p) -> GrassmannNumber:
    return a.gpow(p)


def parity(a: GrassmannNumber) -> str:
    return a.parity()


def body(a: GrassmannNumber) -> GrassmannNumber:
    return a.body()


def soul(a: GrassmannNumber) -> GrassmannNumber:
    return a.soul()
