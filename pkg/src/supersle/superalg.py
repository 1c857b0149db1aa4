"""The N=1 super-Virasoro algebra, PBW normal ordering and Verma modules.

Modes are ``L_n`` (even) and ``G_r`` (odd).  In the NS sector ``r`` runs over
half-integers, in the Ramond sector over integers; the ``virasoro`` sector has
no G modes at all and is used for the classical SLE walk.

PBW order: modes sorted by increasing index, L before G at equal index.
Repeated G modes are reduced with ``G_r G_r = L_{2r} + (c/6)(r^2 - 1/4) delta_{r,0}``.

Elements carry Grassmann coefficients written to the left of the mode
monomial.  Odd coefficients anticommute with G modes and commute with L modes.

The Ramond highest-weight space is two-dimensional, spanned by ``|D>`` and
``G_0|D>``; no G_0 eigenvalue is imposed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from . import linalg
from .grassmann import GrassmannAlgebra, GrassmannNumber, as_fraction

__all__ = [
    "NS", "RAMOND", "VIRASORO", "SECTORS",
    "Mode", "L", "G", "SuperVirasoro", "AlgebraElement", "VermaModule", "VermaState",
    "SCALARS", "bracket", "normal_order", "act", "find_singular", "gram_matrix",
    "raising_generators", "levels_up_to",
]

NS = "ns"
RAMOND = "ramond"
VIRASORO = "virasoro"
SECTORS = (NS, RAMOND, VIRASORO)

# coefficient algebra for plain rational states
SCALARS = GrassmannAlgebra([])


@dataclass(frozen=True)
class Mode:
    kind: str    # "L" or "G"
    index2: int  # twice the mode index

    def __post_init__(self):
        if self.kind not in ("L", "G"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.kind == "L" and self.index2 % 2:
            raise ValueError("L modes have integer index")

    @property
    def index(self) -> Fraction:
        return Fraction(self.index2, 2)

    @property
    def odd(self) -> bool:
        return self.kind == "G"

    @property
    def sort_key(self):
        return (self.index2, self.kind == "G")

    def adjoint(self) -> "Mode":
        return Mode(self.kind, -self.index2)

    def __str__(self):
        i = self.index2
        return f"{self.kind}{i // 2}" if i % 2 == 0 else f"{self.kind}{i}/2"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Mode":
        text = text.strip()
        kind, idx = text[0], text[1:]
        return cls(kind, int(as_fraction(idx) * 2))


def L(n) -> Mode:
    return Mode("L", int(as_fraction(n) * 2))


def G(r) -> Mode:
    return Mode("G", int(as_fraction(r) * 2))


def _word_str(word) -> str:
    return " ".join(str(m) for m in word) if word else "1"


def _word_parity(word) -> int:
    return sum(m.odd for m in word) & 1


class SuperVirasoro:
    """Structure constants of one sector at a fixed central charge.

    ``c`` may be a rational or an even Grassmann-algebra symbol; everything
    below only adds and multiplies it.
    """

    def __init__(self, sector: str, c):
        if sector not in SECTORS:
            raise ValueError(f"unknown sector {sector!r}")
        self.sector = sector
        self.c = c if isinstance(c, GrassmannNumber) else as_fraction(c)
        self._no: dict[tuple, dict] = {}
        self._br: dict[tuple, dict] = {}

    def __repr__(self):
        return f"SuperVirasoro({self.sector!r}, c={self.c})"

    def check_mode(self, m: Mode) -> None:
        if m.kind == "G":
            if self.sector == VIRASORO:
                raise ValueError("the Virasoro sector has no G modes")
            if (m.index2 % 2 == 1) != (self.sector == NS):
                raise ValueError(f"{m} does not belong to the {self.sector} sector")

    def modes(self, max_abs) -> list[Mode]:
        """All modes with |index| <= max_abs."""
        m2 = int(as_fraction(max_abs) * 2)
        out = [Mode("L", i) for i in range(-m2, m2 + 1) if i % 2 == 0]
        if self.sector == NS:
            out += [Mode("G", i) for i in range(-m2, m2 + 1) if i % 2]
        elif self.sector == RAMOND:
            out += [Mode("G", i) for i in range(-m2, m2 + 1) if i % 2 == 0]
        return out

    def bracket(self, x: Mode, y: Mode) -> dict:
        """Graded bracket as {word: scalar}; the empty word carries the central term."""
        key = (x, y)
        hit = self._br.get(key)
        if hit is None:
            hit = self._br[key] = self._bracket(x, y)
        return hit

    def _bracket(self, x: Mode, y: Mode) -> dict:
        self.check_mode(x)
        self.check_mode(y)
        c = self.c
        n2, m2 = x.index2, y.index2
        out: dict = {}
        if x.kind == "L" and y.kind == "L":
            n, m = n2 // 2, m2 // 2
            if n != m:
                out[(Mode("L", n2 + m2),)] = Fraction(n - m)
            if n + m == 0 and n * (n * n - 1) != 0:
                out[()] = c * Fraction(n * (n * n - 1), 12)
        elif x.kind == "L" and y.kind == "G":
            f = Fraction(n2, 4) - Fraction(m2, 2)
            if f:
                out[(Mode("G", n2 + m2),)] = f
        elif x.kind == "G" and y.kind == "L":
            f = Fraction(m2, 4) - Fraction(n2, 2)
            if f:
                out[(Mode("G", n2 + m2),)] = -f
        else:
            out[(Mode("L", n2 + m2),)] = Fraction(2)
            if n2 + m2 == 0:
                r = Fraction(n2, 2)
                central = r * r - Fraction(1, 4)
                if central:
                    out[()] = c * (central / 3)
        return out

    def normal_order_word(self, word: tuple) -> dict:
        """PBW normal form of a mode word as {word: scalar}."""
        word = tuple(word)
        cached = self._no.get(word)
        if cached is not None:
            return cached
        for m in word:
            self.check_mode(m)
        result: dict = {}
        for i in range(len(word) - 1):
            x, y = word[i], word[i + 1]
            if x.sort_key > y.sort_key:
                head, tail = word[:i], word[i + 2:]
                sign = -1 if (x.odd and y.odd) else 1
                _accumulate(result, self.normal_order_word(head + (y, x) + tail), sign)
                for w, f in self.bracket(x, y).items():
                    _accumulate(result, self.normal_order_word(head + w + tail), f)
                break
            if x == y and x.odd:
                head, tail = word[:i], word[i + 2:]
                # G_r G_r = half the anticommutator
                for w, f in self.bracket(x, x).items():
                    _accumulate(result, self.normal_order_word(head + w + tail), f / 2)
                break
        else:
            result = {word: Fraction(1)}
        self._no[word] = result
        return result

    # convenience constructors
    def element(self, terms: Mapping[tuple, object] | Iterable, coeffs: GrassmannAlgebra = SCALARS,
                raw: bool = False) -> "AlgebraElement":
        return AlgebraElement(self, coeffs, terms, raw=raw)

    def mode(self, m: Mode, coeff=1, coeffs: GrassmannAlgebra = SCALARS) -> "AlgebraElement":
        return AlgebraElement(self, coeffs, {(m,): coeffs.coerce(coeff)})

    def jacobi_residual(self, x: Mode, y: Mode, z: Mode) -> dict:
        """Graded Jacobi sum for three modes; empty dict iff it vanishes."""
        total: dict = {}
        for a, b, c, sign in ((x, y, z, -1 if x.odd and z.odd else 1),
                              (y, z, x, -1 if y.odd and x.odd else 1),
                              (z, x, y, -1 if z.odd and y.odd else 1)):
            for w, f in self.bracket(b, c).items():
                if w:
                    for ww, g in self.bracket(a, w[0]).items():
                        total[ww] = total.get(ww, 0) + sign * f * g
        return {w: f for w, f in total.items() if f}


def _accumulate(target: dict, source: Mapping, factor) -> None:
    for k, v in source.items():
        nv = target.get(k, 0) + v * factor
        if nv == 0:
            target.pop(k, None)
        else:
            target[k] = nv


def _to_gn(coeffs: GrassmannAlgebra, v):
    if isinstance(v, GrassmannNumber):
        return v if v.algebra == coeffs else coeffs.coerce(v)
    return coeffs.scalar(v)


class AlgebraElement:
    """Sum of PBW monomials with Grassmann coefficients (coefficient on the left)."""

    __slots__ = ("algebra", "coeffs", "terms")

    def __init__(self, algebra: SuperVirasoro, coeffs: GrassmannAlgebra, terms=None, raw: bool = False):
        self.algebra = algebra
        self.coeffs = coeffs
        items = terms.items() if isinstance(terms, Mapping) else (terms or [])
        out: dict = {}
        for word, coef in items:
            word = tuple(word)
            coef = _to_gn(coeffs, coef)
            if raw:
                for m in word:
                    algebra.check_mode(m)
                _accumulate(out, {word: coef}, 1)
            else:
                for w, f in algebra.normal_order_word(word).items():
                    _accumulate(out, {w: coef * f}, 1)
        self.terms = out

    def _same(self, other: "AlgebraElement"):
        if other.algebra is not self.algebra and (other.algebra.sector, other.algebra.c) != (
                self.algebra.sector, self.algebra.c):
            raise ValueError("sector or central charge mismatch")
        if other.coeffs != self.coeffs:
            raise ValueError("mismatched generator lists")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GrassmannNumber)):
            other = AlgebraElement(self.algebra, self.coeffs, {(): other})
        self._same(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return AlgebraElement(self.algebra, self.coeffs, out, raw=True)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, self.coeffs, {w: -c for w, c in self.terms.items()}, raw=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return AlgebraElement(self.algebra, self.coeffs, {w: c * other for w, c in self.terms.items()}, raw=True)
        if isinstance(other, GrassmannNumber):
            # right multiplication by a coefficient: move it left past each word
            return AlgebraElement(self.algebra, self.coeffs,
                                  {w: c * (other.involution() if _word_parity(w) else other)
                                   for w, c in self.terms.items()}, raw=True)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._same(other)
        out: dict = {}
        for w1, a in self.terms.items():
            odd = _word_parity(w1)
            for w2, b in other.terms.items():
                coef = a * (b.involution() if odd else b)
                if not coef:
                    continue
                for w, f in self.algebra.normal_order_word(w1 + w2).items():
                    _accumulate(out, {w: coef * f}, 1)
        return AlgebraElement(self.algebra, self.coeffs, out, raw=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * other
        if isinstance(other, GrassmannNumber):
            return AlgebraElement(self.algebra, self.coeffs, {w: other * c for w, c in self.terms.items()}, raw=True)
        return NotImplemented

    def __pow__(self, n: int):
        out = AlgebraElement(self.algebra, self.coeffs, {(): 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            if isinstance(other, (int, Fraction, GrassmannNumber)):
                other = AlgebraElement(self.algebra, self.coeffs, {(): other})
            else:
                return NotImplemented
        diff = normal_order(self - other)
        return not diff.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_linear(self) -> bool:
        return all(len(w) == 1 for w in self.terms)

    def linear_coefficients(self) -> dict[Mode, GrassmannNumber]:
        """{mode: coefficient} for an element linear in the modes."""
        if not self.is_linear():
            raise ValueError(f"{self} is not linear in the generators")
        return {w[0]: c for w, c in self.terms.items()}

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: [m.sort_key for m in kv[0]])
        return " + ".join(f"({c}) {_word_str(w)}" for w, c in items)

    __repr__ = __str__


def jacobi_sweep(sector: str, c, max_abs=5) -> list[tuple[Mode, Mode, Mode]]:
    """Triples with |index| <= max_abs whose graded Jacobi sum is nonzero.

    ``c`` is one central charge or a sequence of them; a triple is reported
    if it fails at any of them.  Structure constants are read off
    :meth:`SuperVirasoro.bracket` at c = 0 and c = 1 (brackets are affine in
    c) and scaled to integers, so the sweep runs in integer arithmetic.
    """
    cs = [as_fraction(x) for x in (c if isinstance(c, (list, tuple)) else [c])]
    a0, a1 = SuperVirasoro(sector, 0), SuperVirasoro(sector, 1)
    outer = a0.modes(max_abs)
    inner = a0.modes(3 * as_fraction(max_abs))
    ids = {m: i for i, m in enumerate(inner)}
    scale = 24
    table: dict = {}

    def entry(i: int, j: int) -> list:
        hit = table.get((i, j))
        if hit is None:
            x, y = inner[i], inner[j]
            b0, b1 = a0.bracket(x, y), a1.bracket(x, y)
            hit = []
            for w in set(b0) | set(b1):
                v0, v1 = b0.get(w, Fraction(0)), b1.get(w, Fraction(0))
                p, q = v0 * scale, (v1 - v0) * scale
                if p.denominator != 1 or q.denominator != 1:
                    raise ArithmeticError("structure constant outside (1/24)Z")
                hit.append((ids[w[0]] if w else -1, int(p), int(q)))
            table[(i, j)] = hit
        return hit

    odd = [m.odd for m in inner]
    oid = [ids[m] for m in outer]
    bad = []
    for x in oid:
        for y in oid:
            for z in oid:
                acc: dict = {}
                for a, b, cc, sign in ((x, y, z, -1 if odd[x] and odd[z] else 1),
                                       (y, z, x, -1 if odd[y] and odd[x] else 1),
                                       (z, x, y, -1 if odd[z] and odd[y] else 1)):
                    for w, f, _ in entry(b, cc):
                        if w < 0:
                            continue
                        # the inner central term commutes with everything
                        for ww, g, gc in entry(a, w):
                            p, q = acc.get(ww, (0, 0))
                            acc[ww] = (p + sign * f * g, q + sign * f * gc)
                for p, q in acc.values():
                    if (p or q) and any(p * cv.denominator + q * cv.numerator for cv in cs):
                        bad.append((inner[x], inner[y], inner[z]))
                        break
    return bad


def normal_order(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.algebra, x.coeffs, x.terms)


def bracket(x: Mode, y: Mode, c, sector: str) -> AlgebraElement:
    """Graded bracket of two modes.

    >>> print(bracket(L(2), L(-2), 3, VIRASORO))
    (3/2) 1 + (4) L0
    >>> print(bracket(G(0), G(0), 12, RAMOND))
    (-1) 1 + (2) L0
    """
    alg = SuperVirasoro(sector, c)
    return AlgebraElement(alg, SCALARS, alg.bracket(x, y), raw=True)


def raising_generators(sector: str) -> list[Mode]:
    if sector == NS:
        return [L(1), L(2), G(Fraction(1, 2)), G(Fraction(3, 2))]
    if sector == RAMOND:
        return [L(1), G(1)]
    return [L(1), L(2)]


def level_step(sector: str) -> Fraction:
    return Fraction(1, 2) if sector == NS else Fraction(1)


def levels_up_to(sector: str, level) -> list[Fraction]:
    step = level_step(sector)
    level = as_fraction(level)
    out, x = [], step
    while x <= level:
        out.append(x)
        x += step
    return out


class VermaModule:
    """Verma module over ``|D>`` (and ``G_0|D>`` in the Ramond sector)."""

    def __init__(self, algebra: SuperVirasoro, delta):
        self.algebra = algebra
        self.delta = delta if isinstance(delta, GrassmannNumber) else as_fraction(delta)
        self._eval: dict[tuple, dict] = {}

    @property
    def sector(self) -> str:
        return self.algebra.sector

    @cached_property
    def _g0(self) -> Mode:
        return Mode("G", 0)

    def _lowering_modes(self, level2: int) -> list[Mode]:
        out = [Mode("L", -i) for i in range(2, level2 + 1, 2)]
        if self.sector == NS:
            out += [Mode("G", -i) for i in range(1, level2 + 1, 2)]
        elif self.sector == RAMOND:
            out += [Mode("G", -i) for i in range(2, level2 + 1, 2)]
        return sorted(out, key=lambda m: m.sort_key)

    def basis(self, level) -> list[tuple]:
        """PBW basis keys at the given level, in lexicographic PBW order."""
        level2 = int(as_fraction(level) * 2)
        modes = self._lowering_modes(level2)
        out: list[tuple] = []

        def rec(start: int, remaining: int, acc: tuple):
            if remaining == 0:
                out.append(acc)
                return
            for i in range(start, len(modes)):
                m = modes[i]
                if -m.index2 > remaining:
                    continue
                # G modes appear at most once
                nxt = i + 1 if m.odd else i
                rec(nxt, remaining + m.index2, acc + (m,))

        rec(0, level2, ())
        if self.sector == RAMOND:
            out = [k for b in out for k in (b, b + (self._g0,))]
        return sorted(out, key=lambda k: [m.sort_key for m in k])

    def basis_up_to(self, level) -> list[tuple]:
        keys = list(self.basis(0))
        for lv in levels_up_to(self.sector, level):
            keys += self.basis(lv)
        return keys

    @staticmethod
    def level_of(key: tuple) -> Fraction:
        return -sum((m.index for m in key), Fraction(0))

    def apply_word(self, word: tuple) -> dict:
        """word |D> as {basis key: scalar}."""
        word = tuple(word)
        cached = self._eval.get(word)
        if cached is not None:
            return cached
        out: dict = {}
        for w, f in self.algebra.normal_order_word(word).items():
            key = []
            n_l0 = 0
            dead = False
            for m in w:
                if m.index2 < 0:
                    key.append(m)
                elif m.index2 == 0:
                    if m.kind == "L":
                        n_l0 += 1
                    else:
                        key.append(m)
                else:
                    dead = True
                    break
            if dead:
                continue
            coef = f
            for _ in range(n_l0):
                coef = coef * self.delta
            _accumulate(out, {tuple(key): coef}, 1)
        self._eval[word] = out
        return out

    def state(self, terms, coeffs: GrassmannAlgebra = SCALARS) -> "VermaState":
        return VermaState(self, coeffs, terms)

    def highest_weight(self, coeffs: GrassmannAlgebra = SCALARS) -> "VermaState":
        return VermaState(self, coeffs, {(): 1})

    def apply(self, word_terms: Mapping[tuple, object], coeffs: GrassmannAlgebra = SCALARS) -> "VermaState":
        """(sum of mode words) |D>."""
        out: dict = {}
        for w, c in word_terms.items():
            _accumulate(out, self.apply_word(tuple(w)), _to_gn(coeffs, c))
        return VermaState(self, coeffs, out)

    def act(self, x: AlgebraElement, v: "VermaState") -> "VermaState":
        if x.algebra.sector != self.sector:
            raise ValueError("sector mismatch")
        if x.coeffs != v.coeffs:
            raise ValueError("mismatched generator lists")
        out: dict = {}
        for w, a in x.terms.items():
            odd = _word_parity(w)
            for key, b in v.terms.items():
                coef = a * (b.involution() if odd else b)
                if not coef:
                    continue
                for k, f in self.apply_word(w + key).items():
                    _accumulate(out, {k: coef * f}, 1)
        return VermaState(self, v.coeffs, out)

    def act_mode(self, m: Mode, v: "VermaState") -> "VermaState":
        return self.act(AlgebraElement(self.algebra, v.coeffs, {(m,): 1}, raw=True), v)

    def inner_product(self, left: tuple, right: tuple):
        """<D| left^dagger right |D> for basis keys."""
        word = tuple(m.adjoint() for m in reversed(left)) + tuple(right)
        return self.apply_word(word).get((), Fraction(0))


class VermaState:
    """Vector in a Verma module: {basis key: Grassmann coefficient}."""

    __slots__ = ("module", "coeffs", "terms")

    def __init__(self, module: VermaModule, coeffs: GrassmannAlgebra, terms):
        self.module = module
        self.coeffs = coeffs
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict = {}
        for k, v in items:
            _accumulate(out, {tuple(k): _to_gn(coeffs, v)}, 1)
        self.terms = out

    def __add__(self, other: "VermaState"):
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return VermaState(self.module, self.coeffs, out)

    def __neg__(self):
        return VermaState(self.module, self.coeffs, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        return VermaState(self.module, self.coeffs, {k: v * f for k, v in self.terms.items()})

    def __rmul__(self, f):
        if isinstance(f, GrassmannNumber):
            # a coefficient placed on the left of a state multiplies from the left
            return VermaState(self.module, self.coeffs, {k: f * v for k, v in self.terms.items()})
        return self * f

    def __eq__(self, other):
        if not isinstance(other, VermaState):
            return NotImplemented
        return not (self - other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def levels(self) -> set[Fraction]:
        return {VermaModule.level_of(k) for k in self.terms}

    def truncate(self, level) -> "VermaState":
        level = as_fraction(level)
        return VermaState(self.module, self.coeffs,
                          {k: v for k, v in self.terms.items() if VermaModule.level_of(k) <= level})

    def coefficient(self, key) -> GrassmannNumber:
        return self.terms.get(tuple(key), self.coeffs.zero())

    def vector(self, keys: list[tuple]) -> list[Fraction]:
        """Rational coefficient vector; coefficients must be constants."""
        return [self.terms[k].scalar() if k in self.terms else Fraction(0) for k in keys]

    def grassmann_components(self) -> dict:
        """Split into {Grassmann term key: {basis key: Fraction}}."""
        out: dict = {}
        for k, v in self.terms.items():
            for gk, f in v.terms.items():
                out.setdefault(gk, {})[k] = f
        return out

    def map_coefficients(self, fn) -> "VermaState":
        return VermaState(self.module, self.coeffs, {k: fn(v) for k, v in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: [m.sort_key for m in kv[0]])
        return " + ".join(f"({c}) {_word_str(k)}|D>" for k, c in items)

    __repr__ = __str__

    def to_json(self, level=None) -> dict:
        m = self.module
        items = sorted(self.terms.items(), key=lambda kv: [mm.sort_key for mm in kv[0]])
        return {
            "sector": m.sector,
            "c": str(m.algebra.c),
            "delta": str(m.delta),
            "level": str(level if level is not None else max(self.levels(), default=Fraction(0))),
            "terms": [[_word_str(k) if k else "", v.to_json()] for k, v in items],
        }


def act(x: AlgebraElement, v: VermaState) -> VermaState:
    return v.module.act(x, v)


def _scalar_state(module: VermaModule, keys: list[tuple], vec) -> VermaState:
    return VermaState(module, SCALARS, {k: x for k, x in zip(keys, vec) if x != 0})


def annihilation_matrix(module: VermaModule, keys: list[tuple]) -> list[list[Fraction]]:
    """Rows: (raising generator, image key); columns: basis keys."""
    rows: dict = {}
    for j, key in enumerate(keys):
        for r in raising_generators(module.sector):
            for k, f in module.apply_word((r,) + key).items():
                row = rows.setdefault((r, k), [Fraction(0)] * len(keys))
                row[j] += as_fraction(f) if not isinstance(f, GrassmannNumber) else f.scalar()
    return list(rows.values())


def find_singular(level, sector: str, c, delta) -> list[VermaState]:
    """All level-``level`` states annihilated by every raising mode (reduced basis)."""
    level = as_fraction(level)
    if level <= 0:
        raise ValueError("level must be positive")
    module = VermaModule(SuperVirasoro(sector, c), delta)
    keys = module.basis(level)
    if not keys:
        return []
    rows = annihilation_matrix(module, keys)
    basis = linalg.nullspace(rows, len(keys)) if rows else [
        [Fraction(int(i == j)) for j in range(len(keys))] for i in range(len(keys))]
    return [_scalar_state(module, keys, v) for v in basis]


def gram_matrix(level, sector: str, c, delta) -> tuple[list[list[Fraction]], list[tuple]]:
    """Contravariant form on the level subspace, with the basis keys used."""
    module = VermaModule(SuperVirasoro(sector, c), delta)
    keys = module.basis(level)
    mat = [[as_fraction(module.inner_product(a, b)) for b in keys] for a in keys]
    return mat, keys
