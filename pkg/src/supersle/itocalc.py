"""Symbolic Ito calculus for processes polynomial in t and Brownian symbols.

A process is a :class:`~supersle.superspace.SuperFunction` whose Grassmann
coefficients are polynomials in the time symbol ``t`` and Brownian symbols
``B`` (or ``B1``, ``B2``, ...).  The initial point ``(z, theta)`` is the
superspace variable.  Ito rules: ``dt*dt = dt*dB = 0`` and
``dB_i*dB_j = delta_ij dt``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .grassmann import GrassmannAlgebra, GrassmannNumber, as_fraction
from .superspace import SuperFunction, SuperMap, substitute

__all__ = [
    "ItoPoly",
    "ItoDifferential",
    "SdeSpec",
    "SolutionResidual",
    "ito_d",
    "expectation",
    "verify_solution",
    "check_process",
    "classical_rewrite_check",
]


@dataclass(frozen=True)
class ItoPoly:
    """A process: value(t, B; z, theta)."""

    value: SuperFunction
    time: str = "t"
    brownian: tuple[str, ...] = ("B",)

    def __post_init__(self):
        alg = self.value.algebra
        for s in (self.time, *self.brownian):
            if s not in alg.symbols:
                raise ValueError(f"{s!r} is not an indeterminate of {alg}")

    @property
    def algebra(self) -> GrassmannAlgebra:
        return self.value.algebra

    def _wrap(self, value: SuperFunction) -> "ItoPoly":
        return ItoPoly(value, self.time, self.brownian)

    def __add__(self, other: "ItoPoly"):
        return self._wrap(self.value + other.value)

    def __sub__(self, other: "ItoPoly"):
        return self._wrap(self.value - other.value)

    def __mul__(self, other: "ItoPoly"):
        return self._wrap(self.value * other.value)

    def at(self, **values) -> SuperFunction:
        """Evaluate some symbols, e.g. ``p.at(t=0, B=0)``."""
        subs = {k: v for k, v in values.items()}
        return self.value.map_coefficients(lambda g: g.substitute(subs))

    def degree(self, symbol: str) -> int:
        return max((max(a.degree(symbol), b.degree(symbol)) for a, b in self.value.terms.values()), default=0)


@dataclass(frozen=True)
class ItoDifferential:
    """drift dt + sum_i diffusions[i] dB_i."""

    drift: SuperFunction
    diffusions: tuple[SuperFunction, ...]

    def __sub__(self, other: "ItoDifferential"):
        if len(self.diffusions) != len(other.diffusions):
            raise ValueError("different numbers of Brownian motions")
        return ItoDifferential(self.drift - other.drift,
                               tuple(a - b for a, b in zip(self.diffusions, other.diffusions)))

    def __add__(self, other: "ItoDifferential"):
        return ItoDifferential(self.drift + other.drift,
                               tuple(a + b for a, b in zip(self.diffusions, other.diffusions)))

    def is_zero(self) -> bool:
        return self.drift.is_zero() and all(d.is_zero() for d in self.diffusions)

    def to_json(self, names: tuple[str, ...] | None = None) -> dict:
        names = names or tuple(f"B{i + 1}" for i in range(len(self.diffusions)))
        out = {"dt": self.drift.to_json()}
        for name, d in zip(names, self.diffusions):
            out[f"d{name}"] = d.to_json()
        return out


def _diff(f: SuperFunction, symbol: str) -> SuperFunction:
    return f.map_coefficients(lambda g: g.diff(symbol))


def ito_d(p: ItoPoly | SuperFunction) -> ItoDifferential:
    """Second-order Ito-Taylor differential of a polynomial process."""
    if isinstance(p, SuperFunction):
        p = ItoPoly(p)
    drift = _diff(p.value, p.time)
    diffusions = []
    for b in p.brownian:
        first = _diff(p.value, b)
        diffusions.append(first)
        drift = drift + _diff(first, b) * Fraction(1, 2)
    return ItoDifferential(drift, tuple(diffusions))


def product_correction(dp: ItoDifferential, dq: ItoDifferential) -> SuperFunction:
    """The dt coefficient of dp * dq."""
    out = SuperFunction.zero(dp.drift.algebra)
    for a, b in zip(dp.diffusions, dq.diffusions):
        out = out + a * b
    return out


def _gaussian_moments(g: GrassmannNumber, time: str, brownian: tuple[str, ...]) -> GrassmannNumber:
    alg = g.algebra
    ti = alg.symbols.index(time)
    bis = [alg.symbols.index(b) for b in brownian]
    out: dict = {}
    for (m, e), c in g.terms.items():
        e = list(e)
        coef = c
        for bi in bis:
            n = e[bi]
            if n % 2:
                coef = 0
                break
            # E[B^(2k)] = (2k-1)!! t^k
            for j in range(1, n, 2):
                coef *= j
            e[ti] += n // 2
            e[bi] = 0
        if coef:
            key = (m, tuple(e))
            out[key] = out.get(key, 0) + coef
    return GrassmannNumber(alg, out)


def expectation(p: ItoPoly | SuperFunction) -> ItoPoly:
    """Expectation under independent Brownian motions started at 0."""
    if isinstance(p, SuperFunction):
        p = ItoPoly(p)
    return p._wrap(p.value.map_coefficients(lambda g: _gaussian_moments(g, p.time, p.brownian)))


@dataclass(frozen=True)
class SdeSpec:
    """Right-hand sides of dz' and dtheta' as superfunctions of (z', theta')."""

    drift: tuple[SuperFunction, SuperFunction]
    diffusions: tuple[tuple[SuperFunction, SuperFunction], ...]

    @property
    def algebra(self) -> GrassmannAlgebra:
        return self.drift[0].algebra

    def functions(self) -> list[SuperFunction]:
        return [*self.drift, *(f for pair in self.diffusions for f in pair)]

    def has_half_integer_exponents(self) -> bool:
        return any(f.has_half_integer_exponents() for f in self.functions())

    def difference(self, other: "SdeSpec") -> list[SuperFunction]:
        """Termwise differences (z drift, theta drift, then each diffusion pair)."""
        if len(self.diffusions) != len(other.diffusions):
            raise ValueError("different numbers of Brownian motions")
        out = [self.drift[0] - other.drift[0], self.drift[1] - other.drift[1]]
        for (a, b), (c, d) in zip(self.diffusions, other.diffusions):
            out += [a - c, b - d]
        return out

    def __eq__(self, other):
        if not isinstance(other, SdeSpec):
            return NotImplemented
        try:
            return all(f.is_zero() for f in self.difference(other))
        except ValueError:
            return False

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "drift": {"z": self.drift[0].to_json(), "theta": self.drift[1].to_json()},
            "diffusions": [{"z": a.to_json(), "theta": b.to_json()} for a, b in self.diffusions],
        }


@dataclass(frozen=True)
class SolutionResidual:
    z: ItoDifferential
    theta: ItoDifferential
    brownian: tuple[str, ...] = field(default=("B",))

    def is_zero(self) -> bool:
        return self.z.is_zero() and self.theta.is_zero()

    def to_json(self) -> dict:
        return {"z": self.z.to_json(self.brownian), "theta": self.theta.to_json(self.brownian)}


def _initial_value(f: SuperFunction, time: str, brownian: tuple[str, ...]) -> SuperFunction:
    zero = {s: 0 for s in (time, *brownian)}
    return f.map_coefficients(lambda g: g.substitute(zero))


def verify_solution(candidate: SuperMap, sde: SdeSpec, time: str = "t",
                    brownian: tuple[str, ...] = ("B",)) -> SolutionResidual:
    """ito_d(candidate) minus the SDE right-hand sides evaluated at the candidate."""
    alg = candidate.algebra
    if sde.algebra != alg:
        raise ValueError("mismatched generator lists")
    if len(sde.diffusions) != len(brownian):
        raise ValueError("diffusion count does not match the Brownian symbols")
    ident = SuperMap.identity(alg)
    if (_initial_value(candidate.zmap, time, brownian) != ident.zmap
            or _initial_value(candidate.thetamap, time, brownian) != ident.thetamap):
        raise ValueError("candidate does not start at (z, theta)")
    dz = ito_d(ItoPoly(candidate.zmap, time, brownian))
    dth = ito_d(ItoPoly(candidate.thetamap, time, brownian))
    rhs_z = ItoDifferential(substitute(sde.drift[0], candidate),
                            tuple(substitute(a, candidate) for a, _ in sde.diffusions))
    rhs_t = ItoDifferential(substitute(sde.drift[1], candidate),
                            tuple(substitute(b, candidate) for _, b in sde.diffusions))
    return SolutionResidual(dz - rhs_z, dth - rhs_t, tuple(brownian))


def check_process(definition: SuperFunction, candidate: SuperMap, value: SuperFunction | None = None,
                  drift: SuperFunction | None = None, diffusions: tuple[SuperFunction, ...] | None = None,
                  time: str = "t", brownian: tuple[str, ...] = ("B",)) -> dict[str, SuperFunction]:
    """Residuals for an auxiliary process defined through (z', theta').

    ``definition``, ``drift`` and ``diffusions`` are written in terms of
    (z', theta') and are evaluated at the candidate; ``value`` is the claimed
    closed form in the initial (z, theta).  Only nonzero residuals are kept.
    """
    proc = substitute(definition, candidate)
    out: dict[str, SuperFunction] = {}
    if value is not None:
        out["value"] = proc - value
    d = ito_d(ItoPoly(proc, time, brownian))
    if drift is not None:
        out["drift"] = d.drift - substitute(drift, candidate)
    if diffusions is not None:
        for name, got, want in zip(brownian, d.diffusions, diffusions):
            out[f"d{name}"] = got - substitute(want, candidate)
    return {k: v for k, v in out.items() if v}


def classical_rewrite_check(k=1, sign: int = -1) -> dict[str, str]:
    """Check that f = g + sign*k*B turns the Loewner equation into df = 2/f dt - k dB.

    The Loewner drift 2/(g - k B) is kept as an opaque inverse of its
    denominator; it is identified with 2/f only when the denominators agree
    as polynomials.  Returns the nonzero residual pieces (empty on success).
    """
    k = as_fraction(k)
    alg = GrassmannAlgebra([], symbols=["g", "B", "t"])
    g, B = alg.sym("g"), alg.sym("B")
    loewner_den = g - B * k
    f = g + B * (k * sign)
    # f is linear in (g, B): no second-order Ito term
    df_drift = {loewner_den: Fraction(2)}          # 2 * inv(g - kB)
    df_diffusion = B.diff("B") * (k * sign)        # dg has no dB part
    target_drift = {f: Fraction(2)}                # 2 * inv(f)
    target_diffusion = alg.scalar(-k)
    drift_res: dict = dict(df_drift)
    for den, coef in target_drift.items():
        drift_res[den] = drift_res.get(den, 0) - coef
    residual = {}
    pieces = [f"{c}*inv({den})" for den, c in drift_res.items() if c != 0]
    if pieces:
        residual["dt"] = " + ".join(pieces)
    diff = df_diffusion - target_diffusion
    if diff:
        residual["dB"] = str(diff)
    return residual
