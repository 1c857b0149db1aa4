"""From supergroup random walks to superspace SDEs and martingale checks.

A walk is ``G^{-1} dG = alpha dt + sum_i beta_i dB_i`` with
``alpha = alpha0 + 1/2 sum_i beta_i^2`` and ``alpha0``, ``beta_i`` linear in
the generators.  Diffusions are stored as ``beta_i = sqrt(kappa) * beta_unit_i``
so that drift-side quantities stay exact even when ``sqrt(kappa)`` is
irrational (only the SDE coefficients need an exact ``sqrt(kappa)``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .grassmann import GrassmannAlgebra, GrassmannNumber, as_fraction, fraction_sqrt
from .itocalc import SdeSpec
from .superalg import (NS, RAMOND, VIRASORO, AlgebraElement, Mode, SuperVirasoro, VermaModule,
                       VermaState, find_singular, levels_up_to, raising_generators)
from .superspace import ALT, CONV, SuperFunction

__all__ = [
    "WalkSpec",
    "JetOrderError",
    "build_sde",
    "verify_link",
    "drift_state",
    "martingale_check",
    "MartingaleReport",
    "expected_state",
    "quotient_projection",
    "submodule_basis",
    "operator_matrix",
    "inverse_increment_residual",
    "reassociation_residual",
    "annihilation_conditions",
    "annihilation_polynomials",
    "solve_locus",
    "projection_matrix",
]


class JetOrderError(ValueError):
    """A derivative beyond the declared jet order was requested."""


@dataclass
class WalkSpec:
    sector: str
    structure: str
    c: Fraction
    delta: Fraction
    kappa: Fraction
    alpha0: AlgebraElement
    beta_unit: tuple[AlgebraElement, ...]
    name: str = ""

    def __post_init__(self):
        if self.structure not in (CONV, ALT):
            raise ValueError(f"unknown structure {self.structure!r}")
        self.c = as_fraction(self.c)
        self.delta = as_fraction(self.delta)
        self.kappa = as_fraction(self.kappa)
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")
        self.beta_unit = tuple(self.beta_unit)
        for x in (self.alpha0, *self.beta_unit):
            if x.algebra.sector != self.sector:
                raise ValueError("walk elements belong to another sector")
            if x.coeffs != self.coeffs:
                raise ValueError("mismatched generator lists")

    @property
    def algebra(self) -> SuperVirasoro:
        return self.alpha0.algebra

    @property
    def coeffs(self) -> GrassmannAlgebra:
        return self.alpha0.coeffs

    @property
    def k(self) -> Fraction:
        """Exact sqrt(kappa); ValueError when irrational."""
        return fraction_sqrt(self.kappa)

    @property
    def beta(self) -> tuple[AlgebraElement, ...]:
        k = self.k
        return tuple(b * k for b in self.beta_unit)

    @property
    def alpha(self) -> AlgebraElement:
        out = self.alpha0
        for b in self.beta_unit:
            out = out + (b * b) * (self.kappa / 2)
        return out

    def module(self) -> VermaModule:
        return VermaModule(self.algebra, self.delta)

    def replace(self, **changes) -> "WalkSpec":
        """Copy with new scalars; c is re-threaded through the algebra."""
        data = dict(sector=self.sector, structure=self.structure, c=self.c, delta=self.delta,
                    kappa=self.kappa, alpha0=self.alpha0, beta_unit=self.beta_unit, name=self.name)
        data.update(changes)
        if "c" in changes and as_fraction(changes["c"]) != self.c:
            alg = SuperVirasoro(self.sector, as_fraction(changes["c"]))
            data["alpha0"] = AlgebraElement(alg, self.coeffs, self.alpha0.terms)
            data["beta_unit"] = tuple(AlgebraElement(alg, self.coeffs, b.terms) for b in self.beta_unit)
        return WalkSpec(**data)

    # wire format
    def to_json(self) -> dict:
        def terms(x: AlgebraElement, scale=Fraction(1)):
            out = []
            for m, coef in sorted(x.linear_coefficients().items(), key=lambda kv: kv[0].sort_key):
                idx = m.index2
                out.append({"mode": m.kind, "index": f"{idx}/2",
                            "coeff": (coef * scale).to_json()})
            return out

        k = self.k
        return {
            "sector": self.sector, "structure": self.structure,
            "c": str(self.c), "delta": str(self.delta), "k": str(k),
            "alpha0": terms(self.alpha0),
            "beta": [terms(b, k) for b in self.beta_unit],
        }

    @classmethod
    def from_json(cls, data: dict, coeffs: GrassmannAlgebra | None = None) -> "WalkSpec":
        from .catalog import STANDARD

        coeffs = coeffs or STANDARD
        sector = data["sector"].lower()
        if sector not in (NS, RAMOND, VIRASORO):
            raise ValueError(f"unknown sector {sector!r}")
        c = as_fraction(data["c"])
        alg = SuperVirasoro(sector, c)
        k = as_fraction(data.get("k", "1"))
        kappa = as_fraction(data["kappa"]) if "kappa" in data else k * k

        def element(term_list, scale=Fraction(1)):
            terms = {}
            for t in term_list:
                mode = Mode(t["mode"], int(as_fraction(t["index"]) * 2))
                terms[(mode,)] = GrassmannNumber.from_json(coeffs, t["coeff"]) * scale
            return AlgebraElement(alg, coeffs, terms)

        if data.get("beta") and k == 0:
            raise ValueError("k = 0 leaves beta undetermined")
        inv_k = 1 / k if k else Fraction(1)
        return cls(sector=sector, structure=data.get("structure", CONV), c=c,
                   delta=as_fraction(data["delta"]), kappa=kappa,
                   alpha0=element(data.get("alpha0", [])),
                   beta_unit=tuple(element(b, inv_k) for b in data.get("beta", [])),
                   name=data.get("name", ""))


# ---------------------------------------------------------------- SDEs

def _mode_fields(x: AlgebraElement, structure: str, sector: str, alg: GrassmannAlgebra):
    """The (z', theta') vector field of a linear element, without drift corrections."""
    zf = SuperFunction.zero(alg)
    tf = SuperFunction.zero(alg)
    for m, coef in x.linear_coefficients().items():
        coef = coef if coef.algebra == alg else coef.embed(alg)
        if m.kind == "L":
            n = m.index
            zf = zf - SuperFunction.z(alg, n + 1, coef)
            weight = (n + 1) / 2 if structure == CONV else n / 2
            if weight:
                tf = tf - SuperFunction.theta(alg, n, coef) * weight
        else:
            if sector == VIRASORO:
                raise ValueError("G modes in the Virasoro sector")
            r = m.index
            shift = Fraction(1, 2) if structure == CONV else Fraction(1)
            zf = zf + coef * SuperFunction.theta(alg, r + shift)
            tf = tf - SuperFunction.z(alg, r + shift if structure == CONV else r, coef)
    return zf, tf


def build_sde(w: WalkSpec, drop_correction: bool = False) -> SdeSpec:
    """Drift and diffusion superfunctions of (z', theta') induced by the walk."""
    alg = w.coeffs
    k = w.k
    diffusions = []
    for b in w.beta_unit:
        zi, ti = _mode_fields(b, w.structure, w.sector, alg)
        diffusions.append((zi * k, ti * k))
    z0, t0 = _mode_fields(w.alpha0, w.structure, w.sector, alg)
    if not drop_correction:
        half = Fraction(1, 2)
        for zi, ti in diffusions:
            z0 = z0 + (zi * zi.dz() + ti * zi.dtheta()) * half
            t0 = t0 + (zi * ti.dz() + ti * ti.dtheta()) * half
    return SdeSpec((z0, t0), tuple(diffusions))


# ---------------------------------------------------------------- jets

_JET_ODD = ("phi1", "phi1_1", "phi1_2")
_JET_EVEN = ("phi0", "phi0_1", "phi0_2")


class _Jet:
    """Second-order jet of an even superfield Phi = phi0(z) + theta phi1(z)."""

    def __init__(self, base: GrassmannAlgebra):
        self.alg = base.extend(generators=_JET_ODD, symbols=_JET_EVEN + ("Delta",))
        a = self.alg
        self.delta = a.sym("Delta")
        self.images = {
            "phi0": a.sym("phi0_1"), "phi0_1": a.sym("phi0_2"),
            "phi1": a.gen("phi1_1"), "phi1_1": a.gen("phi1_2"),
        }
        self.top_bits = 1 << a.generators.index("phi1_2")
        self.top_sym = a.symbols.index("phi0_2")
        self.phi = SuperFunction.const(a, a.sym("phi0")) + SuperFunction.theta(a, 0, a.gen("phi1"))

    def dz(self, f: SuperFunction) -> SuperFunction:
        for a, b in f.terms.values():
            for g in (a, b):
                for (m, e) in g.terms:
                    if m & self.top_bits or e[self.top_sym]:
                        raise JetOrderError("jet order 2 is insufficient for this expansion")
        return f.dz(self.images)

    def mode_op(self, m: Mode, structure: str, f: SuperFunction) -> SuperFunction:
        """[mode, Phi] as a differential operator applied to f."""
        alg, D = self.alg, self.delta
        fz, ft = self.dz(f), f.dtheta()
        if m.kind == "L":
            n = m.index
            wt = (n + 1) / 2 if structure == CONV else n / 2
            return (fz.times_z(n + 1) + ft.times_theta().times_z(n) * wt
                    + f.times_z(n) * (D * (n + 1)))
        r = m.index
        if structure == CONV:
            p_dz, p_dt, p_f = r + Fraction(1, 2), r + Fraction(1, 2), r - Fraction(1, 2)
        else:
            p_dz, p_dt, p_f = r + 1, r, r
        return (-fz.times_z(p_dz).times_theta() + ft.times_z(p_dt)
                - f.times_z(p_f).times_theta() * (D * (2 * r + 1)))

    def op(self, x: AlgebraElement, structure: str, f: SuperFunction, scale=Fraction(1)) -> SuperFunction:
        out = SuperFunction.zero(self.alg)
        for m, coef in x.linear_coefficients().items():
            out = out + (coef.embed(self.alg) * scale) * self.mode_op(m, structure, f)
        return out


def verify_link(w: WalkSpec, sde: SdeSpec | None = None) -> dict[str, SuperFunction]:
    """Residuals between the Ito differentials of both sides of the primary-field law.

    The left side uses the mode action on a second-order jet of Phi; the right
    side differentiates the transformation law along the SDE.  Both are taken
    at a generic point (z', theta') and the common prefactor is divided out.
    The conformal weight is kept symbolic.  Empty dict on success.
    """
    sde = sde or build_sde(w)
    jet = _Jet(w.coeffs)
    alg, D = jet.alg, jet.delta
    phi = jet.phi
    k = w.k
    # left side
    lhs_drift = -jet.op(w.alpha0, w.structure, phi)
    lhs_diff = []
    for b in w.beta_unit:
        once = jet.op(b, w.structure, phi, k)
        lhs_drift = lhs_drift + jet.op(b, w.structure, once, k) * Fraction(1, 2)
        lhs_diff.append(-once)
    # right side
    z0, t0 = (f.embed(alg) for f in sde.drift)
    pairs = [(a.embed(alg), b.embed(alg)) for a, b in sde.diffusions]
    sd = (lambda f: f.D()) if w.structure == CONV else (lambda f: f.Dalt())
    phi_z, phi_t = jet.dz(phi), phi.dtheta()
    phi_zz, phi_zt = jet.dz(phi_z), jet.dz(phi_t)

    def dphi_first(zc, tc):
        return zc * phi_z + tc * phi_t

    u0 = sd(t0)
    us = [sd(ti) for _, ti in pairs]
    # d log(prefactor): drift and diffusion parts
    log_drift = u0 * (2 * D) + sum((u * u * (D * (2 * D - 1)) for u in us), SuperFunction.zero(alg))
    log_diff = [u * (2 * D) for u in us]
    if w.structure == ALT:
        inv_z = SuperFunction.z(alg, -1)
        v0 = z0 * inv_z
        vs = [zi * inv_z for zi, _ in pairs]
        log_drift = log_drift + v0 * D
        for u, v in zip(us, vs):
            log_drift = log_drift + v * v * (D * (D - 1) / 2) + u * v * (2 * D * D)
        log_diff = [ld + v * D for ld, v in zip(log_diff, vs)]
    rhs_drift = log_drift * phi + dphi_first(z0, t0)
    rhs_diff = []
    for (zi, ti), ld in zip(pairs, log_diff):
        first = dphi_first(zi, ti)
        rhs_drift = rhs_drift + zi * zi * phi_zz * Fraction(1, 2) + zi * ti * phi_zt + ld * first
        rhs_diff.append(ld * phi + first)
    out = {}
    res = lhs_drift - rhs_drift
    if res:
        out["dt"] = res
    for i, (a, b) in enumerate(zip(lhs_diff, rhs_diff)):
        r = a - b
        if r:
            out[f"dB{i + 1}"] = r
    return out


# ---------------------------------------------------------------- expectation values

def drift_state(w: WalkSpec) -> VermaState:
    """(alpha0 + 1/2 sum beta_i^2)|D> in PBW form."""
    module = w.module()
    return module.act(w.alpha, module.highest_weight(w.coeffs))


def inverse_increment_residual(w: WalkSpec) -> tuple[AlgebraElement, ...]:
    """Coefficients (dt, dB_1, ...) of G d(G^{-1}G) at second Ito order.

    Uses ``G d(G^{-1}) = (-alpha + sum beta_i^2) dt - sum beta_i dB_i`` and
    ``G^{-1} dG = alpha dt + sum beta_i dB_i``; the cross term contributes
    ``-sum beta_i beta_i dt``.  Products are taken in the normal-ordered
    algebra, so a zero result is a genuine algebra identity.
    """
    alpha = w.alpha
    zero = AlgebraElement(w.algebra, w.coeffs, {})
    sq = [(b * b) * w.kappa for b in w.beta_unit]
    inv_dt = sum(sq, -alpha)
    dt_part = inv_dt + alpha
    for b in w.beta_unit:
        dt_part = dt_part - (b * w.kappa) * b
    db_parts = tuple(zero - b + b for b in w.beta_unit)
    return (dt_part, *db_parts)


def reassociation_residual(w: WalkSpec) -> VermaState:
    """drift_state minus the same state with beta_i applied to |D> twice in succession."""
    module = w.module()
    hw = module.highest_weight(w.coeffs)
    out = module.act(w.alpha0, hw)
    for b in w.beta_unit:
        out = out + module.act(b, module.act(b, hw)) * (w.kappa / 2)
    return drift_state(w) - out


def _apply_key(module: VermaModule, key: tuple, state: VermaState) -> dict:
    out: dict = {}
    for k, v in state.terms.items():
        for kk, f in module.apply_word(key + k).items():
            nv = out.get(kk, 0) + v.scalar() * f
            if nv == 0:
                out.pop(kk, None)
            else:
                out[kk] = nv
    return out


def submodule_basis(module: VermaModule, level, keys: list[tuple] | None = None):
    """RREF basis of the span of singular-vector descendants up to ``level``.

    Returns (rows, pivots, keys, singular vectors by level).
    """
    level = as_fraction(level)
    keys = keys or module.basis_up_to(level)
    index = {k: i for i, k in enumerate(keys)}
    vectors = []
    singulars = {}
    for lv in levels_up_to(module.sector, level):
        found = find_singular(lv, module.sector, module.algebra.c, module.delta)
        if not found:
            continue
        singulars[lv] = found
        for chi in found:
            for desc in module.basis_up_to(level - lv):
                img = _apply_key(module, desc, chi)
                vec = [Fraction(0)] * len(keys)
                for kk, f in img.items():
                    vec[index[kk]] = f
                if any(vec):
                    vectors.append(vec)
    rows, pivots = linalg.rref(vectors) if vectors else ([], [])
    return rows, pivots, keys, singulars


@dataclass
class MartingaleReport:
    walk: str
    passed: bool
    level: Fraction
    c: Fraction
    delta: Fraction
    kappa: Fraction
    drift: VermaState
    singular: dict = field(default_factory=dict)
    constraints: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "walk": self.walk, "status": "pass" if self.passed else "fail",
            "level": str(self.level), "c": str(self.c), "delta": str(self.delta),
            "kappa": str(self.kappa), "drift_state": self.drift.to_json(self.level),
            "singular_vectors": {str(k): [s.to_json(k) for s in v] for k, v in self.singular.items()},
            "annihilation_conditions": self.constraints,
        }


def annihilation_polynomials(w: WalkSpec) -> list[GrassmannNumber]:
    """Conditions in (c, Delta) for the drift state to be annihilated by the raising modes.

    Computed with c and Delta as indeterminates of an extended coefficient
    algebra; each returned polynomial must vanish.  Normalized so the
    leading term has coefficient 1.
    """
    ext = w.coeffs.extend(symbols=("c", "Delta"))
    c, D = ext.sym("c"), ext.sym("Delta")
    alg = SuperVirasoro(w.sector, c)
    module = VermaModule(alg, D)

    def lift(x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(alg, ext, {word: coef.embed(ext) for word, coef in x.terms.items()})

    alpha = lift(w.alpha0)
    for b in w.beta_unit:
        lb = lift(b)
        alpha = alpha + (lb * lb) * (w.kappa / 2)
    v = module.act(alpha, module.highest_weight(ext))
    polys: dict = {}
    for r in raising_generators(w.sector):
        img = module.act(AlgebraElement(alg, ext, {(r,): 1}, raw=True), v)
        for coef in img.terms.values():
            by_mask: dict = {}
            for (m, e), f in coef.terms.items():
                by_mask.setdefault(m, {})[(0, e)] = f
            for terms in by_mask.values():
                p = GrassmannNumber(ext, terms)
                lead = p.terms[min(p.terms, key=p._order_key)]
                p = p * (1 / lead)
                polys[str(p)] = p
    return [polys[s] for s in sorted(polys)]


def annihilation_conditions(w: WalkSpec) -> list[str]:
    """:func:`annihilation_polynomials` rendered as ``poly = 0``."""
    return [f"{p} = 0" for p in annihilation_polynomials(w)]


def solve_locus(w: WalkSpec) -> tuple[Fraction, Fraction] | None:
    """The unique (c, Delta) satisfying the annihilation conditions, if they are linear and determine it."""
    rows = []
    for p in annihilation_polynomials(w):
        if p.degree("c") > 1 or p.degree("Delta") > 1 or p.degree("c") + p.degree("Delta") == 0:
            if p.degree("c") + p.degree("Delta") == 0:
                return None  # inconsistent
            continue
        a0 = p.substitute({"c": 0, "Delta": 0})
        cc = p.diff("c").substitute({"c": 0, "Delta": 0})
        dd = p.diff("Delta").substitute({"c": 0, "Delta": 0})
        if p - a0 - cc * p.algebra.sym("c") - dd * p.algebra.sym("Delta"):
            continue  # has a c*Delta cross term
        if not all(x.is_scalar() for x in (a0, cc, dd)):
            continue
        rows.append([cc.scalar(), dd.scalar(), -a0.scalar()])
    if not rows:
        return None
    red, pivots = linalg.rref(rows)
    if 2 in pivots or pivots[:2] != [0, 1]:
        return None
    return red[0][2], red[1][2]


def martingale_check(w: WalkSpec, with_conditions: bool = True) -> MartingaleReport:
    """Whether the drift state lies in the submodule generated by singular vectors."""
    v = drift_state(w)
    levels = v.levels()
    level = max(levels) if levels else Fraction(0)
    module = v.module
    if v.is_zero():
        passed, singular = True, {}
    else:
        rows, pivots, keys, singular = submodule_basis(module, level)
        passed = True
        for comp in v.grassmann_components().values():
            vec = [comp.get(k, Fraction(0)) for k in keys]
            if any(linalg.reduce_modulo(vec, rows, pivots)):
                passed = False
                break
    cons = annihilation_conditions(w) if with_conditions else []
    return MartingaleReport(w.name, passed, level, w.c, w.delta, w.kappa, v, singular, cons)


def expected_state(w: WalkSpec, truncation, time: str = "t") -> VermaState:
    """E[G_t |D>] = exp(t alpha)|D> with levels above ``truncation`` dropped."""
    truncation = as_fraction(truncation)
    drift_levels = drift_state(w).levels()
    if drift_levels and max(drift_levels) > truncation:
        raise ValueError("truncation below the level of the drift state")
    if time not in w.coeffs.symbols:
        raise ValueError(f"coefficient algebra has no time symbol {time!r}")
    module = w.module()
    t = w.coeffs.sym(time)
    alpha = w.alpha
    term = module.highest_weight(w.coeffs)
    total = term
    n = 0
    while True:
        n += 1
        term = module.act(alpha, term).truncate(truncation)
        term = term.map_coefficients(lambda g: g * t * Fraction(1, n))
        if term.is_zero():
            break
        total = total + term
    return total


def quotient_projection(state: VermaState, truncation) -> VermaState:
    """Canonical representative of a state modulo singular-vector descendants."""
    module = state.module
    rows, pivots, keys, _ = submodule_basis(module, truncation)
    out: dict = {}
    for gk, comp in state.grassmann_components().items():
        vec = linalg.reduce_modulo([comp.get(k, Fraction(0)) for k in keys], rows, pivots)
        for key, f in zip(keys, vec):
            if f:
                out.setdefault(key, {})[gk] = f
    return VermaState(module, state.coeffs, {k: GrassmannNumber(state.coeffs, v) for k, v in out.items()})


def operator_matrix(module: VermaModule, x: AlgebraElement, keys: Sequence[tuple]) -> list[list[Fraction]]:
    """Matrix of left multiplication by a scalar-coefficient element on span(keys), truncated."""
    index = {k: i for i, k in enumerate(keys)}
    mat = [[Fraction(0)] * len(keys) for _ in keys]
    for j, key in enumerate(keys):
        for word, coef in x.terms.items():
            for kk, f in module.apply_word(word + key).items():
                i = index.get(kk)
                if i is not None:
                    mat[i][j] += coef.scalar() * f
    return mat


def projection_matrix(module: VermaModule, truncation) -> tuple[list[list[Fraction]], list[tuple]]:
    """Matrix of quotient_projection on the basis up to ``truncation``."""
    rows, pivots, keys, _ = submodule_basis(module, truncation)
    n = len(keys)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        cols.append(linalg.reduce_modulo(e, rows, pivots))
    return [[cols[j][i] for j in range(n)] for i in range(n)], keys
