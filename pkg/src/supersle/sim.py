"""Monte Carlo harness: Loewner flow driven by sqrt(kappa) B and the truncated walk.

This is the only floating-point module.  Randomness is drawn per path from
``numpy.random.default_rng([seed, path])`` so changing the path count never
reshuffles existing paths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .grassmann import as_fraction
from .linkmaps import WalkSpec, expected_state, operator_matrix, projection_matrix, quotient_projection

__all__ = [
    "SimConfig",
    "SleTraces",
    "Report",
    "simulate_sle",
    "loewner_closed_form",
    "closed_form_error",
    "estimate_martingale",
    "brownian_increments",
]

DEFAULT_GRID = (1 + 1j, -1 + 2j, 0.5 + 0.5j, 3j)


@dataclass(frozen=True)
class SimConfig:
    kappa: Fraction = Fraction(8, 3)
    paths: int = 1000
    steps: int = 1000
    t_max: float = 1.0
    seed: int = 20240601
    grid: tuple[complex, ...] = DEFAULT_GRID
    swallow: float = 1e-3
    imag_floor: float = 1e-6
    checkpoints: int = 10
    out: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "kappa", as_fraction(self.kappa))
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")
        if self.steps < 1 or self.paths < 1:
            raise ValueError("steps and paths must be at least 1")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        for z in self.grid:
            if complex(z).imag < self.imag_floor:
                raise ValueError(f"initial point {z} is too close to the real axis")

    @property
    def dt(self) -> float:
        return self.t_max / self.steps

    @property
    def sqrt_kappa(self) -> float:
        return math.sqrt(self.kappa)


@dataclass
class Report:
    """Outcome of one check; ``details`` holds residuals or statistics."""

    name: str
    status: str
    details: dict = field(default_factory=dict)
    provenance: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"check": self.name, "status": self.status, "details": self.details,
                "provenance": list(self.provenance)}


def brownian_increments(seed: int, paths: int, steps: int, dt: float) -> np.ndarray:
    """(paths, steps) array of N(0, dt) increments, one independent stream per path."""
    out = np.empty((paths, steps))
    scale = math.sqrt(dt)
    for p in range(paths):
        out[p] = np.random.default_rng([seed, p]).standard_normal(steps) * scale
    return out


@dataclass
class SleTraces:
    times: np.ndarray           # (n_checkpoints,)
    g: np.ndarray               # (n_checkpoints, paths, grid)
    f: np.ndarray
    driver: np.ndarray          # (n_checkpoints, paths): sqrt(kappa) B_t
    swallowed: np.ndarray       # (paths, grid) bool at the final time
    swallow_time: np.ndarray    # (paths, grid), nan if never swallowed

    @property
    def n_paths(self) -> int:
        return self.g.shape[1]

    def all_swallowed(self) -> bool:
        return bool(self.swallowed.all())


def _checkpoint_steps(cfg: SimConfig) -> list[int]:
    n = max(1, min(cfg.checkpoints, cfg.steps))
    return sorted({round(i * cfg.steps / n) for i in range(n + 1)})


def simulate_sle(cfg: SimConfig) -> SleTraces:
    """Euler-Maruyama for dg = 2/(g - sqrt(kappa) B) dt on every grid point and path."""
    dt = cfg.dt
    k = cfg.sqrt_kappa
    z0 = np.asarray(cfg.grid, dtype=complex)
    if k:
        dB = brownian_increments(cfg.seed, cfg.paths, cfg.steps, dt)
    else:
        dB = np.zeros((cfg.paths, cfg.steps))
    g = np.broadcast_to(z0, (cfg.paths, len(z0))).copy()
    drive = np.zeros(cfg.paths)
    dead = np.zeros(g.shape, dtype=bool)
    t_dead = np.full(g.shape, np.nan)
    marks = _checkpoint_steps(cfg)
    rec_g, rec_d, times = [], [], []

    def record(n):
        times.append(n * dt)
        rec_g.append(g.copy())
        rec_d.append(drive.copy())

    if marks[0] == 0:
        record(0)
    for n in range(cfg.steps):
        den = g - drive[:, None]
        close = (np.abs(den) < cfg.swallow) & ~dead
        if close.any():
            dead |= close
            t_dead[close] = n * dt
        step = np.where(dead, 0, 2 * dt / np.where(dead, 1, den))
        g = g + step
        drive = drive + k * dB[:, n]
        if n + 1 in marks:
            record(n + 1)
    g_arr = np.array(rec_g)
    d_arr = np.array(rec_d)
    return SleTraces(np.array(times), g_arr, g_arr - d_arr[:, :, None], d_arr, dead, t_dead)


def loewner_closed_form(z, t) -> np.ndarray:
    """kappa = 0 solution sqrt(z^2 + 4t), branch with non-negative imaginary part."""
    w = np.sqrt(np.asarray(z, dtype=complex) ** 2 + 4 * np.asarray(t))
    return np.where(w.imag < 0, -w, w)


def closed_form_error(steps: int = 1000, t_max: float = 1.0, grid=DEFAULT_GRID) -> float:
    cfg = SimConfig(kappa=0, paths=1, steps=steps, t_max=t_max, grid=tuple(grid), checkpoints=1)
    tr = simulate_sle(cfg)
    exact = loewner_closed_form(np.asarray(grid), t_max)
    return float(np.max(np.abs(tr.g[-1, 0] - exact)))


def _float_matrix(rows) -> np.ndarray:
    return np.array([[float(x) for x in r] for r in rows], dtype=float)


def estimate_martingale(cfg: SimConfig, walk: WalkSpec, level: int = 4, threshold: float = 3.0,
                        batch: int = 2000) -> Report:
    """Sample E[G_t |D>] on the level-truncated module and compare in the quotient.

    The walk ``G^{-1} dG = alpha dt + beta dB`` is discretised as the ordered
    product of ``1 + alpha dt + beta dB_n``; acting on ``|D>`` the factors are
    applied from the last step to the first.  The projected sample mean is
    compared with the projection of :func:`~supersle.linkmaps.expected_state`
    at ``t_max``; a component passes when it lies within ``threshold``
    standard errors (or matches to 1e-12 when the sample has no spread).
    """
    if len(walk.beta_unit) != 1:
        raise ValueError("only one Brownian motion is supported")
    if walk.coeffs.generators:
        for x in (walk.alpha0, *walk.beta_unit):
            if not all(c.is_scalar() for c in x.terms.values()):
                raise ValueError("numeric estimation needs scalar walk coefficients")
    level = as_fraction(level)
    module = walk.module()
    proj, keys = projection_matrix(module, level)
    A = _float_matrix(operator_matrix(module, walk.alpha, keys))
    Bm = _float_matrix(operator_matrix(module, walk.beta_unit[0], keys)) * math.sqrt(walk.kappa)
    P = _float_matrix(proj)
    dt = cfg.dt
    n = len(keys)
    total = np.zeros(n)
    total_sq = np.zeros(n)
    for start in range(0, cfg.paths, batch):
        count = min(batch, cfg.paths - start)
        dB = np.empty((count, cfg.steps))
        for j in range(count):
            dB[j] = np.random.default_rng([cfg.seed, start + j]).standard_normal(cfg.steps) * math.sqrt(dt)
        v = np.zeros((n, count))
        v[keys.index(())] = 1.0
        for s in range(cfg.steps - 1, -1, -1):
            v = v + dt * (A @ v) + (Bm @ v) * dB[:, s]
        q = P @ v
        total += q.sum(axis=1)
        total_sq += (q * q).sum(axis=1)
    mean = total / cfg.paths
    var = np.maximum(total_sq / cfg.paths - mean * mean, 0.0)
    se = np.sqrt(var / max(cfg.paths - 1, 1)) if cfg.paths > 1 else np.zeros(n)

    exact_q = quotient_projection(expected_state(walk, level), level)
    exact_vec = []
    for key in keys:
        coef = exact_q.coefficient(key).substitute({"t": Fraction(cfg.t_max).limit_denominator(10 ** 9)})
        exact_vec.append(float(coef.scalar()))
    exact_vec = np.array(exact_vec)
    comps = []
    ok = True
    for i, key in enumerate(keys):
        if not P[:, i].any() and not exact_vec[i] and not mean[i]:
            continue
        diff = mean[i] - exact_vec[i]
        if se[i] > 0:
            zscore = diff / se[i]
            good = abs(zscore) <= threshold
        else:
            zscore = 0.0 if abs(diff) < 1e-12 else math.inf
            good = abs(diff) < 1e-12
        ok &= good
        comps.append({"state": " ".join(str(m) for m in key) or "1", "mean": float(mean[i]),
                      "exact": float(exact_vec[i]), "stderr": float(se[i]), "z": float(zscore),
                      "pass": bool(good)})
    details = {
        "kappa": str(walk.kappa), "c": str(walk.c), "delta": str(walk.delta), "level": str(level),
        "paths": cfg.paths, "steps": cfg.steps, "t_max": cfg.t_max, "seed": cfg.seed,
        "threshold_se": threshold, "max_abs_z": max((abs(c["z"]) for c in comps), default=0.0),
        "components": comps,
    }
    return Report("martingale-numeric", "pass" if ok else "fail", details,
                  ("loewner-walk", "conservation-in-mean"))
