"""Independent reference implementations used to cross-check the package.

Nothing here imports the arithmetic under test; each oracle works from
definitions (explicit permutation signs, truncated power series, numeric
evaluation).
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from itertools import product


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct items), by inversion count."""
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def brute_mul(a: dict, b: dict) -> dict:
    """Product of {tuple of sorted odd generator indices: coeff} dicts by concatenation."""
    out: dict = {}
    for (ka, ca), (kb, cb) in product(a.items(), b.items()):
        seq = ka + kb
        if len(set(seq)) < len(seq):
            continue
        key = tuple(sorted(seq))
        out[key] = out.get(key, 0) + perm_sign(seq) * ca * cb
    return {k: v for k, v in out.items() if v}


def to_brute(x) -> dict:
    """GrassmannNumber over odd generators only -> oracle dict."""
    out = {}
    for (mask, _), c in x.terms.items():
        out[tuple(i for i in range(len(x.algebra.generators)) if mask >> i & 1)] = c
    return out


def geometric_inverse_shift(d_powers, order: int):
    """Coefficients of (z + d)^{-1} = sum_j (-1)^j d^j z^{-1-j}; d_powers[j] = d**j."""
    return [((-1) ** j) * d_powers[j] for j in range(order)]


def double_factorial_moment(n: int) -> int:
    """E[N(0,1)^n]."""
    if n % 2:
        return 0
    out = 1
    for j in range(1, n, 2):
        out *= j
    return out


def loewner_zero_kappa(z: complex, t: float) -> complex:
    w = cmath.sqrt(z * z + 4 * t)
    return w if w.imag >= 0 else -w


def kac_level_two(c: Fraction, d: Fraction) -> Fraction:
    """det of the level-2 Virasoro Gram matrix, from its 2x2 entries written out by hand.

    Basis (L-2, L-1^2): <L-2 L-2> = 4D + c/2, <L-2 L-1^2> = 6D,
    <L-1^2 L-1^2> = 8D^2 + 4D.
    """
    return (4 * d + c / 2) * (8 * d * d + 4 * d) - 36 * d * d
