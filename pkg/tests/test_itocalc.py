from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supersle import catalog
from supersle.catalog import STANDARD
from supersle.grassmann import GrassmannAlgebra
from supersle.itocalc import (ItoPoly, SdeSpec, check_process, classical_rewrite_check, expectation, ito_d,
                              product_correction, verify_solution)
from supersle.superspace import SuperFunction, SuperMap

from oracles import double_factorial_moment

y, eta, eps = STANDARD.gens("y", "eta", "eps")
t, B = STANDARD.sym("t"), STANDARD.sym("B")
Z = SuperFunction.z(STANDARD)
TH = SuperFunction.theta(STANDARD)


def C(x):
    return SuperFunction.const(STANDARD, x)


def test_d_of_B_squared():
    d = ito_d(C(B * B))
    assert d.drift == C(1)
    assert d.diffusions == (C(2 * B),)


def test_d_of_tB():
    d = ito_d(C(t * B))
    assert d.drift == C(B)
    assert d.diffusions == (C(t),)


@pytest.mark.parametrize("n", range(7))
def test_gaussian_moments(n):
    got = expectation(C(B ** n)).value
    assert got == C(double_factorial_moment(n) * t ** (n // 2)) if n % 2 == 0 else got.is_zero()


def test_two_brownian_motions_are_independent():
    alg = GrassmannAlgebra([], symbols=["t", "B1", "B2"])
    b1, b2, tt = alg.sym("B1"), alg.sym("B2"), alg.sym("t")
    p = ItoPoly(SuperFunction.const(alg, b1 * b1 * b2 * b2), "t", ("B1", "B2"))
    assert expectation(p).value == SuperFunction.const(alg, tt * tt)
    d = ito_d(p)
    assert d.drift == SuperFunction.const(alg, b1 * b1 + b2 * b2)


def test_expected_theta_of_ramond_solution():
    k = Fraction(2, 3)
    sol = catalog.solution_ramond_conv(k)
    e = expectation(sol.thetamap).value
    assert e == TH + C(eps * eta * t) * TH * SuperFunction.z(STANDARD, -1) * (k * k / 2)


def test_theta_differential_of_ramond_solution():
    k = Fraction(3)
    sol = catalog.solution_ramond_conv(k)
    d = ito_d(sol.thetamap)
    ez = C(eps * eta) * TH * SuperFunction.z(STANDARD, -1)
    assert d.drift == ez * (k * k / 2)
    r = (C(eps) * SuperFunction.z(STANDARD, Fraction(-1, 2)) + C(eta) * SuperFunction.z(STANDARD, Fraction(1, 2))) * k
    assert d.diffusions == (-r + ez * C(B) * (k * k),)


@pytest.mark.parametrize("key", sorted(catalog.CONFIGURATIONS))
def test_closed_forms_solve_their_sdes(key, k):
    cfg = catalog.CONFIGURATIONS[key]
    assert verify_solution(cfg.solution(k), cfg.sde(k)).is_zero()


@pytest.mark.parametrize("key", ["r-conv", "r-alt", "ns-alt"])
def test_intermediate_processes(key, k):
    cfg = catalog.CONFIGURATIONS[key]
    sol = cfg.solution(k)
    for im in cfg.intermediates(k):
        assert check_process(im.definition, sol, im.value, im.drift, (im.diffusion,)) == {}, im.name


def test_intermediate_with_wrong_value_is_reported():
    k = Fraction(2, 3)
    sol = catalog.solution_ramond_conv(k)
    w = catalog.intermediates_ramond_conv(k)[0]
    res = check_process(w.definition, sol, w.value + C(t), w.drift, (w.diffusion,))
    assert set(res) == {"value"}


def test_wrong_solution_leaves_a_residual():
    k = Fraction(2, 3)
    sol = catalog.solution_ramond_conv(k)
    broken = SuperMap(sol.zmap + C(eps * eta * t), sol.thetamap)
    res = verify_solution(broken, catalog.sde_ramond_conv(k))
    assert not res.is_zero()
    assert res.theta.is_zero() or not res.z.is_zero()


def test_half_integer_exponents_only_in_conventional_ramond():
    k = Fraction(2, 3)
    assert catalog.sde_ramond_conv(k).has_half_integer_exponents()
    assert not catalog.sde_ramond_alt(k).has_half_integer_exponents()
    assert not catalog.solution_ramond_alt(k).zmap.has_half_integer_exponents()
    assert not catalog.solution_ramond_alt(k).thetamap.has_half_integer_exponents()


def test_brownian_degree_of_theta():
    k = Fraction(2, 3)
    assert ItoPoly(catalog.solution_ramond_conv(k).thetamap).degree("B") == 2
    assert ItoPoly(catalog.solution_ns_conv(k).thetamap).degree("B") == 1


def test_start_point_is_enforced():
    k = Fraction(2, 3)
    sol = catalog.solution_ns_conv(k)
    shifted = SuperMap(sol.zmap + C(1), sol.thetamap)
    with pytest.raises(ValueError, match="start"):
        verify_solution(shifted, catalog.sde_ns_conv(k))


def test_diffusion_count_checked():
    k = Fraction(2, 3)
    sde = catalog.sde_ns_conv(k)
    with pytest.raises(ValueError):
        verify_solution(catalog.solution_ns_conv(k), SdeSpec(sde.drift, ()))


def test_sde_equality_and_json():
    k = Fraction(1, 2)
    assert catalog.sde_ns_conv(k) == catalog.sde_ns_conv(k)
    assert catalog.sde_ns_conv(k) != catalog.sde_ns_conv(2 * k)
    data = catalog.sde_ramond_alt(k).to_json()
    assert set(data) == {"drift", "diffusions"} and len(data["diffusions"]) == 1


def test_classical_rewrite():
    assert classical_rewrite_check(Fraction(8, 3), -1) == {}
    res = classical_rewrite_check(Fraction(8, 3), +1)
    assert set(res) == {"dt", "dB"}
    assert classical_rewrite_check(0, 1) == {}


# ---------------------------------------------------------------- properties

polys = st.lists(st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 3)), min_size=1, max_size=4)


def _poly(spec):
    out = C(0)
    for coef, tp, bp in spec:
        out = out + C(coef * t ** tp * B ** bp) * (TH if bp % 2 else Z)
    return out


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_ito_product_rule(a, b):
    p, q = _poly(a), _poly(b)
    dp, dq, dpq = ito_d(p), ito_d(q), ito_d(p * q)
    assert dpq.drift == dp.drift * q + p * dq.drift + product_correction(dp, dq)
    assert dpq.diffusions[0] == dp.diffusions[0] * q + p * dq.diffusions[0]


@settings(max_examples=60, deadline=None)
@given(polys)
def test_dynkin_identity(a):
    # d/dt E[p] = E[drift of p]
    p = _poly(a)
    lhs = expectation(p).value.map_coefficients(lambda g: g.diff("t"))
    rhs = expectation(ito_d(p).drift).value
    assert lhs == rhs
