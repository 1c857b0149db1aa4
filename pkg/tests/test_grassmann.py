from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supersle.grassmann import (GrassmannAlgebra, as_fraction, binomial, body, fraction_sqrt, ginv,
                                gmul, gpow, parity, soul)

from oracles import brute_mul, to_brute

A4 = GrassmannAlgebra(["a", "b", "c", "d"])
EE = GrassmannAlgebra(["eta", "eps"])
eta, eps = EE.gens("eta", "eps")

coef = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def homogeneous(draw, alg=A4, par=None):
    n = len(alg.generators)
    if par is None:
        par = draw(st.sampled_from([0, 1]))
    masks = [m for m in range(1 << n) if bin(m).count("1") % 2 == par]
    chosen = draw(st.lists(st.sampled_from(masks), max_size=5, unique=True))
    out = alg.zero()
    for m in chosen:
        term = alg.scalar(draw(coef))
        for i in range(n):
            if m >> i & 1:
                term = term * alg.gen(alg.generators[i])
        out = out + term
    return out, par


@st.composite
def element(draw, alg=A4):
    x, _ = draw(homogeneous(alg, 0))
    y, _ = draw(homogeneous(alg, 1))
    return x + y


# ---------------------------------------------------------------- examples

def test_nilpotent_generator():
    assert eta * eta == 0


def test_anticommutation():
    assert eps * eta == -(eta * eps)


def test_product_of_conjugates():
    # frozen from the subset-convolution oracle
    x, y = 1 + eps * eta, 1 - eps * eta
    assert to_brute(x * y) == brute_mul(to_brute(x), to_brute(y)) == {(): 1}
    assert gmul(x, y) == 1


def test_body_soul_parity():
    x = 3 + 2 * (eps * eta)
    assert body(x) == 3
    assert soul(x) == 2 * (eps * eta)
    assert parity(eta + eps) == "odd"
    assert parity(x) == "even"
    assert parity(1 + eta) == "mixed"


def test_even_nilpotent_y_is_soul():
    alg = GrassmannAlgebra(["y", "eta"], even=["y"])
    y = alg.gen("y")
    assert y * y == 0
    assert body(y) == 0 and soul(y) == y
    assert parity(y) == "even"
    assert y * alg.gen("eta") == alg.gen("eta") * y


def test_inverse_examples():
    assert ginv(1 + eps * eta) == 1 - eps * eta
    assert ginv(EE.one()) == 1
    assert (3 + eps * eta).inverse() * (3 + eps * eta) == 1


def test_gpow_half():
    r = gpow(1 + eps * eta, Fraction(1, 2))
    assert r == 1 + Fraction(1, 2) * (eps * eta)
    assert r * r == 1 + eps * eta


@pytest.mark.parametrize("bad, exc", [(eta, ValueError), (1 + eta, ValueError),
                                      (eps * eta, ZeroDivisionError)])
def test_inverse_errors(bad, exc):
    with pytest.raises(exc):
        ginv(bad if not isinstance(bad, int) else EE.scalar(bad))


def test_gpow_errors():
    with pytest.raises(ValueError):
        gpow(2 + eps * eta, Fraction(1, 2))
    with pytest.raises(ValueError):
        gpow(1 + eta, 2)


def test_mismatched_algebras():
    with pytest.raises(ValueError, match="mismatched"):
        gmul(eta, A4.gen("a"))


def test_division_by_zero_scalar():
    with pytest.raises(ZeroDivisionError):
        eta / 0


def test_symbols_commute_and_differentiate():
    alg = GrassmannAlgebra(["eta"], symbols=["t", "B"])
    t, B, e = alg.sym("t"), alg.sym("B"), alg.gen("eta")
    x = e * t * B * B
    assert x == B * B * t * e
    assert x.diff("B") == 2 * (e * t * B)
    assert x.degree("B") == 2
    assert x.substitute({"t": 2, "B": 3}) == 18 * e


def test_json_round_trip():
    x = 3 + 2 * (eps * eta) - eta
    data = x.to_json()
    assert type(x).from_json(EE, data) == x
    assert all(isinstance(c, str) for _, c in data)


def test_rendering_orders_generators():
    assert str(1 + eps * eta) == "1 - eta*eps"
    assert str(EE.zero()) == "0"


def test_helpers():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert fraction_sqrt(Fraction(4, 9)) == Fraction(2, 3)
    with pytest.raises(ValueError):
        fraction_sqrt(2)
    assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)


def test_too_many_generators():
    with pytest.raises(ValueError):
        GrassmannAlgebra([f"g{i}" for i in range(65)])


# ---------------------------------------------------------------- properties

@settings(max_examples=150, deadline=None)
@given(homogeneous(), homogeneous())
def test_graded_commutativity(xa, yb):
    (x, px), (y, py) = xa, yb
    assert x * y == (-1) ** (px * py) * (y * x)


@settings(max_examples=100, deadline=None)
@given(element(), element(), element())
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@settings(max_examples=100, deadline=None)
@given(element(), element())
def test_matches_brute_force(x, y):
    assert to_brute(x * y) == brute_mul(to_brute(x), to_brute(y))


@settings(max_examples=100, deadline=None)
@given(homogeneous(par=0), st.fractions(min_value=1, max_value=5, max_denominator=3))
def test_inverse_multiplies_back(xe, b):
    x, _ = xe
    x = soul(x) + b
    assert x * ginv(x) == 1
    assert ginv(x) * x == 1


@settings(max_examples=100, deadline=None)
@given(homogeneous(par=0), st.sampled_from([Fraction(1, 2), Fraction(2), Fraction(-3, 2)]),
       st.sampled_from([Fraction(1, 3), Fraction(5, 2)]))
def test_gpow_laws(xe, p, q):
    x = 1 + soul(xe[0])
    assert gpow(x, p) * gpow(x, q) == gpow(x, p + q)
    assert gpow(gpow(x, p), 1 / p) == x


@settings(max_examples=100, deadline=None)
@given(homogeneous(par=0))
def test_soul_nilpotency_index(xe):
    s = soul(xe[0])
    assert s ** (len(A4.generators) + 1) == 0
