import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supersle import linalg
from supersle.catalog import STANDARD, ns_level_three_halves, ramond_level_one, virasoro_level_two
from supersle.grassmann import GrassmannAlgebra
from supersle.superalg import (NS, RAMOND, VIRASORO, AlgebraElement, G, L, Mode, SuperVirasoro, VermaModule,
                               act, annihilation_matrix, bracket, find_singular, gram_matrix, jacobi_sweep,
                               normal_order, raising_generators)

from oracles import kac_level_two

H = Fraction(1, 2)


def el(alg, terms, coeffs=None):
    from supersle.superalg import SCALARS
    return AlgebraElement(alg, coeffs or SCALARS, terms)


# ---------------------------------------------------------------- brackets

def test_virasoro_central_term():
    c = Fraction(7, 3)
    b = bracket(L(2), L(-2), c, NS)
    assert b.terms == {(L(0),): 4, (): c / 2}


def test_ns_anticommutator():
    assert bracket(G(H), G(-H), 5, NS).terms == {(L(0),): 2}


def test_ramond_zero_mode_anticommutator():
    c = Fraction(3, 2)
    assert bracket(G(0), G(0), c, RAMOND).terms == {(L(0),): 2, (): -c / 12}


def test_L_G_bracket():
    # [L_m, G_r] = (m/2 - r) G_{m+r}
    assert bracket(L(1), G(-Fraction(3, 2)), 0, NS).terms == {(G(-H),): 2}
    assert bracket(G(-1), L(1), 0, RAMOND).terms == {(G(0),): -Fraction(3, 2)}


def test_sector_checks():
    with pytest.raises(ValueError):
        bracket(G(0), G(H), 1, NS)
    with pytest.raises(ValueError):
        SuperVirasoro(VIRASORO, 1).check_mode(G(H))
    with pytest.raises(ValueError):
        Mode("L", 1)


def test_mode_parse_and_adjoint():
    assert Mode.parse("G-1/2") == G(-H)
    assert Mode.parse("L3").adjoint() == L(-3)
    assert str(G(-Fraction(3, 2))) == "G-3/2"


@pytest.mark.parametrize("sector", [NS, RAMOND])
def test_jacobi_sweep_range_five(sector):
    rng = random.Random(7)
    cs = [Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(3)]
    assert jacobi_sweep(sector, cs, 5) == []


def test_jacobi_sweep_detects_wrong_central_term(monkeypatch):
    original = SuperVirasoro._bracket

    def broken(self, x, y):
        out = dict(original(self, x, y))
        if x.kind == y.kind == "L" and x.index + y.index == 0 and x.index:
            # n^5 is not a 2-cocycle
            out[()] = out.get((), 0) + x.index ** 5
        return out

    monkeypatch.setattr(SuperVirasoro, "_bracket", broken)
    assert jacobi_sweep(NS, [Fraction(1, 3)], 3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([NS, RAMOND]), st.fractions(min_value=-10, max_value=10, max_denominator=7),
       st.data())
def test_direct_jacobi_on_random_triples(sector, c, data):
    alg = SuperVirasoro(sector, c)
    modes = alg.modes(5)
    x, y, z = (data.draw(st.sampled_from(modes)) for _ in range(3))
    assert alg.jacobi_residual(x, y, z) == {}


# ---------------------------------------------------------------- normal ordering

def test_normal_order_reorders_raising_right():
    alg = SuperVirasoro(VIRASORO, Fraction(1, 2))
    assert el(alg, {(L(1), L(-1)): 1}).terms == {(L(-1), L(1)): 1, (L(0),): 2}
    # already ordered word is left alone
    assert el(alg, {(L(-1), L(1)): 1}).terms == {(L(-1), L(1)): 1}


def test_normal_order_idempotent():
    alg = SuperVirasoro(NS, Fraction(3, 5))
    x = el(alg, {(G(H), L(-2), G(-H), L(1)): 1})
    assert normal_order(x) == x


def test_square_of_ns_beta():
    alg = SuperVirasoro(NS, 1)
    y, eta = STANDARD.gens("y", "eta")
    beta = AlgebraElement(alg, STANDARD, {(L(-1),): y, (G(-H),): eta})
    assert (beta * beta).terms == {(L(-1), G(-H)): 2 * (y * eta)}


def test_zero_mode_square():
    c = Fraction(9, 7)
    alg = SuperVirasoro(RAMOND, c)
    assert el(alg, {(G(0), G(0)): 1}).terms == {(L(0),): 1, (): -c / 24}


def test_odd_coefficients_anticommute_with_G():
    alg = SuperVirasoro(RAMOND, 1)
    eps, eta = STANDARD.gens("eps", "eta")
    a = AlgebraElement(alg, STANDARD, {(G(-1),): eps})
    b = AlgebraElement(alg, STANDARD, {(G(0),): eta})
    # (eps G-1)(eta G0) = -eps eta G-1 G0
    assert (a * b).terms == {(G(-1), G(0)): -(eps * eta)}


# ---------------------------------------------------------------- Verma modules

def test_L1_Lm1_on_highest_weight():
    d = Fraction(2, 7)
    m = VermaModule(SuperVirasoro(VIRASORO, 1), d)
    v = m.apply({(L(1), L(-1)): 1})
    assert v.vector([()]) == [2 * d]
    assert len(v.terms) == 1


def test_G0_squared_on_highest_weight():
    c, d = Fraction(3, 2), Fraction(1, 5)
    m = VermaModule(SuperVirasoro(RAMOND, c), d)
    v = m.apply({(G(0), G(0)): 1})
    assert v.vector([()]) == [d - c / 24]
    assert len(v.terms) == 1


def test_classical_singular_combination():
    kappa, d = Fraction(8, 3), Fraction(2, 9)
    m = VermaModule(SuperVirasoro(VIRASORO, Fraction(1, 3)), d)
    v = m.apply({(L(-2),): -2, (L(-1), L(-1)): kappa / 2})
    w = m.act_mode(L(1), v)
    assert w.vector([(L(-1),)]) == [-6 + kappa * (2 * d + 1)]
    assert len(w.terms) == 1


def test_ramond_top_space_is_two_dimensional():
    m = VermaModule(SuperVirasoro(RAMOND, 1), Fraction(1, 3))
    assert m.basis(0) == [(), (G(0),)]
    assert len(m.basis(1)) == 4


def test_ns_basis_counts():
    m = VermaModule(SuperVirasoro(NS, 1), 0)
    # partitions into parts from {1/2 (once), 1, 3/2 (once), 2, ...}
    assert [len(m.basis(Fraction(n, 2))) for n in range(1, 6)] == [1, 1, 2, 3, 4]


@st.composite
def small_elements(draw, alg):
    modes = [m for m in alg.modes(2)]
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        word = tuple(draw(st.lists(st.sampled_from(modes), min_size=1, max_size=2)))
        terms[word] = draw(st.integers(-3, 3))
    return AlgebraElement(alg, STANDARD, {w: STANDARD.scalar(c) for w, c in terms.items()})


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([NS, RAMOND]), st.data())
def test_act_is_a_representation(sector, data):
    alg = SuperVirasoro(sector, Fraction(5, 3))
    module = VermaModule(alg, Fraction(1, 4))
    x = data.draw(small_elements(alg))
    y = data.draw(small_elements(alg))
    start = module.apply({(): 1, (L(-1),): 2}, STANDARD)
    assert act(x * y, start) == act(x, act(y, start))


# ---------------------------------------------------------------- singular vectors

def _span_equal(states_a, states_b, keys):
    a = [s.vector(keys) for s in states_a]
    b = [s.vector(keys) for s in states_b]
    return linalg.rank(a) == linalg.rank(b) == linalg.rank(a + b)


@pytest.mark.parametrize("d", [Fraction(1, 3), Fraction(1, 2), Fraction(-1, 4), Fraction(2), Fraction(3, 7),
                               Fraction(5, 2)])
def test_ns_level_three_halves(d):
    c = 3 * d * (3 - 2 * d) / (2 * d + 1)
    found = find_singular(Fraction(3, 2), NS, c, d)
    m = found[0].module
    expected = m.apply({(G(-Fraction(3, 2)),): d + H, (L(-1), G(-H)): -1})
    assert len(found) == 1
    assert _span_equal(found, [expected], m.basis(Fraction(3, 2)))
    for r in raising_generators(NS):
        assert m.act_mode(r, found[0]).is_zero()


@pytest.mark.parametrize("d", [Fraction(1, 5), Fraction(1, 10), Fraction(-1, 8), Fraction(3, 4), Fraction(2),
                               Fraction(7, 16)])
def test_ramond_level_one(d):
    c = 8 * d * (9 - 16 * d) / (16 * d + 3)
    found = find_singular(1, RAMOND, c, d)
    m = found[0].module
    chi = m.apply({(L(-1),): 8 * d + c, (G(-1), G(0)): -6})
    g0chi = m.act_mode(G(0), chi)
    keys = m.basis(1)
    assert len(found) == 2
    assert _span_equal(found, [chi, g0chi], keys)
    for r in raising_generators(RAMOND):
        assert m.act_mode(r, chi).is_zero()


@pytest.mark.parametrize("kappa", [Fraction(2), Fraction(8, 3), Fraction(3), Fraction(4), Fraction(6), Fraction(8)])
def test_virasoro_level_two(kappa):
    c = 1 - 3 * (4 - kappa) ** 2 / (2 * kappa)
    d = (6 - kappa) / (2 * kappa)
    found = find_singular(2, VIRASORO, c, d)
    m = found[0].module
    expected = m.apply({(L(-2),): -2, (L(-1), L(-1)): kappa / 2})
    assert _span_equal(found, [expected], m.basis(2))


def test_virasoro_kappa_four_vector():
    found = find_singular(2, VIRASORO, 1, Fraction(1, 4))
    m = found[0].module
    assert _span_equal(found, [m.apply({(L(-2),): -2, (L(-1), L(-1)): 2})], m.basis(2))


def test_no_singular_vector_off_locus():
    assert find_singular(Fraction(3, 2), NS, Fraction(1, 2), Fraction(1, 7)) == []
    assert find_singular(1, RAMOND, Fraction(1, 2), Fraction(1, 7)) == []
    assert find_singular(2, VIRASORO, Fraction(1, 2), Fraction(1, 7)) == []


def test_find_singular_requires_positive_level():
    with pytest.raises(ValueError):
        find_singular(0, NS, 1, 1)


def _grid():
    rng = random.Random(11)
    pts = []
    for _ in range(10):
        d = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        if 2 * d + 1:
            pts.append((3 * d * (3 - 2 * d) / (2 * d + 1), d))
    for _ in range(10):
        pts.append((Fraction(rng.randint(-20, 20), rng.randint(1, 9)), Fraction(rng.randint(-20, 20), rng.randint(1, 9))))
    return pts


@pytest.mark.parametrize("c, d", _grid())
def test_ns_locus_certificate(c, d):
    assert bool(find_singular(Fraction(3, 2), NS, c, d)) == (ns_level_three_halves(c, d) == 0)


def test_ns_locus_both_branches():
    # at fixed c the locus is quadratic in D; both roots carry a singular vector
    c = Fraction(7, 5)
    roots = [d for d in (Fraction(1, 3), Fraction(7, 10)) if ns_level_three_halves(c, d) == 0]
    assert len(roots) == 2
    for d in roots:
        assert find_singular(Fraction(3, 2), NS, c, d)


@pytest.mark.parametrize("seed", range(10))
def test_ramond_locus_certificate(seed):
    rng = random.Random(seed)
    d = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
    if 16 * d + 3 == 0:
        d += 1
    on = 8 * d * (9 - 16 * d) / (16 * d + 3)
    off = on + Fraction(rng.randint(1, 5), 3)
    assert find_singular(1, RAMOND, on, d) and ramond_level_one(on, d) == 0
    assert not find_singular(1, RAMOND, off, d)


# ---------------------------------------------------------------- Gram oracle

def test_gram_level_one_virasoro():
    d = Fraction(3, 11)
    mat, keys = gram_matrix(1, VIRASORO, 5, d)
    assert mat == [[2 * d]]


def test_gram_level_two_virasoro_matches_hand_determinant():
    c, d = Fraction(5, 3), Fraction(2, 9)
    mat, _ = gram_matrix(2, VIRASORO, c, d)
    assert linalg.det(mat) == kac_level_two(c, d)
    assert virasoro_level_two(c, d) * 2 * d == kac_level_two(c, d)


@pytest.mark.parametrize("sector, level, c, d", [
    (NS, Fraction(3, 2), Fraction(7, 5), Fraction(1, 3)),
    (RAMOND, 1, Fraction(148, 115), Fraction(1, 10)),
    (VIRASORO, 2, 1, Fraction(1, 4)),
    (NS, 2, Fraction(7, 5), Fraction(1, 3)),
])
def test_gram_kernel_equals_singular_span(sector, level, c, d):
    mat, keys = gram_matrix(level, sector, c, d)
    assert all(mat[i][j] == mat[j][i] for i in range(len(keys)) for j in range(len(keys)))
    kernel = linalg.nullspace(mat, len(keys))
    sing = [s.vector(keys) for s in find_singular(level, sector, c, d)]
    if level == 2 and sector == NS:
        # descendants of the level-3/2 vector are null but not singular
        assert len(kernel) >= 1 and not sing
        return
    assert linalg.rank(kernel) == linalg.rank(sing) == linalg.rank(kernel + sing)


def test_gram_generic_point_is_nondegenerate():
    mat, _ = gram_matrix(Fraction(3, 2), NS, Fraction(1, 2), Fraction(1, 7))
    assert linalg.det(mat) != 0


def test_annihilation_matrix_shape():
    m = VermaModule(SuperVirasoro(NS, 1), Fraction(1, 3))
    keys = m.basis(Fraction(3, 2))
    rows = annihilation_matrix(m, keys)
    assert rows and all(len(r) == len(keys) for r in rows)
