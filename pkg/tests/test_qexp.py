from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudodet.chainring import ChainAlgebra, finite_field_4
from pseudodet.errors import (
    InsufficientPrecision,
    NonIntegralExponent,
    NotOrdinary,
    ParityMismatch,
    RequiresCharP,
    RootsNotRational,
)
from pseudodet.qexp import (
    DirichletCharacter,
    QExpansion,
    SpaceSpec,
    bernoulli_numbers,
    diamond,
    eisenstein,
    eta_product,
    eta_product_integers,
    generalized_bernoulli,
    hasse,
    kronecker_symbol,
    mul,
    stabilize,
    sturm_bound,
    t_ell,
    u_op,
    v_op,
    weight_p_eigen_check,
)


def naive_eta(terms, B):
    """q^{sum d r / 24} prod_d prod_n (1 - q^{dn})^r by repeated series multiplication."""
    shift = sum(d * r for d, r in terms) // 24
    c = [0] * B
    c[0] = 1
    for d, r in terms:
        for n in range(1, B // d + 1):
            for _ in range(abs(r)):
                if r > 0:  # multiply by 1 - q^{dn}
                    c = [c[i] - (c[i - d * n] if i >= d * n else 0) for i in range(B)]
                else:  # divide by 1 - q^{dn}
                    for i in range(d * n, B):
                        c[i] += c[i - d * n]
    return [0] * shift + c[: B - shift]


def sigma(n, k=1):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


# eta products


def test_eta_examples():
    assert eta_product_integers([(1, 1), (23, 1)], 10) == [0, 1, -1, -1, 0, 0, 1, 0, 1, 0]
    assert eta_product_integers([(1, 2), (11, 2)], 8) == [0, 1, -2, -1, 2, 1, 2, -2]
    with pytest.raises(NonIntegralExponent):
        eta_product_integers([(1, 1)], 10)


@pytest.mark.parametrize("terms", [[(1, 1), (23, 1)], [(1, 2), (11, 2)], [(1, 24)], [(1, 4), (5, 4)], [(2, 12)]])
def test_eta_against_euler_product(terms):
    assert eta_product_integers(terms, 120) == naive_eta(terms, 120)


def test_eta_quotient_against_euler_product():
    terms = [(1, 8), (2, -8), (4, 8)]  # sum d r = 8 - 16 + 32 = 24
    assert eta_product_integers(terms, 60) == naive_eta(terms, 60)


def test_eta_metadata_and_reduction():
    Z9 = ChainAlgebra.zmod(3, 2)
    f = eta_product([(1, 2), (11, 2)], 50, Z9)
    assert f.weight == 2
    assert f.row() == [c % 9 for c in naive_eta([(1, 2), (11, 2)], 50)]


def test_delta_is_ramanujan_tau():
    tau = eta_product_integers([(1, 24)], 8)
    assert tau[1:] == [1, -24, 252, -1472, 4830, -6048, -16744]


# characters


def test_kronecker_minus_23_is_legendre():
    for n in range(1, 200):
        if n % 23:
            assert kronecker_symbol(-23, n) == legendre(n, 23) or n % 2 == 0
    assert kronecker_symbol(-23, 2) == 1  # -23 = 1 mod 8


def test_character_properties():
    Z5 = ChainAlgebra.zmod(5)
    chi = DirichletCharacter.kronecker(-23, Z5)
    assert chi.verify() == []
    assert chi.parity() == -1 and chi.conductor == 23 and not chi.is_trivial()
    assert (chi * chi).is_trivial()
    F2 = ChainAlgebra.zmod(2)
    chi2 = DirichletCharacter.kronecker(-23, F2)
    assert all(chi2(a) == 1 for a in range(1, 23))
    assert chi2.conductor == 1 and chi2.parity() == -1
    restored = DirichletCharacter.from_json(Z5, chi.to_json())
    assert all(restored(a) == chi(a) for a in range(46)) and restored.parity() == -1


# Bernoulli numbers and Eisenstein series


def test_bernoulli_numbers():
    B = bernoulli_numbers(12)
    assert B[0] == 1 and B[2] == Fraction(1, 6) and B[4] == Fraction(-1, 30)
    assert B[12] == Fraction(-691, 2730)
    assert all(B[k] == 0 for k in range(3, 13, 2))


def test_generalized_bernoulli_gives_class_numbers():
    # B_{1, chi_D} = -h(D) for imaginary quadratic fields with |D| > 4
    for D, h in [(-23, 3), (-7, 1), (-47, 5), (-71, 7)]:
        assert generalized_bernoulli(1, lambda a, D=D: kronecker_symbol(D, a), -D) == -h


def test_eisenstein_weight_two_level_eleven():
    F7 = ChainAlgebra.zmod(7)
    one = DirichletCharacter.trivial(F7)
    E = eisenstein(2, one, one, 231)
    f = E - v_op(E, 11).truncate(231).scale(F7(11))
    assert f[1] == 1
    for n in range(1, 231):
        expected = sigma(n) - (11 * sigma(n // 11) if n % 11 == 0 else 0)
        assert f[n] == expected % 7
    assert E[0] == F7(-1) * pow(24, -1, 7)  # -B_2 / 4


def test_eisenstein_weight_one_divisor_sums():
    F5 = ChainAlgebra.zmod(5)
    chi = DirichletCharacter.kronecker(-23, F5)
    E = eisenstein(1, DirichletCharacter.trivial(F5), chi, 100)
    for n in range(1, 100):
        assert E[n] == sum(legendre(d, 23) for d in range(1, n + 1) if n % d == 0) % 5
    assert E[0] == F5(3) * pow(2, -1, 5)  # -B_{1,chi} / 2 = 3/2
    assert E.character.parity() == -1
    with pytest.raises(ParityMismatch):
        eisenstein(2, DirichletCharacter.trivial(F5), chi, 10)


# operators


def test_mul_examples():
    F2 = ChainAlgebra.zmod(2)
    q = QExpansion.monomial(F2, 1, 10)
    assert mul(q, q) == QExpansion.monomial(F2, 2, 10)
    g = eta_product([(1, 1), (23, 1)], 40, F2)
    assert mul(g, QExpansion.constant(F2, 1, 40)) == g
    Ag = mul(hasse(2, 40), g)
    assert Ag.row() == g.row() and Ag.weight == 2
    assert mul(g, QExpansion.constant(F2, 1, 25)).precision == 25


def test_hasse():
    A = hasse(2, 5)
    assert A.weight == 1 and A.row() == [1, 0, 0, 0, 0]
    assert hasse(3, 5).weight == 2
    with pytest.raises(RequiresCharP):
        hasse(2, 5, ChainAlgebra.zmod(2, 2))


def test_v_and_u_examples():
    F2 = ChainAlgebra.zmod(2)
    q = QExpansion.monomial(F2, 1, 10)
    assert v_op(q, 2).row()[:5] == [0, 0, 1, 0, 0]
    one = QExpansion.constant(F2, 1, 10)
    assert v_op(one, 2).row(10) == one.row()
    assert u_op(QExpansion.monomial(F2, 2, 10), 2).row() == [0, 1, 0, 0, 0]
    Z = ChainAlgebra.zmod(3, 2)
    g = eta_product([(1, 1), (23, 1)], 40, Z)
    Vg = v_op(g, 2)
    assert [Vg[n] for n in (2, 4, 6)] == [Z(1), Z(-1), Z(-1)]
    Ug = u_op(g, 2)
    assert [Ug[n] for n in (1, 2, 3)] == [Z(-1), Z(0), Z(1)]
    with pytest.raises(InsufficientPrecision):
        u_op(g, 2, 30)
    with pytest.raises(InsufficientPrecision):
        g[40]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=40), st.sampled_from([2, 3, 5]))
def test_u_after_v_is_identity(values, p):
    Z = ChainAlgebra.zmod(3, 2)
    f = QExpansion.from_ints(Z, values)
    assert u_op(v_op(f, p), p) == f
    VU = v_op(u_op(f, p), p)
    assert all(VU[n].is_zero() for n in range(VU.precision) if n % p)


@settings(max_examples=50, deadline=None)
@given(*[st.lists(st.integers(0, 3), min_size=20, max_size=20)] * 3)
def test_mul_is_a_commutative_ring(a, b, c):
    Z4 = ChainAlgebra.zmod(2, 2)
    f, g, h = (QExpansion.from_ints(Z4, x) for x in (a, b, c))
    assert mul(f, g) == mul(g, f)
    assert mul(mul(f, g), h) == mul(f, mul(g, h))
    assert mul(f, g + h) == mul(f, g) + mul(f, h)


def test_t_ell_on_level_eleven():
    F3 = ChainAlgebra.zmod(3)
    one = DirichletCharacter.trivial(F3)
    g = eta_product([(1, 2), (11, 2)], 200, F3).with_meta(level=11, character=one)
    assert t_ell(g, 3)[1] == F3(-1)
    # eigenform: T_l g = a_l g for l != 11
    for ell in (2, 3, 5, 7, 13):
        Tg = t_ell(g, ell)
        assert Tg == g.truncate(Tg.precision).scale(g[ell])


def test_t_ell_commute():
    Z9 = ChainAlgebra.zmod(3, 2)
    one = DirichletCharacter.trivial(Z9)
    f = QExpansion.from_ints(Z9, [(n * n + 3 * n + 1) % 9 for n in range(400)], weight=2, character=one)
    a = t_ell(t_ell(f, 2), 5)
    b = t_ell(t_ell(f, 5), 2)
    B = min(a.precision, b.precision)
    assert a.truncate(B) == b.truncate(B)


def test_t_p_is_u_p_in_weight_p_char_p():
    F2 = ChainAlgebra.zmod(2)
    chi = DirichletCharacter.kronecker(-23, F2)
    f = eta_product([(1, 1), (23, 1)], 100, F2).with_meta(character=chi)
    assert t_ell(f, 2, k=2) == u_op(f, 2)


def test_t_p_of_v_and_hasse_identities():
    F4 = finite_field_4()
    chi = DirichletCharacter.kronecker(-23, F4)
    g = eta_product([(1, 1), (23, 1)], 200, F4).with_meta(weight=1, character=chi)
    Ag = mul(hasse(2, 200, F4), g)
    Vg = v_op(g, 2)
    # T_p V g = A g in weight p
    assert t_ell(Vg, 2, k=2) == Ag.truncate(200)
    # T_p A g = a_p A g - chi(p) V g
    lhs = t_ell(Ag, 2, k=2)
    rhs = (Ag.scale(g[2]) - Vg.truncate(200).scale(chi(2))).truncate(lhs.precision)
    assert lhs == rhs


def test_diamond_is_character_scalar():
    F5 = ChainAlgebra.zmod(5)
    chi = DirichletCharacter.kronecker(-23, F5)
    g = eta_product([(1, 1), (23, 1)], 20, F5).with_meta(character=chi)
    assert diamond(g, 5) == g.scale(F5(-1))  # (-23/5) = (2/5) = -1
    assert diamond(g, 2) == g


def test_sturm_bound_examples():
    assert sturm_bound(2, 11) == 21
    assert sturm_bound(1, 23) == 45
    assert sturm_bound(12, 1) == 2
    assert sturm_bound(2, 46) == 265


def test_space_spec():
    with pytest.raises(ValueError):
        SpaceSpec(2, 22, 2, 1, 10)
    with pytest.raises(ValueError):
        SpaceSpec(2, 3, 2, 1, 10)
    s = SpaceSpec(2, 3, 2, 1, 10, strict=False)
    assert SpaceSpec.from_json(s.to_json(), strict=False) == s
    assert SpaceSpec(2, 23, 2, 1, 10, gamma0_p=True).sturm() == 265


def test_json_round_trip():
    F4 = finite_field_4()
    chi = DirichletCharacter.kronecker(-23, F4)
    g = eta_product([(1, 1), (23, 1)], 30, F4).with_meta(level=23, character=chi).scale(F4.gen(1))
    h = QExpansion.from_json(g.to_json(), F4)
    assert h == g and h.level == 23 and h.weight == 1


# stabilization and the weight-p eigenform


@pytest.mark.parametrize("m", [1, 2])
def test_stabilize_level_eleven(m):
    A = ChainAlgebra.zmod(3, m)
    B = sturm_bound(2, 33)
    g = eta_product([(1, 2), (11, 2)], 3 * B, A).with_meta(level=11, character=DirichletCharacter.trivial(A))
    f, alpha, beta = stabilize(g, 3, g[3], 1, 2)
    assert alpha * beta == A(3) and alpha + beta == A(-1)
    if m == 1:
        assert (alpha, beta) == (A(-1), A(0)) and f == g
    assert u_op(f, 3, B) == f.truncate(B).scale(alpha)


def test_stabilize_level_twenty_three():
    F2 = ChainAlgebra.zmod(2)
    g = eta_product([(1, 1), (23, 1)], 600, F2)
    with pytest.raises(RootsNotRational):
        stabilize(g, 2, 1, 1, 1)
    F4 = finite_field_4()
    g = eta_product([(1, 1), (23, 1)], 600, F4)
    f, alpha, beta = stabilize(g, 2, g[2], 1, 1)
    w = F4.gen(1)
    assert {alpha, beta} == {w, w + 1}
    B = sturm_bound(2, 46)
    assert u_op(f, 2, B) == f.truncate(B).scale(alpha)


def test_stabilize_non_ordinary():
    F3 = ChainAlgebra.zmod(3)
    with pytest.raises(NotOrdinary):
        stabilize(QExpansion.from_ints(F3, [0, 1, 0, 0]), 3, 0, 1, 2)


def test_weight_p_check_level_twenty_three():
    F4 = finite_field_4()
    chi = DirichletCharacter.kronecker(-23, F4)
    g = eta_product([(1, 1), (23, 1)], 600, F4).with_meta(weight=1, level=23, character=chi)
    w = F4.gen(1)
    alpha, beta = w, w + 1
    res = weight_p_eigen_check(g, 2, g[2], chi(2), alpha, beta, upto=265)
    assert res.ok and res.first_mismatch is None
    bad = weight_p_eigen_check(g, 2, g[2], chi(2), alpha, alpha, upto=265)
    assert not bad.ok and bad.first_mismatch is not None and bad.first_mismatch <= 265


def test_weight_p_check_eisenstein():
    F3 = ChainAlgebra.zmod(3)
    chi = DirichletCharacter.kronecker(-23, F3)
    g = eisenstein(1, DirichletCharacter.trivial(F3), chi, 300)
    assert g[3] == 2
    assert weight_p_eigen_check(g, 3, g[3], chi(3), F3(1), F3(1)).ok
