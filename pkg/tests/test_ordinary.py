import pytest

from helpers import matrix_group, s3_standard
from pseudodet.chainring import AlgebraHom, ChainAlgebra, finite_field_4
from pseudodet.determinant import DeterminantPair, base_change, from_matrix_rep, unramified_test
from pseudodet.errors import NotARepresentation, NotAUnit, NotFree, NotOrdinary
from pseudodet.groupring import GroupModel
from pseudodet.ordinary import (
    OrdinaryWitness,
    alpha_ramification_identity,
    check_ordinary,
    d_inertia_vanishing,
    doubling_ring,
    frobenius_identification,
    inertia_character,
    is_free_rank_two,
    matrix_ordinarity_oracle,
    prop_key_certify,
)

F7 = ChainAlgebra.zmod(7)
PSI, ALPHA, DET = 2, 5, 3  # psi has order 3 mod 7; weight 7 is 1 mod 6


def borel_model(alpha_top_left=False):
    """rho(h) = [[psi, 1], [0, 1]], rho(phi) = [[d/alpha, 1], [0, alpha]] over F7.

    With ``alpha_top_left`` the roles of the two roots are swapped in rho(phi).
    """
    a = ALPHA
    b = DET * pow(a, -1, 7) % 7
    phi = [[a, 1], [0, b]] if alpha_top_left else [[b, 1], [0, a]]
    G, mats, (h, f) = matrix_group(F7, [[[PSI, 1], [0, 1]], phi])
    G = G.with_marking(inertia_gens=[h], frobenius=f)
    P = from_matrix_rep(G, F7, mats)
    psi = inertia_character(P)
    return G, mats, P, psi


def test_unramified_witness_is_ordinary():
    F4 = finite_field_4()
    G, r, s, mats, P = s3_standard(ChainAlgebra.zmod(2))
    G = G.with_marking(inertia_gens=[], frobenius=r)
    P = base_change(DeterminantPair(G, P.algebra, P.T_values, P.D_values), AlgebraHom.structure_map(P.algebra, F4))
    for alpha in [F4.gen(1), F4.gen(1) + 1]:
        w = OrdinaryWitness(P, alpha, 1, inertia_character(P))
        assert check_ordinary(w) == []
        assert w.other_root() * alpha == P.D(r)


def test_upper_triangular_model_is_ordinary():
    G, mats, P, psi = borel_model()
    w = OrdinaryWitness(P, F7(ALPHA), 7, psi)
    assert check_ordinary(w) == []
    assert matrix_ordinarity_oracle(G, F7, mats, psi, F7(ALPHA))


def test_wrong_root_violates_condition_three():
    G, mats, P, psi = borel_model(alpha_top_left=True)
    w = OrdinaryWitness(P, F7(ALPHA), 7, psi)
    kinds = {v.kind.split(":")[0] for v in check_ordinary(w)}
    assert "condition (3)" in kinds and "condition (2)" not in kinds
    assert not matrix_ordinarity_oracle(G, F7, mats, psi, F7(ALPHA))


def test_oracle_implies_check_ordinary():
    """Every root alpha of rho(phi) either passes both or the oracle rejects it."""
    for swap in (False, True):
        G, mats, P, psi = borel_model(swap)
        for a in range(1, 7):
            alpha = F7(a)
            if not P.charpoly(G.frobenius)(alpha).is_zero():
                continue
            if matrix_ordinarity_oracle(G, F7, mats, psi, alpha):
                assert check_ordinary(OrdinaryWitness(P, alpha, 7, psi)) == []


def test_oracle_with_trivial_inertia_and_diagonal_frobenius():
    G, mats, (f,) = matrix_group(F7, [[[3, 0], [0, ALPHA]]])
    G = G.with_marking(inertia_gens=[], frobenius=f)
    P = from_matrix_rep(G, F7, mats)
    assert matrix_ordinarity_oracle(G, F7, mats, inertia_character(P), F7(ALPHA))


def test_oracle_rejects_non_representations():
    G, mats, P, psi = borel_model()
    broken = dict(mats)
    broken[G.frobenius] = mats[0]
    with pytest.raises(NotARepresentation):
        matrix_ordinarity_oracle(G, F7, broken, psi, F7(ALPHA))


def test_condition_two_and_unit_alpha():
    G, mats, P, psi = borel_model()
    kinds = [v.kind for v in check_ordinary(OrdinaryWitness(P, F7(1), 7, psi))]
    assert any(k.startswith("condition (2)") for k in kinds)
    assert "alpha is not a unit" in [v.kind for v in check_ordinary(OrdinaryWitness(P, F7(0), 7, psi))]


def test_weight_must_be_one_mod_p_minus_one():
    G, mats, P, psi = borel_model()
    with pytest.raises(ValueError):
        OrdinaryWitness(P, F7(ALPHA), 2, psi)


def test_d_inertia_vanishing():
    G, mats, P, psi = borel_model()
    assert d_inertia_vanishing(OrdinaryWitness(P, F7(ALPHA), 7, psi)) == []
    h = G.inertia_gens[0]
    D = list(P.D_values)
    D[h] = (P.D(h) + 1).coords
    bad = DeterminantPair(G, F7, P.T_values, tuple(D))
    w = OrdinaryWitness(bad, F7(ALPHA), 7, psi)
    assert d_inertia_vanishing(w) == [(h, F7(1))]
    assert any(v.kind == "condition (1): D(h) != psi(h)" for v in check_ordinary(w))


def test_alpha_ramification_identity_everywhere():
    G, mats, P, psi = borel_model()
    w = OrdinaryWitness(P, F7(ALPHA), 7, psi)
    for s in G.elements():
        for h in w.inertia():
            lhs, rhs = alpha_ramification_identity(w, s, h)
            assert lhs == rhs
    h = G.inertia_gens[0]
    lhs, _ = alpha_ramification_identity(w, 0, h)
    assert lhs == F7(ALPHA) * (1 - psi(h))


def test_prop_key_on_trivial_group_after_doubling():
    F2 = ChainAlgebra.zmod(2)
    G = GroupModel(((0,),))
    P = DeterminantPair.trivial(G, F2)
    S, U, incl = doubling_ring(F2, P.T(0), P.D(0))
    w = OrdinaryWitness(base_change(P, incl), U, 1, inertia_character(base_change(P, incl)))
    cert = prop_key_certify(w, [S.one()])
    assert cert.verdict == "Unramified" and cert.annihilator_basis.is_zero()


def test_prop_key_rejects_non_ordinary():
    G, mats, P, psi = borel_model()
    with pytest.raises(NotOrdinary):
        prop_key_certify(OrdinaryWitness(P, F7(1), 7, psi))


def test_prop_key_on_ramified_model_is_undetermined():
    G, mats, P, psi = borel_model()
    cert = prop_key_certify(OrdinaryWitness(P, F7(ALPHA), 7, psi))
    assert cert.verdict == "Undetermined"
    assert cert.annihilator_basis.rows == [[1]]
    assert not cert.direct_check
    assert not unramified_test(P)


def test_doubling_ring_examples():
    F2 = ChainAlgebra.zmod(2)
    S, U, incl = doubling_ring(F2, F2(1), F2(1))
    assert U * U * U == 1 and U != 1 and is_free_rank_two(S, U, incl)
    Z9 = ChainAlgebra.zmod(3, 2)
    S, U, incl = doubling_ring(Z9, Z9(2), Z9(1))
    assert ((U - 1) * (U - 1)).is_zero() and is_free_rank_two(S, U, incl) and not S.verify()
    F3 = ChainAlgebra.zmod(3)
    S, U, incl = doubling_ring(F3, F3(0), F3(-1))
    assert U * U == 1 and is_free_rank_two(S, U, incl)
    with pytest.raises(NotAUnit):
        doubling_ring(Z9, Z9(1), Z9(3))


def test_doubling_over_a_non_field_is_free():
    A = ChainAlgebra.polynomial_quotient(2, 2, [0, 0, 1], "e")
    S, U, incl = doubling_ring(A, A.gen(1), A(1) + A.gen(1))
    assert S.rank == 4 and is_free_rank_two(S, U, incl) and not S.verify()


def test_frobenius_identification():
    F2 = ChainAlgebra.zmod(2)
    S, U, incl = doubling_ring(F2, F2(1), F2(1))
    assert frobenius_identification(S, U, incl, F2(1), F2(1), F2(1), F2(1)).ok
    bad = frobenius_identification(S, U, incl, F2(1), F2(0), F2(1), F2(1))
    assert not bad.ok and bad.mismatches == ["D(phi) != <p>"] and not bad.satisfies_galois_quadratic
    with pytest.raises(NotFree):
        frobenius_identification(S, U, AlgebraHom.identity(S), F2(1), F2(1), F2(1), F2(1))
