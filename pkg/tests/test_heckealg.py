import pytest

from pseudodet.chainring import ChainAlgebra, finite_field_4
from pseudodet.errors import InsufficientPrecision, NonCommuting, NotProper
from pseudodet.fixtures import load_basis_fixture
from pseudodet.heckealg import (
    FormSpaceBasis,
    HeckeAlgebraModel,
    HeckeIdeal,
    algebra_generate,
    as_rmatrix,
    berkowitz,
    build_hecke_model,
    build_maximal_ideal,
    hecke_matrix,
    localize,
    parse_label,
    rmat_add,
    rmat_identity,
    rmat_mul,
    semilocal_split,
    standard_labels,
    t_p_redundancy_check,
    weight1_space,
)
from pseudodet.qexp import DirichletCharacter, QExpansion, SpaceSpec, eta_product, sturm_bound


@pytest.fixture(scope="module")
def level11():
    return load_basis_fixture("weight2-level11-mod9").space


def cusp_space(m=1, precision=200):
    A = ChainAlgebra.zmod(3, m)
    chi = DirichletCharacter.trivial(A, 11)
    g = eta_product([(1, 2), (11, 2)], precision, A).with_meta(level=11, character=chi)
    return FormSpaceBasis(SpaceSpec(2, 11, 3, m, precision, chi), (g,))


def test_parse_label():
    assert parse_label("T_5") == ("T", 5)
    assert parse_label("U_2") == ("U", 2)
    assert parse_label("<7>") == ("<>", 7)
    with pytest.raises(ValueError):
        parse_label("T5")


def test_eigenform_gives_scalar_matrices():
    S = cusp_space()
    assert hecke_matrix(S, "T_3") == [[2]]
    assert hecke_matrix(S, "T_2") == [[1]]  # a_2 = -2
    assert hecke_matrix(S, "<2>") == [[1]]


def test_truncated_basis_is_refused():
    S = cusp_space(precision=40)
    with pytest.raises(InsufficientPrecision):
        hecke_matrix(S, "T_3")


def test_charpoly_is_basis_independent(level11):
    f1, f2 = level11.forms
    other = FormSpaceBasis(level11.spec, (f1 + f2.scale(f1.algebra(4)), f2.scale(f1.algebra(2))))
    R = ChainAlgebra.zmod(3, 2)
    for ell in (2, 5, 7, 13):
        a = berkowitz(as_rmatrix(hecke_matrix(level11, f"T_{ell}"), R), R)
        b = berkowitz(as_rmatrix(hecke_matrix(other, f"T_{ell}"), R), R)
        assert a == b
    # Eisenstein eigenvalue 1 + 2 = 3 and cusp eigenvalue -2 at l = 2
    assert berkowitz(as_rmatrix(hecke_matrix(level11, "T_2"), R), R) == [R(-6), R(-1), R(1)]


def test_algebra_generate_examples():
    A = algebra_generate({"T_2": [[5]]}, 3, 2).algebra
    assert A.rank == 1
    gen = algebra_generate({"N": [[0, 1], [0, 0]]}, 2, 1)
    N = gen.images["N"]
    assert gen.algebra.rank == 2 and (N * N).is_zero() and not N.is_zero()
    assert gen.algebra.verify() == []
    with pytest.raises(NonCommuting):
        algebra_generate({"a": [[0, 1], [0, 0]], "b": [[0, 0], [1, 0]]}, 2, 1)


def test_hecke_model_level_eleven(level11):
    model = build_hecke_model(level11, standard_labels(11, 3, 20, include_p=False))
    assert model.algebra.rank == 2 and model.algebra.verify() == []
    q = 9
    mats = list(model.operators.values())
    for x in mats:
        for y in mats:
            assert [[sum(a * b for a, b in zip(r, c)) % q for c in zip(*y)] for r in x] == \
                   [[sum(a * b for a, b in zip(r, c)) % q for c in zip(*x)] for r in y]


def test_semilocal_split_single_component():
    F4 = finite_field_4()
    comps = semilocal_split([[1, 1], [0, 1]], F4(1), F4(1), F4)
    assert len(comps) == 1 and comps[0].idempotent == rmat_identity(F4, 2)


def test_semilocal_split_diagonal_over_f4():
    F4 = finite_field_4()
    w = F4.gen(1)
    zero = F4.zero()
    U = [[w, zero], [zero, w + 1]]
    a, b = semilocal_split(U, w, w + 1, F4)
    assert a.idempotent == [[F4(1), zero], [zero, zero]]
    assert b.idempotent == [[zero, zero], [zero, F4(1)]]


def check_orthogonal_idempotents(comps, R, n):
    e, f = comps[0].idempotent, comps[1].idempotent
    zero = [[R.zero()] * n for _ in range(n)]
    assert rmat_mul(e, e) == e and rmat_mul(f, f) == f
    assert rmat_mul(e, f) == zero
    assert rmat_add(e, f) == rmat_identity(R, n)


def test_semilocal_split_hensel_lifts_over_z4():
    Z4 = ChainAlgebra.zmod(2, 2)
    U = [[1, 1, 2], [0, 2, 1], [2, 0, 3]]
    comps = semilocal_split(U, 1, 0, Z4)
    check_orthogonal_idempotents(comps, Z4, 3)
    assert sorted(c.multiplicity for c in comps) == [1, 2]
    Um = as_rmatrix(U, Z4)
    for c in comps:
        assert rmat_mul(c.idempotent, Um) == rmat_mul(Um, c.idempotent)


def test_semilocal_split_on_level_eleven(level11):
    R = ChainAlgebra.zmod(3, 2)
    T2 = hecke_matrix(level11, "T_2")
    comps = semilocal_split(T2, R(3), R(-2), R, {"T_5": hecke_matrix(level11, "T_5")})
    check_orthogonal_idempotents(comps, R, 2)
    Tm = as_rmatrix(T2, R)
    for c, ev in zip(comps, (3, -2)):
        assert rmat_mul(c.idempotent, Tm) == [[x * ev for x in row] for row in c.idempotent]
        assert c.operator_images["T_5"] == rmat_mul(c.idempotent, as_rmatrix(hecke_matrix(level11, "T_5"), R))


def test_build_maximal_ideal_and_localize(level11):
    model = build_hecke_model(level11, ["T_2", "<2>"])
    # T_2 has eigenvalues 3 (Eisenstein) and -2 (cusp form); they differ mod 3
    for residue, value in [(1, 7), (0, 3)]:
        ideal = build_maximal_ideal(model, {2: (residue, 1)})
        loc = localize(model.algebra, ideal)
        assert loc.algebra.rank == 1
        assert loc(model.element("T_2")) == loc.algebra(value)
        e = loc.idempotent
        assert e * e == e
    with pytest.raises(NotProper):
        build_maximal_ideal(model, {2: (2, 1)})


def test_empty_ideal_is_proper():
    assert HeckeIdeal(ChainAlgebra.zmod(2), []).is_proper()


def monomial_space(dim, p=2, level=23, precision=60):
    A = ChainAlgebra.zmod(p)
    forms = tuple(QExpansion.monomial(A, i + 1, precision) for i in range(dim))
    return FormSpaceBasis(SpaceSpec(1, level, p, 1, precision), forms)


def test_t_p_redundancy_trivial_and_counterexample():
    S = monomial_space(1)
    ops = {"T_3": [[1]], "T_2": [[1]]}
    model = HeckeAlgebraModel(S, ops, algebra_generate(ops, 2, 1))
    assert t_p_redundancy_check(model, 2).ok
    S = monomial_space(2)
    ops = {"T_3": [[1, 0], [0, 1]], "T_2": [[0, 1], [0, 0]]}
    model = HeckeAlgebraModel(S, ops, algebra_generate(ops, 2, 1))
    res = t_p_redundancy_check(model, 2)
    assert not res.ok and res.counterexample == "T_2" and (res.rank_without, res.rank_with) == (1, 2)


def test_weight1_space_degenerate_cases():
    target = load_basis_fixture("weight2-level23-mod2").space
    A = ChainAlgebra.zmod(2)
    B = target.precision
    one = QExpansion.constant(A, 1, B)
    W = weight1_space(23, 2, 1, B, [one], target)
    assert W.dimension == target.dimension and W.same_span(target, B)
    empty = FormSpaceBasis(target.spec, ())
    assert weight1_space(23, 2, 1, B, [one], empty).dimension == 0


def test_weight1_space_level_twenty_three():
    """Aux = {Hasse, eta(q)eta(q^23)}: f is kept when f and f g are both weight-two forms."""
    target = load_basis_fixture("weight2-level23-mod2").space
    A = ChainAlgebra.zmod(2)
    B = target.precision
    g = eta_product([(1, 1), (23, 1)], B, A)
    one = QExpansion.constant(A, 1, B)
    W = weight1_space(23, 2, 1, B, [one, g], target)
    assert W.dimension == 2 and W.same_span([one, g], B)
    assert B >= sturm_bound(1, 23)
