import random

import pytest

from helpers import s3
from pseudodet.chainring import ChainAlgebra
from pseudodet.errors import GroupTooLarge, InvalidGroup
from pseudodet.groupring import (
    CharacterData,
    GroupModel,
    GroupRingElement,
    group_from_permutations,
    is_normal,
    normal_closure,
    parse_cycles,
    ring_mul,
    subgroup_elements,
)


def test_group_from_permutations_examples():
    G = group_from_permutations([parse_cycles([[1, 2]], 3), parse_cycles([[1, 2, 3]], 3)])
    assert G.order == 6 and not G.verify()
    assert group_from_permutations([]).order == 1
    C7 = group_from_permutations([parse_cycles([[1, 2, 3, 4, 5, 6, 7]], 7)])
    assert C7.order == 7 and all(C7.element_order(g) == 7 for g in range(1, 7))


def test_group_cap():
    S6 = [parse_cycles([[1, 2]], 6), parse_cycles([[1, 2, 3, 4, 5, 6]], 6)]
    assert group_from_permutations(S6).order == 720
    with pytest.raises(GroupTooLarge):
        group_from_permutations(S6, cap=719)


def test_identity_is_index_zero_and_inverses():
    G, r, s = s3()
    assert G.perms[0] == (0, 1, 2)
    for g in G.elements():
        assert G.mul(g, G.inv(g)) == 0 == G.mul(G.inv(g), g)


def test_verify_catches_non_associative_tables():
    # a Latin square with identity that is not associative (order 5 loop)
    table = (
        (0, 1, 2, 3, 4),
        (1, 0, 3, 4, 2),
        (2, 4, 0, 1, 3),
        (3, 2, 4, 0, 1),
        (4, 3, 1, 2, 0),
    )
    assert GroupModel(table).verify()
    with pytest.raises(InvalidGroup):
        GroupModel(table).check()


def test_subgroups():
    G, r, s = s3()
    assert len(subgroup_elements(G, [r])) == 3
    assert subgroup_elements(G, []) == [0]
    assert subgroup_elements(G, list(G.elements())) == list(G.elements())
    assert len(normal_closure(G, [s])) == 6
    assert is_normal(G, subgroup_elements(G, [r]))
    assert not is_normal(G, subgroup_elements(G, [s]))


def test_marking_constraints():
    G, r, s = s3()
    marked = G.with_marking(inertia_gens=[r], frobenius=s, decomposition_gens=[r, s])
    assert marked.inertia() == subgroup_elements(G, [r])
    assert not marked.verify()
    with pytest.raises(InvalidGroup):
        G.with_marking(inertia_gens=[r], frobenius=s, decomposition_gens=[s]).check()


def test_json_round_trip():
    G, r, s = s3()
    M = G.with_marking(inertia_gens=[s], frobenius=r)
    back = GroupModel.from_json(M.to_json())
    assert back.table == M.table and back.inertia_gens == M.inertia_gens and back.frobenius == M.frobenius


def test_conjugacy_classes_of_s3():
    G, r, s = s3()
    assert sorted(len(c) for c in G.conjugacy_classes()) == [1, 2, 3]


def test_character_values():
    G, r, s = s3()
    A = ChainAlgebra.zmod(3, 2)
    sign = CharacterData(G, tuple(G.elements()), {g: A(1 if G.perms[g] in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] else -1) for g in G.elements()})
    assert not sign.verify()
    assert all(sign(g) * sign(G.inv(g)) == 1 for g in G.elements())
    bad = CharacterData(G, tuple(G.elements()), {g: A(2) if g == r else sign(g) for g in G.elements()})
    assert bad.verify()


def test_ring_mul_examples():
    G, r, s = s3()
    A = ChainAlgebra.zmod(2, 2)
    e = lambda g: GroupRingElement.basis(G, A, g)
    assert ring_mul(e(r) + e(s), e(r)) == e(G.mul(r, r)) + e(G.mul(s, r))
    assert ring_mul(e(r), GroupRingElement.zero(G, A)).is_zero()
    # (h - psi)(phi - alpha) expansion
    psi, alpha = A(3), A(2)
    h, phi = s, r
    lhs = ring_mul(e(h) - e(0).scale(psi), e(phi) - e(0).scale(alpha))
    rhs = e(G.mul(h, phi)) - e(h).scale(alpha) - e(phi).scale(psi) + e(0).scale(psi * alpha)
    assert lhs == rhs


def test_ring_mul_associative_and_distributive():
    G, _, _ = s3()
    A = ChainAlgebra.zmod(3, 2)
    rng = random.Random(1)

    def rand():
        return GroupRingElement.from_terms(G, A, [(rng.randrange(6), rng.randrange(9)) for _ in range(rng.randint(0, 4))])

    for _ in range(1000):
        x, y, z = rand(), rand(), rand()
        assert ring_mul(ring_mul(x, y), z) == ring_mul(x, ring_mul(y, z))
        assert ring_mul(x, y + z) == ring_mul(x, y) + ring_mul(x, z)


def test_zero_coefficients_are_pruned():
    G, r, _ = s3()
    A = ChainAlgebra.zmod(2, 2)
    x = GroupRingElement.from_terms(G, A, [(r, 2), (r, 2)])
    assert x.is_zero() and not x.support
