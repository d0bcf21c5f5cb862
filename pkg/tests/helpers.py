"""Shared constructions for the tests."""

from contextlib import contextmanager

from pseudodet.chainring import ChainAlgebra
from pseudodet.determinant import as_matrix, from_matrix_rep, matrices_from_generators
from pseudodet.groupring import group_from_permutations


def s3():
    """S3 on {0,1,2}; returns (group, r, s) with r a 3-cycle and s a transposition."""
    G = group_from_permutations([(1, 2, 0), (1, 0, 2)])
    r = G.index_of_perm((1, 2, 0))
    s = G.index_of_perm((1, 0, 2))
    return G, r, s


def s3_standard(A: ChainAlgebra):
    """Standard representation r -> [[0,-1],[1,-1]], s -> [[0,1],[1,0]]."""
    G, r, s = s3()
    mats = matrices_from_generators(G, A, {r: as_matrix(A, [[0, -1], [1, -1]]), s: as_matrix(A, [[0, 1], [1, 0]])})
    return G, r, s, mats, from_matrix_rep(G, A, mats)


def cyclic_group(n):
    return group_from_permutations([tuple((i + 1) % n for i in range(n))])


def matrix_group(A: ChainAlgebra, gens):
    """The finite group generated by 2x2 matrices, with its tautological representation.

    Returns (GroupModel, {index: matrix}, [index of each generator]).
    """
    from pseudodet.determinant import mat_identity, mat_mul
    from pseudodet.groupring import GroupModel

    gens = [as_matrix(A, g) for g in gens]
    one = mat_identity(A)
    elements, index = [one], {one: 0}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(A, x, g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    table = tuple(tuple(index[mat_mul(A, a, b)] for b in elements) for a in elements)
    return GroupModel(table), dict(enumerate(elements)), [index[g] for g in gens]


# (criterion number, line) pairs printed in the terminal summary
ACCEPTANCE_LINES: list[tuple[int, str]] = []


@contextmanager
def criterion(number: int, title: str):
    """Record one PASS/FAIL line for an acceptance criterion.

    The body fills the yielded dict's "detail" entry; any exception marks the
    criterion as failed and propagates.
    """
    info = {"detail": ""}
    try:
        yield info
    except BaseException as exc:
        ACCEPTANCE_LINES.append((number, f"FAIL  {number:>2}. {title}: {type(exc).__name__}: {exc}".splitlines()[0]))
        raise
    ACCEPTANCE_LINES.append((number, f"PASS  {number:>2}. {title}: {info['detail']}"))
