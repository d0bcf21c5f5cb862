"""Every group of order at most 24, up to isomorphism, as multiplication tables.

Candidates come from four constructions (abelian groups, metacyclic
presentations, direct products and split extensions N x| C_k); duplicates are
removed with invariants and an explicit isomorphism search.  The resulting
counts per order are checked against the known enumeration.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from functools import lru_cache

from .groupring import GroupModel

Table = tuple[tuple[int, ...], ...]

# number of isomorphism types of groups of order n, n = 1..24
KNOWN_COUNTS = (1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15)
MAX_ORDER = len(KNOWN_COUNTS)


def _normalize(elements: list, mul) -> Table:
    """Table of ``mul`` on ``elements`` (identity first)."""
    index = {e: i for i, e in enumerate(elements)}
    return tuple(tuple(index[mul(a, b)] for b in elements) for a in elements)


def cyclic(n: int) -> Table:
    return tuple(tuple((a + b) % n for b in range(n)) for a in range(n))


def direct_product(A: Table, B: Table) -> Table:
    nb = len(B)
    els = [(a, b) for a in range(len(A)) for b in range(nb)]
    return _normalize(els, lambda x, y: (A[x[0]][y[0]], B[x[1]][y[1]]))


def metacyclic(M: int, K: int, S: int, R: int) -> Table | None:
    """<a, b | a^M, b^K = a^S, b a b^-1 = a^R>, or None if the data are inconsistent."""
    if pow(R, K, M) != 1 % M or (R * S - S) % M or math.gcd(R, M) != 1:
        return None
    els = [(i, j) for j in range(K) for i in range(M)]

    def mul(x, y):
        i, j = x
        k, ell = y
        e = i + k * pow(R, j, M)
        jj = j + ell
        if jj >= K:
            jj -= K
            e += S
        return (e % M, jj)

    T = _normalize(els, mul)
    return T if _is_associative(T) else None


def _is_associative(T: Table) -> bool:
    n = len(T)
    return all(T[T[a][b]][c] == T[a][T[b][c]] for a in range(n) for b in range(n) for c in range(n))


def _element_order(T: Table, g: int) -> int:
    k, x = 1, g
    while x:
        x = T[x][g]
        k += 1
    return k


def _generated(T: Table, gens) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = T[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generating_set(T: Table) -> list[int]:
    """A small generating set, chosen greedily by decreasing element order."""
    n = len(T)
    order = sorted(range(1, n), key=lambda g: (-_element_order(T, g), g))
    gens: list[int] = []
    span = {0}
    for g in order:
        if len(span) == n:
            break
        if g not in span:
            gens.append(g)
            span = _generated(T, gens)
    return gens


def _words(T: Table, gens: list[int]) -> list[tuple[int, int, int]]:
    """BFS spanning tree: (element, parent, generator index)."""
    n = len(T)
    seen = {0}
    tree = []
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for k, g in enumerate(gens):
                y = T[x][g]
                if y not in seen:
                    seen.add(y)
                    tree.append((y, x, k))
                    nxt.append(y)
        frontier = nxt
    if len(seen) != n:
        raise ValueError("not a generating set")
    return tree


def _extend_map(A: Table, B: Table, gens: list[int], images: tuple[int, ...], tree) -> list[int] | None:
    """The homomorphism A -> B sending gens to images, or None."""
    phi = [-1] * len(A)
    phi[0] = 0
    for y, x, k in tree:
        phi[y] = B[phi[x]][images[k]]
    for x in range(len(A)):
        for k, g in enumerate(gens):
            if phi[A[x][g]] != B[phi[x]][images[k]]:
                return None
    return phi


def automorphisms(T: Table) -> list[list[int]]:
    gens = generating_set(T)
    tree = _words(T, gens)
    n = len(T)
    orders = [_element_order(T, g) for g in range(n)]
    choices = [[h for h in range(n) if orders[h] == orders[g]] for g in gens]
    out = []
    for images in itertools.product(*choices):
        phi = _extend_map(T, T, gens, images, tree)
        if phi is not None and len(set(phi)) == n:
            out.append(phi)
    return out


def semidirect_cyclic(N: Table, phi: list[int], k: int) -> Table:
    """N x| C_k where the generator of C_k acts by phi (phi^k = 1)."""
    n = len(N)
    powers = [list(range(n))]
    for _ in range(k - 1):
        prev = powers[-1]
        powers.append([phi[x] for x in prev])
    els = [(a, i) for i in range(k) for a in range(n)]

    def mul(x, y):
        return (N[x[0]][powers[x[1]][y[0]]], (x[1] + y[1]) % k)

    return _normalize(els, mul)


def invariants(T: Table) -> tuple:
    n = len(T)
    orders = Counter(_element_order(T, g) for g in range(n))
    center = [z for z in range(n) if all(T[z][g] == T[g][z] for g in range(n))]
    comms = {T[T[a][b]][_inverse(T, T[b][a])] for a in range(n) for b in range(n)}
    derived = _generated(T, comms)
    classes = _class_count(T)
    sq = Counter(T[g][g] for g in range(n))
    return (n, tuple(sorted(orders.items())), len(center), len(derived), classes, tuple(sorted(sq.values())))


def _inverse(T: Table, g: int) -> int:
    return T[g].index(0)


def _class_count(T: Table) -> int:
    n = len(T)
    seen, count = set(), 0
    inv = [_inverse(T, g) for g in range(n)]
    for g in range(n):
        if g in seen:
            continue
        count += 1
        seen.update(T[T[x][g]][inv[x]] for x in range(n))
    return count


def is_isomorphic(A: Table, B: Table) -> bool:
    if invariants(A) != invariants(B):
        return False
    gens = generating_set(A)
    tree = _words(A, gens)
    n = len(B)
    ob = [_element_order(B, h) for h in range(n)]
    choices = [[h for h in range(n) if ob[h] == _element_order(A, g)] for g in gens]
    for images in itertools.product(*choices):
        phi = _extend_map(A, B, gens, images, tree)
        if phi is not None and len(set(phi)) == n:
            return True
    return False


def _candidates(n: int, known: dict[int, list[Table]]):
    if n == 1:
        yield "C1", cyclic(1)
        return
    yield f"C{n}", cyclic(n)
    for d in range(2, n):
        if n % d == 0 and d <= n // d:
            for i, A in enumerate(known[d]):
                for j, B in enumerate(known[n // d]):
                    yield f"({names[d][i]} x {names[n // d][j]})", direct_product(A, B)
    for M in range(1, n + 1):
        if n % M:
            continue
        K = n // M
        for R in range(M):
            for S in (d % M for d in range(1, M + 1) if M % d == 0):
                T = metacyclic(M, K, S, R)
                if T is not None:
                    yield f"<a^{M}, b^{K}=a^{S}, a^b=a^{R}>", T
    for k in range(2, n + 1):
        if n % k:
            continue
        for i, N in enumerate(known[n // k]):
            for phi in automorphisms(N):
                # phi^k = identity
                x = list(range(len(N)))
                for _ in range(k):
                    x = [phi[y] for y in x]
                if x == list(range(len(N))):
                    yield f"{names[n // k][i]} x| C{k}", semidirect_cyclic(N, phi, k)


names: dict[int, list[str]] = {}


@lru_cache(maxsize=1)
def catalog() -> dict[int, list[tuple[str, Table]]]:
    """Isomorphism-type representatives for every order up to 24."""
    known: dict[int, list[Table]] = {}
    out: dict[int, list[tuple[str, Table]]] = {}
    for n in range(1, MAX_ORDER + 1):
        reps: list[tuple[str, Table, tuple]] = []
        target = KNOWN_COUNTS[n - 1]
        names[n] = []
        for name, T in _candidates(n, known):
            inv = invariants(T)
            if any(inv == i2 and is_isomorphic(T, T2) for _, T2, i2 in reps):
                continue
            reps.append((name, T, inv))
            names[n].append(name)
        if len(reps) != target:
            raise RuntimeError(f"order {n}: found {len(reps)} groups, expected {target}")
        known[n] = [T for _, T, _ in reps]
        out[n] = [(name, T) for name, T, _ in reps]
    return out


def all_groups(max_order: int = MAX_ORDER) -> list[tuple[str, GroupModel]]:
    cat = catalog()
    return [(name, GroupModel(T)) for n in range(1, max_order + 1) for name, T in cat[n]]
