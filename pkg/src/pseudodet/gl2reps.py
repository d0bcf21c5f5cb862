"""Enumerating homomorphisms from a finite group into GL2 of a small finite ring.

The ring is given by addition and multiplication tables on the codes
0..q-1, so Z/n and F4 are handled by the same code.  Homomorphisms are
enumerated by backtracking over generator images (each image must have order
dividing the generator's order).  Each image is taken up to conjugation by
the centralizer of the images chosen before it, so every homomorphism is
found exactly once up to conjugation by GL2, which leaves (T, D) unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .chainring import AlgebraElement, ChainAlgebra, finite_field_4
from .determinant import Matrix2, as_matrix
from .groupring import GroupModel

Code = tuple[int, int, int, int]


@dataclass(frozen=True)
class SmallRing:
    """A finite commutative ring on codes 0..q-1, with a map into a ChainAlgebra."""

    name: str
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    algebra: ChainAlgebra
    elements: tuple[AlgebraElement, ...]

    @property
    def size(self) -> int:
        return len(self.add)

    @cached_property
    def units(self) -> list[int]:
        return [u for u in range(self.size) if 1 in self.mul[u]]

    @classmethod
    def zmod(cls, p: int, m: int = 1) -> SmallRing:
        n = p**m
        A = ChainAlgebra.zmod(p, m)
        add = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        mul = tuple(tuple(a * b % n for b in range(n)) for a in range(n))
        return cls(f"Z/{n}", add, mul, A, tuple(A(a) for a in range(n)))

    @classmethod
    def f4(cls) -> SmallRing:
        F = finite_field_4()
        els = tuple(F((c & 1, c >> 1)) for c in range(4))
        code = {e.coords: c for c, e in enumerate(els)}
        add = tuple(tuple(code[(x + y).coords] for y in els) for x in els)
        mul = tuple(tuple(code[(x * y).coords] for y in els) for x in els)
        return cls("F4", add, mul, F, els)


class GL2:
    """GL2 of a SmallRing with matrices encoded as 4-tuples (a, b, c, d)."""

    def __init__(self, ring: SmallRing):
        self.ring = ring
        R = ring.size
        add, mul = ring.add, ring.mul
        units = set(ring.units)
        self.elements: list[Code] = []
        for a in range(R):
            for b in range(R):
                for c in range(R):
                    for d in range(R):
                        det = add[mul[a][d]][self._neg(mul[b][c])]
                        if det in units:
                            self.elements.append((a, b, c, d))
        self.identity: Code = (1, 0, 0, 1)
        self._order: dict[Code, int] = {}
        self._centralizers: dict[tuple[Code, ...], tuple[list[Code], list[Code]]] = {(): (self.elements, self.generators)}
        self._orbits: dict[tuple[tuple[Code, ...], int], list[Code]] = {}

    def _neg(self, x: int) -> int:
        return self.ring.add[x].index(0)

    def mul(self, x: Code, y: Code) -> Code:
        add, mul = self.ring.add, self.ring.mul
        a, b, c, d = x
        e, f, g, h = y
        return (
            add[mul[a][e]][mul[b][g]],
            add[mul[a][f]][mul[b][h]],
            add[mul[c][e]][mul[d][g]],
            add[mul[c][f]][mul[d][h]],
        )

    def order(self, x: Code) -> int:
        k = self._order.get(x)
        if k is None:
            k, y = 1, x
            while y != self.identity:
                y = self.mul(y, x)
                k += 1
            self._order[x] = k
        return k

    def inverse(self, x: Code) -> Code:
        y = x
        for _ in range(self.order(x) - 2):
            y = self.mul(y, x)
        return y if self.order(x) > 1 else x

    @cached_property
    def generators(self) -> list[Code]:
        """Elementary matrices and diag(u, 1); these generate GL2 of a local ring."""
        R = self.ring.size
        gens = [(1, a, 0, 1) for a in range(1, R)] + [(1, 0, a, 1) for a in range(1, R)]
        gens += [(u, 0, 0, 1) for u in self.ring.units if u != 1]
        return gens

    def span(self, gens: list[Code]) -> set[Code]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for y in frontier:
                for s in gens:
                    z = self.mul(y, s)
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        return seen

    def subgroup_generators(self, elements: list[Code]) -> list[Code]:
        """A generating set for the subgroup consisting of ``elements``."""
        gens: list[Code] = []
        span = {self.identity}
        for x in sorted(elements, key=lambda e: -self.order(e)):
            if len(span) == len(elements):
                break
            if x not in span:
                gens.append(x)
                span = self.span(gens)
        return gens

    def centralizer(self, within: list[Code], x: Code) -> list[Code]:
        return [c for c in within if self.mul(c, x) == self.mul(x, c)]

    def orbit_representatives(self, candidates: list[Code], acting: list[Code]) -> list[Code]:
        """One element from each orbit of conjugation by <acting> on ``candidates``.

        ``candidates`` must be stable under that conjugation.
        """
        pool = set(candidates)
        seen: set[Code] = set()
        reps = []
        invs = [(s, self.inverse(s)) for s in acting]
        for x in candidates:
            if x in seen:
                continue
            reps.append(x)
            seen.add(x)
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for s, si in invs:
                        z = self.mul(self.mul(s, y), si)
                        if z not in seen:
                            seen.add(z)
                            nxt.append(z)
                frontier = nxt
        assert seen <= pool
        return reps

    def centralizer_data(self, images: tuple[Code, ...]) -> tuple[list[Code], list[Code]]:
        """Elements and generators of the common centralizer of ``images`` (memoized)."""
        data = self._centralizers.get(images)
        if data is None:
            within, _ = self.centralizer_data(images[:-1])
            cent = self.centralizer(within, images[-1])
            data = (cent, self.subgroup_generators(cent))
            self._centralizers[images] = data
        return data

    def candidates(self, images: tuple[Code, ...], divides: int) -> list[Code]:
        """Elements of order dividing ``divides`` up to conjugation by the centralizer of ``images``."""
        key = (images, divides)
        reps = self._orbits.get(key)
        if reps is None:
            pool = [x for x in self.elements if divides % self.order(x) == 0]
            reps = self.orbit_representatives(pool, self.centralizer_data(images)[1])
            self._orbits[key] = reps
        return reps

    def class_representatives(self, divides: int) -> list[Code]:
        """One element from each conjugacy class of elements of order dividing ``divides``."""
        return self.orbit_representatives([x for x in self.elements if divides % self.order(x) == 0], self.generators)

    def to_matrix(self, x: Code) -> Matrix2:
        els = self.ring.elements
        return as_matrix(self.ring.algebra, [[els[x[0]], els[x[1]]], [els[x[2]], els[x[3]]]])


def _extend(group: GroupModel, gl: GL2, images: dict[int, Code], gens: list[int]) -> dict[int, Code] | None:
    """The homomorphism on <gens> with the given generator images, or None."""
    phi = {0: gl.identity}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.table[x][g]
                val = gl.mul(phi[x], images[g])
                old = phi.get(y)
                if old is None:
                    phi[y] = val
                    nxt.append(y)
                elif old != val:
                    return None
        frontier = nxt
    return phi


def homomorphisms(group: GroupModel, gl: GL2, gens: list[int] | None = None) -> Iterator[dict[int, Code]]:
    """Every homomorphism group -> GL2 up to conjugation, as a map on generators.

    Each generator image runs over orbit representatives for conjugation by
    the centralizer of the images already chosen, so no two results are
    simultaneously conjugate.
    """
    gens = list(group.generators) if gens is None else list(gens)
    if not gens:
        yield {}
        return
    orders = [group.element_order(g) for g in gens]

    def search(i: int, images: dict[int, Code]) -> Iterator[dict[int, Code]]:
        if i == len(gens):
            yield dict(images)
            return
        for x in gl.candidates(tuple(images.values()), orders[i]):
            images[gens[i]] = x
            if _extend(group, gl, images, gens[: i + 1]) is not None:
                yield from search(i + 1, images)
            del images[gens[i]]

    yield from search(0, {})


def gl2_matrices(group: GroupModel, gl: GL2, images: dict[int, Code]) -> dict[int, Matrix2]:
    phi = _extend(group, gl, images, list(images)) if images else {0: gl.identity}
    if phi is None or len(phi) != group.order:
        raise ValueError("images do not define a homomorphism on the whole group")
    return {g: gl.to_matrix(x) for g, x in phi.items()}
