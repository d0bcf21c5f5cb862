"""Finite group models with marked inertia and Frobenius, and group rings.

Group elements are integer indices into a multiplication table; index 0 is
always the identity.  Permutations are tuples of images of ``0..n-1``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .chainring import AlgebraElement, ChainAlgebra
from .errors import GroupTooLarge, InvalidGroup

Perm = tuple[int, ...]

DEFAULT_GROUP_CAP = 10080


def _compose(a: Perm, b: Perm) -> Perm:
    """Product ``a*b`` acting on the left: (a*b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def parse_cycles(cycles: Sequence[Sequence[int]], degree: int, one_based: bool = True) -> Perm:
    """Permutation of ``degree`` points from cycle notation."""
    img = list(range(degree))
    shift = 1 if one_based else 0
    for cyc in cycles:
        pts = [c - shift for c in cyc]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    if sorted(img) != list(range(degree)):
        raise InvalidGroup("cycles do not define a permutation")
    return tuple(img)


@dataclass(frozen=True, eq=False)
class GroupModel:
    """A finite group given by its multiplication table, with marked data.

    ``inertia_gens`` generate the inertia subgroup, ``frobenius`` is the marked
    Frobenius element and ``decomposition_gens`` (optional) generate the
    decomposition group.
    """

    table: tuple[tuple[int, ...], ...]
    inertia_gens: tuple[int, ...] = ()
    frobenius: int = 0
    decomposition_gens: tuple[int, ...] | None = None
    labels: Mapping[str, int] = field(default_factory=dict)
    perms: tuple[Perm, ...] | None = None
    perm_gens: tuple[Perm, ...] | None = None
    inverse: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise InvalidGroup("multiplication table is not square")
        inv = [-1] * n
        for g in range(n):
            for h in range(n):
                if self.table[g][h] == 0:
                    inv[g] = h
                    break
        object.__setattr__(self, "inverse", tuple(inv))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def prod(self, *gs: int) -> int:
        out = 0
        for g in gs:
            out = self.table[out][g]
        return out

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverse[g], -k
        out = 0
        for _ in range(k):
            out = self.table[out][g]
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[x][g]
            k += 1
        return k

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by decreasing element order."""
        gens: list[int] = []
        span = {0}
        for g in sorted(range(1, self.order), key=lambda g: (-self.element_order(g), g)):
            if len(span) == self.order:
                break
            if g not in span:
                gens.append(g)
                span = set(subgroup_elements(self, gens))
        return tuple(gens)

    # -- validation -------------------------------------------------------

    def verify(self, rng: random.Random | None = None, exhaustive_limit: int = 24) -> list[str]:
        n = self.order
        t = self.table
        problems = []
        if any(not 0 <= x < n for row in t for x in row):
            return ["table entries out of range"]
        for g in range(n):
            if t[0][g] != g or t[g][0] != g:
                problems.append(f"index 0 is not an identity for element {g}")
                break
        for g in range(n):
            if sorted(t[g]) != list(range(n)):
                problems.append(f"row {g} is not a permutation (no inverses)")
                break
            if self.inverse[g] < 0 or t[self.inverse[g]][g] != 0:
                problems.append(f"element {g} has no two-sided inverse")
                break
        if problems:
            return problems
        if n <= exhaustive_limit:
            triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
        else:
            rng = rng or random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(4000))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                problems.append(f"associativity fails on ({a}, {b}, {c})")
                break
        for name, idxs in (("inertia_gens", self.inertia_gens), ("decomposition_gens", self.decomposition_gens or ())):
            if any(not 0 <= i < n for i in idxs):
                problems.append(f"{name} index out of range")
        if not 0 <= self.frobenius < n:
            problems.append("frobenius index out of range")
        if problems:
            return problems
        if self.decomposition_gens is not None:
            dec = set(subgroup_elements(self, self.decomposition_gens))
            inertia = subgroup_elements(self, self.inertia_gens)
            if not set(inertia) <= dec:
                problems.append("inertia subgroup is not contained in the decomposition group")
            if self.frobenius not in dec:
                problems.append("frobenius does not lie in the decomposition group")
        return problems

    def check(self) -> GroupModel:
        problems = self.verify()
        if problems:
            raise InvalidGroup(problems[0])
        return self

    # -- derived subgroups --------------------------------------------------

    def inertia(self) -> list[int]:
        return subgroup_elements(self, self.inertia_gens)

    def decomposition(self) -> list[int] | None:
        if self.decomposition_gens is None:
            return None
        return subgroup_elements(self, self.decomposition_gens)

    def with_marking(
        self,
        inertia_gens: Iterable[int] = (),
        frobenius: int = 0,
        decomposition_gens: Iterable[int] | None = None,
    ) -> GroupModel:
        return GroupModel(
            self.table,
            tuple(inertia_gens),
            frobenius,
            None if decomposition_gens is None else tuple(decomposition_gens),
            dict(self.labels),
            self.perms,
            self.perm_gens,
        )

    def index_of_perm(self, perm: Perm) -> int:
        if self.perms is None:
            raise ValueError("group was not built from permutations")
        return self.perms.index(tuple(perm))

    def conjugacy_classes(self) -> list[list[int]]:
        seen: set[int] = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            cls = sorted({self.prod(x, g, self.inverse[x]) for x in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        if self.perm_gens is None:
            raise ValueError("only permutation-generated groups serialize")
        obj: dict = {
            "perm_gens": [list(g) for g in self.perm_gens],
            "degree": len(self.perms[0]) if self.perms else 1,
            "inertia_gens": list(self.inertia_gens),
            "frobenius": self.frobenius,
        }
        if self.decomposition_gens is not None:
            obj["decomposition_gens"] = list(self.decomposition_gens)
        if self.labels:
            obj["labels"] = dict(self.labels)
        return obj

    @classmethod
    def from_json(cls, obj: Mapping) -> GroupModel:
        gens = obj.get("perm_gens", [])
        base = group_from_permutations(gens, degree=obj.get("degree"))
        dec = obj.get("decomposition_gens")
        return GroupModel(
            base.table,
            tuple(obj.get("inertia_gens", ())),
            int(obj.get("frobenius", 0)),
            None if dec is None else tuple(dec),
            dict(obj.get("labels", {})),
            base.perms,
            base.perm_gens,
        )


def group_from_permutations(
    generators: Sequence[Sequence[int]],
    degree: int | None = None,
    cap: int = DEFAULT_GROUP_CAP,
) -> GroupModel:
    """Enumerate the group generated by ``generators`` (images of 0..n-1).

    Elements are numbered in breadth-first order from the identity.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise InvalidGroup("generator is not a permutation of the common point set")
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _compose(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise GroupTooLarge(f"group order exceeds the cap {cap}")
                queue.append(y)
    table = tuple(tuple(index[_compose(a, b)] for b in elements) for a in elements)
    return GroupModel(table, perms=tuple(elements), perm_gens=tuple(gens))


def subgroup_elements(group: GroupModel, generators: Iterable[int]) -> list[int]:
    """Sorted element indices of the subgroup generated by ``generators``."""
    gens = list(generators)
    found = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = group.table[x][g]
            if y not in found:
                found.add(y)
                queue.append(y)
    return sorted(found)


def normal_closure(group: GroupModel, generators: Iterable[int]) -> list[int]:
    conj = {group.prod(x, g, group.inv(x)) for g in generators for x in group.elements()}
    return subgroup_elements(group, conj)


def is_normal(group: GroupModel, subgroup: Iterable[int], ambient: Iterable[int] | None = None) -> bool:
    sub = set(subgroup)
    amb = group.elements() if ambient is None else list(ambient)
    return all(group.prod(x, h, group.inv(x)) in sub for x in amb for h in sub)


@dataclass(frozen=True)
class CharacterData:
    """A multiplicative map from a subgroup to the units of an algebra."""

    group: GroupModel
    domain: tuple[int, ...]
    values: Mapping[int, AlgebraElement]

    def __call__(self, g: int) -> AlgebraElement:
        return self.values[g]

    @classmethod
    def trivial(cls, group: GroupModel, domain: Iterable[int], algebra: ChainAlgebra) -> CharacterData:
        dom = tuple(sorted(domain))
        return cls(group, dom, {g: algebra.one() for g in dom})

    def verify(self) -> list[str]:
        problems = []
        dom = set(self.domain)
        if 0 not in dom or not (self.values[0] == 1):
            problems.append("character is not 1 at the identity")
        for g in self.domain:
            if not self.values[g].is_unit():
                problems.append(f"value at {g} is not a unit")
            for h in self.domain:
                gh = self.group.mul(g, h)
                if gh not in dom:
                    problems.append("domain is not closed under multiplication")
                    return problems
                if self.values[gh] != self.values[g] * self.values[h]:
                    problems.append(f"not multiplicative at ({g}, {h})")
        return problems


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    """Finite formal sum ``sum a_g [g]`` with coefficients in a ChainAlgebra."""

    group: GroupModel
    algebra: ChainAlgebra
    support: Mapping[int, tuple[int, ...]]

    @classmethod
    def from_terms(
        cls, group: GroupModel, algebra: ChainAlgebra, terms: Iterable[tuple[int, AlgebraElement | int]]
    ) -> GroupRingElement:
        acc: dict[int, tuple[int, ...]] = {}
        for g, a in terms:
            v = algebra(a).coords
            acc[g] = algebra.add(acc[g], v) if g in acc else v
        return cls(group, algebra, {g: v for g, v in acc.items() if any(v)})

    @classmethod
    def basis(cls, group: GroupModel, algebra: ChainAlgebra, g: int) -> GroupRingElement:
        return cls.from_terms(group, algebra, [(g, 1)])

    @classmethod
    def zero(cls, group: GroupModel, algebra: ChainAlgebra) -> GroupRingElement:
        return cls(group, algebra, {})

    def coefficient(self, g: int) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.support.get(g, self.algebra.zero_vec()))

    def terms(self) -> list[tuple[int, AlgebraElement]]:
        return [(g, AlgebraElement(self.algebra, v)) for g, v in sorted(self.support.items())]

    def _check(self, other: GroupRingElement) -> None:
        if other.group is not self.group and other.group.table != self.group.table:
            raise ValueError("group ring elements over different groups")
        if other.algebra != self.algebra:
            raise ValueError("group ring elements over different algebras")

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        self._check(other)
        return GroupRingElement.from_terms(self.group, self.algebra, self.terms() + other.terms())

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(self.group, self.algebra, {g: self.algebra.neg(v) for g, v in self.support.items()})

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return self + (-other)

    def scale(self, a: AlgebraElement | int) -> GroupRingElement:
        av = self.algebra(a).coords
        return GroupRingElement.from_terms(
            self.group, self.algebra, [(g, AlgebraElement(self.algebra, self.algebra.mul(av, v))) for g, v in self.support.items()]
        )

    def __mul__(self, other: GroupRingElement) -> GroupRingElement:
        return ring_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return dict(self.support) == dict(other.support) and self.algebra == other.algebra

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.support.items())))

    def is_zero(self) -> bool:
        return not self.support

    def __repr__(self) -> str:
        if not self.support:
            return "0"
        return " + ".join(f"({AlgebraElement(self.algebra, v)})[{g}]" for g, v in sorted(self.support.items()))


def ring_mul(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    """Convolution product in A[G]."""
    x._check(y)
    A = x.algebra
    acc: dict[int, tuple[int, ...]] = {}
    table = x.group.table
    for g, a in x.support.items():
        row = table[g]
        for h, b in y.support.items():
            gh = row[h]
            c = A.mul(a, b)
            acc[gh] = A.add(acc[gh], c) if gh in acc else c
    return GroupRingElement(x.group, A, {g: v for g, v in acc.items() if any(v)})
