"""Exact arithmetic over Z/p^m and finite Z/p^m-algebras.

A :class:`ChainAlgebra` is a free Z/p^m-module with a basis and a table of
structure constants.  All linear questions (span membership, kernels, span
equality) go through :func:`howell_form`, which returns the canonical Howell
basis of a row span over Z/p^m.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import InvalidAlgebra, NotAUnit, NotFree, QuotientNotCyclic

Vector = tuple[int, ...]


def valuation(x: int, p: int, m: int) -> int:
    """p-adic valuation of ``x`` in Z/p^m (``m`` for zero)."""
    x %= p**m
    if x == 0:
        return m
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


# ---------------------------------------------------------------------------
# Howell normal form
# ---------------------------------------------------------------------------


@dataclass
class HowellForm:
    """Canonical row-span basis over Z/p^m.

    ``rows[i]`` has its first nonzero entry at ``pivots[i]``; that entry is
    ``p**levels[i]`` and every entry above it lies in ``[0, p**levels[i])``.
    ``transform[i]`` expresses ``rows[i]`` as a combination of the input rows.
    """

    p: int
    m: int
    ncols: int
    rows: list[list[int]]
    pivots: list[int]
    levels: list[int]
    transform: list[list[int]]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def is_free(self) -> bool:
        """True when every pivot is a unit, i.e. the span is a free module."""
        return all(lv == 0 for lv in self.levels)

    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(r) for r in self.rows)

    def same_span(self, other: HowellForm) -> bool:
        return self.key() == other.key()

    def reduce(self, target: Sequence[int]) -> tuple[list[int], list[int]]:
        """Greedy reduction of ``target``; returns (remainder, coefficients)."""
        q = self.p**self.m
        t = [x % q for x in target]
        coeffs = [0] * (len(self.transform[0]) if self.transform else 0)
        for row, comb, col, lv in zip(self.rows, self.transform, self.pivots, self.levels):
            pv = self.p**lv
            if t[col] % pv:
                break
            f = t[col] // pv
            if f:
                for j in range(col, self.ncols):
                    t[j] = (t[j] - f * row[j]) % q
                for j, c in enumerate(comb):
                    coeffs[j] = (coeffs[j] + f * c) % q
        return t, coeffs

    def contains(self, target: Sequence[int]) -> bool:
        rem, _ = self.reduce(target)
        return not any(rem)

    def solve(self, target: Sequence[int]) -> list[int] | None:
        """Coefficients ``c`` over the input rows with ``c . matrix = target``."""
        rem, coeffs = self.reduce(target)
        if any(rem):
            return None
        return coeffs

    def express(self, target: Sequence[int]) -> list[int] | None:
        """Coefficients over the Howell rows themselves (not the input rows)."""
        q = self.p**self.m
        t = [x % q for x in target]
        out = []
        for row, col, lv in zip(self.rows, self.pivots, self.levels):
            pv = self.p**lv
            if t[col] % pv:
                return None
            f = t[col] // pv
            out.append(f)
            if f:
                for j in range(col, self.ncols):
                    t[j] = (t[j] - f * row[j]) % q
        return None if any(t) else out

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def howell_form(
    matrix: Sequence[Sequence[int]], p: int, m: int, ncols: int | None = None
) -> HowellForm:
    """Howell normal form of the row span of ``matrix`` over Z/p^m.

    Z/p^m is a chain ring, so each column is cleared with a pivot of minimal
    valuation.  When the pivot is ``p**v`` with ``v > 0`` the row multiplied
    by ``p**(m - v)`` vanishes in the pivot column and is fed back into the
    working set; this is what gives the Howell property, and with it
    uniqueness of the reduced form.
    """
    q = p**m
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    k = len(matrix)
    work: list[tuple[list[int], list[int]]] = []
    for i, row in enumerate(matrix):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        v = [x % q for x in row]
        if any(v):
            comb = [0] * k
            comb[i] = 1
            work.append((v, comb))

    out_rows: list[list[int]] = []
    out_comb: list[list[int]] = []
    pivots: list[int] = []
    levels: list[int] = []
    for col in range(ncols):
        best = -1
        best_v = m
        for idx, (v, _) in enumerate(work):
            if v[col]:
                val = valuation(v[col], p, m)
                if val < best_v:
                    best, best_v = idx, val
                    if val == 0:
                        break
        if best < 0:
            continue
        v, c = work.pop(best)
        pv = p**best_v
        unit = v[col] // pv
        uinv = pow(unit, -1, q)
        if uinv != 1:
            v = [x * uinv % q for x in v]
            c = [x * uinv % q for x in c]
        remaining = []
        for w, d in work:
            if w[col]:
                f = w[col] // pv
                w = [(a - f * b) % q for a, b in zip(w, v)]
                d = [(a - f * b) % q for a, b in zip(d, c)]
            if any(w):
                remaining.append((w, d))
        if best_v > 0:
            ann = p ** (m - best_v)
            w = [x * ann % q for x in v]
            if any(w):
                remaining.append((w, [x * ann % q for x in c]))
        work = remaining
        out_rows.append(v)
        out_comb.append(c)
        pivots.append(col)
        levels.append(best_v)

    for i, col in enumerate(pivots):
        pv = p ** levels[i]
        vi, ci = out_rows[i], out_comb[i]
        for j in range(i):
            f = out_rows[j][col] // pv
            if f:
                out_rows[j] = [(a - f * b) % q for a, b in zip(out_rows[j], vi)]
                out_comb[j] = [(a - f * b) % q for a, b in zip(out_comb[j], ci)]
    return HowellForm(p, m, ncols, out_rows, pivots, levels, out_comb)


def solve_in_span(
    matrix: Sequence[Sequence[int]], target: Sequence[int], p: int, m: int
) -> list[int] | None:
    """Return ``c`` with ``c . matrix = target`` over Z/p^m, or None."""
    if not matrix:
        return [] if not any(x % p**m for x in target) else None
    return howell_form(matrix, p, m).solve(target)


def left_kernel(matrix: Sequence[Sequence[int]], p: int, m: int, ncols: int | None = None) -> HowellForm:
    """Howell basis of ``{c : c . matrix = 0}``."""
    k = len(matrix)
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [int(i == j) for j in range(k)] for i, row in enumerate(matrix)]
    H = howell_form(aug, p, m, ncols + k)
    rows, piv, lev = [], [], []
    for row, col, lv in zip(H.rows, H.pivots, H.levels):
        if col >= ncols:
            rows.append(row[ncols:])
            piv.append(col - ncols)
            lev.append(lv)
    ident = [[int(i == j) for j in range(len(rows))] for i in range(len(rows))]
    return HowellForm(p, m, k, rows, piv, lev, ident)


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainAlgebra:
    """A commutative Z/p^m-algebra, free of rank ``len(basis)``."""

    p: int
    m: int
    basis: tuple[str, ...]
    table: tuple[tuple[Vector, ...], ...]
    unit: Vector
    modulus: int = field(init=False)
    _rank: int = field(init=False, repr=False, compare=False)
    _scalar: int | None = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.m < 1:
            raise InvalidAlgebra(f"bad modulus p={self.p}, m={self.m}")
        q = self.p**self.m
        object.__setattr__(self, "modulus", q)
        r = len(self.basis)
        if r < 1 or len(self.table) != r or any(len(row) != r for row in self.table):
            raise InvalidAlgebra("multiplication table has the wrong shape")
        table = tuple(tuple(tuple(x % q for x in e) for e in row) for row in self.table)
        if any(len(e) != r for row in table for e in row) or len(self.unit) != r:
            raise InvalidAlgebra("coordinate vectors have the wrong length")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "unit", tuple(x % q for x in self.unit))
        object.__setattr__(self, "_rank", r)
        # rank one: multiplication is by a fixed scalar
        object.__setattr__(self, "_scalar", table[0][0][0] if r == 1 else None)

    # -- construction -----------------------------------------------------

    @classmethod
    def zmod(cls, p: int, m: int = 1) -> ChainAlgebra:
        return cls(p, m, ("1",), (((1,),),), (1,))

    @classmethod
    def polynomial_quotient(cls, p: int, m: int, poly: Sequence[int], var: str = "x") -> ChainAlgebra:
        """(Z/p^m)[x]/(f) for monic ``f`` given by coefficients, constant first."""
        q = p**m
        d = len(poly) - 1
        if d < 1 or poly[-1] % q != 1:
            raise InvalidAlgebra("polynomial must be monic of positive degree")
        # x^k reduced, for k < 2d - 1
        powers: list[list[int]] = []
        cur = [1] + [0] * (d - 1)
        for _ in range(2 * d - 1):
            powers.append(cur)
            top = cur[-1]
            nxt = [0] + cur[:-1]
            nxt = [(a - top * b) % q for a, b in zip(nxt, poly[:-1])]
            cur = nxt
        names = tuple("1" if i == 0 else (var if i == 1 else f"{var}^{i}") for i in range(d))
        table = tuple(tuple(tuple(powers[i + j]) for j in range(d)) for i in range(d))
        return cls(p, m, names, table, tuple(powers[0]))

    @classmethod
    def from_json(cls, obj: dict) -> ChainAlgebra:
        alg = cls(
            int(obj["p"]),
            int(obj["m"]),
            tuple(obj["basis"]),
            tuple(tuple(tuple(int(x) for x in e) for e in row) for row in obj["table"]),
            tuple(int(x) for x in obj["unit"]),
        )
        if int(obj.get("rank", alg.rank)) != alg.rank:
            raise InvalidAlgebra("declared rank does not match the basis")
        return alg

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "rank": self.rank,
            "basis": list(self.basis),
            "table": [[list(e) for e in row] for row in self.table],
            "unit": list(self.unit),
        }

    # -- structural -------------------------------------------------------

    @property
    def rank(self) -> int:
        return self._rank

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, ChainAlgebra):
            return NotImplemented
        return (self.p, self.m, self.table, self.unit) == (other.p, other.m, other.table, other.unit)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.table, self.unit))

    def __repr__(self) -> str:
        return f"ChainAlgebra(Z/{self.p}^{self.m}, basis={list(self.basis)})"

    def verify(self) -> list[str]:
        """Exhaustive table check: unit, commutativity, associativity."""
        problems = []
        r = self.rank
        e = [self.basis_vector(i) for i in range(r)]
        for i in range(r):
            if self.mul(self.unit, e[i]) != e[i]:
                problems.append(f"unit does not fix basis element {self.basis[i]}")
            for j in range(i + 1, r):
                if self.table[i][j] != self.table[j][i]:
                    problems.append(f"{self.basis[i]}*{self.basis[j]} != {self.basis[j]}*{self.basis[i]}")
        for i, j, k in itertools.product(range(r), repeat=3):
            lhs = self.mul(self.table[i][j], e[k])
            rhs = self.mul(e[i], self.table[j][k])
            if lhs != rhs:
                problems.append(f"({self.basis[i]}*{self.basis[j]})*{self.basis[k]} is not associative")
        return problems

    def check(self) -> ChainAlgebra:
        problems = self.verify()
        if problems:
            raise InvalidAlgebra(problems[0])
        return self

    # -- raw vector arithmetic -------------------------------------------

    def basis_vector(self, i: int) -> Vector:
        return tuple(int(i == j) for j in range(self.rank))

    def zero_vec(self) -> Vector:
        return (0,) * self.rank

    def add(self, u: Vector, v: Vector) -> Vector:
        q = self.modulus
        if self._scalar is not None:
            return ((u[0] + v[0]) % q,)
        return tuple((a + b) % q for a, b in zip(u, v))

    def sub(self, u: Vector, v: Vector) -> Vector:
        q = self.modulus
        if self._scalar is not None:
            return ((u[0] - v[0]) % q,)
        return tuple((a - b) % q for a, b in zip(u, v))

    def neg(self, u: Vector) -> Vector:
        q = self.modulus
        return tuple(-a % q for a in u)

    def smul(self, c: int, u: Vector) -> Vector:
        q = self.modulus
        return tuple(c * a % q for a in u)

    def mul(self, u: Vector, v: Vector) -> Vector:
        q = self.modulus
        if self._scalar is not None:
            return (u[0] * v[0] * self._scalar % q,)
        r = self._rank
        out = [0] * r
        table = self.table
        for i, a in enumerate(u):
            if not a:
                continue
            row = table[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                c = a * b
                for k, x in enumerate(row[j]):
                    if x:
                        out[k] += c * x
        return tuple(x % q for x in out)

    def scalar_vec(self, n: int) -> Vector:
        return self.smul(n, self.unit)

    def mult_matrix(self, u: Vector) -> list[list[int]]:
        """Rows are the coordinates of ``u * e_i``."""
        return [list(self.mul(u, self.basis_vector(i))) for i in range(self.rank)]

    def inverse_vec(self, u: Vector) -> Vector:
        sol = solve_in_span(self.mult_matrix(u), self.unit, self.p, self.m)
        if sol is None:
            raise NotAUnit(f"{u} is not a unit")
        return tuple(sol)

    def is_unit_vec(self, u: Vector) -> bool:
        return solve_in_span(self.mult_matrix(u), self.unit, self.p, self.m) is not None

    # -- element API ------------------------------------------------------

    def __call__(self, value: int | Sequence[int] | AlgebraElement) -> AlgebraElement:
        if isinstance(value, AlgebraElement):
            if value.parent != self:
                raise ValueError("element belongs to a different algebra")
            return value
        if isinstance(value, int):
            return AlgebraElement(self, self.scalar_vec(value))
        coords = tuple(int(x) % self.modulus for x in value)
        if len(coords) != self.rank:
            raise ValueError("coordinate vector has the wrong length")
        return AlgebraElement(self, coords)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, self.zero_vec())

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit)

    def gen(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, self.basis_vector(i))

    def gens(self) -> list[AlgebraElement]:
        return [self.gen(i) for i in range(self.rank)]

    def size(self) -> int:
        return self.modulus**self.rank

    def elements(self) -> Iterator[AlgebraElement]:
        for coords in itertools.product(range(self.modulus), repeat=self.rank):
            yield AlgebraElement(self, coords)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    parent: ChainAlgebra
    coords: Vector

    def _coerce(self, other) -> Vector:
        if isinstance(other, AlgebraElement):
            if other.parent is not self.parent and other.parent != self.parent:
                raise ValueError("elements of different algebras")
            return other.coords
        if isinstance(other, int):
            return self.parent.scalar_vec(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return AlgebraElement(self.parent, self.parent.add(self.coords, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return AlgebraElement(self.parent, self.parent.sub(self.coords, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return AlgebraElement(self.parent, self.parent.sub(v, self.coords))

    def __neg__(self):
        return AlgebraElement(self.parent, self.parent.neg(self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraElement(self.parent, self.parent.smul(other, self.coords))
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return AlgebraElement(self.parent, self.parent.mul(self.coords, v))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.parent.unit
        base = self.coords
        while n:
            if n & 1:
                result = self.parent.mul(result, base)
            base = self.parent.mul(base, base)
            n >>= 1
        return AlgebraElement(self.parent, result)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coords == self.parent.scalar_vec(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.coords == other.coords and self.parent == other.parent

    def __hash__(self) -> int:
        return hash(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_unit(self) -> bool:
        return self.parent.is_unit_vec(self.coords)

    def inverse(self) -> AlgebraElement:
        return AlgebraElement(self.parent, self.parent.inverse_vec(self.coords))

    def __repr__(self) -> str:
        if self.parent.rank == 1:
            return f"{self.coords[0]}"
        terms = []
        for c, b in zip(self.coords, self.parent.basis):
            if c:
                terms.append(str(c) if b == "1" else (b if c == 1 else f"{c}*{b}"))
        return " + ".join(terms) if terms else "0"


def elements_equal(a: AlgebraElement, b: AlgebraElement) -> bool:
    return a.coords == b.coords


@dataclass(frozen=True)
class AlgebraHom:
    """Z/p^m-linear map given by the images of the source basis."""

    source: ChainAlgebra
    target: ChainAlgebra
    images: tuple[Vector, ...]

    def apply_vec(self, u: Vector) -> Vector:
        out = self.target.zero_vec()
        for a, img in zip(u, self.images):
            if a:
                out = self.target.add(out, self.target.smul(a, img))
        return out

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if x.parent != self.source:
            raise ValueError("element is not in the source algebra")
        return AlgebraElement(self.target, self.apply_vec(x.coords))

    def verify(self) -> list[str]:
        problems = []
        if self.apply_vec(self.source.unit) != self.target.unit:
            problems.append("unit is not preserved")
        r = self.source.rank
        for i in range(r):
            for j in range(i, r):
                lhs = self.apply_vec(self.source.table[i][j])
                rhs = self.target.mul(self.images[i], self.images[j])
                if lhs != rhs:
                    problems.append(f"product of basis elements {i},{j} not preserved")
        return problems

    @classmethod
    def identity(cls, algebra: ChainAlgebra) -> AlgebraHom:
        return cls(algebra, algebra, tuple(algebra.basis_vector(i) for i in range(algebra.rank)))

    def then(self, other: AlgebraHom) -> AlgebraHom:
        """other after self."""
        if other.source != self.target:
            raise ValueError("homomorphisms do not compose")
        return AlgebraHom(self.source, other.target, tuple(other.apply_vec(v) for v in self.images))

    @classmethod
    def structure_map(cls, source: ChainAlgebra, target: ChainAlgebra) -> AlgebraHom:
        """The unique unital map Z/p^m -> target (source must be Z/p^m, rank 1)."""
        if source.rank != 1 or source.unit != (1,):
            raise ValueError("structure map needs source Z/p^m")
        if target.p != source.p or target.m > source.m:
            raise ValueError("no unital map between these coefficient rings")
        return cls(source, target, (target.unit,))

    @classmethod
    def reduction(cls, source: ChainAlgebra, m: int) -> AlgebraHom:
        """Reduction of a Z/p^k-algebra to the same table over Z/p^m (m <= k)."""
        if m > source.m:
            raise ValueError("cannot reduce to a larger modulus")
        target = ChainAlgebra(source.p, m, source.basis, source.table, source.unit)
        return cls(source, target, tuple(target.basis_vector(i) for i in range(source.rank)))


def span_rows(algebra: ChainAlgebra, elements: Iterable[AlgebraElement | Vector]) -> list[list[int]]:
    return [list(e.coords if isinstance(e, AlgebraElement) else e) for e in elements]


def algebra_span(algebra: ChainAlgebra, elements: Iterable[AlgebraElement | Vector]) -> HowellForm:
    rows = span_rows(algebra, elements)
    return howell_form(rows, algebra.p, algebra.m, algebra.rank)


def subalgebra_closure(algebra: ChainAlgebra, generators: Iterable[AlgebraElement]) -> HowellForm:
    """Howell basis of the unital subring generated by ``generators``."""
    rows = [list(algebra.unit)] + span_rows(algebra, generators)
    H = howell_form(rows, algebra.p, algebra.m, algebra.rank)
    for _ in range(algebra.m * algebra.rank + 1):
        basis = [tuple(r) for r in H.rows]
        products = [
            list(algebra.mul(a, b)) for i, a in enumerate(basis) for b in basis[i:]
        ]
        H2 = howell_form(H.rows + products, algebra.p, algebra.m, algebra.rank)
        if H2.same_span(H):
            return H2
        H = H2
    raise RuntimeError("subring closure did not stabilise; multiplication table is inconsistent")


def subalgebra_from_basis(
    algebra: ChainAlgebra, basis: HowellForm, unit: Sequence[int] | None = None, names: Sequence[str] | None = None
) -> tuple[ChainAlgebra, AlgebraHom]:
    """The subring spanned by a free Howell basis, as an algebra of its own.

    ``unit`` defaults to the unit of ``algebra``; pass an idempotent to get a
    corner ring e*A.  Returns the new algebra and its inclusion (which is a
    ring map only when ``unit`` is the ambient unit).
    """
    if not basis.is_free():
        raise NotFree("subring basis is not free")
    A = algebra
    rows = [tuple(r) for r in basis.rows]
    u = tuple(A.unit if unit is None else (x % A.modulus for x in unit))

    def coords(v: Vector) -> Vector:
        c = basis.express(v)
        if c is None:
            raise InvalidAlgebra("span is not closed under multiplication")
        return tuple(c)

    table = tuple(tuple(coords(A.mul(a, b)) for b in rows) for a in rows)
    names = tuple(names) if names is not None else tuple("1" if r == u else f"b{i}" for i, r in enumerate(rows))
    sub = ChainAlgebra(A.p, A.m, names, table, coords(u))
    return sub, AlgebraHom(sub, A, tuple(rows))


def annihilator_of_quotient(
    algebra: ChainAlgebra, sub_basis: HowellForm | Sequence[Sequence[int]], alpha: AlgebraElement
) -> HowellForm:
    """Howell basis of ``{s in S : s * alpha in S}``, the annihilator of S~/S.

    Requires S + S*alpha to be the whole algebra.
    """
    rows = sub_basis.rows if isinstance(sub_basis, HowellForm) else [list(r) for r in sub_basis]
    p, m, r = algebra.p, algebra.m, algebra.rank
    times_alpha = [list(algebra.mul(tuple(s), alpha.coords)) for s in rows]
    whole = howell_form(rows + times_alpha, p, m, r)
    if not (whole.rank == r and whole.is_free()):
        raise QuotientNotCyclic("S + S*alpha is not the whole algebra")
    k = len(rows)
    if k == 0:
        return howell_form([], p, m, r)
    kern = left_kernel(times_alpha + rows, p, m, r)
    q = p**m
    ann = []
    for c in kern.rows:
        coeffs = c[:k]
        vec = [0] * r
        for ci, s in zip(coeffs, rows):
            if ci:
                for j in range(r):
                    vec[j] = (vec[j] + ci * s[j]) % q
        ann.append(vec)
    return howell_form(ann, p, m, r)


def adjoin_quadratic_root(
    algebra: ChainAlgebra, t: AlgebraElement, d: AlgebraElement, name: str = "a"
) -> tuple[ChainAlgebra, AlgebraElement, AlgebraHom]:
    """A[name]/(name^2 - t*name + d), free of rank 2 over A.

    Returns the new algebra, the adjoined root, and the inclusion of A.
    """
    A = algebra
    r = A.rank
    tv, dv = t.coords, d.coords
    names = tuple(A.basis) + tuple(f"{b}*{name}" if b != "1" else name for b in A.basis)
    table: list[list[Vector]] = [[()] * (2 * r) for _ in range(2 * r)]
    for i in range(r):
        for j in range(r):
            e = A.table[i][j]
            e_t = A.mul(e, tv)
            e_d = A.neg(A.mul(e, dv))
            zero = A.zero_vec()
            table[i][j] = e + zero
            table[i][j + r] = zero + e
            table[i + r][j] = zero + e
            table[i + r][j + r] = e_d + e_t
    unit = A.unit + A.zero_vec()
    big = ChainAlgebra(A.p, A.m, names, tuple(tuple(row) for row in table), unit)
    root = AlgebraElement(big, A.zero_vec() + A.unit)
    incl = AlgebraHom(A, big, tuple(A.basis_vector(i) + A.zero_vec() for i in range(r)))
    return big, root, incl


def finite_field_4() -> ChainAlgebra:
    """F4 = F2[w]/(w^2 + w + 1) with basis (1, w)."""
    return ChainAlgebra.polynomial_quotient(2, 1, [1, 1, 1], var="w")


def quadratic_roots(algebra: ChainAlgebra, t: AlgebraElement, d: AlgebraElement) -> list[AlgebraElement]:
    """All roots of X^2 - tX + d in the algebra.

    Small algebras are searched exhaustively; larger ones lift simple roots
    of the residual polynomial by Newton iteration.
    """
    def f(x: AlgebraElement) -> AlgebraElement:
        return x * x - t * x + d

    if algebra.size() <= 1 << 16:
        return [x for x in algebra.elements() if f(x).is_zero()]
    residual = ChainAlgebra(algebra.p, 1, algebra.basis, algebra.table, algebra.unit)
    roots = []
    for coords in itertools.product(range(algebra.p), repeat=algebra.rank):
        x = algebra(coords)
        if not residual(f(x).coords).is_zero():
            continue
        deriv = 2 * x - t
        if not deriv.is_unit():
            raise NotAUnit("repeated residual root; Newton lifting does not apply")
        for _ in range(algebra.m + 1):
            x = x - f(x) * deriv.inverse()
            deriv = 2 * x - t
        roots.append(x)
    return roots
