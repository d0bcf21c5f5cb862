"""Degree-2 determinants as pairs (T, D) of functions on a finite group.

T and D are stored on group elements.  Their values on the group ring are
always computed: T extends linearly, and D extends as the quadratic form

    D(sum a_g g) = sum a_g^2 D(g) + sum_{g<h} a_g a_h (T(g)T(h) - T(gh)).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .chainring import AlgebraElement, AlgebraHom, ChainAlgebra, Vector
from .errors import NotARepresentation, TwoNotInvertible
from .groupring import GroupModel, GroupRingElement

Matrix2 = tuple[Vector, Vector, Vector, Vector]  # (a, b, c, d) for [[a, b], [c, d]]


@dataclass(frozen=True)
class Violation:
    kind: str
    elements: tuple[int, ...]
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "elements": list(self.elements), "detail": self.detail}


@dataclass(frozen=True)
class CharPoly:
    """X^2 - trace_coeff X + det_coeff."""

    trace_coeff: AlgebraElement
    det_coeff: AlgebraElement

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return x * x - self.trace_coeff * x + self.det_coeff


@dataclass(frozen=True, eq=False)
class DeterminantPair:
    group: GroupModel
    algebra: ChainAlgebra
    T_values: tuple[Vector, ...]
    D_values: tuple[Vector, ...]

    def __post_init__(self) -> None:
        n = self.group.order
        if len(self.T_values) != n or len(self.D_values) != n:
            raise ValueError("T and D need one value per group element")

    def T(self, g: int) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.T_values[g])

    def D(self, g: int) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.D_values[g])

    def charpoly(self, g: int) -> CharPoly:
        return CharPoly(self.T(g), self.D(g))

    def basis_element(self, g: int) -> GroupRingElement:
        return GroupRingElement.basis(self.group, self.algebra, g)

    def element(self, terms) -> GroupRingElement:
        return GroupRingElement.from_terms(self.group, self.algebra, terms)

    def to_json(self) -> dict:
        return {"T": [list(v) for v in self.T_values], "D": [list(v) for v in self.D_values]}

    @classmethod
    def from_json(cls, group: GroupModel, algebra: ChainAlgebra, obj: Mapping) -> DeterminantPair:
        q = algebra.modulus
        T = tuple(tuple(int(x) % q for x in v) for v in obj["T"])
        D = tuple(tuple(int(x) % q for x in v) for v in obj["D"])
        return cls(group, algebra, T, D)

    @classmethod
    def trivial(cls, group: GroupModel, algebra: ChainAlgebra) -> DeterminantPair:
        two = algebra.scalar_vec(2)
        return cls(group, algebra, (two,) * group.order, (algebra.unit,) * group.order)


def validate_axioms(P: DeterminantPair) -> list[Violation]:
    """Every violated instance of the four identities characterizing (T, D).

    D(gh) = D(g)D(h) with D(g) a unit; T(1) = 2; T(gh) = T(hg);
    D(g)T(g^-1 h) - T(g)T(h) + T(gh) = 0.
    """
    G, A = P.group, P.algebra
    T, D = P.T_values, P.D_values
    out: list[Violation] = []
    if T[0] != A.scalar_vec(2):
        out.append(Violation("T(1) != 2", (0,)))
    for g in G.elements():
        if not A.is_unit_vec(D[g]):
            out.append(Violation("D not a unit", (g,)))
    for g in G.elements():
        row = G.table[g]
        ginv = G.inverse[g]
        for h in G.elements():
            gh = row[h]
            if D[gh] != A.mul(D[g], D[h]):
                out.append(Violation("D not multiplicative", (g, h)))
            if T[gh] != T[G.table[h][g]]:
                out.append(Violation("T(gh) != T(hg)", (g, h)))
            lhs = A.add(A.sub(A.mul(D[g], T[G.table[ginv][h]]), A.mul(T[g], T[h])), T[gh])
            if any(lhs):
                out.append(Violation("D(g)T(g^-1 h) - T(g)T(h) + T(gh) != 0", (g, h)))
    return out


# ---------------------------------------------------------------------------
# 2x2 matrices over a ChainAlgebra
# ---------------------------------------------------------------------------


def as_matrix(algebra: ChainAlgebra, entries) -> Matrix2:
    """Accepts [[a, b], [c, d]] with ints, coordinate lists or elements."""
    (a, b), (c, d) = entries
    return tuple(algebra(x).coords for x in (a, b, c, d))  # type: ignore[return-value]


def mat_mul(A: ChainAlgebra, x: Matrix2, y: Matrix2) -> Matrix2:
    a, b, c, d = x
    e, f, g, h = y
    m, ad = A.mul, A.add
    return (ad(m(a, e), m(b, g)), ad(m(a, f), m(b, h)), ad(m(c, e), m(d, g)), ad(m(c, f), m(d, h)))


def mat_trace(A: ChainAlgebra, x: Matrix2) -> Vector:
    return A.add(x[0], x[3])


def mat_det(A: ChainAlgebra, x: Matrix2) -> Vector:
    return A.sub(A.mul(x[0], x[3]), A.mul(x[1], x[2]))


def mat_identity(A: ChainAlgebra) -> Matrix2:
    z = A.zero_vec()
    return (A.unit, z, z, A.unit)


def mat_scalar(A: ChainAlgebra, s: Vector) -> Matrix2:
    z = A.zero_vec()
    return (s, z, z, s)


def mat_sub(A: ChainAlgebra, x: Matrix2, y: Matrix2) -> Matrix2:
    return tuple(A.sub(u, v) for u, v in zip(x, y))  # type: ignore[return-value]


def matrices_from_generators(
    group: GroupModel, algebra: ChainAlgebra, gen_images: Mapping[int, Matrix2]
) -> dict[int, Matrix2]:
    """Extend generator images to a map on the whole group, checking consistency."""
    images = {0: mat_identity(algebra)}
    queue = deque([0])
    gens = list(gen_images.items())
    while queue:
        x = queue.popleft()
        for g, mg in gens:
            y = group.table[x][g]
            val = mat_mul(algebra, images[x], mg)
            if y in images:
                if images[y] != val:
                    raise NotARepresentation(f"generator images are inconsistent at element {y}")
            else:
                images[y] = val
                queue.append(y)
    if len(images) != group.order:
        raise NotARepresentation("generators do not generate the group")
    return images


def check_homomorphism(
    group: GroupModel, algebra: ChainAlgebra, matrices: Mapping[int, Matrix2]
) -> tuple[int, int] | None:
    """First pair (g, h) with rho(gh) != rho(g)rho(h), or None.

    rho(1) = 1 together with rho(xs) = rho(x)rho(s) for every x and every s in
    a generating set already forces multiplicativity, so only |G| * #gens
    products are formed.
    """
    if matrices[0] != mat_identity(algebra):
        return (0, 0)
    for s in group.generators:
        ms = matrices[s]
        for x in group.elements():
            if matrices[group.table[x][s]] != mat_mul(algebra, matrices[x], ms):
                return (x, s)
    return None


def from_matrix_rep(group: GroupModel, algebra: ChainAlgebra, matrices: Mapping[int, Matrix2]) -> DeterminantPair:
    """Trace and determinant of a 2-dimensional matrix representation."""
    if set(matrices) != set(group.elements()):
        raise NotARepresentation("a matrix is needed for every group element")
    bad = check_homomorphism(group, algebra, matrices)
    if bad is not None:
        raise NotARepresentation(f"rho(gh) != rho(g)rho(h) at {bad}")
    if matrices[0] != mat_identity(algebra):
        raise NotARepresentation("identity does not map to the identity matrix")
    T = tuple(mat_trace(algebra, matrices[g]) for g in group.elements())
    D = tuple(mat_det(algebra, matrices[g]) for g in group.elements())
    return DeterminantPair(group, algebra, T, D)


def group_ring_matrix(P_alg: ChainAlgebra, matrices: Mapping[int, Matrix2], x: GroupRingElement) -> Matrix2:
    """rho(x) for x in A[G]."""
    A = P_alg
    out = (A.zero_vec(),) * 4
    for g, a in x.support.items():
        out = tuple(A.add(o, A.mul(a, e)) for o, e in zip(out, matrices[g]))  # type: ignore[assignment]
    return out  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Extensions to the group ring
# ---------------------------------------------------------------------------


def _compatible(P: DeterminantPair, x: GroupRingElement) -> None:
    if x.algebra != P.algebra or x.group.table != P.group.table:
        raise ValueError("group ring element does not match the determinant")


def extend_T(P: DeterminantPair, x: GroupRingElement) -> AlgebraElement:
    _compatible(P, x)
    A = P.algebra
    acc = A.zero_vec()
    for g, a in x.support.items():
        acc = A.add(acc, A.mul(a, P.T_values[g]))
    return AlgebraElement(A, acc)


def bilinear(P: DeterminantPair, g: int, h: int) -> Vector:
    """T(g)T(h) - T(gh)."""
    A = P.algebra
    return A.sub(A.mul(P.T_values[g], P.T_values[h]), P.T_values[P.group.table[g][h]])


def extend_D(P: DeterminantPair, x: GroupRingElement) -> AlgebraElement:
    _compatible(P, x)
    A = P.algebra
    terms = sorted(x.support.items())
    acc = A.zero_vec()
    for i, (g, a) in enumerate(terms):
        acc = A.add(acc, A.mul(A.mul(a, a), P.D_values[g]))
        for h, b in terms[i + 1 :]:
            acc = A.add(acc, A.mul(A.mul(a, b), bilinear(P, g, h)))
    return AlgebraElement(A, acc)


def recover_T_from_D(P: DeterminantPair, sigma: int) -> AlgebraElement:
    """D(sigma + 1) - D(sigma) - 1, computed on the group ring."""
    s = P.basis_element(sigma)
    one = P.basis_element(0)
    return extend_D(P, s + one) - extend_D(P, s) - 1


def recover_D_from_T(P: DeterminantPair, sigma: int) -> AlgebraElement:
    """(T(sigma)^2 - T(sigma^2)) / 2; needs 2 invertible."""
    A = P.algebra
    if A.p == 2:
        raise TwoNotInvertible("2 is not invertible in residue characteristic 2")
    t = P.T(sigma)
    t2 = P.T(P.group.mul(sigma, sigma))
    return (t * t - t2) * A(2).inverse()


# ---------------------------------------------------------------------------
# Kernel and ramification
# ---------------------------------------------------------------------------


def kernel_test(P: DeterminantPair, x: GroupRingElement) -> bool:
    """x lies in ker(P): T(x[g]) = 0 for every g in G, and D(x) = 0.

    Quantifying over group elements suffices because T is linear.
    """
    _compatible(P, x)
    A, G = P.algebra, P.group
    for g in G.elements():
        acc = A.zero_vec()
        for h, a in x.support.items():
            acc = A.add(acc, A.mul(a, P.T_values[G.table[h][g]]))
        if any(acc):
            return False
    return extend_D(P, x).is_zero()


@dataclass(frozen=True)
class UnramifiedResult:
    unramified: bool
    witness: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.unramified

    def to_json(self) -> dict:
        return {
            "unramified": self.unramified,
            "witness": None if self.witness is None else list(self.witness),
            "reason": self.reason,
        }


def unramified_test(P: DeterminantPair, inertia: Sequence[int] | None = None) -> UnramifiedResult:
    """Inertia lies in ker(P): T(hg) = T(g) for all h, g and D(h - 1) = 0."""
    G = P.group
    H = G.inertia() if inertia is None else list(inertia)
    for h in H:
        row = G.table[h]
        for g in G.elements():
            if P.T_values[row[g]] != P.T_values[g]:
                return UnramifiedResult(False, (h, g), "T(hg) != T(g)")
    for h in H:
        x = P.basis_element(h) - P.basis_element(0)
        if not extend_D(P, x).is_zero():
            return UnramifiedResult(False, (h,), "D(h - 1) != 0")
    return UnramifiedResult(True)


def base_change(P: DeterminantPair, f: AlgebraHom) -> DeterminantPair:
    if f.source != P.algebra:
        raise ValueError("homomorphism source is not the coefficient algebra")
    return DeterminantPair(
        P.group,
        f.target,
        tuple(f.apply_vec(v) for v in P.T_values),
        tuple(f.apply_vec(v) for v in P.D_values),
    )
