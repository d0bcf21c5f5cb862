"""Hecke algebras acting on spaces of truncated q-expansions over Z/p^m."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .chainring import (
    AlgebraElement,
    AlgebraHom,
    ChainAlgebra,
    HowellForm,
    howell_form,
    left_kernel,
    subalgebra_from_basis,
)
from .determinant import DeterminantPair
from .errors import (
    InsufficientPrecision,
    LiftFailure,
    MissingFrobeniusData,
    NonCommuting,
    NotFree,
    NotProper,
    NotStable,
    OutOfRange,
)
from .qexp import QExpansion, SpaceSpec, diamond, t_ell, u_op

Matrix = list[list[int]]

PROVENANCES = ("Ingested", "EisensteinProducts", "Weight1Computed")


# ---------------------------------------------------------------------------
# Form spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FormSpaceBasis:
    """Forms over Z/p^m with Howell-independent coefficient rows."""

    spec: SpaceSpec
    forms: tuple[QExpansion, ...]
    provenance: str = "Ingested"
    expected_dimension: int | None = None

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        for f in self.forms:
            if f.algebra.rank != 1 or (f.algebra.p, f.algebra.m) != (self.spec.p, self.spec.m):
                raise ValueError("forms must have coefficients in Z/p^m of the space")
            if f.precision < self.spec.precision:
                raise InsufficientPrecision(f"form precision {f.precision} < declared {self.spec.precision}")
        H = self.howell()
        if H.rank != len(self.forms):
            raise ValueError(f"forms are not Howell-independent ({H.rank} rows for {len(self.forms)} forms)")

    @property
    def algebra(self) -> ChainAlgebra:
        return ChainAlgebra.zmod(self.spec.p, self.spec.m)

    @property
    def dimension(self) -> int:
        return len(self.forms)

    @property
    def precision(self) -> int:
        return self.spec.precision

    def rows(self, precision: int | None = None) -> Matrix:
        B = self.precision if precision is None else precision
        return [f.row(B) for f in self.forms]

    def howell(self, precision: int | None = None) -> HowellForm:
        B = self.precision if precision is None else precision
        return howell_form(self.rows(B), self.spec.p, self.spec.m, B)

    def is_free(self) -> bool:
        return self.howell().is_free()

    def same_span(self, other: FormSpaceBasis | Sequence[QExpansion], precision: int) -> bool:
        forms = other.forms if isinstance(other, FormSpaceBasis) else list(other)
        H = howell_form([f.row(precision) for f in forms], self.spec.p, self.spec.m, precision)
        return self.howell(precision).same_span(H)

    def to_json(self) -> dict:
        out = {
            "spec": self.spec.to_json(),
            "provenance": self.provenance,
            "forms": [f.to_json() for f in self.forms],
        }
        if self.expected_dimension is not None:
            out["expected_dimension"] = self.expected_dimension
        return out

    @classmethod
    def from_json(cls, obj: Mapping, strict: bool = True) -> FormSpaceBasis:
        spec = SpaceSpec.from_json(obj["spec"], strict=strict)
        A = ChainAlgebra.zmod(spec.p, spec.m)
        forms = tuple(QExpansion.from_json(f, A) for f in obj["forms"])
        return cls(spec, forms, obj.get("provenance", "Ingested"), obj.get("expected_dimension"))


# ---------------------------------------------------------------------------
# Operators and matrices
# ---------------------------------------------------------------------------

_LABEL = re.compile(r"^(T|U)_(\d+)$|^<(\d+)>$")


def parse_label(label: str) -> tuple[str, int]:
    """'T_5' -> ('T', 5), 'U_2' -> ('U', 2), '<5>' -> ('<>', 5)."""
    mt = _LABEL.match(label)
    if not mt:
        raise ValueError(f"bad operator label {label!r}")
    if mt.group(3):
        return "<>", int(mt.group(3))
    return mt.group(1), int(mt.group(2))


def apply_operator(space: FormSpaceBasis, label: str, f: QExpansion, precision: int) -> QExpansion:
    kind, n = parse_label(label)
    spec = space.spec
    if kind == "T":
        return t_ell(f, n, k=spec.weight, chi=spec.character, precision=precision)
    if kind == "U":
        return u_op(f, n, precision=precision)
    return diamond(f, n, spec.character).truncate(precision)


def _operator_step(label: str) -> int:
    kind, n = parse_label(label)
    return 1 if kind == "<>" else n


def hecke_matrix(space: FormSpaceBasis, label: str, precision: int | None = None) -> Matrix:
    """Matrix (c_ij) with op(f_i) = sum_j c_ij f_j.

    The images are compared on ``precision`` coefficients (default: the
    largest the input allows), which must reach the space's Sturm bound.
    """
    step = _operator_step(label)
    avail = (space.precision - 1) // step + 1
    B = avail if precision is None else precision
    if B > avail:
        raise InsufficientPrecision(f"{label} needs input precision {step * (B - 1) + 1}, have {space.precision}")
    sturm = space.spec.sturm()
    if B < sturm:
        raise InsufficientPrecision(f"{label}: only {B} coefficients available, Sturm bound is {sturm}")
    H = space.howell(B)
    if H.rank != space.dimension or not H.is_free():
        raise InsufficientPrecision(f"basis is not free at precision {B}")
    rows = []
    for f in space.forms:
        image = apply_operator(space, label, f, B)
        c = H.solve(image.row(B))
        if c is None:
            raise NotStable(f"{label} image of a basis form is not in the span")
        rows.append(c)
    return rows


def mat_mul(x: Matrix, y: Matrix, q: int) -> Matrix:
    n, k = len(x), len(y[0]) if y else 0
    yt = list(zip(*y))
    return [[sum(a * b for a, b in zip(x[i], yt[j])) % q for j in range(k)] for i in range(n)]


def identity_matrix(d: int) -> Matrix:
    return [[int(i == j) for j in range(d)] for i in range(d)]


def flatten(x: Matrix) -> list[int]:
    return [a for row in x for a in row]


def unflatten(v: Sequence[int], d: int) -> Matrix:
    return [list(v[i * d:(i + 1) * d]) for i in range(d)]


@dataclass(frozen=True, eq=False)
class GeneratedAlgebra:
    """A commutative algebra of d x d matrices with a free Howell basis."""

    algebra: ChainAlgebra
    basis_matrices: tuple[Matrix, ...]
    images: dict[str, AlgebraElement]
    span: HowellForm
    dim: int

    def matrix_of(self, x: AlgebraElement) -> Matrix:
        q = self.algebra.modulus
        d = self.dim
        acc = [0] * (d * d)
        for c, b in zip(x.coords, self.basis_matrices):
            if c:
                for i, v in enumerate(flatten(b)):
                    acc[i] = (acc[i] + c * v) % q
        return unflatten(acc, d)

    def element_of(self, M: Matrix) -> AlgebraElement:
        c = self.span.express(flatten(M))
        if c is None:
            raise ValueError("matrix is not in the algebra")
        return self.algebra(c)


def algebra_generate(
    operators: Mapping[str, Matrix], p: int, m: int, identity: Matrix | None = None
) -> GeneratedAlgebra:
    """Module closure of all products of the operators together with ``identity``."""
    q = p**m
    labels = list(operators)
    if not labels and identity is None:
        raise ValueError("need at least one operator or an identity")
    d = len(identity) if identity is not None else len(operators[labels[0]])
    one = identity if identity is not None else identity_matrix(d)
    mats = {k: [[x % q for x in row] for row in v] for k, v in operators.items()}
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if mat_mul(mats[a], mats[b], q) != mat_mul(mats[b], mats[a], q):
                raise NonCommuting(f"{a} and {b} do not commute")
    n2 = d * d
    H = howell_form([flatten(one)] + [flatten(mats[k]) for k in labels], p, m, n2)
    for _ in range(m * n2 + 2):
        new_rows = list(H.rows)
        for r in H.rows:
            R = unflatten(r, d)
            new_rows += [flatten(mat_mul(R, mats[k], q)) for k in labels]
        H2 = howell_form(new_rows, p, m, n2)
        if H2.same_span(H):
            break
        H = H2
    else:
        raise RuntimeError("operator algebra closure did not stabilise")
    H = H2
    if not H.is_free():
        raise NotFree("the generated operator algebra is not free over Z/p^m")
    basis = [unflatten(r, d) for r in H.rows]

    def coords(M: Matrix) -> tuple[int, ...]:
        c = H.express(flatten(M))
        if c is None:
            raise NotStable("product left the generated module")
        return tuple(c)

    table = tuple(tuple(coords(mat_mul(a, b, q)) for b in basis) for a in basis)
    names = tuple("1" if flatten(b) == flatten(one) else f"e{i}" for i, b in enumerate(basis))
    A = ChainAlgebra(p, m, names, table, coords(one))
    images = {k: A(coords(mats[k])) for k in labels}
    return GeneratedAlgebra(A, tuple(basis), images, H, d)


@dataclass(frozen=True, eq=False)
class HeckeAlgebraModel:
    space: FormSpaceBasis
    operators: dict[str, Matrix]
    generated: GeneratedAlgebra

    @property
    def algebra(self) -> ChainAlgebra:
        return self.generated.algebra

    def element(self, label: str) -> AlgebraElement:
        return self.generated.images[label]

    def labels(self) -> list[str]:
        return list(self.operators)

    def to_json(self) -> dict:
        return {
            "dimension": self.space.dimension,
            "operators": {k: v for k, v in self.operators.items()},
            "algebra": self.algebra.to_json(),
            "images": {k: list(v.coords) for k, v in self.generated.images.items()},
        }


def build_hecke_model(space: FormSpaceBasis, labels: Iterable[str]) -> HeckeAlgebraModel:
    ops = {lab: hecke_matrix(space, lab) for lab in labels}
    gen = algebra_generate(ops, space.spec.p, space.spec.m)
    return HeckeAlgebraModel(space, ops, gen)


def standard_labels(N: int, p: int, bound: int, include_p: bool = True, diamonds: bool = True) -> list[str]:
    from .qexp import primes_up_to

    out = []
    for ell in primes_up_to(bound):
        if N % ell == 0 or (ell == p and not include_p):
            continue
        out.append(f"T_{ell}")
        if diamonds:
            out.append(f"<{ell}>")
    return out


# ---------------------------------------------------------------------------
# Ideals and localization
# ---------------------------------------------------------------------------


def ideal_span(algebra: ChainAlgebra, generators: Iterable[AlgebraElement]) -> HowellForm:
    A = algebra
    rows = [list(A.mul(g.coords, A.basis_vector(i))) for g in generators for i in range(A.rank)]
    return howell_form(rows, A.p, A.m, A.rank)


@dataclass
class HeckeIdeal:
    algebra: ChainAlgebra
    generators: list[AlgebraElement]
    labels: list[str] = field(default_factory=list)

    def span(self) -> HowellForm:
        return ideal_span(self.algebra, self.generators)

    def contains(self, x: AlgebraElement) -> bool:
        return self.span().contains(x.coords)

    def is_proper(self) -> bool:
        return not self.contains(self.algebra.one())

    def to_json(self) -> dict:
        return {"generators": [list(g.coords) for g in self.generators], "labels": self.labels, "span": self.span().to_json()}


def _residue_int(x: int | AlgebraElement) -> int:
    if isinstance(x, int):
        return x
    if any(x.coords[1:]) or x.parent.basis[0] != "1":
        raise ValueError(f"{x!r} is not a scalar")
    return x.coords[0]


def build_maximal_ideal(
    model: HeckeAlgebraModel,
    residual: Mapping[int, tuple[int, int]],
    alpha_bar: int | AlgebraElement | None = None,
    beta_bar: int | AlgebraElement | None = None,
    n: int = 1,
) -> HeckeIdeal:
    """(p, T_l - t_l, <l> l^{n-1} - d_l, (U_p - a)(U_p - b)).

    ``residual`` maps each prime l to the residual (trace, determinant) of
    Frob_l, as integers.  The U_p generator uses the trace a + b and norm ab
    of the residual roots, which may lie in an extension but must have
    scalar trace and norm.
    """
    A = model.algebra
    p = A.p
    gens, labels = [A(p)], ["p"]
    for label in model.labels():
        kind, ell = parse_label(label)
        if kind == "U":
            continue
        if ell not in residual:
            raise MissingFrobeniusData(f"no residual data for l = {ell}")
        t, dd = residual[ell]
        x = model.element(label)
        if kind == "T":
            gens.append(x - t)
        else:
            gens.append(x * pow(ell, n - 1) - dd)
        labels.append(label)
    u_labels = [lab for lab in model.labels() if parse_label(lab)[0] == "U"]
    if u_labels and alpha_bar is not None and beta_bar is not None:
        s = alpha_bar + beta_bar
        nm = alpha_bar * beta_bar
        U = model.element(u_labels[0])
        gens.append(U * U - U * _residue_int(s) + _residue_int(nm))
        labels.append(f"({u_labels[0]} - a)({u_labels[0]} - b)")
    ideal = HeckeIdeal(A, gens, labels)
    if not ideal.is_proper():
        raise NotProper("the residual data generate the unit ideal")
    return ideal


def ideal_power_idempotent(algebra: ChainAlgebra, ideal: HeckeIdeal | Iterable[AlgebraElement]) -> AlgebraElement:
    """The idempotent e with A_m = eA for a maximal ideal m containing p.

    Powers of m stabilise to (1 - e)A; 1 - e is the identity of that ideal.
    """
    A = algebra
    gens = ideal.generators if isinstance(ideal, HeckeIdeal) else list(ideal)
    J = ideal_span(A, gens)
    for _ in range(A.m * A.rank + 2):
        prods = [list(A.mul(tuple(r), g.coords)) for r in J.rows for g in gens]
        J2 = howell_form(prods, A.p, A.m, A.rank)
        if J2.same_span(J):
            break
        J = J2
    else:
        raise RuntimeError("ideal powers did not stabilise")
    if J.is_zero():
        return A.one()
    rows = [tuple(r) for r in J.rows]
    matrix = [[x for b in rows for x in A.mul(a, b)] for a in rows]
    target = [x for b in rows for x in b]
    c = howell_form(matrix, A.p, A.m, len(target)).solve(target)
    if c is None:
        raise NotProper("the stable power of the ideal has no identity; the ideal is not maximal")
    f = A.zero_vec()
    for ci, r in zip(c, rows):
        f = A.add(f, A.smul(ci, r))
    e = A.one() - A(f)
    if e * e != e:
        raise RuntimeError("localization idempotent is not idempotent")
    return e


@dataclass(frozen=True, eq=False)
class Localization:
    """A_m = eA with the projection A -> A_m."""

    source: ChainAlgebra
    idempotent: AlgebraElement
    algebra: ChainAlgebra
    projection: AlgebraHom

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return self.projection(x)


def localize(algebra: ChainAlgebra, ideal: HeckeIdeal | Iterable[AlgebraElement]) -> Localization:
    A = algebra
    e = ideal_power_idempotent(A, ideal)
    basis = howell_form([list(A.mul(e.coords, A.basis_vector(i))) for i in range(A.rank)], A.p, A.m, A.rank)
    sub, _ = subalgebra_from_basis(A, basis, e.coords)
    images = []
    for i in range(A.rank):
        c = basis.express(A.mul(e.coords, A.basis_vector(i)))
        images.append(tuple(c))
    return Localization(A, e, sub, AlgebraHom(A, sub, tuple(images)))


# ---------------------------------------------------------------------------
# Semi-local splitting via characteristic polynomials
# ---------------------------------------------------------------------------

RMatrix = list[list[AlgebraElement]]
Poly = list[AlgebraElement]  # constant term first


def berkowitz(M: RMatrix, R: ChainAlgebra) -> Poly:
    """det(X - M) over a commutative ring, without division; constant term first."""
    n = len(M)
    vect: list[AlgebraElement] = [R.one()]  # highest degree first while building
    for k in range(n):
        a = M[k][k]
        row = M[k][:k]
        v = [M[i][k] for i in range(k)]
        t = [R.one(), -a]
        for _ in range(k):
            s = R.zero()
            for x, y in zip(row, v):
                s = s + x * y
            t.append(-s)
            v = [sum((M[i][j] * v[j] for j in range(k)), R.zero()) for i in range(k)]
        new = []
        for i in range(k + 2):
            s = R.zero()
            for j in range(min(i, k) + 1):
                if i - j < len(t):
                    s = s + t[i - j] * vect[j]
            new.append(s)
        vect = new
    return list(reversed(vect))


def _trim(f: Poly) -> Poly:
    f = list(f)
    while len(f) > 1 and f[-1].is_zero():
        f.pop()
    return f


def poly_mul(f: Poly, g: Poly) -> Poly:
    R = f[0].parent
    out = [R.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return _trim(out)


def poly_add(f: Poly, g: Poly) -> Poly:
    R = (f or g)[0].parent
    n = max(len(f), len(g))
    return _trim([(f[i] if i < len(f) else R.zero()) + (g[i] if i < len(g) else R.zero()) for i in range(n)])


def poly_sub(f: Poly, g: Poly) -> Poly:
    return poly_add(f, [-c for c in g])


def poly_divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Division by g whose leading coefficient is a unit."""
    g = _trim(g)
    R = g[0].parent
    lead_inv = g[-1].inverse()
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [R.zero()], _trim(r)
    quo = [R.zero()] * (len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] * lead_inv
        quo[i - dg] = c
        if not c.is_zero():
            for j in range(dg + 1):
                r[i - dg + j] = r[i - dg + j] - c * g[j]
    return _trim(quo), _trim(r[:dg] or [R.zero()])


def poly_eval(f: Poly, x: AlgebraElement) -> AlgebraElement:
    acc = x.parent.zero()
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_change_ring(f: Poly, R: ChainAlgebra) -> Poly:
    return _trim([R(c.coords) for c in f])


def residue_ring(R: ChainAlgebra) -> ChainAlgebra:
    return ChainAlgebra(R.p, 1, R.basis, R.table, R.unit)


def poly_xgcd_field(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """(d, s, t) with s f + t g = d monic, over a ring whose nonzero elements are units."""
    R = f[0].parent
    r0, r1 = _trim(f), _trim(g)
    s0, s1 = [R.one()], [R.zero()]
    t0, t1 = [R.zero()], [R.one()]
    while not (len(r1) == 1 and r1[0].is_zero()):
        if not r1[-1].is_unit():
            raise LiftFailure("residue ring is not a field")
        qt, rem = poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_sub(s0, poly_mul(qt, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(qt, t1))
    inv = r0[-1].inverse()
    return [c * inv for c in r0], [c * inv for c in s0], [c * inv for c in t0]


def hensel_lift(F: Poly, G: Poly, H: Poly) -> tuple[Poly, Poly]:
    """Lift F = G H from the residue ring to Z/p^m coefficients.

    ``F`` has coefficients in R; ``G`` and ``H`` are monic and coprime
    modulo p (given with coefficients in R).  Linear lifting, one power of p
    per step.
    """
    R = F[0].parent
    Rbar = residue_ring(R)
    d, s, t = poly_xgcd_field(poly_change_ring(G, Rbar), poly_change_ring(H, Rbar))
    if len(d) != 1:
        raise LiftFailure("factors are not coprime modulo p")
    s, t = poly_change_ring(s, R), poly_change_ring(t, R)
    for _ in range(R.m):
        E = poly_sub(F, poly_mul(G, H))
        if all(c.is_zero() for c in E):
            break
        _, dG = poly_divmod(poly_mul(t, E), G)
        _, dH = poly_divmod(poly_mul(s, E), H)
        G, H = poly_add(G, dG), poly_add(H, dH)
    if not all(c.is_zero() for c in poly_sub(F, poly_mul(G, H))):
        raise LiftFailure("Hensel iteration did not converge")
    return G, H


def rmat_mul(x: RMatrix, y: RMatrix) -> RMatrix:
    R = x[0][0].parent
    n = len(x)
    return [[sum((x[i][k] * y[k][j] for k in range(n)), R.zero()) for j in range(n)] for i in range(n)]


def rmat_identity(R: ChainAlgebra, n: int) -> RMatrix:
    return [[R.one() if i == j else R.zero() for j in range(n)] for i in range(n)]


def rmat_add(x: RMatrix, y: RMatrix) -> RMatrix:
    return [[a + b for a, b in zip(r, s)] for r, s in zip(x, y)]


def rmat_scale(x: RMatrix, c: AlgebraElement | int) -> RMatrix:
    return [[a * c for a in r] for r in x]


def rmat_poly_eval(f: Poly, U: RMatrix) -> RMatrix:
    R = U[0][0].parent
    n = len(U)
    acc = [[R.zero()] * n for _ in range(n)]
    for c in reversed(f):
        acc = rmat_add(rmat_mul(acc, U), rmat_scale(rmat_identity(R, n), c))
    return acc


def as_rmatrix(M: Matrix | RMatrix, R: ChainAlgebra) -> RMatrix:
    return [[R(x) for x in row] for row in M]


@dataclass
class SplitComponent:
    residue: AlgebraElement
    idempotent: RMatrix
    operator_images: dict[str, RMatrix]
    multiplicity: int

    def to_json(self) -> dict:
        return {
            "residue": list(self.residue.coords),
            "multiplicity": self.multiplicity,
            "idempotent": [[list(a.coords) for a in row] for row in self.idempotent],
        }


def semilocal_split(
    U: Matrix | RMatrix,
    alpha_bar: AlgebraElement | int,
    beta_bar: AlgebraElement | int,
    R: ChainAlgebra | None = None,
    operators: Mapping[str, Matrix | RMatrix] | None = None,
) -> list[SplitComponent]:
    """Cut by the generalized eigenspaces of U for the residues alpha_bar, beta_bar.

    The characteristic polynomial of U (computed without division) is
    factored modulo p as (X - a)^k * H, the factorization is Hensel-lifted,
    and the idempotent t(U) H(U) is polished by e <- 3e^2 - 2e^3.
    """
    if R is None:
        R = alpha_bar.parent if isinstance(alpha_bar, AlgebraElement) else None
    if R is None:
        raise ValueError("coefficient ring needed")
    Um = as_rmatrix(U, R)
    n = len(Um)
    a, b = R(alpha_bar), R(beta_bar)
    ops = {k: as_rmatrix(v, R) for k, v in (operators or {}).items()}
    if not (a - b).is_unit():
        return [SplitComponent(a, rmat_identity(R, n), ops, n)]
    Rbar = residue_ring(R)
    F = berkowitz(Um, R)
    Fbar = poly_change_ring(F, Rbar)
    comps = []
    for root in (a, b):
        rbar = Rbar(root.coords)
        lin = [-rbar, Rbar.one()]
        G, k = [Rbar.one()], 0
        rest = Fbar
        while True:
            qt, rem = poly_divmod(rest, lin)
            if not all(c.is_zero() for c in rem):
                break
            rest, G, k = qt, poly_mul(G, lin), k + 1
        if k == 0:
            raise LiftFailure(f"{root!r} is not a residual eigenvalue of U")
        Gl, Hl = hensel_lift(F, poly_change_ring(G, R), poly_change_ring(rest, R))
        _, _, t = poly_xgcd_field(poly_change_ring(Gl, Rbar), poly_change_ring(Hl, Rbar))
        e = rmat_mul(rmat_poly_eval(poly_change_ring(t, R), Um), rmat_poly_eval(Hl, Um))
        for _ in range(2 * R.m + 2):
            e2 = rmat_mul(e, e)
            if e2 == e:
                break
            e = rmat_add(rmat_scale(e2, 3), rmat_scale(rmat_mul(e2, e), -2))
        else:
            raise LiftFailure("idempotent polishing did not converge")
        images = {lab: rmat_mul(e, M) for lab, M in ops.items()}
        comps.append(SplitComponent(root, e, images, k))
    total = rmat_add(comps[0].idempotent, comps[1].idempotent)
    if total != rmat_identity(R, n):
        raise LiftFailure("U has residual eigenvalues other than alpha_bar and beta_bar")
    return comps


# ---------------------------------------------------------------------------
# Weight one
# ---------------------------------------------------------------------------


def weight1_space(
    N: int,
    p: int,
    m: int,
    B: int,
    aux: FormSpaceBasis | Sequence[QExpansion],
    target: FormSpaceBasis,
    character=None,
) -> FormSpaceBasis:
    """Howell basis of {f mod q^B : f e in span(target) for every e in aux}.

    This is an upper bound for the weight-one Katz space mod p^m; callers
    compare its dimension with a pinned expectation.
    """
    aux_forms = list(aux.forms if isinstance(aux, FormSpaceBasis) else aux)
    if target.precision < B or any(e.precision < B for e in aux_forms):
        raise InsufficientPrecision(f"aux and target need precision >= {B}")
    A = ChainAlgebra.zmod(p, m)
    spec = SpaceSpec(1, N, p, m, B, character, strict=N >= 5)
    if not target.forms:
        return FormSpaceBasis(spec, (), "Weight1Computed")
    T = target.howell(B)
    if not T.is_free():
        raise NotFree("target basis must be free")
    # rows indexed by monomials q^j; columns are the reductions of q^j e mod span(target)
    rows = [[] for _ in range(B)]
    for e in aux_forms:
        ev = [c[0] for c in e.coeffs[:B]]
        for j in range(B):
            shifted = [0] * j + ev[: B - j]
            rem, _ = T.reduce(shifted)
            rows[j].extend(rem)
    K = left_kernel(rows, p, m, len(rows[0]) if rows and rows[0] else 0) if aux_forms else howell_form(
        [[int(i == j) for j in range(B)] for i in range(B)], p, m, B
    )
    forms = tuple(QExpansion.from_ints(A, r, weight=1, level=N, character=character) for r in K.rows)
    return FormSpaceBasis(spec, forms, "Weight1Computed")


# ---------------------------------------------------------------------------
# Main theorem verification
# ---------------------------------------------------------------------------


@dataclass
class PrimeRow:
    ell: int
    frobenius: int
    T_galois: list[int]
    T_hecke: list[int]
    D_galois: list[int]
    D_hecke: list[int]
    is_p: bool

    @property
    def T_match(self) -> bool:
        return self.T_galois == self.T_hecke

    @property
    def D_match(self) -> bool:
        return self.D_galois == self.D_hecke

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "frobenius": self.frobenius,
            "T_galois": self.T_galois,
            "T_hecke": self.T_hecke,
            "D_galois": self.D_galois,
            "D_hecke": self.D_hecke,
            "T_match": self.T_match,
            "D_match": self.D_match,
            "is_p": self.is_p,
        }


@dataclass
class MainTheoremReport:
    rows: list[PrimeRow]
    skipped: list[int]

    @property
    def mismatches(self) -> list[int]:
        return [r.ell for r in self.rows if not (r.T_match and r.D_match)]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "mismatches": self.mismatches,
            "skipped": self.skipped,
            "rows": [r.to_json() for r in self.rows],
        }


def main_theorem_check(
    model: HeckeAlgebraModel,
    local: Localization | None,
    galois: DeterminantPair,
    frobenius: Callable[[int], int],
    primes: Iterable[int],
    identification: AlgebraHom,
    N: int,
    p: int,
    n: int = 1,
) -> MainTheoremReport:
    """Compare T(Frob_l), D(Frob_l) with the images of T_l and <l> l^{n-1} in T_m.

    ``identification`` maps the Galois coefficient algebra into T_m.
    """
    target = local.algebra if local is not None else model.algebra
    if identification.target != target or identification.source != galois.algebra:
        raise ValueError("identification must map the Galois coefficients into the local Hecke algebra")
    proj = local.projection if local is not None else AlgebraHom.identity(model.algebra)
    rows, skipped = [], []
    for ell in primes:
        if N % ell == 0:
            skipped.append(ell)
            continue
        try:
            g = frobenius(ell)
        except (OutOfRange, KeyError) as exc:
            raise MissingFrobeniusData(f"no Frobenius class for l = {ell}") from exc
        for label in (f"T_{ell}", f"<{ell}>"):
            if label not in model.operators:
                raise MissingFrobeniusData(f"Hecke model lacks {label}")
        Th = proj(model.element(f"T_{ell}"))
        Dh = proj(model.element(f"<{ell}>")) * pow(ell, n - 1)
        rows.append(
            PrimeRow(
                ell,
                g,
                list(identification(galois.T(g)).coords),
                list(Th.coords),
                list(identification(galois.D(g)).coords),
                list(Dh.coords),
                ell == p,
            )
        )
    return MainTheoremReport(rows, skipped)


@dataclass
class RedundancyResult:
    ok: bool
    rank_without: int
    rank_with: int
    counterexample: str | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "rank_without": self.rank_without, "rank_with": self.rank_with, "counterexample": self.counterexample}


def t_p_redundancy_check(model: HeckeAlgebraModel, p: int) -> RedundancyResult:
    """The algebra generated without T_p already contains T_p."""
    spec = model.space.spec
    ops = model.operators
    without = {k: v for k, v in ops.items() if parse_label(k)[1] != p}
    full = algebra_generate(ops, spec.p, spec.m)
    d = model.generated.dim
    if without:
        small = algebra_generate(without, spec.p, spec.m)
    else:
        small = algebra_generate({}, spec.p, spec.m, identity=identity_matrix(d))
    ok = small.span.same_span(full.span)
    witness = None
    if not ok:
        for k, v in ops.items():
            if not small.span.contains(flatten(v)):
                witness = k
                break
    return RedundancyResult(ok, small.span.rank, full.span.rank, witness)

