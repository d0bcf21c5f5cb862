"""Ordinary determinants and the annihilator certificate of unramifiedness."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .chainring import (
    AlgebraElement,
    AlgebraHom,
    ChainAlgebra,
    HowellForm,
    adjoin_quadratic_root,
    algebra_span,
    annihilator_of_quotient,
    howell_form,
    subalgebra_closure,
)
from .determinant import (
    DeterminantPair,
    Matrix2,
    UnramifiedResult,
    Violation,
    check_homomorphism,
    extend_D,
    mat_mul,
    mat_scalar,
    mat_sub,
    unramified_test,
)
from .errors import NotARepresentation, NotAUnit, NotFree, NotOrdinary
from .groupring import CharacterData


@dataclass(frozen=True)
class OrdinaryWitness:
    """A determinant together with a Frobenius eigenvalue ``alpha``.

    ``psi`` is the character of the inertia subgroup by which inertia acts on
    the sub line; ``weight`` is only bookkept (n = 1 mod p - 1).
    """

    pair: DeterminantPair
    alpha: AlgebraElement
    weight: int
    psi: CharacterData

    def __post_init__(self) -> None:
        p = self.pair.algebra.p
        if self.weight < 1 or (self.weight - 1) % (p - 1):
            raise ValueError(f"weight {self.weight} is not 1 mod {p - 1}")
        if self.alpha.parent != self.pair.algebra:
            raise ValueError("alpha must live in the coefficient algebra")

    @property
    def phi(self) -> int:
        return self.pair.group.frobenius

    def inertia(self) -> list[int]:
        return list(self.psi.domain)

    def other_root(self) -> AlgebraElement:
        return self.pair.T(self.phi) - self.alpha


def check_ordinary(w: OrdinaryWitness) -> list[Violation]:
    """All violations of the three ordinarity conditions.

    (1) T(h) = 1 + psi(h), D(h) = psi(h) on inertia;
    (2) alpha^2 - T(phi) alpha + D(phi) = 0;
    (3) T(g h phi) - psi(h) T(g phi) - T(g h) alpha + T(g) psi(h) alpha = 0
        for every g in G and h in inertia.
    """
    P, G = w.pair, w.pair.group
    phi, a = w.phi, w.alpha
    out: list[Violation] = []
    if not a.is_unit():
        out.append(Violation("alpha is not a unit", (phi,)))
    H = w.inertia()
    for h in H:
        if P.T(h) != 1 + w.psi(h):
            out.append(Violation("condition (1): T(h) != 1 + psi(h)", (h,)))
        if P.D(h) != w.psi(h):
            out.append(Violation("condition (1): D(h) != psi(h)", (h,)))
    if not P.charpoly(phi)(a).is_zero():
        out.append(Violation("condition (2): alpha is not a root of X^2 - T(phi)X + D(phi)", (phi,)))
    for g in G.elements():
        g_phi = G.mul(g, phi)
        for h in H:
            gh = G.mul(g, h)
            val = P.T(G.mul(gh, phi)) - w.psi(h) * P.T(g_phi) - P.T(gh) * a + P.T(g) * w.psi(h) * a
            if not val.is_zero():
                out.append(Violation("condition (3): (h - psi(h))(phi - alpha) not in kernel", (g, h), repr(val)))
    return out


def matrix_ordinarity_oracle(
    group,
    algebra: ChainAlgebra,
    matrices: Mapping[int, Matrix2],
    psi: CharacterData,
    alpha: AlgebraElement,
) -> bool:
    """(rho(h) - psi(h))(rho(phi) - alpha) == 0 for each inertia generator h.

    Vanishing on generators propagates to the whole inertia subgroup.
    """
    bad = check_homomorphism(group, algebra, matrices)
    if bad is not None:
        raise NotARepresentation(f"rho(gh) != rho(g)rho(h) at {bad}")
    A = algebra
    right = mat_sub(A, matrices[group.frobenius], mat_scalar(A, alpha.coords))
    for h in group.inertia_gens:
        left = mat_sub(A, matrices[h], mat_scalar(A, psi(h).coords))
        if any(any(e) for e in mat_mul(A, left, right)):
            return False
    return True


def d_inertia_vanishing(w: OrdinaryWitness) -> list[tuple[int, AlgebraElement]]:
    """Inertia elements with D(h - 1) != 0, with the offending value."""
    P = w.pair
    out = []
    for h in w.inertia():
        val = extend_D(P, P.basis_element(h) - P.basis_element(0))
        if not val.is_zero():
            out.append((h, val))
    return out


def alpha_ramification_identity(w: OrdinaryWitness, s: int, h: int) -> tuple[AlgebraElement, AlgebraElement]:
    """Both sides of alpha (T(sh) - T(s)psi(h)) = T(s h phi) - psi(h) T(s phi)."""
    P, G = w.pair, w.pair.group
    ps = w.psi(h)
    lhs = w.alpha * (P.T(G.mul(s, h)) - P.T(s) * ps)
    rhs = P.T(G.prod(s, h, w.phi)) - ps * P.T(G.mul(s, w.phi))
    return lhs, rhs


@dataclass
class UnramifiednessCertificate:
    S_basis: HowellForm
    Stilde_basis: HowellForm
    annihilator_basis: HowellForm
    verdict: str
    direct_check: UnramifiedResult
    alpha_in_S: bool = False
    violations: list[Violation] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "S_basis": self.S_basis.to_json(),
            "Stilde_basis": self.Stilde_basis.to_json(),
            "annihilator_basis": self.annihilator_basis.to_json(),
            "alpha_in_S": self.alpha_in_S,
            "direct_check": self.direct_check.to_json(),
            "violations": [v.to_json() for v in self.violations],
        }


def prop_key_certify(w: OrdinaryWitness, coefficient_image: Iterable[AlgebraElement] = ()) -> UnramifiednessCertificate:
    """Certify unramifiedness from a trivial annihilator of S~/S.

    S~ is the coefficient algebra of the witness; S is the unital subring
    generated by ``coefficient_image`` and all values of T and D.  A zero
    annihilator forces the determinant to be unramified; a nonzero one gives
    no information, so the verdict is then ``Undetermined``.
    """
    violations = check_ordinary(w)
    if violations:
        raise NotOrdinary(f"{len(violations)} ordinarity violations, first: {violations[0].kind}")
    P = w.pair
    St = P.algebra
    gens = list(coefficient_image)
    gens += [P.T(g) for g in P.group.elements()] + [P.D(g) for g in P.group.elements()]
    S = subalgebra_closure(St, gens)
    Stilde = algebra_span(St, [St.basis_vector(i) for i in range(St.rank)])
    ann = annihilator_of_quotient(St, S, w.alpha)
    direct = unramified_test(P, w.inertia())
    if ann.is_zero():
        if not direct:
            raise RuntimeError(f"trivial annihilator but inertia acts nontrivially: {direct}")
        verdict = "Unramified"
    else:
        verdict = "Undetermined"
    return UnramifiednessCertificate(S, Stilde, ann, verdict, direct, S.contains(w.alpha.coords))


def doubling_ring(
    Tm: ChainAlgebra, tp: AlgebraElement, diamond_p: AlgebraElement
) -> tuple[ChainAlgebra, AlgebraElement, AlgebraHom]:
    """Tm[U]/(U^2 - tp U + diamond_p); returns (S~, U, inclusion of Tm)."""
    if not diamond_p.is_unit():
        raise NotAUnit("the diamond operator must be a unit")
    return adjoin_quadratic_root(Tm, tp, diamond_p, name="U")


def is_free_rank_two(Stilde: ChainAlgebra, U: AlgebraElement, incl: AlgebraHom) -> bool:
    """{1, U} is a basis of S~ over the image of Tm."""
    rows = []
    for i in range(incl.source.rank):
        b = incl.images[i]
        rows.append(list(b))
        rows.append(list(Stilde.mul(b, U.coords)))
    H = howell_form(rows, Stilde.p, Stilde.m, Stilde.rank)
    return H.rank == Stilde.rank == 2 * incl.source.rank and H.is_free()


@dataclass
class FrobeniusIdentification:
    ok: bool
    trace_difference: AlgebraElement
    det_difference: AlgebraElement
    satisfies_hecke_quadratic: bool
    satisfies_galois_quadratic: bool

    @property
    def mismatches(self) -> list[str]:
        out = []
        if not self.trace_difference.is_zero():
            out.append("T(phi) != T_p")
        if not self.det_difference.is_zero():
            out.append("D(phi) != <p>")
        return out

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "trace_difference": list(self.trace_difference.coords),
            "det_difference": list(self.det_difference.coords),
            "satisfies_hecke_quadratic": self.satisfies_hecke_quadratic,
            "satisfies_galois_quadratic": self.satisfies_galois_quadratic,
            "mismatches": self.mismatches,
        }


def frobenius_identification(
    Stilde: ChainAlgebra,
    U: AlgebraElement,
    incl: AlgebraHom,
    T_phi: AlgebraElement,
    D_phi: AlgebraElement,
    T_p: AlgebraElement,
    diamond_p: AlgebraElement,
) -> FrobeniusIdentification:
    """Compare X^2 - T(phi)X + D(phi) with X^2 - T_p X + <p> through U.

    All four coefficients live in Tm.  In the free basis {1, U} the difference
    of the two quadratics at U is (T_p - T(phi)) U + (D(phi) - <p>), so both
    coefficient differences must vanish when U is a common root.
    """
    if not is_free_rank_two(Stilde, U, incl):
        raise NotFree("{1, U} is not a basis of S~ over Tm")
    hecke = U * U - incl(T_p) * U + incl(diamond_p)
    galois = U * U - incl(T_phi) * U + incl(D_phi)
    dT = T_phi - T_p
    dD = D_phi - diamond_p
    return FrobeniusIdentification(
        ok=dT.is_zero() and dD.is_zero() and hecke.is_zero() and galois.is_zero(),
        trace_difference=dT,
        det_difference=dD,
        satisfies_hecke_quadratic=hecke.is_zero(),
        satisfies_galois_quadratic=galois.is_zero(),
    )


def inertia_character(
    pair: DeterminantPair, values: Mapping[int, AlgebraElement] | None = None, domain: Sequence[int] | None = None
) -> CharacterData:
    """psi on inertia; defaults to D restricted to inertia (D(h) = psi(h) by (1))."""
    G = pair.group
    dom = tuple(sorted(G.inertia() if domain is None else domain))
    if values is None:
        values = {h: pair.D(h) for h in dom}
    return CharacterData(G, dom, dict(values))
