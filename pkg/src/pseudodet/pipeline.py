"""End-to-end runs: weight-one Hecke algebra, unramifiedness at p, Frobenius comparison."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .chainring import AlgebraElement, AlgebraHom, ChainAlgebra, finite_field_4
from .determinant import base_change
from .errors import NotStable, ValidationError
from .fixtures import GaloisFixture, frobenius_class, load_basis_fixture, load_galois_fixture
from .heckealg import (
    FormSpaceBasis,
    HeckeAlgebraModel,
    HeckeIdeal,
    Localization,
    MainTheoremReport,
    RedundancyResult,
    build_hecke_model,
    build_maximal_ideal,
    localize,
    main_theorem_check,
    standard_labels,
    t_p_redundancy_check,
    weight1_space,
)
from .ordinary import (
    FrobeniusIdentification,
    UnramifiednessCertificate,
    doubling_ring,
    frobenius_identification,
    is_free_rank_two,
    prop_key_certify,
)
from .qexp import (
    DirichletCharacter,
    EigenCheck,
    QExpansion,
    SpaceSpec,
    eta_product,
    hasse,
    primes_up_to,
    stabilize,
    sturm_bound,
    u_op,
    weight_p_eigen_check,
)


def candidate_forms(spec: list[dict], precision: int, algebra: ChainAlgebra, character: DirichletCharacter) -> list[QExpansion]:
    """High-precision weight-one forms named in fixture metadata."""
    out = []
    for item in spec:
        if "hasse" in item:
            f = hasse(int(item["hasse"]), precision, algebra)
        elif "eta" in item:
            f = eta_product([tuple(t) for t in item["eta"]], precision, algebra)
        else:
            raise ValidationError(f"unknown candidate form {item}")
        out.append(f.with_meta(weight=1, level=character.modulus, character=character))
    return out


@dataclass
class Weight1Result:
    computed: FormSpaceBasis
    space: FormSpaceBasis
    expected_dimension: int | None

    def to_json(self) -> dict:
        return {
            "computed_dimension": self.computed.dimension,
            "computed_precision": self.computed.precision,
            "expected_dimension": self.expected_dimension,
            "working_precision": self.space.precision,
            "computed_basis": [f.row() for f in self.computed.forms],
        }


def weight_one_space(fixture: GaloisFixture, bound: int, m: int = 1) -> Weight1Result:
    """The weight-one space mod p^m cut out by the division criterion.

    The space is computed at the precision of the weight-two target basis,
    checked against the pinned dimension, and then identified with the span
    of the candidate forms from the fixture, whose expansions are available
    to any precision.  The returned working basis has the precision needed
    for T_l with l <= ``bound``.
    """
    meta = fixture.metadata
    N, p = fixture.N, fixture.p
    A = ChainAlgebra.zmod(p, m)
    chi = DirichletCharacter.trivial(A, N)
    target = load_basis_fixture(meta["weight2_basis"]).space
    B = target.precision
    cands_low = candidate_forms(meta["weight1_candidates"], B, A, chi)
    computed = weight1_space(N, p, m, B, cands_low, target, character=chi)
    expected = meta.get("weight1_expected_dimension")
    if expected is not None and computed.dimension != expected:
        raise NotStable(f"weight-one space has dimension {computed.dimension}, expected {expected}")
    if not computed.same_span(cands_low, B):
        raise NotStable("computed weight-one space differs from the span of the candidate forms")
    ell_max = max(primes_up_to(bound))
    working = (sturm_bound(1, N) - 1) * ell_max + 1
    forms = tuple(candidate_forms(meta["weight1_candidates"], working, A, chi))
    space = FormSpaceBasis(SpaceSpec(1, N, p, m, working, chi), forms, "Weight1Computed", expected)
    return Weight1Result(computed, space, expected)


@dataclass
class MainTheoremRun:
    weight1: Weight1Result
    model: HeckeAlgebraModel
    ideal: HeckeIdeal
    local: Localization
    redundancy: RedundancyResult
    report: MainTheoremReport
    doubling_free: bool
    certificate: UnramifiednessCertificate
    identification: FrobeniusIdentification
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            self.report.ok
            and self.redundancy.ok
            and self.doubling_free
            and self.certificate.verdict == "Unramified"
            and self.identification.ok
        )

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "ok": self.ok,
            "weight1": self.weight1.to_json(),
            "hecke_algebra": {
                "rank": self.model.algebra.rank,
                "labels": self.model.labels(),
                "algebra": self.model.algebra.to_json(),
            },
            "maximal_ideal": self.ideal.to_json(),
            "localization": {
                "rank": self.local.algebra.rank,
                "idempotent": list(self.local.idempotent.coords),
            },
            "t_p_redundancy": self.redundancy.to_json(),
            "doubling_free_rank_two": self.doubling_free,
            "certificate": self.certificate.to_json(),
            "frobenius_identification": self.identification.to_json(),
            "main_theorem": self.report.to_json(),
        }
        if timings:
            out["timings"] = self.timings
        return out


def run_main_theorem(
    galois: str | GaloisFixture = "s3-level23-p2",
    bound: int = 100,
    m: int = 1,
    frobenius: Callable[[int], int] | None = None,
    residual_override: dict[int, tuple[int, int]] | None = None,
) -> MainTheoremRun:
    """The whole chain on a Galois fixture of a weight-one form.

    The maximal ideal is cut out by the fixture's own Frobenius data, patched
    by ``residual_override``.  ``frobenius`` replaces the classes used on the
    Galois side of the final comparison.  Both hooks exist for negative
    controls.
    """
    t0 = time.perf_counter()
    timings = {}
    fx = load_galois_fixture(galois) if isinstance(galois, str) else galois
    N, p = fx.N, fx.p
    w1 = weight_one_space(fx, bound, m)
    timings["weight1"] = time.perf_counter() - t0

    labels = standard_labels(N, p, bound)
    model = build_hecke_model(w1.space, labels)
    timings["hecke"] = time.perf_counter() - t0

    frob = frobenius or (lambda ell: frobenius_class(fx, ell))
    residual = {}
    for ell in primes_up_to(bound):
        if N % ell:
            g = frobenius_class(fx, ell)
            residual[ell] = (fx.pair.T(g).coords[0], fx.pair.D(g).coords[0])
    residual.update(residual_override or {})
    ideal = build_maximal_ideal(model, residual, n=1)
    local = localize(model.algebra, ideal)
    Tm = local.algebra
    ident = AlgebraHom.structure_map(fx.algebra, Tm)
    report = main_theorem_check(model, local, fx.pair, frob, primes_up_to(bound), ident, N, p)
    redundancy = t_p_redundancy_check(model, p)
    timings["main_theorem"] = time.perf_counter() - t0

    tp = local(model.element(f"T_{p}"))
    dp = local(model.element(f"<{p}>"))
    Stilde, U, incl = doubling_ring(Tm, tp, dp)
    free = is_free_rank_two(Stilde, U, incl)
    to_S = ident.then(incl)
    pair_S = base_change(fx.pair, to_S)
    witness = fx.witness(alpha=U, pair=pair_S)
    certificate = prop_key_certify(witness, [Stilde.one()])
    phi = fx.group.frobenius
    ident_result = frobenius_identification(
        Stilde, U, incl, ident(fx.pair.T(phi)), ident(fx.pair.D(phi)), tp, dp
    )
    timings["doubling"] = time.perf_counter() - t0
    return MainTheoremRun(w1, model, ideal, local, redundancy, report, free, certificate, ident_result, timings)


# ---------------------------------------------------------------------------
# Stabilization and the weight-p construction
# ---------------------------------------------------------------------------


@dataclass
class StabilizationRun:
    p: int
    m: int
    alpha: AlgebraElement
    beta: AlgebraElement
    checked_to: int
    first_mismatch: int | None

    @property
    def ok(self) -> bool:
        return self.first_mismatch is None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "p": self.p,
            "m": self.m,
            "alpha": list(self.alpha.coords),
            "beta": list(self.beta.coords),
            "checked_to": self.checked_to,
            "first_mismatch": self.first_mismatch,
        }


def run_stabilization(
    eta: Sequence[tuple[int, int]] = ((1, 2), (11, 2)),
    level: int = 11,
    p: int = 3,
    m: int = 1,
    weight: int = 2,
) -> StabilizationRun:
    """f = g - beta V g for an eta-quotient eigenform g; check U_p f = alpha f to the Sturm bound at level Np."""
    A = ChainAlgebra.zmod(p, m)
    B = sturm_bound(weight, level * p)
    g = eta_product(eta, p * B, A).with_meta(character=DirichletCharacter.trivial(A, level))
    a_p = g[p]
    f, alpha, beta = stabilize(g, p, a_p, 1, weight)
    n = u_op(f, p, B).first_difference(f.scale(alpha), B)
    return StabilizationRun(p, m, alpha, beta, B, n)


def run_weight_p_check(
    eta: Sequence[tuple[int, int]] = ((1, 1), (23, 1)),
    level: int = 23,
    p: int = 2,
    beta_override: AlgebraElement | None = None,
) -> tuple[EigenCheck, AlgebraElement, AlgebraElement]:
    """h = A g - beta V g over F4 and T_p h = alpha h to the weight-p Sturm bound at level Np."""
    if p != 2:
        raise ValueError("the bundled weight-p construction is the p = 2 case over F4")
    F4 = finite_field_4()
    chi = DirichletCharacter.kronecker(-level, F4)
    B = sturm_bound(p, level * p)
    g = eta_product(eta, p * B, F4).with_meta(character=chi)
    a_p = g[p]
    chi_p = chi(p)
    _, alpha, beta = stabilize(g, p, a_p, chi_p, 1)
    if beta_override is not None:
        beta = beta_override
    return weight_p_eigen_check(g, p, a_p, chi_p, alpha, beta, upto=B), alpha, beta


# ---------------------------------------------------------------------------
# Negative controls
# ---------------------------------------------------------------------------


@dataclass
class ControlResult:
    name: str
    detected: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "detected": self.detected, "detail": self.detail}


def control_perturbed_beta() -> ControlResult:
    """beta replaced by beta + 1: T_p h = alpha h must fail at some coefficient."""
    _, _, beta = run_weight_p_check()
    check, _, _ = run_weight_p_check(beta_override=beta + 1)
    return ControlResult("perturbed beta", not check.ok and check.first_mismatch is not None,
                         f"first mismatch at n = {check.first_mismatch}")


def control_flipped_frobenius(ell: int = 2, galois: str = "s3-level23-p2", bound: int = 100) -> ControlResult:
    """Frob_ell swapped for the identity on the Galois side of the comparison."""
    fx = load_galois_fixture(galois)

    def frob(q: int) -> int:
        return 0 if q == ell else frobenius_class(fx, q)

    run = run_main_theorem(fx, bound, frobenius=frob)
    mism = run.report.mismatches
    return ControlResult(f"flipped Frobenius at {ell}", ell in mism, f"mismatches at {mism}")


def control_non_root_alpha(galois: str = "s3-level23-p2") -> ControlResult:
    """alpha = 1 over F4 is not a root of X^2 + X + 1: condition (2) must be reported."""
    from .ordinary import check_ordinary

    fx = load_galois_fixture(galois)
    F4 = finite_field_4()
    pair = base_change(fx.pair, AlgebraHom.structure_map(fx.algebra, F4))
    violations = check_ordinary(fx.witness(alpha=F4.one(), pair=pair))
    kinds = sorted({v.kind for v in violations})
    return ControlResult("non-root alpha", any(k.startswith("condition (2)") for k in kinds), "; ".join(kinds))


def control_non_proper_ideal(ell: int = 2, galois: str = "s3-level23-p2", bound: int = 100) -> ControlResult:
    """Residual trace at ell flipped: the ideal becomes the unit ideal."""
    from .errors import NotProper

    fx = load_galois_fixture(galois)
    g = frobenius_class(fx, ell)
    t, d = fx.pair.T(g).coords[0], fx.pair.D(g).coords[0]
    try:
        run_main_theorem(fx, bound, residual_override={ell: ((t + 1) % fx.p, d)})
    except NotProper as exc:
        return ControlResult(f"non-proper ideal (t_{ell} flipped)", True, str(exc))
    return ControlResult(f"non-proper ideal (t_{ell} flipped)", False, "ideal accepted")


def negative_controls() -> list[ControlResult]:
    return [control_perturbed_beta(), control_flipped_frobenius(), control_non_root_alpha(), control_non_proper_ideal()]
