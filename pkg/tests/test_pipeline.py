import pytest

from pseudodet.chainring import finite_field_4
from pseudodet.errors import NotProper
from pseudodet.fixtures import frobenius_class, load_galois_fixture
from pseudodet.pipeline import (
    control_flipped_frobenius,
    control_non_proper_ideal,
    control_non_root_alpha,
    control_perturbed_beta,
    run_main_theorem,
    run_stabilization,
    run_weight_p_check,
    weight_one_space,
)
from pseudodet.qexp import primes_up_to, sturm_bound


@pytest.fixture(scope="module")
def run():
    return run_main_theorem()


def test_weight_one_space():
    fx = load_galois_fixture("s3-level23-p2")
    fx.metadata["weight2_basis"] = "weight2-level23-mod2"
    res = weight_one_space(fx, 100)
    assert res.computed.dimension == res.expected_dimension == 2
    assert res.space.precision == 44 * 97 + 1


def test_hecke_algebra_and_localization(run):
    assert run.model.algebra.rank == 2  # T(1) = F2 x F2
    assert run.local.algebra.rank == 1  # T_m = F2
    assert run.ideal.is_proper()


def test_all_primes_match_including_p(run):
    rows = {r.ell: r for r in run.report.rows}
    assert sorted(rows) == [ell for ell in primes_up_to(100) if ell != 23]
    assert run.report.skipped == [23]
    assert run.report.mismatches == []
    two = rows[2]
    assert two.is_p and two.T_galois == two.T_hecke == [1]


def test_doubling_chain(run):
    assert run.doubling_free
    assert run.certificate.verdict == "Unramified" and run.certificate.direct_check
    assert run.certificate.annihilator_basis.is_zero()
    assert run.identification.ok
    assert run.redundancy.ok
    assert run.ok


def test_report_json_is_stable(run):
    a = run.to_json()
    assert a == run_main_theorem().to_json()
    assert "timings" not in a and "timings" in run.to_json(timings=True)


def test_perturbed_frobenius_is_reported():
    fx = load_galois_fixture("s3-level23-p2")
    # Frob_5 has order 2; replacing it by an order-3 element changes the trace mod 2
    order3 = frobenius_class(fx, 2)
    res = run_main_theorem(fx, frobenius=lambda ell: order3 if ell == 5 else frobenius_class(fx, ell))
    assert res.report.mismatches == [5] and not res.ok


def test_inconsistent_residual_data():
    with pytest.raises(NotProper):
        run_main_theorem(residual_override={3: (0, 1)})


@pytest.mark.parametrize("m, alpha, beta", [(1, 2, 0), (2, 2, 6)])
def test_stabilization(m, alpha, beta):
    res = run_stabilization(m=m)
    assert res.ok and res.checked_to == sturm_bound(2, 33) == 161
    assert (res.alpha.coords[0], res.beta.coords[0]) == (alpha, beta)


def test_weight_p_check():
    check, alpha, beta = run_weight_p_check()
    w = finite_field_4().gen(1)
    assert check.ok and check.precision == 265
    assert {alpha, beta} == {w, w + 1} and alpha != beta


def test_controls_detect_their_errors():
    results = [control_perturbed_beta(), control_flipped_frobenius(), control_non_root_alpha(), control_non_proper_ideal()]
    assert all(r.detected for r in results), [r.to_json() for r in results]
    assert "condition (2)" in results[2].detail
