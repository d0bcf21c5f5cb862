"""Command-line entry point.

Every command writes a JSON report to stdout (or ``--output``) and a short
human summary to stderr.  Exit codes: 0 success, 1 missing file or other
I/O problem, 2 mathematical validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .determinant import base_change, unramified_test, validate_axioms
from .errors import PseudodetError
from .fixtures import ENV_VAR, load_basis_fixture, load_galois_fixture, read_json, resolve
from .ordinary import check_ordinary, doubling_ring, is_free_rank_two, prop_key_certify

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 1, 2


class Failure(Exception):
    """A validation failure that still carries a (partial) report."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


def _parse_coords(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _parse_eta(text: str) -> list[tuple[int, int]]:
    try:
        return [(int(d), int(r)) for d, r in (item.split(":") for item in text.split(","))]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected d:r,d:r,..., got {text!r}") from None


def _bound(text: str) -> int:
    L = int(text)
    if L < 2:
        raise argparse.ArgumentTypeError("the prime bound must be at least 2")
    return L


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> tuple[dict, str]:
    path = resolve(args.fixture)
    kind = read_json(path).get("kind")
    if kind == "galois":
        fx = load_galois_fixture(path)
        report = {
            "kind": kind,
            "name": fx.name,
            "group_order": fx.group.order,
            "algebra": {"p": fx.algebra.p, "m": fx.algebra.m, "rank": fx.algebra.rank},
            "axiom_violations": [v.to_json() for v in validate_axioms(fx.pair)],
            "frobenius_primes": sorted(fx.frobenius_table),
        }
    elif kind == "basis":
        bf = load_basis_fixture(path, strict=not args.lenient)
        report = {
            "kind": kind,
            "name": bf.name,
            "dimension": bf.space.dimension,
            "precision": bf.space.precision,
            "sturm_bound": bf.space.spec.sturm(),
            "provenance": bf.space.provenance,
        }
    else:
        raise Failure(f"{path}: unknown fixture kind {kind!r}")
    return report, f"{path.name}: valid {kind} fixture"


def cmd_certify(args: argparse.Namespace) -> tuple[dict, str]:
    fx = load_galois_fixture(args.fixture)
    phi = fx.group.frobenius
    report: dict[str, Any] = {"fixture": fx.name}
    if args.doubling:
        Stilde, U, incl = doubling_ring(fx.algebra, fx.pair.T(phi), fx.pair.D(phi))
        pair = base_change(fx.pair, incl)
        alpha = Stilde(args.alpha) if args.alpha else U
        witness = fx.witness(alpha=alpha, pair=pair)
        report["doubling"] = {"rank": Stilde.rank, "free_rank_two": is_free_rank_two(Stilde, U, incl)}
        coefficient_image = [Stilde.one()]
    else:
        alpha = fx.algebra(args.alpha) if args.alpha else None
        witness = fx.witness(alpha=alpha)
        coefficient_image = []
    report["alpha"] = list(witness.alpha.coords)
    violations = check_ordinary(witness)
    report["violations"] = [v.to_json() for v in violations]
    if violations:
        raise Failure(f"not ordinary: {violations[0].kind}", report)
    cert = prop_key_certify(witness, coefficient_image)
    report["certificate"] = cert.to_json()
    report["unramified_test"] = unramified_test(witness.pair).to_json()
    ann = cert.annihilator_basis
    return report, f"{fx.name}: {cert.verdict} (annihilator rank {ann.rank}, direct test {'unramified' if cert.direct_check else 'ramified'})"


def _default_fixtures(args: argparse.Namespace) -> tuple[str, str]:
    galois = args.galois or f"s3-level{args.level}-p{args.prime}"
    basis = args.basis or f"weight2-level{args.level}-mod{args.prime ** args.m}"
    return galois, basis


def _load_pipeline_fixture(args: argparse.Namespace):
    galois, basis = _default_fixtures(args)
    fx = load_galois_fixture(galois)
    if (fx.N, fx.p) != (args.level, args.prime):
        raise Failure(f"{fx.name} has level {fx.N} and p = {fx.p}, not {args.level} and {args.prime}")
    fx.metadata["weight2_basis"] = str(resolve(basis))
    return fx


def cmd_main_theorem(args: argparse.Namespace) -> tuple[dict, str]:
    from .pipeline import run_main_theorem

    fx = _load_pipeline_fixture(args)
    run = run_main_theorem(fx, args.bound, args.m)
    report = run.to_json(timings=args.timings)
    rows = report["main_theorem"]["rows"]
    lines = [f"{'l':>4} {'T(Frob)':>8} {'T_l':>8} {'D(Frob)':>8} {'<l>':>8}"]
    for r in rows:
        mark = "  <- p" if r["is_p"] else ""
        bad = "" if r["T_match"] and r["D_match"] else "  MISMATCH"
        lines.append(f"{r['ell']:>4} {str(r['T_galois']):>8} {str(r['T_hecke']):>8} "
                     f"{str(r['D_galois']):>8} {str(r['D_hecke']):>8}{mark}{bad}")
    summary = "\n".join(lines) + (
        f"\n{len(rows)} primes, {len(run.report.mismatches)} mismatches; "
        f"T_p redundancy {'ok' if run.redundancy.ok else 'FAILED'}; "
        f"certificate {run.certificate.verdict}; "
        f"Frobenius identification {'ok' if run.identification.ok else 'FAILED'}"
    )
    if not run.ok:
        raise Failure(summary, report)
    return report, summary


def cmd_weight1(args: argparse.Namespace) -> tuple[dict, str]:
    from .pipeline import weight_one_space

    fx = _load_pipeline_fixture(args)
    res = weight_one_space(fx, args.bound, args.m)
    return res.to_json(), f"weight-one space mod {args.prime}^{args.m} at level {args.level}: dimension {res.computed.dimension}"


def cmd_doubling(args: argparse.Namespace) -> tuple[dict, str]:
    from .pipeline import run_main_theorem

    fx = _load_pipeline_fixture(args)
    run = run_main_theorem(fx, args.bound, args.m)
    report = {
        "localization_rank": run.local.algebra.rank,
        "free_rank_two": run.doubling_free,
        "certificate": run.certificate.to_json(),
        "frobenius_identification": run.identification.to_json(),
    }
    ok = run.doubling_free and run.identification.ok
    summary = (f"doubling ring free of rank 2: {run.doubling_free}; "
               f"T(phi) = T_p and D(phi) = <p>: {run.identification.ok}")
    if not ok:
        raise Failure(summary, report)
    return report, summary


def cmd_stabilize(args: argparse.Namespace) -> tuple[dict, str]:
    from .pipeline import run_stabilization

    run = run_stabilization(args.eta, args.level, args.prime, args.m, args.weight)
    report = run.to_json()
    summary = (f"U_{args.prime} f = alpha f mod {args.prime}^{args.m} with alpha = {run.alpha.coords[0]}, "
               f"beta = {run.beta.coords[0]}: {'holds' if run.ok else 'FAILS at n = %s' % run.first_mismatch} "
               f"to {run.checked_to}")
    if not run.ok:
        raise Failure(summary, report)
    return report, summary


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _pipeline_flags(p: argparse.ArgumentParser, level: int = 23, prime: int = 2) -> None:
    p.add_argument("--level", type=int, default=level, help="tame level N")
    p.add_argument("--prime", type=int, default=prime, help="residue characteristic p")
    p.add_argument("--m", type=int, default=1, help="work modulo p^m")
    p.add_argument("--bound", type=_bound, default=100, help="check primes l <= bound")
    p.add_argument("--galois", help="Galois fixture (default s3-level<N>-p<p>)")
    p.add_argument("--basis", help="weight-two basis fixture (default weight2-level<N>-mod<p^m>)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudodet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-o", "--output", type=Path, help="write the JSON report here instead of stdout")
    parser.add_argument("-q", "--quiet", action="store_true", help="no human summary on stderr")
    parser.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a fixture and run every validation")
    p.add_argument("fixture", help=f"path or bundled name (directory from ${ENV_VAR})")
    p.add_argument("--lenient", action="store_true", help="accept basis fixtures at small level")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("certify", help="ordinarity check and unramifiedness certificate")
    p.add_argument("fixture")
    p.add_argument("--alpha", type=_parse_coords, help="alpha as comma-separated coordinates")
    p.add_argument("--doubling", action="store_true",
                   help="work over A[U]/(U^2 - T(phi)U + D(phi)) with alpha = U by default")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("main-theorem", help="full comparison of Frobenius and Hecke data")
    _pipeline_flags(p)
    p.set_defaults(func=cmd_main_theorem)

    p = sub.add_parser("weight1", help="weight-one space by the division criterion")
    _pipeline_flags(p)
    p.set_defaults(func=cmd_weight1)

    p = sub.add_parser("doubling", help="doubling ring and Frobenius identification")
    _pipeline_flags(p)
    p.set_defaults(func=cmd_doubling)

    p = sub.add_parser("stabilize", help="ordinary stabilization of an eta-product eigenform")
    p.add_argument("--level", type=int, default=11)
    p.add_argument("--prime", type=int, default=3)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--weight", type=int, default=2)
    p.add_argument("--eta", type=_parse_eta, default=[(1, 2), (11, 2)], help="eta exponents as d:r,d:r")
    p.set_defaults(func=cmd_stabilize)
    return parser


def _emit(payload: dict, output: Path | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    meta = {"command": args.command, "version": __version__}
    try:
        report, summary = args.func(args)
        code, status = EXIT_OK, "ok"
    except Failure as exc:
        report, summary, code, status = exc.report, str(exc), EXIT_INVALID, "invalid"
    except PseudodetError as exc:
        report, summary, code, status = {}, f"{type(exc).__name__}: {exc}", EXIT_INVALID, "invalid"
    except OSError as exc:
        report, summary, code, status = {}, str(exc), EXIT_IO, "io-error"
    payload = {"metadata": meta, "status": status, "report": report}
    if code:
        payload["error"] = summary
    try:
        _emit(payload, args.output)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
