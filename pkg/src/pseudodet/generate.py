"""Builders for the bundled fixtures.

Everything here is deterministic; ``python -m pseudodet.generate DIR`` rewrites
the JSON files in DIR.  The loaders in :mod:`pseudodet.fixtures` re-validate
every file, so the builders are not trusted at load time.
"""

from __future__ import annotations

import argparse
import json
import math
from fractions import Fraction
from pathlib import Path

from .chainring import ChainAlgebra, left_kernel
from .determinant import as_matrix
from .groupring import group_from_permutations, parse_cycles
from .qexp import (
    DirichletCharacter,
    QExpansion,
    SpaceSpec,
    eisenstein_rational,
    eta_product_integers,
    kronecker_symbol,
    primes_up_to,
    sturm_bound,
)

FROBENIUS_BOUND = 100

# ---------------------------------------------------------------------------
# Integer q-expansions and p-saturation
# ---------------------------------------------------------------------------


def theta_series(a: int, b: int, c: int, precision: int) -> list[int]:
    """sum over (x, y) in Z^2 of q^{a x^2 + b x y + c y^2} for a positive definite form."""
    out = [0] * precision
    disc = 4 * a * c - b * b
    ymax = math.isqrt(4 * a * precision // disc) + 1
    for y in range(-ymax, ymax + 1):
        xmax = math.isqrt(4 * c * precision // disc) + abs(b * y) + 1
        for x in range(-xmax, xmax + 1):
            v = a * x * x + b * x * y + c * y * y
            if v < precision:
                out[v] += 1
    return out


def series_mul(f: list[int], g: list[int]) -> list[int]:
    n = min(len(f), len(g))
    out = [0] * n
    for i, a in enumerate(f[:n]):
        if a:
            for j in range(n - i):
                out[i + j] += a * g[j]
    return out


def expand(f: list[int], d: int) -> list[int]:
    """f(q^d) at the same precision."""
    out = [0] * len(f)
    for n in range(0, len(f), d):
        out[n] = f[n // d]
    return out


def clear_denominators(f: list[Fraction]) -> list[int]:
    den = math.lcm(*(x.denominator for x in f))
    g = [int(x * den) for x in f]
    c = math.gcd(*g)
    return [x // c for x in g] if c else g


def p_saturate(rows: list[list[int]], p: int, max_steps: int = 10000) -> list[list[int]]:
    """Replace integer rows by a basis of (Q-span of rows) ∩ Z_(p)^B, up to units.

    While the rows are dependent mod p, a dependency with a unit coefficient
    gives a combination divisible by p; dividing it out raises the lattice
    index.  The rows must be independent over Q.
    """
    rows = [list(r) for r in rows]
    for _ in range(max_steps):
        K = left_kernel([[x % p for x in r] for r in rows], p, 1)
        if K.is_zero():
            return rows
        c = K.rows[0]
        i = K.pivots[0]
        combo = [sum(cj * r[k] for cj, r in zip(c, rows)) for k in range(len(rows[0]))]
        if not any(combo):
            raise ValueError("rows are dependent over Q")
        rows[i] = [x // p for x in combo]
    raise RuntimeError("p-saturation did not terminate")


def rank_mod(rows: list[list[int]], p: int) -> int:
    from .chainring import howell_form

    return howell_form([[x % p for x in r] for r in rows], p, 1).rank


# ---------------------------------------------------------------------------
# Level 23 (disc -23): theta series of the two reduced forms, eta oracle
# ---------------------------------------------------------------------------

PRINCIPAL = (1, 1, 6)
NONPRINCIPAL = (2, 1, 3)


def represented(form: tuple[int, int, int], n: int) -> bool:
    a, b, c = form
    disc = 4 * a * c - b * b
    ymax = math.isqrt(4 * a * n // disc) + 1
    for y in range(-ymax, ymax + 1):
        xmax = math.isqrt(4 * c * n // disc) + abs(b * y) + 1
        for x in range(-xmax, xmax + 1):
            if a * x * x + b * x * y + c * y * y == n:
                return True
    return False


def frobenius_type_disc23(ell: int) -> str:
    """'identity', 'order3' or 'transposition' for the Frobenius at ell in Gal(H/Q), H the Hilbert class field of Q(sqrt(-23))."""
    if ell == 23:
        raise ValueError("23 is ramified")
    if kronecker_symbol(-23, ell) == -1:
        return "transposition"
    if represented(PRINCIPAL, ell):
        return "identity"
    if represented(NONPRINCIPAL, ell):
        return "order3"
    raise AssertionError(f"split prime {ell} represented by neither form")


def level23_weight2_rows(precision: int) -> list[list[int]]:
    t1 = theta_series(*PRINCIPAL, precision)
    t2 = theta_series(*NONPRINCIPAL, precision)
    return [series_mul(t1, t1), series_mul(t1, t2), series_mul(t2, t2)]


def _eisenstein2_old(levels: list[int], precision: int) -> list[list[int]]:
    one = lambda n: 1  # noqa: E731
    E2 = eisenstein_rational(2, one, one, 1, precision)
    out = []
    for d in levels:
        Ed = [Fraction(0)] * precision
        for n in range(0, precision, d):
            Ed[n] = E2[n // d]
        out.append(clear_denominators([a - d * b for a, b in zip(E2, Ed)]))
    return out


def level46_weight2_rows(precision: int) -> list[list[int]]:
    t = [theta_series(*PRINCIPAL, precision), theta_series(*NONPRINCIPAL, precision)]
    rows = []
    for a, b in ((1, 1), (1, 2), (2, 2)):
        for i in range(2):
            for j in range(2):
                if a == b and j < i:
                    continue
                rows.append(series_mul(expand(t[i], a), expand(t[j], b)))
    rows += _eisenstein2_old([2, 23, 46], precision)
    return rows


def q_basis(rows: list[list[int]], check_prime: int = 10007) -> list[list[int]]:
    """A maximal subset of rows independent over Q (tested modulo a large prime)."""
    chosen: list[list[int]] = []
    for r in rows:
        if rank_mod(chosen + [r], check_prime) > len(chosen):
            chosen.append(r)
    return chosen


def level11_weight2_rows(precision: int) -> list[list[int]]:
    one = lambda n: 1  # noqa: E731
    E2 = eisenstein_rational(2, one, one, 1, precision)
    E = clear_denominators([a - 11 * (E2[n // 11] if n % 11 == 0 else 0) for n, a in enumerate(E2)])
    cusp = eta_product_integers([(1, 2), (11, 2)], precision)
    return [E, cusp]


def saturated_basis(rows: list[list[int]], p: int, expected: int) -> list[list[int]]:
    rows = q_basis(rows)
    if len(rows) != expected:
        raise RuntimeError(f"found rank {len(rows)}, expected {expected}")
    return p_saturate(rows, p)


def basis_fixture(
    rows: list[list[int]], weight: int, level: int, p: int, m: int, character, gamma0_p: bool, notes: str, expected: int
) -> dict:
    A = ChainAlgebra.zmod(p, m)
    precision = len(rows[0])
    spec = SpaceSpec(weight, level, p, m, precision, character, gamma0_p)
    forms = [QExpansion.from_ints(A, r, weight=weight, level=spec.full_level, character=character) for r in rows]
    return {
        "kind": "basis",
        "version": 1,
        "metadata": {"notes": notes, "sturm_bound": spec.sturm()},
        "spec": spec.to_json(),
        "provenance": "EisensteinProducts",
        "expected_dimension": expected,
        "forms": [f.to_json() for f in forms],
    }


def build_basis_fixtures() -> dict[str, dict]:
    out = {}
    F2 = ChainAlgebra.zmod(2, 1)
    chi23_2 = DirichletCharacter.trivial(F2, 23)
    B23 = sturm_bound(2, 23)
    rows = saturated_basis(level23_weight2_rows(B23), 2, 3)
    out["weight2-level23-mod2"] = basis_fixture(
        rows, 2, 23, 2, 1, chi23_2, False,
        "2-saturated span of products of the theta series of x^2+xy+6y^2 and 2x^2+xy+3y^2; "
        "trivial character mod 2 because the quadratic character mod 23 is trivial mod 2",
        3,
    )
    B46 = sturm_bound(2, 46)
    rows = saturated_basis(level46_weight2_rows(B46), 2, 8)
    out["weight2-level46-mod2"] = basis_fixture(
        rows, 2, 23, 2, 1, chi23_2, True,
        "2-saturated span of theta products theta_i(q^a) theta_j(q^b), a, b in {1, 2}, "
        "and E2(q) - d E2(q^d), d in {2, 23, 46}",
        8,
    )
    Z9 = ChainAlgebra.zmod(3, 2)
    B11 = sturm_bound(2, 33) * 3 + 3
    rows = saturated_basis(level11_weight2_rows(B11), 3, 2)
    out["weight2-level11-mod9"] = basis_fixture(
        rows, 2, 11, 3, 2, DirichletCharacter.trivial(Z9, 11), False,
        "3-saturated span of E2(q) - 11 E2(q^11) and eta(q)^2 eta(q^11)^2",
        2,
    )
    return out


# ---------------------------------------------------------------------------
# Galois fixtures
# ---------------------------------------------------------------------------


def _wrap(kind: str, metadata: dict, body: dict) -> dict:
    return {"kind": kind, "version": 1, "metadata": metadata, **body}


def _matrix_json(M) -> list[list[int]]:
    return [list(v) for v in M]


def s3_level23(ramified: bool = False) -> dict:
    """S3 = GL2(F2) as the image of the Galois representation attached to eta(q)eta(q^23) mod 2."""
    transposition = parse_cycles([[1, 2]], 3)
    three_cycle = parse_cycles([[1, 2, 3]], 3)
    G = group_from_permutations([transposition, three_cycle])
    F2 = ChainAlgebra.zmod(2, 1)
    t, c = G.index_of_perm(transposition), G.index_of_perm(three_cycle)
    images = {t: as_matrix(F2, [[0, 1], [1, 0]]), c: as_matrix(F2, [[0, 1], [1, 1]])}
    if ramified:
        # at 23 the decomposition group is the inertia group <t>
        G = G.with_marking(inertia_gens=(t,), frobenius=0, decomposition_gens=(t,))
    else:
        G = G.with_marking(inertia_gens=(), frobenius=c, decomposition_gens=(c,))
    classes = {"identity": 0, "order3": c, "transposition": t}
    table = []
    for ell in primes_up_to(FROBENIUS_BOUND):
        if ell == 23:
            continue
        g = classes[frobenius_type_disc23(ell)]
        table.append([ell, g, list(G.perms[g])])
    eta = eta_product_integers([(1, 1), (23, 1)], FROBENIUS_BOUND + 1)
    meta = {
        "description": "mod-2 representation of the dihedral weight-one form eta(q)eta(q^23); image S3 = GL2(F2)",
        "source_form": "eta(q)eta(q^23)",
        "N": 23,
        "p": 2,
        "weight": 1,
        "character": "quadratic character mod 23 (trivial mod 2)",
        "frobenius_oracle": "ell inert in Q(sqrt(-23)) -> transposition; split and represented by "
        "x^2+xy+6y^2 -> identity; split and represented by 2x^2+xy+3y^2 -> 3-cycle",
        "hecke_eigenvalues": {str(ell): eta[ell] for ell in primes_up_to(FROBENIUS_BOUND)},
        "weight1_candidates": [{"hasse": 2}, {"eta": [[1, 1], [23, 1]]}],
        "weight1_expected_dimension": 2,
        "weight2_basis": "weight2-level23-mod2",
    }
    if ramified:
        meta["description"] = "negative control: the same S3 representation with a transposition marked as inertia"
    body = {
        "group": G.to_json(),
        "algebra": F2.to_json(),
        "generator_images": [[G.index_of_perm(g), _matrix_json(images[G.index_of_perm(g)])] for g in G.perm_gens],
        "frobenius": {"bound": FROBENIUS_BOUND, "N": 23, "table": table},
        "character_values": {str(ell): 1 for ell, _, _ in table},
    }
    return _wrap("galois", meta, body)


def ramified_control() -> dict:
    """(Z/9)^x x (Z/4)^x acting by diag(psi, lambda) over Z/9.

    psi(a, b) = a^2 mod 9 is ramified at 3; lambda(a, b) = chi_{-4}(b).  With
    phi = (1, 3) the eigenvalue alpha = lambda(phi) = -1 satisfies the
    ordinary conditions with inertia acting through psi on the sub line.
    """
    # points 0..5: (Z/9)^x = <2>, a 6-cycle; points 6, 7: (Z/4)^x = {1, 3}
    six = tuple([1, 2, 3, 4, 5, 0, 6, 7])
    two = tuple([0, 1, 2, 3, 4, 5, 7, 6])
    G = group_from_permutations([six, two])
    Z9 = ChainAlgebra.zmod(3, 2)
    gen_a, gen_b = G.index_of_perm(six), G.index_of_perm(two)
    # generator 2 of (Z/9)^x: psi = 2^2 = 4; lambda trivial.  (1, 3): psi = 1, lambda = -1.
    images = {
        gen_a: as_matrix(Z9, [[4, 0], [0, 1]]),
        gen_b: as_matrix(Z9, [[1, 0], [0, 8]]),
    }
    G = G.with_marking(inertia_gens=(gen_a,), frobenius=gen_b, decomposition_gens=(gen_a, gen_b))

    def element_of(ell: int) -> int:
        # residue of ell mod 9 as a power of 2, residue mod 4 as a power of 3
        k = next(k for k in range(6) if pow(2, k, 9) == ell % 9)
        j = 0 if ell % 4 == 1 else 1
        return G.prod(*([gen_a] * k + [gen_b] * j))

    table = []
    for ell in primes_up_to(FROBENIUS_BOUND):
        if ell in (2, 3):
            continue
        g = element_of(ell)
        table.append([ell, g, list(G.perms[g])])
    meta = {
        "description": "negative control: reducible psi + lambda with psi(a) = a^2 mod 9 ramified at 3",
        "N": 4,
        "p": 3,
        "m": 2,
        "weight": 3,
        "frobenius_oracle": "ell -> (ell mod 9, ell mod 4) in (Z/9)^x x (Z/4)^x",
    }
    body = {
        "group": G.to_json(),
        "algebra": Z9.to_json(),
        "generator_images": [[G.index_of_perm(g), _matrix_json(images[G.index_of_perm(g)])] for g in G.perm_gens],
        "frobenius": {"bound": FROBENIUS_BOUND, "N": 4, "table": table},
        "witness": {"alpha": [8], "weight": 3, "psi_on_inertia_gens": [[gen_a, [4]]]},
    }
    return _wrap("galois", meta, body)


def ordinary_borel_f7() -> dict:
    """Upper-triangular model over F7 for the matrix ordinarity oracle.

    Inertia is generated by h = [[2, 1], [0, 1]] (psi(h) = 2) and phi =
    [[3, 1], [0, 5]] has eigenvalue alpha = 5 on the quotient line.
    """
    F7 = ChainAlgebra.zmod(7, 1)
    # realize the group generated by h and phi as permutations of F7^2 \ {0}
    vecs = [(x, y) for x in range(7) for y in range(7) if (x, y) != (0, 0)]
    index = {v: i for i, v in enumerate(vecs)}

    def perm(M):
        (a, b), (c, d) = M
        return tuple(index[((a * x + b * y) % 7, (c * x + d * y) % 7)] for x, y in vecs)

    h, phi = [[2, 1], [0, 1]], [[3, 1], [0, 5]]
    G = group_from_permutations([perm(h), perm(phi)])
    gh, gphi = G.index_of_perm(perm(h)), G.index_of_perm(perm(phi))
    G = G.with_marking(inertia_gens=(gh,), frobenius=gphi, decomposition_gens=(gh, gphi))
    body = {
        "group": G.to_json(),
        "algebra": F7.to_json(),
        "generator_images": [[gh, [[2], [1], [0], [1]]], [gphi, [[3], [1], [0], [5]]]],
        "witness": {"alpha": [5], "weight": 7, "psi_on_inertia_gens": [[gh, [2]]]},
    }
    meta = {
        "description": "Borel subgroup model over F7: rho|_I = [[psi, *], [0, 1]], rho(phi) = [[3, 1], [0, 5]]",
        "p": 7,
    }
    return _wrap("galois", meta, body)


def build_galois_fixtures() -> dict[str, dict]:
    return {
        "s3-level23-p2": s3_level23(),
        "s3-level23-ramified": s3_level23(ramified=True),
        "ramified-control": ramified_control(),
        "ordinary-borel-f7": ordinary_borel_f7(),
    }


def write_all(directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, obj in {**build_galois_fixtures(), **build_basis_fixtures()}.items():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
        written.append(path)
    return written


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description="Regenerate the bundled fixtures")
    ap.add_argument("directory", type=Path, nargs="?", default=Path(__file__).parent / "data")
    args = ap.parse_args(argv)
    for path in write_all(args.directory):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
