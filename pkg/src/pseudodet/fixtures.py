"""Loading and validating the JSON fixtures (bundled or user supplied)."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .chainring import AlgebraElement, ChainAlgebra, is_prime
from .determinant import (
    DeterminantPair,
    Matrix2,
    as_matrix,
    from_matrix_rep,
    matrices_from_generators,
    validate_axioms,
)
from .errors import (
    InvalidAlgebra,
    InvalidGroup,
    NotARepresentation,
    OutOfRange,
    ParseError,
    PseudodetError,
    ValidationError,
)
from .groupring import CharacterData, GroupModel
from .heckealg import FormSpaceBasis
from .ordinary import OrdinaryWitness

ENV_VAR = "PSEUDODET_FIXTURES"
FORMAT_VERSION = 1


def fixture_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("pseudodet") / "data"))


def resolve(name_or_path: str | os.PathLike) -> Path:
    """A path as given if it exists, otherwise ``<fixture_dir>/<name>.json``."""
    p = Path(name_or_path)
    if p.exists():
        return p
    for cand in (fixture_dir() / p, fixture_dir() / f"{p}.json"):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"fixture not found: {name_or_path} (looked in {fixture_dir()})")


def read_json(path: Path) -> dict:
    text = path.read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: top level must be an object")
    return obj


def _check_header(obj: Mapping, kind: str, path: Path) -> None:
    if obj.get("kind") != kind:
        raise ValidationError(f"{path}: expected kind {kind!r}, found {obj.get('kind')!r}")
    if obj.get("version") != FORMAT_VERSION:
        raise ValidationError(f"{path}: unsupported version {obj.get('version')!r}")


def extend_character(group: GroupModel, gen_values: Mapping[int, AlgebraElement], algebra: ChainAlgebra) -> CharacterData:
    """The character on the subgroup generated by the keys of ``gen_values``."""
    values = {0: algebra.one()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, v in gen_values.items():
                y = group.mul(x, g)
                val = values[x] * v
                if y in values:
                    if values[y] != val:
                        raise ValidationError(f"inertia character is inconsistent at element {y}")
                else:
                    values[y] = val
                    nxt.append(y)
        frontier = nxt
    chi = CharacterData(group, tuple(sorted(values)), values)
    problems = chi.verify()
    if problems:
        raise ValidationError(problems[0])
    return chi


@dataclass
class GaloisFixture:
    name: str
    group: GroupModel
    algebra: ChainAlgebra
    matrices: dict[int, Matrix2] | None
    pair: DeterminantPair
    frobenius_table: dict[int, int]
    bound: int
    N: int
    metadata: dict = field(default_factory=dict)
    witness_data: dict | None = None

    @property
    def p(self) -> int:
        return int(self.metadata.get("p", self.algebra.p))

    def witness(self, alpha: AlgebraElement | None = None, pair: DeterminantPair | None = None) -> OrdinaryWitness:
        """The ordinary witness recorded in the fixture.

        With a base-changed ``pair`` the caller supplies ``alpha``, and psi is
        read off from D on inertia (D(h) = psi(h) for ordinary pairs).
        """
        P = self.pair if pair is None else pair
        A = P.algebra
        native = A == self.algebra
        wd = self.witness_data or {}
        if alpha is None:
            if not native or "alpha" not in wd:
                raise ValidationError(f"{self.name}: no alpha available for this coefficient algebra")
            alpha = A(tuple(wd["alpha"]))
        gen_values = {}
        if native:
            gen_values = {int(h): A(tuple(v)) for h, v in wd.get("psi_on_inertia_gens", [])}
        for h in P.group.inertia_gens:
            gen_values.setdefault(h, P.D(h))
        psi = extend_character(P.group, gen_values, A)
        return OrdinaryWitness(P, alpha, int(wd.get("weight", 1)), psi)


def _matrix(algebra: ChainAlgebra, entries: Any) -> Matrix2:
    if len(entries) == 4:
        return tuple(algebra(tuple(e) if isinstance(e, list) else e).coords for e in entries)  # type: ignore[return-value]
    return as_matrix(algebra, entries)


def load_galois_fixture(name_or_path: str | os.PathLike) -> GaloisFixture:
    path = resolve(name_or_path)
    obj = read_json(path)
    _check_header(obj, "galois", path)
    try:
        group = GroupModel.from_json(obj["group"])
        algebra = ChainAlgebra.from_json(obj["algebra"])
    except (KeyError, TypeError, ValueError, InvalidGroup, InvalidAlgebra) as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    problems = group.verify()
    if problems:
        raise ValidationError(f"{path}: group: {problems[0]}")
    problems = algebra.verify()
    if problems:
        raise ValidationError(f"{path}: algebra: {problems[0]}")
    matrices = None
    try:
        if "generator_images" in obj:
            gen_images = {int(g): _matrix(algebra, m) for g, m in obj["generator_images"]}
            matrices = matrices_from_generators(group, algebra, gen_images)
            pair = from_matrix_rep(group, algebra, matrices)
            if "pair" in obj:
                stored = DeterminantPair.from_json(group, algebra, obj["pair"])
                if stored.T_values != pair.T_values or stored.D_values != pair.D_values:
                    raise ValidationError(f"{path}: stored (T, D) disagree with the representation")
        elif "pair" in obj:
            pair = DeterminantPair.from_json(group, algebra, obj["pair"])
        else:
            raise ValidationError(f"{path}: needs generator_images or pair")
    except NotARepresentation as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: malformed representation data: {exc}") from exc
    violations = validate_axioms(pair)
    if violations:
        v = violations[0]
        raise ValidationError(f"{path}: determinant axiom violated: {v.kind} at {v.elements}")

    frob = obj.get("frobenius", {})
    N = int(frob.get("N", obj.get("metadata", {}).get("N", 1)))
    table: dict[int, int] = {}
    for row in frob.get("table", []):
        ell, g = int(row[0]), int(row[1])
        if not 0 <= g < group.order:
            raise ValidationError(f"{path}: Frobenius at {ell} out of range")
        if len(row) > 2 and group.perms is not None and tuple(row[2]) != group.perms[g]:
            raise ValidationError(f"{path}: Frobenius at {ell}: index and permutation disagree")
        if N % ell == 0:
            raise ValidationError(f"{path}: Frobenius listed at ramified prime {ell}")
        table[ell] = g
    for ell, val in obj.get("character_values", {}).items():
        g = table.get(int(ell))
        if g is not None and pair.D(g) != algebra(int(val)):
            raise ValidationError(f"{path}: D(Frob_{ell}) differs from the character value")
    name = path.stem
    fx = GaloisFixture(
        name, group, algebra, matrices, pair, table, int(frob.get("bound", 0)), N,
        dict(obj.get("metadata", {})), obj.get("witness"),
    )
    return fx


def frobenius_class(fixture: GaloisFixture, ell: int) -> int:
    if not is_prime(ell):
        raise OutOfRange(f"{ell} is not prime")
    if fixture.N % ell == 0:
        raise OutOfRange(f"{ell} divides the level {fixture.N}")
    if ell > fixture.bound or ell not in fixture.frobenius_table:
        raise OutOfRange(f"no Frobenius data for {ell} (bound {fixture.bound})")
    return fixture.frobenius_table[ell]


@dataclass
class BasisFixture:
    name: str
    space: FormSpaceBasis
    expected_dimension: int | None
    metadata: dict = field(default_factory=dict)


def load_basis_fixture(name_or_path: str | os.PathLike, strict: bool = True) -> BasisFixture:
    path = resolve(name_or_path)
    obj = read_json(path)
    _check_header(obj, "basis", path)
    try:
        space = FormSpaceBasis.from_json(obj, strict=strict)
    except PseudodetError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    if not space.is_free():
        raise ValidationError(f"{path}: basis rows are not free over Z/p^m")
    if space.precision < space.spec.sturm():
        raise ValidationError(f"{path}: precision {space.precision} below the Sturm bound {space.spec.sturm()}")
    exp = obj.get("expected_dimension")
    if exp is not None and exp != space.dimension:
        raise ValidationError(f"{path}: dimension {space.dimension} differs from expected {exp}")
    return BasisFixture(path.stem, space, exp, dict(obj.get("metadata", {})))


def bundled_names() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.json"))
