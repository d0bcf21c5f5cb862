"""Truncated q-expansions over chain-ring algebras and the classical operators on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .chainring import AlgebraElement, ChainAlgebra, Vector, is_prime, quadratic_roots
from .errors import (
    InsufficientPrecision,
    NonIntegralConstantTerm,
    NonIntegralExponent,
    NotOrdinary,
    ParityMismatch,
    RequiresCharP,
    RootsNotRational,
)


def kronecker_symbol(a: int, n: int) -> int:
    """(a/n) for any integer a and n >= 1."""
    if n <= 0:
        raise ValueError("kronecker_symbol needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def primes_up_to(n: int) -> list[int]:
    return [ell for ell in range(2, n + 1) if is_prime(ell)]


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A character mod ``modulus`` with values in ``algebra``.

    ``lift`` optionally records integer values (for real characters); it is
    what the Eisenstein constant term is computed from, since a mod-p value
    table forgets the character (the quadratic character mod 23 is trivial
    mod 2).
    """

    modulus: int
    algebra: ChainAlgebra
    table: Mapping[int, Vector]
    lift: Mapping[int, int] | None = None

    def __call__(self, n: int) -> AlgebraElement:
        v = self.table.get(n % self.modulus)
        return AlgebraElement(self.algebra, v if v is not None else self.algebra.zero_vec())

    def int_value(self, n: int) -> int:
        if self.lift is None:
            raise ValueError("character has no integer lift")
        return self.lift.get(n % self.modulus, 0)

    @classmethod
    def from_function(
        cls, modulus: int, algebra: ChainAlgebra, f: Callable[[int], int], integral: bool = True
    ) -> DirichletCharacter:
        units = [a for a in range(modulus) if math.gcd(a, modulus) == 1]
        table = {a: algebra.scalar_vec(f(a)) for a in units}
        lift = {a: f(a) for a in units} if integral else None
        return cls(modulus, algebra, table, lift)

    @classmethod
    def trivial(cls, algebra: ChainAlgebra, modulus: int = 1) -> DirichletCharacter:
        return cls.from_function(modulus, algebra, lambda a: 1)

    @classmethod
    def kronecker(cls, D: int, algebra: ChainAlgebra) -> DirichletCharacter:
        """n -> (D/n), a character mod |D| for a fundamental discriminant D."""
        return cls.from_function(abs(D), algebra, lambda a: kronecker_symbol(D, a))

    @cached_property
    def conductor(self) -> int:
        N = self.modulus
        units = [a for a in range(N) if math.gcd(a, N) == 1]
        for d in sorted(d for d in range(1, N + 1) if N % d == 0):
            if all(self.table[a] == self.algebra.unit for a in units if a % d == 1 % d):
                return d
        return N

    def is_trivial(self) -> bool:
        if self.lift is not None:
            return all(v == 1 for v in self.lift.values())
        return all(v == self.algebra.unit for v in self.table.values())

    def parity(self) -> int:
        """chi(-1) as an integer; needs the lift."""
        return self.int_value(-1) if self.modulus > 1 else 1

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        if other.algebra != self.algebra:
            raise ValueError("characters over different algebras")
        N = self.modulus * other.modulus // math.gcd(self.modulus, other.modulus)
        A = self.algebra
        table, lift = {}, {} if self.lift is not None and other.lift is not None else None
        for a in range(N):
            if math.gcd(a, N) == 1:
                table[a] = A.mul(self(a).coords, other(a).coords)
                if lift is not None:
                    lift[a] = self.int_value(a) * other.int_value(a)
        return DirichletCharacter(N, A, table, lift)

    def verify(self) -> list[str]:
        problems = []
        N, A = self.modulus, self.algebra
        units = [a for a in range(N) if math.gcd(a, N) == 1]
        if set(self.table) != set(units):
            return ["value table must cover exactly the residues prime to the modulus"]
        if self.table[1 % N] != A.unit:
            problems.append("chi(1) != 1")
        for a in units:
            if not A.is_unit_vec(self.table[a]):
                problems.append(f"chi({a}) is not a unit")
            for b in units:
                if self.table[a * b % N] != A.mul(self.table[a], self.table[b]):
                    problems.append(f"not multiplicative at ({a}, {b})")
                    return problems
        return problems

    def to_json(self) -> dict:
        out = {"modulus": self.modulus, "values": [[a, list(v)] for a, v in sorted(self.table.items())]}
        if self.lift is not None:
            out["lift"] = [[a, v] for a, v in sorted(self.lift.items())]
        return out

    @classmethod
    def from_json(cls, algebra: ChainAlgebra, obj: Mapping) -> DirichletCharacter:
        q = algebra.modulus
        table = {int(a) % obj["modulus"]: tuple(int(x) % q for x in v) for a, v in obj["values"]}
        lift = {int(a): int(v) for a, v in obj["lift"]} if "lift" in obj else None
        return cls(int(obj["modulus"]), algebra, table, lift)


# Dense products of integer sequences mod q by packing them into one big integer.

def _convolve(a: Sequence[int], b: Sequence[int], n: int, q: int) -> list[int]:
    a, b = list(a[:n]), list(b[:n])
    while a and not a[-1]:
        a.pop()
    while b and not b[-1]:
        b.pop()
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) <= 8:
        out = [0] * n
        small, big = (a, b) if len(a) <= len(b) else (b, a)
        for i, x in enumerate(small):
            if x:
                for j in range(min(len(big), n - i)):
                    out[i + j] += x * big[j]
        return [x % q for x in out]
    width = -(-(2 * (q - 1).bit_length() + min(len(a), len(b)).bit_length() + 1) // 4)
    fmt = f"0{width}x"
    A = int("".join(format(x, fmt) for x in reversed(a)), 16)
    B = int("".join(format(x, fmt) for x in reversed(b)), 16)
    s = format(A * B, "x")
    total = len(a) + len(b) - 1
    s = s.zfill(total * width)
    out = []
    for i in range(min(n, total)):
        end = len(s) - i * width
        out.append(int(s[end - width:end], 16) % q)
    return out + [0] * (n - len(out))


@dataclass(frozen=True, eq=False)
class QExpansion:
    """sum_{n < precision} a_n q^n with coefficients in ``algebra``.

    Reading a coefficient at or beyond the precision raises.
    """

    algebra: ChainAlgebra
    coeffs: tuple[Vector, ...]
    weight: int | Fraction = 0
    level: int = 1
    character: DirichletCharacter | None = None

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a q-expansion needs precision >= 1")

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.coeff(n))

    def coeff(self, n: int) -> Vector:
        if not 0 <= n < self.precision:
            raise InsufficientPrecision(f"coefficient {n} requested at precision {self.precision}")
        return self.coeffs[n]

    def _meta(self, **changes) -> dict:
        meta = {"weight": self.weight, "level": self.level, "character": self.character}
        meta.update(changes)
        return meta

    @classmethod
    def from_ints(cls, algebra: ChainAlgebra, values: Iterable[int], **meta) -> QExpansion:
        return cls(algebra, tuple(algebra.scalar_vec(int(v)) for v in values), **meta)

    @classmethod
    def from_elements(cls, algebra: ChainAlgebra, values: Iterable[AlgebraElement | int], **meta) -> QExpansion:
        return cls(algebra, tuple(algebra(v).coords for v in values), **meta)

    @classmethod
    def constant(cls, algebra: ChainAlgebra, c: int | AlgebraElement, precision: int, **meta) -> QExpansion:
        zero = algebra.zero_vec()
        return cls(algebra, (algebra(c).coords,) + (zero,) * (precision - 1), **meta)

    @classmethod
    def monomial(cls, algebra: ChainAlgebra, n: int, precision: int, **meta) -> QExpansion:
        c = [algebra.zero_vec()] * precision
        if n < precision:
            c[n] = algebra.unit
        return cls(algebra, tuple(c), **meta)

    def truncate(self, precision: int) -> QExpansion:
        if precision > self.precision:
            raise InsufficientPrecision(f"cannot extend precision {self.precision} to {precision}")
        return QExpansion(self.algebra, self.coeffs[:precision], **self._meta())

    def with_meta(self, **changes) -> QExpansion:
        return QExpansion(self.algebra, self.coeffs, **self._meta(**changes))

    def base_change(self, f) -> QExpansion:
        """Apply an AlgebraHom to every coefficient; the character is dropped."""
        return QExpansion(
            f.target, tuple(f.apply_vec(c) for c in self.coeffs), **self._meta(character=None)
        )

    def _binary(self, other: QExpansion, op) -> QExpansion:
        if other.algebra != self.algebra:
            raise ValueError("q-expansions over different algebras")
        B = min(self.precision, other.precision)
        return QExpansion(self.algebra, tuple(op(a, b) for a, b in zip(self.coeffs[:B], other.coeffs[:B])), **self._meta())

    def __add__(self, other: QExpansion) -> QExpansion:
        return self._binary(other, self.algebra.add)

    def __sub__(self, other: QExpansion) -> QExpansion:
        return self._binary(other, self.algebra.sub)

    def __neg__(self) -> QExpansion:
        return QExpansion(self.algebra, tuple(self.algebra.neg(a) for a in self.coeffs), **self._meta())

    def scale(self, c: int | AlgebraElement) -> QExpansion:
        v = self.algebra(c).coords
        return QExpansion(self.algebra, tuple(self.algebra.mul(v, a) for a in self.coeffs), **self._meta())

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def first_difference(self, other: QExpansion, upto: int | None = None) -> int | None:
        """Smallest n below the common precision (or ``upto``) where the two differ."""
        B = min(self.precision, other.precision)
        if upto is not None:
            if upto > B:
                raise InsufficientPrecision(f"comparison to {upto} needs both precisions >= {upto}")
            B = upto
        for n in range(B):
            if self.coeffs[n] != other.coeffs[n]:
                return n
        return None

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.coeffs)

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if any(c):
                return n
        return None

    def row(self, precision: int | None = None) -> list[int]:
        """Coefficients flattened to integers, coordinate-major per coefficient."""
        B = self.precision if precision is None else precision
        if B > self.precision:
            raise InsufficientPrecision(f"row of length {B} from precision {self.precision}")
        return [x for c in self.coeffs[:B] for x in c]

    @classmethod
    def from_row(cls, algebra: ChainAlgebra, row: Sequence[int], **meta) -> QExpansion:
        r = algebra.rank
        return cls(algebra, tuple(tuple(row[i:i + r]) for i in range(0, len(row), r)), **meta)

    def coordinate_series(self, i: int) -> list[int]:
        return [c[i] for c in self.coeffs]

    def __repr__(self) -> str:
        terms = []
        for n, c in enumerate(self.coeffs[:12]):
            if any(c):
                a = repr(AlgebraElement(self.algebra, c))
                a = f"({a})" if "+" in a else a
                terms.append(a if n == 0 else f"{a}*q^{n}")
        return " + ".join(terms or ["0"]) + f" + O(q^{self.precision})"

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.to_json(),
            "weight": str(self.weight) if isinstance(self.weight, Fraction) else self.weight,
            "level": self.level,
            "character": None if self.character is None else self.character.to_json(),
            "precision": self.precision,
            "coeffs": [list(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: Mapping, algebra: ChainAlgebra | None = None) -> QExpansion:
        A = ChainAlgebra.from_json(obj["algebra"]) if algebra is None else algebra
        chi = None if obj.get("character") is None else DirichletCharacter.from_json(A, obj["character"])
        coeffs = tuple(tuple(int(x) % A.modulus for x in c) for c in obj["coeffs"])
        if "precision" in obj and obj["precision"] != len(coeffs):
            raise ValueError("declared precision does not match the coefficient count")
        w = obj.get("weight", 0)
        w = Fraction(w) if isinstance(w, str) else int(w)
        return cls(A, coeffs, weight=w, level=int(obj.get("level", 1)), character=chi)


def _combine_characters(a: DirichletCharacter | None, b: DirichletCharacter | None) -> DirichletCharacter | None:
    if a is None or b is None:
        return None
    return a * b


def mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product to the smaller precision; weights add, levels lcm, characters multiply."""
    if f.algebra != g.algebra:
        raise ValueError("q-expansions over different algebras")
    A = f.algebra
    B = min(f.precision, g.precision)
    r, q = A.rank, A.modulus
    fs = [f.coordinate_series(i)[:B] for i in range(r)]
    gs = [g.coordinate_series(j)[:B] for j in range(r)]
    out = [[0] * B for _ in range(r)]
    for i in range(r):
        if not any(fs[i]):
            continue
        for j in range(r):
            if not any(gs[j]):
                continue
            conv = _convolve(fs[i], gs[j], B, q)
            for k, c in enumerate(A.table[i][j]):
                if c:
                    row = out[k]
                    for n, x in enumerate(conv):
                        if x:
                            row[n] += c * x
    coeffs = tuple(tuple(out[k][n] % q for k in range(r)) for n in range(B))
    return QExpansion(
        A,
        coeffs,
        weight=f.weight + g.weight,
        level=math.lcm(f.level, g.level),
        character=_combine_characters(f.character, g.character),
    )


# Eta products


def _pentagonal(limit: int, step: int = 1) -> dict[int, int]:
    """prod_{n >= 1} (1 - q^{step n}) truncated below ``limit``, as a sparse dict."""
    out = {0: 1}
    k = 1
    while True:
        e1 = step * k * (3 * k - 1) // 2
        if e1 >= limit:
            break
        sign = -1 if k % 2 else 1
        out[e1] = sign
        e2 = step * k * (3 * k + 1) // 2
        if e2 < limit:
            out[e2] = sign
        k += 1
    return out


def eta_product_integers(terms: Sequence[tuple[int, int]], precision: int) -> list[int]:
    """Integer coefficients of prod_d eta(q^d)^{r_d} below ``precision``."""
    total = sum(d * r for d, r in terms)
    if total % 24:
        raise NonIntegralExponent(f"leading exponent {total}/24 is not an integer")
    shift = total // 24
    if shift < 0:
        raise NonIntegralExponent("negative leading exponent")
    L = max(precision - shift, 0)
    series = [1] + [0] * max(L - 1, 0) if L else []
    for d, r in terms:
        if d < 1:
            raise ValueError("eta-product levels must be positive")
        P = _pentagonal(L, d)
        for _ in range(abs(r)):
            if r > 0:
                new = [0] * L
                for e, s in P.items():
                    for n in range(L - e):
                        if series[n]:
                            new[n + e] += s * series[n]
                series = new
            else:
                # divide by P, whose constant term is 1
                for n in range(L):
                    acc = series[n]
                    for e, s in P.items():
                        if e and e <= n:
                            acc -= s * series[n - e]
                    series[n] = acc
    return [0] * min(shift, precision) + series


def eta_product(terms: Sequence[tuple[int, int]], precision: int, algebra: ChainAlgebra) -> QExpansion:
    ints = eta_product_integers(terms, precision)
    wsum = sum(r for _, r in terms)
    weight = wsum // 2 if wsum % 2 == 0 else Fraction(wsum, 2)
    level = math.lcm(*(d for d, _ in terms))
    return QExpansion.from_ints(algebra, ints, weight=weight, level=level)


# Eisenstein series


def bernoulli_numbers(n: int) -> list[Fraction]:
    """B_0..B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for k in range(1, n + 1):
        B.append(-sum(math.comb(k + 1, j) * B[j] for j in range(k)) / (k + 1))
    return B


def bernoulli_polynomial(k: int, x: Fraction) -> Fraction:
    B = bernoulli_numbers(k)
    return sum(math.comb(k, j) * B[j] * x ** (k - j) for j in range(k + 1))


def generalized_bernoulli(k: int, chi: Callable[[int], int], period: int) -> Fraction:
    """B_{k,chi} = f^{k-1} sum_{a=1}^{f} chi(a) B_k(a/f) for any period f of chi."""
    f = period
    return Fraction(f) ** (k - 1) * sum(chi(a) * bernoulli_polynomial(k, Fraction(a, f)) for a in range(1, f + 1))


def eisenstein_rational(k: int, chi1: Callable[[int], int], chi2: Callable[[int], int], chi2_period: int, precision: int, chi1_trivial: bool = True) -> list[Fraction]:
    """Rational coefficients of E_k(chi1, chi2) with a_0 = -B_{k,chi2}/(2k) when chi1 is trivial."""
    coeffs = [Fraction(0)] * precision
    if chi1_trivial and precision:
        coeffs[0] = -generalized_bernoulli(k, chi2, chi2_period) / (2 * k)
    for n in range(1, precision):
        s = 0
        for d in range(1, math.isqrt(n) + 1):
            if n % d == 0:
                e = n // d
                s += chi2(d) * d ** (k - 1) * chi1(e)
                if e != d:
                    s += chi2(e) * e ** (k - 1) * chi1(d)
        coeffs[n] = Fraction(s)
    return coeffs


def eisenstein(k: int, chi1: DirichletCharacter, chi2: DirichletCharacter, precision: int) -> QExpansion:
    """a_n = sum_{d | n} chi2(d) d^{k-1} chi1(n/d); a_0 = -B_{k,chi2}/(2k), or 0 if chi1 is nontrivial.

    The constant term is computed from the characters' integer lifts and must
    be p-integral.
    """
    A = chi1.algebra
    if chi2.algebra != A:
        raise ValueError("characters over different algebras")
    if k < 1:
        raise ValueError("weight must be positive")
    if chi1.lift is None or chi2.lift is None:
        raise ValueError("Eisenstein series need integer lifts of the characters")
    if chi1.parity() * chi2.parity() != (-1) ** k:
        raise ParityMismatch(f"chi1 chi2 (-1) != (-1)^{k}")
    q, p = A.modulus, A.p
    coeffs = [A.zero_vec()] * precision
    if chi1.is_trivial():
        a0 = -generalized_bernoulli(k, chi2.int_value, chi2.modulus) / (2 * k)
        if a0.denominator % p == 0:
            raise NonIntegralConstantTerm(f"constant term {a0} is not {p}-integral")
        coeffs[0] = A.scalar_vec(a0.numerator * pow(a0.denominator, -1, q))
    for n in range(1, precision):
        s = A.zero_vec()
        for d in range(1, n + 1):
            if n % d == 0:
                term = A.mul(chi2(d).coords, chi1(n // d).coords)
                s = A.add(s, A.smul(d ** (k - 1), term))
        coeffs[n] = s
    return QExpansion(
        A,
        tuple(coeffs),
        weight=k,
        level=chi1.modulus * chi2.modulus,
        character=chi1 * chi2,
    )


def hasse(p: int, precision: int, algebra: ChainAlgebra | None = None) -> QExpansion:
    """The Hasse invariant: weight p - 1, q-expansion 1."""
    A = ChainAlgebra.zmod(p, 1) if algebra is None else algebra
    if A.p != p or A.m != 1:
        raise RequiresCharP("the Hasse invariant lives in characteristic p")
    return QExpansion.constant(A, 1, precision, weight=p - 1, level=1, character=DirichletCharacter.trivial(A))


# Operators


def v_op(f: QExpansion, p: int) -> QExpansion:
    """a_n(Vf) = a_{n/p}; output precision p * precision."""
    zero = f.algebra.zero_vec()
    out = [zero] * (p * f.precision)
    for n, c in enumerate(f.coeffs):
        out[n * p] = c
    return QExpansion(f.algebra, tuple(out), **f._meta(level=f.level * p))


def _output_precision(B: int, step: int, wanted: int | None) -> int:
    avail = (B - 1) // step + 1
    if wanted is None:
        return avail
    if wanted > avail:
        raise InsufficientPrecision(f"precision {wanted} needs input precision {step * (wanted - 1) + 1}, have {B}")
    return wanted


def u_op(f: QExpansion, p: int, precision: int | None = None) -> QExpansion:
    """a_n(Uf) = a_{np}."""
    B = _output_precision(f.precision, p, precision)
    return QExpansion(f.algebra, tuple(f.coeffs[n * p] for n in range(B)), **f._meta(level=math.lcm(f.level, p)))


def t_ell(
    f: QExpansion, ell: int, k: int | None = None, chi: DirichletCharacter | None = None, precision: int | None = None
) -> QExpansion:
    """a_n(T f) = a_{n ell} + chi(ell) ell^{k-1} a_{n/ell}."""
    k = f.weight if k is None else k
    chi = f.character if chi is None else chi
    if chi is None:
        raise ValueError("t_ell needs a character")
    if int(k) != k or k < 1:
        raise ValueError("t_ell needs a positive integral weight")
    A = f.algebra
    B = _output_precision(f.precision, ell, precision)
    c = A.smul(ell ** (int(k) - 1), chi(ell).coords)
    out = []
    for n in range(B):
        v = f.coeffs[n * ell]
        if n % ell == 0 and any(c):
            v = A.add(v, A.mul(c, f.coeffs[n // ell]))
        out.append(v)
    return QExpansion(A, tuple(out), **f._meta())


def diamond(f: QExpansion, d: int, chi: DirichletCharacter | None = None) -> QExpansion:
    """<d> acts by chi(d) on a single-character space."""
    chi = f.character if chi is None else chi
    if chi is None:
        raise ValueError("diamond operators need the space's character")
    return f.scale(chi(d))


def sturm_bound(k: int, N: int) -> int:
    """ceil(k * idx / 12) + 1 with idx = N^2 prod_{l | N}(1 - 1/l^2), idx = 1 at N = 1."""
    if N < 1 or k < 1:
        raise ValueError("sturm_bound needs k, N >= 1")
    idx = Fraction(N * N)
    for ell in prime_divisors(N):
        idx *= 1 - Fraction(1, ell * ell)
    return math.ceil(k * idx / 12) + 1


@dataclass(frozen=True)
class SpaceSpec:
    """Weight, tame level N (prime to p), coefficients Z/p^m, precision.

    ``gamma0_p`` marks the level Gamma0(p) ∩ Gamma1(N) spaces of weight-p
    stabilizations.  Levels below 5 are only allowed with ``strict=False``.
    """

    weight: int
    level: int
    p: int
    m: int
    precision: int
    character: DirichletCharacter | None = None
    gamma0_p: bool = False
    strict: bool = True

    def __post_init__(self) -> None:
        if self.level % self.p == 0:
            raise ValueError(f"tame level {self.level} must be prime to p = {self.p}")
        if self.strict and self.level < 5:
            raise ValueError("level must be at least 5")
        if self.precision < 1:
            raise ValueError("precision must be positive")

    @property
    def full_level(self) -> int:
        return self.level * self.p if self.gamma0_p else self.level

    def sturm(self) -> int:
        return sturm_bound(self.weight, self.full_level)

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "level": self.level,
            "p": self.p,
            "m": self.m,
            "precision": self.precision,
            "character": None if self.character is None else self.character.to_json(),
            "gamma0_p": self.gamma0_p,
        }

    @classmethod
    def from_json(cls, obj: Mapping, algebra: ChainAlgebra | None = None, strict: bool = True) -> SpaceSpec:
        A = ChainAlgebra.zmod(obj["p"], obj["m"]) if algebra is None else algebra
        chi = None if obj.get("character") is None else DirichletCharacter.from_json(A, obj["character"])
        return cls(
            int(obj["weight"]), int(obj["level"]), int(obj["p"]), int(obj["m"]), int(obj["precision"]),
            chi, bool(obj.get("gamma0_p", False)), strict,
        )


def stabilize(
    g: QExpansion,
    p: int,
    a_p: int | AlgebraElement,
    chi_p: int | AlgebraElement,
    k: int,
    alpha: AlgebraElement | None = None,
) -> tuple[QExpansion, AlgebraElement, AlgebraElement]:
    """f = g - beta V g where alpha, beta are the roots of X^2 - a_p X + p^{k-1} chi(p).

    alpha is the unit root.  If both roots are units (possible mod p) the
    first one found is used unless ``alpha`` is given.
    """
    A = g.algebra
    ap = A(a_p)
    if not ap.is_unit():
        raise NotOrdinary("a_p is not a unit")
    c = A(chi_p) * (p ** (k - 1))
    roots = quadratic_roots(A, ap, c)
    if not roots:
        raise RootsNotRational("X^2 - a_p X + p^{k-1} chi(p) has no root in the coefficient algebra")
    if alpha is None:
        units = [r for r in roots if r.is_unit()]
        if not units:
            raise NotOrdinary("no unit root")
        alpha = units[0]
    elif alpha not in roots:
        raise ValueError("alpha is not a root of the Hecke polynomial")
    beta = ap - alpha
    f = g - v_op(g, p).scale(beta)
    return f.with_meta(weight=k, level=g.level * p), alpha, beta


@dataclass
class EigenCheck:
    ok: bool
    precision: int
    first_mismatch: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "precision": self.precision, "first_mismatch": self.first_mismatch, "reason": self.reason}


def weight_p_eigen_check(
    g: QExpansion,
    p: int,
    a_p: int | AlgebraElement,
    chi_p: int | AlgebraElement,
    alpha: AlgebraElement,
    beta: AlgebraElement,
    upto: int | None = None,
) -> EigenCheck:
    """h = A g - beta V g and check T_p h = alpha h, T_p acting in weight p.

    ``g`` is a weight-one eigenform in characteristic p, ``A`` the Hasse
    invariant.  In characteristic p the weight-p T_p is just U_p.
    """
    Alg = g.algebra
    if Alg.m != 1:
        raise RequiresCharP("the weight-p check runs in characteristic p")
    roots_ok = Alg(a_p) == alpha + beta and Alg(chi_p) == alpha * beta
    Ag = mul(hasse(p, g.precision, Alg), g)
    h = Ag - v_op(g, p).scale(beta)
    chi = g.character if g.character is not None else DirichletCharacter.trivial(Alg)
    Th = t_ell(h, p, k=p, chi=chi)
    target = h.scale(alpha)
    B = Th.precision if upto is None else upto
    n = Th.first_difference(target, B)
    reasons = [] if roots_ok else ["alpha, beta are not the roots of X^2 - a_p X + chi(p)"]
    if n is not None:
        reasons.append(f"coefficient {n} differs")
    return EigenCheck(n is None and roots_ok, B, n, "; ".join(reasons))
