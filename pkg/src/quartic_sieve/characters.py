"""Primitive quartic Dirichlet characters.

Two independent routes:

* the quartic family m -> (m/n)_4 with n primary, square-free, free of
  rational prime divisors and N(n) = q;
* a group-theoretic oracle that builds the full character group of
  (Z/qZ)* from primitive roots and CRT and filters characters of order
  exactly 4 that are primitive.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Optional

from .gaussian import GaussianInteger, enumerate_primary, trial_factor_int
from .symbol import QuarticSymbolValue, chi_eval

MAX_MODULUS = 10**6


class UnsupportedModulus(ValueError):
    pass


@dataclass(frozen=True)
class QuarticCharacter:
    conductor: int
    generator: GaussianInteger

    @cached_property
    def table(self) -> tuple[QuarticSymbolValue, ...]:
        return tuple(chi_eval(self.generator, m) for m in range(self.conductor))

    def __call__(self, m: int) -> QuarticSymbolValue:
        return self.table[m % self.conductor]

    def exponent(self, m: int) -> Optional[int]:
        return self(m).k


def enumerate_quartic_family(q: int) -> list[QuarticCharacter]:
    if q < 1 or q % 2 == 0:
        raise ValueError(f"conductor must be a positive odd integer, got {q}")
    if q == 1:
        return []
    gens = enumerate_primary(q - 1, q, squarefree=True, no_rational_prime_divisor=True)
    return [QuarticCharacter(q, n) for n in gens]


@dataclass(frozen=True)
class _Factor:
    """One cyclic factor of (Z/qZ)*: generator of given order inside Z/p^k."""

    p: int
    k: int
    generator: int
    order: int
    logs: dict = field(repr=False, compare=False)

    @property
    def modulus(self) -> int:
        return self.p**self.k


def _prime_divisors(n: int) -> list[int]:
    return [p for p, _ in trial_factor_int(n)] if n > 1 else []


def _is_primitive_root(g: int, m: int, phi: int, phi_primes: list[int]) -> bool:
    return math.gcd(g, m) == 1 and all(pow(g, phi // r, m) != 1 for r in phi_primes)


def primitive_root(p: int, k: int = 1) -> int:
    """Smallest positive primitive root mod p**k (p odd prime)."""
    m = p**k
    phi = p ** (k - 1) * (p - 1)
    ps = _prime_divisors(phi)
    for g in range(2, m):
        if _is_primitive_root(g, m, phi, ps):
            return g
    raise ValueError(f"no primitive root mod {m}")


def _cyclic_logs(g: int, m: int, order: int) -> dict[int, int]:
    logs, x = {}, 1
    for j in range(order):
        logs[x] = j
        x = x * g % m
    return logs


def _local_factors(p: int, k: int) -> list[_Factor]:
    m = p**k
    if p != 2:
        g = primitive_root(p, k)
        phi = m // p * (p - 1)
        return [_Factor(p, k, g, phi, _cyclic_logs(g, m, phi))]
    if k == 1:
        return []
    if k == 2:
        return [_Factor(2, 2, 3, 2, {1: 0, 3: 1})]
    # (Z/2^k)* = <-1> x <5>
    order5 = 2 ** (k - 2)
    pow5 = _cyclic_logs(5, m, order5)
    minus, five = {}, {}
    for x, j in pow5.items():
        minus[x], five[x] = 0, j
        minus[m - x], five[m - x] = 1, j
    return [_Factor(2, k, m - 1, 2, minus), _Factor(2, k, 5, order5, five)]


class DirichletGroup:
    """Character group of (Z/qZ)* with a fixed CRT basis of generators."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError("modulus must be positive")
        if q > MAX_MODULUS:
            raise UnsupportedModulus(f"modulus {q} exceeds desk-scale limit {MAX_MODULUS}")
        self.q = q
        self.prime_powers = trial_factor_int(q) if q > 1 else []
        self.factors: list[_Factor] = []
        for p, k in self.prime_powers:
            self.factors.extend(_local_factors(p, k))

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(f.order for f in self.factors)

    def __len__(self) -> int:
        return math.prod(self.orders)

    def log(self, m: int) -> Optional[tuple[int, ...]]:
        """Discrete logs of m in the generator basis, None if gcd(m, q) > 1."""
        if math.gcd(m, self.q) != 1:
            return None
        return tuple(f.logs[m % f.modulus] for f in self.factors)

    def character(self, exponents) -> DirichletCharacter:
        exps = tuple(int(e) % f.order for e, f in zip(exponents, self.factors, strict=True))
        return DirichletCharacter(self, exps)

    def __iter__(self) -> Iterator[DirichletCharacter]:
        for exps in product(*(range(o) for o in self.orders)):
            yield DirichletCharacter(self, exps)

    def characters_of_order_dividing(self, r: int) -> Iterator[DirichletCharacter]:
        """Only exponent vectors whose local orders divide r."""
        choices = []
        for f in self.factors:
            step = f.order // math.gcd(f.order, r)
            choices.append(range(0, f.order, step))
        for exps in product(*choices):
            yield DirichletCharacter(self, exps)


@dataclass(frozen=True)
class DirichletCharacter:
    group: DirichletGroup = field(repr=False, compare=False)
    exponents: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.group.q

    def angle(self, m: int) -> Optional[Fraction]:
        """chi(m) = exp(2 pi i * angle); None when chi(m) = 0."""
        logs = self.group.log(m)
        if logs is None:
            return None
        t = sum(
            (Fraction(e * l, f.order) for e, l, f in zip(self.exponents, logs, self.group.factors)),
            Fraction(0),
        )
        return t % 1

    def quartic_exponent(self, m: int) -> Optional[int]:
        """k with chi(m) = i**k; only meaningful when the order divides 4."""
        t = self.angle(m)
        if t is None:
            return None
        k = t * 4
        if k.denominator != 1:
            raise ValueError("character value is not a fourth root of unity")
        return int(k)

    def __call__(self, m: int) -> complex:
        t = self.angle(m)
        if t is None:
            return 0j
        if (t * 4).denominator == 1:
            return complex(QuarticSymbolValue(int(t * 4)))
        return cmath.exp(2j * math.pi * float(t))

    @property
    def order(self) -> int:
        return math.lcm(
            1, *(f.order // math.gcd(e, f.order) for e, f in zip(self.exponents, self.group.factors))
        )

    def is_primitive(self) -> bool:
        """Conductor equals the modulus, decided from the exponents."""
        fs = iter(zip(self.exponents, self.group.factors))
        for p, k in self.group.prime_powers:
            if p != 2:
                e, f = next(fs)
                if (k == 1 and e == 0) or (k >= 2 and e % p == 0):
                    return False
            elif k == 1:
                return False
            elif k == 2:
                e, _ = next(fs)
                if e == 0:
                    return False
            else:
                next(fs)
                e5, _ = next(fs)
                if e5 % 2 == 0:
                    return False
        return True


def dirichlet_group(q: int) -> DirichletGroup:
    return _group_cached(q)


@lru_cache(maxsize=1024)
def _group_cached(q: int) -> DirichletGroup:
    return DirichletGroup(q)


def list_order4_primitive(q: int) -> list[DirichletCharacter]:
    """Primitive characters mod q with chi^4 = chi_0 and chi^2 != chi_0."""
    G = dirichlet_group(q)
    return [
        chi for chi in G.characters_of_order_dividing(4) if chi.order == 4 and chi.is_primitive()
    ]


# brute-force checks on value tables, independent of the exponent bookkeeping


def order_from_values(chi: DirichletCharacter) -> int:
    q = chi.modulus
    angles = [chi.angle(m) for m in range(1, q + 1) if math.gcd(m, q) == 1]
    r = 1
    while any((t * r) % 1 != 0 for t in angles):
        r += 1
    return r


def is_primitive_from_values(chi: DirichletCharacter) -> bool:
    """chi is primitive iff it is not trivial on {m = 1 mod q/p} for any p | q."""
    q = chi.modulus
    if q == 1:
        return True
    for p in _prime_divisors(q):
        d = q // p
        induced = all(
            chi.angle(m) == 0 for m in range(1, q + 1, d) if math.gcd(m, q) == 1
        )
        if induced:
            return False
    return True


@dataclass
class MatchReport:
    q: int
    family_count: int
    oracle_count: int
    pairs: list[tuple[str, tuple[int, ...]]]
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.family_count == self.oracle_count == len(self.pairs)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "family_count": self.family_count,
            "oracle_count": self.oracle_count,
            "pairs": [{"generator": g, "exponents": list(e)} for g, e in self.pairs],
            "mismatches": self.mismatches,
            "ok": self.ok,
        }


def match_family_to_oracle(q: int) -> MatchReport:
    """Pointwise bijection between the quartic family and the oracle at conductor q."""
    family = enumerate_quartic_family(q)
    oracle = list_order4_primitive(q)
    fam_tables = [tuple(c.exponent(m) for m in range(1, q + 1)) for c in family]
    orc_tables = [tuple(c.quartic_exponent(m) for m in range(1, q + 1)) for c in oracle]
    pairs, mismatches, used = [], [], set()
    for c, tab in zip(family, fam_tables):
        hits = [j for j, t in enumerate(orc_tables) if t == tab]
        if len(hits) != 1:
            mismatches.append(f"{c.generator}: {len(hits)} oracle matches")
            continue
        if hits[0] in used:
            mismatches.append(f"{c.generator}: oracle character {hits[0]} matched twice")
        used.add(hits[0])
        pairs.append((str(c.generator), oracle[hits[0]].exponents))
    if len(family) != len(oracle):
        mismatches.append(f"count mismatch: family {len(family)} vs oracle {len(oracle)}")
    return MatchReport(q, len(family), len(oracle), pairs, mismatches)
