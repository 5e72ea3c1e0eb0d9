"""Residue systems, additive characters and quartic Gauss sums.

Phases are reduced exactly (integer arithmetic modulo the denominator) before
the single call to ``cmath.exp`` per term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .gaussian import (
    GaussianInteger,
    IntLike,
    coprime,
    is_primary,
    lattice_hnf,
    reduce_mod,
)
from .symbol import InvalidModulus, QuarticSymbolValue, _symbol, chi_eval, quartic_symbol

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class ResidueSystem:
    """Representatives s + t*i, 0 <= s < d, 0 <= t < N(n)/d, of Z[i]/(n)."""

    modulus: GaussianInteger
    d: int
    g: int
    c: int

    @property
    def reps(self) -> tuple[GaussianInteger, ...]:
        return tuple(GaussianInteger(s, t) for t in range(self.g) for s in range(self.d))

    def __len__(self) -> int:
        return self.d * self.g

    def __iter__(self):
        return iter(self.reps)

    def reduce(self, x: IntLike) -> GaussianInteger:
        return reduce_mod(x, self.modulus)

    def index(self, x: IntLike) -> int:
        r = self.reduce(x)
        return r.b * self.d + r.a


def residues_mod(n: IntLike) -> ResidueSystem:
    n = GaussianInteger.coerce(n)
    if n.is_zero():
        raise ValueError("zero modulus")
    d, g, c = lattice_hnf(n)
    return ResidueSystem(n, d, g, c)


def _phase(num: GaussianInteger, den: GaussianInteger) -> Fraction:
    """z + conj(z) reduced mod 1, for z = num/den."""
    nd = den.norm()
    if nd == 0:
        raise ZeroDivisionError("zero denominator")
    w = num * den.conjugate()
    return Fraction((2 * w.a) % nd, nd)


def e(t: Fraction | int) -> complex:
    """exp(2 pi i t) for an exact rational t."""
    t = Fraction(t) % 1
    return cmath.exp(TWO_PI_I * float(t))


def e_tilde(num: IntLike, den: IntLike = 1) -> complex:
    """exp(2 pi i (z + conj z)) with z = num/den kept exact."""
    return e(_phase(GaussianInteger.coerce(num), GaussianInteger.coerce(den)))


@lru_cache(maxsize=4096)
def symbol_table(n: GaussianInteger) -> tuple[tuple[GaussianInteger, QuarticSymbolValue], ...]:
    """(x, (x/n)_4) for every canonical residue x with nonzero symbol."""
    return tuple(
        (x, v) for x in residues_mod(n).reps if not (v := _symbol(x, n)).is_zero
    )


def _check_gauss_modulus(n: GaussianInteger) -> None:
    if not n.is_odd() or not is_primary(n) or n.is_unit():
        raise InvalidModulus(f"Gauss sum modulus must be a primary non-unit, got {n}")


def gauss_sum(r: IntLike, n: IntLike) -> complex:
    """g(r, n) = sum over x mod n of (x/n)_4 * e_tilde(r x / n)."""
    r = GaussianInteger.coerce(r)
    n = GaussianInteger.coerce(n)
    _check_gauss_modulus(n)
    N = n.norm()
    w = r * n.conjugate()
    total = 0j
    for x, v in symbol_table(n):
        # 2 Re(x * w) mod N
        ph = (2 * (x.a * w.a - x.b * w.b)) % N
        total += complex(v) * cmath.exp(TWO_PI_I * ph / N)
    return total


def _check_tau_modulus(n: GaussianInteger) -> GaussianInteger:
    if not n.is_odd() or n.is_unit():
        raise InvalidModulus(f"tau needs an odd non-unit modulus, got {n}")
    if not (is_primary(n) or is_primary(-n)):
        raise InvalidModulus(f"{n} is not congruent to +-1 mod (1+i)^3")
    if math.gcd(n.a, n.b) > 1:
        raise InvalidModulus(f"{n} has a rational prime divisor")
    return n


def tau(n: IntLike, power: int = 1) -> complex:
    """sum_{1 <= x <= N(n)} chi_n(x)^power e(x / N(n))."""
    n = _check_tau_modulus(GaussianInteger.coerce(n))
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    N = n.norm()
    total = 0j
    for x in range(1, N + 1):
        v = chi_eval(n, x)
        if not v.is_zero:
            total += complex(v**power) * cmath.exp(TWO_PI_I * x / N)
    return total


def tau_via_gauss_sum(n: IntLike) -> complex:
    """(conj(n)/n)_4 * g(n); equal to tau(n) for primary admissible n."""
    n = GaussianInteger.coerce(n)
    _check_tau_modulus(n)
    return complex(quartic_symbol(n.conjugate(), n)) * gauss_sum(1, n)


def tau_product_formula(n1: IntLike, n2: IntLike) -> complex:
    """(N(n2)/n1)_4 (N(n1)/n2)_4 tau(n1) tau(n2), the value predicted for tau(n1 n2)."""
    n1 = GaussianInteger.coerce(n1)
    n2 = GaussianInteger.coerce(n2)
    if not coprime(n1, n2):
        raise ValueError("n1 and n2 must be coprime")
    s = chi_eval(n1, n2.norm()) * chi_eval(n2, n1.norm())
    return complex(s) * tau(n1) * tau(n2)
