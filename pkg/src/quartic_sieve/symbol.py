"""Quartic residue symbol (a/n)_4 for primary n, and the reciprocity sign."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .gaussian import (
    GaussianInteger,
    IntLike,
    UNITS,
    coprime,
    divides,
    factor,
    is_primary,
    reduce_mod,
)

_NAMES = ("1", "i", "-1", "-i")


class InvalidModulus(ValueError):
    """Denominator is even, zero or not primary."""


@dataclass(frozen=True, slots=True)
class QuarticSymbolValue:
    """0 (``k is None``) or the fourth root of unity i**k."""

    k: Optional[int]

    def __post_init__(self) -> None:
        if self.k is not None:
            object.__setattr__(self, "k", self.k % 4)

    @property
    def is_zero(self) -> bool:
        return self.k is None

    def __mul__(self, other: QuarticSymbolValue) -> QuarticSymbolValue:
        if self.k is None or other.k is None:
            return ZERO
        return QuarticSymbolValue(self.k + other.k)

    def __pow__(self, e: int) -> QuarticSymbolValue:
        if self.k is None:
            return ONE if e == 0 else ZERO
        return QuarticSymbolValue(self.k * e)

    def conjugate(self) -> QuarticSymbolValue:
        return self if self.k is None else QuarticSymbolValue(-self.k)

    def __complex__(self) -> complex:
        return 0j if self.k is None else (1 + 0j, 1j, -1 + 0j, -1j)[self.k]

    def __str__(self) -> str:
        return "0" if self.k is None else _NAMES[self.k]


ZERO = QuarticSymbolValue(None)
ONE = QuarticSymbolValue(0)


def _powmod(x: GaussianInteger, e: int, n: GaussianInteger) -> GaussianInteger:
    result = GaussianInteger(1)
    x = reduce_mod(x, n)
    while e:
        if e & 1:
            result = reduce_mod(result * x, n)
        x = reduce_mod(x * x, n)
        e >>= 1
    return result


@lru_cache(maxsize=1 << 18)
def _prime_symbol(residue: GaussianInteger, pi: GaussianInteger) -> QuarticSymbolValue:
    if residue.is_zero():
        return ZERO
    v = _powmod(residue, (pi.norm() - 1) // 4, pi)
    for k, u in enumerate(UNITS):
        if divides(pi, v - u):
            return QuarticSymbolValue(k)
    raise ArithmeticError(f"{residue}^((N-1)/4) mod {pi} is not a unit; is {pi} prime?")


def _check_modulus(n: GaussianInteger) -> None:
    if n.is_zero() or not n.is_odd() or not is_primary(n):
        raise InvalidModulus(f"modulus must be odd primary, got {n}")


def quartic_symbol(a: IntLike, n: IntLike) -> QuarticSymbolValue:
    """(a/n)_4 via the factorisation of n and Euler's criterion at each prime."""
    a = GaussianInteger.coerce(a)
    n = GaussianInteger.coerce(n)
    _check_modulus(n)
    return _symbol(a, n)


def _symbol(a: GaussianInteger, n: GaussianInteger) -> QuarticSymbolValue:
    value = ONE
    for pi, e in factor(n).primes:
        value = value * _prime_symbol(reduce_mod(a, pi), pi) ** e
        if value.is_zero:
            return ZERO
    return value


def reciprocity_sign(m: IntLike, n: IntLike) -> int:
    """(-1)^(((N(n)-1)/4) * ((N(m)-1)/4)) for coprime primary non-units m, n."""
    m = GaussianInteger.coerce(m)
    n = GaussianInteger.coerce(n)
    for x in (m, n):
        _check_modulus(x)
        if x.is_unit():
            raise InvalidModulus(f"{x} is a unit")
    if not coprime(m, n):
        raise ValueError(f"{m} and {n} are not coprime")
    e = ((n.norm() - 1) // 4) * ((m.norm() - 1) // 4)
    return -1 if e % 2 else 1


def chi_eval(n: IntLike, m: int) -> QuarticSymbolValue:
    """chi_n(m) = (m/n)_4 for a rational integer m.

    n may also be congruent to -1 mod (1+i)^3; the symbol only depends on the
    ideal (n), so -n is used in that case.
    """
    n = GaussianInteger.coerce(n)
    if not is_primary(n) and is_primary(-n):
        n = -n
    _check_modulus(n)
    return _symbol(GaussianInteger(m), n)
