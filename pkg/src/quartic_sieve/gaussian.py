"""Exact arithmetic in the Gaussian integers Z[i].

Everything here works on arbitrary-precision Python ints.  The module covers
Euclidean division, gcd, primary normalisation, factorisation by trial
division and enumeration of primary elements in a norm window.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

IntLike = Union[int, "GaussianInteger"]


@dataclass(frozen=True, slots=True)
class GaussianInteger:
    a: int
    b: int = 0

    @classmethod
    def coerce(cls, x: IntLike) -> GaussianInteger:
        if isinstance(x, GaussianInteger):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return cls(x, 0)
        raise TypeError(f"cannot interpret {x!r} as a Gaussian integer")

    @classmethod
    def parse(cls, text: str) -> GaussianInteger:
        return parse_gaussian(text)

    def norm(self) -> int:
        return self.a * self.a + self.b * self.b

    def conjugate(self) -> GaussianInteger:
        return GaussianInteger(self.a, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_odd(self) -> bool:
        """True when coprime to 1+i, i.e. the norm is odd."""
        return self.norm() % 2 == 1

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm(), self.a, self.b)

    def __add__(self, other: IntLike) -> GaussianInteger:
        o = GaussianInteger.coerce(other)
        return GaussianInteger(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> GaussianInteger:
        o = GaussianInteger.coerce(other)
        return GaussianInteger(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: IntLike) -> GaussianInteger:
        return GaussianInteger.coerce(other) - self

    def __mul__(self, other: IntLike) -> GaussianInteger:
        o = GaussianInteger.coerce(other)
        return GaussianInteger(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self) -> GaussianInteger:
        return GaussianInteger(-self.a, -self.b)

    def __pow__(self, e: int) -> GaussianInteger:
        if e < 0:
            raise ValueError("negative exponent")
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: IntLike) -> tuple[GaussianInteger, GaussianInteger]:
        return divrem(self, GaussianInteger.coerce(other))

    def __floordiv__(self, other: IntLike) -> GaussianInteger:
        return divrem(self, GaussianInteger.coerce(other))[0]

    def __mod__(self, other: IntLike) -> GaussianInteger:
        return divrem(self, GaussianInteger.coerce(other))[1]

    def __complex__(self) -> complex:
        return complex(self.a, self.b)

    def __str__(self) -> str:
        return format_gaussian(self)

    def __repr__(self) -> str:
        return f"GaussianInteger({self.a}, {self.b})"


ZERO = GaussianInteger(0, 0)
ONE = GaussianInteger(1, 0)
I = GaussianInteger(0, 1)
ONE_PLUS_I = GaussianInteger(1, 1)
UNITS = (ONE, I, GaussianInteger(-1, 0), GaussianInteger(0, -1))


def unit(k: int) -> GaussianInteger:
    """Return i**k."""
    return UNITS[k % 4]


_LITERAL = re.compile(
    r"""^\s*(?:
        (?P<re>[+-]?\s*\d+)\s*(?:(?P<sign>[+-])\s*(?P<im>\d*)\s*i)?
      | (?P<pure>[+-]?\s*\d*)\s*i
    )\s*$""",
    re.VERBOSE,
)


def parse_gaussian(text: str) -> GaussianInteger:
    """Parse ``a+bi`` style literals: ``-1+2i``, ``3``, ``2i``, ``-i``, ``4 - i``."""
    m = _LITERAL.match(text)
    if m is None:
        raise ValueError(f"malformed Gaussian integer literal: {text!r}")
    if m.group("pure") is not None:
        coef = m.group("pure").replace(" ", "")
        if coef in ("", "+"):
            return GaussianInteger(0, 1)
        if coef == "-":
            return GaussianInteger(0, -1)
        return GaussianInteger(0, int(coef))
    a = int(m.group("re").replace(" ", ""))
    if m.group("sign") is None:
        return GaussianInteger(a, 0)
    mag = int(m.group("im")) if m.group("im") else 1
    return GaussianInteger(a, mag if m.group("sign") == "+" else -mag)


def format_gaussian(z: GaussianInteger) -> str:
    a, b = z.a, z.b
    if b == 0:
        return str(a)
    if b == 1:
        im = "i"
    elif b == -1:
        im = "-i"
    else:
        im = f"{b}i"
    if a == 0:
        return im
    if b > 0:
        return f"{a}+{im}"
    return f"{a}{im}"


def _round_half_even(p: int, q: int) -> int:
    """Nearest integer to p/q (q > 0), exact halves go to the even neighbour."""
    k, rem = divmod(p, q)
    twice = 2 * rem
    if twice > q or (twice == q and k % 2 == 1):
        k += 1
    return k


def divrem(x: IntLike, d: IntLike) -> tuple[GaussianInteger, GaussianInteger]:
    """Euclidean division with norm(r) <= norm(d)/2.

    The quotient is the exact quotient x/d with each coordinate rounded to the
    nearest integer (ties to even).
    """
    x = GaussianInteger.coerce(x)
    d = GaussianInteger.coerce(d)
    n = d.norm()
    if n == 0:
        raise ZeroDivisionError("Gaussian division by zero")
    num = x * d.conjugate()
    q = GaussianInteger(_round_half_even(num.a, n), _round_half_even(num.b, n))
    return q, x - q * d


def divides(d: IntLike, x: IntLike) -> bool:
    d = GaussianInteger.coerce(d)
    x = GaussianInteger.coerce(x)
    if d.is_zero():
        return x.is_zero()
    num = x * d.conjugate()
    n = d.norm()
    return num.a % n == 0 and num.b % n == 0


def exact_div(x: IntLike, d: IntLike) -> GaussianInteger:
    x = GaussianInteger.coerce(x)
    d = GaussianInteger.coerce(d)
    n = d.norm()
    num = x * d.conjugate()
    if n == 0 or num.a % n or num.b % n:
        raise ValueError(f"{d} does not divide {x}")
    return GaussianInteger(num.a // n, num.b // n)


def _raw_gcd(x: GaussianInteger, y: GaussianInteger) -> GaussianInteger:
    while not y.is_zero():
        x, y = y, divrem(x, y)[1]
    return x


def is_primary(n: IntLike) -> bool:
    """n = a+bi is congruent to 1 mod (1+i)^3.

    Equivalent to a = 1, b = 0 (mod 4) or a = 3, b = 2 (mod 4).
    """
    n = GaussianInteger.coerce(n)
    ra, rb = n.a % 4, n.b % 4
    return (ra == 1 and rb == 0) or (ra == 3 and rb == 2)


def primary_associate(z: IntLike) -> tuple[int, GaussianInteger]:
    """Return (u, p) with p = i**u * z primary; z must be odd."""
    z = GaussianInteger.coerce(z)
    if not z.is_odd():
        raise ValueError(f"{z} is not coprime to 1+i; it has no primary associate")
    for u in range(4):
        p = UNITS[u] * z
        if is_primary(p):
            return u, p
    raise AssertionError("unreachable: every odd element has a primary associate")


def split_two_power(z: GaussianInteger) -> tuple[int, GaussianInteger]:
    """Write z = (1+i)^j * w with w odd; return (j, w)."""
    if z.is_zero():
        raise ValueError("zero has no (1+i)-adic valuation")
    j = 0
    while z.norm() % 2 == 0:
        z = exact_div(z, ONE_PLUS_I)
        j += 1
    return j, z


def canonical_associate(z: IntLike) -> GaussianInteger:
    """(1+i)^j times the primary associate of the odd part of z."""
    z = GaussianInteger.coerce(z)
    j, w = split_two_power(z)
    return ONE_PLUS_I**j * primary_associate(w)[1]


def gcd(x: IntLike, y: IntLike) -> GaussianInteger:
    x = GaussianInteger.coerce(x)
    y = GaussianInteger.coerce(y)
    if x.is_zero() and y.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return canonical_associate(_raw_gcd(x, y))


def coprime(x: IntLike, y: IntLike) -> bool:
    return gcd(x, y).is_unit()


def reduce_mod(x: IntLike, n: IntLike) -> GaussianInteger:
    """Canonical representative of x modulo n (see residues in gauss_sums)."""
    x = GaussianInteger.coerce(x)
    d, g, c = lattice_hnf(GaussianInteger.coerce(n))
    t = x.b % g
    k = (x.b - t) // g
    return GaussianInteger((x.a - k * c) % d, t)


@lru_cache(maxsize=4096)
def lattice_hnf(n: GaussianInteger) -> tuple[int, int, int]:
    """Hermite basis of the ideal (n) as a lattice: rows (d, 0) and (c, g).

    d is the least positive rational integer in (n), g = gcd(a, b) and
    d * g = N(n).  Returns (d, g, c) with 0 <= c < d.
    """
    if n.is_zero():
        raise ValueError("zero modulus")
    a, b = n.a, n.b
    g = math.gcd(a, b)
    d = n.norm() // g
    # u*(a, b) + v*(-b, a) has imaginary part u*b + v*a = g
    _, u, v = _ext_gcd(b, a)
    c = (u * a - v * b) % d
    return d, g, c


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*x + t*y = g = gcd(x, y) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        q, r = divmod(x, y)
        x, y = y, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def trial_factor_int(n: int) -> list[tuple[int, int]]:
    """Factor a positive rational integer by trial division."""
    if n < 1:
        raise ValueError("expected a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def split_prime(p: int) -> GaussianInteger:
    """Primary Gaussian prime of norm p, for a rational prime p = 1 (mod 4).

    The conjugate prime is the primary associate of its conjugate.  Of the two
    the one with the smaller (a, b) key is returned.
    """
    if p % 4 != 1:
        raise ValueError(f"{p} does not split in Z[i]")
    for c in range(2, p):
        x = pow(c, (p - 1) // 4, p)
        if x * x % p == p - 1:
            break
    else:
        raise ValueError(f"{p} is not prime")
    pi = _raw_gcd(GaussianInteger(p), GaussianInteger(x, 1))
    if pi.norm() != p:
        raise ValueError(f"{p} is not prime")
    first = primary_associate(pi)[1]
    second = primary_associate(first.conjugate())[1]
    return min(first, second, key=GaussianInteger.sort_key)


@dataclass(frozen=True)
class GaussianFactorization:
    """z = i**unit_exp * (1+i)**two_exp * prod(p**e for p, e in primes)."""

    unit_exp: int
    two_exp: int
    primes: tuple[tuple[GaussianInteger, int], ...] = field(default_factory=tuple)

    def recompose(self) -> GaussianInteger:
        z = unit(self.unit_exp) * ONE_PLUS_I**self.two_exp
        for p, e in self.primes:
            z = z * p**e
        return z

    def is_squarefree(self) -> bool:
        return self.two_exp <= 1 and all(e == 1 for _, e in self.primes)


def factor(z: IntLike) -> GaussianFactorization:
    z = GaussianInteger.coerce(z)
    if z.is_zero():
        raise ValueError("cannot factor zero")
    return _factor_cached(z)


@lru_cache(maxsize=65536)
def _factor_cached(z: GaussianInteger) -> GaussianFactorization:
    primes: list[tuple[GaussianInteger, int]] = []
    two_exp = 0
    rest = z
    for p, _ in trial_factor_int(z.norm()):
        if p == 2:
            two_exp, rest = split_two_power(rest)
            continue
        if p % 4 == 3:
            candidates = [GaussianInteger(-p)]
        else:
            pi = split_prime(p)
            candidates = [pi, primary_associate(pi.conjugate())[1]]
        for pi in candidates:
            e = 0
            while divides(pi, rest):
                rest = exact_div(rest, pi)
                e += 1
            if e:
                primes.append((pi, e))
    if not rest.is_unit():
        raise AssertionError(f"factorisation of {z} left non-unit cofactor {rest}")
    primes.sort(key=lambda pe: pe[0].sort_key())
    return GaussianFactorization(UNITS.index(rest), two_exp, tuple(primes))


def is_squarefree(z: IntLike) -> bool:
    return factor(z).is_squarefree()


def mu_zi(z: IntLike) -> int:
    """Moebius function on odd Gaussian integers (units do not contribute)."""
    z = GaussianInteger.coerce(z)
    if not z.is_odd():
        raise ValueError("mu_zi expects an odd element")
    f = factor(z)
    if not f.is_squarefree():
        return 0
    return -1 if len(f.primes) % 2 else 1


def has_rational_prime_divisor(z: IntLike) -> bool:
    z = GaussianInteger.coerce(z)
    return math.gcd(z.a, z.b) > 1


def enumerate_primary(
    lo: int,
    hi: int,
    *,
    squarefree: bool = False,
    no_rational_prime_divisor: bool = False,
    allow_negated: bool = False,
) -> Iterator[GaussianInteger]:
    """Yield primary n with lo < N(n) <= hi in (norm, a, b) order.

    With ``allow_negated`` elements congruent to -1 mod (1+i)^3 are included
    as well.
    """
    if hi <= lo:
        return
    r = math.isqrt(hi)
    found = []
    for a in range(-r, r + 1):
        rem = hi - a * a
        if rem < 0:
            continue
        s = math.isqrt(rem)
        for b in range(-s, s + 1):
            n = a * a + b * b
            if n <= lo:
                continue
            z = GaussianInteger(a, b)
            if not (is_primary(z) or (allow_negated and is_primary(-z))):
                continue
            if no_rational_prime_divisor and math.gcd(a, b) > 1:
                continue
            if squarefree and not factor(z).is_squarefree():
                continue
            found.append(z)
    found.sort(key=GaussianInteger.sort_key)
    yield from found
