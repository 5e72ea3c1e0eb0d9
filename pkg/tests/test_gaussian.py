import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_sieve.gaussian import (
    ONE,
    UNITS,
    GaussianInteger,
    divrem,
    enumerate_primary,
    factor,
    format_gaussian,
    gcd,
    has_rational_prime_divisor,
    is_primary,
    is_squarefree,
    lattice_hnf,
    mu_zi,
    parse_gaussian,
    primary_associate,
    reduce_mod,
)

G = GaussianInteger
ints = st.integers(-10**6, 10**6)
gauss = st.builds(G, ints, ints)
nonzero = gauss.filter(lambda z: not z.is_zero())
small = st.builds(G, st.integers(-60, 60), st.integers(-60, 60)).filter(lambda z: not z.is_zero())


def test_divrem_examples():
    assert divrem(G(5, 3), G(2)) == (G(2, 2), G(1, -1))
    z = G(7, -4)
    assert divrem(z, 1) == (z, G(0))
    assert divrem(0, G(3, 1)) == (G(0), G(0))
    with pytest.raises(ZeroDivisionError):
        divrem(z, 0)


@given(gauss, nonzero)
def test_divrem_invariant(x, d):
    q, r = divrem(x, d)
    assert q * d + r == x
    assert 2 * r.norm() <= d.norm()


@given(gauss, gauss)
def test_norm_multiplicative(z, w):
    assert (z * w).norm() == z.norm() * w.norm()
    assert z.conjugate().conjugate() == z
    assert (z.norm() == 0) == z.is_zero()


def test_gcd_examples():
    z = G(-1, 2)
    assert gcd(z, 0) == z
    assert gcd(G(-1, 2), G(-1, -2)) == ONE
    assert gcd(5, G(-1, 2)) == G(-1, 2)
    with pytest.raises(ValueError):
        gcd(0, 0)


@given(small, small)
def test_gcd_divides_both(x, y):
    g = gcd(x, y)
    assert reduce_mod(x, g).is_zero() and reduce_mod(y, g).is_zero()
    # canonical: odd part primary
    assert g == gcd(y, x)


def test_primary_examples():
    assert is_primary(G(-1, 2)) and is_primary(1)
    assert not is_primary(G(1, 1))
    assert primary_associate(3) == (2, G(-3))
    assert primary_associate(G(-1, 2)) == (0, G(-1, 2))
    u, p = primary_associate(G(1, -2))
    assert is_primary(p) and UNITS[u] * G(1, -2) == p
    with pytest.raises(ValueError):
        primary_associate(G(1, 1))


def test_exactly_one_primary_associate_up_to_norm_1e4():
    count = 0
    for a in range(-101, 102):
        for b in range(-101, 102):
            z = G(a, b)
            if z.is_zero() or z.norm() > 10**4 or not z.is_odd():
                continue
            assert sum(is_primary(u * z) for u in UNITS) == 1
            count += 1
    assert count > 15000


def test_factor_examples():
    f = factor(2)
    assert f.unit_exp == 3 and f.two_exp == 2 and f.primes == ()
    assert f.recompose() == G(2)
    assert factor(G(-1, 2)).primes == ((G(-1, 2), 1),)
    f5 = factor(5)
    assert {p for p, _ in f5.primes} == {G(-1, 2), G(-1, -2)}
    assert f5.recompose() == G(5)
    with pytest.raises(ValueError):
        factor(0)


@settings(max_examples=300)
@given(st.builds(G, st.integers(-300, 300), st.integers(-300, 300)).filter(lambda z: not z.is_zero()))
def test_factor_roundtrip(z):
    f = factor(z)
    assert f.recompose() == z
    for p, e in f.primes:
        assert is_primary(p) and e >= 1
        pr = factor(p)
        assert pr.primes == ((p, 1),) and pr.two_exp == 0
    ps = [p for p, _ in f.primes]
    assert len(set(ps)) == len(ps)


def test_squarefree_and_mu():
    p = G(-1, 2)
    assert is_squarefree(p)
    assert not is_squarefree(G(0, 1) * p * p)
    assert mu_zi(p * G(3, 2)) == 1
    assert mu_zi(p) == -1
    assert mu_zi(p * p) == 0


def test_enumerate_primary_examples():
    assert list(enumerate_primary(1, 2)) == []
    assert set(enumerate_primary(4, 8, squarefree=True)) == {G(-1, 2), G(-1, -2)}
    assert G(-3) not in list(enumerate_primary(8, 10, no_rational_prime_divisor=True))
    assert G(-3) in list(enumerate_primary(8, 10))
    assert list(enumerate_primary(10, 10)) == []
    assert has_rational_prime_divisor(G(-3)) and not has_rational_prime_divisor(G(-1, 2))


def test_enumerate_primary_complete():
    got = list(enumerate_primary(0, 200))
    brute = [G(a, b) for a in range(-15, 16) for b in range(-15, 16)
             if 0 < a * a + b * b <= 200 and is_primary(G(a, b))]
    assert sorted(got, key=lambda z: (z.norm(), z.a, z.b)) == got
    assert set(got) == set(brute)


@pytest.mark.parametrize("text,z", [
    ("-1+2i", G(-1, 2)), ("3", G(3)), ("2i", G(0, 2)), ("-i", G(0, -1)), ("i", G(0, 1)),
    ("4 - i", G(4, -1)), ("-7-12i", G(-7, -12)), ("0", G(0)),
])
def test_parse_examples(text, z):
    assert parse_gaussian(text) == z


@pytest.mark.parametrize("bad", ["", "1+", "2x", "i2", "1+2j", "1.5", "--1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_gaussian(bad)


@given(gauss)
def test_format_roundtrip(z):
    text = format_gaussian(z)
    assert parse_gaussian(text) == z
    assert format_gaussian(parse_gaussian(text)) == text


@given(small, gauss)
def test_reduce_mod_canonical(n, x):
    d, g, _ = lattice_hnf(n)
    r = reduce_mod(x, n)
    assert 0 <= r.a < d and 0 <= r.b < g
    assert reduce_mod(x - r, n).is_zero()
    assert d * g == n.norm()
