import pytest
from hypothesis import given
from hypothesis import strategies as st

from quartic_sieve.gaussian import GaussianInteger, coprime, enumerate_primary, has_rational_prime_divisor
from quartic_sieve.symbol import (
    InvalidModulus,
    QuarticSymbolValue,
    chi_eval,
    quartic_symbol,
    reciprocity_sign,
)

G = GaussianInteger
MODULI = [n for n in enumerate_primary(1, 200) if not n.is_unit()]
moduli = st.sampled_from(MODULI)
elems = st.builds(G, st.integers(-200, 200), st.integers(-200, 200))


def test_examples():
    assert str(quartic_symbol(2, G(-1, 2))) == "-i"
    assert quartic_symbol(2, G(-1, 2)).k == 3
    assert quartic_symbol(G(-1, 2), G(-1, 2)).is_zero
    for n in MODULI:
        assert quartic_symbol(1, n).k == 0


def test_chi_eval_examples():
    assert [str(chi_eval(G(-1, 2), m)) for m in range(1, 6)] == ["1", "-i", "i", "-1", "0"]


@pytest.mark.parametrize("bad", [G(1, 1), G(2), G(0), G(1, 2), G(3)])
def test_invalid_modulus(bad):
    with pytest.raises(InvalidModulus, match="modulus must be odd primary"):
        quartic_symbol(2, bad)


def test_reciprocity_sign_examples():
    assert reciprocity_sign(G(-1, 2), G(3, 2)) == -1
    assert reciprocity_sign(G(-1, 2), G(-3)) == 1
    assert reciprocity_sign(G(3, 2), G(-1, 2)) == -1
    with pytest.raises(ValueError):
        reciprocity_sign(G(-1, 2), G(-1, 2) * G(3, 2))


def test_value_algebra():
    i = QuarticSymbolValue(1)
    assert (i * i).k == 2 and (i ** 4).k == 0 and i.conjugate().k == 3
    assert (QuarticSymbolValue(None) * i).is_zero
    for k in range(4):
        assert abs(abs(complex(QuarticSymbolValue(k))) - 1) == 0
    assert complex(QuarticSymbolValue(None)) == 0


@given(elems, elems, moduli)
def test_multiplicative_in_numerator(a, b, n):
    assert quartic_symbol(a * b, n) == quartic_symbol(a, n) * quartic_symbol(b, n)


@given(elems, moduli, moduli)
def test_multiplicative_in_modulus(a, n1, n2):
    assert quartic_symbol(a, n1 * n2) == quartic_symbol(a, n1) * quartic_symbol(a, n2)


@given(elems, moduli)
def test_conjugation(a, n):
    assert quartic_symbol(a.conjugate(), n.conjugate()) == quartic_symbol(a, n).conjugate()


@given(elems, elems, moduli)
def test_periodic(a, t, n):
    assert quartic_symbol(a + t * n, n) == quartic_symbol(a, n)


@given(elems, moduli)
def test_zero_iff_common_factor(a, n):
    assert quartic_symbol(a, n).is_zero == (a.is_zero() or not coprime(a, n))


def test_chi_eval_periodic():
    for n in enumerate_primary(1, 120, no_rational_prime_divisor=True):
        if n.is_unit():
            continue
        N = n.norm()
        for m in range(-N, 2 * N):
            assert chi_eval(n, m + N) == chi_eval(n, m)
        assert chi_eval(n, 1).k == 0
        assert not has_rational_prime_divisor(n)


def test_chi_eval_accepts_negated_primary():
    n = G(-1, 2)
    assert all(chi_eval(-n, m) == chi_eval(n, m) for m in range(10))
