import math

import pytest

from quartic_sieve.characters import (
    dirichlet_group,
    enumerate_quartic_family,
    is_primitive_from_values,
    list_order4_primitive,
    match_family_to_oracle,
    order_from_values,
    primitive_root,
)
from quartic_sieve.gaussian import GaussianInteger

G = GaussianInteger


def test_family_examples():
    assert {c.generator for c in enumerate_quartic_family(5)} == {G(-1, 2), G(-1, -2)}
    assert enumerate_quartic_family(3) == []
    assert enumerate_quartic_family(9) == []
    assert enumerate_quartic_family(1) == []
    with pytest.raises(ValueError):
        enumerate_quartic_family(10)


def test_oracle_examples():
    assert len(list_order4_primitive(5)) == 2
    assert len(list_order4_primitive(7)) == 0
    assert len(list_order4_primitive(13)) == 2
    assert len(list_order4_primitive(16)) == 4


@pytest.mark.parametrize("q", [5, 13, 17, 29, 37, 41])
def test_bijection(q):
    rep = match_family_to_oracle(q)
    assert rep.ok and rep.family_count == 2


def test_composite_counts_reported():
    rep = match_family_to_oracle(65)
    assert (rep.family_count, rep.oracle_count) == (4, 8)
    assert not rep.ok


@pytest.mark.parametrize("q", [16, 32, 40, 45, 48, 63, 65, 100])
def test_exponent_bookkeeping_matches_values(q):
    G_ = dirichlet_group(q)
    for chi in G_:
        assert chi.order == order_from_values(chi)
        assert chi.is_primitive() == is_primitive_from_values(chi)


@pytest.mark.parametrize("q", [13, 65, 16, 45])
def test_characters_multiplicative(q):
    units = [m for m in range(1, q) if math.gcd(m, q) == 1]
    for chi in dirichlet_group(q):
        for a in units[:8]:
            for b in units[:8]:
                assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-12
        assert chi(q) == 0


def test_family_character_properties():
    for q in (5, 13, 17, 29):
        for c in enumerate_quartic_family(q):
            ks = [c.exponent(m) for m in range(q)]
            assert ks[0] is None and all(k is not None for k in ks[1:])
            assert any(k % 2 for k in ks[1:])  # chi^2 is not principal
            for a in range(1, q):
                for b in range(1, q):
                    assert (c(a * b).k) == (c(a).k + c(b).k) % 4


def test_primitive_root():
    assert primitive_root(5) == 2
    assert primitive_root(7) == 3
    assert primitive_root(3, 2) == 2
