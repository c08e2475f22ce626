from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tanglekh.algebra import (GF2, QQ, Generator, LaurentPolynomial,
                              PrimeField, Q_PLUS_QINV, field_from_name,
                              local_map, phi, theta, unit_counit)


def test_field_from_name():
    assert field_from_name("q") == QQ
    assert field_from_name("f2") == GF2
    assert field_from_name("fp:5") == PrimeField(5)
    assert field_from_name("f7") == PrimeField(7)
    with pytest.raises(ValueError):
        field_from_name("gf9")
    with pytest.raises(ValueError):
        PrimeField(6)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_prime_field_inverse(a, b):
    f = PrimeField(7)
    x = f.coerce(a)
    if x != 0:
        assert f.mul(x, f.inv(x)) == f.one
    assert f.add(f.coerce(a), f.coerce(b)) == f.coerce(a + b)
    assert f.mul(f.coerce(a), f.coerce(b)) == f.coerce(a * b)


coeffs = st.dictionaries(st.integers(-6, 6), st.integers(-9, 9), max_size=5)


@given(coeffs, coeffs, coeffs)
def test_laurent_ring_laws(a, b, c):
    pa, pb, pc = (LaurentPolynomial(x) for x in (a, b, c))
    assert pa + pb == pb + pa
    assert pa * pb == pb * pa
    assert (pa + pb) * pc == pa * pc + pb * pc
    assert pa - pa == LaurentPolynomial.zero()


@given(coeffs)
def test_laurent_json_round_trip(a):
    p = LaurentPolynomial(a)
    assert LaurentPolynomial.from_json(p.to_json()) == p


def test_laurent_drops_zeros_and_pow():
    assert LaurentPolynomial({3: 0, 1: 2}).coeffs == {1: 2}
    assert Q_PLUS_QINV ** 2 == LaurentPolynomial({2: 1, 0: 2, -2: 1})
    assert LaurentPolynomial({0: 1}) == 1


def test_laurent_fraction_coeffs():
    p = LaurentPolynomial({1: Fraction(1, 2)})
    assert (p + p).coeffs == {1: 1}


def test_theta_phi():
    assert theta(("+", "-", "w")) == -1
    g = Generator(state=(0, 1), labels=("w", "+"))
    assert theta(g) == 0
    assert phi(("w", "+"), 1, 2, 1) == 2  # 1 + 2 - 1 + 0


def test_generator_rejects_bad_labels():
    with pytest.raises(ValueError):
        Generator(state=(0,), labels=("v",))


def test_local_map_merge():
    src, dst, entries = local_map("circle-merge")
    assert src == [("+", "+"), ("+", "-"), ("-", "+"), ("-", "-")]
    assert dst == [("+",), ("-",)]
    assert entries == {(("+",), ("+", "+")): 1,
                       (("-",), ("+", "-")): 1,
                       (("-",), ("-", "+")): 1}


def test_local_map_split():
    _, _, entries = local_map("circle-split")
    assert entries == {(("+", "-"), ("+",)): 1,
                       (("-", "+"), ("+",)): 1,
                       (("-", "-"), ("-",)): 1}


def test_local_map_arc_cases():
    _, _, split = local_map("arc-split-circle")
    assert split == {(("w", "-"), ("w",)): 1}
    _, _, merge = local_map("arc-circle-merge")
    assert merge == {(("w",), ("w", "+")): 1}
    _, _, reconnect = local_map("arc-arc-reconnect")
    assert reconnect == {}


def test_local_map_theta_drop():
    """Every local saddle map lowers theta by exactly 1."""
    for kind in ("circle-merge", "circle-split", "arc-split-circle",
                 "arc-circle-merge"):
        _, _, entries = local_map(kind)
        for (dst, src) in entries:
            assert theta(dst) == theta(src) - 1


def test_functor_f_restricted_to_circles():
    local_map("circle-merge", functor="F")
    with pytest.raises(ValueError):
        local_map("arc-split-circle", functor="F")


def test_unit_counit():
    eps, eta = unit_counit()
    assert eps == {(("+",), ()): 1}
    assert eta == {((), ("-",)): 1}
