import random
from fractions import Fraction

import pytest

from qweyl.coefficients import (
    BadLevel,
    CycNumber,
    NotDivisible,
    QLaurent,
    cyclotomic,
    specialize,
)


def q(k=1, c=1):
    return QLaurent.q_power(k, c)


def test_basic_products():
    assert (q(1) - 1) * (q(1) + 1) == q(2) - 1
    assert q(-1) * q(1) == QLaurent.one()
    assert (q(2) - 1) + (1 - q(2)) == QLaurent.zero()
    assert not ((q(2) - 1) + (1 - q(2))).terms


def test_exact_divide():
    assert (q(2) - 1).exact_divide(q(1) - 1) == q(1) + 1
    assert (q(3) - 1).exact_divide(q(1) - 1) == q(2) + q(1) + 1
    with pytest.raises(NotDivisible):
        (q(1) - 1).exact_divide(q(1) + 1)


def test_exact_divide_roundtrip_random():
    rng = random.Random(11)
    for _ in range(60):
        a = _random_laurent(rng)
        b = _random_laurent(rng)
        if not b:
            continue
        assert (a * b).exact_divide(b) == a


def _random_laurent(rng):
    return QLaurent(
        {rng.randint(-4, 4): Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.randint(0, 4))}
    )


def test_cyclotomic_small():
    assert cyclotomic(3) == q(2) + q(1) + 1
    assert cyclotomic(5) == q(4) + q(3) + q(2) + q(1) + 1


def test_cyclotomic_nine():
    # independent oracle: (q^9 - 1) / (q^3 - 1)
    expected = (q(9) - 1).exact_divide(q(3) - 1)
    assert expected == q(6) + q(3) + 1
    assert cyclotomic(9) == expected


def test_cyclotomic_bad_levels():
    for bad in (0, 1, 2, 4, -3):
        with pytest.raises(BadLevel):
            cyclotomic(bad)


def test_specialize_values():
    assert specialize(q(3), 3) == 1
    assert specialize(q(2) + q(1) + 1, 3) == 0
    # q^(2n) - 1 vanishes exactly when the level divides n (levels are odd)
    for ell in (3, 5, 9):
        for n in range(1, 3 * ell):
            val = specialize(q(2 * n) - 1, ell)
            if n % ell == 0:
                assert not val
            else:
                assert val


def test_specialize_is_ring_hom():
    rng = random.Random(5)
    for _ in range(50):
        a = _random_laurent(rng)
        b = _random_laurent(rng)
        for ell in (3, 5):
            assert specialize(a * b, ell) == specialize(a, ell) * specialize(b, ell)
            assert specialize(a + b, ell) == specialize(a, ell) + specialize(b, ell)


def test_cyc_root_of_unity():
    for ell in (3, 5, 7, 9):
        zeta = CycNumber.q_power(ell, 1)
        assert zeta**ell == CycNumber.one(ell)
        for k in range(1, ell):
            assert zeta**k != CycNumber.one(ell)


def test_cyc_inverse():
    rng = random.Random(7)
    for ell in (3, 5, 9):
        one = CycNumber.one(ell)
        for _ in range(25):
            x = CycNumber(ell, [Fraction(rng.randint(-4, 4)) for _ in range(4)])
            if not x:
                continue
            assert x * x.inverse() == one
            assert (one / x) * x == one


def test_pow_and_eval():
    p = (q(1) - 1) ** 3
    assert p == q(3) - 3 * q(2) + 3 * q(1) - 1
    assert (q(2) + q(1)).eval_at_one() == 2


def test_printing():
    assert str(q(2) - 1) == "q^2 - 1"
    assert str(QLaurent.zero()) == "0"
    assert str(3 * q(1)) == "3*q"
    assert str(q(-1, Fraction(1, 2))) == "1/2*q^-1"
