import random

import pytest

from qweyl.expressions import (
    NegativePower,
    QSyntaxError,
    UnknownSymbol,
    evaluate,
    parse,
)
from qweyl.presentations import beta, dq_cn, dq_gl2_plus, oq_gl2_plus


def test_parse_ordered_products():
    p = dq_cn(2)
    e = evaluate("d1*x1 - q^2*x1*d1", p)
    assert e == (p.q(2) - 1) * p.one()


def test_juxtaposition():
    p = dq_cn(2)
    assert evaluate("x2 x1", p) == p.q(1) * p.monomial((1, 1, 0, 0))


def test_negative_power_rejected():
    p = dq_cn(2)
    with pytest.raises(QSyntaxError):
        evaluate("x1^-1", p)


def test_q_negative_power_allowed():
    p = dq_cn(1)
    assert evaluate("q^-2", p) == p.q(-2)


def test_unknown_symbol():
    p = dq_cn(1)
    with pytest.raises(UnknownSymbol):
        evaluate("x7", p)


def test_syntax_error_position():
    with pytest.raises(QSyntaxError) as err:
        parse("x1 + ")
    assert "position" in str(err.value)


def test_named_elements_resolve():
    p = dq_cn(2)
    assert evaluate("beta_2", p) == beta(p, 2)
    oq = oq_gl2_plus()
    assert evaluate("detq", oq) == oq.named["detq"]
    assert evaluate("a*d - q^2*b*c", oq) == oq.named["detq"]


def test_parameters_in_exponents():
    p = oq_gl2_plus()
    for n in range(1, 5):
        lhs = evaluate("d^n * b", p, env={"n": n})
        rhs = evaluate("q^(2*n) * b * d^n", p, env={"n": n})
        assert lhs == rhs


def test_zero_coefficient_short_circuits_negative_power():
    p = oq_gl2_plus()
    # (q^(2*n) - q^2) vanishes at n=1, shielding the b^(n-2) factor
    e = evaluate("(q^(2*n) - q^2) * b^(n-2) * d", p, env={"n": 1})
    assert not e
    with pytest.raises(NegativePower):
        evaluate("q * b^(n-2) * d", p, env={"n": 1})
    assert evaluate("(q^(2*n) - q^2) * b^(n-2) * d", p, env={"n": 3})


def test_rationals():
    p = dq_cn(1)
    assert evaluate("1/2 * x1 + 1/2 * x1", p) == p.gen("x1")


def test_roundtrip_print_parse():
    rng = random.Random(41)
    for pres in (dq_cn(2), oq_gl2_plus(), dq_gl2_plus(), dq_cn(1, mode=3)):
        for _ in range(25):
            e = pres.zero()
            for _ in range(rng.randint(1, 4)):
                mono = tuple(rng.randint(0, 2) for _ in range(pres.ngens))
                coeff = pres.ring.q_power(rng.randint(-3, 3)) * rng.randint(-2, 2)
                e = e + pres.monomial(mono, coeff) if coeff else e
            back = evaluate(str(e), pres)
            assert back == e, (str(e), pres.name)
