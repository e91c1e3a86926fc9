import pytest

from qweyl.center import (
    beta_power_identity,
    c_coefficients,
    centralizer_basis,
    compute_v_w,
    compute_z,
    in_span,
    is_central,
    span_equal,
)
from qweyl.presentations import beta, dq_cn, dq_gl2_plus, oq_gl2_plus


def test_is_central_examples():
    p = dq_cn(2, mode=3)
    assert is_central(p.gen("x1", 3), p).central
    assert not is_central(p.gen("x1"), p).central
    oq = oq_gl2_plus(mode=3)
    report = is_central(oq.gen("a", 3), oq)
    assert not report.central
    assert report.witnesses()


def test_beta_power_identity():
    for N in (0, 1, 2, 3):
        assert all(ok for _, ok in beta_power_identity(N, 3))
    for N in (1, 2):
        assert all(ok for _, ok in beta_power_identity(N, 5))


def test_beta_cube_explicit():
    p = dq_cn(2, mode=3)
    b2 = beta(p, 2) ** 3
    expected = (
        p.one()
        + p.gen("x1", 3) * p.gen("d1", 3)
        + p.gen("x2", 3) * p.gen("d2", 3)
    )
    assert b2 == expected


def test_c_coefficients_generic():
    for n in (1, 2, 3):
        t = c_coefficients(n, 2)
        assert t.matches_expansion
    # n=1 has no inner coefficients at all
    assert c_coefficients(1, 2).table.keys() == {0, 1}


def test_c_coefficients_vanish_at_root():
    t = c_coefficients(3, 1, mode=3)
    assert t.matches_expansion and t.inner_vanish()
    t = c_coefficients(3, 2, mode=3)
    assert t.matches_expansion and t.inner_vanish()
    # away from n = l they do not all vanish
    t = c_coefficients(2, 2, mode=3)
    assert t.matches_expansion and not t.inner_vanish()


def test_z_at_three():
    z = compute_z(3)
    p = z.alg
    expected = (
        p.gen("a", 3)
        + 3 * (p.gen("a") * p.gen("b") * p.gen("c"))
        + 3 * p.q(1) * (p.gen("b") * p.gen("c") * p.gen("d"))
    )
    assert z == expected


def test_z_at_five():
    z = compute_z(5)
    p = z.alg

    def mono(ea, eb, ec, ed, coeff):
        return p.monomial((ea, eb, ec, ed), coeff)

    q = p.ring.q_power
    expected = (
        mono(5, 0, 0, 0, 1)
        + mono(3, 1, 1, 0, 5)
        + mono(2, 1, 1, 1, 5 * (2 * q(3) - q(1)))
        + mono(1, 2, 2, 0, 5)
        + mono(1, 1, 1, 2, 5 * (2 * q(3) + 3 * q(2) + 4 * q(1) + 2))
        + mono(0, 2, 2, 1, 5 * q(3))
        + mono(0, 1, 1, 3, -5 * (q(3) + 2 * q(2) + q(1)))
    )
    assert z == expected


def test_v_w():
    v, w = compute_v_w(3)
    dq = v.alg
    assert is_central(v, dq).central
    assert is_central(w, dq).central
    # v is z pushed through the first embedding
    z = compute_z(3)
    from qweyl.presentations import embed_x

    assert v == embed_x(z, dq)
    # the determinant-power identity, re-stated explicitly
    lhs = dq.named["detqX"] ** 3
    assert lhs == v * dq.gen("x22", 3) - dq.gen("x12", 3) * dq.gen("x21", 3)


def test_ell_center_generators_commute():
    p = oq_gl2_plus(mode=3)
    z = compute_z(3)
    gens = [z, p.gen("b", 3), p.gen("c", 3), p.gen("d", 3)]
    for i, u in enumerate(gens):
        for v in gens[i + 1 :]:
            assert not u.commutator(v)


def test_double_ell_center_generators_commute():
    dq = dq_gl2_plus(mode=3)
    v, w = compute_v_w(3, check_central=False)
    gens = [v, w] + [dq.gen(g, 3) for g in ("x12", "x21", "x22", "p12", "p21", "p22")]
    for i, u in enumerate(gens):
        for vv in gens[i + 1 :]:
            assert not u.commutator(vv)


def test_centralizer_dq1():
    # degree <= 6: all products of x^3 and d^3 that fit, and nothing else
    p = dq_cn(1, mode=3)
    basis = centralizer_basis(p, 6)
    expected = [
        p.one(),
        p.gen("x1", 3),
        p.gen("d1", 3),
        p.gen("x1", 3) * p.gen("d1", 3),
        p.gen("x1", 6),
        p.gen("d1", 6),
    ]
    assert span_equal(basis, expected)


def test_centralizer_bound_zero():
    p = dq_cn(1, mode=3)
    basis = centralizer_basis(p, 0)
    assert span_equal(basis, [p.one()])


def test_centralizer_oq():
    p = oq_gl2_plus(mode=3)
    basis = centralizer_basis(p, 3)
    z = compute_z(3)
    for elem in (p.one(), p.gen("b", 3), p.gen("c", 3), p.gen("d", 3), z, p.named["detq"]):
        assert in_span(basis, elem)
    assert not in_span(basis, p.gen("a", 3))


def test_z_uniqueness_within_degree_bound():
    # z is the only central element of degree <= 3 with leading term a^3
    p = oq_gl2_plus(mode=3)
    basis = centralizer_basis(p, 3)
    a_idx = p.index["a"]
    with_a3 = [e for e in basis if any(m[a_idx] == 3 for m in e.terms)]
    assert len(with_a3) == 1
    z = compute_z(3)
    lead = max(with_a3[0].terms)
    scaled = with_a3[0] * with_a3[0].terms[lead].inverse()
    assert scaled == z


def test_algebraic_independence_low_degree():
    # monomials in the l-center generators of l-degree <= 2 stay independent
    p = dq_cn(2, mode=3)
    gens = [p.gen("x1", 3), p.gen("d1", 3), p.gen("x2", 3), p.gen("d2", 3)]
    products = [p.one()] + gens[:]
    for i, u in enumerate(gens):
        for v in gens[i:]:
            products.append(u * v)
    monos = {m for e in products for m in e.terms}
    index = {m: i for i, m in enumerate(sorted(monos))}
    from qweyl.linalg import rank
    from qweyl.center import element_vector

    rows = [element_vector(e, index) for e in products]
    assert rank(rows, p.ring.one()) == len(products)
