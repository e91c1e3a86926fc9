"""Root-of-unity center machinery.

At a primitive odd root of unity the generator powers x_i^l, d_i^l generate
the center of the q-difference algebra, the grading operators power to
1 + sum x_j^l d_j^l, and the reflection equation algebra acquires a single
central correction element z with leading term a^l.  Everything here is
verified by direct normal-form computation; the centralizer solver provides
the computational converse at bounded degree.
"""

from __future__ import annotations

from .coefficients import NotDivisible
from .engine import NCElement, right_divide_by_gen_power
from .linalg import nullspace
from .presentations import beta, dq_cn, dq_gl2_plus, embed_d, embed_x, oq_gl2_plus


class CentralityReport:
    """Commutators of one element against every generator."""

    def __init__(self, element, commutators):
        self.element = element
        self.commutators = commutators  # list of (generator name, normal form)

    @property
    def central(self):
        return all(not c for _, c in self.commutators)

    def witnesses(self):
        return [(g, c) for g, c in self.commutators if c]

    def __str__(self):
        if self.central:
            return f"central: {self.element}"
        bad = ", ".join(g for g, _ in self.witnesses())
        return f"not central (fails against {bad}): {self.element}"


def is_central(element, presentation=None):
    presentation = presentation or element.alg
    comms = [
        (g, element.commutator(presentation.gen(g))) for g in presentation.generators
    ]
    return CentralityReport(element, comms)


def beta_power_identity(N, ell):
    """Check beta_i^l == 1 + sum_{j<=i} x_j^l d_j^l for i = 0..N.

    The sum runs through j = i (the bound printed with the statement stops
    one short, but its own inductive step lands on the full sum; the normal
    form decides).
    """
    pres = dq_cn(N, mode=ell)
    results = []
    for i in range(N + 1):
        expected = pres.one()
        for j in range(1, i + 1):
            expected = expected + pres.gen(f"x{j}", ell) * pres.gen(f"d{j}", ell)
        got = beta(pres, i) ** ell
        results.append((i, got == expected))
    return results


class CCoefficientTable:
    """The correction coefficients of (x_N d_N + beta_{N-1})^n, two ways."""

    def __init__(self, n, table, matches_expansion):
        self.n = n
        self.table = table  # k -> NCElement, k = 0..n
        self.matches_expansion = matches_expansion

    def inner_vanish(self):
        """True when every c_k with 0 < k < n is zero (the root-of-unity case)."""
        return all(not self.table[k] for k in range(1, self.n))


def c_coefficients(n, N, mode="generic"):
    """Compute the c_k recursion and compare against direct expansion.

    Recursion: c_k^(j) = q^(2k) c_k^(j-1) beta_{N-1} + q^(2(k-1)) c_{k-1}^(j-1),
    seeded with c_0^(0) = 1.  The direct expansion of
    (x_N d_N + beta_{N-1})^n must equal sum_k c_k^(n) x_N^k d_N^k.
    """
    if n < 1 or N < 1:
        raise ValueError("need n >= 1 and N >= 1")
    pres = dq_cn(N, mode=mode)
    b = beta(pres, N - 1)
    prev = {0: pres.one()}
    for _ in range(n):
        cur = {}
        for k in range(0, max(prev) + 2):
            total = pres.zero()
            if k in prev:
                total = total + pres.q(2 * k) * prev[k] * b
            if k - 1 in prev:
                total = total + pres.q(2 * (k - 1)) * prev[k - 1]
            if total:
                cur[k] = total
        prev = cur
    table = {k: prev.get(k, pres.zero()) for k in range(n + 1)}

    xd = pres.gen(f"x{N}") * pres.gen(f"d{N}")
    expansion = (xd + b) ** n
    assembled = pres.zero()
    for k, ck in table.items():
        assembled = assembled + ck * pres.gen(f"x{N}", k) * pres.gen(f"d{N}", k)
    return CCoefficientTable(n, table, assembled == expansion)


def compute_z(ell):
    """The central correction element z with det_q^l = z d^l - b^l c^l.

    Computed by clearing d^{-l} from (det_q^l + b^l c^l); a failed division
    or a failed centrality check would falsify the defining identity, so
    both raise.
    """
    pres = oq_gl2_plus(mode=ell)
    numerator = pres.named["detq"] ** ell + pres.gen("b", ell) * pres.gen("c", ell)
    z = right_divide_by_gen_power(numerator, "d", ell)
    report = is_central(z, pres)
    if not report.central:
        raise ArithmeticError(f"z is not central: {report}")
    lead_mono, lead_coeff = z.sorted_terms()[0]
    expected_lead = [0] * 4
    expected_lead[pres.index["a"]] = ell
    if lead_mono != tuple(expected_lead) or lead_coeff != pres.ring.one():
        raise ArithmeticError(f"z has unexpected leading term: {z}")
    return z


def compute_v_w(ell, check_central=True):
    """The images v, w of z inside the double, with their defining identities."""
    z = compute_z(ell)
    dq = dq_gl2_plus(mode=ell)
    v = embed_x(z, dq)
    w = embed_d(z, dq)
    detX, detD = dq.named["detqX"], dq.named["detqD"]
    lhs = detX**ell
    rhs = v * dq.gen("x22", ell) - dq.gen("x12", ell) * dq.gen("x21", ell)
    if lhs != rhs:
        raise ArithmeticError("v does not satisfy the determinant-power identity")
    lhs = detD**ell
    rhs = w * dq.gen("p22", ell) - dq.gen("p12", ell) * dq.gen("p21", ell)
    if lhs != rhs:
        raise ArithmeticError("w does not satisfy the determinant-power identity")
    if check_central:
        for name, elem in (("v", v), ("w", w)):
            report = is_central(elem, dq)
            if not report.central:
                raise ArithmeticError(f"{name} is not central: {report}")
    return v, w


def ell_center_matrices(ell):
    """The matrices of l-center generators used by the Frobenius maps."""
    pres = oq_gl2_plus(mode=ell)
    z = compute_z(ell)
    L = [
        [z, pres.gen("b", ell)],
        [pres.gen("c", ell), pres.gen("d", ell)],
    ]
    dq = dq_gl2_plus(mode=ell)
    v, w = compute_v_w(ell, check_central=False)
    X = [[v, dq.gen("x12", ell)], [dq.gen("x21", ell), dq.gen("x22", ell)]]
    D = [[w, dq.gen("p12", ell)], [dq.gen("p21", ell), dq.gen("p22", ell)]]
    return L, X, D


def all_monomials(pres, degree_bound):
    def rec(pos, remaining):
        if pos == pres.ngens:
            yield ()
            return
        for e in range(remaining + 1):
            for rest in rec(pos + 1, remaining - e):
                yield (e,) + rest

    return list(rec(0, degree_bound))


def centralizer_basis(pres, degree_bound):
    """Basis of the centralizer of the generators, up to total degree.

    Works in root-of-unity mode (the coefficients form a field).  The
    monomial space splits into blocks under the presentation's validated
    gradings; commutation against a generator maps each block into shifted
    blocks, so the kernel computation is block-diagonal.
    """
    if pres.ring.kind != "root":
        raise ValueError("centralizer_basis expects a root-of-unity presentation")
    one = pres.ring.one()
    monos = all_monomials(pres, degree_bound)
    blocks = {}
    for m in monos:
        key = tuple(sum(w[i] * e for i, e in enumerate(m)) for w in pres.gradings)
        blocks.setdefault(key, []).append(m)

    basis = []
    for key in sorted(blocks):
        block = blocks[key]
        col = {m: i for i, m in enumerate(block)}
        rows = {}
        for gname in pres.generators:
            g = pres.gen(gname)
            for m in block:
                comm = pres.monomial(m).commutator(g)
                for target, coeff in comm.terms.items():
                    rows.setdefault((gname, target), {})[col[m]] = coeff
        kernel = nullspace(list(rows.values()), len(block), one)
        for vec in kernel:
            basis.append(NCElement(pres, {block[c]: v for c, v in vec.items()}))
    return basis


def element_vector(elem, mono_index):
    return {mono_index[m]: c for m, c in elem.terms.items()}


def in_span(candidates, element):
    """Is ``element`` in the linear span of ``candidates`` (same algebra)?"""
    from .linalg import rank

    monos = set(element.terms)
    for c in candidates:
        monos.update(c.terms)
    mono_index = {m: i for i, m in enumerate(sorted(monos))}
    rows = [element_vector(c, mono_index) for c in candidates if c]
    base = rank(rows, element.alg.ring.one())
    rows.append(element_vector(element, mono_index))
    return rank(rows, element.alg.ring.one()) == base


def span_equal(elems1, elems2):
    return all(in_span(elems1, e) for e in elems2) and all(
        in_span(elems2, e) for e in elems1
    )
