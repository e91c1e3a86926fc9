"""Polynomial Poisson bivectors on the classical phase space.

The commutative polynomial type lives here too; it is small and only the
Poisson layer and the classical checks need it.  The bivector of interest
has base-base coefficients y_j y_i, fiber-fiber coefficients -z_j z_i,
mixed coefficients y_i z_j off the diagonal, and 2(1 + sum_{k<=i} y_k z_k)
on the diagonal.  The semiclassical bracket extracted from commutators
reproduces its coefficients up to signs in the mixed block; the empirical
sign table is reported rather than reconciled (no wedge convention is
pinned by the source of the formula).
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import NotDivisible
from .presentations import dq_cn


class CPoly:
    """A commutative polynomial over the rationals, sparse exponent map."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        t = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    t[tuple(m)] = c
        self.terms = t

    @staticmethod
    def zero(nvars):
        return CPoly(nvars)

    @staticmethod
    def const(nvars, c):
        return CPoly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def var(nvars, i):
        m = [0] * nvars
        m[i] = 1
        return CPoly(nvars, {tuple(m): Fraction(1)})

    def _coerce(self, other):
        if isinstance(other, CPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return CPoly.const(self.nvars, other)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, Fraction(0)) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        out = CPoly.__new__(CPoly)
        out.nvars = self.nvars
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = CPoly.__new__(CPoly)
        out.nvars = self.nvars
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = t.get(m, Fraction(0)) + c1 * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        out = CPoly.__new__(CPoly)
        out.nvars = self.nvars
        out.terms = t
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        out = CPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, i):
        t = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                t[tuple(mm)] = c * m[i]
        return CPoly(self.nvars, t)

    def degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def evaluate(self, values):
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for e, val in zip(m, values):
                if e:
                    v *= Fraction(val) ** e
            total += v
        return total

    def divides(self, other):
        """Does self divide other exactly?"""
        try:
            other._coerce(self).exact_divide(self)
            return True
        except (NotDivisible, ZeroDivisionError):
            return False

    def exact_divide(self, divisor):
        """Multivariate exact division (lex leading terms); raises NotDivisible."""
        divisor = self._coerce(divisor)
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self.terms)
        quo = {}
        d_lead = max(divisor.terms)
        d_coeff = divisor.terms[d_lead]
        while rem:
            lead = max(rem)
            if any(a < b for a, b in zip(lead, d_lead)):
                raise NotDivisible("leading monomial not divisible")
            q_mono = tuple(a - b for a, b in zip(lead, d_lead))
            q_coeff = rem[lead] / d_coeff
            quo[q_mono] = quo.get(q_mono, Fraction(0)) + q_coeff
            for m, c in divisor.terms.items():
                mm = tuple(a + b for a, b in zip(q_mono, m))
                s = rem.get(mm, Fraction(0)) - q_coeff * c
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return CPoly(self.nvars, quo)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self._names()
        pieces = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append(f"-{mono}")
            else:
                pieces.append(f"{c}*{mono}")
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def _names(self):
        n = self.nvars // 2
        return [f"y{i+1}" for i in range(n)] + [f"z{i+1}" for i in range(n)]

    def __repr__(self):
        return f"CPoly({self})"


class PolyBivector:
    """An antisymmetric table of polynomial coefficients on 2N coordinates.

    Coordinates are ordered y_1..y_N, z_1..z_N; entry (u, v) is the
    coefficient pairing du with dv.
    """

    def __init__(self, N, table):
        self.N = N
        self.nvars = 2 * N
        self.table = {}
        for (u, v), p in table.items():
            if u == v and p:
                raise ValueError("diagonal entries must vanish")
            self.table[(u, v)] = p
        # enforce antisymmetry, filling missing mirror entries
        for (u, v), p in list(self.table.items()):
            mirror = self.table.get((v, u))
            if mirror is None:
                self.table[(v, u)] = -p
            elif mirror != -p:
                raise ValueError(f"table is not antisymmetric at {(u, v)}")

    def entry(self, u, v):
        return self.table.get((u, v), CPoly.zero(self.nvars))

    def bracket(self, f, g):
        total = CPoly.zero(self.nvars)
        for (u, v), p in self.table.items():
            if p:
                total = total + p * f.diff(u) * g.diff(v)
        return total

    def coefficient_matrix(self):
        return [[self.entry(u, v) for v in range(self.nvars)] for u in range(self.nvars)]


def pi_bivector(N):
    """The distinguished bivector: quadratic base/fiber blocks plus the
    affine diagonal 2(1 + partial pairings)."""
    if N < 1:
        raise ValueError("N must be positive")
    nv = 2 * N
    y = [CPoly.var(nv, i) for i in range(N)]
    z = [CPoly.var(nv, N + i) for i in range(N)]
    table = {}
    for j in range(N):
        for i in range(j):
            # j > i in both blocks
            table[(j, i)] = y[j] * y[i]
            table[(N + j, N + i)] = -(z[j] * z[i])
    for i in range(N):
        for j in range(N):
            if i != j:
                table[(i, N + j)] = y[i] * z[j]
    for i in range(N):
        acc = CPoly.const(nv, 1)
        for k in range(i + 1):
            acc = acc + y[k] * z[k]
        table[(i, N + i)] = 2 * acc
    return PolyBivector(N, table)


def jacobi_check(bivector):
    """Cyclic-sum obstruction for every coordinate triple; failures are data."""
    nv = bivector.nvars
    failures = []
    checked = 0
    for u in range(nv):
        for v in range(u + 1, nv):
            for w in range(v + 1, nv):
                checked += 1
                total = CPoly.zero(nv)
                for a, b, c in ((u, v, w), (v, w, u), (w, u, v)):
                    for t in range(nv):
                        total = total + bivector.entry(a, t) * bivector.entry(b, c).diff(t)
                if total:
                    failures.append(((u, v, w), total))
    return JacobiReport(checked, failures)


class JacobiReport:
    def __init__(self, checked, failures):
        self.checked = checked
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def __str__(self):
        if self.ok:
            return f"Jacobi holds on all {self.checked} coordinate triples"
        return f"Jacobi fails on {len(self.failures)} of {self.checked} triples"


def degeneracy_determinant(bivector):
    """Determinant of the coefficient matrix (cofactor expansion; 2N <= 6)."""
    mat = bivector.coefficient_matrix()
    return _det(mat, CPoly.zero(bivector.nvars), CPoly.const(bivector.nvars, 1))


def _det(mat, zero, one):
    n = len(mat)
    if n == 0:
        return one
    if n == 1:
        return mat[0][0]
    total = zero
    for j in range(n):
        entry = mat[0][j]
        if not entry:
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = entry * _det(minor, zero, one)
        total = total + term if j % 2 == 0 else total - term
    return total


def semiclassical_bracket(f, g, N):
    """First-order bracket of the deformation: lift y -> x, z -> d (base
    letters left of fiber letters), divide the commutator by (q - 1), set
    q = 1."""
    from .coefficients import QLaurent

    pres = dq_cn(N)
    F = _lift(pres, f)
    G = _lift(pres, g)
    comm = F * G - G * F
    qm1 = QLaurent.q_power(1) - 1
    nv = 2 * N
    out = CPoly.zero(nv)
    for m, c in comm.terms.items():
        quo = c.exact_divide(qm1)
        out = out + CPoly(nv, {m: quo.eval_at_one()})
    return out


def _lift(pres, poly):
    terms = {}
    for m, c in poly.terms.items():
        terms[tuple(m)] = c
    return pres.element(terms)


def bracket_on_coordinates(N):
    """The semiclassical bracket of every coordinate pair, as a bivector."""
    nv = 2 * N
    table = {}
    for u in range(nv):
        for v in range(u + 1, nv):
            p = semiclassical_bracket(CPoly.var(nv, u), CPoly.var(nv, v), N)
            table[(u, v)] = p
    return PolyBivector(N, table)


def compare_with_pi(N):
    """Per-pair comparison of the semiclassical bracket against the
    distinguished bivector; records the sign relating each pair."""
    sigma = bracket_on_coordinates(N)
    pi = pi_bivector(N)
    rows = []
    names = CPoly.zero(2 * N)._names()
    for u in range(2 * N):
        for v in range(u + 1, 2 * N):
            s = sigma.entry(u, v)
            p = pi.entry(u, v)
            if s == p:
                sign = "+" if s else "0"
            elif s == -p:
                sign = "-"
            else:
                sign = "MISMATCH"
            rows.append(
                {
                    "pair": (names[u], names[v]),
                    "semiclassical": str(s),
                    "pi": str(p),
                    "sign": sign,
                }
            )
    return rows


def semiclassical_matches_pi_up_to_sign(N):
    return all(r["sign"] in ("+", "-", "0") for r in compare_with_pi(N))
