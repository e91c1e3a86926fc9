"""Exact linear algebra over field-like coefficients.

Rows are sparse maps column -> value.  Values only need +, -, *, /,
truthiness and equality, so the same routines serve rational, Laurent
fraction and cyclotomic coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import QLaurent, _poly_divmod


class LaurentFrac:
    """A quotient of Laurent polynomials in q, reduced by polynomial gcd."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        num = QLaurent.coerce(num)
        den = QLaurent.one() if den is None else QLaurent.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _reduce_pair(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def coerce(value):
        if isinstance(value, LaurentFrac):
            return value
        return LaurentFrac(value)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = LaurentFrac.coerce(other)
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = LaurentFrac.coerce(other)
        return LaurentFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return LaurentFrac(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-LaurentFrac.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = LaurentFrac.coerce(other)
        return LaurentFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = LaurentFrac.coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by zero Laurent fraction")
        return LaurentFrac(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return LaurentFrac.coerce(other) / self

    def as_laurent(self):
        """Clear the denominator exactly (raises NotDivisible if impossible)."""
        return self.num.exact_divide(self.den)

    def __str__(self):
        if self.den == QLaurent.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"LaurentFrac({self})"


def _reduce_pair(num, den):
    if not num:
        return QLaurent.zero(), QLaurent.one()
    g = _laurent_gcd(num, den)
    num = num.exact_divide(g)
    den = den.exact_divide(g)
    # normalize: monic denominator, exponents shifted to kill q-units
    shift = -den.min_exp()
    den = den.shift(shift)
    num = num.shift(shift)
    lead = den.terms[den.max_exp()]
    if lead != 1:
        den = den * Fraction(1, 1) * Fraction(lead.denominator, lead.numerator)
        num = num * Fraction(lead.denominator, lead.numerator)
    return num, den


def _laurent_gcd(a, b):
    """Gcd of the underlying polynomials, up to a unit q^k."""
    pa, _ = a._dense()
    pb, _ = b._dense()
    while any(pb):
        _, pa = _poly_divmod(pa, pb)
        pa, pb = pb, _trim(pa)
    # make monic
    d = len(pa) - 1
    while d > 0 and not pa[d]:
        d -= 1
    lead = pa[d]
    return QLaurent({i: c / lead for i, c in enumerate(pa) if c})


def _trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def rref(rows, one):
    """Reduced row echelon form of sparse rows (maps col -> value).

    Column pivots are chosen in increasing column order.  Returns
    (pivot_cols, reduced_rows) where reduced_rows[k] has pivot pivot_cols[k]
    with value 1 and zeros in every other pivot column.
    """
    pivots = []
    reduced = []
    for row in rows:
        row = dict(row)
        for p, prow in zip(pivots, reduced):
            v = row.get(p)
            if v:
                _row_submul(row, v, prow)
        if not row:
            continue
        p = min(row)
        inv = one / row[p]
        row = {c: v * inv for c, v in row.items()}
        for k, prow in enumerate(reduced):
            v = prow.get(p)
            if v:
                _row_submul(prow, v, row)
        pivots.append(p)
        reduced.append(row)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [pivots[k] for k in order], [reduced[k] for k in order]


def _row_submul(row, factor, other):
    for c, v in other.items():
        s = row.get(c)
        s = -factor * v if s is None else s - factor * v
        if s:
            row[c] = s
        else:
            row.pop(c, None)


def rank(rows, one):
    pivots, _ = rref(rows, one)
    return len(pivots)


def nullspace(rows, ncols, one):
    """Basis of the right kernel, as sparse column maps."""
    pivots, reduced = rref(rows, one)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = {free: one}
        for p, row in zip(pivots, reduced):
            v = row.get(free)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis


def solve(rows, rhs, ncols, one):
    """One solution of the inhomogeneous sparse system, or None if inconsistent.

    ``rows`` are sparse maps col -> value over columns 0..ncols-1; ``rhs``
    is aligned with rows.  Free variables are set to zero.
    """
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[ncols] = b
        aug.append(r)
    pivots, reduced = rref(aug, one)
    if ncols in pivots:
        return None  # a row reduced to 0 = nonzero
    sol = {}
    for p, row in zip(pivots, reduced):
        v = row.get(ncols)
        if v:
            sol[p] = v
    return sol


def matrix_inverse(mat, one):
    """Inverse of a small dense matrix over a field, or None if singular."""
    n = len(mat)
    rows = []
    for i in range(n):
        row = {j: mat[i][j] for j in range(n) if mat[i][j]}
        row.update({n + i: one})
        rows.append(row)
    pivots, reduced = rref(rows, one)
    if pivots != list(range(n)):
        return None
    inv = [[None] * n for _ in range(n)]
    zero = one - one
    for p, row in zip(pivots, reduced):
        for j in range(n):
            inv[p][j] = row.get(n + j, zero)
    return inv
