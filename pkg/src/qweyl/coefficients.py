"""Exact coefficient arithmetic.

Two coefficient rings back everything else in the package:

* ``QLaurent`` -- Laurent polynomials in the formal parameter q with exact
  rational coefficients.  This is the coefficient ring in generic mode.
* ``CycNumber`` -- elements of the cyclotomic field obtained by sending q to
  a primitive odd root of unity; arithmetic is performed modulo the
  cyclotomic polynomial.  This is the coefficient ring in root-of-unity mode.

Both types are immutable values with operator overloading, so the rewriting
engine can stay agnostic about which ring it is working over.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


class BadLevel(ValueError):
    """Raised for root-of-unity levels that are not odd integers > 1."""


_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class QLaurent:
    """A Laurent polynomial in q over the rationals, stored sparsely.

    The term map never contains zero coefficients; the zero element is the
    empty map.  Instances are treated as immutable values.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for e, c in terms.items():
                c = _as_fraction(c)
                if c:
                    t[e] = c
        self.terms = t
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero():
        return QLaurent()

    @staticmethod
    def one():
        return QLaurent({0: _ONE})

    @staticmethod
    def const(c):
        return QLaurent({0: _as_fraction(c)})

    @staticmethod
    def q_power(k, coeff=1):
        return QLaurent({k: _as_fraction(coeff)})

    @staticmethod
    def coerce(value):
        if isinstance(value, QLaurent):
            return value
        if isinstance(value, (int, Fraction)):
            return QLaurent.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to QLaurent")

    # -- ring structure -----------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, _ZERO) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        out = QLaurent.__new__(QLaurent)
        out.terms = t
        out._hash = None
        return out

    __radd__ = __add__

    def __neg__(self):
        out = QLaurent.__new__(QLaurent)
        out.terms = {e: -c for e, c in self.terms.items()}
        out._hash = None
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QLaurent.const(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return QLaurent()
            out = QLaurent.__new__(QLaurent)
            out.terms = {e: v * c for e, v in self.terms.items()}
            out._hash = None
            return out
        if not isinstance(other, QLaurent):
            return NotImplemented
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = t.get(e, _ZERO) + c1 * c2
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        out = QLaurent.__new__(QLaurent)
        out.terms = t
        out._hash = None
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers of Laurent polynomials are not supported")
        result = QLaurent.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure helpers --------------------------------------------

    def min_exp(self):
        return min(self.terms) if self.terms else 0

    def max_exp(self):
        return max(self.terms) if self.terms else 0

    def is_const(self):
        return not self.terms or set(self.terms) == {0}

    def const_value(self):
        if not self.is_const():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get(0, _ZERO)

    def shift(self, k):
        """Multiply by q^k."""
        out = QLaurent.__new__(QLaurent)
        out.terms = {e + k: c for e, c in self.terms.items()}
        out._hash = None
        return out

    def eval_at_one(self):
        """The rational value at q = 1."""
        return sum(self.terms.values(), _ZERO)

    def _dense(self):
        """Dense coefficient list after clearing negative exponents.

        Returns (coeffs, shift) with self = q^shift * sum coeffs[i] q^i.
        """
        if not self.terms:
            return [], 0
        lo = self.min_exp()
        hi = self.max_exp()
        coeffs = [_ZERO] * (hi - lo + 1)
        for e, c in self.terms.items():
            coeffs[e - lo] = c
        return coeffs, lo

    @staticmethod
    def _from_dense(coeffs, shift):
        return QLaurent({i + shift: c for i, c in enumerate(coeffs) if c})

    def exact_divide(self, other):
        """Return c with other * c == self, or raise NotDivisible."""
        other = QLaurent.coerce(other)
        if not other:
            raise ZeroDivisionError("division of Laurent polynomials by zero")
        if not self:
            return QLaurent()
        num, nlo = self._dense()
        den, dlo = other._dense()
        quo, rem = _poly_divmod(num, den)
        if any(rem):
            raise NotDivisible(f"({self}) is not divisible by ({other})")
        return QLaurent._from_dense(quo, nlo - dlo)

    # -- printing -------------------------------------------------------

    def __str__(self):
        return format_qpoly(self.terms)

    def __repr__(self):
        return f"QLaurent({self})"


def _poly_divmod(num, den):
    """Long division of dense rational coefficient lists (lowest degree first)."""
    num = list(num)
    dd = len(den) - 1
    while dd >= 0 and not den[dd]:
        dd -= 1
    if dd < 0:
        raise ZeroDivisionError("polynomial division by zero")
    lead = den[dd]
    quo = [_ZERO] * max(len(num) - dd, 0)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if not c:
            continue
        f = c / lead
        quo[i - dd] = f
        for j in range(dd + 1):
            num[i - dd + j] -= f * den[j]
    return quo, num


def format_qpoly(terms, var="q"):
    """Render a sparse exponent->rational map in a stable human-readable form.

    Terms are listed by decreasing exponent; the output round-trips through
    the expression parser.
    """
    if not terms:
        return "0"
    pieces = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        else:
            p = var if e == 1 else f"{var}^{e}"
            body = p if c == 1 else f"{c}*{p}"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = first_body if first_sign == "+" else f"-{first_body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


@lru_cache(maxsize=None)
def _cyclotomic_any(n):
    """The n-th cyclotomic polynomial for any n >= 1, as a QLaurent."""
    poly = QLaurent({n: _ONE, 0: -_ONE})
    for d in range(1, n):
        if n % d == 0:
            poly = poly.exact_divide(_cyclotomic_any(d))
    return poly


def check_level(ell):
    if not isinstance(ell, int) or ell <= 1 or ell % 2 == 0:
        raise BadLevel(f"level must be an odd integer > 1, got {ell!r}")


def cyclotomic(ell):
    """The cyclotomic polynomial at an odd level > 1 (monic, degree phi(ell))."""
    check_level(ell)
    return _cyclotomic_any(ell)


@lru_cache(maxsize=None)
def _cyc_modulus(ell):
    """Dense monic coefficient list of the level-ell cyclotomic polynomial."""
    coeffs, shift = cyclotomic(ell)._dense()
    assert shift == 0
    return tuple(coeffs)


def _cyc_reduce(coeffs, ell):
    """Reduce a dense rational coefficient list modulo the level modulus."""
    mod = _cyc_modulus(ell)
    deg = len(mod) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if not c:
            continue
        coeffs[i] = _ZERO
        for j in range(deg):
            coeffs[i - deg + j] -= c * mod[j]
    while len(coeffs) > deg:
        coeffs.pop()
    while len(coeffs) < deg:
        coeffs.append(_ZERO)
    return coeffs


class CycNumber:
    """An element of the degree-phi(ell) cyclotomic field, q a primitive root.

    The residue is stored as the unique representative of degree < phi(ell);
    multiplication reduces eagerly so degrees stay bounded.
    """

    __slots__ = ("level", "coeffs", "_hash")

    def __init__(self, level, coeffs):
        check_level(level)
        self.level = level
        self.coeffs = tuple(_cyc_reduce([_as_fraction(c) for c in coeffs], level))
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(level):
        return CycNumber(level, [])

    @staticmethod
    def one(level):
        return CycNumber(level, [_ONE])

    @staticmethod
    def const(level, c):
        return CycNumber(level, [_as_fraction(c)])

    @staticmethod
    def q_power(level, k, coeff=1):
        k %= level
        coeffs = [_ZERO] * k + [_as_fraction(coeff)]
        return CycNumber(level, coeffs)

    def coerce(self, value):
        if isinstance(value, CycNumber):
            if value.level != self.level:
                raise ValueError(f"level mismatch: {self.level} vs {value.level}")
            return value
        if isinstance(value, (int, Fraction)):
            return CycNumber.const(self.level, value)
        raise TypeError(f"cannot coerce {type(value).__name__} to CycNumber")

    # -- field structure ----------------------------------------------

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNumber.const(self.level, other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.coeffs))
        return self._hash

    def __add__(self, other):
        other = self.coerce(other)
        return CycNumber(self.level, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.level, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self.coerce(other)
        return CycNumber(self.level, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return CycNumber(self.level, [a * c for a in self.coeffs])
        other = self.coerce(other)
        a, b = self.coeffs, other.coeffs
        prod = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    prod[i + j] += ca * cb
        return CycNumber(self.level, prod)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycNumber.one(self.level)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        mod = list(_cyc_modulus(self.level))
        # r0 = modulus, r1 = self; Bezout coefficients tracked against self.
        r0, r1 = mod, list(self.coeffs)
        s0, s1 = [_ZERO], [_ONE]
        while any(r1):
            quo, rem = _poly_divmod(r0, r1)
            s_new = _poly_sub(s0, _poly_mul(quo, s1))
            r0, r1 = r1, rem
            s0, s1 = s1, s_new
        # r0 is now a nonzero constant times gcd = constant (modulus irreducible)
        d = len(r0) - 1
        while d > 0 and not r0[d]:
            d -= 1
        if d != 0:
            raise ArithmeticError("modulus was not irreducible; cannot invert")
        c = r0[0]
        return CycNumber(self.level, [x / c for x in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return CycNumber(self.level, [a / c for a in self.coeffs])
        other = self.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.coerce(other) * self.inverse()

    # -- helpers --------------------------------------------------------

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __str__(self):
        return format_qpoly({e: c for e, c in enumerate(self.coeffs) if c})

    def __repr__(self):
        return f"CycNumber(level={self.level}, {self})"


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] += ca * cb
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = a + [_ZERO] * (n - len(a))
    b = b + [_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def specialize(a, ell):
    """The image of a Laurent polynomial under q -> primitive level-ell root."""
    check_level(ell)
    a = QLaurent.coerce(a)
    coeffs = [_ZERO] * ell
    for e, c in a.terms.items():
        coeffs[e % ell] += c
    return CycNumber(ell, coeffs)
