"""PBW normal-form rewriting for presented algebras.

An :class:`AlgebraPresentation` fixes an ordered generator list and one
rewrite rule per out-of-order generator pair ``(g_i, g_j)`` with ``i > j``:
the normal form of the product ``g_i * g_j``.  Elements are stored as finite
maps from PBW monomials (exponent tuples in generator order) to coefficients,
so every stored element is canonical and equality is structural.

Rewriting works one boundary letter at a time and caches monomial pair
products, which is what keeps repeated powers and large verification
catalogs affordable.  Termination is not enforced structurally (a mutated
rule table may in principle cycle); a configurable step budget turns a
runaway reduction into an error instead of a hang.

Localization is handled by :class:`OreFraction`: denominators are powers of
registered elements that commute with every PBW monomial up to an explicit
power of q, so fractions keep a canonical (numerator, denominator word)
form.
"""

from __future__ import annotations

import sys
from fractions import Fraction

from .coefficients import CycNumber, QLaurent, specialize

# boundary rewriting recurses one letter at a time; deep words need headroom
if sys.getrecursionlimit() < 100_000:
    sys.setrecursionlimit(100_000)


class ModeMismatch(TypeError):
    """Raised when elements of different coefficient modes are combined."""


class UnregisteredDenominator(KeyError):
    """Raised when a fraction uses a denominator that was never registered."""


class RewriteBudgetExceeded(RuntimeError):
    """Raised when a single monomial product exceeds the rewrite step budget."""


class GenericRing:
    """Coefficient helpers for generic q (Laurent polynomials)."""

    kind = "generic"
    ell = None

    def one(self):
        return QLaurent.one()

    def zero(self):
        return QLaurent.zero()

    def q_power(self, k):
        return QLaurent.q_power(k)

    def scalar(self, value):
        return QLaurent.coerce(value)

    def from_laurent(self, a):
        return a

    def key(self):
        return "generic"


class RootRing:
    """Coefficient helpers at a primitive root of unity of odd level."""

    kind = "root"

    def __init__(self, ell):
        self.ell = ell

    def one(self):
        return CycNumber.one(self.ell)

    def zero(self):
        return CycNumber.zero(self.ell)

    def q_power(self, k):
        return CycNumber.q_power(self.ell, k)

    def scalar(self, value):
        if isinstance(value, CycNumber):
            if value.level != self.ell:
                raise ModeMismatch(f"cyclotomic level {value.level} != {self.ell}")
            return value
        if isinstance(value, QLaurent):
            return specialize(value, self.ell)
        return CycNumber.const(self.ell, value)

    def from_laurent(self, a):
        return specialize(a, self.ell)

    def key(self):
        return ("root", self.ell)


def make_ring(mode):
    if isinstance(mode, (GenericRing, RootRing)):
        return mode
    if mode == "generic":
        return GenericRing()
    if isinstance(mode, int):
        return RootRing(mode)
    raise ValueError(f"unknown coefficient mode {mode!r}")


class NCElement:
    """A normal-form noncommutative polynomial attached to a presentation."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    # -- coercion -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, NCElement):
            if other.alg is not self.alg:
                raise ModeMismatch(
                    f"elements of {self.alg.name} and {other.alg.name} cannot be combined"
                )
            return other
        return self.alg.scalar_element(other)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            s = c if s is None else s + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return NCElement(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        return NCElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, NCElement):
            c = self.alg.ring.scalar(other)
            if not c:
                return self.alg.zero()
            return NCElement(self.alg, {m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        return self.alg.multiply(self, other)

    def __rmul__(self, other):
        # scalars commute with everything, so this only handles non-elements
        c = self.alg.ring.scalar(other)
        if not c:
            return self.alg.zero()
        return NCElement(self.alg, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers need an OreFraction")
        result = self.alg.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, NCElement):
            return self.alg is other.alg and self.terms == other.terms
        if not self.terms and other == 0:
            return True
        try:
            return self.terms == self._coerce(other).terms
        except (TypeError, ModeMismatch):
            return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash((id(self.alg), frozenset(self.terms.items())))

    # -- structure ------------------------------------------------------

    def degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.alg.ring.zero())

    def commutator(self, other):
        other = self._coerce(other)
        return self * other - other * self

    def sorted_terms(self):
        """Terms ordered for printing: degree then exponent tuple, descending."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def rename(self, target, gen_map):
        """Transport along a generator bijection into ``target``.

        Only valid when the map sends the defining rules of ``self.alg`` to
        rules of ``target`` (the caller is asserting a hom of presentations).
        """
        pos = {self.alg.index[src]: target.index[dst] for src, dst in gen_map.items()}
        out = {}
        for m, c in self.terms.items():
            new = [0] * target.ngens
            for i, e in enumerate(m):
                if e:
                    new[pos[i]] = e
            out[tuple(new)] = target.ring.scalar(c)
        return NCElement(target, out)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            pieces.append(_format_term(self.alg, m, c))
        out = pieces[0]
        for p in pieces[1:]:
            if p.startswith("-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self):
        return f"<{self.alg.name}: {self}>"


def _format_term(alg, mono, coeff):
    mono_str = "*".join(
        alg.generators[i] if e == 1 else f"{alg.generators[i]}^{e}"
        for i, e in enumerate(mono)
        if e
    )
    c_str = str(coeff)
    if not mono_str:
        return c_str if len(_coeff_parts(coeff)) > 1 else c_str
    if c_str == "1":
        return mono_str
    if c_str == "-1":
        return f"-{mono_str}"
    if len(_coeff_parts(coeff)) > 1:
        return f"({c_str})*{mono_str}"
    return f"{c_str}*{mono_str}"


def _coeff_parts(coeff):
    if isinstance(coeff, QLaurent):
        return coeff.terms
    if isinstance(coeff, CycNumber):
        return [c for c in coeff.coeffs if c]
    return [coeff]


class ScalarCommuter:
    """A registered element s with s * m = q^e(m) * m * s for every monomial m."""

    __slots__ = ("name", "element", "exponent")

    def __init__(self, name, element, exponent):
        self.name = name
        self.element = element
        self.exponent = exponent


class AlgebraPresentation:
    """An ordered generator list plus one rewrite rule per out-of-order pair."""

    def __init__(self, name, generators, mode="generic", max_steps=2_000_000):
        self.name = name
        self.generators = tuple(generators)
        self.ngens = len(self.generators)
        self.index = {g: i for i, g in enumerate(self.generators)}
        if len(self.index) != self.ngens:
            raise ValueError("duplicate generator names")
        self.ring = make_ring(mode)
        self.rules = {}
        self.scalar_commuters = {}
        self._commuter_order = []
        self._commuter_pair_exp = {}
        self.gradings = []
        self.named = {}
        self.max_steps = max_steps
        self.steps = 0
        self._cache = {}
        self._frozen = False

    # -- construction -----------------------------------------------------

    def install_rule(self, left_pair, rhs):
        """Declare the normal form of g_i * g_j for an out-of-order pair."""
        if self._frozen:
            raise RuntimeError("presentation is frozen")
        gi, gj = left_pair
        i, j = self.index[gi], self.index[gj]
        if i <= j:
            raise ValueError(f"({gi}, {gj}) is not an out-of-order pair")
        if (i, j) in self.rules:
            raise ValueError(f"duplicate rule for ({gi}, {gj})")
        if isinstance(rhs, NCElement):
            rhs = rhs.terms
        self.rules[(i, j)] = {m: self.ring.scalar(c) for m, c in rhs.items() if c}

    def freeze(self):
        """Validate completeness and lock the rule table."""
        for i in range(self.ngens):
            for j in range(i):
                if (i, j) not in self.rules:
                    raise ValueError(
                        f"missing rule for ({self.generators[i]}, {self.generators[j]})"
                    )
        self._frozen = True
        return self

    def add_grading(self, weights):
        """Register a generator weight vector under which all rules are homogeneous."""
        weights = tuple(weights)
        if len(weights) != self.ngens:
            raise ValueError("one weight per generator required")
        for (i, j), rhs in self.rules.items():
            w = weights[i] + weights[j]
            for m in rhs:
                if sum(weights[k] * e for k, e in enumerate(m)) != w:
                    raise ValueError(
                        f"rule ({self.generators[i]},{self.generators[j]}) is not "
                        f"homogeneous for weights {weights}"
                    )
        self.gradings.append(weights)

    # -- element constructors ----------------------------------------------

    def zero(self):
        return NCElement(self, {})

    def one(self):
        return NCElement(self, {(0,) * self.ngens: self.ring.one()})

    def scalar_element(self, value):
        c = self.ring.scalar(value)
        if not c:
            return self.zero()
        return NCElement(self, {(0,) * self.ngens: c})

    def q(self, k=1):
        return self.scalar_element(self.ring.q_power(k))

    def gen(self, name, power=1):
        e = [0] * self.ngens
        e[self.index[name]] = power
        return NCElement(self, {tuple(e): self.ring.one()})

    def monomial(self, exponents, coeff=None):
        exponents = tuple(exponents)
        if len(exponents) != self.ngens or any(e < 0 for e in exponents):
            raise ValueError(f"bad exponent tuple {exponents}")
        c = self.ring.one() if coeff is None else self.ring.scalar(coeff)
        return NCElement(self, {exponents: c} if c else {})

    def element(self, terms):
        out = {}
        for m, c in terms.items():
            c = self.ring.scalar(c)
            if c:
                out[tuple(m)] = c
        return NCElement(self, out)

    # -- rewriting ---------------------------------------------------------

    def normal_form(self, word):
        """Normal form of a word given as a sequence of (generator, power)."""
        result = self.one()
        for g, p in word:
            if p < 0:
                raise ValueError("negative powers are only available through fractions")
            if p:
                result = result * self.gen(g, p)
        return result

    def multiply(self, a, b):
        out = {}
        zero = None
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                c = c1 * c2
                if not c:
                    continue
                for m, cp in self._mono_product(m1, m2).items():
                    s = out.get(m)
                    s = c * cp if s is None else s + c * cp
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return NCElement(self, out)

    def commutator(self, a, b):
        return a.commutator(b)

    def _mono_product(self, m1, m2):
        cached = self._cache.get((m1, m2))
        if cached is not None:
            return cached
        result = self._mono_product_uncached(m1, m2)
        self._cache[(m1, m2)] = result
        return result

    def _mono_product_uncached(self, m1, m2):
        i = _last_nonzero(m1)
        if i < 0:
            return {m2: self.ring.one()}
        j = _first_nonzero(m2)
        if j < 0:
            return {m1: self.ring.one()}
        if i <= j:
            return {tuple(a + b for a, b in zip(m1, m2)): self.ring.one()}
        rule = self.rules.get((i, j))
        if rule is None:
            raise KeyError(
                f"no rule for pair ({self.generators[i]}, {self.generators[j]})"
            )
        self.steps += 1
        if self.steps > self.max_steps:
            raise RewriteBudgetExceeded(
                f"{self.name}: more than {self.max_steps} rewrite steps"
            )
        left = list(m1)
        left[i] -= 1
        left = tuple(left)
        right = list(m2)
        right[j] -= 1
        right = tuple(right)
        right_trivial = _first_nonzero(right) < 0
        out = {}
        for t, c in rule.items():
            for mA, cA in self._mono_product(left, t).items():
                cc = c * cA
                if not cc:
                    continue
                if right_trivial:
                    inner = ((mA, self.ring.one()),)
                else:
                    inner = self._mono_product(mA, right).items()
                for mB, cB in inner:
                    s = out.get(mB)
                    s = cc * cB if s is None else s + cc * cB
                    if s:
                        out[mB] = s
                    else:
                        del out[mB]
        return out

    # -- confluence ----------------------------------------------------------

    def check_confluence(self):
        """Resolve every overlap g_k g_j g_i (k > j > i) both ways and compare."""
        failures = []
        checked = 0
        for k in range(self.ngens):
            for j in range(k):
                for i in range(j):
                    checked += 1
                    # reduce (g_k g_j) g_i first
                    first = self.zero()
                    for t, c in self.rules[(k, j)].items():
                        first = first + c * self.monomial(t) * self.gen(self.generators[i])
                    # reduce g_k (g_j g_i) first
                    second = self.zero()
                    for t, c in self.rules[(j, i)].items():
                        second = second + c * (self.gen(self.generators[k]) * self.monomial(t))
                    diff = first - second
                    if diff:
                        failures.append(
                            ((self.generators[k], self.generators[j], self.generators[i]), diff)
                        )
        return ConfluenceReport(self.name, checked, failures)

    # -- scalar commuters / localization ------------------------------------

    def register_scalar_commuter(self, name, element, exponent):
        """Register s with s*m = q^exponent(m)*m*s, verified on small monomials."""
        if name in self.scalar_commuters:
            raise ValueError(f"denominator {name} already registered")
        element = self._as_element(element)
        for m in self._small_monomials(2):
            mono = self.monomial(m)
            lhs = element * mono
            rhs = self.q(exponent(m)) * mono * element
            if lhs != rhs:
                raise ValueError(
                    f"{name} does not scalar-commute with {mono}: {lhs} vs {rhs}"
                )
        # pairwise reordering constants with previously registered denominators
        for prev in self._commuter_order:
            p = self.scalar_commuters[prev]
            exps = {exponent(m) for m in p.element.terms}
            if len(exps) != 1:
                raise ValueError(f"{name} has no constant exponent on {prev}")
            self._commuter_pair_exp[(name, prev)] = exps.pop()
            exps = {p.exponent(m) for m in element.terms}
            if len(exps) != 1:
                raise ValueError(f"{prev} has no constant exponent on {name}")
            self._commuter_pair_exp[(prev, name)] = exps.pop()
        self.scalar_commuters[name] = ScalarCommuter(name, element, exponent)
        self._commuter_order.append(name)

    def _small_monomials(self, max_degree):
        def rec(pos, remaining):
            if pos == self.ngens:
                yield ()
                return
            for e in range(remaining + 1):
                for rest in rec(pos + 1, remaining - e):
                    yield (e,) + rest
        for m in rec(0, max_degree):
            yield m

    def _as_element(self, value):
        if isinstance(value, NCElement):
            if value.alg is not self:
                raise ModeMismatch("element belongs to a different presentation")
            return value
        return self.scalar_element(value)

    # -- fractions -------------------------------------------------------

    def fraction(self, numerator, denominators=None):
        """Build numerator * (denominator word)^{-1}."""
        numerator = self._as_element(numerator)
        den = [0] * len(self._commuter_order)
        if denominators:
            for name, p in denominators.items():
                if name not in self.scalar_commuters:
                    raise UnregisteredDenominator(name)
                if p < 0:
                    raise ValueError("denominator powers must be non-negative")
                den[self._commuter_order.index(name)] += p
        return OreFraction(self, numerator, tuple(den))

    def _den_twist(self, element, den, sign=-1):
        """Move the denominator word across an element: W^{-1} m = q^{-e(m)} m W^{-1}."""
        if not any(den):
            return element
        commuters = [self.scalar_commuters[n] for n in self._commuter_order]
        out = {}
        for m, c in element.terms.items():
            e = sum(p * s.exponent(m) for p, s in zip(den, commuters) if p)
            out[m] = c * self.ring.q_power(sign * e)
        return NCElement(self, out)

    def _den_gamma(self, a, b):
        """q-exponent with W(a) * W(b) = q^gamma * W(a+b)."""
        names = self._commuter_order
        total = 0
        for jj in range(len(names)):
            for ii in range(jj):
                if a[jj] and b[ii]:
                    total += self._commuter_pair_exp[(names[jj], names[ii])] * a[jj] * b[ii]
        return total

    def _den_element(self, den):
        """The denominator word W(den) as an element."""
        out = self.one()
        for name, p in zip(self._commuter_order, den):
            if p:
                out = out * self.scalar_commuters[name].element ** p
        return out


def _last_nonzero(m):
    for i in range(len(m) - 1, -1, -1):
        if m[i]:
            return i
    return -1


def _first_nonzero(m):
    for i, e in enumerate(m):
        if e:
            return i
    return -1


class ConfluenceReport:
    """Outcome of the overlap check; failures are data, not exceptions."""

    def __init__(self, algebra, checked, failures):
        self.algebra = algebra
        self.checked = checked
        self.failures = failures

    @property
    def ok(self):
        return not self.failures

    def __str__(self):
        if self.ok:
            return f"{self.algebra}: all {self.checked} overlaps resolve"
        lines = [f"{self.algebra}: {len(self.failures)} of {self.checked} overlaps fail"]
        for (k, j, i), diff in self.failures:
            lines.append(f"  {k}*{j}*{i}: difference {diff}")
        return "\n".join(lines)


class OreFraction:
    """numerator * W^{-1} with W a word in registered scalar-commuting elements."""

    __slots__ = ("alg", "num", "den")

    def __init__(self, alg, num, den):
        self.alg = alg
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, OreFraction):
            if other.alg is not self.alg:
                raise ModeMismatch("fractions over different presentations")
            return other
        if isinstance(other, NCElement):
            return self.alg.fraction(other)
        return self.alg.fraction(self.alg.scalar_element(other))

    def __mul__(self, other):
        other = self._coerce(other)
        alg = self.alg
        n = self.num * alg._den_twist(other.num, self.den)
        gamma = alg._den_gamma(other.den, self.den)
        den = tuple(a + b for a, b in zip(self.den, other.den))
        return OreFraction(alg, alg.q(-gamma) * n, den)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative fraction powers are not supported")
        result = self.alg.fraction(self.alg.one())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __add__(self, other):
        other = self._coerce(other)
        alg = self.alg
        common = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return OreFraction(alg, self._lift(common) + other._lift(common), common)

    __radd__ = __add__

    def __neg__(self):
        return OreFraction(self.alg, -self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def _lift(self, common):
        """Numerator after extending the denominator word to ``common``."""
        alg = self.alg
        extra = tuple(c - d for c, d in zip(common, self.den))
        if not any(extra):
            return self.num
        gamma = alg._den_gamma(self.den, extra)
        return alg.q(-gamma) * self.num * alg._den_element(extra)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ModeMismatch):
            return NotImplemented
        return not (self - other)

    def __bool__(self):
        return bool(self.num)

    def normalize(self):
        """Cancel denominator generators that divide the numerator exactly.

        Only single-generator denominator powers are cancelled, and only when
        that generator is at least every generator occurring in the numerator
        (so division is plain exponent subtraction).
        """
        alg = self.alg
        num, den = self.num, list(self.den)
        for pos, name in enumerate(alg._commuter_order):
            if not den[pos]:
                continue
            s = alg.scalar_commuters[name]
            if len(s.element.terms) != 1:
                continue
            (mono, coeff) = next(iter(s.element.terms.items()))
            gi = _last_nonzero(mono)
            if gi < 0 or _first_nonzero(mono) != gi or mono[gi] != 1:
                continue
            if coeff != alg.ring.one():
                continue
            while den[pos] and num.terms and all(
                m[gi] >= 1 and _last_nonzero(m) <= gi for m in num.terms
            ):
                stripped = {}
                for m, c in num.terms.items():
                    mm = list(m)
                    mm[gi] -= 1
                    stripped[tuple(mm)] = c
                num = NCElement(alg, stripped)
                den[pos] -= 1
        return OreFraction(alg, num, tuple(den))

    def __str__(self):
        if not any(self.den):
            return str(self.num)
        parts = []
        for name, p in zip(self.alg._commuter_order, self.den):
            if p:
                parts.append(f"{name}^-{p}")
        return f"({self.num}) * " + "*".join(parts)

    def __repr__(self):
        return f"<fraction over {self.alg.name}: {self}>"


def right_divide_by_gen_power(element, gen_name, k):
    """Exact right division by g^k, valid when g bounds every monomial.

    Every monomial must end in the generator ``g`` with exponent >= k (no
    later generator occurs), which makes division plain exponent
    subtraction.  Raises NotDivisible otherwise.
    """
    from .coefficients import NotDivisible

    alg = element.alg
    gi = alg.index[gen_name]
    out = {}
    for m, c in element.terms.items():
        if m[gi] < k or _last_nonzero(m) > gi:
            raise NotDivisible(
                f"monomial {alg.monomial(m)} is not right-divisible by {gen_name}^{k}"
            )
        mm = list(m)
        mm[gi] -= k
        out[tuple(mm)] = c
    return NCElement(alg, out)


def apply_hom(images, elem, target):
    """Substitute generator images (fractions over ``target``) into ``elem``."""
    result = target.fraction(target.zero())
    for m, c in elem.terms.items():
        term = target.fraction(target.scalar_element(c))
        for i, e in enumerate(m):
            if e:
                term = term * images[elem.alg.generators[i]] ** e
        result = result + term
    return result


def verify_hom(source, images, target):
    """Check every defining rule of ``source`` maps to zero; returns failures."""
    failures = []
    for (i, j), rhs in sorted(source.rules.items()):
        gi, gj = source.generators[i], source.generators[j]
        lhs = images[gi] * images[gj]
        rhs_img = apply_hom(images, NCElement(source, dict(rhs)), target)
        residual = lhs - rhs_img
        if residual:
            failures.append(((gi, gj), residual))
    return failures
