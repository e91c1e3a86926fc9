"""Finite-dimensional fibers at central characters, and their certification.

The fiber of the rank-N q-difference algebra at a point of the l-center is
the quotient identifying each x_i^l and d_i^l with a scalar.  It has a
monomial basis with all exponents < l (dimension l^(2N)); multiplication is
engine normal form followed by exponent reduction.  A fiber is certified as
a matrix algebra by two exact linear-algebra facts: one-dimensional center
and nondegenerate regular trace form (a semisimple central algebra of
square dimension over an algebraically closed field is a full matrix
algebra).

The double over GL_2 gets the same treatment at level 3; its two non-scalar
generator powers x11^l, p11^l reduce through the central correction
elements instead of plain scalars.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .coefficients import CycNumber
from .engine import NCElement
from .linalg import nullspace, rank
from .presentations import dq_cn, dq_gl2_plus


class ResourceBound(RuntimeError):
    """Raised when a request exceeds the sizes this artifact computes."""


class CentralCharacter:
    """A point of the l-center of the rank-N q-difference algebra.

    Values are stored in the cyclotomic field; rational input is fine.
    """

    def __init__(self, ell, nu, nu_check):
        if len(nu) != len(nu_check):
            raise ValueError("need as many nu as nu-check values")
        self.ell = ell
        self.N = len(nu)
        self.nu = [_cyc(ell, v) for v in nu]
        self.nu_check = [_cyc(ell, v) for v in nu_check]

    def partial_sums(self):
        """The values 1 + sum_{j<=i} nu_j nu-check_j for i = 1..N."""
        out = []
        acc = CycNumber.one(self.ell)
        for v, vc in zip(self.nu, self.nu_check):
            acc = acc + v * vc
            out.append(acc)
        return out

    def vanishing_pattern(self):
        return tuple(not s for s in self.partial_sums())

    def in_localized_locus(self):
        return not any(self.vanishing_pattern())

    def __repr__(self):
        pairs = ", ".join(f"({v}, {vc})" for v, vc in zip(self.nu, self.nu_check))
        return f"CentralCharacter(l={self.ell}, [{pairs}])"


def _cyc(ell, value):
    if isinstance(value, CycNumber):
        if value.level != ell:
            raise ValueError("cyclotomic level mismatch")
        return value
    return CycNumber.const(ell, value)


class FiberAlgebra:
    """The l^(2N)-dimensional quotient at a central character."""

    def __init__(self, character):
        self.character = character
        self.ell = character.ell
        self.N = character.N
        self.pres = dq_cn(self.N, mode=self.ell)
        self.dimension = self.ell ** (2 * self.N)
        self.basis = _exponent_box(2 * self.N, self.ell)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self._scalars = list(character.nu) + list(character.nu_check)
        self._pair_cache = {}

    # -- reduction -------------------------------------------------------

    def reduce_terms(self, terms):
        """Engine terms -> fiber element (exponents mod l, scalars extracted)."""
        out = {}
        for m, c in terms.items():
            scalar = c
            reduced = []
            for pos, e in enumerate(m):
                if e >= self.ell:
                    k, e = divmod(e, self.ell)
                    scalar = scalar * self._scalars[pos] ** k
                reduced.append(e)
            if not scalar:
                continue
            key = tuple(reduced)
            s = out.get(key)
            s = scalar if s is None else s + scalar
            if s:
                out[key] = s
            else:
                del out[key]
        return out

    def reduce(self, element):
        return self.reduce_terms(element.terms)

    # -- arithmetic ------------------------------------------------------

    def mono_product(self, m1, m2):
        cached = self._pair_cache.get((m1, m2))
        if cached is None:
            cached = self.reduce_terms(self.pres._mono_product(m1, m2))
            self._pair_cache[(m1, m2)] = cached
        return cached

    def mul(self, f1, f2):
        out = {}
        for m1, c1 in f1.items():
            for m2, c2 in f2.items():
                c = c1 * c2
                if not c:
                    continue
                for m, cp in self.mono_product(m1, m2).items():
                    s = out.get(m)
                    s = c * cp if s is None else s + c * cp
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return out

    def one(self):
        return {(0,) * (2 * self.N): CycNumber.one(self.ell)}

    def from_element(self, element):
        return self.reduce(element)

    def scalar_of(self, fib):
        """The scalar value of a multiple of the unit, or None."""
        unit = (0,) * (2 * self.N)
        if not fib:
            return CycNumber.zero(self.ell)
        if set(fib) == {unit}:
            return fib[unit]
        return None

    # -- gradings ----------------------------------------------------------

    def grade(self, mono):
        return tuple(
            sum(w[i] * e for i, e in enumerate(mono)) % self.ell
            for w in self.pres.gradings
        )

    def blocks(self):
        blocks = {}
        for m in self.basis:
            blocks.setdefault(self.grade(m), []).append(m)
        return blocks


def _exponent_box(width, ell):
    out = [()]
    for _ in range(width):
        out = [m + (e,) for m in out for e in range(ell)]
    return out


def fiber(N, ell, character):
    """Build the fiber algebra at a central character (pairs or object)."""
    if not isinstance(character, CentralCharacter):
        nu, nu_check = character
        character = CentralCharacter(ell, nu, nu_check)
    if character.N != N:
        raise ValueError("character rank does not match N")
    return FiberAlgebra(character)


def center_dimension(fib):
    """Dimension of the commutant of the generators, block by graded block."""
    ell = fib.ell
    one = CycNumber.one(ell)
    gens = [fib.pres.index[g] for g in fib.pres.generators]
    gen_monos = []
    for gi in gens:
        e = [0] * (2 * fib.N)
        e[gi] = 1
        gen_monos.append(tuple(e))
    total = 0
    for key, block in sorted(fib.blocks().items()):
        col = {m: i for i, m in enumerate(block)}
        rows = {}
        for gm in gen_monos:
            for m in block:
                left = fib.mono_product(m, gm)
                right = fib.mono_product(gm, m)
                comm = dict(left)
                for t, c in right.items():
                    s = comm.get(t)
                    s = -c if s is None else s - c
                    if s:
                        comm[t] = s
                    else:
                        comm.pop(t, None)
                for t, c in comm.items():
                    rows.setdefault((gm, t), {})[col[m]] = c
        total += len(nullspace(list(rows.values()), len(block), one))
    return total


def trace_form_rank(fib):
    """Rank of B(u, v) = trace(L_u L_v) on the regular representation.

    The trace of left multiplication vanishes outside graded degree zero,
    so B pairs each graded block with its opposite and the rank splits
    blockwise.
    """
    ell = fib.ell
    one = CycNumber.one(ell)
    blocks = fib.blocks()
    zero_key = tuple(0 for _ in fib.pres.gradings)

    # trace of left multiplication by each degree-zero basis monomial
    traces = {}
    for w in blocks.get(zero_key, []):
        t = CycNumber.zero(ell)
        for m in fib.basis:
            t = t + fib.mono_product(w, m).get(m, CycNumber.zero(ell))
        traces[w] = t

    total = 0
    seen = set()
    for key, block in sorted(blocks.items()):
        opp = tuple((-k) % ell for k in key)
        if (key, opp) in seen or (opp, key) in seen:
            continue
        seen.add((key, opp))
        other = blocks.get(opp, [])
        rows = []
        for u in block:
            row = {}
            for j, v in enumerate(other):
                prod = fib.mono_product(u, v)
                val = CycNumber.zero(ell)
                for w, c in prod.items():
                    tw = traces.get(w)
                    if tw:
                        val = val + c * tw
                if val:
                    row[j] = val
            rows.append(row)
        r = rank(rows, one)
        total += r if key == opp else 2 * r
    return total


class AzumayaVerdict:
    def __init__(self, character, dimension, center_dim, trace_rank):
        self.character = character
        self.dimension = dimension
        self.center_dim = center_dim
        self.trace_rank = trace_rank

    @property
    def is_azumaya(self):
        return self.center_dim == 1 and self.trace_rank == self.dimension

    def __str__(self):
        flag = "matrix algebra" if self.is_azumaya else "NOT a matrix algebra"
        return (
            f"{self.character}: dim {self.dimension}, center {self.center_dim}, "
            f"trace rank {self.trace_rank} -> {flag}"
        )


def is_azumaya_point(fib):
    return AzumayaVerdict(
        fib.character, fib.dimension, center_dimension(fib), trace_form_rank(fib)
    )


def sample_character(N, ell, rng, pattern=None):
    """Draw small-integer character values, optionally hitting a target
    vanishing pattern of the partial sums."""
    for _ in range(10_000):
        nu = [Fraction(rng.randint(-3, 3)) for _ in range(N)]
        nu_check = [Fraction(rng.randint(-3, 3)) for _ in range(N)]
        ch = CentralCharacter(ell, nu, nu_check)
        got = ch.vanishing_pattern()
        if pattern is None or got == tuple(pattern):
            return ch
    raise RuntimeError(f"could not sample a character with pattern {pattern}")


def locus_sweep(N, ell, samples, seed, include_boundary=3):
    """Certify seeded random characters inside the localized locus, plus a
    few boundary characters outside it.  Returns report rows."""
    rng = random.Random(seed)
    rows = []
    for _ in range(samples):
        ch = sample_character(N, ell, rng, pattern=(False,) * N)
        verdict = is_azumaya_point(fiber(N, ell, ch))
        rows.append(_sweep_row(ch, verdict, expected=True))
    for i in range(include_boundary):
        pattern = [False] * N
        pattern[i % N] = True
        ch = sample_character(N, ell, rng, pattern=pattern)
        verdict = is_azumaya_point(fiber(N, ell, ch))
        rows.append(_sweep_row(ch, verdict, expected=False))
    return rows


def _sweep_row(ch, verdict, expected):
    return {
        "character": [[str(v) for v in ch.nu], [str(v) for v in ch.nu_check]],
        "pattern": list(ch.vanishing_pattern()),
        "center_dim": verdict.center_dim,
        "trace_rank": verdict.trace_rank,
        "is_azumaya": verdict.is_azumaya,
        "expected_azumaya": expected,
        "ok": verdict.is_azumaya == expected,
    }


# ---------------------------------------------------------------------------
# the double over GL_2 at level 3


class GL2Character:
    """A point of the l-center of the double: values of the eight generators
    of the central coordinate subalgebra."""

    KEYS = ("v", "x12", "x21", "x22", "w", "p12", "p21", "p22")

    def __init__(self, ell, values):
        self.ell = ell
        self.values = {k: _cyc(ell, values[k]) for k in self.KEYS}
        if not self.det_x() or not self.det_d():
            raise ValueError("character violates the invertible-determinant constraint")

    def det_x(self):
        v = self.values
        return v["v"] * v["x22"] - v["x12"] * v["x21"]

    def det_d(self):
        v = self.values
        return v["w"] * v["p22"] - v["p12"] * v["p21"]

    def matrices(self):
        """The two classical matrices encoded by the character."""
        v = self.values
        X = [[v["v"], v["x12"]], [v["x21"], v["x22"]]]
        D = [[v["w"], v["p12"]], [v["p21"], v["p22"]]]
        return X, D


class GL2Fiber:
    """The l^8-dimensional fiber of the double at a central character."""

    def __init__(self, character):
        self.character = character
        self.ell = character.ell
        self.pres = dq_gl2_plus(mode=self.ell)
        self.dimension = self.ell**8
        self._pair_cache = {}
        from .center import compute_v_w

        v_elem, w_elem = compute_v_w(self.ell, check_central=False)
        ell = self.ell
        vals = character.values
        # direct scalar reductions for the six central generator powers
        self._scalar_positions = {
            self.pres.index["x12"]: vals["x12"],
            self.pres.index["x21"]: vals["x21"],
            self.pres.index["x22"]: vals["x22"],
            self.pres.index["p12"]: vals["p12"],
            self.pres.index["p21"]: vals["p21"],
            self.pres.index["p22"]: vals["p22"],
        }
        # x11^l and p11^l reduce through the correction elements:
        # x11^l = value(v) - (v - x11^l), likewise for w
        x11_pow = [0] * 8
        x11_pow[self.pres.index["x11"]] = ell
        p11_pow = [0] * 8
        p11_pow[self.pres.index["p11"]] = ell
        self._x11_rest = v_elem - self.pres.monomial(tuple(x11_pow))
        self._p11_rest = w_elem - self.pres.monomial(tuple(p11_pow))
        self._x11_val = vals["v"]
        self._p11_val = vals["w"]

    def one(self):
        return {(0,) * 8: CycNumber.one(self.ell)}

    def reduce_terms(self, terms):
        ell = self.ell
        ix11 = self.pres.index["x11"]
        ip11 = self.pres.index["p11"]
        out = {}
        work = list(terms.items())
        while work:
            m, c = work.pop()
            if not c:
                continue
            # scalar generator powers reduce in place
            scalar = c
            mm = list(m)
            for pos, val in self._scalar_positions.items():
                if mm[pos] >= ell:
                    k, mm[pos] = divmod(mm[pos], ell)
                    scalar = scalar * val**k
            if not scalar:
                continue
            if mm[ix11] >= ell:
                # x11^l = value(v) - rest, applied at the left end of the word
                mm[ix11] -= ell
                base = tuple(mm)
                work.append((base, scalar * self._x11_val))
                correction = self._x11_rest * self.pres.monomial(base)
                for t, ct in correction.terms.items():
                    work.append((t, -(scalar * ct)))
                continue
            if mm[ip11] >= ell:
                # p11^l sits between the x-part A and the remaining d-part B
                mm[ip11] -= ell
                A = tuple(mm[:4]) + (0, 0, 0, 0)
                B = (0, 0, 0, 0) + tuple(mm[4:])
                work.append((tuple(mm), scalar * self._p11_val))
                correction = self.pres.monomial(A) * self._p11_rest * self.pres.monomial(B)
                for t, ct in correction.terms.items():
                    work.append((t, -(scalar * ct)))
                continue
            key = tuple(mm)
            s = out.get(key)
            s = scalar if s is None else s + scalar
            if s:
                out[key] = s
            else:
                del out[key]
        return out

    def reduce(self, element):
        return self.reduce_terms(element.terms)

    def mono_product(self, m1, m2):
        cached = self._pair_cache.get((m1, m2))
        if cached is None:
            cached = self.reduce_terms(self.pres._mono_product(m1, m2))
            self._pair_cache[(m1, m2)] = cached
        return cached

    def mul(self, f1, f2):
        out = {}
        for m1, c1 in f1.items():
            for m2, c2 in f2.items():
                c = c1 * c2
                if not c:
                    continue
                for m, cp in self.mono_product(m1, m2).items():
                    s = out.get(m)
                    s = c * cp if s is None else s + c * cp
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return out

    def grade(self, mono):
        return tuple(
            sum(w[i] * e for i, e in enumerate(mono)) % self.ell
            for w in self.pres.gradings
        )


def gl2_fiber(ell, character):
    if ell != 3:
        raise ResourceBound("the double's fibers are only computed at level 3")
    if not isinstance(character, GL2Character):
        character = GL2Character(ell, character)
    return GL2Fiber(character)


def gl2_fiber_center_dim(ell, character, progress=None):
    """Center dimension of the level-3 fiber of the double (dimension 3^8).

    Solved blockwise under the three mod-l gradings; each block contributes
    the kernel of commutation against all eight generators.
    """
    fib = gl2_fiber(ell, character)
    one = CycNumber.one(ell)
    gen_monos = []
    for g in fib.pres.generators:
        e = [0] * 8
        e[fib.pres.index[g]] = 1
        gen_monos.append(tuple(e))

    blocks = {}
    for m in _exponent_box(8, ell):
        blocks.setdefault(fib.grade(m), []).append(m)

    total = 0
    for bi, key in enumerate(sorted(blocks)):
        block = blocks[key]
        col = {m: i for i, m in enumerate(block)}
        rows = {}
        for gm in gen_monos:
            for m in block:
                left = fib.mono_product(m, gm)
                right = fib.mono_product(gm, m)
                comm = dict(left)
                for t, c in right.items():
                    s = comm.get(t)
                    s = -c if s is None else s - c
                    if s:
                        comm[t] = s
                    else:
                        comm.pop(t, None)
                for t, c in comm.items():
                    rows.setdefault((gm, t), {})[col[m]] = c
        total += len(nullspace(list(rows.values()), len(block), one))
        if progress:
            progress(bi + 1, len(blocks))
    return total
