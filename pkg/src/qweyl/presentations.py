"""The algebra catalog: q-difference operators on C^N, the reflection
equation algebra for GL_2, and its Heisenberg double.

The two GL_2 algebras are not written down rule by rule: their rewrite
systems are derived from the defining 4x4 matrix equations by expanding both
sides over the free algebra and row-reducing the entry equations to one rule
per out-of-order generator pair.  The q-difference algebras are installed
directly from their four relation families.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .coefficients import QLaurent
from .engine import AlgebraPresentation, NCElement
from .linalg import LaurentFrac, matrix_inverse, rref


class SingularR(ArithmeticError):
    """Raised when an R-matrix inverse is requested but the matrix is singular."""


class RelationExtractionError(ValueError):
    """Raised when matrix relations do not reduce to an orientable rule set."""


# ---------------------------------------------------------------------------
# free-algebra scratchpad used only while generating relations


def _fe_scalar(c):
    c = QLaurent.coerce(c)
    return {(): c} if c else {}


def _fe_gen(name):
    return {(name,): QLaurent.one()}


def _fe_add(a, b):
    out = dict(a)
    for w, c in b.items():
        s = out.get(w, QLaurent.zero()) + c
        if s:
            out[w] = s
        else:
            out.pop(w, None)
    return out


def _fe_sub(a, b):
    return _fe_add(a, {w: -c for w, c in b.items()})


def _fe_mul(a, b):
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            s = out.get(w, QLaurent.zero()) + c1 * c2
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def _mat_mul(A, B):
    n = len(A)
    return [
        [
            _fe_add_many(_fe_mul(A[i][k], B[k][j]) for k in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]


def _fe_add_many(items):
    out = {}
    for it in items:
        out = _fe_add(out, it)
    return out


def _mat_word(tokens, matrices):
    prod = None
    for t in tokens:
        m = matrices[t]
        prod = m if prod is None else _mat_mul(prod, m)
    return prod


def r_matrix():
    """The standard 4x4 R-matrix on the tensor square of C^2."""
    q = QLaurent.q_power(1)
    qi = QLaurent.q_power(-1)
    z = QLaurent.zero()
    one = QLaurent.one()
    return [
        [q, z, z, z],
        [z, one, z, z],
        [z, q - qi, one, z],
        [z, z, z, q],
    ]


def r21_matrix():
    q = QLaurent.q_power(1)
    qi = QLaurent.q_power(-1)
    z = QLaurent.zero()
    one = QLaurent.one()
    return [
        [q, z, z, z],
        [z, one, q - qi, z],
        [z, z, one, z],
        [z, z, z, q],
    ]


def _scalar_matrix_inverse(mat):
    frac = [[LaurentFrac(e) for e in row] for row in mat]
    inv = matrix_inverse(frac, LaurentFrac(QLaurent.one()))
    if inv is None:
        raise SingularR("matrix over Laurent polynomials is not invertible")
    return [[e.as_laurent() for e in row] for row in inv]


def _lift_scalar_matrix(mat):
    return [[_fe_scalar(e) for e in row] for row in mat]


def _kron_first(sym):
    """M (x) Id for a 2x2 matrix of generator names."""
    out = [[{} for _ in range(4)] for _ in range(4)]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                out[2 * i + k][2 * j + k] = _fe_gen(sym[i][j])
    return out


def _kron_second(sym):
    """Id (x) M for a 2x2 matrix of generator names."""
    out = [[{} for _ in range(4)] for _ in range(4)]
    for i in range(2):
        for k in range(2):
            for l in range(2):
                out[2 * i + k][2 * i + l] = _fe_gen(sym[k][l])
    return out


def expand_matrix_relation(lhs_tokens, rhs_tokens, symbols):
    """Entrywise relations of a 4x4 matrix identity over the free algebra.

    ``symbols`` maps a name S to a 2x2 nested list of generator names;
    tokens may use "R", "R21", "R21inv", or "<S>1"/"<S>2" for the two
    embeddings of the matrix S into the tensor square.  Returns the 16
    entries of lhs - rhs.
    """
    matrices = {
        "R": _lift_scalar_matrix(r_matrix()),
        "R21": _lift_scalar_matrix(r21_matrix()),
        "R21inv": _lift_scalar_matrix(_scalar_matrix_inverse(r21_matrix())),
        "Rinv": _lift_scalar_matrix(_scalar_matrix_inverse(r_matrix())),
    }
    for name, sym in symbols.items():
        matrices[f"{name}1"] = _kron_first(sym)
        matrices[f"{name}2"] = _kron_second(sym)
    lhs = _mat_word(lhs_tokens, matrices)
    rhs = _mat_word(rhs_tokens, matrices)
    return [_fe_sub(lhs[i][j], rhs[i][j]) for i in range(4) for j in range(4)]


def relations_to_rules(relations, generator_order):
    """Reduce quadratic relations to one rewrite rule per out-of-order pair.

    The relations (free elements supported on length-2 words) are
    row-reduced over the Laurent fraction field with out-of-order words as
    preferred pivots.  Raises RelationExtractionError when the system is
    degenerate (a pivot lands on an ordered word) or incomplete for the
    requested generator pairs.
    """
    index = {g: i for i, g in enumerate(generator_order)}
    bad_words = []  # out-of-order, the candidates for rule left sides
    good_words = []
    seen = set()
    for rel in relations:
        for w in rel:
            if len(w) != 2:
                raise RelationExtractionError(f"non-quadratic word {w} in relations")
            if w in seen:
                continue
            seen.add(w)
            i, j = index[w[0]], index[w[1]]
            (bad_words if i > j else good_words).append(w)
    bad_words.sort(key=lambda w: (index[w[0]], index[w[1]]))
    good_words.sort(key=lambda w: (index[w[0]], index[w[1]]))
    col_of = {w: k for k, w in enumerate(bad_words + good_words)}
    word_of = {k: w for w, k in col_of.items()}
    nbad = len(bad_words)

    one = LaurentFrac(QLaurent.one())
    rows = []
    for rel in relations:
        if rel:
            rows.append({col_of[w]: LaurentFrac(c) for w, c in rel.items()})
    pivots, reduced = rref(rows, one)

    rules = {}
    for p, row in zip(pivots, reduced):
        if p >= nbad:
            raise RelationExtractionError(
                f"relations force a linear identity among ordered words: pivot {word_of[p]}"
            )
        lhs_word = word_of[p]
        rhs = {}
        for col, val in row.items():
            if col == p:
                continue
            if col < nbad:
                raise RelationExtractionError(
                    f"rule for {lhs_word} involves unresolved out-of-order word {word_of[col]}"
                )
            u, v = word_of[col]
            rhs[(index[u], index[v])] = (-val).as_laurent()
        rules[lhs_word] = rhs
    missing = [w for w in bad_words if w not in rules]
    if missing:
        raise RelationExtractionError(f"no rule derived for pairs {missing}")
    return rules


def _install_pair_rules(pres, rules):
    for (gi, gj), rhs in rules.items():
        terms = {}
        for (u, v), coeff in rhs.items():
            e = [0] * pres.ngens
            e[u] += 1
            e[v] += 1
            terms[tuple(e)] = coeff
        pres.install_rule((gi, gj), terms)


# ---------------------------------------------------------------------------
# q-difference operators on C^N


def _norm_mode(mode):
    if mode == "generic" or isinstance(mode, int):
        return mode
    raise ValueError(f"mode must be 'generic' or an odd level, got {mode!r}")


def dq_cn(N, mode="generic"):
    """The algebra of q-difference operators on quantum affine N-space."""
    return _dq_cn(N, _norm_mode(mode))


@lru_cache(maxsize=None)
def _dq_cn(N, mode):
    if N < 0:
        raise ValueError("N must be non-negative")
    xs = [f"x{i}" for i in range(1, N + 1)]
    ds = [f"d{i}" for i in range(1, N + 1)]
    pres = AlgebraPresentation(f"dq{N}", xs + ds, mode=mode)
    q = QLaurent.q_power(1)
    qi = QLaurent.q_power(-1)
    q2 = QLaurent.q_power(2)
    ng = 2 * N

    def e(*positions):
        v = [0] * ng
        for p in positions:
            v[p] += 1
        return tuple(v)

    for j in range(N):
        for i in range(j):
            pres.install_rule((xs[j], xs[i]), {e(i, j): q})
            pres.install_rule((ds[j], ds[i]), {e(N + i, N + j): qi})
    for i in range(N):
        for j in range(N):
            if i != j:
                pres.install_rule((ds[i], xs[j]), {e(j, N + i): q})
            else:
                rhs = {e(i, N + i): q2, e(): q2 - 1}
                for k in range(i):
                    rhs[e(k, N + k)] = q2 - 1
                pres.install_rule((ds[i], xs[i]), rhs)
    pres.freeze()
    for i in range(N):
        w = [0] * ng
        w[i] = 1
        w[N + i] = -1
        pres.add_grading(w)

    for i in range(N + 1):
        terms = {(0,) * ng: QLaurent.one()}
        for j in range(i):
            terms[e(j, N + j)] = QLaurent.one()
        pres.named[f"beta_{i}"] = pres.element(terms)

    for i in range(1, N + 1):
        def exponent(m, _i=i):
            return 2 * sum(m[j] - m[N + j] for j in range(_i))
        pres.register_scalar_commuter(f"beta_{i}", pres.named[f"beta_{i}"], exponent)
    return pres


def beta(pres, i):
    return pres.named[f"beta_{i}"]


def dq_cn_mutated(N, mode="generic"):
    """Deliberately broken variant of dq_cn: the affine part of the last
    d*x rule keeps its constant term but loses the lower x*d terms.

    Dropping the whole affine tail would leave a confluent q-torus, so this
    is the minimal mutation that actually breaks the overlap check.  Used as
    the negative control for check_confluence.
    """
    if N < 2:
        raise ValueError("the mutation only bites for N >= 2")
    base = dq_cn(N, mode)
    pres = AlgebraPresentation(f"dq{N}-mutated", base.generators, mode=mode)
    q2 = QLaurent.q_power(2)
    last = N - 1
    for (i, j), rhs in base.rules.items():
        if (i, j) == (N + last, last):
            e_pair = [0] * 2 * N
            e_pair[last] = 1
            e_pair[N + last] = 1
            rhs = {tuple(e_pair): q2, (0,) * (2 * N): q2 - 1}
        pres.install_rule((base.generators[i], base.generators[j]), dict(rhs))
    return pres.freeze()


# ---------------------------------------------------------------------------
# the reflection equation algebra for GL_2


_OQ_GENS = ("a", "b", "c", "d")
_L_SYMBOL = [["a", "b"], ["c", "d"]]


@lru_cache(maxsize=None)
def _oq_rules():
    rels = expand_matrix_relation(
        ["R21", "L1", "R", "L2"], ["L2", "R21", "L1", "R"], {"L": _L_SYMBOL}
    )
    return relations_to_rules(rels, _OQ_GENS)


def oq_gl2_plus(mode="generic"):
    """The reflection equation algebra on four generators a, b, c, d.

    The quantum determinant and the generator d are registered as
    denominators, so fractions over this presentation model the localized
    algebra and its big-cell localization.
    """
    return _oq_gl2(_norm_mode(mode))


@lru_cache(maxsize=None)
def _oq_gl2(mode):
    pres = AlgebraPresentation("oq_gl2", _OQ_GENS, mode=mode)
    _install_pair_rules(pres, _oq_rules())
    pres.freeze()
    pres.add_grading((1, 1, 1, 1))
    pres.add_grading((0, 1, -1, 0))

    q2 = QLaurent.q_power(2)
    qm2 = QLaurent.q_power(-2)
    A, B, C, D = (pres.gen(g) for g in _OQ_GENS)
    pres.named["detq"] = A * D - q2 * (B * C)
    pres.named["trq"] = A + qm2 * D
    pres.register_scalar_commuter("detq", pres.named["detq"], lambda m: 0)
    pres.register_scalar_commuter("d", D, lambda m: 2 * (m[1] - m[2]))
    return pres


# ---------------------------------------------------------------------------
# q-difference operators on GL_2 (the Heisenberg double)


_X_SYMBOL = [["x11", "x12"], ["x21", "x22"]]
_D_SYMBOL = [["p11", "p12"], ["p21", "p22"]]
_DQGL2_GENS = ("x11", "x12", "x21", "x22", "p11", "p12", "p21", "p22")


@lru_cache(maxsize=None)
def _dqgl2_rules():
    xx = expand_matrix_relation(
        ["R21", "X1", "R", "X2"], ["X2", "R21", "X1", "R"], {"X": _X_SYMBOL}
    )
    dd = expand_matrix_relation(
        ["R21", "D1", "R", "D2"], ["D2", "R21", "D1", "R"], {"D": _D_SYMBOL}
    )
    cross = expand_matrix_relation(
        ["R21", "D1", "R", "X2"],
        ["X2", "R21", "D1", "R21inv"],
        {"X": _X_SYMBOL, "D": _D_SYMBOL},
    )
    rules = {}
    rules.update(relations_to_rules(xx, _DQGL2_GENS))
    rules.update(relations_to_rules(dd, _DQGL2_GENS))
    rules.update(relations_to_rules(cross, _DQGL2_GENS))
    return rules


def dq_gl2_plus(mode="generic"):
    """q-difference operators on GL_2: two reflection-equation matrices X, D
    with cross relations; quantum determinants registered as denominators."""
    return _dq_gl2(_norm_mode(mode))


@lru_cache(maxsize=None)
def _dq_gl2(mode):
    pres = AlgebraPresentation("dq_gl2", _DQGL2_GENS, mode=mode)
    _install_pair_rules(pres, _dqgl2_rules())
    pres.freeze()
    pres.add_grading((1, 1, 1, 1, 1, 1, 1, 1))
    pres.add_grading((1, 1, 1, 1, 0, 0, 0, 0))
    pres.add_grading((0, 1, -1, 0, 0, 1, -1, 0))

    q2 = QLaurent.q_power(2)
    g = pres.gen
    pres.named["detqX"] = g("x11") * g("x22") - q2 * (g("x12") * g("x21"))
    pres.named["detqD"] = g("p11") * g("p22") - q2 * (g("p12") * g("p21"))
    pres.register_scalar_commuter(
        "detqX", pres.named["detqX"], lambda m: 2 * sum(m[4:])
    )
    pres.register_scalar_commuter(
        "detqD", pres.named["detqD"], lambda m: -2 * sum(m[:4])
    )
    return pres


def embed_x(elem, target=None):
    """Transport an element along a -> x11, b -> x12, c -> x21, d -> x22."""
    target = target or dq_gl2_plus(_mode_of(elem.alg))
    return elem.rename(target, {"a": "x11", "b": "x12", "c": "x21", "d": "x22"})


def embed_d(elem, target=None):
    """Transport an element along a -> p11, b -> p12, c -> p21, d -> p22."""
    target = target or dq_gl2_plus(_mode_of(elem.alg))
    return elem.rename(target, {"a": "p11", "b": "p12", "c": "p21", "d": "p22"})


def _mode_of(pres):
    return "generic" if pres.ring.kind == "generic" else pres.ring.ell


# ---------------------------------------------------------------------------
# the action on quantum affine space


def act(op, poly):
    """Apply a q-difference operator to a polynomial on quantum affine space.

    Polynomials are finite maps (exponent tuple of length N) -> coefficient
    in the presentation's coefficient ring.
    """
    alg = op.alg
    N = alg.ngens // 2
    ring = alg.ring
    total = {}
    for mono, coeff in op.terms.items():
        cur = dict(poly)
        for i in range(N - 1, -1, -1):
            for _ in range(mono[N + i]):
                cur = _act_single_d(ring, i, cur)
                if not cur:
                    break
        if not cur:
            continue
        xpart = mono[:N]
        if any(xpart):
            cur = _left_mul_x(ring, xpart, cur)
        for m, c in cur.items():
            s = total.get(m)
            s = coeff * c if s is None else s + coeff * c
            if s:
                total[m] = s
            else:
                del total[m]
    return total


def _act_single_d(ring, i, poly):
    # the difference quotient scales by q^2 per degree; q^1 would not be
    # annihilated by the defining relations (see the representation tests)
    out = {}
    for n, c in poly.items():
        if not n[i]:
            continue
        factor = ring.q_power(sum(n[:i])) * (ring.q_power(2 * n[i]) - ring.one())
        if not factor:
            continue
        m = list(n)
        m[i] -= 1
        m = tuple(m)
        s = out.get(m)
        s = c * factor if s is None else s + c * factor
        if s:
            out[m] = s
        else:
            del out[m]
    return out


def _left_mul_x(ring, xpart, poly):
    out = {}
    for n, c in poly.items():
        twist = sum(xpart[j] * n[i] for j in range(len(xpart)) for i in range(j))
        m = tuple(a + b for a, b in zip(xpart, n))
        s = out.get(m)
        contrib = c * ring.q_power(twist)
        s = contrib if s is None else s + contrib
        if s:
            out[m] = s
        else:
            del out[m]
    return out
