import os
import random

import pytest

from qweyl.coefficients import CycNumber
from qweyl.fibers import (
    CentralCharacter,
    GL2Character,
    ResourceBound,
    center_dimension,
    fiber,
    gl2_fiber,
    is_azumaya_point,
    locus_sweep,
    sample_character,
    trace_form_rank,
)
from qweyl.linalg import rank
from qweyl.presentations import beta, dq_cn


def test_fiber_dimensions():
    assert fiber(1, 3, ([1], [1])).dimension == 9
    assert fiber(2, 3, ([1, 1], [1, 1])).dimension == 81
    assert fiber(1, 5, ([1], [1])).dimension == 25


def test_unit_acts_as_identity():
    f = fiber(1, 3, ([2], [1]))
    for m in f.basis:
        assert f.mono_product((0, 0), m) == {m: CycNumber.one(3)}
        assert f.mono_product(m, (0, 0)) == {m: CycNumber.one(3)}


def test_center_generators_evaluate_to_character():
    ch = CentralCharacter(3, [2, -1], [1, 3])
    f = fiber(2, 3, ch)
    p = f.pres
    unit = (0, 0, 0, 0)
    assert f.reduce(p.gen("x1", 3)) == {unit: ch.nu[0]}
    assert f.reduce(p.gen("d2", 3)) == {unit: ch.nu_check[1]}
    # the cubed grading operator evaluates to the partial sum
    b1 = beta(p, 1) ** 3
    assert f.reduce(b1) == {unit: ch.partial_sums()[0]}


def test_small_fiber_verdicts():
    v = is_azumaya_point(fiber(1, 3, ([1], [1])))
    assert v.is_azumaya and v.center_dim == 1 and v.trace_rank == 9

    v = is_azumaya_point(fiber(1, 3, ([1], [-1])))
    assert not v.is_azumaya
    assert v.trace_rank < 9

    v = is_azumaya_point(fiber(1, 3, ([0], [0])))
    assert v.is_azumaya

    v = is_azumaya_point(fiber(1, 5, ([1], [1])))
    assert v.is_azumaya and v.dimension == 25


def test_trace_form_rank_matches_unblocked_computation():
    # independent oracle: full 9x9 Gram matrix of tr(L_u L_v), no block tricks
    for nu_check in (1, -1):
        f = fiber(1, 3, ([1], [nu_check]))
        one = CycNumber.one(3)
        zero = CycNumber.zero(3)
        gram = []
        for u in f.basis:
            row = {}
            for j, v in enumerate(f.basis):
                uv = f.mono_product(u, v)
                val = zero
                for w, c in uv.items():
                    for m in f.basis:
                        val = val + c * f.mono_product(w, m).get(m, zero)
                if val:
                    row[j] = val
            gram.append(row)
        assert rank(gram, one) == trace_form_rank(f)


def test_center_dimension_no_blocking_oracle():
    from qweyl.linalg import nullspace

    f = fiber(1, 3, ([1], [-1]))
    one = CycNumber.one(3)
    rows = {}
    for gm in ((1, 0), (0, 1)):
        for m in f.basis:
            comm = dict(f.mono_product(m, gm))
            for t, c in f.mono_product(gm, m).items():
                s = comm.get(t)
                s = -c if s is None else s - c
                if s:
                    comm[t] = s
                else:
                    comm.pop(t, None)
            for t, c in comm.items():
                rows.setdefault((gm, t), {})[f.index[m]] = c
    assert len(nullspace(list(rows.values()), 9, one)) == center_dimension(f)


def test_locus_sweep_n2():
    rows = locus_sweep(2, 3, samples=10, seed=7)
    assert len(rows) == 13
    assert all(r["ok"] for r in rows)
    in_locus = [r for r in rows if r["expected_azumaya"]]
    assert len(in_locus) == 10
    assert all(r["center_dim"] == 1 and r["trace_rank"] == 81 for r in in_locus)
    out = [r for r in rows if not r["expected_azumaya"]]
    assert all(not r["is_azumaya"] for r in out)


def test_verdict_constant_within_pattern_class():
    samples = 25 if os.environ.get("QWEYL_SLOW") else 5
    rng = random.Random(11)
    for pattern in [(False, False), (True, False), (False, True), (True, True)]:
        verdicts = set()
        for _ in range(samples):
            ch = sample_character(2, 3, rng, pattern=pattern)
            verdicts.add(is_azumaya_point(fiber(2, 3, ch)).is_azumaya)
        assert len(verdicts) == 1
        assert verdicts == {pattern == (False, False)}


def test_gl2_character_validation():
    with pytest.raises(ValueError):
        GL2Character(3, dict(v=1, x12=1, x21=1, x22=1, w=1, p12=0, p21=0, p22=1))
    ch = GL2Character(3, dict(v=2, x12=1, x21=1, x22=1, w=2, p12=1, p21=1, p22=1))
    assert ch.det_x() == CycNumber.const(3, 1)


def test_gl2_fiber_resource_bound():
    ch = dict(v=2, x12=1, x21=1, x22=1, w=2, p12=1, p21=1, p22=1)
    with pytest.raises(ResourceBound):
        gl2_fiber(5, ch)


def test_gl2_fiber_reduction_consistency():
    # reducing v itself must give the character value of v
    ch = GL2Character(3, dict(v=2, x12=1, x21=1, x22=1, w=3, p12=1, p21=2, p22=1))
    f = gl2_fiber(3, ch)
    from qweyl.center import compute_v_w

    v_elem, w_elem = compute_v_w(3, check_central=False)
    unit = (0,) * 8
    assert f.reduce(v_elem) == {unit: ch.values["v"]}
    assert f.reduce(w_elem) == {unit: ch.values["w"]}
    # x11^3 reduces consistently: x11^3 * x22^3 - q^6 x12^3 x21^3 = detX^3... checked
    # through the defining identity instead: reduce(detqX^3) equals det of the matrix
    detX3 = f.pres.named["detqX"] ** 3
    assert f.reduce(detX3) == {unit: ch.det_x()}
