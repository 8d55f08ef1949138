import math

import pytest
from hypothesis import given, strategies as st

from cuboid_forge.cuboid import CuboidClass, classify, diagonal_report, primitive_reduce
from cuboid_forge.params import (
    NonPositiveLegError,
    ParameterError,
    ParityError,
    QuadrupleParams,
    SaundersonVariant,
    SharedLegParams,
    lal_blundon,
    perfect_conditions,
    quadruple_from_params,
    saunderson,
    saunderson_audit,
    shared_leg_forward,
    shared_leg_inverse,
)

from oracles import square_root_or_none


# -- quadruples ------------------------------------------------------------


@pytest.mark.parametrize(
    "params, quad, degenerate",
    [
        ((1, 1, 1, 0), (1, 2, 2, 3), False),
        ((2, 1, 1, 1), (3, 6, 2, 7), False),
        ((1, 1, 1, 1), (0, 4, 0, 4), True),
    ],
)
def test_quadruple_examples(params, quad, degenerate):
    q = quadruple_from_params(QuadrupleParams(*params))
    assert (q.w, q.x, q.y, q.z) == quad
    assert q.degenerate is degenerate


def test_next_simplest_quadruple_is_a_permutation():
    q = quadruple_from_params(QuadrupleParams(2, 1, 1, 1))
    assert q.sorted_legs() == (2, 3, 6, 7)
    assert q.primitive


def test_quadruple_all_zero_rejected():
    with pytest.raises(ParameterError):
        quadruple_from_params(QuadrupleParams(0, 0, 0, 0))


@given(*[st.integers(min_value=0, max_value=1000)] * 4)
def test_quadruple_identity(m, n, p, q):
    if m == n == p == q == 0:
        return
    quad = quadruple_from_params(QuadrupleParams(m, n, p, q))
    assert quad.w**2 + quad.x**2 + quad.y**2 == quad.z**2


@pytest.mark.parametrize(
    "params, sums, roots",
    [
        # w, x, y = 15, 20, 0
        ((1, 2, 2, 4), (400, 625, 225), (20, 25, 15)),
        # w, x, y = 40, 24, 18; 2176 and 1924 fall strictly between squares
        ((1, 2, 6, 3), (900, 2176, 1924), (30, None, None)),
        ((1, 1, 1, 1), (16, 16, 0), (4, 4, 0)),
    ],
)
def test_perfect_conditions_examples(params, sums, roots):
    c = perfect_conditions(QuadrupleParams(*params))
    assert (c.xy_sum, c.wx_sum, c.wy_sum) == sums
    assert (c.A, c.B, c.C) == roots
    assert tuple(square_root_or_none(s) for s in sums) == roots


def test_perfect_conditions_degeneracy_flag():
    assert perfect_conditions(QuadrupleParams(1, 1, 1, 1)).degenerate
    assert perfect_conditions(QuadrupleParams(1, 2, 2, 4)).degenerate
    assert not perfect_conditions(QuadrupleParams(1, 2, 6, 3)).degenerate


def test_no_small_params_satisfy_all_three_nondegenerately():
    for m in range(1, 9):
        for n in range(1, 9):
            for p in range(1, 9):
                for q in range(1, 9):
                    c = perfect_conditions(QuadrupleParams(m, n, p, q))
                    assert not (c.all_hold and not c.degenerate), (m, n, p, q)


# -- shared leg --------------------------------------------------------------


def test_shared_leg_forward_example():
    pair = shared_leg_forward(SharedLegParams(3, 2, 2, 18))
    assert (pair.a_squared, pair.b, pair.c, pair.d, pair.e) == (400, 21, 15, 29, 25)
    assert pair.a == 20
    assert 400 + 441 == 841 == 29**2
    assert 400 + 225 == 625 == 25**2
    assert not pair.degenerate


def test_shared_leg_degenerate_case_iii():
    # k1 = 1, k2 = 2, r = 5
    pair = shared_leg_forward(SharedLegParams(1, 2, 20, 10))
    assert pair.b == 20 == 2 * 5 * 1 * 2
    assert pair.c == 0
    assert pair.a_squared == 225 == 5**2 * (2**2 - 1**2) ** 2
    assert pair.degenerate
    assert pair.e_flipped


@pytest.mark.parametrize("n1, n2", [(2, 4), (3, 1), (6, 2)])
def test_shared_leg_zero_leg_rejected(n1, n2):
    with pytest.raises(NonPositiveLegError):
        shared_leg_forward(SharedLegParams(1, 1, n1, n2))


def test_shared_leg_negative_leg_rejected():
    # (m2^2 - m1^2) > 0 but n1 < n2
    with pytest.raises(NonPositiveLegError):
        shared_leg_forward(SharedLegParams(1, 3, 1, 3))


def test_shared_leg_parity_rejected():
    with pytest.raises(ParityError):
        shared_leg_forward(SharedLegParams(1, 2, 3, 1))


def test_shared_leg_inverse_example():
    assert shared_leg_inverse(21, 15, 29, 25) == SharedLegParams(3, 2, 2, 18)


def test_shared_leg_inverse_rejects_mismatched_differences():
    with pytest.raises(ParameterError):
        shared_leg_inverse(5, 3, 4, 1)


def test_shared_leg_inverse_divisibility_never_fails():
    # m1 (b + c) = m2 (d + e) with gcd(m1, m2) = 1 forces both divisibilities;
    # checked exhaustively instead of trusted
    checked = 0
    for b in range(2, 60):
        for c in range(1, b):
            for d in range(b + 1, 80):
                for e in range(1, d):
                    if b * b - c * c != d * d - e * e:
                        continue
                    p = shared_leg_inverse(b, c, d, e)
                    pair = shared_leg_forward(p)
                    assert (pair.b, pair.c, pair.d, pair.e) == (b, c, d, e)
                    assert math.gcd(p.m1, p.m2) == 1
                    checked += 1
    assert checked > 100


def test_shared_leg_roundtrip_example():
    p = SharedLegParams(3, 2, 2, 18)
    pair = shared_leg_forward(p)
    assert shared_leg_inverse(pair.b, pair.c, pair.d, pair.e) == p


@given(*[st.integers(min_value=1, max_value=50)] * 4)
def test_shared_leg_identity(m1, m2, n1, n2):
    assert (m2 * n1 + m1 * n2) ** 2 - (m1 * n1 + m2 * n2) ** 2 == (m2**2 - m1**2) * (n1**2 - n2**2)
    p = SharedLegParams(m1, m2, n1, n2)
    if not p.parity_ok or (m2**2 - m1**2) * (n1**2 - n2**2) <= 0:
        return
    pair = shared_leg_forward(p)
    assert pair.d**2 - pair.b**2 == pair.a_squared
    strict = m2 * n2 > m1 * n1 and m1 * n2 > m2 * n1
    if math.gcd(m1, m2) == 1 and strict:
        assert shared_leg_inverse(pair.b, pair.c, pair.d, pair.e) == p


# -- Saunderson ----------------------------------------------------------------


def test_saunderson_classical_gives_smallest_brick():
    g = saunderson(3, 4, 5)
    assert g.cuboid.edges == (44, 117, 240)
    assert g.cls is CuboidClass.BODY
    assert g.cuboid.is_primitive


def test_saunderson_as_printed_is_not_a_brick():
    g = saunderson(3, 4, 5, SaundersonVariant.AS_PRINTED)
    assert g.cuboid.edges == (64, 117, 240)
    assert 64**2 + 117**2 == 17785
    assert 133**2 == 17689 < 17785 < 17956 == 134**2
    assert g.report.d_ab is None
    assert g.cls is not CuboidClass.BODY


def test_saunderson_audit_names_failing_face():
    audit = saunderson_audit(3, 4, 5)
    assert audit.discrepancy
    names = [f[0] for f in audit.failing_faces]
    assert "d_ab" in names
    assert ("d_ab", 64, 117, 17785) in audit.failing_faces
    assert "17785" in audit.describe()


def test_saunderson_scaled_triple():
    g = saunderson(6, 8, 10)
    assert g.cuboid.edges == (352, 936, 1920)
    assert primitive_reduce(g.cuboid).edges == (44, 117, 240)


def test_saunderson_rejects_non_triple():
    with pytest.raises(ParameterError):
        saunderson(3, 4, 6)


def _primitive_triples(max_hyp):
    for s in range(2, math.isqrt(max_hyp) + 1):
        for t in range(1, s):
            if (s - t) % 2 and math.gcd(s, t) == 1 and s * s + t * t <= max_hyp:
                yield s * s - t * t, 2 * s * t, s * s + t * t


def test_saunderson_classical_always_body_up_to_100():
    triples = list(_primitive_triples(100))
    assert len(triples) == 16
    for x, y, z in triples:
        for xx, yy in ((x, y), (y, x)):
            g = saunderson(xx, yy, z)
            r = diagonal_report(g.cuboid)
            assert r.face_count == 3 and r.g is None, (xx, yy, z)


# -- Lal-Blundon -------------------------------------------------------------


@pytest.mark.parametrize(
    "params, xyz, diags, yz",
    [((1, 2, 1, 2), (8, 6, 6), (10, 10), 72), ((1, 2, 2, 3), (24, 10, 18), (26, 30), 424)],
)
def test_lal_blundon_examples(params, xyz, diags, yz):
    lb = lal_blundon(*params)
    assert (lb.x, lb.y, lb.z) == xyz
    assert (lb.diag_xy, lb.diag_xz) == diags
    assert lb.y**2 + lb.z**2 == yz
    assert lb.yz_root is None and not lb.is_body
    assert lb.certified


def test_lal_blundon_swap_symmetry():
    assert lal_blundon(1, 2, 2, 3).cuboid == lal_blundon(2, 1, 2, 3).cuboid


def test_lal_blundon_rejects_zero_edges():
    with pytest.raises(ParameterError):
        lal_blundon(2, 2, 1, 3)
    with pytest.raises(ParameterError):
        lal_blundon(1, 2, 3, 3)


def test_lal_blundon_certificate_exhaustive():
    for m in range(1, 13):
        for n in range(1, 13):
            for p in range(1, 13):
                for q in range(1, 13):
                    if m == n or p == q:
                        continue
                    lb = lal_blundon(m, n, p, q)
                    assert lb.certified
                    body = classify(lb.cuboid) in (CuboidClass.BODY, CuboidClass.PERFECT)
                    assert body == lb.is_body
