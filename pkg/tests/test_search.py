import math

import pytest

from cuboid_forge.cuboid import Cuboid, CuboidClass, primitive_reduce
from cuboid_forge.search import (
    Hit,
    SearchError,
    SearchReport,
    SearchTask,
    Strategy,
    VerificationError,
    divisibility_report,
    divisibility_row,
    korec_legs,
    korec_search,
    lal_blundon_scan,
    merge_reports,
    partner_legs,
    perfect_scan,
    quadruple_surjectivity_audit,
    run_sharded,
    run_task,
    saunderson_scan,
    triple_join_search,
)

from oracles import generated_quadruples, primitive_quadruples, square_root_or_none


def edges_of(report, cls=None):
    return [h.cuboid.edges for h in report.found if cls is None or h.cls is cls]


# -- triple join ---------------------------------------------------------------


def test_partner_legs_match_scan():
    for a in range(1, 120):
        expect = [x for x in range(a + 1, 400) if square_root_or_none(a * a + x * x) is not None]
        assert [x for x, _ in partner_legs(a, 399)] == expect


def test_triple_join_finds_smallest_brick():
    assert (44, 117, 240) in edges_of(triple_join_search(240), CuboidClass.BODY)


def test_triple_join_nothing_below_40(oracle_values):
    assert oracle_values["brick_census_40"] == []
    assert triple_join_search(40).found == []


def test_triple_join_500_matches_oracle(oracle_values):
    report = triple_join_search(500)
    assert edges_of(report, CuboidClass.BODY) == [tuple(t) for t in oracle_values["brick_census_500"]]


def test_triple_join_1000_matches_oracle(oracle_values):
    report = triple_join_search(1000)
    assert edges_of(report, CuboidClass.BODY) == [tuple(t) for t in oracle_values["brick_census_1000"]]
    report.verify()


def test_triple_join_reports_only_primitives():
    report = triple_join_search(1000)
    assert all(h.cuboid.is_primitive for h in report.found)
    assert (88, 234, 480) not in edges_of(report)


@pytest.mark.parametrize("shards", [1, 2, 4, 8])
def test_shard_invariance(shards):
    base = triple_join_search(300)
    assert triple_join_search(300, shards=shards).to_json() == base.to_json()


def test_worker_count_invariance():
    assert triple_join_search(600, workers=3).to_json() == triple_join_search(600).to_json()


def test_merge_rejects_missing_shard():
    task = SearchTask.make(Strategy.TRIPLE_JOIN, max_edge=100)
    parts = [run_task(task.with_shard(i, 3)) for i in (0, 2)]
    with pytest.raises(SearchError):
        merge_reports(parts)
    assert run_sharded(task, 3).to_json() == run_task(task).to_json()


def test_bad_bounds_rejected():
    with pytest.raises(SearchError):
        triple_join_search(2)
    with pytest.raises(SearchError):
        SearchTask.make(Strategy.TRIPLE_JOIN, max_param=3)
    with pytest.raises(SearchError):
        SearchTask.make(Strategy.TRIPLE_JOIN, shard=(2, 2), max_edge=10)


def test_verify_catches_tampering():
    report = triple_join_search(300)
    bad = SearchReport(report.task, [Hit(Cuboid(44, 117, 240), CuboidClass.PERFECT)], 300)
    with pytest.raises(VerificationError):
        bad.verify()
    dup = SearchReport(report.task, [Hit(Cuboid(44, 117, 240), CuboidClass.BODY),
                                     Hit(Cuboid(88, 234, 480), CuboidClass.BODY)], 300)
    with pytest.raises(VerificationError):
        dup.verify()


# -- Korec ------------------------------------------------------------------------


def test_korec_117():
    legs = dict((a, y) for y, a in korec_legs(117))
    assert 13689 // 81 == 169 and legs[81] == 44
    assert legs[27] == 240
    report = korec_search(117)
    body = [h for h in report.found if h.cls is CuboidClass.BODY]
    assert [h.cuboid.edges for h in body] == [(44, 117, 240)]
    assert dict(body[0].provenance) == {"x": 117, "a": 81, "b": 27}


def test_korec_3():
    assert korec_legs(3) == [(4, 1)]
    assert korec_search(3).found == []


def test_korec_4():
    assert korec_legs(4) == [(3, 2)]
    assert korec_search(4).found == []


def test_korec_rejects_small_x():
    with pytest.raises(SearchError):
        korec_search(2)


def test_korec_hits_all_have_two_diagonals_on_x():
    report = korec_search(240)
    report.verify()
    for h in report.found:
        x = dict(h.provenance)["x"]
        others = list(h.cuboid.edges)
        others.remove(x)
        for y in others:
            assert square_root_or_none(x * x + y * y) is not None


def test_korec_consistency_with_triple_join():
    for h in triple_join_search(1000).of_class(CuboidClass.BODY):
        x = h.cuboid.a
        assert h.cuboid in {k.cuboid for k in korec_search(x).found}


def test_korec_range_task():
    report = run_task(SearchTask.make(Strategy.KOREC, max_x=120))
    assert (44, 117, 240) in edges_of(report, CuboidClass.BODY)
    report.verify()


# -- Lal-Blundon -----------------------------------------------------------------


def test_lal_blundon_scan_certificates():
    report = lal_blundon_scan(12)
    assert report.found
    for h in report.found:
        assert h.cls in (CuboidClass.TWO_DIAG, CuboidClass.BODY, CuboidClass.FACE, CuboidClass.PERFECT)
        p = dict(h.provenance)
        m, n, q_, p_ = p["m"], p["n"], p["q"], p["p"]
        x, y, z = 2 * m * n * p_ * q_, m * n * (q_**2 - p_**2), p_ * q_ * (n**2 - m**2)
        assert sorted((x, y, z)) == list(h.cuboid.edges)
        assert x * x + y * y == (m * n * (p_**2 + q_**2)) ** 2
        assert x * x + z * z == (p_ * q_ * (m**2 + n**2)) ** 2


def lal_blundon_body_oracle(top):
    keys = set()
    for m in range(1, top + 1):
        for n in range(m + 1, top + 1):
            for p in range(1, top + 1):
                for q in range(p + 1, top + 1):
                    x, y, z = 2 * m * n * p * q, m * n * (q * q - p * p), p * q * (n * n - m * m)
                    if square_root_or_none(y * y + z * z) is not None:
                        g = math.gcd(math.gcd(x, y), z)
                        keys.add(tuple(sorted((x // g, y // g, z // g))))
    return keys


def test_lal_blundon_scan_body_count_matches_oracle():
    report = lal_blundon_scan(20)
    bodies = {primitive_reduce(h.cuboid).edges for h in report.found if h.cls is CuboidClass.BODY}
    oracle = lal_blundon_body_oracle(20)
    assert bodies == oracle
    assert len(report.of_class(CuboidClass.BODY)) == len(oracle) == 14


def test_lal_blundon_scan_includes_equal_edge_case():
    report = lal_blundon_scan(2)
    assert [(h.cuboid.edges, h.cls) for h in report.found] == [((6, 6, 8), CuboidClass.TWO_DIAG)]


# -- Saunderson --------------------------------------------------------------------


def test_saunderson_scan_all_body():
    report = saunderson_scan(100)
    report.verify()
    assert report.found and all(h.cls is CuboidClass.BODY for h in report.found)
    assert (44, 117, 240) in edges_of(report)


# -- quadruples --------------------------------------------------------------------


def test_primitive_quadruple_enumeration_matches_oracle(oracle_values):
    from cuboid_forge.search import primitive_quadruples as fast
    assert fast(25) == [tuple(t) for t in oracle_values["primitive_quadruples_25"]]
    assert fast(40) == primitive_quadruples(40)


def test_surjectivity_simplest():
    audit = quadruple_surjectivity_audit(3, 1)
    assert audit.primitives == [(1, 2, 2, 3)]
    assert audit.unhit == []


def test_surjectivity_seven():
    audit = quadruple_surjectivity_audit(7, 3)
    assert (2, 3, 6, 7) in audit.primitives
    assert (2, 3, 6, 7) in audit.hit


def test_surjectivity_25(oracle_values):
    audit = quadruple_surjectivity_audit(25, 25)
    assert [list(t) for t in audit.unhit] == oracle_values["unhit_quadruples_25_25"]
    gen = generated_quadruples(25, 25)
    assert all(t in gen for t in audit.hit)


# -- perfect scan ------------------------------------------------------------------


@pytest.mark.parametrize("bound", [10, 500])
def test_perfect_scan_empty(bound):
    assert perfect_scan(bound).found == []


# -- divisibility ---------------------------------------------------------------------


def test_divisibility_smallest_brick():
    row = divisibility_row(Cuboid(44, 117, 240))
    d = dict(row.divides)
    assert d[4] == (44, 240) and d[16] == (240,) and d[9] == (117,)
    assert d[3] == (117, 240) and d[5] == (240,) and d[11] == (44,)
    for prop in ("16_and_other_4", "9_and_other_3", "some_5", "some_11"):
        assert row.prop(prop)
    assert not row.prop("same_edge_55")


def test_divisibility_empty():
    profile = divisibility_report([])
    assert profile.rows == [] and profile.findings == []


def test_divisibility_excludes_scaled_and_non_body():
    hits = [Hit(Cuboid(88, 234, 480), CuboidClass.BODY), Hit(Cuboid(3, 4, 5), CuboidClass.ONE_DIAG),
            Hit(Cuboid(44, 117, 240), CuboidClass.BODY)]
    profile = divisibility_report(hits)
    assert [r.cuboid.edges for r in profile.rows] == [(44, 117, 240)]
    assert {c.edges for c in profile.excluded} == {(88, 234, 480), (3, 4, 5)}
