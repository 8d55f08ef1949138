"""Desk-scale brick searches.

Every strategy is cut into integer *units* (an edge length, a generator
parameter, ...). Units are independent, so they can be sharded across
processes, and the list of completed units is a single watermark, which is
what makes checkpoint/resume trivial. Results are merged by sorting and
deduplicating on the primitive canonical cuboid, so the output never depends
on worker count or shard layout.
"""

from __future__ import annotations

import enum
import hashlib
import json
import logging
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .arith import divisors_of_square, exact_sqrt, square
from .cuboid import Cuboid, CuboidClass, class_of_report, diagonal_report, primitive_reduce
from .params import QuadrupleParams, SaundersonVariant, lal_blundon, quadruple_from_params, saunderson

log = logging.getLogger(__name__)

THREADS_ENV = "CUBOID_FORGE_THREADS"


class Strategy(enum.Enum):
    TRIPLE_JOIN = "triple-join"
    KOREC = "korec"
    LAL_BLUNDON = "lal-blundon"
    SAUNDERSON = "saunderson"
    QUADRUPLE_GEN = "quadruple-gen"


# bounds each strategy understands; the first one listed is required
BOUND_NAMES: dict[Strategy, tuple[str, ...]] = {
    Strategy.TRIPLE_JOIN: ("max_edge",),
    Strategy.KOREC: ("x", "max_x"),
    Strategy.LAL_BLUNDON: ("max_param",),
    Strategy.SAUNDERSON: ("max_hyp",),
    Strategy.QUADRUPLE_GEN: ("max_z", "max_param"),
}


class SearchError(ValueError):
    pass


class VerificationError(RuntimeError):
    """A reported cuboid failed re-verification."""


@dataclass(frozen=True)
class SearchTask:
    strategy: Strategy
    bounds: tuple[tuple[str, int], ...]
    shard: tuple[int, int] | None = None
    perfect_only: bool = False

    def __post_init__(self) -> None:
        allowed = BOUND_NAMES[self.strategy]
        names = [k for k, _ in self.bounds]
        for k, v in self.bounds:
            if k not in allowed:
                raise SearchError(f"{self.strategy.value} does not take bound {k!r}")
            if not isinstance(v, int) or v < 1:
                raise SearchError(f"bound {k} must be a positive integer, got {v!r}")
        if self.strategy is Strategy.KOREC:
            if len(names) != 1:
                raise SearchError("korec takes exactly one of x, max_x")
        elif allowed[0] not in names:
            raise SearchError(f"{self.strategy.value} needs bound {allowed[0]!r}")
        if self.shard is not None:
            index, count = self.shard
            if count < 1 or not 0 <= index < count:
                raise SearchError(f"bad shard {index}/{count}")
        object.__setattr__(self, "bounds", tuple(sorted(self.bounds)))

    @classmethod
    def make(cls, strategy: Strategy | str, shard: tuple[int, int] | None = None,
             perfect_only: bool = False, **bounds: int) -> SearchTask:
        return cls(Strategy(strategy), tuple(bounds.items()), shard, perfect_only)

    def bound(self, name: str, default: int | None = None) -> int | None:
        return dict(self.bounds).get(name, default)

    def unsharded(self) -> SearchTask:
        return SearchTask(self.strategy, self.bounds, None, self.perfect_only)

    def with_shard(self, index: int, count: int) -> SearchTask:
        return SearchTask(self.strategy, self.bounds, (index, count), self.perfect_only)

    def to_dict(self) -> dict:
        d: dict = {"strategy": self.strategy.value, "bounds": dict(self.bounds)}
        if self.perfect_only:
            d["perfect_only"] = True
        if self.shard is not None:
            d["shard"] = list(self.shard)
        return d

    @property
    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True, order=True)
class Hit:
    cuboid: Cuboid
    cls: CuboidClass = field(compare=False)
    provenance: tuple[tuple[str, int], ...] = ()

    @property
    def key(self) -> Cuboid:
        return primitive_reduce(self.cuboid)

    @property
    def sort_key(self) -> tuple:
        return (self.cuboid.edges, self.provenance)

    def to_dict(self) -> dict:
        return {
            "edges": list(self.cuboid.edges),
            "class": self.cls.label,
            "provenance": [[k, v] for k, v in self.provenance],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Hit:
        return cls(
            Cuboid(*d["edges"]),
            CuboidClass.from_label(d["class"]),
            tuple((str(k), int(v)) for k, v in d["provenance"]),
        )


@dataclass
class SearchReport:
    task: SearchTask
    found: list[Hit]
    watermark: int
    complete: bool = True

    @property
    def counts(self) -> dict[str, int]:
        c = Counter(h.cls.label for h in self.found)
        return dict(sorted(c.items()))

    @property
    def perfect(self) -> list[Hit]:
        return [h for h in self.found if h.cls is CuboidClass.PERFECT]

    def of_class(self, cls: CuboidClass) -> list[Hit]:
        return [h for h in self.found if h.cls is cls]

    def to_dict(self) -> dict:
        return {
            "task": self.task.to_dict(),
            "watermark": self.watermark,
            "complete": self.complete,
            "counts": self.counts,
            "found": [h.to_dict() for h in self.found],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def verify(self) -> None:
        """Re-run the diagonal check on every hit; raise on any mismatch."""
        seen: set[Cuboid] = set()
        for h in self.found:
            got = class_of_report(diagonal_report(h.cuboid))
            if got is not h.cls:
                raise VerificationError(f"{h.cuboid.edges}: stored {h.cls.label}, recomputed {got.label}")
            if h.key in seen:
                raise VerificationError(f"duplicate primitive cuboid {h.key.edges}")
            seen.add(h.key)


# -- per-unit work ----------------------------------------------------------------


def partner_legs(a: int, limit: int) -> list[tuple[int, int]]:
    """All ``(x, u)`` with ``a < x <= limit`` and ``a^2 + x^2`` a square.

    ``u`` is the small factor in ``a^2 = (d - x)(d + x) = u * v``; opposite
    parities give no integer ``x``.
    """
    a2 = square(a)
    out = []
    for u in divisors_of_square(a):
        if u >= a:
            break
        v = a2 // u
        if (v - u) % 2:
            continue
        x = (v - u) // 2
        if a < x <= limit:
            out.append((x, u))
    out.sort()
    return out


def _triple_join_unit(task: SearchTask, a: int) -> list[Hit]:
    limit = task.bound("max_edge")
    legs = [x for x, _ in partner_legs(a, limit)]
    hits = []
    for i, b in enumerate(legs):
        b2 = square(b)
        for c in legs[i + 1:]:
            if exact_sqrt(b2 + square(c)) is None:
                continue
            if math.gcd(a, b, c) != 1:
                continue
            cub = Cuboid(a, b, c)
            cls = class_of_report(diagonal_report(cub))
            hits.append(Hit(cub, cls, (("a", a),)))
    return hits


def korec_legs(x: int) -> list[tuple[int, int]]:
    """``(y, a)`` pairs with ``a | x^2``, ``a < x`` and ``y = (x^2/a - a)/2``."""
    x2 = square(x)
    out = []
    for a in divisors_of_square(x):
        if a >= x:
            break
        diff = x2 // a - a
        if diff % 2 == 0:
            out.append((diff // 2, a))
    out.sort()
    return out


def _korec_unit(task: SearchTask, x: int) -> list[Hit]:
    legs = korec_legs(x)
    hits = []
    for i, (y, da) in enumerate(legs):
        for z, db in legs[i + 1:]:
            cub = Cuboid.of(x, y, z)
            report = diagonal_report(cub)
            prov = [("x", x), ("a", da), ("b", db)]
            if report.g is not None and report.face_count == 3:
                t = exact_sqrt(y * y + z * z)
                # third divisor: t = (x^2/c - c)/2  =>  c = g - t
                prov.append(("c", report.g - t))
            hits.append(Hit(cub, class_of_report(report), tuple(prov)))
    return hits


def _lal_blundon_unit(task: SearchTask, m: int) -> list[Hit]:
    top = task.bound("max_param")
    hits = []
    for n in range(m + 1, top + 1):
        for p in range(m, top + 1):
            for q in range(p + 1, top + 1):
                # unordered pair of pairs: (m, n) <= (p, q)
                if (p, q) < (m, n):
                    continue
                lb = lal_blundon(m, n, p, q)
                report = diagonal_report(lb.cuboid)
                prov = (("m", m), ("n", n), ("p", p), ("q", q))
                hits.append(Hit(report.cuboid, class_of_report(report), prov))
    return hits


def _saunderson_unit(task: SearchTask, s: int) -> list[Hit]:
    top = task.bound("max_hyp")
    hits = []
    for t in range(1, s):
        if (s - t) % 2 == 0 or math.gcd(s, t) != 1 or s * s + t * t > top:
            continue
        x, y, z = s * s - t * t, 2 * s * t, s * s + t * t
        gen = saunderson(x, y, z, SaundersonVariant.CLASSICAL)
        hits.append(Hit(gen.cuboid, gen.cls, (("x", x), ("y", y), ("z", z))))
    return hits


_UNIT_RUNNERS: dict[Strategy, Callable[[SearchTask, int], list[Hit]]] = {
    Strategy.TRIPLE_JOIN: _triple_join_unit,
    Strategy.KOREC: _korec_unit,
    Strategy.LAL_BLUNDON: _lal_blundon_unit,
    Strategy.SAUNDERSON: _saunderson_unit,
}


def task_units(task: SearchTask) -> list[int]:
    s = task.strategy
    if s is Strategy.TRIPLE_JOIN:
        units = list(range(1, task.bound("max_edge") + 1))
    elif s is Strategy.KOREC:
        x = task.bound("x")
        units = [x] if x is not None else list(range(3, task.bound("max_x") + 1))
    elif s is Strategy.LAL_BLUNDON:
        units = list(range(1, task.bound("max_param") + 1))
    elif s is Strategy.SAUNDERSON:
        units = list(range(2, math.isqrt(task.bound("max_hyp")) + 1))
    else:
        raise SearchError(f"{s.value} is an audit, not a cuboid search")
    if task.shard is not None:
        index, count = task.shard
        units = units[index::count]
    return units


def _run_unit(task: SearchTask, unit: int) -> list[Hit]:
    hits = _UNIT_RUNNERS[task.strategy](task, unit)
    if task.perfect_only:
        hits = [h for h in hits if h.cls is CuboidClass.PERFECT]
    return hits


def merge_hits(hits: Iterable[Hit]) -> list[Hit]:
    """Sort by edges and keep the smallest hit per primitive canonical cuboid."""
    out: list[Hit] = []
    seen: set[Cuboid] = set()
    for h in sorted(hits, key=lambda h: h.sort_key):
        if h.key not in seen:
            seen.add(h.key)
            out.append(h)
    return out


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise SearchError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise SearchError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n


def run_task(
    task: SearchTask,
    workers: int = 1,
    checkpoint: str | Path | None = None,
    chunk: int = 64,
    stop_after: int | None = None,
) -> SearchReport:
    """Run (or resume) a cuboid search.

    With ``checkpoint`` set, progress is written after every chunk of units
    and an existing file for the same task is resumed from its watermark. A
    file written for a different task is refused. ``stop_after`` halts once
    the watermark reaches that unit, leaving an incomplete report.
    """
    from .checkpoint import Checkpoint  # avoids an import cycle

    units = task_units(task)
    hits: list[Hit] = []
    watermark = 0
    if checkpoint is not None and Path(checkpoint).exists():
        cp = Checkpoint.load(checkpoint)
        cp.check_task(task)
        hits = list(cp.found)
        watermark = cp.watermark
        log.info("resuming %s from watermark %d", task.strategy.value, watermark)
    pending = [u for u in units if u > watermark]
    if stop_after is not None:
        pending = [u for u in pending if u <= stop_after]

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 and pending else None
    try:
        for start in range(0, len(pending), chunk):
            block = pending[start:start + chunk]
            if pool is not None:
                results = pool.map(_run_unit, [task] * len(block), block)
            else:
                results = (_run_unit(task, u) for u in block)
            for r in results:
                hits.extend(r)
            watermark = block[-1]
            hits = merge_hits(hits)
            if checkpoint is not None:
                Checkpoint.of_progress(task, watermark, hits).save(checkpoint)
    finally:
        if pool is not None:
            pool.shutdown()

    complete = not units or watermark >= units[-1]
    if complete and units:
        watermark = units[-1]
    report = SearchReport(task, merge_hits(hits), watermark, complete)
    for h in report.perfect:
        log.warning("PERFECT CUBOID CANDIDATE %s (provenance %s)", h.cuboid.edges, h.provenance)
    return report


def merge_reports(reports: Sequence[SearchReport]) -> SearchReport:
    """Combine the complete shard reports of one task into the unsharded report."""
    if not reports:
        raise SearchError("nothing to merge")
    base = reports[0].task.unsharded()
    shards = set()
    for r in reports:
        if r.task.unsharded() != base:
            raise SearchError(f"cannot merge reports of different tasks: {r.task} vs {base}")
        if not r.complete:
            raise SearchError(f"shard {r.task.shard} is incomplete")
        shards.add(r.task.shard or (0, 1))
    counts = {c for _, c in shards}
    if len(counts) != 1 or {i for i, _ in shards} != set(range(counts.pop())):
        raise SearchError(f"shard set {sorted(shards)} does not cover the task")
    hits = [h for r in reports for h in r.found]
    return SearchReport(base, merge_hits(hits), max(r.watermark for r in reports), True)


def run_sharded(task: SearchTask, shards: int, workers: int = 1) -> SearchReport:
    parts = [run_task(task.with_shard(i, shards), workers=workers) for i in range(shards)]
    return merge_reports(parts)


# -- public search operations ---------------------------------------------------


def triple_join_search(max_edge: int, workers: int = 1, shards: int = 1) -> SearchReport:
    """Primitive Euler bricks (and any perfect cuboids) with every edge <= ``max_edge``."""
    if max_edge < 3:
        raise SearchError(f"max_edge must be >= 3, got {max_edge}")
    task = SearchTask.make(Strategy.TRIPLE_JOIN, max_edge=max_edge)
    if shards > 1:
        return run_sharded(task, shards, workers)
    return run_task(task, workers=workers)


def korec_search(x: int) -> SearchReport:
    """Cuboids ``(x, y, z)`` with both faces on ``x`` integral, from divisors of ``x^2``."""
    if x <= 2:
        raise SearchError(f"korec search needs x >= 3, got {x}")
    return run_task(SearchTask.make(Strategy.KOREC, x=x))


def lal_blundon_scan(max_param: int, workers: int = 1) -> SearchReport:
    if max_param < 2:
        raise SearchError(f"max_param must be >= 2, got {max_param}")
    return run_task(SearchTask.make(Strategy.LAL_BLUNDON, max_param=max_param), workers=workers)


def saunderson_scan(max_hyp: int, workers: int = 1) -> SearchReport:
    if max_hyp < 5:
        raise SearchError(f"max_hyp must be >= 5, got {max_hyp}")
    return run_task(SearchTask.make(Strategy.SAUNDERSON, max_hyp=max_hyp), workers=workers)


def perfect_scan(max_edge: int, workers: int = 1) -> SearchReport:
    """Triple-join search keeping only perfect cuboids; expected empty."""
    if max_edge < 3:
        raise SearchError(f"max_edge must be >= 3, got {max_edge}")
    task = SearchTask.make(Strategy.TRIPLE_JOIN, perfect_only=True, max_edge=max_edge)
    report = run_task(task, workers=workers)
    report.verify()
    return report


# -- quadruple generator audit -------------------------------------------------


@dataclass
class SurjectivityAudit:
    max_z: int
    max_param: int
    primitives: list[tuple[int, int, int, int]]
    hit: list[tuple[int, int, int, int]]
    unhit: list[tuple[int, int, int, int]]
    witnesses: dict[tuple[int, int, int, int], tuple[int, int, int, int]]

    def to_dict(self) -> dict:
        return {
            "max_z": self.max_z,
            "max_param": self.max_param,
            "primitive_count": len(self.primitives),
            "hit_count": len(self.hit),
            "unhit": [list(t) for t in self.unhit],
            "witnesses": [[list(q), list(w)] for q, w in sorted(self.witnesses.items())],
        }


def primitive_quadruples(max_z: int) -> list[tuple[int, int, int, int]]:
    """Brute force: ``1 <= w <= x <= y``, ``w^2+x^2+y^2 = z^2 <= max_z^2``, gcd 1."""
    out = []
    for z in range(1, max_z + 1):
        z2 = z * z
        for w in range(1, z):
            for x in range(w, z):
                rest = z2 - w * w - x * x
                if rest < x * x:
                    break
                y = exact_sqrt(rest)
                if y is not None and math.gcd(w, x, y, z) == 1:
                    out.append((w, x, y, z))
    return sorted(out)


def quadruple_surjectivity_audit(max_z: int, max_param: int) -> SurjectivityAudit:
    """Which primitive quadruples up to ``max_z`` the four-parameter generator misses.

    Parameters range over ``[0, max_param]^4``. Zero entries in a generated
    quadruple never match, since the brute-force side only has positive legs.
    """
    if max_z < 3:
        raise SearchError(f"max_z must be >= 3, got {max_z}")
    prims = primitive_quadruples(max_z)
    wanted = set(prims)
    witnesses: dict[tuple[int, int, int, int], tuple[int, int, int, int]] = {}
    rng = range(0, max_param + 1)
    for m in rng:
        for n in rng:
            if m * m + n * n > max_z:
                continue
            for p in rng:
                for q in rng:
                    if m * m + n * n + p * p + q * q > max_z or m == n == p == q == 0:
                        continue
                    key = quadruple_from_params(QuadrupleParams(m, n, p, q)).sorted_legs()
                    if key in wanted and key not in witnesses:
                        witnesses[key] = (m, n, p, q)
    hit = [t for t in prims if t in witnesses]
    unhit = [t for t in prims if t not in witnesses]
    return SurjectivityAudit(max_z, max_param, prims, hit, unhit, witnesses)


# -- divisibility ------------------------------------------------------------------

DIVISORS = (4, 16, 3, 9, 5, 11)


@dataclass(frozen=True)
class DivisibilityRow:
    cuboid: Cuboid
    # divisors -> edges they divide
    divides: tuple[tuple[int, tuple[int, ...]], ...]
    properties: tuple[tuple[str, bool], ...]

    def prop(self, name: str) -> bool:
        return dict(self.properties)[name]


PROPERTIES = ("16_and_other_4", "9_and_other_3", "some_5", "some_11", "same_edge_55")


def _pair_property(edges: tuple[int, ...], big: int, small: int) -> bool:
    return any(
        edges[i] % big == 0 and edges[j] % small == 0
        for i in range(3) for j in range(3) if i != j
    )


def divisibility_row(cuboid: Cuboid) -> DivisibilityRow:
    e = cuboid.canonical().edges
    divides = tuple((d, tuple(x for x in e if x % d == 0)) for d in DIVISORS)
    props = (
        ("16_and_other_4", _pair_property(e, 16, 4)),
        ("9_and_other_3", _pair_property(e, 9, 3)),
        ("some_5", any(x % 5 == 0 for x in e)),
        ("some_11", any(x % 11 == 0 for x in e)),
        # the literal "one side divisible by both 5 and 11" reading
        ("same_edge_55", any(x % 55 == 0 for x in e)),
    )
    return DivisibilityRow(cuboid.canonical(), divides, props)


@dataclass
class DivisibilityProfile:
    rows: list[DivisibilityRow]
    excluded: list[Cuboid]

    @property
    def all_hold(self) -> dict[str, bool]:
        return {p: all(r.prop(p) for r in self.rows) for p in PROPERTIES}

    @property
    def findings(self) -> list[tuple[tuple[int, int, int], str]]:
        """Every (brick, property) pair where the property fails."""
        return [(r.cuboid.edges, p) for r in self.rows for p in PROPERTIES if not r.prop(p)]

    def to_dict(self) -> dict:
        return {
            "rows": [
                {
                    "edges": list(r.cuboid.edges),
                    "divides": {str(d): list(es) for d, es in r.divides},
                    "properties": dict(r.properties),
                }
                for r in self.rows
            ],
            "all_hold": self.all_hold,
            "findings": [[list(e), p] for e, p in self.findings],
            "excluded": [list(c.edges) for c in self.excluded],
        }


def divisibility_report(report: SearchReport | Iterable[Hit]) -> DivisibilityProfile:
    """Profile primitive Body/Perfect bricks; everything else is excluded."""
    hits = report.found if isinstance(report, SearchReport) else list(report)
    rows, excluded = [], []
    for h in sorted(hits, key=lambda h: h.sort_key):
        if h.cls in (CuboidClass.BODY, CuboidClass.PERFECT) and h.cuboid.is_primitive:
            rows.append(divisibility_row(h.cuboid))
        else:
            excluded.append(h.cuboid)
    return DivisibilityProfile(rows, excluded)
