"""Mechanical audit of the square-free-part case analysis.

A quadruple ``(m, n, p, q)`` meets the lemma hypotheses when ``m^2+n^2`` and
``p^2+q^2`` share their square-free part ``r``::

    m^2 + n^2 = k1^2 r,    p^2 + q^2 = k2^2 r

Then ``(mp+nq)^2 + (mq-np)^2 = (r k1 k2)^2`` and the argument splits on
``mp+nq = r k1 k2`` (case I) or ``|mq-np| = r k1 k2`` (case II). The special
lemmas with ``r = 1``, ``k1 = 1`` or ``k2 = 1`` are the same classifier with
one symbol pinned, so they are not implemented separately.

Quadruples that meet the hypotheses but fall in neither case are reported as
NOT_COVERED. They are the whole point of the scan.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arith import SquareDecomposition, is_perfect_square, square_free_decompose
from .params import (
    ParameterError,
    PythagoreanQuadruple,
    QuadrupleParams,
    SharedLegParams,
    SharedLegTriplePair,
    quadruple_from_params,
    shared_leg_forward,
)


class LemmaCase(enum.Enum):
    CASE_I = "case-i"
    CASE_II = "case-ii"
    CASE_III_DEGENERATE = "case-iii-degenerate"
    NOT_COVERED = "not-covered"
    NOT_APPLICABLE = "not-applicable"


class Specialization(enum.Enum):
    """Which flavour of the hypothesis a quadruple hits."""

    BOTH_SQUARE = "r=1"
    K1_ONE = "k1=1"
    K2_ONE = "k2=1"
    GENERAL = "general"
    NONE = "none"


@dataclass(frozen=True)
class LemmaCaseRecord:
    params: QuadrupleParams
    decomp_mn: SquareDecomposition
    decomp_pq: SquareDecomposition
    shared_r: bool
    A_integral: bool
    case: LemmaCase
    # Only meaningful for CASE_I / CASE_II: did the lemma's consequent hold?
    consequent_holds: bool | None = None
    specializations: tuple[Specialization, ...] = ()

    @property
    def r(self) -> int | None:
        return self.decomp_mn.r if self.shared_r else None

    @property
    def target(self) -> int | None:
        """``r k1 k2`` when the hypotheses hold."""
        if not self.shared_r:
            return None
        return self.decomp_mn.r * self.decomp_mn.k * self.decomp_pq.k

    @property
    def equal_sums(self) -> bool:
        return self.params.sum_mn == self.params.sum_pq


def _specializations(mn: SquareDecomposition, pq: SquareDecomposition) -> tuple[Specialization, ...]:
    out = []
    if mn.r == 1:
        out.append(Specialization.BOTH_SQUARE)
    if mn.k == 1:
        out.append(Specialization.K1_ONE)
    if pq.k == 1:
        out.append(Specialization.K2_ONE)
    return tuple(out) or (Specialization.GENERAL,)


def classify_lemma_case(params: QuadrupleParams) -> LemmaCaseRecord:
    if min(params.m, params.n, params.p, params.q) < 1:
        raise ParameterError(f"lemma audit needs m, n, p, q >= 1: {params}")
    mn = square_free_decompose(params.sum_mn)
    pq = square_free_decompose(params.sum_pq)
    a_integral = is_perfect_square(4 * params.sum_mn * params.sum_pq)
    if mn.r != pq.r:
        return LemmaCaseRecord(params, mn, pq, False, a_integral, LemmaCase.NOT_APPLICABLE,
                               specializations=(Specialization.NONE,))
    spec = _specializations(mn, pq)
    target = mn.r * mn.k * pq.k
    if params.cross_plus == target:
        return LemmaCaseRecord(params, mn, pq, True, a_integral, LemmaCase.CASE_I,
                               consequent_holds=params.cross_minus == 0,
                               specializations=spec)
    if abs(params.cross_minus) == target:
        return LemmaCaseRecord(params, mn, pq, True, a_integral, LemmaCase.CASE_II,
                               consequent_holds=params.cross_plus == 0,
                               specializations=spec)
    # A is always integral once r is shared; kept explicit so a broken
    # decomposition shows up here instead of as a bogus NOT_COVERED.
    case = LemmaCase.NOT_COVERED if a_integral else LemmaCase.NOT_APPLICABLE
    return LemmaCaseRecord(params, mn, pq, True, a_integral, case, specializations=spec)


@dataclass
class CoverageReport:
    bound: int
    counts: dict[str, int]
    not_covered: list[tuple[int, int, int, int]]
    # NOT_COVERED quadruples with m^2+n^2 = p^2+q^2 fall under the separate
    # equal-sums lemma; listed so the residue can be read off directly.
    not_covered_equal_sums: list[tuple[int, int, int, int]] = field(default_factory=list)
    case_i_consequent_failures: list[tuple[int, int, int, int]] = field(default_factory=list)
    case_ii_hits: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def residue(self) -> list[tuple[int, int, int, int]]:
        """NOT_COVERED quadruples that no lemma addresses at all."""
        eq = set(self.not_covered_equal_sums)
        return [t for t in self.not_covered if t not in eq]

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "total": self.total,
            "counts": dict(sorted(self.counts.items())),
            "not_covered": [list(t) for t in self.not_covered],
            "not_covered_equal_sums": [list(t) for t in self.not_covered_equal_sums],
            "case_i_consequent_failures": [list(t) for t in self.case_i_consequent_failures],
            "case_ii_hits": [list(t) for t in self.case_ii_hits],
        }


def _scan_block(bound: int, m: int) -> tuple[Counter, list, list, list, list]:
    counts: Counter = Counter()
    nc, nc_eq, fail_i, hits_ii = [], [], [], []
    for n, p, q in itertools.product(range(1, bound + 1), repeat=3):
        t = (m, n, p, q)
        rec = classify_lemma_case(QuadrupleParams(*t))
        counts[rec.case.value] += 1
        if rec.case is LemmaCase.NOT_COVERED:
            nc.append(t)
            if rec.equal_sums:
                nc_eq.append(t)
        elif rec.case is LemmaCase.CASE_I and not rec.consequent_holds:
            fail_i.append(t)
        elif rec.case is LemmaCase.CASE_II:
            hits_ii.append(t)
    return counts, nc, nc_eq, fail_i, hits_ii


def scan_case_coverage(bound: int, workers: int = 1) -> CoverageReport:
    """Classify every quadruple in ``[1, bound]^4``; lists come out lexicographic."""
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    ms = range(1, bound + 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_scan_block, [bound] * bound, ms))
    else:
        blocks = [_scan_block(bound, m) for m in ms]
    counts: Counter = Counter({c.value: 0 for c in LemmaCase})
    report = CoverageReport(bound=bound, counts={}, not_covered=[])
    # Blocks are in m order and each block is lexicographic in (n, p, q).
    for c, nc, nc_eq, fail_i, hits_ii in blocks:
        counts.update(c)
        report.not_covered.extend(nc)
        report.not_covered_equal_sums.extend(nc_eq)
        report.case_i_consequent_failures.extend(fail_i)
        report.case_ii_hits.extend(hits_ii)
    report.counts = dict(counts)
    return report


# -- degenerate substitutions -------------------------------------------------


class SubstitutionFamily(enum.Enum):
    GENERAL = "general"  # (k1, k2, 2 r k2, 2 r k1)
    BOTH_SQUARE = "both-square"  # (k1, k2, 2 k2, 2 k1)
    K1_ONE = "k1-one"  # (k2, 1, 2 r, 2 r k2)
    K2_ONE = "k2-one"  # (1, k1, 2 r k1, 2 r)
    SCALED_M = "scaled-m"  # (r k1, r k2, 2 k2, 2 k1)


def substitution_params(family: SubstitutionFamily, k1: int, k2: int, r: int) -> SharedLegParams:
    """Shared-leg parameters for one of the lemmas' degenerate substitutions.

    ``K1_ONE`` takes its free square root in ``k2`` and ``K2_ONE`` in ``k1``;
    the other argument is ignored.
    """
    if family is SubstitutionFamily.GENERAL:
        return SharedLegParams(k1, k2, 2 * r * k2, 2 * r * k1)
    if family is SubstitutionFamily.BOTH_SQUARE:
        return SharedLegParams(k1, k2, 2 * k2, 2 * k1)
    if family is SubstitutionFamily.K1_ONE:
        return SharedLegParams(k2, 1, 2 * r, 2 * r * k2)
    if family is SubstitutionFamily.K2_ONE:
        return SharedLegParams(1, k1, 2 * r * k1, 2 * r)
    return SharedLegParams(r * k1, r * k2, 2 * k2, 2 * k1)


def expected_substitution(family: SubstitutionFamily, k1: int, k2: int, r: int) -> tuple[int, int]:
    """Closed forms ``(a^2, b)`` the lemmas state for each family (``c = 0``)."""
    if family is SubstitutionFamily.BOTH_SQUARE:
        return (k2 * k2 - k1 * k1) ** 2, 2 * k1 * k2
    if family is SubstitutionFamily.K1_ONE:
        return r * r * (1 - k2 * k2) ** 2, 2 * r * k2
    if family is SubstitutionFamily.K2_ONE:
        return r * r * (k1 * k1 - 1) ** 2, 2 * r * k1
    return r * r * (k2 * k2 - k1 * k1) ** 2, 2 * r * k1 * k2


@dataclass(frozen=True)
class SubstitutionReport:
    params: SharedLegParams
    pair: SharedLegTriplePair
    zero_components: tuple[str, ...]
    case: LemmaCase

    @property
    def c_vanishes(self) -> bool:
        return self.pair.c == 0


def audit_substitution(params: SharedLegParams) -> SubstitutionReport:
    pair = shared_leg_forward(params)
    zeros = tuple(pair.zero_components)
    case = LemmaCase.CASE_III_DEGENERATE if zeros else LemmaCase.NOT_APPLICABLE
    return SubstitutionReport(params, pair, zeros, case)


@dataclass(frozen=True)
class EqualSumsReport:
    params: QuadrupleParams
    quadruple: PythagoreanQuadruple
    first_component: int
    cross_minus: int
    wx_sum: int
    wx_root: int

    @property
    def degenerate(self) -> bool:
        return self.quadruple.degenerate


def audit_equal_sums(m: int, n: int, p: int, q: int) -> EqualSumsReport:
    params = QuadrupleParams(m, n, p, q)
    if min(m, n, p, q) < 1:
        raise ParameterError(f"equal-sums audit needs positive parameters: {params}")
    if params.sum_mn != params.sum_pq:
        raise ParameterError(
            f"m^2+n^2 = {params.sum_mn} differs from p^2+q^2 = {params.sum_pq}"
        )
    quad = quadruple_from_params(params)
    wx = quad.w * quad.w + quad.x * quad.x
    return EqualSumsReport(
        params=params,
        quadruple=quad,
        first_component=params.sum_mn - params.sum_pq,
        cross_minus=params.cross_minus,
        wx_sum=wx,
        wx_root=2 * params.cross_plus,
    )
