"""Generators and parametrizations around Euler bricks and perfect cuboids.

Covers the four-parameter Pythagorean quadruple identity and the three extra
square conditions a perfect cuboid would impose on it, the shared-leg
representation of two triples with a common leg (both directions), the
Saunderson brick formula and the Lal-Blundon two-diagonal family.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .arith import checked, exact_sqrt, gcd, is_perfect_square, square
from .cuboid import Cuboid, CuboidClass, DiagonalReport, class_of_report, diagonal_report


class ParameterError(ValueError):
    """Parameters fall outside an operation's domain."""


class ParityError(ParameterError):
    """Shared-leg parameters that would give half-integer legs."""


class NonPositiveLegError(ParameterError):
    """The shared leg's square comes out zero or negative."""


class DivisibilityError(ParameterError):
    """Shared-leg inversion hit a non-integral n1 or n2."""


# -- quadruples -------------------------------------------------------------


@dataclass(frozen=True)
class QuadrupleParams:
    m: int
    n: int
    p: int
    q: int

    def __post_init__(self) -> None:
        if min(self.m, self.n, self.p, self.q) < 0:
            raise ParameterError(f"quadruple parameters must be >= 0: {self}")

    @property
    def sum_mn(self) -> int:
        return self.m * self.m + self.n * self.n

    @property
    def sum_pq(self) -> int:
        return self.p * self.p + self.q * self.q

    @property
    def cross_plus(self) -> int:
        """mp + nq"""
        return self.m * self.p + self.n * self.q

    @property
    def cross_minus(self) -> int:
        """mq - np, signed."""
        return self.m * self.q - self.n * self.p


@dataclass(frozen=True)
class PythagoreanQuadruple:
    w: int
    x: int
    y: int
    z: int

    def __post_init__(self) -> None:
        if self.w * self.w + self.x * self.x + self.y * self.y != self.z * self.z:
            raise ValueError(f"not a Pythagorean quadruple: {self}")

    @property
    def degenerate(self) -> bool:
        return 0 in (self.w, self.x, self.y)

    @property
    def primitive(self) -> bool:
        return math.gcd(self.w, self.x, self.y, self.z) == 1

    def sorted_legs(self) -> tuple[int, int, int, int]:
        w, x, y = sorted((self.w, self.x, self.y))
        return (w, x, y, self.z)


def quadruple_from_params(params: QuadrupleParams) -> PythagoreanQuadruple:
    m, n, p, q = params.m, params.n, params.p, params.q
    if m == n == p == q == 0:
        raise ParameterError("all quadruple parameters are zero")
    return PythagoreanQuadruple(
        w=abs(checked(params.sum_mn - params.sum_pq)),
        x=checked(2 * params.cross_plus),
        y=checked(2 * abs(params.cross_minus)),
        z=checked(params.sum_mn + params.sum_pq),
    )


@dataclass(frozen=True)
class PerfectConditions:
    """The three extra square tests; roots are ``None`` when not square."""

    params: QuadrupleParams
    xy_sum: int
    wx_sum: int
    wy_sum: int
    A: int | None
    B: int | None
    C: int | None
    degenerate: bool

    @property
    def flags(self) -> tuple[bool, bool, bool]:
        return (self.A is not None, self.B is not None, self.C is not None)

    @property
    def all_hold(self) -> bool:
        return all(self.flags)


def perfect_conditions(params: QuadrupleParams) -> PerfectConditions:
    quad = quadruple_from_params(params)
    w2, x2, y2 = square(quad.w), square(quad.x), square(quad.y)
    xy, wx, wy = checked(x2 + y2), checked(w2 + x2), checked(w2 + y2)
    return PerfectConditions(
        params=params,
        xy_sum=xy,
        wx_sum=wx,
        wy_sum=wy,
        A=exact_sqrt(xy),
        B=exact_sqrt(wx),
        C=exact_sqrt(wy),
        degenerate=quad.degenerate,
    )


# -- shared leg -------------------------------------------------------------


@dataclass(frozen=True)
class SharedLegParams:
    m1: int
    m2: int
    n1: int
    n2: int

    def __post_init__(self) -> None:
        if min(self.m1, self.m2, self.n1, self.n2) < 1:
            raise ParameterError(f"shared-leg parameters must be >= 1: {self}")

    @property
    def parity_ok(self) -> bool:
        return (self.m1 * self.n1 - self.m2 * self.n2) % 2 == 0 and (
            self.m2 * self.n1 - self.m1 * self.n2
        ) % 2 == 0


@dataclass(frozen=True)
class SharedLegTriplePair:
    """``a_squared + b^2 == d^2`` and ``a_squared + c^2 == e^2``.

    ``c`` and ``e`` are stored as magnitudes; ``c_flipped``/``e_flipped``
    record that the raw formula gave a negative value.
    """

    a_squared: int
    b: int
    c: int
    d: int
    e: int
    c_flipped: bool = False
    e_flipped: bool = False

    def __post_init__(self) -> None:
        if self.a_squared + self.b * self.b != self.d * self.d:
            raise ValueError(f"a^2 + b^2 != d^2 in {self}")
        if self.a_squared + self.c * self.c != self.e * self.e:
            raise ValueError(f"a^2 + c^2 != e^2 in {self}")

    @property
    def a(self) -> int | None:
        """Integer shared leg, if ``a_squared`` is a perfect square."""
        return exact_sqrt(self.a_squared)

    @property
    def a_is_square(self) -> bool:
        return is_perfect_square(self.a_squared)

    @property
    def degenerate(self) -> bool:
        return self.c == 0 or self.e == 0

    @property
    def zero_components(self) -> list[str]:
        names = ("a_squared", "b", "c", "d", "e")
        return [n for n in names if getattr(self, n) == 0]


def shared_leg_forward(params: SharedLegParams) -> SharedLegTriplePair:
    """Two triples sharing the leg ``a`` from ``(m1, m2, n1, n2)``.

    Sign convention: ``c`` and ``e`` are taken in magnitude. Parameters with
    ``m2*n2 < m1*n1`` or ``m1*n2 < m2*n1`` are accepted and flagged, because
    the degenerate substitution families used by the lemmas land there.
    """
    m1, m2, n1, n2 = params.m1, params.m2, params.n1, params.n2
    if not params.parity_ok:
        raise ParityError(
            f"{params}: need m1*n1 = m2*n2 and m2*n1 = m1*n2 (mod 2) for integer legs"
        )
    num = checked((m2 * m2 - m1 * m1) * (n1 * n1 - n2 * n2), "(m2^2-m1^2)(n1^2-n2^2)")
    if num <= 0:
        raise NonPositiveLegError(f"{params}: a^2 = {num}/4 is not positive")
    if num % 4:
        raise ParityError(f"{params}: a^2 = {num}/4 is not an integer")
    c_raw = m2 * n2 - m1 * n1
    e_raw = m1 * n2 - m2 * n1
    return SharedLegTriplePair(
        a_squared=num // 4,
        b=(m1 * n1 + m2 * n2) // 2,
        c=abs(c_raw) // 2,
        d=(m2 * n1 + m1 * n2) // 2,
        e=abs(e_raw) // 2,
        c_flipped=c_raw < 0,
        e_flipped=e_raw < 0,
    )


def shared_leg_inverse(b: int, c: int, d: int, e: int) -> SharedLegParams:
    """Recover ``(m1, m2, n1, n2)`` from the legs and hypotenuses.

    ``m1/m2`` is ``(b - c)/(d - e)`` in lowest terms. The divisibility of
    ``d - e`` by ``m2`` and ``d + e`` by ``m1`` is checked, not assumed.
    """
    if min(b, c, d, e) < 1:
        raise ParameterError(f"legs must be positive: {(b, c, d, e)}")
    if not (b > c and d > e):
        raise ParameterError(f"need b > c and d > e, got {(b, c, d, e)}")
    if b * b - c * c != d * d - e * e:
        raise ParameterError(
            f"b^2 - c^2 = {b * b - c * c} differs from d^2 - e^2 = {d * d - e * e}"
        )
    g = gcd(b - c, d - e)
    m1, m2 = (b - c) // g, (d - e) // g
    if (d - e) % m2 or (d + e) % m1:
        raise DivisibilityError(
            f"{(b, c, d, e)}: m1/m2 = {m1}/{m2} but d-e = {d - e}, d+e = {d + e}"
        )
    params = SharedLegParams(m1, m2, (d - e) // m2, (d + e) // m1)
    pair = shared_leg_forward(params)
    if (pair.b, pair.c, pair.d, pair.e) != (b, c, d, e):
        raise DivisibilityError(f"{(b, c, d, e)}: recovered {params} does not reproduce input")
    return params


# -- Saunderson --------------------------------------------------------------


class SaundersonVariant(enum.Enum):
    AS_PRINTED = "as-printed"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class GeneratedCuboid:
    cuboid: Cuboid
    report: DiagonalReport
    cls: CuboidClass
    params: tuple[tuple[str, int], ...] = field(default=())


def _generated(cuboid: Cuboid, params: tuple[tuple[str, int], ...]) -> GeneratedCuboid:
    report = diagonal_report(cuboid)
    return GeneratedCuboid(report.cuboid, report, class_of_report(report), params)


def _check_triple(x: int, y: int, z: int) -> None:
    if min(x, y, z) < 1 or x * x + y * y != z * z:
        raise ParameterError(f"({x}, {y}, {z}) is not a Pythagorean triple")


def saunderson(
    x: int, y: int, z: int, variant: SaundersonVariant = SaundersonVariant.CLASSICAL
) -> GeneratedCuboid:
    _check_triple(x, y, z)
    first = abs(x * (4 * y * y - z * z))
    if variant is SaundersonVariant.AS_PRINTED:
        second = abs(y * (x * x - z * z))
    else:
        second = abs(y * (4 * x * x - z * z))
    third = 4 * x * y * z
    if first == 0 or second == 0:
        raise ParameterError(f"Saunderson on ({x}, {y}, {z}) gives a zero edge")
    return _generated(Cuboid.of(first, second, third), (("x", x), ("y", y), ("z", z)))


@dataclass(frozen=True)
class SaundersonAudit:
    triple: tuple[int, int, int]
    classical: GeneratedCuboid
    as_printed: GeneratedCuboid

    @property
    def discrepancy(self) -> bool:
        return self.classical.cls != self.as_printed.cls

    @property
    def failing_faces(self) -> list[tuple[str, int, int, int]]:
        """Failing face diagonals of the as-printed brick as (name, u, v, u^2+v^2)."""
        k = self.as_printed.cuboid
        pairs = {"d_ab": (k.a, k.b), "d_bc": (k.b, k.c), "d_ac": (k.a, k.c)}
        out = []
        for name in self.as_printed.report.failing_faces:
            u, v = pairs[name]
            out.append((name, u, v, u * u + v * v))
        return out

    def describe(self) -> str:
        lines = [
            f"triple {self.triple}",
            f"classical  -> {self.classical.cuboid.edges} {self.classical.cls.label}",
            f"as-printed -> {self.as_printed.cuboid.edges} {self.as_printed.cls.label}",
        ]
        for name, u, v, s in self.failing_faces:
            r = math.isqrt(s)
            lines.append(
                f"  as-printed face {name}: {u}^2+{v}^2 = {s}, "
                f"not a square ({r}^2 = {r * r} < {s} < {(r + 1) ** 2} = {r + 1}^2)"
            )
        return "\n".join(lines)


def saunderson_audit(x: int, y: int, z: int) -> SaundersonAudit:
    return SaundersonAudit(
        triple=(x, y, z),
        classical=saunderson(x, y, z, SaundersonVariant.CLASSICAL),
        as_printed=saunderson(x, y, z, SaundersonVariant.AS_PRINTED),
    )


# -- Lal-Blundon -------------------------------------------------------------


@dataclass(frozen=True)
class LalBlundonCuboid:
    """Edges ``x, y, z`` in generator order with their two certified diagonals."""

    m: int
    n: int
    p: int
    q: int
    x: int
    y: int
    z: int
    diag_xy: int
    diag_xz: int
    yz_root: int | None

    @property
    def certified(self) -> bool:
        return (
            self.x**2 + self.y**2 == self.diag_xy**2
            and self.x**2 + self.z**2 == self.diag_xz**2
        )

    @property
    def is_body(self) -> bool:
        return self.yz_root is not None

    @property
    def cuboid(self) -> Cuboid:
        return Cuboid.of(self.x, self.y, self.z)


def lal_blundon(m: int, n: int, p: int, q: int) -> LalBlundonCuboid:
    if min(m, n, p, q) < 1:
        raise ParameterError(f"Lal-Blundon parameters must be >= 1: {(m, n, p, q)}")
    if m == n or p == q:
        raise ParameterError(f"Lal-Blundon needs m != n and p != q: {(m, n, p, q)}")
    x = checked(2 * m * n * p * q)
    y = checked(m * n * abs(p * p - q * q))
    z = checked(p * q * abs(m * m - n * n))
    return LalBlundonCuboid(
        m, n, p, q, x, y, z,
        diag_xy=m * n * (p * p + q * q),
        diag_xz=p * q * (m * m + n * n),
        yz_root=exact_sqrt(checked(square(y) + square(z))),
    )
