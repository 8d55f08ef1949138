"""Cuboid data model: diagonals, classification, primitive reduction."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .arith import checked, exact_sqrt, square

# Leech: the product of the edges and face diagonals of any perfect cuboid is a
# multiple of this. Documentation only; there is no perfect cuboid to test it on.
LEECH_PRODUCT_DIVISOR = 2**8 * 3**4 * 5**3 * 7 * 11 * 13 * 17 * 19 * 29 * 37


class CuboidClass(enum.Enum):
    NONE_INTEGRAL = "none-integral"
    ONE_DIAG = "one-diag"
    TWO_DIAG = "two-diag"
    BODY = "body"
    # An edge cuboid has one irrational edge; with integer edges as input this
    # label is never produced by classify().
    EDGE = "edge"
    FACE = "face"
    PERFECT = "perfect"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> CuboidClass:
        return cls(label)


@dataclass(frozen=True, order=True)
class Cuboid:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"edge {name} must be an int, got {v!r}")
            if v < 1:
                raise ValueError(f"edge {name} must be >= 1, got {v}")

    @classmethod
    def of(cls, *edges: int) -> Cuboid:
        """Build the canonical (sorted) cuboid from three edges in any order."""
        if len(edges) != 3:
            raise ValueError(f"a cuboid has three edges, got {len(edges)}")
        a, b, c = sorted(edges)
        return cls(a, b, c)

    def canonical(self) -> Cuboid:
        return Cuboid.of(self.a, self.b, self.c)

    @property
    def is_canonical(self) -> bool:
        return self.a <= self.b <= self.c

    @property
    def edges(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def scaled(self, t: int) -> Cuboid:
        return Cuboid(self.a * t, self.b * t, self.c * t)

    @property
    def edge_gcd(self) -> int:
        return math.gcd(self.a, self.b, self.c)

    @property
    def is_primitive(self) -> bool:
        return self.edge_gcd == 1


@dataclass(frozen=True)
class DiagonalReport:
    """Integer diagonals of a canonical cuboid; ``None`` marks non-integer."""

    cuboid: Cuboid
    d_ab: int | None
    d_bc: int | None
    d_ac: int | None
    g: int | None

    @property
    def face_count(self) -> int:
        return sum(d is not None for d in (self.d_ab, self.d_bc, self.d_ac))

    @property
    def failing_faces(self) -> list[str]:
        names = ("d_ab", "d_bc", "d_ac")
        return [n for n in names if getattr(self, n) is None]


def diagonal_report(cuboid: Cuboid) -> DiagonalReport:
    k = cuboid.canonical()
    a2, b2, c2 = square(k.a), square(k.b), square(k.c)
    return DiagonalReport(
        cuboid=k,
        d_ab=exact_sqrt(checked(a2 + b2, "a^2+b^2")),
        d_bc=exact_sqrt(checked(b2 + c2, "b^2+c^2")),
        d_ac=exact_sqrt(checked(a2 + c2, "a^2+c^2")),
        g=exact_sqrt(checked(a2 + b2 + c2, "a^2+b^2+c^2")),
    )


def class_of_report(report: DiagonalReport) -> CuboidClass:
    faces = report.face_count
    space = report.g is not None
    if faces == 3:
        return CuboidClass.PERFECT if space else CuboidClass.BODY
    if faces == 2:
        return CuboidClass.FACE if space else CuboidClass.TWO_DIAG
    if faces == 1:
        return CuboidClass.ONE_DIAG
    return CuboidClass.NONE_INTEGRAL


def classify(cuboid: Cuboid) -> CuboidClass:
    """Class by which face/space diagonals are integers.

    With fewer than two integer face diagonals the space diagonal does not
    change the label: (1, 2, 2) has g = 3 but is still NONE_INTEGRAL.
    """
    return class_of_report(diagonal_report(cuboid))


def primitive_reduce(cuboid: Cuboid) -> Cuboid:
    g = cuboid.edge_gcd
    k = cuboid.canonical()
    return Cuboid(k.a // g, k.b // g, k.c // g)
