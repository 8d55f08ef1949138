"""Exact-integer tools for Euler bricks and perfect cuboid candidates."""

__version__ = "0.1.0"

from .arith import (
    ArithmeticOverflowError,
    SquareDecomposition,
    gcd,
    is_perfect_square,
    isqrt,
    square_free_decompose,
)
from .cuboid import Cuboid, CuboidClass, DiagonalReport, classify, diagonal_report, primitive_reduce

__all__ = [
    "ArithmeticOverflowError",
    "Cuboid",
    "CuboidClass",
    "DiagonalReport",
    "SquareDecomposition",
    "classify",
    "diagonal_report",
    "gcd",
    "is_perfect_square",
    "isqrt",
    "primitive_reduce",
    "square_free_decompose",
]
