"""Exact integer primitives.

Python integers never wrap, so the overflow contract is enforced explicitly:
every intermediate that the cuboid code squares or sums goes through
:func:`checked`, which refuses values outside the 128-bit window instead of
letting a desk-scale search quietly wander into huge numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

WORD_BITS = 128
WORD_LIMIT = 1 << WORD_BITS


class ArithmeticOverflowError(OverflowError):
    """An intermediate left the 128-bit arithmetic contract."""


def checked(value: int, what: str = "value") -> int:
    if -WORD_LIMIT < value < WORD_LIMIT:
        return value
    raise ArithmeticOverflowError(
        f"{what} needs {abs(value).bit_length()} bits, limit is {WORD_BITS}"
    )


def square(n: int) -> int:
    return checked(n * n, f"{n}^2")


def isqrt(n: int) -> int:
    """Floor square root: the unique ``s`` with ``s*s <= n < (s+1)**2``."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    s = math.isqrt(n)
    return s * s == n


def exact_sqrt(n: int) -> int | None:
    """Integer root of ``n`` if ``n`` is a perfect square, else ``None``."""
    if n < 0:
        return None
    s = math.isqrt(n)
    return s if s * s == n else None


def gcd(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError(f"gcd expects non-negative integers, got ({a}, {b})")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


@dataclass(frozen=True)
class SquareDecomposition:
    """``n == k*k * r`` with ``r`` square-free."""

    k: int
    r: int

    @property
    def value(self) -> int:
        return self.k * self.k * self.r


def _icbrt(n: int) -> int:
    # Integer Newton from an overestimate decreases monotonically to the floor.
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            return x
        x = y


def square_free_decompose(n: int) -> SquareDecomposition:
    """Split ``n`` into square part and square-free part.

    Trial division runs up to the cube root of ``n``. Whatever remains has
    at most two prime factors, all above the cube root, so it is either
    square-free or the square of a single prime.
    """
    if n < 1:
        raise ValueError(f"square_free_decompose needs n >= 1, got {n}")
    k, r = 1, 1
    rest = n
    limit = _icbrt(n)
    p = 2
    while p <= limit and rest > 1:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                r *= p
        p += 1 if p == 2 else 2
    root = exact_sqrt(rest)
    if root is not None and rest > 1:
        k *= root
    else:
        r *= rest
    return SquareDecomposition(k, r)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale inputs only)."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors_of_square(n: int) -> list[int]:
    """Sorted divisors of ``n*n`` built from the factorization of ``n``."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(2 * e + 1)]
    return sorted(divs)
