"""Base-b digit decompositions and digit-counting primitives.

Integers are represented sparsely: only the nonzero digits are stored, as
(exponent, digit) pairs with strictly increasing exponents.  All functions
work with arbitrary-precision integers.
"""

import math
from dataclasses import dataclass
from itertools import groupby

__all__ = [
    "DigitExpansion",
    "decompose",
    "recompose",
    "nz_count",
    "block_count",
    "condition_3_2",
]

# Relative window inside which a floating-point comparison is treated as a
# tie (a few units of double rounding).
_TIE_REL = 1e-12


@dataclass(frozen=True)
class DigitExpansion:
    """Sparse positional representation: value = sum(d * base**e)."""

    base: int
    terms: tuple[tuple[int, int], ...]  # (exponent, digit), exponents increasing

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if not self.terms:
            raise ValueError("expansion of a positive integer has at least one term")
        prev = -1
        for exp, dig in self.terms:
            if exp <= prev:
                raise ValueError("exponents must be strictly increasing")
            if not 1 <= dig < self.base:
                raise ValueError(f"digit {dig} out of range for base {self.base}")
            prev = exp

    @property
    def k(self) -> int:
        """Number of nonzero digits."""
        return len(self.terms)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.terms)

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.terms)

    @property
    def top_exponent(self) -> int:
        return self.terms[-1][0]

    def value(self) -> int:
        return recompose(self)


def decompose(n: int, base: int) -> DigitExpansion:
    """Sparse base-`base` expansion of a positive integer.

    Rejects n = 0: an empty expansion has no canonical meaning here, and
    every quantity downstream assumes positivity.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    terms = []
    exp = 0
    while n:
        n, d = divmod(n, base)
        if d:
            terms.append((exp, d))
        exp += 1
    return DigitExpansion(base=base, terms=tuple(terms))


def recompose(e: DigitExpansion) -> int:
    """Evaluate an expansion back to the integer it represents."""
    return sum(d * e.base**exp for exp, d in e.terms)


def nz_count(n: int, base: int) -> int:
    """Number of nonzero digits of n in base `base`."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    count = 0
    while n:
        n, d = divmod(n, base)
        if d:
            count += 1
    return count


def block_count(n: int, base: int) -> int:
    """Number of maximal runs of equal digits in the full digit string of n.

    Zeros count as digits: 11 in base 2 is "1011", i.e. runs "1", "0", "11",
    so block_count(11, 2) == 3.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    digits = []
    while n:
        n, d = divmod(n, base)
        digits.append(d)
    # Run count is direction-independent; no need to reverse.
    return sum(1 for _ in groupby(digits))


def condition_3_2(n: int, base: int, k: int) -> bool:
    """Size gate: log n >= 2*(log b)*(8 log b / log 2)**k.

    Evaluated in double precision with a conservative tie rule: comparisons
    landing within a relative window of one rounding unit return False.  The
    gate only selects which estimates apply, so a conservative answer is
    always safe.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    lb = math.log(base)
    lhs = math.log(n)
    rhs = 2.0 * lb * (8.0 * lb / math.log(2)) ** k
    if math.isclose(lhs, rhs, rel_tol=_TIE_REL):
        return False
    return lhs > rhs
