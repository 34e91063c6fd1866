"""Ordered integer streams: sparse-digit sequences, power sums, smooth numbers.

Sparse streams are generated in rounds by top exponent m: every member with
top exponent m lies in [b**m, b**(m+1)), so sorting within a round gives
global order and rounds never interleave.  All streams are strictly
increasing, duplicate-free, and accept a max_value cutoff so that consumers
of finite-tail streams terminate.
"""

import math
from dataclasses import dataclass
from heapq import heappush, heappop
from itertools import combinations, islice, product
from typing import Callable, Iterator, Optional

from .digits import nz_count
from .factor import PrimeSet, _as_prime_set

__all__ = [
    "SparseSpec",
    "PowerSumSpec",
    "DigitBudget",
    "constant_budget",
    "loglog_budget",
    "sqrt_budget",
    "sparse_sequence",
    "sparse_sequence_f",
    "power_sum_sequence",
    "smooth_sequence",
    "take",
]


def take(stream: Iterator[int], n: int) -> list[int]:
    """First n emissions of a stream, as a list."""
    return list(islice(stream, n))


# ---------------------------------------------------------------------------
# digit-budget families (for the f-indexed sparse stream)


@dataclass(frozen=True)
class DigitBudget:
    """Named digit-budget function n -> allowed number of nonzero digits.

    delta0 is the supremum of admissible slack for the f-indexed prime
    factor threshold; None when the family grows too fast for that
    threshold to apply.
    """

    name: str
    fn: Callable[[int], float]
    delta0: Optional[float]
    monotone: bool = True

    def __call__(self, n: int) -> float:
        return self.fn(n)


def constant_budget(c: float) -> DigitBudget:
    if c < 1:
        raise ValueError("digit budget must be >= 1")
    return DigitBudget(name=f"const:{c:g}", fn=lambda n: float(c), delta0=1.0)


def loglog_budget(c: float) -> DigitBudget:
    """f(n) = max(1, c*loglog n).  Grows faster than loglog/logloglog, so
    the f-indexed threshold does not apply (delta0 is None)."""
    if c <= 0:
        raise ValueError("scale must be positive")

    def fn(n: int) -> float:
        if n < 16:
            return 1.0
        return max(1.0, c * math.log(math.log(n)))

    return DigitBudget(name=f"loglog:{c:g}", fn=fn, delta0=None)


def sqrt_budget(c: float) -> DigitBudget:
    """f(n) = max(1, c*sqrt(loglog n * logloglog n / loglogloglog n))."""
    if c <= 0:
        raise ValueError("scale must be positive")

    def fn(n: int) -> float:
        if n <= 3814280:  # below this the inner iterated log is <= 0
            return 1.0
        l2 = math.log(math.log(n))
        l3 = math.log(l2)
        l4 = math.log(l3)
        if l4 <= 0:
            return 1.0
        return max(1.0, c * math.sqrt(l2 * l3 / l4))

    return DigitBudget(name=f"sqrtll:{c:g}", fn=fn, delta0=1.0)


BUDGET_FAMILIES = {
    "const": constant_budget,
    "loglog": loglog_budget,
    "sqrtll": sqrt_budget,
}


def parse_budget_spec(spec: str) -> DigitBudget:
    """Parse "family:param", e.g. "const:3" or "sqrtll:0.5"."""
    name, _, arg = spec.partition(":")
    if name not in BUDGET_FAMILIES:
        raise ValueError(
            f"unknown digit-budget family {name!r}; choose from "
            f"{sorted(BUDGET_FAMILIES)}"
        )
    return BUDGET_FAMILIES[name](float(arg) if arg else 2.0)


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class SparseSpec:
    """Base plus digit allowance: a fixed count k >= 2 or a DigitBudget."""

    base: int
    k: Optional[int] = None
    budget: Optional[DigitBudget] = None

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if (self.k is None) == (self.budget is None):
            raise ValueError("exactly one of k and budget must be given")
        if self.k is not None and self.k < 2:
            raise ValueError(f"fixed digit count must be >= 2, got {self.k}")

    def stream(self, max_value: Optional[int] = None) -> Iterator[int]:
        if self.k is not None:
            return sparse_sequence(self.base, self.k, max_value=max_value)
        return sparse_sequence_f(
            self.base,
            self.budget,
            f_monotone=self.budget.monotone,
            max_value=max_value,
        )


@dataclass(frozen=True)
class PowerSumSpec:
    """Bases a_1..a_k for sums a_1**n_1 + ... + a_k**n_k + 1."""

    bases: tuple[int, ...]
    shared_divisor_check: bool = True

    def __post_init__(self):
        if len(self.bases) < 2:
            raise ValueError("need at least two bases")
        if any(a < 1 for a in self.bases):
            raise ValueError("bases must be positive")
        if self.shared_divisor_check and math.gcd(*self.bases) < 2:
            raise ValueError(
                f"bases {self.bases} have no common divisor >= 2"
            )

    def stream(self, max_value: Optional[int] = None) -> Iterator[int]:
        return power_sum_sequence(self, max_value=max_value)


# ---------------------------------------------------------------------------
# sparse streams


def _round_members(base: int, max_digits: int, m: int) -> list[int]:
    """All integers with top exponent m, lowest exponent 0, and at most
    max_digits nonzero digits, unsorted."""
    out = []
    top = base**m
    if max_digits < 2:
        return out
    # middle positions: choose t of the exponents 1..m-1
    for t in range(0, min(max_digits - 2, m - 1) + 1):
        for positions in combinations(range(1, m), t):
            powers = [base**e for e in positions]
            for digs in product(range(1, base), repeat=t + 2):
                # digs = (low digit, middle digits..., top digit)
                val = digs[0] + digs[-1] * top
                for w, d in zip(powers, digs[1:-1]):
                    val += d * w
                out.append(val)
    return out


def sparse_sequence(
    base: int, k: int, *, max_value: Optional[int] = None
) -> Iterator[int]:
    """Increasing stream of integers not divisible by `base` with at most k
    nonzero digits in base `base`.  Arguments are validated eagerly, before
    the first emission is requested."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return _sparse_gen(base, k, max_value)


def _sparse_gen(base, k, max_value):
    for d in range(1, base):
        if max_value is not None and d > max_value:
            return
        yield d
    m = 1
    while True:
        if max_value is not None and base**m > max_value:
            return
        for v in sorted(_round_members(base, k, m)):
            if max_value is not None and v > max_value:
                return
            yield v
        m += 1


def sparse_sequence_f(
    base: int,
    f: Callable[[int], float],
    *,
    digit_cap: Optional[int] = None,
    f_monotone: bool = True,
    max_value: Optional[int] = None,
) -> Iterator[int]:
    """Increasing stream of n (not divisible by `base`) with
    nz_count(n, base) <= f(n).

    Candidates for the round [b**m, b**(m+1)) are generated with up to
    ceil(sup f) nonzero digits, where the sup over the round is read off the
    top of the round when f is monotone and must be supplied as digit_cap
    otherwise; each candidate is then filtered through f at its own value.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if not f_monotone and digit_cap is None:
        raise ValueError("non-monotone budgets need an explicit digit_cap")
    return _sparse_f_gen(base, f, digit_cap, f_monotone, max_value)


def _sparse_f_gen(base, f, digit_cap, f_monotone, max_value):
    for d in range(1, base):
        if max_value is not None and d > max_value:
            return
        if nz_count(d, base) <= f(d):
            yield d
    m = 1
    while True:
        if max_value is not None and base**m > max_value:
            return
        if f_monotone:
            cap = math.ceil(f(base ** (m + 1) - 1))
        else:
            cap = digit_cap
        if digit_cap is not None:
            cap = min(cap, digit_cap)
        for v in sorted(_round_members(base, cap, m)):
            if max_value is not None and v > max_value:
                return
            if nz_count(v, base) <= f(v):
                yield v
        m += 1


# ---------------------------------------------------------------------------
# power sums


def power_sum_sequence(
    spec: PowerSumSpec, *, max_value: Optional[int] = None
) -> Iterator[int]:
    """Increasing stream of distinct values a_1**n_1 + ... + a_k**n_k + 1
    over exponent tuples with every n_i >= 1.

    Heap-ordered by value; a value is emitted once every exponent tuple that
    could reach it has been expanded, then equal values are collapsed.
    """
    if not isinstance(spec, PowerSumSpec):
        spec = PowerSumSpec(bases=tuple(spec))
    return _power_sum_gen(spec.bases, max_value)


def _power_sum_gen(bases, max_value):
    k = len(bases)

    def value(tup):
        return sum(a**e for a, e in zip(bases, tup)) + 1

    start = (1,) * k
    heap = [(value(start), start)]
    seen = {start}
    last = None
    while heap:
        v, tup = heappop(heap)
        if max_value is not None and v > max_value:
            return
        if v != last:
            yield v
            last = v
        for i in range(k):
            succ = tup[:i] + (tup[i] + 1,) + tup[i + 1 :]
            if succ not in seen:
                seen.add(succ)
                heappush(heap, (value(succ), succ))


# ---------------------------------------------------------------------------
# smooth numbers


def smooth_sequence(primes, limit: int) -> Iterator[int]:
    """All products of the given primes (including the empty product 1) up
    to `limit`, in increasing order, each exactly once."""
    ps = _as_prime_set(primes).primes
    return _smooth_gen(ps, limit)


def _smooth_gen(ps, limit):
    if limit < 1:
        return
    # (value, index of the largest prime used): multiplying only by primes
    # at or after that index builds each smooth number exactly once.
    heap = [(1, 0)]
    while heap:
        v, i = heappop(heap)
        yield v
        for j in range(i, len(ps)):
            nv = v * ps[j]
            if nv <= limit:
                heappush(heap, (nv, j))
