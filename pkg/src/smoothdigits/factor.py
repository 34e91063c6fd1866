"""Arbitrary-precision factorization and factor-derived arithmetic.

The factoring strategy is trial division by a fixed table of small primes,
then repeated Brent-rho splitting with deterministic parameters.  Primality
testing is Miller-Rabin: deterministic below 3.3e24 (classical 12-base
certificate), and with a fixed 25-prime basis above that, so results are
reproducible run to run.  Splitting effort is bounded by an explicit budget;
when it runs out the unsplit composite is reported honestly as a cofactor
instead of being guessed at.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import count

from . import _fastfactor

__all__ = [
    "IncompleteFactorizationError",
    "PrimeSet",
    "Factorization",
    "DEFAULT_BUDGET",
    "is_prime",
    "primes_up_to",
    "prime_stream",
    "factorize",
    "greatest_prime_factor",
    "omega",
    "radical",
    "s_part",
    "is_smooth",
    "is_s_unit",
    "p_adic_valuation",
    "smallest_prime_factor",
]


class IncompleteFactorizationError(RuntimeError):
    """Raised when an operation needs a complete factorization but the
    splitting budget left a composite cofactor."""


# ---------------------------------------------------------------------------
# primality


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit by a byte sieve."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray((limit - p * p) // p + 1)
    return [i for i, flag in enumerate(sieve) if flag]


def prime_stream():
    """Unbounded generator of primes in increasing order."""
    yield 2
    known = [2]
    n = 3
    while True:
        for k in known:
            if k * k > n:
                known.append(n)
                yield n
                break
            if n % k == 0:
                break
        n += 2


_SMALL_PRIMES = tuple(primes_up_to(1000))

# (limit, bases): Miller-Rabin is deterministic below each limit with the
# given bases.  The final tier (3.3e24) uses the first 12 primes.
_MR_TIERS = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (3_215_031_751, (2, 3, 5, 7)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318_665_857_834_031_151_167_461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)),
    (3_317_044_064_679_887_385_961_981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)
# Above the last deterministic tier: fixed 25-prime basis (error probability
# below 4**-25 per composite; fixed so that runs stay deterministic).
_MR_FALLBACK_BASES = tuple(primes_up_to(100))


def _miller_rabin(n: int, bases) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == p:
            return True
        if n % p == 0:
            return False
    for limit, bases in _MR_TIERS:
        if n < limit:
            return _miller_rabin(n, bases)
    return _miller_rabin(n, _MR_FALLBACK_BASES)


def smallest_prime_factor(b: int) -> int:
    """Least prime dividing b (b >= 2)."""
    if b < 2:
        raise ValueError(f"need b >= 2, got {b}")
    if b % 2 == 0:
        return 2
    d = 3
    while d * d <= b:
        if b % d == 0:
            return d
        d += 2
    return b


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class PrimeSet:
    """Strictly increasing tuple of verified primes."""

    primes: tuple[int, ...]

    def __post_init__(self):
        if not self.primes:
            raise ValueError("prime set must be non-empty")
        prev = 1
        for q in self.primes:
            if q <= prev:
                raise ValueError("primes must be strictly increasing")
            if not is_prime(q):
                raise ValueError(f"{q} is not prime")
            prev = q

    def __iter__(self):
        return iter(self.primes)

    def __contains__(self, p):
        return p in self.primes

    def __len__(self):
        return len(self.primes)

    @property
    def largest(self) -> int:
        return self.primes[-1]


def _as_prime_set(s) -> PrimeSet:
    if isinstance(s, PrimeSet):
        return s
    return PrimeSet(tuple(sorted(set(s))))


@dataclass(frozen=True)
class Factorization:
    """Multiset of (prime, exponent) pairs, plus an optional unsplit cofactor.

    cofactor == 1 means fully factored.  Construction re-certifies every
    reported prime and the product identity, so a Factorization can be
    trusted wherever it came from.
    """

    n: int
    pairs: tuple[tuple[int, int], ...]
    cofactor: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        prod = self.cofactor
        prev = 1
        for p, e in self.pairs:
            if p <= prev:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prod *= p**e
            prev = p
        if prod != self.n:
            raise ValueError("pairs and cofactor do not reconstruct n")
        if self.cofactor != 1 and is_prime(self.cofactor):
            raise ValueError("a prime cofactor must be recorded as a pair")

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def reconstruct(self) -> int:
        out = self.cofactor
        for p, e in self.pairs:
            out *= p**e
        return out

    @property
    def prime_factors(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def require_complete(self):
        if not self.complete:
            raise IncompleteFactorizationError(
                f"factorization of {self.n} has composite cofactor {self.cofactor}"
            )


# ---------------------------------------------------------------------------
# splitting

DEFAULT_BUDGET = 200_000  # Brent-rho iterations per factorize() call


def _int_nth_root(n: int, r: int) -> int:
    """Floor of the r-th root of n."""
    if n < 2:
        return n
    x = 1 << (-(-n.bit_length() // r))  # upper estimate
    while True:
        y = ((r - 1) * x + n // x ** (r - 1)) // r
        if y >= x:
            return x
        x = y


def _perfect_power(n: int):
    """Return (root, exponent) with root**exponent == n and exponent > 1,
    or None."""
    for r in _SMALL_PRIMES:
        if r > n.bit_length():
            break
        root = _int_nth_root(n, r)
        if root**r == n:
            return root, r
    return None


def _brent_rho(n: int, max_iter: int):
    """Deterministic Brent rho.  Returns (nontrivial factor or None, used)."""
    used = 0
    for c in count(1):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            used += r
            if used > max_iter and g == 1:
                return None, used
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                used += 1
        if g != n:
            return g, used
        # cycle collapsed; retry with the next polynomial increment


def factorize(n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Factor n, spending at most `budget` rho iterations on hard cofactors.

    Always returns: if the budget runs out, the remaining composite goes to
    `cofactor` and `complete` is False.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if n == 1:
        return Factorization(n=1, pairs=())
    if n < _fastfactor.FAST_LIMIT:
        pairs = _fastfactor.factor_small(n)
        return Factorization(n=n, pairs=tuple(pairs), cofactor=1)

    original = n
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    remaining = budget
    failed = 1
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m < _fastfactor.FAST_LIMIT:
            for p, e in _fastfactor.factor_small(m):
                found[p] = found.get(p, 0) + e
            continue
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        power = _perfect_power(m)
        if power is not None:
            root, exp = power
            stack.extend([root] * exp)
            continue
        if remaining <= 0:
            failed *= m
            continue
        d, used = _brent_rho(m, remaining)
        remaining -= used
        if d is None:
            failed *= m
        else:
            stack.append(d)
            stack.append(m // d)
    pairs = tuple(sorted(found.items()))
    return Factorization(n=original, pairs=pairs, cofactor=failed)


# ---------------------------------------------------------------------------
# factor-derived quantities


def greatest_prime_factor(n: int, budget: int = DEFAULT_BUDGET) -> int:
    """P[n]: the greatest prime factor, with P[1] = 1."""
    if n == 1:
        return 1
    fact = factorize(n, budget)
    fact.require_complete()
    return fact.pairs[-1][0]


def omega(n: int, budget: int = DEFAULT_BUDGET) -> int:
    """Number of distinct prime factors; omega(1) = 0."""
    fact = factorize(n, budget)
    fact.require_complete()
    return len(fact.pairs)


def radical(n: int, budget: int = DEFAULT_BUDGET) -> int:
    """Greatest square-free divisor; radical(1) = 1."""
    fact = factorize(n, budget)
    fact.require_complete()
    return math.prod(fact.prime_factors)


def s_part(n: int, s) -> int:
    """Largest divisor of n supported on the prime set s.

    Needs only trial division by the members of s, never a full
    factorization of n.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    s = _as_prime_set(s)
    part = 1
    for q in s:
        while n % q == 0:
            n //= q
            part *= q
    return part


def is_smooth(n: int, bound: float) -> bool:
    """True iff every prime factor of n is <= bound (1 is always smooth).

    Divides out every prime <= bound and tests whether the cofactor is 1;
    the rough part is never factored.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if n == 1:
        return True
    if bound < 2:
        return False
    for p in _SMALL_PRIMES:
        if p > bound:
            return n == 1
        if p * p > n:
            return n <= bound
        while n % p == 0:
            n //= p
        if n == 1:
            return True
    # Continue with odd candidates; composites never divide because their
    # prime factors were already removed.
    d = _SMALL_PRIMES[-1] + 2
    while d <= bound and d * d <= n:
        while n % d == 0:
            n //= d
        d += 2
    if d * d > n:
        return n <= bound  # cofactor is 1 or prime
    return n == 1  # every prime <= bound removed, rough part remains


def is_s_unit(n: int, s) -> bool:
    """True iff all prime factors of n lie in s (true for n = 1)."""
    return s_part(n, s) == n


def p_adic_valuation(z, p: int) -> int:
    """Exponent of the prime p in the rational z; negative when p divides
    the denominator.  z must be nonzero."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    z = Fraction(z)
    if z == 0:
        raise ValueError("valuation of zero is undefined")

    def _vp(m: int) -> int:
        v = 0
        while m % p == 0:
            m //= p
            v += 1
        return v

    return _vp(abs(z.numerator)) - _vp(z.denominator)
