"""Compiled factorization core for machine-word inputs.

Everything here is restricted to n < 2**31 so that intermediate products fit
comfortably in int64.  Larger inputs take the arbitrary-precision path in
`factor`.  If numba is unavailable the same functions run as plain Python,
just slower.
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


FAST_LIMIT = 1 << 31

# Trial-division basis: primes below 64.  Anything surviving it is either 1,
# prime, or has all factors > 61, which _is_prime_small handles correctly.
_TD_PRIMES = np.array(
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61],
    dtype=np.int64,
)


@njit(cache=True)
def _pow_mod(base, exp, mod):
    result = 1
    base %= mod
    while exp > 0:
        if exp & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        exp >>= 1
    return result


@njit(cache=True)
def _is_prime_small(n):
    # Deterministic Miller-Rabin for n < 2**31 with bases 2, 7, 61.
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 7, 61):
        a = a % n
        if a == 0 or a == 1 or a == n - 1:
            continue
        x = _pow_mod(a, d, n)
        if x == 1 or x == n - 1:
            continue
        composite = True
        for _ in range(r - 1):
            x = (x * x) % n
            if x == n - 1:
                composite = False
                break
        if composite:
            return False
    return True


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _rho_small(n):
    # Brent cycle-finding with deterministic parameters; n odd composite,
    # not a prime power obstacle at this size in practice (retries with
    # successive c values cover the rare stalls).
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y = 2
        r = 1
        q = 1
        g = 1
        m = 128
        x = y
        ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                lim = m if m < r - k else r - k
                for _ in range(lim):
                    y = (y * y + c) % n
                    diff = x - y if x > y else y - x
                    q = (q * diff) % n
                g = _gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                diff = x - ys if x > ys else ys - x
                g = _gcd(diff, n)
        if g != n:
            return g
    return n  # unreachable for composite n at this size


@njit(cache=True)
def _factor_small(n, out_p, out_e):
    """Factor n < 2**31 into out_p/out_e arrays; returns pair count."""
    cnt = 0
    for i in range(_TD_PRIMES.shape[0]):
        p = _TD_PRIMES[i]
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out_p[cnt] = p
            out_e[cnt] = e
            cnt += 1
    if n == 1:
        return cnt
    # Split the remaining cofactor; stack depth 64 is far more than enough.
    stack = np.empty(64, dtype=np.int64)
    top = 0
    stack[top] = n
    top += 1
    while top > 0:
        top -= 1
        m = stack[top]
        if _is_prime_small(m):
            placed = False
            for j in range(cnt):
                if out_p[j] == m:
                    out_e[j] += 1
                    placed = True
                    break
            if not placed:
                out_p[cnt] = m
                out_e[cnt] = 1
                cnt += 1
            continue
        d = _rho_small(m)
        if d <= 1 or d >= m:
            # unreachable with a sound primality test; fail loudly rather
            # than loop or fabricate a factor
            raise RuntimeError("rho failed to split a certified composite")
        stack[top] = d
        top += 1
        stack[top] = m // d
        top += 1
    # insertion sort by prime (tiny arrays)
    for i in range(1, cnt):
        kp = out_p[i]
        ke = out_e[i]
        j = i - 1
        while j >= 0 and out_p[j] > kp:
            out_p[j + 1] = out_p[j]
            out_e[j + 1] = out_e[j]
            j -= 1
        out_p[j + 1] = kp
        out_e[j + 1] = ke
    return cnt


def factor_small(n):
    """Factor 1 < n < 2**31; returns list of (prime, exponent) pairs."""
    out_p = np.empty(32, dtype=np.int64)
    out_e = np.empty(32, dtype=np.int64)
    cnt = _factor_small(n, out_p, out_e)
    return [(int(out_p[i]), int(out_e[i])) for i in range(cnt)]


@njit(cache=True)
def factor_stats_range(limit):
    """Greatest prime factor, distinct-prime count and radical for 1..limit.

    Runs the same splitting core as factor_small over the whole range; used
    for bulk verification against independent sieves.
    """
    gpf = np.zeros(limit + 1, dtype=np.int64)
    omg = np.zeros(limit + 1, dtype=np.int8)
    rad = np.zeros(limit + 1, dtype=np.int64)
    gpf[1] = 1
    rad[1] = 1
    out_p = np.empty(32, dtype=np.int64)
    out_e = np.empty(32, dtype=np.int64)
    for n in range(2, limit + 1):
        cnt = _factor_small(n, out_p, out_e)
        gpf[n] = out_p[cnt - 1]
        omg[n] = cnt
        r = 1
        for i in range(cnt):
            r *= out_p[i]
        rad[n] = r
    return gpf, omg, rad
