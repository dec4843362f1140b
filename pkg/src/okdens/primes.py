"""Prime generation, primality testing and budgeted integer factorization.

The sieve is a segmented numpy Eratosthenes working in blocks of 2**16 odd
candidates, so memory stays flat for bounds up to 10**8.  Primality is
deterministic Miller-Rabin for 64-bit inputs and strong-base Miller-Rabin
beyond.  Factorization does trial division up to TRIAL_LIMIT, then Brent's
cycle variant of Pollard rho capped at RHO_ITER_CAP iterations; exceeding the
cap raises FactorizationTooHard rather than silently looping.
"""

import math

import numpy as np

from .errors import FactorizationTooHard

SIEVE_BLOCK = 1 << 16
TRIAL_LIMIT = 10**6
RHO_ITER_CAP = 10**7

# deterministic Miller-Rabin witness set for n < 2**64
_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# fixed strong bases for arbitrary-precision inputs
_WITNESSES_BIG = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                  59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113)


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array, ascending."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    root = math.isqrt(limit)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p:: p] = False
    small = np.nonzero(base)[0].astype(np.int64)
    if limit <= root:
        return small[small <= limit]

    chunks = [small]
    odd_small = small[small > 2]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + 2 * SIEVE_BLOCK, limit + 1)
        # odd candidates in [lo, hi)
        start = lo | 1
        seg = np.ones((hi - start + 1) // 2, dtype=bool)
        for p in odd_small:
            p = int(p)
            first = max(p * p, ((start + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            if first < hi:
                seg[(first - start) // 2:: p] = False
        chunks.append(start + 2 * np.nonzero(seg)[0].astype(np.int64))
        lo = hi
    return np.concatenate(chunks)


def first_primes(count: int) -> list[int]:
    """The first `count` primes."""
    if count <= 0:
        return []
    # n-th prime < n(ln n + ln ln n) for n >= 6
    bound = 15
    if count >= 6:
        ln = math.log(count)
        bound = int(count * (ln + math.log(ln))) + 10
    ps = sieve_primes(bound)
    while len(ps) < count:
        bound *= 2
        ps = sieve_primes(bound)
    return [int(p) for p in ps[:count]]


def is_prime(n: int) -> bool:
    """Deterministic for n < 2**64, strong-base Miller-Rabin beyond."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    witnesses = _WITNESSES_64 if n < 1 << 64 else _WITNESSES_BIG
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int, budget: list[int]) -> int:
    """A nontrivial factor of composite odd n, or raises FactorizationTooHard."""
    c = 1
    while True:
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget[0] += min(m, r - k)
                if budget[0] > RHO_ITER_CAP:
                    raise FactorizationTooHard(
                        f"pollard-rho budget exhausted ({RHO_ITER_CAP} iterations) on {n}")
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # backtrack to find the first colliding step
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1  # cycle degenerated; retry with a different polynomial


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: exponent} of |n|; n must be nonzero.

    Trial division to TRIAL_LIMIT, Brent rho beyond, RHO_ITER_CAP total budget.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # wheel over 1, 7, 11, 13, 17, 19, 23, 29 mod 30
    d = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= n and d <= TRIAL_LIMIT:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += steps[i]
        i = (i + 1) % 8
    if n == 1:
        return out
    if d * d > n:
        out[n] = out.get(n, 0) + 1
        return out

    budget = [0]
    stack = [n]
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        if is_prime(v):
            out[v] = out.get(v, 0) + 1
            continue
        f = _brent_rho(v, budget)
        stack.append(f)
        stack.append(v // f)
    return out


def divisors_from_factors(factors: dict[int, int], cap: int = 100000) -> list[int]:
    """All positive divisors, ascending; raises if more than `cap` would result."""
    count = 1
    for e in factors.values():
        count *= e + 1
        if count > cap:
            raise FactorizationTooHard(f"divisor count exceeds {cap}")
    divs = [1]
    for p, e in factors.items():
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)
