"""Predicted unimodularity densities via truncated Dedekind zeta Euler products.

For an n x m matrix over O_K (n < m) the limiting density of unimodular
matrices is prod_{i=0}^{n-1} 1/zeta_K(m - i).  Each 1/zeta_K(s) is the Euler
product over rational primes of prod_{P | p} (1 - p^(-deg(P) * s)), one
factor per distinct prime ideal, ramification ignored.  The residue degrees
come from the degree shape of f mod p: a block kernel scans all unramified
primes up to the bound, and the few primes dividing disc f go through the
exact splitting path.

Accumulation runs in double-double arithmetic (about 106 mantissa bits), so
the truncation tail dominates the reported error.  The tail bound

    2 * k * n * P^(1 - s_min) / (s_min - 1),   s_min = m - n + 1

over-counts the neglected factors: at most k*n exponent pairs per prime, each
factor at least (1 - p^(-s_min)), and sum_{p > P} p^(-s) < P^(1-s)/(s-1) by
integral comparison, with the factor 2 absorbing log(1-x) >= -2x.
"""

from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import BadBound, BadExponent, BadShape
from .fieldcore import Maximality, NumberField
from .primes import sieve_primes
from .splitting import split_prime

DEFAULT_PRIME_BOUND = 10**6
_KERNEL_PRIME_CAP = (1 << 31) - 1   # block kernel does arithmetic below 2**31


@dataclass(frozen=True)
class EulerProductResult:
    n: int
    m: int
    prime_bound: int
    value_hi: float
    value_lo: float
    tail_bound: float

    @property
    def value(self) -> float:
        return self.value_hi + self.value_lo

    def decimal(self, digits: int = 30) -> str:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            total = Decimal(self.value_hi) + Decimal(self.value_lo)
            return str(total.quantize(Decimal(1).scaleb(-digits)))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "prime_bound": self.prime_bound,
            "value": self.value,
            "value_decimal": self.decimal(),
            "tail_bound": self.tail_bound,
        }


def euler_factor(field: NumberField, p: int, s: int) -> float:
    """prod over primes P above p of (1 - p^(-deg(P)*s)), each ideal once."""
    if s < 2:
        raise BadExponent(f"euler_factor needs s >= 2 for convergence, got {s}")
    allow = field.maximality is Maximality.ASSUMED_BY_USER
    split = split_prime(field, p, allow_unverified=allow)
    fh, fl = 1.0, 0.0
    for d in split.residue_degrees():
        qh, ql = kernels.dd_div(1.0, 0.0, float(p), 0.0)
        ph, pl = kernels.dd_powi(qh, ql, d * s)
        th, tl = kernels.dd_add(1.0, 0.0, -ph, -pl)
        fh, fl = kernels.dd_mul(fh, fl, th, tl)
    return fh + fl


@lru_cache(maxsize=32)
def _degree_counts(field: NumberField, prime_bound: int):
    """(unramified primes array, degree-count table, ramified primes tuple)."""
    k = field.degree
    primes = sieve_primes(prime_bound)
    if primes.size == 0:
        return primes, np.zeros((0, k), dtype=np.uint8), ()
    disc = field.disc
    ram = [int(p) for p in primes if disc % int(p) == 0]
    if ram:
        ram_set = set(ram)
        unram = np.array([p for p in primes if int(p) not in ram_set], dtype=np.int64)
    else:
        unram = primes

    small = unram[unram <= _KERNEL_PRIME_CAP]
    counts = np.zeros((small.size, k), dtype=np.uint8)
    if small.size:
        redc = np.empty((small.size, k + 1), dtype=np.int64)
        for i, c in enumerate(field.coeffs):
            redc[:, i] = np.mod(c, small)
        kernels.split_degree_counts(small, redc, k, counts)
    big = unram[unram > _KERNEL_PRIME_CAP]
    if big.size:
        allow = field.maximality is Maximality.ASSUMED_BY_USER
        extra = np.zeros((big.size, k), dtype=np.uint8)
        for idx, p in enumerate(big):
            split = split_prime(field, int(p), allow_unverified=allow)
            for d in split.residue_degrees():
                extra[idx, d - 1] += 1
        counts = np.concatenate([counts, extra])
        small = unram
    return small, counts, tuple(ram)


def predicted_density(field: NumberField, n: int, m: int,
                      prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProductResult:
    """Truncated product prod_{i<n} 1/zeta_K(m-i) with a rigorous tail bound."""
    if n < 1 or n >= m:
        raise BadShape(f"predicted density needs 1 <= n < m, got n={n}, m={m}")
    if prime_bound < 2:
        raise BadBound(f"prime bound must be >= 2, got {prime_bound}")
    k = field.degree
    primes, counts, ram = _degree_counts(field, prime_bound)
    vh, vl = kernels.euler_product_dd(primes, counts, n, m)

    allow = field.maximality is Maximality.ASSUMED_BY_USER
    for p in ram:
        split = split_prime(field, p, allow_unverified=allow)
        qh, ql = kernels.dd_div(1.0, 0.0, float(p), 0.0)
        for d in split.residue_degrees():
            for i in range(n):
                ph, pl = kernels.dd_powi(qh, ql, d * (m - i))
                th, tl = kernels.dd_add(1.0, 0.0, -ph, -pl)
                vh, vl = kernels.dd_mul(vh, vl, th, tl)

    s_min = m - n + 1
    tail = 2.0 * k * n * float(prime_bound) ** (1 - s_min) / (s_min - 1)
    return EulerProductResult(n=n, m=m, prime_bound=prime_bound,
                              value_hi=float(vh), value_lo=float(vl), tail_bound=tail)
