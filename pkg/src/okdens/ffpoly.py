"""Univariate polynomial arithmetic and factorization over prime fields F_p.

Polynomials are immutable tuples of Python ints, constant coefficient first,
with no trailing zeros; the zero polynomial is the empty tuple.  The prime
modulus travels as an explicit argument so the working representation stays a
bare tuple; the PolyModP dataclass wraps (p, coeffs) at module boundaries
where a self-describing value is wanted.

Factorization is the classical chain: squarefree decomposition (Yun with the
char-p p-th-root branch), distinct-degree splitting, then Cantor-Zassenhaus
equal-degree splitting (quadratic-residue trick for odd p, trace map for
p = 2).  The equal-degree stage needs random polynomials; randomness comes
from a private SplitMix64 stream seeded deterministically from (p, coeffs)
and the CZ_SEED_SALT constant, so factor_mod_p is a pure function.
"""

from dataclasses import dataclass

from .errors import NotPrime, ZeroPolynomial
from .primes import is_prime

# base salt for the deterministic equal-degree-splitting randomness
CZ_SEED_SALT = 0x5CA1AB1ECA57C0DE

# SplitMix64 constants (Steele-Lea-Flood mixing function)
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class PolyModP:
    """A polynomial over F_p: coefficients constant-first, reduced mod p."""
    p: int
    coeffs: tuple[int, ...]

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("x" if c == 1 else f"{c}*x")
            else:
                parts.append(f"x^{i}" if c == 1 else f"{c}*x^{i}")
        return " + ".join(reversed(parts)) or "0"


def _trim(cs: list[int]) -> tuple[int, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def reduce_mod_p(coeffs, p: int) -> tuple[int, ...]:
    """Tuple with every coefficient reduced into [0, p), trailing zeros dropped."""
    return _trim([c % p for c in coeffs])


def poly_add(a, b, p: int) -> tuple[int, ...]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def poly_sub(a, b, p: int) -> tuple[int, ...]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def poly_mul(a, b, p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _trim(out)


def poly_divmod(a, b, p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Quotient and remainder of a by b; b must be nonzero."""
    if not b:
        raise ZeroPolynomial("division by the zero polynomial")
    r = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return (), _trim(r)
    inv = pow(b[-1], p - 2, p)
    q = [0] * (da - db + 1)
    for shift in range(da - db, -1, -1):
        c = r[shift + db] % p
        if c:
            c = c * inv % p
            q[shift] = c
            for i, cb in enumerate(b):
                r[shift + i] = (r[shift + i] - c * cb) % p
    return _trim(q), _trim(r[:db])


def poly_mod(a, b, p: int) -> tuple[int, ...]:
    return poly_divmod(a, b, p)[1]


def make_monic(a, p: int) -> tuple[int, ...]:
    if not a:
        return ()
    lc = a[-1] % p
    if lc == 1:
        return tuple(c % p for c in a)
    inv = pow(lc, p - 2, p)
    return tuple(c * inv % p for c in a)


def poly_gcd(a, b, p: int) -> tuple[int, ...]:
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = reduce_mod_p(a, p), reduce_mod_p(b, p)
    while b:
        a, b = b, poly_mod(a, b, p)
    return make_monic(a, p)


def poly_powmod(a, e: int, mod, p: int) -> tuple[int, ...]:
    """a**e modulo the polynomial `mod` (e an arbitrary nonnegative int)."""
    result = (1 % p,) if p > 1 else ()
    base = poly_mod(a, mod, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), mod, p)
        base = poly_mod(poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def poly_invmod(a, mod, p: int) -> tuple[int, ...]:
    """Inverse of a modulo the polynomial `mod`, by extended Euclid.

    Raises ZeroPolynomial when a is not invertible (gcd(a, mod) nonconstant),
    which for irreducible mod means a = 0 mod `mod`.
    """
    r0, r1 = reduce_mod_p(mod, p), poly_mod(a, mod, p)
    s0, s1 = (), (1,)
    while r1:
        q, rem = poly_divmod(r0, r1, p)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroPolynomial("element not invertible in the residue ring")
    inv = pow(r0[0], p - 2, p)
    return tuple(c * inv % p for c in s0)


def poly_deriv(a, p: int) -> tuple[int, ...]:
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def _pth_root(a, p: int) -> tuple[int, ...]:
    # over F_p, a(x) with only x^(p*i) terms equals (sum a_{p*i} x^i)^p
    return _trim([a[i] for i in range(0, len(a), p)])


def squarefree_decomposition(a, p: int) -> list[tuple[tuple[int, ...], int]]:
    """Yun's algorithm adapted to characteristic p.

    Returns [(g, multiplicity)] with g monic squarefree, pairwise coprime, and
    a = lc * prod g^mult.
    """
    a = make_monic(a, p)
    out: list[tuple[tuple[int, ...], int]] = []
    if len(a) <= 1:
        return out

    def rec(f, scale):
        d = poly_deriv(f, p)
        if not d:
            rec(_pth_root(f, p), scale * p)
            return
        c = poly_gcd(f, d, p)
        w = poly_divmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = poly_gcd(w, c, p)
            z = poly_divmod(w, y, p)[0]
            if len(z) > 1:
                out.append((z, i * scale))
            i += 1
            w = y
            c = poly_divmod(c, y, p)[0]
        if len(c) > 1:
            rec(_pth_root(c, p), scale * p)

    rec(a, 1)
    return out


def distinct_degree_split(a, p: int) -> list[tuple[tuple[int, ...], int]]:
    """[(product of the degree-d irreducible factors, d)] for monic squarefree a."""
    out = []
    g = make_monic(a, p)
    h = (0, 1)  # x
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = poly_powmod(h, p, g, p)
        r = poly_gcd(poly_sub(h, (0, 1), p), g, p)
        if len(r) > 1:
            out.append((r, d))
            g = poly_divmod(g, r, p)[0]
            h = poly_mod(h, g, p)
    if len(g) > 1:
        out.append((g, len(g) - 1))
    return out


def _cz_stream(p: int, coeffs):
    """Deterministic uint64 stream for equal-degree splitting, keyed by input."""
    state = (CZ_SEED_SALT ^ p) & _MASK64
    for c in coeffs:
        state = (state + _SM_GAMMA + (c & _MASK64)) & _MASK64
        state = _sm_mix(state)
    holder = [state]

    def nxt() -> int:
        holder[0] = (holder[0] + _SM_GAMMA) & _MASK64
        return _sm_mix(holder[0])

    return nxt


def _sm_mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _SM_MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _SM_MIX2) & _MASK64
    return z ^ (z >> 31)


def equal_degree_split(a, d: int, p: int, nxt) -> list[tuple[int, ...]]:
    """All monic irreducible factors of a, each of degree exactly d."""
    n = len(a) - 1
    if n == d:
        return [make_monic(a, p)]
    while True:
        # random nonconstant polynomial of degree < n
        r = _trim([nxt() % p for _ in range(n)])
        if len(r) <= 1:
            continue
        if p == 2:
            # trace map T(r) = r + r^2 + r^4 + ... + r^(2^(d-1))
            t = r
            sq = r
            for _ in range(d - 1):
                sq = poly_mod(poly_mul(sq, sq, p), a, p)
                t = poly_add(t, sq, p)
            g = poly_gcd(t, a, p)
        else:
            g = poly_gcd(r, a, p)
            if 1 < len(g) < len(a):
                pass  # already a splitter
            else:
                e = (p**d - 1) // 2
                t = poly_sub(poly_powmod(r, e, a, p), (1,), p)
                g = poly_gcd(t, a, p)
        if 1 < len(g) < len(a):
            left = equal_degree_split(g, d, p, nxt)
            right = equal_degree_split(poly_divmod(a, g, p)[0], d, p, nxt)
            return left + right


def factor_mod_p(coeffs, p: int) -> list[tuple[tuple[int, ...], int]]:
    """Full factorization over F_p: [(monic irreducible, multiplicity)].

    Output is sorted by (degree, coefficient tuple) so equal inputs give
    byte-equal results across runs and platforms.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    a = reduce_mod_p(coeffs, p)
    if not a:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if len(a) == 1:
        return []
    nxt = _cz_stream(p, a)
    out = []
    for g, mult in squarefree_decomposition(a, p):
        for h, d in distinct_degree_split(g, p):
            for irr in equal_degree_split(h, d, p, nxt):
                out.append((irr, mult))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def is_irreducible_mod_p(coeffs, p: int) -> bool:
    """Rabin-style test: x^(p^n) = x mod f and gcd(x^(p^(n/q)) - x, f) = 1."""
    f = make_monic(reduce_mod_p(coeffs, p), p)
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    x = (0, 1)
    # proper prime divisors of n
    qs = []
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            qs.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        qs.append(m)
    for q in qs:
        h = poly_powmod(x, p ** (n // q), f, p)
        if len(poly_gcd(poly_sub(h, x, p), f, p)) != 1:
            return False
    h = poly_powmod(x, p**n, f, p)
    return poly_sub(h, x, p) == ()
