"""Hot-loop kernels, written once and compiled with numba when available.

Everything here operates on numpy scalars and preallocated arrays so the same
source runs under numba's nopython compiler or, when the pure backend is
selected (see okdens._accel), as ordinary python over numpy integer scalars,
whose wrapping arithmetic matches the compiled semantics bit for bit.

Contents:

* SplitMix64 / xoshiro256** generation and rejection sampling of matrix
  coordinate batches (exact reproduction of the documented stream contract);
* guarded int64 arithmetic in Z[theta]: minors by signed permutation sums,
  incremental triangular (Hermite) accumulation of the minor lattice, and the
  resulting unimodularity verdicts.  Every multiply/accumulate is preceded by
  a float magnitude guard against HARD_LIMIT, so a kernel verdict is either
  exactly correct or reported as a bail-out (code 2) for the caller's exact
  big-int path to settle;
* distinct-degree factorization shapes of f mod p over blocks of primes for
  the Euler products (squarefree inputs only: callers route primes dividing
  disc f to the exact path);
* double-double (~106-bit) accumulation of truncated Euler products;
* exhaustive box enumeration for brute-force densities.

Verdict codes: 1 unimodular, 0 not unimodular, 2 guard bail-out.
"""

import numpy as np

from ._accel import njit

# SplitMix64 / xoshiro256** constants (Blackman-Vigna reference parameters)
SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
SM_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
SM_MIX2 = np.uint64(0x94D049BB133111EB)
_U0 = np.uint64(0)
_S7 = np.uint64(7)
_S9 = np.uint64(9)
_S17 = np.uint64(17)
_S19 = np.uint64(19)
_S23 = np.uint64(23)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_S45 = np.uint64(45)
_S57 = np.uint64(57)
_M5 = np.uint64(5)
_M9 = np.uint64(9)

# magnitude ceiling for guarded int64 arithmetic; leaves >2x headroom to the
# int64 range so conservative float bounds can never mask a real overflow
HARD_LIMIT = 4.0e18

_DD_SPLITTER = 134217729.0  # 2**27 + 1


# ---------------------------------------------------------------------------
# PRNG
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _sm_mix(z):
    z = (z ^ (z >> _S30)) * SM_MIX1
    z = (z ^ (z >> _S27)) * SM_MIX2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def splitmix64_u64(x):
    """The SplitMix64 output for input x (advance by gamma, then mix)."""
    return _sm_mix(x + SM_GAMMA)


@njit(cache=True, nogil=True)
def sample_coords(child_seed, two_b, bound, out):
    """Fill out[ns, ncoords] with uniform int64 draws from [-bound, bound).

    child_seed seeds a xoshiro256** generator through four successive
    SplitMix64 outputs; each coordinate comes from unbiased rejection of the
    raw 64-bit stream onto 2*bound residues.  Coordinates are drawn row-major
    in index order, so the stream position after the call is a pure function
    of the arguments.
    """
    x = child_seed
    x = x + SM_GAMMA
    s0 = _sm_mix(x)
    x = x + SM_GAMMA
    s1 = _sm_mix(x)
    x = x + SM_GAMMA
    s2 = _sm_mix(x)
    x = x + SM_GAMMA
    s3 = _sm_mix(x)

    thresh = (_U0 - two_b) % two_b    # 2**64 mod 2B
    ns = out.shape[0]
    nc = out.shape[1]
    for i in range(ns):
        for j in range(nc):
            while True:
                r = s1 * _M5
                res = ((r << _S7) | (r >> _S57)) * _M9
                t = s1 << _S17
                s2 = s2 ^ s0
                s3 = s3 ^ s1
                s1 = s1 ^ s2
                s0 = s0 ^ s3
                s2 = s2 ^ t
                s3 = (s3 << _S45) | (s3 >> _S19)
                if res >= thresh:
                    break
            out[i, j] = np.int64(res % two_b) - bound


# ---------------------------------------------------------------------------
# guarded Z[theta] arithmetic and unimodularity verdicts
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _elem_mul(a, b, out, conv, red, k, cfmul):
    """out = a*b in Z[theta]; returns False when the guard trips."""
    fa = 0.0
    fb = 0.0
    for t in range(k):
        va = a[t] * 1.0
        if va < 0.0:
            va = -va
        if va > fa:
            fa = va
        vb = b[t] * 1.0
        if vb < 0.0:
            vb = -vb
        if vb > fb:
            fb = vb
    if cfmul * fa * fb > HARD_LIMIT:
        return False
    for t in range(2 * k - 1):
        conv[t] = 0
    for i in range(k):
        ai = a[i]
        if ai != 0:
            for j in range(k):
                conv[i + j] += ai * b[j]
    for j in range(k):
        out[j] = conv[j]
    for t in range(k - 1):
        c = conv[k + t]
        if c != 0:
            for j in range(k):
                out[j] += c * red[t, j]
    return True


@njit(cache=True, nogil=True)
def _theta_shift(a, out, red, k, cf0):
    """out = theta*a; returns False when the guard trips."""
    fa = 0.0
    for t in range(k):
        v = a[t] * 1.0
        if v < 0.0:
            v = -v
        if v > fa:
            fa = v
    if cf0 * fa > HARD_LIMIT:
        return False
    top = a[k - 1]
    for j in range(k - 1, 0, -1):
        out[j] = a[j - 1] + top * red[0, j]
    out[0] = top * red[0, 0]
    return True


@njit(cache=True, nogil=True)
def _maxabs_f(v, k):
    f = 0.0
    for t in range(k):
        x = v[t] * 1.0
        if x < 0.0:
            x = -x
        if x > f:
            f = x
    return f


@njit(cache=True, nogil=True)
def _minor_det(row, m, k, cols, perms, psigns, red, cfmul, acc, prod, tmp, conv):
    """Signed permutation-sum determinant of the selected n x n block.

    row is one sample's flat coordinate array; entry (i, j) lives at
    (i*m + j)*k.  Result lands in acc; returns False on guard bail.
    """
    nperm = perms.shape[0]
    n = perms.shape[1]
    for t in range(k):
        acc[t] = 0
    for pi in range(nperm):
        base = cols[perms[pi, 0]] * k
        for t in range(k):
            prod[t] = row[base + t]
        ok = True
        for i in range(1, n):
            base = (i * m + cols[perms[pi, i]]) * k
            if not _elem_mul(prod, row[base:base + k], tmp, conv, red, k, cfmul):
                ok = False
                break
            for t in range(k):
                prod[t] = tmp[t]
        if not ok:
            return False
        if _maxabs_f(acc, k) + _maxabs_f(prod, k) > HARD_LIMIT:
            return False
        s = psigns[pi]
        for t in range(k):
            acc[t] += s * prod[t]
    return True


@njit(cache=True, nogil=True)
def _hnf_insert(H, r, k):
    """Fold row r into the triangular accumulator H.

    Returns 1 if a new pivot appeared, 0 if the row dissolved, -1 on guard
    bail.  H rows keep zeros left of their pivot column; pivots stay
    positive.  The row buffer r is consumed.
    """
    j = 0
    while j < k:
        rj = r[j]
        if rj == 0:
            j += 1
            continue
        pj = H[j, j]
        if pj == 0:
            if rj < 0:
                for t in range(j, k):
                    r[t] = -r[t]
            for t in range(j, k):
                H[j, t] = r[t]
            return 1
        q = rj // pj
        if q != 0:
            fq = q * 1.0
            if fq < 0.0:
                fq = -fq
            maxh = 0.0
            maxr = 0.0
            for t in range(j, k):
                h = H[j, t] * 1.0
                if h < 0.0:
                    h = -h
                if h > maxh:
                    maxh = h
                v = r[t] * 1.0
                if v < 0.0:
                    v = -v
                if v > maxr:
                    maxr = v
            if fq * maxh + maxr > HARD_LIMIT:
                return -1
            for t in range(j, k):
                r[t] -= q * H[j, t]
        if r[j] != 0:
            for t in range(j, k):
                swap = H[j, t]
                H[j, t] = r[t]
                r[t] = swap
        else:
            j += 1
    return 0


@njit(cache=True, nogil=True)
def _verdict_core(row, m, k, red, combos, perms, psigns, cfmul, cf0,
                  H, minor, prod, tmp, conv, racc, rowbuf):
    """Unimodularity verdict for one sample; leaves the pivots on H's diagonal."""
    for a in range(k):
        for b in range(k):
            H[a, b] = 0
    npiv = 0
    ncomb = combos.shape[0]
    for ci in range(ncomb):
        if not _minor_det(row, m, k, combos[ci], perms, psigns, red, cfmul,
                          minor, prod, tmp, conv):
            return 2
        zero = True
        for t in range(k):
            if minor[t] != 0:
                zero = False
                break
        if zero:
            continue
        for t in range(k):
            racc[t] = minor[t]
        for t in range(k):
            if t > 0:
                if not _theta_shift(racc, tmp, red, k, cf0):
                    return 2
                for u in range(k):
                    racc[u] = tmp[u]
            for u in range(k):
                rowbuf[u] = racc[u]
            st = _hnf_insert(H, rowbuf, k)
            if st < 0:
                return 2
            npiv += st
        if npiv == k:
            ident = True
            for a in range(k):
                if H[a, a] != 1:
                    ident = False
                    break
            if ident:
                return 1
    if npiv < k:
        return 0
    for a in range(k):
        if H[a, a] != 1:
            return 0
    return 1


@njit(cache=True, nogil=True)
def verdict_batch(coords, m, k, red, combos, perms, psigns, cfmul, cf0, out):
    """Per-sample verdict codes for a coordinate batch (rows of `coords`)."""
    H = np.zeros((k, k), dtype=np.int64)
    minor = np.empty(k, dtype=np.int64)
    prod = np.empty(k, dtype=np.int64)
    tmp = np.empty(k, dtype=np.int64)
    conv = np.empty(2 * k - 1, dtype=np.int64)
    racc = np.empty(k, dtype=np.int64)
    rowbuf = np.empty(k, dtype=np.int64)
    for s in range(coords.shape[0]):
        out[s] = _verdict_core(coords[s], m, k, red, combos, perms, psigns,
                               cfmul, cf0, H, minor, prod, tmp, conv, racc, rowbuf)


@njit(cache=True, nogil=True)
def check_single(row, m, k, red, combos, perms, psigns, cfmul, cf0, pivots):
    """Verdict for one flat coordinate row; diagonal pivots land in `pivots`.

    On code 1 the pivots are all 1; on code 0 a zero pivot means the minor
    lattice has deficient rank (infinite index).
    """
    H = np.zeros((k, k), dtype=np.int64)
    minor = np.empty(k, dtype=np.int64)
    prod = np.empty(k, dtype=np.int64)
    tmp = np.empty(k, dtype=np.int64)
    conv = np.empty(2 * k - 1, dtype=np.int64)
    racc = np.empty(k, dtype=np.int64)
    rowbuf = np.empty(k, dtype=np.int64)
    code = _verdict_core(row, m, k, red, combos, perms, psigns, cfmul, cf0,
                         H, minor, prod, tmp, conv, racc, rowbuf)
    for a in range(k):
        pivots[a] = H[a, a]
    if code == 1:
        for a in range(k):
            pivots[a] = 1
    return code


@njit(cache=True)
def brute_count(total, two_b, bound, n, m, k, red, combos, perms, psigns,
                cfmul, cf0, bailed):
    """Count unimodular matrices over the whole coordinate box.

    Decodes every index in [0, total) as base-2B digits (last coordinate
    fastest), runs the guarded verdict, and records bailed indices (up to the
    capacity of `bailed`) for exact re-checking by the caller.  Returns
    (hits, number_of_bails).
    """
    nc = n * m * k
    row = np.empty(nc, dtype=np.int64)
    H = np.zeros((k, k), dtype=np.int64)
    minor = np.empty(k, dtype=np.int64)
    prod = np.empty(k, dtype=np.int64)
    tmp = np.empty(k, dtype=np.int64)
    conv = np.empty(2 * k - 1, dtype=np.int64)
    racc = np.empty(k, dtype=np.int64)
    rowbuf = np.empty(k, dtype=np.int64)
    hits = 0
    nb = 0
    for idx in range(total):
        v = idx
        for c in range(nc - 1, -1, -1):
            row[c] = v % two_b - bound
            v //= two_b
        code = _verdict_core(row, m, k, red, combos, perms, psigns, cfmul, cf0,
                             H, minor, prod, tmp, conv, racc, rowbuf)
        if code == 1:
            hits += 1
        elif code == 2:
            if nb < bailed.shape[0]:
                bailed[nb] = idx
            nb += 1
    return hits, nb


# ---------------------------------------------------------------------------
# distinct-degree splitting shapes over prime blocks
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _minv(a, p):
    """Inverse of a mod p (p prime, a not divisible by p), extended Euclid."""
    t, nt = np.int64(0), np.int64(1)
    r, nr = p, a % p
    while nr != 0:
        q = r // nr
        t, nt = nt, t - q * nt
        r, nr = nr, r - q * nr
    if t < 0:
        t += p
    return t


@njit(cache=True, nogil=True)
def _pmod_monic(a, da, g, dg, p):
    """Reduce a modulo monic g in place; returns the new degree (-1 if zero)."""
    for sh in range(da - dg, -1, -1):
        c = a[sh + dg]
        if c != 0:
            for i in range(dg):
                a[sh + i] = (a[sh + i] - c * g[i]) % p
            a[sh + dg] = 0
    d = da if da < dg else dg - 1
    while d >= 0 and a[d] == 0:
        d -= 1
    return d


@njit(cache=True, nogil=True)
def _pmulmod(a, da, b, db, g, dg, p, mb):
    """mb = a*b mod monic g; returns the degree of the product in mb."""
    for t in range(da + db + 1):
        mb[t] = 0
    for i in range(da + 1):
        ai = a[i]
        if ai != 0:
            for j in range(db + 1):
                mb[i + j] = (mb[i + j] + ai * b[j]) % p
    return _pmod_monic(mb, da + db, g, dg, p)


@njit(cache=True, nogil=True)
def _pgcd_monic(a, da, b, db, p, w1, w2, mbuf):
    """Monic gcd of a and b into w1; returns its degree (-1 for gcd(0,0))."""
    for i in range(da + 1):
        w1[i] = a[i]
    d1 = da
    for i in range(db + 1):
        w2[i] = b[i]
    d2 = db
    while d1 >= 0 and w1[d1] == 0:
        d1 -= 1
    while d2 >= 0 and w2[d2] == 0:
        d2 -= 1
    while d2 >= 0:
        # make w2 monic, reduce w1 mod w2, swap
        lc = w2[d2]
        if lc != 1:
            inv = _minv(lc, p)
            for i in range(d2 + 1):
                w2[i] = w2[i] * inv % p
        d1 = _pmod_monic(w1, d1, w2, d2, p)
        for i in range(d2 + 1):
            mbuf[i] = w2[i]
        dsw = d2
        d2 = d1
        for i in range(d1 + 1):
            w2[i] = w1[i]
        d1 = dsw
        for i in range(dsw + 1):
            w1[i] = mbuf[i]
    if d1 >= 0 and w1[d1] != 1:
        inv = _minv(w1[d1], p)
        for i in range(d1 + 1):
            w1[i] = w1[i] * inv % p
    return d1


@njit(cache=True, nogil=True)
def _pdiv_exact_monic(a, da, g, dg, p, q):
    """Quotient of the exact division of a by monic g; returns its degree."""
    for t in range(da + 1):
        q[t] = 0
    for sh in range(da - dg, -1, -1):
        c = a[sh + dg]
        q[sh] = c
        if c != 0:
            for i in range(dg + 1):
                a[sh + i] = (a[sh + i] - c * g[i]) % p
    return da - dg


@njit(cache=True)
def split_degree_counts(primes, redc, kdeg, counts):
    """Distinct-degree shape of f mod p for every prime in the block.

    redc[i] holds the monic degree-kdeg coefficients of f mod primes[i]
    (constant first); counts[i, d-1] receives the number of irreducible
    degree-d factors.  Callers must exclude primes dividing disc f, so every
    input is squarefree and the plain distinct-degree scan is exhaustive.
    """
    klen = kdeg + 1
    g = np.empty(klen, dtype=np.int64)
    h = np.empty(2 * klen + 1, dtype=np.int64)
    r = np.empty(2 * klen + 1, dtype=np.int64)
    sq = np.empty(2 * klen + 1, dtype=np.int64)
    w1 = np.empty(2 * klen + 1, dtype=np.int64)
    w2 = np.empty(2 * klen + 1, dtype=np.int64)
    mb = np.empty(2 * klen + 1, dtype=np.int64)
    qb = np.empty(2 * klen + 1, dtype=np.int64)
    for idx in range(primes.shape[0]):
        p = primes[idx]
        dg = kdeg
        for i in range(klen):
            g[i] = redc[idx, i]
        # h = x
        h[0] = 0
        h[1] = 1
        dh = 1
        d = 0
        while dg >= 2 * (d + 1):
            d += 1
            # h = h^p mod g by binary powering
            e = p
            for i in range(dh + 1):
                sq[i] = h[i]
            dsq = dh
            h[0] = 1
            dh = 0
            while e > 0:
                if e & 1 == 1:
                    dh = _pmulmod(h, dh, sq, dsq, g, dg, p, mb)
                    for i in range(dh + 1):
                        h[i] = mb[i]
                e >>= 1
                if e > 0:
                    dsq = _pmulmod(sq, dsq, sq, dsq, g, dg, p, mb)
                    for i in range(dsq + 1):
                        sq[i] = mb[i]
            # r = gcd(h - x, g)
            hx_len = dh
            if hx_len < 1:
                hx_len = 1
            for i in range(hx_len + 1):
                if i <= dh:
                    r[i] = h[i]
                else:
                    r[i] = 0
            r[1] = (r[1] - 1) % p
            dr = _pgcd_monic(r, hx_len, g, dg, p, w1, w2, mb)
            if dr > 0:
                counts[idx, d - 1] += np.uint8(dr // d)
                # g /= gcd, h reduced mod the smaller g
                for i in range(dr + 1):
                    r[i] = w1[i]
                dgnew = _pdiv_exact_monic(g, dg, r, dr, p, qb)
                for i in range(dgnew + 1):
                    g[i] = qb[i]
                dg = dgnew
                if dg == 0:
                    break
                dh = _pmod_monic(h, dh, g, dg, p)
                if dh < 1:
                    # h collapsed to a constant; restart the power chain at x
                    # cannot happen for squarefree input with dg >= 1, but stay safe
                    h[0] = 0
                    h[1] = 1
                    dh = 1
        if dg > 0:
            counts[idx, dg - 1] += np.uint8(1)


# ---------------------------------------------------------------------------
# double-double Euler accumulation
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True, nogil=True)
def _two_prod(a, b):
    pr = a * b
    ta = _DD_SPLITTER * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _DD_SPLITTER * b
    bh = tb - (tb - b)
    bl = b - bh
    err = ((ah * bh - pr) + ah * bl + al * bh) + al * bl
    return pr, err


@njit(cache=True, nogil=True)
def dd_add(ah, al, bh, bl):
    sh, se = _two_sum(ah, bh)
    return _two_sum(sh, se + al + bl)


@njit(cache=True, nogil=True)
def dd_mul(ah, al, bh, bl):
    ph, pe = _two_prod(ah, bh)
    return _two_sum(ph, pe + ah * bl + al * bh)


@njit(cache=True, nogil=True)
def _dd_mul_f(ah, al, b):
    ph, pe = _two_prod(ah, b)
    return _two_sum(ph, pe + al * b)


@njit(cache=True, nogil=True)
def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    th, tl = _dd_mul_f(bh, bl, q1)
    rh, rl = dd_add(ah, al, -th, -tl)
    q2 = rh / bh
    th, tl = _dd_mul_f(bh, bl, q2)
    rh, rl = dd_add(rh, rl, -th, -tl)
    q3 = rh / bh
    sh, sl = _two_sum(q1, q2)
    return _two_sum(sh, sl + q3)


@njit(cache=True, nogil=True)
def dd_powi(ah, al, e):
    """(ah, al)**e for integer e >= 0."""
    rh, rl = 1.0, 0.0
    bh, bl = ah, al
    while e > 0:
        if e & 1 == 1:
            rh, rl = dd_mul(rh, rl, bh, bl)
        e >>= 1
        if e > 0:
            bh, bl = dd_mul(bh, bl, bh, bl)
    return rh, rl


@njit(cache=True)
def euler_product_dd(primes, counts, n, m):
    """prod over primes, factor degrees d and i < n of (1 - p^(-d*(m-i)))^mult.

    counts[idx, d-1] gives the number of degree-d primes above primes[idx];
    the whole product is accumulated in double-double precision and returned
    as a (hi, lo) pair.
    """
    vh, vl = 1.0, 0.0
    kdeg = counts.shape[1]
    for idx in range(primes.shape[0]):
        pf = primes[idx] * 1.0
        qh, ql = dd_div(1.0, 0.0, pf, 0.0)
        for d in range(1, kdeg + 1):
            c = counts[idx, d - 1]
            if c == 0:
                continue
            for i in range(n):
                e = d * (m - i)
                ph, pl = dd_powi(qh, ql, e)
                fh, fl = dd_add(1.0, 0.0, -ph, -pl)
                for _ in range(c):
                    vh, vl = dd_mul(vh, vl, fh, fl)
    return vh, vl
