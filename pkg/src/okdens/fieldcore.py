"""Monogenic number fields and exact arithmetic in O_K = Z[theta].

A field is described by a monic integer polynomial f of degree k >= 1 with
coefficients stored constant-first, so f = c0 + c1*x + ... + x^k.  Elements of
O_K are integer coordinate vectors of length k in the power basis
1, theta, ..., theta^(k-1), handled as plain tuples (AlgElem below).  All
arithmetic is exact over Python big ints; k = 1 (the rationals, f = x)
degenerates to ordinary integer arithmetic with no special casing.

parse_field is the single validated entry point: it checks monicity and
squarefreeness, certifies irreducibility by exhibiting a prime p with f
irreducible mod p (first 100 primes not dividing disc f), and certifies that
Z[theta] is the maximal order by running the Dedekind criterion at every
prime whose square divides disc f.  Either certificate can be waived
explicitly, which is recorded on the field and surfaces as warnings in every
downstream report.
"""

import enum
from dataclasses import dataclass
from functools import cached_property

from . import ffpoly
from .errors import (DegreeMismatch, FactorizationTooHard, HasRationalRoot,
                     IrreducibilityUnverified, NotMaximal, NotMonic, NotPrime,
                     NotSquarefree)
from .primes import divisors_from_factors, factorize, first_primes, is_prime

AlgElem = tuple[int, ...]

IRREDUCIBILITY_PRIME_COUNT = 100

FIELD_ALIASES = {
    "Q": (0, 1),
    "Q(sqrt2)": (-2, 0, 1),
    "x^3+x+1": (1, 1, 0, 1),
    "x^5-13x-7": (-7, -13, 0, 0, 0, 1),
}


class Maximality(enum.Enum):
    VERIFIED = "Verified"
    ASSUMED_BY_USER = "AssumedByUser"


@dataclass(frozen=True)
class NumberField:
    """An order Z[theta] given by the monic defining polynomial of theta."""
    coeffs: tuple[int, ...]            # constant-first, length degree+1, monic
    degree: int
    disc: int
    maximality: Maximality
    checked_primes: tuple[int, ...] = ()   # primes where Dedekind ran and passed
    irreducibility_witness: int | None = None
    warnings: tuple[str, ...] = ()

    @cached_property
    def power_rows(self) -> tuple[AlgElem, ...]:
        """Coordinates of theta^(k+t) for t = 0..max(k-2, 0).

        Row 0 is theta^k; products of two basis elements never exceed degree
        2k-2, so rows 0..k-2 fold any convolution back into the power basis.
        """
        k = self.degree
        base = tuple(-c for c in self.coeffs[:k])
        rows = [base]
        for _ in range(max(k - 2, 0)):
            prev = rows[-1]
            top = prev[k - 1]
            rows.append(tuple((prev[j - 1] if j else 0) + top * base[j] for j in range(k)))
        return tuple(rows)

    # -- element constructors ------------------------------------------------

    def zero(self) -> AlgElem:
        return (0,) * self.degree

    def one(self) -> AlgElem:
        return (1,) + (0,) * (self.degree - 1)

    def theta(self) -> AlgElem:
        if self.degree == 1:
            return (-self.coeffs[0],)
        return (0, 1) + (0,) * (self.degree - 2)

    def from_int(self, c: int) -> AlgElem:
        return (c,) + (0,) * (self.degree - 1)

    def elem(self, coords) -> AlgElem:
        t = tuple(int(c) for c in coords)
        if len(t) != self.degree:
            raise DegreeMismatch(
                f"element has {len(t)} coordinates, field has degree {self.degree}")
        return t

    # -- ring operations -----------------------------------------------------

    def add(self, a: AlgElem, b: AlgElem) -> AlgElem:
        self._check(a), self._check(b)
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: AlgElem, b: AlgElem) -> AlgElem:
        self._check(a), self._check(b)
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: AlgElem) -> AlgElem:
        self._check(a)
        return tuple(-x for x in a)

    def mul(self, a: AlgElem, b: AlgElem) -> AlgElem:
        """Product in Z[theta]: convolution folded through power_rows."""
        self._check(a), self._check(b)
        k = self.degree
        if k == 1:
            return (a[0] * b[0],)
        conv = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        rows = self.power_rows
        out = conv[:k]
        for t in range(k - 1):
            c = conv[k + t]
            if c:
                row = rows[t]
                for j in range(k):
                    out[j] += c * row[j]
        return tuple(out)

    def theta_mul(self, a: AlgElem) -> AlgElem:
        """theta * a, the basis shift plus one fold row."""
        self._check(a)
        k = self.degree
        top = a[k - 1]
        row = self.power_rows[0]
        return tuple((a[j - 1] if j else 0) + top * row[j] for j in range(k))

    def mult_matrix(self, a: AlgElem) -> list[list[int]]:
        """Matrix of multiplication by a; column j holds coords of a*theta^j."""
        self._check(a)
        k = self.degree
        cols = [a]
        for _ in range(k - 1):
            cols.append(self.theta_mul(cols[-1]))
        return [[cols[j][i] for j in range(k)] for i in range(k)]

    def norm(self, a: AlgElem) -> int:
        """Field norm N(a) = det of the multiplication-by-a matrix."""
        return _int_det(self.mult_matrix(a))

    def _check(self, a) -> None:
        if len(a) != self.degree:
            raise DegreeMismatch(
                f"element has {len(a)} coordinates, field has degree {self.degree}")

    def label(self) -> str:
        """Canonical comma-separated coefficient string."""
        return ",".join(str(c) for c in self.coeffs)


def _int_det(m: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix, fraction-free elimination."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            for r in range(c + 1, n):
                if a[r][c]:
                    a[c], a[r] = a[r], a[c]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) // prev
            a[r][c] = 0
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def discriminant(coeffs) -> int:
    """disc(f) for monic f, via the Sylvester resultant of f and f'."""
    cs = tuple(int(c) for c in coeffs)
    if len(cs) < 2 or cs[-1] != 1:
        raise NotMonic(f"defining polynomial must be monic, got coefficients {list(cs)}")
    k = len(cs) - 1
    if k == 1:
        return 1
    # descending-order coefficient lists for the Sylvester matrix
    f_desc = list(reversed(cs))
    fp_desc = [i * cs[i] for i in range(k, 0, -1)]
    size = 2 * k - 1
    rows = []
    for s in range(k - 1):                     # k-1 shifted copies of f
        rows.append([0] * s + f_desc + [0] * (size - s - k - 1))
    for s in range(k):                         # k shifted copies of f'
        rows.append([0] * s + fp_desc + [0] * (size - s - k))
    res = _int_det(rows)
    return res if (k * (k - 1) // 2) % 2 == 0 else -res


def dedekind_check(coeffs, p: int) -> bool:
    """Dedekind's criterion: is Z[theta] maximal at p?

    With fbar = prod gbar_i^{e_i} over F_p, g* and h* monic lifts of the
    radical prod gbar_i and of fbar / radical, and F = (g*h* - f)/p, the order
    is p-maximal iff gcd(Fbar, gbar, hbar) = 1.
    """
    cs = tuple(int(c) for c in coeffs)
    if len(cs) < 2 or cs[-1] != 1:
        raise NotMonic("dedekind_check requires a monic polynomial")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    fbar = ffpoly.reduce_mod_p(cs, p)
    factors = ffpoly.factor_mod_p(fbar, p)
    gbar = (1,)
    for g, _ in factors:
        gbar = ffpoly.poly_mul(gbar, g, p)
    hbar = ffpoly.poly_divmod(fbar, gbar, p)[0]
    # monic lifts with coefficients in [0, p)
    ghlift = _lift_mul(gbar, hbar, p)
    big_f = [(ghlift[i] if i < len(ghlift) else 0) - cs[i] for i in range(len(cs))]
    assert all(c % p == 0 for c in big_f)
    fbar2 = ffpoly.reduce_mod_p([c // p for c in big_f], p)
    g1 = ffpoly.poly_gcd(fbar2, gbar, p)
    return len(ffpoly.poly_gcd(g1, hbar, p)) == 1


def _lift_mul(a, b, p: int) -> list[int]:
    """Integer product of the canonical [0, p) lifts of a and b."""
    la = [c % p for c in a]
    lb = [c % p for c in b]
    out = [0] * (len(la) + len(lb) - 1)
    for i, x in enumerate(la):
        for j, y in enumerate(lb):
            out[i + j] += x * y
    return out


def _poly_eval(cs, x: int) -> int:
    v = 0
    for c in reversed(cs):
        v = v * x + c
    return v


def parse_field(spec, *, assume_irreducible: bool = False,
                allow_nonmaximal: bool = False) -> NumberField:
    """Build a validated NumberField from an alias, coefficient string, or list.

    Accepted forms: a known alias ("Q", "Q(sqrt2)", "x^3+x+1", "x^5-13x-7"),
    a comma-separated constant-first coefficient string ("-2,0,1"), or any
    iterable of ints.  Raises NotMonic / NotSquarefree / HasRationalRoot /
    IrreducibilityUnverified / NotMaximal as appropriate; the last two can be
    waived by the keyword flags, which is then recorded in field.warnings.
    """
    cs = _coerce_coeffs(spec)
    if len(cs) < 2:
        raise NotMonic("defining polynomial must have degree >= 1")
    if cs[-1] != 1:
        raise NotMonic(f"defining polynomial must be monic, got leading coefficient {cs[-1]}")
    k = len(cs) - 1
    disc = discriminant(cs)
    if disc == 0:
        raise NotSquarefree("defining polynomial has a repeated root (disc = 0)")

    if k == 1:
        return NumberField(coeffs=cs, degree=1, disc=1, maximality=Maximality.VERIFIED)

    _reject_rational_roots(cs)

    witness = None
    warnings: list[str] = []
    for p in first_primes(IRREDUCIBILITY_PRIME_COUNT):
        if disc % p == 0:
            continue
        if ffpoly.is_irreducible_mod_p(cs, p):
            witness = p
            break
    if witness is None:
        if not assume_irreducible:
            raise IrreducibilityUnverified(
                "no irreducibility certificate mod the first "
                f"{IRREDUCIBILITY_PRIME_COUNT} primes; pass assume_irreducible to proceed")
        warnings.append("irreducibility over Q assumed by user, not certified")

    maximality = Maximality.VERIFIED
    checked: list[int] = []
    try:
        disc_factors = factorize(disc)
    except FactorizationTooHard:
        if not allow_nonmaximal:
            raise FactorizationTooHard(
                "discriminant too hard to factor, so maximality cannot be verified; "
                "pass allow_nonmaximal to proceed with an unverified order")
        maximality = Maximality.ASSUMED_BY_USER
        warnings.append("maximality unverified: discriminant factorization exceeded budget")
        disc_factors = {}
    for p in sorted(disc_factors):
        if disc_factors[p] < 2:
            continue
        if dedekind_check(cs, p):
            checked.append(p)
        elif allow_nonmaximal:
            maximality = Maximality.ASSUMED_BY_USER
            warnings.append(
                f"Dedekind criterion FAILED at p={p}: Z[theta] is not the maximal order; "
                "reported densities describe the Z[theta] lattice, not O_K")
        else:
            raise NotMaximal(
                f"Z[theta] is not maximal at p={p} (Dedekind criterion); "
                "pass allow_nonmaximal to proceed anyway")

    return NumberField(coeffs=cs, degree=k, disc=disc, maximality=maximality,
                       checked_primes=tuple(checked), irreducibility_witness=witness,
                       warnings=tuple(warnings))


def _coerce_coeffs(spec) -> tuple[int, ...]:
    if isinstance(spec, str):
        s = spec.strip()
        if s in FIELD_ALIASES:
            return FIELD_ALIASES[s]
        s = s.strip("[]")
        try:
            return tuple(int(part.strip()) for part in s.split(","))
        except ValueError:
            raise ValueError(
                f"unrecognized field spec {spec!r}: expected an alias "
                f"({', '.join(FIELD_ALIASES)}) or comma-separated integer coefficients") from None
    return tuple(int(c) for c in spec)


def _reject_rational_roots(cs: tuple[int, ...]) -> None:
    """Probe integer roots (monic => rational roots are integers dividing c0)."""
    c0 = cs[0]
    if c0 == 0:
        raise HasRationalRoot("0 is a root of the defining polynomial")
    try:
        divs = divisors_from_factors(factorize(c0))
    except FactorizationTooHard:
        return  # screen skipped; the mod-p irreducibility certificate still gates
    for d in divs:
        for r in (d, -d):
            if _poly_eval(cs, r) == 0:
                raise HasRationalRoot(f"{r} is a root of the defining polynomial")


# spec-facing functional aliases over the method API

def elem_add(field: NumberField, a, b) -> AlgElem:
    return field.add(field.elem(a), field.elem(b))


def elem_sub(field: NumberField, a, b) -> AlgElem:
    return field.sub(field.elem(a), field.elem(b))


def elem_neg(field: NumberField, a) -> AlgElem:
    return field.neg(field.elem(a))


def elem_mul(field: NumberField, a, b) -> AlgElem:
    return field.mul(field.elem(a), field.elem(b))


def norm(field: NumberField, a) -> int:
    return field.norm(field.elem(a))
