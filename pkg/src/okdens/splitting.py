"""Prime splitting in Z[theta] via factorization of f modulo p.

For a prime p at which Z[theta] is p-maximal, the shape of the ideal (p) in
O_K mirrors the factorization f = prod g_i^{e_i} mod p: each irreducible
factor g_i corresponds to the prime ideal (p, g_i(theta)) with residue degree
deg g_i and ramification index e_i, and the residue field is F_p[x]/(g_i).

p-maximality holds automatically when p^2 does not divide disc f.  At primes
where it could fail, the correspondence is certified by the field's Dedekind
checks; a field carrying maximality = AssumedByUser refuses to split such
primes unless the caller explicitly opts in, because the reported shape would
then describe Z[theta] rather than O_K.

Splits are memoized per (field, p), so repeated queries during Euler-product
assembly and witness searches hit a dense cache; the cache is safe under
concurrent readers (entries are built before insertion).
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import IndexOutOfRange, NotPrime, UnverifiedAtP
from .fieldcore import AlgElem, Maximality, NumberField
from .ffpoly import PolyModP, factor_mod_p, poly_mod, reduce_mod_p
from .primes import is_prime

SPLIT_CACHE_SIZE = 1 << 14


@dataclass(frozen=True)
class PrimeSplit:
    """Factorization shape of (p): one (g_i, e_i) per prime ideal above p."""
    field: NumberField
    p: int
    factors: tuple[tuple[PolyModP, int], ...]   # (irreducible factor, ramification e)

    def residue_degrees(self) -> tuple[int, ...]:
        return tuple(g.degree() for g, _ in self.factors)

    def is_ramified(self) -> bool:
        return any(e > 1 for _, e in self.factors)


def split_prime(field: NumberField, p: int, *, allow_unverified: bool = False) -> PrimeSplit:
    """Splitting data of the rational prime p in the field.

    Raises NotPrime for composite p and UnverifiedAtP when the field's
    maximality at p is only assumed (p^2 | disc and no Dedekind certificate)
    unless allow_unverified is set.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if (field.maximality is Maximality.ASSUMED_BY_USER and not allow_unverified
            and field.disc % (p * p) == 0):
        raise UnverifiedAtP(
            f"maximality at p={p} is assumed, not verified; the split of f mod p "
            "describes Z[theta] but possibly not the maximal order")
    return _split_cached(field, p)


@lru_cache(maxsize=SPLIT_CACHE_SIZE)
def _split_cached(field: NumberField, p: int) -> PrimeSplit:
    factors = factor_mod_p(field.coeffs, p)
    wrapped = tuple((PolyModP(p, g), e) for g, e in factors)
    return PrimeSplit(field=field, p=p, factors=wrapped)


def reduce_elem(split: PrimeSplit, i: int, a: AlgElem) -> tuple[int, ...]:
    """Image of a in the residue field F_p[x]/(g_i), as a reduced coeff tuple.

    The power-basis coordinate vector of a is read as a polynomial in theta,
    theta maps to x, and the result is reduced mod (p, g_i).
    """
    if not 0 <= i < len(split.factors):
        raise IndexOutOfRange(
            f"factor index {i} out of range for {len(split.factors)} prime(s) above {split.p}")
    split.field._check(a)
    g = split.factors[i][0]
    return poly_mod(reduce_mod_p(a, split.p), g.coeffs, split.p)
