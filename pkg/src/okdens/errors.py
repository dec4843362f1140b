"""Exception types raised across the package.

Every error carries enough context in its message to be actionable from the
command line; the CLI maps any OkdensError to exit status 2.
"""


class OkdensError(Exception):
    """Base class for all package-specific errors."""


class NotMonic(OkdensError):
    """Defining polynomial is not monic."""


class NotSquarefree(OkdensError):
    """Defining polynomial has a repeated root (discriminant zero)."""


class HasRationalRoot(OkdensError):
    """Defining polynomial of degree >= 2 has a rational (integer) root."""


class IrreducibilityUnverified(OkdensError):
    """No small-prime irreducibility certificate found and no override given."""


class NotMaximal(OkdensError):
    """Z[theta] is provably not the maximal order at some prime."""


class DegreeMismatch(OkdensError):
    """Element coordinate vector has the wrong length for the field."""


class NotPrime(OkdensError):
    """Argument expected to be a rational prime is not."""


class ZeroPolynomial(OkdensError):
    """Polynomial operand must be nonzero."""


class BadShape(OkdensError):
    """Matrix dimensions violate an operation's precondition."""


class BadBound(OkdensError):
    """Numeric bound parameter out of range (box half-width, prime bound, ...)."""


class BadExponent(OkdensError):
    """Euler factor exponent below the convergent range (s >= 2 required)."""


class IndexOutOfRange(OkdensError):
    """Prime-ideal index does not address a factor of the given split."""


class UnverifiedAtP(OkdensError):
    """Operation requires maximality at p but the field is only assumed maximal there."""


class FactorizationTooHard(OkdensError):
    """Integer factorization exceeded the configured work budget."""


class BudgetExceeded(OkdensError):
    """Requested exhaustive enumeration is larger than the allowed budget."""
