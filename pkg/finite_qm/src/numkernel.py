"""
Number Kernel - Exact arithmetic foundation for the lattice simulator

Provides:
1. Unbounded integers and canonical rationals (Python int / fractions.Fraction)
2. gcd / lcm helpers with the edge-case conventions the reducer relies on
3. rational_gcd - the largest rational dividing a set of rationals into integers
4. rationalize - best rational approximation of a float under tol / max_den,
   with the denominator capped where a close match stops meaning anything
5. The shared rational text grammar: `num/den` or a bare integer

All values are immutable and every function is pure.

Usage:
    from numkernel import lcm_many, rational_gcd, rationalize

    lcm_many([4, 9])                       # 36
    rational_gcd([Fraction(1, 6), Fraction(1, 2)])   # Fraction(1, 6)
    rationalize(0.333333333333, 1e-9, 10**6)          # Fraction(1, 3)
"""

import logging
import math
import re
from fractions import Fraction
from functools import reduce
from numbers import Real
from typing import Iterable, List, Optional, Sequence, Union

from .errors import FiniteQMError

logger = logging.getLogger(__name__)

# Type aliases
Unbounded = int
Rational = Fraction
RationalLike = Union[int, Fraction]

# Shared text grammar: optional sign, digits, optional /digits
_RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")


# =============================================================================
# INTEGER HELPERS
# =============================================================================

def gcd(a: Unbounded, b: Unbounded) -> Unbounded:
    """Nonnegative greatest common divisor; gcd(0, 0) == 0."""
    return math.gcd(a, b)


def lcm_many(xs: Sequence[Unbounded]) -> Unbounded:
    """
    Least common multiple of a nonempty list of positive integers.

    Args:
        xs: Strictly positive integers

    Returns:
        The lcm, divisible by every entry

    Raises:
        EmptyList: If xs is empty
        NonPositiveEntry: If any entry is <= 0
    """
    values = list(xs)
    if not values:
        raise EmptyList("lcm_many requires at least one entry")
    for value in values:
        if value <= 0:
            raise NonPositiveEntry(f"lcm_many entries must be positive, got {value}")
    return math.lcm(*values)


def is_coprime_set(xs: Iterable[Unbounded]) -> bool:
    """True when the collective gcd of xs is 1."""
    return reduce(math.gcd, xs, 0) == 1


# =============================================================================
# RATIONAL HELPERS
# =============================================================================

def rational_gcd(xs: Sequence[RationalLike]) -> Rational:
    """
    Largest rational g such that every xs[i] / g is a positive integer.

    For canonical fractions a_i/b_i this is gcd(a_i) / lcm(b_i); the
    quotients xs[i] / g then have collective gcd 1.

    Args:
        xs: Strictly positive rationals

    Returns:
        The rational gcd

    Raises:
        EmptyList: If xs is empty
        NonPositiveEntry: If any entry is <= 0
    """
    values = [Fraction(x) for x in xs]
    if not values:
        raise EmptyList("rational_gcd requires at least one entry")
    for value in values:
        if value <= 0:
            raise NonPositiveEntry(f"rational_gcd entries must be positive, got {value}")

    numerator_gcd = reduce(math.gcd, (v.numerator for v in values), 0)
    denominator_lcm = math.lcm(*(v.denominator for v in values))
    return Fraction(numerator_gcd, denominator_lcm)


def significant_den_bound(tol: float, max_den: Unbounded) -> Unbounded:
    """
    Largest denominator at which a match within tol still says something.

    Every real x has p/q with |x - p/q| < 1/q**2, so once q**2 exceeds 1/tol
    a close fraction exists whether or not x is rational. The bound is
    min(max_den, isqrt(floor(1/tol))), and at least 1.

    Raises:
        InvalidTolerance: If tol is not a finite positive number
        InvalidDenominatorBound: If max_den < 1
    """
    check_tolerance(tol)
    if int(max_den) != max_den or max_den < 1:
        raise InvalidDenominatorBound(f"max_den must be an integer >= 1, got {max_den}")
    return max(1, min(int(max_den), math.isqrt(math.floor(1 / Fraction(tol)))))


def rationalize(x: Real, tol: float, max_den: Unbounded) -> Optional[Rational]:
    """
    Best rational approximation p/q of x with bounded q, if within tol.

    The candidate is the closest fraction with denominator at most
    significant_den_bound(tol, max_den), which Fraction.limit_denominator
    finds from the continued-fraction convergents (and semiconvergents) of
    the exact binary value of x. Capping q there keeps irrationals such as
    sqrt(2) from matching a huge-denominator convergent.

    Args:
        x: Real value (float, int, Fraction or Decimal)
        tol: Absolute tolerance, > 0
        max_den: Largest admissible denominator, >= 1

    Returns:
        The rational, or None when no fraction within bounds is close enough
        (including non-finite x)

    Raises:
        InvalidTolerance: If tol is not a finite positive number
        InvalidDenominatorBound: If max_den < 1
    """
    bound = significant_den_bound(tol, max_den)

    if isinstance(x, float) and not math.isfinite(x):
        return None

    exact = Fraction(x)
    candidate = exact.limit_denominator(bound)
    if abs(exact - candidate) <= Fraction(tol):
        return candidate

    logger.debug(f"No rational within tol={tol} and denominator <= {bound} for x={x!r}")
    return None


def check_tolerance(tol: float) -> None:
    try:
        valid = math.isfinite(tol) and tol > 0
    except TypeError:
        valid = False
    if not valid:
        raise InvalidTolerance(f"tol must be a finite positive number, got {tol!r}")


# =============================================================================
# TEXT GRAMMAR
# =============================================================================

def parse_rational(text: str) -> Rational:
    """
    Parse `num/den` (optional sign on num) or a bare integer.

    Whitespace anywhere in the token is ignored.

    Raises:
        RationalParseError: On anything outside the grammar or a zero denominator
    """
    compact = "".join(text.split())
    if not _RATIONAL_PATTERN.match(compact):
        raise RationalParseError(f"Not a rational: {text!r}")

    if "/" in compact:
        num_text, den_text = compact.split("/")
        den = int(den_text)
        if den == 0:
            raise RationalParseError(f"Zero denominator: {text!r}")
        return Fraction(int(num_text), den)
    return Fraction(int(compact))


def is_rational_text(text: str) -> bool:
    """True when text matches the rational grammar."""
    return bool(_RATIONAL_PATTERN.match("".join(text.split())))


def format_rational(value: RationalLike) -> str:
    """Canonical print form: `num/den`, or the bare integer when den == 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_rationals(values: Iterable[RationalLike]) -> List[str]:
    return [format_rational(v) for v in values]


# =============================================================================
# EXCEPTIONS
# =============================================================================

class NumKernelError(FiniteQMError, ValueError):
    """Base exception for exact-arithmetic errors."""
    pass


class EmptyList(NumKernelError):
    """Raised when an aggregate is requested over an empty list."""
    pass


class NonPositiveEntry(NumKernelError):
    """Raised when an lcm/gcd input that must be positive is not."""
    pass


class InvalidTolerance(NumKernelError):
    """Raised when a tolerance is not a finite positive number."""
    pass


class InvalidDenominatorBound(NumKernelError):
    """Raised when max_den is below 1."""
    pass


class RationalParseError(NumKernelError):
    """Raised when text does not match the rational grammar."""
    pass
