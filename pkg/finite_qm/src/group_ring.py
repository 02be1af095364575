"""
Group Ring Accumulator - Exact sums of N-th roots of unity

A GroupRingElement is an integer coefficient vector over Z_N standing for
    sum_j coeffs[j] * zeta**j,   zeta = exp(-2*pi*i / N).

Only the relation zeta**N = 1 is applied (no cyclotomic reduction), so two
different coefficient vectors may represent the same algebraic number; e.g.
(1, 0, 1, 0) at N = 4 is zero. Equality of states is therefore never decided
on group-ring forms. Elements are accumulators for inner products and feed
`embed`, which returns a numeric value with a rigorous error radius.

Coefficients are stored sparsely as sorted (j, c) pairs with c != 0; `coeffs`
gives the dense length-N view.
"""

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

from mpmath import iv, mp, mpc, mpf

from .errors import FiniteQMError

logger = logging.getLogger(__name__)

MIN_PRECISION_BITS = 53

# mpmath precision is context-global; every change of it happens under this lock
_PRECISION_LOCK = threading.RLock()

# zeta**j for N = 4 as Gaussian integers: zeta = -i
_QUARTER_TURNS = {0: (1, 0), 1: (0, -1), 2: (-1, 0), 3: (0, 1)}


@dataclass(frozen=True)
class GroupRingElement:
    """Integer combination of N-th roots of unity, stored sparsely."""

    modulus: int
    terms: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.modulus < 1:
            raise GroupRingError(f"modulus must be >= 1, got {self.modulus}")
        for j, c in self.terms:
            if not 0 <= j < self.modulus or c == 0:
                raise GroupRingError(f"bad term ({j}, {c}) for modulus {self.modulus}")

    @classmethod
    def from_terms(cls, modulus: int, pairs: Iterable[Tuple[int, int]]) -> 'GroupRingElement':
        """Accumulate (j, c) pairs, reducing j mod N and dropping zero sums."""
        acc: Dict[int, int] = {}
        for j, c in pairs:
            index = j % modulus
            acc[index] = acc.get(index, 0) + c
        return cls(modulus, tuple(sorted((j, c) for j, c in acc.items() if c != 0)))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> 'GroupRingElement':
        """Build from a dense coefficient list; the modulus is len(coeffs)."""
        return cls.from_terms(len(coeffs), enumerate(coeffs))

    @property
    def coeffs(self) -> Tuple[int, ...]:
        """Dense coefficient vector of length N."""
        dense = [0] * self.modulus
        for j, c in self.terms:
            dense[j] = c
        return tuple(dense)

    def coefficient(self, j: int) -> int:
        for index, c in self.terms:
            if index == j % self.modulus:
                return c
        return 0

    def support(self) -> Tuple[int, ...]:
        return tuple(j for j, _ in self.terms)

    def is_zero_vector(self) -> bool:
        """True when every coefficient is 0 (sufficient, not necessary, for value 0)."""
        return not self.terms

    def __add__(self, other: 'GroupRingElement') -> 'GroupRingElement':
        if self.modulus != other.modulus:
            raise GroupRingError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
        return GroupRingElement.from_terms(self.modulus, self.terms + other.terms)

    def exact_gaussian(self) -> Optional[Tuple[int, int]]:
        """
        Exact value as a Gaussian integer (re, im) when N divides 4.

        For N in {1, 2, 4} every N-th root of unity lies in Z[i]; for any
        other modulus this returns None.
        """
        if 4 % self.modulus != 0:
            return None
        step = 4 // self.modulus
        re = im = 0
        for j, c in self.terms:
            unit_re, unit_im = _QUARTER_TURNS[(j * step) % 4]
            re += c * unit_re
            im += c * unit_im
        return re, im


@dataclass(frozen=True)
class ComplexInterval:
    """A complex midpoint and a radius; the true value lies in the closed disc."""

    value: mpc
    radius: mpf
    precision: int

    def contains(self, z, slack=0) -> bool:
        with working_precision(self.precision + 32):
            return abs(mpc(z) - self.value) <= self.radius + slack

    def as_complex(self) -> complex:
        return complex(self.value)


def embed(x: GroupRingElement, precision: int = 128) -> ComplexInterval:
    """
    Numeric image sum_j coeffs[j] * exp(-2*pi*i*j/N) with a rigorous radius.

    Evaluation runs in mpmath interval arithmetic at `precision` bits; the
    returned radius encloses the interval result, so it bounds the distance
    from the midpoint to the true algebraic value and shrinks as precision
    grows.

    Args:
        x: Group-ring element
        precision: Working precision in bits, >= 53

    Raises:
        InvalidPrecision: If precision < 53
    """
    if precision < MIN_PRECISION_BITS:
        raise InvalidPrecision(f"precision must be >= {MIN_PRECISION_BITS} bits, got {precision}")

    if x.is_zero_vector():
        return ComplexInterval(value=mpc(0), radius=mpf(0), precision=precision)

    with working_precision(precision):
        re_part = iv.mpf(0)
        im_part = iv.mpf(0)
        for j, c in x.terms:
            angle = 2 * iv.pi * (iv.mpf(j) / x.modulus)
            re_part += c * iv.cos(angle)
            im_part -= c * iv.sin(angle)

        with mp.workprec(precision + 32):
            re_lo, re_hi = _endpoints(re_part)
            im_lo, im_hi = _endpoints(im_part)
            re_mid = (re_lo + re_hi) / 2
            im_mid = (im_lo + im_hi) / 2
            half_re = max(re_hi - re_mid, re_mid - re_lo)
            half_im = max(im_hi - im_mid, im_mid - im_lo)
            # outward margin for the rounding of the midpoint arithmetic
            radius = (half_re + half_im) * (1 + mpf(2) ** (-precision))
            value = mpc(re_mid, im_mid)

    logger.debug(f"Embedded {len(x.terms)} terms mod {x.modulus} at {precision} bits")
    return ComplexInterval(value=value, radius=radius, precision=precision)


def _endpoints(x) -> Tuple[mpf, mpf]:
    """Lower and upper endpoint of an iv interval as plain mpf values."""
    lo, hi = x._mpi_
    return mp.make_mpf(lo), mp.make_mpf(hi)


@contextmanager
def working_precision(bits: int):
    """Set mpmath's mp and iv precision to `bits` for the enclosed block."""
    with _PRECISION_LOCK:
        saved_iv_prec = iv.prec
        iv.prec = bits
        try:
            with mp.workprec(bits):
                yield
        finally:
            iv.prec = saved_iv_prec


# =============================================================================
# EXCEPTIONS
# =============================================================================

class GroupRingError(FiniteQMError, ValueError):
    """Base exception for group-ring errors."""
    pass


class InvalidPrecision(GroupRingError):
    """Raised when an embedding precision is below double precision."""
    pass
