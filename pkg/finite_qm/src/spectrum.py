"""
Spectrum Reduction - From an energy spectrum to lattice data

Validates a non-degenerate, sorted energy spectrum and reduces it to:
- offset E_0 (the extracted lowest eigenvalue)
- unit eps, the largest rational dividing every shifted energy into integers
- coprime integer vector p with p[0] = 0
- modulus N = lcm of the nonzero p entries
- recurrence time and fundamental timestep, both in turns (multiples of 2*pi)

Conventions:
- p[0] = 0 is excluded from the coprimality condition and from the lcm.
- A one-level spectrum reduces to eps = 1, p = (0,), N = 1.
- Input must already be sorted; index k always matches the caller's label.

Usage:
    from spectrum import EnergySpectrum, reduce

    reduced = reduce(EnergySpectrum.from_values([0, 4, 9]))
    reduced.modulus_N     # 36
    reduced.step_turns    # Fraction(1, 36)
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .errors import FiniteQMError
from .numkernel import (
    RationalLike,
    format_rational,
    is_coprime_set,
    lcm_many,
    rational_gcd,
    rationalize,
    check_tolerance,
    significant_den_bound,
)

logger = logging.getLogger(__name__)


# =============================================================================
# DATA CLASSES
# =============================================================================

@dataclass(frozen=True)
class EnergySpectrum:
    """Ordered, strictly increasing eigenvalues E_0 < E_1 < ... < E_{D-1}."""

    energies: Tuple[Fraction, ...]

    def __post_init__(self):
        _validate_ordering(self.energies)

    @classmethod
    def from_values(cls, values: Sequence[RationalLike]) -> 'EnergySpectrum':
        """Create from ints / Fractions (floats go through reduce_floats)."""
        return cls(tuple(Fraction(v) for v in values))

    @property
    def dimension(self) -> int:
        return len(self.energies)

    def shifted_by(self, c: RationalLike) -> 'EnergySpectrum':
        return EnergySpectrum(tuple(e + Fraction(c) for e in self.energies))

    def scaled_by(self, s: RationalLike) -> 'EnergySpectrum':
        return EnergySpectrum(tuple(e * Fraction(s) for e in self.energies))


@dataclass(frozen=True)
class ReducedSpectrum:
    """
    Lattice data of a commensurable spectrum.

    Times are stored in turns: recur_turns = 1/eps means T_recur = 2*pi/eps.
    """

    offset: Fraction
    unit_eps: Fraction
    p: Tuple[int, ...]
    modulus_N: int
    recur_turns: Fraction
    step_turns: Fraction

    def __post_init__(self):
        if not self.p or self.p[0] != 0:
            raise SpectrumError("p[0] must be 0")
        if any(a >= b for a, b in zip(self.p, self.p[1:])):
            raise SpectrumError("p must be strictly increasing")
        if self.unit_eps <= 0:
            raise SpectrumError("unit_eps must be positive")
        nonzero = self.p[1:]
        if nonzero:
            if not is_coprime_set(nonzero):
                raise SpectrumError(f"nonzero p entries are not coprime: {nonzero}")
            if self.modulus_N != lcm_many(nonzero):
                raise SpectrumError("modulus_N must be the lcm of the nonzero p entries")
        elif self.modulus_N != 1:
            raise SpectrumError("a one-level spectrum has modulus_N = 1")
        if self.step_turns * self.modulus_N != self.recur_turns:
            raise SpectrumError("step_turns * modulus_N must equal recur_turns")

    @property
    def dimension(self) -> int:
        return len(self.p)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-friendly dict (rationals as text)."""
        return {
            'offset': format_rational(self.offset),
            'unit_eps': format_rational(self.unit_eps),
            'p': list(self.p),
            'modulus_N': self.modulus_N,
            'recur_turns': format_rational(self.recur_turns),
            'step_turns': format_rational(self.step_turns),
        }


@dataclass(frozen=True)
class Incommensurable:
    """Verdict: a shifted energy has no rational approximation within bounds."""

    index: int
    value: float
    tol: float
    max_den: int

    def describe(self) -> str:
        return (
            f"INCOMMENSURABLE: shifted energy #{self.index} ({self.value!r}) has no "
            f"rational within tol={self.tol!r} with denominator <= {self.max_den}"
        )


# =============================================================================
# OPERATIONS
# =============================================================================

def shift(spec: EnergySpectrum) -> List[Fraction]:
    """
    Shifted energies E_k - E_0; the first entry is exactly 0.

    Raises:
        DegenerateSpectrum, UnsortedSpectrum: If spec is invalid
    """
    _validate_ordering(spec.energies)
    ground = spec.energies[0]
    return [e - ground for e in spec.energies]


def reduce(spec: EnergySpectrum) -> ReducedSpectrum:
    """
    Reduce a valid spectrum to (offset, eps, p, N, T_recur, delta_t).

    Args:
        spec: Sorted, non-degenerate spectrum

    Returns:
        ReducedSpectrum satisfying all of its invariants

    Raises:
        DegenerateSpectrum: Duplicate eigenvalues
        UnsortedSpectrum: Eigenvalues not in increasing order
    """
    shifted = shift(spec)
    offset = spec.energies[0]
    nonzero = shifted[1:]

    if not nonzero:
        logger.debug("One-level spectrum: eps := 1, N := 1")
        return ReducedSpectrum(
            offset=offset,
            unit_eps=Fraction(1),
            p=(0,),
            modulus_N=1,
            recur_turns=Fraction(1),
            step_turns=Fraction(1),
        )

    eps = rational_gcd(nonzero)
    p = (0,) + tuple(int(e / eps) for e in nonzero)
    modulus = lcm_many(p[1:])
    recur = 1 / eps

    reduced = ReducedSpectrum(
        offset=offset,
        unit_eps=eps,
        p=p,
        modulus_N=modulus,
        recur_turns=recur,
        step_turns=recur / modulus,
    )
    logger.info(f"Reduced D={len(p)} spectrum: eps={format_rational(eps)}, N={modulus}")
    return reduced


def reduce_floats(
    values: Sequence[float],
    tol: float,
    max_den: int,
) -> Union[ReducedSpectrum, Incommensurable]:
    """
    Rationalize the shifted float energies, then reduce.

    Denominators are capped at significant_den_bound(tol, max_den), so an
    irrational gap cannot hide behind a huge-denominator convergent.

    The offset itself is rationalized with the same bounds when possible;
    otherwise its exact binary value is kept (it never affects p or N).

    Returns:
        ReducedSpectrum, or an Incommensurable verdict naming the first
        shifted energy with no rational approximation

    Raises:
        InvalidTolerance: If tol is not finite and positive
        DegenerateSpectrum, UnsortedSpectrum: If values are not strictly increasing
    """
    check_tolerance(tol)
    floats = [float(v) for v in values]
    if not floats:
        raise EmptySpectrum("spectrum has no energies")
    _validate_ordering(floats)

    ground = floats[0]
    shifted: List[Fraction] = [Fraction(0)]
    for index, value in enumerate(floats[1:], start=1):
        approx = rationalize(value - ground, tol, max_den)
        if approx is None:
            verdict = Incommensurable(
                index=index,
                value=value - ground,
                tol=tol,
                max_den=significant_den_bound(tol, max_den),
            )
            logger.info(verdict.describe())
            return verdict
        shifted.append(approx)

    offset: Optional[Fraction] = rationalize(ground, tol, max_den)
    if offset is None:
        logger.warning(f"Offset {ground!r} not rationalizable; keeping its exact binary value")
        offset = Fraction(ground)

    return reduce(EnergySpectrum(tuple(offset + s for s in shifted)))


def component_cycles(reduced: ReducedSpectrum) -> List[int]:
    """Steps after which component k's phase first returns: N / p_k (1 for k = 0)."""
    return [1 if pk == 0 else reduced.modulus_N // pk for pk in reduced.p]


def energies_of(reduced: ReducedSpectrum) -> List[Fraction]:
    """Reconstruct E_k = offset + eps * p_k."""
    return [reduced.offset + reduced.unit_eps * pk for pk in reduced.p]


def _validate_ordering(energies: Sequence[Union[Fraction, float]]) -> None:
    if len(energies) == 0:
        raise EmptySpectrum("spectrum has no energies")
    if any(isinstance(e, float) and not math.isfinite(e) for e in energies):
        raise SpectrumError("energies must be finite")
    if len(set(energies)) != len(energies):
        raise DegenerateSpectrum("duplicate eigenvalues (degenerate Hamiltonian)")
    for k, (a, b) in enumerate(zip(energies, energies[1:])):
        if a >= b:
            raise UnsortedSpectrum(f"E_{k} >= E_{k + 1}; spectra must be pre-sorted")


# =============================================================================
# EXCEPTIONS
# =============================================================================

class SpectrumError(FiniteQMError, ValueError):
    """Base exception for spectrum errors."""
    pass


class EmptySpectrum(SpectrumError):
    """Raised when a spectrum has no energies."""
    pass


class DegenerateSpectrum(SpectrumError):
    """Raised when two eigenvalues coincide."""
    pass


class UnsortedSpectrum(SpectrumError):
    """Raised when eigenvalues are not strictly increasing."""
    pass
