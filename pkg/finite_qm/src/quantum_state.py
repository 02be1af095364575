"""
Quantum State - Integer amplitudes on the phase lattice

Provides:
1. IntegerAmplitudes - amplitudes scaled by their least common denominator L
2. DiscreteState - amplitudes + reduced spectrum + step counter n
3. Born rule in the energy eigenbasis (exact) and against analysis states
   (exact fast paths, otherwise an interval from the group-ring embedding)
4. ray_equal - equality up to a lattice global phase and positive rescaling

The phase of component k at step n is the lattice point m_k = n * p_k mod N
in units of turns / N. Amplitudes are real; a negative amplitude counts as a
phase shift of N/2 when N is even. Nothing is renormalized: probabilities
divide by norm_sq.

Usage:
    from quantum_state import DiscreteState, integerize, born_eigen

    amps = integerize([Fraction(3, 5), Fraction(4, 5)])
    state = DiscreteState(amps, reduced, step=0)
    born_eigen(state, 0)      # Fraction(9, 25)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpf

from .errors import FiniteQMError
from .group_ring import GroupRingElement, embed, working_precision
from .numkernel import RationalLike, format_rational, rationalize
from .spectrum import ReducedSpectrum

logger = logging.getLogger(__name__)


# =============================================================================
# DATA CLASSES
# =============================================================================

@dataclass(frozen=True)
class IntegerAmplitudes:
    """
    Integer amplitudes a_k = L * alpha_k.

    norm_sq = sum a_k**2; for normalized alpha it equals L**2.
    """

    amps: Tuple[int, ...]
    norm_sq: int
    scale_L: int = 1

    def __post_init__(self):
        if not any(self.amps):
            raise AllZeroAmplitudes("at least one amplitude must be nonzero")
        if self.norm_sq != sum(a * a for a in self.amps):
            raise QuantumStateError("norm_sq must equal the sum of squared amplitudes")

    @classmethod
    def from_ints(cls, amps: Sequence[int]) -> 'IntegerAmplitudes':
        values = tuple(int(a) for a in amps)
        if not any(values):
            raise AllZeroAmplitudes("at least one amplitude must be nonzero")
        return cls(values, sum(a * a for a in values), 1)

    @property
    def dimension(self) -> int:
        return len(self.amps)

    def support(self) -> Tuple[int, ...]:
        """Indices with a nonzero amplitude."""
        return tuple(k for k, a in enumerate(self.amps) if a != 0)

    def scaled(self, c: int) -> 'IntegerAmplitudes':
        return IntegerAmplitudes.from_ints([c * a for a in self.amps])

    def to_dict(self) -> Dict[str, Any]:
        return {'amps': list(self.amps), 'norm_sq': self.norm_sq, 'scale_L': self.scale_L}


@dataclass(frozen=True)
class DiscreteState:
    """A lattice state: amplitudes bound to a spectrum at timestep `step`."""

    amplitudes: IntegerAmplitudes
    spectrum: ReducedSpectrum
    step: int = 0

    def __post_init__(self):
        if self.amplitudes.dimension != self.spectrum.dimension:
            raise DimensionMismatch(
                f"{self.amplitudes.dimension} amplitudes for a D={self.spectrum.dimension} spectrum"
            )

    @property
    def amps(self) -> Tuple[int, ...]:
        return self.amplitudes.amps

    @property
    def dimension(self) -> int:
        return self.spectrum.dimension

    @property
    def modulus(self) -> int:
        return self.spectrum.modulus_N

    def at_step(self, n: int) -> 'DiscreteState':
        return replace(self, step=n)


@dataclass(frozen=True)
class BornProbability:
    """
    A Born probability: exact rational when available, else value +/- radius.

    The true value always lies in [value - radius, value + radius].
    """

    value: mpf
    radius: mpf
    exact: Optional[Fraction] = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def contains(self, x) -> bool:
        if self.exact is not None:
            return Fraction(x) == self.exact
        return abs(mpf(x) - self.value) <= self.radius

    def describe(self) -> str:
        if self.exact is not None:
            return format_rational(self.exact)
        return f"{mp.nstr(self.value, 17)} ± {mp.nstr(self.radius, 3)}"


# =============================================================================
# AMPLITUDES
# =============================================================================

def integerize(alphas: Sequence[RationalLike]) -> IntegerAmplitudes:
    """
    Multiply rational amplitudes by their least common denominator L.

    No further division happens: amps keep whatever common factor the input
    implied.

    Raises:
        AllZeroAmplitudes: If every alpha is zero
    """
    values = [Fraction(a) for a in alphas]
    if not any(values):
        raise AllZeroAmplitudes("at least one amplitude must be nonzero")
    scale = math.lcm(*(v.denominator for v in values))
    amps = tuple(int(v * scale) for v in values)
    return IntegerAmplitudes(amps, sum(a * a for a in amps), scale)


def rationalize_amplitudes(
    values: Sequence[float],
    tol: float,
    max_den: int,
) -> Optional[IntegerAmplitudes]:
    """Integerize float amplitudes when all of them are commensurable, else None."""
    rationals = []
    for k, value in enumerate(values):
        approx = rationalize(value, tol, max_den)
        if approx is None:
            logger.info(f"Amplitude #{k} ({value!r}) has no rational within bounds")
            return None
        rationals.append(approx)
    return integerize(rationals)


# =============================================================================
# LATTICE PHASES AND BORN RULE
# =============================================================================

def phase_indices(state: DiscreteState) -> Tuple[int, ...]:
    """m_k = step * p_k mod N for every component; entry 0 is always 0."""
    modulus = state.spectrum.modulus_N
    return tuple((state.step * pk) % modulus for pk in state.spectrum.p)


def born_eigen(state: DiscreteState, k: int) -> Fraction:
    """
    Probability of energy eigenstate k: amps[k]**2 / norm_sq.

    Independent of the step.

    Raises:
        IndexOutOfRange: If k is not in [0, D)
    """
    if not 0 <= k < state.dimension:
        raise IndexOutOfRange(f"eigenstate index {k} outside [0, {state.dimension})")
    return Fraction(state.amps[k] ** 2, state.amplitudes.norm_sq)


def gr_inner(state: DiscreteState, analysis: DiscreteState) -> GroupRingElement:
    """
    Exact <analysis|state> as a group-ring element.

    Coefficient j collects analysis.amps[k] * state.amps[k] over the k with
    m_k(state) - m_k(analysis) = j (mod N).

    Raises:
        SpectrumMismatch: If the states are bound to different spectra
    """
    _require_shared_spectrum(state, analysis)
    modulus = state.spectrum.modulus_N
    psi_phases = phase_indices(state)
    a_phases = phase_indices(analysis)
    return GroupRingElement.from_terms(
        modulus,
        (
            ((m_psi - m_a) % modulus, a * psi)
            for a, psi, m_psi, m_a in zip(analysis.amps, state.amps, psi_phases, a_phases)
            if a != 0 and psi != 0
        ),
    )


def born(state: DiscreteState, analysis: DiscreteState, precision: int = 128) -> BornProbability:
    """
    Born probability |<a|psi>|**2 / (norm_sq(psi) * norm_sq(a)).

    Exact when the inner product is the zero vector, has a single nonzero
    coefficient, or N divides 4; otherwise an interval propagated from the
    embedding's error radius.

    Raises:
        SpectrumMismatch: If the states are bound to different spectra
    """
    inner = gr_inner(state, analysis)
    denominator = state.amplitudes.norm_sq * analysis.amplitudes.norm_sq

    exact: Optional[Fraction] = None
    if inner.is_zero_vector():
        exact = Fraction(0)
    elif len(inner.terms) == 1:
        (_, c), = inner.terms
        exact = Fraction(c * c, denominator)
    else:
        gaussian = inner.exact_gaussian()
        if gaussian is not None:
            re, im = gaussian
            exact = Fraction(re * re + im * im, denominator)

    if exact is not None:
        with working_precision(precision):
            value = mpf(exact.numerator) / exact.denominator
        return BornProbability(value=value, radius=mpf(0), exact=exact)

    image = embed(inner, precision)
    with working_precision(precision + 32):
        magnitude = abs(image.value)
        value = magnitude ** 2 / denominator
        radius = (2 * magnitude * image.radius + image.radius ** 2) / denominator
        radius *= 1 + mpf(2) ** (-precision)
    return BornProbability(value=value, radius=radius)


def born_batch(
    state: DiscreteState,
    analyses: Sequence[DiscreteState],
    precision: int = 128,
    max_workers: int = 4,
) -> List[BornProbability]:
    """Born probabilities against many analysis states; results in input order."""
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(lambda a: born(state, a, precision), analyses))


def ray_equal(s1: DiscreteState, s2: DiscreteState) -> bool:
    """
    Equality up to a lattice global phase j and a positive rational scale c.

    Component data is compared as (|amp|, phase index), where a negative
    amplitude adds N/2 to the phase index. Zero components carry no phase.

    Raises:
        SpectrumMismatch: If the states are bound to different spectra
        OddModulusSignFlip: If N is odd and the states differ by an overall
            sign, which is not a lattice phase
    """
    _require_shared_spectrum(s1, s2)
    modulus = s1.spectrum.modulus_N
    support = s1.amplitudes.support()
    if support != s2.amplitudes.support():
        return False

    first = support[0]
    scale = Fraction(abs(s2.amps[first]), abs(s1.amps[first]))
    if any(Fraction(abs(s2.amps[k]), abs(s1.amps[k])) != scale for k in support):
        return False

    phases1 = phase_indices(s1)
    phases2 = phase_indices(s2)
    sign_flips = [(s1.amps[k] < 0) != (s2.amps[k] < 0) for k in support]

    if modulus % 2 == 1:
        if any(sign_flips) and not all(sign_flips):
            return False
        shifts = {(phases2[k] - phases1[k]) % modulus for k in support}
        if all(sign_flips) and len(shifts) == 1:
            raise OddModulusSignFlip(
                f"states differ by an overall sign, which is not a phase of the N={modulus} lattice"
            )
        return len(shifts) == 1

    half = modulus // 2
    shifts = {
        (phases2[k] - phases1[k] + (half if flip else 0)) % modulus
        for k, flip in zip(support, sign_flips)
    }
    return len(shifts) == 1


def _require_shared_spectrum(a: DiscreteState, b: DiscreteState) -> None:
    if a.spectrum != b.spectrum:
        raise SpectrumMismatch("states are bound to different spectra")


# =============================================================================
# EXCEPTIONS
# =============================================================================

class QuantumStateError(FiniteQMError, ValueError):
    """Base exception for state errors."""
    pass


class AllZeroAmplitudes(QuantumStateError):
    """Raised when every amplitude is zero."""
    pass


class IndexOutOfRange(QuantumStateError, IndexError):
    """Raised when an eigenstate index is outside [0, D)."""
    pass


class SpectrumMismatch(QuantumStateError):
    """Raised when two states are bound to different spectra."""
    pass


class DimensionMismatch(QuantumStateError):
    """Raised when component counts disagree."""
    pass


class OddModulusSignFlip(QuantumStateError):
    """Raised when an overall sign flip would have to be a phase of an odd lattice."""
    pass
