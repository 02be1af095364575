"""
Continuum - Floating-point reference for continuous Schrodinger evolution

Evaluates psi(t) = sum_k a_k exp(-i * eps * p_k * t) |k> in double precision
and compares it with lattice states. Times are passed in turns (t / 2*pi), so
the lattice time n * delta_t is simply n * reduced.step_turns and 2*pi only
appears inside `_phase_factors`.

Phase arguments are reduced mod 1 turn before the exponential. With an exact
Fraction time the reduction itself is exact, so very large step counts keep
full double accuracy.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable, Union

import numpy as np

from .errors import FiniteQMError
from .evolution import state_at
from .quantum_state import DimensionMismatch, DiscreteState, IntegerAmplitudes, phase_indices
from .spectrum import ReducedSpectrum

logger = logging.getLogger(__name__)

TimeTurns = Union[Fraction, int, float]


@dataclass(frozen=True, eq=False)
class ContinuousState:
    """Complex amplitudes at a time given in turns."""

    components: np.ndarray
    time_turns: TimeTurns

    @property
    def dimension(self) -> int:
        return len(self.components)

    def norm_sq(self) -> float:
        return float(np.vdot(self.components, self.components).real)


def _phase_factors(turns: np.ndarray) -> np.ndarray:
    """exp(-2*pi*i * turns) for turns already reduced to [0, 1)."""
    return np.exp(-2j * np.pi * turns)


def continuous_at(amps: IntegerAmplitudes, spec: ReducedSpectrum, time_turns: TimeTurns) -> ContinuousState:
    """
    Continuous evolution of real amplitudes `amps` after `time_turns` turns.

    Component k carries phase -2*pi * eps * p_k * time_turns; at
    time_turns = n * step_turns this is -2*pi * n * p_k / N.

    Raises:
        NonFiniteTime: If a float time is NaN or infinite
        DimensionMismatch: If amps and spec differ in length
    """
    if amps.dimension != spec.dimension:
        raise DimensionMismatch(f"{amps.dimension} amplitudes for a D={spec.dimension} spectrum")

    if isinstance(time_turns, (Fraction, int)):
        exact_time = Fraction(time_turns)
        reduced = [float((spec.unit_eps * pk * exact_time) % 1) for pk in spec.p]
        turns = np.array(reduced, dtype=np.float64)
    else:
        if not isinstance(time_turns, Real) or not math.isfinite(time_turns):
            raise NonFiniteTime(f"time must be finite, got {time_turns!r}")
        rates = np.array([float(spec.unit_eps * pk) for pk in spec.p], dtype=np.float64)
        turns = np.mod(rates * float(time_turns), 1.0)

    components = np.array(amps.amps, dtype=np.float64) * _phase_factors(turns)
    return ContinuousState(components=components, time_turns=time_turns)


def lattice_vector(state: DiscreteState) -> np.ndarray:
    """Float image of a lattice state: a_k * exp(-2*pi*i * m_k / N)."""
    modulus = state.spectrum.modulus_N
    turns = np.array([m / modulus for m in phase_indices(state)], dtype=np.float64)
    return np.array(state.amps, dtype=np.float64) * _phase_factors(turns)


def fidelity(d: DiscreteState, c: ContinuousState) -> float:
    """
    |<c|d>|**2 / (|c|**2 * |d|**2), in [0, 1].

    Raises:
        DimensionMismatch: If the states differ in component count
    """
    if d.dimension != c.dimension:
        raise DimensionMismatch(f"discrete D={d.dimension} vs continuous D={c.dimension}")

    vector = lattice_vector(d)
    overlap = np.vdot(c.components, vector)
    norms = np.vdot(c.components, c.components).real * np.vdot(vector, vector).real
    return float(min(1.0, abs(overlap) ** 2 / norms))


def max_lattice_deviation(amps: IntegerAmplitudes, spec: ReducedSpectrum, sample: Iterable[int]) -> float:
    """
    Largest 1 - fidelity between state_at(n) and continuous evolution at n * delta_t.

    Raises:
        EmptySample: If sample has no steps
    """
    steps = list(sample)
    if not steps:
        raise EmptySample("sample must contain at least one step")

    base = DiscreteState(amps, spec, 0)
    worst = 0.0
    for n in steps:
        deviation = 1.0 - fidelity(state_at(base, n), continuous_at(amps, spec, n * spec.step_turns))
        worst = max(worst, deviation)
    logger.debug(f"Max lattice deviation over {len(steps)} steps: {worst:.3e}")
    return worst


# =============================================================================
# EXCEPTIONS
# =============================================================================

class ContinuumError(FiniteQMError, ValueError):
    """Base exception for continuum errors."""
    pass


class NonFiniteTime(ContinuumError):
    """Raised when an evaluation time is NaN or infinite."""
    pass


class EmptySample(ContinuumError):
    """Raised when a deviation is requested over no steps."""
    pass
