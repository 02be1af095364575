"""
Evolution - Discrete time evolution on the phase torus

Stepping is a translation of the phase lattice: after n steps component k
sits at m_k = n * p_k mod N. Because of this, random access costs O(D)
modular multiplications regardless of n, and every period question reduces
to divisibility:

    minimal period  N_eff = N / gcd(N, p_k for k in the amplitude support)
    ray period            = N / gcd(N, p_k - p_f for k in the support)

where f is the first support index. Enumerating scans (recurrence
minimality, distinct-state counts) cross-check the closed forms and are
bounded by an enumeration cap.

Usage:
    from evolution import state_at, minimal_period, trajectory

    later = state_at(state, 10**18)
    minimal_period(state)                 # 36 for p = (0, 4, 9)
    trajectory(state, start=0, count=36)  # 36 torus points
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Any, Dict, FrozenSet, List, Tuple

import numpy as np

from .errors import EXIT_CAP_EXCEEDED, FiniteQMError
from .numkernel import format_rational
from .quantum_state import DiscreteState, phase_indices

logger = logging.getLogger(__name__)

DEFAULT_CAP = 10 ** 6

# n * p_k stays inside int64 when both factors are below 2**31
_INT64_SAFE_MODULUS = 2 ** 31
_SCAN_CHUNK = 1 << 16


class EqualityMode(str, Enum):
    """How two states on the same orbit are compared."""
    STRICT = "strict"
    RAY = "ray"


# =============================================================================
# DATA CLASSES
# =============================================================================

@dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    turns: Tuple[Fraction, ...]


@dataclass
class Trajectory:
    """Torus points for consecutive steps; turns are exact m_k / N in [0, 1)."""

    modulus: int
    points: List[TrajectoryPoint] = field(default_factory=list)
    includes_ground: bool = True

    def __len__(self) -> int:
        return len(self.points)

    @property
    def free_dimension(self) -> int:
        """Number of coordinates per point."""
        return len(self.points[0].turns) if self.points else 0

    def distinct_points(self) -> FrozenSet[Tuple[Fraction, ...]]:
        return frozenset(point.turns for point in self.points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'modulus': self.modulus,
            'includes_ground': self.includes_ground,
            'points': [
                {'step': point.step, 'turns': [format_rational(t) for t in point.turns]}
                for point in self.points
            ],
        }


# =============================================================================
# STEPPING
# =============================================================================

def step(state: DiscreteState, count: int) -> DiscreteState:
    """Advance by `count` timesteps; negative counts run the evolution backwards."""
    return state.at_step(state.step + count)


def state_at(base: DiscreteState, n: int) -> DiscreteState:
    """The state at absolute step n (phases follow by modular multiplication)."""
    return base.at_step(n)


# =============================================================================
# PERIODS
# =============================================================================

def minimal_period(state: DiscreteState) -> int:
    """
    Smallest n > 0 with state_at(n) equal to state_at(0) as a vector.

    Components with a zero amplitude do not constrain the period; an
    eigenstate of k = 0 alone is stationary (period 1). Always divides N and
    equals N under full support.
    """
    modulus = state.spectrum.modulus_N
    support_p = [state.spectrum.p[k] for k in state.amplitudes.support()]
    return modulus // math.gcd(modulus, reduce(math.gcd, support_p, 0))


def ray_period(state: DiscreteState) -> int:
    """Smallest n > 0 after which the state returns up to a global lattice phase."""
    modulus = state.spectrum.modulus_N
    support = state.amplitudes.support()
    anchor = state.spectrum.p[support[0]]
    differences = [state.spectrum.p[k] - anchor for k in support]
    return modulus // math.gcd(modulus, reduce(math.gcd, differences, 0))


def verify_recurrence(state: DiscreteState, cap: int = DEFAULT_CAP) -> bool:
    """
    Check that the state recurs after N_eff steps and not before.

    Recurrence at N_eff is checked directly on the phase indices. Minimality
    is checked by scanning every 0 < n < N_eff, which is only attempted when
    N_eff <= cap.

    Raises:
        CapExceeded: If N_eff > cap; `recurrence_holds` records the direct
            check, minimality stays unverified
    """
    period = minimal_period(state)
    support = state.amplitudes.support()
    returns = _phases_on(state_at(state, state.step + period), support) == _phases_on(state, support)

    if period > cap:
        logger.warning(f"N_eff={period} exceeds cap={cap}; minimality not scanned")
        raise CapExceeded(
            f"minimal period {period} exceeds enumeration cap {cap}",
            period=period,
            cap=cap,
            recurrence_holds=returns,
        )
    if not returns:
        return False

    early = _first_return(state, period)
    if early is not None:
        logger.info(f"State returns early at n={early} < N_eff={period}")
        return False
    return True


def _phases_on(state: DiscreteState, support: Tuple[int, ...]) -> Tuple[int, ...]:
    phases = phase_indices(state)
    return tuple(phases[k] for k in support)


def _first_return(state: DiscreteState, limit: int):
    """Smallest 0 < n < limit at which every support phase is back at 0, else None."""
    modulus = state.spectrum.modulus_N
    support_p = [state.spectrum.p[k] for k in state.amplitudes.support() if state.spectrum.p[k]]
    if not support_p:
        return None

    if modulus < _INT64_SAFE_MODULUS:
        weights = np.array(support_p, dtype=np.int64)
        for lo in range(1, limit, _SCAN_CHUNK):
            steps = np.arange(lo, min(lo + _SCAN_CHUNK, limit), dtype=np.int64)
            back = np.all((steps[:, None] * weights[None, :]) % modulus == 0, axis=1)
            hits = np.flatnonzero(back)
            if hits.size:
                return int(steps[hits[0]])
        return None

    for n in range(1, limit):
        if all((n * pk) % modulus == 0 for pk in support_p):
            return n
    return None


# =============================================================================
# DISTINCT STATES
# =============================================================================

def distinct_states(
    state: DiscreteState,
    mode: EqualityMode = EqualityMode.STRICT,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> int:
    """
    Count pairwise-distinct states over one full period by enumeration.

    Strict mode compares vectors (phases on the amplitude support). Ray mode
    compares up to a global lattice phase; along one orbit the amplitudes
    never change, so this is the phase pattern relative to the first support
    component. The step range is split across `workers` threads; the count
    does not depend on the split.

    Raises:
        CapExceeded: If N_eff > cap
    """
    mode = EqualityMode(mode)
    period = minimal_period(state)
    if period > cap:
        raise CapExceeded(
            f"enumerating {period} states exceeds cap {cap}",
            period=period,
            cap=cap,
            recurrence_holds=True,
        )

    modulus = state.spectrum.modulus_N
    support_p = [state.spectrum.p[k] for k in state.amplitudes.support()]
    if mode is EqualityMode.RAY:
        anchor = support_p[0]
        support_p = [pk - anchor for pk in support_p]

    def keys_for(lo: int, hi: int) -> set:
        return {tuple((n * pk) % modulus for pk in support_p) for n in range(lo, hi)}

    workers = max(1, int(workers))
    chunk = -(-period // workers)
    bounds = [(lo, min(lo + chunk, period)) for lo in range(0, period, chunk)]

    if len(bounds) == 1:
        seen = keys_for(*bounds[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(lambda b: keys_for(*b), bounds))
        seen = set().union(*parts)

    logger.debug(f"{mode.value} enumeration over {period} steps found {len(seen)} states")
    return len(seen)


# =============================================================================
# TRAJECTORIES
# =============================================================================

def trajectory(
    state: DiscreteState,
    start: int,
    count: int,
    drop_ground: bool = False,
) -> Trajectory:
    """
    Torus points m_k / N for steps start .. start + count - 1.

    Args:
        state: Any state on the orbit (only its spectrum matters)
        start: First step (may be negative)
        count: Number of points, >= 1
        drop_ground: Omit the pinned k = 0 coordinate

    Raises:
        InvalidCount: If count < 1
    """
    if count < 1:
        raise InvalidCount(f"count must be >= 1, got {count}")

    modulus = state.spectrum.modulus_N
    p = state.spectrum.p[1:] if drop_ground else state.spectrum.p
    points = [
        TrajectoryPoint(n, tuple(Fraction((n * pk) % modulus, modulus) for pk in p))
        for n in range(start, start + count)
    ]
    return Trajectory(modulus=modulus, points=points, includes_ground=not drop_ground)


# =============================================================================
# EXCEPTIONS
# =============================================================================

class EvolutionError(FiniteQMError, ValueError):
    """Base exception for evolution errors."""
    pass


class InvalidCount(EvolutionError):
    """Raised when a trajectory is requested with fewer than one point."""
    pass


class CapExceeded(EvolutionError):
    """Raised when an enumeration would exceed the configured cap."""

    exit_code = EXIT_CAP_EXCEEDED

    def __init__(self, message: str, period: int, cap: int, recurrence_holds: bool):
        super().__init__(message)
        self.period = period
        self.cap = cap
        self.recurrence_holds = recurrence_holds
