"""
Random Instances - Seeded commensurable spectra and amplitudes

Spectra are commensurable by construction: sample distinct integers
p_1 < ... < p_{D-1} from [1, bound], a positive rational eps and a rational
offset, then emit E_k = offset + eps * p_k with p_0 = 0. The same seed always
gives the same instance.
"""

import logging
import math
from fractions import Fraction
from functools import reduce
from typing import Optional, Tuple

import numpy as np

from .errors import FiniteQMError
from .quantum_state import IntegerAmplitudes
from .spectrum import EnergySpectrum

logger = logging.getLogger(__name__)


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_p_vector(rng: np.random.Generator, dimension: int, bound: int) -> Tuple[int, ...]:
    """
    Sorted distinct integers from [1, bound], D - 1 of them (not reduced).

    Raises:
        InstanceError: If bound < D - 1 or dimension < 1
    """
    if dimension < 1:
        raise InstanceError(f"dimension must be >= 1, got {dimension}")
    if bound < dimension - 1:
        raise InstanceError(f"bound {bound} too small for {dimension - 1} distinct values")
    if dimension == 1:
        return ()
    draw = rng.choice(np.arange(1, bound + 1), size=dimension - 1, replace=False)
    return tuple(sorted(int(v) for v in draw))


def coprime_reduce(values: Tuple[int, ...]) -> Tuple[int, ...]:
    """Divide positive integers by their collective gcd."""
    common = reduce(math.gcd, values, 0)
    if common <= 1:
        return tuple(values)
    return tuple(v // common for v in values)


def random_rational(rng: np.random.Generator, bound: int, signed: bool = False) -> Fraction:
    """Numerator from [1, bound] (or [-bound, bound] when signed) over a denominator from [1, bound]."""
    low = -bound if signed else 1
    numerator = int(rng.integers(low, bound, endpoint=True))
    denominator = int(rng.integers(1, bound, endpoint=True))
    return Fraction(numerator, denominator)


def random_spectrum(
    rng: np.random.Generator,
    dimension: int,
    bound: int = 50,
    eps_bound: int = 12,
) -> EnergySpectrum:
    """A commensurable spectrum E_k = offset + eps * p_k with coprime nonzero p."""
    p = (0,) + coprime_reduce(random_p_vector(rng, dimension, bound))
    eps = random_rational(rng, eps_bound)
    offset = random_rational(rng, eps_bound, signed=True)
    logger.debug(f"Random spectrum: p={p}, eps={eps}, offset={offset}")
    return EnergySpectrum(tuple(offset + eps * pk for pk in p))


def random_amplitudes(
    rng: np.random.Generator,
    dimension: int,
    bound: int = 9,
    full_support: bool = True,
) -> IntegerAmplitudes:
    """
    Integer amplitudes from [-bound, bound].

    With full_support every entry is nonzero; otherwise zeros may appear but
    at least one entry is nonzero.
    """
    while True:
        values = rng.integers(-bound, bound, size=dimension, endpoint=True)
        if full_support:
            values = np.where(values == 0, 1, values)
        if np.any(values != 0):
            return IntegerAmplitudes.from_ints([int(v) for v in values])


# =============================================================================
# EXCEPTIONS
# =============================================================================

class InstanceError(FiniteQMError, ValueError):
    """Raised when random instance parameters are impossible to satisfy."""
    pass
