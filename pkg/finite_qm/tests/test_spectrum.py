"""
Tests for spectrum.py

Tests:
- shift / reduce on the worked instances
- Validation (degenerate, unsorted, empty)
- reduce_floats: commensurable floats and incommensurable verdicts
- Shift invariance, scale covariance, reconstruction, minimality of eps
"""

import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.numkernel import InvalidTolerance
from src.spectrum import (
    DegenerateSpectrum,
    EmptySpectrum,
    EnergySpectrum,
    Incommensurable,
    ReducedSpectrum,
    SpectrumError,
    UnsortedSpectrum,
    component_cycles,
    energies_of,
    reduce,
    reduce_floats,
    shift,
)


def _random_spectrum(rng: random.Random, max_dim: int = 8, bound: int = 50) -> EnergySpectrum:
    dimension = rng.randint(1, max_dim)
    values = set()
    while len(values) < dimension:
        values.add(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
    return EnergySpectrum(tuple(sorted(values)))


class TestShift:
    """shift(spec)"""

    def test_grounded(self):
        assert shift(EnergySpectrum.from_values([0, 4, 9])) == [0, 4, 9]

    def test_fractional(self):
        assert shift(EnergySpectrum.from_values([5, Fraction(16, 3)])) == [0, Fraction(1, 3)]

    def test_negative(self):
        assert shift(EnergySpectrum.from_values([-2, -1, 0])) == [0, 1, 2]


class TestValidation:
    """EnergySpectrum invariants"""

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrum):
            EnergySpectrum.from_values([0, 4, 4])

    def test_unsorted(self):
        with pytest.raises(UnsortedSpectrum):
            EnergySpectrum.from_values([0, 9, 4])

    def test_empty(self):
        with pytest.raises(EmptySpectrum):
            EnergySpectrum.from_values([])

    def test_reduced_spectrum_checks_coprimality(self):
        """A hand-built ReducedSpectrum with a common factor is rejected"""
        with pytest.raises(SpectrumError):
            ReducedSpectrum(
                offset=Fraction(0), unit_eps=Fraction(1), p=(0, 2, 4),
                modulus_N=4, recur_turns=Fraction(1), step_turns=Fraction(1, 4),
            )


class TestReduce:
    """reduce(spec)"""

    def test_torus_instance(self):
        """(0, 4, 9) -> eps 1, N 36, delta_t 1/36"""
        reduced = reduce(EnergySpectrum.from_values([0, 4, 9]))
        assert reduced.unit_eps == 1
        assert reduced.p == (0, 4, 9)
        assert reduced.modulus_N == 36
        assert reduced.recur_turns == 1
        assert reduced.step_turns == Fraction(1, 36)

    def test_fractional_instance(self):
        """(1/3, 1/2, 5/6) -> eps 1/6, p (0, 1, 3), N 3"""
        reduced = reduce(EnergySpectrum.from_values([Fraction(1, 3), Fraction(1, 2), Fraction(5, 6)]))
        assert reduced.offset == Fraction(1, 3)
        assert reduced.unit_eps == Fraction(1, 6)
        assert reduced.p == (0, 1, 3)
        assert reduced.modulus_N == 3
        assert reduced.recur_turns == 6
        assert reduced.step_turns == 2

    def test_one_level(self):
        reduced = reduce(EnergySpectrum.from_values([7]))
        assert reduced.offset == 7
        assert reduced.p == (0,)
        assert reduced.modulus_N == 1
        assert reduced.unit_eps == 1

    def test_component_cycles(self):
        reduced = reduce(EnergySpectrum.from_values([0, 4, 9]))
        assert component_cycles(reduced) == [1, 9, 4]

    def test_to_dict(self):
        data = reduce(EnergySpectrum.from_values([0, 4, 9])).to_dict()
        assert data["modulus_N"] == 36
        assert data["step_turns"] == "1/36"

    @pytest.mark.parametrize("seed", range(10))
    def test_reconstruction(self, seed):
        """offset + eps * p_k == E_k exactly"""
        rng = random.Random(seed)
        for _ in range(50):
            spec = _random_spectrum(rng)
            assert tuple(energies_of(reduce(spec))) == spec.energies

    @pytest.mark.parametrize("seed", range(5))
    def test_eps_is_maximal(self, seed):
        """No multiple eps * m / n with m > n divides every shifted energy"""
        rng = random.Random(seed)
        for _ in range(40):
            spec = _random_spectrum(rng)
            if spec.dimension == 1:
                continue
            reduced = reduce(spec)
            shifted = shift(spec)[1:]
            for n in range(1, 6):
                for m in range(n + 1, 8):
                    g = reduced.unit_eps * Fraction(m, n)
                    assert not all((e / g).denominator == 1 for e in shifted)

    @pytest.mark.parametrize("seed", range(10))
    def test_shift_invariance(self, seed):
        rng = random.Random(seed)
        for _ in range(10):
            spec = _random_spectrum(rng)
            c = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
            a, b = reduce(spec), reduce(spec.shifted_by(c))
            assert (a.p, a.modulus_N, a.unit_eps) == (b.p, b.modulus_N, b.unit_eps)
            assert b.offset - a.offset == c

    @pytest.mark.parametrize("seed", range(10))
    def test_scale_covariance(self, seed):
        rng = random.Random(seed)
        for _ in range(10):
            spec = _random_spectrum(rng, max_dim=6)
            if spec.dimension == 1:
                continue
            s = Fraction(rng.randint(1, 30), rng.randint(1, 30))
            a, b = reduce(spec), reduce(spec.scaled_by(s))
            assert (a.p, a.modulus_N) == (b.p, b.modulus_N)
            assert b.unit_eps == a.unit_eps * s
            assert b.step_turns == a.step_turns / s


class TestReduceFloats:
    """reduce_floats(values, tol, max_den)"""

    def test_integer_floats(self):
        assert reduce_floats([0.0, 4.0, 9.0], 1e-12, 10 ** 9) == reduce(EnergySpectrum.from_values([0, 4, 9]))

    def test_sqrt2_incommensurable(self):
        verdict = reduce_floats([0.0, 1.0, 1.4142135623730951], 1e-15, 10 ** 6)
        assert isinstance(verdict, Incommensurable)
        assert verdict.index == 2
        assert verdict.describe().startswith("INCOMMENSURABLE")

    @pytest.mark.parametrize("tol", [1e-15, 1e-12])
    def test_sqrt2_incommensurable_at_default_max_den(self, tol):
        """A 10^9 denominator bound does not let sqrt(2) through"""
        verdict = reduce_floats([0.0, 1.0, 1.4142135623730951], tol, 10 ** 9)
        assert isinstance(verdict, Incommensurable)
        assert verdict.index == 2
        assert verdict.max_den == math.isqrt(math.floor(1 / Fraction(tol)))

    def test_golden_ratio_incommensurable(self):
        golden = (1 + math.sqrt(5)) / 2
        assert isinstance(reduce_floats([0.0, 1.0, golden], 1e-15, 10 ** 6), Incommensurable)

    def test_one_level(self):
        assert reduce_floats([0.0], 1e-3, 10).modulus_N == 1

    def test_offset_kept(self):
        reduced = reduce_floats([2.5, 3.0, 4.0], 1e-12, 1000)
        assert reduced.offset == Fraction(5, 2)
        assert reduced.p == (0, 1, 3)

    def test_invalid_tolerance(self):
        with pytest.raises(InvalidTolerance):
            reduce_floats([0.0, 1.0], 0.0, 10)

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrum):
            reduce_floats([0.0, 1.0, 1.0], 1e-12, 10)

    def test_planted_fractions(self):
        """Spectra with planted rational gaps reduce like the exact spectrum"""
        rng = random.Random(7)
        for _ in range(100):
            exact = sorted({Fraction(rng.randint(0, 300), rng.randint(1, 100)) for _ in range(4)})
            floats = [float(e) for e in exact]
            if len(set(floats)) != len(floats):
                continue
            shifted_exact = [e - exact[0] for e in exact]
            result = reduce_floats(floats, 1e-12, 10 ** 6)
            expected = reduce(EnergySpectrum(tuple(exact)))
            assert result.p == expected.p
            assert result.unit_eps == expected.unit_eps
            assert [result.unit_eps * pk for pk in result.p] == shifted_exact
