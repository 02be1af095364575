"""
Tests for quantum_state.py

Tests:
- integerize / rationalize_amplitudes
- phase_indices on the (0, 4, 9) lattice
- born_eigen: exact values, constancy over steps, sum to one
- gr_inner: self inner product (exact unitarity), orthogonal pair, sign lattice
- born: exact fast paths, intervals, scaling invariance, batch order
- ray_equal
"""

import cmath
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.quantum_state import (
    AllZeroAmplitudes,
    DimensionMismatch,
    DiscreteState,
    IndexOutOfRange,
    IntegerAmplitudes,
    OddModulusSignFlip,
    SpectrumMismatch,
    born,
    born_batch,
    born_eigen,
    gr_inner,
    integerize,
    phase_indices,
    ray_equal,
    rationalize_amplitudes,
)
from src.random_instances import make_rng, random_amplitudes, random_spectrum
from src.spectrum import EnergySpectrum, reduce


def _state(energies, amps, step=0):
    return DiscreteState(IntegerAmplitudes.from_ints(amps), reduce(EnergySpectrum.from_values(energies)), step)


def _direct_inner(state: DiscreteState, analysis: DiscreteState) -> complex:
    modulus = state.spectrum.modulus_N
    total = 0j
    for a, psi, m_psi, m_a in zip(analysis.amps, state.amps, phase_indices(state), phase_indices(analysis)):
        total += a * psi * cmath.exp(-2j * cmath.pi * (m_psi - m_a) / modulus)
    return total


class TestIntegerize:
    """integerize(alphas)"""

    def test_pythagorean(self):
        amps = integerize([Fraction(3, 5), Fraction(4, 5)])
        assert amps.amps == (3, 4)
        assert amps.norm_sq == 25
        assert amps.scale_L == 5

    def test_unnormalized(self):
        amps = integerize([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
        assert amps.amps == (3, 2, 1)
        assert amps.norm_sq == 14

    def test_single(self):
        assert integerize([1]).amps == (1,)

    def test_no_division_by_common_factor(self):
        assert integerize([2, 4]).amps == (2, 4)

    def test_all_zero(self):
        with pytest.raises(AllZeroAmplitudes):
            integerize([0, 0])

    def test_rationalize_amplitudes(self):
        amps = rationalize_amplitudes([0.6, 0.8], 1e-12, 1000)
        assert amps.amps == (3, 4)
        assert rationalize_amplitudes([2 ** -0.5, 2 ** -0.5], 1e-15, 10 ** 6) is None


class TestDiscreteState:
    """DiscreteState and phase_indices"""

    def test_dimension_mismatch(self, torus_spectrum):
        with pytest.raises(DimensionMismatch):
            DiscreteState(IntegerAmplitudes.from_ints([1, 1]), torus_spectrum)

    def test_phase_indices(self, uniform_torus_state):
        assert phase_indices(uniform_torus_state.at_step(1)) == (0, 4, 9)
        assert phase_indices(uniform_torus_state.at_step(0)) == (0, 0, 0)
        assert phase_indices(uniform_torus_state.at_step(9)) == (0, 0, 9)

    def test_negative_steps(self, uniform_torus_state):
        assert phase_indices(uniform_torus_state.at_step(-1)) == (0, 32, 27)


class TestBornEigen:
    """born_eigen(state, k)"""

    def test_pythagorean(self):
        state = _state([0, 1], [3, 4])
        assert born_eigen(state, 0) == Fraction(9, 25)

    def test_uniform(self):
        state = _state([0, 1, 2, 3], [1, 1, 1, 1])
        assert all(born_eigen(state, k) == Fraction(1, 4) for k in range(4))

    def test_step_independent(self):
        state = _state([0, 4, 9], [3, 2, 1])
        assert [born_eigen(state, k) for k in range(3)] == \
            [born_eigen(state.at_step(17), k) for k in range(3)]

    def test_out_of_range(self, uniform_torus_state):
        with pytest.raises(IndexOutOfRange):
            born_eigen(uniform_torus_state, 3)
        with pytest.raises(IndexError):
            born_eigen(uniform_torus_state, -1)

    @pytest.mark.parametrize("seed", range(200))
    def test_constant_and_normalized(self, seed):
        """The 200 recurrence instances: identical exact values at 0, 1, N/2 and N - 1; sum one"""
        rng = make_rng(seed)
        spec = reduce(random_spectrum(rng, int(rng.integers(1, 7)), 50))
        state = DiscreteState(random_amplitudes(rng, spec.dimension), spec, 0)
        modulus = spec.modulus_N
        rows = [
            [born_eigen(state.at_step(n), k) for k in range(spec.dimension)]
            for n in (0, 1, modulus // 2, modulus - 1)
        ]
        assert all(row == rows[0] for row in rows)
        assert sum(rows[0]) == 1


class TestGroupRingInner:
    """gr_inner(state, analysis)"""

    def test_self_inner_product(self, uniform_torus_state):
        for n in range(37):
            state = uniform_torus_state.at_step(n)
            inner = gr_inner(state, state)
            assert inner.coeffs == (3,) + (0,) * 35

    def test_orthogonal_pair(self):
        psi = _state([0, 1], [1, 1])
        a = _state([0, 1], [1, -1])
        assert gr_inner(psi, a).is_zero_vector()

    def test_sign_lattice(self):
        """p = (0, 1, 2), N = 2: psi (1, 1, 1) at n = 1 against (1, -1, 1) at n = 0"""
        psi = _state([0, 1, 2], [1, 1, 1], step=1)
        a = _state([0, 1, 2], [1, -1, 1], step=0)
        assert gr_inner(psi, a).coeffs == (2, -1)

    def test_spectrum_mismatch(self):
        with pytest.raises(SpectrumMismatch):
            gr_inner(_state([0, 1], [1, 1]), _state([0, 2], [1, 1]))

    @pytest.mark.parametrize("seed", range(10))
    def test_unitarity_exact(self, seed):
        """Self inner product is norm_sq at j = 0 at every step of the period"""
        rng = make_rng(seed)
        spec = reduce(random_spectrum(rng, int(rng.integers(2, 6)), 12))
        state = DiscreteState(random_amplitudes(rng, spec.dimension, full_support=False), spec, 0)
        for n in range(min(spec.modulus_N, 500) + 1):
            inner = gr_inner(state.at_step(n), state.at_step(n))
            assert inner.terms == ((0, state.amplitudes.norm_sq),)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_direct_evaluation(self, seed):
        from src.group_ring import embed
        rng = make_rng(200 + seed)
        spec = reduce(random_spectrum(rng, int(rng.integers(2, 17)), 60))
        state = DiscreteState(random_amplitudes(rng, spec.dimension), spec, int(rng.integers(0, 10 ** 6)))
        analysis = DiscreteState(random_amplitudes(rng, spec.dimension), spec, int(rng.integers(0, 10 ** 6)))
        value = embed(gr_inner(state, analysis)).as_complex()
        assert abs(value - _direct_inner(state, analysis)) < 1e-10 * max(1.0, abs(value))


class TestBorn:
    """born(state, analysis, precision)"""

    def test_self_is_one(self, uniform_torus_state):
        probability = born(uniform_torus_state.at_step(5), uniform_torus_state.at_step(5))
        assert probability.exact == 1

    def test_orthogonal_is_zero(self):
        probability = born(_state([0, 1], [1, 1]), _state([0, 1], [1, -1]))
        assert probability.exact == 0

    def test_sign_lattice_is_one(self):
        psi = _state([0, 1, 2], [1, 1, 1], step=1)
        a = _state([0, 1, 2], [1, -1, 1], step=0)
        assert born(psi, a).exact == 1

    def test_interval_contains_float_value(self, uniform_torus_state):
        """Off-diagonal probabilities on N = 36 come back as intervals"""
        state = uniform_torus_state.at_step(1)
        analysis = uniform_torus_state.at_step(0)
        probability = born(state, analysis)
        expected = abs(_direct_inner(state, analysis)) ** 2 / 9
        assert not probability.is_exact
        assert probability.radius < 1e-30
        assert abs(float(probability.value) - expected) < 1e-12
        assert 0 <= float(probability.value) <= 1

    def test_scaling_invariance(self, torus_spectrum):
        base = DiscreteState(IntegerAmplitudes.from_ints([3, 2, 1]), torus_spectrum, 7)
        analysis = DiscreteState(IntegerAmplitudes.from_ints([1, -1, 2]), torus_spectrum, 0)
        reference = born(base, analysis)
        for c in (2, 3, 10):
            scaled = DiscreteState(base.amplitudes.scaled(c), torus_spectrum, 7)
            probability = born(scaled, analysis)
            assert abs(probability.value - reference.value) <= probability.radius + reference.radius
            assert [born_eigen(scaled, k) for k in range(3)] == [born_eigen(base, k) for k in range(3)]

    def test_batch_preserves_order(self, uniform_torus_state):
        analyses = [uniform_torus_state.at_step(n) for n in range(12)]
        batch = born_batch(uniform_torus_state, analyses, max_workers=4)
        single = [born(uniform_torus_state, a) for a in analyses]
        assert [b.value for b in batch] == [s.value for s in single]


class TestRayEqual:
    """ray_equal(s1, s2)"""

    def test_identical(self, uniform_torus_state):
        assert ray_equal(uniform_torus_state, uniform_torus_state)

    def test_scaled(self):
        assert ray_equal(_state([0, 1], [2, 4]), _state([0, 1], [1, 2]))

    def test_pinned_ground_phase(self, uniform_torus_state):
        """Component 0 pins the global phase: steps 0 and 18 differ"""
        assert not ray_equal(uniform_torus_state, uniform_torus_state.at_step(18))

    def test_global_phase_without_ground(self, torus_spectrum):
        """Only k = 2 populated: every step is the same ray"""
        state = DiscreteState(IntegerAmplitudes.from_ints([0, 0, 5]), torus_spectrum, 0)
        assert ray_equal(state, state.at_step(7))

    def test_sign_flip_even_modulus(self):
        """-1 is the phase N / 2 on an even lattice"""
        assert ray_equal(_state([0, 1], [1, 1]), _state([0, 1], [-1, -1]))
        assert ray_equal(_state([0, 1], [1, 1], step=1), _state([0, 1], [1, -1]))

    def test_sign_flip_odd_modulus(self):
        with pytest.raises(OddModulusSignFlip):
            ray_equal(_state([0, 1, 3], [1, 1, 1]), _state([0, 1, 3], [-1, -1, -1]))

    def test_partial_sign_flip_odd_modulus(self):
        assert not ray_equal(_state([0, 1, 3], [1, 1, 1]), _state([0, 1, 3], [1, -1, 1]))

    def test_different_support(self):
        assert not ray_equal(_state([0, 1], [1, 0]), _state([0, 1], [0, 1]))

    def test_different_ratio(self):
        assert not ray_equal(_state([0, 1], [1, 2]), _state([0, 1], [2, 1]))
