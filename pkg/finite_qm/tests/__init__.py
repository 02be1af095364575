"""Tests for the finite-qm lattice simulator."""
