"""Single-particle levels and eigenfunctions of the delta-split trap."""

import math

import numpy as np
import pytest
from scipy.integrate import simpson

from splittrap import specfun
from splittrap.single_particle import (
    BarrierStrength,
    even_energy,
    even_state,
    eigenfunction,
    odd_energy,
    odd_state,
    spectrum,
)

# Roots of -kappa = 2 Gamma(-E/2+3/4)/Gamma(-E/2+1/4), frozen from a
# 40-digit mpmath bisection.
EVEN_ROOTS = {
    (0.5, 0): 0.733517556289942,
    (0.5, 1): 2.63541461517117,
    (0.5, 2): 4.60367488619284,
    (1.0, 0): 0.892744045308953,
    (1.0, 1): 2.75464153327937,
    (1.0, 2): 4.70019582597553,
    (2.0, 0): 1.08389812227631,
    (2.0, 1): 2.93708791136391,
    (2.0, 2): 4.86229907458965,
    (5.0, 0): 1.2961228739153,
    (5.0, 1): 3.20030409549228,
    (5.0, 2): 5.13643039940631,
    (10.0, 0): 1.39200570433735,
    (10.0, 1): 3.33820134004331,
    (10.0, 2): 5.29922685177705,
    (100.0, 0): 1.48875636783634,
    (100.0, 1): 3.48311837230376,
    (100.0, 2): 5.4788909457275,
}


def test_barrier_strength_validation():
    with pytest.raises(ValueError):
        BarrierStrength(-1.0)
    with pytest.raises(ValueError):
        BarrierStrength(float("inf"))
    with pytest.raises(ValueError):
        BarrierStrength(float("nan"))
    flag = BarrierStrength.infinite_barrier()
    assert flag.infinite
    assert flag.label() == "inf"


def test_barrier_strength_parse():
    assert BarrierStrength.parse("2.5").kappa == 2.5
    assert BarrierStrength.parse("inf").infinite
    assert BarrierStrength.parse("Infinity").infinite
    with pytest.raises(ValueError):
        BarrierStrength.parse("junk")
    with pytest.raises(ValueError):
        BarrierStrength.parse("-3")


def test_even_energy_exact_limits():
    for j in range(4):
        assert even_energy(0.0, j) == 2.0 * j + 0.5
        assert even_energy(BarrierStrength.infinite_barrier(), j) == 2.0 * j + 1.5
    assert even_energy(float("inf"), 1) == 3.5


@pytest.mark.parametrize("key,expected", sorted(EVEN_ROOTS.items()))
def test_even_energy_reference_roots(key, expected):
    kappa, j = key
    assert even_energy(kappa, j) == pytest.approx(expected, abs=1e-10)


def test_even_energy_rejects_bad_level():
    with pytest.raises(ValueError):
        even_energy(1.0, -1)
    with pytest.raises(ValueError):
        even_energy(1.0, 0.5)


def test_odd_energy_exact():
    assert odd_energy(1) == 1.5
    assert odd_energy(3) == 3.5
    assert odd_energy(5) == 5.5
    for bad in (0, 2, -1, 1.5):
        with pytest.raises(ValueError):
            odd_energy(bad)


@pytest.mark.parametrize("kappa", [1e-3, 0.5, 1.0, 2.0, 10.0, 1e3, 1e6])
@pytest.mark.parametrize("j", [0, 1, 2])
def test_even_energy_residual(kappa, j):
    energy = even_energy(kappa, j)
    residual = 2.0 * specfun.gamma(0.75 - 0.5 * energy) / specfun.gamma(
        0.25 - 0.5 * energy
    ) + kappa
    assert abs(residual) <= 1e-9 * (1.0 + kappa)


@pytest.mark.parametrize("j", [0, 1, 2])
def test_even_energy_bracketing(j):
    for kappa in (1e-6, 0.1, 1.0, 10.0, 1e4):
        energy = even_energy(kappa, j)
        assert 2.0 * j + 0.5 < energy < 2.0 * j + 1.5


@pytest.mark.parametrize("j", [0, 1])
def test_even_energy_monotone_in_kappa(j):
    grid = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0]
    energies = [even_energy(kappa, j) for kappa in grid]
    assert all(b > a for a, b in zip(energies, energies[1:]))


def test_even_energy_large_barrier_approaches_limit():
    for j, limit in ((0, 1.5), (1, 3.5), (2, 5.5)):
        assert abs(even_energy(1e6, j) - limit) < 1e-3


def test_paper_caption_energies():
    assert even_energy(1.0, 0) == pytest.approx(0.9, abs=0.05)
    assert even_energy(10.0, 0) == pytest.approx(1.4, abs=0.05)


def test_ground_state_eigenfunction_is_gaussian_at_zero_barrier():
    state = even_state(0.0, 0)
    x = np.linspace(-4.0, 4.0, 41)
    expected = math.pi**-0.25 * np.exp(-0.5 * x * x)
    np.testing.assert_allclose(state.wavefunction(x), expected, rtol=1e-9, atol=1e-12)


def test_odd_eigenfunction_node_at_origin():
    state = odd_state(1)
    assert state.wavefunction(0.0) == 0.0
    assert state.wavefunction(1.0) > 0.0


def test_infinite_barrier_eigenfunction_closed_form():
    state = even_state(BarrierStrength.infinite_barrier(), 0)
    x = np.linspace(-4.0, 4.0, 41)
    expected = math.sqrt(2.0 / math.sqrt(math.pi)) * np.abs(x) * np.exp(-0.5 * x * x)
    np.testing.assert_allclose(state.wavefunction(x), expected, rtol=1e-9, atol=1e-12)


def _lowest_states(kappa, count):
    states = spectrum(kappa, count)
    x = np.arange(-12.0, 12.0 + 2e-3, 4e-3)
    return [s.wavefunction(x) for s in states], x


@pytest.mark.parametrize("kappa", [0.0, 1.0, 10.0])
def test_orthonormality(kappa):
    values, x = _lowest_states(kappa, 6)
    for i in range(6):
        for j in range(i, 6):
            overlap = simpson(values[i] * values[j], x=x)
            target = 1.0 if i == j else 0.0
            assert overlap == pytest.approx(target, abs=1e-8)


@pytest.mark.parametrize("kappa", [0.5, 1.0, 5.0, 20.0])
def test_derivative_jump_condition(kappa):
    # The delta barrier forces phi'(0+) - phi'(0-) = 2 kappa phi(0);
    # second-order one-sided differences keep the FD error far below
    # the 1e-4 check.
    state = even_state(kappa, 0)
    h = 1e-4
    right = (-3.0 * state.wavefunction(0.0) + 4.0 * state.wavefunction(h)
             - state.wavefunction(2.0 * h)) / (2.0 * h)
    left = (3.0 * state.wavefunction(0.0) - 4.0 * state.wavefunction(-h)
            + state.wavefunction(-2.0 * h)) / (2.0 * h)
    jump = right - left
    expected = 2.0 * kappa * state.wavefunction(0.0)
    assert jump == pytest.approx(expected, rel=1e-4)


def test_spectrum_interleaving_at_zero_barrier():
    energies = [s.energy for s in spectrum(0.0, 4)]
    assert energies == pytest.approx([0.5, 1.5, 2.5, 3.5], abs=1e-12)


def test_spectrum_infinite_barrier_degeneracy():
    states = spectrum(BarrierStrength.infinite_barrier(), 2)
    assert [s.energy for s in states] == [1.5, 1.5]
    assert [s.parity for s in states] == ["even", "odd"]


def test_spectrum_kappa_one():
    states = spectrum(1.0, 2)
    assert states[0].energy == pytest.approx(0.9, abs=0.05)
    assert states[1].energy == 1.5


def test_spectrum_rejects_bad_count():
    with pytest.raises(ValueError):
        spectrum(1.0, 0)


def test_even_state_index_convention():
    assert even_state(1.0, 0).n == 0
    assert even_state(1.0, 1).n == 2
    assert odd_state(3).n == 3
