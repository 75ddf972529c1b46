"""Reduced single-particle observables for two-body ground states.

Takes a grid-sampled two-body wavefunction (from either the analytic
Tonks route or the DVR solver) through the chain

    reduced density matrix -> natural orbitals -> momentum distribution
                                               -> entanglement measures

All quadrature is trapezoid-on-the-mesh; the Fourier transform to
momentum space is a direct quadrature sum, not an FFT, so any k grid
may be requested.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .dvr import Grid

_OCCUPATION_FLOOR = -1e-10
_TRUNCATION_TAIL = 1e-8
_ENTROPY_FLOOR = 1e-12
_SCHMIDT_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Reduced single-particle density matrix sampled on a grid.

    ``values[i, j]`` holds rho(q_i, q_j); the quadrature trace
    sum(diag) * dx is 1 for a normalized input state.
    """

    values: np.ndarray
    grid: Grid

    @property
    def trace(self):
        return float(np.sum(np.diag(self.values)) * self.grid.spacing)


@dataclass(frozen=True, eq=False)
class NaturalDecomposition:
    """Eigen-decomposition of a reduced density matrix.

    ``occupations`` are sorted in descending order and sum to the trace
    of the input (1 for a normalized state); ``orbitals[:, i]`` is the
    grid-sampled natural orbital psi_i with quadrature norm 1.
    """

    occupations: np.ndarray
    orbitals: np.ndarray
    grid: Grid


@dataclass(frozen=True, eq=False)
class MomentumDistribution:
    """Momentum density n(k) sampled on a symmetric k grid."""

    k_values: np.ndarray
    densities: np.ndarray
    retained_orbitals: int

    @property
    def integral(self):
        return float(trapezoid(self.densities, self.k_values))


def rspd_from_state(state):
    """Reduced density matrix of a DVR TwoBodyState by mesh quadrature."""
    psi = state.amplitudes
    rho = state.grid.spacing * (psi @ psi.T)
    rho = 0.5 * (rho + rho.T)
    return DensityMatrix(values=rho, grid=state.grid)


def natural_orbitals(rho):
    """Natural orbitals and occupations of a reduced density matrix.

    The quadrature-weighted matrix dx * rho is symmetric; its
    eigenvalues are the occupations.  Tiny negative eigenvalues (down
    to -1e-10) are clamped to zero, anything lower is rejected as a
    non-positive-semidefinite input.
    """
    dx = rho.grid.spacing
    weighted = dx * rho.values
    asym = np.max(np.abs(weighted - weighted.T))
    if asym > 1e-10:
        raise ValueError(f"density matrix is not symmetric (max asymmetry {asym:.3e})")
    vals, vecs = np.linalg.eigh(0.5 * (weighted + weighted.T))
    if vals[0] < _OCCUPATION_FLOOR:
        raise ValueError(
            f"density matrix has a negative eigenvalue {vals[0]:.3e} "
            "beyond the roundoff floor"
        )
    order = np.argsort(vals)[::-1]
    occupations = np.clip(vals[order], 0.0, None)
    orbitals = vecs[:, order] / math.sqrt(dx)
    occupations.setflags(write=False)
    orbitals.setflags(write=False)
    return NaturalDecomposition(occupations=occupations, orbitals=orbitals, grid=rho.grid)


def uniform_k_grid(count, span):
    """Symmetric uniform momentum grid with ``count`` points on [-span, span]."""
    if count != int(count) or int(count) < 3:
        raise ValueError(f"k grid needs at least 3 points, got {count!r}")
    span = float(span)
    if not (span > 0.0) or not math.isfinite(span):
        raise ValueError(f"k span must be positive and finite, got {span!r}")
    return np.linspace(-span, span, int(count))


def momentum_distribution(decomposition, k_values):
    """Momentum density n(k) = sum_i lambda_i |mu_i(k)|^2.

    mu_i(k) is the direct-quadrature Fourier transform
    (2 pi)^(-1/2) * dx * sum_j psi_i(q_j) exp(-i k q_j).  Orbitals are
    included until the cumulative occupation reaches 1 - 1e-8.

    A warning is raised when |k| exceeds the mesh Nyquist limit
    pi / dx, beyond which the quadrature transform is periodic rather
    than physical.
    """
    k = np.asarray(k_values, dtype=float)
    if k.ndim != 1 or k.size < 3:
        raise ValueError("k_values must be a 1-D array with at least 3 points")
    if np.any(~np.isfinite(k)):
        raise ValueError("k_values must be finite")
    scale = max(1.0, float(np.max(np.abs(k))))
    if np.max(np.abs(k + k[::-1])) > 1e-9 * scale:
        raise ValueError("k_values must be symmetric about k = 0")
    steps = np.diff(k)
    if np.max(steps) - np.min(steps) > 1e-9 * scale:
        raise ValueError("k_values must be uniformly spaced")
    dx = decomposition.grid.spacing
    nyquist = math.pi / dx
    if np.max(np.abs(k)) > nyquist * (1.0 + 1e-12):
        warnings.warn(
            f"k grid extends past the mesh Nyquist momentum {nyquist:.4g}; "
            "the quadrature transform aliases there",
            stacklevel=2,
        )

    occ = decomposition.occupations
    cumulative = np.cumsum(occ)
    retained = int(np.searchsorted(cumulative, 1.0 - _TRUNCATION_TAIL) + 1)
    retained = min(retained, occ.size)

    q = decomposition.grid.points
    phases = np.exp(-1j * np.outer(k, q))
    transforms = phases @ decomposition.orbitals[:, :retained]
    transforms *= dx / math.sqrt(2.0 * math.pi)
    densities = (np.abs(transforms) ** 2) @ occ[:retained]
    densities.setflags(write=False)
    return MomentumDistribution(
        k_values=k.copy(), densities=densities, retained_orbitals=retained
    )


def von_neumann_entropy(decomposition):
    """Base-2 von Neumann entropy of the occupation spectrum.

    Occupations below 1e-12 are skipped; they contribute nothing at
    double precision and would otherwise poison the logarithm.
    """
    occ = decomposition.occupations
    occ = occ[occ >= _ENTROPY_FLOOR]
    if occ.size == 0:
        return 0.0
    # An occupation of 1 + eps from the eigensolver would otherwise
    # leak a tiny negative value through the logarithm.
    value = float(-np.sum(occ * np.log2(occ)))
    return value if value > 0.0 else 0.0


def schmidt_number(decomposition, threshold=_SCHMIDT_THRESHOLD):
    """Number of occupations strictly above ``threshold``."""
    threshold = float(threshold)
    if threshold <= 0.0:
        raise ValueError(f"threshold must be positive, got {threshold!r}")
    return int(np.sum(decomposition.occupations > threshold))
