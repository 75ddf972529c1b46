"""Sinc-DVR solver for two bosons with contact interaction.

The two-body Hamiltonian on a uniform symmetric mesh is

    H = T (x) 1 + 1 (x) T + diag(V_trap + V_barrier + V_int)

with the sinc-DVR kinetic matrix (including the 1/2 prefactor)

    T_ii = pi^2 / (6 dx^2),   T_ij = (-1)^(i-j) / (dx^2 (i-j)^2)

and delta potentials represented by 1/dx on their supporting mesh
points.  The full N^2 x N^2 matrix is never materialized; the ground
state comes from a Krylov iteration driven by apply_hamiltonian.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .single_particle import BarrierStrength

_DEGENERACY_GAP = 1e-6
# Shift applied to the exchange-antisymmetric sector during the solve.
# Must sit above every energy of interest; the operator's symmetric
# spectrum tops out near g1d/spacing, a few thousand on paper-scale
# parameters, so 1e4 clears it without stretching the Krylov range.
_EXCHANGE_PENALTY = 1e4


class GridError(ValueError):
    """Mesh specification violates the solver's grid contract."""


class ConvergenceError(RuntimeError):
    """Iterative eigensolver failed to converge."""


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform symmetric mesh with an odd point count (exact x = 0 point)."""

    n_points: int
    spacing: float

    @property
    def points(self):
        half = (self.n_points - 1) // 2
        return (np.arange(self.n_points) - half) * self.spacing

    @property
    def center_index(self):
        return (self.n_points - 1) // 2

    @property
    def span(self):
        return 0.5 * (self.n_points - 1) * self.spacing


def build_grid(n_points, spacing):
    """Validated uniform symmetric grid.

    Parameters
    ----------
    n_points : int
        Odd, >= 3, so the barrier point x = 0 is on the mesh.
    spacing : float
        Positive mesh step.
    """
    if n_points != int(n_points):
        raise GridError(f"point count must be an integer, got {n_points!r}")
    n_points = int(n_points)
    if n_points < 3:
        raise GridError(f"need at least 3 points, got {n_points}")
    if n_points % 2 == 0:
        raise GridError(f"point count must be odd so that x = 0 is a mesh point, got {n_points}")
    spacing = float(spacing)
    if not (spacing > 0.0) or not math.isfinite(spacing):
        raise GridError(f"spacing must be positive and finite, got {spacing!r}")
    return Grid(n_points, spacing)


@lru_cache(maxsize=32)
def _kinetic_matrix_cached(n_points, spacing):
    idx = np.arange(n_points)
    delta = idx[:, None] - idx[None, :]
    with np.errstate(divide="ignore"):
        t = np.where(delta == 0, math.pi**2 / 6.0, (-1.0) ** delta / delta.astype(float) ** 2)
    t /= spacing**2
    t.setflags(write=False)
    return t


def kinetic_matrix(grid):
    """One-particle sinc-DVR kinetic matrix (1/2 d^2/dx^2 included)."""
    return _kinetic_matrix_cached(grid.n_points, grid.spacing)


def _coerce_finite_kappa(kappa):
    if isinstance(kappa, BarrierStrength):
        if kappa.infinite:
            raise ValueError(
                "the grid solver needs a finite barrier; use the analytic route for kappa = inf"
            )
        return kappa.kappa
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 0.0:
        raise ValueError(f"kappa must be finite and >= 0 on the grid, got {kappa!r}")
    return kappa


def _coerce_coupling(g1d):
    g1d = float(g1d)
    if not math.isfinite(g1d) or g1d < 0.0:
        raise ValueError(f"g1d must be finite and >= 0, got {g1d!r}")
    return g1d


def _potential_diagonal(grid, kappa, g1d):
    q = grid.points
    v = 0.5 * (q[:, None] ** 2 + q[None, :] ** 2)
    mid = grid.center_index
    v[mid, :] += kappa / grid.spacing
    v[:, mid] += kappa / grid.spacing
    v[np.diag_indices_from(v)] += g1d / grid.spacing
    return v


def apply_hamiltonian(vec, grid, kappa, g1d):
    """Matrix-vector product H @ vec for the two-body Hamiltonian.

    ``vec`` holds the row-major flattened amplitudes on the N x N
    product mesh.
    """
    kappa = _coerce_finite_kappa(kappa)
    g1d = _coerce_coupling(g1d)
    vec = np.asarray(vec, dtype=float)
    n = grid.n_points
    if vec.shape != (n * n,):
        raise ValueError(f"expected a flat vector of length {n * n}, got shape {vec.shape}")
    t = kinetic_matrix(grid)
    v = _potential_diagonal(grid, kappa, g1d)
    x = vec.reshape(n, n)
    return (t @ x + x @ t + v * x).ravel()


@dataclass(frozen=True, eq=False)
class TwoBodyState:
    """Ground state on the product mesh.

    ``amplitudes`` is the N x N array Psi(q_i, q_j) normalized so that
    sum(Psi^2) * dx^2 = 1, sign-fixed to be positive at its peak.
    ``gap`` is the distance to the next eigenvalue; a gap below 1e-6
    marks the state as near-degenerate.
    """

    energy: float
    amplitudes: np.ndarray
    grid: Grid
    kappa: float
    g1d: float
    gap: float

    @property
    def near_degenerate(self):
        return self.gap < _DEGENERACY_GAP


def ground_state(grid, kappa, g1d, *, tol=1e-10, maxiter=None):
    """Lowest bosonic eigenpair of the two-body split-trap Hamiltonian.

    The iteration is confined to the exchange-symmetric sector: the
    raw matrix also carries antisymmetric states, and near the strong
    coupling regime one of those dips below the symmetric ground state
    on a coarse mesh, so an unprojected solve would hand back a state
    with the wrong exchange symmetry depending on rounding noise.

    Parameters
    ----------
    grid : Grid
    kappa : float or BarrierStrength
        Finite barrier strength.
    g1d : float
        Contact coupling, >= 0 and finite.
    tol : float
        Relative eigenvalue tolerance passed to the Krylov iteration.

    Returns
    -------
    TwoBodyState

    Raises
    ------
    ConvergenceError
        If the Krylov iteration does not converge.
    """
    kappa = _coerce_finite_kappa(kappa)
    g1d = _coerce_coupling(g1d)
    n = grid.n_points
    t = kinetic_matrix(grid)
    v = _potential_diagonal(grid, kappa, g1d)

    def matvec(vec):
        x = 0.5 * (vec.reshape(n, n) + vec.reshape(n, n).T)
        hx = t @ x + x @ t + v * x
        hx = 0.5 * (hx + hx.T)
        return hx.ravel() + _EXCHANGE_PENALTY * (vec - x.ravel())

    op = LinearOperator((n * n, n * n), matvec=matvec, dtype=float)
    # Deterministic start vector: the symmetric Gaussian product state.
    q = grid.points
    v0 = np.exp(-0.5 * (q[:, None] ** 2 + q[None, :] ** 2)).ravel()
    v0 /= np.linalg.norm(v0)
    try:
        vals, vecs = eigsh(op, k=2, which="SA", v0=v0, tol=tol, maxiter=maxiter)
    except ArpackNoConvergence as exc:
        raise ConvergenceError(
            f"ground-state iteration failed at kappa={kappa}, g1d={g1d}, "
            f"N={n}, dx={grid.spacing}: {exc}"
        ) from exc

    psi = vecs[:, 0].reshape(n, n)
    psi = 0.5 * (psi + psi.T)
    psi /= math.sqrt(np.sum(psi * psi)) * grid.spacing
    peak = np.unravel_index(np.argmax(np.abs(psi)), psi.shape)
    if psi[peak] < 0.0:
        psi = -psi
    psi.setflags(write=False)
    return TwoBodyState(
        energy=float(vals[0]),
        amplitudes=psi,
        grid=grid,
        kappa=kappa,
        g1d=g1d,
        gap=float(vals[1] - vals[0]),
    )
