"""Shared fixtures: cached eigensolves so the suite reuses ground states.

DVR solves and analytic density matrices are deterministic pure
functions of their parameters, so one cache per session is safe and
keeps the property tests (which revisit the same parameter grids) from
re-running ARPACK dozens of times.
"""

import pytest

from splittrap import analysis, dvr, tonks

_STATES = {}
_TONKS_DECOMPS = {}


def _solve(kappa, g1d, n_points=81, spacing=0.16):
    key = (float(kappa), float(g1d), int(n_points), float(spacing))
    if key not in _STATES:
        grid = dvr.build_grid(n_points, spacing)
        _STATES[key] = dvr.ground_state(grid, kappa, g1d)
    return _STATES[key]


def _tonks_decomposition(kappa):
    key = float(kappa)
    if key not in _TONKS_DECOMPS:
        _TONKS_DECOMPS[key] = analysis.natural_orbitals(tonks.tonks_rspd(kappa))
    return _TONKS_DECOMPS[key]


@pytest.fixture(scope="session")
def solve():
    """Cached DVR ground-state solve keyed by (kappa, g1d, N, dx)."""
    return _solve


@pytest.fixture(scope="session")
def tonks_decomposition():
    """Cached natural-orbital decomposition of the analytic pair."""
    return _tonks_decomposition
