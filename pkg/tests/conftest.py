"""Shared test setup: hypothesis profile and random-instance builders.

The builders here exist so every test file draws channels and input
distributions the same way.  They use a caller-supplied Generator, never
module state, so each test stays reproducible on its own.
"""
from __future__ import annotations

import numpy as np
from hypothesis import HealthCheck, settings

from bcregions import BroadcastChannel, JointPmf, Pmf, UVDist, UXDist

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def random_channel(rng: np.random.Generator, max_size: int = 3) -> BroadcastChannel:
    """Dirichlet-row channel with alphabet sizes in [2, max_size]."""
    nx = int(rng.integers(2, max_size + 1))
    ny1 = int(rng.integers(2, max_size + 1))
    ny2 = int(rng.integers(2, max_size + 1))
    trans = np.empty((nx, ny1, ny2))
    for x in range(nx):
        trans[x] = rng.dirichlet(np.ones(ny1 * ny2)).reshape(ny1, ny2)
    return BroadcastChannel(trans)


def random_ux_dist(rng: np.random.Generator, x_size: int, max_u: int = 3) -> UXDist:
    nu = int(rng.integers(1, max_u + 1))
    pux = rng.dirichlet(np.ones(nu * x_size)).reshape(nu, x_size)
    return UXDist(pux=JointPmf(pux))


def random_uv_dist(rng: np.random.Generator, x_size: int, max_side: int = 3) -> UVDist:
    nu = int(rng.integers(1, max_side + 1))
    nv = int(rng.integers(1, max_side + 1))
    pu = Pmf(rng.dirichlet(np.ones(nu)))
    pv = Pmf(rng.dirichlet(np.ones(nv)))
    xmap = rng.integers(0, x_size, size=(nu, nv))
    return UVDist(pu=pu, pv=pv, xmap=xmap)
