"""Deterministic seed splitting and low-discrepancy sampling helpers.

Every randomized operation in the package takes an explicit integer seed.
Child seeds are derived with :func:`child_seed` so that concurrent
evaluation over indices, angles or suite instances stays reproducible
regardless of execution order.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

# Tags namespace the seed-splitting rule: child = SeedSequence(root, spawn_key=(tag, *key)).
TAG_SPHERE = 1
TAG_FACE = 2
TAG_NEAR_NORMING = 3
TAG_SLICE = 4
TAG_SUITE = 5


def child_seed(root_seed, tag: int, *key: int) -> np.random.SeedSequence:
    """Derive a child SeedSequence from a root seed and an integer key path.

    The root may itself be a SeedSequence, in which case its spawn key is
    extended; splitting is therefore associative and order-independent.
    """
    ks = (int(tag),) + tuple(int(k) for k in key)
    if isinstance(root_seed, np.random.SeedSequence):
        return np.random.SeedSequence(
            entropy=root_seed.entropy, spawn_key=tuple(root_seed.spawn_key) + ks
        )
    return np.random.SeedSequence(entropy=int(root_seed), spawn_key=ks)


def halton(dim: int, count: int, seed) -> np.ndarray:
    """Scrambled Halton points in [0, 1)^dim, deterministic given the seed."""
    if count <= 0:
        return np.zeros((0, dim))
    rng = np.random.default_rng(seed)
    sampler = qmc.Halton(d=dim, scramble=True, seed=rng)
    return sampler.random(count)


def gaussian_directions(dim_real: int, count: int, seed) -> np.ndarray:
    """Low-discrepancy draws mapped through the normal inverse CDF.

    Returns an array of shape (count, dim_real); rows are generic nonzero
    directions suitable for normalization onto a sphere.
    """
    from scipy.special import ndtri

    u = halton(dim_real, count, seed)
    # Clip away 0/1 so ndtri stays finite.
    u = np.clip(u, 1e-12, 1 - 1e-12)
    return ndtri(u)


def complex_directions(dim: int, count: int, seed) -> np.ndarray:
    """Generic complex directions of shape (count, dim)."""
    g = gaussian_directions(2 * dim, count, seed)
    return g[:, :dim] + 1j * g[:, dim:]
