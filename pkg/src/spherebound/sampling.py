"""Quasirandom point sets on the unit sphere (fixed-seed, reproducible)."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc


def sphere_points(m, n, seed=0):
    """m scrambled-Sobol points on S^{n-1}, deterministic for a given seed.

    Uniformity comes from pushing Sobol samples through the Gaussian inverse
    CDF and normalizing; the spherical Gaussian is rotation invariant.
    """
    m = int(m)
    if m < 1:
        raise ValueError("need at least one point")
    sampler = qmc.Sobol(d=int(n), scramble=True, seed=seed)
    # draw a power-of-two block to keep the Sobol set balanced
    u = sampler.random_base2(max(1, math.ceil(math.log2(m))))[:m]
    g = ndtri(np.clip(u, 1e-15, 1.0 - 1e-15))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0.0] = 1.0
    return g / norms[:, None]
