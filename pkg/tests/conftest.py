"""Shared helpers for the test suite."""

import numpy as np

from spherebound import Polynomial


def random_poly(n, degree, rng, terms=6, scale=1.0):
    """Random sparse polynomial with integer-ish coefficients."""
    out = {}
    for _ in range(terms):
        alpha = tuple(int(v) for v in rng.multinomial(rng.integers(0, degree + 1),
                                                      np.full(n, 1.0 / n)))
        c = float(rng.integers(-9, 10))
        if c != 0.0:
            out[alpha] = out.get(alpha, 0.0) + c * scale
    return Polynomial(n, out)


def random_sphere(m, n, rng):
    """m uniform points on the unit sphere in R^n."""
    x = rng.standard_normal((m, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)
