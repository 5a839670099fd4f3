"""Positive quadrature on the circle and product cubature on spheres.

The product rule combines an equispaced angular grid with Gauss-Gegenbauer
nodes in generalized spherical coordinates and integrates every polynomial
of degree at most 2d-1 exactly; that threshold is sharp and is certified by
tests against the closed-form moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .moments import MomentOracle, surface_area
from .orthopoly import gauss_rule, gegenbauer_roots
from .polynomials import Polynomial


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes, positive weights, and the certified polynomial exactness degree.

    domain is "interval" (nodes are reals in [-1, 1]), "circle", or "sphere"
    (nodes are points, one row each); angles carries the generating angles
    when the rule was built from them.
    """

    domain: str
    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    angles: np.ndarray | None = field(default=None, compare=False)

    @property
    def size(self):
        return len(self.weights)

    def total_mass(self):
        return float(self.weights.sum())

    def integrate(self, p):
        """Apply the rule to a polynomial (1 variable for interval rules)."""
        if self.domain == "interval":
            if p.n != 1:
                raise ValueError("interval rules integrate univariate polynomials")
            vals = p.eval_many(self.nodes[:, None])
        else:
            vals = p.eval_many(self.nodes)
        return float(self.weights @ vals)


def circle_rule(d):
    """Equispaced d-point rule for the normalized measure on the circle.

    Exact for trigonometric polynomials of degree <= d-1, and additionally
    for sin(d theta); it is not exact on cos(d theta) (the rule sums it to 1
    while the integral is 0), so the certified degree is d-1.
    """
    d = int(d)
    if d < 1:
        raise ValueError("need at least one node")
    angles = 2.0 * math.pi * np.arange(d) / d
    nodes = np.column_stack([np.cos(angles), np.sin(angles)])
    weights = np.full(d, 1.0 / d)
    return QuadratureRule(domain="circle", dim=2, nodes=nodes, weights=weights,
                          exactness_degree=d - 1, angles=angles)


def angles_to_points(angles):
    """Generalized spherical coordinates: map (m, n-1) angles to (m, n) points.

    x_n = cos t_{n-1}, x_j = cos t_{j-1} * prod_{i>=j} sin t_i for 1 < j < n,
    x_1 = prod sin t_i.
    """
    T = np.atleast_2d(np.asarray(angles, dtype=float))
    m, k = T.shape
    out = np.empty((m, k + 1))
    suffix = np.ones(m)
    out[:, k] = np.cos(T[:, k - 1])
    for j in range(k - 1, 0, -1):
        suffix = suffix * np.sin(T[:, j])
        out[:, j] = np.cos(T[:, j - 1]) * suffix
    out[:, 0] = suffix * np.sin(T[:, 0])
    return out


def sphere_product_rule(n, d):
    """Product cubature on S^{n-1}, exact for polynomials of degree <= 2d-1.

    Uses the 2d-point equispaced grid in the first angle and d-point
    Gauss-Gegenbauer angles (index (i-1)/2) in the remaining ones; node
    count is 2d * d^(n-2) and the weights sum to surface_area(n).
    """
    n = int(n)
    d = int(d)
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if d < 1:
        raise ValueError("parameter d must be at least 1")
    if n == 2:
        base = circle_rule(2 * d)
        return QuadratureRule(domain="sphere", dim=2, nodes=base.nodes,
                              weights=base.weights * surface_area(2),
                              exactness_degree=2 * d - 1, angles=base.angles)
    theta1 = math.pi * np.arange(2 * d) / d
    angle_grids = [theta1]
    weight_grids = [np.full(2 * d, math.pi / d)]
    for i in range(2, n):
        g = gauss_rule((i - 1) / 2.0, d)
        angle_grids.append(np.arccos(g.nodes[::-1]))
        weight_grids.append(g.weights[::-1])
    mesh = np.meshgrid(*angle_grids, indexing="ij")
    angles = np.column_stack([m.ravel() for m in mesh])
    wmesh = np.meshgrid(*weight_grids, indexing="ij")
    weights = np.ones(len(angles))
    for w in wmesh:
        weights = weights * w.ravel()
    weights *= surface_area(n) / weights.sum()
    return QuadratureRule(domain="sphere", dim=n, nodes=angles_to_points(angles),
                          weights=weights, exactness_degree=2 * d - 1,
                          angles=angles)


def max_exactness_error(rule, oracle=None):
    """Largest error over all monomials up to the declared exactness degree.

    Compares rule sums against (total mass) * normalized moment; relative
    error where the moment is nonzero, absolute otherwise.
    """
    if rule.domain == "interval":
        raise ValueError("use interval_moment directly for interval rules")
    n = rule.dim
    oracle = oracle or MomentOracle(n)
    mass = rule.total_mass()
    worst = 0.0
    for alpha in _monomials_up_to(n, rule.exactness_degree):
        target = mass * oracle.moment(alpha)
        got = float(rule.weights @ _eval_monomial(rule.nodes, alpha))
        err = abs(got - target) / (abs(target) if target != 0.0 else 1.0)
        worst = max(worst, err)
    return worst


def _monomials_up_to(n, deg):
    def rec(prefix, remaining, budget):
        if remaining == 1:
            for e in range(budget + 1):
                yield prefix + (e,)
            return
        for e in range(budget + 1):
            yield from rec(prefix + (e,), remaining - 1, budget - e)

    yield from rec((), n, deg)


def _eval_monomial(X, alpha):
    vals = np.ones(len(X))
    for i, e in enumerate(alpha):
        if e:
            vals = vals * X[:, i] ** e
    return vals


def select_rule_degree(f_degree, r):
    """Smallest d with 2d - 1 >= deg f + 2r."""
    return max(1, (int(f_degree) + 2 * int(r) + 2) // 2)


def cubature_lower_bound(f, n, r, node_budget=5_000_000):
    """Certified lower bound on the level-r upper bound: min of f over a rule.

    The rule is chosen exact to degree deg f + 2r, so for any admissible
    density the expectation of f is a convex combination of node values.
    On the circle an N-point equispaced rule is exact to trigonometric
    degree N - 1 only, so N must exceed deg f + 2r; the smallest odd such N
    is used (an odd grid never contains the antipode of a node, which keeps
    linear-objective certificates strictly above -1).
    """
    n = int(n)
    if f.n != n:
        raise ValueError(f"polynomial dimension {f.n}, expected {n}")
    if n == 2:
        count = max(1, f.degree + 2 * int(r) + 1)
        rule = circle_rule(count + 1 if count % 2 == 0 else count)
    else:
        d = select_rule_degree(f.degree, r)
        count = 2 * d * d ** (n - 2)
        if count > node_budget:
            raise ValueError(f"product rule needs {count} nodes, over the budget {node_budget}")
        rule = sphere_product_rule(n, d)
    return float(f.eval_many(rule.nodes).min())


def save_rule_csv(rule, fh, fmt="%.17g"):
    """Write rule nodes and weights as CSV: x1,...,xn,weight."""
    if rule.domain == "interval":
        header = "x1,weight"
        rows = np.column_stack([rule.nodes, rule.weights])
    else:
        header = ",".join(f"x{i + 1}" for i in range(rule.dim)) + ",weight"
        rows = np.column_stack([rule.nodes, rule.weights])
    fh.write(header + "\n")
    for row in rows:
        fh.write(",".join(fmt % v for v in row) + "\n")
