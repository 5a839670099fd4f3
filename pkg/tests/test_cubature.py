"""Circle and product sphere rules, exactness, and certified lower bounds."""

import io
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spherebound import (JacobiParams, MomentOracle, circle_rule,
                         cubature_lower_bound, gegenbauer_roots,
                         max_exactness_error, motzkin_form, parse_poly,
                         save_rule_csv, smallest_root, sphere_product_rule,
                         surface_area, upper_bound)
from spherebound.cubature import select_rule_degree


class TestCircleRule:
    def test_single_node(self):
        rule = circle_rule(1)
        assert rule.size == 1
        assert_allclose(rule.weights, [1.0])
        assert_allclose(rule.nodes[0], [1.0, 0.0], atol=1e-16)

    def test_equal_weights_on_uniform_grid(self):
        rule = circle_rule(8)
        assert_allclose(rule.weights, np.full(8, 1 / 8), rtol=0, atol=0)
        assert_allclose(rule.angles, 2 * math.pi * np.arange(8) / 8)

    def test_trig_exactness_below_node_count(self):
        for d in (3, 8, 13):
            rule = circle_rule(d)
            w, ang = np.asarray(rule.weights), np.asarray(rule.angles)
            assert rule.exactness_degree == d - 1
            for k in range(1, d):
                assert abs(float(w @ np.cos(k * ang))) <= 1e-13
                assert abs(float(w @ np.sin(k * ang))) <= 1e-13
            assert_allclose(float(w @ np.ones(d)), 1.0, rtol=1e-15)

    def test_node_count_frequency(self):
        # the d-point grid aliases cos(d theta) to 1 but kills sin(d theta)
        for d in (5, 8):
            rule = circle_rule(d)
            w, ang = np.asarray(rule.weights), np.asarray(rule.angles)
            assert_allclose(float(w @ np.cos(d * ang)), 1.0, rtol=1e-12)
            assert abs(float(w @ np.sin(d * ang))) <= 1e-13

    def test_linear_objective_node_minimum(self):
        for r in (1, 3, 6):
            d = 2 * r + 1
            rule = circle_rule(d)
            vals = np.asarray(rule.nodes)[:, 0]
            assert_allclose(vals.min(), math.cos(2 * math.pi * r / d), rtol=1e-14)


class TestSphereProductRule:
    def test_node_count_and_mass(self):
        for n in (2, 3, 4, 5):
            for d in (1, 2, 4):
                rule = sphere_product_rule(n, d)
                assert rule.size == 2 * d * d ** (n - 2)
                assert np.all(np.asarray(rule.weights) > 0)
                assert_allclose(rule.total_mass(), surface_area(n), rtol=1e-12)

    def test_nodes_on_sphere(self):
        rule = sphere_product_rule(4, 3)
        norms = np.linalg.norm(np.asarray(rule.nodes), axis=1)
        assert_allclose(norms, 1.0, rtol=0, atol=1e-12)

    def test_two_dimensional_case_is_scaled_circle_rule(self):
        d = 4
        rule = sphere_product_rule(2, d)
        circ = circle_rule(2 * d)
        assert_allclose(rule.nodes, circ.nodes, atol=1e-15)
        assert_allclose(rule.weights,
                        np.asarray(circ.weights) * surface_area(2), rtol=1e-14)

    def test_exact_through_declared_degree(self):
        for n in (3, 4):
            for d in range(1, 6):
                rule = sphere_product_rule(n, d)
                assert rule.exactness_degree == 2 * d - 1
                assert max_exactness_error(rule) <= 1e-10

    def test_exactness_threshold_is_sharp(self):
        # some monomial of degree 2d must fail; scan them all since a few
        # (e.g. pure powers in n=4) integrate exactly by accident
        o3, o4 = MomentOracle(3), MomentOracle(4)
        for n, oracle in [(3, o3), (4, o4)]:
            for d in (1, 2, 3, 5):
                rule = sphere_product_rule(n, d)
                X = np.asarray(rule.nodes)
                w = np.asarray(rule.weights)
                mass = rule.total_mass()
                worst = 0.0
                for alpha in _exact_degree(n, 2 * d):
                    target = mass * oracle.moment(alpha)
                    got = float(w @ np.prod(X ** np.asarray(alpha), axis=1))
                    err = abs(got - target) / (abs(target) if target else 1.0)
                    worst = max(worst, err)
                assert worst > 1e-6


def _exact_degree(n, deg):
    def rec(prefix, remaining, budget):
        if remaining == 1:
            yield prefix + (budget,)
            return
        for e in range(budget + 1):
            yield from rec(prefix + (e,), remaining - 1, budget - e)

    yield from rec((), n, deg)


class TestLowerBound:
    def test_constant_objective(self):
        assert cubature_lower_bound(parse_poly("5", 3), 3, 4) == 5.0

    def test_rule_degree_selection(self):
        assert select_rule_degree(1, 4) == 5
        assert select_rule_degree(6, 0) == 4
        assert select_rule_degree(0, 0) == 1

    def test_last_coordinate_hits_gegenbauer_root(self):
        f = parse_poly("x3", 3)
        got = cubature_lower_bound(f, 3, 4)
        assert_allclose(got, gegenbauer_roots(0.5, 5)[0], rtol=1e-14)

    def test_circle_linear_objective(self):
        # deg 1 + 2r = 7 forces the 9-node rule; its minimum of x1 is the
        # grid angle nearest pi
        f = parse_poly("x1", 2)
        got = cubature_lower_bound(f, 2, 3)
        assert_allclose(got, math.cos(8 * math.pi / 9), rtol=1e-14)

    def test_circle_certificate_stays_below_bound(self):
        f = parse_poly("x1", 2)
        for r in range(1, 13):
            lb = cubature_lower_bound(f, 2, r)
            ub = upper_bound(f, 2, r).value
            assert lb <= ub + 1e-12
            assert -1.0 < lb

    def test_below_upper_bound(self):
        f = motzkin_form()
        for r in (2, 4, 6):
            lb = cubature_lower_bound(f, 3, r)
            ub = upper_bound(f, 3, r).value
            assert lb <= ub + 1e-12

    def test_node_budget_guard(self):
        with pytest.raises(ValueError):
            cubature_lower_bound(parse_poly("x5", 5), 5, 40)

    def test_sandwich_for_last_coordinate(self):
        # lower certificate <= bound <= smallest Jacobi root of the matching
        # weight, and everything within a C/r^2 collar of -1; for this
        # objective the three agree exactly, so the comparisons carry a slack
        # for the pencil's eigensolve noise (Gram conditioning grows like 4^r)
        C = 5.1
        tol = 1e-7
        for n in (2, 3, 4, 5):
            f = parse_poly(f"x{n}", n)
            for r in (4, 8, 12):
                lb = cubature_lower_bound(f, n, r)
                ub = upper_bound(f, n, r).value
                root = smallest_root(JacobiParams((n - 3) / 2, (n - 3) / 2), r + 1)
                assert lb - tol <= ub <= root + tol
                for v in (lb, ub, root):
                    assert -1.0 < v <= -1.0 + C / r ** 2

    def test_tightness_window(self):
        for n in (3, 4):
            f = parse_poly(f"x{n}", n)
            for r in range(4, 21):
                lb = cubature_lower_bound(f, n, r)
                assert (1.0 + lb) * r * r >= 0.5


class TestExport:
    def test_csv_layout(self):
        rule = sphere_product_rule(3, 2)
        buf = io.StringIO()
        save_rule_csv(rule, buf)
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == "x1,x2,x3,weight"
        assert len(lines) == rule.size + 1
        row = np.array([float(v) for v in lines[1].split(",")])
        assert_allclose(row[:3], np.asarray(rule.nodes)[0], rtol=1e-16)
        assert_allclose(row[3], np.asarray(rule.weights)[0], rtol=1e-16)
