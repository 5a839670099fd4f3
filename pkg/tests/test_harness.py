"""Sweeps, rate fits, reductions, and file exports."""

import io
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spherebound import (Polynomial, SweepRecord, estimate_min, fit_rate,
                         hessian_norm_bound, linearize_at, load_sweep_csv,
                         motzkin_form, parse_poly, reproduce_table1,
                         rotate_linear, save_sweep_csv, sweep, upper_bound)
from spherebound.harness import TABLE1_REFERENCE


class TestFitRate:
    def test_synthetic_inverse_square_model(self):
        records = [SweepRecord(r=r, bound=3.7 / r ** 2, lower_certificate=None,
                               basis_size=0, runtime_ms=0.0)
                   for r in range(4, 17)]
        fit = fit_rate(records, 0.0)
        assert abs(fit.slope + 2.0) <= 1e-9
        assert fit.residual <= 1e-12

    def test_default_window_is_upper_half(self):
        records = [SweepRecord(r=r, bound=1.0 / r, lower_certificate=None,
                               basis_size=0, runtime_ms=0.0)
                   for r in range(4, 17)]
        fit = fit_rate(records, 0.0)
        assert fit.r_range == (10, 16)

    def test_explicit_window(self):
        records = [SweepRecord(r=r, bound=1.0 / r, lower_certificate=None,
                               basis_size=0, runtime_ms=0.0)
                   for r in range(1, 21)]
        fit = fit_rate(records, 0.0, r_window=(5, 12))
        assert fit.r_range == (5, 12)

    def test_nonpositive_gaps_are_dropped(self):
        records = [SweepRecord(r=r, bound=1.0 / r ** 2, lower_certificate=None,
                               basis_size=0, runtime_ms=0.0)
                   for r in range(1, 13)]
        records.append(SweepRecord(r=13, bound=0.0, lower_certificate=None,
                                   basis_size=0, runtime_ms=0.0))
        fit = fit_rate(records, 0.0, r_window=(1, 13))
        assert fit.r_range[1] == 12

    def test_insufficient_records(self):
        records = [SweepRecord(r=r, bound=1.0 / r, lower_certificate=None,
                               basis_size=0, runtime_ms=0.0) for r in (1, 2, 3)]
        with pytest.raises(ValueError):
            fit_rate(records, 0.0, r_window=(1, 3))

    def test_linear_objective_rate_on_two_sphere(self):
        records = sweep(parse_poly("x3", 3), 3, 4, 16, f_ref=-1.0,
                        certificates=False)
        fit = fit_rate(records, -1.0)
        assert -2.3 <= fit.slope <= -1.7

    def test_motzkin_desk_scale_slope(self):
        records = sweep(motzkin_form(), 3, 4, 9, f_ref=0.0, certificates=False)
        fit = fit_rate(records, 0.0, r_window=(4, 9))
        assert fit.slope < -0.5


class TestSweep:
    def test_constant_objective(self):
        records = sweep(Polynomial.constant(3, 2.5), 3, 0, 4, certificates=False)
        assert [rec.bound for rec in records] == [2.5] * 5

    def test_records_are_monotone_with_certificates(self):
        records = sweep(parse_poly("x1", 2), 2, 1, 8, f_ref=-1.0)
        for a, b in zip(records, records[1:]):
            assert b.bound <= a.bound + 1e-10
        for rec in records:
            assert rec.lower_certificate is not None
            assert rec.lower_certificate <= rec.bound + 1e-7
            assert rec.basis_size == 2 * rec.r + 1

    def test_circle_records_inside_cosine_bracket(self):
        records = sweep(parse_poly("x1", 2), 2, 1, 12)
        for rec in records:
            r = rec.r
            assert -math.cos(math.pi / (2 * r + 2)) - 1e-10 <= rec.bound
            assert rec.bound <= -math.cos(math.pi / (2 * r + 1)) + 1e-10

    def test_table_reproduction(self):
        records, diffs, ok = reproduce_table1()
        assert ok
        assert len(records) == 10
        assert max(abs(d) for d in diffs) <= 5e-4
        assert [rec.r for rec in records] == list(range(10))
        assert all(rec.basis_size <= 100 for rec in records)

    def test_reference_row_values(self):
        assert TABLE1_REFERENCE == (0.1714, 0.0952, 0.0519, 0.0457, 0.0287,
                                    0.0283, 0.0193, 0.0177, 0.0139, 0.0122)


class TestEstimates:
    def test_minimum_of_linear_coordinate(self):
        est = estimate_min(parse_poly("x3", 3), 3, samples=200_000)
        assert -1.0 <= est <= -0.999

    def test_motzkin_minimum_near_zero(self):
        est = estimate_min(motzkin_form(), 3, samples=200_000)
        assert 0.0 <= est <= 1e-4

    def test_hessian_scale_on_quadratic(self):
        # Hessian of x1^2 is constant with spectral norm 2
        got = hessian_norm_bound(parse_poly("x1^2", 3), 3)
        assert_allclose(got, 2.0, rtol=1e-12)

    def test_hessian_of_linear_is_zero(self):
        assert hessian_norm_bound(parse_poly("x1 - 2*x2", 3), 3) == 0.0


class TestLinearize:
    def test_linear_objective_fixed_point(self):
        f = parse_poly("x1 + 2*x2", 3)
        g = linearize_at(f, (1.0, 0.0, 0.0), c_f=0.0)
        assert g == f

    def test_majorizes_at_reference_minimizer(self):
        f = motzkin_form()
        a = (1.0, 0.0, 0.0)
        g = linearize_at(f, a)
        assert g.degree <= 1
        assert abs(g.evaluate(a) - f.evaluate(a)) <= 1e-12
        rng = np.random.default_rng(43)
        X = rng.standard_normal((10_000, 3))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        assert float((g.eval_many(X) - f.eval_many(X)).min()) >= -1e-9

    def test_bound_gap_transfers_to_majorant(self):
        f = motzkin_form()
        a = (1.0, 0.0, 0.0)
        g = linearize_at(f, a)
        for r in range(2, 7):
            gap_f = upper_bound(f, 3, r).value - f.evaluate(a)
            gap_g = upper_bound(g, 3, r).value - g.evaluate(a)
            assert gap_f <= gap_g + 1e-10

    def test_off_sphere_reference_rejected(self):
        with pytest.raises(ValueError):
            linearize_at(motzkin_form(), (1.0, 1.0, 0.0))


class TestRotateLinear:
    def test_first_axis_fixed(self):
        U = rotate_linear(np.array([1.0, 0.0, 0.0]))
        assert_allclose(U @ [1.0, 0.0, 0.0], [1.0, 0.0, 0.0], atol=1e-15)

    def test_random_unit_vectors(self):
        rng = np.random.default_rng(47)
        for n in (2, 3, 4, 6):
            for _ in range(5):
                c = rng.standard_normal(n)
                c /= np.linalg.norm(c)
                U = rotate_linear(c)
                e1 = np.zeros(n)
                e1[0] = 1.0
                assert np.linalg.norm(U @ c - e1) <= 1e-12
                assert np.max(np.abs(U.T @ U - np.eye(n))) <= 1e-12

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            rotate_linear(np.array([1.0, 1.0]))


class TestCsv:
    def _records(self):
        return sweep(parse_poly("x1", 2), 2, 1, 6, f_ref=-1.0)

    def test_round_trip_is_bit_identical(self):
        records = self._records()
        buf = io.StringIO()
        save_sweep_csv(records, buf, fmt="%.17g")
        back = load_sweep_csv(io.StringIO(buf.getvalue()))
        assert len(back) == len(records)
        for a, b in zip(records, back):
            assert a.r == b.r and a.basis_size == b.basis_size
            assert a.bound == b.bound
            assert a.lower_certificate == b.lower_certificate
            assert a.runtime_ms == b.runtime_ms

    def test_header_and_missing_certificates(self):
        records = sweep(motzkin_form(), 3, 0, 2, certificates=False)
        buf = io.StringIO()
        save_sweep_csv(records, buf)
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == "r,bound,lower_certificate,basis_size,runtime_ms"
        assert len(lines) == 4
        back = load_sweep_csv(io.StringIO(buf.getvalue()))
        assert all(rec.lower_certificate is None for rec in back)

    def test_header_validation(self):
        with pytest.raises(ValueError):
            load_sweep_csv(io.StringIO("r,bound\n1,0.5\n"))

    def test_reruns_are_deterministic(self):
        a = self._records()
        b = self._records()
        for x, y in zip(a, b):
            # runtime is wall clock; every computed field must match exactly
            assert (x.r, x.bound, x.lower_certificate, x.basis_size) == \
                   (y.r, y.bound, y.lower_certificate, y.basis_size)
