"""Rigidity-probe tests: the Newton solver for constancy equations, sphere
classification, continuation sweeps, and perturbation ensembles.

Closed-form anchors: a geodesic sphere of radius rho has shifted mean
curvature coth(rho) - 1, and in n = 2 its intrinsic scalar invariant equals
2 / sinh^2(rho).
"""

import math

import numpy as np
import pytest

from shiftcurv.identities import CurvatureExpr, Term
from shiftcurv.rigidity import (SolveConfig, batch_expression,
                                classify_solution, continuation_sweep,
                                perturbation_ensemble, solve_constant_equation)
from shiftcurv.surfaces import (SphereSpec, axis_grid, geometry_from_profile,
                                perturbed_profile, sphere_profile)


def coth(x):
    return math.cosh(x) / math.sinh(x)


H1 = CurvatureExpr.shifted_mean(1)
VH1 = CurvatureExpr.shifted_mean(1, weight="pow:1")


class TestBatchExpression:
    def test_matches_full_geometry(self):
        prof = perturbed_profile(1.0, 0.1, 3, 2, 48)
        geom = geometry_from_profile(prof)
        fn = batch_expression(H1)
        got = fn(prof.grid, prof.r)
        assert np.abs(got - H1.evaluate(geom)).max() < 1e-12

    def test_batched_rows_independent(self):
        prof = perturbed_profile(1.0, 0.05, 2, 2, 32)
        fn = batch_expression(VH1)
        batch = np.stack([prof.r, prof.r * 1.01])
        out = fn(prof.grid, batch)
        assert out.shape == (2, 32)
        assert np.allclose(out[0], fn(prof.grid, prof.r))
        assert np.allclose(out[1], fn(prof.grid, prof.r * 1.01))


class TestSolveConstantEquation:
    def test_recovers_sphere_from_perturbed_start(self):
        rho = 1.0
        init = perturbed_profile(rho, 0.1, 2, 2, 48)
        res = solve_constant_equation(H1, coth(rho) - 1.0, init)
        assert res.converged
        assert res.residual_norm <= 1e-9
        assert res.is_geodesic_sphere
        assert res.sphere_fit.rho == pytest.approx(rho, abs=1e-6)
        assert res.cone_ok

    def test_offset_sphere_is_fixed_point(self):
        # plain constancy of the shifted mean curvature does not pin the
        # center: an offset sphere solves it and the solver must not move it
        rho, d = 1.0, 0.3
        init = sphere_profile(SphereSpec(rho, d), 2, 48)
        res = solve_constant_equation(H1, coth(rho) - 1.0, init)
        assert res.converged
        assert res.iterations <= 2
        assert res.sphere_fit.offset == pytest.approx(d, abs=1e-6)

    def test_weighted_equation_centers_the_sphere(self):
        # chi(V) = V is strictly increasing, so constancy of V * H_1(shifted)
        # forces the centered sphere; start from an offset one
        rho = 1.0
        target = math.cosh(rho) * (coth(rho) - 1.0)
        init = sphere_profile(SphereSpec(rho, 0.25), 2, 48)
        res = solve_constant_equation(VH1, target, init)
        assert res.converged
        assert res.sphere_fit.is_centered
        assert res.sphere_fit.centered_metric < 1e-7
        assert res.sphere_fit.rho == pytest.approx(rho, abs=1e-7)

    def test_residual_history_decreases(self):
        init = perturbed_profile(1.0, 0.1, 3, 2, 48)
        res = solve_constant_equation(H1, coth(1.0) - 1.0, init)
        resids = [h["residual"] for h in res.history]
        assert all(b < a for a, b in zip(resids, resids[1:]))

    def test_nonconvergence_is_a_result_not_an_exception(self):
        init = perturbed_profile(1.0, 0.1, 2, 2, 32)
        res = solve_constant_equation(H1, coth(1.0) - 1.0, init,
                                      SolveConfig(max_iter=1))
        assert not res.converged
        assert res.sphere_fit is None
        assert not res.is_geodesic_sphere

    def test_grid_independence_of_recovered_radius(self):
        rho = 0.8
        fits = []
        for N in (48, 96):
            init = perturbed_profile(rho, 0.08, 2, 2, N)
            res = solve_constant_equation(H1, coth(rho) - 1.0, init)
            assert res.converged
            fits.append(res.sphere_fit.rho)
        assert fits[0] == pytest.approx(fits[1], abs=1e-8)

    def test_higher_order_equation(self):
        # constancy of H_2(shifted) in n = 3
        rho = 1.0
        expr = CurvatureExpr.shifted_mean(2)
        init = perturbed_profile(rho, 0.02, 2, 3, 48)
        res = solve_constant_equation(expr, (coth(rho) - 1.0) ** 2, init)
        assert res.converged
        assert res.is_geodesic_sphere
        assert res.sphere_fit.rho == pytest.approx(rho, abs=1e-6)


class TestClassifySolution:
    def test_offset_sphere_recovered(self):
        prof = sphere_profile(SphereSpec(1.2, 0.4), 2, 64)
        fit = classify_solution(prof)
        assert fit.is_sphere
        assert fit.rho == pytest.approx(1.2, abs=1e-9)
        assert fit.offset == pytest.approx(0.4, abs=1e-7)
        assert fit.umbilicity < 1e-8
        assert not fit.is_centered

    def test_centered_sphere(self):
        fit = classify_solution(sphere_profile(SphereSpec(0.9, 0.0), 3, 48))
        assert fit.is_centered
        assert fit.centered_metric < 1e-12

    def test_negative_control(self):
        fit = classify_solution(perturbed_profile(1.0, 0.1, 2, 2, 48))
        assert not fit.is_sphere
        assert fit.residual > 1e-2
        assert fit.umbilicity > 1e-2


class TestContinuationSweep:
    def test_radius_sweep(self):
        rhos = [1.0, 0.9, 0.8, 0.7]
        init = perturbed_profile(1.0, 0.05, 2, 2, 48)
        results = continuation_sweep(
            lambda rho: (H1, coth(rho) - 1.0), rhos, init)
        assert all(r.converged for r in results)
        for rho, r in zip(rhos, results):
            assert r.sphere_fit.rho == pytest.approx(rho, abs=1e-7)

    def test_intrinsic_invariant_inversion(self):
        # n = 2: the degree-one intrinsic invariant equals 2/sinh^2(rho) on a
        # geodesic sphere; sweeping its target must recover the radii
        expr = CurvatureExpr((Term("L", 1),), label="L_1")
        rhos = [1.0, 1.2]
        init = perturbed_profile(1.0, 0.05, 2, 2, 48)
        results = continuation_sweep(
            lambda rho: (expr, 2.0 / math.sinh(rho) ** 2), rhos, init)
        assert all(r.converged for r in results)
        for rho, r in zip(rhos, results):
            assert r.sphere_fit.rho == pytest.approx(rho, abs=1e-6)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_sweep_continues_past_failure(self):
        # an unreachable target in the middle must not abort the sweep
        def expr_of(c):
            return (H1, c)

        init = perturbed_profile(1.0, 0.05, 2, 2, 32)
        targets = [coth(1.0) - 1.0, -5.0, coth(0.9) - 1.0]
        results = continuation_sweep(expr_of, targets, init,
                                     SolveConfig(max_iter=8))
        assert results[0].converged
        assert not results[1].converged
        assert results[2].converged
        assert results[2].sphere_fit.rho == pytest.approx(0.9, abs=1e-6)


class TestPerturbationEnsemble:
    def test_all_samples_return_to_spheres(self):
        rows = perturbation_ensemble(H1, coth(1.0) - 1.0, rho=1.0, n=2, N=48,
                                     n_samples=5, eps=0.1, seed=3)
        assert len(rows) == 5
        assert all(r["converged"] for r in rows)
        assert all(r["is_sphere"] for r in rows)
        assert all(r["umbilicity"] < 1e-7 for r in rows)
        assert all(abs(r["rho_fit"] - 1.0) < 1e-5 for r in rows)

    def test_seed_determinism(self):
        a = perturbation_ensemble(H1, coth(1.0) - 1.0, 1.0, 2, 32, 2, 0.05,
                                  seed=7)
        b = perturbation_ensemble(H1, coth(1.0) - 1.0, 1.0, 2, 32, 2, 0.05,
                                  seed=7)
        assert a == b

    def test_rows_have_full_schema(self):
        rows = perturbation_ensemble(H1, coth(1.0) - 1.0, 1.0, 2, 32, 1, 0.05)
        want = {"sample", "eps", "converged", "iterations", "residual",
                "sphere_residual", "rho_fit", "offset_fit", "umbilicity",
                "centered_metric", "is_sphere", "cone_ok"}
        assert set(rows[0]) == want
