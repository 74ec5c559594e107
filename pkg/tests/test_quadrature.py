"""Quadrature and convergence-study tests."""

import math

import numpy as np
import pytest

from shiftcurv.quadrature import (ConvergenceEstimate, convergence_order,
                                  enclosed_weighted_volume, pairwise_sum,
                                  surface_area)
from shiftcurv.surfaces import (SphereSpec, geometry_from_profile,
                                perturbed_profile, sphere_profile)


class TestPairwiseSum:
    def test_matches_exact_sum(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=1003)
        assert pairwise_sum(a) == pytest.approx(math.fsum(a), abs=1e-12)

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=517)
        assert pairwise_sum(a) == pairwise_sum(a.copy())

    def test_kahan_against_fsum(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=2000) * 10.0 ** rng.integers(0, 8, size=2000)
        assert pairwise_sum(a, kahan=True) == pytest.approx(
            math.fsum(a), abs=1e-8)

    def test_empty(self):
        assert pairwise_sum([]) == 0.0


class TestVolumes:
    def test_weighted_volume_sphere_closed_form(self):
        # int_Omega cosh r = omega_n sinh^{n+1}(rho)/(n+1)
        for n, rho in ((2, 1.0), (3, 0.7)):
            g = geometry_from_profile(sphere_profile(SphereSpec(rho, 0.0), n, 48))
            want = g.grid.omega_n * math.sinh(rho) ** (n + 1) / (n + 1)
            assert enclosed_weighted_volume(g) == pytest.approx(want, rel=1e-12)

    def test_volume_invariant_under_offset(self):
        a = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.0), 2, 96))
        b = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.4), 2, 96))
        assert enclosed_weighted_volume(a) != pytest.approx(
            enclosed_weighted_volume(b), rel=1e-12)
        # area IS offset-invariant (isometry), weighted volume is not
        assert surface_area(a) == pytest.approx(surface_area(b), rel=1e-12)


class TestConvergenceOrder:
    def test_recovers_known_order(self):
        est = convergence_order(lambda N: 1.0 + 3.0 / N ** 2,
                                [8, 16, 32, 64], reference=1.0)
        assert est.established
        assert est.order == pytest.approx(2.0, abs=0.05)

    def test_floor_flagged(self):
        est = convergence_order(lambda N: 1.0, [8, 16, 32], reference=1.0)
        assert not est.established
        assert "floor" in est.note

    def test_non_monotone_flagged(self):
        vals = {8: 1.1, 16: 1.001, 32: 1.05, 64: 1.0001}
        with pytest.warns(UserWarning):
            est = convergence_order(lambda N: vals[N], [8, 16, 32, 64],
                                    reference=1.0)
        assert not est.established

    def test_needs_three_sizes(self):
        with pytest.raises(ValueError):
            convergence_order(lambda N: 1.0 / N, [8, 16])

    def test_self_referencing_uses_finest(self):
        est = convergence_order(lambda N: 2.0 + 5.0 / N ** 3, [8, 16, 32, 256])
        assert est.established
        assert est.order == pytest.approx(3.0, abs=0.1)


class TestSurfaceIntegralGuards:
    def test_nonfinite_rejected(self):
        g = geometry_from_profile(perturbed_profile(1.0, 0.05, 2, 2, 32))
        bad = np.ones_like(g.r)
        bad[3] = np.nan
        with pytest.raises(ArithmeticError):
            g.integrate(bad)
