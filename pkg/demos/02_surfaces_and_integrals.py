"""Building hypersurfaces in hyperbolic space and integrating over them.

Geodesic spheres (centered and offset), perturbed spheres, principal
curvatures against closed forms, areas and weighted volumes, and the
spectral convergence of the Hessian-identity residual.
"""

import math

import numpy as np

from shiftcurv.quadrature import enclosed_weighted_volume, surface_area
from shiftcurv.surfaces import (SphereSpec, geometry_from_profile,
                                hessV_residual, parse_surface,
                                perturbed_profile, sphere_profile)


def coth(x):
    return math.cosh(x) / math.sinh(x)


print("=== geodesic sphere, radius 1, dimension n=2 ===")
g = geometry_from_profile(sphere_profile(SphereSpec(rho=1.0, d=0.0), 2, 96))
print(f"  principal curvatures: {g.kappa.min():.12f} .. {g.kappa.max():.12f}"
      f"   (coth 1 = {coth(1.0):.12f})")
print(f"  area     = {surface_area(g):.10f}   "
      f"(4 pi sinh^2 1 = {4 * math.pi * math.sinh(1.0) ** 2:.10f})")
print(f"  weighted volume = {enclosed_weighted_volume(g):.10f}   "
      f"(omega_2 sinh^3 1 / 3 = "
      f"{4 * math.pi * math.sinh(1.0) ** 3 / 3:.10f})")

print("\n=== offset sphere: same intrinsic data, moving support function ===")
h = geometry_from_profile(sphere_profile(SphereSpec(rho=1.0, d=0.4), 2, 96))
print(f"  curvature error vs coth 1: {np.abs(h.kappa - coth(1.0)).max():.2e}")
print(f"  area difference vs centered: "
      f"{abs(surface_area(h) - surface_area(g)):.2e} (isometric)")
print(f"  weighted-volume difference: "
      f"{abs(enclosed_weighted_volume(h) - enclosed_weighted_volume(g)):.4f}"
      f" (the potential cosh r is origin-anchored)")
print(f"  support function u range: {h.u.min():.4f} .. {h.u.max():.4f}"
      f"   (centered sphere: constant sinh 1 = {math.sinh(1.0):.4f})")

print("\n=== perturbed sphere via the surface grammar ===")
p = geometry_from_profile(parse_surface(
    "perturbed:rho=1.0:eps=0.1:mode=3", n=2, N=96))
print(f"  r range {p.r.min():.4f} .. {p.r.max():.4f}, "
      f"shifted curvature range {p.kappa_shifted.min():.4f} .. "
      f"{p.kappa_shifted.max():.4f}")

print("\n=== Hessian identity as a discretization gate ===")
print("  residual of grad^2 V = V g - u h on a perturbed sphere:")
for N in (32, 48, 64, 96, 128):
    r = hessV_residual(geometry_from_profile(perturbed_profile(1.0, 0.05, 20, 2, N)))
    print(f"    N = {N:3d}: {r:.3e}")
print("  spectral collocation: the residual crashes to roundoff once the")
print("  perturbation mode is resolved.")
