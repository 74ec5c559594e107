"""The integral-identity suite on concrete surfaces.

Shifted Minkowski formulas, weighted variants with the Newton-tensor
gradient correction (including the negative control without it), the
curvature-harmonic lower bound, and the support-volume identity.
"""

from shiftcurv import identities as idn
from shiftcurv.surfaces import (SphereSpec, geometry_from_profile,
                                parse_surface, sphere_profile)


def show(rep):
    print(f"  {rep.name:<42s} lhs={rep.lhs: .8e} rhs={rep.rhs: .8e} "
          f"rel_err={rep.rel_err:.2e} {'PASS' if rep.passed else 'FAIL'}")


print("=== shifted Minkowski formulas, offset sphere rho=1, d=0.3, n=3 ===")
geom = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.3), 3, 96))
for k in range(1, 4):
    show(idn.minkowski_check(geom, k))

print("\n=== weighted Minkowski with the gradient correction ===")
for chi in ("const", "pow:1", "pow:2"):
    eq, _ = idn.weighted_minkowski_check(geom, 2, chi)
    show(eq)
print("  negative control (correction deliberately dropped, chi = s):")
bad, _ = idn.weighted_minkowski_check(geom, 2, "pow:1",
                                      include_correction=False)
show(bad)

print("\n=== curvature-harmonic lower bound (needs H > n) ===")
show(idn.heintze_karcher_check(geom))
wavy = geometry_from_profile(parse_surface(
    "perturbed:rho=1.0:eps=0.1:mode=2", n=2, N=96))
rep = idn.heintze_karcher_check(wavy)
show(rep)
print(f"  strict slack {rep.slack:.4f} on the non-umbilic surface "
      f"(umbilicity {rep.meta['umbilicity']:.3f})")

print("\n=== support-volume identity ===")
for g, name in ((geom, "offset sphere"), (wavy, "perturbed sphere")):
    rep = idn.volume_identity_check(g)
    print(f"  {name:<18s}", end="")
    show(rep)

print("\n=== constancy residuals: the sharpness dichotomy ===")
off = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.3), 2, 96))
plain = idn.constancy_residual(off, idn.CurvatureExpr.shifted_mean(2))
weighted = idn.constancy_residual(
    off, idn.CurvatureExpr.shifted_mean(2, weight="pow:1"))
print(f"  offset sphere: H_2(shifted) oscillates by "
      f"{plain.rel_oscillation:.1e} (a solution),")
print(f"  but V * H_2(shifted) oscillates by "
      f"{weighted.rel_oscillation:.2f}: the weighted equation only admits "
      f"centered spheres.")

print("\n=== proof-chain audit ===")
sph = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.0), 3, 96))
for rep in idn.proof_chain_audit(sph, "thm1.1i", k=2):
    show(rep)
print("  every inequality link collapses to equality on the centered sphere.")
