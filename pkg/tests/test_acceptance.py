"""Acceptance gate: ten criteria covering the exact algebra, the geometry
pipeline, the integral identities, the rigidity probes and the proof-chain
audits.  Each test prints a single PASS/FAIL line (visible in the live test
log) and asserts the criterion at its stated tolerance.
"""

import math
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from shiftcurv import identities as idn
from shiftcurv import symfun
from shiftcurv.rigidity import perturbation_ensemble, solve_constant_equation
from shiftcurv.surfaces import (SphereSpec, _H_table, geometry_from_profile,
                                hessV_residual, parse_surface,
                                perturbed_profile, sphere_profile)


def announce(capsys, num, desc, ok):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] acceptance {num}: {desc}")
    assert ok, f"acceptance criterion {num} failed: {desc}"


def rand_fractions(rng, n):
    return [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 7)))
            for _ in range(n)]


def rand_sym_fraction_matrix(rng, n):
    A = np.empty((n, n), object)
    for i in range(n):
        for j in range(i, n):
            A[i, j] = A[j, i] = Fraction(int(rng.integers(-3, 4)),
                                         int(rng.integers(1, 4)))
    return A


def coth(x):
    return math.cosh(x) / math.sinh(x)


def test_criterion_1_exact_identities(capsys):
    """Trace identities, shift transform + inverse, and the brute-force
    intrinsic-invariant expansion agree exactly in rational arithmetic."""
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    ok = True

    # Newton-tensor trace identities, n <= 5, exact
    cases = 0
    for _ in range(100):
        n = int(rng.integers(2, 6))
        A = rand_sym_fraction_matrix(rng, n)
        k = int(rng.integers(1, n + 1))
        T = symfun.newton_tensor(A, k - 1, exact=True)
        sk = symfun.elementary_symmetric_of_matrix(A, k, exact=True)
        sk1 = symfun.elementary_symmetric_of_matrix(A, k - 1, exact=True)
        ok &= sum((T @ A)[i, i] for i in range(n)) == k * sk
        ok &= sum(T[i, i] for i in range(n)) == (n - k + 1) * sk1
        cases += 1
    assert cases >= 100

    # shift transform and its inverse, exact round trip and direct agreement
    cases = 0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        lam = rand_fractions(rng, n)
        H = [symfun.elementary_symmetric(lam, k, exact=True)
             / math.comb(n, k) for k in range(n + 1)]
        Hs = [symfun.shift_transform(H, k, "to_shifted", exact=True)
              for k in range(n + 1)]
        back = [symfun.shift_transform(Hs, k, "from_shifted", exact=True)
                for k in range(n + 1)]
        direct = [symfun.elementary_symmetric([v - 1 for v in lam], k,
                                              exact=True) / math.comb(n, k)
                  for k in range(n + 1)]
        ok &= back == H and Hs == direct
        cases += 1
    assert cases >= 100

    # tensor-contraction brute force vs shifted-curvature expansion, exact
    cases = 0
    while cases < 100:
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, min(n // 2, 2) + 1))
        W = rand_sym_fraction_matrix(rng, n)
        I = np.array([[Fraction(int(i == j)) for j in range(n)]
                      for i in range(n)], object)
        H = [symfun.elementary_symmetric_of_matrix(W - I, m, exact=True)
             / math.comb(n, m) for m in range(2 * k + 1)]
        ok &= symfun.gauss_bonnet_bruteforce(W, k, exact=True) == \
            symfun.gauss_bonnet_expand(H, n, k, exact=True)
        cases += 1

    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10.0
    announce(capsys, 1,
             f"exact identities, 300 rational cases in {elapsed:.2f}s", ok)


def test_criterion_2_newton_maclaurin_sampling(capsys):
    """Both gap functions are nonnegative on 10^4 cone-sampled points, and a
    tiny gap certifies near-umbilicity."""
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    total = 0
    min_gap = math.inf
    implication_ok = True
    tested_small = 0
    for n in (2, 3, 4, 5, 6):
        need = 1960
        pts = []
        while sum(p.shape[0] for p in pts) < need:
            lam = rng.normal(loc=1.0, scale=0.6, size=(4 * need, n))
            Ht = _H_table(lam)
            inside = np.ones(lam.shape[0], bool)
            for i in range(1, n + 1):
                inside &= Ht[i] >= 0.0
            pts.append(lam[inside])
        lam = np.concatenate(pts)[:need]
        # seed exactly umbilic points so the equality branch is exercised
        umb = np.repeat(rng.uniform(0.2, 2.0, size=40)[:, None], n, axis=1)
        lam = np.concatenate([lam, umb])
        Ht = _H_table(lam)
        k = n
        l = max(n - 1, 1)
        gap1 = Ht[k - 1] * Ht[l] - Ht[k] * Ht[l - 1]
        gap2 = Ht[l] - Ht[k] ** (l / k)
        min_gap = min(min_gap, float(gap1.min()), float(gap2.min()))
        dev = np.abs(lam - lam.mean(axis=1)[:, None]).max(axis=1)
        small = np.minimum(gap1, gap2) <= 1e-10
        tested_small += int(small.sum())
        implication_ok &= bool(np.all(dev[small] <= 1e-8))
        total += lam.shape[0]
    elapsed = time.perf_counter() - t0
    ok = (total >= 10 ** 4 and min_gap >= -1e-12 and implication_ok
          and tested_small >= 100 and elapsed < 5.0)
    announce(capsys, 2,
             f"Newton-Maclaurin gaps on {total} cone samples "
             f"(min {min_gap:.1e}, {tested_small} equality-branch points, "
             f"{elapsed:.2f}s)", ok)


def test_criterion_3_geometry_gate(capsys):
    """The Hessian identity residual decays at order >= 2 under refinement
    (or sits at the roundoff floor), and sphere curvatures are exact."""
    sizes = (64, 128, 256)
    # smooth low-mode surface: residual is at the spectral roundoff floor
    low = [hessV_residual(geometry_from_profile(
        perturbed_profile(1.0, 0.1, 3, 2, N))) for N in sizes]
    low_ok = all(r <= 1e-9 for r in low)
    # high-mode companion: under-resolved at N=64, so the decay (far beyond
    # second order) is measurable before it too hits the floor
    high = [hessV_residual(geometry_from_profile(
        perturbed_profile(1.0, 0.05, 20, 2, N))) for N in sizes]
    order_ok = high[0] / max(high[1], 1e-300) >= 2.0 ** 2
    g = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.3), 2, 128))
    sphere_ok = float(np.abs(g.kappa - coth(1.0)).max()) < 1e-8
    ok = low_ok and order_ok and sphere_ok
    announce(capsys, 3,
             f"Hessian-identity residual floor {max(low):.1e}, refinement "
             f"ratio {high[0]/high[1]:.1e}, sphere curvature exact", ok)


SURFACES_4 = ["sphere:rho=1.0", "sphere:rho=1.0:d=0.5",
              "perturbed:rho=1.0:eps=0.1:mode=2",
              "perturbed:rho=1.0:eps=0.1:mode=3"]


def test_criterion_4_minkowski(capsys):
    """The shifted Minkowski formula holds to 1e-6 relative error for all k
    on spheres, offset spheres and perturbed spheres, n in {2,3,4}."""
    worst = 0.0
    ok = True
    for n in (2, 3, 4):
        for spec in SURFACES_4:
            geom = geometry_from_profile(parse_surface(spec, n=n, N=256))
            for k in range(1, n + 1):
                rep = idn.minkowski_check(geom, k, tol=1e-6)
                worst = max(worst, rep.rel_err)
                ok &= rep.passed
    # closed form: k=1, rho=1, n=2 gives e^{-1} * 4 pi sinh^2(1)
    g = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.0), 2, 256))
    rep = idn.minkowski_check(g, 1)
    want = math.exp(-1.0) * 4 * math.pi * math.sinh(1.0) ** 2
    ok &= abs(rep.lhs - want) < 1e-8 and abs(rep.rhs - want) < 1e-8
    ok &= abs(want - 6.385) < 5e-3
    announce(capsys, 4,
             f"Minkowski formula, 36 surface/order combinations, worst "
             f"rel_err {worst:.1e}, closed form {want:.3f}", ok)


def test_criterion_5_weighted_minkowski(capsys):
    """Weighted Minkowski with the gradient correction balances for
    chi in {1, s, s^2}; omitting the correction visibly breaks it."""
    ok = True
    worst = 0.0
    for n in (2, 3):
        geom = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.3), n, 128))
        for chi in ("const", "pow:1", "pow:2"):
            for k in range(1, n + 1):
                eq, _ = idn.weighted_minkowski_check(geom, k, chi, tol=1e-6)
                worst = max(worst, eq.rel_err)
                ok &= eq.passed
    # negative control: drop the correction on a d=0.3 offset sphere
    geom = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.3), 2, 128))
    bad, _ = idn.weighted_minkowski_check(geom, 1, "pow:1", tol=1e-6,
                                          include_correction=False)
    control_ok = bad.rel_err >= 100 * 1e-6
    ok &= control_ok
    announce(capsys, 5,
             f"weighted Minkowski worst rel_err {worst:.1e}; control without "
             f"correction off by {bad.rel_err:.2e} (>= 1e-4)", ok)


def test_criterion_6_heintze_karcher(capsys):
    """The curvature-harmonic lower bound: equality on spheres, strict slack
    on non-umbilic surfaces, and a raised precondition when H <= n."""
    ok = True
    # equality on centered and offset spheres; centered closed form
    for n, d in ((2, 0.0), (2, 0.4), (3, 0.0), (3, 0.3)):
        g = geometry_from_profile(sphere_profile(SphereSpec(1.0, d), n, 128))
        rep = idn.heintze_karcher_check(g, tol=1e-8)
        ok &= rep.rel_err <= 1e-8
        if d == 0.0:
            want = g.grid.omega_n * math.sinh(1.0) ** (n + 1) / n
            ok &= abs(rep.lhs - want) < 1e-8 and abs(rep.rhs - want) < 1e-8
    # strict positive slack off the umbilic family
    w = geometry_from_profile(parse_surface(
        "perturbed:rho=1.0:eps=0.1:mode=2", n=2, N=128))
    slack_rep = idn.heintze_karcher_check(w)
    ok &= slack_rep.slack > 1e-3
    # precondition violation
    bad = geometry_from_profile(parse_surface(
        "perturbed:rho=0.8:eps=0.3:mode=4", n=2, N=96))
    try:
        idn.heintze_karcher_check(bad)
        raised = False
    except ValueError:
        raised = True
    ok &= raised
    announce(capsys, 6,
             f"lower-bound equality on spheres, slack {slack_rep.slack:.2f} "
             f"off-family, precondition raised: {raised}", ok)


def test_criterion_7_volume_identity(capsys):
    """Support-function integral equals (n+1) x weighted enclosed volume on
    every test surface; sphere closed form ~ 20.40."""
    ok = True
    worst = 0.0
    for n in (2, 3, 4):
        for spec in SURFACES_4:
            geom = geometry_from_profile(parse_surface(spec, n=n, N=128))
            rep = idn.volume_identity_check(geom, tol=1e-8)
            worst = max(worst, rep.rel_err)
            ok &= rep.passed
    g = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.0), 2, 128))
    rep = idn.volume_identity_check(g)
    want = 4 * math.pi * math.sinh(1.0) ** 3
    ok &= abs(rep.lhs - want) < 1e-8 and abs(want - 20.40) < 5e-3
    announce(capsys, 7,
             f"volume identity worst rel_err {worst:.1e}, sphere closed "
             f"form {want:.2f}", ok)


def test_criterion_8_rigidity_probes(capsys):
    """Newton solves of the constancy equations land on geodesic spheres;
    the weighted equation additionally centers them."""
    t0 = time.perf_counter()
    target = coth(1.0) - 1.0
    expr = idn.CurvatureExpr.shifted_mean(1)
    rows = perturbation_ensemble(expr, target, rho=1.0, n=2, N=256,
                                 n_samples=20, eps=0.2, seed=42)
    ens_ok = (all(r["converged"] for r in rows)
              and all(r["umbilicity"] <= 1e-8 for r in rows))
    # offset spheres solve the unweighted equation already at iterate 0
    init = sphere_profile(SphereSpec(1.0, 0.3), 2, 256)
    res0 = solve_constant_equation(expr, target, init)
    fixed_ok = (res0.converged and len(res0.history) == 0
                and abs(res0.sphere_fit.offset - 0.3) < 1e-6)
    # chi(s) = s: converged solutions are centered, even from offset inits
    wexpr = idn.CurvatureExpr.shifted_mean(1, weight="pow:1")
    wtarget = math.cosh(1.0) * target
    resw = solve_constant_equation(wexpr, wtarget, init)
    osc_V = float(np.cosh(resw.profile.r).max() - np.cosh(resw.profile.r).min())
    centered_ok = resw.converged and resw.sphere_fit.umbilicity <= 1e-8 \
        and osc_V <= 1e-8
    elapsed = time.perf_counter() - t0
    ok = ens_ok and fixed_ok and centered_ok and elapsed < 300.0
    announce(capsys, 8,
             f"rigidity probes at N=256: 20/20 ensemble spheres, offset "
             f"fixed point, weighted solve centered (osc V {osc_V:.1e}), "
             f"{elapsed:.1f}s", ok)


def test_criterion_9_sharpness_witness(capsys):
    """On an offset sphere the unweighted second-order constancy holds while
    the weighted one fails by a definite margin."""
    geom = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.3), 2, 128))
    plain = idn.constancy_residual(geom, idn.CurvatureExpr.shifted_mean(2))
    weighted = idn.constancy_residual(
        geom, idn.CurvatureExpr.shifted_mean(2, weight="pow:1"))
    ok = plain.rel_oscillation <= 1e-8 and weighted.rel_oscillation >= 0.2
    announce(capsys, 9,
             f"offset sphere: plain oscillation {plain.rel_oscillation:.1e}, "
             f"weighted {weighted.rel_oscillation:.2f}", ok)


def test_criterion_10_proof_chain_audits(capsys):
    """Every audited inequality link collapses on a hypothesis-satisfying
    sphere and at least one is strictly one-signed on a generic surface."""
    sph = geometry_from_profile(sphere_profile(SphereSpec(1.0, 0.0), 3, 96))
    gen = geometry_from_profile(parse_surface(
        "perturbed:rho=1.0:eps=0.1:mode=2", n=3, N=96))
    ok = True
    worst_hyp = 0.0
    for tid in idn.THEOREM_IDS:
        k = 1 if tid == "coro1.9" else None
        hyp = idn.proof_chain_audit(sph, tid, k=k)
        slacks = [abs(r.slack) for r in hyp if r.kind == "inequality"]
        worst_hyp = max(worst_hyp, max(slacks, default=0.0))
        ok &= all(s <= 1e-6 for s in slacks)
        grep = idn.proof_chain_audit(gen, tid, k=k)
        gslacks = [r.slack for r in grep if r.kind == "inequality"]
        ok &= any(s >= 1e-4 for s in gslacks)
    announce(capsys, 10,
             f"proof-chain audits over {len(idn.THEOREM_IDS)} theorem ids: "
             f"worst hypothesis slack {worst_hyp:.1e}, one-signed link "
             f"present generically", ok)
