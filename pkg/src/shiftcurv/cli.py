"""Command-line front end.

Subcommands
    symfun-check   self-test of the symmetric-function kernel
    surface-info   geometry summary of one surface
    verify         full integral-identity suite
    theorem        constancy residual of one theorem's hypothesis
    audit          numerical audit of one theorem's proof chain
    solve          Newton solve of a constant-curvature equation
    ensemble       randomized rigidity experiment
    sweep          continuation sweep over a list of targets

Exit codes: 0 all checks pass, 1 a check fails, 2 usage/config/precondition
error, 3 numerical or I/O failure.  A JSON config file (--config) supplies
defaults; explicit flags override it; unknown config keys are rejected.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from . import identities as idn
from . import rigidity as rg
from . import symfun
from .quadrature import enclosed_weighted_volume, surface_area
from .surfaces import geometry_from_profile, parse_surface

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Resolved settings of one CLI run (config file merged with flags)."""

    command: str = ""
    surface: str = "sphere:rho=1.0"
    n: int = 2
    k: int = 1
    l: int = 0
    chi: str = "pow:1"
    grid: int = 96
    tol: float = 1e-6
    seed: int = 0
    out: str = ""
    format: str = "csv"
    exact: bool = False
    name: str = "thm1.1i"
    target: float = math.nan
    targets: str = ""
    samples: int = 10
    eps: float = 0.05
    negate_correction: bool = False  # test hook: mis-signs the gradient term

    def validate(self):
        if not 2 <= self.n:
            raise UsageError(f"--n {self.n}: need n >= 2")
        if not 1 <= self.k <= self.n:
            raise UsageError(f"--k {self.k}: index out of range for n={self.n}")
        if not 0 <= self.l <= self.n:
            raise UsageError(f"--l {self.l}: index out of range for n={self.n}")
        if self.grid < 8:
            raise UsageError(f"--grid {self.grid}: need at least 8 nodes")
        if self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.format not in ("csv", "json", "svg"):
            raise UsageError(f"--format {self.format!r}: use csv|json|svg")


def _build_parser():
    p = argparse.ArgumentParser(prog="shiftcurv", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file with defaults")
    for flag, kw in [
        ("--surface", dict(help="surface spec, e.g. sphere:rho=1.0:d=0.3")),
        ("--n", dict(type=int, help="hypersurface dimension")),
        ("--k", dict(type=int, help="curvature order")),
        ("--l", dict(type=int, help="secondary curvature order")),
        ("--chi", dict(help="weight family, e.g. pow:1, exp, const")),
        ("--grid", dict(type=int, help="collocation grid size N")),
        ("--tol", dict(type=float, help="pass tolerance")),
        ("--seed", dict(type=int, help="RNG seed")),
        ("--out", dict(help="output directory")),
        ("--format", dict(choices=["csv", "json", "svg"])),
        ("--exact", dict(action="store_true", default=None,
                         help="rational arithmetic where applicable")),
    ]:
        common.add_argument(flag, **kw)
    common.add_argument("--negate-correction", action="store_true", default=None,
                        help=argparse.SUPPRESS)

    sub.add_parser("symfun-check", parents=[common])
    sub.add_parser("surface-info", parents=[common])
    sub.add_parser("verify", parents=[common])
    for cmd in ("theorem", "audit"):
        sp = sub.add_parser(cmd, parents=[common])
        sp.add_argument("--name", help="theorem id, e.g. thm1.1i, thm3.2, coro1.9")
    sp = sub.add_parser("solve", parents=[common])
    sp.add_argument("--target", type=float, help="constant right-hand side")
    sp = sub.add_parser("ensemble", parents=[common])
    sp.add_argument("--target", type=float)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--eps", type=float)
    sp = sub.add_parser("sweep", parents=[common])
    sp.add_argument("--targets", help="comma-separated target constants")
    return p


def parse_config(argv):
    """Merge defaults, JSON config file and flags into a RunConfig."""
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command)
    known = {f.name for f in fields(RunConfig)}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"config file: {e}")
        for key, val in data.items():
            attr = key.replace("-", "_")
            if attr not in known or attr == "command":
                raise UsageError(f"unknown config key {key!r}")
            setattr(cfg, attr, type(getattr(cfg, attr))(val)
                    if not isinstance(val, bool) else val)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None and f.name != "command":
            setattr(cfg, f.name, flag)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(reports, cfg, stem):
    for rep in reports:
        row = rep.row()
        print(f"{row['check']:<45s} lhs={row['lhs']: .9e} rhs={row['rhs']: .9e} "
              f"rel_err={row['rel_err']:.3e} {'PASS' if row['pass'] else 'FAIL'}")
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        base = os.path.join(cfg.out, stem)
        if cfg.format == "csv":
            idn.reports_to_csv(reports, base + ".csv")
        else:
            idn.reports_to_json(reports, base + ".json")
    return all(r.passed for r in reports)


def _emit_rows(rows, cfg, stem):
    if not rows:
        return
    cols = list(rows[0])
    print(",".join(cols))
    for row in rows:
        print(",".join(str(row[c]) for c in cols))
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        path = os.path.join(cfg.out, stem)
        if cfg.format == "json":
            with open(path + ".json", "w") as fh:
                json.dump(rows, fh, indent=2, default=float)
        else:
            import csv
            with open(path + ".csv", "w", newline="") as fh:
                wr = csv.DictWriter(fh, fieldnames=cols)
                wr.writeheader()
                wr.writerows(rows)


def _svg_profile(profile, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.plot(profile.grid.theta, profile.r)
    ax.set_xlabel("theta")
    ax.set_ylabel("r(theta)")
    ax.set_title(profile.label or "radial profile")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _svg_history(history, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.semilogy([h["iter"] for h in history],
                [max(h["residual"], 1e-300) for h in history], "o-")
    ax.set_xlabel("Newton iteration")
    ax.set_ylabel("max residual")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _geometry(cfg):
    profile = parse_surface(cfg.surface, n=cfg.n, N=cfg.grid)
    return profile, geometry_from_profile(profile)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_symfun_check(cfg):
    rng = np.random.default_rng(cfg.seed)
    reports = []
    from itertools import combinations
    for trial in range(8):
        lam = rng.normal(size=cfg.n + 2)
        for k in range(1, len(lam) + 1):
            brute = sum(math.prod(c) for c in combinations(lam, k))
            fast = symfun.elementary_symmetric(lam, k)
            reports.append(idn.IdentityReport(
                f"sigma[{trial},k={k}]", fast, brute, tol=1e-12))
        A = rng.normal(size=(cfg.n, cfg.n))
        A = A + A.T
        for k in range(1, cfg.n + 1):
            tr = np.trace(symfun.newton_tensor(A, k - 1) @ A)
            reports.append(idn.IdentityReport(
                f"newton-trace[{trial},k={k}]", float(tr),
                k * symfun.elementary_symmetric_of_matrix(A, k), tol=1e-10))
    if cfg.exact:
        from fractions import Fraction
        lam = [Fraction(rng.integers(-9, 10).item(), rng.integers(1, 7).item())
               for _ in range(cfg.n)]
        H = [symfun.elementary_symmetric(lam, k, exact=True)
             / math.comb(cfg.n, k) for k in range(cfg.n + 1)]
        Hs = [symfun.shift_transform(H, k, "to_shifted", exact=True)
              for k in range(cfg.n + 1)]
        back = [symfun.shift_transform(Hs, k, "from_shifted", exact=True)
                for k in range(cfg.n + 1)]
        reports.append(idn.IdentityReport(
            "shift-roundtrip-exact", float(max(abs(a - b) for a, b in zip(H, back))),
            0.0, tol=0.0, kind="equality"))
    ok = _emit(reports, cfg, "symfun_check")
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_surface_info(cfg):
    profile, geom = _geometry(cfg)
    info = {
        "surface": cfg.surface, "n": cfg.n, "grid": cfg.grid,
        "r_min": float(geom.r.min()), "r_max": float(geom.r.max()),
        "area": surface_area(geom),
        "weighted_volume": enclosed_weighted_volume(geom),
        "mean_curvature_min": float(geom.mean_curvature.min()),
        "shifted_curvature_min": float(geom.kappa_shifted.min()),
        "umbilicity": idn.umbilicity(geom),
        "centered_metric": idn.centered_metric(geom),
    }
    for key, val in info.items():
        print(f"{key:>22s}: {val}")
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        if cfg.format == "svg":
            _svg_profile(profile, os.path.join(cfg.out, "surface.svg"))
        else:
            with open(os.path.join(cfg.out, "surface.json"), "w") as fh:
                json.dump(info, fh, indent=2)
    return EXIT_PASS


def _cmd_verify(cfg):
    _, geom = _geometry(cfg)
    reports = []
    for k in range(1, cfg.n + 1):
        reports.append(idn.minkowski_check(geom, k, tol=cfg.tol))
    for k in range(1, cfg.n + 1):
        eq, ineq = idn.weighted_minkowski_check(
            geom, k, cfg.chi, tol=cfg.tol,
            include_correction=not cfg.negate_correction)
        reports.append(eq)
        if ineq.kind == "inequality":
            reports.append(ineq)
    reports.append(idn.volume_identity_check(geom, tol=cfg.tol))
    # raises on H <= n somewhere: surfaces violating mean convexity are a
    # precondition failure for the whole suite (exit code 2)
    reports.append(idn.heintze_karcher_check(geom, tol=cfg.tol))
    if hasattr(geom, "dtheta"):
        reports.append(idn.support_gradient_check(geom, tol=cfg.tol))
    ok = _emit(reports, cfg, "verify")
    return EXIT_PASS if ok else EXIT_FAIL


def _cmd_theorem(cfg):
    _, geom = _geometry(cfg)
    rep = idn.theorem_residual(geom, cfg.name, k=cfg.k,
                               l=cfg.l if cfg.l else None,
                               chi=cfg.chi, tol=cfg.tol)
    sat = rep.meta["satisfied"]
    print(f"{rep.name}: mean={rep.mean:.9e} oscillation={rep.oscillation:.3e} "
          f"relative={rep.rel_oscillation:.3e} "
          f"hypothesis {'SATISFIED' if sat else 'NOT satisfied'}")
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        with open(os.path.join(cfg.out, "theorem.json"), "w") as fh:
            json.dump({"name": rep.name, "mean": rep.mean, "sup": rep.sup,
                       "inf": rep.inf, "oscillation": rep.oscillation,
                       "satisfied": bool(sat)}, fh, indent=2)
    return EXIT_PASS if sat else EXIT_FAIL


def _cmd_audit(cfg):
    _, geom = _geometry(cfg)
    name = cfg.name if cfg.name in idn.THEOREM_IDS else cfg.name + "i"
    if name not in idn.THEOREM_IDS:
        raise UsageError(f"unknown theorem id {cfg.name!r}")
    reports = idn.proof_chain_audit(geom, name, k=cfg.k,
                                    l=cfg.l if cfg.l else None,
                                    chi=cfg.chi, tol=cfg.tol)
    ok = _emit(reports, cfg, f"audit_{name.replace('.', '_')}")
    return EXIT_PASS if ok else EXIT_FAIL


def _default_target(cfg):
    if not math.isnan(cfg.target):
        return cfg.target
    rho = 1.0
    return (math.cosh(rho) / math.sinh(rho) - 1.0) ** cfg.k


def _solve_expr(cfg):
    weight = None if cfg.chi in ("const", "const:1", "const:1.0") else cfg.chi
    label = f"H_{cfg.k}(shifted)" + (f"*chi[{weight}]" if weight else "")
    return idn.CurvatureExpr((idn.Term("H_shifted", cfg.k),),
                             weight=weight, label=label)


def _cmd_solve(cfg):
    profile, _ = _geometry(cfg)
    res = rg.solve_constant_equation(_solve_expr(cfg), _default_target(cfg),
                                     profile)
    fit = res.sphere_fit
    print(f"converged={res.converged} iterations={res.iterations} "
          f"residual={res.residual_norm:.3e} cone_ok={res.cone_ok}")
    if fit:
        print(f"sphere fit: rho={fit.rho:.9f} offset={fit.offset: .3e} "
              f"residual={fit.residual:.3e} umbilicity={fit.umbilicity:.3e} "
              f"centered_metric={fit.centered_metric:.3e}")
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        if cfg.format == "svg":
            _svg_history(res.history, os.path.join(cfg.out, "residuals.svg"))
            _svg_profile(res.profile, os.path.join(cfg.out, "solution.svg"))
        else:
            payload = {"converged": res.converged, "iterations": res.iterations,
                       "residual": res.residual_norm, "message": res.message,
                       "history": res.history, "cone_ok": res.cone_ok,
                       "r": res.profile.r.tolist()}
            if fit:
                payload["sphere_fit"] = {
                    "rho": fit.rho, "offset": fit.offset,
                    "residual": fit.residual, "umbilicity": fit.umbilicity,
                    "centered_metric": fit.centered_metric}
            with open(os.path.join(cfg.out, "solve.json"), "w") as fh:
                json.dump(payload, fh, indent=2)
    return EXIT_PASS if res.converged else EXIT_FAIL


def _cmd_ensemble(cfg):
    rho = 1.0
    rows = rg.perturbation_ensemble(_solve_expr(cfg), _default_target(cfg),
                                    rho, cfg.n, cfg.grid, cfg.samples,
                                    cfg.eps, seed=cfg.seed)
    _emit_rows(rows, cfg, "ensemble")
    converged = [r for r in rows if r["converged"]]
    print(f"# {len(converged)}/{len(rows)} converged, "
          f"{sum(r['is_sphere'] for r in converged)} classified geodesic spheres")
    return EXIT_PASS if converged and all(r["is_sphere"] for r in converged) \
        else EXIT_FAIL


def _cmd_sweep(cfg):
    if not cfg.targets:
        raise UsageError("sweep needs --targets c1,c2,...")
    try:
        targets = [float(t) for t in cfg.targets.split(",")]
    except ValueError as e:
        raise UsageError(f"--targets: {e}")
    profile, _ = _geometry(cfg)
    expr = _solve_expr(cfg)
    results = rg.continuation_sweep(lambda c: (expr, c), targets, profile)
    rows = []
    for c, res in zip(targets, results):
        fit = res.sphere_fit
        rows.append({"target": c, "converged": res.converged,
                     "iterations": res.iterations,
                     "residual": res.residual_norm,
                     "rho_fit": fit.rho if fit else math.nan,
                     "is_sphere": bool(fit and fit.is_sphere)})
    _emit_rows(rows, cfg, "sweep")
    return EXIT_PASS if all(r["converged"] and r["is_sphere"] for r in rows) \
        else EXIT_FAIL


_COMMANDS = {
    "symfun-check": _cmd_symfun_check,
    "surface-info": _cmd_surface_info,
    "verify": _cmd_verify,
    "theorem": _cmd_theorem,
    "audit": _cmd_audit,
    "solve": _cmd_solve,
    "ensemble": _cmd_ensemble,
    "sweep": _cmd_sweep,
}


def main(argv=None):
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # argparse's own usage handling
        return EXIT_USAGE if e.code not in (0, None) else EXIT_PASS
    try:
        return _COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"precondition error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
