"""Star-shaped hypersurfaces in hyperbolic space as radial graphs over S^n.

The ambient model is the warped product [0,inf) x S^n with metric
dr^2 + sinh(r)^2 g_{S^n}.  The primary discretization is axisymmetric: the
profile r(theta) lives on Gauss-Jacobi nodes in x = cos(theta) with the
Jacobi weight (1-x^2)^{(n-2)/2}, so that one node set carries both spectral
differentiation (barycentric) and spectral quadrature for every n.  For
n = 2 there is also a full grid over S^2 (Gauss-Legendre x uniform
longitude) for non-axisymmetric surfaces.

Sign convention: outward normal, geodesic spheres have kappa = coth(rho) > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, gamma

__all__ = [
    "SphereSpec",
    "RadialProfile",
    "SurfaceGrid2",
    "GeometryField",
    "sphere_angle_residual",
    "sphere_profile",
    "perturbed_profile",
    "table_profile",
    "parse_surface",
    "geometry_from_profile",
    "hessV_residual",
    "elliptic_point",
    "mean_convexity_margin",
    "sphere_area",
    "unit_sphere_area",
]


def unit_sphere_area(n):
    """Area of the unit n-sphere, omega_n = 2 pi^((n+1)/2) / Gamma((n+1)/2)."""
    return 2.0 * math.pi ** ((n + 1) / 2) / gamma((n + 1) / 2)


def sphere_area(n, rho):
    """Area of the geodesic sphere of radius rho in H^{n+1}."""
    return unit_sphere_area(n) * math.sinh(rho) ** n


def _barycentric_weights(x):
    # log-scaled products; only ratios matter, so normalize by the max
    diff = 2.0 * (x[:, None] - x[None, :])
    np.fill_diagonal(diff, 1.0)
    logw = -np.sum(np.log(np.abs(diff)), axis=1)
    sgn = np.prod(np.sign(diff), axis=1)
    return sgn * np.exp(logw - logw.max())


def _diff_matrix(x):
    w = _barycentric_weights(x)
    D = np.zeros((len(x), len(x)))
    for i in range(len(x)):
        for j in range(len(x)):
            if i != j:
                D[i, j] = (w[j] / w[i]) / (x[i] - x[j])
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


class AxisGrid:
    """Gauss-Jacobi collocation grid in x = cos(theta) for one (n, N)."""

    def __init__(self, n, N):
        if n < 1:
            raise ValueError("n must be >= 1")
        if N < 8:
            raise ValueError("grid too coarse (need N >= 8)")
        alpha = (n - 2) / 2
        x, w = roots_jacobi(N, alpha, alpha)
        self.n = n
        self.N = N
        self.x = x  # ascending in x, i.e. theta descending
        self.w = w  # quadrature weight incl. (1-x^2)^{(n-2)/2}
        self.theta = np.arccos(x)
        self.sin_t = np.sqrt(1.0 - x ** 2)
        self.D = _diff_matrix(x)
        self.D2 = self.D @ self.D
        self.omega_nm1 = unit_sphere_area(n - 1) if n >= 2 else 2.0
        self.omega_n = unit_sphere_area(n)


@lru_cache(maxsize=64)
def axis_grid(n, N):
    return AxisGrid(n, N)


@dataclass(frozen=True)
class SphereSpec:
    """Geodesic sphere of radius rho, center offset d along the symmetry axis."""

    rho: float
    d: float = 0.0

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.d < 0:
            raise ValueError("d must be >= 0")


def sphere_angle_residual(spec, theta, r):
    """Residual of the hyperbolic law of cosines defining the offset sphere:
    cosh(rho) - (cosh r cosh d - sinh r sinh d cos theta)."""
    return math.cosh(spec.rho) - (
        np.cosh(r) * math.cosh(spec.d) - np.sinh(r) * math.sinh(spec.d) * np.cos(theta)
    )


@dataclass
class RadialProfile:
    """Axisymmetric radial graph r(theta) on an AxisGrid.

    Profiles are sampled at interior Gauss nodes; pole regularity is carried
    by the smooth x = cos(theta) representation (r odd-order theta-derivatives
    vanish at the poles for any smooth function of x).
    """

    n: int
    N: int
    r: np.ndarray
    label: str = ""
    grid: AxisGrid = field(init=False, repr=False)

    def __post_init__(self):
        self.grid = axis_grid(self.n, self.N)
        self.r = np.asarray(self.r, dtype=float)
        if self.r.shape != (self.N,):
            raise ValueError(f"r must have shape ({self.N},)")
        if not np.all(np.isfinite(self.r)):
            raise ValueError("profile contains non-finite radii")
        if np.any(self.r <= 0):
            raise ValueError("profile must have r > 0 everywhere")

    def resample(self, N):
        """Same surface on a finer/coarser grid (barycentric interpolation)."""
        g_old, g_new = self.grid, axis_grid(self.n, N)
        r_new = _bary_interp(g_old.x, self.r, g_new.x)
        return RadialProfile(self.n, N, r_new, label=self.label)


def _bary_interp(x_src, f_src, x_dst):
    w = _barycentric_weights(x_src)
    out = np.empty(len(x_dst))
    for i, xi in enumerate(x_dst):
        hit = np.isclose(x_src, xi, rtol=0, atol=1e-14)
        if hit.any():
            out[i] = f_src[hit.argmax()]
            continue
        c = w / (xi - x_src)
        out[i] = (c @ f_src) / c.sum()
    return out


def sphere_profile(spec, n, N):
    """Offset geodesic sphere as a radial profile.

    r(theta) inverts cosh(rho) = cosh r cosh d - sinh r sinh d cos theta in
    closed form:  a cosh r - b sinh r = sqrt(a^2-b^2) cosh(r - artanh(b/a)).
    Requires rho > d so the origin is enclosed.
    """
    if spec.d >= spec.rho:
        raise ValueError("need d < rho for a star-shaped offset sphere")
    g = axis_grid(n, N)
    a = math.cosh(spec.d)
    b = math.sinh(spec.d) * g.x
    s = np.sqrt(a * a - b * b)
    arg = math.cosh(spec.rho) / s
    r = np.arccosh(np.maximum(arg, 1.0)) + np.arctanh(b / a)
    prof = RadialProfile(n, N, r, label=f"sphere:rho={spec.rho}:d={spec.d}")
    res = np.abs(sphere_angle_residual(spec, g.theta, r)).max()
    if res > 1e-10:
        raise ArithmeticError(f"sphere profile residual {res:.2e} too large")
    return prof


def perturbed_profile(rho, eps, mode, n, N):
    """r = rho + eps * P_mode(cos theta), a Legendre perturbation of the
    centered sphere."""
    g = axis_grid(n, N)
    P = np.polynomial.legendre.Legendre.basis(mode)(g.x)
    r = rho + eps * P
    if np.any(r <= 0):
        raise ValueError("perturbation makes r non-positive")
    return RadialProfile(n, N, r, label=f"perturbed:rho={rho}:eps={eps}:mode={mode}")


def table_profile(theta_tab, r_tab, n, N):
    """Profile from a (theta, r) table, linearly interpolated onto the grid."""
    theta_tab = np.asarray(theta_tab, float)
    r_tab = np.asarray(r_tab, float)
    order = np.argsort(theta_tab)
    theta_tab, r_tab = theta_tab[order], r_tab[order]
    g = axis_grid(n, N)
    r = np.interp(g.theta, theta_tab, r_tab)
    return RadialProfile(n, N, r, label="table")


def parse_surface(spec_str, n, N):
    """Surface grammar:  sphere:rho=<f>[:d=<f>]
                         perturbed:rho=<f>:eps=<f>:mode=<int>
                         table:<path>                        (CSV theta,r)"""
    head, _, rest = spec_str.partition(":")
    if head == "sphere":
        kv = _parse_kv(rest, {"rho": float, "d": float}, required={"rho"})
        return sphere_profile(SphereSpec(kv["rho"], kv.get("d", 0.0)), n, N)
    if head == "perturbed":
        kv = _parse_kv(rest, {"rho": float, "eps": float, "mode": int},
                       required={"rho", "eps", "mode"})
        return perturbed_profile(kv["rho"], kv["eps"], kv["mode"], n, N)
    if head == "table":
        data = np.loadtxt(rest, delimiter=",")
        return table_profile(data[:, 0], data[:, 1], n, N)
    raise ValueError(f"unknown surface kind {head!r}")


def _parse_kv(rest, types, required):
    kv = {}
    for part in filter(None, rest.split(":")):
        key, eq, val = part.partition("=")
        if not eq or key not in types:
            raise ValueError(f"bad surface parameter {part!r}")
        kv[key] = types[key](val)
    missing = required - kv.keys()
    if missing:
        raise ValueError(f"missing surface parameters: {sorted(missing)}")
    return kv


def axis_pointwise(grid, r):
    """All pointwise geometric quantities of an axisymmetric radial graph.

    Vectorized over leading axes of ``r`` (shape (..., N)); used both by
    GeometryField construction and by the batched finite-difference Jacobian
    of the rigidity solver.  With lam = sinh r and x = cos theta:

        r_theta   = -sin(theta) R'(x)
        v^2       = 1 + r_theta^2 / lam^2
        u         = lam / v
        kappa_par = (lam' + x R'/lam) / (lam v)              [n-1 fold]
        kappa_mer = (lam'(1 + 2 r_theta^2/lam^2) - r_theta_theta/lam)/(lam v^3)

    every factor is smooth in x, so the poles need no special casing.
    """
    r = np.asarray(r, float)
    x = grid.x
    Rx = r @ grid.D.T
    Rxx = r @ grid.D2.T
    s2 = 1.0 - x ** 2
    lam = np.sinh(r)
    V = np.cosh(r)
    r_t = -grid.sin_t * Rx
    w2 = s2 * Rx ** 2 / lam ** 2
    v = np.sqrt(1.0 + w2)
    u = lam / v
    k_par = (V + x * Rx / lam) / (lam * v)
    r_tt = -x * Rx + s2 * Rxx
    k_mer = (V * (1.0 + 2.0 * w2) - r_tt / lam) / (lam * v ** 3)
    return {
        "r": r, "Rx": Rx, "Rxx": Rxx, "lam": lam, "V": V, "u": u, "v": v,
        "r_t": r_t, "r_tt": r_tt, "k_mer": k_mer, "k_par": k_par,
        "g_mm": lam ** 2 * v ** 2,
    }


class GeometryField:
    """Pointwise geometry of an axisymmetric hypersurface.

    Immutable once built; every accessor is a plain array read, so a field is
    safe to share across threads.
    """

    def __init__(self, profile):
        self.profile = profile
        self.grid = profile.grid
        self.n = profile.n
        f = axis_pointwise(self.grid, profile.r)
        self.f = f
        self.r = f["r"]
        self.V = f["V"]
        self.u = f["u"]
        self.kappa = np.sort(
            np.concatenate(
                [f["k_mer"][:, None], np.repeat(f["k_par"][:, None], self.n - 1, axis=1)],
                axis=1,
            ),
            axis=1,
        )
        self.kappa_shifted = self.kappa - 1.0
        g = self.grid
        # surface measure: omega_{n-1} * w_i * lam^n * v  (Jacobi weight in w_i)
        self.area_weight = g.omega_nm1 * g.w * f["lam"] ** self.n * f["v"]
        # round S^n measure on the same nodes
        self.sphere_weight = g.omega_nm1 * g.w
        if np.any(self.V - self.u <= 0):
            raise ArithmeticError("V - u <= 0 at some node; geometry invalid")
        self._H_shifted = _H_table(self.kappa_shifted)
        self._H_plain = _H_table(self.kappa)

    # -- curvature fields ---------------------------------------------------
    def H_shifted(self, k):
        """H_k of the shifted curvatures, as a per-node field."""
        return self._H_shifted[k]

    def H_plain(self, k):
        return self._H_plain[k]

    @property
    def mean_curvature(self):
        """Unnormalized H = sum kappa_i."""
        return self.kappa.sum(axis=1)

    # -- tangential calculus ------------------------------------------------
    def dtheta(self, values):
        """Spectral theta-derivative of a sampled scalar field."""
        return -self.grid.sin_t * (values @ self.grid.D.T)

    def grad_inner(self, fv, gv):
        """<grad f, grad g> under the induced metric (axisymmetric fields)."""
        return self.dtheta(fv) * self.dtheta(gv) / self.f["g_mm"]

    def newton_bilinear(self, k, phi_values):
        """T_{k-1}(shifted Weingarten) applied to (grad phi, grad V).

        Axisymmetric gradients point along the meridian, where the Newton
        transformation eigenvalue is C(n-1,k-1) * kappa_par_shifted^{k-1}.
        """
        if not 1 <= k <= self.n:
            raise ValueError("k out of range")
        t = math.comb(self.n - 1, k - 1) * (self.f["k_par"] - 1.0) ** (k - 1)
        return t * self.grad_inner(phi_values, self.V)

    # -- integration hooks (see quadrature module) --------------------------
    def integrate(self, values):
        from .quadrature import pairwise_sum
        values = np.asarray(values, float)
        if not np.all(np.isfinite(values)):
            raise ArithmeticError("non-finite field in surface integral")
        return pairwise_sum(self.area_weight * values)

    def sphere_integral(self, values):
        from .quadrature import pairwise_sum
        return pairwise_sum(self.sphere_weight * np.asarray(values, float))


def _H_table(kappa):
    """H_0..H_n per node from a (..., n) array of principal curvatures."""
    n = kappa.shape[-1]
    e = [np.ones(kappa.shape[:-1])] + [np.zeros(kappa.shape[:-1]) for _ in range(n)]
    for i in range(n):
        lam = kappa[..., i]
        for j in range(min(i + 1, n), 0, -1):
            e[j] = e[j] + lam * e[j - 1]
    return [e[k] / math.comb(n, k) for k in range(n + 1)]


def geometry_from_profile(profile):
    """GeometryField of a RadialProfile or SurfaceGrid2."""
    if isinstance(profile, RadialProfile):
        return GeometryField(profile)
    if isinstance(profile, SurfaceGrid2):
        return Geometry2Field(profile)
    raise TypeError(f"unsupported surface representation {type(profile).__name__}")


def hessV_residual(geom):
    """Max-norm defect of the Gauss-Weingarten Hessian identity

        hess V = V g - u h

    with hess V computed intrinsically from the discrete metric and sampled V.
    This is the correctness gate for the whole geometric pipeline: it jointly
    exercises g, h, u and V.
    """
    if not isinstance(geom, GeometryField):
        raise TypeError("hessV_residual requires an axisymmetric GeometryField")
    g = geom.grid
    f = geom.f
    x, s2 = g.x, 1.0 - g.x ** 2
    # V_theta = sin(theta) G with G = -D V smooth in x; differentiate in that form
    G = -(geom.V @ g.D.T)
    V_t = g.sin_t * G
    V_tt = x * G - s2 * (G @ g.D.T)
    g_mm = f["g_mm"]
    Gamma = -g.sin_t * (g_mm @ g.D.T) / (2.0 * g_mm)
    mer = (V_tt - Gamma * V_t) / g_mm
    # parallel block: d_theta(lam sin theta) * V_theta / (lam sin theta g_mm),
    # written pole-regularly as (lam' r_t V_t + lam x G) / (lam g_mm)
    par = (f["V"] * f["r_t"] * V_t + f["lam"] * x * G) / (f["lam"] * g_mm)
    res_mer = mer - (geom.V - geom.u * f["k_mer"])
    res_par = par - (geom.V - geom.u * f["k_par"])
    return max(np.abs(res_mer).max(), np.abs(res_par).max())


def elliptic_point(geom):
    """Node maximizing r, and the margin min_i kappa_i - coth(r_max).

    Any closed hypersurface has an elliptic point at the far pole of r where
    every principal curvature exceeds coth(r) > 1; the margin should never be
    measurably negative.
    """
    idx = int(np.argmax(geom.r))
    margin = float(geom.kappa[idx].min() - 1.0 / np.tanh(geom.r[idx]))
    return idx, margin


def mean_convexity_margin(geom):
    """min over nodes of (sum kappa_i) - n; positive certifies H > n."""
    return float(geom.mean_curvature.min() - geom.n)


# ---------------------------------------------------------------------------
# full S^2 grid (n = 2, non-axisymmetric)
# ---------------------------------------------------------------------------

class Grid2:
    """Gauss-Legendre colatitude x uniform longitude grid on S^2."""

    def __init__(self, N, M):
        x, w = roots_jacobi(N, 0.0, 0.0)
        self.N, self.M = N, M
        self.x, self.w = x, w
        self.theta = np.arccos(x)
        self.sin_t = np.sqrt(1.0 - x ** 2)
        self.phi = 2.0 * math.pi * np.arange(M) / M
        self.Dx = _diff_matrix(x)
        if M % 2:
            raise ValueError("longitude count M must be even")

    def d_theta(self, F, parity=0):
        """Spectral colatitude derivative of a field on the grid.

        A smooth scalar on S^2 has longitude-Fourier modes of the form
        sin(theta)^|m| * (smooth in x); one theta-derivative flips that parity
        structure.  ``parity`` counts how many theta-derivatives produced F
        (mod 2), so each mode can be differentiated in its smooth-in-x
        factored form and the poles stay spectrally accurate.
        """
        Fh = np.fft.rfft(F, axis=1)
        m = np.arange(Fh.shape[1])
        q = (m + parity) % 2  # 1 where a bare sin(theta) factor is present
        st = self.sin_t[:, None]
        x = self.x[:, None]
        out = np.empty_like(Fh)
        even = q == 0
        if even.any():
            out[:, even] = -st * (self.Dx @ Fh[:, even])
        odd = ~even
        if odd.any():
            G = Fh[:, odd] / st
            out[:, odd] = x * G - (st ** 2) * (self.Dx @ G)
        return np.fft.irfft(out, n=self.M, axis=1)

    def d_phi(self, F):
        return np.fft.irfft(
            1j * np.arange(F.shape[1] // 2 + 1) * np.fft.rfft(F, axis=1),
            n=self.M, axis=1,
        )


@lru_cache(maxsize=16)
def grid2(N, M):
    return Grid2(N, M)


@dataclass
class SurfaceGrid2:
    """Radial graph r(theta, phi) over S^2 on a Grid2."""

    N: int
    M: int
    r: np.ndarray
    label: str = ""
    grid: Grid2 = field(init=False, repr=False)

    def __post_init__(self):
        self.grid = grid2(self.N, self.M)
        self.r = np.asarray(self.r, float)
        if self.r.shape != (self.N, self.M):
            raise ValueError(f"r must have shape ({self.N}, {self.M})")
        if np.any(self.r <= 0):
            raise ValueError("r must be positive")


def surface_grid2(func, N, M, label=""):
    """Sample r = func(theta, phi) on a Grid2."""
    g = grid2(N, M)
    T, P = np.meshgrid(g.theta, g.phi, indexing="ij")
    return SurfaceGrid2(N, M, func(T, P), label=label)


class Geometry2Field:
    """Pointwise geometry of a general radial graph over S^2 (n = 2)."""

    n = 2

    def __init__(self, surf):
        self.surface = surf
        g = surf.grid
        self.grid = g
        r = surf.r
        lam = np.sinh(r)
        V = np.cosh(r)
        st = g.sin_t[:, None]
        ct = g.x[:, None]
        r_t = g.d_theta(r)
        r_p = g.d_phi(r)
        p_t = r_t / lam  # gradient of phi-potential, d phi/dr = 1/lam
        p_p = r_p / lam
        # S^2 Hessian of the potential (round metric dtheta^2 + sin^2 dphi^2)
        p_tt = g.d_theta(p_t, parity=1)
        p_tp = g.d_phi(p_t) - (ct / st) * p_p
        p_pp = g.d_phi(p_p) + st * ct * p_t
        v2 = 1.0 + p_t ** 2 + (p_p / st) ** 2
        v = np.sqrt(v2)
        # induced metric and second fundamental form in (theta, phi) coords
        g_tt = lam ** 2 * (1.0 + p_t ** 2)
        g_tp = lam ** 2 * (p_t * p_p)
        g_pp = lam ** 2 * (st ** 2 + p_p ** 2)
        h_tt = (lam / v) * (V * (1.0 + p_t ** 2) - p_tt)
        h_tp = (lam / v) * (V * p_t * p_p - p_tp)
        h_pp = (lam / v) * (V * (st ** 2 + p_p ** 2) - p_pp)
        det_g = g_tt * g_pp - g_tp ** 2
        # Weingarten W = g^{-1} h, then closed-form 2x2 eigenvalues
        W11 = (g_pp * h_tt - g_tp * h_tp) / det_g
        W12 = (g_pp * h_tp - g_tp * h_pp) / det_g
        W21 = (g_tt * h_tp - g_tp * h_tt) / det_g
        W22 = (g_tt * h_pp - g_tp * h_tp) / det_g
        tr = W11 + W22
        det_W = W11 * W22 - W12 * W21
        disc = np.sqrt(np.maximum((tr / 2.0) ** 2 - det_W, 0.0))
        k1 = tr / 2.0 - disc
        k2 = tr / 2.0 + disc
        self.r, self.V, self.u, self.v = r, V, lam / v, v
        self.lam = lam
        self.gcomp = (g_tt, g_tp, g_pp, det_g)
        self.W = (W11, W12, W21, W22)
        self.kappa = np.stack([k1, k2], axis=-1)
        self.kappa_shifted = self.kappa - 1.0
        # quadrature: dmu = sqrt(det g) dtheta dphi, with dtheta = dx/sin(theta)
        self.area_weight = (
            np.sqrt(det_g) / st * g.w[:, None] * (2.0 * math.pi / g.M)
        )
        self.sphere_weight = np.broadcast_to(
            g.w[:, None] * (2.0 * math.pi / g.M), r.shape
        ).copy()
        if np.any(self.V - self.u <= 0):
            raise ArithmeticError("V - u <= 0 at some node; geometry invalid")
        self._H_shifted = _H_table(self.kappa_shifted)
        self._H_plain = _H_table(self.kappa)

    def H_shifted(self, k):
        return self._H_shifted[k]

    def H_plain(self, k):
        return self._H_plain[k]

    @property
    def mean_curvature(self):
        return self.kappa.sum(axis=-1)

    def grad_inner(self, fv, gv):
        g_tt, g_tp, g_pp, det_g = self.gcomp
        f_t, f_p = self.grid.d_theta(fv), self.grid.d_phi(fv)
        h_t, h_p = self.grid.d_theta(gv), self.grid.d_phi(gv)
        # inverse metric contraction
        return (g_pp * f_t * h_t - g_tp * (f_t * h_p + f_p * h_t) + g_tt * f_p * h_p) / det_g

    def newton_bilinear(self, k, phi_values):
        """T_{k-1}(shifted Weingarten)(grad phi, grad V) for k in {1, 2}."""
        if k == 1:
            return self.grad_inner(phi_values, self.V)
        if k == 2:
            # T_1(W - I) = tr(W - I) Id - (W - I), contracted with the two
            # gradients raised by the inverse metric
            W11, W12, W21, W22 = self.W
            s = (W11 - 1.0) + (W22 - 1.0)
            T11, T12 = s - (W11 - 1.0), -W12
            T21, T22 = -W21, s - (W22 - 1.0)
            g_tt, g_tp, g_pp, det_g = self.gcomp
            f_t, f_p = self.grid.d_theta(phi_values), self.grid.d_phi(phi_values)
            h_t, h_p = self.grid.d_theta(self.V), self.grid.d_phi(self.V)
            # raise the V-gradient: (grad V)^a = g^{ab} V_b
            gV_t = (g_pp * h_t - g_tp * h_p) / det_g
            gV_p = (g_tt * h_p - g_tp * h_t) / det_g
            # apply T (mixed tensor) then pair with d phi
            tV_t = T11 * gV_t + T21 * gV_p
            tV_p = T12 * gV_t + T22 * gV_p
            return f_t * tV_t + f_p * tV_p
        raise ValueError("k out of range for n = 2")

    def integrate(self, values):
        from .quadrature import pairwise_sum
        values = np.asarray(values, float)
        if not np.all(np.isfinite(values)):
            raise ArithmeticError("non-finite field in surface integral")
        return pairwise_sum((self.area_weight * values).ravel())

    def sphere_integral(self, values):
        from .quadrature import pairwise_sum
        return pairwise_sum((self.sphere_weight * np.asarray(values, float)).ravel())
