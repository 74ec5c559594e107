"""Quadrature over hypersurfaces and enclosed weighted volumes.

Summation uses a fixed-shape pairwise reduction so results are bit-identical
run to run regardless of how the caller parallelizes field evaluation.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

__all__ = [
    "pairwise_sum",
    "surface_integral",
    "surface_area",
    "enclosed_weighted_volume",
    "convergence_order",
    "ConvergenceEstimate",
]


def pairwise_sum(values, kahan=False):
    """Deterministic pairwise summation of a 1-D array.

    The reduction tree depends only on the array length.  ``kahan=True``
    switches to compensated sequential summation instead.
    """
    a = np.asarray(values, dtype=float).ravel()
    if kahan:
        s = 0.0
        c = 0.0
        for v in a:
            y = v - c
            t = s + y
            c = (t - s) - y
            s = t
        return s
    while a.size > 1:
        half = a.size // 2
        head = a[: 2 * half]
        a = np.concatenate([head[0::2] + head[1::2], a[2 * half:]])
    return float(a[0]) if a.size else 0.0


def surface_integral(values, geom):
    """Integral of a per-node scalar field against the surface measure."""
    return geom.integrate(values)


def surface_area(geom):
    return geom.integrate(np.ones_like(geom.r))


def enclosed_weighted_volume(geom):
    """Integral of V = cosh(r) over the enclosed star-shaped domain.

    Radial reduction: the antiderivative of cosh(s) sinh(s)^n is
    sinh(s)^{n+1}/(n+1), so the weighted volume is the round-sphere integral
    of sinh(r)^{n+1}/(n+1).
    """
    n = geom.n
    return geom.sphere_integral(np.sinh(geom.r) ** (n + 1)) / (n + 1)


class ConvergenceEstimate:
    """Least-squares order fit of an error-vs-grid-size study."""

    def __init__(self, sizes, errors, order, established, note=""):
        self.sizes = list(sizes)
        self.errors = list(errors)
        self.order = order
        self.established = established
        self.note = note

    def __repr__(self):
        tag = f"p={self.order:.2f}" if self.established else f"not-established ({self.note})"
        return f"ConvergenceEstimate({tag})"


def convergence_order(task, sizes, reference=None, floor=1e-13):
    """Estimate the convergence order of ``task(N) -> scalar``.

    The error at each grid size is measured against ``reference`` if given,
    else against the finest-grid value.  A non-monotone or floor-saturated
    error sequence yields a flagged, not-established estimate.
    """
    sizes = sorted(sizes)
    if len(sizes) < 3:
        raise ValueError("need at least 3 grid sizes")
    vals = [task(N) for N in sizes]
    if reference is None:
        ref = vals[-1]
        sizes_fit, vals_fit = sizes[:-1], vals[:-1]
    else:
        ref = reference
        sizes_fit, vals_fit = sizes, vals
    scale = 1.0 + abs(ref)
    errors = [abs(v - ref) for v in vals_fit]
    if max(errors) <= floor * scale:
        return ConvergenceEstimate(sizes_fit, errors, math.nan, False,
                                   note="errors at roundoff floor")
    errs = np.maximum(errors, floor * scale)
    if np.any(np.diff(errs) > 0):
        warnings.warn("non-monotone error sequence; order not established")
        slope, _ = np.polyfit(np.log(sizes_fit), np.log(errs), 1)
        return ConvergenceEstimate(sizes_fit, errors, -slope, False,
                                   note="non-monotone errors")
    slope, _ = np.polyfit(np.log(sizes_fit), np.log(errs), 1)
    return ConvergenceEstimate(sizes_fit, errors, -slope, True)
