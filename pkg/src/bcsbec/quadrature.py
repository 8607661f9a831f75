"""Adaptive radial quadrature for isotropic 3D momentum integrals.

Isotropic integrals reduce to the radial form

    Integral d^3k/(2 pi)^3 f(k)  =  Integral_0^inf dk  k^2/(2 pi^2) f(k),

evaluated here by adaptive Gauss-Legendre panels on [0, k_max] plus an exact
treatment of the tail: on (k_max, inf) the substitution u = k_max/k maps the
remainder onto (0, 1], where the transformed integrand is smooth and bounded
for every integrand in this package (they decay at least like k^-2 radially,
thanks to Gamma^2).  A sharp truncation at k_max alone would lose O(1/k_max)
of the gap integral, far above the solver tolerances, so the tail is
integrated rather than bounded.

Panels are refined by bisecting wherever the embedded error estimate
(difference between an n-node and a 2n-node rule on the same panel) exceeds
its share of the tolerance.  Integrands are evaluated vectorized over every
pending node of a refinement wave, and may be vector-valued (several
integrands sharing one set of panels).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["QuadratureSpec", "QuadratureError", "radial_integral", "integrate_semi_infinite"]


@dataclass
class QuadratureSpec:
    """Parameters of the radial integrator.

    k_max is in units of k0 and marks the boundary between the direct and the
    reciprocal-mapped region, not a truncation.  Doubling `panels` changes any
    converged integral by less than tol_rel (both runs refine to tolerance).
    """

    scheme: str = "adaptive-gauss-legendre"
    panels: int = 16          # initial panel count on [0, k_max]
    k_max: float = 40.0       # direct/tail boundary, units of k0
    tol_abs: float = 1e-14
    tol_rel: float = 1e-12
    nodes: int = 12           # nodes per panel; error from the 2*nodes rule
    max_panels: int = 4000    # refinement budget per integral

    def __post_init__(self):
        if self.panels < 1 or self.nodes < 2:
            raise ValueError("panels >= 1 and nodes >= 2 required")
        if self.k_max <= 0:
            raise ValueError("k_max must be positive")
        if self.tol_abs < 0 or self.tol_rel < 0 or (self.tol_abs == 0 and self.tol_rel == 0):
            raise ValueError("tolerances must be nonnegative and not both zero")


class QuadratureError(RuntimeError):
    """Raised when panel refinement exhausts its budget.

    Carries the best value and the achieved error estimate so callers can
    report how far from tolerance the integral remained.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


@lru_cache(maxsize=32)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_estimates(f, a, b, nodes):
    """Low- and high-order Gauss-Legendre estimates on panels [a_i, b_i].

    a, b are 1D arrays of panel edges; f maps a 1D point array to an array of
    shape (npts, nf).  Returns (high, err) of shape (npanels, nf).
    """
    x1, w1 = _gl_nodes(nodes)
    x2, w2 = _gl_nodes(2 * nodes)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts1 = mid[:, None] + half[:, None] * x1[None, :]
    pts2 = mid[:, None] + half[:, None] * x2[None, :]
    npan = a.size
    allpts = np.concatenate([pts1.ravel(), pts2.ravel()])
    vals = np.asarray(f(allpts), dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    nf = vals.shape[1]
    v1 = vals[: npan * nodes].reshape(npan, nodes, nf)
    v2 = vals[npan * nodes:].reshape(npan, 2 * nodes, nf)
    lo = half[:, None] * np.einsum("pnf,n->pf", v1, w1)
    hi = half[:, None] * np.einsum("pnf,n->pf", v2, w2)
    if not np.all(np.isfinite(hi)):
        raise QuadratureError("non-finite integrand value inside a panel")
    return hi, np.abs(hi - lo)


def _adaptive(f, edges, spec: QuadratureSpec):
    """Refine panels with edges `edges` until every component converges."""
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    vals, errs = _panel_estimates(f, a, b, spec.nodes)
    while True:
        total = vals.sum(axis=0)
        err_tot = errs.sum(axis=0)
        tol = np.maximum(spec.tol_abs, spec.tol_rel * np.abs(total))
        if np.all(err_tot <= tol):
            return total, err_tot
        if a.size >= spec.max_panels:
            raise QuadratureError(
                "panel budget %d exhausted; achieved error %s against tolerance %s"
                % (spec.max_panels, err_tot, tol),
                value=total, error=err_tot,
            )
        # bisect every panel holding more than its per-panel share of the
        # worst-converged component's tolerance
        ratio = errs / np.maximum(tol, 1e-300)[None, :]
        share = np.max(ratio, axis=1)
        refine = share > 0.5 / a.size
        if not np.any(refine):
            refine = share >= np.max(share)
        ra, rb = a[refine], b[refine]
        mid = 0.5 * (ra + rb)
        new_a = np.concatenate([a[~refine], ra, mid])
        new_b = np.concatenate([b[~refine], mid, rb])
        new_vals, new_errs = _panel_estimates(f, np.concatenate([ra, mid]),
                                              np.concatenate([mid, rb]), spec.nodes)
        keep_vals = vals[~refine]
        keep_errs = errs[~refine]
        a, b = new_a, new_b
        vals = np.concatenate([keep_vals, new_vals])
        errs = np.concatenate([keep_errs, new_errs])


def _initial_edges(lo, hi, breakpoints, count):
    pts = [lo, hi]
    if breakpoints is not None:
        pts += [p for p in np.atleast_1d(breakpoints) if lo < p < hi]
    edges = np.array(sorted(set(pts)))
    # split longest segments until the requested initial panel count is reached
    while edges.size - 1 < count:
        lengths = np.diff(edges)
        i = int(np.argmax(lengths))
        edges = np.insert(edges, i + 1, 0.5 * (edges[i] + edges[i + 1]))
    return edges


def integrate_semi_infinite(f, spec: QuadratureSpec, k0: float = 1.0, breakpoints=None):
    """Integrate f over (0, inf) in the radial variable.

    f maps a 1D array of k values to shape (npts,) or (npts, nf).  Returns
    (value, error_estimate, tail_value), each of shape (nf,).  The direct
    region is [0, k_max*k0]; the tail uses u = k_max*k0/k on (0, 1].
    """
    kc = spec.k_max * k0

    def f2(k):
        v = np.asarray(f(k), dtype=float)
        return v[:, None] if v.ndim == 1 else v

    edges = _initial_edges(0.0, kc, breakpoints, spec.panels)
    direct, err_d = _adaptive(f2, edges, spec)

    def tail_integrand(u):
        k = kc / u
        return f2(k) * (kc / u**2)[:, None]

    tail_edges = _initial_edges(0.0, 1.0, None, max(2, spec.panels // 4))
    tail, err_t = _adaptive(tail_integrand, tail_edges, spec)
    return direct + tail, err_d + err_t, tail


def radial_integral(f, spec: QuadratureSpec, k0: float = 1.0, breakpoints=None):
    """Integral d^3k/(2 pi)^3 f(k) for isotropic f; see integrate_semi_infinite."""

    def weighted(k):
        v = np.asarray(f(k), dtype=float)
        w = k**2 / (2.0 * np.pi**2)
        return v * w if v.ndim == 1 else v * w[:, None]

    return integrate_semi_infinite(weighted, spec, k0=k0, breakpoints=breakpoints)
