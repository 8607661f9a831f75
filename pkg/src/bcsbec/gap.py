"""Zero-temperature gap/number self-consistency and the two-body bound state.

The pairing state of the separable-interaction Fermi gas is fixed by two
coupled conditions on the energy gap Delta0 and the chemical potential mu:

    1 = (U/2) Integral d^3k/(2 pi)^3  Gamma^2(k) / xi_k            (gap)
    n =       Integral d^3k/(2 pi)^3  [1 - (eps_k - mu)/xi_k]      (number)

with xi_k = sqrt((eps_k - mu)^2 + Delta0^2 Gamma^2(k)).  The attraction is
carried as U > 0 with the integrand written positive definite; Delta0 is the
energy gap (the quantity whose product with Gamma(k) enters xi_k).  The
occupancy 1 - eps/xi counts both spin projections, so a vanishing gap at
mu = eps_F reproduces the free-gas density k_F^3/(3 pi^2).

Monotonicity in mu makes an outer bisection on the number equation robust:
for each mu the gap equation is solved by damped fixed-point steps (damping
0.5) that bracket the root of the monotone gap residual, finished by Brent;
a 2D Newton polish with finite-difference Jacobian then drives both
residuals to tolerance simultaneously.

The two-body bound state solves 1 = U Integral Gamma^2/(2 eps_k + E_b); it
exists above the threshold coupling U_c and obeys the closed form
E_b = (hbar^2 k0^2/m) (U/U_c - 1)^2, which the quadrature solver reproduces
and the tests cross-check.  The negative-mu edge of the gap equation sits
exactly at mu = -E_b/2, which supplies the lower end of the mu bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .core import PhysicalParams, critical_coupling
from .quadrature import QuadratureSpec, QuadratureError, radial_integral

__all__ = [
    "GapSolution",
    "gap_residual",
    "number_residual",
    "solve_self_consistent",
    "bound_state_energy",
    "sweep_coupling",
    "locate_mu_zero",
]

# Delta0 below this fraction of the energy scale is treated as unresolved
_GAP_FLOOR_REL = 1e-13


@dataclass
class GapSolution:
    """Self-consistent solution of the gap and number equations."""

    U: float
    n: float
    mu: float
    Delta0: float               # energy gap
    residual_gap: float
    residual_number: float      # relative, (n - computed)/n
    iterations: int
    converged: bool
    note: str = ""


def _pair_integrand(mu, Delta0, params: PhysicalParams):
    """Vector integrand (gap, occupancy) without the radial weight."""
    h2m = params.half_hbar2_over_m
    k0 = params.k0

    def f(k):
        eps = h2m * k * k - mu
        g2 = 1.0 / (1.0 + (k / k0) ** 2)
        y2 = Delta0 * Delta0 * g2
        xi = np.sqrt(eps * eps + y2)
        gap = g2 / xi
        # occupancy 1 - eps/xi in a cancellation-free form for eps > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            occ = np.where(eps > 0.0, y2 / (xi * (xi + eps)), 1.0 - eps / np.maximum(xi, 1e-300))
        return np.stack([gap, occ], axis=1)

    return f


def _breakpoints(mu, Delta0, params: PhysicalParams):
    """Panel seeds: the form-factor knee plus the near-Fermi-surface peak."""
    k0 = params.k0
    h2m = params.half_hbar2_over_m
    pts = [0.3 * k0, k0, 3.0 * k0, 10.0 * k0]
    if mu > 0:
        kmu = np.sqrt(mu / h2m)
        pts.append(kmu)
        local_gap = Delta0 / np.sqrt(1.0 + (kmu / k0) ** 2)
        if local_gap > 0:
            dk = local_gap / (2.0 * h2m * kmu)
            for c in (1.0, 3.0, 10.0, 30.0, 100.0):
                pts.extend([kmu - c * dk, kmu + c * dk])
    return [p for p in pts if p > 0]


def _both_integrals(mu, Delta0, U, n, params, quad):
    vals, _, _ = radial_integral(
        _pair_integrand(mu, Delta0, params), quad, k0=params.k0,
        breakpoints=_breakpoints(mu, Delta0, params),
    )
    rg = 1.0 - 0.5 * U * vals[0]
    rn = (n - vals[1]) / n
    return rg, rn


def gap_residual(Delta0: float, mu: float, U: float, params: PhysicalParams,
                 quad: QuadratureSpec | None = None) -> float:
    """1 - (U/2) * gap integral; zero at self-consistency.

    Diverges (negative, via the log singularity at the Fermi surface) as
    Delta0 -> 0 with mu > 0; the quadrature reports non-convergence there.
    """
    if Delta0 < 0:
        raise ValueError("Delta0 must be nonnegative")
    if U <= 0:
        raise ValueError("U must be positive")
    quad = quad or QuadratureSpec()
    vals, _, _ = radial_integral(
        lambda k: _pair_integrand(mu, Delta0, params)(k)[:, 0], quad, k0=params.k0,
        breakpoints=_breakpoints(mu, Delta0, params),
    )
    return float(1.0 - 0.5 * U * vals[0])


def number_residual(Delta0: float, mu: float, n: float, params: PhysicalParams,
                    quad: QuadratureSpec | None = None) -> float:
    """(n - computed density)/n; equals 1 exactly for an empty state."""
    if Delta0 < 0:
        raise ValueError("Delta0 must be nonnegative")
    if n <= 0:
        raise ValueError("density must be positive")
    quad = quad or QuadratureSpec()
    vals, _, _ = radial_integral(
        lambda k: _pair_integrand(mu, Delta0, params)(k)[:, 1], quad, k0=params.k0,
        breakpoints=_breakpoints(mu, Delta0, params),
    )
    return float((n - vals[0]) / n)


def _density(mu, Delta0, params, quad):
    vals, _, _ = radial_integral(
        lambda k: _pair_integrand(mu, Delta0, params)(k)[:, 1], quad, k0=params.k0,
        breakpoints=_breakpoints(mu, Delta0, params),
    )
    return float(vals[0])


def _gap_resid_only(Delta0, mu, U, params, quad):
    vals, _, _ = radial_integral(
        lambda k: _pair_integrand(mu, Delta0, params)(k)[:, 0], quad, k0=params.k0,
        breakpoints=_breakpoints(mu, Delta0, params),
    )
    return 1.0 - 0.5 * U * vals[0]


def _delta_at_mu(mu, U, params, quad, guess=None):
    """Solve the gap equation at fixed mu.

    Returns (Delta0, iterations).  Delta0 = 0 means no positive solution at
    this mu (at or below the pair-dissociation edge, where the residual at
    zero gap is already nonnegative) or a gap below the resolution floor.

    For mu > 0 the residual diverges to -inf as Delta0 -> 0+ (log
    singularity at the Fermi surface), so a positive root always exists and
    zero-gap probes are never attempted.  Damped fixed-point steps (map
    m(D) = D*(U/2)*I = D*(1 - r), damping 0.5) walk toward the root; once
    two iterates are available a secant step in log(D) accelerates the walk,
    and the first sign change hands a bracket to Brent.
    """
    scale = params.eps0
    floor = _GAP_FLOOR_REL * scale
    iters = 0

    def r(D):
        return _gap_resid_only(D, mu, U, params, quad)

    lo_pt = hi_pt = None
    if mu <= 0:
        r0 = r(0.0)
        iters += 1
        if r0 >= 0.0:
            return 0.0, iters
        lo_pt = (0.0, r0)

    D = guess if (guess is not None and guess > floor) else scale
    prev = None
    for _ in range(80):
        try:
            rD = r(D)
        except QuadratureError:
            if mu > 0 and D < 1e-4 * scale:
                # unresolvable Fermi-surface peak: gap below resolution
                return 0.0, iters
            raise
        iters += 1
        if abs(rD) <= 1e-13:
            # at the root to quadrature precision; Newton polish refines later
            return D, iters
        if rD > 0.0:
            if hi_pt is None or D < hi_pt[0]:
                hi_pt = (D, rD)
        else:
            if lo_pt is None or D > lo_pt[0]:
                lo_pt = (D, rD)
        if lo_pt is not None and hi_pt is not None and lo_pt[0] < hi_pt[0]:
            break
        if prev is not None and abs(D - prev[0]) <= 1e-14 * D:
            # one-sided convergence without a sign change
            return D, iters
        if prev is not None and prev[1] != rD and prev[0] > 0 and D > 0:
            x1, x2 = np.log(prev[0]), np.log(D)
            x3 = x2 - rD * (x2 - x1) / (rD - prev[1])
            Dn = np.exp(np.clip(x3, x2 - 5.0, x2 + 5.0))
        else:
            Dn = np.clip(D * (1.0 - 0.5 * rD), 0.25 * D, 4.0 * D)
        prev = (D, rD)
        D = max(Dn, floor)
        if mu > 0 and D <= floor:
            return 0.0, iters
    if lo_pt is None or hi_pt is None:
        raise RuntimeError("gap-equation bracketing failed at mu = %r" % mu)
    root, res = brentq(r, lo_pt[0], hi_pt[0], xtol=floor * 1e-3, rtol=8.9e-16,
                       maxiter=200, full_output=True)
    return float(root), iters + res.iterations


def _newton_polish(mu, Delta0, U, n, params, quad, tol_gap, tol_number, max_steps=25):
    """2D Newton with finite-difference Jacobian on (mu, Delta0)."""
    scale = max(abs(mu), params.eps0)
    dscale = max(Delta0, 1e-3 * params.eps0)
    it = 0
    rg, rn = _both_integrals(mu, Delta0, U, n, params, quad)
    for _ in range(max_steps):
        it += 1
        if abs(rg) <= 0.05 * tol_gap and abs(rn) <= 0.05 * tol_number:
            break
        hm = 1e-6 * scale
        hd = 1e-6 * dscale
        rg_m, rn_m = _both_integrals(mu + hm, Delta0, U, n, params, quad)
        rg_d, rn_d = _both_integrals(mu, Delta0 + hd, U, n, params, quad)
        J = np.array([[(rg_m - rg) / hm, (rg_d - rg) / hd],
                      [(rn_m - rn) / hm, (rn_d - rn) / hd]])
        try:
            step = np.linalg.solve(J, -np.array([rg, rn]))
        except np.linalg.LinAlgError:
            break
        new_mu, new_D = mu + step[0], Delta0 + step[1]
        shrink = 0
        while new_D <= 0 and shrink < 30:
            step *= 0.5
            new_mu, new_D = mu + step[0], Delta0 + step[1]
            shrink += 1
        if new_D <= 0:
            break
        mu, Delta0 = new_mu, new_D
        rg, rn = _both_integrals(mu, Delta0, U, n, params, quad)
        scale = max(abs(mu), params.eps0)
        dscale = max(Delta0, 1e-3 * params.eps0)
    return mu, Delta0, rg, rn, it


def solve_self_consistent(U: float, n: float, params: PhysicalParams,
                          quad: QuadratureSpec | None = None,
                          tol_gap: float = 1e-10, tol_number: float = 1e-8,
                          max_iter: int = 500,
                          initial_guess: tuple[float, float] | None = None) -> GapSolution:
    """Solve both equations for (mu, Delta0) at coupling U and density n.

    The mu bracket is (-E_b/2, eps_F]: the gap equation loses its positive
    solution exactly at mu = -E_b/2 (the two-body dissociation edge), and at
    mu = eps_F pairing always overshoots the target density.  initial_guess
    (mu, Delta0) short-circuits straight to the Newton polish when it already
    lies in the basin, which sweeps exploit point to point.
    """
    if U <= 0 or n <= 0:
        raise ValueError("U and n must be positive")
    quad = quad or QuadratureSpec()
    eps_F = params.half_hbar2_over_m * (3.0 * np.pi**2 * n) ** (2.0 / 3.0)
    scale = max(eps_F, params.eps0)
    iterations = 0

    if initial_guess is not None:
        mu0, D0 = initial_guess
        if D0 > 0:
            mu, D, rg, rn, it = _newton_polish(mu0, D0, U, n, params, quad,
                                               tol_gap, tol_number)
            iterations += it
            if abs(rg) <= tol_gap and abs(rn) <= tol_number:
                return GapSolution(U, n, mu, D, rg, rn, iterations, True)

    Uc = critical_coupling(params)
    Eb = bound_state_energy(U, params, quad) if U > Uc else None
    mu_lo = -0.5 * Eb * (1.0 - 1e-12) if Eb else 0.0
    mu_hi = eps_F

    running_guess = [initial_guess[1] if initial_guess else None]

    def excess(mu):
        D, its = _delta_at_mu(mu, U, params, quad, guess=running_guess[0])
        if D > 0:
            running_guess[0] = D
        return _density(mu, D, params, quad) - n, D, its + 1

    e_hi, D_hi, its = excess(mu_hi)
    iterations += its
    while e_hi < 0.0:
        mu_hi += 0.5 * scale
        e_hi, D_hi, its = excess(mu_hi)
        iterations += its
        if iterations > max_iter:
            return GapSolution(U, n, mu_hi, D_hi, np.nan, e_hi / n, iterations,
                               False, "mu bracket expansion exhausted the budget")

    lo, hi = mu_lo, mu_hi
    D_mid = D_hi if D_hi > 0 else params.eps0
    while hi - lo > 1e-6 * scale and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        e, D, its = excess(mid)
        iterations += its
        if D > 0:
            D_mid = D
        if e > 0.0:
            hi = mid
        else:
            lo = mid

    mu0 = 0.5 * (lo + hi)
    mu, D, rg, rn, it = _newton_polish(mu0, D_mid, U, n, params, quad,
                                       tol_gap, tol_number)
    iterations += it

    if D < _GAP_FLOOR_REL * params.eps0 * 10:
        conv = abs(rn) <= tol_number
        return GapSolution(U, n, mu, D, rg, rn, iterations, conv,
                           "gap below resolution")
    conv = abs(rg) <= tol_gap and abs(rn) <= tol_number
    note = "" if conv else "tolerances not met within budget"
    return GapSolution(U, n, mu, D, rg, rn, iterations, conv, note)


def bound_state_energy(U: float, params: PhysicalParams,
                       quad: QuadratureSpec | None = None) -> float | None:
    """Binding energy E_b >= 0 of the two-body problem, or None below threshold.

    Solves 1 = U * Integral d^3k/(2 pi)^3 Gamma^2/(2 eps_k + E_b).  Returns
    0.0 at U = U_c (threshold) and None for U strictly below it.
    """
    if U <= 0:
        raise ValueError("U must be positive")
    quad = quad or QuadratureSpec()
    h2m = params.half_hbar2_over_m
    k0 = params.k0

    def resid(E):
        def f(k):
            return 1.0 / (1.0 + (k / k0) ** 2) / (2.0 * h2m * k * k + E)
        vals, _, _ = radial_integral(f, quad, k0=k0,
                                     breakpoints=[0.3 * k0, k0, 3.0 * k0, 10.0 * k0])
        return 1.0 - U * vals[0]

    r0 = resid(0.0)
    if r0 >= 0.0:
        # at or below threshold: bound state absent unless exactly marginal
        return 0.0 if r0 <= 1e-9 else None
    hi = params.eps0
    while resid(hi) < 0.0:
        hi *= 4.0
        if hi > 1e18 * params.eps0:
            raise RuntimeError("bound-state bracket expansion failed")
    return float(brentq(resid, 0.0, hi, xtol=1e-30 * params.eps0 + 1e-300,
                        rtol=8.9e-16, maxiter=300))


def sweep_coupling(U_grid, n: float, params: PhysicalParams,
                   quad: QuadratureSpec | None = None,
                   tol_gap: float = 1e-10, tol_number: float = 1e-8) -> list[GapSolution]:
    """Solve along a coupling grid, warm-starting each point from the last.

    Failed points are recorded inline (converged = False) without aborting
    the sweep.
    """
    quad = quad or QuadratureSpec()
    out = []
    guess = None
    for U in np.asarray(U_grid, dtype=float):
        try:
            sol = solve_self_consistent(U, n, params, quad, tol_gap=tol_gap,
                                        tol_number=tol_number, initial_guess=guess)
        except (QuadratureError, RuntimeError) as exc:
            sol = GapSolution(float(U), n, np.nan, np.nan, np.nan, np.nan, 0,
                              False, f"solver error: {exc}")
        out.append(sol)
        if sol.converged and sol.Delta0 > 0:
            guess = (sol.mu, sol.Delta0)
    return out


def locate_mu_zero(n: float, params: PhysicalParams,
                   quad: QuadratureSpec | None = None,
                   U_lo: float | None = None, U_hi: float | None = None,
                   tol_rel: float = 1e-6) -> tuple[float, GapSolution]:
    """Bisect the coupling at which the chemical potential changes sign.

    tol_rel is relative to U_c.  Each probe is a full self-consistent solve,
    warm-started from the previous one.
    """
    quad = quad or QuadratureSpec()
    Uc = critical_coupling(params)
    U_lo = U_lo if U_lo is not None else 0.5 * Uc
    U_hi = U_hi if U_hi is not None else 4.0 * Uc
    guess = None

    def mu_at(U):
        nonlocal guess
        sol = solve_self_consistent(U, n, params, quad, initial_guess=guess)
        if not sol.converged:
            raise RuntimeError(f"no converged solution at U/U_c = {U / Uc}")
        guess = (sol.mu, sol.Delta0)
        return sol

    s_lo = mu_at(U_lo)
    s_hi = mu_at(U_hi)
    if s_lo.mu <= 0 or s_hi.mu >= 0:
        raise ValueError("mu does not change sign on the given coupling range")
    lo, hi = U_lo, U_hi
    sol_mid = s_hi
    while hi - lo > tol_rel * Uc:
        mid = 0.5 * (lo + hi)
        sol_mid = mu_at(mid)
        if sol_mid.mu > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), sol_mid
