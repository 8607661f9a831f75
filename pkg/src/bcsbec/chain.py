"""Coupled superconducting segments: charging, tunneling, phase stiffness.

A chain of N paired segments is characterized by two energies per
junction: the electrostatic cost of moving a pair across it,

    E_c = e^2 / (2 C),   C = epsilon S / d   (parallel-plate form),

and the Josephson coupling gained by coherent pair tunneling,

    E_J = g U^2 Delta_j Delta_{j+1},   g = G^2 / (U [Delta_j + Delta_{j+1}]),

which for equal segments collapses to E_J = G^2 (U Delta) / 2 with
U Delta the energy gap.  The harmonic ground state of the relative-phase
Hamiltonian spreads each phase difference by sigma_phi^2 = sqrt(2 E_c/E_J)
(the convention used for classification throughout), and the segment-to-
segment pair correlation decays exponentially,

    rho_jl = 2 pi Delta_bar_j Delta_bar_l exp(-|j - l| sigma_phi^2),

so log rho is affine in the separation with slope -sigma_phi^2.  Phase
coherence is global when tunneling beats the charging cost, E_J > 2 E_c,
local when it loses, with the boundary at equality.

Factor conventions: the literal oscillator Hamiltonian per relative phase,

    H = -16 E_c d^2/dphi^2 + (E_J / 2) phi^2,

has mass 1/(32 E_c), frequency sqrt(32 E_c E_J), ground energy
sqrt(8 E_c E_J) and variance <phi^2> = sqrt(8 E_c/E_J).  That variance,
the classification convention sqrt(2 E_c/E_J), and the Gaussian-form value
sqrt(E_c/2 E_J) are mutually inconsistent normalizations in circulation;
ChainGroundState carries all three explicitly labeled, with a discrepancy
flag, and the grid oracle below adjudicates the literal Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants as _const
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "charging_energy",
    "josephson_energy",
    "segment_delta_bar",
    "sigma_phi2",
    "odlro",
    "OscillatorResult",
    "oscillator_oracle",
    "coherence_classify",
    "ChainConstituents",
    "ChainSpec",
    "ChainGroundState",
]


def charging_energy(epsilon: float, S: float, d: float) -> float:
    """Charging energy e^2/(2C) of a parallel-plate junction, in joules.

    epsilon [F/m], S [m^2], d [m]; C = epsilon S / d.  Callers working in
    electron-volts divide by scipy.constants.e.
    """
    if epsilon <= 0.0 or S <= 0.0 or d <= 0.0:
        raise ValueError("epsilon, S, d must all be positive")
    capacitance = epsilon * S / d
    return _const.e**2 / (2.0 * capacitance)


def josephson_energy(G: float, U: float, Delta_j: float, Delta_j1: float) -> float:
    """Josephson energy of one junction from its constituents.

    E_J = g U^2 Delta_j Delta_{j+1} with tunneling strength
    g = G^2/(U [Delta_j + Delta_{j+1}]); Delta are the dimensionless
    per-segment order-parameter magnitudes, U Delta the energy gap.
    Symmetric under segment swap.
    """
    if G < 0.0 or U <= 0.0 or Delta_j <= 0.0 or Delta_j1 <= 0.0:
        raise ValueError("G must be >= 0 and U, Delta_j, Delta_j1 positive")
    return G * G * U * Delta_j * Delta_j1 / (Delta_j + Delta_j1)


def segment_delta_bar(U: float, Delta_j: float, N_j: float) -> float:
    """Per-segment correlation amplitude Delta_bar = U Delta_j / N_j."""
    if N_j <= 0.0:
        raise ValueError("segment particle number must be positive")
    return U * Delta_j / N_j


def sigma_phi2(E_c: float, E_J: float) -> float:
    """Relative-phase variance sqrt(2 E_c / E_J) (classification form).

    E_J = 0 is the fully incoherent limit: each segment keeps an
    independent phase and the variance is reported as infinite.
    """
    if E_c <= 0.0:
        raise ValueError("E_c must be positive")
    if E_J < 0.0:
        raise ValueError("E_J must be >= 0")
    if E_J == 0.0:
        return math.inf
    return math.sqrt(2.0 * E_c / E_J)


def odlro(
    j: int,
    l: int,
    Delta_bars,
    sigma2: float,
    unit_self_correlation: bool = False,
) -> float:
    """Segment-pair correlation 2 pi Dbar_j Dbar_l exp(-|j-l| sigma2).

    The 2 pi prefactor is kept as printed; unit_self_correlation drops it
    so that rho_jj = Dbar_j^2 for callers who want normalized decay.
    """
    bars = np.atleast_1d(np.asarray(Delta_bars, dtype=float))
    if not (0 <= j < bars.size and 0 <= l < bars.size):
        raise ValueError("segment indices outside the chain")
    if sigma2 < 0.0:
        raise ValueError("sigma2 must be >= 0")
    prefactor = 1.0 if unit_self_correlation else 2.0 * math.pi
    return float(prefactor * bars[j] * bars[l] * math.exp(-abs(j - l) * sigma2))


@dataclass
class OscillatorResult:
    """Grid diagonalization output for one relative coordinate."""

    ground_energy: float
    variance: float
    span: float
    points: int
    boundary_amplitude: float


def oscillator_oracle(
    E_c: float,
    E_J: float,
    span: float | None = None,
    points: int = 12001,
) -> OscillatorResult:
    """Diagonalize H = -16 E_c d^2/dphi^2 + (E_J/2) phi^2 on a grid.

    Second-order finite differences on a uniform grid; the default span
    8.5 sigma_0 (sigma_0 = (32 E_c/E_J)^{1/4}) puts the Gaussian boundary
    amplitude near 1e-16 of the peak.  Grids whose boundary amplitude
    exceeds 1e-12 of the peak are rejected as non-converged.  Errors of
    the returned variance shrink at second order in the spacing, which
    the tests verify by Richardson doubling.
    """
    if E_c <= 0.0 or E_J <= 0.0:
        raise ValueError("E_c and E_J must be positive")
    if points < 3:
        raise ValueError("points must be >= 3")
    sigma0 = (32.0 * E_c / E_J) ** 0.25
    if span is None:
        span = 8.5 * sigma0
    if span <= 0.0:
        raise ValueError("span must be positive")
    x = np.linspace(-span, span, points)
    h = x[1] - x[0]
    diag = 32.0 * E_c / h**2 + 0.5 * E_J * x**2
    off = -16.0 * E_c / h**2 * np.ones(points - 1)
    energies, vectors = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    psi = vectors[:, 0]
    peak = float(np.max(np.abs(psi)))
    boundary = float(max(abs(psi[0]), abs(psi[-1])) / peak)
    if boundary > 1e-12:
        raise ValueError(
            f"grid not converged: boundary amplitude {boundary:.2e} of peak "
            f"exceeds 1e-12 (span too small)"
        )
    weight = psi * psi
    variance = float(np.sum(weight * x * x) / np.sum(weight))
    return OscillatorResult(
        ground_energy=float(energies[0]),
        variance=variance,
        span=float(span),
        points=int(points),
        boundary_amplitude=boundary,
    )


def coherence_classify(E_c: float, E_J: float, rtol: float = 1e-9) -> str:
    """'global' when E_J > 2 E_c, 'local' below, 'boundary' at equality.

    The comparison is scale free (only E_J/E_c enters), so common
    rescaling of both energies cannot change the label.
    """
    if E_c <= 0.0:
        raise ValueError("E_c must be positive")
    if E_J < 0.0:
        raise ValueError("E_J must be >= 0")
    ratio = E_J / (2.0 * E_c)
    if abs(ratio - 1.0) <= rtol:
        return "boundary"
    return "global" if ratio > 1.0 else "local"


@dataclass
class ChainConstituents:
    """Microscopic inputs that determine (E_c, E_J) of a uniform chain."""

    G: float
    U: float
    Delta: tuple
    epsilon: float | None = None
    S: float | None = None
    d: float | None = None


@dataclass
class ChainSpec:
    """Validated chain parameters, optionally tied to constituents.

    When constituents are attached, every junction's recomputed E_J must
    match the stored scalar to 1e-12 relative (so attached chains are
    E_J-uniform by construction; heterogeneous amplitude profiles enter
    the ODLRO correlations directly, not through ChainSpec).  Capacitance
    inputs, when present, must likewise reproduce E_c.
    """

    N: int
    E_c: float
    E_J: float
    constituents: ChainConstituents | None = None

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("a chain needs at least two segments")
        if self.E_c <= 0.0:
            raise ValueError("E_c must be positive")
        if self.E_J < 0.0:
            raise ValueError("E_J must be >= 0")
        con = self.constituents
        if con is None:
            return
        deltas = tuple(float(v) for v in con.Delta)
        if len(deltas) != self.N:
            raise ValueError("constituents must carry one Delta per segment")
        for j in range(self.N - 1):
            ej = josephson_energy(con.G, con.U, deltas[j], deltas[j + 1])
            if abs(ej - self.E_J) > 1e-12 * max(abs(self.E_J), 1e-300):
                raise ValueError(
                    f"junction {j}: E_J from constituents {ej!r} does not "
                    f"match stored {self.E_J!r}"
                )
        geometry = (con.epsilon, con.S, con.d)
        if any(v is not None for v in geometry):
            if any(v is None for v in geometry):
                raise ValueError("epsilon, S, d must be supplied together")
            ec = charging_energy(con.epsilon, con.S, con.d)
            if abs(ec - self.E_c) > 1e-12 * abs(self.E_c):
                raise ValueError(
                    f"E_c from geometry {ec!r} does not match stored {self.E_c!r}"
                )


@dataclass
class ChainGroundState:
    """Harmonic ground-state summary with all three variance conventions.

    sigma2 is the classification convention sqrt(2 E_c/E_J); the literal
    oscillator Hamiltonian gives sqrt(8 E_c/E_J); the Gaussian form with
    width parameter sqrt(E_J/(8 E_c)) gives sqrt(E_c/(2 E_J)).  They
    differ by fixed factors, so factor_discrepancy is set whenever
    E_J > 0.  The mean relative phase is exactly zero by symmetry.
    """

    sigma2: float
    variance_oscillator: float
    variance_gaussian_form: float
    width_parameter: float
    mean_phase_difference: float
    factor_discrepancy: bool

    @classmethod
    def for_chain(cls, spec: ChainSpec) -> "ChainGroundState":
        s2 = sigma_phi2(spec.E_c, spec.E_J)
        if spec.E_J == 0.0:
            osc = math.inf
            gauss = math.inf
            width = 0.0
        else:
            osc = math.sqrt(8.0 * spec.E_c / spec.E_J)
            gauss = math.sqrt(spec.E_c / (2.0 * spec.E_J))
            width = math.sqrt(spec.E_J / (8.0 * spec.E_c))
        return cls(
            sigma2=s2,
            variance_oscillator=osc,
            variance_gaussian_form=gauss,
            width_parameter=width,
            mean_phase_difference=0.0,
            factor_discrepancy=bool(spec.E_J > 0.0),
        )
