"""Hermitian phase operator on a truncated (s+1)-level number space.

The s+1 phase states

    |theta_m> = (s+1)^{-1/2} sum_n e^{i n theta_m} |n>,
    theta_m = theta0 + 2 pi m / (s+1),   m = 0..s,

form an orthonormal basis, and the phase operator is the spectral sum
theta_hat = sum_m theta_m |theta_m><theta_m|.  It is Hermitian at every
finite s, e^{i theta_hat} is exactly unitary, and on states contained well
inside the branch window [theta0, theta0 + 2 pi) the commutator with the
number operator approaches the canonical value,

    <[theta_hat, N]> -> -i   as s -> infinity.

The convergence report evaluates that expectation on a coherent state of
mean occupation Omega truncated to the s+1 levels (renormalized, with the
discarded tail weight reported).  The state's phase defaults to
theta0 + pi, antipodal to the branch cut: a state centered on the cut sees
the 2 pi jump of the phase eigenvalues and the commutator expectation is
off by order unity, which is a property of the branch choice rather than
of the truncation.  Number-state weights are accumulated in log space
(gammaln) so large Omega does not overflow the factorials.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = ["PeggBarnettOperators", "PeggBarnettReport", "pegg_barnett"]


@dataclass
class PeggBarnettOperators:
    """Finite-dimensional phase operators in the number basis."""

    dim: int
    theta0: float
    exp_itheta: np.ndarray
    theta_op: np.ndarray
    number_op: np.ndarray

    @property
    def s(self) -> int:
        return self.dim - 1


@dataclass
class PeggBarnettReport:
    """Commutator expectation on a truncated coherent state."""

    Omega: float
    state_phase: float
    commutator_expectation: complex
    deviation_from_canonical: float
    truncation_error: float
    truncation_warning: bool


def pegg_barnett(
    s: int,
    theta0: float = 0.0,
    Omega: float = 4.0,
    state_phase: float | None = None,
) -> tuple[PeggBarnettOperators, PeggBarnettReport]:
    """Build the (s+1)-level phase operators and the commutator report.

    Parameters
    ----------
    s : space dimension minus one (s >= 1).
    theta0 : reference phase; the operator branch is [theta0, theta0+2pi).
    Omega : mean occupation of the probe coherent state (> 0).
    state_phase : phase of the probe state; defaults to theta0 + pi so the
        state sits antipodal to the branch cut.

    Returns the operators and a report of <alpha|[theta_hat, N]|alpha>,
    its distance from the canonical -i, and the truncated tail weight.
    A warning fires when Omega is within a factor 4 of s: the coherent
    tail then leaks past the truncation and the report is unreliable.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    if Omega <= 0.0:
        raise ValueError("Omega must be positive")
    dim = s + 1
    n = np.arange(dim)
    theta_m = theta0 + 2.0 * np.pi * n / dim

    # columns of V are the phase states in the number basis
    V = np.exp(1j * np.outer(n, theta_m)) / np.sqrt(dim)
    theta_op = (V * theta_m) @ V.conj().T
    exp_itheta = (V * np.exp(1j * theta_m)) @ V.conj().T
    number_op = np.diag(n.astype(float))
    ops = PeggBarnettOperators(
        dim=dim,
        theta0=float(theta0),
        exp_itheta=exp_itheta,
        theta_op=theta_op,
        number_op=number_op,
    )

    warn = Omega >= s / 4.0
    if warn:
        warnings.warn(
            f"coherent tail not contained: Omega={Omega} within a factor 4 "
            f"of s={s}; commutator report unreliable",
            RuntimeWarning,
            stacklevel=2,
        )

    if state_phase is None:
        state_phase = theta0 + np.pi
    log_weight = -0.5 * Omega + 0.5 * n * np.log(Omega) - 0.5 * gammaln(n + 1.0)
    coeff = np.exp(log_weight) * np.exp(1j * n * state_phase)
    truncation_error = float(1.0 - np.sum(np.abs(coeff) ** 2))
    coeff = coeff / np.linalg.norm(coeff)

    comm = theta_op @ number_op - number_op @ theta_op
    value = complex(coeff.conj() @ comm @ coeff)
    report = PeggBarnettReport(
        Omega=float(Omega),
        state_phase=float(state_phase),
        commutator_expectation=value,
        deviation_from_canonical=float(abs(value + 1j)),
        truncation_error=truncation_error,
        truncation_warning=bool(warn),
    )
    return ops, report
