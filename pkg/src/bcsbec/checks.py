"""Named self-checks driving the oracle suites with measured pass/fail.

Each check exercises one analytic statement against an independent
computation (exact finite-mode oracle, grid diagonalization, closed
form) and reports the measured figure next to its threshold.  The CLI
``checks`` subcommand runs the inventory and exits nonzero when any
check fails; the same functions back the acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import math
import numpy as np

from .chain import coherence_classify, odlro, oscillator_oracle
from .coherent import (
    bcs_overlap,
    build_fock_oracle,
    equal_phase_residual,
    eta_statistics,
    number_phase_derivative_check,
    pegg_barnett,
    random_pair_ensemble,
    variational_phase_lock,
)

__all__ = ["CheckResult", "CHECK_NAMES", "run_checks", "list_checks"]

# seeds whose descent basin is the equal-phase lock (M = 3, attractive);
# other seeds legitimately end in a pi-twin or dead-mode configuration
LOCKING_SEEDS = (6, 7, 13, 20, 21)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    detail: str = ""


def check_overlap_decay() -> CheckResult:
    """Per-mode decay rate of the paired overlap vs the closed form."""
    theta = 0.25 * np.pi
    dphi = 0.5 * np.pi
    factor = np.cos(theta) ** 2 + np.exp(1j * dphi) * np.sin(theta) ** 2
    rate_exact = -math.log(abs(factor))
    worst = 0.0
    prev_log = 0.0
    for m in range(1, 201):
        log_abs = math.log(abs(bcs_overlap(np.full(m, theta), dphi)))
        worst = max(worst, abs((prev_log - log_abs) - rate_exact))
        prev_log = log_abs
    passed = worst <= 1e-12
    return CheckResult(
        name="overlap-decay",
        passed=passed,
        measured={"max_rate_deviation": worst, "rate_exact": rate_exact},
        detail=f"max per-mode rate deviation {worst:.3e} (tol 1e-12)",
    )


def check_eta_oracle(seed: int = 1234, trials: int = 20) -> CheckResult:
    """Analytic eta statistics and overlaps vs the exact 2^M oracle."""
    rng = np.random.default_rng(seed)
    worst_stat = 0.0
    worst_overlap = 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 11))
        ens = random_pair_ensemble(m, rng)
        stats = eta_statistics(ens)
        oracle = build_fock_oracle(ens)
        moments = oracle.eta_moments()
        worst_stat = max(
            worst_stat,
            abs(stats["mean"] - moments["mean"]),
            abs(stats["variance"] - moments["variance"]),
        )
        dphi = rng.uniform(0.0, 2.0 * np.pi)
        exact = oracle.overlap(ens.phi, ens.phi + dphi)
        worst_overlap = max(
            worst_overlap, abs(bcs_overlap(ens.theta, dphi) - exact)
        )
    passed = worst_stat <= 1e-12 and worst_overlap <= 1e-12
    return CheckResult(
        name="eta-oracle",
        passed=passed,
        measured={
            "max_statistic_deviation": worst_stat,
            "max_overlap_deviation": worst_overlap,
        },
        detail=(
            f"stats dev {worst_stat:.3e}, overlap dev {worst_overlap:.3e} "
            f"(tol 1e-12, {trials} random ensembles)"
        ),
    )


def check_number_phase(seed: int = 7, h: float = 1e-3) -> CheckResult:
    """N = 2i d/dphi on bra-side amplitudes, with O(h^2) convergence."""
    ens = random_pair_ensemble(4, np.random.default_rng(seed))
    oracle = build_fock_oracle(ens)

    def grid(step):
        return 0.3 + step * np.arange(-3, 4)

    dev = number_phase_derivative_check(oracle, 4, grid(h))
    dev_half = number_phase_derivative_check(oracle, 4, grid(h / 2.0))
    ratio = dev / dev_half if dev_half > 0.0 else math.inf
    odd = number_phase_derivative_check(oracle, 3, grid(h))
    passed = dev <= 1e-5 and 3.5 <= ratio <= 4.5 and odd == 0.0
    return CheckResult(
        name="number-phase",
        passed=passed,
        measured={"deviation": dev, "halving_ratio": ratio, "odd_sector": odd},
        detail=(
            f"dev {dev:.3e} (tol 1e-5), halving ratio {ratio:.2f} "
            f"(expect ~4), odd sector {odd}"
        ),
    )


def check_pegg_barnett(
    s: int = 64, Omega: float = 4.0, rungs: int = 3
) -> CheckResult:
    """Commutator convergence toward -i on a doubling ladder in s."""
    devs = []
    warned = False
    for level in range(rungs):
        _, report = pegg_barnett(s * (1 << level), 0.0, Omega)
        devs.append(report.deviation_from_canonical)
        warned = warned or report.truncation_warning
    monotone = all(devs[i + 1] < devs[i] for i in range(len(devs) - 1))
    passed = devs[0] <= 0.05 and monotone
    return CheckResult(
        name="pegg-barnett",
        passed=passed,
        measured={
            "deviations": devs,
            "s_ladder": [s * (1 << level) for level in range(rungs)],
            "truncation_warning": warned,
        },
        detail=(
            f"deviation {devs[0]:.3e} at s={s} (tol 0.05), "
            f"strictly decreasing={monotone}"
            + (", truncation warning raised" if warned else "")
        ),
    )


def check_phase_lock(seed: int = 99) -> CheckResult:
    """Equal-phase stationarity plus descent locking from pinned seeds."""
    rng = np.random.default_rng(seed)
    worst_residual = 0.0
    for _ in range(10):
        m = int(rng.integers(2, 6))
        raw = rng.standard_normal((m,) * 4)
        tensor = sum(np.transpose(raw, p) for p in permutations(range(4))) / 24.0
        amps = rng.uniform(0.5, 1.5, m)
        worst_residual = max(worst_residual, equal_phase_residual(amps, tensor))

    spreads = {}
    all_locked = True
    for s in LOCKING_SEEDS:
        result = variational_phase_lock(3, seed=s)
        spreads[s] = result.phase_spread
        locked = (
            result.phase_spread < 1e-4
            and result.min_amplitude > 1e-3
            and result.equal_phase_residual <= 1e-12
        )
        all_locked = all_locked and locked
    passed = worst_residual <= 1e-12 and all_locked
    return CheckResult(
        name="phase-lock",
        passed=passed,
        measured={
            "max_equal_phase_residual": worst_residual,
            "phase_spreads": spreads,
        },
        detail=(
            f"stationarity residual {worst_residual:.3e} (tol 1e-12), "
            f"max spread {max(spreads.values()):.3e} over seeds "
            f"{list(LOCKING_SEEDS)} (tol 1e-4)"
        ),
    )


def check_oscillator_oracle() -> CheckResult:
    """Grid ground state vs the closed form of the literal Hamiltonian."""
    exact = math.sqrt(8.0)
    result = oscillator_oracle(1.0, 1.0)
    rel = abs(result.variance - exact) / exact
    err_coarse = abs(oscillator_oracle(1.0, 1.0, span=20.0, points=4001).variance - exact)
    err_fine = abs(oscillator_oracle(1.0, 1.0, span=20.0, points=8001).variance - exact)
    ratio = err_coarse / err_fine if err_fine > 0.0 else math.inf
    paper_value = math.sqrt(2.0)
    passed = rel <= 1e-6 and 3.5 <= ratio <= 4.5
    return CheckResult(
        name="oscillator-oracle",
        passed=passed,
        measured={
            "variance_oracle": result.variance,
            "variance_literal_closed_form": exact,
            "variance_stated_convention": paper_value,
            "relative_error": rel,
            "richardson_ratio": ratio,
            "factor_discrepancy": True,
        },
        detail=(
            f"<phi^2> {result.variance:.9f} vs literal {exact:.9f} "
            f"(rel {rel:.2e}, tol 1e-6); stated convention gives "
            f"{paper_value:.9f} [factor discrepancy flagged]; "
            f"Richardson ratio {ratio:.2f}"
        ),
    )


def check_odlro_slope(sigma2: float = 0.7, segments: int = 8) -> CheckResult:
    """Exponential ODLRO decay: regression slope equals -sigma2 exactly."""
    delta_bar = np.full(segments, 1.3)
    separations = np.arange(segments, dtype=float)
    logs = np.array(
        [math.log(odlro(0, r, delta_bar, sigma2)) for r in range(segments)]
    )
    slope = float(np.polyfit(separations, logs, 1)[0])
    slope_dev = abs(slope + sigma2)
    boundary = coherence_classify(1.0, 2.0)
    near = coherence_classify(1.0, 2.0 * (1.0 + 5e-10))
    above = coherence_classify(1.0, 2.0 * (1.0 + 1e-6))
    below = coherence_classify(1.0, 2.0 * (1.0 - 1e-6))
    passed = (
        slope_dev <= 1e-12
        and boundary == "boundary"
        and near == "boundary"
        and above == "global"
        and below == "local"
    )
    return CheckResult(
        name="odlro-slope",
        passed=passed,
        measured={
            "slope_deviation": slope_dev,
            "boundary_label": boundary,
        },
        detail=(
            f"slope deviation {slope_dev:.3e} (tol 1e-12); "
            f"E_J = 2E_c classified '{boundary}'"
        ),
    )


CHECK_NAMES = {
    "overlap-decay": "paired-overlap per-mode decay rate vs closed form",
    "eta-oracle": "analytic eta statistics vs exact finite-mode oracle",
    "number-phase": "number operator as 2i d/dphi on bra amplitudes",
    "pegg-barnett": "phase-number commutator converges toward -i",
    "phase-lock": "equal-phase stationarity and seeded descent locking",
    "oscillator-oracle": "grid oscillator vs literal closed form",
    "odlro-slope": "ODLRO decay slope and coherence boundary",
}


def list_checks() -> list:
    return [(name, CHECK_NAMES[name]) for name in CHECK_NAMES]


def run_checks(
    names=None,
    seed: int = 1234,
    pegg_barnett_s: int = 64,
    pegg_barnett_omega: float = 4.0,
) -> list:
    """Run the named checks (all by default) in inventory order."""
    runners = {
        "overlap-decay": check_overlap_decay,
        "eta-oracle": lambda: check_eta_oracle(seed=seed),
        "number-phase": check_number_phase,
        "pegg-barnett": lambda: check_pegg_barnett(
            s=pegg_barnett_s, Omega=pegg_barnett_omega
        ),
        "phase-lock": check_phase_lock,
        "oscillator-oracle": check_oscillator_oracle,
        "odlro-slope": check_odlro_slope,
    }
    if names is None:
        names = list(CHECK_NAMES)
    unknown = [n for n in names if n not in runners]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    return [runners[name]() for name in names]
