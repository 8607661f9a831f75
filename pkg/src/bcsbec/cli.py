"""Command-line front end: solvers, sweeps, oracles, checks, CSV output.

Subcommands: gap-sweep, bound-state, phase-diagram, overlap, eta, oracle,
pegg-barnett, chain, phase-lock, checks.  Every run writes plot-ready CSV
plus a JSON metadata sidecar (config echo, version, tolerances, wall
clock, CSV hashes); rerunning an identical config reproduces the CSV
bytes exactly.

Configuration precedence: explicit command-line flags override values
from an optional "key = value" config file (--config), which override the
built-in defaults.  Config keys use the flag names with '-' or '_'.

Unit modes: 'dimensionless' works in the natural gap-equation units
(energies in eps0 = hbar^2 k0^2 / 2m with k0 = 1); 'physical' uses the
free-electron mass and a k0 in inverse Angstroms (default 1.41), with
energies reported in eV.  Charging and hopping energies are entered in
micro-eV in physical mode, matching the scales of junction arrays.
Densities are always entered in units of k0^3.

Exit codes: 0 success, 1 check failure, 2 solver non-convergence,
3 invalid configuration.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .chain import (
    ChainSpec,
    ChainGroundState,
    charging_energy,
    odlro,
    oscillator_oracle,
    sigma_phi2,
    coherence_classify,
)
from .coherent import (
    bcs_overlap,
    bec_overlap,
    build_fock_oracle,
    eta_statistics,
    number_phase_derivative_check,
    pegg_barnett,
    random_pair_ensemble,
    variational_phase_lock,
    BosonEnsemble,
    PairEnsemble,
)
from .core import PhysicalParams, critical_coupling
from .diagram import critical_hopping, refine_hopping_boundary, sweep_diagram
from .gap import bound_state_energy, solve_self_consistent, sweep_coupling
from .checks import CHECK_NAMES, list_checks, run_checks
from .runio import write_csv, write_meta

__all__ = ["main"]

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_NON_CONVERGENCE = 2
EXIT_INVALID_CONFIG = 3

_EV_PER_UEV = 1e-6


class ConfigError(Exception):
    """Invalid configuration (bad flag value, bad config file, bad grid)."""


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit 2; this contract wants 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID_CONFIG)


@dataclass
class RunConfig:
    """Everything needed to reproduce one run."""

    command: str
    units: str
    out: str
    seed: int
    tol_gap: float
    tol_number: float
    params: dict = field(default_factory=dict)

    def echo(self) -> dict:
        payload = {
            "command": self.command,
            "units": self.units,
            "out": self.out,
            "seed": self.seed,
            "tol_gap": self.tol_gap,
            "tol_number": self.tol_number,
        }
        payload.update(self.params)
        return payload


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--units",
        choices=("dimensionless", "physical"),
        default="dimensionless",
        help="unit system (default dimensionless)",
    )
    parent.add_argument("--out", default=".", help="output directory")
    parent.add_argument("--config", default=None, help="key = value config file")
    parent.add_argument(
        "--seed", type=int, default=0, help="seed for variational descent"
    )
    parent.add_argument(
        "--tol-gap", type=float, default=1e-10, help="gap residual tolerance"
    )
    parent.add_argument(
        "--tol-number", type=float, default=1e-8, help="number residual tolerance"
    )
    return parent


def build_parser():
    parent = _common_parent()
    parser = _Parser(
        prog="bcsbec",
        description="pairing crossover and phase-coherence toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subparsers = {}

    p = sub.add_parser("gap-sweep", parents=[parent], help="coupling sweep of the gap equations")
    p.add_argument("--n", type=float, default=2e-2, help="density in k0^3 units")
    p.add_argument("--u-min", type=float, default=0.5, help="lower U/U_c")
    p.add_argument("--u-max", type=float, default=4.0, help="upper U/U_c")
    p.add_argument("--points", type=int, default=50, help="grid points")
    p.add_argument("--k0", type=float, default=1.41, help="k0 in 1/Angstrom (physical mode)")
    subparsers["gap-sweep"] = p

    p = sub.add_parser("bound-state", parents=[parent], help="two-body bound-state energy")
    p.add_argument("--u", type=float, default=2.0, help="coupling in U/U_c")
    p.add_argument("--k0", type=float, default=1.41)
    subparsers["bound-state"] = p

    p = sub.add_parser("phase-diagram", parents=[parent], help="regime labels over (U, E_c, G)")
    p.add_argument("--n", type=float, default=2e-2)
    p.add_argument("--u-min", type=float, default=0.5)
    p.add_argument("--u-max", type=float, default=4.0)
    p.add_argument("--u-points", type=int, default=12)
    p.add_argument("--ec", type=float, default=None,
                   help="charging energy (micro-eV physical, eps0 units dimensionless)")
    p.add_argument("--g-min", type=float, default=None, help="hopping grid start")
    p.add_argument("--g-max", type=float, default=None, help="hopping grid end")
    p.add_argument("--g-points", type=int, default=12)
    p.add_argument("--k0", type=float, default=1.41)
    subparsers["phase-diagram"] = p

    p = sub.add_parser("overlap", parents=[parent], help="multimode overlap decay with mode count")
    p.add_argument("--theta", type=float, default=0.25 * math.pi, help="pairing angle")
    p.add_argument("--dphi", type=float, default=0.5 * math.pi, help="phase rotation")
    p.add_argument("--alpha", type=float, default=0.3, help="bosonic amplitude per mode")
    p.add_argument("--m-max", type=int, default=200, help="largest mode count")
    subparsers["overlap"] = p

    p = sub.add_parser("eta", parents=[parent], help="bosonization statistics of a solved state")
    p.add_argument("--u", type=float, default=2.0, help="coupling in U/U_c")
    p.add_argument("--n", type=float, default=2e-2)
    p.add_argument("--k-max", type=float, default=6.0, help="grid extent in k0")
    p.add_argument("--k-points", type=int, default=128)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--convention", choices=("half-angle", "literal"), default="half-angle")
    p.add_argument("--k0", type=float, default=1.41)
    subparsers["eta"] = p

    p = sub.add_parser("oracle", parents=[parent], help="exact finite-mode oracle comparison")
    p.add_argument("--modes", type=int, default=8, help="pair modes (<= 12)")
    p.add_argument("--dphi", type=float, default=1.0)
    subparsers["oracle"] = p

    p = sub.add_parser("pegg-barnett", parents=[parent], help="phase-operator commutator ladder")
    p.add_argument("--s", type=int, default=64, help="base dimension minus one")
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--omega", type=float, default=4.0, help="probe-state occupation")
    p.add_argument("--state-phase", type=float, default=None,
                   help="probe-state phase (default theta0 + pi)")
    p.add_argument("--rungs", type=int, default=3, help="doubling ladder length")
    subparsers["pegg-barnett"] = p

    p = sub.add_parser("chain", parents=[parent], help="segment chain: variances and ODLRO decay")
    p.add_argument("--ec", type=float, default=None,
                   help="charging energy (micro-eV physical, eps0 units dimensionless)")
    p.add_argument("--ej", type=float, default=None,
                   help="Josephson energy (same unit as --ec)")
    p.add_argument("--epsilon-r", type=float, default=None, help="relative permittivity")
    p.add_argument("--area-um2", type=float, default=None, help="junction area in um^2")
    p.add_argument("--spacing-nm", type=float, default=None, help="junction gap in nm")
    p.add_argument("--segments", type=int, default=8)
    p.add_argument("--delta-bar", type=float, default=1.0,
                   help="uniform per-segment correlation amplitude")
    subparsers["chain"] = p

    p = sub.add_parser("phase-lock", parents=[parent], help="seeded descent of the quartic free energy")
    p.add_argument("--modes", type=int, default=3, help="mode count (2..6)")
    p.add_argument("--sign", choices=("attractive", "repulsive"), default="attractive")
    p.add_argument("--length", type=float, default=10.0, help="box length")
    p.add_argument("--step", type=float, default=1e-2)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-steps", type=int, default=100000)
    subparsers["phase-lock"] = p

    p = sub.add_parser("checks", parents=[parent], help="run the self-check inventory")
    p.add_argument("--list", action="store_true", help="list checks without running")
    p.add_argument("--pegg-barnett-s", type=int, default=64)
    p.add_argument("--pegg-barnett-omega", type=float, default=4.0)
    p.set_defaults(seed=1234)
    subparsers["checks"] = p

    return parser, subparsers


# ---- config file handling ------------------------------------------------


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _typed_config(values: dict, subparser) -> dict:
    """Convert raw config strings using the subparser's option types."""
    actions = {a.dest: a for a in subparser._actions}
    typed = {}
    for key, raw in values.items():
        if key == "config" or key not in actions:
            raise ConfigError(f"unknown config key {key!r}")
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            lowered = raw.lower()
            if lowered not in ("true", "false", "0", "1"):
                raise ConfigError(f"config key {key!r}: boolean expected, got {raw!r}")
            typed[key] = lowered in ("true", "1")
            continue
        converter = action.type or str
        try:
            value = converter(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config key {key!r}: bad value {raw!r}") from exc
        if action.choices is not None and value not in action.choices:
            raise ConfigError(
                f"config key {key!r}: {value!r} not in {sorted(action.choices)}"
            )
        typed[key] = value
    return typed


_COMMON_KEYS = ("units", "out", "seed", "tol_gap", "tol_number")


def _to_runconfig(args: argparse.Namespace) -> RunConfig:
    payload = vars(args).copy()
    payload.pop("config", None)
    command = payload.pop("command")
    common = {key: payload.pop(key) for key in _COMMON_KEYS}
    return RunConfig(command=command, params=payload, **common)


# ---- unit helpers --------------------------------------------------------


def _make_params(cfg: RunConfig) -> PhysicalParams:
    if cfg.units == "physical":
        k0 = cfg.params.get("k0", 1.41)
        if k0 is None or k0 <= 0.0:
            raise ConfigError("k0 must be positive")
        return PhysicalParams.free_electron(k0=k0)
    return PhysicalParams.dimensionless()


def _energy_unit(cfg: RunConfig) -> str:
    return "eV" if cfg.units == "physical" else "eps0"


def _input_energy(cfg: RunConfig, value: float) -> float:
    """Convert a user-facing energy flag to the internal unit."""
    if cfg.units == "physical":
        return value * _EV_PER_UEV
    return value


# ---- subcommand implementations -----------------------------------------


def cmd_gap_sweep(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    params = _make_params(cfg)
    n = cfg.params["n"] * params.k0**3
    if cfg.params["points"] < 1:
        raise ConfigError("points must be >= 1")
    if cfg.params["u_min"] <= 0.0 or cfg.params["u_max"] < cfg.params["u_min"]:
        raise ConfigError("need 0 < u-min <= u-max")
    u_c = critical_coupling(params)
    ratios = np.linspace(cfg.params["u_min"], cfg.params["u_max"], cfg.params["points"])
    solutions = sweep_coupling(
        ratios * u_c, n, params, tol_gap=cfg.tol_gap, tol_number=cfg.tol_number
    )
    eps_f = params_fermi_energy(params, n)
    rows = []
    for ratio, sol in zip(ratios, solutions):
        rows.append(
            (
                float(ratio),
                sol.mu / eps_f,
                sol.Delta0 / eps_f,
                sol.Delta0 / params.eps0,
                sol.residual_gap,
                sol.residual_number,
                sol.converged,
            )
        )
    out = Path(cfg.out)
    csv_path = write_csv(
        out / "gap_sweep.csv",
        (
            "U_over_Uc",
            "mu_over_epsF",
            "Delta0_over_epsF",
            "Delta0_over_eps0",
            "residual_gap",
            "residual_number",
            "converged",
        ),
        rows,
    )
    write_meta(
        out / "gap_sweep.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={"tol_gap": cfg.tol_gap, "tol_number": cfg.tol_number},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
    )
    failed = [i for i, sol in enumerate(solutions) if not sol.converged]
    if failed:
        print(f"gap-sweep: {len(failed)} of {len(solutions)} points not converged",
              file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    print(f"gap-sweep: {len(solutions)} points -> {csv_path}")
    return EXIT_OK


def params_fermi_energy(params: PhysicalParams, n: float) -> float:
    k_f = (3.0 * math.pi**2 * n) ** (1.0 / 3.0)
    return params.half_hbar2_over_m * k_f**2


def cmd_bound_state(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    params = _make_params(cfg)
    ratio = cfg.params["u"]
    if ratio <= 0.0:
        raise ConfigError("u must be positive")
    u_c = critical_coupling(params)
    energy = bound_state_energy(ratio * u_c, params)
    exists = energy is not None
    row = (ratio, int(exists), energy / params.eps0 if exists else None)
    out = Path(cfg.out)
    csv_path = write_csv(
        out / "bound_state.csv",
        ("U_over_Uc", "has_bound_state", "E_b_over_eps0"),
        [row],
    )
    write_meta(
        out / "bound_state.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={"tol_gap": cfg.tol_gap, "tol_number": cfg.tol_number},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
    )
    if exists:
        print(f"bound-state: E_b = {energy / params.eps0:.12g} eps0 at U/U_c = {ratio}")
    else:
        print(f"bound-state: no bound state at U/U_c = {ratio} (below threshold)")
    return EXIT_OK


def cmd_phase_diagram(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    params = _make_params(cfg)
    physical = cfg.units == "physical"
    n = cfg.params["n"] * params.k0**3
    e_c = cfg.params["ec"]
    if e_c is None:
        e_c = 50.0 if physical else 1e-5
    e_c = _input_energy(cfg, e_c)
    if e_c <= 0.0:
        raise ConfigError("ec must be positive")
    g_min = cfg.params["g_min"]
    g_max = cfg.params["g_max"]
    if g_min is None:
        g_min = 1000.0 if physical else 1e-3
    if g_max is None:
        g_max = 50000.0 if physical else 5e-2
    if physical:
        g_min, g_max = g_min * _EV_PER_UEV, g_max * _EV_PER_UEV
    if not (0.0 <= g_min < g_max):
        raise ConfigError("need 0 <= g-min < g-max")
    if cfg.params["g_points"] < 1 or cfg.params["u_points"] < 1:
        raise ConfigError("grid point counts must be >= 1")
    if cfg.params["u_min"] <= 0.0 or cfg.params["u_max"] < cfg.params["u_min"]:
        raise ConfigError("need 0 < u-min <= u-max")

    u_c = critical_coupling(params)
    ratios = np.linspace(cfg.params["u_min"], cfg.params["u_max"], cfg.params["u_points"])
    g_grid = np.linspace(g_min, g_max, cfg.params["g_points"])
    cells = sweep_diagram(ratios * u_c, [e_c], g_grid, n, params=params)

    rows = []
    for cell in cells:
        rows.append(
            (
                cell.U / u_c,
                cell.mu,
                cell.Delta0,
                cell.E_c,
                cell.G,
                cell.E_J,
                cell.sigma2,
                cell.label.pairing if cell.label else "",
                cell.label.coherence if cell.label else "",
                cell.converged,
            )
        )
    out = Path(cfg.out)
    csv_path = write_csv(
        out / "phase_diagram.csv",
        (
            "U_over_Uc",
            "mu",
            "Delta0",
            "E_c",
            "G",
            "E_J",
            "sigma_phi2",
            "pairing",
            "coherence",
            "converged",
        ),
        rows,
    )

    boundary_rows = []
    seen = {}
    for cell in cells:
        if cell.converged and cell.U not in seen:
            seen[cell.U] = cell
    for u_value, cell in seen.items():
        g_star = critical_hopping(u_value, n, e_c, params=params,
                                  solution=_solution_view(cell))
        g_bis = refine_hopping_boundary(cell.Delta0, e_c, u_value)
        boundary_rows.append((u_value / u_c, cell.mu, g_star, g_bis))
    boundary_path = write_csv(
        out / "boundary.csv",
        ("U_over_Uc", "mu", "G_star", "G_star_bisect"),
        boundary_rows,
    )
    write_meta(
        out / "phase_diagram.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={"tol_gap": cfg.tol_gap, "tol_number": cfg.tol_number},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path, boundary_path],
        extra={"energy_unit": _energy_unit(cfg)},
    )
    bad = [c for c in cells if not c.converged]
    if bad:
        print(f"phase-diagram: {len(bad)} of {len(cells)} cells unconverged",
              file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    print(f"phase-diagram: {len(cells)} cells -> {csv_path}, boundary -> {boundary_path}")
    return EXIT_OK


def _solution_view(cell):
    """Adapter: present a DiagramCell's solved fields as a GapSolution."""
    from .gap import GapSolution

    return GapSolution(
        U=cell.U,
        n=cell.n,
        mu=cell.mu,
        Delta0=cell.Delta0,
        residual_gap=0.0,
        residual_number=0.0,
        iterations=0,
        converged=cell.converged,
    )


def cmd_overlap(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    theta = cfg.params["theta"]
    dphi = cfg.params["dphi"]
    alpha = cfg.params["alpha"]
    m_max = cfg.params["m_max"]
    if not 0.0 <= theta <= 0.5 * math.pi:
        raise ConfigError("theta must lie in [0, pi/2]")
    if m_max < 1:
        raise ConfigError("m-max must be >= 1")
    factor = math.cos(theta) ** 2 + complex(math.cos(dphi), math.sin(dphi)) * math.sin(theta) ** 2
    rate_exact = -math.log(abs(factor)) if abs(factor) > 0.0 else math.inf
    rows = []
    prev_log = 0.0
    for m in range(1, m_max + 1):
        value = bcs_overlap(np.full(m, theta), dphi)
        bose = bec_overlap(BosonEnsemble(np.full(m, alpha)), dphi)
        log_abs = math.log(abs(value)) if abs(value) > 0.0 else -math.inf
        rows.append(
            (m, value.real, value.imag, abs(value), prev_log - log_abs, abs(bose))
        )
        prev_log = log_abs
    out = Path(cfg.out)
    csv_path = write_csv(
        out / "overlap.csv",
        ("M", "bcs_re", "bcs_im", "bcs_abs", "bcs_rate", "bec_abs"),
        rows,
    )
    write_meta(
        out / "overlap.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
        extra={"rate_exact": rate_exact},
    )
    print(f"overlap: per-mode decay rate {rate_exact:.12g} -> {csv_path}")
    return EXIT_OK


def cmd_eta(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    params = _make_params(cfg)
    n = cfg.params["n"] * params.k0**3
    ratio = cfg.params["u"]
    if ratio <= 0.0:
        raise ConfigError("u must be positive")
    if cfg.params["k_points"] < 1 or cfg.params["k_max"] <= 0.0:
        raise ConfigError("need k-points >= 1 and k-max > 0")
    u_value = ratio * critical_coupling(params)
    solution = solve_self_consistent(
        u_value, n, params, tol_gap=cfg.tol_gap, tol_number=cfg.tol_number
    )
    if not solution.converged:
        print("eta: gap solver did not converge", file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    count = cfg.params["k_points"]
    k_grid = (np.arange(count) + 0.5) * (cfg.params["k_max"] * params.k0 / count)
    ens = PairEnsemble.from_gap_solution(
        solution, params, k_grid, phi=cfg.params["phi"],
        convention=cfg.params["convention"],
    )
    stats = eta_statistics(ens)
    out = Path(cfg.out)
    csv_path = write_csv(
        out / "eta.csv",
        ("U_over_Uc", "mu", "Delta0", "modes", "Omega", "eta_mean", "eta_variance"),
        [(
            ratio,
            solution.mu,
            solution.Delta0,
            ens.n_modes,
            ens.Omega,
            stats["mean"],
            stats["variance"],
        )],
    )
    write_meta(
        out / "eta.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={"tol_gap": cfg.tol_gap, "tol_number": cfg.tol_number},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
        extra={
            "angle_convention": cfg.params["convention"],
            "note": "finite k-grid sample of the continuum; statistics are grid relative",
        },
    )
    print(f"eta: mean {stats['mean']:.6g}, variance {stats['variance']:.6g} -> {csv_path}")
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    modes = cfg.params["modes"]
    if not 1 <= modes <= 12:
        raise ConfigError("modes must lie in 1..12")
    rng = np.random.default_rng(cfg.seed)
    ens = random_pair_ensemble(modes, rng)
    stats = eta_statistics(ens)
    oracle = build_fock_oracle(ens)
    moments = oracle.eta_moments()
    dphi = cfg.params["dphi"]
    overlap_dev = abs(
        bcs_overlap(ens.theta, dphi) - oracle.overlap(ens.phi, ens.phi + dphi)
    )
    grid = 0.3 + 1e-3 * np.arange(-3, 4)
    np_dev = number_phase_derivative_check(oracle, 2 * (modes // 2), grid)
    out = Path(cfg.out)
    csv_path = write_csv(
        out / "oracle.csv",
        (
            "modes",
            "eta_mean_analytic",
            "eta_mean_oracle",
            "eta_var_analytic",
            "eta_var_oracle",
            "overlap_abs_dev",
            "number_phase_dev",
        ),
        [(
            modes,
            stats["mean"],
            moments["mean"],
            stats["variance"],
            moments["variance"],
            overlap_dev,
            np_dev,
        )],
    )
    write_meta(
        out / "oracle.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
    )
    print(
        f"oracle: eta mean dev {abs(stats['mean'] - moments['mean']):.3e}, "
        f"overlap dev {overlap_dev:.3e} -> {csv_path}"
    )
    return EXIT_OK


def cmd_pegg_barnett(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    s = cfg.params["s"]
    rungs = cfg.params["rungs"]
    if s < 1 or rungs < 1:
        raise ConfigError("need s >= 1 and rungs >= 1")
    rows = []
    import warnings as _warnings

    for level in range(rungs):
        s_level = s * (1 << level)
        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always")
            _, report = pegg_barnett(
                s_level,
                cfg.params["theta0"],
                cfg.params["omega"],
                state_phase=cfg.params["state_phase"],
            )
        for warning in caught:
            print(f"pegg-barnett: warning: {warning.message}", file=sys.stderr)
        rows.append(
            (
                s_level,
                report.commutator_expectation.real,
                report.commutator_expectation.imag,
                report.deviation_from_canonical,
                report.truncation_error,
                report.truncation_warning,
            )
        )
    out = Path(cfg.out)
    csv_path = write_csv(
        out / "pegg_barnett.csv",
        ("s", "comm_re", "comm_im", "deviation", "truncation_error", "warned"),
        rows,
    )
    write_meta(
        out / "pegg_barnett.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
    )
    print(f"pegg-barnett: deviation {rows[0][3]:.6e} at s={s} -> {csv_path}")
    return EXIT_OK


def cmd_chain(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    physical = cfg.units == "physical"
    geometry = (
        cfg.params["epsilon_r"],
        cfg.params["area_um2"],
        cfg.params["spacing_nm"],
    )
    e_c = cfg.params["ec"]
    if any(v is not None for v in geometry):
        if e_c is not None:
            raise ConfigError("give either --ec or the geometry trio, not both")
        if any(v is None for v in geometry):
            raise ConfigError("geometry needs --epsilon-r, --area-um2, --spacing-nm together")
        from scipy import constants as _const

        e_c_joule = charging_energy(
            geometry[0] * _const.epsilon_0,
            geometry[1] * 1e-12,
            geometry[2] * 1e-9,
        )
        e_c = e_c_joule / _const.e  # eV
    elif e_c is None:
        raise ConfigError("chain needs --ec or the geometry trio")
    else:
        e_c = _input_energy(cfg, e_c)
    e_j = cfg.params["ej"]
    if e_j is None:
        raise ConfigError("chain needs --ej")
    e_j = _input_energy(cfg, e_j)
    segments = cfg.params["segments"]
    if segments < 2:
        raise ConfigError("segments must be >= 2")
    if e_c <= 0.0 or e_j < 0.0:
        raise ConfigError("need ec > 0 and ej >= 0")

    spec = ChainSpec(N=segments, E_c=e_c, E_J=e_j)
    ground = ChainGroundState.for_chain(spec)
    label = coherence_classify(e_c, e_j)
    delta_bar = cfg.params["delta_bar"]
    bars = np.full(segments, delta_bar)
    rows = []
    for r in range(segments):
        rho = odlro(0, r, bars, ground.sigma2) if math.isfinite(ground.sigma2) else (
            odlro(0, r, bars, 0.0) if r == 0 else 0.0
        )
        rows.append((r, rho))
    out = Path(cfg.out)
    csv_path = write_csv(out / "chain.csv", ("separation", "rho"), rows)
    oracle = None
    if e_j > 0.0:
        result = oscillator_oracle(e_c, e_j)
        oracle = {
            "ground_energy": result.ground_energy,
            "variance": result.variance,
            "variance_literal_closed_form": math.sqrt(8.0 * e_c / e_j),
        }
    write_meta(
        out / "chain.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
        extra={
            "E_c": e_c,
            "E_J": e_j,
            "energy_unit": _energy_unit(cfg),
            "sigma2": ground.sigma2,
            "variance_oscillator": ground.variance_oscillator,
            "variance_gaussian_form": ground.variance_gaussian_form,
            "factor_discrepancy": ground.factor_discrepancy,
            "coherence": label,
            "oscillator_oracle": oracle,
        },
    )
    print(
        f"chain: sigma_phi2 {ground.sigma2:.6g}, coherence {label} -> {csv_path}"
    )
    return EXIT_OK


def cmd_phase_lock(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    modes = cfg.params["modes"]
    if not 2 <= modes <= 6:
        raise ConfigError("modes must lie in 2..6")
    sign = -1.0 if cfg.params["sign"] == "attractive" else 1.0
    result = variational_phase_lock(
        modes,
        g_sign=sign,
        seed=cfg.seed,
        length=cfg.params["length"],
        step=cfg.params["step"],
        tol=cfg.params["tol"],
        max_steps=cfg.params["max_steps"],
    )
    rows = [
        (k, result.phases[k], result.amplitudes[k]) for k in range(modes)
    ]
    out = Path(cfg.out)
    csv_path = write_csv(out / "phase_lock.csv", ("mode", "phase", "amplitude"), rows)
    write_meta(
        out / "phase_lock.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={"descent_tol": cfg.params["tol"]},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[csv_path],
        extra={
            "gradient_norm": result.gradient_norm,
            "steps": result.steps,
            "converged": result.converged,
            "equal_phase_residual": result.equal_phase_residual,
            "phase_spread": result.phase_spread,
            "min_amplitude": result.min_amplitude,
        },
    )
    if not result.converged:
        print(
            f"phase-lock: descent did not converge "
            f"(gradient norm {result.gradient_norm:.3e} after {result.steps} steps)",
            file=sys.stderr,
        )
        return EXIT_NON_CONVERGENCE
    print(
        f"phase-lock: spread {result.phase_spread:.3e} after {result.steps} steps "
        f"-> {csv_path}"
    )
    return EXIT_OK


def cmd_checks(cfg: RunConfig) -> int:
    t0 = time.monotonic()
    if cfg.params["list"]:
        for name, description in list_checks():
            print(f"{name}: {description}")
        return EXIT_OK
    results = run_checks(
        seed=cfg.seed,
        pegg_barnett_s=cfg.params["pegg_barnett_s"],
        pegg_barnett_omega=cfg.params["pegg_barnett_omega"],
    )
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
    out = Path(cfg.out)
    write_meta(
        out / "checks.meta.json",
        config=cfg.echo(),
        version=__version__,
        unit_mode=cfg.units,
        tolerances={},
        wall_clock_s=time.monotonic() - t0,
        csv_paths=[],
        extra={
            r.name: {"passed": r.passed, "measured": r.measured} for r in results
        },
    )
    if all(r.passed for r in results):
        print(f"checks: all {len(results)} passed")
        return EXIT_OK
    failed = [r.name for r in results if not r.passed]
    print(f"checks: FAILED {failed}", file=sys.stderr)
    return EXIT_CHECK_FAILURE


_COMMANDS = {
    "gap-sweep": cmd_gap_sweep,
    "bound-state": cmd_bound_state,
    "phase-diagram": cmd_phase_diagram,
    "overlap": cmd_overlap,
    "eta": cmd_eta,
    "oracle": cmd_oracle,
    "pegg-barnett": cmd_pegg_barnett,
    "chain": cmd_chain,
    "phase-lock": cmd_phase_lock,
    "checks": cmd_checks,
}


def main(argv=None) -> int:
    parser, subparsers = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            file_values = _typed_config(
                _read_config_file(args.config), subparsers[args.command]
            )
            subparsers[args.command].set_defaults(**file_values)
            args = parser.parse_args(argv)
        cfg = _to_runconfig(args)
        if cfg.tol_gap <= 0.0 or cfg.tol_number <= 0.0:
            raise ConfigError("tolerances must be positive")
        return _COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"bcsbec: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except SystemExit as exc:
        # argparse exits (usage errors already remapped to 3 by _Parser,
        # --help/--version to 0); fold into the return-code contract.
        code = exc.code
        return code if isinstance(code, int) else EXIT_INVALID_CONFIG
    except Exception as exc:  # solver and numeric failures
        print(f"bcsbec: {exc}", file=sys.stderr)
        return EXIT_NON_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
