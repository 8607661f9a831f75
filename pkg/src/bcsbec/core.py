"""Model parameters, unit systems, and single-particle ingredients.

The model is a three-dimensional attractive Fermi gas with a separable
interaction regularized by the form factor

    Gamma(k) = 1 / sqrt(1 + k^2/k0^2),

which renders all momentum integrals convergent and introduces a two-body
threshold coupling

    U_c = 4 pi hbar^2 / (m k0):

below U_c the two-body problem has no bound state, above it a bound pair
forms and the many-body ground state crosses over from overlapping Cooper
pairs to a condensate of tightly bound molecules.

Two unit modes are supported.  In dimensionless mode hbar = 1, k0 = 1 and
eps0 = hbar^2 k0^2 / (2m) = 1 (so m = 1/2); energies are quoted in eps0,
momenta in k0, densities in k0^3.  In physical mode energies are in eV and
lengths in Angstrom; the effective mass defaults to the free-electron value
and can also be derived from a lattice via m = hbar^2/(a^2 t).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import constants as _const

__all__ = [
    "HBAR2_OVER_2ME_EV_A2",
    "PhysicalParams",
    "UnitSystem",
    "dispersion",
    "nsr_form_factor",
    "critical_coupling",
]

# hbar^2/(2 m_e) in eV * Angstrom^2; the only place SI constants enter the model.
HBAR2_OVER_2ME_EV_A2 = _const.hbar**2 / (2.0 * _const.m_e) / _const.e / 1e-20


@dataclass
class PhysicalParams:
    """Single-particle and interaction parameters in one coherent unit system.

    Energies and hbar^2/(2m) must be expressed in the same energy unit and
    lengths in the same length unit throughout one instance (eV and Angstrom
    in physical mode, eps0 and 1/k0 in dimensionless mode).
    """

    k0: float = 1.0            # form-factor momentum scale (inverse length)
    half_hbar2_over_m: float = 1.0   # hbar^2/(2m) in energy*length^2
    t: float | None = None     # lattice hopping energy, optional
    a: float | None = None     # lattice constant, optional
    U: float | None = None     # attraction strength (energy*volume), optional
    n: float | None = None     # particle density (1/volume), optional

    def __post_init__(self):
        if self.k0 <= 0:
            raise ValueError("k0 must be positive")
        if self.half_hbar2_over_m <= 0:
            raise ValueError("hbar^2/(2m) must be positive")
        if self.t is not None and self.a is not None:
            # consistency: continuum mass from the lattice, m = hbar^2/(a^2 t),
            # i.e. hbar^2/(2m) = a^2 t / 2 exactly.
            derived = 0.5 * self.a**2 * self.t
            if not np.isclose(derived, self.half_hbar2_over_m, rtol=1e-12, atol=0.0):
                raise ValueError(
                    "inconsistent lattice parameters: a^2*t/2 = %r but hbar^2/(2m) = %r"
                    % (derived, self.half_hbar2_over_m)
                )
        if self.n is not None and self.n <= 0:
            raise ValueError("density must be positive")

    @classmethod
    def dimensionless(cls, U: float | None = None, n: float | None = None) -> "PhysicalParams":
        """hbar = k0 = eps0 = 1 (hence m = 1/2)."""
        return cls(k0=1.0, half_hbar2_over_m=1.0, U=U, n=n)

    @classmethod
    def from_lattice(cls, t: float, a: float, k0: float,
                     U: float | None = None, n: float | None = None) -> "PhysicalParams":
        """Mass from a cubic lattice: m = hbar^2/(a^2 t)."""
        if t <= 0 or a <= 0:
            raise ValueError("t and a must be positive")
        return cls(k0=k0, half_hbar2_over_m=0.5 * a**2 * t, t=t, a=a, U=U, n=n)

    @classmethod
    def free_electron(cls, k0: float, U: float | None = None,
                      n: float | None = None) -> "PhysicalParams":
        """Physical mode with the free-electron mass; eV and Angstrom units."""
        return cls(k0=k0, half_hbar2_over_m=HBAR2_OVER_2ME_EV_A2, U=U, n=n)

    @property
    def eps0(self) -> float:
        """Form-factor energy scale hbar^2 k0^2/(2m)."""
        return self.half_hbar2_over_m * self.k0**2

    @property
    def mass(self) -> float:
        """m in units where hbar = 1 (i.e. 1/(2 * half_hbar2_over_m))."""
        return 1.0 / (2.0 * self.half_hbar2_over_m)

    def fermi_momentum(self) -> float:
        """k_F = (3 pi^2 n)^(1/3), both spin projections filled."""
        if self.n is None:
            raise ValueError("density not set")
        return (3.0 * np.pi**2 * self.n) ** (1.0 / 3.0)

    def fermi_energy(self) -> float:
        return self.half_hbar2_over_m * self.fermi_momentum() ** 2


@dataclass
class UnitSystem:
    """Conversion between a physical parameter set and its dimensionless twin.

    energy_scale is eps0 in the physical unit, length_scale is 1/k0.  The
    round trip to_dimensionless -> to_physical is the identity to rounding.
    """

    mode: str = "dimensionless"     # "dimensionless" or "physical"
    energy_scale: float = 1.0       # eps0 expressed in the physical energy unit
    length_scale: float = 1.0       # 1/k0 expressed in the physical length unit

    def __post_init__(self):
        if self.mode not in ("dimensionless", "physical"):
            raise ValueError("mode must be 'dimensionless' or 'physical'")
        if self.energy_scale <= 0 or self.length_scale <= 0:
            raise ValueError("scales must be positive")

    @classmethod
    def for_params(cls, params: PhysicalParams, mode: str = "physical") -> "UnitSystem":
        return cls(mode=mode, energy_scale=params.eps0, length_scale=1.0 / params.k0)

    def energy_to_dimensionless(self, e):
        return np.asarray(e, dtype=float) / self.energy_scale

    def energy_to_physical(self, e):
        return np.asarray(e, dtype=float) * self.energy_scale

    def momentum_to_dimensionless(self, k):
        return np.asarray(k, dtype=float) * self.length_scale

    def momentum_to_physical(self, k):
        return np.asarray(k, dtype=float) / self.length_scale

    def density_to_dimensionless(self, n):
        return np.asarray(n, dtype=float) * self.length_scale**3

    def density_to_physical(self, n):
        return np.asarray(n, dtype=float) / self.length_scale**3


def dispersion(k, params: PhysicalParams, form: str = "continuum"):
    """Single-particle kinetic energy.

    form = "continuum": eps_k = hbar^2 k^2 / (2m) for momentum magnitude k.
    form = "lattice":   eps_k = t * sum_i (1 - cos(k_i a)) for a per-axis
    wavevector (a scalar is treated as (k, 0, 0)).  The two agree to relative
    order (ka)^2/12 for small ka once m = hbar^2/(a^2 t).
    """
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("negative wavevector component")
    if form == "continuum":
        return params.half_hbar2_over_m * k**2
    if form == "lattice":
        if params.t is None or params.a is None:
            raise ValueError("lattice form requires t and a")
        comps = np.atleast_1d(k)
        return params.t * np.sum(1.0 - np.cos(comps * params.a), axis=-1 if comps.ndim > 1 else 0)
    raise ValueError("form must be 'continuum' or 'lattice'")


def nsr_form_factor(k, k0: float = 1.0):
    """Separable-interaction form factor Gamma(k) = 1/sqrt(1 + k^2/k0^2).

    Monotone decreasing, Gamma(0) = 1, Gamma ~ k0/k at large k.
    """
    if k0 <= 0:
        raise ValueError("k0 must be positive")
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("negative momentum magnitude")
    return 1.0 / np.sqrt(1.0 + (k / k0) ** 2)


def critical_coupling(params: PhysicalParams) -> float:
    """Two-body threshold U_c = 4 pi hbar^2/(m k0) = 8 pi * half_hbar2_over_m / k0.

    Satisfies U_c * Integral[d^3k/(2 pi)^3 Gamma^2/(2 eps_k)] = 1 exactly.
    """
    return 8.0 * np.pi * params.half_hbar2_over_m / params.k0
