"""Energy floors set by the charge carriers that confine radiation.

Covers the free-carrier plasma cutoff and evanescent depth, Drude
conductivity and skin depth, and the two confinement geometries: a sphere
cut into concentric conducting shells ("onion") and a coiled coaxial cable.
Lengths, masses and densities are in natural units, so mass*length is the
length measured in carrier Compton wavelengths and charge_sq is e^2/(hbar c).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .core import BoundReport, ConfinementError, DomainError, PropagationError, evaluate_bound

PLASMA = "plasma"
SKIN = "skin"
THREE_STATE = "three_state"
MULTIMODE = "multimode"

# accepted slack on geometric equalities (d = R/n, m*d = 1, minimal density)
_REL_SLACK = 1e-12


@dataclass(frozen=True)
class CarrierSpec:
    density: float
    charge_sq: float
    mass: float
    relaxation_time: float = 1.0

    def __post_init__(self):
        if not self.density > 0 or not self.mass > 0 or not self.relaxation_time > 0:
            raise DomainError("density, mass and relaxation time must be positive")
        if not 0.0 < self.charge_sq <= 1.0:
            raise DomainError("charge_sq must lie in (0, 1]: e^2 < hbar c")


@dataclass(frozen=True)
class OnionScene:
    n_shells: int
    outer_radius: float
    partition_thickness: float
    carrier: CarrierSpec

    def __post_init__(self):
        if self.n_shells < 1:
            raise DomainError("need at least one shell")
        if not self.outer_radius > 0 or not self.partition_thickness > 0:
            raise DomainError("radius and thickness must be positive")
        if self.partition_thickness > self.outer_radius / self.n_shells * (1 + _REL_SLACK):
            raise DomainError("partitions do not fit: need d <= R/n")
        if self.carrier.mass * self.partition_thickness < 1 - _REL_SLACK:
            raise DomainError("carrier Compton length exceeds the partition thickness")


@dataclass(frozen=True)
class CoaxScene:
    cable_length: float
    sphere_radius: float
    inner_radius: float
    outer_radius: float
    carrier: CarrierSpec

    def __post_init__(self):
        L, R, r1, r2 = self.cable_length, self.sphere_radius, self.inner_radius, self.outer_radius
        if not (r1 > 0 and r2 > r1):
            raise DomainError("need 0 < inner_radius < outer_radius")
        # "cable thin on the scale of R" and "L >> R", as concrete margins
        if R < 2.0 * r2:
            raise DomainError("need sphere_radius >= 2 * outer_radius")
        if L < 10.0 * R:
            raise DomainError("need cable_length >= 10 * sphere_radius")
        if self.carrier.mass * r1 < 1 - _REL_SLACK:
            raise DomainError("carrier Compton length exceeds the inner radius")


def plasma_frequency(carrier: CarrierSpec) -> float:
    """omega_p = sqrt(4 pi N e^2 / m)."""
    return math.sqrt(4.0 * math.pi * carrier.density * carrier.charge_sq / carrier.mass)


def evanescent_depth(omega: float, omega_p: float) -> float:
    """Penetration depth (1/omega) (omega_p^2/omega^2 - 1)^(-1/2) below the cutoff."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    if omega >= omega_p:
        raise PropagationError(f"omega={omega} >= omega_p={omega_p}: wave propagates")
    return 1.0 / (omega * math.sqrt((omega_p / omega) ** 2 - 1.0))


def drude_conductivity(carrier: CarrierSpec, omega: float) -> complex:
    """sigma = N e^2 / (m/tau - i m omega)."""
    if omega < 0:
        raise DomainError("omega must be nonnegative")
    m = carrier.mass
    return carrier.density * carrier.charge_sq / complex(m / carrier.relaxation_time, -m * omega)


def skin_depth(omega: float, sigma_real: float) -> float:
    """delta_s = (2 pi omega sigma)^(-1/2) for an Ohmic conductivity."""
    if not omega > 0 or not sigma_real > 0:
        raise DomainError("need omega > 0 and sigma_real > 0")
    return (2.0 * math.pi * omega * sigma_real) ** -0.5


def skin_depth_floor(carrier: CarrierSpec) -> float:
    """Frequency-independent lower bound (2 pi N e^2 / m)^(-1/2), valid for omega*tau << 1."""
    return (2.0 * math.pi * carrier.density * carrier.charge_sq / carrier.mass) ** -0.5


def minimal_density(mass: float, charge_sq: float, thickness: float, mechanism: str = PLASMA) -> float:
    """Smallest carrier density whose penetration depth fits inside ``thickness``."""
    if mechanism == PLASMA:
        return mass / (4.0 * math.pi * charge_sq * thickness ** 2)
    if mechanism == SKIN:
        return mass / (2.0 * math.pi * charge_sq * thickness ** 2)
    raise DomainError(f"unknown mechanism {mechanism!r}")


def _penetration_length(carrier: CarrierSpec, mechanism: str) -> float:
    if mechanism == PLASMA:
        return 1.0 / plasma_frequency(carrier)
    if mechanism == SKIN:
        return skin_depth_floor(carrier)
    raise DomainError(f"unknown mechanism {mechanism!r}")


def _require_confinement(carrier: CarrierSpec, thickness: float, mechanism: str) -> float:
    n_min = minimal_density(carrier.mass, carrier.charge_sq, thickness, mechanism)
    if carrier.density < n_min * (1 - _REL_SLACK):
        raise ConfinementError(
            f"density {carrier.density:.6g} below the {mechanism} minimum {n_min:.6g}: "
            "fields leak through the conductor")
    return n_min


def shell_area_factor(n_shells: int) -> float:
    """sum_{i=1..n} (i/n)^2, the area-weighted shell count (-> n/3 for n >> 1)."""
    n = n_shells
    return (n + 1) * (2 * n + 1) / (6.0 * n)


def onion_report(scene: OnionScene, mechanism: str = PLASMA) -> BoundReport:
    """Photon entropy ln(3n) against the carrier rest energy of all partitions."""
    c = scene.carrier
    n, R, d = scene.n_shells, scene.outer_radius, scene.partition_thickness
    n_min = _require_confinement(c, d, mechanism)
    outer_shell_mass = 4.0 * math.pi * R ** 2 * d * c.density * c.mass
    energy = shell_area_factor(n) * outer_shell_mass
    floor = (2.0 if mechanism == PLASMA else 4.0) * float(n) ** 4
    report = evaluate_bound(
        math.log(3.0 * n),
        energy * R,
        label=f"onion[{mechanism}]",
        diagnostics={
            "n_shells": float(n),
            "omega_p": plasma_frequency(c),
            "penetration_length": _penetration_length(c, mechanism),
            "minimal_density": n_min,
            "energy_radius": energy * R,
            "asymptotic_energy_radius": n / 3.0 * outer_shell_mass * R,
            "analytic_floor": floor,
        },
    )
    report.diagnostics["floor_holds"] = float(report.bound_value >= floor)
    return report


def photon_entropy_cap(n_modes: float) -> float:
    """ln e^N: the multiphoton state count from N doubly degenerate modes is below e^N."""
    if n_modes < 0:
        raise DomainError("mode count must be nonnegative")
    return float(n_modes)


def multiphoton_log_count(n_modes: float, max_photons: int) -> float:
    """ln sum_{k<=K} N^k/k!, the truncated series whose full sum is e^N."""
    if n_modes == 0:
        return 0.0
    k = np.arange(max_photons + 1, dtype=float)
    return float(logsumexp(k * math.log(n_modes) - gammaln(k + 1)))


def coax_report(scene: CoaxScene, mode: str = THREE_STATE, mechanism: str = PLASMA) -> BoundReport:
    """Photon entropy of the coiled cable against the inner conductor's rest energy."""
    c = scene.carrier
    L, R, r1, r2 = scene.cable_length, scene.sphere_radius, scene.inner_radius, scene.outer_radius
    n_min = _require_confinement(c, r1, mechanism)
    if mode == THREE_STATE:
        entropy = math.log(3.0)
    elif mode == MULTIMODE:
        entropy = photon_entropy_cap(2.0 * L / r2)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    energy = math.pi * r1 ** 2 * L * c.density * c.mass
    floor = (1.0 if mechanism == PLASMA else 2.0) * (math.pi / 2.0) / c.charge_sq * (L / r1) * (R / r1)
    report = evaluate_bound(
        entropy,
        energy * R,
        label=f"coax[{mode},{mechanism}]",
        diagnostics={
            "omega_p": plasma_frequency(c),
            "penetration_length": _penetration_length(c, mechanism),
            "minimal_density": n_min,
            "mode_count": 2.0 * L / r2,
            "energy_radius": energy * R,
            "analytic_floor": floor,
        },
    )
    report.diagnostics["floor_holds"] = float(report.bound_value >= floor * (1 - 1e-12))
    return report


def _log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(10.0 ** rng.uniform(math.log10(lo), math.log10(hi)))


def random_onion_scene(rng: np.random.Generator, mechanism: str = PLASMA) -> OnionScene:
    """Draw a scene satisfying every precondition, spread over many decades."""
    n = int(rng.integers(1, 51))
    R = _log_uniform(rng, 1e-2, 1e4)
    d = R / n * _log_uniform(rng, 1e-3, 1.0)
    m = _log_uniform(rng, 1.0, 1e3) / d
    e2 = _log_uniform(rng, 1e-3, 1.0)
    density = minimal_density(m, e2, d, mechanism) * _log_uniform(rng, 1.0, 1e3)
    tau = _log_uniform(rng, 1e-3, 1e3)
    return OnionScene(n, R, d, CarrierSpec(density, e2, m, tau))


def random_coax_scene(rng: np.random.Generator, mechanism: str = PLASMA) -> CoaxScene:
    r1 = _log_uniform(rng, 1e-3, 1e2)
    r2 = r1 * (1.0 + _log_uniform(rng, 1e-3, 10.0))
    R = 2.0 * r2 * _log_uniform(rng, 1.0, 1e2)
    L = 10.0 * R * _log_uniform(rng, 1.0, 1e3)
    m = _log_uniform(rng, 1.0, 1e3) / r1
    e2 = _log_uniform(rng, 1e-3, 1.0)
    density = minimal_density(m, e2, r1, mechanism) * _log_uniform(rng, 1.0, 1e3)
    tau = _log_uniform(rng, 1e-3, 1e3)
    return CoaxScene(L, R, r1, r2, CarrierSpec(density, e2, m, tau))
