"""State counting for N identical nonrelativistic particles in Omega modes.

Exact counts go through log-gamma so that N and Omega up to ~1e9 never
overflow; the Stirling two-term entropy and the ratio function that caps it
are what the rest-mass bound check is built from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

from .core import TWO_PI, BoundReport, DomainError, evaluate_bound, golden_section_max

BOSON = "boson"
FERMION = "fermion"

# search bracket for the ratio-function peak
RATIO_BRACKET = (1e-4, 1e3)
# relative slack when flooring a phase-space volume that is an integer up to rounding
_FLOOR_SNAP = 1e-12


@dataclass(frozen=True)
class GasSpec:
    n_particles: int
    n_modes: int
    statistics: str = BOSON

    def __post_init__(self):
        if self.n_particles < 1 or self.n_modes < 1:
            raise DomainError("need N >= 1 and Omega >= 1")
        if self.statistics not in (BOSON, FERMION):
            raise DomainError(f"unknown statistics {self.statistics!r}")
        if self.statistics == FERMION and self.n_particles > self.n_modes:
            raise DomainError("Pauli principle: fermions need N <= Omega")


@dataclass(frozen=True)
class MassBoundSpec:
    n_particles: int
    compton_ratio: float  # mu*c*R/hbar
    momentum_fraction: float = 0.5  # kappa

    def __post_init__(self):
        if self.n_particles < 1:
            raise DomainError("need N >= 1")
        if not self.compton_ratio > 0:
            raise DomainError("compton_ratio must be positive")
        if not 0.0 < self.momentum_fraction < 1.0:
            raise DomainError("momentum_fraction must lie in (0, 1)")

    @property
    def n_modes(self) -> int:
        return phase_space_modes(self.compton_ratio, self.momentum_fraction)


def phase_space_modes(compton_ratio: float, momentum_fraction: float) -> int:
    """Omega = floor((kappa * mu c R / 2 pi hbar)^3)."""
    volume = (momentum_fraction * compton_ratio / TWO_PI) ** 3
    nearest = round(volume)
    if nearest >= 1 and abs(volume - nearest) <= _FLOOR_SNAP * nearest:
        return int(nearest)
    return int(math.floor(volume))


def exact_log_count(spec: GasSpec) -> float:
    """ln W: ln C(N+Omega-1, N) for bosons, ln C(Omega, N) for fermions."""
    n, omega = spec.n_particles, spec.n_modes
    if spec.statistics == BOSON:
        return math.lgamma(n + omega) - math.lgamma(omega) - math.lgamma(n + 1)
    return math.lgamma(omega + 1) - math.lgamma(n + 1) - math.lgamma(omega - n + 1)


def stirling_entropy(n_particles: float, n_modes: float) -> float:
    """Omega ln(1 + N/Omega) + N ln(1 + Omega/N), without the log corrections."""
    if n_particles < 1 or n_modes < 1:
        raise DomainError("need N >= 1 and Omega >= 1")
    n, omega = float(n_particles), float(n_modes)
    return omega * math.log1p(n / omega) + n * math.log1p(omega / n)


def ratio_function(nbar: float) -> float:
    """[ln(1+nbar) + nbar ln(1+1/nbar)] / nbar^(2/3)."""
    if not nbar > 0:
        raise DomainError(f"nbar must be positive, got {nbar!r}")
    return (math.log1p(nbar) + nbar * math.log1p(1.0 / nbar)) / nbar ** (2.0 / 3.0)


@lru_cache(maxsize=None)
def maximize_ratio(xtol: float = 1e-6) -> Tuple[float, float]:
    """Locate the single interior maximum of :func:`ratio_function`."""
    return golden_section_max(ratio_function, *RATIO_BRACKET, xtol=xtol)


def mass_bound_report(spec: MassBoundSpec, statistics: str = BOSON) -> BoundReport:
    """Entropy of the gas against 2 pi N mu c R / hbar (rest energy included).

    Bosons use the Stirling form; fermions use the exact count, which never
    exceeds the boson value.
    """
    omega = spec.n_modes
    if omega < 1:
        raise DomainError("Omega = 0: system smaller than one de Broglie cell")
    n = spec.n_particles
    if statistics == BOSON:
        entropy = stirling_entropy(n, omega)
    else:
        entropy = exact_log_count(GasSpec(n, omega, FERMION))
    _, f_star = maximize_ratio()
    chain = f_star * n ** (2.0 / 3.0) * omega ** (1.0 / 3.0)
    return evaluate_bound(
        entropy,
        n * spec.compton_ratio,
        label=f"mass[{statistics}]",
        diagnostics={"n_modes": float(omega), "nbar": n / omega, "ratio_chain_bound": chain},
    )


def random_mass_spec(rng) -> MassBoundSpec:
    """Valid spec (Omega >= 1) with N, mu c R/hbar spread log-uniformly over decades."""
    n = int(round(10.0 ** rng.uniform(0.0, 6.0)))
    kappa = float(rng.uniform(0.01, 0.99))
    compton = TWO_PI / kappa * 10.0 ** rng.uniform(0.0, 3.0)
    return MassBoundSpec(n, compton, kappa)
