"""Truncated two-level canonical ensemble and the species-proliferation sweep.

A unique ground state at rho0 = R*eps0 and a g-fold excited level a gap
rho_gap = R*Delta above it; ``y`` is beta*Delta.  Xi(y) = S - 2 pi R E is the
quantity whose sign decides the bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .core import TWO_PI, DomainError, golden_section_max

DEFAULT_RHO0 = 2.0


@dataclass(frozen=True)
class TwoLevelSystem:
    rho0: float
    rho_gap: float
    degeneracy: float
    y: float

    def __post_init__(self):
        if not self.rho0 > 0:
            raise DomainError("ground-state energy R*eps0 must be positive")
        if not self.rho_gap >= 0:
            raise DomainError("gap must be nonnegative")
        if not self.degeneracy >= 1:
            raise DomainError("degeneracy must be at least 1")
        if not self.y >= 0:
            raise DomainError("beta*Delta must be nonnegative")


def _excited_fraction(y: float, g: float) -> float:
    # g/(e^y + g), written to stay finite for large y
    w = g * math.exp(-y)
    return w / (1.0 + w)


def mean_energy_radius(sys: TwoLevelSystem) -> float:
    """R*E = rho0 + rho_gap * g/(e^y + g)."""
    return sys.rho0 + sys.rho_gap * _excited_fraction(sys.y, sys.degeneracy)


def canonical_entropy(sys: TwoLevelSystem) -> float:
    """S = g y/(e^y + g) + ln(1 + g e^-y); depends on y and g only."""
    y, g = sys.y, sys.degeneracy
    return y * _excited_fraction(y, g) + math.log1p(g * math.exp(-y))


def _xi_shape(y: float, g: float, rho_gap: float) -> float:
    return (y - TWO_PI * rho_gap) * _excited_fraction(y, g) + math.log1p(g * math.exp(-y))


def xi(sys: TwoLevelSystem) -> float:
    return _xi_shape(sys.y, sys.degeneracy, sys.rho_gap) - TWO_PI * sys.rho0


def xi_maximum(sys: TwoLevelSystem) -> Tuple[float, float]:
    """Analytic maximum of Xi over y: y* = 2 pi rho_gap."""
    y_star = TWO_PI * sys.rho_gap
    xi_star = math.log1p(sys.degeneracy * math.exp(-y_star)) - TWO_PI * sys.rho0
    return y_star, xi_star


def numerical_xi_maximum(sys: TwoLevelSystem, xtol: float = 1e-7) -> Tuple[float, float]:
    """Golden-section search for the maximum of Xi on [0, max(10, 4 pi rho_gap)].

    The constant -2 pi rho0 is added back after the search; leaving it out
    keeps the compared values small and the flat top resolvable.
    """
    g, gap = sys.degeneracy, sys.rho_gap
    y_hi = max(10.0, 2.0 * TWO_PI * gap)
    y, val = golden_section_max(lambda t: _xi_shape(t, g, gap), 0.0, y_hi, xtol=xtol)
    return y, val - TWO_PI * sys.rho0


def critical_degeneracy(rho_gap: float, rho0: float) -> float:
    """Smallest g with a nonnegative Xi maximum: e^(2 pi rho_gap) (e^(2 pi rho0) - 1)."""
    if rho_gap < 0 or not rho0 > 0:
        raise DomainError("need rho_gap >= 0 and rho0 > 0")
    return math.exp(TWO_PI * rho_gap) * math.expm1(TWO_PI * rho0)


@dataclass(frozen=True)
class ConstantRho0:
    rho0: float = DEFAULT_RHO0

    def __call__(self, n_species):
        return np.full_like(np.asarray(n_species, dtype=float), self.rho0)


@dataclass(frozen=True)
class LinearRho0:
    """Ground-state energy growing with species count, rho0 = c0 * N_species.

    c0 stands for the per-species Casimir/wall contribution and is a model
    input; nothing pins its value.
    """
    c0: float

    def __call__(self, n_species):
        return self.c0 * np.asarray(n_species, dtype=float)


Rho0Model = Union[ConstantRho0, LinearRho0]


def species_xi_star(n_species, g_per_species: float, rho_gap: float, rho0_model: Rho0Model):
    """Xi maximum with g = N_species * g_per_species (vectorized over N_species)."""
    n = np.asarray(n_species, dtype=float)
    g = n * g_per_species
    return np.log1p(g * math.exp(-TWO_PI * rho_gap)) - TWO_PI * rho0_model(n)


def species_sweep(g_per_species: float, rho_gap: float, rho0_model: Rho0Model,
                  max_species: int, chunk: int = 1 << 20) -> Optional[int]:
    """Smallest species count <= max_species with Xi maximum >= 0, or None."""
    if g_per_species <= 0 or rho_gap < 0:
        raise DomainError("need g_per_species > 0 and rho_gap >= 0")
    start = 1
    while start <= max_species:
        stop = min(max_species, start + chunk - 1)
        n = np.arange(start, stop + 1)
        hits = np.flatnonzero(species_xi_star(n, g_per_species, rho_gap, rho0_model) >= 0.0)
        if hits.size:
            return int(n[hits[0]])
        start = stop + 1
    return None
