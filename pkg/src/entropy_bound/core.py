"""Bound functional, report type and error classes shared by every scenario.

All quantities are dimensionless: hbar = c = 1, so the product of energy and
radius E*R is a pure number and entropy is measured in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

TWO_PI = 2.0 * math.pi
INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BoundModelError(ValueError):
    """Base class for nonphysical or inapplicable scenario parameters."""


class DomainError(BoundModelError):
    pass


class ConfinementError(BoundModelError):
    """The structure does not trap the radiation, so the bound check does not apply."""


class PropagationError(ConfinementError):
    """Frequency at or above the plasma cutoff: the wave propagates."""


class NoZeroError(BoundModelError):
    """Shooting solution never reaches zero field."""


@dataclass(frozen=True)
class BoundReport:
    entropy_nats: float
    bound_value: float
    margin: float
    satisfied: bool
    scenario_label: str
    diagnostics: Dict[str, float] = field(default_factory=dict)


def evaluate_bound(entropy_nats: float, energy_radius_product: float, label: str = "",
                   diagnostics: Dict[str, float] | None = None) -> BoundReport:
    """Check S <= 2*pi*E*R for one scenario.

    ``energy_radius_product`` is the dimensionless E*R (natural units).
    """
    if not entropy_nats >= 0.0:
        raise DomainError(f"entropy must be nonnegative, got {entropy_nats!r}")
    if not energy_radius_product >= 0.0:
        raise DomainError(f"E*R must be nonnegative, got {energy_radius_product!r}")
    bound_value = TWO_PI * energy_radius_product
    margin = bound_value - entropy_nats
    return BoundReport(
        entropy_nats=float(entropy_nats),
        bound_value=float(bound_value),
        margin=float(margin),
        satisfied=bool(margin >= 0.0),
        scenario_label=label,
        diagnostics=dict(diagnostics or {}),
    )


def golden_section_max(f: Callable[[float], float], a: float, b: float,
                       xtol: float = 1e-6, max_iter: int = 500) -> Tuple[float, float]:
    """Maximize a unimodal ``f`` on [a, b]; returns (x_best, f(x_best)).

    Stops once the bracket is narrower than ``xtol``.
    """
    if b < a:
        a, b = b, a
    c = b - INV_GOLDEN * (b - a)
    d = a + INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)
