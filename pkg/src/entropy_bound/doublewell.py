"""Spherically symmetric scalar-field profiles in a box, by shooting.

The dimensionless static equation is

    Phi'' + (2/x) Phi' + drive(Phi) = 0,   Phi'(0) = 0,   Phi(0) = a,

with drive(Phi) = -V'(Phi); the double well has drive = Phi (1 - Phi^2).  The
box wall sits at the first zero x0 of Phi.  Besides the profile itself the
integrator carries the integrals the energy needs as extra state variables:

    quartic   int (1 - Phi^4) x^2
    gradient  int Phi'^2 x^2
    drive     int Phi drive(Phi) x^2     (equals gradient on a true solution)
    potential int V(Phi) x^2

The energy factor F = x0 * quartic gives eps_c * lambda * R = F / 4, and
profiles are lambda-free: the coupling only enters as an overall 1/lambda.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, TextIO, Tuple

import numpy as np
from scipy.integrate import quad, simpson, solve_ivp

from .core import TWO_PI, BoundReport, DomainError, NoZeroError, evaluate_bound

X_START = 1e-4
DEFAULT_TOLERANCE = 1e-10
DEFAULT_X_MAX = 1e3
DEFAULT_SAMPLES = 401
# stands in for Phi(0) -> 0 wherever the small-amplitude limit is needed
REFERENCE_AMPLITUDE = 1e-3
# eps_c ~ x0^4 / R for small amplitudes; F -> x0^(n+1)/3 defines the exponent n
SMALL_AMPLITUDE_EXPONENT = 3.0
STRONG_COUPLING = "strong coupling - theory trivial"


@dataclass(frozen=True)
class PotentialSpec:
    derivative_fn: Callable[[float], float]
    well_count: int
    label: str
    # V(Phi), zero at the well bottoms; only needed for classical energies
    potential_fn: Optional[Callable[[float], float]] = None


def _dw_drive(p):
    return p * (1.0 - p * p)


def _dw_potential(p):
    return 0.25 * (1.0 - p * p) ** 2


DOUBLE_WELL = PotentialSpec(_dw_drive, 2, "double-well", _dw_potential)


def three_well_potential(height: float = 0.25) -> PotentialSpec:
    """Sextic V = height * Phi^2 (1 - Phi^2)^2: equal-depth minima at -1, 0, 1.

    The default height gives the side wells the double well's curvature, V''(1) = 2.
    """
    def drive(p):
        return -2.0 * height * p * (1.0 - p * p) * (1.0 - 3.0 * p * p)

    def potential(p):
        return height * p * p * (1.0 - p * p) ** 2

    return PotentialSpec(drive, 3, "three-well", potential)


@dataclass(frozen=True)
class WellProfile:
    amplitude: float
    samples: np.ndarray  # columns x, phi, dphi
    first_zero: float
    quartic_integral: float
    energy_factor: float
    virial_residual: float
    gradient_integral: float = math.nan
    drive_integral: float = math.nan
    potential_integral: float = math.nan

    @property
    def x(self):
        return self.samples[:, 0]

    @property
    def phi(self):
        return self.samples[:, 1]

    @property
    def dphi(self):
        return self.samples[:, 2]

    @property
    def classical_factor(self) -> float:
        """eps_c * lambda * R = x0 * int [Phi'^2/2 + V] x^2 dx."""
        return self.first_zero * (0.5 * self.gradient_integral + self.potential_integral)


def _virial(gradient: float, drive: float) -> float:
    return abs(gradient - drive) / gradient


def _integrate(potential: PotentialSpec, amplitude: float, tolerance: float, x_max: float,
               n_samples: int, check_attraction: bool = True) -> WellProfile:
    drive = potential.derivative_fn
    pot = potential.potential_fn or (lambda p: math.nan)
    a = float(amplitude)
    f0 = drive(a)
    if f0 <= 0.0:
        raise NoZeroError(f"Phi(0)={a}: the field does not start decreasing, so it never vanishes")
    if check_attraction:
        # 0.5 Phi'^2 + int_0^Phi drive never increases, so a zero needs int_0^a drive > 0
        reach = quad(drive, 0.0, a, epsabs=1e-14)[0]
        if reach <= 0.0:
            raise NoZeroError(f"Phi(0)={a} is outside the attraction range of {potential.label}")

    xs = X_START
    y0 = [
        a - f0 * xs ** 2 / 6.0,
        -f0 * xs / 3.0,
        (1.0 - a ** 4) * xs ** 3 / 3.0,
        f0 ** 2 * xs ** 5 / 45.0,
        a * f0 * xs ** 3 / 3.0,
        pot(a) * xs ** 3 / 3.0,
    ]

    def rhs(x, y):
        p, dp = y[0], y[1]
        f = drive(p)
        x2 = x * x
        return [dp, -2.0 * dp / x - f, (1.0 - p ** 4) * x2, dp * dp * x2, p * f * x2, pot(p) * x2]

    def hits_zero(x, y):
        return y[0]
    hits_zero.terminal = True
    hits_zero.direction = -1

    def turns_back(x, y):
        return y[1]
    turns_back.terminal = True
    turns_back.direction = 1

    sol = solve_ivp(rhs, (xs, x_max), y0, method="DOP853", rtol=tolerance,
                    atol=tolerance * 1e-3, events=(hits_zero, turns_back), dense_output=True)
    if not sol.success:
        raise NoZeroError(f"integration failed: {sol.message}")
    if sol.t_events[0].size == 0:
        where = "turns back" if sol.t_events[1].size else f"stays positive up to x={x_max:g}"
        raise NoZeroError(f"Phi(0)={a}: profile {where} before reaching zero")

    x0 = float(sol.t_events[0][0])
    end = sol.y_events[0][0]
    quartic, gradient, drive_int, pot_int = (float(v) for v in end[2:6])

    grid = np.linspace(0.0, x0, n_samples)
    inner = grid < xs
    states = sol.sol(np.where(inner, xs, grid))
    phi = np.where(inner, a - f0 * grid ** 2 / 6.0, states[0])
    dphi = np.where(inner, -f0 * grid / 3.0, states[1])
    phi[-1] = 0.0
    samples = np.column_stack([grid, phi, dphi])

    return WellProfile(
        amplitude=a,
        samples=samples,
        first_zero=x0,
        quartic_integral=quartic,
        energy_factor=x0 * quartic,
        virial_residual=_virial(gradient, drive_int),
        gradient_integral=gradient,
        drive_integral=drive_int,
        potential_integral=pot_int,
    )


def shoot_profile(amplitude: float, tolerance: float = DEFAULT_TOLERANCE,
                  x_max: float = DEFAULT_X_MAX, n_samples: int = DEFAULT_SAMPLES) -> WellProfile:
    """Double-well profile with Phi(0) = amplitude, integrated to its first zero."""
    if not amplitude > 0:
        raise DomainError(f"amplitude must be positive, got {amplitude!r}")
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    return _integrate(DOUBLE_WELL, amplitude, tolerance, x_max, n_samples)


def multiwell_profile(potential: PotentialSpec, amplitude: float,
                      tolerance: float = DEFAULT_TOLERANCE, x_max: float = DEFAULT_X_MAX,
                      n_samples: int = DEFAULT_SAMPLES) -> WellProfile:
    """Same shooting machinery for an arbitrary drive term."""
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    return _integrate(potential, amplitude, tolerance, x_max, n_samples)


def profile_from_samples(x, phi, dphi, potential: PotentialSpec = DOUBLE_WELL) -> WellProfile:
    """Wrap an arbitrary sampled curve (not necessarily a solution) as a WellProfile.

    Integrals come from Simpson's rule on the samples; the last sample is taken
    as the first zero.
    """
    x, phi, dphi = (np.asarray(v, dtype=float) for v in (x, phi, dphi))
    drive = np.vectorize(potential.derivative_fn)(phi)
    x2 = x * x
    quartic = float(simpson((1.0 - phi ** 4) * x2, x=x))
    gradient = float(simpson(dphi ** 2 * x2, x=x))
    drive_int = float(simpson(phi * drive * x2, x=x))
    pot_int = math.nan
    if potential.potential_fn is not None:
        pot_int = float(simpson(np.vectorize(potential.potential_fn)(phi) * x2, x=x))
    x0 = float(x[-1])
    return WellProfile(float(phi[0]), np.column_stack([x, phi, dphi]), x0, quartic, x0 * quartic,
                       _virial(gradient, drive_int), gradient, drive_int, pot_int)


def virial_check(profile: WellProfile) -> float:
    """|int Phi'^2 x^2 - int Phi drive(Phi) x^2| / int Phi'^2 x^2."""
    return _virial(profile.gradient_integral, profile.drive_integral)


def energy_form_residual(profile: WellProfile) -> float:
    """Relative gap between the two double-well energy forms.

    Direct form  int [Phi'^2/2 + (1 - Phi^2)^2/4] x^2
    Virial form  int (1 - Phi^4)/4 x^2
    These agree only on solutions; the gap tracks the virial residual.
    """
    direct = 0.5 * profile.gradient_integral + profile.potential_integral
    virial = 0.25 * profile.quartic_integral
    return abs(direct - virial) / virial


def energy_factor(amplitude: float, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """F(a) = x0 * int_0^x0 (1 - Phi^4) x^2 dx."""
    return _cached_profile(amplitude, tolerance).energy_factor


@lru_cache(maxsize=256)
def _cached_profile(amplitude: float, tolerance: float) -> WellProfile:
    return shoot_profile(amplitude, tolerance)


def scaling_exponent(amplitude: float, step: float = 0.005, method: str = "effective",
                     tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Exponent n in eps_c ~ R^n along the family of profiles (fixed lambda, phi_m).

    ``effective``: the power law F = x0^(n+1)/3 anchored at the small-amplitude
    form F -> x0^4/3, i.e. n = ln(3F)/ln(x0) - 1.  Exactly 3 as a -> 0.
    ``local``: centered log-derivative d ln(F/x0) / d ln x0 across a +- step.
    """
    if not 0.0 < amplitude < 1.0:
        raise DomainError("amplitude must lie in (0, 1)")
    if method == "effective":
        prof = _cached_profile(amplitude, tolerance)
        return math.log(3.0 * prof.energy_factor) / math.log(prof.first_zero) - 1.0
    if method == "local":
        if not (step > 0 and amplitude - step > 0 and amplitude + step < 1):
            raise DomainError(f"step {step} takes the amplitude outside (0, 1)")
        lo = _cached_profile(amplitude - step, tolerance)
        hi = _cached_profile(amplitude + step, tolerance)
        d_energy = math.log(hi.energy_factor / hi.first_zero) - math.log(lo.energy_factor / lo.first_zero)
        return d_energy / math.log(hi.first_zero / lo.first_zero)
    raise DomainError(f"unknown method {method!r}")


def wall_energy_floor(energy_factor: float, exponent: float) -> Tuple[float, float]:
    """Wall requirements for eps_c ~ R^n.

    Returns (suction coefficient, total energy factor): the field pulls on the
    wall with p = (n/4pi) eps_c/R^3, the dominant energy condition then needs
    eps_w >= (n/2) eps_c, so E >= (1 + n/2) eps_c.
    """
    if not exponent > 0:
        raise DomainError("exponent must be positive")
    return exponent / (4.0 * math.pi), (1.0 + 0.5 * exponent) * energy_factor


def bound_coefficient(amplitude: float, exponent: Optional[float] = None,
                      tolerance: float = DEFAULT_TOLERANCE) -> float:
    """C(a) with 2 pi E R >= C(a)/lambda, E = eps_c + eps_w."""
    F = energy_factor(amplitude, tolerance)
    n = scaling_exponent(amplitude, tolerance=tolerance) if exponent is None else exponent
    _, total = wall_energy_floor(F, n)
    return TWO_PI * total / 4.0


def reference_bound_coefficient(tolerance: float = DEFAULT_TOLERANCE) -> float:
    """C in the small-amplitude limit, the smallest over all physical amplitudes."""
    return bound_coefficient(REFERENCE_AMPLITUDE, SMALL_AMPLITUDE_EXPONENT, tolerance)


def critical_coupling(entropy_nats: float, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """lambda above which the bound could formally fail for entropy S."""
    if not entropy_nats > 0:
        raise DomainError("entropy must be positive")
    return reference_bound_coefficient(tolerance) / entropy_nats


def regime(coupling: float, entropy_nats: float = math.log(2.0)) -> str:
    return STRONG_COUPLING if coupling > critical_coupling(entropy_nats) else "weak coupling"


def doublewell_report(amplitude: float, coupling: float = 1.0, entropy_nats: float = math.log(2.0),
                      tolerance: float = DEFAULT_TOLERANCE) -> BoundReport:
    """Equal mixture of the two lowest states against 2 pi E R >= C(a)/lambda.

    Above the critical coupling the report is labelled strong coupling; the
    model is not trusted there, so a negative margin is not a violation.
    """
    if not coupling > 0:
        raise DomainError("coupling must be positive")
    prof = _cached_profile(amplitude, tolerance)
    n = scaling_exponent(amplitude, tolerance=tolerance)
    coeff = bound_coefficient(amplitude, tolerance=tolerance)
    lam_crit = critical_coupling(entropy_nats, tolerance)
    strong = coupling > lam_crit
    label = "doublewell" + (f"[{STRONG_COUPLING}]" if strong else "")
    return evaluate_bound(
        entropy_nats,
        coeff / (TWO_PI * coupling),
        label=label,
        diagnostics={
            "x0": prof.first_zero,
            "F": prof.energy_factor,
            "exponent": n,
            "bound_coefficient": coeff,
            "critical_coupling": lam_crit,
            "strong_coupling": float(strong),
            "virial_residual": prof.virial_residual,
        },
    )


def multiwell_mixture_factor(classical_factor: float, exponent: float = SMALL_AMPLITUDE_EXPONENT,
                             well_count: int = 3) -> float:
    """Mean energy factor (in units of 1/(lambda R)) of the equal mixture of classical states.

    Odd well counts have one zero-energy state (Phi = 0) plus well_count - 1
    excited ones; each excited state carries its wall, so a factor (1 + n/2).
    """
    if well_count < 2:
        raise DomainError("need at least two wells")
    excited = well_count - 1 if well_count % 2 else well_count
    return excited / well_count * (1.0 + 0.5 * exponent) * classical_factor


def profile_to_csv(profile: WellProfile, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["x", "phi", "dphi"])
    for x, p, dp in profile.samples:
        writer.writerow([f"{x:.12g}", f"{p:.12g}", f"{dp:.12g}"])
