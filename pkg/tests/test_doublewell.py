import io
import math

import numpy as np
import pytest

from entropy_bound.core import DomainError, NoZeroError
from entropy_bound.doublewell import (
    DOUBLE_WELL, STRONG_COUPLING, _integrate, bound_coefficient, critical_coupling, doublewell_report,
    energy_factor, energy_form_residual, multiwell_mixture_factor, multiwell_profile,
    profile_from_samples, profile_to_csv, reference_bound_coefficient, regime, scaling_exponent,
    shoot_profile, three_well_potential, virial_check, wall_energy_floor,
)

PI = math.pi


def rk4_first_zero(a, h=5e-4, x_start=1e-3):
    """Fixed-step RK4 oracle for Phi'' + 2Phi'/x + Phi(1 - Phi^2) = 0.

    Carries I = int (1 - Phi^4) x^2 dx as a third state; the zero is located by
    linear interpolation between the bracketing steps.
    """
    f0 = a * (1 - a * a)
    x = x_start
    y = np.array([a - f0 * x * x / 6, -f0 * x / 3, (1 - a ** 4) * x ** 3 / 3])

    def rhs(x, y):
        p, dp, _ = y
        return np.array([dp, -2 * dp / x - p * (1 - p * p), (1 - p ** 4) * x * x])

    while True:
        k1 = rhs(x, y)
        k2 = rhs(x + h / 2, y + h / 2 * k1)
        k3 = rhs(x + h / 2, y + h / 2 * k2)
        k4 = rhs(x + h, y + h * k3)
        nxt = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if nxt[0] <= 0:
            t = y[0] / (y[0] - nxt[0])
            x0 = x + t * h
            quartic = y[2] + t * (nxt[2] - y[2])
            return x0, x0 * quartic
        x, y = x + h, nxt


def test_small_amplitude_matches_linearized_solution():
    p = shoot_profile(1e-3)
    assert p.first_zero == pytest.approx(PI, abs=1e-3)
    assert p.energy_factor == pytest.approx(PI ** 4 / 3, abs=0.05)
    # linearized profile a sin(x)/x
    x = p.x[1:]
    assert np.max(np.abs(p.phi[1:] - 1e-3 * np.sin(x) / x)) < 1e-8


def test_reported_values_at_098():
    p = shoot_profile(0.98)
    assert p.first_zero == pytest.approx(5.45, abs=0.01)
    assert p.energy_factor == pytest.approx(232.23, abs=0.5)


@pytest.mark.parametrize("a", [0.2, 0.5, 0.9])
def test_against_independent_rk4(a):
    x0, F = rk4_first_zero(a)
    p = shoot_profile(a)
    assert p.first_zero == pytest.approx(x0, abs=1e-6)
    assert p.energy_factor == pytest.approx(F, rel=1e-5)


def test_amplitude_errors():
    with pytest.raises(NoZeroError):
        shoot_profile(1.0)
    with pytest.raises(NoZeroError):
        shoot_profile(1.2)
    with pytest.raises(DomainError):
        shoot_profile(0.0)
    with pytest.raises(DomainError):
        shoot_profile(-0.3)
    with pytest.raises(DomainError):
        shoot_profile(0.5, tolerance=0)


@pytest.mark.parametrize("a", [0.01, 0.3, 0.5, 0.8, 0.98, 0.99])
def test_profile_invariants(a):
    p = shoot_profile(a)
    assert np.all(np.diff(p.phi) < 0)
    assert p.phi[0] == a and p.dphi[0] == 0.0
    assert np.all(p.phi[:-1] > 0) and p.phi[-1] == 0.0
    assert p.energy_factor > 0
    assert p.virial_residual < 1e-6
    assert energy_form_residual(p) < 1e-6
    assert virial_check(p) == p.virial_residual


def test_dense_samples_match_refined_zero():
    p = shoot_profile(0.7)
    assert p.x[-1] == p.first_zero
    # slope just before the zero is negative and finite
    assert p.dphi[-1] < 0


def test_monotone_grid():
    grid = np.linspace(0.01, 0.99, 50)
    profiles = [shoot_profile(a) for a in grid]
    x0 = np.array([p.first_zero for p in profiles])
    F = np.array([p.energy_factor for p in profiles])
    assert np.all(np.diff(x0) > 0) and np.all(np.diff(F) > 0)
    assert max(p.virial_residual for p in profiles) < 1e-6
    assert shoot_profile(0.99).first_zero > shoot_profile(0.98).first_zero


def test_fake_profile_has_large_residual():
    x0 = PI
    x = np.linspace(0.0, x0, 2001)
    k = PI / (2 * x0)
    fake = profile_from_samples(x, np.cos(k * x), -k * np.sin(k * x))
    assert 0.05 < virial_check(fake) < 1.0


def test_sampled_solution_passes_its_own_check():
    p = shoot_profile(0.5, n_samples=4001)
    rebuilt = profile_from_samples(p.x, p.phi, p.dphi)
    assert rebuilt.virial_residual < 1e-6
    assert rebuilt.energy_factor == pytest.approx(p.energy_factor, rel=1e-8)


def test_residual_shrinks_with_tolerance():
    res = [shoot_profile(0.5, tol).virial_residual for tol in (1e-5, 1e-6, 1e-7, 1e-8, 1e-9)]
    assert all(b <= a for a, b in zip(res, res[1:]))


@pytest.mark.parametrize("tol", [1e-8, 1e-10])
def test_halving_tolerance_moves_zero_little(tol):
    for a in (0.3, 0.95):
        diff = abs(shoot_profile(a, tol).first_zero - shoot_profile(a, tol / 2).first_zero)
        assert diff < 10 * tol


def test_energy_factor_limit_and_value():
    assert energy_factor(1e-3) == pytest.approx(PI ** 4 / 3, abs=0.05)
    assert energy_factor(0.98) == pytest.approx(232.23, abs=0.5)


def test_scaling_exponent_values():
    assert scaling_exponent(0.98) == pytest.approx(2.86, abs=0.05)
    assert scaling_exponent(1e-3) == pytest.approx(3.0, abs=1e-3)
    assert 2.8 < scaling_exponent(0.5, 0.01) < 3.05
    assert 2.8 < scaling_exponent(0.5, 0.01, method="local") < 3.05


def test_scaling_exponent_smooth():
    for a in np.arange(0.2, 0.81, 0.05):
        for method in ("effective", "local"):
            n = scaling_exponent(a, 0.01, method)
            assert abs(n - scaling_exponent(a + 0.01, 0.01, method)) < 0.1
            assert abs(n - scaling_exponent(a - 0.01, 0.01, method)) < 0.1


def test_scaling_exponent_errors():
    with pytest.raises(DomainError):
        scaling_exponent(0.998, 0.005, method="local")
    with pytest.raises(DomainError):
        scaling_exponent(1.0)
    with pytest.raises(DomainError):
        scaling_exponent(0.5, method="bogus")


def test_wall_energy_floor():
    assert wall_energy_floor(32.47, 3.0)[1] == pytest.approx(2.5 * 32.47)
    assert wall_energy_floor(232.23, 2.86)[1] == pytest.approx(564.3, abs=0.1)
    assert wall_energy_floor(232.23, 1e-12)[1] == pytest.approx(232.23)
    assert wall_energy_floor(10.0, 3.0)[0] == pytest.approx(3 / (4 * PI))
    with pytest.raises(DomainError):
        wall_energy_floor(10.0, 0.0)


def test_bound_coefficients():
    ref = reference_bound_coefficient()
    assert ref == pytest.approx(127.5, abs=0.3)
    assert ref == pytest.approx(5 * PI / 4 * energy_factor(1e-3), rel=1e-14)
    assert bound_coefficient(0.01) == pytest.approx(127.5, abs=0.3)
    assert bound_coefficient(0.98) == pytest.approx(886, abs=2)
    grid = np.linspace(0.01, 0.98, 25)
    values = [bound_coefficient(a) for a in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_critical_coupling():
    assert critical_coupling(math.log(2)) == pytest.approx(183.95, abs=1)
    assert critical_coupling(math.log(2)) == reference_bound_coefficient() / math.log(2)
    assert critical_coupling(math.log(3)) == pytest.approx(116.1, abs=0.3)
    assert 0 < critical_coupling(1e9) < 1e-6
    with pytest.raises(DomainError):
        critical_coupling(0.0)


def test_regime_and_report():
    assert regime(10.0) != STRONG_COUPLING
    assert regime(1e3) == STRONG_COUPLING
    weak = doublewell_report(0.98, coupling=1.0)
    assert weak.satisfied and weak.diagnostics["strong_coupling"] == 0.0
    assert weak.diagnostics["x0"] == pytest.approx(5.45, abs=0.01)
    strong = doublewell_report(0.5, coupling=1e4)
    assert strong.diagnostics["strong_coupling"] == 1.0
    assert STRONG_COUPLING in strong.scenario_label
    assert not strong.satisfied


def test_multiwell_reproduces_double_well_exactly():
    a = shoot_profile(0.5)
    b = multiwell_profile(DOUBLE_WELL, 0.5)
    assert a.first_zero == b.first_zero and a.energy_factor == b.energy_factor
    assert np.array_equal(a.samples, b.samples)


def test_double_well_classical_factor_matches_energy_factor():
    p = shoot_profile(0.5)
    assert p.classical_factor == pytest.approx(p.energy_factor / 4, rel=1e-6)


def test_three_well_potential_shape():
    spec = three_well_potential()
    assert spec.well_count == 3
    for m in (-1.0, 0.0, 1.0):
        assert spec.potential_fn(m) == 0.0 and spec.derivative_fn(m) == 0.0
    # drive is -V'
    for p in (0.2, 0.5, 0.8, 1.3):
        h = 1e-6
        dv = (spec.potential_fn(p + h) - spec.potential_fn(p - h)) / (2 * h)
        assert spec.derivative_fn(p) == pytest.approx(-dv, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("a", [0.6, 0.8, 0.9, 0.99])
def test_three_well_side_start_never_reaches_zero(a):
    # 0.5 Phi'^2 - V(Phi) falls along x, and V >= 0 vanishes only at the minima
    spec = three_well_potential()
    with pytest.raises(NoZeroError):
        multiwell_profile(spec, a)
    with pytest.raises(NoZeroError):
        _integrate(spec, a, 1e-10, 1e3, 11, check_attraction=False)


def test_mixture_factor():
    assert multiwell_mixture_factor(8.117) == pytest.approx(13.53, abs=0.01)
    assert multiwell_mixture_factor(1.0, 3.0, 2) == pytest.approx(2.5)
    with pytest.raises(DomainError):
        multiwell_mixture_factor(1.0, 3.0, 1)


def test_profile_csv_export():
    p = shoot_profile(0.5, n_samples=11)
    buf = io.StringIO()
    profile_to_csv(p, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,phi,dphi"
    assert len(lines) == 12
    x, phi, _ = (float(v) for v in lines[1].split(","))
    assert x == 0.0 and phi == 0.5
    assert float(lines[-1].split(",")[0]) == pytest.approx(p.first_zero, rel=1e-11)
