"""Regression of every reported number and claimed inequality against golden data.

Expected values and tolerances live in ``golden/reported_values.json``; this
module only knows how to measure each quantity.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Dict, List, Optional

import numpy as np

from . import conductor, counting, doublewell, twolevel
from .core import NoZeroError


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    expected: str


def load_golden() -> dict:
    text = resources.files(__package__).joinpath("golden", "reported_values.json").read_text("utf-8")
    return json.loads(text)


def _close(name, measured, spec) -> CheckResult:
    ok = abs(measured - spec["value"]) <= spec["tol"]
    return CheckResult(name, ok, f"{measured:.6g}", f"{spec['value']:.6g} +- {spec['tol']:.3g}")


def _below(name, measured, spec) -> CheckResult:
    return CheckResult(name, measured < spec["tol"], f"{measured:.3g}", f"< {spec['tol']:.3g}")


def check_ratio(g, rng):
    nbar, f = counting.maximize_ratio()
    return [_close("ratio_peak_nbar", nbar, g["ratio_peak_nbar"]),
            _close("ratio_peak_value", f, g["ratio_peak_value"])]


def check_critical_degeneracy(g, rng):
    return [_close("critical_degeneracy", twolevel.critical_degeneracy(0.0, 2.0), g["critical_degeneracy"])]


def random_two_level(rng) -> twolevel.TwoLevelSystem:
    return twolevel.TwoLevelSystem(
        rho0=float(rng.uniform(0.05, 5.0)),
        rho_gap=float(rng.uniform(0.0, 1.0)),
        degeneracy=float(np.floor(10.0 ** rng.uniform(0.0, 4.0))),
        y=float(10.0 ** rng.uniform(-3.0, 1.5)),
    )


def check_xi(g, rng):
    n = g["xi_argmax_agreement"]["samples"]
    worst_arg = worst_id = 0.0
    for _ in range(n):
        s = random_two_level(rng)
        y_star, _ = twolevel.xi_maximum(s)
        y_num, _ = twolevel.numerical_xi_maximum(s)
        worst_arg = max(worst_arg, abs(y_num - y_star))
        lhs = twolevel.xi(s)
        rhs = twolevel.canonical_entropy(s) - 2 * math.pi * twolevel.mean_energy_radius(s)
        worst_id = max(worst_id, abs(lhs - rhs) / abs(lhs))
    return [_below("xi_argmax_agreement", worst_arg, g["xi_argmax_agreement"]),
            _below("xi_identity_relative", worst_id, g["xi_identity_relative"])]


def check_profiles(g, rng):
    out = []
    for key in ("small_amplitude", "098"):
        spec_x, spec_f = g[f"x0_{key}"], g[f"F_{key}"]
        prof = doublewell.shoot_profile(spec_x["amplitude"])
        out.append(_close(f"x0_{key}", prof.first_zero, spec_x))
        out.append(_close(f"F_{key}", prof.energy_factor, spec_f))
    spec = g["exponent_098"]
    out.append(_close("exponent_098", doublewell.scaling_exponent(spec["amplitude"]), spec))
    out.append(_close("bound_coefficient", doublewell.reference_bound_coefficient(), g["bound_coefficient"]))
    out.append(_close("critical_coupling_ln2", doublewell.critical_coupling(math.log(2.0)),
                      g["critical_coupling_ln2"]))
    return out


def check_virial_grid(g, rng):
    spec = g["virial_grid"]
    lo, hi, count = spec["grid"]
    profiles = [doublewell.shoot_profile(a) for a in np.linspace(lo, hi, int(count))]
    worst = max(p.virial_residual for p in profiles)
    x0 = np.array([p.first_zero for p in profiles])
    F = np.array([p.energy_factor for p in profiles])
    mono = bool(np.all(np.diff(x0) > 0) and np.all(np.diff(F) > 0))
    return [_below("virial_grid", worst, spec),
            CheckResult("x0_F_monotone_grid", mono, str(mono), "True")]


def check_onion(g, rng):
    spec = g["onion_sweep"]
    out = []
    for mech, floor_key in ((conductor.PLASMA, "plasma_floor"), (conductor.SKIN, "skin_floor")):
        bad = 0
        for _ in range(spec["samples"]):
            scene = conductor.random_onion_scene(rng, mech)
            r = conductor.onion_report(scene, mech)
            if not (r.satisfied and r.bound_value >= spec[floor_key] * scene.n_shells ** 4):
                bad += 1
        out.append(CheckResult(f"onion_sweep_{mech}", bad == 0, f"{bad} failures",
                               f"0 of {spec['samples']}"))
    return out


def check_coax(g, rng):
    spec = g["coax_sweep"]
    bad = {conductor.THREE_STATE: 0, conductor.MULTIMODE: 0}
    for _ in range(spec["samples"]):
        scene = conductor.random_coax_scene(rng)
        for mode in bad:
            if not conductor.coax_report(scene, mode).satisfied:
                bad[mode] += 1
    return [CheckResult(f"coax_sweep_{m}", n == 0, f"{n} failures", f"0 of {spec['samples']}")
            for m, n in bad.items()]


def check_mass(g, rng):
    spec = g["mass_sweep"]
    bad = sum(not counting.mass_bound_report(counting.random_mass_spec(rng)).satisfied
              for _ in range(spec["samples"]))
    out = [CheckResult("mass_sweep", bad == 0, f"{bad} failures", f"0 of {spec['samples']}")]
    top = spec["grid_max"]
    coeff = spec["chain_coefficient"] * (1.0 + spec["chain_slack"])
    chain_bad = stirling_bad = 0
    for n in range(1, top + 1):
        for omega in range(1, top + 1):
            exact = counting.exact_log_count(counting.GasSpec(n, omega))
            if exact > coeff * n ** (2 / 3) * omega ** (1 / 3):
                chain_bad += 1
            if abs(counting.stirling_entropy(n, omega) - exact) > math.log(n) + math.log(omega) + 2:
                stirling_bad += 1
    out.append(CheckResult("count_chain_grid", chain_bad == 0, f"{chain_bad} failures", f"0 of {top * top}"))
    out.append(CheckResult("stirling_gap_grid", stirling_bad == 0, f"{stirling_bad} failures", f"0 of {top * top}"))
    return out


def check_three_well(g, rng):
    spec = g["three_well_factor"]
    lo, hi = spec["value"] / spec["factor"], spec["value"] * spec["factor"]
    expected = f"in [{lo:g}, {hi:g}]"
    try:
        prof = doublewell.multiwell_profile(doublewell.three_well_potential(), spec["amplitude"])
    except NoZeroError as exc:
        return [CheckResult("three_well_factor", False, f"no profile ({exc})", expected)]
    val = prof.classical_factor
    return [CheckResult("three_well_factor", lo <= val <= hi, f"{val:.6g}", expected)]


CHECKS: List[Callable] = [
    check_ratio, check_critical_degeneracy, check_xi, check_profiles, check_virial_grid,
    check_onion, check_coax, check_mass, check_three_well,
]


def run_golden(seed: Optional[int] = None, scale: float = 1.0) -> List[CheckResult]:
    """Run every check; ``scale`` shrinks the randomized sample counts (for quick runs)."""
    data = load_golden()
    g: Dict[str, dict] = json.loads(json.dumps(data["values"]))
    if scale != 1.0:
        for entry in g.values():
            if "samples" in entry:
                entry["samples"] = max(1, int(entry["samples"] * scale))
    rng = np.random.default_rng(data["seed"] if seed is None else seed)
    results: List[CheckResult] = []
    for check in CHECKS:
        results.extend(check(g, rng))
    return results


def format_table(results: List[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  status  measured / expected"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.measured} / {r.expected}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines)
