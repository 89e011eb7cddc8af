"""Command-line driver: run a scenario (optionally swept) and emit CSV/JSON rows.

    entropy-bound run CONFIG [--format csv|json] [--out PATH] [--set key=value ...]
    entropy-bound golden [--seed N] [--quick]

Config files are either JSON

    {"scenario": "doublewell", "parameters": {"amplitude": 0.98},
     "sweep": {"parameter": "amplitude", "start": 0.1, "stop": 0.9, "count": 9, "scale": "linear"},
     "seed": 1}

or flat ``key = value`` text under a single ``[scenario]`` header, where the
reserved keys are ``seed``, ``random_samples`` and
``sweep = <parameter> <start> <stop> <count> [linear|log]``.

Exit codes: 0 all rows satisfied, 1 usage/config error, 2 a bound violation,
3 no violation but some row errored or fell outside the model.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import conductor, counting, doublewell, twolevel
from .core import BoundModelError, BoundReport, DomainError, evaluate_bound

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_ERROR = 0, 1, 2, 3

STATUS_OK = "ok"
STATUS_VIOLATION = "violation"
STATUS_OUT_OF_MODEL = "out_of_model"
STATUS_ERROR = "error"

CSV_COLUMNS = [
    "scenario", "scenario_label", "swept_parameter", "swept_value", "entropy_nats",
    "bound_value", "margin", "satisfied", "status", "detail", "diagnostics",
]

_REQUIRED = object()

# parameter name -> default (_REQUIRED if mandatory)
SCENARIOS: Dict[str, Dict[str, Any]] = {
    "mass": {"n_particles": _REQUIRED, "compton_ratio": _REQUIRED,
             "momentum_fraction": 0.5, "statistics": counting.BOSON},
    "two_level": {"rho0": twolevel.DEFAULT_RHO0, "rho_gap": _REQUIRED,
                  "degeneracy": _REQUIRED, "y": _REQUIRED},
    "onion": {"n_shells": _REQUIRED, "outer_radius": _REQUIRED, "partition_thickness": _REQUIRED,
              "density": _REQUIRED, "charge_sq": _REQUIRED, "mass": _REQUIRED,
              "relaxation_time": 1.0, "mechanism": conductor.PLASMA},
    "coax": {"cable_length": _REQUIRED, "sphere_radius": _REQUIRED, "inner_radius": _REQUIRED,
             "outer_radius": _REQUIRED, "density": _REQUIRED, "charge_sq": _REQUIRED,
             "mass": _REQUIRED, "relaxation_time": 1.0, "mode": conductor.THREE_STATE,
             "mechanism": conductor.PLASMA},
    "doublewell": {"amplitude": _REQUIRED, "coupling": 1.0, "entropy_nats": math.log(2.0),
                   "tolerance": doublewell.DEFAULT_TOLERANCE},
    "multiwell": {"amplitude": _REQUIRED, "well_count": 3, "well_height": 0.25, "coupling": 1.0,
                  "tolerance": doublewell.DEFAULT_TOLERANCE},
    "species_sweep": {"g_per_species": _REQUIRED, "rho_gap": _REQUIRED, "max_species": _REQUIRED,
                      "rho0_model": "constant", "rho0": twolevel.DEFAULT_RHO0, "c0": 0.0},
}
INTEGER_PARAMS = {"n_particles", "n_shells", "max_species", "well_count"}
RANDOMIZABLE = {"mass", "onion", "coax"}


class ConfigError(ValueError):
    pass


@dataclass
class Sweep:
    parameter: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.count <= 0:
            return np.empty(0)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class ScenarioConfig:
    scenario: str
    parameters: Dict[str, Any]
    sweep: Optional[Sweep] = None
    seed: int = 0
    random_samples: int = 0

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {sorted(SCENARIOS)}")
        schema = SCENARIOS[self.scenario]
        unknown = set(self.parameters) - set(schema)
        if unknown:
            raise ConfigError(f"unknown keys for {self.scenario}: {sorted(unknown)}")
        swept = self.sweep.parameter if self.sweep else None
        if swept is not None:
            if swept not in schema:
                raise ConfigError(f"cannot sweep unknown parameter {swept!r}")
            if self.sweep.scale not in ("linear", "log"):
                raise ConfigError(f"sweep scale must be linear or log, not {self.sweep.scale!r}")
        if self.random_samples:
            if self.scenario not in RANDOMIZABLE:
                raise ConfigError(f"random_samples is only available for {sorted(RANDOMIZABLE)}")
            return
        missing = [k for k, v in schema.items() if v is _REQUIRED and k not in self.parameters and k != swept]
        if missing:
            raise ConfigError(f"missing keys for {self.scenario}: {missing}")


@dataclass
class ReportRow:
    scenario: str
    scenario_label: str
    swept_parameter: str = ""
    swept_value: Optional[float] = None
    entropy_nats: Optional[float] = None
    bound_value: Optional[float] = None
    margin: Optional[float] = None
    satisfied: Optional[bool] = None
    status: str = STATUS_OK
    detail: str = ""
    diagnostics: Dict[str, float] = field(default_factory=dict)


def parse_value(text: str) -> Any:
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _parse_sweep(obj: Any) -> Sweep:
    if isinstance(obj, str):
        parts = obj.split()
        if len(parts) not in (4, 5):
            raise ConfigError("sweep needs: <parameter> <start> <stop> <count> [linear|log]")
        obj = dict(zip(("parameter", "start", "stop", "count", "scale"), parts))
    try:
        return Sweep(str(obj["parameter"]), float(obj["start"]), float(obj["stop"]),
                     int(obj["count"]), str(obj.get("scale", "linear")))
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad sweep specification: {exc}") from None


def config_from_mapping(scenario: str, flat: Dict[str, Any]) -> ScenarioConfig:
    flat = dict(flat)
    sweep = flat.pop("sweep", None)
    seed = int(flat.pop("seed", 0))
    samples = int(flat.pop("random_samples", 0))
    return ScenarioConfig(scenario, flat, _parse_sweep(sweep) if sweep is not None else None, seed, samples)


def load_config(text: str) -> ScenarioConfig:
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from None
        extra = set(obj) - {"scenario", "parameters", "sweep", "seed", "random_samples"}
        if extra or "scenario" not in obj:
            raise ConfigError(f"JSON config needs 'scenario'; unexpected keys {sorted(extra)}")
        flat = dict(obj.get("parameters", {}))
        for key in ("sweep", "seed", "random_samples"):
            if key in obj:
                flat[key] = obj[key]
        return config_from_mapping(obj["scenario"], flat)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"invalid config: {exc}") from None
    if len(parser.sections()) != 1:
        raise ConfigError("config needs exactly one [scenario] header")
    name = parser.sections()[0]
    flat = {k: (v if k == "sweep" else parse_value(v)) for k, v in parser[name].items()}
    return config_from_mapping(name, flat)


def apply_overrides(config: ScenarioConfig, overrides: List[str]) -> ScenarioConfig:
    flat = dict(config.parameters)
    if config.sweep:
        s = config.sweep
        flat["sweep"] = f"{s.parameter} {s.start!r} {s.stop!r} {s.count} {s.scale}"
    flat["seed"] = config.seed
    flat["random_samples"] = config.random_samples
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key = key.strip()
        flat[key] = value.strip() if key == "sweep" else parse_value(value)
    return config_from_mapping(config.scenario, flat)


# -- scenario evaluation ---------------------------------------------------------------------

def _params(config: ScenarioConfig, overrides: Dict[str, Any]) -> Dict[str, Any]:
    schema = SCENARIOS[config.scenario]
    p = {k: v for k, v in schema.items() if v is not _REQUIRED}
    p.update(config.parameters)
    p.update(overrides)
    for k in INTEGER_PARAMS & set(p):
        p[k] = int(round(float(p[k])))
    return p


def _carrier(p) -> conductor.CarrierSpec:
    return conductor.CarrierSpec(float(p["density"]), float(p["charge_sq"]), float(p["mass"]),
                                 float(p["relaxation_time"]))


def _species_report(p) -> BoundReport:
    if p["rho0_model"] == "constant":
        model = twolevel.ConstantRho0(float(p["rho0"]))
    elif p["rho0_model"] == "linear_in_species":
        model = twolevel.LinearRho0(float(p["c0"]))
    else:
        raise DomainError(f"unknown rho0_model {p['rho0_model']!r}")
    n_max = p["max_species"]
    found = twolevel.species_sweep(float(p["g_per_species"]), float(p["rho_gap"]), model, n_max)
    n_eval = found if found is not None else max(n_max, 1)
    system = twolevel.TwoLevelSystem(
        rho0=float(model(n_eval)), rho_gap=float(p["rho_gap"]),
        degeneracy=n_eval * float(p["g_per_species"]), y=2 * math.pi * float(p["rho_gap"]))
    _, xi_star = twolevel.xi_maximum(system)
    return evaluate_bound(
        twolevel.canonical_entropy(system), twolevel.mean_energy_radius(system),
        label=f"species_sweep[{p['rho0_model']}]",
        diagnostics={"minimal_violating_species": math.nan if found is None else float(found),
                     "species_evaluated": float(n_eval), "xi_star": xi_star},
    )


def _multiwell_report(p) -> BoundReport:
    wells = p["well_count"]
    if wells == 2:
        potential = doublewell.DOUBLE_WELL
    elif wells == 3:
        potential = doublewell.three_well_potential(float(p["well_height"]))
    else:
        raise DomainError("multiwell scenario supports well_count 2 or 3")
    prof = doublewell.multiwell_profile(potential, float(p["amplitude"]), float(p["tolerance"]))
    factor = doublewell.multiwell_mixture_factor(prof.classical_factor, well_count=wells)
    return evaluate_bound(
        math.log(wells), factor / float(p["coupling"]), label=f"multiwell[{potential.label}]",
        diagnostics={"x0": prof.first_zero, "classical_factor": prof.classical_factor,
                     "mixture_factor": factor, "virial_residual": prof.virial_residual},
    )


def evaluate(scenario: str, p: Dict[str, Any]) -> BoundReport:
    if scenario == "mass":
        spec = counting.MassBoundSpec(p["n_particles"], float(p["compton_ratio"]), float(p["momentum_fraction"]))
        return counting.mass_bound_report(spec, p["statistics"])
    if scenario == "two_level":
        s = twolevel.TwoLevelSystem(float(p["rho0"]), float(p["rho_gap"]), float(p["degeneracy"]), float(p["y"]))
        r = evaluate_bound(twolevel.canonical_entropy(s), twolevel.mean_energy_radius(s), label="two_level")
        y_star, xi_star = twolevel.xi_maximum(s)
        r.diagnostics.update(xi=twolevel.xi(s), y_star=y_star, xi_star=xi_star,
                             critical_degeneracy=twolevel.critical_degeneracy(s.rho_gap, s.rho0))
        return r
    if scenario == "onion":
        scene = conductor.OnionScene(p["n_shells"], float(p["outer_radius"]),
                                     float(p["partition_thickness"]), _carrier(p))
        return conductor.onion_report(scene, p["mechanism"])
    if scenario == "coax":
        scene = conductor.CoaxScene(float(p["cable_length"]), float(p["sphere_radius"]),
                                    float(p["inner_radius"]), float(p["outer_radius"]), _carrier(p))
        return conductor.coax_report(scene, p["mode"], p["mechanism"])
    if scenario == "doublewell":
        return doublewell.doublewell_report(float(p["amplitude"]), float(p["coupling"]),
                                            float(p["entropy_nats"]), float(p["tolerance"]))
    if scenario == "multiwell":
        return _multiwell_report(p)
    if scenario == "species_sweep":
        return _species_report(p)
    raise ConfigError(f"unknown scenario {scenario!r}")


def _random_params(scenario: str, rng: np.random.Generator, p: Dict[str, Any]) -> Dict[str, Any]:
    if scenario == "mass":
        s = counting.random_mass_spec(rng)
        return {**p, "n_particles": s.n_particles, "compton_ratio": s.compton_ratio,
                "momentum_fraction": s.momentum_fraction}
    if scenario == "onion":
        s = conductor.random_onion_scene(rng, p["mechanism"])
        geometry = {"n_shells": s.n_shells, "outer_radius": s.outer_radius,
                    "partition_thickness": s.partition_thickness}
    else:
        s = conductor.random_coax_scene(rng, p["mechanism"])
        geometry = {"cable_length": s.cable_length, "sphere_radius": s.sphere_radius,
                    "inner_radius": s.inner_radius, "outer_radius": s.outer_radius}
    c = s.carrier
    return {**p, **geometry, "density": c.density, "charge_sq": c.charge_sq, "mass": c.mass,
            "relaxation_time": c.relaxation_time}


def _row(config: ScenarioConfig, p: Dict[str, Any], swept_value: Optional[float]) -> ReportRow:
    swept = config.sweep.parameter if config.sweep else ""
    try:
        r = evaluate(config.scenario, p)
    except BoundModelError as exc:
        return ReportRow(config.scenario, config.scenario, swept, swept_value, status=STATUS_ERROR,
                         detail=f"{type(exc).__name__}: {exc}")
    if r.satisfied:
        status = STATUS_OK
    elif r.diagnostics.get("strong_coupling"):
        # beyond the critical coupling the field theory is not trusted; no violation is claimed
        status = STATUS_OUT_OF_MODEL
    else:
        status = STATUS_VIOLATION
    return ReportRow(config.scenario, r.scenario_label, swept, swept_value, r.entropy_nats,
                     r.bound_value, r.margin, r.satisfied, status, "", dict(r.diagnostics))


def run_scenario(config: ScenarioConfig) -> List[ReportRow]:
    """One row per sweep point (or random sample); a single row otherwise."""
    config.validate()
    base = _params(config, {})
    if config.random_samples:
        rng = np.random.default_rng(config.seed)
        return [_row(config, _random_params(config.scenario, rng, base), None)
                for _ in range(config.random_samples)]
    if config.sweep is None:
        return [_row(config, base, None)]
    rows = []
    for value in config.sweep.values():
        point = _params(config, {config.sweep.parameter: float(value)})
        rows.append(_row(config, point, float(value)))
    return rows


# -- output ----------------------------------------------------------------------------------

def _num(v: Optional[float]) -> Optional[float]:
    if v is None or not math.isfinite(v):
        return None
    return float(f"{v:.12g}")


def _row_record(row: ReportRow) -> Dict[str, Any]:
    return {
        "scenario": row.scenario,
        "scenario_label": row.scenario_label,
        "swept_parameter": row.swept_parameter,
        "swept_value": _num(row.swept_value),
        "entropy_nats": _num(row.entropy_nats),
        "bound_value": _num(row.bound_value),
        "margin": _num(row.margin),
        "satisfied": row.satisfied,
        "status": row.status,
        "detail": row.detail,
        "diagnostics": {k: _num(v) for k, v in sorted(row.diagnostics.items())},
    }


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, dict):
        return ";".join(f"{k}={_csv_cell(x)}" for k, x in v.items())
    return str(v)


def render(rows: List[ReportRow], fmt: str = "csv") -> str:
    records = [_row_record(r) for r in rows]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt != "csv":
        raise ConfigError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_csv_cell(rec[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def emit(rows: List[ReportRow], fmt: str = "csv", destination: Optional[str] = None) -> None:
    """Write rows to ``destination`` (a path) or to standard output when None or '-'."""
    text = render(rows, fmt)
    if destination in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


def exit_code(rows: List[ReportRow]) -> int:
    statuses = {r.status for r in rows}
    if STATUS_VIOLATION in statuses:
        return EXIT_VIOLATION
    if statuses - {STATUS_OK}:
        return EXIT_ERROR
    return EXIT_OK


# -- entry point -----------------------------------------------------------------------------

def _cmd_run(args) -> int:
    try:
        config = load_config(Path(args.config).read_text(encoding="utf-8"))
        if args.set:
            config = apply_overrides(config, args.set)
        rows = run_scenario(config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit(rows, args.format, args.out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_ERROR
    code = exit_code(rows)
    if config.sweep is None and not config.random_samples and rows[0].status == STATUS_ERROR:
        print(f"error: {rows[0].detail}", file=sys.stderr)
    if code == EXIT_VIOLATION:
        print("BOUND VIOLATION", file=sys.stderr)
    return code


def _cmd_golden(args) -> int:
    from .golden import format_table, run_golden
    results = run_golden(seed=args.seed, scale=0.01 if args.quick else 1.0)
    print(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="entropy-bound", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate one scenario config")
    run.add_argument("config")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--out", default=None, help="output path (default: stdout)")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config key; repeatable")
    run.set_defaults(func=_cmd_run)
    golden = sub.add_parser("golden", help="run the regression of all reported values")
    golden.add_argument("--seed", type=int, default=None)
    golden.add_argument("--quick", action="store_true", help="1%% of the randomized samples")
    golden.set_defaults(func=_cmd_golden)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
