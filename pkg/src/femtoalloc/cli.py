"""Experiment configuration and command-line driver.

Configuration files are INI-style with four optional sections::

    [system]
    cell_radius_m = 50
    fap_density_per_m2 = 0.001
    n_topologies = 20

    [propagation]
    shadow_sigma_db = 8

    [noise]
    noise_figure_db = 9

    [experiment]
    label = low-density
    demands_bps = 2e6, 4e6, 8e6
    out = results/low.csv
    trial_json = results/low_trial.json

Missing keys keep their defaults; unknown keys are rejected.

Usage::

    femtoalloc validate --config exp.ini
    femtoalloc run --config exp.ini --out curve.csv --jobs 4
    femtoalloc trial --config exp.ini --seed 7 --out trial.json
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .channel import NoiseParams, PropagationParams
from .config import ConfigError, SystemConfig
from .simulation import run_sweep, simulate_trial, trial_seeds

__all__ = ["ExperimentSpec", "load_config", "parse_config",
           "run_experiment", "write_csv", "CSV_COLUMNS", "main"]

CSV_COLUMNS = ("demand_bps", "outage_mean", "outage_stderr", "min_rate_mean",
               "max_rate_mean", "n_trials", "seed")

_SYSTEM_KEYS = {f.name: f.type for f in dataclasses.fields(SystemConfig)
                if f.name not in ("propagation", "noise")}
_PROPAGATION_KEYS = {"d_in_min_m": "float", "d_in_max_m": "float", "wall_loss_db": "float",
                     "window_loss_db": "float", "shadow_sigma_db": "float", "min_distance_m": "float"}
_NOISE_KEYS = {f.name: f.type for f in dataclasses.fields(NoiseParams)}
_EXPERIMENT_KEYS = {"label": "str", "demands_bps": "list", "out": "str", "trial_json": "str"}
SECTIONS = {"system": _SYSTEM_KEYS, "propagation": _PROPAGATION_KEYS,
            "noise": _NOISE_KEYS, "experiment": _EXPERIMENT_KEYS}


@dataclass
class ExperimentSpec:
    config: SystemConfig = field(default_factory=SystemConfig)
    demands_bps: list = field(default_factory=list)
    label: str = ""
    out: str | None = None
    trial_json: str | None = None

    def __post_init__(self):
        if not self.demands_bps:
            self.demands_bps = [self.config.demand_bps]
        d = self.demands_bps
        if any(x <= 0 for x in d):
            raise ConfigError("demands_bps: demands must be positive")
        if any(b <= a for a, b in zip(d, d[1:])):
            raise ConfigError(f"demands_bps: sweep must be strictly increasing, got {d}")


def _convert(section, key, raw):
    kind = SECTIONS[section][key]
    kind = kind if isinstance(kind, str) else kind.__name__
    raw = raw.strip()
    try:
        if kind == "int":
            v = float(raw)
            if v != int(v):
                raise ValueError
            return int(v)
        if kind == "float":
            return float(raw)
        if kind == "list":
            return [float(x) for x in raw.replace(",", " ").split()]
        return raw
    except ValueError:
        raise ConfigError(f"{section}.{key}: cannot parse {raw!r} as {kind}") from None


def _resolve_key(key):
    if "." in key:
        section, name = key.split(".", 1)
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}] in key {key!r}")
        if name not in SECTIONS[section]:
            raise ConfigError(f"unknown key {name!r} in section [{section}]")
        return section, name
    hits = [s for s, keys in SECTIONS.items() if key in keys]
    if not hits:
        raise ConfigError(f"unknown key {key!r}")
    return hits[0], key


def _build(values):
    system = dict(values.get("system", {}))
    prop = dict(values.get("propagation", {}))
    lo = prop.pop("d_in_min_m", PropagationParams.d_in_range[0])
    hi = prop.pop("d_in_max_m", PropagationParams.d_in_range[1])
    try:
        propagation = PropagationParams(d_in_range=(lo, hi), **prop)
        noise = NoiseParams(**values.get("noise", {}))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    cfg = SystemConfig(propagation=propagation, noise=noise, **system)
    exp = values.get("experiment", {})
    return ExperimentSpec(config=cfg, demands_bps=exp.get("demands_bps", []),
                          label=exp.get("label", ""), out=exp.get("out"),
                          trial_json=exp.get("trial_json"))


def _parse_values(text):
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"config parse error: {e}") from None
    values = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            values.setdefault(section, {})[key] = _convert(section, key, raw)
    return values


def parse_config(text, overrides=()):
    """Build an :class:`ExperimentSpec` from config text plus ``KEY=VALUE``
    overrides (``section.key`` or a bare key)."""
    values = _parse_values(text)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        key, raw = item.split("=", 1)
        section, name = _resolve_key(key.strip())
        values.setdefault(section, {})[name] = _convert(section, name, raw)
    return _build(values)


def load_config(path, overrides=()):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_config(text, overrides)


def write_csv(points, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow([repr(p.demand_bps), repr(p.outage_mean), repr(p.outage_stderr),
                    repr(p.min_rate_mean), repr(p.max_rate_mean), p.n_trials, p.seed])


def run_experiment(spec, jobs=1):
    """Run the demand sweep; write the CSV (and optional trial dump).

    Returns the list of sweep points.
    """
    points = run_sweep(spec.config, spec.demands_bps, jobs=jobs)
    buf = io.StringIO()
    write_csv(points, buf)
    if spec.out:
        _write(spec.out, buf.getvalue())
    if spec.trial_json:
        cfg = dataclasses.replace(spec.config, demand_bps=spec.demands_bps[0])
        topo_seed, chan_seed = trial_seeds(cfg.master_seed, 0, 0)
        _write(spec.trial_json, json.dumps(simulate_trial(cfg, topo_seed, chan_seed).to_dict()))
    return points


def _write(path, text):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise ConfigError(f"cannot write output {path}: {e}") from None


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI experiment file (defaults if omitted)")
    common.add_argument("--out", metavar="PATH", help="output file (CSV for run, JSON for trial)")
    common.add_argument("--seed", type=int, metavar="U64", help="master seed")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key; repeatable")
    common.add_argument("--mode", choices=("ideal", "sinr"), help="rate evaluation mode")
    common.add_argument("--jobs", type=int, default=1, metavar="COUNT", help="parallel worker processes")
    parser = argparse.ArgumentParser(prog="femtoalloc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run a demand sweep and write the CSV")
    t = sub.add_parser("trial", parents=[common], help="run one seeded trial and dump it as JSON")
    t.add_argument("--topology-index", type=int, default=0)
    t.add_argument("--draw-index", type=int, default=0)
    sub.add_parser("validate", parents=[common], help="check a config file and exit")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"system.master_seed={args.seed}")
    if args.mode is not None:
        overrides.append(f"system.eval_mode={args.mode}")
    try:
        if args.config:
            spec = load_config(args.config, overrides)
        else:
            spec = parse_config("", overrides)
        if args.command == "validate":
            print(f"ok: {len(spec.demands_bps)} sweep point(s), "
                  f"{spec.config.n_topologies}x{spec.config.n_channel_draws} trials each")
            return 0
        if args.command == "trial":
            topo_seed, chan_seed = trial_seeds(spec.config.master_seed, args.topology_index, args.draw_index)
            text = json.dumps(simulate_trial(spec.config, topo_seed, chan_seed).to_dict())
            if args.out:
                _write(args.out, text)
            else:
                print(text)
            return 0
        if args.out:
            spec.out = args.out
        points = run_experiment(spec, jobs=args.jobs)
        if not spec.out:
            write_csv(points, sys.stdout)
        return 0
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
