"""Experiment driver: Monte Carlo campaigns, exhaustive sweeps, oracle checks.

A campaign is described by an :class:`ExperimentConfig` (usually loaded from a
YAML/JSON file with command-line overrides on top) and produces an
:class:`ExperimentReport` with one record per protocol run.

Seeding: trial ``t`` draws from ``SeedSequence(seed, spawn_key=(t,))``. Its
first child samples the noise, its second drives detection; both protocols
get a fresh generator from the same detection child, so results do not
depend on execution order or worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

import jsonschema
import numpy as np
import yaml

from . import dense
from .errors import ConfigError, OneStepError, OracleMismatchError
from .noise import PROTOCOLS, GhzMixture, PauliChannel, pauli_to_ghz_mixture, sample_ghz
from .protocol import ProtocolOutcome, enumerate_protocol, run_protocol
from .state import GhzPolState, all_ghz_states, bits_str

MONTECARLO, EXHAUSTIVE, ORACLE = "montecarlo", "exhaustive", "oracle-check"
MODES = (MONTECARLO, EXHAUSTIVE, ORACLE)
MODE_CAPS = {MONTECARLO: 16, EXHAUSTIVE: 12, ORACLE: dense.MAX_PARTIES}
FORMATS = ("json", "csv")
CSV_HEADER = ["trial", "input_bits", "input_sign", "pattern", "n_corrections", "fidelity", "success"]
ORACLE_TOL = 1e-12


def _version() -> str:
    from . import __version__

    return __version__


_PROB = {"type": "number", "minimum": 0}
_QUAD = {"type": "array", "items": _PROB, "minItems": 4, "maxItems": 4}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ExperimentConfig",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "n_parties": {"type": "integer", "minimum": 2},
        "protocol": {"enum": ["spatial", "frequency", "both"]},
        "noise": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "weights"],
                    "properties": {
                        "kind": {"const": "mixture"},
                        "weights": {
                            "oneOf": [
                                {"const": "uniform"},
                                {
                                    "type": "object",
                                    "minProperties": 1,
                                    "propertyNames": {"pattern": "^[01]+[+-]$"},
                                    "additionalProperties": _PROB,
                                },
                            ]
                        },
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "channel"],
                    "properties": {
                        "kind": {"const": "pauli"},
                        "channel": {"oneOf": [_QUAD, {"type": "array", "items": _QUAD, "minItems": 2}]},
                        "input": {"type": "string", "pattern": "^[01]+[+-]$"},
                    },
                },
            ]
        },
        "trials": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "mode": {"enum": list(MODES)},
        "out": {"type": ["string", "null"]},
        "format": {"enum": list(FORMATS)},
        "workers": {"type": "integer", "minimum": 1},
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(CONFIG_SCHEMA)

_RECORD_SCHEMA = {
    "type": "object",
    "required": [
        "trial", "protocol", "input_bits", "input_sign", "pattern",
        "corrections", "n_corrections", "probability", "fidelity", "success",
    ],
    "properties": {
        "trial": {"type": "integer"},
        "protocol": {"enum": list(PROTOCOLS)},
        "input_bits": {"type": "string"},
        "input_sign": {"enum": ["+", "-"]},
        "pattern": {"type": "string"},
        "corrections": {"type": "array", "items": {"type": "integer"}},
        "n_corrections": {"type": "integer"},
        "probability": {"type": "number"},
        "fidelity": {"type": "number"},
        "success": {"type": "boolean"},
        "oracle_match": {"type": "boolean"},
    },
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ExperimentReport",
    "type": "object",
    "required": ["version", "config", "aggregates", "trials"],
    "properties": {
        "version": {"type": "string"},
        "config": CONFIG_SCHEMA,
        "aggregates": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": [
                        "n_records", "n_success", "success_rate", "mean_fidelity",
                        "min_fidelity", "pattern_histogram", "input_histogram",
                        "systems_consumed_per_output", "by_protocol",
                    ],
                },
            ]
        },
        "trials": {"type": "array", "items": _RECORD_SCHEMA},
    },
}


@dataclass
class ExperimentConfig:
    n_parties: int = 3
    protocol: str = "spatial"
    noise: dict = field(default_factory=lambda: {"kind": "mixture", "weights": "uniform"})
    trials: int = 1000
    seed: int = 0
    mode: str = MONTECARLO
    out: Optional[str] = None
    format: str = "json"
    workers: int = 1

    def __post_init__(self):
        validate_config(asdict(self))

    @property
    def protocols(self) -> tuple[str, ...]:
        return PROTOCOLS if self.protocol == "both" else (self.protocol,)

    def to_dict(self) -> dict:
        """Config echo for reports; output location and worker count are not part of the experiment."""
        data = asdict(self)
        del data["out"], data["workers"]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        validate_config(data)
        return cls(**data)


def _path(parts) -> str:
    return ".".join(str(p) for p in parts)


def validate_config(data: dict) -> None:
    """Schema check plus semantic checks; raises :class:`ConfigError` with a field path."""
    best = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(data))
    if best is not None:
        raise ConfigError(_path(best.absolute_path), best.message)
    n = data.get("n_parties", 3)
    mode = data.get("mode", MONTECARLO)
    cap = MODE_CAPS[mode]
    if n > cap:
        raise ConfigError("n_parties", f"{mode} mode supports at most {cap} parties, got {n}")
    if "noise" in data:
        try:
            noise_mixture(data["noise"], n)
        except ConfigError:
            raise
        except (OneStepError, ValueError) as exc:
            raise ConfigError("noise", str(exc)) from None


def noise_mixture(noise: dict, n: int) -> GhzMixture:
    """Resolve the config's noise entry to a GHZ-diagonal mixture."""
    if noise["kind"] == "mixture":
        weights = noise["weights"]
        if weights == "uniform":
            return GhzMixture.uniform(n)
        for label in weights:
            if len(label) - 1 != n:
                raise ConfigError(f"noise.weights.{label}", f"expected {n} bits")
        return GhzMixture(weights)
    channel = noise["channel"]
    if channel and not isinstance(channel[0], (list, tuple)):
        channel = [channel] * n
    if len(channel) != n:
        raise ConfigError("noise.channel", f"expected {n} rows, got {len(channel)}")
    label = noise.get("input", "0" * n + "+")
    if len(label) - 1 != n:
        raise ConfigError("noise.input", f"expected {n} bits")
    return pauli_to_ghz_mixture(PauliChannel(channel), GhzPolState.parse(label))


def load_config(path: Optional[str] = None, **overrides) -> ExperimentConfig:
    """Read a YAML/JSON config file; keyword overrides that are not ``None`` win."""
    data: dict = {}
    if path is not None:
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ConfigError("", "config file must hold a mapping")
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(unknown[0], "unknown field")
    return ExperimentConfig.from_dict(data)


@dataclass
class ExperimentReport:
    config: dict
    trials: list[dict]
    aggregates: Optional[dict]
    version: str = field(default_factory=_version)

    @property
    def all_success(self) -> bool:
        return all(r["success"] for r in self.trials)

    @property
    def oracle_mismatches(self) -> int:
        return sum(1 for r in self.trials if r.get("oracle_match") is False)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "aggregates": self.aggregates,
            "trials": self.trials,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.trials:
            writer.writerow([
                r["trial"], r["input_bits"], r["input_sign"], r["pattern"],
                r["n_corrections"], repr(r["fidelity"]), str(r["success"]).lower(),
            ])
        return buf.getvalue()


def record(trial: int, out: ProtocolOutcome) -> dict:
    return {
        "trial": trial,
        "protocol": out.protocol,
        "input_bits": bits_str(out.input_state.bits),
        "input_sign": out.input_state.sign.symbol,
        "pattern": out.pattern_str,
        "corrections": list(out.correction_parties),
        "n_corrections": len(out.corrections),
        "probability": out.probability,
        "fidelity": out.fidelity,
        "success": out.success,
    }


def aggregate(records: list[dict]) -> Optional[dict]:
    """Summary statistics; a pure function of the records (``None`` if empty)."""
    if not records:
        return None
    n = len(records)
    n_success = sum(r["success"] for r in records)
    fids = [r["fidelity"] for r in records]
    by_protocol = {}
    for proto in PROTOCOLS:
        rs = [r for r in records if r["protocol"] == proto]
        if rs:
            ok = sum(r["success"] for r in rs)
            by_protocol[proto] = {"n_records": len(rs), "n_success": ok, "success_rate": ok / len(rs)}
    agg = {
        "n_records": n,
        "n_success": n_success,
        "success_rate": n_success / n,
        "mean_fidelity": math.fsum(fids) / n,
        "min_fidelity": min(fids),
        "pattern_histogram": dict(sorted(Counter(r["pattern"] for r in records).items())),
        "input_histogram": dict(
            sorted(Counter(r["input_bits"] + r["input_sign"] for r in records).items())
        ),
        # inputs consumed per maximally entangled output
        "systems_consumed_per_output": n / n_success if n_success else None,
        "by_protocol": by_protocol,
    }
    if any("oracle_match" in r for r in records):
        agg["oracle_mismatches"] = sum(1 for r in records if r.get("oracle_match") is False)
    return agg


def trial_streams(seed: int, trial: int) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """(noise, detection) seed sequences of one trial."""
    noise, detect = np.random.SeedSequence(seed, spawn_key=(trial,)).spawn(2)
    return noise, detect


def _montecarlo_trials(args) -> list[dict]:
    weights, seed, protocols, start, stop = args
    mix = GhzMixture(weights)
    out = []
    for t in range(start, stop):
        noise_ss, detect_ss = trial_streams(seed, t)
        g = sample_ghz(mix, np.random.default_rng(noise_ss))
        for proto in protocols:
            out.append(record(t, run_protocol(proto, g, np.random.default_rng(detect_ss))))
    return out


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(total / (workers * 4)))
    return [(i, min(i + size, total)) for i in range(0, total, size)]


def _run_montecarlo(cfg: ExperimentConfig) -> list[dict]:
    mix = noise_mixture(cfg.noise, cfg.n_parties)
    weights = mix.to_dict()
    jobs = [(weights, cfg.seed, cfg.protocols, a, b) for a, b in _chunks(cfg.trials, cfg.workers)]
    if cfg.workers == 1 or len(jobs) == 1:
        parts = map(_montecarlo_trials, jobs)
        return [r for part in parts for r in part]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return [r for part in pool.map(_montecarlo_trials, jobs) for r in part]


def _oracle_check(out: ProtocolOutcome, g: GhzPolState, pre_dense: np.ndarray) -> None:
    n = g.n
    where = f"input {g.label}, branch {out.pattern_str}, protocol {out.protocol}"
    if not dense.equal_up_to_phase(pre_dense, dense.to_dense(out.pre_measurement), ORACLE_TOL):
        raise OracleMismatchError(f"pre-measurement state differs at {where}")
    probs = dense.port_probabilities(pre_dense, n)
    if abs(probs[out.pattern] - out.probability) > ORACLE_TOL:
        raise OracleMismatchError(f"branch probability differs at {where}")
    final = dense.correct(dense.collapse(pre_dense, out.pattern, n), out.pattern)
    if not dense.equal_up_to_phase(final, dense.pol_to_dense(out.final_pol_state), ORACLE_TOL):
        raise OracleMismatchError(f"corrected state differs at {where}")


def _run_exhaustive(cfg: ExperimentConfig, oracle: bool) -> list[dict]:
    records = []
    t = 0
    for proto in cfg.protocols:
        for g in all_ghz_states(cfg.n_parties):
            pre_dense = dense.pre_measurement(proto, g.bits, int(g.sign)) if oracle else None
            for out in enumerate_protocol(proto, g):
                rec = record(t, out)
                if oracle:
                    _oracle_check(out, g, pre_dense)
                    rec["oracle_match"] = True
                records.append(rec)
                t += 1
    return records


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Execute the campaign described by ``cfg``.

    Raises :class:`OracleMismatchError` on the first disagreement with the
    dense engine in ``oracle-check`` mode.
    """
    if cfg.mode == MONTECARLO:
        records = _run_montecarlo(cfg)
    else:
        records = _run_exhaustive(cfg, oracle=cfg.mode == ORACLE)
    return ExperimentReport(config=cfg.to_dict(), trials=records, aggregates=aggregate(records))


def emit_report(report: ExperimentReport, path, fmt: str = "json") -> Path:
    """Write the report as a JSON object or as CSV rows."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    path = Path(path)
    text = report.to_json() if fmt == "json" else report.to_csv()
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path
