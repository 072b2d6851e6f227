"""Experiment configuration: JSON in, validated :class:`ExperimentConfig` out.

Every kind has a flat key table; unknown keys are rejected and missing
optional keys are filled from defaults so the manifest echoes the exact
parameters that ran.
"""
from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..errors import ConfigError, ClusterPeierlsError
from ..graphgen import Graph, LatticeSpec, build_lattice, build_long_range, build_path, build_ring
from ..mbqc import MeasurementPattern

REQUIRED = object()

KINDS = ("ising-sweep", "mbqc-run", "analogy-trace", "peierls-table", "tcrit-table")


def _num(path, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {type(v).__name__}")
    return float(v)


def _int(path, v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}: expected an integer, got {v!r}")
    return v


def _pos_int(path, v):
    v = _int(path, v)
    if v < 1:
        raise ConfigError(f"{path}: must be >= 1, got {v}")
    return v


def _bool(path, v):
    if not isinstance(v, bool):
        raise ConfigError(f"{path}: expected true/false, got {v!r}")
    return v


def _str_choice(*choices):
    def check(path, v):
        if v not in choices:
            raise ConfigError(f"{path}: expected one of {list(choices)}, got {v!r}")
        return v

    return check


def _string(path, v):
    if not isinstance(v, str):
        raise ConfigError(f"{path}: expected a string, got {v!r}")
    return v


def _dict(schema):
    def check(path, v):
        if not isinstance(v, dict):
            raise ConfigError(f"{path}: expected an object, got {type(v).__name__}")
        return _apply(schema, v, path)

    return check


def _lattice(path, v):
    d = _dict({"sides": (_int_list, REQUIRED), "boundary": (_str_choice("open", "periodic"), "open")})(path, v)
    try:
        LatticeSpec(tuple(d["sides"]), d["boundary"])
    except ClusterPeierlsError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return d


def _int_list(path, v):
    if not isinstance(v, list) or not v:
        raise ConfigError(f"{path}: expected a non-empty list")
    return [_int(f"{path}[{k}]", x) for k, x in enumerate(v)]


def _bits(path, v):
    if v is None:
        return None
    if not isinstance(v, list):
        raise ConfigError(f"{path}: expected a list of 0/1")
    for k, x in enumerate(v):
        if x not in (0, 1) or isinstance(x, bool):
            raise ConfigError(f"{path}[{k}]: expected 0 or 1, got {x!r}")
    return v


def _temperatures(path, v):
    if isinstance(v, list):
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
            raise ConfigError(f"{path}: expected a list of numbers")
        out = [float(x) for x in v]
    elif isinstance(v, dict):
        d = _apply({"start": (_num, REQUIRED), "stop": (_num, REQUIRED), "step": (_num, REQUIRED)}, v, path)
        if d["step"] <= 0:
            raise ConfigError(f"{path}.step: must be positive")
        count = int(round((d["stop"] - d["start"]) / d["step"])) + 1
        out = [round(d["start"] + k * d["step"], 10) for k in range(max(count, 0))]
    else:
        raise ConfigError(f"{path}: expected a list or {{start, stop, step}}")
    if any(t <= 0 for t in out):
        raise ConfigError(f"{path}: temperatures must be positive")
    return out


def _inputs(path, v):
    """{"<qubit>": [[re, im], [re, im]]}"""
    if v is None:
        return None
    if not isinstance(v, dict):
        raise ConfigError(f"{path}: expected an object mapping qubit -> [[re, im], [re, im]]")
    out = {}
    for q, amp in v.items():
        p = f"{path}.{q}"
        try:
            qi = int(q)
        except ValueError:
            raise ConfigError(f"{p}: qubit key must be an integer") from None
        if not (isinstance(amp, list) and len(amp) == 2 and all(isinstance(a, list) and len(a) == 2 for a in amp)):
            raise ConfigError(f"{p}: expected [[re, im], [re, im]]")
        out[str(qi)] = [[_num(p, a[0]), _num(p, a[1])] for a in amp]
    return out


def _su2(path, v):
    if v is None:
        return None
    return _dict({"alpha": (_num, 0.0), "beta": (_num, 0.0), "gamma": (_num, 0.0)})(path, v)


def _graph_or_pattern_ref(path, v):
    if v is None or isinstance(v, (str, dict)):
        return v
    raise ConfigError(f"{path}: expected a file path or an inline object")


COMMON = {
    "kind": (_str_choice(*KINDS), REQUIRED),
    "name": (_string, None),
    "seed": (_int, 0),
    "output": (_string, None),
}

SCHEMAS = {
    "ising-sweep": {
        "lattice": (_lattice, REQUIRED),
        "J": (_num, 1.0),
        "temperatures": (_temperatures, REQUIRED),
        "sweeps": (_pos_int, 10000),
        "equilibration": (lambda p, v: _int(p, v), 10000),
        "init": (_str_choice("cold", "hot"), "cold"),
    },
    "mbqc-run": {
        "graph": (_graph_or_pattern_ref, None),
        "pattern": (_graph_or_pattern_ref, None),
        "su2": (_su2, None),
        "inputs": (_inputs, None),
        "shots": (_pos_int, 1),
        "forced": (_bits, None),
    },
    "analogy-trace": {
        "graph": (_graph_or_pattern_ref, REQUIRED),
        "pattern": (_graph_or_pattern_ref, REQUIRED),
        "inputs": (_inputs, None),
        "capacity": (_bool, True),
        "forced": (_bits, None),
    },
    "peierls-table": {
        "N": (_num, 1000.0),
        "N2d": (_num, 100.0),
        "T": (_num, 1.0),
        "J": (_num, 1.0),
    },
    "tcrit-table": {
        "d_min": (_int, 2),
        "d_max": (_int, 8),
    },
}


def _apply(schema, raw, path):
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        where = f"{path}." if path else ""
        raise ConfigError(f"unknown key {where}{unknown[0]!r}" + (f" (and {len(unknown) - 1} more)" if len(unknown) > 1 else ""))
    out = {}
    for key, (check, default) in schema.items():
        p = f"{path}.{key}" if path else key
        if key in raw:
            out[key] = check(p, raw[key])
        elif default is REQUIRED:
            raise ConfigError(f"missing required key {p!r}")
        else:
            out[key] = copy.deepcopy(default)
    return out


@dataclass
class ExperimentConfig:
    kind: str
    params: dict
    base_dir: Path = field(default_factory=Path.cwd)
    graph: Any = None
    pattern: Any = None

    @property
    def seed(self) -> int:
        return self.params["seed"]

    @property
    def name(self) -> str:
        return self.params.get("name") or self.kind

    def echo(self) -> dict:
        return dict(self.params)


def _load_ref(ref, base_dir: Path, what: str):
    if isinstance(ref, str):
        p = Path(ref)
        if not p.is_absolute():
            p = base_dir / p
        try:
            return json.loads(p.read_text())
        except FileNotFoundError:
            raise ConfigError(f"{what}: file not found: {p}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{what}: invalid JSON in {p}: {exc}") from None
    return ref


def build_graph(d: dict, what: str = "graph") -> Graph:
    """Graph from an inline spec: {"n", "edges"}, {"lattice"}, {"ring"}, {"path"} or {"long_range"}."""
    try:
        if "n" in d:
            return Graph.from_dict(d)
        if len(d) != 1:
            raise ConfigError(f"{what}: expected exactly one of n/lattice/ring/path/long_range")
        (key, v), = d.items()
        if key == "lattice":
            lv = _lattice(f"{what}.lattice", v)
            return build_lattice(LatticeSpec(tuple(lv["sides"]), lv["boundary"]))
        if key == "ring":
            return build_ring(_int(f"{what}.ring", v))
        if key == "path":
            return build_path(_int(f"{what}.path", v))
        if key == "long_range":
            lr = _apply({"n": (_int, REQUIRED), "alpha": (_num, REQUIRED), "p0": (_num, 1.0), "seed": (_int, 0)}, v, f"{what}.long_range")
            return build_long_range(lr["n"], lr["alpha"], lr["p0"], lr["seed"])
        raise ConfigError(f"unknown key {what}.{key!r}")
    except ConfigError:
        raise
    except (ClusterPeierlsError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: {exc}") from None


def validate(raw: dict, base_dir: Path | str = ".") -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    if "kind" not in raw:
        raise ConfigError("missing required key 'kind'")
    kind = COMMON["kind"][0]("kind", raw["kind"])
    params = _apply({**COMMON, **SCHEMAS[kind]}, raw, "")
    if params["output"] is None:
        params["output"] = f"{kind}.csv"
    cfg = ExperimentConfig(kind, params, Path(base_dir))

    if kind in ("mbqc-run", "analogy-trace"):
        if kind == "mbqc-run":
            if (params["pattern"] is None) == (params["su2"] is None):
                raise ConfigError("mbqc-run needs exactly one of 'pattern' or 'su2'")
        if params.get("pattern") is not None:
            pd = _load_ref(params["pattern"], cfg.base_dir, "pattern")
            try:
                cfg.pattern = MeasurementPattern.from_dict(pd)
            except (ClusterPeierlsError, KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"pattern: {exc}") from None
        if params.get("graph") is not None:
            gd = _load_ref(params["graph"], cfg.base_dir, "graph")
            if not isinstance(gd, dict):
                raise ConfigError("graph: expected an object")
            cfg.graph = build_graph(gd)
        if cfg.pattern is not None and cfg.graph is not None:
            extra = cfg.pattern.qubits - set(range(cfg.graph.n_vertices))
            if extra:
                raise ConfigError(f"pattern: qubits {sorted(extra)} are not graph vertices")
        if cfg.pattern is not None and cfg.graph is None:
            raise ConfigError("missing required key 'graph' for a pattern run")
    return cfg


def parse_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return validate(raw, path.parent)


def default_out_root() -> Path:
    return Path(os.environ.get("CLUSTERPEIERLS_OUT", "out"))
