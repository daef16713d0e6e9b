"""Run configuration: YAML schema, validation diagnostics and resolution.

Schema (``schema_version: 1``)::

    command: force-sweep | thickness-scan | stability-check | critical-thickness
             | stability-diagram | elastic-report
    method: full_retarded | small_d
    materials:
      film:      {model: drude, omega_p: 2.0e15, omega_tau: 1.0e14}
      substrate: {model: vacuum | plasma | drude | perfect_reflector, ...}
      ambient:   {model: vacuum}
    geometry:  {d: 50.0e-9, d_range: [1.0e-10, 1.0e-6]}
    elastic:   {young, poisson, surface_energy, mismatch_stress, surface_stress, hamaker, three_d}
    quad:      {rel_tol, abs_tol, max_subdivisions}
    sweep:     {axis: omega3 | omega_tau3 | omega1 | omega_tau1 | d,
                start, stop, spacing: log | linear, samples}
    diagram:   {omega1_range: [1.0e15, 1.0e18], omega1_samples: 64}
    output:    path.csv
    threads:   1
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field

import numpy as np
import yaml

from .elastic import FilmElasticParams
from .lifshitz import QuadratureSpec
from .physmodels import DielectricModel, DomainError, Kind, LayerStack
from .stability import Method

SCHEMA_VERSION = 1
COMMANDS = ("force-sweep", "thickness-scan", "stability-check", "critical-thickness",
            "stability-diagram", "elastic-report")
AXES = ("omega3", "omega_tau3", "omega1", "omega_tau1", "d")
METHOD_ALIASES = {"full_retarded": "full_retarded", "retarded": "full_retarded",
                  "small_d": "small_d", "smalld": "small_d"}
MAX_SAMPLES = 100_000

_ELASTIC_DEFAULTS = {"young": 76e9, "poisson": 0.3, "surface_energy": 1.0,
                     "mismatch_stress": 500e6, "surface_stress": 0.0, "hamaker": None,
                     "three_d": False}
_QUAD_DEFAULTS = {"rel_tol": 1e-8, "abs_tol": 1e-20, "max_subdivisions": 4000}

# per-command defaults follow the figure setups they reproduce
DEFAULTS = {
    "force-sweep": {
        "materials": {"film": {"model": "drude", "omega_p": 2e15, "omega_tau": 0.0}},
        "geometry": {"d": 50e-9},
        "sweep": {"axis": "omega3", "start": 1e14, "stop": 1e18, "spacing": "log", "samples": 64},
    },
    "thickness-scan": {
        "materials": {"film": {"model": "drude", "omega_p": 2e15, "omega_tau": 1e14}},
        "sweep": {"axis": "d", "start": 5e-9, "stop": 50e-9, "spacing": "log", "samples": 32},
    },
    "stability-check": {
        "materials": {"film": {"model": "drude", "omega_p": 1e16, "omega_tau": 5e15},
                      "substrate": {"model": "perfect_reflector"}},
        "geometry": {"d": 6e-9},
        "method": "small_d",
    },
    "critical-thickness": {
        "materials": {"film": {"model": "drude", "omega_p": 1e16, "omega_tau": 0.0},
                      "substrate": {"model": "perfect_reflector"}},
        "geometry": {"d_range": [1e-10, 1e-6]},
        "sweep": {"axis": "omega3", "start": 1e15, "stop": 1e18, "spacing": "log", "samples": 32},
        "method": "small_d",
    },
    "stability-diagram": {
        "materials": {"film": {"model": "drude", "omega_p": 1e16, "omega_tau": 0.0},
                      "substrate": {"model": "drude", "omega_p": 1e16, "omega_tau": 0.0}},
        "geometry": {"d": 6e-9},
        "sweep": {"axis": "omega3", "start": 1e15, "stop": 1e18, "spacing": "log", "samples": 64},
        "diagram": {"omega1_range": [1e15, 1e19], "omega1_samples": 64},
        "method": "small_d",
    },
    "elastic-report": {
        "materials": {"film": {"model": "drude", "omega_p": 1e16, "omega_tau": 0.0},
                      "substrate": {"model": "perfect_reflector"}},
        "geometry": {"d": 10e-9},
        "method": "small_d",
    },
}


@dataclass(frozen=True)
class Diagnostic:
    level: str          # "error" | "warning"
    message: str
    line: int | None = None

    def format(self, source: str = "config") -> str:
        where = f"{source}:{self.line}" if self.line is not None else source
        return f"{where}: {self.level}: {self.message}"


class ConfigError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic], source: str = "config"):
        self.diagnostics = diagnostics
        super().__init__("\n".join(d.format(source) for d in diagnostics))


def _line_map(node, path=(), out=None):
    out = {} if out is None else out
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for key, val in node.value:
            _line_map(val, path + (key.value,), out)
            out[path + (key.value,)] = key.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for i, val in enumerate(node.value):
            _line_map(val, path + (i,), out)
    return out


def load_yaml(text: str):
    """Parse YAML, returning the mapping and a ``path -> line`` table."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError([Diagnostic("error", f"YAML syntax: {getattr(exc, 'problem', exc)}", line)])
    if data is None:
        return {}, {}
    if not isinstance(data, dict):
        raise ConfigError([Diagnostic("error", "top level must be a mapping", 1)])
    return data, _line_map(node)


def _deep_merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def with_defaults(raw: dict) -> dict:
    """Fill a raw mapping with the command's defaults (raw keys win)."""
    command = raw.get("command", "force-sweep")
    base = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "method": "full_retarded",
        "materials": {"film": {"model": "vacuum"}, "substrate": {"model": "vacuum"},
                      "ambient": {"model": "vacuum"}},
        "geometry": {"d": 10e-9, "d_range": [1e-10, 1e-6]},
        "elastic": dict(_ELASTIC_DEFAULTS),
        "quad": dict(_QUAD_DEFAULTS),
        "sweep": None,
        "diagram": {"omega1_range": [1e15, 1e19], "omega1_samples": 64},
        "output": None,
        "threads": 1,
    }
    base = _deep_merge(base, DEFAULTS.get(command, {}))
    return _deep_merge(base, raw)


def _num(v):
    # YAML 1.1 reads "1e15" as a string; accept it
    if isinstance(v, bool):
        raise ValueError("boolean is not a number")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        return float(v)
    raise ValueError(f"not a number: {v!r}")


def validate(raw: dict, lines: dict | None = None) -> list[Diagnostic]:
    """Check a (default-filled) mapping; never runs any computation."""
    lines = lines or {}
    diags: list[Diagnostic] = []

    def line(*path):
        while path:
            if path in lines:
                return lines[path]
            path = path[:-1]
        return None

    def err(msg, *path):
        diags.append(Diagnostic("error", msg, line(*path)))

    def warn(msg, *path):
        diags.append(Diagnostic("warning", msg, line(*path)))

    def number(path, positive=False, nonneg=False):
        node = raw
        for p in path:
            if isinstance(node, dict):
                node = node.get(p)
            elif isinstance(node, list) and isinstance(p, int) and p < len(node):
                node = node[p]
            else:
                node = None
        try:
            x = _num(node)
        except (TypeError, ValueError):
            err(f"{'.'.join(map(str, path))} must be a number, got {node!r}", *path)
            return None
        if not math.isfinite(x):
            err(f"{'.'.join(map(str, path))} must be finite", *path)
            return None
        if positive and not x > 0:
            err(f"{'.'.join(map(str, path))} must be > 0", *path)
            return None
        if nonneg and x < 0:
            err(f"{'.'.join(map(str, path))} must be >= 0", *path)
            return None
        return x

    if raw.get("schema_version") != SCHEMA_VERSION:
        err(f"schema_version must be {SCHEMA_VERSION}", "schema_version")
    command = raw.get("command")
    if command not in COMMANDS:
        err(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}", "command")
    method = METHOD_ALIASES.get(str(raw.get("method")))
    if method is None:
        err(f"method must be full_retarded or small_d, got {raw.get('method')!r}", "method")

    mats = raw.get("materials") or {}
    for role in ("film", "substrate", "ambient"):
        m = mats.get(role) or {}
        model = m.get("model")
        if model not in [k.value for k in Kind]:
            err(f"materials.{role}.model must be one of {', '.join(k.value for k in Kind)}",
                "materials", role, "model")
            continue
        if role == "film" and model == Kind.PERFECT_REFLECTOR.value:
            err("the film cannot be a perfect reflector", "materials", role, "model")
        if model in ("plasma", "drude"):
            number(("materials", role, "omega_p"), nonneg=True)
        if model == "drude" and "omega_tau" in m:
            number(("materials", role, "omega_tau"), nonneg=True)
        if model == "plasma" and m.get("omega_tau"):
            err("plasma model takes no omega_tau; use drude", "materials", role, "omega_tau")

    geo = raw.get("geometry") or {}
    if "d" in geo and geo["d"] is not None:
        number(("geometry", "d"), positive=True)
    dr = geo.get("d_range")
    if dr is not None:
        if not (isinstance(dr, list) and len(dr) == 2):
            err("geometry.d_range must be a two-element list", "geometry", "d_range")
        else:
            lo = number(("geometry", "d_range", 0), positive=True)
            hi = number(("geometry", "d_range", 1), positive=True)
            if lo is not None and hi is not None and not lo < hi:
                err("geometry.d_range is empty (need lo < hi)", "geometry", "d_range")

    el = raw.get("elastic") or {}
    try:
        FilmElasticParams(**{k: (None if el.get(k) is None else _num(el[k]))
                             for k in _ELASTIC_DEFAULTS if k != "three_d" and k in el})
    except (DomainError, ValueError, TypeError) as exc:
        err(f"elastic: {exc}", "elastic")
    if not isinstance(el.get("three_d", False), bool):
        err("elastic.three_d must be true or false", "elastic", "three_d")

    q = raw.get("quad") or {}
    try:
        QuadratureSpec(rel_tol=_num(q.get("rel_tol", 1e-8)), abs_tol=_num(q.get("abs_tol", 1e-20)),
                       max_subdivisions=int(_num(q.get("max_subdivisions", 4000))))
    except (ValueError, TypeError) as exc:
        err(f"quad: {exc}", "quad")

    sweep = raw.get("sweep")
    needs_sweep = command in ("force-sweep", "thickness-scan", "critical-thickness", "stability-diagram")
    if sweep is None:
        if needs_sweep:
            err(f"command {command} needs a sweep section", "sweep")
    elif not isinstance(sweep, dict):
        err("sweep must be a mapping", "sweep")
    else:
        axis = sweep.get("axis")
        if axis not in AXES:
            err(f"sweep.axis must be one of {', '.join(AXES)}", "sweep", "axis")
        if command == "thickness-scan" and axis != "d":
            err("thickness-scan sweeps the thickness: sweep.axis must be d", "sweep", "axis")
        if command in ("critical-thickness", "stability-diagram") and axis != "omega3":
            err(f"{command} sweeps the film plasma frequency: sweep.axis must be omega3", "sweep", "axis")
        start = number(("sweep", "start"), positive=True)
        stop = number(("sweep", "stop"), positive=True)
        if start is not None and stop is not None and not start < stop:
            err("sweep range is empty (need start < stop)", "sweep")
        if sweep.get("spacing", "log") not in ("log", "linear"):
            err("sweep.spacing must be log or linear", "sweep", "spacing")
        n = sweep.get("samples")
        if not (isinstance(n, int) and not isinstance(n, bool) and 2 <= n <= MAX_SAMPLES):
            err(f"sweep.samples must be an integer in [2, {MAX_SAMPLES}]", "sweep", "samples")

    if command == "stability-diagram":
        dg = raw.get("diagram") or {}
        r = dg.get("omega1_range")
        if not (isinstance(r, list) and len(r) == 2):
            err("diagram.omega1_range must be a two-element list", "diagram", "omega1_range")
        else:
            lo = number(("diagram", "omega1_range", 0), positive=True)
            hi = number(("diagram", "omega1_range", 1), positive=True)
            if lo is not None and hi is not None and not lo < hi:
                err("diagram.omega1_range is empty", "diagram", "omega1_range")
        n = dg.get("omega1_samples", 64)
        if not (isinstance(n, int) and 2 <= n <= MAX_SAMPLES):
            err(f"diagram.omega1_samples must be an integer in [2, {MAX_SAMPLES}]", "diagram", "omega1_samples")
        sub = (mats.get("substrate") or {}).get("model")
        if sub not in ("plasma", "drude"):
            err("stability-diagram needs a plasma or drude substrate", "materials", "substrate", "model")

    threads = raw.get("threads", 1)
    if not (isinstance(threads, int) and not isinstance(threads, bool) and threads >= 1):
        err("threads must be a positive integer", "threads")

    # small-d closed forms need omega_tau < sqrt(2) Omega_3
    film = mats.get("film") or {}
    if method == "small_d" and film.get("model") == "drude":
        try:
            om, tau = _num(film.get("omega_p", 0.0)), _num(film.get("omega_tau", 0.0))
            taus = [tau]
            if isinstance(sweep, dict) and sweep.get("axis") == "omega_tau3":
                taus.append(_num(sweep.get("stop")))
            if om > 0 and max(taus) >= math.sqrt(2.0) * om:
                warn("omega_tau >= sqrt(2) Omega_3 is outside the small-d closed-form domain; "
                     "the 1-D integral is used instead", "materials", "film", "omega_tau")
        except (TypeError, ValueError):
            pass
    return diags


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    spacing: str = "log"
    samples: int = 64

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.samples)
        return np.linspace(self.start, self.stop, self.samples)


@dataclass(frozen=True)
class RunConfig:
    command: str
    method: Method
    film: DielectricModel
    substrate: DielectricModel
    ambient: DielectricModel
    d: float | None
    d_range: tuple[float, float]
    elastic: FilmElasticParams
    three_d: bool
    quad: QuadratureSpec
    sweep: SweepSpec | None
    omega1_range: tuple[float, float]
    omega1_samples: int
    output: str | None
    threads: int = 1
    resolved: dict = field(default_factory=dict, compare=False, repr=False)

    def stack(self, d: float | None = None) -> LayerStack:
        return LayerStack(self.substrate, self.ambient, self.film, d if d is not None else self.d)


def _model(spec: dict) -> DielectricModel:
    kind = spec["model"]
    if kind == "vacuum":
        return DielectricModel.vacuum()
    if kind == "perfect_reflector":
        return DielectricModel.perfect_reflector()
    if kind == "plasma":
        return DielectricModel.plasma(_num(spec.get("omega_p", 0.0)))
    return DielectricModel.drude(_num(spec.get("omega_p", 0.0)), _num(spec.get("omega_tau", 0.0)))


def _normalise(raw: dict) -> dict:
    """Canonical resolved mapping (numbers as floats) used for the CSV header."""
    out = copy.deepcopy(raw)
    out["method"] = METHOD_ALIASES[str(out["method"])]
    for role, m in out["materials"].items():
        for k in ("omega_p", "omega_tau"):
            if k in m:
                m[k] = _num(m[k])
    geo = out["geometry"]
    if geo.get("d") is not None:
        geo["d"] = _num(geo["d"])
    geo["d_range"] = [_num(x) for x in geo["d_range"]]
    for k, v in out["elastic"].items():
        if k != "three_d" and v is not None:
            out["elastic"][k] = _num(v)
    out["quad"] = {"rel_tol": _num(out["quad"]["rel_tol"]), "abs_tol": _num(out["quad"]["abs_tol"]),
                   "max_subdivisions": int(_num(out["quad"]["max_subdivisions"]))}
    if out.get("sweep"):
        s = out["sweep"]
        s["start"], s["stop"] = _num(s["start"]), _num(s["stop"])
        s.setdefault("spacing", "log")
    out["diagram"]["omega1_range"] = [_num(x) for x in out["diagram"]["omega1_range"]]
    out["diagram"].setdefault("omega1_samples", 64)
    return out


def resolve(raw: dict, lines: dict | None = None, source: str = "config") -> tuple[RunConfig, list[Diagnostic]]:
    """Default-fill, validate and build a :class:`RunConfig`.

    Raises :class:`ConfigError` on any error-level diagnostic; warnings are
    returned alongside the config.
    """
    full = with_defaults(raw)
    diags = validate(full, lines)
    errors = [d for d in diags if d.level == "error"]
    if errors:
        raise ConfigError(errors, source)
    res = _normalise(full)
    mats = res["materials"]
    el = res["elastic"]
    sweep = SweepSpec(**res["sweep"]) if res.get("sweep") else None
    cfg = RunConfig(
        command=res["command"],
        method=Method(res["method"]),
        film=_model(mats["film"]),
        substrate=_model(mats["substrate"]),
        ambient=_model(mats["ambient"]),
        d=res["geometry"].get("d"),
        d_range=tuple(res["geometry"]["d_range"]),
        elastic=FilmElasticParams(**{k: v for k, v in el.items() if k != "three_d"}),
        three_d=bool(el.get("three_d", False)),
        quad=QuadratureSpec(**res["quad"]),
        sweep=sweep,
        omega1_range=tuple(res["diagram"]["omega1_range"]),
        omega1_samples=int(res["diagram"]["omega1_samples"]),
        output=res.get("output"),
        threads=int(res.get("threads", 1)),
        resolved=res,
    )
    return cfg, [d for d in diags if d.level != "error"]
