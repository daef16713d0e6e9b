"""Batch front end: ``vacfilm <command> [--config run.yaml] [flags]``.

Every command writes one CSV.  The header comment block embeds the library
version and the resolved configuration; ``output`` and ``threads`` are left
out since they do not affect any value.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np
import yaml

from . import __version__, elastic, lifshitz, smalld, stability
from .config import COMMANDS, ConfigError, RunConfig, load_yaml, resolve
from .cubature import ConvergenceError
from .physmodels import DielectricModel, DomainError, Kind, LayerStack
from .stability import Method

NA = "NA"
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3

_AXIS_UNITS = {"omega3": "omega3_rad_s", "omega_tau3": "omega_tau3_rad_s",
               "omega1": "omega1_rad_s", "omega_tau1": "omega_tau1_rad_s", "d": "d_m"}


def fmt(x) -> str:
    """17 significant digits, or ``NA`` for missing / non-finite values."""
    if x is None:
        return NA
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    return f"{x:.16e}" if math.isfinite(x) else NA


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _with_drude(m: DielectricModel, omega_p=None, omega_tau=None) -> DielectricModel:
    om = m.omega_p if omega_p is None else omega_p
    tau = m.omega_tau if omega_tau is None else omega_tau
    if m.kind in (Kind.VACUUM, Kind.PERFECT_REFLECTOR) and omega_p is None and omega_tau is None:
        return m
    if m.kind is Kind.PLASMA and omega_tau is None:
        return DielectricModel.plasma(om)
    return DielectricModel.drude(om, tau)


def sample_stack(cfg: RunConfig, axis: str, value: float) -> LayerStack:
    film, sub, d = cfg.film, cfg.substrate, cfg.d
    if axis == "omega3":
        film = _with_drude(film, omega_p=value)
    elif axis == "omega_tau3":
        film = _with_drude(film, omega_tau=value)
    elif axis == "omega1":
        sub = _with_drude(sub, omega_p=value)
    elif axis == "omega_tau1":
        sub = _with_drude(sub, omega_tau=value)
    elif axis == "d":
        d = value
    return LayerStack(sub, cfg.ambient, film, d)


def _pool(cfg: RunConfig, fn, items):
    return stability._pool_map(fn, list(items), cfg.threads)


def _vacuum_cells(cfg: RunConfig, stack: LayerStack):
    sd = smalld.small_d_pressure(stack)
    if cfg.method is Method.SMALL_D:
        F = sd.pressure
        return [F * stack.thickness / 2.0, None, F, None, 3.0 * F / stack.thickness, None, sd.pressure, sd.valid]
    q = lifshitz.vacuum_quantities(stack, cfg.quad)
    return [q.energy_per_area, q.energy_error, q.pressure, q.pressure_error,
            q.energy_second_derivative, q.second_derivative_error, sd.pressure, sd.valid]


_VACUUM_COLUMNS = ["energy_J_m2", "energy_err_J_m2", "pressure_N_m2", "pressure_err_N_m2",
                   "e2_N_m3", "e2_err_N_m3", "smalld_pressure_N_m2", "smalld_valid"]


def _guarded(fn, ncells: int, label: str):
    """Run ``fn``; on non-convergence return NA cells and a warning."""
    try:
        return fn(), None
    except ConvergenceError as exc:
        return [None] * ncells, f"{label}: {exc}"
    except DomainError as exc:
        return [None] * ncells, f"{label}: {exc}"


def _sweep_table(cfg: RunConfig) -> Table:
    axis = cfg.sweep.axis
    xs = cfg.sweep.values()

    def one(x):
        return _guarded(lambda: _vacuum_cells(cfg, sample_stack(cfg, axis, x)),
                        len(_VACUUM_COLUMNS), f"{axis}={x:.6g}")

    table = Table([_AXIS_UNITS[axis]] + _VACUUM_COLUMNS)
    for x, (cells, w) in zip(xs, _pool(cfg, one, xs)):
        table.rows.append([x] + cells)
        if w:
            table.warnings.append(w)
    return table


def log_slopes(d, F):
    """Local and least-squares slopes of ``ln|F|`` against ``ln d`` (NaN-aware)."""
    d, F = np.asarray(d, float), np.asarray(F, float)
    ok = np.isfinite(F) & (F != 0.0)
    local = np.full(d.shape, np.nan)
    if ok.sum() >= 2:
        ld, lf = np.log(d[ok]), np.log(np.abs(F[ok]))
        local[ok] = np.gradient(lf, ld)
        fitted = np.polyfit(ld, lf, 1)[0]
    else:
        fitted = np.nan
    return local, fitted


def _thickness_table(cfg: RunConfig) -> Table:
    table = _sweep_table(cfg)
    ip = table.columns.index("pressure_N_m2")
    d = [r[0] for r in table.rows]
    F = [np.nan if r[ip] is None else r[ip] for r in table.rows]
    local, fitted = log_slopes(d, F)
    table.columns += ["local_slope", "fitted_slope"]
    for r, s in zip(table.rows, local):
        r += [s, fitted]
    return table


def _stability_check_table(cfg: RunConfig) -> Table:
    if cfg.sweep is not None:
        axis, xs = cfg.sweep.axis, cfg.sweep.values()
    else:
        axis, xs = "d", np.array([cfg.d])
    cols = [_AXIS_UNITS[axis], "e2_N_m3", "threshold_N_m3", "stable", "reason"]

    def one(x):
        def run():
            r = stability.is_stable(sample_stack(cfg, axis, x), cfg.elastic, cfg.method, cfg.quad, cfg.three_d)
            return [r.second_derivative, r.threshold, r.stable, r.reason]
        return _guarded(run, 4, f"{axis}={x:.6g}")

    table = Table(cols)
    for x, (cells, w) in zip(xs, _pool(cfg, one, xs)):
        table.rows.append([x] + cells)
        if w:
            table.warnings.append(w)
    return table


def closed_form_mirror_dc(omega3: float, omega_tau: float, params, three_d=False) -> float | None:
    """Small-d critical thickness over a perfect mirror, from the d^-4 curvature law."""
    x = omega_tau / omega3 if omega3 > 0 else 0.0
    if omega3 <= 0 or x >= smalld.SQRT2:
        return None
    thr = stability.stability_threshold(params, three_d)
    a = 3.0 * smalld.SQRT2 * smalld.HBAR * omega3 * smalld.f_factor(x) / (32.0 * math.pi)
    return (a / thr) ** 0.25


def _critical_table(cfg: RunConfig) -> Table:
    xs = cfg.sweep.values()
    cols = ["omega3_rad_s", "critical_thickness_m", "bracket_lo_m", "bracket_hi_m",
            "e2_at_dc_N_m3", "threshold_N_m3", "mirror_closed_form_m", "reason"]
    mirror = cfg.substrate.is_reflector and cfg.ambient.kind is Kind.VACUUM

    def one(om3):
        def run():
            stack = sample_stack(cfg, "omega3", om3).with_thickness(cfg.d_range[0])
            r = stability.find_critical_thickness(stack, cfg.elastic, cfg.method, cfg.quad,
                                                  cfg.d_range, cfg.three_d)
            lo, hi = r.bracket if r.bracket else (None, None)
            ref = closed_form_mirror_dc(om3, cfg.film.omega_tau, cfg.elastic, cfg.three_d) if mirror else None
            e2 = r.second_derivative if r.critical_thickness is not None else None
            return [r.critical_thickness, lo, hi, e2, r.threshold, ref, r.reason]
        return _guarded(run, 7, f"omega3={om3:.6g}")

    table = Table(cols)
    for x, (cells, w) in zip(xs, _pool(cfg, one, xs)):
        table.rows.append([x] + cells)
        if w:
            table.warnings.append(w)
    return table


def _diagram_table(cfg: RunConfig) -> Table:
    xs = cfg.sweep.values()
    cols = ["omega3_rad_s", "n_roots", "lower_omega1_rad_s", "upper_omega1_rad_s"]

    def one(om3):
        def run():
            roots = stability.boundary_roots(om3, cfg.omega1_range, cfg.d, cfg.elastic,
                                             cfg.film.omega_tau, cfg.substrate.omega_tau, cfg.method,
                                             cfg.quad, cfg.omega1_samples, cfg.three_d)
            lower = [r for r, b in roots if b == "lower"]
            upper = [r for r, b in roots if b == "upper"]
            return [len(roots), min(lower) if lower else None, max(upper) if upper else None]
        return _guarded(run, 3, f"omega3={om3:.6g}")

    table = Table(cols)
    for x, (cells, w) in zip(xs, _pool(cfg, one, xs)):
        table.rows.append([x] + cells)
        if w:
            table.warnings.append(w)
    return table


def _elastic_table(cfg: RunConfig) -> Table:
    p, d = cfg.elastic, cfg.d
    table = Table(["quantity", "value", "unit"])
    rows = table.rows
    rows.append(["threshold", stability.stability_threshold(p, cfg.three_d), "N/m^3"])
    rows.append(["effective_young", p.effective_young(cfg.three_d), "Pa"])
    rows.append(["critical_wavelength", elastic.critical_wavelength(p, cfg.three_d), "m"])
    b = elastic.biaxial_strains(p.mismatch_stress, p)
    rows += [["mismatch_eps_parallel", b.eps_parallel, "1"], ["mismatch_eps_perp", b.eps_perp, "1"]]
    cells, w = _guarded(lambda: _vacuum_cells(cfg, cfg.stack()), len(_VACUUM_COLUMNS), f"d={d:.6g}")
    if w:
        table.warnings.append(w)
    F, e2 = cells[2], cells[4]
    rows += [["thickness", d, "m"], ["vacuum_pressure", F, "N/m^2"], ["vacuum_e2", e2, "N/m^3"]]
    if F is not None:
        s = elastic.strains_with_vacuum(p, d, F)
        rows += [["strain_eps_parallel", s.eps_parallel, "1"], ["strain_eps_perp", s.eps_perp, "1"]]
        rows.append(["equivalent_hamaker", elastic.equivalent_hamaker(e2, d), "J"])
        rows.append(["stable", e2 > stability.stability_threshold(p, cfg.three_d), "bool"])
    try:
        hdc = elastic.hamaker_critical_thickness(p, cfg.three_d)
    except DomainError:
        hdc = None
    rows.append(["hamaker_critical_thickness", hdc, "m"])
    return table


_RUNNERS = {
    "force-sweep": _sweep_table,
    "thickness-scan": _thickness_table,
    "stability-check": _stability_check_table,
    "critical-thickness": _critical_table,
    "stability-diagram": _diagram_table,
    "elastic-report": _elastic_table,
}


def header_lines(cfg: RunConfig) -> list[str]:
    shown = {k: v for k, v in cfg.resolved.items() if k not in ("output", "threads")}
    dumped = yaml.safe_dump(shown, sort_keys=True, default_flow_style=False)
    out = [f"# vacfilm {__version__}", f"# command: {cfg.command}", "# resolved config:"]
    out += [f"#   {line}" for line in dumped.rstrip("\n").splitlines()]
    return out


def render(cfg: RunConfig, table: Table) -> str:
    buf = io.StringIO()
    for line in header_lines(cfg):
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([fmt(c) for c in row])
    return buf.getvalue()


def run(cfg: RunConfig, strict: bool = False, stderr=None) -> tuple[int, str]:
    """Execute a resolved config; returns ``(exit_status, csv_text)``."""
    stderr = stderr or sys.stderr
    table = _RUNNERS[cfg.command](cfg)
    for w in table.warnings:
        print(f"warning: {w}", file=stderr)
    text = render(cfg, table)
    status = EXIT_CONVERGENCE if (strict and table.warnings) else 0
    return status, text


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vacfilm", description="Vacuum forces and stability of thin metal films.")
    ap.add_argument("--version", action="version", version=f"vacfilm {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--output", metavar="PATH")
        p.add_argument("--method", choices=["retarded", "smalld"])
        p.add_argument("--strict", action="store_true", help="exit non-zero if any sample fails")
        p.add_argument("--threads", type=int, metavar="N")
        p.add_argument("--rel-tol", type=float, metavar="X")
        p.add_argument("--check", action="store_true", help="validate the config and exit")
    return ap


def _threads_from_env():
    raw = os.environ.get("CFS_THREADS")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        return raw          # let validation report it


def config_from_args(args) -> tuple[RunConfig, list]:
    """Merge the config file with flag overrides; raises ConfigError / OSError."""
    raw, lines = {}, {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            raw, lines = load_yaml(fh.read())
    raw = dict(raw)
    raw["command"] = args.command
    if args.method:
        raw["method"] = args.method
    if args.rel_tol is not None:
        raw["quad"] = dict(raw.get("quad") or {}, rel_tol=args.rel_tol)
    if args.output:
        raw["output"] = args.output
    threads = args.threads if args.threads is not None else _threads_from_env()
    if threads is not None:
        raw["threads"] = threads
    return resolve(raw, lines, args.config or "<defaults>")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    source = args.config or "<defaults>"
    try:
        cfg, warns = config_from_args(args)
    except ConfigError as exc:
        for d in exc.diagnostics:
            print(d.format(source), file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"{source}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for d in warns:
        print(d.format(source), file=sys.stderr)
    if args.check:
        return 0
    status, text = run(cfg, args.strict)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
