"""Write the CSV data behind each figure class.

    python scripts/reproduce_figures.py --outdir results [--threads 4] [--only force_vs_plasma thickness]

Each experiment is an ordinary run configuration executed through the
batch front end, so ``vacfilm <command> --config ...`` gives the same files.
"""

import argparse
import pathlib
import sys
import time

from vacfilm import cli
from vacfilm.config import resolve

FILM = {"model": "drude", "omega_p": 2e15, "omega_tau": 0.0}
MIRROR = {"model": "perfect_reflector"}


def _film(om=2e15, tau=0.0):
    return dict(FILM, omega_p=om, omega_tau=tau)


def experiments():
    out = {}
    # |F| against film plasma frequency, free-standing, d = 50 nm
    for tau in (0.0, 1e14, 1e15, 5e15):
        out[f"force_vs_plasma_tau{tau:.0e}"] = {
            "command": "force-sweep", "materials": {"film": _film(tau=tau)}, "geometry": {"d": 50e-9},
            "sweep": {"axis": "omega3", "start": 1e14, "stop": 1e18, "spacing": "log", "samples": 64}}
    # force against relaxation frequency
    out["force_vs_relaxation"] = {
        "command": "force-sweep", "materials": {"film": _film(om=1e16)}, "geometry": {"d": 10e-9},
        "sweep": {"axis": "omega_tau3", "start": 1e12, "stop": 1e17, "spacing": "log", "samples": 48}}
    # thickness dependence for low and high plasma frequency
    for om in (2e15, 5e16):
        for tau in (1e14, 1e15, 5e15):
            out[f"thickness_om{om:.0e}_tau{tau:.0e}"] = {
                "command": "thickness-scan", "materials": {"film": _film(om, tau)},
                "sweep": {"axis": "d", "start": 5e-9, "stop": 50e-9, "spacing": "log", "samples": 32}}
    # film on a perfect mirror
    out["mirror_force_vs_plasma"] = {
        "command": "force-sweep", "materials": {"film": _film(om=1e16), "substrate": MIRROR},
        "geometry": {"d": 10e-9},
        "sweep": {"axis": "omega3", "start": 1e14, "stop": 1e18, "spacing": "log", "samples": 64}}
    # stability of a 6 nm film on a mirror against relaxation
    out["mirror_stability_vs_relaxation"] = {
        "command": "stability-check", "method": "small_d",
        "materials": {"film": _film(om=1e16), "substrate": MIRROR}, "geometry": {"d": 6e-9},
        "sweep": {"axis": "omega_tau3", "start": 1e13, "stop": 1.4e16, "spacing": "log", "samples": 48}}
    # critical thickness over a mirror, both methods
    for method in ("small_d", "full_retarded"):
        out[f"ct_mirror_{method}"] = {
            "command": "critical-thickness", "method": method,
            "materials": {"film": _film(om=1e16), "substrate": MIRROR},
            "sweep": {"axis": "omega3", "start": 1e15, "stop": 1e18, "spacing": "log", "samples": 32}}
    # stability diagrams, plasma film on plasma substrate, d = 6 nm
    for method in ("small_d", "full_retarded"):
        out[f"diagram_{method}"] = {
            "command": "stability-diagram", "method": method,
            "materials": {"film": _film(om=1e16), "substrate": {"model": "plasma", "omega_p": 1e16}},
            "geometry": {"d": 6e-9}, "diagram": {"omega1_range": [1e14, 1e20], "omega1_samples": 64},
            "sweep": {"axis": "omega3", "start": 1e15, "stop": 1e18, "spacing": "log", "samples": 32}}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--only", nargs="*", help="name prefixes to run")
    args = ap.parse_args(argv)
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    status = 0
    for name, raw in experiments().items():
        if args.only and not any(name.startswith(p) for p in args.only):
            continue
        cfg, _ = resolve(dict(raw, threads=args.threads))
        t = time.perf_counter()
        code, text = cli.run(cfg)
        (outdir / f"{name}.csv").write_text(text)
        print(f"{name:32s} {time.perf_counter() - t:7.2f} s", file=sys.stderr)
        status |= code
    return status


if __name__ == "__main__":
    raise SystemExit(main())
