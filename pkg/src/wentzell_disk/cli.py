"""Command-line front end: root tables, resolvent sweeps, simulations,
Hautus probes, and Bessel point evaluation.

Every run resolves its configuration, writes it to ``manifest.json`` in
the output directory (with an artifact version string and the seed), and
emits the module CSV files with 17-significant-digit floats, so reruns
with an identical manifest are byte-identical.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .discretize import (
    assemble,
    discrete_eigenvalue,
    hautus_probe,
    resolvent_norm,
    write_hautus_csv,
    write_resolvent_csv,
)
from .bessel import bessel_j, bessel_j_prime
from .errors import InvalidArgumentError, NumericalFailureError
from .roots import asymptotic_root, root_table, sharpness_report, write_roots_csv
from .timedomain import ModePacket, SimulationConfig, fit_decay, simulate

_REFINE_HALF_WIDTH = 0.3
_REFINE_SAMPLES = 21


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wentzell-disk",
        description="Damped Wentzell-boundary wave toolkit on the unit disk")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", type=Path, default=None,
                       help="output directory (default $WENTZELL_OUT or cwd)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)

    p_roots = sub.add_parser("roots", help="certified pencil root table")
    p_roots.add_argument("--n", type=int, default=0)
    p_roots.add_argument("--k-max", type=int, default=60)
    p_roots.add_argument("--tol", type=float, default=1e-12)
    add_common(p_roots)

    p_res = sub.add_parser("resolvent", help="resolvent-norm frequency sweep")
    p_res.add_argument("--lmin", type=float, default=10.0)
    p_res.add_argument("--lmax", type=float, default=200.0)
    p_res.add_argument("--samples", type=int, default=400)
    p_res.add_argument("--grid", type=int, default=4000)
    p_res.add_argument("--n-max", type=int, default=0)
    add_common(p_res)

    p_sim = sub.add_parser("simulate", help="damped evolution of a mode packet")
    p_sim.add_argument("--n", type=int, default=0)
    p_sim.add_argument("--grid", type=int, default=2000)
    p_sim.add_argument("--dt", type=float, default=None,
                       help="time step (default 0.4/omega_top)")
    p_sim.add_argument("--t-max", type=float, default=40.0)
    p_sim.add_argument("--packet-s", type=float, default=2.6)
    p_sim.add_argument("--packet-kmin", type=int, default=1)
    p_sim.add_argument("--packet-kmax", type=int, default=20)
    p_sim.add_argument("--stride", type=int, default=10)
    add_common(p_sim)

    p_h = sub.add_parser("hautus", help="empirical observability constants")
    p_h.add_argument("--lmin", type=float, default=5.0)
    p_h.add_argument("--lmax", type=float, default=100.0)
    p_h.add_argument("--samples", type=int, default=100,
                     help="random probes per frequency")
    p_h.add_argument("--grid", type=int, default=2000)
    p_h.add_argument("--n", type=int, default=0)
    add_common(p_h)

    p_b = sub.add_parser("bessel", help="point evaluation of J_n, J_n'")
    p_b.add_argument("--n", type=int, default=0)
    p_b.add_argument("--z", type=complex, required=True)
    add_common(p_b)

    return parser


def _out_dir(args) -> Path:
    out = args.out
    if out is None:
        env = os.environ.get("WENTZELL_OUT")
        out = Path(env) if env else Path.cwd()
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InvalidArgumentError(f"output directory {out} is unusable: {exc}") from exc
    if not out.is_dir() or not os.access(out, os.W_OK):
        raise InvalidArgumentError(f"output directory {out} is not writable")
    return out


def _write_manifest(out: Path, args, extra: dict | None = None) -> None:
    config = {k: (str(v) if isinstance(v, (Path, complex)) else v)
              for k, v in sorted(vars(args).items()) if k != "out"}
    config["out"] = str(out)
    manifest = {"artifact_version": __version__, "config": config}
    if extra:
        manifest.update(extra)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_roots(args) -> int:
    out = _out_dir(args)
    table = root_table(args.n, args.k_max, tol=args.tol, threads=args.threads)
    write_roots_csv(out / "roots.csv", table)
    _write_manifest(out, args)
    code = 0
    if args.n == 0 and args.k_max >= 30:
        report = sharpness_report(table)
        print(report.render())
        if not report.ok:
            code = 3
    uncertified = [r.k for r in table if not r.certified]
    if uncertified:
        print(f"warning: uncertified roots at k = {uncertified}", file=sys.stderr)
        code = 3
    print(f"wrote {out / 'roots.csv'} ({len(table)} roots)")
    return code


def _predicted_peaks(lmin: float, lmax: float) -> list[float]:
    peaks = []
    k = 1
    while True:
        omega = asymptotic_root(k).real
        if omega > lmax:
            break
        if omega >= lmin:
            peaks.append(omega)
        k += 1
    return peaks


def _cmd_resolvent(args) -> int:
    out = _out_dir(args)
    if args.lmin < 1.0 or args.lmax > 500.0 or args.lmin >= args.lmax:
        raise InvalidArgumentError("need 1 <= lmin < lmax <= 500")
    lams = list(np.linspace(args.lmin, args.lmax, args.samples))
    pencil = assemble(0, args.grid)
    for omega in _predicted_peaks(args.lmin, args.lmax):
        # A uniform grid misses the O(omega^-2)-wide resonances: refine
        # around the discrete eigenvalue nearest each predicted peak.
        z_h, _ = discrete_eigenvalue(pencil, 1j * omega)
        lams.extend(np.linspace(z_h.imag - _REFINE_HALF_WIDTH,
                                z_h.imag + _REFINE_HALF_WIDTH, _REFINE_SAMPLES))
        lams.append(z_h.imag)
    lams = sorted(l for l in set(lams) if args.lmin <= l <= args.lmax)
    rows = []
    for lam in lams:
        norm, flag = resolvent_norm(args.n_max, lam, args.grid)
        rows.append((lam, args.n_max, args.grid, norm, flag))
    write_resolvent_csv(out / "resolvent.csv", rows)
    _write_manifest(out, args)
    print(f"wrote {out / 'resolvent.csv'} ({len(rows)} rows)")
    return 0


def _cmd_simulate(args) -> int:
    out = _out_dir(args)
    packet = ModePacket(k_min=args.packet_kmin, k_max=args.packet_kmax,
                        s=args.packet_s, seed=args.seed)
    table = root_table(args.n, packet.k_max, threads=args.threads)
    omega_top = max(r.omega for r in table)
    dt = args.dt if args.dt is not None else 0.4 / omega_top
    config = SimulationConfig(n=args.n, grid_N=args.grid, dt=dt,
                              t_max=args.t_max, initial=packet,
                              sample_stride=args.stride)
    trace = simulate(config, table=table)
    trace.write_csv(out / "energy.csv")
    t_lo, t_hi = 10.0, min(args.t_max, 1000.0)
    fit = {"alpha": None, "c": None, "r2": None}
    try:
        alpha, c, r2 = fit_decay(trace, (t_lo, t_hi))
        fit = {"alpha": alpha, "c": c, "r2": r2}
    except InvalidArgumentError:
        pass  # window too short for this t_max; manifest records nulls
    summary = dict(fit, t_lo=t_lo, t_hi=t_hi, s=args.packet_s,
                   k_min=args.packet_kmin, k_max=args.packet_kmax,
                   grid_n=args.grid, dt=dt)
    with open(out / "decay_fit.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_manifest(out, args, extra={"resolved_dt": dt})
    print(f"wrote {out / 'energy.csv'} ({trace.t.size} samples) and decay_fit.json")
    return 0


def _cmd_hautus(args) -> int:
    out = _out_dir(args)
    if args.lmin <= 0 or args.lmin >= args.lmax:
        raise InvalidArgumentError("need 0 < lmin < lmax")
    lambdas = np.geomspace(args.lmin, args.lmax, 8)
    report = hautus_probe(lambdas, args.grid, args.samples, seed=args.seed, n=args.n)
    write_hautus_csv(out / "hautus.csv", report)
    _write_manifest(out, args)
    print(f"max ratio {report.overall_max:.4f} "
          f"(reference {report.reference:.4f}, bounded: {report.ok})")
    print(f"wrote {out / 'hautus.csv'}")
    return 0 if report.ok else 3


def _cmd_bessel(args) -> int:
    z = args.z
    val = bessel_j(args.n, z)
    dval = bessel_j_prime(args.n, z)
    if z.imag == 0.0 and abs(val.imag) < 1e-300:
        print(f"{val.real:.15g}")
        print(f"J_{args.n}'({z.real:g}) = {dval.real:.15g}")
    else:
        print(f"J_{args.n}({z}) = {val}")
        print(f"J_{args.n}'({z}) = {dval}")
    out = _out_dir(args)
    _write_manifest(out, args)
    return 0


_COMMANDS = {
    "roots": _cmd_roots,
    "resolvent": _cmd_resolvent,
    "simulate": _cmd_simulate,
    "hautus": _cmd_hautus,
    "bessel": _cmd_bessel,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.subcommand](args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
