"""Command-line interface: ``crow-sense {spectrum,poles,simulate,sensitivity,selfcheck}``."""
from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .chainsim import green_probe, integrate
from .errors import ConfigurationError, CrowSenseError
from .greenfn import effective_couplings, find_poles, long_time_field
from .noise import sensitivity_curve
from .params import SystemParams, apply_overrides, params_from_config, validate
from .spectral import spectral_density

log = logging.getLogger("crow_sense")

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def fmt(x) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SweepSpec:
    name: str
    lo: float
    hi: float
    steps: int
    scale: str = "linear"

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        try:
            name, rng = text.split("=", 1)
            lo, hi, steps = rng.split(":")
            spec = cls(name.strip(), float(lo), float(hi), int(steps))
        except ValueError:
            raise ConfigurationError(f"--sweep expects PARAM=min:max:steps, got {text!r}") from None
        if spec.name not in SystemParams.__dataclass_fields__:
            raise ConfigurationError(f"--sweep: unknown parameter {spec.name!r}")
        if not (spec.lo < spec.hi and spec.steps >= 2):
            raise ConfigurationError("--sweep needs min < max and steps >= 2")
        return spec

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value parameter file")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[], dest="overrides",
                        help="override one parameter (repeatable)")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="crow-sense", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", parents=[common], help="reservoir spectral density")
    sp.add_argument("--omega-min", type=float)
    sp.add_argument("--omega-max", type=float)
    sp.add_argument("--steps", type=int, default=1001)

    pp = sub.add_parser("poles", parents=[common], help="zeros of D on both sheets")
    pp.add_argument("--sweep", metavar="PARAM=MIN:MAX:STEPS")
    pp.add_argument("--sheet", choices=["one", "two", "all"], default="all")
    pp.add_argument("--jobs", type=int, default=1)

    sm = sub.add_parser("simulate", parents=[common], help="time-domain chain simulation")
    sm.add_argument("--t-end", type=float, default=100.0)
    sm.add_argument("--grid", type=int, default=1001, help="number of output times")
    sm.add_argument("--n-chain", type=int, help="simulated chain length (default: reflection free)")
    sm.add_argument("--green", action="store_true", help="emit Green's functions instead of driven fields")

    se = sub.add_parser("sensitivity", parents=[common], help="added noise and force sensitivity")
    se.add_argument("--omega-min", type=float, default=0.5)
    se.add_argument("--omega-max", type=float, default=1.5)
    se.add_argument("--steps", type=int, default=1001)
    se.add_argument("--temperature-si", type=float)
    se.add_argument("--no-thermal", action="store_true", help="drop the mechanical thermal input")
    se.add_argument("--json", metavar="PATH", help="sidecar path (default: OUT.json when --out is set)")

    sub.add_parser("selfcheck", parents=[common], help="run the invariant suite")
    return parser


def _params(args) -> SystemParams:
    p = params_from_config(args.config, args.overrides)
    report = validate(p)
    if not report.ok:
        raise ConfigurationError("invalid parameters: " + "; ".join(report))
    return p


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(c if isinstance(c, str) else fmt(c) for c in row) + "\n")
    return buf.getvalue()


def cmd_spectrum(args) -> int:
    p = _params(args)
    lo, hi = p.band_edges
    w_min = lo - 1.0 if args.omega_min is None else args.omega_min
    w_max = hi + 1.0 if args.omega_max is None else args.omega_max
    if not (w_min < w_max and args.steps >= 2):
        raise ConfigurationError("need --omega-min < --omega-max and --steps >= 2")
    omega = np.linspace(w_min, w_max, args.steps)
    j_ss, j_so, j_oo = spectral_density(omega, p)
    _emit(_csv(["omega", "j_ss", "j_so", "j_oo"], zip(omega, j_ss, j_so, j_oo)), args.out)
    return EXIT_OK


def _pole_rows(p: SystemParams, sheet: str, label: str):
    rows = []
    for q in find_poles(p):
        if sheet != "all" and q.sheet.name.lower() != sheet:
            continue
        flag = ("1" if q.is_bound_state else "0") if q.resolved else "UNRESOLVED"
        rows.append((label, q.location.real, q.location.imag, q.sheet.name, flag))
    return rows


def _sweep_point(job):
    p, sheet, label = job
    return _pole_rows(p, sheet, label)


def cmd_poles(args) -> int:
    p = _params(args)
    header = ["param", "re_omega_r", "im_omega_r", "sheet", "is_bound"]
    if args.sweep is None:
        rows = _pole_rows(p, args.sheet, "")
    else:
        spec = SweepSpec.parse(args.sweep)
        jobs = []
        for v in spec.values():
            q = apply_overrides(p, {spec.name: v})
            report = validate(q)
            if not report.ok:
                raise ConfigurationError(f"{spec.name}={v}: " + "; ".join(report))
            jobs.append((q, args.sheet, fmt(v)))
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                parts = list(pool.map(_sweep_point, jobs))
        else:
            parts = [_sweep_point(j) for j in jobs]
        rows = [r for part in parts for r in part]
    for r in rows:
        if r[4] == "UNRESOLVED":
            log.warning("unresolved pole candidate near %s%+.3gi (%s)", r[1], r[2], r[3])
    _emit(_csv(header, rows), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    p = _params(args)
    if args.grid < 2:
        raise ConfigurationError("--grid needs at least 2 points")
    grid = np.linspace(0.0, args.t_end, args.grid)
    if args.green:
        t, a_s, a_o = green_probe(p, args.t_end, grid, args.n_chain)
    else:
        tr = integrate(p, args.t_end, grid=grid, n_chain=args.n_chain)
        t, a_s, a_o = tr.t, tr.alpha_s, tr.alpha_o
    rows = zip(t, a_s.real, a_s.imag, a_o.real, a_o.imag)
    _emit(_csv(["t", "re_alpha_s", "im_alpha_s", "re_alpha_o", "im_alpha_o"], rows), args.out)
    return EXIT_OK


def _pole_json(q):
    return {"re": q.location.real, "im": q.location.imag, "sheet": q.sheet.name,
            "is_bound_state": q.is_bound_state, "is_real": q.is_real, "resolved": q.resolved,
            "residue_s": [q.residue_s.real, q.residue_s.imag],
            "residue_o": [q.residue_o.real, q.residue_o.imag]}


def cmd_sensitivity(args) -> int:
    p = _params(args)
    if args.temperature_si is not None:
        p = p.replace(temperature_si=args.temperature_si)
    if not (args.omega_min < args.omega_max and args.steps >= 2 and args.omega_min >= 0):
        raise ConfigurationError("need 0 <= --omega-min < --omega-max and --steps >= 2")
    omega = np.linspace(args.omega_min, args.omega_max, args.steps)
    poles = find_poles(p)
    couplings = effective_couplings(p, long_time_field(p, poles))
    curve = sensitivity_curve(p, omega, include_thermal=not args.no_thermal,
                              couplings=couplings, poles=poles)
    c = curve.components
    rows = zip(omega, curve.s_add, curve.f_s, c.thermal, c.shot, c.cavity_o, c.cavity_s, c.reservoir)
    header = ["omega", "s_add", "f_s_si", "thermal", "shot", "cav_o", "cav_s", "reservoir"]
    _emit(_csv(header, rows), args.out)
    side = args.json or (args.out + ".json" if args.out else None)
    if side:
        meta = {
            "tool": "crow-sense",
            "version": __version__,
            "params": p.to_dict(),
            "include_thermal": not args.no_thermal,
            "tolerances": {"dedup": 1e-7, "real": 1e-9, "real_axis_offset": 1e-9},
            "poles": [_pole_json(q) for q in poles],
            "couplings": {"g0": [couplings.g0.real, couplings.g0.imag],
                          "bound": [{"omega_r": w, "g_n": [g.real, g.imag]} for w, g in couplings.bound]},
            "thermal_floor_si": curve.thermal_floor,
            "zero_point_line_si": curve.zero_point_line,
        }
        Path(side).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_checks

    p = _params(args)
    results = run_checks(p)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}" for name, ok, detail in results]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_DOMAIN


COMMANDS = {"spectrum": cmd_spectrum, "poles": cmd_poles, "simulate": cmd_simulate,
            "sensitivity": cmd_sensitivity, "selfcheck": cmd_selfcheck}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"crow-sense: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CrowSenseError as exc:
        print(f"crow-sense: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
