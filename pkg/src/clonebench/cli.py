"""Command-line entry points: sweep, point, frontier, and verify.

Exit codes: 0 on success, 1 when a tolerance or acceptance check fails,
2 on usage errors (unknown machine, malformed grid, bad config).

Options can come from an INI config file (``--config``); explicit flags win
over the file, which wins over built-in defaults.  The default random seed
is the CLONEBENCH_SEED environment variable when set.

Config file layout (any part can be omitted)::

    [sweep]
    machine = pdc-112
    format = csv
    jobs = 2

    [sweep.grids]
    T = 0.5:1:50

    [point]
    machine = asym1n
    y = 0.3

    [frontier]
    machine = choi
    points = 10

    [verify]
    seed = 1
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

from . import sweeps, verify
from .sweeps import DEFAULT_TOLERANCES, GridSpec, SweepConfig

FRONTIER_MACHINES = ("asym1n", "tripartite", "choi")
# frontier residuals compare two optimization routes, so they carry the
# cross-route tolerance rather than a per-machine oracle tolerance
FRONTIER_TOLERANCE = DEFAULT_TOLERANCES["choi"]


class UsageError(Exception):
    pass


def _env_seed() -> int:
    raw = os.environ.get("CLONEBENCH_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"CLONEBENCH_SEED must be an integer, got {raw!r}")


def _load_config(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}")
        except configparser.Error as exc:
            raise UsageError(f"malformed config file: {exc}")
    return cp


def _pick(flag, cfg: configparser.ConfigParser, section: str, key: str, cast, default):
    """Flag value if given, else config value, else default."""
    if flag is not None:
        return flag
    if cfg.has_option(section, key):
        try:
            return cast(cfg.get(section, key))
        except ValueError as exc:
            raise UsageError(f"config [{section}] {key}: {exc}")
    return default


def _parse_grid_flag(text: str) -> tuple[str, GridSpec]:
    name, eq, spec = text.partition("=")
    if not eq or not name:
        raise UsageError(f"grid must look like param=start:stop:points, got {text!r}")
    try:
        return name, GridSpec.parse(spec)
    except ValueError as exc:
        raise UsageError(str(exc))


def _collect_grids(args, cfg: configparser.ConfigParser, section: str) -> dict[str, GridSpec]:
    grids: dict[str, GridSpec] = {}
    if cfg.has_section(section):
        for name, spec in cfg.items(section):
            try:
                grids[name] = GridSpec.parse(spec)
            except ValueError as exc:
                raise UsageError(f"config [{section}] {name}: {exc}")
    for entry in args.grid or ():
        name, spec = _parse_grid_flag(entry)
        grids[name] = spec
    return grids


def _floats(text: str, count: int, what: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"{what} needs {count} comma-separated values, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"{what} must be numeric, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clonebench",
        description="Optimal asymmetric cloning machines: sweeps, frontiers, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, machines) -> None:
        p.add_argument("--config", help="INI config file; explicit flags win")
        p.add_argument("--machine", choices=machines)
        p.add_argument("--d", type=int, help="local dimension (default 2)")
        p.add_argument("--n", type=int, help="clone count for asym1n (default 2)")
        p.add_argument("--seed", type=int, help="RNG seed (default $CLONEBENCH_SEED or 0)")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "jsonl"), dest="fmt")
        p.add_argument("--tolerance", type=float, help="pass/fail bound on |residual|")

    p_sweep = sub.add_parser("sweep", help="evaluate a parameter grid and write records")
    common(p_sweep, sweeps.MACHINES)
    p_sweep.add_argument(
        "--grid",
        action="append",
        metavar="param=start:stop:points",
        help="override a machine parameter grid (repeatable)",
    )
    p_sweep.add_argument("--jobs", type=int, help="worker processes (default 1)")

    p_point = sub.add_parser("point", help="evaluate one parameter point, print JSON")
    common(p_point, sweeps.MACHINES)
    p_point.add_argument("--y", type=float, help="asym1n trade-off parameter in [0, 1]")
    p_point.add_argument("--t", type=float, help="beam-splitter transmittance in [1/2, 1]")
    p_point.add_argument("--t1", type=float, help="cascade first transmittance")
    p_point.add_argument("--t2", type=float, help="cascade second transmittance")
    p_point.add_argument("--branch", choices=("1+2", "2+1"), help="pdc-112 photon split")
    p_point.add_argument("--ratios", help="tripartite asymmetry ratios r_ab,r_ac")
    p_point.add_argument("--weights", help="choi score weights a,b,c")

    p_front = sub.add_parser("frontier", help="walk the optimal trade-off curve")
    common(p_front, FRONTIER_MACHINES)
    p_front.add_argument("--points", type=int, help="curve resolution (default 25)")

    p_verify = sub.add_parser("verify", help="run every acceptance criterion")
    p_verify.add_argument("--config", help="INI config file; explicit flags win")
    p_verify.add_argument("--seed", type=int, help="RNG seed (default $CLONEBENCH_SEED or 0)")
    p_verify.add_argument("--report", help="write the JSON report to this path")
    p_verify.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    p_verify.add_argument("--quiet", action="store_true", help="one line per criterion only")
    p_verify.add_argument(
        "--inject-failure",
        type=int,
        metavar="N",
        help="negative control: force criterion N to fail",
    )
    return parser


def _common_values(args, cfg, section: str):
    machine = _pick(args.machine, cfg, section, "machine", str, None)
    if machine is None:
        raise UsageError(f"{section}: --machine is required (flag or config)")
    return {
        "machine": machine,
        "d": _pick(args.d, cfg, section, "d", int, 2),
        "n": _pick(args.n, cfg, section, "n", int, 2),
        "seed": _pick(args.seed, cfg, section, "seed", int, _env_seed()),
        "out": _pick(args.out, cfg, section, "out", str, None),
        "fmt": _pick(args.fmt, cfg, section, "format", str, "csv"),
        "tolerance": _pick(args.tolerance, cfg, section, "tolerance", float, None),
    }


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    vals = _common_values(args, cfg, "sweep")
    try:
        config = SweepConfig(
            machine=vals["machine"],
            d=vals["d"],
            n=vals["n"],
            seed=vals["seed"],
            grids=_collect_grids(args, cfg, "sweep.grids"),
            out=vals["out"],
            fmt=vals["fmt"],
            jobs=_pick(args.jobs, cfg, "sweep", "jobs", int, 1),
            tolerance=vals["tolerance"],
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    summary = sweeps.run_sweep(config)
    flag = "PASS" if summary.passed else "FAIL"
    resid = "n/a" if summary.max_abs_residual is None else f"{summary.max_abs_residual:.3e}"
    print(
        f"[{flag}] sweep {summary.machine}: {summary.records} records, "
        f"{summary.with_residual} with residuals, max |residual| {resid} "
        f"(tolerance {summary.tolerance:.1e})",
        file=sys.stderr,
    )
    return 0 if summary.passed else 1


_POINT_PARAMS = {
    "asym1n": ("y",),
    "tripartite": ("ratios",),
    "choi": ("weights",),
    "pdc-111": ("t",),
    "pdc-112": ("t", "branch"),
    "pdc-1111": ("t1", "t2"),
}


def _cmd_point(args) -> int:
    cfg = _load_config(args.config)
    vals = _common_values(args, cfg, "point")
    machine = vals["machine"]
    point: dict[str, float | str] = {}
    for name in _POINT_PARAMS[machine]:
        value = _pick(getattr(args, name), cfg, "point", name, str, None)
        if value is None:
            raise UsageError(f"machine {machine} needs --{name}")
        if name == "ratios":
            r_ab, r_ac = _floats(str(value), 2, "--ratios")
            point.update(r_ab=r_ab, r_ac=r_ac)
        elif name == "weights":
            a, b, c = _floats(str(value), 3, "--weights")
            point.update(a=a, b=b, c=c)
        elif name == "branch":
            if value not in ("1+2", "2+1"):
                raise UsageError(f"--branch must be 1+2 or 2+1, got {value!r}")
            point["branch"] = str(value)
        else:
            point[{"t": "T", "t1": "T1", "t2": "T2"}.get(name, name)] = float(value)
    try:
        record = sweeps.evaluate_point(
            machine, vals["d"], vals["n"], vals["seed"], 0, point
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    line = record.to_json()
    if vals["out"] is not None:
        with open(vals["out"], "w", encoding="utf-8") as fh:
            fh.write(line + "\n")
    else:
        print(line)
    tol = vals["tolerance"] if vals["tolerance"] is not None else DEFAULT_TOLERANCES[machine]
    if record.residual is not None and abs(record.residual) > tol:
        print(
            f"[FAIL] point residual {record.residual:.3e} exceeds tolerance {tol:.1e}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_frontier(args) -> int:
    cfg = _load_config(args.config)
    vals = _common_values(args, cfg, "frontier")
    machine = vals["machine"]
    if machine not in FRONTIER_MACHINES:
        raise UsageError(f"frontier supports {FRONTIER_MACHINES}, not {machine!r}")
    points = _pick(args.points, cfg, "frontier", "points", int, 25)
    if points < 2:
        raise UsageError("--points must be at least 2")
    records = sweeps.frontier_records(machine, vals["d"], vals["n"], points, vals["seed"])
    shape = SweepConfig(machine=machine, d=vals["d"], n=vals["n"], fmt=vals["fmt"])
    if vals["out"] is not None:
        with open(vals["out"], "w", encoding="utf-8", newline="") as fh:
            sweeps._write_records(records, shape, fh)
    else:
        sweeps._write_records(records, shape, sys.stdout)
    residuals = [r.residual for r in records if r.residual is not None]
    tol = vals["tolerance"] if vals["tolerance"] is not None else FRONTIER_TOLERANCE
    worst = max((abs(x) for x in residuals), default=None)
    passed = worst is None or worst <= tol
    resid = "n/a" if worst is None else f"{worst:.3e}"
    print(
        f"[{'PASS' if passed else 'FAIL'}] frontier {machine}: {len(records)} records, "
        f"max cross-route |residual| {resid} (tolerance {tol:.1e})",
        file=sys.stderr,
    )
    return 0 if passed else 1


def _cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    seed = _pick(args.seed, cfg, "verify", "seed", int, _env_seed())
    inject = args.inject_failure
    if inject is not None and not 1 <= inject <= verify.N_CRITERIA:
        raise UsageError(f"--inject-failure takes 1..{verify.N_CRITERIA}")
    results = verify.run_all(seed=seed, inject_failure=inject)
    payload = verify.report_payload(results, seed)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(verify.render_report(results, verbose=not args.quiet))
    report_path = _pick(args.report, cfg, "verify", "report", str, None)
    if report_path is not None:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return 0 if all(r.passed for r in results) else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "sweep": _cmd_sweep,
        "point": _cmd_point,
        "frontier": _cmd_frontier,
        "verify": _cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
