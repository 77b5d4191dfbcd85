"""
Command-line entry point: ``sgdecoherence {sweep,feasibility,consistency,constants}``.

Exit codes
----------
0  success, output written
2  usage error (unknown flag or subcommand, bad choice)
3  missing required flag
4  unparsable number
5  physical invariant violated (e.g. negative mass, theta out of range)
6  I/O error (output or config file)
7  computation error (inconsistent routes, degenerate configuration)
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .constants import CODATA, YB_MASS, YB_SEPARATION, ExperimentParams, PhysConstants, planck_mass
from .errors import InvariantError, OutputError, SGDecoherenceError
from .experiment import ENGINES, SweepSpec, consistency_run, feasibility, run_sweep
from .serialize import _emit, write_report, write_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING = 3
EXIT_NUMBER = 4
EXIT_INVARIANT = 5
EXIT_IO = 6
EXIT_COMPUTE = 7

COMMANDS = ("sweep", "feasibility", "consistency", "constants")


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(EXIT_USAGE, message)


@dataclass
class RunConfig:
    command: str
    params: ExperimentParams
    constants: PhysConstants = CODATA
    durations: tuple = ()
    theta_start: float = 0.0
    theta_end: float = 2 * math.pi
    theta_points: int = 721
    engine: str = "analytic"
    fmt: Optional[str] = None
    output: Optional[str] = None
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def sweep_spec(self) -> SweepSpec:
        return SweepSpec(self.params, self.theta_start, self.theta_end, self.theta_points,
                         self.durations, self.engine)


def _build_parser() -> _Parser:
    parser = _Parser(prog="sgdecoherence",
                     description="Gravitational self-decoherence in a Stern-Gerlach interferometer.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def physical(p):
        p.add_argument("--config", help="JSON file with default values for any flag")
        p.add_argument("--mass", help="particle mass, kg (default 1e-14)")
        p.add_argument("--separation", help="arm separation d, m (default 250e-6)")
        p.add_argument("--G", dest="G", help="override gravitational constant")
        p.add_argument("--hbar", help="override reduced Planck constant")
        p.add_argument("--c", dest="c", help="override speed of light")
        p.add_argument("--output", help="output path (default: stdout)")

    p = sub.add_parser("sweep", help="tabulate P_x+, P_qm and D over a theta grid")
    physical(p)
    p.add_argument("--durations", help="comma-separated durations, s")
    p.add_argument("--duration", help="single duration, s (alias)")
    p.add_argument("--theta-start", dest="theta_start")
    p.add_argument("--theta-end", dest="theta_end")
    p.add_argument("--theta-points", dest="theta_points")
    p.add_argument("--engine", choices=ENGINES, default="analytic")
    p.add_argument("--workers", default="1")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"))

    p = sub.add_parser("feasibility", help="phase scale, kinetic ratio and max deviation")
    physical(p)
    p.add_argument("--duration", help="experiment duration, s")
    p.add_argument("--format", dest="fmt", choices=("text", "json"))

    p = sub.add_parser("consistency", help="closed form vs RK4 integration for one theta")
    physical(p)
    p.add_argument("--duration", help="experiment duration, s")
    p.add_argument("--theta", help="preparation angle, rad")
    p.add_argument("--format", dest="fmt", choices=("text", "json"))

    p = sub.add_parser("constants", help="print the constants in use and the reduced Planck mass")
    physical(p)
    p.add_argument("--format", dest="fmt", choices=("text", "json"))
    return parser


def _number(flag: str, raw, kind=float):
    if raw is None:
        return None
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        value = raw
    else:
        try:
            value = kind(str(raw).strip())
        except ValueError:
            raise CLIError(EXIT_NUMBER, f"{flag}: cannot parse {raw!r} as a number") from None
    if kind is float and not math.isfinite(value):
        raise CLIError(EXIT_INVARIANT, f"{flag}: value must be finite, got {raw!r}")
    return kind(value)


def _number_list(flag: str, raw):
    if raw is None:
        return None
    items = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
    return tuple(_number(flag, item) for item in items)


def _load_config(path: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CLIError(EXIT_IO, f"--config: cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(EXIT_USAGE, f"--config: {path} is not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise CLIError(EXIT_USAGE, f"--config: {path} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in doc.items()}


def parse_args(argv) -> RunConfig:
    """Turn ``argv`` into a validated :class:`RunConfig` or raise :class:`CLIError`."""
    parser = _build_parser()
    ns, unknown = parser.parse_known_args(list(argv))
    if unknown:
        raise CLIError(EXIT_USAGE, f"unknown flag(s): {' '.join(unknown)}")
    if ns.command is None:
        raise CLIError(EXIT_USAGE, f"a subcommand is required: {', '.join(COMMANDS)}")

    raw = vars(ns)
    if ns.config:
        config = _load_config(ns.config)
        allowed = set(raw) - {"command", "config"}
        bad = sorted(set(config) - allowed)
        if bad:
            raise CLIError(EXIT_USAGE, f"--config: unknown key(s) {', '.join(bad)}")
        for key, value in config.items():
            if raw.get(key) is None or (key in ("engine", "workers") and f"--{key}" not in argv):
                raw[key] = value

    # Numbers first, then physical invariants, then required flags.
    mass = _number("--mass", raw.get("mass"))
    separation = _number("--separation", raw.get("separation"))
    G = _number("--G", raw.get("G"))
    hbar = _number("--hbar", raw.get("hbar"))
    c = _number("--c", raw.get("c"))
    duration = _number("--duration", raw.get("duration"))
    durations = _number_list("--durations", raw.get("durations"))
    theta = _number("--theta", raw.get("theta"))
    theta_start = _number("--theta-start", raw.get("theta_start"))
    theta_end = _number("--theta-end", raw.get("theta_end"))
    theta_points = _number("--theta-points", raw.get("theta_points"), int)
    workers = _number("--workers", raw.get("workers", 1), int) if ns.command == "sweep" else 1

    try:
        constants = CODATA.with_overrides(G=G, hbar=hbar, c=c)
        params = ExperimentParams(
            mass=YB_MASS if mass is None else mass,
            separation=YB_SEPARATION if separation is None else separation,
            duration=duration if duration is not None and ns.command != "sweep" else 0.0,
            theta=theta if theta is not None else 0.0,
        )
        if ns.command == "sweep" and duration is not None:
            durations = (durations or ()) + (duration,)
        cfg = RunConfig(command=ns.command, params=params, constants=constants,
                        fmt=raw.get("fmt"), output=raw.get("output"))
        if ns.command == "sweep":
            if workers < 1:
                raise InvariantError(f"--workers must be >= 1, got {workers}")
            cfg.engine = raw.get("engine") or "analytic"
            if cfg.engine not in ENGINES:
                raise CLIError(EXIT_USAGE, f"--engine must be one of {ENGINES}")
            cfg.workers = workers
            cfg.theta_start = 0.0 if theta_start is None else theta_start
            cfg.theta_end = 2 * math.pi if theta_end is None else theta_end
            cfg.theta_points = 721 if theta_points is None else theta_points
            if durations:
                cfg.durations = durations
                cfg.sweep_spec()
    except InvariantError as exc:
        raise CLIError(EXIT_INVARIANT, str(exc)) from None

    if ns.command == "sweep" and not durations:
        raise CLIError(EXIT_MISSING, "sweep: --durations is required")
    if ns.command in ("feasibility", "consistency") and duration is None:
        raise CLIError(EXIT_MISSING, f"{ns.command}: --duration is required")
    if ns.command == "consistency" and theta is None:
        raise CLIError(EXIT_MISSING, "consistency: --theta is required")
    return cfg


def _constants_text(constants: PhysConstants) -> str:
    return "\n".join([
        f"G           {repr(constants.G)}",
        f"hbar        {repr(constants.hbar)}",
        f"c           {repr(constants.c)}",
        f"planck_mass {repr(planck_mass(constants))}",
    ]) + "\n"


def execute(cfg: RunConfig) -> int:
    """Run a parsed configuration; returns bytes written."""
    if cfg.command == "sweep":
        result = run_sweep(cfg.sweep_spec(), cfg.constants, workers=cfg.workers)
        return write_sweep(result, cfg.fmt or "csv", cfg.output)
    if cfg.command == "feasibility":
        return write_report(feasibility(cfg.params, cfg.constants), cfg.fmt or "text", cfg.output)
    if cfg.command == "consistency":
        gap = consistency_run(cfg.params, cfg.constants, cfg.params.theta)
        if cfg.fmt == "json":
            text = json.dumps({"theta": cfg.params.theta, "duration": cfg.params.duration,
                               "max_discrepancy": gap}, sort_keys=True) + "\n"
        else:
            text = f"max_discrepancy {gap!r}\n"
        return _emit(text, cfg.output)
    if cfg.fmt == "json":
        doc = dict(cfg.constants.as_dict(), planck_mass=planck_mass(cfg.constants))
        return _emit(json.dumps(doc, sort_keys=True) + "\n", cfg.output)
    return _emit(_constants_text(cfg.constants), cfg.output)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_args(argv)
        execute(cfg)
    except CLIError as exc:
        print(f"sgdecoherence: error: {exc}", file=sys.stderr)
        return exc.code
    except OutputError as exc:
        print(f"sgdecoherence: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvariantError as exc:
        print(f"sgdecoherence: error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except SGDecoherenceError as exc:
        print(f"sgdecoherence: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
