"""Command-line entry point: compile, bench, sweep, render, validate."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields, replace
from pathlib import Path

from .artifact import Artifact, ArtifactError
from .config import METHODS, CompileConfig
from .errors import AtomRouteError, ParseError
from .frontend import load_qasm
from .metrics import OperatingPoint, sweep_fsh
from .pipeline import BUDGET_EXCEEDED, NO_VALID_TRANSPORT, OK, compile_circuit
from .placement import AnnealOptions
from .render import render_svg
from .validate import validate_schedule

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_NO_TRANSPORT = 3
EXIT_BUDGET = 4
EXIT_NO_SCHEDULE = 5

OUTCOME_EXIT = {OK: EXIT_OK, NO_VALID_TRANSPORT: EXIT_NO_TRANSPORT, BUDGET_EXCEEDED: EXIT_BUDGET}
CONFIG_ENV = "ATOMROUTE_CONFIG"
DEFAULT_FSH = (1.0, 0.999, 0.99)
BENCH_COLUMNS = [
    "circuit", "method", "qubits", "cz", "swaps", "shuttles", "layers",
    "exec_time_us", "m2_exec_time_us", "log_fidelity", "outcome", "compile_seconds",
]


class ConfigError(ValueError):
    pass


def _emit_error(kind: str, message: str, **extra) -> None:
    print(json.dumps({"error": kind, "message": message, **extra}), file=sys.stderr)


def load_config(path: str | None) -> dict:
    """Flat JSON config; falls back to ``$ATOMROUTE_CONFIG`` when no path is given."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def build_settings(
    data: dict, method: str | None = None, overrides: dict | None = None
) -> tuple[CompileConfig, OperatingPoint, AnnealOptions]:
    """Split a flat config into the three settings objects; ``overrides`` wins."""
    data = {**data, **{k: v for k, v in (overrides or {}).items() if v is not None}}
    method = method or data.pop("method", None) or "proposed-ring"
    data.pop("method", None)
    if method not in METHODS:
        raise ConfigError(f"unknown method '{method}'")
    groups = {
        "compile": {f.name for f in fields(CompileConfig)} - {"method", "hubs_enabled", "eviction_enabled", "ring_enabled"},
        "op": {f.name for f in fields(OperatingPoint)},
        "anneal": {f.name for f in fields(AnnealOptions)},
    }
    unknown = set(data) - set().union(*groups.values())
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    pick = {k: {n: data[n] for n in names if n in data} for k, names in groups.items()}
    try:
        cfg = CompileConfig.for_method(method, **pick["compile"])
        if not cfg.hubs_enabled:
            cfg = replace(cfg, n_hub=0)
        op = OperatingPoint(**pick["op"])
        anneal = AnnealOptions(**pick["anneal"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg, op, anneal


def _settings_from_args(args) -> tuple[CompileConfig, OperatingPoint, AnnealOptions]:
    overrides = {
        "n_hub": args.n_hub,
        "seed": args.seed,
        "budget_seconds": args.budget_seconds,
        "f_sh": args.fsh,
    }
    return build_settings(load_config(args.config), args.method, overrides)


def run_compile(path, cfg, op, anneal) -> Artifact:
    circuit = load_qasm(path)
    return Artifact.from_result(compile_circuit(circuit, cfg, op, anneal))


def cmd_compile(args) -> int:
    try:
        cfg, op, anneal = _settings_from_args(args)
        art = run_compile(args.input, cfg, op, anneal)
    except ConfigError as exc:
        _emit_error("ConfigError", str(exc))
        return EXIT_PARSE
    except (ParseError, OSError) as exc:
        _emit_error(type(exc).__name__, str(exc), line=getattr(exc, "line", None))
        return EXIT_PARSE
    except AtomRouteError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_INVALID
    out = args.output or f"{Path(args.input).stem}.{cfg.method}.json"
    art.write(out)
    code = OUTCOME_EXIT[art.outcome]
    if code:
        _emit_error(art.outcome, art.detail.get("message", ""), detail=art.detail, artifact=str(out))
    else:
        m = art.metrics
        print(
            f"{art.circuit.name} [{cfg.method}] ok: {m.counts['swaps']} swaps, {m.counts['shuttles']} shuttles, "
            f"{m.counts['layers']} layers, {m.exec_time_us:.1f} us, log F = {m.log_fidelity:.6g} -> {out}"
        )
    return code


def _bench_job(job: tuple) -> tuple[dict, str | None]:
    path, method, base, art_path = job
    name = Path(path).stem
    row = {k: "" for k in BENCH_COLUMNS}
    row.update(circuit=name, method=method)
    try:
        cfg, op, anneal = build_settings(base, method)
        art = run_compile(path, cfg, op, anneal)
    except (AtomRouteError, OSError, ConfigError) as exc:
        row["outcome"] = type(exc).__name__
        return row, str(exc)
    art.write(art_path)
    row.update(
        qubits=art.circuit.num_qubits,
        cz=art.circuit.cz_count,
        outcome=art.outcome,
        compile_seconds=f"{art.compile_seconds:.3f}",
    )
    if art.ok:
        m = art.metrics
        row.update(
            swaps=m.counts["swaps"],
            shuttles=m.counts["shuttles"],
            layers=m.counts["layers"],
            exec_time_us=repr(m.exec_time_us),
            m2_exec_time_us=repr(m.m2_exec_time_us),
            log_fidelity=repr(m.log_fidelity),
        )
    return row, None


def read_manifest(path) -> tuple[list[Path], list[str], dict]:
    """``{"circuits": [...], "methods": [...], "config": {...}}``; paths are relative to the manifest."""
    p = Path(path)
    data = json.loads(p.read_text())
    circuits = [(p.parent / c).resolve() for c in data["circuits"]]
    methods = data.get("methods", list(METHODS))
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method '{m}' in manifest")
    return circuits, methods, data.get("config", {})


def cmd_bench(args) -> int:
    try:
        circuits, methods, mconf = read_manifest(args.manifest)
        base = {**load_config(args.config), **mconf}
        if args.budget_seconds is not None:
            base["budget_seconds"] = args.budget_seconds
        if args.seed is not None:
            base["seed"] = args.seed
        build_settings(base, methods[0] if methods else None)
    except (OSError, json.JSONDecodeError, KeyError, ConfigError) as exc:
        _emit_error("ConfigError", str(exc))
        return EXIT_PARSE
    out = Path(args.out_dir)
    (out / "artifacts").mkdir(parents=True, exist_ok=True)
    jobs = [
        (str(c), m, base, str(out / "artifacts" / f"{c.stem}.{m}.json")) for c in circuits for m in methods
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_bench_job, jobs))
    else:
        results = [_bench_job(j) for j in jobs]
    with open(out / "results.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        for row, err in results:
            w.writerow(row)
            if err:
                _emit_error(row["outcome"], err, circuit=row["circuit"], method=row["method"])
    print(f"{len(results)} rows -> {out / 'results.csv'}")
    return EXIT_OK


def _load_artifact(path) -> Artifact:
    art = Artifact.read(path)
    art.require_schedule()
    return art


def _with_artifact(fn):
    def run(args) -> int:
        try:
            art = _load_artifact(args.artifact)
        except ArtifactError as exc:
            _emit_error("MissingSchedule", str(exc))
            return EXIT_NO_SCHEDULE
        except OSError as exc:
            _emit_error("OSError", str(exc))
            return EXIT_NO_SCHEDULE
        return fn(args, art)

    return run


def parse_values(text: str | None) -> list[float]:
    if not text:
        return list(DEFAULT_FSH)
    return [float(v) for v in text.split(",") if v.strip()]


@_with_artifact
def cmd_sweep(args, art: Artifact) -> int:
    rows = sweep_fsh(art.schedule, art.op, parse_values(args.values))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["f_sh", "log_fidelity"])
    for f, lf in rows:
        w.writerow([repr(f), repr(lf)])
    if args.output:
        Path(args.output).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


@_with_artifact
def cmd_render(args, art: Artifact) -> int:
    svg = render_svg(art.layout, art.circuit, art.schedule, title=f"{art.circuit.name} [{art.config.method}]")
    Path(args.output).write_text(svg)
    return EXIT_OK


@_with_artifact
def cmd_validate(args, art: Artifact) -> int:
    report = validate_schedule(art.schedule, art.circuit, art.layout, art.op)
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def _add_settings_flags(p: argparse.ArgumentParser, with_method: bool = True) -> None:
    if with_method:
        p.add_argument("--method", choices=sorted(METHODS), default=None)
        p.add_argument("--n-hub", type=int, default=None)
        p.add_argument("--fsh", type=float, default=None, help="shuttle fidelity F_sh")
    p.add_argument("--seed", type=int, default=None, help="placement annealer seed")
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--config", default=None, help=f"JSON config (default: ${CONFIG_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atomroute", description="Neutral-atom placement and transport compiler.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile one QASM file to a JSON artifact")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    _add_settings_flags(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("bench", help="compile every (circuit, method) in a manifest")
    p.add_argument("manifest")
    p.add_argument("out_dir")
    p.add_argument("--jobs", type=int, default=1)
    _add_settings_flags(p, with_method=False)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="log fidelity of an artifact over F_sh values")
    p.add_argument("artifact")
    p.add_argument("--values", default=None, help="comma-separated F_sh values (default 1.0,0.999,0.99)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("render", help="draw an artifact as SVG")
    p.add_argument("artifact")
    p.add_argument("output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("validate", help="replay-check an artifact's schedule")
    p.add_argument("artifact")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
