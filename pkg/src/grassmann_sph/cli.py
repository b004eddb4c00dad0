"""Command-line front end: ``python -m grassmann_sph <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .bounds import BoundKind, ratio_sweep
from .series import InconclusiveError, k_min_search, series_sweep, thresholds
from .space import (GrassmannianSpace, SphericalWeight, classify_point, enumerate_weights,
                    identity_point, make_space, parse_nodes, parse_point, point_from_nodes)
from .spherical import EvalRequest, evaluate, get_calibration, oracle_exact, phi_batch

THREADS_ENV = "GRASSMANN_SPH_THREADS"
SUBCOMMANDS = ("eval", "classify", "sweep", "series", "kmin", "thresholds", "check")
SUITES = ("normalization", "boundedness", "oracle", "calibration")

_REQUIRED = {
    "eval": ("point", "weight"),
    "classify": ("point",),
    "sweep": ("point", "kind"),
    "series": ("point", "k"),
    "kmin": ("point",),
    "thresholds": (),
    "check": (),
}


@dataclass
class CliConfig:
    subcommand: str
    p: int | None = None
    q: int | None = None
    point: str | None = None
    nodes: str | None = None
    weight: tuple[int, ...] | None = None
    weight_is_n: bool = False
    k: int | None = None
    s: Fraction = Fraction(0)
    n_max: int = 60
    k_cap: int = 8
    kind: str | None = None
    suite: str = "normalization"
    format: str = "text"
    output: str | None = None
    threads: int = 1
    mode: str = "auto"


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grassmann-sph", description=(
        "Spherical functions on SU(p+q)/S(U(p)xU(q)) and smoothness of orbital measures."))
    sub = parser.add_subparsers(dest="subcommand", required=True)
    default_threads = int(os.environ.get(THREADS_ENV, "1"))
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int, required=name not in ("check",))
        sp.add_argument("--q", type=int, required=name not in ("check",))
        sp.add_argument("--t", dest="point", help="angles as multiples of pi, e.g. 1/5,1/7; "
                        "suffix f for radians")
        sp.add_argument("--nodes", help="cosines cos 2t_k given directly, e.g. 1/2,-1/3")
        sp.add_argument("--m", type=_int_list, help="weight as m-vector")
        sp.add_argument("--n", type=_int_list, help="weight as n-vector")
        sp.add_argument("--k", type=int)
        sp.add_argument("--s", type=Fraction, default=Fraction(0))
        sp.add_argument("--nmax", dest="n_max", type=int, default=60)
        sp.add_argument("--kcap", dest="k_cap", type=int, default=8)
        sp.add_argument("--kind", choices=[k.value for k in BoundKind])
        sp.add_argument("--suite", choices=SUITES, default="normalization")
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--output", "-o")
        sp.add_argument("--threads", type=int, default=default_threads)
        sp.add_argument("--mode", choices=("auto", "generic", "confluent", "oracle"),
                        default="auto")
    return parser


def parse_args(argv) -> CliConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[ns.subcommand]
    if ns.m is not None and ns.n is not None:
        sub.error("--m and --n are mutually exclusive")
    cfg = CliConfig(
        subcommand=ns.subcommand, p=ns.p, q=ns.q, point=ns.point, nodes=ns.nodes,
        weight=ns.m if ns.m is not None else ns.n, weight_is_n=ns.n is not None,
        k=ns.k, s=ns.s, n_max=ns.n_max, k_cap=ns.k_cap, kind=ns.kind, suite=ns.suite,
        format=ns.format, output=ns.output, threads=ns.threads, mode=ns.mode)
    for req in _REQUIRED[cfg.subcommand]:
        if req == "point" and cfg.point is None and cfg.nodes is None:
            sub.error("--t (or --nodes) is required")
        if req == "weight" and cfg.weight is None:
            sub.error("--m (or --n) is required")
        if req in ("k", "kind") and getattr(cfg, req) is None:
            sub.error(f"--{req} is required")
    if cfg.p is not None:
        try:
            space = make_space(cfg.p, cfg.q)
        except ValueError as exc:
            sub.error(str(exc))
        for flag, text, parse in (("--t", cfg.point, parse_point), ("--nodes", cfg.nodes, parse_nodes)):
            if text is None:
                continue
            try:
                entries = parse(text)
            except (ValueError, ZeroDivisionError):
                sub.error(f"{flag}: cannot parse {text!r}")
            if len(entries) != space.q:
                sub.error(f"{flag}: expected {space.q} entries, got {len(entries)}")
        if cfg.weight is not None:
            if len(cfg.weight) != space.q:
                sub.error(f"--{'n' if cfg.weight_is_n else 'm'}: expected {space.q} entries")
            try:
                _weight(cfg)
            except ValueError as exc:
                sub.error(f"--{'n' if cfg.weight_is_n else 'm'}: {exc}")
    if cfg.k is not None and cfg.k < 1:
        sub.error("--k must be >= 1")
    if cfg.threads < 1:
        sub.error("--threads must be >= 1")
    return cfg


def _weight(cfg: CliConfig) -> SphericalWeight:
    return SphericalWeight.from_n(cfg.weight) if cfg.weight_is_n else SphericalWeight(cfg.weight)


def _point(cfg: CliConfig, space: GrassmannianSpace):
    if cfg.nodes is not None:
        return point_from_nodes(space, cfg.nodes)
    return classify_point(space, cfg.point)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


# -- subcommands --------------------------------------------------------------

def _cmd_eval(cfg, space):
    point = _point(cfg, space)
    result = evaluate(EvalRequest(space, _weight(cfg), point, cfg.mode))
    out = result.to_dict()
    out["m"] = list(_weight(cfg).m)
    out["n"] = list(_weight(cfg).n)
    return point, out, None


def _cmd_classify(cfg, space):
    point = _point(cfg, space)
    return point, point.to_dict(), None


def _cmd_sweep(cfg, space):
    point = _point(cfg, space)
    report = ratio_sweep(BoundKind(cfg.kind), space, point, cfg.n_max, cfg.threads)
    return point, report.to_dict(), report.to_csv()


def _cmd_series(cfg, space):
    point = _point(cfg, space)
    report = series_sweep(space, point, cfg.k, cfg.s, cfg.n_max, cfg.threads)
    return point, report.to_dict(), report.to_csv()


def _cmd_kmin(cfg, space):
    point = _point(cfg, space)
    k = k_min_search(space, point, cfg.s, cfg.k_cap, cfg.n_max, cfg.threads)
    return point, {"k_min": k if k is not None else f"none <= {cfg.k_cap}"}, None


def _cmd_thresholds(cfg, space):
    return None, thresholds(space, cfg.s).to_dict(), None


def run_suite(name: str, threads: int = 1) -> dict:
    """Built-in consistency suites; returns {'passed': bool, ...}."""
    spaces = [make_space(p, q) for q in (2, 3, 4) for p in range(q, 5)]
    if name == "normalization":
        worst = 0.0
        for space in spaces:
            n = np.array([w.n for w in enumerate_weights(space, 12)])
            worst = max(worst, float(np.max(np.abs(phi_batch(space, identity_point(space), n) - 1))))
        return {"passed": worst <= 1e-8, "max_abs_error": worst}
    if name == "boundedness":
        rng = np.random.default_rng(0)
        worst = 0.0
        for space in spaces:
            n = np.array([w.n for w in enumerate_weights(space, 12)])
            for _ in range(20):
                point = classify_point(space, list(rng.uniform(0, np.pi, space.q)))
                worst = max(worst, float(np.max(np.abs(phi_batch(space, point, n)))))
        return {"passed": worst <= 1 + 1e-8, "max_abs_phi": worst}
    if name == "oracle":
        worst = 0.0
        for space in spaces[:3]:
            nodes = [Fraction(1, 2), Fraction(-1, 3), Fraction(1, 7), Fraction(-4, 5)][: space.q]
            point = point_from_nodes(space, nodes)
            for w in enumerate_weights(space, 8):
                exact = oracle_exact(EvalRequest(space, w, point))
                value = phi_batch(space, point, np.array([w.n]))[0]
                worst = max(worst, abs(value - float(exact)) / max(abs(float(exact)), 1e-300))
        return {"passed": worst <= 1e-9, "max_rel_error": worst}
    if name == "calibration":
        records = {f"{s.p},{s.q}": get_calibration(s).to_dict() for s in spaces}
        ok = all(abs(Fraction(r["hermite_sign"])) == 1 for r in records.values())
        return {"passed": ok, "records": records}
    raise ValueError(f"unknown suite {name!r}")


def _cmd_check(cfg, space):
    out = run_suite(cfg.suite, cfg.threads)
    out["suite"] = cfg.suite
    return None, out, None


_COMMANDS = {
    "eval": _cmd_eval, "classify": _cmd_classify, "sweep": _cmd_sweep,
    "series": _cmd_series, "kmin": _cmd_kmin, "thresholds": _cmd_thresholds,
    "check": _cmd_check,
}


def _render_text(results: dict) -> str:
    if len(results) == 1:
        return f"{next(iter(results.values()))}\n"
    lines = []
    for key, value in results.items():
        if isinstance(value, list) and len(value) > 8:
            value = f"[{len(value)} entries] ... last={value[-1]!r}"
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def _render_csv(results: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in results.items():
        if isinstance(value, float):
            value = f"{value:.17g}"
        elif isinstance(value, (list, dict)):
            value = json.dumps(value, default=_jsonable)
        writer.writerow([key, value])
    return buf.getvalue()


def run(cfg: CliConfig) -> int:
    """Execute a parsed configuration; 0 ok, 1 computation error, 3 failed check."""
    space = make_space(cfg.p, cfg.q) if cfg.p is not None else None
    try:
        point, results, table = _COMMANDS[cfg.subcommand](cfg, space)
    except InconclusiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if cfg.format == "json":
        calibration = get_calibration(space).to_dict() if space is not None else None
        doc = {
            "space": space.to_dict() if space is not None else None,
            "point": point.to_dict() if point is not None else None,
            "params": {"subcommand": cfg.subcommand, "k": cfg.k, "s": str(cfg.s),
                       "n_max": cfg.n_max, "k_cap": cfg.k_cap, "kind": cfg.kind,
                       "mode": cfg.mode, "suite": cfg.suite,
                       "m": list(_weight(cfg).m) if cfg.weight else None},
            "results": results,
            "calibration": calibration,
            "version": __version__,
        }
        text = json.dumps(doc, indent=2, default=_jsonable) + "\n"
    elif cfg.format == "csv":
        text = table if table is not None else _render_csv(results)
    else:
        text = _render_text(results)

    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if cfg.subcommand == "check" and not results["passed"]:
        return 3
    return 0


def main(argv=None) -> int:
    return run(parse_args(sys.argv[1:] if argv is None else argv))
