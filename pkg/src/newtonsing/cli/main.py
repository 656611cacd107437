"""Command line: ``classify``, ``decay`` and ``regions``.

Exit codes: 0 success, 2 out-of-scope classification, 1 errors (bad input,
violated preconditions, failed decay entries).
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from ..errors import BudgetExceeded, DegenerateFit, NewtonSingError
from ..newton import newton_polyhedron
from ..normalform import _inverse, classify, region_membership, region_params
from ..oscint.amplitude import amplitude_from_dict
from ..oscint.decay import s_grid, worst_case_decay
from ..oscint.quadrature import QuadConfig
from .parse import parse_polynomial
from .report import ReportDocument, build_document, encode_fit, rat
from .svg import render_newton_svg


@dataclass
class RunConfig:
    jet_order: Optional[int] = None  # None means 2*deg + 4
    lambda_min: int = 6
    lambda_max: int = 12
    s_grid_resolution: int = 41
    s_half_width: float = 4.0
    panel_budget: int = 1_000_000
    tolerance_gamma: float = 0.06
    region_eps: Fraction = Fraction(1, 10)
    region_cap: Fraction = Fraction(10)
    workers: int = 1

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and v <= 0:
                raise ValueError(f"config value {f.name} must be positive")
        if self.lambda_min >= self.lambda_max:
            raise ValueError("lambda_min must be below lambda_max")

    @property
    def lambdas(self) -> tuple:
        return tuple(2.0 ** k for k in range(self.lambda_min, self.lambda_max + 1))

    @classmethod
    def load(cls, path=None, **overrides) -> "RunConfig":
        values = {}
        if path is not None:
            cp = configparser.ConfigParser()
            if not cp.read(path, encoding="utf-8"):
                raise FileNotFoundError(path)
            section = cp["newtonsing"] if cp.has_section("newtonsing") else cp[cp.default_section]
            types = {f.name: f.type for f in fields(cls)}
            for key, raw in section.items():
                if key not in types:
                    raise ValueError(f"unknown config key {key!r}")
                values[key] = _convert(key, raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def _convert(key: str, raw: str):
    if key in ("region_eps", "region_cap"):
        return Fraction(raw)
    if key in ("s_half_width", "tolerance_gamma"):
        return float(raw)
    return int(raw)


def _error_doc(text: str, exc: Exception) -> ReportDocument:
    doc = ReportDocument(input=text, exit_code=1)
    doc.error = {"type": type(exc).__name__, "module": getattr(exc, "module", None), "message": str(exc)}
    return doc


def _read_expr(arg: str) -> str:
    path = Path(arg)
    if path.is_file():
        lines = [ln.split("#", 1)[0].strip() for ln in path.read_text(encoding="utf-8").splitlines()]
        return " ".join(ln for ln in lines if ln)
    return arg


def _emit(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def run_classify(expr: str, config: RunConfig, svg: Optional[str] = None) -> ReportDocument:
    try:
        p = parse_polynomial(expr)
        report = classify(p, config.jet_order)
        doc = build_document(expr, p, report)
        if svg:
            render_newton_svg(newton_polyhedron(p), svg, title=expr)
    except NewtonSingError as exc:
        return _error_doc(expr, exc)
    return doc


def run_regions(expr: str, point: str, config: RunConfig) -> dict:
    p = parse_polynomial(expr)
    report = classify(p, config.jet_order)
    params = region_params(report, config.region_eps, config.region_cap)
    try:
        x = tuple(Fraction(v.strip()) for v in point.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"point must be 'a/b,c/d': {exc}") from None
    if len(x) != 2:
        raise ValueError("point must have two coordinates")
    # regions live in the normalized coordinates x = M y
    Minv = _inverse(report.linear_map)
    y = tuple(Minv[i][0] * x[0] + Minv[i][1] * x[1] for i in range(2))
    region = region_membership(y, report.psi.poly, params)
    return {
        "schema": 1, "input": expr, "type": report.type_label, "point": [rat(v) for v in x],
        "normalized_point": [rat(v) for v in y], "eps": rat(params.eps), "cap": rat(params.N),
        "m": params.m, "a": rat(params.a), "region": region,
    }


def load_corpus(spec: str) -> dict:
    if spec == "bundled":
        text = resources.files("newtonsing").joinpath("data/decay_corpus.json").read_text(encoding="utf-8")
    else:
        text = Path(spec).read_text(encoding="utf-8")
    return json.loads(text)


def run_decay_entry(entry: dict, config: RunConfig) -> dict:
    name = entry["name"]
    out = {"name": name, "phase": entry["phase"], "gamma_predicted": entry.get("gamma")}
    gamma = None if entry.get("gamma") is None else Fraction(entry["gamma"])
    try:
        phi = parse_polynomial(entry["phase"])
        amp = amplitude_from_dict(entry.get("amplitude", {"kind": "annulus"}))
        seeds = [tuple(float(Fraction(v)) for v in s) for s in entry.get("seeds", [])]
        grid = []
        if entry.get("grid", True):
            grid = s_grid(config.s_grid_resolution, config.s_half_width)
        grid += [tuple(float(Fraction(v)) for v in s) for s in entry.get("directions", [])]
        cfg = QuadConfig(panel_budget=config.panel_budget)
        wc = worst_case_decay(phi, amp, grid, config.lambdas, cfg, seeds=seeds,
                              auto_seeds=entry.get("auto_seeds", True), workers=config.workers)
    except BudgetExceeded as exc:
        out.update(status="budget-exceeded", verdict="fail", message=str(exc))
        return out
    except (NewtonSingError, ValueError) as exc:
        out.update(status="error", verdict="fail", message=f"{type(exc).__name__}: {exc}")
        return out
    if wc.fit is None:
        vacuous = all(e.status == "super-polynomial" for e in wc.entries)
        out.update(status="super-polynomial" if vacuous else "no-acceptable-fit",
                   verdict="pass" if vacuous else "fail", vacuous=vacuous)
        return out
    wc.fit.gamma_predicted = gamma
    wc.fit.tolerance = config.tolerance_gamma
    out.update(status="fitted", worst_direction=[repr(v) for v in wc.s_star], fit=encode_fit(wc.fit),
               verdict=wc.fit.verdict or "no-prediction", vacuous=False,
               candidates=sum(1 for e in wc.entries if e.fit is not None))
    return out


def run_decay_suite(corpus: dict, config: RunConfig, only=None) -> dict:
    results = [run_decay_entry(e, config) for e in corpus["entries"] if not only or e["name"] in only]
    failed = [r["name"] for r in results if r["verdict"] == "fail"]
    return {"schema": 1, "lambdas": [repr(v) for v in config.lambdas], "results": results, "failed": failed}


def decay_table(summary: dict) -> str:
    rows = [f"{'entry':<12} {'predicted':>9} {'fitted':>8} {'r2':>8}  {'verdict':<8} status"]
    for r in summary["results"]:
        fit = r.get("fit") or {}
        g = fit.get("gamma_hat")
        r2 = fit.get("r2")
        rows.append(f"{r['name']:<12} {str(r.get('gamma_predicted')):>9} "
                    f"{'-' if g is None else format(float(g), '.4f'):>8} "
                    f"{'-' if r2 is None else format(float(r2), '.5f'):>8}  {r['verdict']:<8} {r['status']}"
                    + (" (vacuous)" if r.get("vacuous") else ""))
    return "\n".join(rows) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="newtonsing", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a critical point at the origin")
    c.add_argument("input", help="polynomial expression or a file containing one")
    c.add_argument("--json", metavar="OUT", help="write the JSON report here (default stdout)")
    c.add_argument("--svg", metavar="OUT", help="write the Newton diagram as SVG")
    c.add_argument("--jet-order", type=int)
    c.add_argument("--config")

    d = sub.add_parser("decay", help="run the decay-exponent suite on a corpus ('bundled' for the built-in one)")
    d.add_argument("corpus")
    d.add_argument("--config")
    d.add_argument("--json", metavar="OUT", help="write the JSON summary here")
    d.add_argument("--only", action="append", help="run only the named entry (repeatable)")
    d.add_argument("--workers", type=int)
    d.add_argument("--grid", type=int, dest="s_grid_resolution", help="direction grid resolution per axis")

    r = sub.add_parser("regions", help="locate a rational point in the root-jet regions")
    r.add_argument("input")
    r.add_argument("--point", required=True, help="a/b,c/d")
    r.add_argument("--eps", type=Fraction)
    r.add_argument("--cap", type=Fraction)
    r.add_argument("--jet-order", type=int)
    r.add_argument("--config")
    r.add_argument("--json", metavar="OUT")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "classify":
            config = RunConfig.load(args.config, jet_order=args.jet_order)
        elif args.command == "regions":
            config = RunConfig.load(args.config, jet_order=args.jet_order, region_eps=args.eps,
                                    region_cap=args.cap)
        else:
            config = RunConfig.load(args.config, workers=args.workers,
                                    s_grid_resolution=args.s_grid_resolution)
    except (OSError, ValueError, configparser.Error) as exc:
        print(f"newtonsing: bad configuration: {exc}", file=sys.stderr)
        return 1

    if args.command == "classify":
        expr = _read_expr(args.input)
        doc = run_classify(expr, config, args.svg)
        _emit(doc.to_json(), args.json)
        if doc.error:
            print(f"newtonsing: {doc.error['type']} ({doc.error['module']}): {doc.error['message']}",
                  file=sys.stderr)
        return doc.exit_code

    if args.command == "regions":
        expr = _read_expr(args.input)
        try:
            result = run_regions(expr, args.point, config)
        except (NewtonSingError, ValueError) as exc:
            module = getattr(exc, "module", None)
            print(f"newtonsing: {type(exc).__name__}" + (f" ({module})" if module else "") + f": {exc}",
                  file=sys.stderr)
            return 1
        _emit(json.dumps(result, indent=2, sort_keys=True) + "\n", args.json)
        return 0

    try:
        corpus = load_corpus(args.corpus)
    except (OSError, ValueError) as exc:
        print(f"newtonsing: cannot read corpus: {exc}", file=sys.stderr)
        return 1
    summary = run_decay_suite(corpus, config, args.only)
    sys.stdout.write(decay_table(summary))
    if args.json:
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", args.json)
    return 1 if summary["failed"] else 0
