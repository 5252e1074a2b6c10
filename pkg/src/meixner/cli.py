"""Command-line front end.

    meixner params --lambda 2.5
    meixner poly-table --lambda 3 --t 2 --max-degree 4 --grid 0:2:0.5
    meixner quad --lambda 2 --t 1 --n 5
    meixner measure --lambda 2 --t 1 --grid 0:5:1
    meixner sample --lambda 3 --t 1 --n 1000 --seed 1 --out s.csv
    meixner charfun --lambda 3 --t 1 --u-grid -1:1:0.1 [--empirical s.csv]
    meixner fock-demo --atoms 2 --weights 0.5,1 --degree 3
    meixner verify --suite orthogonality --lambda 3 --atoms 3 --max-degree 4 --seed 7

Exit status: 0 when every requested check passes, 1 when a check fails,
2 on bad input.  Set MEIXNER_LOG to error, info or debug for diagnostics
on standard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import fock, measures, poly1d, verify
from .core import make_params
from .errors import MeixnerError

log = logging.getLogger("meixner")


class ConfigError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """``a:b:h`` -> a, a+h, ...; b is included when within h/2."""
    try:
        a, b, h = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"grid must look like a:b:h, got {text!r}") from exc
    if not (h > 0 and math.isfinite(a) and math.isfinite(b)):
        raise ConfigError("grid step must be > 0 and ends finite")
    if b < a:
        raise ConfigError("grid end must not precede its start")
    count = int(math.floor((b - a) / h + 0.5)) + 1
    pts = a + h * np.arange(count)
    return pts[pts < b + 0.5 * h]


def parse_weights(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"weights must be comma-separated numbers, got {text!r}") from exc


def fmt(x) -> str:
    return format(float(x), ".17g")


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def json_report(command: str, inputs: dict, results: list, ok: bool) -> str:
    doc = {"command": command, "inputs": inputs, "results": results, "pass": bool(ok)}
    return json.dumps(jsonable(doc), indent=2) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_params(args):
    p = make_params(args.lam)
    return json_report("params", {"lambda": args.lam}, [p.to_dict()], True), 0


def cmd_poly_table(args):
    p = make_params(args.lam)
    xs = parse_grid(args.grid)
    vals = poly1d.eval_all(p, args.t, args.max_degree, xs)
    rows = [(n, float(x), float(vals[n, j])) for n in range(args.max_degree + 1)
            for j, x in enumerate(xs)]
    return csv_text(["degree", "x", "value"], rows), 0


def cmd_quad(args):
    nodes, weights = poly1d.quadrature(make_params(args.lam), args.t, args.n)
    return csv_text(["node", "weight"], [(float(a), float(b)) for a, b in zip(nodes, weights)]), 0


def cmd_measure(args):
    m = measures.Measure1D(make_params(args.lam), args.t)
    s = parse_grid(args.grid)
    d = np.atleast_1d(measures.density(m, s))
    return csv_text(["s", "density"], [(float(a), float(b)) for a, b in zip(s, d)]), 0


def cmd_sample(args):
    if args.n < 1:
        raise ConfigError("--n must be >= 1")
    m = measures.Measure1D(make_params(args.lam), args.t)
    s = measures.sample(m, args.n, args.seed)
    text = csv_text(["s"], [(float(v),) for v in s])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        summary = {"count": int(s.size), "mean": float(np.mean(s)), "expected_mean": m.mean,
                   "path": args.out}
        inputs = {"lambda": args.lam, "t": args.t, "n": args.n, "seed": args.seed}
        return json_report("sample", inputs, [summary], True), 0
    return text, 0


def read_samples(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    body = rows[1:] if rows and not _is_number(rows[0][0]) else rows
    try:
        return np.array([float(r[0]) for r in body if r])
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric sample") from exc


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def cmd_charfun(args):
    m = measures.Measure1D(make_params(args.lam), args.t)
    us = parse_grid(args.u_grid)
    cf = np.atleast_1d(measures.char_fun(m, us))
    header = ["u", "re", "im"]
    cols = [us, cf.real, cf.imag]
    if args.empirical:
        emp = measures.empirical_char_fun(read_samples(args.empirical), us)
        header += ["emp_re", "emp_im"]
        cols += [emp.real, emp.imag]
    rows = [tuple(float(c[j]) for c in cols) for j in range(us.size)]
    return csv_text(header, rows), 0


def cmd_fock_demo(args):
    weights = parse_weights(args.weights) if args.weights else verify.default_weights(args.atoms)
    if len(weights) != args.atoms:
        raise ConfigError(f"{len(weights)} weights given for {args.atoms} atoms")
    if not 1 <= args.degree <= fock.MAX_LOOP_DEGREE:
        raise ConfigError(f"--degree must be in 1..{fock.MAX_LOOP_DEGREE}")
    space = fock.DiscreteSpace(np.asarray(weights))
    labels, gram = fock.monomial_gram(space, args.degree)
    census = [{"n": n, "collections": len(fock.enumerate_loop_collections(n)),
               "factorial": math.factorial(n),
               "by_cycle_type": [{"type": list(t), "count": c} for t, c in fock.cycle_census(n)]}
              for n in range(1, args.degree + 1)]
    eig = float(np.min(np.linalg.eigvalsh(gram)))
    ok = eig >= -1e-10 and all(c["collections"] == c["factorial"] for c in census)
    result = {"monomials": [list(lbl) for lbl in labels], "gram": gram,
              "min_eigenvalue": eig, "census": census}
    inputs = {"atoms": args.atoms, "weights": weights, "degree": args.degree}
    return json_report("fock-demo", inputs, [result], ok), 0 if ok else 1


def cmd_verify(args):
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in verify.SUITES:
            raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(verify.SUITES)} or all")
    weights = parse_weights(args.weights) if args.weights else None
    if weights is not None and len(weights) != args.atoms:
        raise ConfigError(f"{len(weights)} weights given for {args.atoms} atoms")
    results = []
    for name in names:
        log.info("running suite %s", name)
        results.append(verify.run_suite(name, lam=args.lam, atoms=args.atoms, weights=weights,
                                        max_degree=args.max_degree, trials=args.trials,
                                        tol=args.tol, seed=args.seed))
        log.debug("suite %s: %s", name, results[-1])
    ok = all(r["pass"] for r in results)
    inputs = {"suite": args.suite, "lambda": args.lam, "atoms": args.atoms,
              "weights": weights if weights is not None else verify.default_weights(args.atoms),
              "max_degree": args.max_degree, "trials": args.trials, "tol": args.tol,
              "seed": args.seed}
    return json_report("verify", inputs, results, ok), 0 if ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="meixner", description="Meixner-type Jacobi field toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="write the output here instead of stdout")
        return p

    def lam(p):
        p.add_argument("--lambda", dest="lam", type=float, required=True)

    def lam_t(p):
        lam(p)
        p.add_argument("--t", type=float, required=True, help="mass sigma(Delta) > 0")

    p = add("params", cmd_params, "derived constants of lambda")
    lam(p)
    p = add("poly-table", cmd_poly_table, "CSV degree,x,value of P^(n)")
    lam_t(p)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--grid", required=True)
    p = add("quad", cmd_quad, "CSV node,weight of the Gauss rule")
    lam_t(p)
    p.add_argument("--n", type=int, required=True)
    p = add("measure", cmd_measure, "CSV s,density")
    lam_t(p)
    p.add_argument("--grid", required=True)
    p = add("sample", cmd_sample, "draw samples (CSV column s)")
    lam_t(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p = add("charfun", cmd_charfun, "CSV u,re,im[,emp_re,emp_im]")
    lam_t(p)
    p.add_argument("--u-grid", required=True)
    p.add_argument("--empirical", help="CSV of samples to compare against")
    p = add("fock-demo", cmd_fock_demo, "monomial Gram matrix and loop census")
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--weights")
    p.add_argument("--degree", type=int, required=True)
    p = add("verify", cmd_verify, "run verification suites, JSON report")
    p.add_argument("--suite", required=True, help="suite name or 'all': " + ", ".join(verify.SUITES))
    lam(p)
    p.add_argument("--atoms", type=int, default=3)
    p.add_argument("--weights")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int, required=True)
    return ap


def setup_logging():
    level = os.environ.get("MEIXNER_LOG", "error").strip().lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


GRID_OPTIONS = ("--grid", "--u-grid")


def _glue_grids(argv):
    """Let grids start with a minus sign: ``--u-grid -1:1:0.1``."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in GRID_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    setup_logging()
    parser = build_parser()
    argv = _glue_grids(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = args.func(args)
    except (ConfigError, MeixnerError, ValueError, KeyError) as exc:
        print(f"meixner {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.out and args.command != "sample":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
