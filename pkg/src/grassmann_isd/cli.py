"""Command-line entry point.

Machine-readable results go to standard output (JSON or CSV); the
provenance header, logs and other prose go to standard error.  Exit codes:
0 success, 1 domain error (reported as a JSON error object), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bench import (BENCH_PRESETS, ExperimentSpec, emit_report, iteration_budget,
                    run_failure_experiment, run_rowcost_experiment, security_tables)
from .bounds import CATALOG, evaluate_bound
from .codes import (ORACLE_BUDGET, GrassmannCodeSpec, LinearCode, build_grassmann_code, build_ldpc,
                    build_plabic_code, build_preset, lift_code, min_weight_bruteforce, random_code,
                    random_moore_seed, syndrome_table)
from .decoder import DecoderConfig, birthday_isd, plucker_decode, prange_isd
from .errors import BudgetExceeded, GrassmannISDError, InvalidArgument
from .field import GF2m, FqMatrix
from .plabic import (PlabicGraph, binarize, boundary_measurement, is_totally_nonnegative, load_golden,
                     plucker_coordinates, random_plabic_graph)

log = logging.getLogger("grassmann_isd")


# -- output helpers ------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _to_csv(obj) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, list) and obj and all(isinstance(r, dict) for r in obj):
        keys = list(obj[0])
        wr.writerow(keys)
        for r in obj:
            wr.writerow([_cell(r.get(k)) for k in keys])
    elif isinstance(obj, dict):
        wr.writerow(["key", "value"])
        for k, v in obj.items():
            wr.writerow([k, _cell(v)])
    else:
        wr.writerow(["value"])
        wr.writerow([_cell(obj)])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


def _render(obj, fmt: str) -> str:
    obj = _jsonable(obj)
    if fmt == "csv":
        return _to_csv(obj)
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- parsing helpers -------------------------------------------------------------


def parse_syndrome(text: str, rows: int, field: GF2m) -> np.ndarray:
    """Comma/space separated hex elements, or one hex digit per entry when unseparated."""
    tokens = text.replace(",", " ").split()
    if len(tokens) == 1 and len(tokens[0]) == rows and rows > 1:
        tokens = list(tokens[0])
    try:
        s = np.array([int(t, 16) for t in tokens], dtype=np.int64)
    except ValueError:
        raise InvalidArgument("syndrome must be hex field elements", syndrome=text) from None
    if s.size != rows:
        raise InvalidArgument("syndrome length must equal n - k", expected=rows, got=int(s.size))
    field.check_elements(s)
    return s


def _params(pairs) -> dict:
    out = {}
    for p in pairs or []:
        if "=" not in p:
            raise InvalidArgument("parameters take the form name=value", param=p)
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _load_code(path) -> LinearCode:
    try:
        return LinearCode.load(path)
    except OSError as exc:
        raise InvalidArgument(f"cannot read code bundle: {exc.strerror}", path=str(path)) from None


def _load_graph(args) -> PlabicGraph:
    if args.golden:
        return load_golden(args.golden)
    if args.file:
        try:
            return PlabicGraph.load(args.file)
        except OSError as exc:
            raise InvalidArgument(f"cannot read graph: {exc.strerror}", path=str(args.file)) from None
    if args.n is None or args.k is None:
        raise InvalidArgument("give --file, --golden or --n/--k for a random graph")
    return random_plabic_graph(args.n, args.k, args.seed, args.density)


def code_summary(code: LinearCode) -> dict:
    return {
        "n": code.n, "k": code.k, "m": code.m, "q": code.q, "metric": code.metric,
        "design_weight": code.design_weight, "provenance": code.provenance,
        "generator": code.generator.to_text(), "parity_check": code.parity_check.to_text(),
    }


# -- subcommands ----------------------------------------------------------------------


def cmd_tables(args):
    tables = security_tables()
    if args.level is not None:
        return iteration_budget(args.level)
    if args.table == "1":
        if args.format == "csv":
            return [{"level": k, "operations": v} for k, v in tables["table1"].items()]
        return tables["table1"]
    if args.table == "2":
        return tables["table2"]
    return tables


def cmd_bounds(args):
    if args.list:
        rows = [{"bound": k, "params": " ".join(e.params), "formula": e.formula, "description": e.description}
                for k, e in CATALOG.items()]
        return rows if args.format == "csv" else {r["bound"]: {k: v for k, v in r.items() if k != "bound"}
                                                   for r in rows}
    if not args.bound:
        raise InvalidArgument("give --bound <id> or --list")
    d = evaluate_bound(args.bound, **_params(args.param)).as_dict()
    if args.format == "csv":
        return [{k: d[k] for k in ("bound", "value", "log2", "exact")} | {"flags": " ".join(d["flags"])}]
    return d


def cmd_graph(args):
    g = _load_graph(args)
    if args.save:
        Path(args.save).write_text(g.to_text())
    bm = boundary_measurement(g)
    tanner = binarize(bm)
    out = {
        "n": g.n, "k": g.k, "sources": g.sources,
        "boundary_matrix": [[str(v) for v in row] for row in bm.sympy().tolist()],
        "tanner": tanner.tolist(),
    }
    if args.plucker:
        coords = plucker_coordinates(bm)
        out["plucker"] = {",".join(str(i + 1) for i in key): str(v) for key, v in coords.items()}
        unit = boundary_measurement(g, {i: Fraction(1) for i in range(len(g.edges))})
        ok, witness = is_totally_nonnegative(unit.values)
        out["totally_nonnegative_at_unit_weights"] = ok
        out["negative_minor"] = None if witness is None else [i + 1 for i in witness]
    if args.text:
        out["text"] = g.to_text()
    return out


def cmd_code_build(args):
    f = args.family
    if f == "plabic":
        if args.graph or args.golden:
            g = PlabicGraph.load(args.graph) if args.graph else load_golden(args.golden)
            code = build_grassmann_code(GrassmannCodeSpec(graph=g, m=args.m, w=args.w, field_seed=args.seed))
        else:
            _need(args, "n", "k")
            code = build_plabic_code(args.n, args.k, args.seed, w=args.w, m=args.m, density=args.density)
    elif f == "ldpc":
        _need(args, "n")
        code = build_ldpc(args.n, args.col_weight, args.row_weight, args.seed, w=args.w, m=args.m)
    elif f == "moore":
        _need(args, "n", "k")
        field = GF2m(args.m)
        code = build_grassmann_code(GrassmannCodeSpec(
            moore_seed=random_moore_seed(args.n, field, args.seed), n=args.n, k=args.k, m=args.m, w=args.w,
            provenance=f"moore:n={args.n}:k={args.k}:m={args.m}:seed={args.seed}"))
    elif f == "preset":
        code = build_preset(args.preset, args.seed)
    elif f == "random":
        _need(args, "n", "k")
        code = random_code(args.n, args.k, args.seed)
    else:  # lift
        _need(args, "n", "k")
        rng = np.random.default_rng(args.seed)
        field = GF2m(args.m)
        code = lift_code(FqMatrix(rng.integers(0, field.order, size=(args.k, args.n - args.k)), field))
    return json.loads(code.to_json())


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidArgument("missing required options", missing=["--" + n for n in missing])


def cmd_code_inspect(args):
    return code_summary(_load_code(args.code))


def cmd_code_oracle(args):
    code = _load_code(args.code)
    w, witness = min_weight_bruteforce(code)
    return {"min_weight": w, "witness": witness, "n": code.n, "k": code.k}


def cmd_oracle(args):
    code = _load_code(args.code)
    h = code.parity_check
    if code.m != 1:
        raise InvalidArgument("the syndrome-table oracle is binary only", m=code.m)
    if 2 ** code.n > ORACLE_BUDGET:
        raise BudgetExceeded("syndrome table too large", n=code.n, budget=ORACLE_BUDGET)
    table = syndrome_table(h, args.max_weight)
    if args.syndrome is not None:
        s = parse_syndrome(args.syndrome, h.rows, h.field)
        hit = table.get(tuple(int(v) for v in s))
        if hit is None:
            return {"solvable": False, "syndrome": s, "max_weight": args.max_weight}
        return {"solvable": True, "syndrome": s, "weight": hit[0], "leader": hit[1]}
    census = {}
    for wt, _ in table.values():
        census[wt] = census.get(wt, 0) + 1
    return {"syndromes": len(table), "leader_weights": dict(sorted(census.items()))}


def cmd_decode(args):
    code = _load_code(args.code)
    s = parse_syndrome(args.syndrome, code.n - code.k, code.field)
    cfg = DecoderConfig(T=args.T, l=args.l, p=args.p, seed=args.seed, w=args.w)
    if args.algo == "plucker":
        out = plucker_decode(code, s, args.w, cfg)
    elif args.algo == "birthday":
        out = birthday_isd(code.parity_check, s, args.w, cfg, weight=code.weight)
    else:
        out = prange_isd(code.parity_check, s, args.w, cfg, weight=code.weight)
    return out.to_dict()


def _load_spec(args, experiment: str) -> ExperimentSpec:
    if args.spec and args.preset:
        raise InvalidArgument("give either --spec or --preset")
    if args.spec:
        text = args.spec
        if not text.lstrip().startswith("{"):
            try:
                text = Path(text).read_text()
            except OSError as exc:
                raise InvalidArgument(f"cannot read spec: {exc.strerror}", path=args.spec) from None
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"spec is not valid JSON: {exc.msg}") from None
        d.setdefault("experiment", experiment)
        if args.seed_given:
            d["seed"] = args.seed
        return ExperimentSpec.from_dict(d)
    if args.preset:
        spec = ExperimentSpec.from_preset(args.preset, args.desk_scale, seed=args.seed)
        if experiment == "row_cost":
            spec = ExperimentSpec("row_cost", security_level=spec.security_level, desk_scale=args.desk_scale,
                                  seed=args.seed, lengths=[24, 48, 96], field_degrees=[1, 2], preset=args.preset)
        return spec
    raise InvalidArgument("give --spec <json> or --preset <name>")


def cmd_bench(args):
    spec = _load_spec(args, "failure_curve" if args.bench_cmd == "failure" else "row_cost")
    if args.trials is not None:
        spec.trials_per_point = args.trials
        spec.__post_init__()
    if args.bench_cmd == "failure":
        report = run_failure_experiment(spec, threads=args.threads)
    else:
        report = run_rowcost_experiment(spec=spec, threads=args.threads)
    print(f"# wall time {report.wall_time:.2f}s", file=sys.stderr)
    return _RawText(emit_report(report, args.format))


class _RawText(str):
    pass


# -- parser ----------------------------------------------------------------------


def _common(sub: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="master random seed (default 0)")
    p.add_argument("--format", choices=["json", "csv"], default=d("json"), help="output format")
    p.add_argument("--out", default=d(None), help="write standard output to this path instead")
    p.add_argument("--verbose", action="store_true", default=d(False), help="debug logging on stderr")
    p.add_argument("--threads", type=int, default=d(None), help="worker processes (default: logical cores)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(sub=True)
    parser = argparse.ArgumentParser(
        prog="grassmann-isd", parents=[_common(sub=False)],
        description="Grassmann-metric syndrome decoding: graphs, codes, bounds, decoders and benchmarks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = subs.add_parser("tables", parents=[common], help="canned security tables")
    p.add_argument("--level", type=int, help="print the iteration budget of one security level")
    p.add_argument("--table", choices=["1", "2"], help="print only one table")
    p.set_defaults(fn=cmd_tables)

    p = subs.add_parser("bounds", parents=[common], help="evaluate a catalogued bound")
    p.add_argument("--bound", help="bound id (see --list)")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="bound parameter, repeatable")
    p.add_argument("--list", action="store_true", help="list the catalog")
    p.set_defaults(fn=cmd_bounds)

    p = subs.add_parser("graph", parents=[common], help="load or generate a plabic graph")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--file", help=".plabic graph file")
    src.add_argument("--golden", choices=["gr24", "gr26"], help="shipped example graph")
    p.add_argument("--n", type=int, help="boundary size of a random graph")
    p.add_argument("--k", type=int, help="number of sources of a random graph")
    p.add_argument("--density", type=float, default=0.5, help="edge density of a random graph")
    p.add_argument("--plucker", action="store_true", help="include Pluecker coordinates (unit weights)")
    p.add_argument("--text", action="store_true", help="include the graph in .plabic text form")
    p.add_argument("--save", help="write the graph as a .plabic file")
    p.set_defaults(fn=cmd_graph)

    p = subs.add_parser("code", parents=[common], help="build, inspect or brute-force a code")
    csubs = p.add_subparsers(dest="code_cmd", required=True, metavar="ACTION")
    b = csubs.add_parser("build", parents=[common], help="build a code bundle (JSON)")
    b.add_argument("--family", required=True, choices=["plabic", "ldpc", "moore", "preset", "random", "lift"])
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--m", type=int, default=1, help="extension degree (field GF(2^m))")
    b.add_argument("--w", type=int, default=0, help="design error weight")
    b.add_argument("--graph", help=".plabic file for --family plabic")
    b.add_argument("--golden", choices=["gr24", "gr26"], help="shipped graph for --family plabic")
    b.add_argument("--density", type=float, default=0.5)
    b.add_argument("--col-weight", type=int, default=3)
    b.add_argument("--row-weight", type=int, default=6)
    b.add_argument("--preset", default="paper-128", choices=["paper-128"])
    b.set_defaults(fn=cmd_code_build)
    i = csubs.add_parser("inspect", parents=[common], help="summarise a code bundle")
    i.add_argument("--code", required=True)
    i.set_defaults(fn=cmd_code_inspect)
    o = csubs.add_parser("oracle", parents=[common], help="exhaustive minimum weight")
    o.add_argument("--code", required=True)
    o.set_defaults(fn=cmd_code_oracle)

    p = subs.add_parser("decode", parents=[common], help="solve a syndrome decoding instance")
    p.add_argument("--code", required=True, help="code bundle (.code.json)")
    p.add_argument("--syndrome", required=True, help="hex field elements, comma separated")
    p.add_argument("--w", type=int, required=True, help="target weight")
    p.add_argument("--algo", choices=["prange", "birthday", "plucker"], default="plucker")
    p.add_argument("--T", type=int, default=1000, help="iteration budget")
    p.add_argument("--l", type=int, default=0, help="window parameter")
    p.add_argument("--p", type=int, default=0, help="half weight (birthday only)")
    p.set_defaults(fn=cmd_decode)

    p = subs.add_parser("oracle", parents=[common], help="exhaustive syndrome table (binary codes)")
    p.add_argument("--code", required=True)
    p.add_argument("--syndrome", help="look up one syndrome")
    p.add_argument("--max-weight", type=int, help="only tabulate errors up to this weight")
    p.set_defaults(fn=cmd_oracle)

    p = subs.add_parser("bench", parents=[common], help="Monte-Carlo experiments")
    bsubs = p.add_subparsers(dest="bench_cmd", required=True, metavar="EXPERIMENT")
    for name, helptext in (("failure", "failure rate against noise"), ("rowcost", "row operations against length")):
        e = bsubs.add_parser(name, parents=[common], help=helptext)
        e.add_argument("--spec", help="experiment spec as a JSON file or inline JSON")
        e.add_argument("--preset", choices=sorted(BENCH_PRESETS), help="canned configuration")
        e.add_argument("--desk-scale", type=int, default=1, help="divide T and code sizes by this factor")
        e.add_argument("--trials", type=int, help="override trials per point")
        e.set_defaults(fn=cmd_bench)
    return parser


def _config_hash(args) -> str:
    items = {k: v for k, v in vars(args).items() if k not in ("fn", "verbose", "threads", "out")}
    blob = json.dumps(items, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def main(argv=None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(raw)
    args.seed_given = any(a == "--seed" or a.startswith("--seed=") for a in raw)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.threads is None:
        args.threads = os.cpu_count() or 1
    print(f"# grassmann-isd {__version__} seed={args.seed} config={_config_hash(args)}", file=sys.stderr)
    try:
        result = args.fn(args)
        text = result if isinstance(result, _RawText) else _render(result, args.format)
        _emit(args, text)
    except GrassmannISDError as exc:
        err = {"error": {"code": exc.code, "message": exc.message, "context": _jsonable(exc.context)}}
        sys.stdout.write(json.dumps(err, sort_keys=True, default=str) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
