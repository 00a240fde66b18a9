"""Batch front end: generate instances, run algorithms, verify artifacts,
and benchmark manifests into CSV.

Exit codes: 0 success, 2 verification failure, 3 parameter error,
4 resource-cap refusal.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .graphs import (
    INF,
    WeightedGraph,
    read_graph,
    scale_to_integers,
    stretch,
    write_graph,
)
from .greedy import greedy_spanner
from .hardness import read_sat, reduce_sat, write_sidecar
from .instances import gen_greedy_hard, gen_ladder, gen_multiladder
from .oracle import OracleCapError, exact_opt_spanner
from .prune import CellCapError, iterate_prune, prune, prune_with_scaling

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_PARAM = 3
EXIT_CAP = 4


class ParameterError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); route to exit code 3
        raise ParameterError(message)


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"bad rational {text!r}: {exc}") from exc


def _frac_str(x) -> str:
    if x is INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _dec_str(x) -> str:
    return "inf" if x is INF else f"{float(x):.6g}"


def build_parser() -> _Parser:
    p = _Parser(prog="spannerlab")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    gsub = g.add_subparsers(dest="family", required=True)
    lad = gsub.add_parser("ladder")
    lad.add_argument("--n", type=int, required=True)
    lad.add_argument("--eps", required=True)
    lad.add_argument("--perturb", action="store_true")
    lad.add_argument("--out", required=True)
    mul = gsub.add_parser("multiladder")
    mul.add_argument("--k", type=int, required=True)
    mul.add_argument("--n", type=int, required=True)
    mul.add_argument("--eps", required=True)
    mul.add_argument("--perturb", action="store_true")
    mul.add_argument("--out", required=True)
    gh = gsub.add_parser("greedyhard")
    gh.add_argument("--eps", required=True)
    gh.add_argument("--x", required=True)
    gh.add_argument("--out", required=True)
    sat = gsub.add_parser("sat")
    sat.add_argument("--in", dest="formula", required=True)
    sat.add_argument("--eps", required=True)
    sat.add_argument("--out", required=True)
    sat.add_argument("--sidecar", default=None, help="defaults to OUT + '.json'")
    sat.add_argument("--zero-eta", default=None)

    r = sub.add_parser("run", help="run an algorithm on a graph file")
    r.add_argument("algorithm", choices=["greedy", "prune", "iterate", "scaled", "oracle"])
    r.add_argument("graph")
    r.add_argument("--eps", default=None)
    r.add_argument("--t", default=None, help="stretch target for greedy (default 1+eps)")
    r.add_argument("--initial", default=None, help="initial spanner file for prune/iterate")
    r.add_argument("--max-edges", type=int, default=24)
    r.add_argument("--cell-cap", type=int, default=None)
    r.add_argument("--out", default=None, help="spanner edge-list output")
    r.add_argument("--report", default=None, help="JSON report output")

    v = sub.add_parser("verify", help="recheck a spanner file against its graph")
    v.add_argument("graph")
    v.add_argument("spanner")
    v.add_argument("--eps", required=True)

    b = sub.add_parser("bench", help="run a manifest of (graph, algorithm, params) rows")
    b.add_argument("manifest")
    b.add_argument("--out", default=None, help="CSV output (default stdout)")
    return p


def _cmd_gen(args) -> int:
    if args.family == "ladder":
        g = gen_ladder(args.n, _frac(args.eps), perturb=args.perturb)
    elif args.family == "multiladder":
        g = gen_multiladder(args.k, args.n, _frac(args.eps), perturb=args.perturb)
    elif args.family == "greedyhard":
        g = gen_greedy_hard(_frac(args.eps), _frac(args.x))
    else:
        inst = read_sat(args.formula)
        eta = _frac(args.zero_eta) if args.zero_eta else None
        out = reduce_sat(inst, _frac(args.eps), zero_eta=eta)
        write_graph(out.graph, args.out)
        write_sidecar(out, args.sidecar or args.out + ".json")
        print(f"wrote {args.out} ({out.graph.n} vertices, {out.graph.m} edges), W={_frac_str(out.W)}")
        return EXIT_OK
    write_graph(g, args.out)
    print(f"wrote {args.out} ({g.n} vertices, {g.m} edges)")
    return EXIT_OK


def _scaled_for_pruning(g: WeightedGraph):
    if any(w == 0 for _, _, w in g.edges):
        raise ParameterError("pruning algorithms need strictly positive weights")
    return scale_to_integers(g)


def _run_algorithm(algorithm: str, g: WeightedGraph, args) -> tuple[frozenset, dict]:
    """Returns the spanner's edge keys (in g) and algorithm-specific log data."""
    extra: dict = {}
    if algorithm == "greedy":
        t = _frac(args.t) if args.t else 1 + _frac(args.eps or "0")
        if t <= 1:
            raise ParameterError("greedy needs --t > 1 or --eps > 0")
        h = greedy_spanner(g, t)
        return h.edge_keys, {"t": _frac_str(t)}
    if algorithm == "oracle":
        if args.eps is None:
            raise ParameterError("oracle needs --eps")
        res = exact_opt_spanner(g, _frac(args.eps), max_edges=args.max_edges)
        return res.opt_edges, {"nodes_explored": res.nodes_explored}
    if args.eps is None:
        raise ParameterError(f"{algorithm} needs --eps")
    eps = _frac(args.eps)
    scaled, scale = _scaled_for_pruning(g)
    extra["scale"] = _frac_str(scale)
    if algorithm == "prune":
        if args.initial:
            h0 = read_graph(args.initial)
            h0 = scaled.subgraph(h0.edge_keys)
        else:
            h0 = greedy_spanner(scaled, 1 + eps)
        h1, state = prune(scaled, h0, eps, cell_cap=args.cell_cap)
        extra["rounds"] = [r.as_dict() for r in state.rounds]
        return h1.edge_keys, extra
    if algorithm == "iterate":
        initial = None
        if args.initial:
            initial = scaled.subgraph(read_graph(args.initial).edge_keys)
        h, logs, states = iterate_prune(scaled, eps, initial_spanner=initial, cell_cap=args.cell_cap)
        extra["iterations"] = [entry.as_dict() for entry in logs]
        extra["rounds"] = [r.as_dict() for st in states for r in st.rounds]
        return h.edge_keys, extra
    if algorithm == "scaled":
        h, log = prune_with_scaling(scaled, eps, cell_cap=args.cell_cap)
        extra["iterations"] = [entry.as_dict() for entry in log.iterations]
        extra["contracted"] = log.scaled
        if log.inner_stretch is not None:
            extra["inner_stretch"] = _frac_str(log.inner_stretch)
        return h.edge_keys, extra
    raise ParameterError(f"unknown algorithm {algorithm}")


def _cmd_run(args) -> int:
    g = read_graph(args.graph)
    started = time.perf_counter()
    keys, extra = _run_algorithm(args.algorithm, g, args)
    elapsed = time.perf_counter() - started
    spanner = g.subgraph(keys)
    out_path = args.out or (Path(args.graph).name + f".{args.algorithm}.spanner")
    write_graph(spanner, out_path)

    # re-verify from the emitted file rather than trusting in-memory state
    emitted = read_graph(out_path)
    s = stretch(g, emitted)
    report = {
        "instance": {"file": args.graph, "n": g.n, "m": g.m},
        "algorithm": args.algorithm,
        "params": {"eps": args.eps, "t": args.t},
        "spanner_file": str(out_path),
        "weight": _frac_str(emitted.total_weight),
        "weight_decimal": _dec_str(emitted.total_weight),
        "stretch": _frac_str(s),
        "stretch_decimal": _dec_str(s),
        "wall_time_s": round(elapsed, 6),
    }
    report.update(extra)
    text = json.dumps(report, indent=2)
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = read_graph(args.graph)
    h = read_graph(args.spanner)
    eps = _frac(args.eps)
    if not h.is_subgraph_of(g):
        raise ParameterError("spanner file is not a subgraph of the graph file")
    s = stretch(g, h)
    ok = s is not INF and s <= 1 + eps
    print(
        json.dumps(
            {
                "ok": ok,
                "stretch": _frac_str(s),
                "weight": _frac_str(h.total_weight),
            }
        )
    )
    return EXIT_OK if ok else EXIT_VERIFY


def _parse_manifest(text: str):
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ParameterError(f"manifest line needs 'graph algorithm [k=v ...]': {line!r}")
        params = {}
        for kv in parts[2:]:
            if "=" not in kv:
                raise ParameterError(f"bad manifest parameter {kv!r}")
            k, v = kv.split("=", 1)
            params[k] = v
        rows.append((parts[0], parts[1], params))
    return rows


def _cmd_bench(args) -> int:
    rows = _parse_manifest(Path(args.manifest).read_text())
    results = []
    for graph_file, algorithm, params in rows:
        g = read_graph(graph_file)
        ns = argparse.Namespace(
            eps=params.get("eps"),
            t=params.get("t"),
            initial=params.get("initial"),
            max_edges=int(params.get("max_edges", 24)),
            cell_cap=int(params["cell_cap"]) if "cell_cap" in params else None,
        )
        started = time.perf_counter()
        keys, _ = _run_algorithm(algorithm, g, ns)
        elapsed = time.perf_counter() - started
        h = g.subgraph(keys)
        results.append(
            {
                "instance": graph_file,
                "algorithm": algorithm,
                "params": " ".join(f"{k}={v}" for k, v in sorted(params.items())),
                "weight": _frac_str(h.total_weight),
                "weight_decimal": _dec_str(h.total_weight),
                "stretch": _frac_str(stretch(g, h)),
                "stretch_decimal": _dec_str(stretch(g, h)),
                "wall_time_s": f"{elapsed:.6f}",
            }
        )
    oracle_weight = {
        r["instance"]: Fraction(r["weight"]) for r in results if r["algorithm"] == "oracle"
    }
    for r in results:
        base = oracle_weight.get(r["instance"])
        if base is not None and base != 0:
            ratio = Fraction(r["weight"]) / base
            r["oracle_ratio"] = _frac_str(ratio)
            r["oracle_ratio_decimal"] = _dec_str(ratio)
        else:
            r["oracle_ratio"] = ""
            r["oracle_ratio_decimal"] = ""

    fields = [
        "instance",
        "algorithm",
        "params",
        "weight",
        "weight_decimal",
        "stretch",
        "stretch_decimal",
        "oracle_ratio",
        "oracle_ratio_decimal",
        "wall_time_s",
    ]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    writer.writerows(results)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_bench(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (CellCapError, OracleCapError) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
