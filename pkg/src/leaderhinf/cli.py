"""Command-line front end.

Exit codes: 0 success (or Guaranteed), 1 other error, 2 unreadable or
invalid graph, 3 reachability assumption fails, 4 Impossible,
5 Inconclusive.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import bounds as B
from . import generators, platoon, structure
from .errors import AssumptionViolatedError, GraphError, LeaderHinfError, ParseError
from .graph import (
    as_undirected,
    check_assumption1,
    degree_stats,
    is_balanced,
    is_connected,
    is_follower_tree,
    undirected_counterpart,
)
from .hinf import hinf_norm, hinf_verify_sweep
from .io import format_text, read_graph, write_graph

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_ASSUMPTION, EXIT_IMPOSSIBLE, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4, 5


class _Exit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _node(token: str) -> int:
    """Accept ``3`` or a labelled id such as ``f3``."""
    m = re.fullmatch(r"[A-Za-z_]*(\d+)", token)
    if not m:
        raise argparse.ArgumentTypeError(f"bad node id {token!r}")
    return int(m.group(1))


def _lengths(spec: str) -> list[int]:
    """``3..31:2`` (inclusive range with step), ``3,5,7`` or a mix of both."""
    out = []
    for part in spec.split(","):
        m = re.fullmatch(r"(\d+)\.\.(\d+)(?::(\d+))?", part.strip())
        if m:
            lo, hi, step = int(m.group(1)), int(m.group(2)), int(m.group(3) or 1)
            out.extend(range(lo, hi + 1, step))
        elif part.strip().isdigit():
            out.append(int(part))
        else:
            raise argparse.ArgumentTypeError(f"bad length spec {part!r}")
    return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.4f}"
    if isinstance(x, bool):
        return "yes" if x else "no"
    return str(x)


def _table(rows, out) -> None:
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k.ljust(width)}  {_fmt(v)}", file=out)


def _load(path):
    try:
        return read_graph(path)
    except (ParseError, GraphError) as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc}") from None
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _need_assumption1(g):
    if not check_assumption1(g):
        raise _Exit(EXIT_ASSUMPTION, "assumption fails: some follower is unreachable from every leader")


def _emit(args, rows, payload, out):
    if args.json:
        print(json.dumps(payload, indent=2), file=out)
    else:
        _table(rows, out)


# -- commands ------------------------------------------------------------------

def cmd_analyze(args, out):
    g = _load(args.graph)
    _need_assumption1(g)
    s = degree_stats(g)
    rows = [("mode", g.mode), ("followers", len(g.followers)), ("leaders", len(g.leaders)),
            ("assumption1", "holds")]
    payload = {"mode": g.mode, "followers": len(g.followers), "leaders": len(g.leaders),
               "assumption1": True}
    h = hinf_norm(g)
    if g.directed:
        hu = hinf_norm(undirected_counterpart(g)).value
        balanced = is_balanced(g)
        tree = is_follower_tree(g)
        rows += [("hinf_directed", h.value), ("hinf_undirected_counterpart", hu),
                 ("balanced", balanced), ("tree", tree)]
        payload.update(hinf_directed=h.value, hinf_undirected_counterpart=hu,
                       balanced=balanced, tree=tree)
        if tree and len(g.leaders) == 1 and (s.in_deg == 1).all():
            holds = abs(h.value**2 - hu) <= 1e-9 * max(1.0, hu)
            rows.append(("single_leader_square_law", "holds" if holds else "FAILS"))
            payload["single_leader_square_law"] = holds
    else:
        rows.append(("hinf", h.value))
        payload["hinf"] = h.value
    if args.sweep:
        sw = hinf_verify_sweep(g)
        rows += [("sweep_max", sw.value), ("sweep_argmax_omega", sw.sweep_argmax)]
        payload["sweep"] = sw.to_json()
    _emit(args, rows, payload, out)
    return EXIT_OK


def cmd_bounds(args, out):
    g = _load(args.graph)
    _need_assumption1(g)
    reports = {}
    if g.directed:
        reports["directed"] = B.directed_bounds(g)
        if is_balanced(g):
            reports["balanced"] = B.balanced_bound(g)
        if is_follower_tree(g):
            reports["tree"] = B.tree_bounds(g)
    if is_connected(as_undirected(g)):
        reports["undirected"] = B.undirected_bounds(g, "brute_force" if args.isoperimetric else "off")
    if args.json:
        print(json.dumps({k: r.to_json() for k, r in reports.items()}, indent=2), file=out)
        return EXIT_OK
    for name, r in reports.items():
        print(f"[{name}] target {r.target_name} = {r.target:.6f}", file=out)
        rows = [(f"lower {nm}", v) for nm, v in r.lower] + [(f"upper {nm}", v) for nm, v in r.upper]
        if rows:
            _table(rows, out)
        bad = r.violations()
        print(f"sandwich {'holds' if not bad else 'VIOLATED by ' + ', '.join(bad)}", file=out)
    return EXIT_OK


def cmd_certify(args, out):
    g = _load(args.graph)
    _need_assumption1(g)
    v = B.certify_gamma(g, args.gamma)
    if args.json:
        print(json.dumps(v.to_json(), indent=2), file=out)
    else:
        print(f"{v.verdict.value} (gamma = {args.gamma:g})", file=out)
        for r in v.reasons:
            print(f"  {r}", file=out)
    return {B.Verdict.GUARANTEED: EXIT_OK, B.Verdict.IMPOSSIBLE: EXIT_IMPOSSIBLE,
            B.Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[v.verdict]


def cmd_edge_effect(args, out):
    g = _load(args.graph)
    _need_assumption1(g)
    existing = [tuple(e) for e in args.with_edges or []]
    r = structure.apply_edge_and_measure(g, tuple(args.edge), existing)
    if args.json:
        print(json.dumps(r.to_json(), indent=2), file=out)
    else:
        confirmed = {True: "confirmed", False: "NOT confirmed", None: "no prediction"}[r.prediction_confirmed]
        print(f"{'edge':<10}{'classification':<18}{'before':>10}{'after':>10}  confirmed", file=out)
        print(f"{f'{r.edge[0]}->{r.edge[1]}':<10}{r.classification:<18}"
              f"{r.hinf_before:>10.4f}{r.hinf_after:>10.4f}  {confirmed}", file=out)
    return EXIT_OK


def cmd_leaders(args, out):
    g = _load(args.graph)
    _need_assumption1(g)
    results = []
    for node in args.attach:
        before, after = structure.leader_addition_effect(g, node, args.count)
        results.append({"follower": node, "count": args.count, "hinf_before": before, "hinf_after": after})
    if args.json:
        print(json.dumps(results, indent=2), file=out)
    else:
        print(f"{'follower':>8}{'before':>10}{'after':>10}", file=out)
        for r in results:
            print(f"{r['follower']:>8}{r['hinf_before']:>10.4f}{r['hinf_after']:>10.4f}", file=out)
    return EXIT_OK


def cmd_generate(args, out):
    kind = args.kind
    params = {}
    if kind in ("directed_path", "undirected_path"):
        params["leader"] = args.leader
    if kind in ("directed_random_tree", "balanced_cycle_family", "random_directed", "random_undirected"):
        params["seed"] = args.seed
        params["n_leaders"] = args.leaders
    if kind == "directed_random_tree":
        params["orientation"] = args.orientation
    if kind == "balanced_cycle_family":
        params["n_cycles"] = args.cycles
    if kind in ("random_directed", "random_undirected"):
        params["p"] = args.p
    g = generators.generate(kind, args.size, **params)
    if args.out:
        write_graph(g, args.out)
    else:
        out.write(format_text(g))
    return EXIT_OK


def _disturbance(spec: str):
    if spec in ("none", ""):
        return None
    kind, _, rest = spec.partition(":")
    try:
        vals = [float(x) for x in rest.split(":")] if rest else []
        if kind == "const":
            return platoon.ConstantDisturbance(vals[0] if vals else 0.1)
        if kind == "sin":
            return platoon.SinusoidDisturbance(vals[0], vals[1])
    except (ValueError, IndexError):
        pass
    raise _Exit(EXIT_ERROR, f"bad disturbance spec {spec!r}; use none, const:LEVEL or sin:AMP:OMEGA")


def cmd_platoon(args, out):
    g = _load(args.graph) if args.graph else platoon.platoon_graph(args.length, args.placement)
    _need_assumption1(g)
    cfg = platoon.PlatoonConfig(g, u_star=args.u_star, disturbance=_disturbance(args.disturbance),
                                t_end=args.t_end, dt=args.dt)
    trace = platoon.simulate(cfg)
    h = hinf_norm(g).value
    payload = {"hinf": h, "final_max_velocity_error": float(trace.velocity_error[-1])}
    rows = [("hinf", h), ("final_max_velocity_error", float(trace.velocity_error[-1]))]
    if cfg.disturbance is None or isinstance(cfg.disturbance, platoon.ConstantDisturbance):
        ss = platoon.analytic_steady_state(g, cfg.disturbance)
        payload["analytic_steady_state"] = ss.tolist()
        rows.append(("analytic_max_steady_state", float(abs(ss).max())))
    if args.trace:
        Path(args.trace).write_text(trace.to_csv())
    _emit(args, rows, payload, out)
    return EXIT_OK


def cmd_sweep(args, out):
    rows = platoon.leader_placement_sweep(args.lengths, [p.strip() for p in args.placements.split(",")])
    text = platoon.sweep_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leaderhinf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_graph(sp, required=True):
        sp.add_argument("--graph", required=required, help="graph file (text or .json)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("analyze", help="H-infinity norm and structure of a graph")
    with_graph(sp)
    sp.add_argument("--sweep", action="store_true", help="verify against a frequency sweep")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("bounds", help="graph-theoretic bounds")
    with_graph(sp)
    sp.add_argument("--isoperimetric", action="store_true", help="brute-force subset bound (<= 20 followers)")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("certify", help="degree test for ||G|| <= gamma")
    with_graph(sp)
    sp.add_argument("--gamma", type=float, required=True)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("edge-effect", help="effect of adding a follower edge to a directed tree")
    with_graph(sp)
    sp.add_argument("--edge", nargs=2, type=_node, required=True, metavar=("FROM", "TO"))
    sp.add_argument("--with", dest="with_edges", nargs=2, type=_node, action="append",
                    metavar=("FROM", "TO"), help="edge already added to the tree (repeatable)")
    sp.set_defaults(func=cmd_edge_effect)

    sp = sub.add_parser("leaders", help="effect of attaching extra leaders")
    with_graph(sp)
    sp.add_argument("--attach", type=_node, action="append", required=True, metavar="NODE")
    sp.add_argument("--count", type=int, default=1, help="leaders attached per node")
    sp.set_defaults(func=cmd_leaders)

    sp = sub.add_parser("generate", help="write a generated graph")
    sp.add_argument("kind", choices=sorted(generators.KINDS))
    sp.add_argument("size", type=int, help="number of followers (cycle length for cycles)")
    sp.add_argument("--leader", default="end", help="path leader position: end or middle")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--leaders", type=int, default=1, help="number of leaders for random kinds")
    sp.add_argument("--orientation", default="out", choices=("out", "random"))
    sp.add_argument("--cycles", type=int, default=2)
    sp.add_argument("--p", type=float, default=0.3, help="extra edge probability")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("platoon", help="simulate the velocity tracking platoon")
    with_graph(sp, required=False)
    sp.add_argument("--length", type=int, default=3, help="number of followers")
    sp.add_argument("--placement", default="end", choices=("end", "middle"))
    sp.add_argument("--u-star", type=float, default=14.0)
    sp.add_argument("--disturbance", default="const:0.1", help="none, const:LEVEL or sin:AMP:OMEGA")
    sp.add_argument("--t-end", type=float, default=100.0)
    sp.add_argument("--dt", type=float, default=0.01)
    sp.add_argument("--trace", help="write the time trace CSV here")
    sp.set_defaults(func=cmd_platoon)

    sp = sub.add_parser("sweep", help="leader placement sweep over platoon lengths (CSV)")
    sp.add_argument("--lengths", type=_lengths, required=True, help="e.g. 3..31:2 or 3,5,7")
    sp.add_argument("--placements", default="end,middle")
    sp.add_argument("--out", help="output CSV (default stdout)")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except AssumptionViolatedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (LeaderHinfError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
