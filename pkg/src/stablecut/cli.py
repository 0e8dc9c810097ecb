"""Command-line front end.

Every solving command prints its primal answer, a dual certificate and a
final line that reads CERTIFIED only after the certificate was re-checked.

Exit codes: 0 certified, 1 infeasible (a certificate is printed), 2 bad
input, 3 resource bound hit, 4 a certificate failed its re-check.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Callable

from . import oracle
from .core import CoreSystem, is_stable, reduce_to_core
from .errors import ContractError, InfeasibleError, InputError, ResourceError
from .fair import fair_stable_matching, level_count_vector, rank_levels
from .flow import INF, Arc, FlowNetwork
from .instance import Instance, parse, read_file, write
from .lcut import disjoint_stable_matchings_min_total_cost, max_weight_union, min_lcut_ring_compatible
from .optimize import (
    _shifted,
    cheapest_stable_matching,
    constrained_stable_matching,
    cost_vector,
    multi_cost_stable_matching,
    pack_h_independent,
)
from .poset import dilworth_weighted, greene_kleitman, induced_poset, mirsky_cover, weighted_greene_kleitman

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_RESOURCE, EXIT_REFUTED = 0, 1, 2, 3, 4


@dataclass
class Outcome:
    primal: object
    dual: object
    value: object
    verify: Callable  # claimed value -> list of problems
    summary: str = ""
    stats: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK


def _sorted(xs):
    return sorted(xs, key=str)


def _m(m):
    return _sorted(m) if m is not None else None


# ------------------------------------------------------------ value sources

def _int_or_file(token: str | None, kind: str):
    """``--h 1`` means a uniform bound, ``--h file`` reads ``h`` lines."""
    if token is None:
        return None
    try:
        return int(token)
    except ValueError:
        return getattr(read_file(token, values_only=True), kind)


def _costs(args, inst: Instance) -> list:
    if args.cost:
        tables = [read_file(path, values_only=True).cost for path in args.cost]
    else:
        tables = [inst.cost]
    for table in tables:
        for e in table:
            if e not in inst.system.edge:
                raise InputError(f"cost given for unknown edge {e!r}")
    return tables


def _weights(args, inst: Instance, core: CoreSystem) -> dict:
    given = read_file(args.weight, values_only=True).weight if args.weight else inst.weight
    return {e: given.get(e, 1) for e in core.stable_edges}


def _bounds(args, inst: Instance, core: CoreSystem) -> dict:
    given = _int_or_file(args.h, "h")
    if isinstance(given, int):
        if given < 0:
            raise InputError("--h must be non-negative")
        return {e: given for e in core.stable_edges}
    table = given if given is not None else inst.h
    return {e: table.get(e, 1) for e in core.stable_edges}


def _edge_list(text: str | None, inst: Instance) -> list:
    if not text:
        return []
    out = [x.strip() for x in text.split(",") if x.strip()]
    for e in out:
        if e not in inst.system.edge:
            raise InputError(f"unknown edge id {e!r}")
    return out


def _cost_of(c, m):
    return sum(c.get(e, 0) for e in m)


def _certify_min_cost(core, c):
    """Ring-compatible minimum cut under the shifted costs: its flow proves
    that no stable matching is cheaper."""
    d = core.digraph
    shifted, low = _shifted(core, c)
    arcs = tuple(Arc(e, *d.stable_arcs[e], shifted[e]) for e in sorted(d.stable_arcs))
    cert = min_lcut_ring_compatible(FlowNetwork(d.nodes, arcs, d.source, d.sink), d.ring, 1)
    return cert, low * core.n


def _flow_report(cert):
    return {
        "flow": {str(k): v for k, v in sorted(cert.flow.values.items(), key=lambda kv: str(kv[0])) if v},
        "amount": cert.flow.amount,
        "shores": [_sorted(z) for z in cert.lcut.shores],
        "potential": {str(k): v for k, v in sorted(cert.potential.values.items(), key=lambda kv: str(kv[0]))},
    }


# ------------------------------------------------------------ commands

def cmd_reduce(args, inst, core):
    g = inst.system

    def verify(value):
        problems = []
        for name, m in (("girl-best", core.girl_best_matching), ("boy-best", core.boy_best_matching)):
            if not is_stable(g, m):
                problems.append(f"{name} matching is not stable")
        for e, m in core.m_e.items():
            if e not in m or not is_stable(g, m):
                problems.append(f"witness for {e} is not a stable matching through it")
        if value != len(core.stable_edges):
            problems.append("stable edge count differs")
        return problems

    return Outcome(
        {"stable_edges": _sorted(core.stable_edges), "girl_best": _m(core.girl_best_matching),
         "boy_best": _m(core.boy_best_matching)},
        {"witness": {e: _m(core.m_e[e]) for e in _sorted(core.m_e)}},
        len(core.stable_edges),
        verify,
        summary=f"stable_edges={len(core.stable_edges)}",
    )


def cmd_enumerate(args, inst, core):
    d = core.digraph
    members = d.ring.members(limit=args.max_enum)
    matchings = sorted(
        (_m(frozenset(e for e, (t, h) in d.stable_arcs.items() if t in z and h not in z))
         for z in members if z and len(z) < len(d.nodes)),
    )

    def verify(value):
        problems = [f"{m} is not stable" for m in matchings if not is_stable(inst.system, m)]
        if len(set(map(tuple, matchings))) != len(matchings):
            problems.append("duplicate matchings")
        if value != len(matchings):
            problems.append("count differs")
        return problems

    return Outcome(matchings, None, len(matchings), verify, summary=f"count={len(matchings)}")


def cmd_check(args, inst, core):
    m = _edge_list(args.matching, inst)
    g = inst.system
    stable = is_stable(g, m)
    blocking = None
    if not stable and g.is_matching(m):
        mate = g.partner_edge(m)
        for e in g.edges:
            if e.id not in m and not any(v in mate and g.prefers(v, mate[v], e.id) for v in (e.boy, e.girl)):
                blocking = e.id
                break

    def verify(value):
        if value != oracle.definitely_stable(g, m):
            return ["stability verdict differs from the definition"]
        return []

    dual = {"blocking_edge": blocking, "is_matching": g.is_matching(m)}
    return Outcome(_sorted(m), dual, stable, verify, summary="stable" if stable else "unstable",
                   exit_code=EXIT_OK if stable else EXIT_INFEASIBLE)


def cmd_cheapest(args, inst, core):
    c = _costs(args, inst)[0]
    m, cost = cheapest_stable_matching(core, c)
    cert, offset = _certify_min_cost(core, c)

    def verify(value):
        problems = list(cert.violations())
        if not is_stable(inst.system, m):
            problems.append("matching is not stable")
        if _cost_of(c, m) != value:
            problems.append("stated cost differs from the matching's cost")
        if cert.lcut.capacity + offset != value:
            problems.append("cost differs from the certified minimum")
        return problems

    return Outcome(_m(m), _flow_report(cert), cost, verify, summary=f"cost={cost}")


def cmd_multi_cost(args, inst, core):
    costs = _costs(args, inst)
    m = multi_cost_stable_matching(core, costs)
    cert, offset = _certify_min_cost(core, costs[0])
    values = [_cost_of(c, m) for c in costs]

    def verify(value):
        problems = list(cert.violations())
        if not is_stable(inst.system, m):
            problems.append("matching is not stable")
        if value[0] != cert.lcut.capacity + offset:
            problems.append("first cost is not the certified minimum")
        if value != [_cost_of(c, m) for c in costs]:
            problems.append("stated costs differ")
        return problems

    return Outcome(_m(m), _flow_report(cert), values, verify, summary="costs=" + ",".join(map(str, values)))


def cmd_constrained(args, inst, core):
    forced, forbidden = _edge_list(args.force, inst), _edge_list(args.forbid, inst)
    c = _costs(args, inst)[0] if (args.cost or inst.cost) else None
    m = constrained_stable_matching(core, forced, forbidden, c)
    if m is not None:
        def verify(value):
            problems = []
            if not is_stable(inst.system, m):
                problems.append("matching is not stable")
            if not set(forced) <= m or set(forbidden) & m:
                problems.append("constraints violated")
            if value != _cost_of(c or {}, m):
                problems.append("stated cost differs")
            return problems

        return Outcome(_m(m), None, _cost_of(c or {}, m), verify, summary="feasible")
    # no solution: a minimum cut under the penalty costs exceeds the target
    d = core.digraph
    n = core.n
    fset, bset = set(forced), set(forbidden)
    if not fset <= core.stable_edges:
        dual = {"non_stable_forced": _sorted(fset - core.stable_edges)}

        def verify(value):
            return [] if value is None and not fset <= core.stable_edges else ["forced edges are stable"]

        return Outcome(None, dual, None, verify, summary="infeasible", exit_code=EXIT_INFEASIBLE)
    penalty = {e: 0 if e in fset else n + 1 if e in bset else 1 for e in core.stable_edges}
    arcs = tuple(Arc(e, *d.stable_arcs[e], penalty[e]) for e in sorted(d.stable_arcs))
    cert = min_lcut_ring_compatible(FlowNetwork(d.nodes, arcs, d.source, d.sink), d.ring, 1)

    def verify(value):
        problems = list(cert.violations())
        if value is not None:
            problems.append("a solution was claimed")
        if cert.lcut.capacity == n - len(fset):
            problems.append("minimum penalty is attainable")
        return problems

    dual = {"penalty_min": cert.lcut.capacity, "target": n - len(fset), **_flow_report(cert)}
    return Outcome(None, dual, None, verify, summary="infeasible", exit_code=EXIT_INFEASIBLE)


def _pack(args, inst, core, c):
    h = _bounds(args, inst, core)
    cert = pack_h_independent(core, h, c)
    family = [(_m(m), k) for m, k in cert.family]
    ref = None
    if c is not None:
        _, ref = cheapest_stable_matching(core, c)

    def verify(value):
        problems = []
        use = {}
        for m, k in cert.family:
            if not is_stable(inst.system, m):
                problems.append("family member not stable")
            if c is not None and _cost_of(c, m) != ref:
                problems.append("family member is not cheapest")
            for e in m:
                use[e] = use.get(e, 0) + k
        problems += [f"edge {e} used {k} > {h[e]} times" for e, k in use.items() if k > h[e]]
        dodge = constrained_stable_matching(core, forbidden=cert.blocker, c=c)
        if dodge is not None and (c is None or _cost_of(c, dodge) == ref):
            problems.append("blocker misses a matching")
        if sum(k for _, k in cert.family) != value or sum(h[e] for e in cert.blocker) != value:
            problems.append("family size, blocker value and stated value differ")
        return problems

    nu = sum(k for _, k in cert.family)
    tau = sum(h[e] for e in cert.blocker)
    return Outcome(family, {"blocker": _sorted(cert.blocker)}, cert.value, verify, summary=f"nu={nu} tau={tau}")


def cmd_pack(args, inst, core):
    return _pack(args, inst, core, None)


def cmd_pack_min_cost(args, inst, core):
    return _pack(args, inst, core, _costs(args, inst)[0])


def cmd_lcut(args, inst, core):
    c = _costs(args, inst)[0]
    res = disjoint_stable_matchings_min_total_cost(core, args.ell, c)

    def verify(value):
        problems = list(res.certificate.violations())
        ms = res.matchings
        if len(ms) != args.ell or any(a & b for i, a in enumerate(ms) for b in ms[i + 1:]):
            problems.append("matchings are not pairwise disjoint")
        problems += ["matching not stable" for m in ms if not is_stable(inst.system, m)]
        shifted, low = _shifted(core, c)
        if res.certificate.lcut.capacity + low * core.n * args.ell != value:
            problems.append("cost differs from the certified minimum")
        if sum(_cost_of(c, m) for m in ms) != value:
            problems.append("stated cost differs")
        return problems

    return Outcome([_m(m) for m in res.matchings], _flow_report(res.certificate), res.cost, verify,
                   summary=f"cost={res.cost}")


def cmd_max_union(args, inst, core):
    w = _weights(args, inst, core)
    res = max_weight_union(core, args.ell, w)

    def verify(value):
        problems = list(res.certificate.violations())
        problems += ["matching not stable" for m in res.matchings if not is_stable(inst.system, m)]
        if len(res.matchings) != args.ell:
            problems.append("wrong number of matchings")
        if sum(w[e] for e in frozenset().union(*res.matchings)) != value:
            problems.append("stated weight differs")
        return problems

    return Outcome([_m(m) for m in res.matchings], {"lcut_capacity": res.certificate.lcut.capacity},
                   res.weight, verify, summary=f"weight={res.weight}")


def cmd_cover(args, inst, core):
    poset = induced_poset(core)
    f = _weights(args, inst, core)
    cov = mirsky_cover(poset, f)

    def verify(value):
        problems = ["member not stable" for a, _ in cov.family if not is_stable(inst.system, a)]
        for x in poset.elements:
            if sum(k for a, k in cov.family if x in a) < f[x]:
                problems.append(f"{x} under-covered")
        if not poset.is_chain(cov.chain):
            problems.append("witness is not a chain")
        if sum(k for _, k in cov.family) != value or sum(f[x] for x in cov.chain) != value:
            problems.append("family size, chain value and stated value differ")
        return problems

    return Outcome([(_m(a), k) for a, k in cov.family], {"chain": list(cov.chain)}, cov.value, verify,
                   summary=f"matchings={cov.value} chain={sum(f[x] for x in cov.chain)}")


def cmd_dilworth(args, inst, core):
    poset = induced_poset(core)
    w = _weights(args, inst, core)
    cert = dilworth_weighted(poset, w)

    def verify(value):
        problems = []
        if not poset.is_antichain(cert.antichain):
            problems.append("not an antichain")
        for chain, _ in cert.chains:
            if not poset.is_chain(chain):
                problems.append("not a chain")
        for x in poset.elements:
            if sum(k for ch, k in cert.chains if x in ch) < w[x]:
                problems.append(f"{x} under-covered")
        if len(cert.chains) > 4 * max(core.n, 1):
            problems.append("more than 4n distinct chains")
        if sum(w[x] for x in cert.antichain) != value or sum(k for _, k in cert.chains) != value:
            problems.append("antichain weight, chain count and stated value differ")
        return problems

    return Outcome(_m(cert.antichain), {"chains": [[list(ch), k] for ch, k in cert.chains]}, cert.weight, verify,
                   summary=f"antichain={cert.weight} chains={sum(k for _, k in cert.chains)}")


def cmd_gk(args, inst, core):
    poset = induced_poset(core)
    if args.weight or inst.weight:
        w = _weights(args, inst, core)
        res = weighted_greene_kleitman(poset, w, args.ell)

        def verify(value):
            problems = [f"{x} over-used" for x, s in res.slack.items() if s < 0]
            problems += ["not an antichain" for a in res.antichains if not poset.is_antichain(a)]
            problems += ["not a chain" for ch in res.chains if not poset.is_chain(ch)]
            union = frozenset().union(*res.antichains)
            chain_side = args.ell * len(res.chains) + sum(res.slack.values())
            if sum(w[x] for x in union) != value or chain_side != value:
                problems.append("antichain side, chain side and stated value differ")
            return problems

        return Outcome([_m(a) for a in res.antichains], {"chains": [list(c) for c in res.chains]},
                       res.value, verify, summary=f"alpha={res.value}")
    cert = greene_kleitman(poset, args.ell)

    def verify(value):
        problems = cert.violations(poset, args.ell)
        if value != cert.value:
            problems.append("stated value differs")
        return problems

    return Outcome([_m(a) for a in cert.antichains], {"chains": [list(c) for c in cert.chains]},
                   cert.value, verify, summary=f"alpha={cert.value}")


def cmd_fair(args, inst, core):
    levels = inst.level or rank_levels(core)
    m, sig = fair_stable_matching(core, levels)
    counts = level_count_vector(core, levels, m)

    def verify(value):
        problems = [] if is_stable(inst.system, m) else ["matching not stable"]
        expect = [0] * len(counts)
        for lam, beta in zip(sig.levels, sig.counts):
            expect[lam - 1] = beta
        if list(value) != expect or list(level_count_vector(core, levels, m)) != expect:
            problems.append("level counts disagree with the signature")
        if sum(sig.counts) != 2 * core.n:
            problems.append("signature does not account for every node")
        return problems

    dual = {"levels": list(sig.levels), "counts": list(sig.counts)}
    return Outcome(_m(m), dual, list(counts), verify,
                   summary="signature=" + ",".join(f"{a}:{b}" for a, b in zip(sig.levels, sig.counts)))


COMMANDS = {
    "reduce": cmd_reduce,
    "enumerate": cmd_enumerate,
    "check": cmd_check,
    "cheapest": cmd_cheapest,
    "multi-cost": cmd_multi_cost,
    "constrained": cmd_constrained,
    "pack": cmd_pack,
    "lcut": cmd_lcut,
    "pack-min-cost": cmd_pack_min_cost,
    "max-union": cmd_max_union,
    "cover": cmd_cover,
    "dilworth": cmd_dilworth,
    "gk": cmd_gk,
    "fair": cmd_fair,
}


def _corrupt(value):
    if isinstance(value, bool) or value is None:
        return "corrupted"
    if isinstance(value, int):
        return value + 1
    if isinstance(value, list) and value:
        return [value[0] + 1] + value[1:]
    return "corrupted"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--ell", type=int, default=2, help="number of matchings or antichains")
    common.add_argument("--cost", action="append", metavar="FILE", help="cost lines; repeat for multi-cost")
    common.add_argument("--weight", metavar="FILE", help="weight lines")
    common.add_argument("--h", metavar="N|FILE", help="uniform bound or file of h lines")
    common.add_argument("--forbid", metavar="E1,E2", help="edges a matching must avoid")
    common.add_argument("--force", metavar="E1,E2", help="edges a matching must contain")
    common.add_argument("--matching", metavar="E1,E2", help="matching to check")
    common.add_argument("--max-enum", type=int, default=10000, help="enumeration bound")
    common.add_argument("--corrupt-certificate", action="store_true", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="stablecut", description="Stable matching optimization with certificates.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("instance", help="instance file ('-' for stdin)")
    gen = sub.add_parser("gen", parents=[common], help="write a seeded random instance")
    gen.add_argument("--boys", type=int, default=4)
    gen.add_argument("--girls", type=int, default=4)
    gen.add_argument("--density", type=float, default=1.0)
    return parser


def _load(path: str) -> Instance:
    if path == "-":
        return parse(sys.stdin.read())
    return read_file(path)


def _render(report: dict, summary: str, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True) + "\n"
    lines = [f"command: {report['command']}", f"instance: {report['instance']}"]
    for key in ("primal", "dual", "value"):
        lines.append(f"{key}: {json.dumps(report[key], sort_keys=True)}")
    for problem in report["stats"].get("problems", []):
        lines.append(f"problem: {problem}")
    lines.append(f"{summary} {'CERTIFIED' if report['certified'] else 'REFUTED'}")
    return "\n".join(lines) + "\n"


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            if args.boys < 0 or args.girls < 0 or not 0 <= args.density <= 1:
                raise InputError("sizes must be non-negative and density in [0, 1]")
            out.write(write(oracle.random_instance(args.boys, args.girls, args.density, args.seed)))
            return EXIT_OK
        if args.ell < 1:
            raise InputError("--ell must be positive")
        inst = _load(args.instance)
        core = reduce_to_core(inst.system)
        if core.n == 0 and args.command not in ("reduce", "check", "enumerate"):
            raise ContractError("the instance has no stable edges")
        outcome = COMMANDS[args.command](args, inst, core)
    except InfeasibleError as exc:
        cert = exc.certificate
        dual = None
        if cert is not None and hasattr(cert, "blocker"):
            dual = {"blocker": _sorted(cert.blocker), "nu": cert.value}
        report = {"command": args.command, "instance": args.instance, "primal": None, "dual": dual,
                  "value": None, "certified": False, "stats": {"error": str(exc)}}
        out.write(json.dumps(report, sort_keys=True) + "\n" if args.json else f"infeasible: {exc}\ndual: {json.dumps(dual)}\n")
        return EXIT_INFEASIBLE
    except (InputError, ContractError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE

    claimed = _corrupt(outcome.value) if args.corrupt_certificate else outcome.value
    problems = outcome.verify(claimed)
    stats = {"n": core.n, "stable_edges": len(core.stable_edges), "edges": len(inst.system.edges)}
    if problems:
        stats["problems"] = problems
    report = {"command": args.command, "instance": args.instance, "primal": outcome.primal,
              "dual": outcome.dual, "value": claimed, "certified": not problems, "stats": stats}
    out.write(_render(report, outcome.summary, args.json))
    if problems:
        return EXIT_REFUTED
    return outcome.exit_code


def main() -> None:
    sys.exit(run())
