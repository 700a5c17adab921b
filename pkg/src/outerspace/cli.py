"""Command-line front end and experiment runner.

Subcommands: dist, optimal-map, fold, standard-geodesic, project, ball,
ffdist, simple, reduce, whitehead-graph, qg-check, experiment.

Exit codes: 0 success, 1 a property violation was found, 2 usage error.
Reports are deterministic for a fixed seed: instances derive their own
generators from (seed, index), results are collected in index order, and
JSON is emitted with sorted keys.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import log10

from .words import FreeGroup, parse_letters, Word, CyclicWord
from .marked_graph import MarkedMetricGraph
from . import lipschitz, folding, whitehead, factor_complex, oracles, randomgen
from . import stallings


class UsageError(Exception):
    pass


def _frac_str(x):
    return f"{x.numerator}/{x.denominator}"


def _json_dump(obj, fh):
    json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
    fh.write("\n")


def _load_graph(path):
    with open(path) as fh:
        return MarkedMetricGraph.from_json(json.load(fh))


def _word_arg(group, text):
    return Word(group, parse_letters(text))


def _instance_rng(seed, index):
    return random.Random(f"{seed}:{index}")


# -- subcommands ----------------------------------------------------------


def cmd_dist(args):
    G = _load_graph(args.source)
    Gp = _load_graph(args.target)
    lam, wit = lipschitz.stretch_factor(G.normalize(), Gp.normalize())
    out = {"lambda": _frac_str(lam), "log10": f"{log10(lam):.12f}",
           "witness": list(wit.edges), "witness_shape": wit.shape}
    if args.json:
        _json_dump(out, sys.stdout)
    else:
        print(f"lambda = {_frac_str(lam)}  (log10 {out['log10']})  "
              f"witness {wit.shape} {list(wit.edges)}")
    return 0


def cmd_optimal_map(args):
    G = _load_graph(args.source).normalize()
    Gp = _load_graph(args.target).normalize()
    f = lipschitz.optimal_map(G, Gp)
    tension = sorted(lipschitz.tension_graph(f))
    out = {"sigma": _frac_str(f.sigma()),
           "slopes": {str(e): _frac_str(f.slope(e)) for e in sorted(G.edge_ends)},
           "tension_graph": tension}
    if args.emit_dot:
        with open(args.emit_dot, "w") as fh:
            fh.write(f.to_dot())
    if args.json:
        _json_dump(out, sys.stdout)
    else:
        print(f"sigma = {out['sigma']}; tension graph {tension}")
    return 0


def cmd_standard_geodesic(args):
    G = _load_graph(args.source).normalize()
    Gp = _load_graph(args.target).normalize()
    sg = folding.standard_geodesic(G, Gp)
    out = {
        "lengths_start": {str(e): _frac_str(l) for e, l in sorted(sg.lengths_start.items())},
        "lengths_end": {str(e): _frac_str(l) for e, l in sorted(sg.lengths_end.items())},
        "collapsed_edges": sorted(sg.collapsed_edges),
        "events": len(sg.path.events) - 1,
    }
    if args.json:
        _json_dump(out, sys.stdout)
    else:
        print(f"simplex segment to {out['lengths_end']}, "
              f"then {out['events']} fold events"
              + (f" (missing face: edges {out['collapsed_edges']})"
                 if sg.collapsed_edges else ""))
    return 0


def cmd_fold(args):
    G = _load_graph(getattr(args, "from")).normalize()
    Gp = _load_graph(args.to).normalize()
    sg = folding.standard_geodesic(G, Gp)
    probes = []
    group = G.group
    for text in (args.probe or []):
        probes.append(CyclicWord(group, parse_letters(text)))
    stats = folding.path_statistics(sg.path, probe_loops=probes)
    if args.emit_events:
        with open(args.emit_events, "w") as fh:
            for ev in sg.path.events:
                _json_dump({"time": _frac_str(ev.time),
                            "snapshot": ev.graph.to_json()}, fh)
    if args.stats:
        with open(args.stats, "w", newline="") as fh:
            w = csv.writer(fh)
            header = ["time", "volume"] + [f"len_{p}" for p in probes] \
                + [f"illegal_{p}" for p in probes]
            w.writerow(header)
            for row in stats:
                w.writerow([_frac_str(row["time"]), _frac_str(row["volume"])]
                           + [_frac_str(l["length"]) for l in row["loops"]]
                           + [l["illegal_turns"] for l in row["loops"]])
    print(f"folded in {len(sg.path.events) - 1} events; "
          f"final volume {_frac_str(sg.path.events[-1].graph.volume())}")
    return 0


def cmd_project(args):
    G = _load_graph(args.graph)
    img = factor_complex.project(G)
    handles = sorted(img, key=lambda h: h.code)
    if args.dot:
        for i, h in enumerate(handles):
            print(h.core.to_dot(name=f"factor{i}"))
        return 0
    out = [{"rank": h.rank, "edges": h.edge_count(),
            "core": h.core.to_json()} for h in handles]
    if args.json:
        _json_dump(out, sys.stdout)
    else:
        print(f"{len(out)} subgraph factors "
              f"(ranks {sorted(h['rank'] for h in out)})")
    return 0


def cmd_ball(args):
    group = FreeGroup(args.rank)
    ball = factor_complex.build_ball(group, bound=args.bound,
                                     aut_product_length=args.products,
                                     vertex_cap=args.cap)
    data = {
        "bound": ball.bound,
        "truncated": ball.truncated,
        "handles": {h.code.hex(): h.core.to_json()
                    for h in ball.handles.values()},
        "adjacency": {c.hex(): sorted(x.hex() for x in adj)
                      for c, adj in ball.adjacency.items()},
    }
    with open(args.out, "w") as fh:
        _json_dump(data, fh)
    print(f"ball with {len(ball.handles)} factors written to {args.out}")
    return 0


def _factor_from_words(group, text):
    words = [Word(group, parse_letters(t)) for t in text.split(",")]
    return stallings.FactorHandle.from_words(words, ambient_rank=group.rank)


def cmd_ffdist(args):
    group = FreeGroup(args.rank)
    with open(args.ball) as fh:
        data = json.load(fh)
    ball = factor_complex.FactorBall(bound=data["bound"])
    for codehex, core_json in data["handles"].items():
        core = _core_from_json(group, core_json)
        h = stallings.FactorHandle(core, group.rank)
        ball.handles[h.code] = h
    ball.adjacency = {bytes.fromhex(c): {bytes.fromhex(x) for x in adj}
                      for c, adj in data["adjacency"].items()}
    h1 = _factor_from_words(group, args.factor1)
    h2 = _factor_from_words(group, args.factor2)
    try:
        d = ball.distance_upper(h1, h2)
    except KeyError:
        print("factor not in ball", file=sys.stderr)
        return 2
    if d is None:
        print("unreachable within the ball")
        return 0
    print(f"distance upper bound: {d}")
    return 0


def _core_from_json(group, data):
    edges = set()
    for e in data["edges"]:
        lab = parse_letters(e["label"])[0]
        edges.add((e["from"], e["to"], lab))
    return stallings.SubgroupCoreGraph(group.rank, set(data["vertices"]),
                                       edges, data.get("basepoint"))


def cmd_simple(args):
    group = FreeGroup(args.rank)
    cw = CyclicWord(group, parse_letters(args.word))
    if args.rank == 2:
        print("note: rank 2 accepted; the factor graph itself degenerates "
              "at rank 2", file=sys.stderr)
    try:
        verdict = whitehead.is_simple(cw, orbit_cap=args.orbit_cap)
    except whitehead.OrbitCapExceeded:
        print("indeterminate: orbit cap exceeded")
        return 1
    print("simple" if verdict else "not simple")
    return 0


def cmd_reduce(args):
    group = FreeGroup(args.rank)
    cw = CyclicWord(group, parse_letters(args.word))
    res = whitehead.reduce_to_minimal(cw, orbit_cap=args.orbit_cap)
    reps = sorted(str(w) for w in res.representatives)
    out = {"minimal_length": res.minimal_length,
           "representatives": reps[:50],
           "representative_count": len(reps),
           "capped": res.capped}
    if args.json:
        _json_dump(out, sys.stdout)
    else:
        print(f"minimal length {res.minimal_length}; "
              f"{len(reps)} minimal representatives"
              + (" (capped)" if res.capped else ""))
    return 0


def cmd_whitehead_graph(args):
    group = FreeGroup(args.rank)
    cw = CyclicWord(group, parse_letters(args.word))
    W = whitehead.whitehead_graph(cw)
    report = whitehead.connectivity_report(W)
    if args.dot:
        print(W.to_dot())
    else:
        print(f"connectivity: {report}")
    return 0


def cmd_qg_check(args):
    group = FreeGroup(args.rank)
    snapshots = []
    with open(args.path) as fh:
        for line in fh:
            data = json.loads(line)
            snapshots.append(MarkedMetricGraph.from_json(data["snapshot"], group))
    images = [factor_complex.project(G) for G in snapshots]
    seeds = {h.code: h for img in images for h in img}
    ball = factor_complex.build_ball(group, seeds=list(seeds.values()),
                                     bound=args.bound,
                                     aut_product_length=args.products)
    report = factor_complex.check_reparam_quasigeodesic(images, args.K, ball)
    if not report.ok:
        print(f"window failure at index {report.failed_window[0]}: "
              f"{report.failed_window[1]}")
        return 1
    print(f"certificate: {len(report.breakpoints)} breakpoints, "
          f"window diameters {report.window_diameters}, "
          f"index condition consistent-under-upper-bounds: {report.consistent}")
    return 0


# -- experiment suites ------------------------------------------------------


def _suite_distance_oracle(seed, index, rank, twist):
    rng = _instance_rng(seed, index)
    group = FreeGroup(rank)
    G = randomgen.random_marked_graph(rng, group, twist)
    Gp = randomgen.random_marked_graph(rng, group, twist)
    lam, wit = lipschitz.stretch_factor(G, Gp)
    blam, _ = oracles.brute_stretch(G, Gp)
    return {"index": index, "lambda": _frac_str(lam),
            "oracle": _frac_str(blam), "match": lam == blam,
            "witness_length": _frac_str(wit.length_in(G))}


def _suite_fold_additivity(seed, index, rank, twist):
    rng = _instance_rng(seed, index)
    group = FreeGroup(rank)
    G = randomgen.random_marked_graph(rng, group, twist)
    Gp = randomgen.random_marked_graph(rng, group, twist)
    sg = folding.standard_geodesic(G, Gp)
    snaps = [ev.graph.normalize() for ev in sg.path.events]
    lams = {}

    def lam(i, j):
        if (i, j) not in lams:
            lams[(i, j)] = lipschitz.stretch_factor(snaps[i], snaps[j])[0]
        return lams[(i, j)]

    ok = True
    for i in range(len(snaps)):
        for j in range(i + 1, len(snaps)):
            for k in range(j + 1, len(snaps)):
                if lam(i, j) * lam(j, k) != lam(i, k):
                    ok = False
    return {"index": index, "events": len(snaps) - 1, "additive": ok}


def _suite_whitehead_oracle(seed, index, rank, length):
    rng = _instance_rng(seed, index)
    group = FreeGroup(rank)
    cw = randomgen.random_cyclic_word(rng, group, length)
    verdict = whitehead.is_simple(cw)
    oracle = oracles.whitehead_simple_oracle(cw)
    return {"index": index, "word": str(cw), "simple": verdict,
            "oracle": oracle, "match": verdict == oracle}


def _suite_qg_check(seed, index, rank, twist, K, bound):
    rng = _instance_rng(seed, index)
    group = FreeGroup(rank)
    G = randomgen.random_marked_graph(rng, group, twist + 2)
    Gp = randomgen.random_marked_graph(rng, group, twist + 2)
    sg = folding.standard_geodesic(G, Gp)
    images = [factor_complex.project(ev.graph) for ev in sg.path.events]
    seeds = {h.code: h for img in images for h in img}
    ball = factor_complex.build_ball(group, seeds=list(seeds.values()),
                                     bound=bound, aut_product_length=2)
    report = factor_complex.check_reparam_quasigeodesic(images, K, ball)
    return {"index": index, "events": len(images) - 1,
            "certified": report.ok,
            "breakpoints": len(report.breakpoints or []),
            "consistent": report.consistent}


SUITES = {
    "distance-oracle": _suite_distance_oracle,
    "fold-additivity": _suite_fold_additivity,
    "whitehead-oracle": _suite_whitehead_oracle,
    "qg-check": _suite_qg_check,
}


class ExperimentConfig:
    """Bundled experiment parameters; same config and seed give
    bit-identical reports at any worker count."""

    def __init__(self, suite, seed, instances, rank=3, workers=1, twist=3,
                 word_length=6, K=6, bound=6, orbit_cap=100_000,
                 out_prefix=None):
        for name, value in (("instances", instances), ("rank", rank),
                            ("workers", workers), ("twist", twist),
                            ("word_length", word_length), ("K", K),
                            ("bound", bound), ("orbit_cap", orbit_cap)):
            if value <= 0:
                raise UsageError(f"{name} must be positive")
        self.suite = suite
        self.seed = seed
        self.instances = instances
        self.rank = rank
        self.workers = workers
        self.twist = twist
        self.word_length = word_length
        self.K = K
        self.bound = bound
        self.orbit_cap = orbit_cap
        self.out_prefix = out_prefix

    def run(self):
        return run_experiment(self.suite, self.seed, self.instances,
                              rank=self.rank, workers=self.workers,
                              twist=self.twist, word_length=self.word_length,
                              K=self.K, bound=self.bound,
                              out_prefix=self.out_prefix)


def run_experiment(suite, seed, instances, rank=3, workers=1, twist=3,
                   word_length=6, K=6, bound=6, out_prefix=None):
    """Run a suite over seeded instances; deterministic for fixed seed."""
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite}")

    def job(index):
        if suite == "distance-oracle":
            return _suite_distance_oracle(seed, index, rank, twist)
        if suite == "fold-additivity":
            return _suite_fold_additivity(seed, index, rank, twist)
        if suite == "whitehead-oracle":
            return _suite_whitehead_oracle(seed, index, rank, word_length)
        return _suite_qg_check(seed, index, rank, twist, K, bound)

    if workers <= 1:
        results = [job(i) for i in range(instances)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(instances)))
    violations = [r for r in results
                  if not r.get("match", r.get("additive", r.get("certified", True)))]
    summary = {
        "suite": suite, "seed": seed, "instances": instances, "rank": rank,
        "violations": len(violations),
    }
    lines = []
    for r in results:
        lines.append(json.dumps(r, sort_keys=True, separators=(",", ":")))
    report = "\n".join(lines) + "\n"
    if out_prefix:
        with open(out_prefix + ".jsonl", "w") as fh:
            fh.write(report)
        with open(out_prefix + ".summary.json", "w") as fh:
            _json_dump(summary, fh)
    return summary, report


def cmd_experiment(args):
    summary, report = run_experiment(
        args.suite, args.seed, args.instances, rank=args.rank,
        workers=args.workers, twist=args.twist, word_length=args.word_length,
        K=args.K, bound=args.bound, out_prefix=args.out)
    print(json.dumps(summary, sort_keys=True))
    return 1 if summary["violations"] else 0


# -- main -------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="outerspace")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--rank", type=int, default=3)
    common.add_argument("--json", action="store_true")
    common.add_argument("--dot", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    d = add_parser("dist", help="Lipschitz stretch between two marked graphs")
    d.add_argument("source")
    d.add_argument("target")
    d.set_defaults(func=cmd_dist)

    om = add_parser("optimal-map")
    om.add_argument("source")
    om.add_argument("target")
    om.add_argument("--emit-dot")
    om.set_defaults(func=cmd_optimal_map)

    sg = add_parser("standard-geodesic")
    sg.add_argument("source")
    sg.add_argument("target")
    sg.set_defaults(func=cmd_standard_geodesic)

    f = add_parser("fold")
    f.add_argument("--from", required=True)
    f.add_argument("--to", required=True)
    f.add_argument("--emit-events")
    f.add_argument("--stats")
    f.add_argument("--probe", action="append")
    f.set_defaults(func=cmd_fold)

    pr = add_parser("project")
    pr.add_argument("graph")
    pr.set_defaults(func=cmd_project)

    b = add_parser("ball")
    b.add_argument("--bound", type=int, default=6)
    b.add_argument("--products", type=int, default=3)
    b.add_argument("--cap", type=int, default=4000)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_ball)

    ff = add_parser("ffdist")
    ff.add_argument("factor1")
    ff.add_argument("factor2")
    ff.add_argument("--ball", required=True)
    ff.set_defaults(func=cmd_ffdist)

    s = add_parser("simple")
    s.add_argument("word")
    s.add_argument("--orbit-cap", type=int, default=100_000)
    s.set_defaults(func=cmd_simple)

    r = add_parser("reduce")
    r.add_argument("word")
    r.add_argument("--orbit-cap", type=int, default=100_000)
    r.set_defaults(func=cmd_reduce)

    wg = add_parser("whitehead-graph")
    wg.add_argument("word")
    wg.set_defaults(func=cmd_whitehead_graph)

    qg = add_parser("qg-check")
    qg.add_argument("--path", required=True)
    qg.add_argument("--K", type=int, default=6)
    qg.add_argument("--bound", type=int, default=6)
    qg.add_argument("--products", type=int, default=2)
    qg.set_defaults(func=cmd_qg_check)

    ex = add_parser("experiment")
    ex.add_argument("--suite", required=True, choices=sorted(SUITES))
    ex.add_argument("--instances", type=int, default=20)
    ex.add_argument("--workers", type=int, default=1)
    ex.add_argument("--twist", type=int, default=3)
    ex.add_argument("--word-length", type=int, default=6)
    ex.add_argument("--K", type=int, default=6)
    ex.add_argument("--bound", type=int, default=6)
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
