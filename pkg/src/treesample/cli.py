"""Command-line interface.

Subcommands: ``sample`` (with replacement), ``swor`` (without replacement),
``verify`` (oracle cross-checks), ``bench`` (CSV timings), and
``simulate-ratio`` (average-tree-weight ratio simulation).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 degenerate
input.  Set ``TREESAMPLE_LOG={error|info|debug}`` for logging.  All commands
are deterministic given ``--seed`` (bench wall times vary, the workload does
not).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import mtt, oracle
from .colbourn import colbourn_sample, initial_state
from .errors import DegenerateDistributionError, RejectionBudgetError, StuckWalkError
from .graph import (
    GraphFormatError,
    WeightDistributionSpec,
    WeightedGraph,
    complete_unit_graph,
    random_graph,
    read_graph,
)
from .stats import empirical_counts, tvd
from .swor import sbs_swor, trie_swor
from .tree import log_tree_weight, tree_record
from .wilson import WilsonSampler, bias_demo_graph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

_REPLACEMENT_ALGOS = ("wilson-marginal", "wilson-reject", "colbourn")
_SWOR_ALGOS = ("trie", "sbs")


def _setup_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("TREESAMPLE_LOG", "error").lower(), logging.ERROR
    )
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", metavar="FILE", help="JSON weight-matrix file")
    src.add_argument("--random", type=int, metavar="N", help="random graph over N words")
    p.add_argument("--dist", default="uniform:0,1", metavar="SPEC",
                   help="weight distribution for --random: uniform:lo,hi | truncated-normal:mu,sigma | exponential:rate")
    p.add_argument("--unit-weights", action="store_true",
                   help="with --random N: complete graph with all legal weights 1 (ignores --dist)")
    p.add_argument("--seed", type=int, default=0)


def _load_graph(args) -> WeightedGraph:
    if args.graph is not None:
        with open(args.graph, "rb") as fh:
            return read_graph(fh.read())
    if args.random < 1:
        raise GraphFormatError("--random N needs N >= 1")
    if args.unit_weights:
        return complete_unit_graph(args.random)
    spec = WeightDistributionSpec.parse(args.dist)
    return random_graph(args.random, spec, seed=np.random.SeedSequence([max(args.seed, 0), 11]))


def _sampling_rng(args) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([max(args.seed, 0), 23]))


def _emit_lines(lines, out_path) -> None:
    text = "".join(line + "\n" for line in lines)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- sample --


def cmd_sample(args) -> int:
    if args.algo == "wilson-rc-biased" and not args.i_want_biased_samples:
        sys.stderr.write(
            "sample: wilson-rc-biased picks ROOT edges by raw weight and is a BIASED sampler\n"
            "(kept only to demonstrate the bias); pass --i-want-biased-samples to confirm.\n"
        )
        return EXIT_USAGE
    g = _load_graph(args)
    rng = _sampling_rng(args)
    log_z = mtt.log_partition_dependency(g)

    if args.algo == "colbourn":
        init = initial_state(g)

        def draw():
            return colbourn_sample(g, rng, initial=init), None
    else:
        sampler = WilsonSampler(g)
        if args.algo == "wilson-marginal":
            def draw():
                return sampler.marginal(rng).heads, None
        elif args.algo == "wilson-reject":
            def draw():
                rep = sampler.reject(rng)
                return rep.heads, rep.attempts
        else:  # wilson-rc-biased
            def draw():
                return sampler.rc(rng).heads, None

    lines = []
    for _ in range(args.k):
        heads, attempts = draw()
        lw = log_tree_weight(g, heads)
        weight = math.exp(lw) if lw > -700 else None
        lines.append(json.dumps(tree_record(heads, weight=weight, logprob=lw - log_z, attempts=attempts)))
    _emit_lines(lines, args.out)
    return EXIT_OK


# ------------------------------------------------------------------ swor --


def cmd_swor(args) -> int:
    g = _load_graph(args)
    rng = _sampling_rng(args)
    algo = trie_swor if args.algo == "trie" else sbs_swor
    result = algo(g, args.k, rng)
    if result.truncated:
        sys.stderr.write(
            f"swor: support exhausted after {len(result)} trees (k={args.k}); returning all of it\n"
        )
    lines = []
    for item in result:
        lines.append(
            json.dumps(
                tree_record(
                    item.heads,
                    logprob=item.logprob,
                    gumbel=item.gumbel,
                    truncated=True if result.truncated else None,
                )
            )
        )
    _emit_lines(lines, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- verify --


@dataclass
class Check:
    name: str
    ok: bool
    value: float
    tolerance: float
    detail: str = ""


def _check(checks: list, name: str, value: float, tolerance: float, detail: str = "", ok=None) -> None:
    checks.append(Check(name, bool(value <= tolerance) if ok is None else bool(ok), float(value), float(tolerance), detail))


def _sampler_tvds(g: WeightedGraph, dist, rng, samples: int, checks: list, label: str) -> None:
    table = dist.dependency_table()
    if len(table) > 128 or samples < 50_000:
        # empirical TVD has a sqrt(support/samples) noise floor; below this
        # budget a 0.02 gate measures noise, not sampler bias
        logger.info("skipping sampler TVD on %s: support %d, %d samples", label, len(table), samples)
        return
    sampler = WilsonSampler(g)
    init = initial_state(g)
    draws = {
        "wilson-marginal": lambda: sampler.marginal(rng).heads,
        "wilson-reject": lambda: sampler.reject(rng).heads,
        "colbourn": lambda: colbourn_sample(g, rng, initial=init),
    }
    for name, fn in draws.items():
        counts = empirical_counts(fn() for _ in range(samples))
        _check(checks, f"tvd/{name}/{label}", tvd(counts, table, samples), 0.02, f"{samples} samples")


def _verify_graph(g: WeightedGraph, seed: int, samples: int) -> list:
    checks: list[Check] = []
    dist = oracle.enumerate_trees(g)
    z_t = mtt.partition_spanning(g)
    z_d = mtt.partition_dependency(g)
    _check(checks, "partition/spanning", abs(z_t - dist.Z_T) / dist.Z_T, 1e-9,
           f"det {z_t:.12g} vs oracle {dist.Z_T:.12g}")
    _check(checks, "partition/dependency", abs(z_d - dist.Z_D) / dist.Z_D, 1e-9,
           f"det {z_d:.12g} vs oracle {dist.Z_D:.12g}")
    _check(checks, "marginals/max-abs-diff", float(np.abs(mtt.marginals(g) - oracle.exact_marginals(dist)).max()), 1e-9)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 31]))
    _sampler_tvds(g, dist, rng, samples, checks, "graph")
    return checks


def _verify_battery(seed: int, samples: int) -> list:
    checks: list[Check] = []
    rng = np.random.default_rng(np.random.SeedSequence([seed, 37]))
    families = [
        WeightDistributionSpec.uniform(0, 1),
        WeightDistributionSpec.truncated_normal(1, 1),
        WeightDistributionSpec.exponential(1),
    ]

    worst_z = worst_m = 0.0
    for n in range(2, 6):
        for rep in range(9):
            g = random_graph(n, families[rep % 3], seed=np.random.SeedSequence([seed, n, rep]))
            dist = oracle.enumerate_trees(g)
            worst_z = max(
                worst_z,
                abs(mtt.partition_spanning(g) - dist.Z_T) / dist.Z_T,
                abs(mtt.partition_dependency(g) - dist.Z_D) / dist.Z_D,
            )
            worst_m = max(worst_m, float(np.abs(mtt.marginals(g) - oracle.exact_marginals(dist)).max()))
    _check(checks, "battery/partitions-vs-oracle", worst_z, 1e-9, "worst over n=2..5, 3 weight families")
    _check(checks, "battery/marginals-vs-oracle", worst_m, 1e-9)

    bd = bias_demo_graph()
    bd_dist = oracle.enumerate_trees(bd)
    _check(checks, "battery/bias-demo-ZT", abs(mtt.partition_spanning(bd) - bd_dist.Z_T), 1e-9, f"Z_T={bd_dist.Z_T}")
    _check(checks, "battery/bias-demo-ZD", abs(mtt.partition_dependency(bd) - bd_dist.Z_D), 1e-9, f"Z_D={bd_dist.Z_D}")
    root_m = mtt.root_marginals(bd)
    _check(checks, "battery/bias-demo-root-marginals",
           float(max(abs(root_m[0] - 2 / 3), abs(root_m[2] - 1 / 3))), 1e-9)

    n_rc = 50_000
    sampler = WilsonSampler(bd)
    p_hat = sum(sampler.rc(rng).root_edge == 1 for _ in range(n_rc)) / n_rc
    _check(checks, "battery/wilson-rc-bias-witness", abs(p_hat - 0.5), 0.01,
           f"raw-weight sampler picks R->A at {p_hat:.4f}, true marginal 2/3",
           ok=abs(p_hat - 0.5) <= 0.01 and abs(p_hat - 2 / 3) > 0.1)
    p_hat_m = sum(sampler.marginal(rng).root_edge == 1 for _ in range(n_rc)) / n_rc
    _check(checks, "battery/wilson-marginal-root", abs(p_hat_m - 2 / 3), 0.01)

    attempts = np.mean([sampler.reject(rng).attempts for _ in range(10_000)])
    expected = bd_dist.Z_T / bd_dist.Z_D
    _check(checks, "battery/reject-attempts", abs(attempts - expected) / expected, 0.1,
           f"mean {attempts:.3f} vs Z_T/Z_D {expected:.3f}")

    g4 = random_graph(4, families[0], seed=np.random.SeedSequence([seed, 41]))
    _sampler_tvds(g4, oracle.enumerate_trees(g4), rng, samples, checks, "random-n4")
    _sampler_tvds(bd, bd_dist, rng, samples, checks, "bias-demo")

    for name, algo in (("trie", trie_swor), ("sbs", sbs_swor)):
        got = {tuple(int(h) for h in item.heads) for item in algo(bd, 3, rng)}
        _check(checks, f"battery/swor-{name}-exhausts-bias-demo", 0.0 if got == set(bd_dist.dependency_table()) else 1.0, 0.0)
        res = algo(complete_unit_graph(3), 9, rng)
        _check(checks, f"battery/swor-{name}-unit-n3", abs(res.total_probability() - 1.0), 1e-9,
               f"{len(res)} trees drawn")
    return checks


def cmd_verify(args) -> int:
    if args.graph is not None:
        with open(args.graph, "rb") as fh:
            g = read_graph(fh.read())
        if g.n > oracle.MAX_ENUM_WORDS:
            sys.stderr.write(f"verify: oracle enumeration is capped at n={oracle.MAX_ENUM_WORDS}\n")
            return EXIT_USAGE
        checks = _verify_graph(g, args.seed, args.samples)
    else:
        checks = _verify_battery(args.seed, args.samples)
    for c in checks:
        status = "ok  " if c.ok else "FAIL"
        detail = f"  ({c.detail})" if c.detail else ""
        print(f"{status} {c.name}: value={c.value:.3g} tolerance={c.tolerance:.3g}{detail}")
    ok = all(c.ok for c in checks)
    print(("all checks passed" if ok else "verification FAILED") + f" [{len(checks)} checks]")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"ok": ok, "checks": [asdict(c) for c in checks]}, fh, indent=2)
            fh.write("\n")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# ----------------------------------------------------------------- bench --


def _bench_combo(suite: str, algo: str, n: int, k: int, reps: int, seed: int, dist: str):
    """Warm up once, then time ``reps`` measured repetitions of one workload."""
    spec = WeightDistributionSpec.parse(dist)
    g = random_graph(n, spec, seed=np.random.SeedSequence([seed, 11, n]))
    rows = []
    for rep in range(-1, reps):  # rep -1 is the discarded warm-up
        rng = np.random.default_rng(np.random.SeedSequence([seed, 23, n, k, max(rep, 0)]))
        attempts_mean = ""
        if suite == "replacement":
            sampler = WilsonSampler(g)
            t0 = time.perf_counter_ns()
            if algo == "wilson-marginal":
                for _ in range(k):
                    sampler.marginal(rng)
            elif algo == "wilson-reject":
                total = 0
                for _ in range(k):
                    total += sampler.reject(rng).attempts
                attempts_mean = f"{total / k:.6g}"
            else:
                init = initial_state(g)
                for _ in range(k):
                    colbourn_sample(g, rng, initial=init)
            wall = time.perf_counter_ns() - t0
        else:
            fn = trie_swor if algo == "trie" else sbs_swor
            t0 = time.perf_counter_ns()
            fn(g, k, rng)
            wall = time.perf_counter_ns() - t0
        if rep >= 0:
            rows.append((algo, n, k, rep, wall, attempts_mean, seed))
    return rows


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def cmd_bench(args) -> int:
    ns = _int_list(args.n)
    ks = _int_list(args.k)
    algos = _REPLACEMENT_ALGOS if args.suite == "replacement" else _SWOR_ALGOS
    combos = [(args.suite, algo, n, k, args.reps, args.seed, args.dist) for algo in algos for n in ns for k in ks]
    if args.jobs > 1:
        # parallel reps perturb wall times; workload stays deterministic
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_combo_star, combos))
    else:
        results = [_bench_combo(*c) for c in combos]
    lines = ["algo,n,k,rep,wall_ns,attempts_mean,seed"]
    for rows in results:
        for algo, n, k, rep, wall, attempts_mean, seed in rows:
            lines.append(f"{algo},{n},{k},{rep},{wall},{attempts_mean},{seed}")
    _emit_lines(lines, args.out)
    return EXIT_OK


def _bench_combo_star(combo):
    return _bench_combo(*combo)


# -------------------------------------------------------- simulate-ratio --


def cmd_simulate_ratio(args) -> int:
    if args.n > oracle.MAX_ENUM_WORDS:
        sys.stderr.write(f"simulate-ratio: exact enumeration is capped at n={oracle.MAX_ENUM_WORDS}\n")
        return EXIT_USAGE
    spec = WeightDistributionSpec.parse(args.dist)
    summary = oracle.ratio_simulation(args.n, spec, args.trials, args.seed, jobs=args.jobs)
    lines = ["trial,ratio"]
    lines.extend(f"{i},{float(r)!r}" for i, r in enumerate(summary.ratios))
    lines.append(f"mean,{summary.mean!r}")
    lines.append(f"stddev,{summary.stddev!r}")
    _emit_lines(lines, args.out)
    return EXIT_OK


# ------------------------------------------------------------------ main --


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treesample", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw dependency trees with replacement (JSON lines)")
    p.add_argument("--algo", required=True, choices=(*_REPLACEMENT_ALGOS, "wilson-rc-biased"))
    _add_graph_args(p)
    p.add_argument("-k", type=int, default=1, help="number of samples")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--i-want-biased-samples", action="store_true",
                   help="acknowledge that wilson-rc-biased is not a correct sampler")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("swor", help="draw distinct trees without replacement (JSON lines)")
    p.add_argument("--algo", required=True, choices=_SWOR_ALGOS)
    _add_graph_args(p)
    p.add_argument("-k", type=int, default=1, help="number of distinct trees")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_swor)

    p = sub.add_parser("verify", help="cross-check determinants/marginals/samplers against the oracle")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", metavar="FILE")
    src.add_argument("--battery", action="store_true", help="run the randomized verification battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000,
                   help="samples per TVD estimate (estimates are skipped below 50000: too noisy to gate)")
    p.add_argument("--json", metavar="FILE", help="also write the report as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="CSV timings for the samplers")
    p.add_argument("--suite", required=True, choices=("replacement", "swor"))
    p.add_argument("--n", default="10,20,30", help="comma-separated sentence lengths")
    p.add_argument("-k", default="100", help="comma-separated sample counts")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", default="uniform:0,1")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (adds timing noise)")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("simulate-ratio", help="simulate the spanning/dependency average-weight ratio")
    p.add_argument("--dist", default="uniform:0,1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_simulate_ratio)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DegenerateDistributionError, StuckWalkError, RejectionBudgetError) as exc:
        sys.stderr.write(f"{args.command}: degenerate input: {exc}\n")
        return EXIT_DEGENERATE
    except GraphFormatError as exc:
        sys.stderr.write(f"{args.command}: bad graph: {exc}\n")
        return EXIT_USAGE
    except (FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"{args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
