"""Command-line front end.

Subcommands: gen (instance generation), solve (single solve), sweep
(all k with the chained bounds), bench (benchmark campaigns from a plan
file).  Exit codes: 0 success, 2 usage, 3 IO/parse, 4 budget-exhausted
partial result.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import bnb, gen_io, milp_export, polysolve
from .bounds import chain_lower
from .errors import KvoteError, ParseError
from .gen_io import GenConfig, ResultRecord
from .model import Instance, OwaWeights, score

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARTIAL = 4


def _result_record(
    instance_id: str, instance: Instance, k: int, sol: bnb.Solution
) -> ResultRecord:
    z = sol.value
    rb = sol.stats.root_bound
    gap = 0.0 if z == 0 else max(z - rb, 0) * 100.0 / z
    return ResultRecord(
        instance_id=instance_id,
        n=instance.n,
        m=instance.m,
        k=k,
        objective=z,
        time_s=sol.stats.time_s,
        nodes=sol.stats.nodes,
        root_bound=rb,
        root_gap_pct=gap,
        solved_at_root=sol.stats.solved_at_root,
        pct_fixed=sol.stats.fixed_count * 100.0 / instance.m,
    )


def cmd_gen(args) -> int:
    config = GenConfig(
        n=args.n,
        m=args.m,
        mode=args.mode,
        p=args.p if args.p is not None else gen_io.DEFAULT_BIAS,
        seed=args.seed,
    )
    instance = gen_io.generate(config)
    gen_io.write_instance(instance, args.out, config=config)
    print(f"wrote {args.out} (n={config.n}, m={config.m}, mode={config.mode_tag})")
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = gen_io.read_instance(args.infile)

    if args.bottom_h is not None:
        sol = polysolve.solve_bottom_h(instance, args.bottom_h)
        print(f"committee {sol.committee}")
        print(f"objective {sol.value}")
        print(f"support {' '.join(str(i + 1) for i in sol.support)}")
        return EXIT_OK

    options = bnb.SolveOptions(
        time_budget_s=args.time_limit,
        enable_preprocessing=not args.no_preprocess,
    )
    sol = bnb.solve_ksum(instance, args.k, options)
    st = sol.stats
    print(f"committee {sol.committee}")
    print(f"objective {sol.value}")
    print(f"nodes {st.nodes}")
    print(f"time_s {st.time_s:.3f}")
    print(f"root_bound {st.root_bound}")
    print(f"solved_at_root {int(st.solved_at_root)}")
    print(f"fixed {st.fixed_count}")
    if not st.optimal:
        print(f"lower_bound {st.lower_bound} (budget exhausted, incumbent shown)")

    if args.csv:
        gen_io.write_results_csv(
            [_result_record(str(args.infile), instance, args.k, sol)], args.csv
        )
    if args.export:
        kind = milp_export.FormulationKind(args.export, cut_policy=args.cut_policy)
        model = milp_export.build(instance, args.k, kind)
        milp_export.write_lp(model, args.export_out)
        print(f"wrote model {args.export_out}")
    return EXIT_OK if st.optimal else EXIT_PARTIAL


def _check_chain(solutions: list[bnb.Solution], n: int) -> None:
    # solutions[0] is k = n, solutions[-1] is k = 1.
    for idx in range(1, len(solutions)):
        k = n - idx
        z_k = solutions[idx].value
        z_next = solutions[idx - 1].value
        if not (chain_lower(z_next, k) <= z_k <= z_next):
            raise AssertionError(
                f"bound chain violated at k={k}: z(k)={z_k}, z(k+1)={z_next}"
            )


def cmd_sweep(args) -> int:
    instance = gen_io.read_instance(args.infile)
    options = bnb.SolveOptions(time_budget_s=args.time_limit)
    solutions = bnb.solve_all_k(instance, options)
    if all(s.optimal for s in solutions):
        _check_chain(solutions, instance.n)
    rows = [
        _result_record(str(args.infile), instance, instance.n - idx, sol)
        for idx, sol in enumerate(solutions)
    ]
    gen_io.write_results_csv(rows, args.out)
    all_optimal = all(s.optimal for s in solutions)
    print(f"wrote {args.out} ({len(rows)} rows, all_optimal={int(all_optimal)})")
    return EXIT_OK if all_optimal else EXIT_PARTIAL


@dataclass(frozen=True)
class PlanEntry:
    n: int
    m: int
    mode: str
    p: Optional[float]
    seeds: tuple[int, ...]
    k_values: Optional[tuple[int, ...]]  # None = all k


def parse_plan(path) -> list[PlanEntry]:
    """Plan file: one entry per line, 'key=value' tokens.

    Required keys: n, m, mode, seeds (comma-separated).  Optional: p
    (biased probability), ks (comma-separated, default all).  Lines
    starting with '#' and blank lines are skipped.
    """
    entries = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kv = {}
        for token in line.split():
            if "=" not in token:
                raise ParseError(f"expected key=value, got {token!r}", line=lineno)
            key, _, value = token.partition("=")
            kv[key] = value
        try:
            n = int(kv.pop("n"))
            m = int(kv.pop("m"))
            mode = kv.pop("mode")
            seeds = tuple(int(s) for s in kv.pop("seeds").split(","))
            p = float(kv.pop("p")) if "p" in kv else None
            ks = (
                tuple(int(s) for s in kv.pop("ks").split(","))
                if "ks" in kv
                else None
            )
        except KeyError as e:
            raise ParseError(f"missing required key {e.args[0]}", line=lineno) from None
        except ValueError as e:
            raise ParseError(f"bad value: {e}", line=lineno) from None
        if kv:
            raise ParseError(f"unknown keys {sorted(kv)}", line=lineno)
        if mode not in ("uniform", "biased"):
            raise ParseError(f"mode must be uniform or biased, got {mode!r}", line=lineno)
        if not seeds:
            raise ParseError("seeds must be non-empty", line=lineno)
        entries.append(PlanEntry(n=n, m=m, mode=mode, p=p, seeds=seeds, k_values=ks))
    if not entries:
        raise ParseError("plan contains no entries", line=1)
    return entries


def _bench_one(task):
    entry, seed, time_limit = task
    config = GenConfig(
        n=entry.n,
        m=entry.m,
        mode=entry.mode,
        p=entry.p if entry.p is not None else gen_io.DEFAULT_BIAS,
        seed=seed,
    )
    instance = gen_io.generate(config)
    instance_id = f"n{entry.n}_m{entry.m}_{config.mode_tag}_s{seed}"
    options = bnb.SolveOptions(time_budget_s=time_limit)
    solutions = bnb.solve_all_k(instance, options)
    rows = []
    for idx, sol in enumerate(solutions):
        k = entry.n - idx
        if entry.k_values is not None and k not in entry.k_values:
            continue
        rows.append(_result_record(instance_id, instance, k, sol))
    return rows


def cmd_bench(args) -> int:
    entries = parse_plan(args.plan)
    tasks = [
        (entry, seed, args.time_limit) for entry in entries for seed in entry.seeds
    ]
    threads = int(os.environ.get("KVOTE_THREADS", "1"))
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            per_task = list(pool.map(_bench_one, tasks))
    else:
        per_task = [_bench_one(t) for t in tasks]

    rows = [r for chunk in per_task for r in chunk]
    gen_io.write_results_csv(rows, args.out)

    # One summary line per plan entry, in plan order.
    print("n m mode avg_time max_time avg_nodes max_nodes pct_root pct_fixed")
    offset = 0
    for entry in entries:
        n_tasks = len(entry.seeds)
        group = [r for chunk in per_task[offset : offset + n_tasks] for r in chunk]
        offset += n_tasks
        cnt = len(group)
        avg_t = sum(r.time_s for r in group) / cnt
        max_t = max(r.time_s for r in group)
        avg_n = sum(r.nodes for r in group) / cnt
        max_n = max(r.nodes for r in group)
        pct_root = 100.0 * sum(r.solved_at_root for r in group) / cnt
        pct_fixed = sum(r.pct_fixed for r in group) / cnt
        print(
            f"{entry.n} {entry.m} {entry.mode} {avg_t:.2f} {max_t:.2f} "
            f"{avg_n:.1f} {max_n} {pct_root:.1f} {pct_fixed:.2f}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kvote",
        description="Exact OWA committee election: top-k and bottom-h objectives.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--mode", choices=["uniform", "biased"], default="uniform")
    p_gen.add_argument("--p", type=float, default=None, help="approval probability (biased)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_solve = sub.add_parser("solve", help="solve a single objective")
    p_solve.add_argument("--in", dest="infile", required=True)
    group = p_solve.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="top-k objective")
    group.add_argument("--bottom-h", type=int, help="bottom-h objective")
    p_solve.add_argument("--time-limit", type=float, default=None)
    p_solve.add_argument("--no-preprocess", action="store_true")
    p_solve.add_argument("--csv", default=None, help="write a one-row result CSV")
    p_solve.add_argument(
        "--export",
        choices=list(milp_export.KINDS),
        default=None,
        help="also export the chosen MILP formulation",
    )
    p_solve.add_argument(
        "--cut-policy",
        choices=[milp_export.FULL_ENUMERATION, milp_export.SEED_ONLY],
        default=milp_export.FULL_ENUMERATION,
    )
    p_solve.add_argument("--export-out", default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="solve all k = n..1 with chained bounds")
    p_sweep.add_argument("--in", dest="infile", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--time-limit", type=float, default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_bench = sub.add_parser("bench", help="run a benchmark plan")
    p_bench.add_argument("plan")
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--time-limit", type=float, default=None)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and (args.n < 1 or args.m < 1):
        parser.error("--n and --m must be positive")
    if args.command == "solve" and args.export and not args.export_out:
        parser.error("--export requires --export-out")
    try:
        return args.func(args)
    except (ParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except KvoteError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
