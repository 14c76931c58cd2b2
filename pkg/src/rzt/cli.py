"""Command-line front end: ``rzt solve``, ``rzt bench`` and ``rzt verify``.

Exit codes: 0 success, 1 I/O failure, 2 malformed input or flags,
3 verification counterexample, 4 verification budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from rzt.board import BoardError, Color, parse_position, render_position
from rzt.pattern import ZonePattern
from rzt.solver import BruteForce, Goal, SolveConfig, Solver, TableMode, Verdict, verify_rzp
from rzt.table import MatchPolicy, Mode, ReconstructionConfig, TableStats
from rzt.workload import PHASE_HEADER, WorkloadSpec, bench_tables, drive, generate, phase_csv_rows, phase_rows

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_COUNTEREXAMPLE, EXIT_BUDGET = 0, 1, 2, 3, 4

STATS_HEADER = ["id", "entries", "lookups", "lookup_time_ms", "hits", "compares", "cost", "rebuilds", "outcome", "nodes"]


class InputError(Exception):
    """Malformed problem file, dump or flag combination."""


def _player(text: str) -> Color:
    try:
        return {"B": Color.BLACK, "W": Color.WHITE}[text.upper()]
    except KeyError:
        raise argparse.ArgumentTypeError("expected B or W") from None


def _add_table_flags(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--oci-fraction", type=float, default=0.8,
                    help="share of intersections used as radix key positions")
    ap.add_argument("--rebuild-small-interval", type=int, default=100,
                    help="rebuild every this many entries up to 1000")
    ap.add_argument("--rebuild-growth", type=float, default=0.10,
                    help="past 1000 entries, rebuild after this relative growth")
    ap.add_argument("--seed", type=int, default=0)


def _rebuild_config(args) -> ReconstructionConfig:
    return ReconstructionConfig(
        small_interval=args.rebuild_small_interval,
        growth_factor=args.rebuild_growth,
        oci_fraction=args.oci_fraction,
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rzt", description="Relevance-zone pattern tables for life-and-death search.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve problem files and report table statistics")
    s.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE")
    s.add_argument("--table", choices=["radix", "linear", "none"], default="radix",
                   help="pattern table storage; 'none' keeps only the exact transposition table")
    s.add_argument("--timestamps", choices=["on", "off"], default="on")
    s.add_argument("--match", choices=["first", "smallest"], default="first")
    s.add_argument("--max-depth", type=int, default=8)
    s.add_argument("--max-nodes", type=int, default=200_000)
    s.add_argument("--or-player", type=_player, default=Color.WHITE,
                   help="player trying to live (default W)")
    s.add_argument("--out", choices=["csv", "json"], default="csv")
    s.add_argument("-o", "--output", help="write the report here instead of stdout")
    s.add_argument("--dump", help="write every stored pattern to this JSON file")
    _add_table_flags(s)

    b = sub.add_parser("bench", help="drive a synthetic workload and report per-phase lookup costs")
    b.add_argument("--side", type=int, default=7)
    b.add_argument("--entries", type=int, default=20_000)
    b.add_argument("--queries", type=int, default=40_000)
    b.add_argument("--density", type=float, default=0.3, help="zone membership probability per intersection")
    b.add_argument("--hot-cells", type=int, default=0,
                   help="number of intersections joining zones with --hot-density instead")
    b.add_argument("--hot-density", type=float, default=8 / 9)
    b.add_argument("--hit-mix", type=int, default=49,
                   help="uniform random queries per pattern-completion query")
    b.add_argument("--revisit", type=float, default=0.5, help="probability a query repeats an earlier one")
    b.add_argument("-o", "--output", help="phase CSV destination (default stdout)")
    b.add_argument("--stats", help="also write the per-table statistics CSV here")
    _add_table_flags(b)

    v = sub.add_parser("verify", help="check stored patterns by exhaustive outside-zone enumeration")
    v.add_argument("--in", dest="input", required=True, metavar="DUMP")
    v.add_argument("--max-depth", type=int, default=8,
                   help="plies to verify when a pattern carries no 'depth' field")
    v.add_argument("--budget", type=int, default=729, help="completions checked per pattern at most")
    v.add_argument("--or-player", type=_player, default=None,
                   help="overrides the dump's 'or_player' field (default W)")
    return ap


# -- solve -------------------------------------------------------------------


def _stats_row(pid: str, stats: TableStats | None, outcome: str, nodes: int) -> dict:
    st = stats or TableStats()
    return {
        "id": pid,
        "entries": st.entries,
        "lookups": st.lookups,
        "lookup_time_ms": f"{st.lookup_time * 1000:.3f}",
        "hits": st.hits,
        "compares": st.list_compares,
        "cost": st.cost,
        "rebuilds": st.rebuild_count,
        "outcome": outcome,
        "nodes": nodes,
    }


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_solve(args) -> int:
    problems = []
    for name in args.inputs:
        text = Path(name).read_text()
        try:
            problems.append((Path(name).stem, parse_position(text)))
        except (BoardError, ValueError) as exc:
            raise InputError(f"{name}: {exc}") from exc
    table_mode = TableMode.EXACT if args.table == "none" else TableMode.RZT
    cfg = SolveConfig(
        max_depth=args.max_depth,
        max_nodes=args.max_nodes,
        table_mode=table_mode,
        storage=Mode.RADIX if args.table == "none" else Mode(args.table),
        timestamps=args.timestamps == "on",
        match=MatchPolicy(args.match),
        rebuild=_rebuild_config(args),
    )
    goal = Goal(args.or_player)
    rows, dump = [], []
    hits = smaller = 0
    for pid, p in problems:
        solver = Solver(goal, cfg, side=p.side)
        res = solver.solve(p)
        rows.append(_stats_row(pid, res.stats, res.outcome.value, res.nodes))
        if res.stats is not None:
            hits += res.stats.hits
            smaller += res.stats.smaller_hits
        for phi, depth in solver.inserted_patterns():
            dump.append({"problem": pid, **phi.to_json(), "depth": depth, "or_player": goal.or_player.letter})

    if args.out == "csv":
        text = _csv_text(STATS_HEADER, [[r[k] for k in STATS_HEADER] for r in rows])
    else:
        report = {"rows": rows, "config": {"table": args.table, "timestamps": args.timestamps,
                                           "match": args.match, "max_depth": args.max_depth,
                                           "seed": args.seed}}
        if cfg.match is MatchPolicy.SMALLEST:
            report["smaller_zone_hits"] = smaller
            report["hits"] = hits
        text = json.dumps(report, indent=2) + "\n"
    _emit(text, args.output)
    if cfg.match is MatchPolicy.SMALLEST:
        frac = smaller / hits if hits else 0.0
        print(f"smallest zone differed on {smaller} of {hits} hits ({frac:.2%})", file=sys.stderr)
    if args.dump:
        Path(args.dump).write_text(json.dumps(dump, indent=1) + "\n")
    return EXIT_OK


# -- bench -------------------------------------------------------------------


def cmd_bench(args) -> int:
    try:
        spec = WorkloadSpec(
            side=args.side,
            num_entries=args.entries,
            num_queries=args.queries,
            zone_density=args.density,
            hit_mix=args.hit_mix,
            revisit=args.revisit,
            hot_cells=args.hot_cells,
            hot_density=args.hot_density,
            seed=args.seed,
        )
        config = _rebuild_config(args)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    tables = bench_tables(spec, config)
    records = drive(generate(spec), tables)
    _emit(_csv_text(PHASE_HEADER, phase_csv_rows(phase_rows(records))), args.output)

    nt, ts = tables["nt"].stats(), tables["ts"].stats()
    ratio = nt.cost / ts.cost if ts.cost else float("inf")
    print(f"total cost: nt={nt.cost} ts={ts.cost} nt/ts={ratio:.3f}", file=sys.stderr)
    if args.stats:
        rows = [[r[k] for k in STATS_HEADER] for r in
                (_stats_row("nt", nt, "", 0), _stats_row("ts", ts, "", 0))]
        Path(args.stats).write_text(_csv_text(STATS_HEADER, rows))
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def _load_dump(path: str) -> list[tuple[ZonePattern, dict]]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not isinstance(data, list):
        raise InputError(f"{path}: expected a JSON array of patterns")
    out = []
    for k, obj in enumerate(data):
        try:
            out.append((ZonePattern.from_json(obj), obj))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: pattern {k}: {exc!r}") from exc
    return out


def cmd_verify(args) -> int:
    entries = _load_dump(args.input)
    oracles: dict[Color, BruteForce] = {}
    status = EXIT_OK
    checked = 0
    for k, (phi, obj) in enumerate(entries):
        if args.or_player is not None:
            or_player = args.or_player
        else:
            or_player = _player(obj.get("or_player", "W"))
        depth = int(obj.get("depth", args.max_depth))
        oracle = oracles.setdefault(or_player, BruteForce(Goal(or_player)))
        res = verify_rzp(phi, phi.side, depth, args.budget, Goal(or_player), oracle)
        checked += 1
        if res.verdict is Verdict.COUNTEREXAMPLE:
            print(f"pattern {k} (stamp {phi.stamp}): counterexample within {depth} plies", file=sys.stderr)
            print(render_position(res.counterexample), end="")
            return EXIT_COUNTEREXAMPLE
        if res.verdict is Verdict.BUDGET_EXCEEDED:
            print(f"pattern {k} (stamp {phi.stamp}): more than {args.budget} completions", file=sys.stderr)
            status = EXIT_BUDGET
    print(f"checked {checked} patterns", file=sys.stderr)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    handler = {"solve": cmd_solve, "bench": cmd_bench, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except InputError as exc:
        print(f"rzt: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"rzt: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
