"""Synthetic table workloads and per-phase lookup-cost statistics.

A workload is a fixed, seeded interleaving of pattern insertions and
position queries.  Fresh queries are either a stored pattern completed at
random outside its zone (a guaranteed match) or a uniformly random board,
mixed 1:``hit_mix``.  With probability ``revisit`` a query instead repeats
an earlier query position, the way a tree search returns to nodes it has
already looked up; this is what timestamps save work on.

Zone membership is independent per intersection.  By default every
intersection joins a zone with probability ``zone_density``.  Setting
``hot_cells`` to k > 0 picks k intersections (seeded) that join with
probability ``hot_density`` instead, modelling the way the zones of one
problem keep covering the same few crucial points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from rzt.board import Color, Position, Zone
from rzt.pattern import ZonePattern, matches
from rzt.table import MatchPolicy, Mode, PatternTable, ReconstructionConfig, SearchStamp


@dataclass(frozen=True)
class WorkloadSpec:
    side: int = 7
    num_entries: int = 20_000
    num_queries: int = 40_000
    zone_density: float = 0.3
    hit_mix: int = 49
    revisit: float = 0.5
    hot_cells: int = 0
    hot_density: float = 8 / 9
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.side <= 9:
            raise ValueError("side must be in 1..9")
        if self.num_entries < 0 or self.num_queries < 0:
            raise ValueError("counts must be non-negative")
        if not 0 < self.zone_density <= 1:
            raise ValueError("zone_density must lie in (0, 1]")
        if self.hit_mix < 0:
            raise ValueError("hit_mix must be non-negative")
        if not 0 <= self.revisit < 1:
            raise ValueError("revisit must lie in [0, 1)")
        if not 0 <= self.hot_cells <= self.side * self.side:
            raise ValueError("hot_cells must lie in 0..side*side")
        if not 0 < self.hot_density <= 1:
            raise ValueError("hot_density must lie in (0, 1]")

    def membership(self, rng: np.random.Generator) -> np.ndarray:
        """Per-intersection zone membership probabilities."""
        probs = np.full(self.side * self.side, self.zone_density)
        if self.hot_cells:
            hot = rng.permutation(self.side * self.side)[: self.hot_cells]
            probs[hot] = self.hot_density
        return probs


@dataclass
class Workload:
    spec: WorkloadSpec
    # ("insert", pattern) or ("query", position index)
    ops: list[tuple[str, object]]
    positions: list[Position]


def _random_cells(rng: np.random.Generator, n: int) -> tuple[int, int]:
    colors = rng.integers(0, 3, size=n)
    black = white = 0
    for i, c in enumerate(colors):
        if c == 1:
            black |= 1 << i
        elif c == 2:
            white |= 1 << i
    return black, white


def random_pattern(rng: np.random.Generator, side: int, density: float | np.ndarray) -> ZonePattern:
    """``density`` is one membership probability or one per intersection."""
    cells = side * side
    member = rng.random(cells) < density
    if not member.any():
        member[rng.integers(cells)] = True
    mask = 0
    for i in np.flatnonzero(member):
        mask |= 1 << int(i)
    black, white = _random_cells(rng, cells)
    player = Color.BLACK if rng.integers(2) == 0 else Color.WHITE
    return ZonePattern(player, Zone(side, mask), black & mask, white & mask)


def complete(rng: np.random.Generator, phi: ZonePattern) -> Position:
    """A random position that matches ``phi``."""
    black, white = _random_cells(rng, phi.side * phi.side)
    outside = ~phi.zone.mask
    return Position(phi.side, phi.black | (black & outside), phi.white | (white & outside), phi.player)


def random_position(rng: np.random.Generator, side: int) -> Position:
    black, white = _random_cells(rng, side * side)
    player = Color.BLACK if rng.integers(2) == 0 else Color.WHITE
    return Position(side, black, white, player)


def generate(spec: WorkloadSpec) -> Workload:
    rng = np.random.default_rng(spec.seed)
    density = spec.membership(rng) if spec.hot_cells else spec.zone_density
    kinds = np.array([0] * spec.num_entries + [1] * spec.num_queries, dtype=np.int8)
    rng.shuffle(kinds)
    ops: list[tuple[str, object]] = []
    positions: list[Position] = []
    stored: list[ZonePattern] = []
    for kind in kinds:
        if kind == 0:
            phi = random_pattern(rng, spec.side, density)
            stored.append(phi)
            ops.append(("insert", phi))
            continue
        if positions and rng.random() < spec.revisit:
            ops.append(("query", int(rng.integers(len(positions)))))
            continue
        if stored and rng.integers(spec.hit_mix + 1) == 0:
            q = complete(rng, stored[int(rng.integers(len(stored)))])
        else:
            q = random_position(rng, spec.side)
        positions.append(q)
        ops.append(("query", len(positions) - 1))
    return Workload(spec, ops, positions)


@dataclass
class QueryRecord:
    phase: int
    tree_nodes: int
    hit: bool
    visits: dict[str, int] = field(default_factory=dict)
    compares: dict[str, int] = field(default_factory=dict)
    found: dict[str, ZonePattern | None] = field(default_factory=dict)

    def cost(self, name: str) -> int:
        return self.visits[name] + self.compares[name]


def drive(work: Workload, tables: dict[str, PatternTable], check: bool = False) -> list[QueryRecord]:
    """Replay ``work`` against every table in lockstep.

    Each table gets its own search stamp per query position.  The first
    table supplies the phase and tree size of each record.  With ``check``
    every returned pattern is confirmed to match and all tables must agree
    on hit versus miss.
    """
    names = list(tables)
    lead = tables[names[0]]
    stamps = {name: {} for name in names}
    records = []
    for kind, arg in work.ops:
        if kind == "insert":
            for t in tables.values():
                t.insert(arg)
            continue
        q = work.positions[arg]
        rec = QueryRecord(lead.stats().rebuild_count, lead.node_count(q.to_move), False)
        outcomes = set()
        for name in names:
            t = tables[name]
            s = stamps[name].get(arg)
            if s is None:
                s = stamps[name][arg] = SearchStamp()
            phi = t.lookup(q, s)
            rec.visits[name] = t.last_lookup.node_visits
            rec.compares[name] = t.last_lookup.list_compares
            rec.found[name] = phi
            outcomes.add(phi is not None)
            if check and phi is not None and not matches(q, phi):
                raise AssertionError(f"{name} returned a non-matching pattern")
        if check and len(outcomes) != 1:
            raise AssertionError("tables disagree on hit/miss")
        rec.hit = any(v is not None for v in rec.found.values())
        records.append(rec)
    return records


def bench_tables(spec: WorkloadSpec, config: ReconstructionConfig | None = None,
                 match: MatchPolicy = MatchPolicy.FIRST) -> dict[str, PatternTable]:
    config = config or ReconstructionConfig()
    return {
        "nt": PatternTable(spec.side, Mode.RADIX, False, config, match),
        "ts": PatternTable(spec.side, Mode.RADIX, True, config, match),
    }


@dataclass
class PhaseRow:
    phase: int
    n_avg: float
    c_avg: dict[str, float | None]

    def ratio(self, series: str) -> float | None:
        c = self.c_avg[series]
        if c is None or self.n_avg <= 1 or c <= 0:
            return None
        return math.log(c) / math.log(self.n_avg)


SERIES = ("hit_nt", "miss_nt", "hit_ts", "miss_ts")


def phase_rows(records: Iterable[QueryRecord]) -> list[PhaseRow]:
    """Average tree size and node-visit cost per reconstruction phase.

    Costs here count tree nodes only, not leaf-chain comparisons.
    """
    groups: dict[int, list[QueryRecord]] = {}
    for r in records:
        groups.setdefault(r.phase, []).append(r)
    rows = []
    for phase in sorted(groups):
        recs = groups[phase]
        n_avg = float(np.mean([r.tree_nodes for r in recs]))
        c_avg = {}
        for series in SERIES:
            kind, table = series.split("_")
            vals = [r.visits[table] for r in recs if r.hit == (kind == "hit")]
            c_avg[series] = float(np.mean(vals)) if vals else None
        rows.append(PhaseRow(phase, n_avg, c_avg))
    return rows


PHASE_HEADER = ["phase", "n_avg"] + [f"c_avg_{s}" for s in SERIES] + [f"ratio_{s}" for s in SERIES]


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.6f}"


def phase_csv_rows(rows: Sequence[PhaseRow]) -> list[list[str]]:
    out = []
    for row in rows:
        out.append(
            [str(row.phase), _fmt(row.n_avg)]
            + [_fmt(row.c_avg[s]) for s in SERIES]
            + [_fmt(row.ratio(s)) for s in SERIES]
        )
    return out
