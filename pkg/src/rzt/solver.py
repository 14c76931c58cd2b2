"""Depth-bounded AND-OR life-and-death solver that produces relevance zones.

The OR player wins by reaching Benson unconditional life within
``max_depth`` plies.  Every proven win comes with a zone such that every
position agreeing with it inside the zone (same player to move) is also a
win within the same number of plies.  Those zones are stored as patterns in
a :class:`~rzt.table.PatternTable` and reused as an auxiliary
transposition table.

Zones are built bottom-up:

* terminal positions use the Benson zone (safe blocks plus vital regions);
* an OR win by move ``m`` takes the child zone and adds everything that
  decides whether ``m`` is legal and what it captures
  (:func:`move_footprint`);
* an AND win starts from the zone of the pass reply, refutes every legal
  AND move inside the zone, grows the zone by each refutation's zone and
  move footprint, and repeats until no unrefuted in-zone move is left.
  In-zone moves that are illegal get a footprint proving they stay
  illegal, and OR stones in the zone must keep a liberty inside the zone
  so that no move outside the zone can change it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator

from rzt.board import (
    PASS,
    Color,
    IllegalMove,
    Position,
    Zone,
    _place,
    benson_safe_zone,
    flood,
    geometry,
    is_legal_position,
    iter_bits,
    legal_moves,
    play,
    try_play,
)
from rzt.pattern import ZonePattern, pattern_from
from rzt.table import MatchPolicy, Mode, PatternTable, ReconstructionConfig, SearchStamp, TableStats


class Outcome(str, Enum):
    WIN = "win"
    UNKNOWN = "unknown"


class TableMode(str, Enum):
    NONE = "none"
    EXACT = "tt"
    RZT = "tt+rzt"


@dataclass(frozen=True)
class Goal:
    or_player: Color = Color.WHITE

    def safe_zone(self, p: Position) -> Zone | None:
        safe, zone = benson_safe_zone(p, self.or_player)
        return zone if safe else None


@dataclass(frozen=True)
class SolveConfig:
    max_depth: int = 8
    max_nodes: int = 200_000
    table_mode: TableMode = TableMode.RZT
    storage: Mode = Mode.RADIX
    timestamps: bool = True
    match: MatchPolicy = MatchPolicy.FIRST
    rebuild: ReconstructionConfig = field(default_factory=ReconstructionConfig)

    def __post_init__(self):
        if self.max_depth < 0 or self.max_nodes <= 0:
            raise ValueError("search budgets must be positive")
        object.__setattr__(self, "table_mode", TableMode(self.table_mode))
        object.__setattr__(self, "storage", Mode(self.storage))
        object.__setattr__(self, "match", MatchPolicy(self.match))


@dataclass
class SolveResult:
    outcome: Outcome
    zone: Zone | None = None
    # plies within which the win is forced
    depth: int | None = None
    nodes: int = 0
    stats: TableStats | None = None

    @property
    def win(self) -> bool:
        return self.outcome is Outcome.WIN


class BudgetExceeded(Exception):
    pass


def move_footprint(p: Position, m: int) -> int:
    """Points that fix the legality and the captures of ``m`` in ``p``.

    For a legal stone move: the point, the mover's resulting block and its
    liberties, each captured block together with its surrounding stones,
    and each adjacent opponent block that survives together with its
    liberties.  Any position that agrees with ``p`` on this mask allows
    ``m`` and captures exactly the same stones.  For an illegal (suicide)
    move the mask instead pins down everything that makes it suicide.
    """
    if m == PASS:
        return 0
    geo = geometry(p.side)
    bit = 1 << m
    me = p.to_move
    own, opp = p.stones(me), p.stones(me.opponent)
    empty = geo.full & ~(own | opp)
    fp = bit
    placed = _place(p, m)
    touching = geo.adjacent[m] & opp
    while touching:
        blk = flood(touching & -touching, opp, geo)
        touching &= ~blk
        libs = geo.neighbors(blk) & empty
        if placed is not None and not libs & ~bit:
            fp |= blk | geo.neighbors(blk)
        else:
            fp |= blk | libs
    if placed is None:
        fp |= geo.adjacent[m]
        friends = geo.adjacent[m] & own
        while friends:
            blk = flood(friends & -friends, own, geo)
            friends &= ~blk
            fp |= blk | geo.neighbors(blk)
        return fp
    new_own, new_opp, _ = placed
    blk = flood(bit, new_own, geo)
    fp |= blk | (geo.neighbors(blk) & ~(new_own | new_opp))
    return fp


def rz_for_or_win(p: Position, m: int, child_zone: Zone) -> Zone:
    """Zone for ``p`` when playing ``m`` reaches a win with ``child_zone``."""
    if m != PASS:
        play(p, m)  # raises on illegal m
    return child_zone.add(move_footprint(p, m))


def liberty_closure(p: Position, mask: int, player: Color) -> int:
    """Grow ``mask`` until every ``player`` stone inside it reaches an empty
    point inside it through ``player`` stones inside it.

    A zone with this property cannot lose any of those stones to a single
    move played outside the zone.
    """
    geo = geometry(p.side)
    stones = p.stones(player)
    empty = p.empty_mask
    while True:
        grew = False
        rest = stones & mask
        while rest:
            comp = flood(rest & -rest, stones & mask, geo)
            rest &= ~comp
            if geo.neighbors(comp) & empty & mask:
                continue
            blk = flood(comp, stones, geo)
            mask |= blk | (geo.neighbors(blk) & empty)
            grew = True
        if not grew:
            return mask


def rz_for_and_win(
    p: Position,
    pass_zone: Zone,
    refute: Callable[[int], SolveResult],
    or_player: Color | None = None,
) -> Zone | None:
    """Fixpoint zone for an AND position whose pass reply wins in ``pass_zone``.

    ``refute(m)`` must solve the position after AND move ``m``.  Returns
    None (fail) as soon as one in-zone move is not refuted.
    """
    or_player = p.to_move.opponent if or_player is None else Color(or_player)
    mask = pass_zone.mask
    done = 0
    while True:
        mask = liberty_closure(p, mask, or_player)
        pending = mask & p.empty_mask & ~done
        if not pending:
            return Zone(p.side, mask)
        for m in iter_bits(pending):
            done |= 1 << m
            if try_play(p, m) is None:
                mask |= move_footprint(p, m)
                continue
            res = refute(m)
            if not res.win:
                return None
            mask |= res.zone.mask | move_footprint(p, m)


class Solver:
    """One search context: exact TT, pattern table, stamps and counters.

    A solver may be reused across problems that share a goal and depth
    bound, in which case its pattern table keeps growing.
    """

    def __init__(self, goal: Goal, cfg: SolveConfig, table: PatternTable | None = None, side: int | None = None):
        self.goal = goal
        self.cfg = cfg
        self.table = table
        if table is None and cfg.table_mode is TableMode.RZT:
            if side is None:
                raise ValueError("side is required to create a pattern table")
            self.table = PatternTable(side, cfg.storage, cfg.timestamps, cfg.rebuild, cfg.match)
        self.use_tt = cfg.table_mode is not TableMode.NONE
        self.use_rzt = cfg.table_mode is TableMode.RZT
        self.tt: dict[Position, tuple] = {}
        self.pattern_depth: dict[int, int] = {}
        self.stamps: dict[Position, SearchStamp] = {}
        self._inserted: set[tuple[ZonePattern, int]] = set()
        self.nodes = 0
        self.rzt_wins = 0

    # -- public -----------------------------------------------------------

    def solve(self, p: Position) -> SolveResult:
        start = self.nodes
        try:
            res = self._node(p, self.cfg.max_depth)
        except BudgetExceeded:
            res = None
        stats = self.table.stats() if self.table is not None else None
        if res is None:
            return SolveResult(Outcome.UNKNOWN, nodes=self.nodes - start, stats=stats)
        zone, depth = res
        return SolveResult(Outcome.WIN, zone, depth, self.nodes - start, stats)

    def inserted_patterns(self) -> list[tuple[ZonePattern, int]]:
        """Every stored pattern with the number of plies it certifies."""
        if self.table is None:
            return []
        return [(phi, self.pattern_depth[phi.stamp]) for phi in self.table.patterns()
                if phi.stamp in self.pattern_depth]

    # -- search -----------------------------------------------------------

    def _stamp(self, p: Position) -> SearchStamp:
        s = self.stamps.get(p)
        if s is None:
            s = self.stamps[p] = SearchStamp()
        return s

    def _table_hit(self, p: Position, remaining: int):
        phi = self.table.lookup(p, self._stamp(p))
        if phi is None:
            return None
        depth = self.pattern_depth.get(phi.stamp)
        if depth is None or depth > remaining:
            return None
        return phi.zone, depth

    def _record_win(self, p: Position, zone: Zone, depth: int) -> None:
        if self.use_tt:
            self.tt[p] = ("win", zone, depth)
        if self.use_rzt:
            phi = pattern_from(p, zone)
            if (phi, depth) not in self._inserted:
                self._inserted.add((phi, depth))
                stored = self.table.insert(phi)
                self.pattern_depth[stored.stamp] = depth

    def _node(self, p: Position, remaining: int):
        safe = self.goal.safe_zone(p)
        if safe is not None:
            self._record_win(p, safe, 0)
            return safe, 0
        if remaining <= 0:
            return None
        if self.use_tt:
            e = self.tt.get(p)
            if e is not None:
                if e[0] == "win":
                    if e[2] <= remaining:
                        return e[1], e[2]
                elif e[1] >= remaining:
                    return None
        if self.use_rzt:
            hit = self._table_hit(p, remaining)
            if hit is not None:
                self.rzt_wins += 1
                return hit

        self.nodes += 1
        if self.nodes > self.cfg.max_nodes:
            raise BudgetExceeded
        if p.to_move == self.goal.or_player:
            res = self._or_node(p, remaining)
        else:
            res = self._and_node(p, remaining)
        if res is None:
            if self.use_tt:
                e = self.tt.get(p)
                if e is None or e[0] != "win":
                    self.tt[p] = ("unknown", remaining)
        else:
            self._record_win(p, *res)
        return res

    def _or_node(self, p: Position, remaining: int):
        children = [(m, play(p, m)) for m in legal_moves(p)]
        if self.use_rzt:
            for m, c in children:
                if self.goal.safe_zone(c) is not None:
                    continue
                hit = self._table_hit(c, remaining - 1)
                if hit is not None:
                    self.rzt_wins += 1
                    zone, depth = hit
                    return rz_for_or_win(p, m, zone), depth + 1
        for m, c in children:
            res = self._node(c, remaining - 1)
            if res is not None:
                zone, depth = res
                return rz_for_or_win(p, m, zone), depth + 1
        return None

    def _and_node(self, p: Position, remaining: int):
        res = self._node(play(p, PASS), remaining - 1)
        if res is None:
            return None
        pass_zone, worst = res
        depths = [worst]

        def refute(m: int) -> SolveResult:
            r = self._node(play(p, m), remaining - 1)
            if r is None:
                return SolveResult(Outcome.UNKNOWN)
            depths.append(r[1])
            return SolveResult(Outcome.WIN, r[0], r[1])

        zone = rz_for_and_win(p, pass_zone, refute, self.goal.or_player)
        if zone is None:
            return None
        return zone, max(depths) + 1


def solve(
    p: Position,
    goal: Goal,
    cfg: SolveConfig | None = None,
    tbl: PatternTable | None = None,
) -> SolveResult:
    """Solve ``p`` for ``goal`` within ``cfg.max_depth`` plies."""
    if not is_legal_position(p):
        raise ValueError("illegal input position")
    cfg = cfg or SolveConfig()
    solver = Solver(goal, cfg, tbl, p.side)
    return solver.solve(p)


class BruteForce:
    """Exhaustive AND-OR search with an exact-position memo and no zones.

    The memo is shared across calls, so one instance can check many
    positions for the same goal cheaply.
    """

    def __init__(self, goal: Goal):
        self.goal = goal
        # position -> [safe?, smallest depth known to win, largest depth known to fail]
        self.memo: dict[Position, list] = {}

    def wins(self, p: Position, depth: int) -> bool:
        e = self.memo.get(p)
        if e is None:
            e = self.memo[p] = [self.goal.safe_zone(p) is not None, None, -1]
        if e[0]:
            return True
        if depth <= 0:
            return False
        if e[1] is not None and depth >= e[1]:
            return True
        if depth <= e[2]:
            return False
        kids = (play(p, m) for m in legal_moves(p))
        if p.to_move == self.goal.or_player:
            ok = any(self.wins(c, depth - 1) for c in kids)
        else:
            ok = all(self.wins(c, depth - 1) for c in kids)
        if ok:
            e[1] = depth if e[1] is None else min(e[1], depth)
        else:
            e[2] = max(e[2], depth)
        return ok


def brute_force_solve(p: Position, goal: Goal, max_depth: int, oracle: BruteForce | None = None) -> Outcome:
    oracle = oracle or BruteForce(goal)
    return Outcome.WIN if oracle.wins(p, max_depth) else Outcome.UNKNOWN


class Verdict(str, Enum):
    VERIFIED = "verified"
    COUNTEREXAMPLE = "counterexample"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class VerifyResult:
    verdict: Verdict
    checked: int
    counterexample: Position | None = None


def completions(phi: ZonePattern) -> Iterator[Position]:
    """Every legal position matching ``phi``: all colorings of the points
    outside the zone, with ``phi.player`` to move."""
    side = phi.side
    outside = [i for i in range(side * side) if not phi.zone.mask >> i & 1]
    for combo in itertools.product((0, 1, 2), repeat=len(outside)):
        black, white = phi.black, phi.white
        for i, c in zip(outside, combo):
            if c == 1:
                black |= 1 << i
            elif c == 2:
                white |= 1 << i
        q = Position(side, black, white, phi.player)
        if is_legal_position(q):
            yield q


def verify_rzp(
    phi: ZonePattern,
    side: int,
    max_depth: int,
    budget: int,
    goal: Goal | None = None,
    oracle: BruteForce | None = None,
) -> VerifyResult:
    """Check that every legal completion of ``phi`` is a win within
    ``max_depth`` plies, by brute force."""
    if phi.side != side:
        raise ValueError("pattern side does not match")
    goal = goal or Goal()
    oracle = oracle or BruteForce(goal)
    checked = 0
    for q in completions(phi):
        if checked >= budget:
            return VerifyResult(Verdict.BUDGET_EXCEEDED, checked)
        checked += 1
        if not oracle.wins(q, max_depth):
            return VerifyResult(Verdict.COUNTEREXAMPLE, checked, q)
    return VerifyResult(Verdict.VERIFIED, checked)


__all__ = [
    "BruteForce",
    "Goal",
    "IllegalMove",
    "Outcome",
    "SolveConfig",
    "SolveResult",
    "Solver",
    "TableMode",
    "Verdict",
    "VerifyResult",
    "brute_force_solve",
    "completions",
    "liberty_closure",
    "move_footprint",
    "rz_for_and_win",
    "rz_for_or_win",
    "solve",
    "verify_rzp",
]
