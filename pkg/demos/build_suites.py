"""Regenerate the frozen problem suites under problems/.

Two suites are written:

* ``problems/ld/``: small life-and-death problems, one file each.  White
  owns a group on the bottom edge, Black walls it in, and White (to live)
  or Black (to kill) moves first.  A candidate is kept when it is not
  already unconditionally alive and the exact-transposition-table search
  alone proves a White win at depth 7 with at least 30 nodes.  Candidates
  are taken in generation order; the pattern table is never consulted
  during selection.
* ``problems/curated_4x4.txt``: 4x4 positions for the soundness sweep, a mix
  of dense random boards and edge-group shapes, separated by ``---``.

Run from the repository root:  python3 demos/build_suites.py
"""
from __future__ import annotations

import random
from pathlib import Path

from rzt.board import BoardError, Color, Position, render_position
from rzt.solver import Goal, SolveConfig, Solver, TableMode

ROOT = Path(__file__).resolve().parent.parent / "problems"
GOAL = Goal(Color.WHITE)
LD_DEPTH = 7
LD_MIN_NODES = 30
LD_MAX_NODES = 20_000
LD_PER_SIZE = 12


def edge_group(rng: random.Random, side: int) -> Position:
    """White along the bottom edge, a Black wall on row 3, a sparse top."""
    rows = {
        0: [0, 0, 2, 2, 1],
        1: [2, 2, 2, 0, 1],
        2: [1, 1, 1, 0, 2],
    }
    upper = [0, 0, 0, 0, 1, 2]
    while True:
        cells = [rng.choice(rows.get(i // side, upper)) for i in range(side * side)]
        try:
            return Position.from_cells(side, cells, rng.choice([Color.WHITE, Color.BLACK]))
        except BoardError:
            continue


def dense(rng: random.Random, side: int, pw: float = 0.45, pb: float = 0.25) -> Position:
    while True:
        cells = []
        for _ in range(side * side):
            r = rng.random()
            cells.append(Color.WHITE if r < pw else Color.BLACK if r < pw + pb else Color.EMPTY)
        try:
            return Position.from_cells(side, cells, rng.choice([Color.BLACK, Color.WHITE]))
        except BoardError:
            continue


def keep_ld(p: Position) -> bool:
    if GOAL.safe_zone(p) is not None:
        return False
    cfg = SolveConfig(max_depth=LD_DEPTH, max_nodes=LD_MAX_NODES, table_mode=TableMode.EXACT)
    res = Solver(GOAL, cfg).solve(p)
    return res.win and res.nodes >= LD_MIN_NODES


def build_ld() -> list[tuple[str, Position]]:
    out = []
    for side, seed in ((4, 11), (5, 12)):
        rng = random.Random(seed)
        kept = 0
        while kept < LD_PER_SIZE:
            p = edge_group(rng, side)
            if keep_ld(p):
                kept += 1
                out.append((f"ld{side}_{kept:02d}", p))
    return out


def build_curated(n_dense: int = 160, n_edge: int = 60) -> list[Position]:
    rng = random.Random(5)
    seen: set[Position] = set()
    out: list[Position] = []
    while len(out) < n_dense + n_edge:
        p = dense(rng, 4) if len(out) < n_dense else edge_group(rng, 4)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def main() -> None:
    ld_dir = ROOT / "ld"
    ld_dir.mkdir(parents=True, exist_ok=True)
    for old in ld_dir.glob("*.txt"):
        old.unlink()
    for name, p in build_ld():
        header = f"# White to live, depth {LD_DEPTH}\n"
        (ld_dir / f"{name}.txt").write_text(header + render_position(p))
    curated = build_curated()
    text = "# 4x4 soundness suite: dense random boards, then edge-group shapes\n"
    text += "---\n".join(render_position(p) for p in curated)
    (ROOT / "curated_4x4.txt").write_text(text)
    print(f"wrote {len(list(ld_dir.glob('*.txt')))} problems and {len(curated)} curated positions")


if __name__ == "__main__":
    main()
