# coding: utf-8

# # Reusing proven wins through relevance zones
#
# The solver proves White can live within a depth bound.  Every proven win
# comes with a zone; the win is stored as a zone pattern and reused in any
# later position that agrees inside the zone.  Here we compare node counts
# with and without the pattern table, then check every stored pattern by
# enumerating all completions outside its zone.

# In[1]:

from pathlib import Path

import numpy as np

from rzt.board import Color, parse_position, render_position
from rzt.solver import BruteForce, Goal, SolveConfig, Solver, TableMode, verify_rzp

ROOT = Path(__file__).resolve().parent.parent
goal = Goal(Color.WHITE)
files = sorted((ROOT / "problems" / "ld").glob("*.txt"))


# In[2]:

print(f"{'problem':10s} {'tt':>6s} {'tt+rzt':>7s}  outcome")
ratios = []
for f in files:
    p = parse_position(f.read_text())
    n = {}
    for mode in (TableMode.EXACT, TableMode.RZT):
        res = Solver(goal, SolveConfig(max_depth=7, max_nodes=20_000, table_mode=mode), side=p.side).solve(p)
        n[mode] = res.nodes
    ratios.append(n[TableMode.EXACT] / n[TableMode.RZT])
    print(f"{f.stem:10s} {n[TableMode.EXACT]:6d} {n[TableMode.RZT]:7d}  {res.outcome.value}")
print(f"geometric mean reduction: {np.exp(np.mean(np.log(ratios))):.2f}x")


# One problem in detail: the zone of the root win and the patterns stored.

# In[3]:

p = parse_position(files[0].read_text())
print(render_position(p))
s = Solver(goal, SolveConfig(max_depth=7), side=p.side)
res = s.solve(p)
print("win in", res.depth, "plies, zone:", res.zone.coords())
stored = s.inserted_patterns()
print(len(stored), "patterns stored,", s.rzt_wins, "wins taken from the table")


# Every stored pattern is a claim about all positions that match it.  Check
# the ones with few outside points exhaustively.

# In[4]:

bf = BruteForce(goal)
small = [(phi, d) for phi, d in stored if p.side ** 2 - len(phi.zone) <= 6]
verdicts = [verify_rzp(phi, p.side, d, 729, goal, bf).verdict.value for phi, d in small]
print({v: verdicts.count(v) for v in set(verdicts)})
