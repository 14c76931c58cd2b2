# coding: utf-8

# # Zone patterns in a radix tree
#
# A zone pattern fixes the player to move and the contents of some
# intersections; a position matches it when they agree inside the zone.
# The table keys patterns by the ordered crucial intersections (OCI), with
# an N branch for "not in zone", and counts lookup work as tree node visits
# plus leaf-chain comparisons.

# In[1]:

from rzt.board import Color, Zone, parse_point, parse_position
from rzt.pattern import ZonePattern, matches
from rzt.table import PatternTable, SearchStamp
from rzt.workload import WorkloadSpec, bench_tables, drive, generate, phase_rows


def pat(side, player, content):
    zone = Zone.of(side, (parse_point(k, side) for k in content))
    letters = {"B": Color.BLACK, "W": Color.WHITE, "E": Color.EMPTY}
    return ZonePattern.from_content(player, zone, {parse_point(k, side): letters[v] for k, v in content.items()})


# In[2]:

t = PatternTable(3)
t.reconstruct([parse_point("B2", 3), parse_point("A1", 3), parse_point("C3", 3)])
t.insert(pat(3, Color.WHITE, {"B2": "W", "A1": "E"}))
t.insert(pat(3, Color.WHITE, {"B2": "W", "C3": "B"}))
t.insert(pat(3, Color.WHITE, {"A1": "B"}))
print("OCI:", [Zone.of(3, [i]).coords()[0] for i in t.oci], "nodes:", t.node_count())

q = parse_position("size: 3\nto_move: W\n..X\n.O.\nX..\n")
hit = t.lookup(q)
print("first match: stamp", hit.stamp, hit.zone.coords(), "matches:", matches(q, hit))
print("cost:", t.last_lookup)


# Timestamps.  A failed lookup remembers the global stamp; asking again for
# the same position only looks at subtrees that changed since.

# In[3]:

miss = parse_position("size: 3\nto_move: W\n...\n.X.\n...\n")
s = SearchStamp()
print("first miss:", t.lookup(miss, s), t.last_lookup)
print("again:     ", t.lookup(miss, s), t.last_lookup)
t.insert(pat(3, Color.WHITE, {"B2": "B"}))
print("after insert:", t.lookup(miss, s).zone.coords(), t.last_lookup)


# A synthetic workload: how lookup cost grows with the tree.
# log(c)/log(n) near 0.5 means cost grows like the square root of the size.

# In[4]:

spec = WorkloadSpec(side=7, num_entries=6000, num_queries=12000, hot_cells=9, seed=2)
tables = bench_tables(spec)
rows = phase_rows(drive(generate(spec), tables))
print("phase   nodes  miss_nt  miss_ts")
for r in rows[9::4]:
    print(f"{r.phase:5d} {r.n_avg:7.0f}  {r.ratio('miss_nt'):.3f}    {r.ratio('miss_ts'):.3f}")
nt, ts = tables["nt"].stats().cost, tables["ts"].stats().cost
print(f"total cost nt={nt} ts={ts}, timestamps save {1 - ts / nt:.1%}")
