# coding: utf-8

# # The board engine and unconditional life
#
# Positions are bitboards: bit i is intersection i, counted from the bottom
# left corner, row by row.  Columns are lettered A.. without I.

# In[1]:

from rzt.board import (Color, benson_safe_zone, blocks, captured_by, legal_moves, parse_point,
                       parse_position, play, render_position)


# A white group in the top left, walled in by Black.  White to move.

# In[2]:

p = parse_position("""size: 5
to_move: W
.O.O.
OOOOX
XXXXX
.....
.....
""")
print(render_position(p))
for b in blocks(p):
    print(b.color.letter, len(b.stones), "stones", len(b.liberties), "liberties")


# Two separate eyes, so Black cannot capture the group even if White always
# passes.  The zone returned is the group plus the eyes it needs.

# In[3]:

safe, zone = benson_safe_zone(p, Color.WHITE)
print("white blocks safe:", len(safe))
print("zone:", zone.coords())


# Filling one eye leaves a single region: no longer unconditionally alive.

# In[4]:

q = play(p, parse_point("A5", 5))
print(render_position(q))
print("safe after filling A5:", bool(benson_safe_zone(q, Color.WHITE)[0]))


# Captures: a black stone with one liberty left.

# In[5]:

r = parse_position("""size: 3
to_move: W
X..
OXO
OOO
""")
m = parse_point("B3", 3)
print("B3 captures", bin(captured_by(r, m)).count("1"), "stones")
print(render_position(play(r, m)))

# Legal moves come in ascending index order with PASS (-1) last.
print([x for x in legal_moves(r)])
