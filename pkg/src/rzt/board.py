"""Minimal Go rules on square boards up to 9x9.

Positions are stored as two bitboards (one int per color) where bit ``i``
is intersection ``i = (row - 1) * side + col`` and row 1 is the bottom
edge.  All flood fills, liberty counts and captures are done with shifts
and masks, which keeps the engine fast enough for exhaustive search on
small boards without any native code.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, Iterator

MAX_SIDE = 9
COLUMNS = "ABCDEFGHJKLMNOPQRST"
PASS = -1


class BoardError(ValueError):
    """Malformed board text or an illegal configuration."""


class IllegalMove(ValueError):
    """Raised by :func:`play` for occupied points and suicide."""


class Color(IntEnum):
    EMPTY = 0
    BLACK = 1
    WHITE = 2

    @property
    def opponent(self) -> "Color":
        if self is Color.EMPTY:
            raise ValueError("EMPTY has no opponent")
        return Color.WHITE if self is Color.BLACK else Color.BLACK

    @property
    def letter(self) -> str:
        return "EBW"[self]


@dataclass(frozen=True)
class Geometry:
    side: int
    full: int
    not_first_col: int
    not_last_col: int
    adjacent: tuple[int, ...]

    def neighbors(self, mask: int) -> int:
        s = self.side
        return (
            ((mask << 1) & self.not_first_col)
            | ((mask >> 1) & self.not_last_col)
            | (mask << s)
            | (mask >> s)
        ) & self.full


@lru_cache(maxsize=None)
def geometry(side: int) -> Geometry:
    if not 1 <= side <= MAX_SIDE:
        raise BoardError(f"board side must be in 1..{MAX_SIDE}, got {side}")
    full = (1 << side * side) - 1
    first_col = sum(1 << (r * side) for r in range(side))
    last_col = first_col << (side - 1)
    adjacent = []
    for i in range(side * side):
        r, c = divmod(i, side)
        m = 0
        if c > 0:
            m |= 1 << (i - 1)
        if c < side - 1:
            m |= 1 << (i + 1)
        if r > 0:
            m |= 1 << (i - side)
        if r < side - 1:
            m |= 1 << (i + side)
        adjacent.append(m)
    return Geometry(side, full, full & ~first_col, full & ~last_col, tuple(adjacent))


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit indices of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def flood(seed: int, within: int, geo: Geometry) -> int:
    region = seed & within
    while True:
        grown = (region | geo.neighbors(region)) & within
        if grown == region:
            return region
        region = grown


def format_point(index: int, side: int) -> str:
    if index == PASS:
        return "pass"
    if not 0 <= index < side * side:
        raise BoardError(f"intersection {index} outside {side}x{side} board")
    r, c = divmod(index, side)
    return f"{COLUMNS[c]}{r + 1}"


def parse_point(text: str, side: int) -> int:
    t = text.strip().upper()
    if t == "PASS":
        return PASS
    if len(t) < 2 or t[0] not in COLUMNS[:side] or not t[1:].isdigit():
        raise BoardError(f"bad coordinate {text!r} for side {side}")
    row = int(t[1:])
    if not 1 <= row <= side:
        raise BoardError(f"bad coordinate {text!r} for side {side}")
    return (row - 1) * side + COLUMNS.index(t[0])


class Zone:
    """An immutable set of intersections backed by a bitmask."""

    __slots__ = ("side", "mask")

    def __init__(self, side: int, mask: int = 0):
        full = geometry(side).full
        if mask & ~full:
            raise ValueError("zone has members outside the board")
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("Zone is immutable")

    @classmethod
    def of(cls, side: int, members: Iterable[int]) -> "Zone":
        mask = 0
        for i in members:
            mask |= 1 << i
        return cls(side, mask)

    @classmethod
    def full(cls, side: int) -> "Zone":
        return cls(side, geometry(side).full)

    def __contains__(self, index: int) -> bool:
        return index >= 0 and bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Zone):
            return NotImplemented
        return self.side == other.side and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.side, self.mask))

    def __or__(self, other: "Zone") -> "Zone":
        self._check(other)
        return Zone(self.side, self.mask | other.mask)

    union = __or__

    def __le__(self, other: "Zone") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    issubset = __le__

    def add(self, mask: int) -> "Zone":
        return Zone(self.side, self.mask | mask)

    def coords(self) -> list[str]:
        return [format_point(i, self.side) for i in self]

    def _check(self, other: "Zone") -> None:
        if self.side != other.side:
            raise ValueError("zones from different board sizes")

    def __repr__(self) -> str:
        return f"Zone({self.side}, [{', '.join(self.coords())}])"


@dataclass(frozen=True)
class Block:
    color: Color
    stone_mask: int
    liberty_mask: int

    @property
    def stones(self) -> frozenset[int]:
        return frozenset(iter_bits(self.stone_mask))

    @property
    def liberties(self) -> frozenset[int]:
        return frozenset(iter_bits(self.liberty_mask))


@dataclass(frozen=True)
class Position:
    """A board configuration plus the player to move.

    The constructor does not check liberties so that synthetic (not
    necessarily legal) positions can be used as table queries; use
    :meth:`from_cells`, :func:`parse_position` or :func:`check_legal` when
    the Go invariant matters.
    """

    side: int
    black: int
    white: int
    to_move: Color = Color.BLACK

    @classmethod
    def empty(cls, side: int, to_move: Color = Color.BLACK) -> "Position":
        geometry(side)
        return cls(side, 0, 0, Color(to_move))

    @classmethod
    def from_cells(cls, side: int, cells: Iterable[int], to_move: Color) -> "Position":
        cells = list(cells)
        if len(cells) != side * side:
            raise BoardError(f"expected {side * side} cells, got {len(cells)}")
        black = white = 0
        for i, c in enumerate(cells):
            c = Color(c)
            if c is Color.BLACK:
                black |= 1 << i
            elif c is Color.WHITE:
                white |= 1 << i
        p = cls(side, black, white, Color(to_move))
        check_legal(p)
        return p

    @property
    def geometry(self) -> Geometry:
        return geometry(self.side)

    @property
    def empty_mask(self) -> int:
        return geometry(self.side).full & ~(self.black | self.white)

    def stones(self, color: Color) -> int:
        if color is Color.BLACK:
            return self.black
        if color is Color.WHITE:
            return self.white
        return self.empty_mask

    def __getitem__(self, index: int) -> Color:
        if self.black >> index & 1:
            return Color.BLACK
        if self.white >> index & 1:
            return Color.WHITE
        return Color.EMPTY

    @property
    def cells(self) -> tuple[Color, ...]:
        return tuple(self[i] for i in range(self.side * self.side))

    def with_to_move(self, color: Color) -> "Position":
        return replace(self, to_move=Color(color))

    def __str__(self) -> str:
        return render_position(self)


def blocks(p: Position) -> list[Block]:
    """All blocks of ``p`` ordered by their lowest intersection."""
    geo = p.geometry
    empty = p.empty_mask
    out = []
    for color, stones in ((Color.BLACK, p.black), (Color.WHITE, p.white)):
        rest = stones
        while rest:
            blk = flood(rest & -rest, stones, geo)
            rest &= ~blk
            out.append(Block(color, blk, geo.neighbors(blk) & empty))
    out.sort(key=lambda b: (b.stone_mask & -b.stone_mask).bit_length())
    return out


def block_at(p: Position, index: int) -> Block:
    color = p[index]
    if color is Color.EMPTY:
        raise ValueError(f"no stone at {format_point(index, p.side)}")
    geo = p.geometry
    blk = flood(1 << index, p.stones(color), geo)
    return Block(color, blk, geo.neighbors(blk) & p.empty_mask)


def check_legal(p: Position) -> None:
    if p.black & p.white:
        raise BoardError("intersection occupied by both colors")
    for b in blocks(p):
        if not b.liberty_mask:
            pt = format_point((b.stone_mask & -b.stone_mask).bit_length() - 1, p.side)
            raise BoardError(f"block at {pt} has no liberties")


def is_legal_position(p: Position) -> bool:
    try:
        check_legal(p)
    except BoardError:
        return False
    return True


def _place(p: Position, m: int) -> tuple[int, int, int] | None:
    """Own stones, opponent stones and captured mask after placing at m.

    Returns None for suicide.  ``m`` must be empty.
    """
    geo = geometry(p.side)
    bit = 1 << m
    if p.to_move is Color.BLACK:
        own, opp = p.black | bit, p.white
    else:
        own, opp = p.white | bit, p.black
    empty = geo.full & ~(own | opp)
    captured = 0
    touching = geo.adjacent[m] & opp
    while touching:
        blk = flood(touching & -touching, opp, geo)
        touching &= ~blk
        if not geo.neighbors(blk) & empty:
            captured |= blk
    if captured:
        opp &= ~captured
        empty |= captured
    elif not geo.neighbors(flood(bit, own, geo)) & empty:
        return None
    return own, opp, captured


def play(p: Position, m: int) -> Position:
    """Play ``m`` (an intersection index or :data:`PASS`) for ``p.to_move``."""
    nxt = p.to_move.opponent
    if m == PASS:
        return Position(p.side, p.black, p.white, nxt)
    if not 0 <= m < p.side * p.side:
        raise IllegalMove(f"intersection {m} outside the board")
    if (p.black | p.white) >> m & 1:
        raise IllegalMove(f"{format_point(m, p.side)} is occupied")
    placed = _place(p, m)
    if placed is None:
        raise IllegalMove(f"{format_point(m, p.side)} is suicide")
    own, opp, _ = placed
    if p.to_move is Color.BLACK:
        return Position(p.side, own, opp, nxt)
    return Position(p.side, opp, own, nxt)


def try_play(p: Position, m: int) -> Position | None:
    """Like :func:`play` but returns None for an illegal move."""
    try:
        return play(p, m)
    except IllegalMove:
        return None


def captured_by(p: Position, m: int) -> int:
    """Mask of opponent stones removed when ``p.to_move`` plays ``m``."""
    if m == PASS:
        return 0
    placed = _place(p, m)
    if placed is None:
        raise IllegalMove(f"{format_point(m, p.side)} is suicide")
    return placed[2]


def legal_moves(p: Position) -> list[int]:
    moves = []
    for m in iter_bits(p.empty_mask):
        if _place(p, m) is not None:
            moves.append(m)
    moves.append(PASS)
    return moves


def benson_safe_zone(p: Position, player: Color) -> tuple[frozenset[Block], Zone]:
    """Benson's unconditional-life analysis for ``player``.

    Regions are the maximal connected sets of non-``player`` points.  A
    region is vital to a block when every empty point of the region is a
    liberty of that block.  Blocks with fewer than two vital regions are
    dropped, then regions touching a dropped block, until nothing changes.
    The zone covers the surviving blocks and every region vital to one of
    them.
    """
    player = Color(player)
    geo = p.geometry
    own = p.stones(player)
    empty = p.empty_mask
    if not own:
        return frozenset(), Zone(p.side)

    chains = [b for b in blocks(p) if b.color is player]
    others = geo.full & ~own
    regions = []
    rest = others
    while rest:
        reg = flood(rest & -rest, others, geo)
        rest &= ~reg
        regions.append(reg)

    border = geo.neighbors
    touches = [[k for k, c in enumerate(chains) if border(reg) & c.stone_mask] for reg in regions]
    vital = []
    for reg in regions:
        reg_empty = reg & empty
        vital.append({
            k for k, c in enumerate(chains)
            if reg_empty and not reg_empty & ~c.liberty_mask
        })

    alive = set(range(len(chains)))
    live_regions = set(range(len(regions)))
    while True:
        counts = dict.fromkeys(alive, 0)
        for r in live_regions:
            for k in vital[r]:
                if k in counts:
                    counts[k] += 1
        keep = {k for k, n in counts.items() if n >= 2}
        keep_regions = {r for r in live_regions if all(k in keep for k in touches[r])}
        if keep == alive and keep_regions == live_regions:
            break
        alive, live_regions = keep, keep_regions

    if not alive:
        return frozenset(), Zone(p.side)
    mask = 0
    for k in alive:
        mask |= chains[k].stone_mask
    for r in live_regions:
        if vital[r] & alive:
            mask |= regions[r]
    return frozenset(chains[k] for k in alive), Zone(p.side, mask)


def parse_position(text: str) -> Position:
    """Parse the problem-file format (``size:``, ``to_move:``, grid rows)."""
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    if len(lines) < 2:
        raise BoardError("expected 'size:' and 'to_move:' header lines")
    key, _, val = lines[0].partition(":")
    if key.strip().lower() != "size" or not val.strip().isdigit():
        raise BoardError(f"bad size line {lines[0]!r}")
    side = int(val)
    geometry(side)
    key, _, val = lines[1].partition(":")
    if key.strip().lower() != "to_move":
        raise BoardError("missing 'to_move:' line")
    val = val.strip().upper()
    if val not in ("B", "W"):
        raise BoardError(f"to_move must be B or W, got {val!r}")
    to_move = Color.BLACK if val == "B" else Color.WHITE
    rows = lines[2:]
    if len(rows) != side:
        raise BoardError(f"expected {side} rows, got {len(rows)}")
    cells = [Color.EMPTY] * (side * side)
    symbols = {".": Color.EMPTY, "X": Color.BLACK, "O": Color.WHITE}
    for k, row in enumerate(rows):
        row = row.replace(" ", "")
        if len(row) != side:
            raise BoardError(f"row {k + 1} has {len(row)} cells, expected {side}")
        r = side - 1 - k
        for c, ch in enumerate(row):
            if ch not in symbols:
                raise BoardError(f"unknown cell symbol {ch!r}")
            cells[r * side + c] = symbols[ch]
    return Position.from_cells(side, cells, to_move)


def parse_positions(text: str) -> list[Position]:
    """Parse several problems separated by lines consisting of ``---``."""
    chunks, cur = [], []
    for line in text.splitlines():
        if line.strip() == "---":
            chunks.append(cur)
            cur = []
        else:
            cur.append(line)
    chunks.append(cur)
    bodies = ["\n".join(c) for c in chunks]
    return [parse_position(b) for b in bodies if any(
        ln.strip() and not ln.strip().startswith("#") for ln in b.splitlines())]


def render_position(p: Position) -> str:
    chars = {Color.EMPTY: ".", Color.BLACK: "X", Color.WHITE: "O"}
    out = [f"size: {p.side}", f"to_move: {p.to_move.letter}"]
    for r in range(p.side - 1, -1, -1):
        out.append("".join(chars[p[r * p.side + c]] for c in range(p.side)))
    return "\n".join(out) + "\n"
