"""Zone patterns, the matching relation and radix-key encoding."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from rzt.board import Color, Position, Zone, format_point, parse_point

# Key symbols, in branch order.
SYMBOLS = "BWEN"
NOT_IN_ZONE = 3


@dataclass(frozen=True)
class ZonePattern:
    """Player to move, a zone, and the stones inside that zone.

    ``black`` and ``white`` are bitmasks restricted to ``zone``; nothing
    outside the zone is stored.  ``stamp`` is assigned by the table on
    insertion and does not take part in equality.
    """

    player: Color
    zone: Zone
    black: int
    white: int
    stamp: int = field(default=0, compare=False)

    def __post_init__(self):
        if (self.black | self.white) & ~self.zone.mask:
            raise ValueError("pattern content outside its zone")
        if self.black & self.white:
            raise ValueError("pattern point is both black and white")

    @classmethod
    def from_content(cls, player: Color, zone: Zone, content: Mapping[int, Color]) -> "ZonePattern":
        if set(content) != set(zone):
            raise ValueError("content must be defined exactly on the zone")
        black = white = 0
        for i, c in content.items():
            if c == Color.BLACK:
                black |= 1 << i
            elif c == Color.WHITE:
                white |= 1 << i
        return cls(Color(player), zone, black, white)

    @property
    def side(self) -> int:
        return self.zone.side

    @property
    def content(self) -> dict[int, Color]:
        out = {}
        for i in self.zone:
            if self.black >> i & 1:
                out[i] = Color.BLACK
            elif self.white >> i & 1:
                out[i] = Color.WHITE
            else:
                out[i] = Color.EMPTY
        return out

    def stamped(self, stamp: int) -> "ZonePattern":
        return replace(self, stamp=stamp)

    def to_json(self) -> dict:
        return {
            "player": self.player.letter,
            "side": self.side,
            "zone": self.zone.coords(),
            "content": {format_point(i, self.side): c.letter for i, c in self.content.items()},
            "stamp": self.stamp,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ZonePattern":
        side = int(obj["side"])
        player = {"B": Color.BLACK, "W": Color.WHITE}[obj["player"]]
        zone = Zone.of(side, (parse_point(s, side) for s in obj["zone"]))
        letters = {"B": Color.BLACK, "W": Color.WHITE, "E": Color.EMPTY}
        content = {parse_point(k, side): letters[v] for k, v in obj["content"].items()}
        return cls.from_content(player, zone, content).stamped(int(obj.get("stamp", 0)))


def pattern_from(p: Position, z: Zone) -> ZonePattern:
    if z.side != p.side:
        raise ValueError("zone and position sides differ")
    return ZonePattern(p.to_move, z, p.black & z.mask, p.white & z.mask)


def matches(p: Position, phi: ZonePattern) -> bool:
    if p.side != phi.side:
        raise ValueError("position and pattern sides differ")
    mask = phi.zone.mask
    return (
        p.to_move == phi.player
        and p.black & mask == phi.black
        and p.white & mask == phi.white
    )


def pattern_symbols(phi: ZonePattern, oci: Sequence[int]) -> list[int]:
    mask, black, white = phi.zone.mask, phi.black, phi.white
    out = []
    for i in oci:
        if not mask >> i & 1:
            out.append(NOT_IN_ZONE)
        elif black >> i & 1:
            out.append(0)
        elif white >> i & 1:
            out.append(1)
        else:
            out.append(2)
    return out


def position_symbols(p: Position, oci: Sequence[int]) -> list[int]:
    black, white = p.black, p.white
    return [0 if black >> i & 1 else 1 if white >> i & 1 else 2 for i in oci]


def encode_pattern_key(phi: ZonePattern, oci: Sequence[int]) -> str:
    return "".join(SYMBOLS[s] for s in pattern_symbols(phi, oci))


def encode_position_key(p: Position, oci: Sequence[int]) -> str:
    return "".join(SYMBOLS[s] for s in position_symbols(p, oci))
