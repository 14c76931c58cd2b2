"""Relevance-zone pattern table.

Two storage modes share one interface:

* ``Mode.RADIX`` keys every pattern by the contents of an ordered list of
  crucial intersections (the OCI).  Each tree level branches on
  B/W/E/N, where N means "outside the pattern's zone".  Leaves hold chains
  of patterns, newest first.  Lookup is a depth-first backtracking walk that
  follows the query's own symbol before the N branch.
* ``Mode.LINEAR`` keeps a newest-first list per player and scans it.  It is
  the reference the tree is checked against.

With timestamps enabled every tree node remembers the stamp of the newest
pattern below it, and each caller-held :class:`SearchStamp` remembers the
table size at the query's last miss.  Subtrees that have not changed since
then are skipped.
"""
from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass, field, fields
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from rzt.board import Color, Position, geometry, iter_bits
from rzt.pattern import NOT_IN_ZONE, SYMBOLS, ZonePattern


class Mode(str, Enum):
    RADIX = "radix"
    LINEAR = "linear"


class MatchPolicy(str, Enum):
    FIRST = "first"
    SMALLEST = "smallest"


class Maintenance(Enum):
    NOT_DUE = "not_due"
    UNCHANGED = "unchanged"
    REBUILT = "rebuilt"


def _exact(x: float) -> Fraction:
    return Fraction(str(x))


@dataclass(frozen=True)
class ReconstructionConfig:
    small_threshold: int = 1000
    small_interval: int = 100
    growth_factor: float = 0.10
    oci_fraction: float = 0.80

    def __post_init__(self):
        if self.small_threshold <= 0 or self.small_interval <= 0:
            raise ValueError("rebuild thresholds must be positive")
        if self.growth_factor <= 0:
            raise ValueError("growth factor must be positive")
        if not 0 < self.oci_fraction <= 1:
            raise ValueError("oci_fraction must lie in (0, 1]")


@dataclass
class TableStats:
    entries: int = 0
    lookups: int = 0
    hits: int = 0
    node_visits: int = 0
    list_compares: int = 0
    rebuild_count: int = 0
    lookup_time: float = 0.0
    # Hits where the smallest matching zone was strictly smaller than the
    # first match (only counted under MatchPolicy.SMALLEST).
    smaller_hits: int = 0

    @property
    def cost(self) -> int:
        return self.node_visits + self.list_compares

    def copy(self) -> "TableStats":
        return TableStats(**{f.name: getattr(self, f.name) for f in fields(self)})


@dataclass
class SearchStamp:
    """Table size at the last failed lookup of one position."""

    T: int = 0


@dataclass(frozen=True)
class LookupCost:
    node_visits: int
    list_compares: int

    @property
    def cost(self) -> int:
        return self.node_visits + self.list_compares


class SkipViolation(AssertionError):
    """A timestamp skip hid a matching pattern (audit mode only)."""


class RadixNode:
    """A run of trie nodes that form a single unbranched path.

    The tree is logically an uncompressed four-way trie with one level per
    OCI intersection.  Unary stretches are stored as one segment covering
    trie depths ``start..end``; ``lb``/``lw``/``le`` hold the symbols on the
    edges inside the segment as bitmasks over depth (N is the remainder).
    All trie nodes of a segment have the same subtree and therefore the same
    stamp.  The bottom node either branches (``children``) or, at full
    depth, holds the leaf chain.
    """

    __slots__ = ("start", "end", "lb", "lw", "le", "stamp", "children", "chain")

    def __init__(self, start: int, end: int, lb: int, lw: int, le: int, stamp: int, leaf: bool):
        self.start = start
        self.end = end
        self.lb, self.lw, self.le = lb, lw, le
        self.stamp = stamp
        self.children = None if leaf else [None, None, None, None]
        # (stamp, zone mask, black, white, pattern), newest at the left.
        self.chain = deque() if leaf else None

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def size(self) -> int:
        """Number of trie nodes in the segment."""
        return self.end - self.start + 1

    def symbol(self, depth: int) -> int:
        """Symbol of the edge leaving the trie node at ``depth`` (start <= depth < end)."""
        return _symbol_at(self.lb, self.lw, self.le, depth)


def _symbol_at(b: int, w: int, e: int, depth: int) -> int:
    if b >> depth & 1:
        return 0
    if w >> depth & 1:
        return 1
    if e >> depth & 1:
        return 2
    return NOT_IN_ZONE


def _span(lo: int, hi: int) -> int:
    """Bitmask of depths lo..hi-1."""
    return (1 << hi) - (1 << lo) if hi > lo else 0


class _KeyMap:
    """Translates board bitmasks into bitmasks over OCI depth, bytewise."""

    def __init__(self, oci: Sequence[int], cells: int):
        depth_of = {i: d for d, i in enumerate(oci)}
        self.tables = []
        for base in range(0, cells, 8):
            row = [0] * 256
            for byte in range(1, 256):
                m = 0
                for k in range(8):
                    if byte >> k & 1 and base + k in depth_of:
                        m |= 1 << depth_of[base + k]
                row[byte] = m
            self.tables.append(row)
        self.full = (1 << len(oci)) - 1

    def __call__(self, board_mask: int) -> int:
        out = 0
        for row in self.tables:
            if board_mask & 255:
                out |= row[board_mask & 255]
            board_mask >>= 8
        return out


def compute_oci(tally: Sequence[int], fraction: float, side: int) -> tuple[int, ...]:
    """Most frequently zoned intersections, most frequent first.

    Keeps ``max(1, floor(fraction * side**2))`` of them; ties go to the
    lower index.
    """
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    cells = side * side
    if len(tally) != cells:
        raise ValueError("tally length does not match board")
    n = max(1, int(_exact(fraction) * cells))
    return tuple(heapq.nsmallest(n, range(cells), key=lambda i: (-tally[i], i)))


def rebuild_due(entries: int, last_rebuild_size: int, config: ReconstructionConfig) -> bool:
    if entries <= config.small_threshold:
        return entries > 0 and entries % config.small_interval == 0
    return entries >= last_rebuild_size * (1 + _exact(config.growth_factor))


def check_oci(oci: Sequence[int], side: int) -> tuple[int, ...]:
    oci = tuple(int(i) for i in oci)
    if len(set(oci)) != len(oci):
        raise ValueError("OCI contains duplicates")
    if any(not 0 <= i < side * side for i in oci):
        raise ValueError("OCI intersection outside the board")
    return oci


class _LinearStore:
    """Per-player pattern list kept oldest-first in numpy columns.

    Scanning newest-first is done by vectorised matching over the slice of
    entries the scan would reach, which keeps the counts exact while
    avoiding a Python loop over every entry.
    """

    def __init__(self, side: int):
        self.side = side
        self.wide = side * side > 64
        self.patterns: list[ZonePattern] = []
        self._cap = 0
        self._cols: dict[str, np.ndarray] = {}
        self._grow(256)

    _names = ("stamp", "size", "m_lo", "m_hi", "b_lo", "b_hi", "w_lo", "w_hi")

    def _grow(self, cap: int) -> None:
        n = len(self.patterns)
        for name in self._names:
            dtype = np.int64 if name in ("stamp", "size") else np.uint64
            col = np.zeros(cap, dtype=dtype)
            if name in self._cols:
                col[:n] = self._cols[name][:n]
            self._cols[name] = col
        self._cap = cap

    @staticmethod
    def _split(x: int) -> tuple[int, int]:
        return x & 0xFFFFFFFFFFFFFFFF, x >> 64

    def append(self, phi: ZonePattern) -> None:
        n = len(self.patterns)
        if n == self._cap:
            self._grow(2 * self._cap)
        c = self._cols
        c["stamp"][n] = phi.stamp
        c["size"][n] = len(phi.zone)
        c["m_lo"][n], c["m_hi"][n] = self._split(phi.zone.mask)
        c["b_lo"][n], c["b_hi"][n] = self._split(phi.black)
        c["w_lo"][n], c["w_hi"][n] = self._split(phi.white)
        self.patterns.append(phi)

    def scan(self, black: int, white: int, floor_stamp: int, smallest: bool):
        """Return (first match, chosen match, compares) scanning newest-first
        over entries with stamp >= floor_stamp."""
        n = len(self.patterns)
        c = self._cols
        start = int(np.searchsorted(c["stamp"][:n], floor_stamp, side="left")) if floor_stamp else 0
        if start >= n:
            return None, None, 0
        sl = slice(start, n)
        b_lo, b_hi = self._split(black)
        w_lo, w_hi = self._split(white)
        m_lo = c["m_lo"][sl]
        ok = ((np.uint64(b_lo) & m_lo) == c["b_lo"][sl]) & ((np.uint64(w_lo) & m_lo) == c["w_lo"][sl])
        if self.wide:
            m_hi = c["m_hi"][sl]
            ok &= ((np.uint64(b_hi) & m_hi) == c["b_hi"][sl]) & ((np.uint64(w_hi) & m_hi) == c["w_hi"][sl])
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            return None, None, n - start
        first = self.patterns[start + int(idx[-1])]
        if not smallest:
            return first, first, n - 1 - (start + int(idx[-1])) + 1
        sizes = c["size"][sl][idx]
        best = int(sizes.min())
        # newest among the smallest, i.e. the first one a head-first scan meets
        j = int(idx[np.flatnonzero(sizes == best)[-1]])
        return first, self.patterns[start + j], n - start


class PatternTable:
    """Relevance-zone pattern table (radix tree or linear baseline)."""

    def __init__(
        self,
        side: int,
        mode: Mode | str = Mode.RADIX,
        timestamps: bool = True,
        config: ReconstructionConfig | None = None,
        match: MatchPolicy | str = MatchPolicy.FIRST,
    ):
        geometry(side)
        self.side = side
        self.mode = Mode(mode)
        self.timestamps_enabled = bool(timestamps)
        self.config = config or ReconstructionConfig()
        self.match = MatchPolicy(match)
        self.oci: tuple[int, ...] = ()
        self.tally = [0] * (side * side)
        self.last_rebuild_size = 0
        self.audit_skips = False
        self.last_lookup = LookupCost(0, 0)
        self._stats = TableStats()
        self._patterns: list[ZonePattern] = []
        self._roots: list[RadixNode | None] = [None, None, None]
        self._node_counts = [0, 0, 0]
        self._linear = [None, _LinearStore(side), _LinearStore(side)]
        self._keymap = _KeyMap((), side * side)

    # -- bookkeeping -------------------------------------------------------

    @property
    def global_stamp(self) -> int:
        return len(self._patterns)

    def __len__(self) -> int:
        return len(self._patterns)

    def stats(self) -> TableStats:
        s = self._stats.copy()
        s.entries = len(self._patterns)
        return s

    def patterns(self) -> list[ZonePattern]:
        """Stored patterns in insertion (stamp) order."""
        return list(self._patterns)

    def root(self, player: Color) -> RadixNode | None:
        return self._roots[Color(player)]

    def trie(self, player: Color) -> TrieNode | None:
        """Uncompressed view of one player's tree."""
        return expand(self._roots[Color(player)])

    def node_count(self, player: Color | None = None) -> int:
        if player is None:
            return self._node_counts[1] + self._node_counts[2]
        return self._node_counts[Color(player)]

    # -- insertion ---------------------------------------------------------

    def insert(self, phi: ZonePattern) -> ZonePattern:
        """Store ``phi`` and return the stored copy carrying its stamp."""
        if phi.side != self.side:
            raise ValueError(f"pattern side {phi.side} != table side {self.side}")
        if phi.player not in (Color.BLACK, Color.WHITE):
            raise ValueError("pattern player must be BLACK or WHITE")
        stored = phi.stamped(len(self._patterns) + 1)
        self._patterns.append(stored)
        for i in iter_bits(stored.zone.mask):
            self.tally[i] += 1
        if self.mode is Mode.LINEAR:
            self._linear[stored.player].append(stored)
        else:
            self._tree_insert(stored)
            self.maintenance()
        return stored

    def _tree_insert(self, phi: ZonePattern) -> None:
        player = phi.player
        stamp = phi.stamp
        n = len(self.oci)
        km = self._keymap
        kb, kw = km(phi.black), km(phi.white)
        ke = km(phi.zone.mask) & ~(kb | kw)
        entry = (stamp, phi.zone.mask, phi.black, phi.white, phi)
        seg = self._roots[player]
        if seg is None:
            seg = self._roots[player] = RadixNode(0, n, kb, kw, ke, stamp, leaf=True)
            self._node_counts[player] += n + 1
            seg.chain.appendleft(entry)
            return
        while True:
            span = _span(seg.start, seg.end)
            diff = ((seg.lb ^ kb) | (seg.lw ^ kw) | (seg.le ^ ke)) & span
            if diff:
                # split: the trie node at depth j becomes a branch point
                j = (diff & -diff).bit_length() - 1
                low, high = _span(seg.start, j), _span(j + 1, seg.end)
                lower = RadixNode(j + 1, seg.end, seg.lb & high, seg.lw & high, seg.le & high, seg.stamp, leaf=True)
                lower.children, lower.chain = seg.children, seg.chain
                old_sym = seg.symbol(j)
                rest = _span(j + 1, n)
                fresh = RadixNode(j + 1, n, kb & rest, kw & rest, ke & rest, stamp, leaf=True)
                fresh.chain.appendleft(entry)
                seg.end = j
                seg.lb, seg.lw, seg.le = seg.lb & low, seg.lw & low, seg.le & low
                seg.children = [None, None, None, None]
                seg.chain = None
                seg.children[old_sym] = lower
                seg.children[_symbol_at(kb, kw, ke, j)] = fresh
                seg.stamp = stamp
                self._node_counts[player] += n - j
                return
            seg.stamp = stamp
            if seg.chain is not None:
                seg.chain.appendleft(entry)
                return
            sym = _symbol_at(kb, kw, ke, seg.end)
            child = seg.children[sym]
            if child is None:
                rest = _span(seg.end + 1, n)
                child = seg.children[sym] = RadixNode(seg.end + 1, n, kb & rest, kw & rest, ke & rest, stamp, leaf=True)
                child.chain.appendleft(entry)
                self._node_counts[player] += n - seg.end
                return
            seg = child

    # -- reconstruction ----------------------------------------------------

    def maintenance(self) -> Maintenance:
        if self.mode is Mode.LINEAR:
            return Maintenance.NOT_DUE
        entries = len(self._patterns)
        if not rebuild_due(entries, self.last_rebuild_size, self.config):
            return Maintenance.NOT_DUE
        oci = compute_oci(self.tally, self.config.oci_fraction, self.side)
        if oci == self.oci:
            self.last_rebuild_size = entries
            return Maintenance.UNCHANGED
        self.reconstruct(oci)
        return Maintenance.REBUILT

    def reconstruct(self, oci: Sequence[int]) -> None:
        """Rebuild both trees over ``oci``, reinserting in stamp order."""
        self.oci = check_oci(oci, self.side)
        self._keymap = _KeyMap(self.oci, self.side * self.side)
        self._roots = [None, None, None]
        self._node_counts = [0, 0, 0]
        if self.mode is Mode.RADIX:
            for phi in self._patterns:
                self._tree_insert(phi)
        self.last_rebuild_size = len(self._patterns)
        self._stats.rebuild_count += 1

    # -- lookup ------------------------------------------------------------

    def lookup(self, p: Position, s: SearchStamp | None = None) -> ZonePattern | None:
        """First stored pattern matched by ``p``, or None.

        ``s`` is the caller's stamp for this position; it is advanced to the
        current table size on a miss when timestamps are enabled.
        """
        if p.side != self.side:
            raise ValueError(f"position side {p.side} != table side {self.side}")
        t0 = time.perf_counter()
        ts = self.timestamps_enabled and s is not None
        floor_stamp = s.T if ts else 0
        smallest = self.match is MatchPolicy.SMALLEST
        if self.mode is Mode.LINEAR:
            first, found, compares = self._linear[p.to_move].scan(p.black, p.white, floor_stamp, smallest)
            visits = 0
        else:
            first, found, visits, compares = self._tree_lookup(p, floor_stamp, smallest)

        st = self._stats
        st.lookups += 1
        st.node_visits += visits
        st.list_compares += compares
        self.last_lookup = LookupCost(visits, compares)
        if found is not None:
            st.hits += 1
            if smallest and len(found.zone) < len(first.zone):
                st.smaller_hits += 1
        elif ts:
            s.T = len(self._patterns)
        st.lookup_time += time.perf_counter() - t0
        return found

    def _tree_lookup(self, p: Position, T: int, smallest: bool):
        root = self._roots[p.to_move]
        if root is None:
            return None, None, 0, 0
        km = self._keymap
        qb, qw = km(p.black), km(p.white)
        qe = km.full & ~(qb | qw)
        nb, nw, ne = ~qb, ~qw, ~qe
        pb, pw = p.black, p.white
        audit = self.audit_skips and T > 0
        visits = compares = 0
        first = best = None
        # The query-symbol child is always popped right after it is pushed,
        # so it is followed directly and only N children go on the stack.
        stack = []
        pop, push = stack.pop, stack.append
        seg = root
        while True:
            if seg is None:
                if not stack:
                    break
                seg = pop()
            if T and T >= seg.stamp:
                # every trie node of the segment carries the same stamp
                visits += 1
                if audit:
                    self._audit_subtree(seg, pb, pw)
                seg = None
                continue
            lo, hi = seg.start, seg.end
            miss = (seg.lb & nb) | (seg.lw & nw) | (seg.le & ne)
            if miss:
                # the walk stops at the first edge that is neither N nor
                # the query's own symbol
                visits += (miss & -miss).bit_length() - lo
                seg = None
                continue
            visits += hi - lo + 1
            chain = seg.chain
            if chain is None:
                kids = seg.children
                c = kids[NOT_IN_ZONE]
                if c is not None:
                    push(c)
                seg = kids[0 if qb >> hi & 1 else 1 if qw >> hi & 1 else 2]
                continue
            seg = None
            for entry in chain:
                if entry[0] < T:
                    if audit:
                        self._audit_chain(chain, pb, pw, T)
                    break
                compares += 1
                mask = entry[1]
                if pb & mask == entry[2] and pw & mask == entry[3]:
                    phi = entry[4]
                    if first is None:
                        first = best = phi
                        if not smallest:
                            break
                    elif len(phi.zone) < len(best.zone):
                        best = phi
            if first is not None and not smallest:
                break
        return first, best, visits, compares

    def _audit_subtree(self, node: RadixNode, pb: int, pw: int) -> None:
        for leaf in _leaves(node):
            for _, mask, b, w, phi in leaf.chain:
                if pb & mask == b and pw & mask == w:
                    raise SkipViolation(f"skipped subtree holds a match (stamp {phi.stamp})")

    @staticmethod
    def _audit_chain(chain, pb: int, pw: int, T: int) -> None:
        for stamp, mask, b, w, phi in chain:
            if stamp < T and pb & mask == b and pw & mask == w:
                raise SkipViolation(f"skipped chain entry matches (stamp {stamp})")


def _leaves(node: RadixNode) -> Iterator[RadixNode]:
    stack = [node]
    while stack:
        nd = stack.pop()
        if nd.is_leaf:
            yield nd
        else:
            stack.extend(c for c in nd.children if c is not None)


@dataclass
class TrieNode:
    """One node of the logical (uncompressed) trie, for inspection."""

    depth: int
    stamp: int
    children: dict[str, "TrieNode"] = field(default_factory=dict)
    chain: list[ZonePattern] | None = None


def expand(seg: RadixNode | None) -> TrieNode | None:
    """The uncompressed trie rooted at ``seg``."""
    if seg is None:
        return None
    top = node = TrieNode(seg.start, seg.stamp)
    for d in range(seg.start, seg.end):
        child = TrieNode(d + 1, seg.stamp)
        node.children[SYMBOLS[seg.symbol(d)]] = child
        node = child
    if seg.chain is not None:
        node.chain = [entry[4] for entry in seg.chain]
    else:
        for sym, c in enumerate(seg.children):
            if c is not None:
                node.children[SYMBOLS[sym]] = expand(c)
    return top


def iter_nodes(node: TrieNode | None) -> Iterator[TrieNode]:
    """All trie nodes below ``node``, preorder."""
    if node is None:
        return
    stack = [node]
    while stack:
        nd = stack.pop()
        yield nd
        stack.extend(reversed(list(nd.children.values())))


def new_table(
    side: int,
    mode: Mode | str = Mode.RADIX,
    timestamps: bool = True,
    config: ReconstructionConfig | None = None,
    match: MatchPolicy | str = MatchPolicy.FIRST,
) -> PatternTable:
    return PatternTable(side, mode, timestamps, config, match)
