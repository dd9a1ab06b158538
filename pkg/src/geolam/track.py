"""Combinatorial train tracks.

A track is stored unfattened: switches carry two ordered sides (``A`` and
``B``) of edge ends, and every edge has two ends.  The order of the ends on a
side is the ribbon structure, read top to bottom with the tangent line of the
switch pointing from side ``A`` to side ``B``.  With that convention the
complementary regions, the cusps and the transverse order of parallel strands
inside an edge are all determined by the data below.

Asset files are line oriented::

    # once-punctured torus
    switch s
    edge a s,B,0 s,A,1
    edge b s,B,1 s,A,0
    region 2 peripheral
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .errors import ContractViolation, EnumerationLimitError, TrackStructureError

SIDES = ("A", "B")
REGION_KINDS = ("disc", "annular", "peripheral")
DEFAULT_PATH_CAP = 10**7


def opposite(side: str) -> str:
    return "B" if side == "A" else "A"


class DirectedEdge(NamedTuple):
    edge: str
    forward: bool = True

    def reverse(self) -> "DirectedEdge":
        return DirectedEdge(self.edge, not self.forward)

    def __str__(self) -> str:
        return f"{self.edge}{'+' if self.forward else '-'}"

    @classmethod
    def parse(cls, token: str) -> "DirectedEdge":
        token = token.strip()
        if len(token) < 2 or token[-1] not in "+-−":
            raise ValueError(f"bad directed edge token {token!r}")
        return cls(token[:-1], token[-1] == "+")


EdgePath = tuple  # tuple[DirectedEdge, ...]


def reverse_path(path: Iterable[DirectedEdge]) -> tuple:
    return tuple(d.reverse() for d in reversed(tuple(path)))


def canonical_path(path: tuple) -> tuple:
    """Unoriented representative: the smaller of a path and its reverse."""
    return min(path, reverse_path(path))


def canonical_cycle(path: tuple) -> tuple:
    """Representative of a closed path up to rotation and reversal."""
    best = None
    for seq in (tuple(path), reverse_path(path)):
        n = len(seq)
        for k in range(n):
            rot = seq[k:] + seq[:k]
            if best is None or rot < best:
                best = rot
    return best


def format_path(path: Iterable[DirectedEdge]) -> str:
    return " ".join(str(d) for d in path)


def parse_path(text: str) -> tuple:
    return tuple(DirectedEdge.parse(tok) for tok in text.split())


@dataclass(frozen=True, order=True)
class EdgeEnd:
    switch: str
    side: str
    pos: int

    def __str__(self) -> str:
        return f"{self.switch},{self.side},{self.pos}"


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple  # (EdgeEnd, EdgeEnd): end 0 is the tail of the forward direction


@dataclass(frozen=True)
class Switch:
    id: str
    side_A: tuple  # ((edge id, end index), ...) top to bottom
    side_B: tuple

    def side(self, s: str) -> tuple:
        return self.side_A if s == "A" else self.side_B


@dataclass(frozen=True)
class RegionSpec:
    spikes: int
    kind: str


@dataclass(frozen=True)
class ComplementaryRegion:
    """One boundary walk of the complement.

    ``walk`` lists the directed edges whose left side bounds the region;
    ``cusps`` lists ``(switch, side, j)`` for each spike met, ``j`` being the
    gap between positions ``j`` and ``j + 1`` on that side.
    """

    walk: tuple
    cusps: tuple
    kind: str = "disc"

    @property
    def spike_count(self) -> int:
        return len(self.cusps)

    @property
    def is_annular_or_peripheral(self) -> bool:
        return self.kind != "disc"


@dataclass(frozen=True)
class Diagnostic:
    condition: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.condition}] {self.subject}: {self.message}"


@dataclass(frozen=True)
class TrainTrack:
    name: str
    switches: tuple
    edges: tuple
    region_specs: tuple = field(default=())

    def __post_init__(self):
        sw_ids = [s.id for s in self.switches]
        if len(set(sw_ids)) != len(sw_ids):
            raise TrackStructureError("duplicate switch id")
        e_ids = [e.id for e in self.edges]
        if len(set(e_ids)) != len(e_ids):
            raise TrackStructureError("duplicate edge id")
        known = set(sw_ids)
        slots: dict = {}
        for e in self.edges:
            if len(e.ends) != 2:
                raise TrackStructureError(f"edge {e.id} must have two ends")
            for k, end in enumerate(e.ends):
                if end.switch not in known:
                    raise TrackStructureError(
                        f"edge {e.id} end {k} refers to unknown switch {end.switch!r}")
                if end.side not in SIDES:
                    raise TrackStructureError(f"edge {e.id} end {k}: bad side {end.side!r}")
                if (end.switch, end.side, end.pos) in slots:
                    raise TrackStructureError(f"two edge ends share slot {end}")
                slots[(end.switch, end.side, end.pos)] = (e.id, k)
        for s in self.switches:
            for side in SIDES:
                listed = s.side(side)
                for pos, ref in enumerate(listed):
                    if slots.get((s.id, side, pos)) != tuple(ref):
                        raise TrackStructureError(
                            f"switch {s.id} side {side} is inconsistent with edge ends")
                n_used = sum(1 for key in slots if key[0] == s.id and key[1] == side)
                if n_used != len(listed):
                    raise TrackStructureError(
                        f"switch {s.id} side {side}: positions are not 0..{len(listed) - 1}")
        for spec in self.region_specs:
            if spec.kind not in REGION_KINDS or spec.spikes < 0:
                raise TrackStructureError(f"bad region line {spec}")

    @classmethod
    def build(cls, name: str, switch_ids: Iterable[str], edges: Iterable[Edge],
              region_specs: Iterable[RegionSpec] = ()) -> "TrainTrack":
        """Assemble switches from the edge-end records."""
        edges = tuple(edges)
        switch_ids = list(switch_ids)
        sides = {(s, side): {} for s in switch_ids for side in SIDES}
        for e in edges:
            for k, end in enumerate(e.ends):
                key = (end.switch, end.side)
                if key not in sides:
                    raise TrackStructureError(
                        f"edge {e.id} end {k} refers to unknown switch/side {key}")
                if end.pos in sides[key]:
                    raise TrackStructureError(f"two edge ends share slot {end}")
                sides[key][end.pos] = (e.id, k)
        switches = []
        for s in switch_ids:
            lists = []
            for side in SIDES:
                d = sides[(s, side)]
                if sorted(d) != list(range(len(d))):
                    raise TrackStructureError(
                        f"switch {s} side {side}: positions {sorted(d)} are not contiguous")
                lists.append(tuple(d[i] for i in range(len(d))))
            switches.append(Switch(s, lists[0], lists[1]))
        return cls(name, tuple(switches), edges, tuple(region_specs))

    # lookups

    @functools.cached_property
    def _edge_index(self) -> dict:
        return {e.id: e for e in self.edges}

    @functools.cached_property
    def _switch_index(self) -> dict:
        return {s.id: s for s in self.switches}

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise ContractViolation(f"edge {eid!r} is not in track {self.name}") from None

    def switch(self, sid: str) -> Switch:
        return self._switch_index[sid]

    @property
    def edge_ids(self) -> tuple:
        return tuple(e.id for e in self.edges)

    def directed_edges(self) -> tuple:
        return tuple(sorted(DirectedEdge(e.id, f) for e in self.edges for f in (True, False)))

    def head(self, d: DirectedEdge) -> EdgeEnd:
        return self.edge(d.edge).ends[1 if d.forward else 0]

    def tail(self, d: DirectedEdge) -> EdgeEnd:
        return self.edge(d.edge).ends[0 if d.forward else 1]

    def leaving(self, switch: str, side: str, pos: int) -> DirectedEdge:
        """Directed edge that leaves the switch through the given slot."""
        eid, k = self.switch(switch).side(side)[pos]
        return DirectedEdge(eid, k == 0)

    def legal_successors(self, d: DirectedEdge) -> tuple:
        h = self.head(d)
        other = opposite(h.side)
        n = len(self.switch(h.switch).side(other))
        return tuple(self.leaving(h.switch, other, i) for i in range(n))

    @functools.cached_property
    def _successors(self) -> dict:
        return {d: self.legal_successors(d) for d in self.directed_edges()}

    def is_legal(self, path: Iterable[DirectedEdge]) -> bool:
        path = tuple(path)
        for d in path:
            if d.edge not in self._edge_index:
                return False
        return all(b in self._successors[a] for a, b in zip(path, path[1:]))

    # ribbon structure

    def rim(self, sid: str) -> list:
        """Slots of a switch in cyclic order A0..A(m-1), B(n-1)..B0."""
        s = self.switch(sid)
        return ([("A", i) for i in range(len(s.side_A))]
                + [("B", i) for i in reversed(range(len(s.side_B)))])

    def _face_step(self, d: DirectedEdge):
        h = self.head(d)
        rim = self.rim(h.switch)
        k = rim.index((h.side, h.pos))
        side, pos = rim[k - 1]
        cusp = None
        if k >= 1 and side == h.side:
            cusp = (h.switch, side, min(pos, h.pos))
        return self.leaving(h.switch, side, pos), cusp

    @functools.cached_property
    def _raw_regions(self) -> tuple:
        seen = set()
        out = []
        for start in self.directed_edges():
            if start in seen:
                continue
            walk, cusps = [], []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d, cusp = self._face_step(d)
                if cusp is not None:
                    cusps.append(cusp)
            out.append((tuple(walk), tuple(cusps)))
        return tuple(out)

    def _region_kinds_match(self) -> bool:
        if not self.region_specs:
            return True
        have = Counter(len(c) for _, c in self._raw_regions)
        want = Counter(spec.spikes for spec in self.region_specs)
        return have == want

    @functools.cached_property
    def regions(self) -> tuple:
        raw = sorted(self._raw_regions, key=lambda wc: (len(wc[1]), wc[0]))
        kinds = ["disc"] * len(raw)
        if self.region_specs and self._region_kinds_match():
            specs = sorted(self.region_specs, key=lambda s: s.spikes)
            kinds = [s.kind for s in specs]
        return tuple(ComplementaryRegion(w, c, k) for (w, c), k in zip(raw, kinds))

    def total_cusps(self) -> int:
        return sum(max(len(s.side_A) - 1, 0) + max(len(s.side_B) - 1, 0)
                   for s in self.switches)


# asset format

def parse_track(text: str, name: str = "track") -> TrainTrack:
    switch_ids, edges, regions = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "switch" and len(parts) == 2:
                switch_ids.append(parts[1])
            elif parts[0] == "edge" and len(parts) == 4:
                ends = []
                for tok in parts[2:]:
                    sw, side, pos = tok.split(",")
                    ends.append(EdgeEnd(sw, side, int(pos)))
                edges.append(Edge(parts[1], tuple(ends)))
            elif parts[0] == "region" and len(parts) == 3:
                regions.append(RegionSpec(int(parts[1]), parts[2]))
            elif parts[0] == "name" and len(parts) == 2:
                name = parts[1]
            else:
                raise ValueError("unrecognised record")
        except ValueError as exc:
            raise TrackStructureError(f"line {lineno}: {exc}: {raw!r}") from None
    return TrainTrack.build(name, switch_ids, edges, regions)


def serialize_track(track: TrainTrack) -> str:
    lines = [f"name {track.name}"]
    lines += [f"switch {s.id}" for s in track.switches]
    lines += [f"edge {e.id} {e.ends[0]} {e.ends[1]}" for e in track.edges]
    lines += [f"region {r.spikes} {r.kind}" for r in track.region_specs]
    return "\n".join(lines) + "\n"


def load_track(path) -> TrainTrack:
    path = Path(path)
    return parse_track(path.read_text(encoding="utf-8"), name=path.stem)


# operations

def validate(track: TrainTrack) -> list:
    """Return the violated train-track conditions; empty when the track is valid."""
    diags = []
    for s in track.switches:
        for side in SIDES:
            if not s.side(side):
                diags.append(Diagnostic(
                    "(2)", f"switch {s.id}",
                    f"condition (2) violated: side {side} has no edge end"))
    if not track._region_kinds_match():
        have = sorted(len(c) for _, c in track._raw_regions)
        want = sorted(spec.spikes for spec in track.region_specs)
        diags.append(Diagnostic(
            "regions", track.name,
            f"region lines list spikes {want} but the ribbon structure gives {have}"))
    for reg in track.regions:
        subject = f"region [{format_path(reg.walk)}]"
        if reg.kind == "disc" and reg.spike_count <= 2:
            diags.append(Diagnostic(
                "(3)", subject,
                f"condition (3) violated: disc with {reg.spike_count} spikes"))
        elif reg.kind == "annular" and reg.spike_count == 0:
            diags.append(Diagnostic(
                "(3)", subject, "condition (3) violated: annulus with no spike"))
    return diags


def complementary_regions(track: TrainTrack) -> tuple:
    return track.regions


def euler_characteristic(track: TrainTrack) -> int:
    """V - E + (number of disc regions); peripheral and annular regions add 0."""
    discs = sum(1 for r in track.regions if r.kind == "disc")
    return len(track.switches) - len(track.edges) + discs


def legal_successors(track: TrainTrack, d: DirectedEdge) -> tuple:
    return track.legal_successors(d)


def enumerate_paths(track: TrainTrack, r: int, cap: int = DEFAULT_PATH_CAP) -> tuple:
    """All legal edge paths of length ``r`` in lexicographic order."""
    if r < 1:
        raise ContractViolation("path length must be >= 1")
    succ = track._successors
    out = []
    stack = [(d,) for d in reversed(track.directed_edges())]
    while stack:
        path = stack.pop()
        if len(path) == r:
            out.append(path)
            if len(out) > cap:
                raise EnumerationLimitError(
                    f"more than {cap} legal paths of length {r}", partial=len(out))
            continue
        for nxt in reversed(sorted(succ[path[-1]])):
            stack.append(path + (nxt,))
    return tuple(out)


def relation_matrix(track: TrainTrack) -> list:
    """Rows indexed by switches, columns by edges: +1 per A end, -1 per B end."""
    cols = {eid: j for j, eid in enumerate(track.edge_ids)}
    rows = []
    for s in track.switches:
        row = [0] * len(cols)
        for eid, _ in s.side_A:
            row[cols[eid]] += 1
        for eid, _ in s.side_B:
            row[cols[eid]] -= 1
        rows.append(row)
    return rows


def weight_space_dimension(track: TrainTrack) -> int:
    import sympy

    rows = relation_matrix(track)
    if not rows:
        return len(track.edges)
    return len(track.edges) - sympy.Matrix(rows).rank()


def satisfies_switch_relations(track: TrainTrack, w: Mapping) -> bool:
    for s in track.switches:
        a = sum(Fraction(w.get(eid, 0)) for eid, _ in s.side_A)
        b = sum(Fraction(w.get(eid, 0)) for eid, _ in s.side_B)
        if a != b:
            return False
    return True


def _check_integral_weights(track: TrainTrack, w: Mapping) -> dict:
    out = {}
    for eid in track.edge_ids:
        val = Fraction(w.get(eid, 0))
        if val.denominator != 1 or val < 0:
            raise ContractViolation(f"weight on {eid} must be a nonnegative integer, got {val}")
        out[eid] = int(val)
    unknown = set(w) - set(out)
    if unknown:
        raise ContractViolation(f"weights given for unknown edges {sorted(unknown)}")
    if not satisfies_switch_relations(track, out):
        raise ContractViolation("weights violate the switch relations")
    return out


def strand_order(end_index: int, side: str, n: int) -> range:
    """Strand indices of one edge end, top to bottom along the switch.

    Strands are numbered left to right with respect to the forward direction
    of the edge.
    """
    ascending = (end_index == 1) == (side == "A")
    return range(n) if ascending else range(n - 1, -1, -1)


def strand_matching(track: TrainTrack, w: Mapping) -> dict:
    """Outermost-to-outermost pairing of strand ends at every switch.

    Keys and values are ``(edge, end index, strand)``.
    """
    link = {}
    for s in track.switches:
        stacks = []
        for side in SIDES:
            seq = []
            for eid, k in s.side(side):
                seq += [(eid, k, i) for i in strand_order(k, side, w[eid])]
            stacks.append(seq)
        if len(stacks[0]) != len(stacks[1]):
            raise ContractViolation(f"switch relation fails at {s.id}")
        for x, y in zip(*stacks):
            link[x] = y
            link[y] = x
    return link


def multicurve_from_weights(track: TrainTrack, w: Mapping) -> list:
    """Closed loops of the multicurve carried with integer weights ``w``.

    Each loop is returned in canonical cyclic form; parallel copies appear
    once per copy.
    """
    w = _check_integral_weights(track, w)
    link = strand_matching(track, w)
    seen = set()
    loops = []
    for eid in track.edge_ids:
        for i in range(w[eid]):
            if (eid, i) in seen:
                continue
            loop = []
            cur, fwd, strand = eid, True, i
            while True:
                seen.add((cur, strand))
                loop.append(DirectedEdge(cur, fwd))
                nxt, k, j = link[(cur, 1 if fwd else 0, strand)]
                cur, fwd, strand = nxt, k == 0, j
                if (cur, fwd, strand) == (eid, True, i):
                    break
            loops.append(canonical_cycle(tuple(loop)))
    return sorted(loops)


def measure(track: TrainTrack, loops: Iterable[tuple]) -> dict:
    """Count strands per edge of a family of closed paths."""
    w = {eid: 0 for eid in track.edge_ids}
    for loop in loops:
        for d in loop:
            w[d.edge] += 1
    return w
