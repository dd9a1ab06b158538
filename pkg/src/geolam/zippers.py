"""r-zipper families on a fattened train track.

Fattening model
---------------
Each switch becomes a tie.  Its side-A cusps sit at tie heights
``(j+1)/m_A`` and its side-B cusps at ``(k+1)/m_B`` (ties broken with the
side-A cusp on top); between consecutive cusps lies a *channel* joining one
A-end to one B-end.  Strands crossing the switch pass through channels, and a
zipper rooted at a cusp leaves it through the end shared by the two channels
around that cusp.

A family is stored as per-edge transverse orders of segments, each segment
being one edge crossing of one arc.  Two families are isotopic through
tie-preserving isotopies exactly when these orders agree, so the stored form
is the normal form used for deduplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import ContractViolation, EnumerationLimitError
from .lamination import Lamination, PeriodicLamination, RealizedPathSet
from .track import (
    DirectedEdge,
    TrainTrack,
    canonical_cycle,
    opposite,
    reverse_path,
    strand_matching,
    strand_order,
    validate,
)

DEFAULT_ZIPPER_CAP = 2_000_000


class Cusp(NamedTuple):
    switch: str
    side: str
    gap: int  # between positions gap and gap + 1 on that side

    def __str__(self) -> str:
        return f"{self.switch}:{self.side}{self.gap}"


class Fattening:
    """Channel structure of every switch of a valid track."""

    def __init__(self, track: TrainTrack):
        diags = [d for d in validate(track) if d.condition == "(2)"]
        if diags:
            raise ContractViolation(f"cannot fatten {track.name}: {diags[0]}")
        self.track = track
        self.slots: dict = {}
        self.channel_idx: dict = {}
        self.cusp_tie: dict = {}
        cusps = []
        for s in track.switches:
            m_a, m_b = len(s.side_A), len(s.side_B)
            marks = ([(Fraction(j + 1, m_a), 0, Cusp(s.id, "A", j)) for j in range(m_a - 1)]
                     + [(Fraction(k + 1, m_b), 1, Cusp(s.id, "B", k)) for k in range(m_b - 1)])
            marks.sort(key=lambda t: (t[0], t[1]))
            a = b = 0
            slots = [("ch", 0, 0)]
            for _, _, c in marks:
                slots.append(("cusp", c))
                if c.side == "A":
                    a += 1
                else:
                    b += 1
                slots.append(("ch", a, b))
            self.slots[s.id] = slots
            for t, item in enumerate(slots):
                if item[0] == "ch":
                    self.channel_idx[(s.id, item[1], item[2])] = t
                else:
                    self.cusp_tie[item[1]] = t
                    cusps.append(item[1])
        order = {s.id: i for i, s in enumerate(track.switches)}
        self.cusps = tuple(sorted(cusps, key=lambda c: (order[c.switch], c.side, c.gap)))
        self.cusp_id = {c: i for i, c in enumerate(self.cusps)}

    def channel(self, sid: str, a: int, b: int):
        return self.channel_idx.get((sid, a, b))

    def root_end(self, cusp: Cusp) -> tuple:
        """(side, position) of the end a zipper leaves through from ``cusp``."""
        t = self.cusp_tie[cusp]
        _, a, b = self.slots[cusp.switch][t - 1]
        return ("B", b) if cusp.side == "A" else ("A", a)

    def root_edge(self, cusp: Cusp) -> tuple:
        """(directed edge leaving the cusp, index of the edge end at the cusp)."""
        side, pos = self.root_end(cusp)
        eid, k = self.track.switch(cusp.switch).side(side)[pos]
        return DirectedEdge(eid, k == 0), k

    def cusp_at_end(self, sid: str, side: str, pos: int) -> list:
        """Cusps whose zipper leaves through the given end."""
        return [c for c in self.cusps if c.switch == sid and self.root_end(c) == (side, pos)]

    def turns(self) -> set:
        """Directed-edge pairs allowed through some channel."""
        out = set()
        for (sid, a, b) in self.channel_idx:
            s = self.track.switch(sid)
            ea, ka = s.side_A[a]
            eb, kb = s.side_B[b]
            into_a = DirectedEdge(ea, ka == 1)  # arrives through the A-end
            out_b = DirectedEdge(eb, kb == 0)
            out.add((into_a, out_b))
            out.add((out_b.reverse(), into_a.reverse()))
        return out


def cusps(track: TrainTrack) -> tuple:
    return Fattening(track).cusps


@dataclass(frozen=True, order=True)
class ZipperArc:
    root: int
    kind: str  # "plain" or "switch-connection"
    route: tuple  # directed edges crossed, starting at the root cusp
    end: int | None = None  # terminal cusp of a switch connection

    @property
    def crossings(self) -> int:
        return len(self.route)


@dataclass(frozen=True, order=True)
class ZipperFamily:
    """Normal form: arcs plus, per edge, the left-to-right list of (root, step)."""

    arcs: tuple
    layout: tuple  # aligned with track.edge_ids

    def crossing_counts(self, track: TrainTrack) -> dict:
        return {eid: len(segs) for eid, segs in zip(track.edge_ids, self.layout)}

    def arc_for(self, cusp_id: int) -> ZipperArc:
        for arc in self.arcs:
            if arc.root == cusp_id or arc.end == cusp_id:
                return arc
        raise KeyError(cusp_id)

    @property
    def has_switch_connection(self) -> bool:
        return any(a.kind == "switch-connection" for a in self.arcs)


# enumeration

class _State:
    """Mutable family under construction, with per-switch consistency checks."""

    def __init__(self, fat: Fattening):
        self.fat = fat
        self.track = fat.track
        self.layout = {eid: [] for eid in self.track.edge_ids}
        self.seg_info = []  # seg -> (edge id, forward, root, step)
        self.ends = {}  # (seg, end index) -> ("pass", (seg, k)) | ("root", cusp) | ("term",) | ("open",)
        self.blocked = {}  # switch -> set of blocked channel tie indices

    def add_segment(self, d: DirectedEdge, index: int, root: int, step: int) -> int:
        seg = len(self.seg_info)
        self.seg_info.append((d.edge, d.forward, root, step))
        self.layout[d.edge].insert(index, seg)
        self.ends[(seg, 0)] = ("open",)
        self.ends[(seg, 1)] = ("open",)
        return seg

    def pop_segment(self, seg: int) -> None:
        assert seg == len(self.seg_info) - 1
        eid = self.seg_info[seg][0]
        self.layout[eid].remove(seg)
        del self.ends[(seg, 0)], self.ends[(seg, 1)]
        self.seg_info.pop()

    def side_sequence(self, sid: str, side: str) -> list:
        seq = []
        for pos, (eid, k) in enumerate(self.track.switch(sid).side(side)):
            segs = self.layout[eid]
            for i in strand_order(k, side, len(segs)):
                seq.append((pos, segs[i], k))
        return seq

    def switch_ok(self, sid: str) -> bool:
        fat = self.fat
        blocked = self.blocked.get(sid, ())
        seqs = {side: self.side_sequence(sid, side) for side in ("A", "B")}
        passes = {side: [(pos, seg, k, self.ends[(seg, k)][1]) for pos, seg, k in seq
                         if self.ends[(seg, k)][0] == "pass"]
                  for side, seq in seqs.items()}
        pa, pb = passes["A"], passes["B"]
        if len(pa) != len(pb):
            return False
        ch_of = {}
        prev = -1
        for (posa, sega, ka, partner), (posb, segb, kb, _) in zip(pa, pb):
            if partner != (segb, kb):
                return False
            t = fat.channel(sid, posa, posb)
            if t is None or t < prev or t in blocked:
                return False
            prev = t
            ch_of[(sega, ka)] = t
            ch_of[(segb, kb)] = t
        for seq in seqs.values():
            last = -1
            for pos, seg, k in seq:
                info = self.ends[(seg, k)]
                if info[0] == "pass":
                    t = ch_of[(seg, k)]
                elif info[0] == "root":
                    t = fat.cusp_tie[fat.cusps[info[1]]]
                else:
                    continue
                if t < last:
                    return False
                last = t
        return True

    def snapshot(self, arcs: list) -> ZipperFamily:
        layout = tuple(tuple((self.seg_info[s][2], self.seg_info[s][3]) for s in self.layout[eid])
                       for eid in self.track.edge_ids)
        return ZipperFamily(tuple(sorted(arcs)), layout)


def _zero_length_partners(fat: Fattening, c: int) -> list:
    """Cusps joined to ``c`` by a connection that crosses no edge."""
    cusp = fat.cusps[c]
    t = fat.cusp_tie[cusp]
    slots = fat.slots[cusp.switch]
    out = []
    for u in (t - 2, t + 2):
        if 0 <= u < len(slots) and slots[u][0] == "cusp" and slots[u][1].side != cusp.side:
            out.append((fat.cusp_id[slots[u][1]], (t + u) // 2))
    return out


class _Enumerator:
    def __init__(self, fat: Fattening, r: int, cap: int):
        self.fat = fat
        self.track = fat.track
        self.r = r
        self.cap = cap
        self.state = _State(fat)
        self.covered = [False] * len(fat.cusps)
        self.arcs: list = []
        self.found: set = set()
        self.produced = 0

    def run(self) -> set:
        self._next_cusp()
        return self.found

    def _record(self):
        fam = self.state.snapshot(self.arcs)
        self.produced += 1
        self.found.add(fam)
        if len(self.found) > self.cap:
            raise EnumerationLimitError(
                f"more than {self.cap} zipper families at r={self.r}", partial=len(self.found))

    def _next_cusp(self):
        try:
            c = self.covered.index(False)
        except ValueError:
            self._record()
            return
        fat, st = self.fat, self.state
        self.covered[c] = True
        # connections crossing no edge
        for c2, t in _zero_length_partners(fat, c):
            if self.covered[c2]:
                continue
            sid = fat.cusps[c].switch
            st.blocked.setdefault(sid, set()).add(t)
            if st.switch_ok(sid):
                self.covered[c2] = True
                self.arcs.append(ZipperArc(c, "switch-connection", (), c2))
                self._next_cusp()
                self.arcs.pop()
                self.covered[c2] = False
            st.blocked[sid].discard(t)
        d, k = fat.root_edge(fat.cusps[c])
        sid = fat.cusps[c].switch
        for index in range(len(st.layout[d.edge]) + 1):
            seg = st.add_segment(d, index, c, 0)
            st.ends[(seg, k)] = ("root", c)
            if st.switch_ok(sid):
                self._extend(c, seg, (d,))
            st.pop_segment(seg)
        self.covered[c] = False

    def _extend(self, c: int, seg: int, route: tuple):
        fat, st, track = self.fat, self.state, self.track
        d = route[-1]
        k_head = 1 if d.forward else 0
        head = track.head(d)
        steps = len(route)
        if steps == self.r:
            st.ends[(seg, k_head)] = ("term",)
            self.arcs.append(ZipperArc(c, "plain", route))
            self._next_cusp()
            self.arcs.pop()
            st.ends[(seg, k_head)] = ("open",)
        for c2 in fat.cusp_at_end(head.switch, head.side, head.pos):
            c2 = fat.cusp_id[c2]
            if self.covered[c2]:
                continue
            st.ends[(seg, k_head)] = ("root", c2)
            if st.switch_ok(head.switch):
                self.covered[c2] = True
                self.arcs.append(ZipperArc(c, "switch-connection", route, c2))
                self._next_cusp()
                self.arcs.pop()
                self.covered[c2] = False
            st.ends[(seg, k_head)] = ("open",)
        if steps >= 2 * self.r:
            return
        for nxt in track.legal_successors(d):
            k_tail = 0 if nxt.forward else 1
            for index in range(len(st.layout[nxt.edge]) + 1):
                seg2 = st.add_segment(nxt, index, c, steps)
                st.ends[(seg, k_head)] = ("pass", (seg2, k_tail))
                st.ends[(seg2, k_tail)] = ("pass", (seg, k_head))
                if st.switch_ok(head.switch):
                    self._extend(c, seg2, route + (nxt,))
                st.ends[(seg, k_head)] = ("open",)
                st.pop_segment(seg2)


def enumerate_zipper_families(track: TrainTrack, r: int, cap: int = DEFAULT_ZIPPER_CAP,
                              fat: Fattening | None = None) -> tuple:
    """All r-zipper families up to tie-preserving isotopy, in normal-form order."""
    if r < 1:
        raise ContractViolation("r must be >= 1")
    fat = fat or Fattening(track)
    found = _Enumerator(fat, r, cap).run()
    return tuple(sorted(found))


def count_zipper_families(track: TrainTrack, r: int, cap: int = DEFAULT_ZIPPER_CAP) -> int:
    return len(enumerate_zipper_families(track, r, cap))


def bound_z_r(p: int, q: int, r: int) -> int:
    """2^p p^(p+q) r^(p+q) for p cusps and q edges."""
    return 2**p * p ** (p + q) * r ** (p + q)


def better_exponent(track: TrainTrack) -> int:
    """9|chi| - 1."""
    from .track import euler_characteristic

    return 9 * abs(euler_characteristic(track)) - 1


@dataclass
class ZipperCountRow:
    r: int
    count: int | None  # None when the cap stopped enumeration
    partial: int | None
    bound: int
    better: float | None  # c r^(9|chi|-1) with c fitted at the first completed r
    census: int | None = None


def zipper_count_table(track: TrainTrack, r_values: Iterable[int], cap: int = DEFAULT_ZIPPER_CAP,
                       census: dict | None = None) -> list:
    """#Z_r against both growth bounds; stops enumerating after the first cap hit."""
    fat = Fattening(track)
    p, q = len(fat.cusps), len(track.edge_ids)
    k = better_exponent(track)
    rows = []
    c_fit = None
    capped = False
    for r in r_values:
        count = partial = None
        if not capped:
            try:
                count = len(enumerate_zipper_families(track, r, cap, fat))
            except EnumerationLimitError as exc:
                partial, capped = exc.partial, True
        if count is not None and c_fit is None:
            c_fit = Fraction(count, r**k)
        better = float(c_fit * r**k) if c_fit is not None else None
        rows.append(ZipperCountRow(r, count, partial, bound_z_r(p, q, r), better,
                                   (census or {}).get(r)))
    return rows


def format_family(track: TrainTrack, z: ZipperFamily) -> str:
    """Text form: one ``arc`` line per arc, one ``edge`` line per edge."""
    lines = []
    for arc in z.arcs:
        route = " ".join(map(str, arc.route)) or "-"
        end = "-" if arc.end is None else str(arc.end)
        lines.append(f"arc {arc.root} {arc.kind} {end} {route}")
    for eid, segs in zip(track.edge_ids, z.layout):
        lines.append(f"edge {eid} " + " ".join(f"{root}.{step}" for root, step in segs))
    return "\n".join(lines) + "\n"


def parse_family(track: TrainTrack, text: str) -> ZipperFamily:
    arcs, layout = [], {}
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "arc":
            root, kind, end = int(parts[1]), parts[2], parts[3]
            route = () if parts[4:] == ["-"] else tuple(DirectedEdge.parse(t) for t in parts[4:])
            arcs.append(ZipperArc(root, kind, route, None if end == "-" else int(end)))
        elif parts[0] == "edge":
            layout[parts[1]] = tuple(tuple(map(int, tok.split("."))) for tok in parts[2:])
        else:
            raise ValueError(f"unknown zipper record {parts[0]!r}")
    return ZipperFamily(tuple(sorted(arcs)), tuple(layout.get(e, ()) for e in track.edge_ids))


# the map from zipper families to edge-path families

@dataclass
class PathFamilyResult:
    paths: RealizedPathSet
    flagged: list = field(default_factory=list)  # (edge, gap, reason)


class _Layout:
    """Read-only view of a family for path growth."""

    def __init__(self, fat: Fattening, z: ZipperFamily):
        self.fat = fat
        self.track = track = fat.track
        self.layout = {eid: list(segs) for eid, segs in zip(track.edge_ids, z.layout)}
        self.ends = {}
        self.blocked = {}
        for arc in z.arcs:
            if not arc.route:
                ca, cb = fat.cusps[arc.root], fat.cusps[arc.end]
                ta, tb = sorted((fat.cusp_tie[ca], fat.cusp_tie[cb]))
                self.blocked.setdefault(ca.switch, set()).update(range(ta + 1, tb))
                continue
            n = len(arc.route)
            ends = [(0, 1) if d.forward else (1, 0) for d in arc.route]  # (tail, head)
            for step in range(n):
                key = (arc.root, step)
                tail, head = ends[step]
                if step == 0:
                    self.ends[(key, tail)] = ("root", arc.root)
                else:
                    self.ends[(key, tail)] = ("pass", ((arc.root, step - 1), ends[step - 1][1]))
                if step == n - 1:
                    self.ends[(key, head)] = ("term",) if arc.kind == "plain" else ("root", arc.end)
                else:
                    self.ends[(key, head)] = ("pass", ((arc.root, step + 1), ends[step + 1][0]))
        self.channel_of = {}
        for s in track.switches:
            self._channels(s.id)

    def side_sequence(self, sid: str, side: str) -> list:
        seq = []
        for pos, (eid, k) in enumerate(self.track.switch(sid).side(side)):
            segs = self.layout[eid]
            for i in strand_order(k, side, len(segs)):
                seq.append((pos, segs[i], k))
        return seq

    def _channels(self, sid: str):
        pa = [(pos, key, k) for pos, key, k in self.side_sequence(sid, "A")
              if self.ends[(key, k)][0] == "pass"]
        pb = [(pos, key, k) for pos, key, k in self.side_sequence(sid, "B")
              if self.ends[(key, k)][0] == "pass"]
        for (posa, ka_key, ka), (posb, kb_key, kb) in zip(pa, pb):
            t = self.fat.channel(sid, posa, posb)
            self.channel_of[(ka_key, ka)] = t
            self.channel_of[(kb_key, kb)] = t

    def tie_value(self, key, k):
        info = self.ends[(key, k)]
        if info[0] == "pass":
            return self.channel_of[(key, k)]
        if info[0] == "root":
            return self.fat.cusp_tie[self.fat.cusps[info[1]]]
        return None


def _tb_position(k: int, side: str, n: int, gap: int) -> int:
    """Number of segments above a point lying in left-to-right gap ``gap``."""
    ascending = (k == 1) == (side == "A")
    return gap if ascending else n - gap


def _gap_from_tb(k: int, side: str, n: int, tb: int) -> int:
    ascending = (k == 1) == (side == "A")
    return tb if ascending else n - tb


def _step(view: _Layout, d: DirectedEdge, gap: int):
    """Continue a carried arc in gap ``gap`` of ``d`` through the next switch.

    Returns a list of possible (next directed edge, gap) pairs; more than one
    entry only when the arc may pass on either side of a terminal point.
    """
    track, fat = view.track, view.fat
    k = 1 if d.forward else 0
    head = track.head(d)
    sid, side, pos = head.switch, head.side, head.pos
    segs = view.layout[d.edge]
    tb = _tb_position(k, side, len(segs), gap)
    ordered = [segs[i] for i in strand_order(k, side, len(segs))]
    above = [view.tie_value(s, k) for s in ordered[:tb]]
    below = [view.tie_value(s, k) for s in ordered[tb:]]
    above = [t for t in above if t is not None]
    below = [t for t in below if t is not None]
    lo = max(above) if above else -1
    hi = min(below) if below else 10**9
    blocked = view.blocked.get(sid, set())
    chans = []
    for (s2, a, b), t in fat.channel_idx.items():
        if s2 != sid or (a if side == "A" else b) != pos:
            continue
        if lo <= t <= hi and t not in blocked:
            chans.append((t, a, b))
    if len(chans) != 1:
        return [], ("blocked" if not chans else "ambiguous")
    t, a, b = chans[0]
    # passes in the same channel that lie above the point, by identity
    above_same = {view.ends[(s, k)][1] for s in ordered[:tb]
                  if view.ends[(s, k)][0] == "pass" and view.channel_of[(s, k)] == t}
    other = opposite(side)
    opos = b if side == "A" else a
    eid2, k2 = track.switch(sid).side(other)[opos]
    segs2 = view.layout[eid2]
    ordered2 = [segs2[i] for i in strand_order(k2, other, len(segs2))]
    must_above = -1
    must_below = len(ordered2)
    for i, s in enumerate(ordered2):
        tv = view.tie_value(s, k2)
        if tv is None:
            continue
        if tv < t or (tv == t and (s, k2) in above_same):
            must_above = max(must_above, i)
        else:
            must_below = min(must_below, i)
    if must_above >= must_below:
        return [], "inconsistent"
    nxt = DirectedEdge(eid2, k2 == 0)
    return [(nxt, _gap_from_tb(k2, other, len(segs2), tbp))
            for tbp in range(must_above + 1, must_below + 1)], None


def _grow(view: _Layout, d: DirectedEdge, gap: int, steps: int):
    """All edge paths of ``steps`` further edges from a gap; (paths, reason)."""
    if steps == 0:
        return {()}, None
    options, reason = _step(view, d, gap)
    if not options:
        return set(), reason
    out = set()
    for nxt, g2 in options:
        tails, why = _grow(view, nxt, g2, steps - 1)
        if not tails:
            return set(), why
        out |= {(nxt,) + t for t in tails}
    return out, None


def pathset_from_zippers(track: TrainTrack, z: ZipperFamily, r: int,
                         fat: Fattening | None = None) -> PathFamilyResult:
    """Edge paths of length 2r+1 through every gap of every edge, avoiding z."""
    fat = fat or Fattening(track)
    view = _Layout(fat, z)
    paths = set()
    flagged = []
    for eid in track.edge_ids:
        n = len(view.layout[eid])
        for gap in range(n + 1):
            fwd, why_f = _grow(view, DirectedEdge(eid, True), gap, r)
            bwd, why_b = _grow(view, DirectedEdge(eid, False), gap, r)
            if not fwd or not bwd:
                flagged.append((eid, gap, why_f or why_b))
                continue
            got = {reverse_path(b) + (DirectedEdge(eid, True),) + f for b in bwd for f in fwd}
            if len(got) > 1:
                flagged.append((eid, gap, "ambiguous"))
            paths |= got
    return PathFamilyResult(RealizedPathSet.from_paths(2 * r + 1, paths), flagged)


# zippers from a periodic lamination

class _Strands:
    """Strands of an integer-weighted multicurve in the fattened track."""

    def __init__(self, fat: Fattening, weights: dict):
        self.fat = fat
        track = fat.track
        self.track = track
        self.weights = weights
        link = strand_matching(track, weights)
        self.next = {}  # (edge, end index, strand) -> partner across the switch
        self.passes = {}  # switch -> list of (channel tie, A item, B item), top to bottom
        for s in track.switches:
            seqs = {}
            for side in ("A", "B"):
                seq = []
                for pos, (eid, k) in enumerate(s.side(side)):
                    seq += [(pos, (eid, k, i)) for i in strand_order(k, side, weights[eid])]
                seqs[side] = seq
            rows = []
            for (pa, xa), (pb, xb) in zip(seqs["A"], seqs["B"]):
                t = fat.channel(s.id, pa, pb)
                if t is None:
                    raise ContractViolation(
                        f"multicurve turns {xa[0]}->{xb[0]} at {s.id} outside the fattening")
                rows.append((t, xa, xb))
            if [row[0] for row in rows] != sorted(row[0] for row in rows):
                raise ContractViolation(f"multicurve is not carried by the fattening at {s.id}")
            self.passes[s.id] = rows
        self.next = link

    def walk(self, start_item, steps: int) -> list:
        """Follow a strand leaving a switch through ``start_item`` for ``steps`` edges.

        Returns [(directed edge, strand index)].
        """
        eid, k, i = start_item
        out = []
        for _ in range(steps):
            d = DirectedEdge(eid, k == 0)
            out.append((d, i))
            k_head = 1 - k
            eid, k, i = self.next[(eid, k_head, i)]
        return out

    def exit_item(self, d: DirectedEdge, i: int):
        """Strand end leaving the head switch of ``d`` after strand ``i``."""
        k_head = 1 if d.forward else 0
        return self.next[(d.edge, k_head, i)]


def _weights_of(lam: Lamination) -> dict:
    if not isinstance(lam, PeriodicLamination):
        from .torus import SlopeLamination

        if isinstance(lam, SlopeLamination) and lam.slope.is_rational:
            return {"a": lam.slope.q, "b": lam.slope.p}
        raise ContractViolation("zippers are built from periodic or rational slope laminations")
    w = {eid: 0 for eid in lam.track.edge_ids}
    for loop in lam.loops:
        for d in loop:
            w[d.edge] += 1
    return w


def zippers_from_lamination(track: TrainTrack, lam: Lamination, r: int,
                            fat: Fattening | None = None) -> ZipperFamily:
    """The r-zipper family of a closed-leaf lamination crossing every edge.

    Each cusp's zipper runs between the two strands closest to it; it stops
    after r edges if those strands share their next 2r+1 edges and otherwise
    runs to the cusp where they part.
    """
    fat = fat or Fattening(track)
    w = _weights_of(lam)
    if any(v == 0 for v in w.values()):
        raise ContractViolation("the lamination must cross every edge")
    strands = _Strands(fat, w)
    arcs = {}
    placed = {}  # edge -> list of (strand gap, root, step)
    for c_id, cusp in enumerate(fat.cusps):
        if c_id in arcs:
            continue
        t_c = fat.cusp_tie[cusp]
        rows = strands.passes[cusp.switch]
        above = [row for row in rows if row[0] < t_c]
        below = [row for row in rows if row[0] > t_c]
        if not above or not below:
            raise ContractViolation(f"no strand on one side of cusp {cusp}")
        col = 2 if cusp.side == "A" else 1  # leave toward the opposite side
        l_item, l2_item = above[-1][col], below[0][col]
        path1 = strands.walk(l_item, 2 * r + 1)
        path2 = strands.walk(l2_item, 2 * r + 1)
        common = 0
        while common < 2 * r + 1 and path1[common][0] == path2[common][0]:
            common += 1
        if common == 2 * r + 1:
            length, end = r, None
        else:
            length = common
            if common == 0:
                x1, x2 = l_item, l2_item
                sid = cusp.switch
            else:
                d_last = path1[common - 1][0]
                x1 = strands.exit_item(d_last, path1[common - 1][1])
                x2 = strands.exit_item(path2[common - 1][0], path2[common - 1][1])
                sid = track.head(d_last).switch
            s = track.switch(sid)
            e1, e2 = x1[:2], x2[:2]
            side = next(sd for sd in ("A", "B") if e1 in s.side(sd))
            p1, p2 = sorted((s.side(side).index(e1), s.side(side).index(e2)))
            if p2 != p1 + 1:
                raise ContractViolation(f"closest strands of {cusp} part around an empty edge")
            end = fat.cusp_id[Cusp(sid, side, p1)]
        route = tuple(path1[i][0] for i in range(length))
        for step in range(length):
            (d, i1), (_, i2) = path1[step], path2[step]
            if abs(i1 - i2) != 1:
                raise ContractViolation("closest strands are not adjacent inside an edge")
            placed.setdefault(d.edge, []).append((max(i1, i2), c_id, step))
        if end is None:
            arcs[c_id] = ZipperArc(c_id, "plain", route)
        else:
            if end == c_id:
                raise ContractViolation(f"zipper of {cusp} returns to its own cusp")
            arc = ZipperArc(c_id, "switch-connection", route, end)
            arcs[c_id] = arcs[end] = arc
    # relabel connections from their smaller cusp so the form matches enumeration
    final = []
    relabel = {}
    for arc in set(arcs.values()):
        if arc.kind == "switch-connection" and arc.end < arc.root:
            new = ZipperArc(arc.end, arc.kind, reverse_path(arc.route), arc.root)
            n = len(arc.route)
            for step in range(n):
                relabel[(arc.root, step)] = (arc.end, n - 1 - step)
            final.append(new)
        else:
            final.append(arc)
    layout = []
    for eid in track.edge_ids:
        segs = sorted(placed.get(eid, []))
        gaps = [g for g, _, _ in segs]
        if len(set(gaps)) != len(gaps):
            raise ContractViolation(f"two zippers share a strand gap in edge {eid}")
        layout.append(tuple(relabel.get((root, step), (root, step)) for _, root, step in segs))
    return ZipperFamily(tuple(sorted(final)), tuple(layout))


# census

@dataclass
class PathFamilyCensus:
    r: int
    keys: tuple  # distinct language keys at length 2r+1, in first-seen order
    representatives: tuple  # one lamination per key
    provenance: str = "lamination-sample lower bound"

    @property
    def size(self) -> int:
        return len(self.keys)

    def families(self) -> list:
        return [lam.realized_paths(2 * self.r + 1) for lam in self.representatives]


def census_realized_families(track: TrainTrack, laminations: Sequence[Lamination], r: int,
                             jobs: int = 1) -> PathFamilyCensus:
    """Distinct realized families of length 2r+1 over a sample."""
    if r < 0:
        raise ContractViolation("r must be >= 0")
    n = 2 * r + 1
    for lam in laminations:
        if lam.track != track:
            raise ContractViolation("sample lamination lives on another track")

    def key(lam):
        return (type(lam).__name__, lam.language_key(n))

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            keys = list(pool.map(key, laminations))
    else:
        keys = [key(lam) for lam in laminations]
    # keys of different backends are not comparable; fall back to path sets then
    if len({k[0] for k in keys}) > 1:
        keys = [lam.realized_paths(n).paths for lam in laminations]
    seen = {}
    for k, lam in zip(keys, laminations):
        seen.setdefault(k, lam)
    return PathFamilyCensus(r, tuple(seen), tuple(seen.values()))
