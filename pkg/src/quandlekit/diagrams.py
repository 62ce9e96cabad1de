"""Combinatorial diagrams of links, spatial graphs and handlebody-links.

An arc runs from its producer to its consumer.  Producers are a crossing's
under_out slot or a vertex out-end; consumers are an under_in slot or a
vertex in-end.  An arc with neither is a free loop (it may still pass over
crossings).  Vertex ends are stored in cyclic order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tables import AxiomReport, ParseError, ReportBuilder

IN, OUT = "in", "out"


@dataclass(frozen=True)
class Crossing:
    over: int
    under_in: int
    under_out: int
    sign: int  # +1 or -1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("crossing sign must be +1 or -1")


@dataclass(frozen=True)
class Vertex:
    ends: tuple[tuple[int, str], ...]  # (arc, "in"|"out"), cyclic order

    def __post_init__(self) -> None:
        ends = tuple((int(a), d) for a, d in self.ends)
        if len(ends) < 3:
            raise ValueError("vertex valence must be at least 3")
        for _, d in ends:
            if d not in (IN, OUT):
                raise ValueError(f"bad end direction {d!r}")
        object.__setattr__(self, "ends", ends)

    @property
    def valence(self) -> int:
        return len(self.ends)


@dataclass(frozen=True)
class Diagram:
    arc_count: int
    crossings: tuple[Crossing, ...]
    vertices: tuple[Vertex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "vertices", tuple(self.vertices))


@dataclass(frozen=True)
class Edge:
    """A maximal arc chain through undercrossings.  Endpoints are
    (vertex index, end position) pairs; a closed loop has none."""

    arcs: tuple[int, ...]
    endpoints: tuple[tuple[int, int], ...]


def validate_diagram(d: Diagram) -> AxiomReport:
    """Check index ranges, valences and the one-producer/one-consumer (or
    free loop) rule for every arc."""
    rb = ReportBuilder()
    n = d.arc_count
    producers = [0] * n
    consumers = [0] * n

    def check_range(a: int, site: int) -> bool:
        if not 0 <= a < n:
            rb.hit("arc-range", (a, site))
            return False
        return True

    for ci, c in enumerate(d.crossings):
        for a in (c.over, c.under_in, c.under_out):
            check_range(a, ci)
        if 0 <= c.under_in < n:
            consumers[c.under_in] += 1
        if 0 <= c.under_out < n:
            producers[c.under_out] += 1
    for vi, v in enumerate(d.vertices):
        if v.valence < 3:
            rb.hit("valence", (vi,))
        for a, direction in v.ends:
            if check_range(a, vi):
                if direction == IN:
                    consumers[a] += 1
                else:
                    producers[a] += 1
    for a in range(n):
        if producers[a] > 1 or (producers[a] == 1 and consumers[a] == 0):
            rb.hit("arc-producers", (a,))
        if consumers[a] > 1 or (consumers[a] == 1 and producers[a] == 0):
            rb.hit("arc-consumers", (a,))
    return rb.report()


# ---------------------------------------------------------------------------
# text format


def parse_diagram(text: str) -> Diagram:
    arc_count = None
    crossings: list[Crossing] = []
    vertices: list[Vertex] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        kind = toks[0]
        if arc_count is None:
            if kind != "arcs" or len(toks) != 2:
                raise ParseError("expected header 'arcs <N>'", lineno, 1)
            try:
                arc_count = int(toks[1])
            except ValueError:
                raise ParseError(f"bad arc count {toks[1]!r}", lineno, line.find(toks[1]) + 1)
            if arc_count < 0:
                raise ParseError("arc count must be non-negative", lineno)
            continue

        def arc_of(tok: str, field: str) -> int:
            try:
                a = int(tok)
            except ValueError:
                raise ParseError(f"bad arc index {tok!r} for {field}", lineno, line.find(tok) + 1)
            if not 0 <= a < arc_count:
                raise ParseError(f"arc index {a} out of range", lineno, line.find(tok) + 1)
            return a

        if kind == "crossing":
            fields = {}
            for tok in toks[1:]:
                if "=" not in tok:
                    raise ParseError(f"bad crossing field {tok!r}", lineno, line.find(tok) + 1)
                key, val = tok.split("=", 1)
                fields[key] = val
            missing = {"over", "under_in", "under_out", "sign"} - set(fields)
            if missing:
                raise ParseError(f"crossing missing fields {sorted(missing)}", lineno, 1)
            if fields["sign"] not in ("+", "-"):
                raise ParseError(
                    f"bad sign {fields['sign']!r}", lineno, line.find("sign=") + 6
                )
            crossings.append(
                Crossing(
                    over=arc_of(fields["over"], "over"),
                    under_in=arc_of(fields["under_in"], "under_in"),
                    under_out=arc_of(fields["under_out"], "under_out"),
                    sign=1 if fields["sign"] == "+" else -1,
                )
            )
        elif kind == "vertex":
            if len(toks) != 2 or not toks[1].startswith("ends="):
                raise ParseError("expected 'vertex ends=<a>:<in|out>,...'", lineno, 1)
            ends = []
            for piece in toks[1][5:].split(","):
                if ":" not in piece:
                    raise ParseError(f"bad end {piece!r}", lineno, line.find(piece) + 1)
                a, direction = piece.split(":", 1)
                if direction not in (IN, OUT):
                    raise ParseError(
                        f"bad direction {direction!r}", lineno, line.find(piece) + 1
                    )
                ends.append((arc_of(a, "vertex end"), direction))
            if len(ends) < 3:
                raise ParseError("vertex valence must be at least 3", lineno, 1)
            vertices.append(Vertex(tuple(ends)))
        elif kind == "loop":
            # optional annotation for free loops; free-loopness is structural
            if len(toks) != 2:
                raise ParseError("expected 'loop <a>'", lineno, 1)
            arc_of(toks[1], "loop")
        else:
            raise ParseError(f"unknown record type {kind!r}", lineno, 1)
    if arc_count is None:
        raise ParseError("empty diagram file", 1)
    return Diagram(arc_count, tuple(crossings), tuple(vertices))


def serialize_diagram(d: Diagram) -> str:
    """Canonical text; loop annotations are omitted (free loops are the
    arcs no record mentions)."""
    report = validate_diagram(d)
    if not report.valid:
        raise ValueError(f"invalid diagram: {report.violations[:4]}")
    lines = [f"arcs {d.arc_count}"]
    for c in d.crossings:
        sign = "+" if c.sign > 0 else "-"
        lines.append(
            f"crossing over={c.over} under_in={c.under_in} under_out={c.under_out} sign={sign}"
        )
    for v in d.vertices:
        ends = ",".join(f"{a}:{direction}" for a, direction in v.ends)
        lines.append(f"vertex ends={ends}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# edge structure


def compute_edges(d: Diagram) -> list[Edge]:
    """Partition the arcs into graph edges by chaining through
    undercrossings; deterministic order (vertex-anchored edges first by
    start position, then closed loops by smallest arc)."""
    report = validate_diagram(d)
    if not report.valid:
        raise ValueError(f"invalid diagram: {report.violations[:4]}")
    next_arc = {}  # arc -> following arc through its consuming crossing
    prev_arc = {}
    for c in d.crossings:
        next_arc[c.under_in] = c.under_out
        prev_arc[c.under_out] = c.under_in
    vertex_end = {}  # arc -> (vertex, position, direction)
    for vi, v in enumerate(d.vertices):
        for pos, (a, direction) in enumerate(v.ends):
            vertex_end.setdefault(a, []).append((vi, pos, direction))

    def end_of(a: int, direction: str):
        for vi, pos, dd in vertex_end.get(a, ()):
            if dd == direction:
                return (vi, pos)
        return None

    edges: list[Edge] = []
    used = set()
    starts = []
    for vi, v in enumerate(d.vertices):
        for pos, (a, direction) in enumerate(v.ends):
            if direction == OUT:
                starts.append((vi, pos, a))
    for vi, pos, a in starts:
        if a in used:
            continue
        chain = [a]
        used.add(a)
        cur = a
        while end_of(cur, IN) is None:
            cur = next_arc[cur]
            if cur in chain:
                break
            chain.append(cur)
            used.add(cur)
        endpoint = end_of(chain[-1], IN)
        edges.append(Edge(tuple(chain), ((vi, pos), endpoint)))
    for a in range(d.arc_count):
        if a in used:
            continue
        chain = [a]
        used.add(a)
        cur = next_arc.get(a)
        while cur is not None and cur != a:
            chain.append(cur)
            used.add(cur)
            cur = next_arc.get(cur)
        # rotate so the smallest arc leads, for determinism
        k = chain.index(min(chain))
        chain = chain[k:] + chain[:k]
        edges.append(Edge(tuple(chain), ()))
    edges.sort(key=lambda e: (len(e.endpoints) == 0, e.endpoints if e.endpoints else e.arcs))
    return edges


# ---------------------------------------------------------------------------
# edge deletion (keeps two ends per vertex, then smooths)


def _strand_chain(crossings, arc):
    """All arcs on the same under-strand as arc, walking both ways."""
    next_arc = {}
    prev_arc = {}
    for c in crossings:
        next_arc[c["under_in"]] = c["under_out"]
        prev_arc[c["under_out"]] = c["under_in"]
    chain = {arc}
    cur = arc
    while cur in next_arc and next_arc[cur] not in chain:
        cur = next_arc[cur]
        chain.add(cur)
    cur = arc
    while cur in prev_arc and prev_arc[cur] not in chain:
        cur = prev_arc[cur]
        chain.add(cur)
    return chain


def _reverse_strand(crossings, vertex_ends, arc):
    """Reverse the orientation of the whole under-strand containing arc,
    in place: swap under slots, flip signs once per reversed participant,
    flip vertex end directions."""
    chain = _strand_chain(crossings, arc)
    for c in crossings:
        participations = int(c["over"] in chain) + int(c["under_in"] in chain)
        if c["under_in"] in chain:
            c["under_in"], c["under_out"] = c["under_out"], c["under_in"]
        if participations % 2 == 1:
            c["sign"] = -c["sign"]
    for ends in vertex_ends:
        for i, (a, direction) in enumerate(ends):
            if a in chain:
                ends[i] = (a, OUT if direction == IN else IN)


def delete_edges(d: Diagram, edges_to_delete) -> Diagram:
    """Delete whole graph edges.  Crossings whose under-strand dies
    disappear; crossings whose over-arc dies fuse their under arcs;
    remaining 2-valent vertices are smoothed.  The deletion must leave
    every vertex with exactly two ends."""
    edges = compute_edges(d)
    doomed_arcs: set[int] = set()
    for ei in edges_to_delete:
        if not 0 <= ei < len(edges):
            raise ValueError(f"no such edge {ei}")
        doomed_arcs.update(edges[ei].arcs)

    crossings = [
        {"over": c.over, "under_in": c.under_in, "under_out": c.under_out, "sign": c.sign}
        for c in d.crossings
        if c.under_in not in doomed_arcs
    ]
    vertex_ends = [
        [(a, direction) for a, direction in v.ends if a not in doomed_arcs]
        for v in d.vertices
    ]
    for vi, ends in enumerate(vertex_ends):
        if len(ends) != 2:
            raise ValueError(f"vertex {vi} left with {len(ends)} ends")

    # fuse under strands through crossings whose over arc died
    rename: dict[int, int] = {}

    def rep(a: int) -> int:
        while a in rename:
            a = rename[a]
        return a

    def apply_rename(old: int, new: int) -> None:
        rename[old] = new
        for c in crossings:
            for key in ("over", "under_in", "under_out"):
                if c[key] == old:
                    c[key] = new
        for ends in vertex_ends:
            for i, (a, direction) in enumerate(ends):
                if a == old:
                    ends[i] = (new, direction)

    survivors = []
    for c in crossings:
        if c["over"] in doomed_arcs:
            keep, gone = rep(c["under_in"]), rep(c["under_out"])
            if keep != gone:
                apply_rename(gone, keep)
        else:
            survivors.append(c)
    crossings = survivors

    # smooth the two-valent vertices
    for ends in vertex_ends:
        (a1, d1), (a2, d2) = ends[0], ends[1]
        if a1 == a2:
            # a closed strand hanging on this vertex alone: drop the vertex
            ends.clear()
            continue
        if d1 == d2:
            _reverse_strand(crossings, vertex_ends, a2)
        (a1, d1), (a2, d2) = ends[0], ends[1]
        if d1 == IN:
            keep, gone = rep(a1), rep(a2)
        else:
            keep, gone = rep(a2), rep(a1)
        ends.clear()
        if keep != gone:
            apply_rename(gone, keep)

    final_arcs = sorted({rep(a) for a in range(d.arc_count) if a not in doomed_arcs})
    index = {a: i for i, a in enumerate(final_arcs)}
    out = Diagram(
        arc_count=len(final_arcs),
        crossings=tuple(
            Crossing(index[c["over"]], index[c["under_in"]], index[c["under_out"]], c["sign"])
            for c in crossings
        ),
        vertices=(),
    )
    report = validate_diagram(out)
    if not report.valid:
        raise ValueError(f"deletion produced an invalid diagram: {report.violations[:4]}")
    return out
