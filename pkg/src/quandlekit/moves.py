"""Diagram moves and colouring-count invariance fuzzing.

All rewrites are combinatorial: a move is applicable when its colour
equations are exactly those of the corresponding picture, so splits keep
the original arc as the piece nearest its producer, and arcs whose colour
would change may not serve as over-arcs elsewhere.

Supported kinds: r1_insert/r1_delete, r2_insert/r2_delete,
tr1_insert/tr1_delete, tr2_slide (expand or contract, vertex or strand
variant), sr_forward/sr_backward, vertex_rotate, reverse_arc.  The delete
kinds are the reverse directions of the corresponding insertions; every
result records the inverse move and an arc relabelling map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .coloring import count_colourings
from .diagrams import IN, OUT, Crossing, Diagram, Vertex, validate_diagram
from .systems import (
    SystemData,
    associated_quandle,
    flatten_rho,
    validate_family,
    validate_involution,
)

MOVE_KINDS = (
    "r1_insert",
    "r1_delete",
    "r2_insert",
    "r2_delete",
    "tr1_insert",
    "tr1_delete",
    "tr2_slide",
    "sr_forward",
    "sr_backward",
    "vertex_rotate",
    "reverse_arc",
)

SCOPES = ("links", "trivalent", "handlebody", "n_valent")


class InapplicableMoveError(ValueError):
    pass


class ScopeError(ValueError):
    pass


@dataclass
class MoveSpec:
    kind: str
    site: int
    mirror: bool = False
    params: dict = field(default_factory=dict)

    def __str__(self) -> str:
        tag = "'" if self.mirror else ""
        return f"{self.kind}{tag}@{self.site}"


@dataclass
class MoveResult:
    diagram: Diagram
    arc_map: dict[int, int]  # original arc -> new index, for survivors
    created: tuple[int, ...]  # new indices of arcs the move created
    inverse: MoveSpec


class _Work:
    """Mutable token-level copy of a diagram."""

    def __init__(self, d: Diagram):
        self.original = d.arc_count
        self.next_token = d.arc_count
        self.crossings = [
            {"over": c.over, "under_in": c.under_in, "under_out": c.under_out, "sign": c.sign}
            for c in d.crossings
        ]
        self.vertices = [list(v.ends) for v in d.vertices]
        self.alive = set(range(d.arc_count))
        self.created: list[int] = []
        self.rename: dict[int, int] = {}

    def fresh(self) -> int:
        t = self.next_token
        self.next_token += 1
        self.alive.add(t)
        self.created.append(t)
        return t

    def consumer_slot(self, a: int):
        for ci, c in enumerate(self.crossings):
            if c["under_in"] == a:
                return ("c", ci)
        for vi, ends in enumerate(self.vertices):
            for pos, (arc, direction) in enumerate(ends):
                if arc == a and direction == IN:
                    return ("v", vi, pos)
        return None

    def producer_slot(self, a: int):
        for ci, c in enumerate(self.crossings):
            if c["under_out"] == a:
                return ("c", ci)
        for vi, ends in enumerate(self.vertices):
            for pos, (arc, direction) in enumerate(ends):
                if arc == a and direction == OUT:
                    return ("v", vi, pos)
        return None

    def over_count(self, a: int) -> int:
        return sum(1 for c in self.crossings if c["over"] == a)

    def split(self, a: int) -> int:
        """Cut arc a before its consumer: a keeps the producer and any
        over-passages, the new token takes the old consumer."""
        slot = self.consumer_slot(a)
        if slot is None:
            raise InapplicableMoveError(f"arc {a} is a free loop; cannot split")
        b = self.fresh()
        if slot[0] == "c":
            self.crossings[slot[1]]["under_in"] = b
        else:
            _, vi, pos = slot
            self.vertices[vi][pos] = (b, IN)
        return b

    def replace_everywhere(self, old: int, new: int) -> None:
        for c in self.crossings:
            for key in ("over", "under_in", "under_out"):
                if c[key] == old:
                    c[key] = new
        for ends in self.vertices:
            for pos, (arc, direction) in enumerate(ends):
                if arc == old:
                    ends[pos] = (new, direction)

    def merge(self, keep: int, gone: int) -> None:
        if keep == gone:
            return
        self.replace_everywhere(gone, keep)
        self.alive.discard(gone)
        self.rename[gone] = keep

    def drop(self, a: int) -> None:
        self.alive.discard(a)

    def finalize(self) -> tuple[Diagram, dict[int, int], dict[int, int]]:
        tokens = sorted(t for t in self.alive if t < self.original)
        tokens += [t for t in self.created if t in self.alive]
        index = {t: i for i, t in enumerate(tokens)}
        d = Diagram(
            arc_count=len(tokens),
            crossings=tuple(
                Crossing(index[c["over"]], index[c["under_in"]], index[c["under_out"]], c["sign"])
                for c in self.crossings
            ),
            vertices=tuple(
                Vertex(tuple((index[a], direction) for a, direction in ends))
                for ends in self.vertices
            ),
        )
        report = validate_diagram(d)
        if not report.valid:
            raise AssertionError(f"move produced an invalid diagram: {report.violations[:4]}")
        arc_map = {}
        for a in range(self.original):
            t = a
            while t in self.rename:
                t = self.rename[t]
            if t in index:
                arc_map[a] = index[t]
        return d, arc_map, index


def _rotated(ends, pattern):
    """First rotation offset whose directions match pattern, or None."""
    v = len(ends)
    for k in range(v):
        if all(ends[(k + i) % v][1] == want for i, want in enumerate(pattern)):
            return k
    return None


def _reverse_arc_tokens(work: _Work, a: int) -> None:
    """Reverse the formal orientation of an arc whose endpoints are vertex
    ends (or a free loop): flip its end directions and the sign of every
    crossing it passes over."""
    for slot in (work.consumer_slot(a), work.producer_slot(a)):
        if slot is not None and slot[0] == "c":
            raise InapplicableMoveError(f"arc {a} ends at a crossing; cannot reverse alone")
    for ends in work.vertices:
        for pos, (arc, direction) in enumerate(ends):
            if arc == a:
                ends[pos] = (a, OUT if direction == IN else IN)
    for c in work.crossings:
        if c["over"] == a:
            c["sign"] = -c["sign"]


def apply_move(d: Diagram, m: MoveSpec) -> MoveResult:
    """Apply the move at its site; raises InapplicableMoveError when the
    site does not carry the move's pattern."""
    report = validate_diagram(d)
    if not report.valid:
        raise ValueError(f"invalid diagram: {report.violations[:4]}")
    work = _Work(d)
    sign_flip = -1 if m.mirror else 1
    kind = m.kind

    if kind == "r1_insert":
        a = m.site
        if not 0 <= a < d.arc_count:
            raise InapplicableMoveError(f"no arc {a}")
        sign = m.params.get("sign", 1) * sign_flip
        over_first = m.params.get("over_first", False)
        if work.consumer_slot(a) is None:
            work.crossings.append({"over": a, "under_in": a, "under_out": a, "sign": sign})
            new_crossing = len(work.crossings) - 1
        else:
            b = work.split(a)
            over = a if over_first else b
            work.crossings.append({"over": over, "under_in": a, "under_out": b, "sign": sign})
            new_crossing = len(work.crossings) - 1
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("r1_delete", new_crossing)
        return MoveResult(out, arc_map, tuple(index[t] for t in work.created), inverse)

    if kind == "r1_delete":
        ci = m.site
        if not 0 <= ci < len(work.crossings):
            raise InapplicableMoveError(f"no crossing {ci}")
        c = work.crossings[ci]
        if c["over"] not in (c["under_in"], c["under_out"]):
            raise InapplicableMoveError(f"crossing {ci} is not a kink")
        over_first = c["over"] == c["under_in"]
        sign = c["sign"]
        del work.crossings[ci]
        work.merge(c["under_in"], c["under_out"])
        out, arc_map, index = work.finalize()
        site = arc_map.get(c["under_in"], 0)
        inverse = MoveSpec("r1_insert", site, params={"sign": sign, "over_first": over_first})
        return MoveResult(out, arc_map, (), inverse)

    if kind == "r2_insert":
        a = m.site
        o = m.params.get("other")
        if o is None or not (0 <= a < d.arc_count and 0 <= o < d.arc_count) or a == o:
            raise InapplicableMoveError("r2_insert needs two distinct arcs")
        sign = m.params.get("sign", 1) * sign_flip
        if m.params.get("moving_over", False):
            a, o = o, a  # the static strand is the one that splits
        if work.consumer_slot(a) is None:
            b = work.fresh()
            work.crossings.append({"over": o, "under_in": a, "under_out": b, "sign": sign})
            work.crossings.append({"over": o, "under_in": b, "under_out": a, "sign": -sign})
        else:
            b = work.split(a)
            c2 = work.split(b)
            work.crossings.append({"over": o, "under_in": a, "under_out": b, "sign": sign})
            work.crossings.append({"over": o, "under_in": b, "under_out": c2, "sign": -sign})
        n_cross = len(work.crossings)
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("r2_delete", n_cross - 2, params={"second": n_cross - 1})
        return MoveResult(out, arc_map, tuple(index[t] for t in work.created), inverse)

    if kind == "r2_delete":
        c1i, c2i = m.site, m.params.get("second", -1)
        if not (0 <= c1i < len(work.crossings) and 0 <= c2i < len(work.crossings)) or c1i == c2i:
            raise InapplicableMoveError("r2_delete needs two crossings")
        c1, c2 = work.crossings[c1i], work.crossings[c2i]
        mid = c1["under_out"]
        if (
            c1["over"] != c2["over"]
            or c2["under_in"] != mid
            or c1["sign"] != -c2["sign"]
            or mid == c1["over"]
        ):
            raise InapplicableMoveError("crossings do not form a cancelling pair")
        if work.over_count(mid) > 0:
            raise InapplicableMoveError("middle arc passes over other crossings")
        first, tail, over, sign = c1["under_in"], c2["under_out"], c1["over"], c1["sign"]
        for ci in sorted((c1i, c2i), reverse=True):
            del work.crossings[ci]
        work.merge(first, mid)
        work.merge(first, tail)
        out, arc_map, index = work.finalize()
        inverse = MoveSpec(
            "r2_insert",
            arc_map.get(first, 0),
            params={"other": arc_map.get(over, 0), "sign": sign},
        )
        return MoveResult(out, arc_map, (), inverse)

    if kind == "tr1_insert":
        vi = m.site
        if not 0 <= vi < len(work.vertices):
            raise InapplicableMoveError(f"no vertex {vi}")
        ends = work.vertices[vi]
        pos = m.params.get("pos", 0)
        sign = m.params.get("sign", 1) * sign_flip
        v = len(ends)
        p, pd = ends[pos % v]
        q, qd = ends[(pos + 1) % v]
        if pd != IN or qd != IN or p == q:
            raise InapplicableMoveError("tr1_insert needs two distinct in-ends")
        if sign > 0:
            b = work.split(p)  # p: producer -> C, b: C -> vertex
            work.crossings.append({"over": q, "under_in": p, "under_out": b, "sign": 1})
            ends[pos % v] = (q, IN)
            ends[(pos + 1) % v] = (b, IN)
        else:
            b = work.split(q)
            work.crossings.append({"over": p, "under_in": q, "under_out": b, "sign": -1})
            ends[pos % v] = (b, IN)
            ends[(pos + 1) % v] = (p, IN)
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("tr1_delete", vi, params={"pos": pos % v})
        return MoveResult(out, arc_map, tuple(index[t] for t in work.created), inverse)

    if kind == "tr1_delete":
        vi = m.site
        if not 0 <= vi < len(work.vertices):
            raise InapplicableMoveError(f"no vertex {vi}")
        ends = work.vertices[vi]
        v = len(ends)
        pos = m.params.get("pos", 0) % v
        r, rd = ends[pos]
        s, sd = ends[(pos + 1) % v]
        if rd != IN or sd != IN:
            raise InapplicableMoveError("tr1_delete needs two in-ends")
        done = False
        for ci, c in enumerate(work.crossings):
            if c["under_out"] == s and c["over"] == r and c["sign"] > 0:
                if work.over_count(s) > 0:
                    raise InapplicableMoveError("curl arc passes over other crossings")
                t, sign = c["under_in"], 1
                del work.crossings[ci]
                work.merge(t, s)
                ends[pos] = (t, IN)
                ends[(pos + 1) % v] = (r, IN)
                done = True
                break
            if c["under_out"] == r and c["over"] == s and c["sign"] < 0:
                if work.over_count(r) > 0:
                    raise InapplicableMoveError("curl arc passes over other crossings")
                t, sign = c["under_in"], -1
                del work.crossings[ci]
                work.merge(t, r)
                ends[pos] = (s, IN)
                ends[(pos + 1) % v] = (t, IN)
                done = True
                break
        if not done:
            raise InapplicableMoveError("no curl at this vertex position")
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("tr1_insert", vi, params={"pos": pos, "sign": sign})
        return MoveResult(out, arc_map, (), inverse)

    if kind == "tr2_slide":
        return _tr2_slide(d, work, m)

    if kind in ("sr_forward", "sr_backward"):
        return _sr(d, work, m)

    if kind == "vertex_rotate":
        vi = m.site
        if not 0 <= vi < len(work.vertices):
            raise InapplicableMoveError(f"no vertex {vi}")
        direction = m.params.get("direction", 1)
        ends = work.vertices[vi]
        if direction >= 0:
            wrapped = ends[0][0]
            work.vertices[vi] = ends[1:] + ends[:1]
        else:
            wrapped = ends[-1][0]
            work.vertices[vi] = ends[-1:] + ends[:-1]
        _reverse_arc_tokens(work, wrapped)
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("vertex_rotate", vi, params={"direction": -direction})
        return MoveResult(out, arc_map, (), inverse)

    if kind == "reverse_arc":
        a = m.site
        if not 0 <= a < d.arc_count:
            raise InapplicableMoveError(f"no arc {a}")
        _reverse_arc_tokens(work, a)
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("reverse_arc", arc_map[a])
        return MoveResult(out, arc_map, (), inverse)

    raise ValueError(f"unknown move kind {kind!r}")


def _tr2_slide(d: Diagram, work: _Work, m: MoveSpec) -> MoveResult:
    vi = m.site
    if not 0 <= vi < len(work.vertices):
        raise InapplicableMoveError(f"no vertex {vi}")
    ends = work.vertices[vi]
    if len(ends) != 3:
        raise InapplicableMoveError("tr2_slide needs a trivalent vertex")
    k = _rotated(ends, (IN, IN, OUT))
    if k is None:
        raise InapplicableMoveError("vertex has no in,in,out rotation")
    b1, b2 = ends[k][0], ends[(k + 1) % 3][0]
    a_out = ends[(k + 2) % 3][0]
    direction = m.params.get("direction", "expand")
    variant = m.params.get("variant", "vertex")

    if variant == "vertex" and direction == "expand":
        slot = work.consumer_slot(a_out)
        if slot is None or slot[0] != "c":
            raise InapplicableMoveError("output arc is not consumed by a crossing")
        ci = slot[1]
        c = work.crossings[ci]
        over, sign = c["over"], c["sign"]
        if work.over_count(a_out) > 0 or len({a_out, b1, b2, over}) != 4:
            raise InapplicableMoveError("slide arcs are not independent")
        delta = c["under_out"]
        nb1 = work.split(b1)
        nb2 = work.split(b2)
        del work.crossings[ci]
        work.crossings.append({"over": over, "under_in": b1, "under_out": nb1, "sign": sign})
        work.crossings.append({"over": over, "under_in": b2, "under_out": nb2, "sign": sign})
        work.merge(a_out, delta)
        out, arc_map, index = work.finalize()
        n_cross = len(work.crossings)
        inverse = MoveSpec(
            "tr2_slide",
            vi,
            params={"direction": "contract", "variant": "vertex",
                    "crossings": (n_cross - 2, n_cross - 1)},
        )
        return MoveResult(out, arc_map, tuple(index[t] for t in work.created), inverse)

    if variant == "vertex" and direction == "contract":
        wanted = m.params.get("crossings")
        candidates = []
        for c1i, c1 in enumerate(work.crossings):
            for c2i, c2 in enumerate(work.crossings):
                if c1i == c2i:
                    continue
                if c1["over"] != c2["over"] or c1["sign"] != c2["sign"]:
                    continue
                if c1["under_out"] != b1 or c2["under_out"] != b2:
                    continue
                candidates.append((c1i, c2i))
        if wanted is not None:
            candidates = [pair for pair in candidates if tuple(pair) == tuple(wanted)]
        if not candidates:
            raise InapplicableMoveError("no contractible crossing pair at this vertex")
        c1i, c2i = candidates[0]
        c1, c2 = work.crossings[c1i], work.crossings[c2i]
        over, sign = c1["over"], c1["sign"]
        if work.over_count(b1) > 0 or work.over_count(b2) > 0:
            raise InapplicableMoveError("vertex in-arcs pass over other crossings")
        if over in (a_out, b1, b2, c1["under_in"], c2["under_in"]):
            raise InapplicableMoveError("slide arcs are not independent")
        ob1, ob2 = c1["under_in"], c2["under_in"]
        for ci in sorted((c1i, c2i), reverse=True):
            del work.crossings[ci]
        work.merge(ob1, b1)
        work.merge(ob2, b2)
        na = work.split(a_out)
        work.crossings.append({"over": over, "under_in": a_out, "under_out": na, "sign": sign})
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("tr2_slide", vi, params={"direction": "expand", "variant": "vertex"})
        return MoveResult(out, arc_map, tuple(index[t] for t in work.created), inverse)

    if variant == "strand" and direction == "expand":
        ci = m.params.get("crossing")
        found = None
        for idx, c in enumerate(work.crossings):
            if c["over"] == a_out and (ci is None or ci == idx):
                found = idx
                break
        if found is None:
            raise InapplicableMoveError("no strand crosses under the output arc")
        c = work.crossings[found]
        s1, s3, sign = c["under_in"], c["under_out"], c["sign"]
        if len({s1, s3} & {a_out, b1, b2}) or b1 == b2:
            raise InapplicableMoveError("slide arcs are not independent")
        del work.crossings[found]
        s2 = work.fresh()
        mu1, mu2 = (b1, b2) if sign > 0 else (b2, b1)
        work.crossings.append({"over": mu1, "under_in": s1, "under_out": s2, "sign": sign})
        work.crossings.append({"over": mu2, "under_in": s2, "under_out": s3, "sign": sign})
        out, arc_map, index = work.finalize()
        n_cross = len(work.crossings)
        inverse = MoveSpec(
            "tr2_slide",
            vi,
            params={"direction": "contract", "variant": "strand",
                    "crossings": (n_cross - 2, n_cross - 1)},
        )
        return MoveResult(out, arc_map, tuple(index[t] for t in work.created), inverse)

    if variant == "strand" and direction == "contract":
        wanted = m.params.get("crossings")
        candidates = []
        for c1i, c1 in enumerate(work.crossings):
            for c2i, c2 in enumerate(work.crossings):
                if c1i == c2i or c1["sign"] != c2["sign"]:
                    continue
                if c1["under_out"] != c2["under_in"]:
                    continue
                mu1, mu2 = (b1, b2) if c1["sign"] > 0 else (b2, b1)
                if c1["over"] == mu1 and c2["over"] == mu2:
                    candidates.append((c1i, c2i))
        if wanted is not None:
            candidates = [pair for pair in candidates if tuple(pair) == tuple(wanted)]
        if not candidates:
            raise InapplicableMoveError("no contractible strand pair at this vertex")
        c1i, c2i = candidates[0]
        c1, c2 = work.crossings[c1i], work.crossings[c2i]
        s1, s2, s3, sign = c1["under_in"], c1["under_out"], c2["under_out"], c1["sign"]
        if work.over_count(s2) > 0:
            raise InapplicableMoveError("middle arc passes over other crossings")
        if len({s1, s3} & {a_out, b1, b2}):
            raise InapplicableMoveError("slide arcs are not independent")
        for ci in sorted((c1i, c2i), reverse=True):
            del work.crossings[ci]
        if s1 == s2 or s2 == s3:
            work.merge(s1 if s1 == s2 else s3, s2)
            s_in, s_out = (s1, s3)
        else:
            s_in, s_out = s1, s3
            work.drop(s2)
        work.crossings.append({"over": a_out, "under_in": s_in, "under_out": s_out, "sign": sign})
        out, arc_map, index = work.finalize()
        inverse = MoveSpec("tr2_slide", vi, params={"direction": "expand", "variant": "strand"})
        return MoveResult(out, arc_map, (), inverse)

    raise InapplicableMoveError(f"unknown tr2 form {direction!r}/{variant!r}")


def _sr(d: Diagram, work: _Work, m: MoveSpec) -> MoveResult:
    bar = m.site
    prod = work.producer_slot(bar)
    cons = work.consumer_slot(bar)
    if prod is None or cons is None or prod[0] != "v" or cons[0] != "v":
        raise InapplicableMoveError("sr needs an edge joining two vertices")
    v1, v2 = prod[1], cons[1]
    if v1 == v2:
        raise InapplicableMoveError("sr bar must join distinct vertices")
    if len(work.vertices[v1]) != 3 or len(work.vertices[v2]) != 3:
        raise InapplicableMoveError("sr needs trivalent vertices")
    if work.over_count(bar) > 0:
        raise InapplicableMoveError("bar passes over other crossings")
    e1 = work.vertices[v1]
    e2 = work.vertices[v2]
    k1 = next(i for i, (a, dd) in enumerate(e1) if a == bar and dd == OUT)
    k2 = next(i for i, (a, dd) in enumerate(e2) if a == bar and dd == IN)
    s1, s2 = e1[(k1 + 1) % 3], e1[(k1 + 2) % 3]
    t1, t2 = e2[(k2 + 1) % 3], e2[(k2 + 2) % 3]
    work.drop(bar)
    nb = work.fresh()
    if m.kind == "sr_forward":
        work.vertices[v1] = [s2, t1, (nb, OUT)]
        work.vertices[v2] = [(nb, IN), t2, s1]
    else:
        work.vertices[v1] = [t2, s1, (nb, OUT)]
        work.vertices[v2] = [(nb, IN), s2, t1]
    out, arc_map, index = work.finalize()
    inverse_kind = "sr_backward" if m.kind == "sr_forward" else "sr_forward"
    inverse = MoveSpec(inverse_kind, index[nb])
    return MoveResult(out, arc_map, (index[nb],), inverse)


# ---------------------------------------------------------------------------
# applicability scanning


def applicable_moves(d: Diagram, kinds) -> list[MoveSpec]:
    """Deterministic enumeration of applicable move specs of the given
    kinds.  Applicability is verified by actually applying each candidate."""
    candidates: list[MoveSpec] = []
    arcs = range(d.arc_count)
    if "r1_insert" in kinds:
        for a in arcs:
            for sign in (1, -1):
                candidates.append(MoveSpec("r1_insert", a, params={"sign": sign}))
                candidates.append(
                    MoveSpec("r1_insert", a, params={"sign": sign, "over_first": True})
                )
    if "r1_delete" in kinds:
        for ci in range(len(d.crossings)):
            candidates.append(MoveSpec("r1_delete", ci))
    if "r2_insert" in kinds:
        for a in arcs:
            for o in arcs:
                if a != o:
                    for sign in (1, -1):
                        candidates.append(
                            MoveSpec("r2_insert", a, params={"other": o, "sign": sign})
                        )
    if "r2_delete" in kinds:
        for c1 in range(len(d.crossings)):
            for c2 in range(len(d.crossings)):
                if c1 != c2:
                    candidates.append(MoveSpec("r2_delete", c1, params={"second": c2}))
    if "tr1_insert" in kinds:
        for vi, v in enumerate(d.vertices):
            for pos in range(v.valence):
                for sign in (1, -1):
                    candidates.append(
                        MoveSpec("tr1_insert", vi, params={"pos": pos, "sign": sign})
                    )
    if "tr1_delete" in kinds:
        for vi, v in enumerate(d.vertices):
            for pos in range(v.valence):
                candidates.append(MoveSpec("tr1_delete", vi, params={"pos": pos}))
    if "tr2_slide" in kinds:
        for vi in range(len(d.vertices)):
            for direction in ("expand", "contract"):
                for variant in ("vertex", "strand"):
                    candidates.append(
                        MoveSpec(
                            "tr2_slide", vi, params={"direction": direction, "variant": variant}
                        )
                    )
    if "sr_forward" in kinds or "sr_backward" in kinds:
        for a in arcs:
            if "sr_forward" in kinds:
                candidates.append(MoveSpec("sr_forward", a))
            if "sr_backward" in kinds:
                candidates.append(MoveSpec("sr_backward", a))
    if "vertex_rotate" in kinds:
        for vi in range(len(d.vertices)):
            for direction in (1, -1):
                candidates.append(MoveSpec("vertex_rotate", vi, params={"direction": direction}))
    if "reverse_arc" in kinds:
        for a in arcs:
            candidates.append(MoveSpec("reverse_arc", a))

    usable = []
    for spec in candidates:
        try:
            apply_move(d, spec)
        except InapplicableMoveError:
            continue
        usable.append(spec)
    return usable


# ---------------------------------------------------------------------------
# random diagrams


def random_diagram(seed, crossings_max: int, vertices_max: int, valences=(3,)) -> Diagram:
    """Reproducible random diagram grown from free loops by kinks, pokes,
    vertex-pair insertions and threads under vertex in-arcs."""
    if crossings_max < 0 or vertices_max < 0:
        raise ValueError("bounds must be non-negative")
    rng = random.Random(repr(seed))
    d = Diagram(1, (), ())
    vertex_budget = vertices_max
    crossing_budget = crossings_max

    def arcs():
        return range(d.arc_count)

    while True:
        ops = []
        if vertex_budget >= 2:
            ops += ["theta", "handcuff"]
        if crossing_budget >= 1:
            ops.append("kink")
        if crossing_budget >= 2 and d.arc_count >= 2:
            ops.append("poke")
        if crossing_budget >= 2 and d.vertices:
            ops.append("thread")
        if not ops:
            break
        op = rng.choice(ops)
        if op in ("theta", "handcuff"):
            free = [
                a
                for a in arcs()
                if all(c.under_in != a and c.under_out != a for c in d.crossings)
                and all(a != e for v in d.vertices for e, _ in v.ends)
            ]
            if not free:
                d = Diagram(d.arc_count + 1, d.crossings, d.vertices)
                free = [d.arc_count - 1]
            a = rng.choice(free)
            if op == "theta":
                valence = rng.choice(sorted(valences))
                edges = [d.arc_count + i for i in range(valence - 1)]
                b, extra = edges[0], edges[1:]
                v1 = Vertex(((b, IN), (a, OUT)) + tuple((x, OUT) for x in extra))
                v2 = Vertex(((a, IN),) + tuple((x, IN) for x in extra) + ((b, OUT),))
                d = Diagram(d.arc_count + valence - 1, d.crossings, d.vertices + (v1, v2))
            else:
                mth, b = d.arc_count, d.arc_count + 1
                v1 = Vertex(((a, IN), (mth, OUT), (a, OUT)))
                v2 = Vertex(((b, IN), (mth, IN), (b, OUT)))
                d = Diagram(d.arc_count + 2, d.crossings, d.vertices + (v1, v2))
            vertex_budget -= 2
        elif op == "kink":
            spec = MoveSpec(
                "r1_insert",
                rng.randrange(d.arc_count),
                params={"sign": rng.choice((1, -1)), "over_first": rng.random() < 0.5},
            )
            d = apply_move(d, spec).diagram
            crossing_budget -= 1
        elif op == "poke":
            a = rng.randrange(d.arc_count)
            o = rng.choice([x for x in arcs() if x != a])
            spec = MoveSpec(
                "r2_insert", a, params={"other": o, "sign": rng.choice((1, -1))}
            )
            d = apply_move(d, spec).diagram
            crossing_budget -= 2
        elif op == "thread":
            sites = []
            for vi, v in enumerate(d.vertices):
                k = _rotated(v.ends, (IN, IN, OUT)) if v.valence == 3 else None
                if k is None:
                    continue
                incident = {e for e, _ in v.ends}
                for t in arcs():
                    if t not in incident:
                        sites.append((vi, k, t))
            if not sites:
                crossing_budget -= 1
                continue
            vi, k, t = sites[rng.randrange(len(sites))]
            v = d.vertices[vi]
            b1, b2 = v.ends[k][0], v.ends[(k + 1) % 3][0]
            sign = rng.choice((1, -1))
            work = _Work(d)
            mu1, mu2 = (b1, b2) if sign > 0 else (b2, b1)
            if work.consumer_slot(t) is None:
                u = work.fresh()
                work.crossings.append({"over": mu1, "under_in": t, "under_out": u, "sign": sign})
                work.crossings.append({"over": mu2, "under_in": u, "under_out": t, "sign": sign})
            else:
                u = work.split(t)
                w = work.split(u)
                work.crossings.append({"over": mu1, "under_in": t, "under_out": u, "sign": sign})
                work.crossings.append({"over": mu2, "under_in": u, "under_out": w, "sign": sign})
            d = work.finalize()[0]
            crossing_budget -= 2
        if crossing_budget <= 0 and vertex_budget <= 1:
            break
    return d


# ---------------------------------------------------------------------------
# invariance fuzzing


DEFAULT_MOVES = {
    "links": ("r1_insert", "r1_delete", "r2_insert", "r2_delete"),
    "trivalent": (
        "r1_insert",
        "r1_delete",
        "r2_insert",
        "r2_delete",
        "tr1_insert",
        "tr1_delete",
        "tr2_slide",
        "vertex_rotate",
        "reverse_arc",
    ),
    "handlebody": (
        "r1_insert",
        "r1_delete",
        "r2_insert",
        "r2_delete",
        "tr1_insert",
        "tr1_delete",
        "tr2_slide",
        "vertex_rotate",
        "reverse_arc",
        "sr_forward",
        "sr_backward",
    ),
    "n_valent": ("r1_insert", "r1_delete", "r2_insert", "r2_delete", "vertex_rotate", "reverse_arc"),
}


@dataclass
class FuzzTrial:
    index: int
    seed: str
    move: str
    before: int
    after: int

    @property
    def ok(self) -> bool:
        return self.before == self.after

    def line(self) -> str:
        status = "OK" if self.ok else "FAIL"
        return (
            f"trial {self.index} seed {self.seed} move {self.move} "
            f"before {self.before} after {self.after} {status}"
        )


@dataclass
class FuzzReport:
    trials: list[FuzzTrial]
    skipped: int

    @property
    def mismatches(self) -> list[FuzzTrial]:
        return [t for t in self.trials if not t.ok]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def text(self) -> str:
        return "\n".join(t.line() for t in self.trials) + "\n"


def validate_scope(sys: SystemData, scope: str) -> list[str]:
    """Check the theorem hypotheses behind a fuzzing scope; returns a list
    of human-readable problems (empty when the scope is justified)."""
    problems = []
    assoc, report = associated_quandle(sys)
    if not report.valid:
        problems.append(f"associated product is not a quandle: {report.violations[:2]}")
    if scope == "links":
        return problems
    if sys.rho is None:
        problems.append("scope needs the involution rho")
        return problems
    inv = validate_involution(assoc.table, flatten_rho(sys))
    if not inv.valid:
        problems.append(f"rho is not a good involution: {inv.violations[:2]}")
    if scope in ("trivalent", "handlebody"):
        tc = validate_family(sys, "trivalent_compatible")
        if not tc.valid:
            problems.append(f"not trivalent compatible: {tc.violations[:2]}")
    if scope == "handlebody":
        ac = validate_family(sys, "associative_composition")
        if not ac.valid:
            problems.append(f"composition not associative: {ac.violations[:2]}")
    if scope == "n_valent":
        arities = [k for k, _ in sys.gamma]
        if sys.oplus is not None or sys.group is not None:
            arities.append(2)
        if not arities:
            problems.append("scope needs composition tables")
        else:
            nc = validate_family(sys, "n_compatible", sorted(set(arities)))
            if not nc.valid:
                problems.append(f"not n-compatible: {nc.violations[:2]}")
    return problems


def fuzz_invariance(
    sys: SystemData,
    trials: int,
    seed,
    move_set=None,
    scope: str = "handlebody",
    force: bool = False,
    crossings_max: int = 4,
    vertices_max: int = 2,
) -> FuzzReport:
    """Per trial: a random scope-appropriate diagram, one random applicable
    move, and a before/after colouring-count comparison.

    Refuses to run when the system fails the scope's theorem hypotheses
    unless ``force`` is set (deliberately broken systems are fuzzed that
    way to exhibit mismatches).
    """
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    problems = validate_scope(sys, scope)
    if problems and not force:
        raise ScopeError("; ".join(problems))
    if move_set is None:
        move_set = DEFAULT_MOVES[scope]
    for kind in move_set:
        if kind not in MOVE_KINDS:
            raise ValueError(f"unknown move kind {kind!r}")
    if scope == "links":
        vertices_max = 0
    valences = (3,)
    if scope == "n_valent":
        valences = tuple(sorted(k + 1 for k, _ in sys.gamma)) or (3,)

    out: list[FuzzTrial] = []
    skipped = 0
    for i in range(trials):
        trial_seed = f"{seed}/{i}"
        rng = random.Random(trial_seed)
        spec = None
        diagram = None
        for attempt in range(8):
            diagram = random_diagram(
                f"{trial_seed}#{attempt}", crossings_max, vertices_max, valences
            )
            moves = applicable_moves(diagram, move_set)
            if moves:
                spec = moves[rng.randrange(len(moves))]
                break
        if spec is None:
            skipped += 1
            continue
        before = count_colourings(diagram, sys, "all")
        after = count_colourings(apply_move(diagram, spec).diagram, sys, "all")
        out.append(FuzzTrial(i, trial_seed, str(spec), before, after))
    return FuzzReport(out, skipped)
