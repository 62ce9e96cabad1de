"""Proper colourings of diagrams by the associated quandle of a system.

Crossing rule: at a positive crossing c(under_out) = c(under_in) . c(over)
in the associated quandle; at a negative crossing c(under_in) =
c(under_out) . c(over), realised through the column-inverse (dual) table.

Vertex rule: all incident arcs share one X element x.  With effective
G elements g^ = g for in-ends and rho_x(g) for out-ends, a vertex of
valence v is proper when Gamma_{v-1}(g^_1, ..., g^_{v-1}) = rho_x(g^_v),
the arity-2 composition being (+).
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagrams import IN, Diagram, validate_diagram
from .systems import SystemData, associated_quandle
from .tables import AxiomReport, ReportBuilder, dual_operation, generated_subalgebra


@dataclass(frozen=True)
class Colouring:
    """Total assignment arc index -> pair index of the associated quandle."""

    assignment: tuple[int, ...]

    def pair(self, ctx: "ColouringContext", arc: int) -> tuple[int, int]:
        return ctx.assoc.pair_of(self.assignment[arc])


class ColouringContext:
    """Precomputed lookup data shared by verification and counting."""

    def __init__(self, d: Diagram, sys: SystemData):
        report = validate_diagram(d)
        if not report.valid:
            raise ValueError(f"invalid diagram: {report.violations[:4]}")
        self.diagram = d
        self.system = sys
        self.assoc, _ = associated_quandle(sys)
        self.table = self.assoc.table.entries
        self.dual = dual_operation(self.assoc.table).entries
        self.carrier = self.assoc.table.size
        self.g_size = sys.g_size
        if d.vertices:
            if sys.rho is None:
                raise ValueError("vertex rules require the involution rho")
            self.oplus = None
            if self._needs_arity(2):
                if sys.oplus is not None or sys.group is not None:
                    self.oplus = sys.eff_oplus().entries
                else:
                    flat = sys.gamma_table(2)
                    if flat is None:
                        raise ValueError(
                            "system lacks an arity-2 composition table "
                            "for a trivalent vertex"
                        )
                    n = sys.g_size
                    self.oplus = tuple(flat[i * n : (i + 1) * n] for i in range(n))
            self.gammas = {}
            for v in d.vertices:
                arity = v.valence - 1
                if arity == 2:
                    continue
                flat = sys.gamma_table(arity)
                if flat is None:
                    raise ValueError(
                        f"system lacks an arity-{arity} composition table "
                        f"for a valence-{v.valence} vertex"
                    )
                self.gammas[arity] = flat

    def _needs_arity(self, arity: int) -> bool:
        return any(v.valence - 1 == arity for v in self.diagram.vertices)

    def gamma(self, arity: int, gs: tuple[int, ...]) -> int:
        if arity == 2:
            return self.oplus[gs[0]][gs[1]]
        flat = self.gammas[arity]
        idx = 0
        for g in gs:
            idx = idx * self.g_size + g
        return flat[idx]

    def crossing_ok(self, c, colours) -> bool:
        if c.sign > 0:
            return colours[c.under_out] == self.table[colours[c.under_in]][colours[c.over]]
        return colours[c.under_out] == self.dual[colours[c.under_in]][colours[c.over]]

    def vertex_x_ok(self, v, colours) -> bool:
        xs = {colours[a] // self.g_size for a, _ in v.ends}
        return len(xs) == 1

    def vertex_g_ok(self, v, colours) -> bool:
        x = colours[v.ends[0][0]] // self.g_size
        rho_x = self.system.rho[x]
        eff = [
            colours[a] % self.g_size if direction == IN else rho_x[colours[a] % self.g_size]
            for a, direction in v.ends
        ]
        return self.gamma(len(eff) - 1, tuple(eff[:-1])) == rho_x[eff[-1]]

    def vertex_ok(self, v, colours) -> bool:
        return self.vertex_x_ok(v, colours) and self.vertex_g_ok(v, colours)


def verify_colouring(d: Diagram, sys: SystemData, c: Colouring) -> AxiomReport:
    """Check every crossing and vertex constraint; ids ``crossing``,
    ``vertex-x`` (mismatched X elements) and ``vertex-g``."""
    ctx = ColouringContext(d, sys)
    colours = c.assignment
    if len(colours) != d.arc_count:
        raise ValueError("colouring must assign every arc")
    for p in colours:
        if not 0 <= p < ctx.carrier:
            raise ValueError(f"colour {p} outside the associated carrier")
    rb = ReportBuilder()
    for ci, crossing in enumerate(d.crossings):
        if not ctx.crossing_ok(crossing, colours):
            rb.hit("crossing", (ci,))
    for vi, vertex in enumerate(d.vertices):
        if not ctx.vertex_x_ok(vertex, colours):
            rb.hit("vertex-x", (vi,))
        elif not ctx.vertex_g_ok(vertex, colours):
            rb.hit("vertex-g", (vi,))
    return rb.report()


def _search_order(d: Diagram):
    """Arc assignment order: most constrained first, then by index."""
    degree = [0] * d.arc_count
    for c in d.crossings:
        for a in (c.over, c.under_in, c.under_out):
            degree[a] += 1
    for v in d.vertices:
        for a, _ in v.ends:
            degree[a] += 1
    return sorted(range(d.arc_count), key=lambda a: (-degree[a], a))


class _Backtracker:
    def __init__(self, d: Diagram, sys: SystemData):
        self.ctx = ColouringContext(d, sys)
        self.d = d
        self.order = _search_order(d)
        pos = {a: i for i, a in enumerate(self.order)}
        # constraints become checkable once their last arc is coloured
        self.checks_at = [[] for _ in self.order]
        for c in d.crossings:
            last = max(pos[a] for a in (c.over, c.under_in, c.under_out))
            self.checks_at[last].append(("c", c))
        for v in d.vertices:
            last = max(pos[a] for a, _ in v.ends)
            self.checks_at[last].append(("v", v))

    def solutions(self, first_domain=None):
        """Yield proper colourings as colour tuples, in backtracking order."""
        n = self.d.arc_count
        colours = [0] * n
        ctx = self.ctx
        order = self.order
        domain = range(ctx.carrier)

        def ok_at(k: int) -> bool:
            for kind, site in self.checks_at[k]:
                if kind == "c":
                    if not ctx.crossing_ok(site, colours):
                        return False
                elif not ctx.vertex_ok(site, colours):
                    return False
            return True

        def walk(k: int):
            if k == len(order):
                yield tuple(colours)
                return
            values = domain if (k > 0 or first_domain is None) else first_domain
            for value in values:
                colours[order[k]] = value
                if ok_at(k):
                    yield from walk(k + 1)

        if n == 0:
            yield ()
            return
        yield from walk(0)


def _generates_all(ctx: ColouringContext, colours, cache) -> bool:
    image = frozenset(colours)
    hit = cache.get(image)
    if hit is None:
        closure = generated_subalgebra(ctx.assoc.table, image)
        hit = len(closure) == ctx.carrier
        cache[image] = hit
    return hit


def count_colourings(d: Diagram, sys: SystemData, mode: str = "all", jobs: int = 1) -> int:
    """Exact number of proper colourings.  Mode ``generating`` keeps only
    colourings whose image generates the whole associated quandle.

    ``jobs`` > 1 partitions the first arc's colour domain into that many
    classes and sums the partial counts; the result is independent of the
    partitioning.
    """
    if mode not in ("all", "generating"):
        raise ValueError(f"unknown mode {mode!r}")
    bt = _Backtracker(d, sys)
    cache: dict = {}

    def tally(first_domain=None) -> int:
        c = 0
        for colours in bt.solutions(first_domain):
            if mode == "all" or _generates_all(bt.ctx, colours, cache):
                c += 1
        return c

    if jobs <= 1 or d.arc_count == 0:
        return tally()
    chunks = [range(r, bt.ctx.carrier, jobs) for r in range(jobs)]
    return sum(tally(chunk) for chunk in chunks)


def enumerate_colourings(d: Diagram, sys: SystemData, cap: int) -> list[Colouring]:
    """First ``cap`` proper colourings in backtracking order."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    bt = _Backtracker(d, sys)
    out = []
    for colours in bt.solutions():
        out.append(Colouring(colours))
        if len(out) >= cap:
            break
    return out


def brute_force_count(d: Diagram, sys: SystemData, mode: str = "all") -> int:
    """Independent oracle: filter all carrier^arcs assignments through
    verify_colouring.  Only usable for small diagrams."""
    ctx = ColouringContext(d, sys)
    total = 0
    cache: dict = {}

    def all_assignments(k, acc):
        nonlocal total
        if k == d.arc_count:
            colours = tuple(acc)
            if verify_colouring(d, sys, Colouring(colours)).valid:
                if mode == "all" or _generates_all(ctx, colours, cache):
                    total += 1
            return
        for v in range(ctx.carrier):
            acc.append(v)
            all_assignments(k + 1, acc)
            acc.pop()

    all_assignments(0, [])
    return total
