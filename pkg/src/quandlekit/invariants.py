"""Wirtinger presentations with finite-group homomorphism counting, and
the constituent-link collection of a trivalent spatial graph with its
linking-number summaries.

Relator conventions (one generator per arc):

* positive crossing: over^-1 . under_in . over . under_out^-1;
* negative crossing: over . under_in . over^-1 . under_out^-1;
* vertex: the ends in listed order, out-ends inverted, multiply to the
  identity (so an (a in, b in, d out) vertex reads a b d^-1 = 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagrams import IN, Diagram, compute_edges, delete_edges, validate_diagram
from .tables import GroupTable, ParseError, _content_lines

Letter = tuple[int, int]  # (generator index, +1 or -1)


@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    relators: tuple[tuple[Letter, ...], ...]

    def __post_init__(self) -> None:
        rels = tuple(tuple((int(g), int(s)) for g, s in rel) for rel in self.relators)
        for rel in rels:
            for g, s in rel:
                if not 0 <= g < self.generator_count:
                    raise ValueError(f"generator {g} out of range")
                if s not in (1, -1):
                    raise ValueError("letter signs must be +1 or -1")
        object.__setattr__(self, "relators", rels)


@dataclass(frozen=True)
class LinkingMatrix:
    component_count: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        m = tuple(tuple(row) for row in self.matrix)
        if len(m) != self.component_count or any(len(r) != self.component_count for r in m):
            raise ValueError("matrix shape must match component count")
        for i in range(self.component_count):
            if m[i][i] != 0:
                raise ValueError("diagonal must be zero")
            for j in range(self.component_count):
                if m[i][j] != m[j][i]:
                    raise ValueError("matrix must be symmetric")
        object.__setattr__(self, "matrix", m)

    def off_diagonal(self) -> tuple[int, ...]:
        return tuple(
            sorted(
                self.matrix[i][j]
                for i in range(self.component_count)
                for j in range(i + 1, self.component_count)
            )
        )


def wirtinger_presentation(d: Diagram) -> GroupPresentation:
    report = validate_diagram(d)
    if not report.valid:
        raise ValueError(f"invalid diagram: {report.violations[:4]}")
    relators: list[tuple[Letter, ...]] = []
    for c in d.crossings:
        if c.sign > 0:
            relators.append(((c.over, -1), (c.under_in, 1), (c.over, 1), (c.under_out, -1)))
        else:
            relators.append(((c.over, 1), (c.under_in, 1), (c.over, -1), (c.under_out, -1)))
    for v in d.vertices:
        relators.append(tuple((a, 1 if direction == IN else -1) for a, direction in v.ends))
    return GroupPresentation(d.arc_count, tuple(relators))


def group_hom_count(p: GroupPresentation, g: GroupTable) -> int:
    """Number of generator assignments into g satisfying every relator.

    Backtracking with relator propagation: a relator whose unassigned part
    is a single occurrence of a single generator determines it.
    """
    n = p.generator_count
    if n == 0:
        return 1  # only empty relators are expressible

    def evaluate(word, phi):
        acc = g.identity
        for gen, s in word:
            v = phi[gen]
            acc = g.mul(acc, v if s > 0 else g.inverse[v])
        return acc

    def propagate(phi) -> bool:
        changed = True
        while changed:
            changed = False
            for rel in p.relators:
                unknown = [(i, gen) for i, (gen, _) in enumerate(rel) if phi[gen] < 0]
                if not unknown:
                    if evaluate(rel, phi) != g.identity:
                        return False
                elif len(unknown) == 1:
                    i, gen = unknown[0]
                    # prefix . x^s . suffix = e  =>  x^s = prefix^-1 . suffix^-1
                    prefix = evaluate(rel[:i], phi)
                    suffix = evaluate(rel[i + 1 :], phi)
                    val = g.mul(g.inverse[prefix], g.inverse[suffix])
                    if rel[i][1] < 0:
                        val = g.inverse[val]
                    phi[gen] = val
                    changed = True
        return True

    count = 0

    def search(phi):
        nonlocal count
        try:
            free = phi.index(-1)
        except ValueError:
            count += 1
            return
        for v in range(g.size):
            trial = phi[:]
            trial[free] = v
            if propagate(trial):
                search(trial)

    start = [-1] * n
    if propagate(start):
        search(start)
    return count


def hom_fingerprint(p: GroupPresentation, panel) -> tuple[int, ...]:
    """Homomorphism counts into each group of the panel.  Counts are
    invariants of the presented group, so equal fingerprints are evidence
    of isomorphism and differing ones are proof of its failure."""
    return tuple(group_hom_count(p, g) for g in panel)


# ---------------------------------------------------------------------------
# presentation file format


def serialize_presentation(p: GroupPresentation) -> str:
    lines = [f"gens {p.generator_count}"]
    for rel in p.relators:
        lines.append("rel " + " ".join(f"{'+' if s > 0 else '-'}{g}" for g, s in rel))
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> GroupPresentation:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty presentation file", 1)
    lineno, header = lines[0]
    toks = header.split()
    if len(toks) != 2 or toks[0] != "gens":
        raise ParseError("expected header 'gens <n>'", lineno, 1)
    try:
        count = int(toks[1])
    except ValueError:
        raise ParseError(f"bad generator count {toks[1]!r}", lineno) from None
    relators = []
    for lineno, line in lines[1:]:
        toks = line.split()
        if toks[0] != "rel":
            raise ParseError(f"expected 'rel ...', got {toks[0]!r}", lineno, 1)
        word = []
        for tok in toks[1:]:
            sign = 1
            body = tok
            if tok.startswith("+"):
                body = tok[1:]
            elif tok.startswith("-"):
                sign = -1
                body = tok[1:]
            try:
                gen = int(body)
            except ValueError:
                raise ParseError(f"bad letter {tok!r}", lineno, line.find(tok) + 1) from None
            if not 0 <= gen < count:
                raise ParseError(f"generator {gen} out of range", lineno, line.find(tok) + 1)
            word.append((gen, sign))
        relators.append(tuple(word))
    return GroupPresentation(count, tuple(relators))


# ---------------------------------------------------------------------------
# linking numbers


def _components(d: Diagram) -> list[int]:
    """Component id per arc, chaining arcs through undercrossings;
    components numbered by smallest arc index."""
    parent = list(range(d.arc_count))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in d.crossings:
        union(c.under_in, c.under_out)
    roots = sorted({find(a) for a in range(d.arc_count)})
    number = {r: i for i, r in enumerate(roots)}
    return [number[find(a)] for a in range(d.arc_count)]


def linking_matrix(d: Diagram) -> LinkingMatrix:
    """Pairwise linking numbers: half the signed count of inter-component
    crossings.  Defined for vertex-free diagrams."""
    if d.vertices:
        raise ValueError("linking matrix requires a vertex-free diagram")
    report = validate_diagram(d)
    if not report.valid:
        raise ValueError(f"invalid diagram: {report.violations[:4]}")
    comp = _components(d)
    k = max(comp) + 1 if comp else 0
    sums = [[0] * k for _ in range(k)]
    for c in d.crossings:
        i, j = comp[c.over], comp[c.under_in]
        if i != j:
            sums[i][j] += c.sign
            sums[j][i] += c.sign
    matrix = tuple(
        tuple(sums[i][j] // 2 if i != j else 0 for j in range(k)) for i in range(k)
    )
    return LinkingMatrix(k, matrix)


# ---------------------------------------------------------------------------
# constituent links


def kauffman_constituents(d: Diagram) -> list[Diagram]:
    """For every choice of two edge-ends per trivalent vertex whose induced
    deletion leaves each vertex 2-valent, delete the unchosen edges.  The
    multiset ranges over choice functions."""
    report = validate_diagram(d)
    if not report.valid:
        raise ValueError(f"invalid diagram: {report.violations[:4]}")
    for v in d.vertices:
        if v.valence != 3:
            raise ValueError("constituent links require trivalent vertices")
    edges = compute_edges(d)
    edge_at: dict[tuple[int, int], int] = {}
    for ei, edge in enumerate(edges):
        for vp in edge.endpoints:
            edge_at[vp] = ei
    out = []
    per_vertex = [list(itertools.combinations(range(v.valence), 2)) for v in d.vertices]
    for choice in itertools.product(*per_vertex):
        chosen_ends = {
            (vi, pos) for vi, pair in enumerate(choice) for pos in pair
        }
        survivors = set()
        for ei, edge in enumerate(edges):
            if all(vp in chosen_ends for vp in edge.endpoints):
                survivors.add(ei)
        ok = all(
            edge_at[(vi, pos)] in survivors
            for vi, pair in enumerate(choice)
            for pos in pair
        )
        if not ok:
            continue
        doomed = [ei for ei in range(len(edges)) if ei not in survivors]
        out.append(delete_edges(d, doomed))
    return out


def kauffman_summary(d: Diagram, invariant: str = "linking", sys=None) -> list:
    """Multiset of invariant values over the constituents: sorted
    off-diagonal linking entries, or colouring counts by a system."""
    constituents = kauffman_constituents(d)
    if invariant == "linking":
        return sorted(linking_matrix(c).off_diagonal() for c in constituents)
    if invariant == "colour_count":
        if sys is None:
            raise ValueError("colour_count summaries need a system")
        from .coloring import count_colourings

        return sorted(count_colourings(c, sys, "all") for c in constituents)
    raise ValueError(f"unknown invariant {invariant!r}")
