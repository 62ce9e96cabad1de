"""Finite binary operation tables: quandle/rack/kei/group validation,
standard quandle constructors, duals, generated subalgebras and
homomorphism counting.

Elements are dense 0-based indices throughout; a table is the whole
structure.  Everything here is immutable and pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm

MAX_WITNESSES = 16  # per axiom id, keeps reports bounded


class ParseError(ValueError):
    """Malformed input text.  Carries a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of an exhaustive axiom check.

    ``violations`` is a tuple of (axiom id, witness) pairs; a witness is a
    tuple of element indices that, re-evaluated, violates the named axiom.
    At most MAX_WITNESSES witnesses are kept per axiom id.
    """

    valid: bool
    violations: tuple[tuple[str, tuple[int, ...]], ...]

    def axioms_violated(self) -> tuple[str, ...]:
        seen: list[str] = []
        for axiom, _ in self.violations:
            if axiom not in seen:
                seen.append(axiom)
        return tuple(seen)


class ReportBuilder:
    """Collects violations in first-hit axiom order, witnesses in scan order."""

    def __init__(self) -> None:
        self._order: list[str] = []
        self._buckets: dict[str, list[tuple[int, ...]]] = {}
        self._total = 0

    def hit(self, axiom: str, witness: tuple[int, ...]) -> None:
        bucket = self._buckets.get(axiom)
        if bucket is None:
            bucket = []
            self._buckets[axiom] = bucket
            self._order.append(axiom)
        self._total += 1
        if len(bucket) < MAX_WITNESSES:
            bucket.append(tuple(witness))

    def merge(self, report: AxiomReport, prefix: str = "") -> None:
        for axiom, witness in report.violations:
            self.hit(prefix + axiom, witness)

    def report(self) -> AxiomReport:
        violations = tuple(
            (axiom, witness) for axiom in self._order for witness in self._buckets[axiom]
        )
        return AxiomReport(valid=self._total == 0, violations=violations)


@dataclass(frozen=True)
class OperationTable:
    """A binary operation on {0, ..., size-1}: entries[i][j] = i * j."""

    size: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.size <= 0:
            raise ValueError("table size must be positive")
        rows = tuple(tuple(row) for row in self.entries)
        if len(rows) != self.size or any(len(row) != self.size for row in rows):
            raise ValueError(f"entries must form a {self.size}x{self.size} matrix")
        for row in rows:
            for v in row:
                if not (isinstance(v, int) and 0 <= v < self.size):
                    raise ValueError(f"entry {v!r} out of range 0..{self.size - 1}")
        object.__setattr__(self, "entries", rows)

    def apply(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i in range(self.size))


def table_from(size: int, op) -> OperationTable:
    """Build a table from a callable op(i, j)."""
    return OperationTable(size, tuple(tuple(op(i, j) for j in range(size)) for i in range(size)))


def _column_collision(table: OperationTable, j: int) -> tuple[int, int] | None:
    """First (i1, i2) with i1 < i2 and i1*j == i2*j, or None if column j is a permutation."""
    seen: dict[int, int] = {}
    for i in range(table.size):
        v = table.entries[i][j]
        if v in seen:
            return seen[v], i
        seen[v] = i
    return None


def is_right_invertible(table: OperationTable) -> bool:
    return all(_column_collision(table, j) is None for j in range(table.size))


def validate_axioms(table: OperationTable, profile: str, identity: int | None = None) -> AxiomReport:
    """Exhaustively check the axioms of the given profile.

    Profiles: ``quandle`` (Q1 idempotency, Q2 right translations are
    permutations, Q3 right self-distributivity), ``rack`` (Q2+Q3),
    ``kei`` (quandle + involutive right translations), ``group``
    (associativity, identity, inverses; ``identity`` may pin the candidate).
    """
    n = table.size
    e = table.entries
    rb = ReportBuilder()

    if profile in ("quandle", "kei"):
        for i in range(n):
            if e[i][i] != i:
                rb.hit("Q1", (i,))
    if profile in ("quandle", "rack", "kei"):
        for j in range(n):
            collision = _column_collision(table, j)
            if collision is not None:
                rb.hit("Q2", (j, collision[0], collision[1]))
        for i in range(n):
            for j in range(n):
                ij = e[i][j]
                for k in range(n):
                    if e[ij][k] != e[e[i][k]][e[j][k]]:
                        rb.hit("Q3", (i, j, k))
        if profile == "kei":
            for i in range(n):
                for j in range(n):
                    if e[e[i][j]][j] != i:
                        rb.hit("K4", (i, j))
    elif profile == "group":
        for a in range(n):
            for b in range(n):
                ab = e[a][b]
                for c in range(n):
                    if e[ab][c] != e[a][e[b][c]]:
                        rb.hit("assoc", (a, b, c))
        if identity is None:
            identity = next(
                (c for c in range(n) if all(e[c][g] == g == e[g][c] for g in range(n))), None
            )
        if identity is None:
            rb.hit("identity", ())
        else:
            for g in range(n):
                if e[identity][g] != g or e[g][identity] != g:
                    rb.hit("identity", (g,))
            for g in range(n):
                if not any(e[g][h] == identity == e[h][g] for h in range(n)):
                    rb.hit("inverse", (g,))
    else:
        raise ValueError(f"unknown profile {profile!r}")
    return rb.report()


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class GroupTable:
    """A finite group: multiplication table plus identity and inverses."""

    table: OperationTable
    identity: int
    inverse: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.table.size

    def mul(self, a: int, b: int) -> int:
        return self.table.entries[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse[a], -k)
        acc = self.identity
        for _ in range(k):
            acc = self.mul(acc, a)
        return acc

    def conjugate(self, a: int, b: int) -> int:
        """b^-1 a b"""
        return self.mul(self.mul(self.inverse[b], a), b)


def group_from_table(table: OperationTable, identity: int | None = None) -> GroupTable:
    """Validate a table as a group and derive identity and inverses."""
    report = validate_axioms(table, "group", identity=identity)
    if not report.valid:
        raise ValueError(f"not a group: {report.violations[:4]}")
    n = table.size
    e = table.entries
    if identity is None:
        identity = next(c for c in range(n) if all(e[c][g] == g == e[g][c] for g in range(n)))
    inverse = tuple(next(h for h in range(n) if e[g][h] == identity) for g in range(n))
    return GroupTable(table, identity, inverse)


def cyclic_group(n: int) -> GroupTable:
    return group_from_table(table_from(n, lambda a, b: (a + b) % n))


def klein_group() -> GroupTable:
    """Z2 x Z2 with indices read as 2-bit vectors."""
    return group_from_table(table_from(4, lambda a, b: a ^ b))


def _perm_group(perms: list[tuple[int, ...]]) -> GroupTable:
    perms = sorted(set(perms))
    index = {p: i for i, p in enumerate(perms)}

    def mul(a, b):
        # composition: apply b first, then a
        pa, pb = perms[a], perms[b]
        return index[tuple(pa[pb[i]] for i in range(len(pa)))]

    return group_from_table(table_from(len(perms), mul))


def symmetric_group(n: int) -> GroupTable:
    """S_n on points 0..n-1; elements sorted lexicographically as image tuples."""
    return _perm_group([tuple(p) for p in itertools.permutations(range(n))])


def dihedral_group(n: int) -> GroupTable:
    """The order-2n symmetry group of the regular n-gon, as permutations."""
    perms = []
    for k in range(n):
        perms.append(tuple((i + k) % n for i in range(n)))
        perms.append(tuple((k - i) % n for i in range(n)))
    return _perm_group(perms)


def group_exponent(g: GroupTable) -> int:
    exp = 1
    for a in range(g.size):
        order = 1
        acc = a
        while acc != g.identity:
            acc = g.mul(acc, a)
            order += 1
        exp = lcm(exp, order)
    return exp


def is_abelian(g: GroupTable) -> bool:
    return all(
        g.mul(a, b) == g.mul(b, a) for a in range(g.size) for b in range(g.size)
    )


# ---------------------------------------------------------------------------
# standard quandles


def trivial_quandle(n: int) -> OperationTable:
    return table_from(n, lambda i, j: i)


def dihedral_quandle(n: int) -> OperationTable:
    return table_from(n, lambda i, j: (2 * j - i) % n)


def conjugation_quandle(g: GroupTable, n: int = 1) -> OperationTable:
    """a * b = b^-n a b^n; n is reduced mod the exponent of g."""
    m = n % group_exponent(g)
    powers = [g.power(b, m) for b in range(g.size)]
    return table_from(g.size, lambda a, b: g.mul(g.mul(g.inverse[powers[b]], a), powers[b]))


def takasaki_quandle(g: GroupTable) -> OperationTable:
    """a * b = b a^-1 b, defined for abelian groups."""
    if not is_abelian(g):
        raise ValueError("takasaki quandle requires an abelian group")
    return table_from(g.size, lambda a, b: g.mul(g.mul(b, g.inverse[a]), b))


def alexander_quandle(g: GroupTable, automorphism: tuple[int, ...]) -> OperationTable:
    """a * b = phi(a b^-1) b for an automorphism phi of g."""
    phi = tuple(automorphism)
    if sorted(phi) != list(range(g.size)):
        raise ValueError("automorphism must be a permutation of the carrier")
    for a in range(g.size):
        for b in range(g.size):
            if phi[g.mul(a, b)] != g.mul(phi[a], phi[b]):
                raise ValueError(f"map is not an automorphism: fails at ({a}, {b})")
    return table_from(g.size, lambda a, b: g.mul(phi[g.mul(a, g.inverse[b])], b))


def standard_quandle(kind: str, *args) -> OperationTable:
    """Dispatcher over the named constructors: trivial(n), dihedral(n),
    conj(G, n), takasaki(G), alexander(G, phi)."""
    makers = {
        "trivial": trivial_quandle,
        "dihedral": dihedral_quandle,
        "conj": conjugation_quandle,
        "takasaki": takasaki_quandle,
        "alexander": alexander_quandle,
    }
    if kind not in makers:
        raise ValueError(f"unknown quandle kind {kind!r}")
    return makers[kind](*args)


# ---------------------------------------------------------------------------
# derived operations


def dual_operation(table: OperationTable) -> OperationTable:
    """The inverse operation: (a * b) dual b = a and (a dual b) * b = a.

    Requires every right translation to be a permutation.
    """
    n = table.size
    cols = []
    for j in range(n):
        if _column_collision(table, j) is not None:
            raise ValueError(f"column {j} is not a permutation; dual undefined")
        inv = [0] * n
        for i in range(n):
            inv[table.entries[i][j]] = i
        cols.append(inv)
    return table_from(n, lambda a, b: cols[b][a])


def generated_subalgebra(table: OperationTable, seeds) -> tuple[int, ...]:
    """Smallest subset containing seeds closed under * and its inverse.

    Deterministic: a sorted-index worklist.  Requires right translations to
    be permutations (so the inverse operation exists).
    """
    dual = dual_operation(table)
    members = sorted(set(seeds))
    for s in members:
        if not 0 <= s < table.size:
            raise ValueError(f"seed {s} out of range")
    in_set = set(members)
    queue = list(members)
    while queue:
        queue.sort()
        a = queue.pop(0)
        for b in sorted(in_set):
            for v in (
                table.entries[a][b],
                table.entries[b][a],
                dual.entries[a][b],
                dual.entries[b][a],
            ):
                if v not in in_set:
                    in_set.add(v)
                    queue.append(v)
    return tuple(sorted(in_set))


def hom_count(source: OperationTable, target: OperationTable, surjective_only: bool = False) -> int:
    """Number of maps phi with phi(a*b) = phi(a)*phi(b).

    Backtracking with closure propagation: once phi is fixed on a pair, it
    is forced on the product, so images propagate through the generated
    subalgebra before the next free choice.
    """
    n, m = source.size, target.size
    se, te = source.entries, target.entries

    def propagate(phi: list[int], newly: list[int]) -> bool:
        queue = list(newly)
        while queue:
            a = queue.pop()
            for b in range(n):
                if phi[b] < 0:
                    continue
                for x, y in ((a, b), (b, a)):
                    c = se[x][y]
                    want = te[phi[x]][phi[y]]
                    if phi[c] < 0:
                        phi[c] = want
                        queue.append(c)
                    elif phi[c] != want:
                        return False
        return True

    count = 0

    def search(phi: list[int]) -> None:
        nonlocal count
        try:
            a = phi.index(-1)
        except ValueError:
            if not surjective_only or len(set(phi)) == m:
                count += 1
            return
        for v in range(m):
            trial = phi[:]
            trial[a] = v
            if propagate(trial, [a]):
                search(trial)

    search([-1] * n)
    return count


# ---------------------------------------------------------------------------
# table file format


def _content_lines(text: str):
    """Yield (line number, stripped line) skipping comments and blanks."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_int(token: str, lineno: int, line: str) -> int:
    try:
        return int(token)
    except ValueError:
        column = line.find(token) + 1
        raise ParseError(f"expected integer, got {token!r}", lineno, column) from None


def _parse_magma(text: str) -> tuple[OperationTable, int | None]:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty table file", 1)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "magma":
        raise ParseError("expected header 'magma <size>'", lineno, 1)
    size = _parse_int(parts[1], lineno, header)
    if size <= 0:
        raise ParseError("size must be positive", lineno)
    body = lines[1:]
    identity = None
    if body and body[0][1].split()[0] == "identity":
        lineno, line = body[0]
        toks = line.split()
        if len(toks) != 2:
            raise ParseError("expected 'identity <k>'", lineno)
        identity = _parse_int(toks[1], lineno, line)
        body = body[1:]
    if len(body) != size:
        raise ParseError(f"expected {size} matrix rows, found {len(body)}", lines[0][0])
    rows = []
    for lineno, line in body:
        toks = line.split()
        if len(toks) != size:
            raise ParseError(f"expected {size} entries", lineno, 1)
        row = tuple(_parse_int(t, lineno, line) for t in toks)
        for t, v in zip(toks, row):
            if not 0 <= v < size:
                raise ParseError(f"entry {v} out of range", lineno, line.find(t) + 1)
        rows.append(row)
    return OperationTable(size, tuple(rows)), identity


def parse_table(text: str) -> OperationTable:
    table, _ = _parse_magma(text)
    return table


def parse_group(text: str) -> GroupTable:
    table, identity = _parse_magma(text)
    return group_from_table(table, identity=identity)


def serialize_table(table: OperationTable) -> str:
    lines = [f"magma {table.size}"]
    lines.extend(" ".join(str(v) for v in row) for row in table.entries)
    return "\n".join(lines) + "\n"


def serialize_group(group: GroupTable) -> str:
    lines = [f"magma {group.size}", f"identity {group.identity}"]
    lines.extend(" ".join(str(v) for v in row) for row in group.table.entries)
    return "\n".join(lines) + "\n"
