"""Green's relations, separability and Rees matrix semigroups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .core import (
    Semigroup,
    build_named,
    find_identity,
    find_zero,
    from_table,
    idempotents,
    load_sgp,
    subsemigroup,
    subsemigroup_closure,
)
from .errors import InternalInvariantViolation, InvalidSpec, NotCompletelyZeroSimple, ParseError, UnknownName


@dataclass(frozen=True)
class GreensData:
    R: tuple[tuple[int, ...], ...]
    L: tuple[tuple[int, ...], ...]
    H: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]

    def class_of(self, relation: str, x: int) -> tuple[int, ...]:
        classes = getattr(self, relation)
        for cls in classes:
            if x in cls:
                return cls
        raise KeyError(x)


def _partition(n: int, same) -> tuple[tuple[int, ...], ...]:
    classes = []
    placed = [False] * n
    for a in range(n):
        if placed[a]:
            continue
        cls = [b for b in range(a, n) if not placed[b] and same(a, b)]
        for b in cls:
            placed[b] = True
        classes.append(tuple(cls))
    return tuple(classes)


def greens_relations(S: Semigroup) -> GreensData:
    n = S.order
    t = S.table
    # principal one-sided ideals over S^1: aS^1 = {a} u aS, S^1a = {a} u Sa
    right = [frozenset(t[a]) | {a} for a in range(n)]
    left = [frozenset(t[x][a] for x in range(n)) | {a} for a in range(n)]
    R = _partition(n, lambda a, b: right[a] == right[b])
    L = _partition(n, lambda a, b: left[a] == left[b])
    H = _partition(n, lambda a, b: right[a] == right[b] and left[a] == left[b])

    # D = join of R and L
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cls in R + L:
        for b in cls[1:]:
            ra, rb = find(cls[0]), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    D = _partition(n, lambda a, b: find(a) == find(b))
    return GreensData(R, L, H, D)


def is_aperiodic(S: Semigroup) -> bool:
    by_h = all(len(h) == 1 for h in greens_relations(S).H)
    n = S.order
    by_power = all(S.power(x, n) == S.power(x, n + 1) for x in S.elements())
    if by_h != by_power:
        raise InternalInvariantViolation("H-triviality and x^n = x^(n+1) disagree")
    return by_h


def is_regular_via_D(S: Semigroup, x: int, greens: Optional[GreensData] = None) -> bool:
    greens = greens or greens_relations(S)
    return any(S.table[e][e] == e for e in greens.class_of("D", x))


@dataclass(frozen=True)
class SeparabilityReport:
    separable: bool
    witnesses: dict  # (p, q) -> (e, f) for p < q
    failing: Optional[tuple[int, int]] = None


def separates(S: Semigroup, p: int, q: int, e: int, f: int) -> bool:
    t = S.table
    return t[p][e] != t[q][e] and t[f][p] != t[f][q]


def is_E_separable(S: Semigroup) -> SeparabilityReport:
    t = S.table
    idem = list(idempotents(S))
    witnesses = {}
    for p, q in itertools.combinations(S.elements(), 2):
        e = next((e for e in idem if t[p][e] != t[q][e]), None)
        f = next((f for f in idem if t[f][p] != t[f][q]), None)
        if e is None or f is None:
            return SeparabilityReport(False, witnesses, (p, q))
        witnesses[(p, q)] = (e, f)
    return SeparabilityReport(True, witnesses)


# ---------------------------------------------------------------------------
# Rees matrix semigroups


@dataclass(frozen=True)
class ReesSpec:
    """M0(G; I, Lambda; P) with P indexed sandwich[lambda][i]; None is the zero mark."""

    group: Semigroup
    identity: int
    rows: int  # |Lambda|
    cols: int  # |I|
    sandwich: tuple[tuple[Optional[int], ...], ...]

    def validate(self) -> None:
        G = self.group
        e = self.identity
        if not 0 <= e < G.order or find_identity(G) != e:
            raise InvalidSpec("designated identity is not the identity of the group")
        for g in G.elements():
            if not any(G.table[g][h] == e for h in G.elements()):
                raise InvalidSpec(f"group element {G.label(g)} has no inverse")
        if self.rows < 1 or self.cols < 1:
            raise InvalidSpec("index sets must be nonempty")
        if len(self.sandwich) != self.rows or any(len(r) != self.cols for r in self.sandwich):
            raise InvalidSpec("sandwich shape does not match dims")
        for row in self.sandwich:
            for p in row:
                if p is not None and not 0 <= p < G.order:
                    raise InvalidSpec(f"sandwich entry {p} is not a group element")
        if any(all(p is None for p in row) for row in self.sandwich):
            raise InvalidSpec("sandwich has a zero row")
        for i in range(self.cols):
            if all(self.sandwich[lam][i] is None for lam in range(self.rows)):
                raise InvalidSpec("sandwich has a zero column")

    def inverse(self, g: int) -> int:
        G = self.group
        return next(h for h in G.elements() if G.table[g][h] == self.identity)


def rees_semigroup(spec: ReesSpec) -> Semigroup:
    """Elements (i, g, lam) in lexicographic order, then 0 last."""
    spec.validate()
    G = spec.group
    ng = G.order
    triples = [(i, g, lam) for i in range(spec.cols) for g in range(ng) for lam in range(spec.rows)]
    index = {x: k for k, x in enumerate(triples)}
    zero = len(triples)
    rows = []
    for i, g, lam in triples:
        row = []
        for j, h, mu in triples:
            p = spec.sandwich[lam][j]
            if p is None:
                row.append(zero)
            else:
                row.append(index[(i, G.table[G.table[g][p]][h], mu)])
        row.append(zero)
        rows.append(row)
    rows.append([zero] * (zero + 1))
    labels = [f"({i},{G.label(g)},{lam})" for i, g, lam in triples] + ["0"]
    return from_table(rows, labels)


def is_completely_0_simple(S: Semigroup) -> bool:
    z = find_zero(S)
    if z is None:
        return False
    t = S.table
    if all(v == z for row in t for v in row):
        return False
    n = S.order
    for a in S.elements():
        if a == z:
            continue
        # two-sided ideal S^1 a S^1
        left = {a} | {t[x][a] for x in range(n)}
        ideal = left | {t[y][x] for y in left for x in range(n)}
        if len(ideal) != n:
            return False
    return True


def rees_representation(S: Semigroup) -> ReesSpec:
    """Present a completely 0-simple semigroup as M0(G; I, Lambda; P).

    I and Lambda are the nonzero R- and L-classes ordered by smallest member;
    G is the H-class of the smallest nonzero idempotent.
    """
    if not is_completely_0_simple(S):
        raise NotCompletelyZeroSimple("semigroup is not completely 0-simple")
    rep = _rees_coordinates(S)
    return rep[0]


def _rees_coordinates(S: Semigroup):
    t = S.table
    z = find_zero(S)
    greens = greens_relations(S)
    Rs = [c for c in greens.R if z not in c]
    Ls = [c for c in greens.L if z not in c]
    e = min(x for x in S.elements() if x != z and t[x][x] == x)
    Re, Le = greens.class_of("R", e), greens.class_of("L", e)
    He = tuple(sorted(set(Re) & set(Le)))
    G, parent = subsemigroup(S, He)
    gpos = {p: k for k, p in enumerate(parent)}
    # r_i in R_i n L_e, q_lam in L_lam n R_e
    r = [e if e in Ri else min(set(Ri) & set(Le)) for Ri in Rs]
    q = [e if e in Lm else min(set(Lm) & set(Re)) for Lm in Ls]
    sandwich = []
    for lam in range(len(Ls)):
        row = []
        for i in range(len(Rs)):
            p = t[q[lam]][r[i]]
            row.append(gpos[p] if p in gpos else None)
        sandwich.append(tuple(row))
    spec = ReesSpec(G, gpos[e], len(Ls), len(Rs), tuple(sandwich))
    # coordinates: element of S at (i, g, lam) is r_i g q_lam
    coords = {}
    for i in range(len(Rs)):
        for g in range(G.order):
            for lam in range(len(Ls)):
                coords[(i, g, lam)] = t[t[r[i]][parent[g]]][q[lam]]
    if len(set(coords.values())) != S.order - 1:
        raise InternalInvariantViolation("Rees coordinates are not a bijection")
    return spec, coords, z


@dataclass(frozen=True)
class HoughtonScaling:
    row_scalers: Optional[tuple[int, ...]]  # u_lam
    col_scalers: Optional[tuple[int, ...]]  # v_i
    cycle: Optional[list] = None  # closed walk of (lam, i) edges with nontrivial product


def houghton_scaling(spec: ReesSpec) -> HoughtonScaling:
    """Find u, v with u_lam * p_{lam,i} * v_i = 1 on every nonzero entry.

    A spanning forest of the bipartite graph on Lambda u I (edge where
    p_{lam,i} != 0) fixes the scalers, rooted at column vertices in index
    order; each non-forest edge is then a consistency check.
    """
    spec.validate()
    G = spec.group
    m = G.table
    one = spec.identity
    inv = spec.inverse
    P = spec.sandwich
    u: list = [None] * spec.rows
    v: list = [None] * spec.cols
    # forest parent pointers, for cycle reconstruction
    up: dict = {}
    for root in range(spec.cols):
        if v[root] is not None:
            continue
        v[root] = one
        up[("i", root)] = None
        stack = [("i", root)]
        while stack:
            kind, k = stack.pop(0)
            if kind == "i":
                for lam in range(spec.rows):
                    p = P[lam][k]
                    if p is not None and u[lam] is None:
                        u[lam] = inv(m[p][v[k]])
                        up[("l", lam)] = ("i", k)
                        stack.append(("l", lam))
            else:
                for i in range(spec.cols):
                    p = P[k][i]
                    if p is not None and v[i] is None:
                        v[i] = inv(m[u[k]][p])
                        up[("i", i)] = ("l", k)
                        stack.append(("i", i))
    for lam in range(spec.rows):
        for i in range(spec.cols):
            p = P[lam][i]
            if p is not None and m[m[u[lam]][p]][v[i]] != one:
                return HoughtonScaling(None, None, _cycle(up, lam, i))
    return HoughtonScaling(tuple(u), tuple(v))


def _cycle(up, lam, i):
    def path(node):
        out = [node]
        while up[node] is not None:
            node = up[node]
            out.append(node)
        return out

    a, b = path(("l", lam)), path(("i", i))
    common = next(x for x in a if x in b)
    walk = a[: a.index(common) + 1] + list(reversed(b[: b.index(common)]))
    edges = []
    for x, y in zip(walk, walk[1:] + walk[:1]):
        pair = (x[1], y[1]) if x[0] == "l" else (y[1], x[1])
        edges.append(pair)
    return edges


def graham_houghton_normalize(spec: ReesSpec) -> Optional[ReesSpec]:
    scaling = houghton_scaling(spec)
    if scaling.row_scalers is None:
        return None
    m = spec.group.table
    u, v = scaling.row_scalers, scaling.col_scalers
    sandwich = tuple(
        tuple(None if p is None else m[m[u[lam]][p]][v[i]] for i, p in enumerate(row))
        for lam, row in enumerate(spec.sandwich)
    )
    return ReesSpec(spec.group, spec.identity, spec.rows, spec.cols, sandwich)


def idempotent_generated(S: Semigroup) -> Semigroup:
    return subsemigroup(S, subsemigroup_closure(S, idempotents(S)))[0]


# ---------------------------------------------------------------------------
# .rees files


def format_rees(spec: ReesSpec, group_ref: str) -> str:
    G = spec.group
    lines = [f"group {group_ref}", f"dims {spec.rows} {spec.cols}"]
    for row in spec.sandwich:
        lines.append(" ".join("0" if p is None else G.label(p) for p in row))
    return "\n".join(lines) + "\n"


def parse_rees(text: str, base: Optional[Path] = None) -> ReesSpec:
    lines = [ln for ln in text.split("\n")]
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) < 2:
        raise ParseError("a .rees file needs a group line and a dims line")
    head = lines[0].split(maxsplit=1)
    if len(head) != 2 or head[0] != "group":
        raise ParseError("line 1: expected 'group <sgp-file-or-name>'")
    G = _load_group(head[1].strip(), base)
    dims = lines[1].split()
    if len(dims) != 3 or dims[0] != "dims":
        raise ParseError("line 2: expected 'dims <rows> <cols>'")
    try:
        rows, cols = int(dims[1]), int(dims[2])
    except ValueError:
        raise ParseError("line 2: dims must be integers") from None
    body = lines[2:]
    if len(body) != rows:
        raise ParseError(f"expected {rows} sandwich rows, found {len(body)}")
    if G.labels and "0" in G.labels:
        raise ParseError("group labels may not use the zero mark '0'")
    sandwich = []
    for k, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != cols:
            raise ParseError(f"line {k + 3}: expected {cols} entries")
        row = []
        for tok in toks:
            if tok == "0":
                row.append(None)
                continue
            try:
                row.append(G.index(tok))
            except KeyError:
                raise ParseError(f"line {k + 3}: unknown group element {tok!r}") from None
        sandwich.append(tuple(row))
    ident = find_identity(G)
    if ident is None:
        raise InvalidSpec("group has no identity element")
    spec = ReesSpec(G, ident, rows, cols, tuple(sandwich))
    spec.validate()
    return spec


def _load_group(ref: str, base: Optional[Path]) -> Semigroup:
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    if path.suffix == ".sgp" and path.exists():
        return load_sgp(path)
    try:
        return build_named(ref)
    except UnknownName:
        raise ParseError(f"group {ref!r} is neither a readable .sgp file nor a named semigroup") from None


def load_rees(path) -> ReesSpec:
    path = Path(path)
    return parse_rees(path.read_text(encoding="utf-8"), path.parent)


def sandwich_from_labels(group: Semigroup, rows: Sequence[Sequence[str]]) -> ReesSpec:
    """Convenience constructor: entries are group labels or '0'."""
    sandwich = tuple(tuple(None if tok == "0" else group.index(tok) for tok in row) for row in rows)
    ident = find_identity(group)
    if ident is None:
        raise InvalidSpec("group has no identity element")
    spec = ReesSpec(group, ident, len(rows), len(rows[0]), sandwich)
    spec.validate()
    return spec
