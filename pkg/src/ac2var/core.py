"""Finite semigroups given by Cayley tables.

Elements are the indices ``0..n-1``; labels are only used for display and
for parsing user input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    EmptySeed,
    IndexOutOfRange,
    NonAssociative,
    ParseError,
    SizeBoundExceeded,
    UnknownName,
)

EMBEDDING_BOUND = 12


@dataclass(frozen=True, eq=True)
class Semigroup:
    table: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = None

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self):
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, elements: Iterable[int]) -> int:
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = self.table[acc][x]
        return acc

    def power(self, a: int, k: int) -> int:
        acc = a
        for _ in range(k - 1):
            acc = self.table[acc][a]
        return acc

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def index(self, token: str) -> int:
        """Element index for a label, falling back to a decimal index."""
        if self.labels and token in self.labels:
            return self.labels.index(token)
        try:
            i = int(token)
        except ValueError:
            raise KeyError(f"no element labelled {token!r}") from None
        if not 0 <= i < self.order:
            raise KeyError(f"element index {i} out of range")
        return i

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.table, dtype=np.int32)
        arr.setflags(write=False)
        return arr

    def elements(self) -> range:
        return range(self.order)


@dataclass(frozen=True)
class ElementSet:
    order: int
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        bad = [m for m in self.members if not 0 <= m < self.order]
        if bad:
            raise ValueError(f"indices {sorted(bad)} outside [0, {self.order})")

    @classmethod
    def of(cls, order: int, members: Iterable[int]) -> "ElementSet":
        return cls(order, frozenset(members))

    @property
    def mask(self) -> tuple[bool, ...]:
        return tuple(i in self.members for i in range(self.order))

    def __contains__(self, i):
        return i in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def labels(self, S: Semigroup) -> list[str]:
        return [S.label(i) for i in self]


@dataclass(frozen=True)
class Morphism:
    domain_order: int
    codomain_order: int
    map: tuple[int, ...]

    @property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def __call__(self, i: int) -> int:
        return self.map[i]


# ---------------------------------------------------------------------------
# construction and validation


def from_table(rows: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None) -> Semigroup:
    n = len(rows)
    if n == 0:
        raise ParseError("a semigroup needs at least one element")
    table = []
    for r, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row {r} has {len(row)} entries, expected {n}")
        for c, v in enumerate(row):
            if not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise IndexOutOfRange(r, c, v)
        table.append(tuple(int(v) for v in row))
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise ParseError(f"{len(labels)} labels for {n} elements")
        if len(set(labels)) != n:
            raise ParseError("labels must be pairwise distinct")
    S = Semigroup(tuple(table), labels)
    witness = associativity_witness(S)
    if witness is not None:
        raise NonAssociative(*witness)
    return S


def associativity_witness(S: Semigroup) -> Optional[tuple[int, int, int]]:
    """First triple (row-major) with (ij)k != i(jk), or None."""
    T = S.array
    n = S.order
    # chunk over i to bound memory at O(n^2) per slice
    for i in range(n):
        left = T[T[i]]  # left[j, k] = (i j) k
        right = T[i][T]  # right[j, k] = i (j k)
        bad = left != right
        if bad.any():
            j, k = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return i, int(j), int(k)
    return None


def _from_function(elements: Sequence, op, labels: Sequence[str]) -> Semigroup:
    index = {e: i for i, e in enumerate(elements)}
    rows = [[index[op(a, b)] for b in elements] for a in elements]
    return from_table(rows, labels)


def _matmul2(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


_A2_MATRICES = {
    "a": ((1, 0), (1, 0)),
    "b": ((0, 1), (0, 0)),
    "ab": ((0, 1), (0, 1)),
    "ba": ((1, 0), (0, 0)),
    "0": ((0, 0), (0, 0)),
}

# e12 and e21 precede e11 and e22 so the first eq.(3) failure lands on them
_B21_MATRICES = {
    "0": ((0, 0), (0, 0)),
    "1": ((1, 0), (0, 1)),
    "e12": ((0, 1), (0, 0)),
    "e21": ((0, 0), (1, 0)),
    "e11": ((1, 0), (0, 0)),
    "e22": ((0, 0), (0, 1)),
}


def _matrix_semigroup(mats: dict) -> Semigroup:
    names = list(mats)
    return _from_function([mats[k] for k in names], _matmul2, names)


def _a2() -> Semigroup:
    return _matrix_semigroup(_A2_MATRICES)


def _ac2() -> Semigroup:
    a2 = _a2()
    n = a2.order
    zero = a2.index("0")
    rows = [list(r) + [n] for r in a2.table]
    rows.append([n] * n + [zero])
    return from_table(rows, a2.labels + ("c",))


def cyclic_group(k: int) -> Semigroup:
    if k < 1:
        raise UnknownName(f"cyclic:{k} needs k >= 1")
    labels = ["1"] + ["g" if i == 1 else f"g^{i}" for i in range(1, k)]
    return from_table([[(i + j) % k for j in range(k)] for i in range(k)], labels)


def null_semigroup(k: int) -> Semigroup:
    if k < 1:
        raise UnknownName(f"null:{k} needs k >= 1")
    labels = ["0"] + [f"n{i}" for i in range(1, k)]
    return from_table([[0] * k for _ in range(k)], labels)


def left_zero_semigroup(k: int) -> Semigroup:
    if k < 1:
        raise UnknownName(f"leftzero:{k} needs k >= 1")
    return from_table([[i] * k for i in range(k)], [f"l{i}" for i in range(k)])


def build_named(name: str) -> Semigroup:
    """Build one of the fixed semigroups by name.

    Canonical element orders:
      A2  = a, b, ab, ba, 0
      AC2 = a, b, ab, ba, 0, c
      A0  = b, ab, ba, 0
      C2  = 1, c
      B21 = 0, 1, e12, e21, e11, e22
      E   = 1
      cyclic:k = 1, g, g^2, ...;  null:k = 0, n1, ...;  leftzero:k = l0, l1, ...
    """
    key = name.strip()
    if ":" in key:
        kind, _, arg = key.partition(":")
        try:
            k = int(arg)
        except ValueError:
            raise UnknownName(f"bad size in {name!r}") from None
        builders = {"cyclic": cyclic_group, "null": null_semigroup, "leftzero": left_zero_semigroup}
        if kind not in builders:
            raise UnknownName(name)
        return builders[kind](k)
    if key == "A2":
        return _a2()
    if key == "AC2":
        return _ac2()
    if key == "A0":
        a2 = _a2()
        return subsemigroup(a2, [i for i in a2.elements() if a2.label(i) != "a"])[0]
    if key == "C2":
        return from_table([[0, 1], [1, 0]], ["1", "c"])
    if key == "B21":
        return _matrix_semigroup(_B21_MATRICES)
    if key == "E":
        return from_table([[0]], ["1"])
    raise UnknownName(name)


NAMED = ("A2", "AC2", "A0", "C2", "B21", "E", "cyclic:k", "null:k", "leftzero:k")


def direct_product(S: Semigroup, T: Semigroup) -> Semigroup:
    """Componentwise product; element (s, t) has index s*|T| + t."""
    n, m = S.order, T.order
    A, B = S.array.astype(np.int64), T.array.astype(np.int64)
    # table[(s1,t1),(s2,t2)] = A[s1,s2]*m + B[t1,t2]
    big = A[:, None, :, None] * m + B[None, :, None, :]
    rows = big.reshape(n * m, n * m)
    labels = tuple(f"({S.label(s)},{T.label(t)})" for s in range(n) for t in range(m))
    # a product of semigroups is associative; skip the n^3 re-check
    return Semigroup(tuple(tuple(int(v) for v in r) for r in rows.tolist()), labels)


def projections(S: Semigroup, T: Semigroup) -> tuple[Morphism, Morphism]:
    m = T.order
    N = S.order * m
    return (
        Morphism(N, S.order, tuple(i // m for i in range(N))),
        Morphism(N, T.order, tuple(i % m for i in range(N))),
    )


def subsemigroup(S: Semigroup, members: Iterable[int]) -> tuple[Semigroup, tuple[int, ...]]:
    """Restrict S to a product-closed subset.

    Returns the restricted semigroup and the list of parent indices, so that
    element ``i`` of the result is ``parent[i]`` in S.
    """
    parent = tuple(sorted(set(members)))
    pos = {p: i for i, p in enumerate(parent)}
    try:
        rows = [[pos[S.table[a][b]] for b in parent] for a in parent]
    except KeyError:
        raise ValueError("subset is not closed under multiplication") from None
    labels = tuple(S.label(p) for p in parent)
    return Semigroup(tuple(map(tuple, rows)), labels), parent


def subsemigroup_closure(S: Semigroup, seed: ElementSet | Iterable[int]) -> ElementSet:
    members = set(seed)
    if not members:
        raise EmptySeed("the seed of a closure must be nonempty")
    gens = sorted(members)
    frontier = list(members)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                for p in (S.table[a][g], S.table[g][a]):
                    if p not in members:
                        members.add(p)
                        new.append(p)
        frontier = new
    return ElementSet.of(S.order, members)


def idempotents(S: Semigroup) -> ElementSet:
    return ElementSet.of(S.order, (x for x in S.elements() if S.table[x][x] == x))


def is_regular_element(S: Semigroup, s: int) -> Optional[int]:
    row = S.table[s]
    for t in S.elements():
        if S.table[row[t]][s] == s:
            return t
    return None


def find_zero(S: Semigroup) -> Optional[int]:
    for z in S.elements():
        if all(S.table[z][x] == z and S.table[x][z] == z for x in S.elements()):
            return z
    return None


def find_identity(S: Semigroup) -> Optional[int]:
    for e in S.elements():
        if all(S.table[e][x] == x and S.table[x][e] == x for x in S.elements()):
            return e
    return None


def is_morphism(S: Semigroup, T: Semigroup, mapping: Sequence[int]) -> bool:
    return all(
        mapping[S.table[a][b]] == T.table[mapping[a]][mapping[b]]
        for a in S.elements()
        for b in S.elements()
    )


def find_embedding(S: Semigroup, T: Semigroup, bound: int = EMBEDDING_BOUND) -> Optional[Morphism]:
    """Lexicographically smallest injective homomorphism S -> T, or None.

    Exhaustive backtracking; assigning an image forces the images of all
    products of already-mapped elements, which prunes most branches.
    """
    n = S.order
    if n > bound:
        raise SizeBoundExceeded(f"|S| = {n} exceeds the embedding search bound {bound}")
    st, tt = S.table, T.table
    s_idem = [st[x][x] == x for x in range(n)]
    t_idem = [tt[y][y] == y for y in range(T.order)]
    # cheap invariant: order of a in S equals order of its image
    s_index = [_index_period(S, x) for x in range(n)]
    t_index = [_index_period(T, y) for y in range(T.order)]

    def assign(mapping, used, x, y):
        # returns list of newly assigned domain elements, or None on conflict
        stack = [(x, y)]
        added = []
        while stack:
            a, b = stack.pop()
            cur = mapping[a]
            if cur is not None:
                if cur != b:
                    return _undo(mapping, used, added)
                continue
            if b in used or s_idem[a] != t_idem[b] or s_index[a] != t_index[b]:
                return _undo(mapping, used, added)
            mapping[a] = b
            used.add(b)
            added.append(a)
            for c in range(n):
                mc = mapping[c]
                if mc is None:
                    continue
                stack.append((st[a][c], tt[b][mc]))
                stack.append((st[c][a], tt[mc][b]))
        return added

    def search(mapping, used):
        try:
            x = mapping.index(None)
        except ValueError:
            return tuple(mapping)
        for y in range(T.order):
            if y in used:
                continue
            added = assign(mapping, used, x, y)
            if added is None:
                continue
            found = search(mapping, used)
            if found is not None:
                return found
            _undo(mapping, used, added)
        return None

    found = search([None] * n, set())
    if found is None:
        return None
    return Morphism(n, T.order, found)


def _undo(mapping, used, added):
    for a in added:
        used.discard(mapping[a])
        mapping[a] = None
    return None


def _index_period(S: Semigroup, x: int) -> tuple[int, int]:
    seen = {}
    p, k = x, 1
    while p not in seen:
        seen[p] = k
        p = S.table[p][x]
        k += 1
    return seen[p], k - seen[p]


def is_isomorphic(S: Semigroup, T: Semigroup, bound: int = EMBEDDING_BOUND) -> bool:
    """Two-way embedding test; for finite semigroups this is isomorphism."""
    if S.order != T.order:
        return False
    return find_embedding(S, T, bound) is not None and find_embedding(T, S, bound) is not None


# ---------------------------------------------------------------------------
# .sgp files


def format_sgp(S: Semigroup) -> str:
    lines = [str(S.order)]
    lines += [" ".join(str(v) for v in row) for row in S.table]
    if S.labels:
        lines.append("labels: " + " ".join(S.labels))
    return "\n".join(lines) + "\n"


def parse_sgp(text: str) -> Semigroup:
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty semigroup file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(f"line 1: expected the order, got {lines[0]!r}") from None
    if n < 1:
        raise ParseError("line 1: order must be positive")
    if len(lines) < n + 1:
        raise ParseError(f"expected {n} table rows, found {len(lines) - 1}")
    rows = []
    for r in range(n):
        toks = lines[r + 1].split()
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise ParseError(f"line {r + 2}: non-integer entry") from None
        if len(row) != n:
            raise ParseError(f"line {r + 2}: expected {n} entries, got {len(row)}")
        rows.append(row)
    labels = None
    rest = lines[n + 1:]
    if rest:
        head = rest[0]
        if not head.startswith("labels:"):
            raise ParseError(f"line {n + 2}: trailing garbage {head!r}")
        labels = head[len("labels:"):].split()
        if len(rest) > 1:
            raise ParseError(f"line {n + 3}: trailing garbage {rest[1]!r}")
    return from_table(rows, labels)


def load_sgp(path) -> Semigroup:
    return parse_sgp(Path(path).read_text(encoding="utf-8"))


def save_sgp(S: Semigroup, path) -> None:
    Path(path).write_text(format_sgp(S), encoding="utf-8")
