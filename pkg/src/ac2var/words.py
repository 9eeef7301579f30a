"""Words, word graphs, identity families and identity checking."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .core import Semigroup
from .errors import UnboundVariable, WordSyntaxError

# variable names used when a family or an enumeration needs fresh variables
VARIABLES = "xyztuvwsrpqabcdefghijklmno"


@dataclass(frozen=True)
class Word:
    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("words are nonempty")

    @classmethod
    def of(cls, letters: Sequence[str]) -> "Word":
        return cls(tuple(letters))

    @property
    def alphabet(self) -> frozenset:
        return frozenset(self.letters)

    def count(self, x: str) -> int:
        return self.letters.count(x)

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for x in self.letters:
            out[x] = out.get(x, 0) + 1
        return out

    def variables(self) -> list[str]:
        """Distinct letters in order of first occurrence."""
        return list(dict.fromkeys(self.letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        return Word(self.letters * k)

    def __str__(self):
        return format_word(self.letters)


def format_word(letters: Sequence[str]) -> str:
    if any(len(x) != 1 for x in letters):
        return " ".join(letters)
    out = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        out.append(letters[i] if j - i == 1 else f"{letters[i]}^{j - i}")
        i = j
    return "".join(out)


@dataclass(frozen=True)
class Identity:
    lhs: Word
    rhs: Word
    tag: str = "custom"

    def variables(self) -> list[str]:
        return list(dict.fromkeys(self.lhs.letters + self.rhs.letters))

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class WordGraph:
    vertices: frozenset
    edges: frozenset
    initial: str
    final: str

    def successors(self, x: str) -> list[str]:
        return sorted(b for a, b in self.edges if a == x)

    def edge_lines(self) -> list[str]:
        lines = [f"{a} -> {b}" for a, b in sorted(self.edges)]
        return lines + [f"initial: {self.initial}", f"final: {self.final}"]


@dataclass(frozen=True)
class CounterExample:
    assignment: dict
    lhs_value: int
    rhs_value: int


# ---------------------------------------------------------------------------
# parsing

def parse_word(text: str) -> Word:
    letters: list[str] = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        ch = text[pos]
        if not ("a" <= ch <= "z"):
            raise WordSyntaxError(f"unexpected character {ch!r}", pos)
        pos += 1
        k = 1
        probe = pos
        while probe < n and text[probe].isspace():
            probe += 1
        if probe < n and text[probe] == "^":
            probe += 1
            while probe < n and text[probe].isspace():
                probe += 1
            start = probe
            while probe < n and text[probe].isdigit():
                probe += 1
            if start == probe:
                raise WordSyntaxError("expected an exponent", start)
            k = int(text[start:probe])
            if k < 1:
                raise WordSyntaxError("exponent must be at least 1", start)
            pos = probe
        letters.extend([ch] * k)
    if not letters:
        raise WordSyntaxError("empty word", pos)
    return Word(tuple(letters))


def parse_identity(text: str, tag: str = "custom") -> Identity:
    if text.count("=") != 1:
        raise WordSyntaxError("an identity has the form 'u = v'", text.find("=") if "=" in text else len(text))
    left, right = text.split("=")
    try:
        lhs = parse_word(left)
    except WordSyntaxError as e:
        raise WordSyntaxError(str(e).rsplit(" at position", 1)[0], e.position) from None
    try:
        rhs = parse_word(right)
    except WordSyntaxError as e:
        raise WordSyntaxError(str(e).rsplit(" at position", 1)[0], e.position + len(left) + 1) from None
    return Identity(lhs, rhs, tag)


# ---------------------------------------------------------------------------
# graphs


def word_graph(w: Word) -> WordGraph:
    letters = w.letters
    edges = frozenset(zip(letters, letters[1:]))
    return WordGraph(frozenset(letters), edges, letters[0], letters[-1])


def _reachable(start: str, adj: Mapping[str, set]) -> set:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj.get(v, ()):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def is_connected(w: Word) -> bool:
    if len(w) < 2:
        return False
    g = word_graph(w)
    fwd: dict[str, set] = {}
    back: dict[str, set] = {}
    for a, b in g.edges:
        fwd.setdefault(a, set()).add(b)
        back.setdefault(b, set()).add(a)
    root = g.initial
    return _reachable(root, fwd) == g.vertices and _reachable(root, back) == g.vertices


def disjoint_splits(w: Word) -> list[int]:
    """Positions p with alf(w[:p]) and alf(w[p:]) disjoint, 0 < p < |w|."""
    letters = w.letters
    last = {x: i for i, x in enumerate(letters)}
    cuts = []
    reach = -1
    for i, x in enumerate(letters[:-1]):
        reach = max(reach, last[x])
        if reach == i:
            cuts.append(i + 1)
    return cuts


def prime_decompose(w: Word) -> list[Word]:
    bounds = [0] + disjoint_splits(w) + [len(w)]
    return [Word(w.letters[a:b]) for a, b in zip(bounds, bounds[1:])]


def holds_in_AC2(u: Word, v: Word) -> bool:
    if word_graph(u) != word_graph(v):
        return False
    cu, cv = u.counts, v.counts
    return all(cu[x] % 2 == cv[x] % 2 for x in cu)


# ---------------------------------------------------------------------------
# evaluation


def eval_word(S: Semigroup, w: Word, assignment: Mapping[str, int]) -> int:
    table = S.table
    try:
        acc = assignment[w.letters[0]]
        for x in w.letters[1:]:
            acc = table[acc][assignment[x]]
    except KeyError as e:
        raise UnboundVariable(e.args[0]) from None
    return acc


# above this many assignments per block, leading variables are fixed one at a time
_BLOCK = 1 << 22


def _eval_grid(T: np.ndarray, w: Word, axis: Mapping[str, int], nvars: int, fixed: Mapping[str, int]):
    n = T.shape[0]
    grids = {}
    for x, k in axis.items():
        shape = [1] * nvars
        shape[k] = n
        grids[x] = np.arange(n, dtype=T.dtype).reshape(shape)
    for x, val in fixed.items():
        grids[x] = np.full([1] * nvars, val, dtype=T.dtype)
    acc = grids[w.letters[0]]
    for x in w.letters[1:]:
        acc = T[acc, grids[x]]
    return acc


def check_identity(S: Semigroup, ident: Identity) -> Optional[CounterExample]:
    """Brute-force substitution over every assignment of the identity's variables.

    Variables are ordered by first occurrence (left side, then right side);
    the reported counterexample is the lexicographically first failing
    assignment in that order.
    """
    variables = ident.variables()
    T = S.array
    n = S.order

    def search(prefix: list[int]) -> Optional[CounterExample]:
        free = variables[len(prefix):]
        if n ** len(free) > _BLOCK and len(free) > 1:
            for v in range(n):
                found = search(prefix + [v])
                if found is not None:
                    return found
            return None
        fixed = dict(zip(variables, prefix))
        axis = {x: k for k, x in enumerate(free)}
        nv = max(len(free), 1)
        left = _eval_grid(T, ident.lhs, axis, nv, fixed)
        right = _eval_grid(T, ident.rhs, axis, nv, fixed)
        left, right = np.broadcast_arrays(left, right)
        full = np.broadcast_to(left != right, [n] * len(free) or [1])
        if not full.any():
            return None
        flat = int(np.argmax(full))
        idx = np.unravel_index(flat, full.shape) if free else ()
        values = list(prefix) + [int(i) for i in idx]
        assignment = dict(zip(variables, values))
        return CounterExample(
            assignment,
            eval_word(S, ident.lhs, assignment),
            eval_word(S, ident.rhs, assignment),
        )

    return search([])


def holds(S: Semigroup, ident: Identity) -> bool:
    return check_identity(S, ident) is None


# ---------------------------------------------------------------------------
# identity families


def _w(text: str) -> Word:
    return parse_word(text)


def eq1() -> Identity:
    return Identity(_w("x^2"), _w("x^4"), "eq1")


def eq2() -> Identity:
    return Identity(_w("xyx"), _w("xy") ** 3 + _w("x"), "eq2")


def eq3() -> Identity:
    return Identity(_w("xyxzx"), _w("xzxyx"), "eq3")


def eq4(n: int) -> Identity:
    if n < 2:
        raise ValueError("eq4 is defined for n >= 2")
    base = Word(tuple(v for i in range(1, n + 1) for v in (f"x{i}", f"x{i}")))
    return Identity(base ** 2, base ** 3, f"eq4({n})")


def eq5() -> Identity:
    return Identity(_w("x^2"), _w("x^3"), "eq5")


def basis_identities(n_max: int) -> list[Identity]:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    return [eq1(), eq2(), eq3()] + [eq4(n) for n in range(2, n_max + 1)]


def rsn_identities(n: int) -> list[Identity]:
    if n < 1:
        raise ValueError("n must be at least 1")
    x, y, z = _w("x"), _w("y"), _w("z")
    tag = f"rsn({n})"
    return [
        Identity(x ** 2, x ** (n + 2), tag),
        Identity(x + y + x, (x + y) ** (n + 1) + x, tag),
        Identity(x + y + x + (z + x) ** n, x + (z + x) ** n + y + x, tag),
    ]


# ---------------------------------------------------------------------------
# enumeration


def _canonical_words(k: int, length: int, used: int) -> Iterator[tuple[int, ...]]:
    # letters as variable indices; a new variable must be the next unused one
    if length == 0:
        yield ()
        return

    def rec(prefix, used):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for v in range(min(used + 1, k)):
            prefix.append(v)
            yield from rec(prefix, max(used, v + 1))
            prefix.pop()

    yield from rec([], used)


def _to_word(indices: Sequence[int]) -> Word:
    return Word(tuple(VARIABLES[i] for i in indices))


def enumerate_words(k_vars: int, max_len: int) -> Iterator[Word]:
    """Canonical words (first occurrences in order x, y, z, t, ...) by length."""
    if k_vars < 1 or max_len < 1:
        raise ValueError("k_vars and max_len must be positive")
    for length in range(1, max_len + 1):
        for idx in _canonical_words(k_vars, length, 0):
            yield _to_word(idx)


def all_words(k_vars: int, max_len: int) -> Iterator[Word]:
    """Every word over the first k variables, not canonicalized."""
    for length in range(1, max_len + 1):
        for idx in itertools.product(range(k_vars), repeat=length):
            yield _to_word(idx)


def enumerate_identities(k_vars: int, max_len: int) -> Iterator[Identity]:
    """Pairs (u, v) whose concatenation uv is canonical."""
    for u_len in range(1, max_len + 1):
        for u in _canonical_words(k_vars, u_len, 0):
            used = max(u) + 1
            for v_len in range(1, max_len + 1):
                for v in _canonical_words(k_vars, v_len, used):
                    yield Identity(_to_word(u), _to_word(v))
