"""Replayable derivations modulo x^2 = x^4, xyx = (xy)^3 x and xyxzx = xzxyx.

Rules are applied to factors under substitutions that send each rule
variable to a nonempty word.  The constructions here turn a connected word
w into w w' w, which is how regularity of the values of w is certified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .errors import (
    InternalInvariantViolation,
    NotConnected,
    ParseError,
    PatternMismatch,
    PositionOutOfRange,
    SameVariable,
    VariableAbsent,
    WordSyntaxError,
)
from .words import Word, format_word, is_connected, parse_word

RULES = {
    "eq1": (("x", "x"), ("x", "x", "x", "x")),
    "eq2": (("x", "y", "x"), ("x", "y", "x", "y", "x", "y", "x")),
    "eq3": (("x", "y", "x", "z", "x"), ("x", "z", "x", "y", "x")),
}
RULE_VARS = {"eq1": ("x",), "eq2": ("x", "y"), "eq3": ("x", "y", "z")}


@dataclass(frozen=True)
class RewriteRule:
    rule: str
    direction: str = "ltr"

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.direction not in ("ltr", "rtl"):
            raise ValueError(f"unknown direction {self.direction!r}")

    def sides(self):
        lhs, rhs = RULES[self.rule]
        return (lhs, rhs) if self.direction == "ltr" else (rhs, lhs)


@dataclass(frozen=True)
class RewriteStep:
    rule: RewriteRule
    position: int
    substitution: Mapping[str, tuple]

    def image(self, pattern) -> tuple:
        out: list = []
        for v in pattern:
            out.extend(self.substitution[v])
        return tuple(out)


@dataclass(frozen=True)
class DerivationTrace:
    start: Word
    steps: tuple = field(default_factory=tuple)
    end: Optional[Word] = None

    def words(self) -> list[Word]:
        """Every intermediate word, start and end included."""
        out = [self.start]
        for step in self.steps:
            out.append(apply_step(out[-1], step))
        return out


def apply_step(w: Word, step: RewriteStep) -> Word:
    source, target = step.rule.sides()
    for v in RULE_VARS[step.rule.rule]:
        if not step.substitution.get(v):
            raise PatternMismatch(step.position)
    pattern = step.image(source)
    pos = step.position
    if not 0 <= pos or pos + len(pattern) > len(w):
        raise PositionOutOfRange(f"factor of length {len(pattern)} at {pos} exceeds word length {len(w)}")
    letters = w.letters
    if letters[pos:pos + len(pattern)] != pattern:
        raise PatternMismatch(pos)
    return Word(letters[:pos] + step.image(target) + letters[pos + len(pattern):])


def trace_error(trace: DerivationTrace) -> Optional[tuple[int, str]]:
    """(index, reason) of the first illegal step; index len(steps) means the end differs."""
    cur = trace.start
    for k, step in enumerate(trace.steps):
        try:
            cur = apply_step(cur, step)
        except (PatternMismatch, PositionOutOfRange) as e:
            return k, str(e)
    if trace.end is not None and cur != trace.end:
        return len(trace.steps), "replayed word differs from the recorded end"
    return None


def validate_trace(trace: DerivationTrace) -> bool:
    return trace_error(trace) is None


def match_rule(w: Word, rule: RewriteRule) -> Iterator[RewriteStep]:
    """All legal steps of one rule on w: positions left to right, shorter images first."""
    source, _ = rule.sides()
    names = RULE_VARS[rule.rule]
    letters = w.letters
    n = len(letters)

    def lengths(k, budget):
        if k == 0:
            yield ()
            return
        for first in range(1, budget + 1):
            for rest in lengths(k - 1, budget - first):
                yield (first,) + rest

    for pos in range(n):
        for lens in lengths(len(names), n - pos):
            size = dict(zip(names, lens))
            sub: dict = {}
            i = pos
            ok = True
            for v in source:
                piece = letters[i:i + size[v]]
                if len(piece) < size[v]:
                    ok = False
                    break
                if v in sub and sub[v] != piece:
                    ok = False
                    break
                sub[v] = piece
                i += size[v]
            if ok:
                yield RewriteStep(rule, pos, sub)


# ---------------------------------------------------------------------------
# constructions


def reversed_steps(trace: DerivationTrace, offset: int = 0) -> list[RewriteStep]:
    """Steps taking trace.end back to trace.start, shifted right by offset."""
    flip = {"ltr": "rtl", "rtl": "ltr"}
    return [
        RewriteStep(RewriteRule(s.rule.rule, flip[s.rule.direction]), s.position + offset, s.substitution)
        for s in reversed(trace.steps)
    ]


def has_x_after_y(letters, x: str, y: str) -> bool:
    seen_y = False
    for a in letters:
        if a == y:
            seen_y = True
        elif a == x and seen_y:
            return True
    return False


def default_budget(w: Word) -> int:
    return 10 * len(w) ** 2


class _Builder:
    """Accumulates steps while checking each against an expected layout."""

    def __init__(self, w: Word, budget: int):
        self.start = w
        self.cur = w
        self.steps: list = []
        self.budget = budget

    def push(self, step: RewriteStep, expected: Optional[tuple] = None):
        if len(self.steps) >= self.budget:
            raise InternalInvariantViolation(f"derivation exceeded the step budget of {self.budget}")
        self.cur = apply_step(self.cur, step)
        if expected is not None and self.cur.letters != expected:
            raise InternalInvariantViolation(f"step {len(self.steps)} produced an unexpected word")
        self.steps.append(step)

    def extend(self, trace: DerivationTrace):
        for step in trace.steps:
            self.push(step)

    def trace(self) -> DerivationTrace:
        return DerivationTrace(self.start, tuple(self.steps), self.cur)


def _layout(tokens: str, parts: Mapping[str, tuple]) -> tuple[tuple, list[int]]:
    letters: list = []
    starts = []
    for ch in tokens:
        starts.append(len(letters))
        letters.extend(parts[ch])
    return tuple(letters), starts


def _span(tokens: str, parts, i: int, j: int) -> tuple:
    out: list = []
    for ch in tokens[i:j]:
        out.extend(parts[ch])
    return tuple(out)


def _eq2_at(tokens, parts, i, j) -> RewriteStep:
    # X at token i and j, Y = everything strictly between
    _, starts = _layout(tokens, parts)
    sub = {"x": parts[tokens[i]], "y": _span(tokens, parts, i + 1, j)}
    return RewriteStep(RewriteRule("eq2"), starts[i], sub)


def _eq3_at(tokens, parts, i, j, k) -> RewriteStep:
    _, starts = _layout(tokens, parts)
    sub = {
        "x": parts[tokens[i]],
        "y": _span(tokens, parts, i + 1, j),
        "z": _span(tokens, parts, j + 1, k),
    }
    return RewriteStep(RewriteRule("eq3"), starts[i], sub)


def _run(builder: _Builder, parts, chain):
    """Replay (tokens_before, make_step, tokens_after) triples."""
    for before, make, after in chain:
        step = make(before, parts)
        builder.push(step, _layout(after, parts)[0])


def _check_pair(w: Word, x: str, y: str):
    if x == y:
        raise SameVariable(f"x and y are both {x!r}")
    for v in (x, y):
        if v not in w.alphabet:
            raise VariableAbsent(f"{v!r} does not occur in {w}")
    if not is_connected(w):
        raise NotConnected(f"{w} is not connected")


def _gap(letters, x, y) -> int:
    px = max(i for i, a in enumerate(letters) if a == x)
    py = min(i for i, a in enumerate(letters) if a == y)
    return py - px - 1


def ensure_x_after_y(w: Word, x: str, y: str, budget: Optional[int] = None) -> DerivationTrace:
    """Rewrite w so that some occurrence of x comes after some occurrence of y.

    The prefix up to the last x and the suffix from the first y are kept.
    """
    _check_pair(w, x, y)
    builder = _Builder(w, default_budget(w) if budget is None else budget)
    _ensure(builder, x, y, depth=0)
    return builder.trace()


def _ensure(builder: _Builder, x: str, y: str, depth: int, after_case2: bool = False):
    letters = builder.cur.letters
    if has_x_after_y(letters, x, y):
        return
    n = len(letters)
    px = max(i for i in range(n) if letters[i] == x)
    py = min(i for i in range(n) if letters[i] == y)
    if not px < py:
        raise InternalInvariantViolation("decomposition around x and y is inconsistent")

    # a variable with occurrences on both sides of x...y
    best = None
    for z in set(letters[:px]) & set(letters[py + 1:]):
        a = max(i for i in range(px) if letters[i] == z)
        b = min(i for i in range(py + 1, n) if letters[i] == z)
        key = (b - a, z)
        if best is None or key < best[0]:
            best = (key, a, b)
    if best is not None:
        _, a, b = best
        step = RewriteStep(RewriteRule("eq2"), a, {"x": (letters[a],), "y": letters[a + 1:b]})
        builder.push(step)
        return
    if py == px + 1:
        raise InternalInvariantViolation("xy factor is not enclosed although the word is connected")
    if after_case2:
        raise InternalInvariantViolation("case 1 did not become applicable after the inner rewrite")

    left = set(letters[:px])
    right = set(letters[py + 1:])
    middle = range(px + 1, py)
    # case 1: some t (also right of y) occurs in w2 before some z (also left of x)
    pairs = [
        (pz2 - pt, pt, pz2)
        for pt in middle if letters[pt] in right
        for pz2 in middle if pz2 > pt and letters[pz2] in left
    ]
    if pairs:
        _, pt, pz2 = min(pairs)
        _case1(builder, px, py, pt, pz2)
        return

    # case 2: recurse on the last z and the first t inside w2
    zs = {letters[i] for i in middle if letters[i] in left}
    ts = {letters[i] for i in middle if letters[i] in right}
    if not zs or not ts:
        raise InternalInvariantViolation("connected word has no variables shared across w2")
    choice = min(
        (_gap(letters, z, t), z, t) for z in sorted(zs) for t in sorted(ts)
    )
    inner_gap, z, t = choice
    outer_gap = py - px - 1
    if not inner_gap < outer_gap:
        raise InternalInvariantViolation(f"induction measure did not decrease ({inner_gap} >= {outer_gap})")
    _ensure(builder, z, t, depth + 1)
    _ensure(builder, x, y, depth + 1, after_case2=True)


def _case1(builder: _Builder, px: int, py: int, pt: int, pz2: int):
    letters = builder.cur.letters
    z, t = letters[pz2], letters[pt]
    pz1 = max(i for i in range(px) if letters[i] == z)
    pt3 = min(i for i in range(py + 1, len(letters)) if letters[i] == t)
    parts = {
        "P": letters[:pz1],
        "z": (z,),
        "Q": letters[pz1 + 1:px],
        "x": (letters[px],),
        "R": letters[px + 1:pt],
        "t": (t,),
        "S": letters[pt + 1:pz2],
        "U": letters[pz2 + 1:py],
        "y": (letters[py],),
        "V": letters[py + 1:pt3],
        "W": letters[pt3 + 1:],
    }
    s0 = "PzQxRtSzUyVtW"
    s1 = "PzQxRtSzQxRtSzQxRtSzUyVtW"
    s2 = "PzQxRtSzQxRtSzQxRtSzUyVtSzUyVtSzUyVtW"
    s3 = "PzQxRtSzQxRtSzUyVtSzQxRtSzUyVtSzUyVtW"
    if _layout(s0, parts)[0] != letters:
        raise InternalInvariantViolation("case 1 layout does not match the word")
    _run(builder, parts, [
        (s0, lambda tk, p: _eq2_at(tk, p, 1, 7), s1),
        (s1, lambda tk, p: _eq2_at(tk, p, 17, 23), s2),
        (s2, lambda tk, p: _eq3_at(tk, p, 11, 17, 23), s3),
    ])


def regularity_certificate(w: Word, budget: Optional[int] = None) -> tuple[Word, DerivationTrace]:
    """A word w' and a trace from w to the literal word w w' w."""
    if not is_connected(w):
        raise NotConnected(f"{w} is not connected")
    builder = _Builder(w, default_budget(w) if budget is None else budget)
    letters = w.letters
    n = len(letters)
    first, last = letters[0], letters[-1]

    if first == last and n >= 3:
        middle = letters[1:-1]
        builder.push(RewriteStep(RewriteRule("eq2"), 0, {"x": (first,), "y": middle}))
        w_prime = Word(middle)
    elif n % 2 == 0 and letters[: n // 2] == letters[n // 2:]:
        u = letters[: n // 2]
        builder.push(RewriteStep(RewriteRule("eq1"), 0, {"x": u}))
        builder.push(RewriteStep(RewriteRule("eq1"), 0, {"x": u}))
        w_prime = Word(u + u)
    else:
        x, y = first, last
        swap = ensure_x_after_y(w, x, y, budget=builder.budget)
        builder.extend(swap)
        v = builder.cur.letters
        if v[0] != x or v[-1] != y:
            raise InternalInvariantViolation("interchange changed the first or last letter")
        p = min(i for i in range(1, len(v)) if v[i] == y)
        q = min(i for i in range(p + 1, len(v) - 1) if v[i] == x)
        parts = {
            "x": (x,),
            "y": (y,),
            "A": v[1:p],
            "B": v[p + 1:q],
            "C": v[q + 1:-1],
        }
        s0 = "xAyBxCy"
        s1 = "xAyBxAyBxAyBxCy"
        s2 = "xAyBxAyBxAyBxCyBxCyBxCy"
        s3 = "xAyBxAyBxCyBxAyBxCyBxCy"
        s4 = "xAyBxCyBxAyBxCyBxAyBxCy"
        _run(builder, parts, [
            (s0, lambda tk, pp: _eq2_at(tk, pp, 0, 4), s1),
            (s1, lambda tk, pp: _eq2_at(tk, pp, 10, 14), s2),
            (s2, lambda tk, pp: _eq3_at(tk, pp, 0, 4, 16), s3),
            (s3, lambda tk, pp: _eq3_at(tk, pp, 0, 4, 20), s4),
        ])
        w_prime = Word(_layout("BxAyBxCyB", parts)[0])
        # v = v w' v; turn both outer copies of v back into w
        for step in reversed_steps(swap):
            builder.push(step)
        for step in reversed_steps(swap, offset=n + len(w_prime)):
            builder.push(step)

    trace = builder.trace()
    if trace.end.letters != letters + w_prime.letters + letters:
        raise InternalInvariantViolation("certificate does not end at w w' w")
    return w_prime, trace


# ---------------------------------------------------------------------------
# text form


def format_trace(trace: DerivationTrace) -> str:
    lines = [f"start={trace.start}"]
    for step in trace.steps:
        subs = " ".join(f"{v}={format_word(step.substitution[v])}" for v in RULE_VARS[step.rule.rule])
        lines.append(f"rule={step.rule.rule} dir={step.rule.direction} pos={step.position} sub {subs}")
    end = trace.end if trace.end is not None else trace.words()[-1]
    lines.append(f"end={end}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> DerivationTrace:
    lines = [ln.strip() for ln in text.strip().split("\n") if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("start=") or not lines[-1].startswith("end="):
        raise ParseError("a trace starts with 'start=' and ends with 'end='")
    try:
        start = parse_word(lines[0][len("start="):])
        end = parse_word(lines[-1][len("end="):])
    except WordSyntaxError as e:
        raise ParseError(str(e)) from None
    steps = []
    for k, ln in enumerate(lines[1:-1], start=2):
        fields = ln.split()
        try:
            head = dict(f.split("=", 1) for f in fields[:3])
            if fields[3] != "sub":
                raise ValueError
            rule = RewriteRule(head["rule"], head["dir"])
            pos = int(head["pos"])
            sub = {}
            for f in fields[4:]:
                v, img = f.split("=", 1)
                sub[v] = parse_word(img).letters
        except (ValueError, KeyError, IndexError, WordSyntaxError):
            raise ParseError(f"line {k}: malformed step {ln!r}") from None
        if set(sub) != set(RULE_VARS[rule.rule]):
            raise ParseError(f"line {k}: substitution must bind {', '.join(RULE_VARS[rule.rule])}")
        steps.append(RewriteStep(rule, pos, sub))
    return DerivationTrace(start, tuple(steps), end)
