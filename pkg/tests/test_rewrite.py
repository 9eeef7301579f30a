import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ac2var.core import build_named
from ac2var.errors import (
    NotConnected,
    ParseError,
    PatternMismatch,
    PositionOutOfRange,
    SameVariable,
    VariableAbsent,
)
from ac2var.rewrite import (
    DerivationTrace,
    RewriteRule,
    RewriteStep,
    apply_step,
    default_budget,
    ensure_x_after_y,
    format_trace,
    has_x_after_y,
    match_rule,
    parse_trace,
    regularity_certificate,
    trace_error,
    validate_trace,
)
from ac2var.words import enumerate_words, eval_word, holds_in_AC2, is_connected, parse_word

W = parse_word
AC2 = build_named("AC2")


def step(rule, pos, direction="ltr", **sub):
    return RewriteStep(RewriteRule(rule, direction), pos, {k: tuple(v) for k, v in sub.items()})


def test_apply_eq1():
    assert apply_step(W("xx"), step("eq1", 0, x="x")) == W("x^4")


def test_apply_eq2():
    assert apply_step(W("xyx"), step("eq2", 0, x="x", y="y")) == W("xyxyxyx")


def test_apply_rtl():
    assert apply_step(W("zxyxyxyxz"), step("eq2", 1, "rtl", x="x", y="y")) == W("zxyxz")


def test_apply_errors():
    with pytest.raises(PatternMismatch):
        apply_step(W("xy"), step("eq1", 0, x="x"))
    with pytest.raises(PositionOutOfRange):
        apply_step(W("xx"), step("eq1", 1, x="x"))


def test_validate_trace():
    s = step("eq2", 0, x="x", y="y")
    assert validate_trace(DerivationTrace(W("xyx"), (s,), W("xyxyxyx")))
    bad = DerivationTrace(W("xyx"), (s,), W("xyxyx"))
    assert not validate_trace(bad)
    assert trace_error(bad)[0] == 1
    assert validate_trace(DerivationTrace(W("xy"), (), W("xy")))


def test_match_rule_order():
    steps = list(match_rule(W("xxxx"), RewriteRule("eq1")))
    assert [(s.position, s.substitution["x"]) for s in steps][:3] == [(0, ("x",)), (0, ("x", "x")), (1, ("x",))]


@pytest.mark.parametrize("rule,direction", list(itertools.product(["eq1", "eq2", "eq3"], ["ltr", "rtl"])))
def test_rule_soundness(rule, direction):
    r = RewriteRule(rule, direction)
    for w in enumerate_words(3, 7):
        for s in itertools.islice(match_rule(w, r), 5):
            v = apply_step(w, s)
            assert holds_in_AC2(w, v)
            vs = w.variables()
            for vals in itertools.product(range(AC2.order), repeat=len(vs)):
                a = dict(zip(vs, vals))
                assert eval_word(AC2, w, a) == eval_word(AC2, v, a)


def test_ensure_base_case():
    trace = ensure_x_after_y(W("zxyz"), "x", "y")
    assert len(trace.steps) == 1 and trace.steps[0].rule.rule == "eq2"
    assert trace.end == W("zxyzxyzxyz")
    assert validate_trace(trace)


def test_ensure_case_one():
    trace = ensure_x_after_y(W("zxtzyt"), "x", "y")
    assert validate_trace(trace)
    assert has_x_after_y(trace.end.letters, "x", "y")
    assert holds_in_AC2(trace.start, trace.end)


def test_ensure_already_satisfied():
    trace = ensure_x_after_y(W("yxy"), "x", "y")
    assert trace.steps == ()


def test_ensure_errors():
    with pytest.raises(NotConnected):
        ensure_x_after_y(W("xy"), "x", "y")
    with pytest.raises(SameVariable):
        ensure_x_after_y(W("xyx"), "x", "x")
    with pytest.raises(VariableAbsent):
        ensure_x_after_y(W("xyx"), "x", "z")


@pytest.mark.parametrize("w", ["xyzx", "xzyzx", "xyztx", "xytzyx", "xzytzx", "xtyzytx"])
def test_ensure_on_harder_words(w):
    word = W(w)
    for x, y in itertools.permutations(word.variables(), 2):
        trace = ensure_x_after_y(word, x, y)
        assert validate_trace(trace)
        assert has_x_after_y(trace.end.letters, x, y)
        assert len(trace.steps) <= default_budget(word)


def test_certificate_xyx():
    w_prime, trace = regularity_certificate(W("xyx"))
    assert w_prime == W("y")
    assert len(trace.steps) == 1
    assert trace.end == W("xyx") + W("y") + W("xyx")


def test_certificate_square():
    w_prime, trace = regularity_certificate(W("xx"))
    assert w_prime == W("xx")
    assert trace.end == W("x^6") and validate_trace(trace)


def test_certificate_xyxy():
    w = W("xyxy")
    w_prime, trace = regularity_certificate(w)
    assert trace.end == w + w_prime + w == W("xy") ** 6
    assert validate_trace(trace)
    for a, b in itertools.product(range(AC2.order), repeat=2):
        env = {"x": a, "y": b}
        assert eval_word(AC2, w, env) == eval_word(AC2, trace.end, env)


def test_certificate_not_connected():
    with pytest.raises(NotConnected):
        regularity_certificate(W("xy"))


def test_trace_text_round_trip():
    _, trace = regularity_certificate(W("xyzyx"))
    assert parse_trace(format_trace(trace)) == trace


@pytest.mark.parametrize("text", [
    "rule=eq1 dir=ltr pos=0 sub x=x\nend=x^4\n",
    "start=xx\nrule=eq9 dir=ltr pos=0 sub x=x\nend=x^4\n",
    "start=xx\nrule=eq1 dir=ltr pos=0 sub y=x\nend=x^4\n",
    "start=xx\nrule=eq1 dir=up pos=0 sub x=x\nend=x^4\n",
    "start=xx\nrule=eq1 dir=ltr pos=0 x=x\nend=x^4\n",
])
def test_parse_trace_errors(text):
    with pytest.raises(ParseError):
        parse_trace(text)


connected_words = (
    st.lists(st.sampled_from("xyzt"), min_size=2, max_size=9)
    .map(lambda ls: W("".join(ls)))
    .filter(is_connected)
)


@settings(max_examples=150, deadline=None)
@given(connected_words)
def test_certificate_property(w):
    w_prime, trace = regularity_certificate(w)
    assert validate_trace(trace)
    assert trace.end == w + w_prime + w
    assert len(trace.steps) <= default_budget(w)
