"""Command-line interface.

Exit codes: 0 affirmative, 1 negative with a certificate, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import (
    Semigroup,
    build_named,
    direct_product,
    format_sgp,
    idempotents,
    parse_sgp,
)
from .errors import InternalInvariantViolation, NonAssociative, NotCompletelyZeroSimple, NotConnected, SemigroupError
from .membership import membership_AC2
from .rewrite import format_trace, regularity_certificate, default_budget
from .structure import (
    greens_relations,
    is_aperiodic,
    is_completely_0_simple,
    is_E_separable,
    load_rees,
    rees_representation,
    rees_semigroup,
)
from .words import check_identity, holds_in_AC2, parse_identity, parse_word, word_graph

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# input resolution


def _split_args(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    out.append("".join(cur).strip())
    return out


def load_input(spec: str) -> Semigroup:
    """A .sgp/.rees path, a named semigroup, product(a, b) or rees(file)."""
    spec = spec.strip()
    path = Path(spec)
    if path.is_file():
        if path.suffix == ".rees":
            return rees_semigroup(load_rees(path))
        return parse_sgp(path.read_text(encoding="utf-8"))
    for head in ("product", "rees"):
        if spec.startswith(head + "(") and spec.endswith(")"):
            args = _split_args(spec[len(head) + 1:-1])
            if head == "product":
                if len(args) != 2:
                    raise InputError("product takes two arguments")
                return direct_product(load_input(args[0]), load_input(args[1]))
            if len(args) != 1 or not Path(args[0]).is_file():
                raise InputError(f"rees() needs an existing .rees file, got {args}")
            return rees_semigroup(load_rees(args[0]))
    return build_named(spec)


def _assignment_text(S: Semigroup, assignment: dict) -> str:
    return " ".join(f"{v}={S.label(e)}" for v, e in assignment.items())


def _labelled(S: Semigroup, assignment: dict) -> dict:
    return {v: {"index": e, "label": S.label(e)} for v, e in assignment.items()}


# ---------------------------------------------------------------------------
# commands; each returns (exit code, text, json payload)


def cmd_validate(args):
    S = load_input(args.input)
    n_idem = len(idempotents(S))
    text = f"order {S.order}, associative, {n_idem} idempotent{'s' if n_idem != 1 else ''}"
    return OK, text, {"order": S.order, "associative": True, "idempotents": n_idem}


def cmd_member(args):
    S = load_input(args.input)
    report = membership_AC2(S)
    cert = report.certificate
    lines = [report.verdict, f"certificate: {cert.kind}"]
    if cert.identity is not None:
        ce = cert.counterexample
        lines.append(f"identity: {cert.identity.tag} {cert.identity}")
        lines.append(f"assignment: {_assignment_text(S, ce.assignment)}")
        lines.append(f"values: {S.label(ce.lhs_value)} != {S.label(ce.rhs_value)}")
    if cert.element is not None:
        lines.append(f"element: {S.label(cert.element)}")
        lines.append("factorization: " + " * ".join(S.label(e) for e in cert.factorization))
    for name, micros in report.stages:
        lines.append(f"stage {name}: {micros} us")
    code = OK if report.is_member else NEGATIVE
    return code, "\n".join(lines), report.to_dict(S)


def cmd_identity(args):
    S = load_input(args.input)
    ident = parse_identity(args.identity)
    ce = check_identity(S, ident)
    if ce is None:
        return OK, "holds", {"identity": str(ident), "holds": True, "counterexample": None}
    text = "\n".join([
        "fails",
        f"assignment: {_assignment_text(S, ce.assignment)}",
        f"values: {S.label(ce.lhs_value)} != {S.label(ce.rhs_value)}",
    ])
    payload = {
        "identity": str(ident),
        "holds": False,
        "counterexample": {
            "assignment": _labelled(S, ce.assignment),
            "lhs": ce.lhs_value,
            "rhs": ce.rhs_value,
        },
    }
    return NEGATIVE, text, payload


def cmd_ac2_identity(args):
    ident = parse_identity(args.identity)
    gu, gv = word_graph(ident.lhs), word_graph(ident.rhs)
    cu, cv = ident.lhs.counts, ident.rhs.counts
    parity = {x: (cu.get(x, 0) % 2 == cv.get(x, 0) % 2) for x in sorted(set(cu) | set(cv))}
    verdict = holds_in_AC2(ident.lhs, ident.rhs)
    lines = [f"{'holds' if verdict else 'fails'} in AC2"]
    lines.append(f"graphs equal: {'yes' if gu == gv else 'no'}")
    bad = [x for x, same in parity.items() if not same]
    lines.append("parities agree: " + ("yes" if not bad else "no (" + " ".join(bad) + ")"))
    lines.append(f"G({ident.lhs}):")
    lines += ["  " + ln for ln in gu.edge_lines()]
    lines.append(f"G({ident.rhs}):")
    lines += ["  " + ln for ln in gv.edge_lines()]
    payload = {
        "identity": str(ident),
        "holds": verdict,
        "graphs_equal": gu == gv,
        "parity": parity,
        "lhs_graph": _graph_json(gu),
        "rhs_graph": _graph_json(gv),
    }
    return (OK if verdict else NEGATIVE), "\n".join(lines), payload


def _graph_json(g):
    return {
        "vertices": sorted(g.vertices),
        "edges": [list(e) for e in sorted(g.edges)],
        "initial": g.initial,
        "final": g.final,
    }


def cmd_analyze(args):
    S = load_input(args.input)
    greens = greens_relations(S)
    aperiodic = is_aperiodic(S)
    sep = is_E_separable(S)
    c0s = is_completely_0_simple(S)
    idem = idempotents(S)
    yes = {True: "yes", False: "no"}
    lines = [
        f"order: {S.order}",
        "idempotents: " + " ".join(idem.labels(S)),
        f"R-classes: {len(greens.R)}",
        f"L-classes: {len(greens.L)}",
        f"H-classes: {len(greens.H)}",
        f"D-classes: {len(greens.D)}",
        f"aperiodic: {yes[aperiodic]}",
        f"E-separable: {yes[sep.separable]}",
        f"completely 0-simple: {yes[c0s]}",
    ]
    payload = {
        "order": S.order,
        "idempotents": list(idem),
        "classes": {k: len(getattr(greens, k)) for k in "RLHD"},
        "aperiodic": aperiodic,
        "E_separable": sep.separable,
        "separability_failure": sep.failing,
        "completely_0_simple": c0s,
        "rees": None,
    }
    if not sep.separable:
        p, q = sep.failing
        lines.append(f"inseparable pair: {S.label(p)} {S.label(q)}")
    if c0s:
        spec = rees_representation(S)
        G = spec.group
        lines.append(f"rees: group order {G.order}, dims {spec.rows} {spec.cols}")
        rows = [[("0" if p is None else G.label(p)) for p in row] for row in spec.sandwich]
        lines += ["  " + " ".join(r) for r in rows]
        payload["rees"] = {
            "group_order": G.order,
            "group_labels": list(G.labels) if G.labels else None,
            "rows": spec.rows,
            "cols": spec.cols,
            "sandwich": rows,
        }
    return OK, "\n".join(lines), payload


def cmd_certificate(args):
    w = parse_word(args.word)
    budget = args.step_budget if args.step_budget is not None else default_budget(w)
    try:
        w_prime, trace = regularity_certificate(w, budget=budget)
    except NotConnected:
        return NEGATIVE, f"NotConnected: {w} is not connected", {"word": str(w), "connected": False}
    except InternalInvariantViolation:
        # only a user-lowered budget is an input problem; the default budget
        # running out is a defect and propagates
        if args.step_budget is None:
            raise
        raise InputError(f"step budget {budget} exhausted before the certificate was complete") from None
    text = f"w' = {w_prime}\n" + format_trace(trace).rstrip("\n")
    payload = {
        "word": str(w),
        "connected": True,
        "w_prime": str(w_prime),
        "steps": len(trace.steps),
        "trace": format_trace(trace).splitlines(),
    }
    return OK, text, payload


def cmd_graph(args):
    g = word_graph(parse_word(args.word))
    return OK, "\n".join(g.edge_lines()), _graph_json(g)


def cmd_build(args):
    S = load_input(args.expression)
    text = format_sgp(S)
    payload = {"order": S.order, "table": [list(r) for r in S.table], "labels": list(S.labels) if S.labels else None}
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        payload["path"] = args.output
        return OK, f"wrote order-{S.order} semigroup to {args.output}", payload
    return OK, text.rstrip("\n"), payload


# ---------------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS if suppress else "text")
    p.add_argument("--step-budget", type=int, default=default, help="maximum rewrite steps for certificates")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ac2var", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *positionals, **kw):
        p = sub.add_parser(name, help=kw.get("help"))
        _global_flags(p, suppress=True)
        for pos, h in positionals:
            p.add_argument(pos, help=h)
        p.set_defaults(func=func)
        return p

    src = "a .sgp/.rees file or a builder expression"
    add("validate", cmd_validate, ("input", src), help="check a Cayley table")
    add("member", cmd_member, ("input", src), help="test membership in Var AC2")
    add("identity", cmd_identity, ("input", src), ("identity", "identity text 'u = v'"),
        help="check an identity by substitution")
    add("ac2-identity", cmd_ac2_identity, ("identity", "identity text 'u = v'"),
        help="decide an identity of AC2 from word graphs and parities")
    add("analyze", cmd_analyze, ("input", src), help="Green's relations and structure")
    add("certificate", cmd_certificate, ("word", "a connected word"),
        help="derive w = w w' w")
    add("graph", cmd_graph, ("word", "a word"), help="print the edge list of G(w)")
    b = add("build", cmd_build, ("expression", "AC2, product(A2, C2), rees(file.rees), ..."),
            help="write a Cayley table")
    b.add_argument("-o", "--output", help="file to write; stdout if omitted")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format
    try:
        code, text, payload = args.func(args)
    except NonAssociative as e:
        code, text = INPUT_ERROR, f"error: not associative: witness triple {e.triple}"
        payload = {"error": "NonAssociative", "witness": list(e.triple), "message": str(e)}
    except (SemigroupError, InputError, NotCompletelyZeroSimple, OSError) as e:
        code, text = INPUT_ERROR, f"error: {e}"
        payload = {"error": type(e).__name__, "message": str(e)}
    if fmt == "json":
        if isinstance(payload, dict):
            payload = {"command": args.command, "exit": code, **payload}
        print(json.dumps(payload, indent=2))
    else:
        print(text, file=sys.stderr if code == INPUT_ERROR else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
