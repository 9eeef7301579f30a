"""Cubic-time membership test for the variety generated by AC2.

A finite semigroup S lies in the variety iff it satisfies x^2 = x^4,
xyx = (xy)^3 x, xyxzx = xzxyx, and the subsemigroup generated by its
idempotents satisfies x^2 = x^3.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

from .core import ElementSet, Semigroup, idempotents
from .errors import InternalInvariantViolation, NotAWitness
from .words import CounterExample, Identity, check_identity, eq1, eq2, eq3, eq4, eval_word

MEMBER = "member"
NON_MEMBER = "non-member"


@dataclass(frozen=True)
class IdempotentClosure:
    order: int
    members: ElementSet
    stages: int
    # predecessor link per member: None for idempotents, else (f, e) with f*e = t
    links: dict = field(repr=False)
    stage_of: dict = field(repr=False)

    def __contains__(self, t):
        return t in self.members

    def factorization(self, t: int) -> list[int]:
        """Idempotents e1..em with e1*...*em = t, materialized from the links."""
        if t not in self.members:
            raise KeyError(t)
        out = []
        cur = t
        while self.links[cur] is not None:
            cur, e = self.links[cur]
            out.append(e)
        out.append(cur)
        out.reverse()
        return out

    def stage(self, i: int) -> ElementSet:
        """T_i: elements that appear by stage i."""
        return ElementSet.of(self.order, (t for t, s in self.stage_of.items() if s <= i))


@dataclass
class Certificate:
    kind: str
    identity: Optional[Identity] = None
    counterexample: Optional[CounterExample] = None
    element: Optional[int] = None
    factorization: Optional[list] = None


@dataclass
class MembershipReport:
    verdict: str
    certificate: Certificate
    stages: list = field(default_factory=list)

    @property
    def is_member(self) -> bool:
        return self.verdict == MEMBER

    def to_dict(self, S: Optional[Semigroup] = None) -> dict:
        cert = self.certificate
        assignment = None
        if cert.counterexample is not None:
            assignment = dict(cert.counterexample.assignment)
        out = {
            "verdict": self.verdict,
            "certificate": {
                "kind": cert.kind,
                "identity": None if cert.identity is None else {
                    "tag": cert.identity.tag,
                    "text": str(cert.identity),
                },
                "assignment": assignment,
                "element": cert.element,
                "factorization": cert.factorization,
            },
            "stages": [{"name": name, "micros": micros} for name, micros in self.stages],
        }
        if S is not None and S.labels:
            c = out["certificate"]
            if assignment is not None:
                c["assignment_labels"] = {k: S.label(v) for k, v in assignment.items()}
            if cert.element is not None:
                c["element_label"] = S.label(cert.element)
            if cert.factorization is not None:
                c["factorization_labels"] = [S.label(e) for e in cert.factorization]
        return out

    def to_json(self, S: Optional[Semigroup] = None) -> str:
        return json.dumps(self.to_dict(S), indent=2)

    def verify(self, S: Semigroup) -> bool:
        """Re-evaluate a NO certificate in S; a YES report verifies trivially."""
        cert = self.certificate
        if self.verdict == MEMBER:
            return cert.kind == "PassedAllChecks"
        ident, ce = cert.identity, cert.counterexample
        if ident is None or ce is None:
            return False
        lhs = eval_word(S, ident.lhs, ce.assignment)
        rhs = eval_word(S, ident.rhs, ce.assignment)
        if lhs == rhs or (lhs, rhs) != (ce.lhs_value, ce.rhs_value):
            return False
        if cert.kind == "NonCombinatorialClosure":
            t = cert.element
            sq = S.power(t, 2)
            if sq == S.power(t, 3) or S.product(cert.factorization) != t:
                return False
            return all(S.table[e][e] == e for e in cert.factorization)
        return cert.kind == "FailedIdentity"


def check_basis_123(S: Semigroup) -> Optional[tuple[str, CounterExample]]:
    for ident in (eq1(), eq2(), eq3()):
        ce = check_identity(S, ident)
        if ce is not None:
            return ident.tag, ce
    return None


def idempotent_closure(S: Semigroup) -> IdempotentClosure:
    """Subsemigroup generated by E(S) via T_{i+1} = T_i T_1.

    Only the elements new at stage i are multiplied by T_1 in round i+1,
    since T_{i+1} = T_i u N_i T_1 where N_i = T_i minus T_{i-1}.
    """
    table = S.table
    t1 = list(idempotents(S))
    if not t1:
        raise InternalInvariantViolation("a finite semigroup always has an idempotent")
    links: dict = {e: None for e in t1}
    stage_of = {e: 1 for e in t1}
    frontier = t1
    stage = 1
    while True:
        new = []
        for f in frontier:
            row = table[f]
            for e in t1:
                p = row[e]
                if p not in links:
                    links[p] = (f, e)
                    stage_of[p] = stage + 1
                    new.append(p)
        if not new:
            break
        stage += 1
        frontier = new
    if stage > S.order:
        raise InternalInvariantViolation(f"stage count {stage} exceeds |S| = {S.order}")
    return IdempotentClosure(S.order, ElementSet.of(S.order, links), stage, links, stage_of)


def combinatorial_via_eq5(S: Semigroup, T: IdempotentClosure) -> Optional[int]:
    table = S.table
    for t in T.members:
        sq = table[t][t]
        if sq != table[sq][t]:
            return t
    return None


def derive_eq4_witness(S: Semigroup, T: IdempotentClosure, t: int) -> tuple[Identity, CounterExample]:
    sq = S.power(t, 2)
    if sq == S.power(t, 3):
        raise NotAWitness(f"element {S.label(t)} satisfies t^2 = t^3")
    factors = T.factorization(t)
    if len(factors) < 2:
        raise InternalInvariantViolation("an idempotent cannot violate x^2 = x^3")
    ident = eq4(len(factors))
    assignment = {f"x{i}": e for i, e in enumerate(factors, start=1)}
    lhs = eval_word(S, ident.lhs, assignment)
    rhs = eval_word(S, ident.rhs, assignment)
    if lhs == rhs:
        raise InternalInvariantViolation("derived eq4 instance does not separate")
    return ident, CounterExample(assignment, lhs, rhs)


def membership_AC2(S: Semigroup) -> MembershipReport:
    stages = []
    clock = time.perf_counter

    start = clock()
    failed = check_basis_123(S)
    stages.append(("identities_1_3", int((clock() - start) * 1e6)))
    if failed is not None:
        tag, ce = failed
        ident = {"eq1": eq1, "eq2": eq2, "eq3": eq3}[tag]()
        cert = Certificate("FailedIdentity", identity=ident, counterexample=ce)
        return MembershipReport(NON_MEMBER, cert, stages)

    start = clock()
    closure = idempotent_closure(S)
    stages.append(("idempotent_closure", int((clock() - start) * 1e6)))

    start = clock()
    bad = combinatorial_via_eq5(S, closure)
    stages.append(("closure_eq5", int((clock() - start) * 1e6)))
    if bad is None:
        return MembershipReport(MEMBER, Certificate("PassedAllChecks"), stages)

    ident, ce = derive_eq4_witness(S, closure, bad)
    cert = Certificate(
        "NonCombinatorialClosure",
        identity=ident,
        counterexample=ce,
        element=bad,
        factorization=closure.factorization(bad),
    )
    return MembershipReport(NON_MEMBER, cert, stages)
