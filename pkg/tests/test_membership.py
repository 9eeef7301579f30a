import json
import random

import pytest

from ac2var.core import build_named, direct_product, idempotents, subsemigroup, subsemigroup_closure
from ac2var.errors import NotAWitness
from ac2var.membership import (
    check_basis_123,
    combinatorial_via_eq5,
    derive_eq4_witness,
    idempotent_closure,
    membership_AC2,
)
from ac2var.structure import is_aperiodic
from ac2var.words import check_identity, enumerate_identities, eval_word, holds_in_AC2


def test_basis_checks_on_fixtures(ac2, b21):
    assert check_basis_123(ac2) is None
    tag, ce = check_basis_123(build_named("cyclic:4"))
    assert tag == "eq1" and ce.assignment == {"x": 1}
    tag, ce = check_basis_123(b21)
    # B21 already breaks xyx = (xy)^3 x, so the eq3 failure is never reached
    assert tag == "eq2"
    assert {k: b21.label(v) for k, v in ce.assignment.items()} == {"x": "1", "y": "e12"}


def test_closure_of_ac2(ac2):
    T = idempotent_closure(ac2)
    assert T.members.labels(ac2) == ["a", "b", "ab", "ba", "0"]
    assert T.stages == 2
    b = ac2.index("b")
    assert T.stage_of[b] == 2
    assert [ac2.label(e) for e in T.factorization(b)] == ["ba", "ab"]
    assert list(T.stage(1)) == list(idempotents(ac2))


def test_closure_of_band_and_group():
    L = build_named("leftzero:3")
    T = idempotent_closure(L)
    assert T.stages == 1 and len(T.members) == 3
    C = build_named("C2")
    assert list(idempotent_closure(C).members) == [C.index("1")]


@pytest.mark.parametrize("name", ["AC2", "A2", "B21", "A0", "C2", "cyclic:6", "null:4", "leftzero:3"])
def test_closure_matches_generic_closure(name):
    S = build_named(name)
    T = idempotent_closure(S)
    assert T.members == subsemigroup_closure(S, idempotents(S))
    assert T.stages <= S.order
    for i in range(1, T.stages):
        assert set(T.stage(i)) <= set(T.stage(i + 1))
    for t in T.members:
        assert S.product(T.factorization(t)) == t


def test_eq5_violator(ac2, rees_twisted):
    assert combinatorial_via_eq5(ac2, idempotent_closure(ac2)) is None
    T = idempotent_closure(rees_twisted)
    t = combinatorial_via_eq5(rees_twisted, T)
    assert t is not None
    assert rees_twisted.power(t, 2) != rees_twisted.power(t, 3)


def test_eq4_witness(rees_twisted):
    S = rees_twisted
    T = idempotent_closure(S)
    t = combinatorial_via_eq5(S, T)
    ident, ce = derive_eq4_witness(S, T, t)
    assert ident.tag == "eq4(2)"
    assert eval_word(S, ident.lhs, ce.assignment) == S.power(t, 2)
    assert eval_word(S, ident.rhs, ce.assignment) == S.power(t, 3)
    e = next(iter(idempotents(S)))
    with pytest.raises(NotAWitness):
        derive_eq4_witness(S, T, e)


@pytest.mark.parametrize("fixture", ["ac2", "a2", "rees9", "a2c2"])
def test_members(fixture, request):
    S = request.getfixturevalue(fixture)
    report = membership_AC2(S)
    assert report.is_member
    assert report.certificate.kind == "PassedAllChecks"
    assert [name for name, _ in report.stages] == ["identities_1_3", "idempotent_closure", "closure_eq5"]


@pytest.mark.parametrize("name", ["C2", "E", "A0"])
def test_small_members(name):
    assert membership_AC2(build_named(name)).is_member


@pytest.mark.parametrize("fixture,kind", [
    ("b21", "FailedIdentity"),
    ("rees_twisted", "NonCombinatorialClosure"),
])
def test_non_members_verify(fixture, kind, request):
    S = request.getfixturevalue(fixture)
    report = membership_AC2(S)
    assert not report.is_member
    assert report.certificate.kind == kind
    assert report.verify(S)
    ce = report.certificate.counterexample
    assert ce.lhs_value != ce.rhs_value


@pytest.mark.parametrize("name", ["cyclic:3", "cyclic:4", "cyclic:5"])
def test_non_member_names(name):
    S = build_named(name)
    report = membership_AC2(S)
    assert not report.is_member and report.verify(S)


def test_report_json_fields(b21):
    doc = json.loads(membership_AC2(b21).to_json(b21))
    assert set(doc) == {"verdict", "certificate", "stages"}
    cert = doc["certificate"]
    for key in ("kind", "identity", "assignment", "element", "factorization"):
        assert key in cert
    assert cert["assignment"] == {"x": 1, "y": 2}
    assert all(set(s) == {"name", "micros"} for s in doc["stages"])


def test_verify_rejects_tampered_certificate(b21):
    report = membership_AC2(b21)
    report.certificate.counterexample.assignment["y"] = b21.index("1")
    assert not report.verify(b21)


SMALL_FIXTURES = ["AC2", "A2", "A0", "C2", "E", "leftzero:2", "null:2"]


@pytest.mark.parametrize("name", SMALL_FIXTURES)
def test_yes_is_consistent_at_desk_scale(name):
    S = build_named(name)
    if not membership_AC2(S).is_member:
        pytest.skip("not a member")
    for ident in enumerate_identities(3, 5):
        if holds_in_AC2(ident.lhs, ident.rhs):
            assert check_identity(S, ident) is None, ident


def test_closed_under_products_and_subsemigroups(ac2):
    C2 = build_named("C2")
    assert membership_AC2(direct_product(ac2, C2)).is_member
    rng = random.Random(7)
    for _ in range(10):
        seed = rng.sample(range(ac2.order), rng.randint(1, 3))
        sub, _ = subsemigroup(ac2, subsemigroup_closure(ac2, seed))
        assert membership_AC2(sub).is_member


@pytest.mark.parametrize("name", ["AC2", "A2", "A0", "C2", "leftzero:3", "null:3"])
def test_aperiodicity_bridge(name):
    S = build_named(name)
    assert check_basis_123(S) is None
    T = idempotent_closure(S)
    sub, _ = subsemigroup(S, T.members)
    assert (combinatorial_via_eq5(S, T) is None) == is_aperiodic(sub)
