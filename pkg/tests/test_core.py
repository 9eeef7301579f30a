import pytest
from hypothesis import given, settings, strategies as st

from ac2var.core import (
    NAMED,
    ElementSet,
    build_named,
    direct_product,
    find_embedding,
    find_identity,
    find_zero,
    format_sgp,
    from_table,
    idempotents,
    is_isomorphic,
    is_morphism,
    is_regular_element,
    parse_sgp,
    projections,
    subsemigroup,
    subsemigroup_closure,
)
from ac2var.errors import EmptySeed, IndexOutOfRange, NonAssociative, ParseError, UnknownName
from ac2var.structure import greens_relations, is_regular_via_D

AC2_TABLE = (
    (0, 2, 2, 0, 4, 5),
    (3, 4, 1, 4, 4, 5),
    (0, 4, 2, 4, 4, 5),
    (3, 1, 1, 3, 4, 5),
    (4, 4, 4, 4, 4, 5),
    (5, 5, 5, 5, 5, 4),
)


def test_ac2_table_and_labels(ac2):
    assert ac2.table == AC2_TABLE
    assert ac2.labels == ("a", "b", "ab", "ba", "0", "c")


def test_ac2_relations(ac2):
    a, b, zero, c = (ac2.index(s) for s in ("a", "b", "0", "c"))
    assert ac2.mul(a, a) == a
    assert ac2.product([a, b, a]) == a
    assert ac2.product([b, a, b]) == b
    assert ac2.mul(b, b) == zero
    assert ac2.mul(c, c) == zero
    for x in range(5):
        assert ac2.mul(x, c) == c == ac2.mul(c, x)


def test_zero_of_a2_is_not_zero_of_ac2(ac2, a2):
    assert find_zero(a2) == a2.index("0")
    assert find_zero(ac2) is None


@pytest.mark.parametrize("name", [n for n in NAMED if ":" not in n])
def test_named_builders_associative(name):
    S = build_named(name)
    assert from_table(S.table, S.labels) == S


@pytest.mark.parametrize("name,order", [("cyclic:5", 5), ("null:3", 3), ("leftzero:4", 4), ("E", 1), ("B21", 6)])
def test_parametrized_orders(name, order):
    assert build_named(name).order == order


def test_unknown_name():
    with pytest.raises(UnknownName):
        build_named("Z7")


def test_b21_labels_and_identity(b21):
    assert b21.labels == ("0", "1", "e12", "e21", "e11", "e22")
    assert find_identity(b21) == b21.index("1")


def test_ac2_embeds_in_a2_times_c2(ac2, a2c2):
    m = find_embedding(ac2, a2c2)
    assert m is not None and m.injective
    assert m.map == (0, 2, 4, 6, 8, 9)
    assert is_morphism(ac2, a2c2, m.map)


def test_projections_are_morphisms(a2c2):
    A2, C2 = build_named("A2"), build_named("C2")
    p, q = projections(A2, C2)
    assert is_morphism(a2c2, A2, p.map)
    assert is_morphism(a2c2, C2, q.map)


def test_isomorphism_detects_difference():
    assert is_isomorphic(build_named("cyclic:2"), build_named("C2"))
    assert not is_isomorphic(build_named("C2"), build_named("leftzero:2"))


def test_idempotents(ac2):
    assert idempotents(ac2).labels(ac2) == ["a", "ab", "ba", "0"]


def test_regular_element_witness(ac2):
    b = ac2.index("b")
    w = is_regular_element(ac2, b)
    assert w is not None and ac2.product([b, w, b]) == b
    assert is_regular_element(ac2, ac2.index("c")) is not None
    assert is_regular_element(build_named("null:3"), 1) is None


def test_from_table_errors():
    with pytest.raises(IndexOutOfRange):
        from_table([[0, 2], [1, 0]])
    with pytest.raises(ParseError):
        from_table([[0, 1], [1]])
    # x*y = y+1 mod 2 is not associative
    with pytest.raises(NonAssociative) as exc:
        from_table([[1, 0], [1, 0]])
    i, j, k = exc.value.triple
    t = ((1, 0), (1, 0))
    assert t[t[i][j]][k] != t[i][t[j][k]]


def test_sgp_round_trip(ac2):
    assert parse_sgp(format_sgp(ac2)) == ac2


@pytest.mark.parametrize("text", [
    "",
    "two\n0 0\n0 0\n",
    "2\n0 0\n",
    "2\n0 0\n0 x\n",
    "2\n0 0 0\n0 0\n",
    "1\n0\nlabels: e\nextra\n",
    "1\n0\njunk\n",
])
def test_sgp_rejects(text):
    with pytest.raises(ParseError):
        parse_sgp(text)


def test_sgp_one_element():
    S = parse_sgp("1\n0\n")
    assert S.order == 1


def test_subsemigroup_closure(b21):
    e12 = b21.index("e12")
    closed = subsemigroup_closure(b21, [e12])
    assert closed.labels(b21) == ["0", "e12"]
    with pytest.raises(EmptySeed):
        subsemigroup_closure(b21, [])


def test_subsemigroup_restricts(ac2):
    sub, parent = subsemigroup(ac2, [0, 1, 2, 3, 4])
    assert is_isomorphic(sub, build_named("A2"))
    assert parent == (0, 1, 2, 3, 4)


named_small = st.sampled_from(["A2", "AC2", "B21", "C2", "A0", "cyclic:3", "null:2", "leftzero:2"])


@settings(max_examples=40, deadline=None)
@given(named_small, st.data())
def test_closure_is_closed_and_minimal(name, data):
    S = build_named(name)
    seed = data.draw(st.sets(st.integers(0, S.order - 1), min_size=1))
    closed = subsemigroup_closure(S, seed)
    assert set(seed) <= set(closed)
    for x in closed:
        for y in closed:
            assert S.mul(x, y) in closed
    # every member is a product of seed elements, by breadth-first products
    reach = set(seed)
    frontier = set(seed)
    while frontier:
        frontier = {S.mul(x, s) for x in frontier for s in seed} - reach
        reach |= frontier
    assert reach == set(closed)


@settings(max_examples=20, deadline=None)
@given(named_small, named_small)
def test_direct_product_associative(a, b):
    P = direct_product(build_named(a), build_named(b))
    assert from_table(P.table, P.labels) == P


@pytest.mark.parametrize("name", ["A2", "AC2", "B21", "A0", "C2", "cyclic:4", "null:3", "leftzero:3"])
def test_regular_iff_d_class_has_idempotent(name):
    S = build_named(name)
    g = greens_relations(S)
    for x in S.elements():
        assert (is_regular_element(S, x) is not None) == is_regular_via_D(S, x, g)


def test_element_set_basics():
    s = ElementSet.of(5, [3, 1])
    assert list(s) == [1, 3] and 3 in s and 2 not in s and len(s) == 2
    assert s.mask == (False, True, False, True, False)
