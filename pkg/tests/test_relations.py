import pytest
from hypothesis import given, strategies as st

from frpkit.relations import (
    BaseMismatch,
    Relation,
    compose_bits,
    converse_bits,
    least_pair,
    pairs_of,
    rel_boolean,
    rel_compose,
    rel_identity,
)


def set_compose(r, s):
    return {(x, z) for (x, y) in r for (y2, z) in s if y == y2}


@st.composite
def relations(draw, size=None):
    n = size if size is not None else draw(st.integers(1, 5))
    bits = draw(st.integers(0, (1 << (n * n)) - 1))
    return Relation(n, bits)


@st.composite
def relation_pairs(draw):
    n = draw(st.integers(1, 5))
    return draw(relations(n)), draw(relations(n))


@st.composite
def relation_triples(draw):
    n = draw(st.integers(1, 4))
    return draw(relations(n)), draw(relations(n)), draw(relations(n))


def test_pair_bit_layout():
    r = Relation.from_pairs(3, [(0, 1), (2, 0)])
    assert r.bits == (1 << 1) | (1 << 6)
    assert r.pairs() == [(0, 1), (2, 0)]
    assert (0, 1) in r and (1, 0) not in r


def test_constants():
    assert Relation.full(2).pairs() == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert Relation.identity(3).pairs() == [(0, 0), (1, 1), (2, 2)]
    assert Relation.empty(4).bits == 0
    assert rel_identity(2) == Relation.identity(2)


def test_compose_frozen_example():
    lt = Relation.from_pairs(3, [(0, 1), (0, 2), (1, 2)])
    assert lt.compose(lt).pairs() == [(0, 2)]
    assert lt.converse().pairs() == [(1, 0), (2, 0), (2, 1)]
    assert rel_compose(lt, lt.converse()).pairs() == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        Relation(0, 0)
    with pytest.raises(ValueError):
        Relation(2, 1 << 4)
    with pytest.raises(ValueError):
        Relation.from_pairs(2, [(0, 2)])
    with pytest.raises(BaseMismatch):
        Relation.full(2) | Relation.full(3)


def test_least_pair_and_pairs_of():
    assert least_pair(0, 3) is None
    assert least_pair(0b100000, 3) == (1, 2)
    assert pairs_of(0b1001, 2) == [(0, 0), (1, 1)]


def test_rel_boolean_kinds():
    r = Relation.from_pairs(2, [(0, 0)])
    s = Relation.from_pairs(2, [(0, 0), (1, 1)])
    assert rel_boolean("union", r, s) == s
    assert rel_boolean("intersection", r, s) == r
    assert rel_boolean("complement", r).pairs() == [(0, 1), (1, 0), (1, 1)]
    assert rel_boolean("difference", s, r).pairs() == [(1, 1)]


def test_padding_keeps_pairs():
    r = Relation.from_pairs(2, [(0, 1), (1, 1)])
    p = r.padded(4)
    assert p.size == 4 and p.pairs() == r.pairs()


def test_render():
    r = Relation.from_pairs(2, [(0, 1)])
    assert r.render() == "(0,1)"
    assert r.render(["a", "b"]) == "(a,b)"


@given(relation_pairs())
def test_compose_matches_set_oracle(rs):
    r, s = rs
    got = set(r.compose(s).pairs())
    assert got == set_compose(set(r.pairs()), set(s.pairs()))
    assert compose_bits(r.bits, s.bits, r.size) == r.compose(s).bits


@given(relations())
def test_converse_matches_oracle(r):
    assert set(r.converse().pairs()) == {(y, x) for (x, y) in r.pairs()}
    assert converse_bits(converse_bits(r.bits, r.size), r.size) == r.bits


@given(relation_triples())
def test_composition_associative(rst):
    r, s, t = rst
    assert r.compose(s).compose(t) == r.compose(s.compose(t))


@given(relation_pairs())
def test_converse_antidistributes(rs):
    r, s = rs
    assert r.compose(s).converse() == s.converse().compose(r.converse())


@given(relations())
def test_identity_is_unit(r):
    i = Relation.identity(r.size)
    assert r.compose(i) == r == i.compose(r)


@given(relation_pairs())
def test_boolean_laws(rs):
    r, s = rs
    assert -(r | s) == (-r) & (-s)
    assert (r - s) == r & -s
    assert (r & s) <= r <= (r | s)
    assert -(-r) == r
