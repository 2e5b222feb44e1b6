import random

import pytest
from hypothesis import given, strategies as st

from frpkit.algebra import build_algebra
from frpkit.refuter import (
    NotPointAlgebra,
    RefuterError,
    build_increasing_chain,
    find_reflexive_point,
    find_unit_pair,
    natural_order_map,
    point_roles,
    refute_finite_candidate,
)
from frpkit.relations import Relation
from frpkit.representation import CandidateMap, Violation
from frpkit.zoo import cyclic_algebra, point_algebra

from _gen import random_candidate


def empty_images(n):
    return {x: Relation(n, 0) for x in range(8)}


def test_roles_on_point_algebra(pa):
    r = point_roles(pa)
    assert (str(r.le), str(r.gt), str(r.one), str(r.zero)) == ("e+l", "g", "e+l+g", "0")


def test_roles_rejected_elsewhere():
    with pytest.raises(NotPointAlgebra):
        point_roles(cyclic_algebra(2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_natural_order_chain(pa, n):
    m = natural_order_map(pa, n)
    trace = refute_finite_candidate(m)
    assert trace.reflexive_point == 0
    assert trace.chain == list(range(n))
    v = trace.violation
    assert v.symbol == ";" and v.pair == (n - 1, n - 1)
    assert (v.expected, v.actual) == (True, False)
    assert trace.verify(m)


def test_natural_order_stage_functions(pa):
    m = natural_order_map(pa, 3)
    assert find_unit_pair(m) == (0, 0)
    assert find_reflexive_point(m) == 0
    assert build_increasing_chain(m, 0, 2) == [0, 1, 2]
    assert isinstance(build_increasing_chain(m, 0, 3), Violation)


def test_chain_needs_reflexive_start(pa):
    m = natural_order_map(pa, 2)
    images = {x: m.image(x) for x in range(8)}
    images[7] = Relation.from_pairs(2, [(0, 1)])
    with pytest.raises(RefuterError):
        build_increasing_chain(CandidateMap(pa, 2, images), 0, 1)


def test_theta_refutation_frozen(theta):
    trace = refute_finite_candidate(theta)
    assert trace.lines(theta) == [
        "1. (e,e) in img(e+l+g)",
        "2. (e,l) in img(e+l)",
        "3. (l,e) in img(g)",
        "4. (l,l) in img(e+l)",
        "5. (l,l) in img(g)",
        "6. violation operation -: (l,l) in img(-(e+l) = g) but not in complement of img(e+l)",
    ]
    assert trace.verify(theta)


def test_swap_unit_gives_composition_violation(pa):
    images = empty_images(2)
    images[7] = Relation.from_pairs(2, [(0, 1), (1, 0)])
    m = CandidateMap(pa, 2, images)
    trace = refute_finite_candidate(m)
    v = trace.violation
    assert v.symbol == ";" and v.pair == (0, 1)
    assert [str(o) for o in v.operands] == ["e+l+g", "e+l+g"]
    assert trace.verify(m)


def test_everything_empty(pa):
    m = CandidateMap(pa, 2, empty_images(2))
    trace = refute_finite_candidate(m)
    assert trace.facts == []
    assert trace.violation.symbol == "-" and trace.violation.pair == (0, 0)
    assert trace.verify(m)


def test_empty_unit_nonempty_zero(pa):
    images = empty_images(2)
    images[0] = Relation.full(2)
    m = CandidateMap(pa, 2, images)
    trace = refute_finite_candidate(m)
    assert trace.violation.symbol == ";" and trace.violation.pair == (0, 0)
    assert trace.verify(m)


def test_facts_unique(theta):
    facts = refute_finite_candidate(theta).facts
    assert len(facts) == len(set(facts))


def test_other_presentation_of_point_algebra():
    # same algebra with atoms listed in another order and renamed
    A = build_algebra(
        ["lt", "gt", "eq"],
        {"lt": "gt", "gt": "lt", "eq": "eq"},
        ["eq"],
        {
            ("eq", "eq"): ["eq"], ("eq", "lt"): ["lt"], ("lt", "eq"): ["lt"],
            ("eq", "gt"): ["gt"], ("gt", "eq"): ["gt"], ("lt", "lt"): ["lt"],
            ("gt", "gt"): ["gt"], ("lt", "gt"): ["lt", "gt", "eq"],
            ("gt", "lt"): ["lt", "gt", "eq"],
        },
    )
    r = point_roles(A)
    assert set(r.le.atom_names) in ({"eq", "lt"}, {"eq", "gt"})
    m = natural_order_map(A, 3)
    assert refute_finite_candidate(m).verify(m)


def test_seeded_random_maps():
    pa = point_algebra()
    rng = random.Random(99)
    for i in range(300):
        n = 1 + i % 6
        m = random_candidate(rng, pa, n)
        trace = refute_finite_candidate(m)
        assert trace.verify(m)
        assert trace.pump_steps <= n + 2
        assert len(trace.chain) <= n


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_refuter_total_and_sound(seed, n):
    pa = point_algebra()
    m = random_candidate(random.Random(seed), pa, n)
    trace = refute_finite_candidate(m)
    assert trace.violation is not None
    assert trace.verify(m)
