import random

import pytest
from hypothesis import given, settings, strategies as st

from brinthompson.clopen import Clopen, parse_clopen
from brinthompson.embeddings import (
    EmbeddingSpec,
    NoWitness,
    anchor_preimage,
    check_anchor,
    check_full_support,
    check_local_regularity,
    identity_spec,
    injective_on,
    iota,
    push_forward,
    random_point,
    witness_local_density,
)
from brinthompson.serialize import data_file, generators_from_dict, load_json
from brinthompson.tables import compose, is_identity, localize, random_element, rsupp
from brinthompson.words import Signature, SignatureMismatch, parse_point, parse_tuple

from conftest import S2, S22, S23, clopens, elements, points

S222 = Signature((2, 2, 2))
SWAP_AXES = EmbeddingSpec(S22, S222, (2, 0))
MIXED = EmbeddingSpec(Signature((3,)), S23, (1,))


def test_spec_validation():
    with pytest.raises(ValueError):
        EmbeddingSpec(S22, S222, (0, 0))
    with pytest.raises(ValueError):
        EmbeddingSpec(Signature((3,)), S22, (0,))
    with pytest.raises(ValueError):
        EmbeddingSpec(S2, S22, (2,))
    assert EmbeddingSpec.from_dict({"source": [2], "target": [2, 2], "map": {"0": 0}}) == iota()
    assert EmbeddingSpec.from_dict(SWAP_AXES.to_dict()) == SWAP_AXES


def test_push_forward_of_swap(swap):
    img = push_forward(iota(), swap)
    T = parse_tuple
    assert set(img.rows) == {(T("[00,]"), T("[01,]")), (T("[01,]"), T("[00,]")), (T("[1,]"), T("[1,]"))}
    assert rsupp(img) == parse_clopen("{[0,]}", S22)


def test_push_forward_signature_mismatch(swap):
    with pytest.raises(SignatureMismatch):
        push_forward(SWAP_AXES, swap)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([iota(), SWAP_AXES, MIXED, identity_spec(S23)]).flatmap(
    lambda s: st.tuples(st.just(s), elements(s.source), elements(s.source))))
def test_push_forward_is_injective_homomorphism(data):
    spec, a, b = data
    assert push_forward(spec, compose(a, b)) == compose(push_forward(spec, a), push_forward(spec, b))
    assert injective_on(spec, a)
    assert is_identity(push_forward(spec, compose(a, a.__invert__())))


def test_composite_spec():
    first = EmbeddingSpec(S2, S22, (1,))
    second = SWAP_AXES
    both = first.then(second)
    assert both == EmbeddingSpec(S2, S222, (0,))
    e = random_element(S2, 3, 5)
    assert push_forward(both, e) == push_forward(second, push_forward(first, e))


def test_anchor_preimage_examples():
    assert anchor_preimage(iota(), parse_clopen("{[0]}", S2)) == parse_clopen("{[0,]}", S22)
    assert anchor_preimage(SWAP_AXES, parse_clopen("{[1,0]}", S22)) == parse_clopen("{[0,,1]}", S222)


@given(st.sampled_from([iota(), SWAP_AXES]).flatmap(
    lambda s: st.tuples(st.just(s), clopens(s.source), clopens(s.source))))
def test_anchor_preimage_is_lattice_homomorphism(data):
    spec, a, b = data
    pre = lambda c: anchor_preimage(spec, c)
    assert pre(a | b) == pre(a) | pre(b)
    assert pre(a & b) == pre(a) & pre(b)
    assert pre(a.complement()) == pre(a).complement()
    assert pre(a).measure() == a.measure()


@given(st.sampled_from([iota(), SWAP_AXES, MIXED]).flatmap(
    lambda s: st.tuples(st.just(s), clopens(s.source), points(s.target))))
def test_anchor_preimage_matches_projection(data):
    spec, c, y = data
    assert anchor_preimage(spec, c).contains_point(y) == c.contains_point(spec.project(y))


def test_check_anchor_passes_on_random_elements():
    for spec in (iota(), SWAP_AXES, MIXED):
        elems = [random_element(spec.source, 3, s) for s in range(20)]
        report = check_anchor(spec, elems, points_per_element=5, seed=3)
        assert report.ok
        assert report.to_dict()["passed"] == 20


def test_check_anchor_detects_a_wrong_embedding(swap):
    # preimages taken along a different coordinate map must not match
    bad = EmbeddingSpec(S2, S22, (1,))
    report = check_anchor(iota(), [swap])
    assert report.ok
    pre = anchor_preimage(bad, rsupp(swap))
    assert not pre.equals(rsupp(push_forward(iota(), swap)))


def test_local_regularity_examples(swap, swap_right, odometer):
    left_inner = localize(swap, parse_tuple("[0]"))
    report = check_local_regularity(iota(), swap, [left_inner, swap_right, odometer, swap])
    assert [p["source_side"] for p in report.probes] == [True, False, False, True]
    assert report.ok


def test_full_support_examples(swap):
    gens = generators_from_dict(load_json(data_file("v2_gens.json")))
    assert check_full_support(iota(), gens.elements).full_support
    partial = check_full_support(iota(), [swap])
    assert partial.clopen_fixed == parse_clopen("{[1,]}", S22)
    assert not partial.full_support


def test_full_support_sees_isolated_fixed_points(x0):
    report = check_full_support(identity_spec(S2), [x0])
    assert report.clopen_certified
    assert not report.full_support
    kinds = sorted(d["set"] for d in report.to_dict()["global_fixed_pieces"])
    assert kinds == ["[(0)]", "[(1)]"]


def test_density_witness_example():
    y = parse_point("[00(1),(0)]")
    U = parse_clopen("{[00,]}", S22)
    tau = witness_local_density(iota(), y, U)
    sup = rsupp(push_forward(iota(), tau))
    assert sup.contains_point(y)
    assert sup.subset(U)


def test_density_witness_rejects_points_outside():
    with pytest.raises(NoWitness):
        witness_local_density(iota(), parse_point("[1(0),(0)]"), parse_clopen("{[0,]}", S22))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([iota(), SWAP_AXES, MIXED]).flatmap(
    lambda s: st.tuples(st.just(s), points(s.target), st.integers(0, 4))))
def test_density_witnesses_exist_around_every_point(data):
    spec, y, n = data
    # pushed supports never constrain passive coordinates, so only saturated
    # neighbourhoods can contain one
    cyl = spec.lift_tuple(spec.project(y).unroll([n] * spec.source.m))
    U = Clopen.cylinder(spec.target, cyl)
    tau = witness_local_density(spec, y, U)
    sup = rsupp(push_forward(spec, tau))
    assert sup.contains_point(y) and sup.subset(U)


def test_random_point_is_deterministic():
    a = [random_point(S22, random.Random(4)) for _ in range(3)]
    b = [random_point(S22, random.Random(4)) for _ in range(3)]
    assert a == b
