import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from brinthompson.clopen import Clopen, parse_clopen
from brinthompson.tables import (
    Element,
    MeasureDeficit,
    OverlappingCells,
    Table,
    TableSignatureMismatch,
    apply,
    commutator,
    commutes,
    compose,
    conjugate,
    fixed_locus,
    image_clopen,
    invert,
    is_identity,
    localize,
    power,
    random_element,
    random_local_element,
    rsupp,
    validate,
)
from brinthompson.words import RationalPoint, parse_point, parse_tuple

from conftest import S2, S3, S22, S23, elements, points, words


def T(s):
    return parse_tuple(s)


def P(s):
    return parse_point(s)


def all_points(sig, max_pre=3, max_per=2):
    """Every eventually periodic point with short preperiod and period."""
    per_coord = []
    for k in sig.sizes:
        ws = [()] + [w for n in range(1, max_pre + 1) for w in itertools.product(range(k), repeat=n)]
        ps = [w for n in range(1, max_per + 1) for w in itertools.product(range(k), repeat=n)]
        per_coord.append([(a, b) for a in ws for b in ps])
    return {RationalPoint.make(c) for c in itertools.product(*per_coord)}


SMALL_POINTS = {S2: sorted(all_points(S2), key=str), S22: sorted(all_points(S22, 2, 1), key=str)}


def table(sig, rows):
    return Table.make(sig, [(tuple(map(T_word, v)), tuple(map(T_word, u))) for v, u in rows])


def T_word(s):
    return tuple(int(c) for c in s)


# validation


def test_validate_accepts_swap_table():
    validate(table(S2, [(["0"], ["1"]), (["1"], ["0"])]))


def test_validate_overlap():
    with pytest.raises(OverlappingCells) as err:
        validate(table(S2, [(["0"], ["0"]), (["01"], ["1"])]))
    assert err.value.kind == "OverlappingCells"


def test_validate_deficit():
    with pytest.raises(MeasureDeficit) as err:
        validate(table(S2, [(["0"], ["0"])]))
    assert err.value.deficit == Fraction(1, 2)


def test_validate_unbalanced_sides():
    with pytest.raises(MeasureDeficit):
        validate(table(S2, [(["0"], ["0"]), (["1"], ["10"])]))


def test_validate_signature_mismatch():
    with pytest.raises(TableSignatureMismatch):
        validate(Table.make(S22, [((T_word("0"),), (T_word("0"),))]))


# action


def test_apply_swap(swap):
    assert apply(swap, P("[00(1)]")) == P("[01(1)]")
    assert apply(swap, P("[1(0)]")) == P("[1(0)]")


def test_apply_respects_infinite_tails():
    e = Element.from_rows(S2, [((T_word("0"),), (T_word("00"),)), ((T_word("10"),), (T_word("01"),)),
                               ((T_word("11"),), (T_word("1"),))])
    assert apply(e, P("[(0)]")) == P("[(0)]")
    assert apply(e, P("[(01)]")) == P("[0(01)]")


def direct_compose(a, b, p):
    return apply(a, apply(b, p))


@settings(max_examples=40, deadline=None)
@given(elements(S2), elements(S2))
def test_compose_matches_pointwise_oracle(a, b):
    ab = compose(a, b)
    for p in SMALL_POINTS[S2]:
        assert apply(ab, p) == direct_compose(a, b, p)


@settings(max_examples=20, deadline=None)
@given(elements(S22, 3), elements(S22, 3))
def test_compose_matches_pointwise_oracle_two_dims(a, b):
    ab = compose(a, b)
    for p in SMALL_POINTS[S22]:
        assert apply(ab, p) == direct_compose(a, b, p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([S2, S3, S22, S23]).flatmap(lambda s: elements(s)), st.data())
def test_inverse_undoes_action(e, data):
    inv = invert(e)
    for _ in range(5):
        p = data.draw(points(e.signature))
        assert apply(inv, apply(e, p)) == p
    assert is_identity(compose(e, inv))
    assert is_identity(compose(inv, e))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([S2, S22, S23]).flatmap(lambda s: st.tuples(elements(s), elements(s), elements(s))))
def test_associativity(abc):
    a, b, c = abc
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_identity_detection():
    assert is_identity(Element.identity(S22))
    redundant = Element.from_rows(S2, [((T_word("00"),), (T_word("00"),)), ((T_word("01"),), (T_word("01"),)),
                                       ((T_word("1"),), (T_word("1"),))], reduce=False)
    assert is_identity(redundant)


def test_identity_is_neutral(swap):
    one = Element.identity(S2)
    assert compose(one, swap) == swap
    assert compose(swap, one) == swap


def test_equality_ignores_table_choice(swap):
    refined = Element.from_rows(S2, [((T_word("00"),), (T_word("01"),)), ((T_word("01"),), (T_word("00"),)),
                                     ((T_word("10"),), (T_word("10"),)), ((T_word("11"),), (T_word("11"),))],
                                reduce=False)
    assert refined == swap
    assert hash(refined) == hash(swap)


# supports


def test_rsupp_examples(swap, odometer):
    assert rsupp(swap) == parse_clopen("{[0]}", S2)
    assert rsupp(Element.identity(S2)).is_empty()
    assert rsupp(odometer) == Clopen.whole(S2)


def test_rsupp_of_conjugate(swap, odometer):
    assert rsupp(conjugate(swap, odometer)) == parse_clopen("{[1]}", S2)


def test_fixed_locus_examples():
    e = Element.from_rows(S2, [((T_word("0"),), (T_word("00"),)), ((T_word("10"),), (T_word("01"),)),
                               ((T_word("11"),), (T_word("1"),))])
    loci = {r.cylinder: r for r in fixed_locus(e)}
    first = loci[(T_word("0"),)]
    assert first.factors[0].kind == "point"
    assert RationalPoint.make([first.factors[0].point]) == P("[(0)]")


def test_fixed_locus_of_swap_is_empty(swap):
    assert all(r.is_empty for r in fixed_locus(swap))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([S2, S22]).flatmap(lambda s: elements(s)), st.data())
def test_points_off_support_are_fixed(e, data):
    supp = rsupp(e)
    assert supp == rsupp(e, side="u")
    for _ in range(8):
        p = data.draw(points(e.signature))
        if not supp.contains_point(p):
            assert apply(e, p) == p


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([S2, S22]).flatmap(lambda s: st.tuples(elements(s), elements(s))))
def test_support_of_product_inside_union(ab):
    a, b = ab
    assert rsupp(compose(a, b)).subset(rsupp(a) | rsupp(b))
    assert rsupp(invert(a)) == rsupp(a)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([S2, S22]).flatmap(lambda s: st.tuples(elements(s), elements(s))))
def test_disjoint_supports_commute(ab):
    a, b = ab
    if rsupp(a).isdisjoint(rsupp(b)):
        assert commutes(a, b)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([S2, S22]).flatmap(lambda s: st.tuples(elements(s), elements(s))))
def test_conjugate_moves_support(ag):
    a, g = ag
    assert rsupp(conjugate(a, g)) == image_clopen(g, rsupp(a))


def test_commutes_examples(swap, swap_right, odometer):
    assert commutes(swap, swap_right)
    assert not commutes(swap, odometer)
    assert commutes(swap, Element.identity(S2))


def test_commutator_and_power(swap, x0):
    assert is_identity(commutator(swap, swap))
    assert is_identity(power(swap, 12))
    assert not is_identity(power(x0, 12))
    assert power(x0, -2) == invert(compose(x0, x0))
    assert is_identity(power(x0, 0))


def test_image_clopen(swap):
    assert image_clopen(swap, parse_clopen("{[00]}", S2)) == parse_clopen("{[01]}", S2)


# localization


def test_localize_example(swap):
    loc = localize(swap, T("[1]"))
    assert rsupp(loc) == parse_clopen("{[10]}", S2)
    assert apply(loc, P("[100(1)]")) == P("[101(1)]")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([S2, S22]).flatmap(lambda s: st.tuples(elements(s), elements(s))), st.data())
def test_localize_is_a_homomorphism(ab, data):
    a, b = ab
    sig = a.signature
    mu = tuple(data.draw(words(k, 3)) for k in sig.sizes)
    la, lb = localize(a, mu), localize(b, mu)
    assert compose(la, lb) == localize(compose(a, b), mu)
    assert rsupp(la).subset(Clopen.cylinder(sig, mu))


# random generation


def test_random_element_is_deterministic_and_valid():
    for sig in (S2, S3, S22, S23):
        for seed in range(20):
            a = random_element(sig, 4, seed)
            assert a.rows == random_element(sig, 4, seed).rows
            validate(a.table)
            b = random_local_element(sig, 3, seed)
            validate(b.table)


def test_random_element_rejects_zero_depth():
    with pytest.raises(ValueError):
        random_element(S2, 0, 1)
