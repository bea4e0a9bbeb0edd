import pytest
from hypothesis import strategies as st

from brinthompson.clopen import Clopen
from brinthompson.serialize import data_file, element_from_dict, load_json
from brinthompson.tables import Element, random_element, random_local_element, transposition
from brinthompson.words import RationalPoint, Signature

S2 = Signature((2,))
S3 = Signature((3,))
S22 = Signature((2, 2))
S23 = Signature((2, 3))


def words(k, max_len=4, min_len=0):
    return st.lists(st.integers(0, k - 1), min_size=min_len, max_size=max_len).map(tuple)


def word_tuples(sig, max_len=4):
    return st.tuples(*(words(k, max_len) for k in sig.sizes))


def points(sig, max_pre=3, max_per=3):
    coord = [st.tuples(words(k, max_pre), words(k, max_per, min_len=1)) for k in sig.sizes]
    return st.tuples(*coord).map(RationalPoint.make)


def clopens(sig, max_len=3, max_cyl=4):
    return st.lists(word_tuples(sig, max_len), min_size=0, max_size=max_cyl).map(
        lambda cs: Clopen.from_cylinders(sig, cs))


signatures = st.sampled_from([S2, S3, S22, S23])


def elements(sig, max_depth=4):
    return st.builds(
        lambda d, s, local: (random_local_element if local else random_element)(sig, d, s),
        st.integers(1, max_depth), st.integers(0, 2**31), st.booleans())


def load_element(name):
    return element_from_dict(load_json(data_file(name)))


@pytest.fixture
def swap():
    """The transposition of the cylinders 00 and 01 in V_2."""
    return transposition(S2, ((0, 0),), ((0, 1),))


@pytest.fixture
def swap_right():
    return transposition(S2, ((1, 0),), ((1, 1),))


@pytest.fixture
def odometer():
    return Element.from_rows(S2, [(((0,),), ((1,),)), (((1, 0),), ((0, 0),)), (((1, 1),), ((0, 1),))])


@pytest.fixture
def x0():
    return Element.from_rows(S2, [(((0,),), ((0, 0),)), (((1, 0),), ((0, 1),)), (((1, 1),), ((1,),))])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
