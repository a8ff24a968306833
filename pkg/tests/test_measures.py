from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmfg.measures import FiniteDist, MeasureFlow, dist, dist_T, empirical, mean_under
from cmfg.numeric import FLOAT, InputError, close, fmt, parse_number


def dists(n):
    return st.lists(st.integers(0, 20), min_size=n, max_size=n).filter(lambda w: sum(w) > 0).map(
        lambda w: FiniteDist(tuple(Fraction(v, sum(w)) for v in w)))


def test_parse_number_exact_decimal():
    assert parse_number("0.1") == Fraction(1, 10)
    assert parse_number("3/8") == Fraction(3, 8)
    assert parse_number(0.25) == Fraction(1, 4)
    assert parse_number("1/3", FLOAT) == pytest.approx(1 / 3)
    with pytest.raises(InputError):
        parse_number("abc")
    with pytest.raises(InputError):
        parse_number(True)


def test_fmt_roundtrip():
    assert fmt(Fraction(3, 8)) == "3/8"
    assert fmt(Fraction(4, 2)) == "2"
    assert fmt(0.5) == "0.5"


def test_finite_dist_rejects_bad_weights():
    with pytest.raises(InputError):
        FiniteDist((Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(InputError):
        FiniteDist((Fraction(3, 2), Fraction(-1, 2)))
    FiniteDist((0.5, 0.5 + 1e-14))  # float tolerance
    with pytest.raises(InputError):
        FiniteDist((0.5, 0.5 + 1e-9))


def test_delta_uniform():
    assert FiniteDist.delta(1, 3).weights == (0, 1, 0)
    assert sum(FiniteDist.uniform(4).weights) == 1


def test_dist_values():
    a = FiniteDist.of(["1/2", "1/2"])
    b = FiniteDist.of(["3/4", "1/4"])
    assert dist(a, b) == Fraction(1, 4)
    assert dist(FiniteDist.delta(0, 2), FiniteDist.delta(1, 2)) == 1
    with pytest.raises(InputError):
        dist(a, FiniteDist.uniform(3))


def test_dist_T_sums_steps():
    a = MeasureFlow.of([["1/2", "1/2"], ["1/2", "1/2"]])
    b = MeasureFlow.of([["1/2", "1/2"], ["1", "0"]])
    assert dist_T(a, b) == Fraction(1, 2)
    with pytest.raises(InputError):
        dist_T(a, MeasureFlow.of([["1/2", "1/2"]]))


def test_mean_under():
    m = FiniteDist.of(["3/5", "2/5"])
    assert mean_under([1, -1], m) == Fraction(1, 5)


def test_empirical_excludes_observer():
    states = [0, 0, 1, 1, 1]
    e = empirical(states, 2, exclude=0)
    assert e.weights == (Fraction(1, 4), Fraction(3, 4))
    assert empirical(states, 2).weights == (Fraction(2, 5), Fraction(3, 5))
    with pytest.raises(InputError):
        empirical([0], 2, exclude=0)
    with pytest.raises(InputError):
        empirical([3], 2)


@settings(max_examples=60, deadline=None)
@given(dists(3), dists(3), dists(3))
def test_dist_is_a_metric(a, b, c):
    assert dist(a, a) == 0
    assert dist(a, b) == dist(b, a)
    assert 0 <= dist(a, b) <= 1
    assert dist(a, c) <= dist(a, b) + dist(b, c)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=30), st.data())
def test_empirical_is_normalized(states, data):
    k = data.draw(st.integers(0, len(states) - 1))
    e = empirical(states, 4, exclude=k)
    assert sum(e.weights) == 1
    assert all(close(w * (len(states) - 1), round(w * (len(states) - 1))) for w in e.weights)
