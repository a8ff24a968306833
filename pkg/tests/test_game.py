from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cmfg.game import (check_nondegeneracy, inverse_cdf, lipschitz_spotcheck, noise_form,
                       sample_next, transition)
from cmfg.measures import FiniteDist
from cmfg.numeric import InputError
from cmfg.toyexample import ToyParams, build_game


@pytest.fixture
def toy():
    return build_game(ToyParams())


def test_transition_rejects_out_of_range(toy):
    m = toy.initial
    with pytest.raises(InputError):
        transition(toy, 2, 0, m, 0)
    with pytest.raises(InputError):
        transition(toy, 0, 2, m, 0)
    with pytest.raises(InputError):
        transition(toy, 0, 0, m, 5)


def test_toy_kernel_entries(toy):
    m = toy.initial
    assert tuple(transition(toy, 0, 0, m, 1)) == (Fraction(3, 4), Fraction(1, 4))
    assert tuple(transition(toy, 1, 1, m, 1)) == (Fraction(1, 4), Fraction(3, 4))
    assert tuple(transition(toy, 0, 1, m, 0)) == (Fraction(1, 2), Fraction(1, 2))


def test_noise_form_partitions_unit_interval(toy):
    parts = noise_form(toy, 0, 0, toy.initial, 1)
    assert parts[0] == (0, Fraction(3, 4), 0)
    assert parts[-1][1] == 1
    for (_, hi, _), (lo, _, _) in zip(parts, parts[1:]):
        assert hi == lo


def test_inverse_cdf_boundaries():
    p = [0.25, 0.5, 0.25]
    # [lo, hi): the left endpoint belongs to the interval
    assert inverse_cdf(p, 0.0) == 0
    assert inverse_cdf(p, 0.25) == 1
    assert inverse_cdf(p, 0.7499) == 1
    assert inverse_cdf(p, 0.75) == 2
    assert inverse_cdf(p, 0.999999) == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=5),
       st.floats(0.0, 0.999999))
def test_inverse_cdf_lands_in_its_interval(w, u):
    p = np.array(w) / sum(w)
    k = int(inverse_cdf(p, u))
    cum = np.concatenate([[0.0], np.cumsum(p)])
    assert 0 <= k < len(p)
    assert cum[k] <= u + 1e-12
    assert u < cum[k + 1] + 1e-12 or k == len(p) - 1


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 0.999999), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_monotone_coupling(u, a, b):
    # same uniform, more mass on state 0 never moves the draw to a larger index
    lo, hi = sorted((a, b))
    assert inverse_cdf([hi, 1 - hi], u) <= inverse_cdf([lo, 1 - lo], u)


def test_sample_next_accepts_fixed_uniform(toy):
    assert sample_next(toy, 0.74, 0, 0, toy.initial, 1) == 0
    assert sample_next(toy, 0.76, 0, 0, toy.initial, 1) == 1


def test_nondegeneracy_on_toy(toy):
    rep = check_nondegeneracy(toy, [toy.initial, FiniteDist.of(["1", "0"])])
    assert rep.passed
    assert rep.details["min_entry"] == Fraction(1, 4)


def test_nondegeneracy_empty_list_warns(toy):
    rep = check_nondegeneracy(toy, [])
    assert rep.passed and rep.notes


def test_lipschitz_spotcheck_toy(toy):
    rep = lipschitz_spotcheck(toy, 200, np.random.default_rng(3))
    # |M(m) - M(m')| <= 2 |m - m'| in the metric, and the costs are M times +-1
    assert 0 < rep.details["lower_bound_L"] <= 2 + 1e-9
    with pytest.raises(InputError):
        lipschitz_spotcheck(toy, 1, np.random.default_rng(0))
