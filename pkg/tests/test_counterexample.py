from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsm.arith import divisors, factor, mobius, mobius_inversion_table
from rsm.counterexample import (
    CounterexampleSpec,
    f0,
    f0_prime,
    f0_prime_closed,
    f0_prime_table,
    f0_table,
    flat_mask,
    mean_value_partial,
    multiplicative_order,
    reef_failure_demo,
    s_case,
    s_case0_character,
    s_character,
    s_character_table,
    s_prime_power,
    s_table,
    s_tilde,
    s_tilde_character,
    s_value,
    win_table_f0,
)
from rsm.ramanujan import ramanujan_sum

P5 = CounterexampleSpec(5)


@pytest.mark.parametrize("p0", [2, 4, 9, 1])
def test_spec_rejects(p0):
    with pytest.raises(ValueError):
        CounterexampleSpec(p0)


def test_f0_examples():
    assert f0(P5, 1) == 4
    assert f0(P5, 6) == 4
    assert f0(P5, 2) == -1
    assert f0_prime(P5, 1) == 4
    assert f0_prime(P5, 5) == -5


@pytest.mark.parametrize("p0", [3, 5, 7])
def test_f0_prime_closed_form_against_inversion(p0):
    spec = CounterexampleSpec(p0)
    X = 10**5
    inverted = mobius_inversion_table(f0_table(spec, X))
    assert np.array_equal(inverted, f0_prime_table(spec, X))
    for d in (1, 2, p0, p0 * p0, 2 * p0, 97):
        assert f0_prime_closed(spec, d) == inverted[d]


@pytest.mark.parametrize("d,value", [(1, 1), (5, -1), (25, 0), (2, -1), (6, 2), (11, 0)])
def test_s_value_examples(d, value):
    assert s_value(P5, d) == value


@given(st.integers(1, 3000))
def test_s_value_definition(d):
    assert s_value(P5, d) == sum(mobius(d // a) for a in divisors(d) if a % 5 == 1)


def test_s_case_examples():
    assert (s_case(P5, 25).case, s_case(P5, 25).value) == (2, 0)
    r = s_case(P5, 10)
    assert r.case == 1 and r.value == -s_value(P5, 2)
    r = s_case(P5, 11)
    assert r.case == 0 and r.value == 0 and "forces" in r.reduction
    with pytest.raises(ValueError):
        s_case(P5, 1)


@pytest.mark.parametrize("p0", [3, 5, 7])
def test_s_case_all_reductions_hold(p0):
    spec = CounterexampleSpec(p0)
    counts = {0: 0, 1: 0, 2: 0}
    for d in range(2, 3001):
        counts[s_case(spec, d).case] += 1
    assert all(counts.values())


@pytest.mark.parametrize("p0", [3, 5, 7])
def test_character_form(p0):
    spec = CounterexampleSpec(p0)
    X = 10**4
    table = s_character_table(spec, X)
    exact = s_table(spec, X)
    assert np.max(np.abs(table[1:] - exact[1:])) < 1e-9
    for d in (1, 2, 3, 12, 30, 97):
        assert abs(s_character(spec, d) - s_value(spec, d)) < 1e-9


def test_case0_character_form():
    for d in range(2, 2000):
        if d % 5:
            assert abs(s_case0_character(P5, d) - s_value(P5, d)) < 1e-9


@pytest.mark.parametrize("p,K,value", [(2, 4, 1), (2, 5, -1), (2, 2, 0), (3, 4, 1), (11, 1, 0), (11, 2, 0)])
def test_s_prime_power_examples(p, K, value):
    assert s_prime_power(P5, p, K) == value
    assert s_value(P5, p**K) == value


def test_s_prime_power_rejects():
    with pytest.raises(ValueError):
        s_prime_power(P5, 5, 3)
    with pytest.raises(ValueError):
        s_prime_power(P5, 2, 0)


def test_non_decay_on_powers_of_two():
    order = multiplicative_order(2, 5)
    assert order == 4
    vals = [5 * s_prime_power(P5, 2, K) for K in range(1, 61)]
    for K, v in enumerate(vals, start=1):
        assert v == (5 if K % order == 0 else -5 if K % order == 1 else 0)
    assert all(any(vals[i : i + 4]) for i in range(len(vals) - 3))


@pytest.mark.parametrize("p0,p", [(3, 2), (7, 3), (11, 2)])
def test_non_decay_other_primes(p0, p):
    spec = CounterexampleSpec(p0)
    k = multiplicative_order(p, p0)
    vals = [s_prime_power(spec, p, K) for K in range(1, 6 * k + 1)]
    assert vals.count(1) == vals.count(-1) == 6


def test_s_tilde_examples():
    assert s_tilde(P5, 1) == 1
    # removing p0 keeps S~ and flips S
    assert s_tilde(P5, 5) == s_tilde(P5, 1) == 1
    assert s_value(P5, 5) == -s_value(P5, 1) == -1
    assert s_tilde(P5, 5 * 2 * 3) == s_tilde(P5, 6) == 2
    with pytest.raises(ValueError):
        s_tilde(P5, 12)


def test_s_tilde_random_squarefree():
    rng = np.random.default_rng(9)
    checked = 0
    for d in rng.integers(1, 10**4, 400).tolist():
        if not factor(d).squarefree:
            continue
        assert abs(s_tilde(P5, d)) == abs(s_value(P5, d))
        assert abs(s_tilde_character(P5, d) - s_tilde(P5, d)) < 1e-9
        checked += 1
    assert checked > 200


def test_mean_value():
    for x in (10**4, 2 * 10**4):
        mv = mean_value_partial(P5, x)
        assert mv.relative_gap < 0.1
    small = mean_value_partial(CounterexampleSpec(3), 10**3)
    assert small.flat_count <= small.count
    with pytest.raises(ValueError):
        mean_value_partial(P5, 5)


def test_case2_terms_vanish_in_mean():
    X = 1000
    table = f0_prime_table(P5, X)
    assert not table[25::25].any()


def test_flat_mask():
    mask = flat_mask(P5, 50)
    assert [d for d in range(1, 51) if mask[d]] == [1, 2, 3, 4, 6, 7, 8, 9, 12, 13, 14, 16, 17, 18, 19, 21, 23, 24, 26, 27, 28, 29, 32, 34, 36, 37, 38, 39, 42, 43, 46, 47, 48, 49]


def test_win_table():
    t = win_table_f0(5)
    assert t[5] == Fraction(-1, 4)
    assert t[1] == t[4] == t[10] == 0


def test_reef_failure_p5():
    rep = reef_failure_demo(P5, 10, 30, X=1 << 18)
    assert rep.residuals[1] == Fraction(15, 4)
    assert abs(rep.win_check[5] + 0.25) < 1e-2
    assert all(abs(rep.win_check[q]) < 1e-2 for q in range(1, 11) if q != 5)
    # a zero residual means F_0(a) = -c_5(a)/4
    for a in rep.zero_residual:
        assert f0(P5, a) == Fraction(-ramanujan_sum(5, a), 4)
    assert rep.zero_residual == [a for a in range(1, 31) if rep.residuals[a] == 0]


@pytest.mark.parametrize("p0,value", [(3, Fraction(3, 2)), (5, Fraction(15, 4)), (7, Fraction(35, 6)), (11, Fraction(99, 10))])
def test_reef_failure_every_p0(p0, value):
    rep = reef_failure_demo(CounterexampleSpec(p0), p0, 1, check_win=False)
    assert rep.residuals[1] == value != 0


def test_reef_failure_rejects_small_Q():
    with pytest.raises(ValueError):
        reef_failure_demo(P5, 4, 3)
