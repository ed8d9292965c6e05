import math
import threading
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsm.arith import (
    ArithmeticFunction,
    LocalFactor,
    divisor_sum,
    divisor_sum_table,
    divisors,
    eratosthenes_transform,
    factor,
    function_from_table,
    is_prime,
    mobius,
    mobius_inversion_table,
    mobius_table,
    omega,
    primorial,
    primes_up_to,
    sieve,
    smooth_sifted_split,
    spf_table,
    totient,
    totient_table,
    valuation,
    von_mangoldt,
    von_mangoldt_table,
)


def brute_totient(n):
    return sum(1 for m in range(1, n + 1) if math.gcd(m, n) == 1)


def trial_factor(n):
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


@pytest.mark.parametrize("n,expected", [(1, []), (12, [(2, 2), (3, 1)]), (97, [(97, 1)]), (2**10 * 3**5, [(2, 10), (3, 5)])])
def test_factor_examples(n, expected):
    assert list(factor(n).factors) == expected


@pytest.mark.parametrize("n", [0, -5])
def test_factor_rejects_nonpositive(n):
    with pytest.raises(ValueError):
        factor(n)


@given(st.integers(min_value=1, max_value=10**6))
def test_factor_matches_trial_division(n):
    fn = factor(n)
    assert list(fn.factors) == trial_factor(n)
    assert math.prod(p**e for p, e in fn.factors) == n


@given(st.integers(min_value=10**12, max_value=10**15))
@settings(max_examples=20)
def test_factor_beyond_table(n):
    fn = factor(n)
    assert math.prod(p**e for p, e in fn.factors) == n
    assert all(is_prime(p) for p in fn.primes)


@pytest.mark.parametrize("n,mu,phi", [(1, 1, 1), (4, 0, 2), (9, 0, 6), (30, -1, 8), (10, 1, 4)])
def test_mobius_totient_examples(n, mu, phi):
    assert mobius(n) == mu
    assert totient(n) == phi == brute_totient(n)


@pytest.mark.parametrize("fn", [mobius, totient])
def test_rejects_zero(fn):
    with pytest.raises(ValueError):
        fn(0)


def test_mobius_sum_over_divisors():
    X = 10**4
    mu = mobius_table(X)
    acc = np.zeros(X + 1, dtype=np.int64)
    for d in range(1, X + 1):
        acc[d::d] += mu[d]
    assert acc[1] == 1
    assert not acc[2:].any()


def test_tables_agree_with_scalars():
    X = 3000
    mu, phi, spf = mobius_table(X), totient_table(X), spf_table(X)
    for n in range(1, X + 1):
        assert mu[n] == mobius(n)
        assert phi[n] == totient(n)
        if n > 1:
            assert spf[n] == factor(n).primes[0]


def test_sieve_tables_are_read_only():
    t = sieve(1000)
    with pytest.raises(ValueError):
        t.mu[5] = 3


def test_sieve_shared_across_threads():
    results = []

    def work():
        results.append(int(totient_table(50000)[49999]))

    threads = [threading.Thread(target=work) for _ in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(set(results)) == 1 and results[0] == totient(49999)


@given(st.integers(1, 10**4), st.integers(1, 10**4))
def test_multiplicativity_on_coprime_pairs(m, n):
    if math.gcd(m, n) != 1:
        return
    assert mobius(m * n) == mobius(m) * mobius(n)
    assert totient(m * n) == totient(m) * totient(n)


@pytest.mark.parametrize("n,P,expected", [(1, 5, (1, 1)), (12, 2, (4, 3)), (35, 3, (1, 35)), (2 * 3 * 5 * 7 * 11, 5, (30, 77))])
def test_smooth_sifted_split_examples(n, P, expected):
    assert smooth_sifted_split(n, P) == expected


def test_smooth_sifted_split_rejects_composite_P():
    with pytest.raises(ValueError):
        smooth_sifted_split(10, 4)


@given(st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7, 11, 13, 97]))
def test_smooth_sifted_split_properties(n, P):
    s, r = smooth_sifted_split(n, P)
    assert s * r == n
    assert math.gcd(s, r) == 1
    assert math.gcd(r, primorial(P)) == 1
    assert all(p <= P for p in factor(s).primes)


@pytest.mark.parametrize("P,value", [(2, 2), (5, 30), (13, 30030)])
def test_primorial(P, value):
    assert primorial(P) == value


def test_primorial_rejects_composite():
    with pytest.raises(ValueError):
        primorial(9)


def test_eratosthenes_examples():
    one = ArithmeticFunction(lambda n: 1, name="one")
    assert [eratosthenes_transform(one, 30)(d) for d in range(1, 31)] == [1] + [0] * 29
    ident = ArithmeticFunction(lambda n: n, name="id")
    assert [eratosthenes_transform(ident, 300)(d) for d in range(1, 301)] == [totient(d) for d in range(1, 301)]
    sigma = ArithmeticFunction(lambda n: sum(Fraction(1, d) for d in divisors(n)), name="sigma/n")
    Fp = eratosthenes_transform(sigma, 200)
    assert all(Fp(d) == Fraction(1, d) for d in range(1, 201))
    # beyond the table the rule path is used
    assert Fp(210) == Fraction(1, 210)


def test_round_trip_on_tabulated_function():
    rng = np.random.default_rng(3)
    vals = [Fraction(int(v), int(w)) for v, w in zip(rng.integers(-9, 10, 400), rng.integers(1, 7, 400))]
    F = function_from_table(vals)
    Fp = eratosthenes_transform(F, 400)
    back = divisor_sum(Fp, 400)
    assert all(back(n) == F(n) for n in range(1, 401))


def test_inversion_tables_round_trip():
    rng = np.random.default_rng(5)
    v = np.concatenate([[0], rng.integers(-50, 50, 5000)])
    assert np.array_equal(divisor_sum_table(mobius_inversion_table(v)), v)


def test_von_mangoldt():
    lam = von_mangoldt_table(100)
    assert lam[1] == 0 and lam[6] == 0
    assert lam[8] == pytest.approx(math.log(2))
    assert von_mangoldt(49) == pytest.approx(math.log(7))
    # sum of Lambda over divisors is log n
    for n in range(1, 101):
        assert math.fsum(lam[d] for d in divisors(n)) == pytest.approx(math.log(n), abs=1e-12)


def test_small_helpers():
    assert valuation(48, 2) == 4 and valuation(48, 5) == 0
    assert omega(60) == 3
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert factor(360).kernel == 30 and not factor(360).squarefree


def test_local_factor_and_values():
    lf = LocalFactor((1, 3), 5, 2)
    assert [lf.at(k) for k in range(5)] == [1, 3, 5, 10, 20]
    F = ArithmeticFunction(lambda n: Fraction(1, n), name="1/n")
    v = F.values(6)
    assert v.dtype == object and v[6] == Fraction(1, 6) and v[0] == 0
    assert F.float_values(4)[4] == 0.25


def test_memo_is_deterministic():
    calls = []

    def rule(n):
        calls.append(n)
        return n * n

    F = ArithmeticFunction(rule, memo=True)
    assert F(7) == F(7) == 49
    assert calls == [7]
