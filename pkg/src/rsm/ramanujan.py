"""Ramanujan sums c_q(a), the divisor identity and the smooth-divisor closed forms."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .arith import divisors, divisors_from_factors, factor, mobius, primes_up_to, smooth_sifted_split, totient


@lru_cache(maxsize=1 << 16)
def ramanujan_sum(q: int, a: int) -> int:
    """c_q(a) by Kluyver's formula: sum over d | (q, a) of d * mu(q/d).

    a = 0 is allowed and gives phi(q).
    """
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    g = math.gcd(q, a)
    return sum(d * mobius(q // d) for d in divisors(g))


def ramanujan_sum_holder(q: int, a: int) -> int:
    """c_q(a) = phi(q) mu(q/(q,a)) / phi(q/(q,a))."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    m = q // math.gcd(q, a)
    mu = mobius(m)
    if mu == 0:
        return 0
    return mu * (totient(q) // totient(m))


def ramanujan_sum_array(q: int, n: np.ndarray) -> np.ndarray:
    """c_q(n) for an integer array n (Kluyver, vectorized)."""
    n = np.asarray(n, dtype=np.int64)
    out = np.zeros(n.shape, dtype=np.int64)
    for d in divisors(q):
        mu = mobius(q // d)
        if mu:
            out += (d * mu) * (n % d == 0)
    return out


def divisor_csum_identity(n: int, a: int) -> int:
    """Sum of c_q(a) over q | n; asserts it equals n when n | a and 0 otherwise."""
    if n < 1:
        raise ValueError("n must be positive")
    total = sum(ramanujan_sum(q, a) for q in divisors(n))
    expected = n if a % n == 0 else 0
    if total != expected:
        raise AssertionError(f"divisor identity fails at n={n}, a={a}: {total} != {expected}")
    return total


def smooth_divisor_csum(d: int, a: int, P: int) -> int:
    """Sum of c_q(a) over P-smooth q dividing d, via 1_{d_(P) | a} * d_(P)."""
    smooth, _ = smooth_sifted_split(d, P)
    return smooth if a % smooth == 0 else 0


def smooth_divisor_csum_direct(d: int, a: int, P: int) -> int:
    return sum(ramanujan_sum(q, a) for q in divisors(d) if all(p <= P for p, _ in factor(q).factors))


def abs_smooth_csum(a: int, P: int) -> int:
    """Sum of |c_q(a)| over q in (P), as the product of 2 p^{v_p(a)} over p <= P."""
    if a < 1:
        raise ValueError("a must be positive")
    fa = factor(a)
    primes = primes_up_to(P)
    if P not in primes:
        raise ValueError(f"{P} is not prime")
    value = math.prod(2 * p ** fa.valuation(p) for p in primes)
    bound = 2 ** len(primes) * a
    if value > bound:
        raise AssertionError(f"{value} exceeds 2^pi(P) a = {bound}")
    return value


def rvl_support(a: int, P: int) -> list[int]:
    """Divisors of prod_{p<=P} p^{v_p(a)+1}: the only q in (P) with c_q(a) != 0 possible."""
    if a < 1:
        raise ValueError("a must be positive")
    primes = primes_up_to(P)
    if P not in primes:
        raise ValueError(f"{P} is not prime")
    fa = factor(a)
    return divisors_from_factors((p, fa.valuation(p) + 1) for p in primes)


def rvl_modulus(a: int, P: int) -> int:
    fa = factor(a)
    return math.prod(p ** (fa.valuation(p) + 1) for p in primes_up_to(P))


def ramanujan_sum_real(q: int, x: float) -> float:
    """Cosine sum of j over units mod q at a real argument x."""
    js = np.array([j for j in range(1, q + 1) if math.gcd(j, q) == 1], dtype=np.float64)
    return float(np.cos(2 * np.pi * js * x / q).sum())


def prime_power_csum(p: int, j: int, K: int) -> int:
    """c_{p^j}(p^K u) for (u, p) = 1: depends only on K."""
    if j == 0:
        return 1
    if K >= j:
        return (p - 1) * p ** (j - 1)
    if K == j - 1:
        return -(p ** (j - 1))
    return 0
