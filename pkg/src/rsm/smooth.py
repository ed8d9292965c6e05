"""Smooth-number enumeration and exact Euler-factorized sums over (P).

A series over the P-smooth numbers whose terms factor over primes collapses to a
finite product of local sums.  Each local sum here is a finite head plus a geometric
tail summed in closed form, so Fractions in give Fractions out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .arith import Value, factor, primes_up_to, totient, is_prime
from .ramanujan import prime_power_csum, ramanujan_sum, rvl_support


def _check_prime(P: int) -> list[int]:
    if not is_prime(P):
        raise ValueError(f"{P} is not prime")
    return primes_up_to(P)


@dataclass(frozen=True)
class SmoothEnumerator:
    P: int
    bound: int
    items: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items.tolist())


def smooth_numbers(P: int, X: int) -> SmoothEnumerator:
    """All P-smooth n <= X in ascending order."""
    primes = _check_prime(P)
    if X < 1:
        raise ValueError("X must be positive")
    nums = np.array([1], dtype=np.int64)
    for p in primes:
        parts = [nums]
        cur = nums
        while True:
            cur = cur[cur <= X // p] * p
            if cur.size == 0:
                break
            parts.append(cur)
        nums = np.concatenate(parts)
    nums.sort()
    return SmoothEnumerator(P, X, nums)


def smooth_harmonic(P: int) -> Fraction:
    """prod_{p<=P} (1 - 1/p)^{-1}, the sum of 1/m over m in (P)."""
    out = Fraction(1)
    for p in _check_prime(P):
        out *= Fraction(p, p - 1)
    return out


def smooth_zeta_eps(P: int, eps: float) -> float:
    """Sum of m^(eps-1) over m in (P), as prod_{p<=P} 1/(1 - p^(eps-1))."""
    if not eps < 1:
        raise ValueError("eps >= 1 makes the series diverge")
    return math.prod(1.0 / (1.0 - p ** (eps - 1.0)) for p in _check_prime(P))


def smooth_zeta_tail_bound(P: int, eps: float, X: int) -> float:
    """Rankin bound for the sum of m^(eps-1) over m in (P), m > X.

    m^(eps-1) <= X^(-delta) m^(eps-1+delta) for m > X; optimized over a grid of delta.
    """
    primes = _check_prime(P)
    best = math.inf
    span = 1.0 - eps
    for i in range(1, 200):
        delta = span * i / 200
        s = eps - 1.0 + delta
        val = math.exp(-delta * math.log(X)) * math.prod(1.0 / (1.0 - p**s) for p in primes)
        best = min(best, val)
    return best


# ---------------------------------------------------------------------------
# Euler factors


@dataclass(frozen=True)
class EulerFactor:
    """Local sum at one prime: terms head[0..m-1], then tail_first * ratio^(k-m) for k >= m."""

    p: int
    head: tuple
    tail_first: Value = 0
    ratio: Value = 0

    def __post_init__(self):
        if self.tail_first != 0 and not abs(self.ratio) < 1:
            raise ValueError(f"tail ratio {self.ratio} at p={self.p} does not converge")

    def term(self, k: int) -> Value:
        m = len(self.head)
        if k < m:
            return self.head[k]
        return self.tail_first * self.ratio ** (k - m)

    def total(self) -> Value:
        s = sum(self.head, 0)
        if self.tail_first != 0:
            s += self.tail_first / (1 - self.ratio)
        return s


@dataclass(frozen=True)
class EulerFactorSeries:
    P: int
    factors: tuple

    @property
    def value(self) -> Value:
        out: Value = 1
        for f in self.factors:
            out *= f.total()
        return out

    def term(self, n: int) -> Value:
        """The series term at a P-smooth n implied by the factorization."""
        fn = factor(n)
        out: Value = 1
        for f in self.factors:
            out *= f.term(fn.valuation(f.p))
        return out


def euler_series(P: int, local: Callable[[int], EulerFactor]) -> EulerFactorSeries:
    return EulerFactorSeries(P, tuple(local(p) for p in _check_prime(P)))


# ---------------------------------------------------------------------------
# smooth Ramanujan sums


class MultiplicativeCoefficients:
    """G(q) = scale * prod_p local(p, v_p(q)) with local(p, 0) = 1."""

    def __init__(self, scale: Value, local: Callable[[int, int], Value]):
        self.scale = scale
        self.local = local

    def __call__(self, q: int) -> Value:
        out = self.scale
        for p, e in factor(q).factors:
            out *= self.local(p, e)
        return out


def constant_coefficients(C: Value) -> MultiplicativeCoefficients:
    return MultiplicativeCoefficients(C, lambda p, k: 1)


def _multiplicative_view(G) -> MultiplicativeCoefficients | None:
    if isinstance(G, MultiplicativeCoefficients):
        return G
    if isinstance(G, (int, Fraction, float, complex)):
        return constant_coefficients(G)
    m = getattr(G, "multiplicative", None)
    return m if isinstance(m, MultiplicativeCoefficients) else None


def smooth_ramanujan_sum(G, a: int, P: int, max_terms: int = 1 << 22) -> Value:
    """Sum of G(q) c_q(a) over q in (P); a finite sum over rvl_support(a, P).

    G is a constant, a MultiplicativeCoefficients, a CoefficientTable, or any callable.
    Multiplicative G is summed prime by prime; anything else by enumerating the support.
    """
    if a < 1:
        raise ValueError("a must be positive")
    primes = _check_prime(P)
    mult = _multiplicative_view(G)
    fa = factor(a)
    if mult is not None:
        out = mult.scale
        for p in primes:
            v = fa.valuation(p)
            out *= sum(mult.local(p, K) * prime_power_csum(p, K, v) for K in range(v + 2))
        return out
    size = math.prod(fa.valuation(p) + 2 for p in primes)
    if size > max_terms:
        raise ValueError(f"support of {size} moduli exceeds max_terms={max_terms}; supply multiplicative coefficients")
    total: Value = 0
    for q in rvl_support(a, P):
        c = ramanujan_sum(q, a)
        if c:
            total += (G[q] if hasattr(G, "__getitem__") else G(q)) * c
    return total


# ---------------------------------------------------------------------------
# twisted orthogonality and character-weighted smooth sums


def _local_twisted(p: int, j1: int, j2: int) -> Fraction:
    m = max(j1, j2)
    head = sum(
        (Fraction(prime_power_csum(p, j1, K) * prime_power_csum(p, j2, K), p**K) for K in range(m)),
        Fraction(0),
    )
    stable = prime_power_csum(p, j1, m) * prime_power_csum(p, j2, m)
    return head + Fraction(stable, p**m) * Fraction(p, p - 1)


def twisted_sum(l: int, q: int, P: int) -> Fraction:
    """Exact sum of c_l(u) c_q(u) / u over u in (P)."""
    primes = _check_prime(P)
    fl, fq = factor(l), factor(q)
    for p in set(fl.primes) | set(fq.primes):
        if p > P:
            raise ValueError(f"{l} and {q} must be {P}-smooth")
    out = Fraction(1)
    for p in primes:
        out *= _local_twisted(p, fl.valuation(p), fq.valuation(p))
    return out


def twisted_orthogonality(l: int, q: int, P: int, check: bool = True) -> Fraction:
    """(1/(phi(l) H_P)) * sum over u in (P) of c_l(u) c_q(u)/u; equals 1 iff l == q."""
    value = twisted_sum(l, q, P) / (totient(l) * smooth_harmonic(P))
    if check and value != (1 if l == q else 0):
        raise AssertionError(f"twisted orthogonality fails at l={l}, q={q}, P={P}: {value}")
    return value


def char_smooth_sum(chi, l: int, b: int, P: int) -> complex:
    """Sum of chi(t)/t * c_l(b t) over t in (P), Euler-factorized.

    ``chi`` is any completely multiplicative callable with a ``modulus`` attribute.
    Tails are geometric with ratio chi(p)/p and are summed in closed form.
    """
    primes = _check_prime(P)
    if getattr(chi, "modulus", 1) > P:
        raise ValueError("P must be at least the modulus of chi")
    fl, fb = factor(l), factor(b)
    if any(p > P for p in fl.primes):
        raise ValueError(f"{l} is not {P}-smooth")
    out = complex(1.0)
    for p in primes:
        x = complex(chi(p)) / p
        if abs(x) >= 1:
            raise ValueError("tail ratio must have modulus < 1")
        j = fl.valuation(p)
        if j == 0:
            out *= 1.0 / (1.0 - x)
            continue
        vb = fb.valuation(p)
        K0 = max(0, j - vb)
        local = sum(x**k * prime_power_csum(p, j, vb + k) for k in range(K0))
        local += prime_power_csum(p, j, vb + K0) * x**K0 / (1.0 - x)
        out *= local
    return out


def truncated_smooth_sum(term: Callable[[int], Value], P: int, X: int) -> float | complex:
    """Direct sum of term(n) over P-smooth n <= X, used as an enumeration oracle."""
    vals = [term(n) for n in smooth_numbers(P, X)]
    if any(isinstance(v, complex) for v in vals):
        return complex(math.fsum(complex(v).real for v in vals), math.fsum(complex(v).imag for v in vals))
    return math.fsum(float(v) for v in vals)
