"""Correlations C_{f,g}(N, a) with truncated divisor sums g, the REEF right-hand side,
exponential sums, the singular series and a Hardy-Littlewood desk experiment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (
    ArithmeticFunction,
    Value,
    divisors,
    mobius,
    mobius_table,
    primes_up_to,
    totient,
    totient_table,
    von_mangoldt_table,
)
from .ramanujan import ramanujan_sum

HL_MAX_N = 10**7


@dataclass(frozen=True, eq=False)
class CorrelationSpec:
    """f, the Eratosthenes transform g' of g, truncation rank Q and sample length N.

    g(m) = sum of g'(q) over q | m with q <= Q.  Neither f nor g' can see the shift a,
    which is what makes the correlation fair.  ``g_full`` optionally gives the
    untruncated divisor sum of g' so large Q need not be summed term by term.
    """

    f: ArithmeticFunction
    g_prime: ArithmeticFunction
    Q: int
    N: int
    g_full: ArithmeticFunction | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not 1 <= self.Q <= self.N:
            raise ValueError("need 1 <= Q <= N")

    @property
    def exact(self) -> bool:
        return self.f.exact and self.g_prime.exact


def _zeros(n: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(n, dtype=object)
        out[:] = 0
        return out
    return np.zeros(n, dtype=np.complex128)


def g_values(spec: CorrelationSpec, M: int) -> np.ndarray:
    """g(0..M) for the truncated divisor sum of spec.g_prime."""
    if spec.g_full is not None and spec.Q >= M // 2:
        g = spec.g_full.float_values(M).astype(np.complex128)
        for m in range(spec.Q + 1, M + 1):
            g[m] -= sum(spec.g_prime(d) for d in divisors(m) if d > spec.Q)
        return _real_if_possible(g)
    g = _zeros(M + 1, spec.exact)
    for q in range(1, min(spec.Q, M) + 1):
        w = spec.g_prime(q)
        if w != 0:
            g[q::q] += w
    g[0] = 0
    return g if spec.exact else _real_if_possible(g)


def _real_if_possible(arr: np.ndarray) -> np.ndarray:
    return arr.real.copy() if np.all(arr.imag == 0) else arr


def _f_values(spec: CorrelationSpec) -> np.ndarray:
    key = "f"
    if key not in spec._cache:
        v = spec.f.values(spec.N)
        spec._cache[key] = v if spec.exact else _real_if_possible(np.asarray(v, dtype=np.complex128))
    return spec._cache[key]


def _dot(x: np.ndarray, y: np.ndarray) -> Value:
    if x.dtype == object or y.dtype == object:
        return sum((a * b for a, b in zip(x.tolist(), y.tolist()) if a != 0), 0)
    prod = x * y
    if np.iscomplexobj(prod):
        return complex(math.fsum(prod.real), math.fsum(prod.imag))
    return math.fsum(prod)


def correlate(spec: CorrelationSpec, a: int) -> Value:
    """Sum over n <= N of f(n) g(n + a), by direct summation."""
    if a < 1:
        raise ValueError("a must be positive")
    f = _f_values(spec)
    g = g_values(spec, spec.N + a)
    return _dot(f[1:], g[1 + a : spec.N + a + 1])


def lambda_truncated(N: int, m: int) -> float:
    """Lambda_N(m) = -sum over d | m, d <= N of mu(d) log d."""
    if m < 1:
        raise ValueError("m must be positive")
    return -math.fsum(mobius(d) * math.log(d) for d in divisors(m) if d <= N)


def g_hat(g_prime: ArithmeticFunction, Q: int, q: int) -> Value:
    """Sum of g'(d)/d over multiples d of q up to Q; zero for q > Q."""
    if q < 1:
        raise ValueError("q must be positive")
    total: Value = 0
    for d in range(q, Q + 1, q):
        w = g_prime(d)
        if w != 0:
            total += Fraction(w) / d if g_prime.exact else w / d
    return total


def reef_coefficients(spec: CorrelationSpec) -> dict:
    """q -> g_hat(q) (sum_n f(n) c_q(n)) / phi(q) for q <= Q, nonzero entries only."""
    if "reef" in spec._cache:
        return spec._cache["reef"]
    f = _f_values(spec)
    n = np.arange(spec.N + 1)
    out = {}
    for q in range(1, spec.Q + 1):
        gh = g_hat(spec.g_prime, spec.Q, q)
        if gh == 0:
            continue
        c = np.zeros(spec.N + 1, dtype=np.int64)
        for d in divisors(q):
            mu = mobius(q // d)
            if mu:
                c += (d * mu) * (n % d == 0)
        s = _dot(f[1:], c[1:].astype(object) if spec.exact else c[1:])
        coef = gh * s / totient(q)
        if coef != 0:
            out[q] = coef
    spec._cache["reef"] = out
    return out


def reef_rhs(spec: CorrelationSpec, a: int) -> Value:
    if a < 1:
        raise ValueError("a must be positive")
    return sum((w * ramanujan_sum(q, a) for q, w in reef_coefficients(spec).items()), 0)


def error_term(spec: CorrelationSpec, a: int) -> Value:
    return correlate(spec, a) - reef_rhs(spec, a)


def exp_sum(f: ArithmeticFunction, N: int, j: int, q: int) -> complex:
    """S_f(j/q) = sum over n <= N of f(n) e(n j / q)."""
    if not 0 <= j < q:
        raise ValueError("need 0 <= j < q")
    n = np.arange(1, N + 1)
    v = np.asarray(f.values(N)[1:], dtype=np.complex128)
    ph = np.exp(2j * np.pi * ((n * j) % q) / q)
    prod = v * ph
    return complex(math.fsum(prod.real), math.fsum(prod.imag))


# ---------------------------------------------------------------------------
# singular series and the Hardy-Littlewood experiment


def singular_series(two_k: int, method: str = "product", bound: int = 10**6) -> float:
    """Hardy-Littlewood constant for prime pairs at distance 2k.

    product: 2 prod_{p | 2k, p > 2} (p-1)/(p-2) prod_{p not | 2k, 2 < p <= bound} (1 - 1/(p-1)^2)
    series: sum over q <= bound of mu^2(q) c_q(2k) / phi(q)^2
    """
    if two_k < 1 or two_k % 2:
        raise ValueError("the singular series needs an even positive argument")
    if bound < 1000:
        raise ValueError("bound must be at least 1000")
    if method == "product":
        ps = np.array(primes_up_to(bound)[1:], dtype=np.float64)
        divides = (two_k % ps.astype(np.int64)) == 0
        factors = np.where(divides, 1 + 1 / (ps - 1), 1 - 1 / (ps - 1) ** 2)
        return 2.0 * math.exp(math.fsum(np.log(factors)))
    if method == "series":
        q = np.arange(1, bound + 1, dtype=np.int64)
        mu = mobius_table(bound)[1:]
        phi = totient_table(bound)[1:].astype(np.float64)
        g = np.gcd(q, two_k)
        m = q // g
        mu_m = mu[m - 1]
        c = phi * mu_m / phi[m - 1]
        terms = np.where(mu != 0, c / phi**2, 0.0)
        return math.fsum(terms)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class HLRow:
    two_k: int
    N: int
    C_full: float
    C_truncated: float
    main_term: float
    ratio: float
    gap: float
    gap_scale: float

    @property
    def gap_ratio(self) -> float:
        return self.gap / self.gap_scale


def truncation_gap(N: int, a: int, lam: np.ndarray | None = None) -> tuple[float, float, float, float]:
    """(C_{Lambda,Lambda}, C_{Lambda,Lambda_N}, |gap|, a log N log(N + a)) at shift a.

    Lambda_N agrees with Lambda up to N, so only n + a > N contributes to the gap.
    """
    if a < 1:
        raise ValueError("a must be positive")
    if lam is None or len(lam) <= N + a:
        lam = von_mangoldt_table(N + a)
    C_full = math.fsum(lam[1 : N + 1] * lam[1 + a : N + 1 + a])
    trunc = lam[1 + a : N + 1 + a].copy()
    for m in range(max(N + 1, 1 + a), N + a + 1):
        trunc[m - a - 1] = lambda_truncated(N, m)
    C_trunc = math.fsum(lam[1 : N + 1] * trunc)
    return C_full, C_trunc, abs(C_full - C_trunc), a * math.log(N) * math.log(N + a)


def hl_experiment(N: int, shifts, singular_bound: int = 10**6) -> list[HLRow]:
    """C_{Lambda,Lambda}(N, 2k) against S(2k) N for each even shift 2k, with the truncation gap."""
    if N > HL_MAX_N:
        raise ValueError(f"N is capped at {HL_MAX_N}")
    shifts = list(shifts)
    if any(s < 1 or s % 2 for s in shifts):
        raise ValueError("shifts must be even and positive")
    lam = von_mangoldt_table(N + max(shifts))
    rows = []
    for tk in shifts:
        C_full, C_trunc, gap, scale = truncation_gap(N, tk, lam)
        S = singular_series(tk, "product", singular_bound)
        rows.append(HLRow(tk, N, C_full, C_trunc, S * N, C_full / (S * N), gap, scale))
    return rows
