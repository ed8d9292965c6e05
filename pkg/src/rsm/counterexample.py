"""The shifted Ramanujan sum F_0(a) = c_{p0}(a - 1): a function with a finite Wintner
range whose Ramanujan expansion still fails to reproduce it.

F_0'(1) = phi(p0) and F_0'(d) = p0 S(d) for d > 1, where S(d) is the sum of
mu(d/a) over divisors a of d with a = 1 mod p0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import (
    ArithmeticFunction,
    dirichlet_convolve,
    divisors,
    factor,
    is_prime,
    mobius,
    mobius_table,
    primes_up_to,
    totient,
)
from .characters import character_group
from .ramanujan import ramanujan_sum, ramanujan_sum_array
from .transforms import CoefficientTable, wintner_partial


@dataclass(frozen=True)
class CounterexampleSpec:
    p0: int

    def __post_init__(self):
        if self.p0 < 3 or not is_prime(self.p0):
            raise ValueError("p0 must be an odd prime")


def f0(spec: CounterexampleSpec, a: int) -> int:
    if a < 1:
        raise ValueError("a must be positive")
    return ramanujan_sum(spec.p0, a - 1)


def s_value(spec: CounterexampleSpec, d: int) -> int:
    """Sum of mu(d/a) over a | d with a = 1 mod p0."""
    return sum(mobius(d // a) for a in divisors(d) if a % spec.p0 == 1)


def f0_prime_closed(spec: CounterexampleSpec, d: int) -> int:
    """Closed form: phi(p0) at d = 1, p0 S(d) for d > 1."""
    if d < 1:
        raise ValueError("d must be positive")
    return spec.p0 - 1 if d == 1 else spec.p0 * s_value(spec, d)


def f0_prime_inversion(spec: CounterexampleSpec, d: int) -> int:
    """Moebius inversion of F_0 at d, by divisor summation."""
    if d < 1:
        raise ValueError("d must be positive")
    return sum(f0(spec, a) * mobius(d // a) for a in divisors(d))


def f0_prime(spec: CounterexampleSpec, d: int) -> int:
    """F_0'(d) by Moebius inversion, asserted equal to the closed form."""
    v = f0_prime_inversion(spec, d)
    closed = f0_prime_closed(spec, d)
    if v != closed:
        raise AssertionError(f"F_0'({d}): inversion {v} != closed form {closed}")
    return v


def f0_table(spec: CounterexampleSpec, X: int) -> np.ndarray:
    a = np.arange(X + 1)
    out = ramanujan_sum_array(spec.p0, a - 1)
    out[0] = 0
    return out


def s_table(spec: CounterexampleSpec, X: int) -> np.ndarray:
    ind = (np.arange(X + 1) % spec.p0 == 1).astype(np.int64)
    ind[0] = 0
    return dirichlet_convolve(ind, mobius_table(X))


def f0_prime_table(spec: CounterexampleSpec, X: int) -> np.ndarray:
    out = spec.p0 * s_table(spec, X)
    out[1] = spec.p0 - 1
    return out


def f0_function(p0: int) -> ArithmeticFunction:
    spec = CounterexampleSpec(p0)
    return ArithmeticFunction(
        lambda a: f0(spec, a),
        name=f"F0[{p0}]",
        array=lambda n: np.where(n > 0, ramanujan_sum_array(p0, n - 1), 0),
    )


def f0_prime_function(p0: int) -> ArithmeticFunction:
    spec = CounterexampleSpec(p0)
    return ArithmeticFunction(lambda d: f0_prime_closed(spec, d), name=f"F0'[{p0}]", memo=True)


# ---------------------------------------------------------------------------
# case analysis


@dataclass(frozen=True)
class CaseResult:
    case: int
    value: int
    reduction: str


def s_case(spec: CounterexampleSpec, d: int) -> CaseResult:
    """Classify d > 1 by v_{p0}(d) and check the matching reduction of S(d)."""
    if d <= 1:
        raise ValueError("cases are defined for d > 1")
    p0 = spec.p0
    fd = factor(d)
    v = fd.valuation(p0)
    value = s_value(spec, d)
    if v >= 2:
        if value != 0:
            raise AssertionError(f"case 2 expects S({d}) = 0, got {value}")
        return CaseResult(2, value, "S(d) = 0")
    if v == 1:
        reduced = s_value(spec, d // p0)
        if value != -reduced:
            raise AssertionError(f"case 1 expects S({d}) = -S({d // p0})")
        return CaseResult(1, value, f"S(d) = -S({d // p0})")
    if any(p % p0 == 1 for p in fd.primes):
        if value != 0:
            raise AssertionError(f"a prime factor = 1 mod p0 should force S({d}) = 0")
        return CaseResult(0, value, "prime factor = 1 mod p0 forces 0")
    return CaseResult(0, value, "character formula")


def s_character(spec: CounterexampleSpec, d: int) -> complex:
    """(1/phi(p0)) sum over chi mod p0 of sum over a | d of chi(a) mu(d/a)."""
    G = character_group(spec.p0)
    divs = divisors(d)
    total = 0j
    for chi in G:
        total += sum(chi(a) * mobius(d // a) for a in divs)
    return total / totient(spec.p0)


def s_character_table(spec: CounterexampleSpec, X: int) -> np.ndarray:
    """Character form of S on [0..X], vectorized by Dirichlet convolution."""
    G = character_group(spec.p0)
    mu = mobius_table(X).astype(np.complex128)
    n = np.arange(X + 1)
    total = np.zeros(X + 1, dtype=np.complex128)
    for chi in G:
        vals = chi.values()[n % spec.p0]
        vals[0] = 0
        total += dirichlet_convolve(vals, mu)
    return total / totient(spec.p0)


def s_case0_character(spec: CounterexampleSpec, d: int) -> complex:
    """Case 0 closed form: (1/phi(p0)) sum_chi chi(d) prod_{p | d} (1 - conj chi(p))."""
    G = character_group(spec.p0)
    primes = factor(d).primes
    total = 0j
    for chi in G:
        term = chi(d)
        for p in primes:
            term *= 1 - chi(p).conjugate()
        total += term
    return total / totient(spec.p0)


def s_prime_power(spec: CounterexampleSpec, p: int, K: int) -> int:
    """S(p^K) = 1[p^K = 1 mod p0] - 1[p^(K-1) = 1 mod p0]."""
    if p == spec.p0:
        raise ValueError("p must differ from p0")
    if K < 1:
        raise ValueError("K must be positive")
    p0 = spec.p0
    return int(pow(p, K, p0) == 1) - int(pow(p, K - 1, p0) == 1)


def multiplicative_order(p: int, m: int) -> int:
    k, x = 1, p % m
    while x != 1:
        x = x * p % m
        k += 1
    return k


def s_tilde(spec: CounterexampleSpec, d: int) -> int:
    """Sum of mu(a) over a | d with a = 1 mod p0, for square-free d.

    Checks S(d) = mu(d) S~(d).  No divisor = 1 mod p0 contains p0, so S~(p0 K) = S~(K);
    the sign flip under removing p0 belongs to S, through mu(d).
    """
    if d < 1 or not factor(d).squarefree:
        raise ValueError("d must be square-free")
    out = sum(mobius(a) for a in divisors(d) if a % spec.p0 == 1)
    if s_value(spec, d) != mobius(d) * out:
        raise AssertionError(f"S({d}) != mu({d}) S~({d})")
    if d % spec.p0 == 0:
        reduced = sum(mobius(a) for a in divisors(d // spec.p0) if a % spec.p0 == 1)
        if out != reduced:
            raise AssertionError(f"S~({d}) != S~({d // spec.p0})")
    return out


def s_tilde_character(spec: CounterexampleSpec, d: int) -> complex:
    """(1/phi(p0)) sum_chi prod_{p | d} (1 - chi(p))."""
    G = character_group(spec.p0)
    primes = factor(d).primes
    total = 0j
    for chi in G:
        term = 1 + 0j
        for p in primes:
            term *= 1 - chi(p)
        total += term
    return total / totient(spec.p0)


# ---------------------------------------------------------------------------
# mean values and REEF failure


@dataclass
class MeanValue:
    x: int
    raw: float
    flat: float
    flat_count: int
    count: int

    @property
    def relative_gap(self) -> float:
        return abs(self.raw - self.flat) / max(abs(self.raw), abs(self.flat))


def flat_mask(spec: CounterexampleSpec, X: int) -> np.ndarray:
    """d in [0..X] with no prime factor = 0 or 1 mod p0."""
    ok = np.ones(X + 1, dtype=bool)
    ok[0] = False
    for p in primes_up_to(X):
        if p % spec.p0 in (0, 1):
            ok[::p] = False
    return ok


def mean_value_partial(spec: CounterexampleSpec, x: int) -> MeanValue:
    """(1/x) sum_{d<=x} |F_0'(d)| against (p0 + 1)/x times the flat sum of |S(d)| over 1 < d <= x."""
    if x < 10:
        raise ValueError("x must be at least 10")
    Fp = f0_prime_table(spec, x)
    S = s_table(spec, x)
    flat = flat_mask(spec, x)
    flat[1] = False
    raw = float(np.abs(Fp[1:]).sum()) / x
    flat_sum = float(np.abs(S[flat]).sum())
    return MeanValue(x, raw, (spec.p0 + 1) * flat_sum / x, int(flat.sum()), x - 1)


def win_table_f0(p0: int) -> CoefficientTable:
    return CoefficientTable("wintner", {p0: Fraction(-1, p0 - 1)}, provenance="exact", finite_support=True)


@dataclass
class ReefFailure:
    p0: int
    win: dict
    residuals: dict
    zero_residual: list
    win_check: dict


def reef_failure_demo(spec: CounterexampleSpec, Q: int, A: int, X: int = 1 << 18, check_win: bool = True) -> ReefFailure:
    """Residual F_0(a) - sum_{q<=Q} Win_q c_q(a) with Win from the character analysis.

    With ``check_win`` the truncated Wintner partials at X are reported for q <= Q.
    """
    if Q < spec.p0:
        raise ValueError("need Q >= p0")
    win = {spec.p0: Fraction(-1, spec.p0 - 1)}
    residuals = {}
    for a in range(1, A + 1):
        approx = sum((w * ramanujan_sum(q, a) for q, w in win.items()), Fraction(0))
        residuals[a] = f0(spec, a) - approx
    checks = {}
    if check_win:
        Fp = ArithmeticFunction(lambda d: f0_prime_closed(spec, d), table=f0_prime_table(spec, X), exact=False, name="F0'")
        for q in range(1, Q + 1):
            checks[q] = wintner_partial(Fp, q, X).value
    zero = [a for a, r in residuals.items() if r == 0]
    return ReefFailure(spec.p0, win, residuals, zero, checks)
