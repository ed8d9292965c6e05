"""Wintner and Carmichael coefficients, classic and P-smooth, plus hypothesis diagnostics.

Limits are never decided here.  A ``PartialLimit`` carries partial sums at doubling
cutoffs and the caller applies whatever tolerance it trusts.  When a coefficient has
a closed form (finite support, or a multiplicative Euler product) it is returned
exactly and flagged ``provenance="exact"``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith import (
    ArithmeticFunction,
    Value,
    divisors,
    divisors_from_factors,
    factor,
    largest_prime_factor_table,
    omega_table,
    totient,
)
from .ramanujan import prime_power_csum, ramanujan_sum_array
from .smooth import EulerFactor, EulerFactorSeries, MultiplicativeCoefficients, _check_prime, smooth_numbers

DEFAULT_LADDER = tuple(2**k for k in range(10, 21))

_threads = 1


def set_threads(n: int) -> None:
    """Cap the worker count used when building coefficient tables."""
    global _threads
    _threads = max(1, int(n))


def doubling_cutoffs(X: int, start: int = 1024) -> list[int]:
    """Doubling ladder ending exactly at X, with at least three entries."""
    if X < 4:
        raise ValueError("need X >= 4 for a three-step ladder")
    cuts = []
    c = X
    while c >= start or len(cuts) < 3:
        cuts.append(c)
        c //= 2
        if c < 1:
            break
    return sorted(set(cuts))


class CoefficientUnavailable(KeyError):
    """A coefficient table has no value for the requested modulus."""


@dataclass(frozen=True)
class PartialLimit:
    cutoffs: tuple
    partials: tuple
    provenance: str = "truncated"
    exact: Value | None = None

    def __post_init__(self):
        if self.provenance == "exact":
            if self.exact is None:
                raise ValueError("exact PartialLimit needs a value")
            return
        if len(self.cutoffs) < 3 or len(self.cutoffs) != len(self.partials):
            raise ValueError("a truncated PartialLimit needs at least three cutoffs")
        if any(b <= a for a, b in zip(self.cutoffs, self.cutoffs[1:])):
            raise ValueError("cutoffs must increase strictly")

    @property
    def value(self) -> Value:
        return self.exact if self.provenance == "exact" else self.partials[-1]

    @property
    def last_increment(self) -> float:
        if self.provenance == "exact":
            return 0.0
        return abs(self.partials[-1] - self.partials[-2])

    @classmethod
    def exact_value(cls, v: Value) -> "PartialLimit":
        return cls((), (), "exact", v)


@dataclass
class CoefficientTable:
    """q -> coefficient, with provenance.

    Entries come from ``entries`` or, failing that, ``rule``.  ``finite_support``
    declares every q beyond the largest key to be zero.  ``multiplicative`` lets
    smooth sums factor over primes.
    """

    kind: str
    entries: dict = field(default_factory=dict)
    provenance: str = "exact"
    rule: Callable[[int], Value] | None = None
    finite_support: bool = False
    multiplicative: MultiplicativeCoefficients | None = None

    def __getitem__(self, q: int) -> Value:
        if q in self.entries:
            return self.entries[q]
        if self.rule is not None:
            return self.rule(q)
        if self.multiplicative is not None:
            return self.multiplicative(q)
        if self.finite_support:
            return 0
        raise CoefficientUnavailable(q)

    def __call__(self, q: int) -> Value:
        return self[q]

    def support_max(self) -> int:
        """Largest q with a nonzero stored entry (0 if none)."""
        nz = [q for q, v in self.entries.items() if v != 0]
        return max(nz, default=0)


# ---------------------------------------------------------------------------
# classic transforms


def _partials_at(values: np.ndarray, cutoffs: Sequence[int]) -> tuple:
    csum = np.cumsum(values)
    return tuple(csum[c].item() for c in cutoffs)


def wintner_partial(Fp: ArithmeticFunction, q: int, X: int, cutoffs: Sequence[int] | None = None) -> PartialLimit:
    """Partial sums of F'(d)/d over multiples d of q, d <= cutoff."""
    if q < 1:
        raise ValueError("q must be positive")
    cutoffs = list(cutoffs) if cutoffs is not None else doubling_cutoffs(X)
    X = max(cutoffs)
    v = Fp.float_values(X)
    d = np.arange(X + 1, dtype=np.float64)
    d[0] = 1.0
    terms = np.where(np.arange(X + 1) % q == 0, v / d, 0)
    terms[0] = 0
    return PartialLimit(tuple(cutoffs), _partials_at(terms, cutoffs))


def carmichael_partial(F: ArithmeticFunction, q: int, x: int, cutoffs: Sequence[int] | None = None) -> PartialLimit:
    """Averages (1/x') sum_{n<=x'} F(n) c_q(n) / phi(q) at doubling x'."""
    if q < 1:
        raise ValueError("q must be positive")
    cutoffs = list(cutoffs) if cutoffs is not None else doubling_cutoffs(x)
    x = max(cutoffs)
    v = F.float_values(x)
    c = ramanujan_sum_array(q, np.arange(x + 1))
    terms = v * c
    terms[0] = 0
    sums = _partials_at(terms, cutoffs)
    ph = totient(q)
    return PartialLimit(tuple(cutoffs), tuple(s / (xc * ph) for s, xc in zip(sums, cutoffs)))


def wintner_table(Fp: ArithmeticFunction, qs: Iterable[int], X: int) -> CoefficientTable:
    """Truncated Wintner coefficients at X for each q, built in parallel."""
    qs = list(qs)
    cuts = doubling_cutoffs(X)
    with ThreadPoolExecutor(max_workers=_threads) as pool:
        results = list(pool.map(lambda q: wintner_partial(Fp, q, X, cuts).value, qs))
    return CoefficientTable("wintner", dict(zip(qs, results)), provenance=f"truncated({X})")


def exact_wintner_table(Fp: ArithmeticFunction) -> CoefficientTable:
    """Exact Wintner coefficients for a finitely supported F'."""
    if Fp.support is None:
        raise CoefficientUnavailable("F' has no declared finite support")
    B = Fp.support
    entries = {}
    for q in range(1, B + 1):
        entries[q] = sum((Fraction(Fp(d)) / d if Fp.exact else Fp(d) / d for d in range(q, B + 1, q)), 0)
    return CoefficientTable("wintner", entries, provenance="exact", finite_support=True)


# ---------------------------------------------------------------------------
# P-smooth transforms


def smooth_restriction(Fp: ArithmeticFunction, P: int, a: int) -> Value:
    """F_(P)(a): sum of F'(d) over P-smooth divisors d of a."""
    _check_prime(P)
    if a < 1:
        raise ValueError("a must be positive")
    smooth = math.prod(p**e for p, e in factor(a).factors if p <= P)
    return sum((Fp(d) for d in divisors(smooth)), 0)


def _wintner_local(Fp: ArithmeticFunction, p: int, v: int) -> EulerFactor:
    """Local sum of F'(p^k)/p^k over k >= v from the local factor of F'."""
    lf = Fp.local(p)
    m = len(lf.head)
    head = tuple(_div(lf.head[k], p**k) for k in range(v, m))
    K = max(v, m)
    if lf.tail_coef == 0:
        return EulerFactor(p, head)
    first = _div(lf.tail_coef * lf.tail_ratio ** (K - m), p**K)
    return EulerFactor(p, head, first, _div(lf.tail_ratio, p))


def _div(x: Value, n: int) -> Value:
    if isinstance(x, (int, Fraction)):
        return Fraction(x, 1) / n
    return x / n


def p_smooth_wintner(Fp: ArithmeticFunction, q: int, P: int, X: int | None = None) -> PartialLimit:
    """Sum of F'(d)/d over P-smooth multiples d of q.

    Exact when F' has a multiplicative local description, is supported on square-free
    numbers (enumerated over the divisors of P#), or has finite support.  Otherwise truncated at doubling cutoffs up to X.
    """
    primes = _check_prime(P)
    fq = factor(q)
    if any(p > P for p in fq.primes):
        return PartialLimit.exact_value(0)
    if Fp.local is not None:
        series = EulerFactorSeries(P, tuple(_wintner_local(Fp, p, fq.valuation(p)) for p in primes))
        return PartialLimit.exact_value(series.value)
    if Fp.squarefree:
        if not fq.squarefree:
            return PartialLimit.exact_value(0)
        rest = [p for p in primes if q % p]
        total = sum((_div(Fp(q * m), q * m) for m in divisors_from_factors((p, 1) for p in rest)), 0)
        return PartialLimit.exact_value(total)
    if Fp.support is not None:
        ds = [d for d in smooth_numbers(P, Fp.support) if d % q == 0]
        return PartialLimit.exact_value(sum((_div(Fp(d), d) for d in ds), 0))
    if X is None:
        raise ValueError("a truncation bound X is needed for this F'")
    ds = np.array([d for d in smooth_numbers(P, X) if d % q == 0], dtype=np.int64)
    vals = np.array([complex(Fp(int(d))) / d for d in ds]) if len(ds) else np.zeros(0)
    cuts = doubling_cutoffs(X)
    partials = []
    for c in cuts:
        s = vals[ds <= c]
        partials.append(_fsum(s))
    return PartialLimit(tuple(cuts), tuple(partials))


def _fsum(arr) -> Value:
    arr = np.asarray(arr)
    if np.iscomplexobj(arr):
        re, im = math.fsum(arr.real), math.fsum(arr.imag)
        return complex(re, im) if im != 0 else re
    return math.fsum(arr)


def theorem1C1_coefficient(F: ArithmeticFunction, q: int, P: int, X: int | None = None) -> PartialLimit:
    """prod_{p<=P}(1-1/p) / phi(q) * sum over t in (P) of F(t) c_q(t) / t.

    Exact Euler product when F carries local factors; otherwise the smooth sum is
    truncated at t <= X with doubling cutoffs.
    """
    primes = _check_prime(P)
    fq = factor(q)
    if any(p > P for p in fq.primes):
        raise ValueError(f"q={q} is not {P}-smooth")
    norm = Fraction(1, totient(q))
    for p in primes:
        norm *= Fraction(p - 1, p)
    if F.local is not None:
        out: Value = norm
        for p in primes:
            out *= _c1_local(F, p, fq.valuation(p)).total()
        return PartialLimit.exact_value(out)
    if X is None:
        raise ValueError("a truncation bound X is needed for this F")
    ts = smooth_numbers(P, X).items
    c = ramanujan_sum_array(q, ts)
    vals = np.array([complex(F(int(t))) for t in ts]) * c / ts
    cuts = doubling_cutoffs(X)
    partials = tuple(_scale(_fsum(vals[ts <= cut]), norm) for cut in cuts)
    return PartialLimit(tuple(cuts), partials)


def _scale(v: Value, norm: Fraction) -> Value:
    return v * float(norm)


def _c1_local(F: ArithmeticFunction, p: int, j: int) -> EulerFactor:
    """Local sum of F(p^k) c_{p^j}(p^k) / p^k over k >= 0."""
    lf = F.local(p)
    m = len(lf.head)
    K = max(j, m)
    head = tuple(_div(lf.at(k) * prime_power_csum(p, j, k), p**k) for k in range(K))
    if lf.tail_coef == 0:
        return EulerFactor(p, head)
    first = _div(lf.at(K) * prime_power_csum(p, j, K), p**K)
    return EulerFactor(p, head, first, _div(lf.tail_ratio, p))


# ---------------------------------------------------------------------------
# diagnostics


@dataclass
class HypothesisReport:
    """Partial-sum trends of the convergence hypotheses; no verdicts."""

    WA: PartialLimit
    DH: PartialLimit
    ETD: PartialLimit
    sifted: dict  # P -> PartialLimit of sum over d not in (P) of |F'(d)|/d  (WSA/WWA)
    DD: PartialLimit | None = None

    def rows(self) -> list[tuple]:
        out = []
        for name, pl in (("WA", self.WA), ("DH", self.DH), ("ETD", self.ETD)):
            out += _rows(name, "", pl)
        for P, pl in self.sifted.items():
            out += _rows("WSA/WWA", P, pl)
        if self.DD is not None:
            out += _rows("DD", "", self.DD)
        return out


def _rows(name, P, pl: PartialLimit) -> list[tuple]:
    prev = None
    rows = []
    for c, v in zip(pl.cutoffs, pl.partials):
        rows.append((name, P, c, v, "" if prev is None else abs(v - prev)))
        prev = v
    return rows


def hypothesis_report(
    Fp: ArithmeticFunction,
    X: int,
    P_ladder: Sequence[int] = (2, 3, 5, 7, 11, 13),
    win_table: CoefficientTable | None = None,
    cutoffs: Sequence[int] | None = None,
) -> HypothesisReport:
    cutoffs = list(cutoffs) if cutoffs is not None else doubling_cutoffs(X)
    X = max(cutoffs)
    absF = np.abs(Fp.float_values(X)).astype(np.float64)
    absF[0] = 0
    d = np.arange(X + 1, dtype=np.float64)
    d[0] = 1
    over_d = absF / d
    w2 = 2.0 ** omega_table(X)
    cut = tuple(cutoffs)
    WA = PartialLimit(cut, _partials_at(over_d, cutoffs))
    DH = PartialLimit(cut, _partials_at(w2 * over_d, cutoffs))
    sums = _partials_at(absF, cutoffs)
    ETD = PartialLimit(cut, tuple(s / c for s, c in zip(sums, cutoffs)))
    lpf = largest_prime_factor_table(X)
    sifted = {}
    for P in P_ladder:
        _check_prime(P)
        sifted[P] = PartialLimit(cut, _partials_at(np.where(lpf > P, over_d, 0.0), cutoffs))
    DD = None
    if win_table is not None:
        qmax = max(cutoffs)
        terms = np.zeros(qmax + 1)
        for q in range(1, qmax + 1):
            try:
                terms[q] = abs(win_table[q])
            except CoefficientUnavailable:
                break
        terms *= w2[: qmax + 1]
        DD = PartialLimit(cut, _partials_at(terms, cutoffs))
    return HypothesisReport(WA, DH, ETD, sifted, DD)
