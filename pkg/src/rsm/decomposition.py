"""Irregular series, the Wintner orthogonal decomposition and the analytic/irregular split.

Notation: Irr^(P)_d F is the sum of F'(d r)/r over P-sifted r > 1.  The decomposition
identities tie it to Wintner coefficients through a finite K-sum over square-free
divisors of the primorial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import (
    ArithmeticFunction,
    Value,
    divisors,
    divisors_from_factors,
    factor,
    mobius,
    primes_up_to,
    spf_table,
)
from .ramanujan import ramanujan_sum, ramanujan_sum_real
from .smooth import _check_prime, smooth_ramanujan_sum
from .transforms import CoefficientTable, PartialLimit, doubling_cutoffs, _fsum

KSUM_MAX_P = 31


class GuardrailError(ValueError):
    """A parameter is outside the range the artifact agrees to enumerate."""


def _eval_many(Fp: ArithmeticFunction, ns: np.ndarray) -> np.ndarray:
    if len(ns) == 0:
        return np.zeros(0)
    top = int(ns.max())
    table = Fp._table
    if table is not None and len(table) > top:
        vals = table[ns]
    elif Fp.array is not None:
        vals = np.asarray(Fp.array(ns))
    else:
        vals = np.array([Fp(int(n)) for n in ns], dtype=object)
    if vals.dtype == object:
        try:
            return vals.astype(np.float64)
        except TypeError:
            return vals.astype(np.complex128)
    return vals


def sifted_numbers(P: int, X: int) -> np.ndarray:
    """P-sifted r in (1, X]: no prime factor <= P."""
    _check_prime(P)
    spf = spf_table(X)
    r = np.arange(2, X + 1, dtype=np.int64)
    return r[spf[2:] > P]


def irregular_series(Fp: ArithmeticFunction, d: int, P: int, X: int, cutoffs: Sequence[int] | None = None) -> PartialLimit:
    """Partial sums of F'(d r)/r over P-sifted r in (1, cutoff]."""
    if d < 1:
        raise ValueError("d must be positive")
    _check_prime(P)
    if Fp.support is not None:
        B = Fp.support // d
        total: Value = 0
        if B > 1:
            for r in sifted_numbers(P, B).tolist():
                v = Fp(d * r)
                if v:
                    total += Fraction(v) / r if Fp.exact else v / r
        return PartialLimit.exact_value(total)
    cutoffs = list(cutoffs) if cutoffs is not None else doubling_cutoffs(X)
    X = max(cutoffs)
    r = sifted_numbers(P, X)
    terms = _eval_many(Fp, d * r) / r
    partials = []
    for c in cutoffs:
        k = int(np.searchsorted(r, c, side="right"))
        partials.append(_fsum(terms[:k]))
    return PartialLimit(tuple(cutoffs), tuple(partials))


def ksum_moduli(P: int) -> list[tuple[int, int]]:
    """(K, mu(K)) for the square-free divisors K of the primorial of P."""
    _check_prime(P)
    if P > KSUM_MAX_P:
        raise GuardrailError(f"K-sum enumeration is capped at P <= {KSUM_MAX_P}")
    Ks = divisors_from_factors((p, 1) for p in primes_up_to(P))
    return [(K, mobius(K)) for K in Ks]


def wintner_ksum(WinF: CoefficientTable, d: int, P: int) -> Value:
    """d * sum over square-free K in (P) of mu(K) Win_{dK}."""
    total: Value = 0
    for K, mu in ksum_moduli(P):
        total += mu * WinF[d * K]
    return d * total


def decomposition_residual_7(Fp: ArithmeticFunction, WinF: CoefficientTable, d: int, P: int, X: int = 1 << 20) -> Value:
    """F'(d) - [d sum_K mu(K) Win_{dK} - Irr^(P)_d]."""
    irr = irregular_series(Fp, d, P, X).value
    return Fp(d) - (wintner_ksum(WinF, d, P) - irr)


def decomposition_residual_8(
    F: ArithmeticFunction, Fp: ArithmeticFunction, WinF: CoefficientTable, a: int, P: int, X: int = 1 << 20
) -> Value:
    """F(a) - [sum over q in (P) of Win_q c_q(a) - sum over d | a of Irr^(P)_d]; needs P >= a."""
    _check_prime(P)
    if P < a:
        raise ValueError("the identity needs P >= a")
    smooth = smooth_ramanujan_sum(WinF, a, P)
    irr = sum((irregular_series(Fp, d, P, X).value for d in divisors(a)), 0)
    return F(a) - (smooth - irr)


# ---------------------------------------------------------------------------
# fin-win bookkeeping and the analytic/irregular split


@dataclass(frozen=True)
class FinWinRecord:
    """Wintner table with finite range Q_F; P_F is the largest prime <= Q_F."""

    win: CoefficientTable
    Q_F: int
    P_F: int


def finwin_record(win: CoefficientTable, scan: int | None = None) -> FinWinRecord:
    """Q_F is the largest q with a nonzero entry found at or below the scan bound."""
    if scan is None:
        Q = win.support_max()
    else:
        Q = 0
        for q in range(1, scan + 1):
            if win[q] != 0:
                Q = q
    if Q == 0:
        Q = 1
    P = max((p for p in primes_up_to(max(Q, 2))), default=2)
    return FinWinRecord(win, Q, P)


class FaiSplit:
    """F = A_F - I_F with A_F a finite cosine sum and I_F a divisor sum of irregular series.

    Irr is always taken at P_F, the largest prime <= Q_F.  ``I`` uses truncated
    irregular-series partials; ``I_closed`` uses the decomposition identity with the
    Wintner table, which is exact when the table is.
    """

    def __init__(self, Fp: ArithmeticFunction, record: FinWinRecord, X: int = 1 << 18):
        self.Fp = Fp
        self.record = record
        self.X = X
        self._coeffs = [(q, record.win[q]) for q in range(1, record.Q_F + 1)]
        self._coeffs = [(q, w) for q, w in self._coeffs if w != 0]
        self._irr: dict[int, PartialLimit] = {}

    def A(self, x: float | int) -> Value:
        """Analytic part at any real argument; exact at integers with an exact table."""
        if isinstance(x, int):
            return sum((w * ramanujan_sum(q, x) for q, w in self._coeffs), 0)
        return math.fsum(float(w) * ramanujan_sum_real(q, x) for q, w in self._coeffs)

    def irr(self, d: int) -> PartialLimit:
        if d not in self._irr:
            self._irr[d] = irregular_series(self.Fp, d, self.record.P_F, self.X)
        return self._irr[d]

    def irr_closed(self, d: int) -> Value:
        return wintner_ksum(self.record.win, d, self.record.P_F) - self.Fp(d)

    def I(self, a: int) -> Value:
        return sum((self.irr(d).value for d in divisors(a)), 0)

    def I_bound(self, a: int) -> float:
        """Sum of the last increments of the irregular series over d | a."""
        return math.fsum(self.irr(d).last_increment for d in divisors(a))

    def I_closed(self, a: int) -> Value:
        return sum((self.irr_closed(d) for d in divisors(a)), 0)


def fai_split(Fp: ArithmeticFunction, record: FinWinRecord, X: int = 1 << 18) -> FaiSplit:
    if record.Q_F is None or record.Q_F == math.inf:
        raise ValueError("Q_F must be finite")
    return FaiSplit(Fp, record, X)


# ---------------------------------------------------------------------------
# REEF checking


@dataclass
class ReefReport:
    residuals: dict
    max_residual: Value
    ell_F: int
    d_F: int


def reef_check(F: ArithmeticFunction, WinF: CoefficientTable, Q: int, A: int, Fp: ArithmeticFunction | None = None, d_scan: int | None = None) -> ReefReport:
    """Residuals F(a) - sum_{q<=Q} Win_q c_q(a) for a <= A, with l_F and d_F lower bounds."""
    coeffs = []
    for q in range(1, Q + 1):
        w = WinF[q]
        if w != 0:
            coeffs.append((q, w))
    residuals = {}
    for a in range(1, A + 1):
        residuals[a] = F(a) - sum((w * ramanujan_sum(q, a) for q, w in coeffs), 0)
    ell = max((q for q, _ in coeffs), default=0)
    d_F = 0
    if Fp is not None:
        for d in range(1, (d_scan or A) + 1):
            if Fp(d) != 0:
                d_F = d
    return ReefReport(residuals, max((abs(r) for r in residuals.values()), default=0), ell, d_F)


def multiplicative_irr_check(Fp: ArithmeticFunction, d: int, P: int, X: int = 1 << 20) -> float:
    """|Irr^(P)_d - F'(d) Irr^(P)_1| at matched truncation."""
    if not Fp.multiplicative:
        raise ValueError("F' must be flagged multiplicative")
    if any(p > P for p in factor(d).primes):
        raise ValueError(f"d={d} is not {P}-smooth")
    lhs = irregular_series(Fp, d, P, X).value
    rhs = Fp(d) * irregular_series(Fp, 1, P, X).value
    return abs(lhs - rhs)


@dataclass
class SiftedProduct:
    value: float
    log_partials: PartialLimit
    tail_estimate: float

    @property
    def increments(self) -> list[float]:
        p = self.log_partials.partials
        return [abs(b - a) for a, b in zip(p, p[1:])]


def sifted_euler_product(Fp: ArithmeticFunction, P: int, prime_bound: int) -> SiftedProduct:
    """prod over P < p <= prime_bound of (1 + F'(p)/p), with log partial sums at doubling bounds.

    The tail estimate is the last doubling increment of the log series; it does not
    shrink when the product diverges.
    """
    if not (Fp.multiplicative and Fp.squarefree):
        raise ValueError("F' must be flagged multiplicative and square-free supported")
    _check_prime(P)
    ps = np.array([p for p in primes_up_to(prime_bound) if p > P], dtype=np.int64)
    vals = _eval_many(Fp, ps) / ps
    logs = np.log1p(vals.astype(np.float64))
    cuts = doubling_cutoffs(prime_bound, start=max(4, prime_bound >> 10))
    partials = tuple(math.fsum(logs[ps <= c]) for c in cuts)
    pl = PartialLimit(tuple(cuts), partials)
    return SiftedProduct(math.exp(partials[-1]), pl, pl.last_increment)
