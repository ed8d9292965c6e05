"""Sieves, factorization, the classical multiplicative functions and Dirichlet convolution.

Everything else in the package leans on this module.  Exact values are ``int`` or
``fractions.Fraction``; anything touched by ``log``, ``exp`` or an infinite tail is a
``float`` (or ``complex``).  Mixing the two demotes to floating point, which is what
Python's numeric tower already does.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import numpy as np

Value = Union[int, Fraction, float, complex]

DEFAULT_SIEVE_BOUND = 1 << 20
MAX_SIEVE_BOUND = 10**7


# ---------------------------------------------------------------------------
# sieve tables


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Smallest prime factor, Möbius and totient arrays on [0..bound].

    Index 0 is padding.  Arrays are made read-only after construction so the
    tables can be shared between threads.
    """

    bound: int
    spf: np.ndarray
    mu: np.ndarray
    phi: np.ndarray
    primes: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, bound: int) -> "SieveTables":
        if bound < 2:
            bound = 2
        cached = _load_cached(bound)
        if cached is not None:
            return cached
        spf = np.zeros(bound + 1, dtype=np.int64)
        for p in range(2, math.isqrt(bound) + 1):
            if spf[p] == 0:
                seg = spf[p * p :: p]
                seg[seg == 0] = p
        idx = np.arange(bound + 1, dtype=np.int64)
        unset = spf == 0
        spf[unset] = idx[unset]
        spf[0] = 0
        spf[1] = 1
        primes = np.flatnonzero(spf[2:] == idx[2:]) + 2

        mu = np.ones(bound + 1, dtype=np.int8)
        phi = idx.copy()
        for p in primes.tolist():
            mu[::p] *= -1
            pp = p * p
            if pp <= bound:
                mu[::pp] = 0
            phi[::p] -= phi[::p] // p
        mu[0] = 0
        phi[0] = 0
        tables = cls(bound, spf, mu, phi, primes)
        for arr in (spf, mu, phi, primes):
            arr.setflags(write=False)
        _store_cached(tables)
        return tables

    def factor(self, n: int) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out


def _cache_path(bound: int) -> str | None:
    root = os.environ.get("RSM_CACHE_DIR")
    if not root:
        return None
    return os.path.join(root, f"sieve-{bound}.npz")


def _load_cached(bound: int) -> SieveTables | None:
    path = _cache_path(bound)
    if path is None or not os.path.exists(path):
        return None
    with np.load(path) as data:
        arrays = [np.array(data[k]) for k in ("spf", "mu", "phi", "primes")]
    for arr in arrays:
        arr.setflags(write=False)
    return SieveTables(bound, *arrays)


def _store_cached(tables: SieveTables) -> None:
    path = _cache_path(tables.bound)
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + f".{os.getpid()}.tmp.npz"
    np.savez(tmp, spf=tables.spf, mu=tables.mu, phi=tables.phi, primes=tables.primes)
    os.replace(tmp, path)


_sieve_lock = threading.Lock()
_sieve: SieveTables | None = None


def sieve(bound: int = DEFAULT_SIEVE_BOUND) -> SieveTables:
    """Shared tables covering at least ``bound``; grown (never shrunk) on demand."""
    global _sieve
    current = _sieve
    if current is not None and current.bound >= bound:
        return current
    with _sieve_lock:
        if _sieve is None or _sieve.bound < bound:
            target = max(bound, DEFAULT_SIEVE_BOUND)
            if _sieve is not None:
                target = max(target, min(2 * _sieve.bound, MAX_SIEVE_BOUND))
            _sieve = SieveTables.build(target)
        return _sieve


# ---------------------------------------------------------------------------
# factorization


@dataclass(frozen=True)
class FactoredInteger:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if e < 1 or p <= last:
                raise ValueError(f"bad factorization {self.factors}")
            prod *= p**e
            last = p
        if prod != self.n:
            raise ValueError(f"factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def valuation(self, p: int) -> int:
        for r, e in self.factors:
            if r == p:
                return e
        return 0

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def kernel(self) -> int:
        """Square-free kernel: product of the distinct primes."""
        return math.prod(self.primes)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def divisors(self) -> list[int]:
        return divisors_from_factors(self.factors)


def factor(n: int) -> FactoredInteger:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"factor needs a positive integer, got {n!r}")
    n = int(n)
    return FactoredInteger(n, tuple(_factor_pairs(n)))


def _factor_pairs(n: int) -> list[tuple[int, int]]:
    tables = _sieve
    if tables is None or n > tables.bound:
        if n <= DEFAULT_SIEVE_BOUND:
            tables = sieve(DEFAULT_SIEVE_BOUND)
        else:
            import sympy

            return sorted(sympy.factorint(n).items())
    return tables.factor(n)


def divisors_from_factors(factors: Iterable[tuple[int, int]]) -> list[int]:
    divs = [1]
    for p, e in factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def divisors(n: int) -> list[int]:
    return divisors_from_factors(factor(n).factors)


def squarefree_divisors(n: int) -> list[int]:
    return divisors_from_factors((p, 1) for p, _ in factor(n).factors)


def mobius(n: int) -> int:
    f = factor(n).factors
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n: int) -> int:
    out = 1
    for p, e in factor(n).factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def omega(n: int) -> int:
    return len(factor(n).factors)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def von_mangoldt(n: int) -> float:
    f = factor(n).factors
    return math.log(f[0][0]) if len(f) == 1 else 0.0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n <= DEFAULT_SIEVE_BOUND:
        return int(sieve().spf[n]) == n
    import sympy

    return bool(sympy.isprime(n))


def primes_up_to(x: int) -> list[int]:
    if x < 2:
        return []
    tables = sieve(x)
    return tables.primes[tables.primes <= x].tolist()


def _require_prime(P: int) -> None:
    if not is_prime(P):
        raise ValueError(f"{P} is not prime")


def primorial(P: int) -> int:
    _require_prime(P)
    return math.prod(primes_up_to(P))


def smooth_sifted_split(n: int, P: int) -> tuple[int, int]:
    """Return (n_(P), n_)P() with n = n_(P) * n_)P(."""
    _require_prime(P)
    smooth = 1
    for p, e in factor(n).factors:
        if p <= P:
            smooth *= p**e
    return smooth, n // smooth


def is_smooth(n: int, P: int) -> bool:
    return all(p <= P for p, _ in factor(n).factors)


# ---------------------------------------------------------------------------
# vectorized tables on [0..X] (index 0 is padding)


def mobius_table(X: int) -> np.ndarray:
    return np.asarray(sieve(X).mu[: X + 1], dtype=np.int64)


def totient_table(X: int) -> np.ndarray:
    return np.asarray(sieve(X).phi[: X + 1])


def spf_table(X: int) -> np.ndarray:
    return np.asarray(sieve(X).spf[: X + 1])


def largest_prime_factor_table(X: int) -> np.ndarray:
    lpf = np.ones(X + 1, dtype=np.int64)
    for p in primes_up_to(X):
        lpf[::p] = p
    lpf[0] = 0
    return lpf


def omega_table(X: int) -> np.ndarray:
    w = np.zeros(X + 1, dtype=np.int64)
    for p in primes_up_to(X):
        w[::p] += 1
    w[0] = 0
    return w


def von_mangoldt_table(X: int) -> np.ndarray:
    lam = np.zeros(X + 1, dtype=np.float64)
    for p in primes_up_to(X):
        lp = math.log(p)
        q = p
        while q <= X:
            lam[q] = lp
            q *= p
    return lam


def dirichlet_convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(f*g)[n] = sum_{d|n} f[d] g[n/d] on [1..X] for equal-length arrays."""
    X = len(f) - 1
    dtype = np.result_type(f.dtype, g.dtype)
    h = np.zeros(X + 1, dtype=dtype)
    if dtype == object:
        h[:] = 0
    for d in np.flatnonzero(f[1:] != 0) + 1:
        d = int(d)
        h[d::d] += f[d] * g[1 : X // d + 1]
    h[0] = 0
    return h


def mobius_inversion_table(F: np.ndarray) -> np.ndarray:
    """F' = F * mu as an array."""
    return dirichlet_convolve(F, mobius_table(len(F) - 1))


def divisor_sum_table(Fp: np.ndarray) -> np.ndarray:
    """F = F' * 1 as an array."""
    ones = np.ones(len(Fp), dtype=np.int64)
    ones[0] = 0
    return dirichlet_convolve(Fp, ones)


# ---------------------------------------------------------------------------
# arithmetic functions


@dataclass(frozen=True)
class LocalFactor:
    """Values f(p^k) at one prime: explicit head, then a geometric tail.

    f(p^k) = head[k] for k < len(head) and tail_coef * tail_ratio**(k - len(head))
    afterwards.  ``tail_coef = 0`` means f vanishes past the head.
    """

    head: tuple
    tail_coef: Value = 0
    tail_ratio: Value = 0

    def at(self, k: int) -> Value:
        if k < len(self.head):
            return self.head[k]
        return self.tail_coef * self.tail_ratio ** (k - len(self.head))


class ArithmeticFunction:
    """An evaluator n -> Value with optional vectorized and structural metadata.

    ``array`` maps an int64 array of n to values and is used by ``values``.
    ``local`` returns the LocalFactor of a multiplicative function at a prime.
    ``support`` bounds a finite support: f(n) = 0 for n > support.
    """

    def __init__(
        self,
        rule: Callable[[int], Value],
        *,
        name: str = "f",
        exact: bool = True,
        array: Callable[[np.ndarray], np.ndarray] | None = None,
        table: Sequence | np.ndarray | None = None,
        multiplicative: bool = False,
        squarefree: bool = False,
        local: Callable[[int], LocalFactor] | None = None,
        support: int | None = None,
        memo: bool = False,
    ):
        self.rule = rule
        self.name = name
        self.exact = exact
        self.array = array
        self._table = None if table is None else _as_table(table, exact)
        self.multiplicative = multiplicative or local is not None
        self.squarefree = squarefree
        self.local = local
        self.support = support
        self._memo: dict[int, Value] | None = {} if memo else None
        self._lock = threading.Lock()

    @property
    def kind(self) -> str:
        return "table" if self._table is not None else "rule"

    def __repr__(self):
        return f"ArithmeticFunction({self.name!r}, kind={self.kind})"

    def __call__(self, n: int) -> Value:
        n = int(n)
        if self.support is not None and n > self.support:
            return 0
        if self._table is not None and n < len(self._table):
            return self._table[n]
        if self._memo is None:
            return self.rule(n)
        with self._lock:
            if n in self._memo:
                return self._memo[n]
        v = self.rule(n)
        with self._lock:
            self._memo[n] = v
        return v

    def values(self, X: int) -> np.ndarray:
        """Array of f(0..X) with f(0) = 0; dtype object when exact."""
        if self._table is not None and len(self._table) > X:
            return self._table[: X + 1].copy()
        if self.array is not None:
            out = np.asarray(self.array(np.arange(X + 1, dtype=np.int64)))
            out = out.copy()
        elif self.exact:
            out = np.empty(X + 1, dtype=object)
            out[0] = 0
            for n in range(1, X + 1):
                out[n] = self(n)
            return out
        else:
            out = np.array([0] + [self(n) for n in range(1, X + 1)])
        out[0] = 0
        if self.support is not None and self.support < X:
            out[self.support + 1 :] = 0
        return out

    def float_values(self, X: int) -> np.ndarray:
        v = self.values(X)
        if v.dtype == object:
            try:
                return v.astype(np.float64)
            except TypeError:
                return v.astype(np.complex128)
        return v


def _as_table(table, exact: bool) -> np.ndarray:
    if not exact:
        return np.asarray(table)
    items = table.tolist() if isinstance(table, np.ndarray) else list(table)
    out = np.empty(len(items), dtype=object)
    out[:] = items
    return out


def function_from_table(values: Sequence[Value], name: str = "table", exact: bool = True) -> ArithmeticFunction:
    """Finite table f(1..len(values)); zero beyond."""
    tab = [0] + list(values)
    return ArithmeticFunction(lambda n: 0, name=name, exact=exact, table=tab, support=len(values))


def divisor_convolution_at(f: Callable[[int], Value], g: Callable[[int], Value], n: int) -> Value:
    return sum(f(d) * g(n // d) for d in divisors(n))


def eratosthenes_transform(F: ArithmeticFunction, X: int) -> ArithmeticFunction:
    """F' = F * mu, tabulated on [1..X] and computed by divisor sums beyond."""
    table = mobius_inversion_table(F.values(X))
    return ArithmeticFunction(
        lambda n: divisor_convolution_at(F, mobius, n),
        name=F.name + "'",
        exact=F.exact,
        table=table,
        multiplicative=F.multiplicative,
    )


def divisor_sum(Fp: ArithmeticFunction, X: int) -> ArithmeticFunction:
    """Inverse of eratosthenes_transform: F(n) = sum_{d|n} F'(d)."""
    table = divisor_sum_table(Fp.values(X))
    return ArithmeticFunction(
        lambda n: sum(Fp(d) for d in divisors(n)),
        name=Fp.name.rstrip("'") or "F",
        exact=Fp.exact,
        table=table,
    )


def exact_sum(values: Iterable[Value]) -> Value:
    """Sum keeping Fractions exact and using fsum for floats."""
    vals = list(values)
    if all(isinstance(v, (int, Fraction, np.integer)) for v in vals):
        return sum((Fraction(v) if isinstance(v, np.integer) else v for v in vals), 0)
    if any(isinstance(v, complex) for v in vals):
        return complex(math.fsum(complex(v).real for v in vals), math.fsum(complex(v).imag for v in vals))
    return math.fsum(float(v) for v in vals)
