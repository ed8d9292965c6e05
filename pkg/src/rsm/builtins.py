"""Named arithmetic functions with their Eratosthenes transforms and, where known in
closed form, Wintner or Carmichael coefficient tables.

Names take arguments after colons or in parentheses: ``lambda-truncated:1000``,
``exp(5,2)``, ``counterexample:5``.  Vectorized ``array`` rules return floats even
for exact functions, so bulk partial sums stay fast.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import (
    ArithmeticFunction,
    LocalFactor,
    divisor_sum_table,
    divisors,
    mobius,
    mobius_table,
    totient,
    totient_table,
    von_mangoldt,
    von_mangoldt_table,
)
from .counterexample import CounterexampleSpec, f0_function, f0_prime_closed, f0_prime_table, win_table_f0
from .smooth import MultiplicativeCoefficients
from .transforms import CoefficientTable, exact_wintner_table

ZETA2 = math.pi**2 / 6


class UnknownBuiltin(KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown builtin"


@dataclass
class Builtin:
    name: str
    F: ArithmeticFunction
    Fp: ArithmeticFunction
    win: CoefficientTable | None = None
    car: CoefficientTable | None = None
    description: str = ""


def _zero() -> Builtin:
    z = ArithmeticFunction(lambda n: 0, name="zero", support=0, local=lambda p: LocalFactor((0,)))
    win = CoefficientTable("wintner", {}, finite_support=True)
    return Builtin("zero", z, z, win, description="f = 0")


def _one() -> Builtin:
    F = ArithmeticFunction(
        lambda n: 1,
        name="one",
        array=lambda n: np.ones(len(n), dtype=np.int64),
        local=lambda p: LocalFactor((1,), 1, 1),
    )
    Fp = ArithmeticFunction(lambda n: int(n == 1), name="one'", support=1, local=lambda p: LocalFactor((1,)))
    win = CoefficientTable("wintner", {1: Fraction(1)}, finite_support=True)
    return Builtin("one", F, Fp, win, description="f = 1")


def _identity() -> Builtin:
    F = ArithmeticFunction(lambda n: n, name="identity", array=lambda n: n.copy(), local=lambda p: LocalFactor((1,), p, p))
    Fp = ArithmeticFunction(
        totient,
        name="phi",
        array=lambda n: totient_table(int(n.max()))[n],
        local=lambda p: LocalFactor((1,), p - 1, p),
    )
    return Builtin("identity", F, Fp, description="f(n) = n; Wintner coefficients diverge")


def _mobius() -> Builtin:
    F = ArithmeticFunction(mobius, name="mu", array=lambda n: mobius_table(int(n.max()))[n].astype(np.int64), local=lambda p: LocalFactor((1, -1)))
    Fp = ArithmeticFunction(
        lambda n: sum(mobius(d) * mobius(n // d) for d in divisors(n)),
        name="mu*mu",
        local=lambda p: LocalFactor((1, -2, 1)),
    )
    return Builtin("mobius", F, Fp, description="Moebius function; Wintner series not absolutely convergent")


def _phi_over_n() -> Builtin:
    def F_rule(n):
        return Fraction(totient(n), n)

    F = ArithmeticFunction(F_rule, name="phi/n", local=lambda p: LocalFactor((1,), Fraction(p - 1, p), 1))
    Fp = ArithmeticFunction(
        lambda d: Fraction(mobius(d), d),
        name="mu(d)/d",
        squarefree=True,
        local=lambda p: LocalFactor((1, Fraction(-1, p))),
    )
    # Win_q = mu(q) / (zeta(2) J_2(q)) with J_2 the Jordan totient
    mult = MultiplicativeCoefficients(1 / ZETA2, lambda p, k: 1.0 if k == 0 else (-1.0 / (p * p - 1) if k == 1 else 0.0))
    win = CoefficientTable("wintner", provenance="closed-form", multiplicative=mult)
    return Builtin("phi-over-n", F, Fp, win, description="phi(n)/n")


def _sigma_over_n() -> Builtin:
    def F_rule(n):
        return sum((Fraction(1, d) for d in divisors(n)), Fraction(0))

    def F_array(n):
        inv = 1.0 / np.arange(1, max(int(n.max()), 1) + 1)
        table = divisor_sum_table(np.concatenate([[0.0], inv]))
        return table[n]

    F = ArithmeticFunction(F_rule, name="sigma/n", array=F_array)
    Fp = ArithmeticFunction(
        lambda d: Fraction(1, d),
        name="1/d",
        array=lambda n: 1.0 / np.where(n > 0, n, 1),
        local=lambda p: LocalFactor((1,), Fraction(1, p), Fraction(1, p)),
    )
    # Win_q = zeta(2) / q^2
    mult = MultiplicativeCoefficients(ZETA2, lambda p, k: float(p) ** (-2 * k))
    win = CoefficientTable("wintner", provenance="closed-form", multiplicative=mult)
    return Builtin("sigma-over-n", F, Fp, win, description="sigma(n)/n")


def _lambda_prime(d: int) -> float:
    mu = mobius(d)
    return -mu * math.log(d) if mu and d > 1 else 0.0


def _lambda_prime_array(n: np.ndarray) -> np.ndarray:
    top = max(int(n.max()), 1)
    mu = mobius_table(top).astype(np.float64)
    logs = np.log(np.where(n > 0, n, 1).astype(np.float64))
    return -mu[n] * logs


def _lambda() -> Builtin:
    F = ArithmeticFunction(von_mangoldt, name="Lambda", exact=False, array=lambda n: von_mangoldt_table(int(n.max()))[n])
    Fp = ArithmeticFunction(_lambda_prime, name="-mu log", exact=False, array=_lambda_prime_array, squarefree=True)
    car = CoefficientTable("carmichael", provenance="closed-form", rule=lambda q: mobius(q) / totient(q))
    return Builtin("lambda", F, Fp, car=car, description="von Mangoldt function")


def _lambda_truncated(N: int) -> Builtin:
    if N < 1:
        raise ValueError("lambda-truncated needs N >= 1")

    def F_rule(m):
        return -math.fsum(mobius(d) * math.log(d) for d in divisors(m) if d <= N)

    def Fp_array(n):
        out = _lambda_prime_array(n)
        out[n > N] = 0.0
        return out

    F = ArithmeticFunction(F_rule, name=f"Lambda_{N}", exact=False)
    Fp = ArithmeticFunction(_lambda_prime, name=f"-mu log (d<={N})", exact=False, array=Fp_array, support=N, squarefree=True)
    return Builtin(f"lambda-truncated:{N}", F, Fp, exact_wintner_table(Fp), description=f"Lambda truncated at divisors <= {N}")


def _exp(q: int, j: int) -> Builtin:
    if q < 1 or math.gcd(j, q) != 1:
        raise ValueError("exp needs q >= 1 and (j, q) = 1")

    def F_rule(n):
        return complex(np.exp(2j * np.pi * ((n * j) % q) / q))

    def F_array(n):
        return np.exp(2j * np.pi * ((n * j) % q) / q)

    F = ArithmeticFunction(F_rule, name=f"e({j}n/{q})", exact=False, array=F_array)
    Fp = ArithmeticFunction(
        lambda d: sum(F_rule(e) * mobius(d // e) for e in divisors(d)), name=f"e({j}n/{q})'", exact=False, memo=True
    )
    car = CoefficientTable("carmichael", {q: Fraction(1, totient(q))}, finite_support=True)
    return Builtin(f"exp:{q}:{j}", F, Fp, car=car, description=f"e({j}n/{q})")


@lru_cache(maxsize=4)
def _f0_prime_table_cached(p0: int, X: int) -> np.ndarray:
    table = f0_prime_table(CounterexampleSpec(p0), X)
    table.setflags(write=False)
    return table


def _counterexample(p0: int) -> Builtin:
    spec = CounterexampleSpec(p0)

    def Fp_array(n):
        top = max(int(n.max()), 1)
        return _f0_prime_table_cached(p0, 1 << top.bit_length())[n]

    Fp = ArithmeticFunction(lambda d: f0_prime_closed(spec, d), name=f"F0'[{p0}]", array=Fp_array, memo=True)
    return Builtin(f"counterexample:{p0}", f0_function(p0), Fp, win_table_f0(p0), description=f"c_{p0}(n - 1)")


_SIMPLE = {
    "zero": _zero,
    "one": _one,
    "identity": _identity,
    "mobius": _mobius,
    "phi-over-n": _phi_over_n,
    "sigma-over-n": _sigma_over_n,
    "lambda": _lambda,
}
_PARAM = {"lambda-truncated": (_lambda_truncated, 1), "exp": (_exp, 2), "counterexample": (_counterexample, 1)}

NAMES = tuple(_SIMPLE) + ("lambda-truncated:N", "exp:q:j", "counterexample:p0")


def parse_name(name: str) -> tuple[str, tuple[int, ...]]:
    """Split ``base:1:2`` or ``base(1,2)`` into the base name and integer arguments."""
    m = re.fullmatch(r"([a-z-]+)\(([-\d,\s]*)\)", name.strip())
    if m:
        base, raw = m.group(1), [s for s in m.group(2).split(",") if s.strip()]
    else:
        base, *raw = name.strip().split(":")
    try:
        args = tuple(int(s) for s in raw)
    except ValueError:
        raise UnknownBuiltin(f"non-integer argument in {name!r}") from None
    return base, args


def get(name: str) -> Builtin:
    base, args = parse_name(name)
    if base in _SIMPLE:
        if args:
            raise UnknownBuiltin(f"{base} takes no arguments")
        return _SIMPLE[base]()
    if base in _PARAM:
        ctor, arity = _PARAM[base]
        if len(args) != arity:
            raise UnknownBuiltin(f"{base} takes {arity} argument(s)")
        return ctor(*args)
    raise UnknownBuiltin(f"unknown builtin {name!r}; known: {', '.join(NAMES)}")
