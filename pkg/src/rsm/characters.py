"""Dirichlet characters, Gauss sums and explicit formulas for P-smooth coefficients.

Characters are built over the CRT decomposition of the modulus.  Odd prime powers
use a primitive root; 4 uses the class of -1; 2^k with k >= 3 uses the classes of
-1 and 5.  A character is an exponent tuple on these generators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .arith import Value, divisors, factor, mobius, primes_up_to, totient
from .correlations import exp_sum, g_hat
from .ramanujan import ramanujan_sum, rvl_support
from .smooth import _check_prime, char_smooth_sum, smooth_harmonic


def _primitive_root_prime(p: int) -> int:
    if p == 2:
        return 1
    qs = [r for r, _ in factor(p - 1).factors]
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in qs):
            return g
    raise AssertionError("no primitive root")


def _component_logs(p: int, e: int) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Generators (element, order) and a table of discrete logs for (Z/p^e)^*.

    The table has shape (p^e, number of generators); non-units get -1.
    """
    m = p**e
    if p != 2:
        g = _primitive_root_prime(p)
        if e > 1 and pow(g, p - 1, p * p) == 1:
            g += p
        order = (p - 1) * p ** (e - 1)
        logs = -np.ones((m, 1), dtype=np.int64)
        x = 1
        for k in range(order):
            logs[x, 0] = k
            x = x * g % m
        return [(g, order)], logs
    if e == 1:
        return [], np.zeros((2, 0), dtype=np.int64)
    if e == 2:
        logs = -np.ones((4, 1), dtype=np.int64)
        logs[1, 0] = 0
        logs[3, 0] = 1
        return [(3, 2)], logs
    order5 = 2 ** (e - 2)
    logs = -np.ones((m, 2), dtype=np.int64)
    x = 1
    for k in range(order5):
        logs[x] = (0, k)
        logs[m - x] = (1, k)
        x = x * 5 % m
    return [(m - 1, 2), (5, order5)], logs


class CharacterGroup:
    """All phi(q) Dirichlet characters modulo q with a cached value table."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError("modulus must be positive")
        self.modulus = q
        self.generators: list[tuple[int, int]] = []
        orders: list[int] = []
        logs = np.zeros((q, 0), dtype=np.int64)
        n = np.arange(q)
        unit = np.array([math.gcd(int(k), q) == 1 for k in n])
        for p, e in factor(q).factors:
            gens, comp = _component_logs(p, e)
            m = p**e
            # lift each component generator to a residue mod q via CRT
            for g, order in gens:
                other = q // m
                lifted = _crt(g, m, 1, other)
                self.generators.append((lifted, order))
                orders.append(order)
            if comp.shape[1]:
                logs = np.concatenate([logs, comp[n % m]], axis=1)
        self.orders = tuple(orders)
        self._logs = logs
        self._unit = unit
        self.exponents = list(product(*(range(o) for o in orders)))
        angles = np.array([[k / o for k, o in zip(ks, orders)] for ks in self.exponents], dtype=np.float64)
        phase = logs @ angles.reshape(len(self.exponents), len(orders)).T
        table = np.exp(2j * np.pi * phase)
        table[~unit] = 0
        self.table = table.T.copy()  # shape (phi(q), q)
        self.table.setflags(write=False)
        self.characters = [DirichletCharacter(self, i, ks) for i, ks in enumerate(self.exponents)]

    def __len__(self):
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    @property
    def principal(self) -> "DirichletCharacter":
        return self.characters[0]

    def nonprincipal(self) -> list["DirichletCharacter"]:
        return self.characters[1:]


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    return (r1 * m2 * pow(m2, -1, m1) + r2 * m1 * pow(m1, -1, m2)) % (m1 * m2) if m2 > 1 else r1 % m1


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    group: CharacterGroup
    index: int
    exponents: tuple

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def is_principal(self) -> bool:
        return all(k == 0 for k in self.exponents)

    def __call__(self, n: int) -> complex:
        return complex(self.group.table[self.index, int(n) % self.group.modulus])

    def values(self) -> np.ndarray:
        return self.group.table[self.index]

    def conjugate(self) -> "DirichletCharacter":
        ks = tuple((-k) % o for k, o in zip(self.exponents, self.group.orders))
        return self.group.characters[self.group.exponents.index(ks)]

    def __repr__(self):
        return f"chi_{self.modulus}{list(self.exponents)}"


@lru_cache(maxsize=512)
def character_group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def gauss_sum(chi: DirichletCharacter) -> complex:
    """Sum of chi(m) e(m/q') over units m mod q'."""
    q = chi.modulus
    m = np.arange(q)
    return complex(np.sum(chi.values() * np.exp(2j * np.pi * m / q)))


@lru_cache(maxsize=4096)
def _gauss_conj(q: int, index: int) -> complex:
    chi = character_group(q).characters[index]
    return gauss_sum(chi.conjugate())


def absorb_factor(l: int, b: int, t: int) -> tuple[int, int]:
    """Both sides of c_l(b t) = phi(l)/phi(l') c_{l'}(t), l' = l/(l, b); asserts equality."""
    lp = l // math.gcd(l, b)
    lhs = ramanujan_sum(l, b * t)
    num = totient(l) * ramanujan_sum(lp, t)
    if num % totient(lp):
        raise AssertionError("right-hand side is not integral")
    rhs = num // totient(lp)
    if lhs != rhs:
        raise AssertionError(f"absorption fails at l={l}, b={b}, t={t}: {lhs} != {rhs}")
    return lhs, rhs


def char_flip_sum_direct(lp: int, chi: DirichletCharacter) -> complex:
    return sum(chi(d) * mobius(lp // d) for d in divisors(lp))


def char_flip_sum(lp: int, chi: DirichletCharacter) -> complex:
    """Sum of chi(d) mu(l'/d) over d | l' as mu(q'') chi(l'') prod_{p | l''} (1 - conj chi(p))."""
    q2 = math.gcd(lp, chi.modulus)
    l2 = lp // q2
    mu = mobius(q2)
    if mu == 0:
        return 0j
    out = mu * chi(l2)
    for p, _ in factor(l2).factors:
        out *= 1 - chi(p).conjugate()
    return out


def exp_car_coefficient(q: int, j: int, l: int) -> Fraction:
    """Carmichael coefficient of n -> e(j n / q) at l: 1/phi(q) if l == q else 0."""
    if math.gcd(j, q) != 1:
        raise ValueError("need (j, q) = 1")
    return Fraction(1, totient(q)) if l == q else Fraction(0)


def _ratio_product(chi: DirichletCharacter, P: int) -> complex:
    """prod_{p<=P} (1 - chi(p)/p)^{-1} / prod_{p<=P} (1 - 1/p)^{-1}."""
    return _ratio_product_cached(chi.modulus, chi.index, P)


@lru_cache(maxsize=1 << 14)
def _ratio_product_cached(q: int, index: int, P: int) -> complex:
    chi = character_group(q).characters[index]
    out = 1 + 0j
    for p in primes_up_to(P):
        out *= (1 - 1 / p) / (1 - chi(p) / p)
    return out


def _check_exp_args(q: int, j: int, l: int, P: int) -> None:
    _check_prime(P)
    if P < q:
        raise ValueError("need P >= q")
    if math.gcd(j, q) != 1:
        raise ValueError("need (j, q) = 1")
    if any(p > P for p in factor(l).primes):
        raise ValueError(f"l={l} is not {P}-smooth")


def exp_p_smooth_coefficient(q: int, j: int, l: int, P: int, method: str = "theorem5") -> complex:
    """P-smooth Carmichael coefficient at l of n -> e(j n / q), for P >= q.

    ``lemma8`` sums the character-split smooth series prime by prime;
    ``theorem5`` evaluates the closed formula built from Gauss sums and the
    ratio of partial Euler products.
    """
    _check_exp_args(q, j, l, P)
    if method == "lemma8":
        H = complex(smooth_harmonic(P))
        total = 0j
        for b in divisors(q):
            qp = q // b
            inner = 0j
            for chi in character_group(qp):
                inner += _gauss_conj(qp, chi.index) * chi(j) * char_smooth_sum(chi, l, b, P)
            total += inner / (b * totient(qp))
        return total / (totient(l) * H)
    if method == "theorem5":
        total = complex(exp_car_coefficient(q, j, l))
        for b in divisors(q):
            qp = q // b
            lp = l // math.gcd(l, b)
            q2 = math.gcd(lp, qp)
            l2 = lp // q2
            mu2 = mobius(q2)
            if mu2 == 0:
                continue
            inner = 0j
            for chi in character_group(qp).nonprincipal():
                flip = chi(l2)
                for p, _ in factor(l2).factors:
                    flip *= 1 - chi(p).conjugate()
                if flip == 0:
                    continue
                inner += _gauss_conj(qp, chi.index) * chi(j) * mu2 * flip * _ratio_product(chi, P)
            total += inner / (b * totient(qp) * totient(lp))
        return total
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# correlations through characters


def bh_p_smooth_coefficient(spec, l: int, P: int, method: str = "theorem5") -> complex:
    """P-smooth Carmichael coefficient at l of a = C_{f,g}(N, a)."""
    if P < spec.Q:
        raise ValueError("need P >= Q")
    total = 0j
    for q in range(1, spec.Q + 1):
        gh = g_hat(spec.g_prime, spec.Q, q)
        if gh == 0:
            continue
        for j in range(1, q + 1):
            if math.gcd(j, q) != 1:
                continue
            s = exp_sum(spec.f, spec.N, j % q, q)
            total += complex(gh) * s * exp_p_smooth_coefficient(q, j, l, P, method)
    return total


def bh_classic_coefficient(spec, l: int) -> Value:
    """Carmichael coefficient at l: g_hat(l) (sum_n f(n) c_l(n)) / phi(l)."""
    if l > spec.Q:
        return 0
    gh = g_hat(spec.g_prime, spec.Q, l)
    if gh == 0:
        return 0
    s = sum((spec.f(n) * ramanujan_sum(l, n) for n in range(1, spec.N + 1)), 0)
    return gh * s / totient(l)


def error_term_characters(spec, a: int) -> complex:
    """Error term of the REEF for C_{f,g}(N, a) as a sum over nonprincipal characters.

    chi(j) is evaluated at j reduced modulo q' = q/(q, a).
    """
    if a < 1:
        raise ValueError("a must be positive")
    total = 0j
    for q in range(1, spec.Q + 1):
        gh = g_hat(spec.g_prime, spec.Q, q)
        if gh == 0:
            continue
        g = math.gcd(q, a)
        qp, ap = q // g, a // g
        if qp <= 2:
            continue
        units = [j for j in range(1, q + 1) if math.gcd(j, q) == 1]
        sums = {j: exp_sum(spec.f, spec.N, j % q, q) for j in units}
        inner = 0j
        for chi in character_group(qp).nonprincipal():
            acc = sum(chi(j % qp) * sums[j] for j in units)
            inner += _gauss_conj(qp, chi.index) * chi(ap) * acc
        total += complex(gh) * inner / totient(qp)
    return total


def error_term_smooth(spec, a: int, P: int) -> complex:
    """Error term as sum over l in rvl_support(a, P) of c_l(a) (Car^(P)_l - Car_l)."""
    if P < max(spec.Q, a):
        raise ValueError("need P >= max(Q, a)")
    total = 0j
    for l in rvl_support(a, P):
        c = ramanujan_sum(l, a)
        if c:
            total += c * (bh_p_smooth_coefficient(spec, l, P) - complex(bh_classic_coefficient(spec, l)))
    return total

