import cmath
import math
from fractions import Fraction

import pytest

from rsm import builtins
from rsm.arith import divisors, mobius, totient
from rsm.ramanujan import ramanujan_sum

ZETA2 = math.pi**2 / 6


def test_registry_names():
    base = {n.split(":")[0] for n in builtins.NAMES}
    assert base == {
        "zero", "one", "identity", "mobius", "phi-over-n", "sigma-over-n",
        "lambda", "lambda-truncated", "exp", "counterexample",
    }


@pytest.mark.parametrize(
    "name,parsed",
    [
        ("exp:5:2", ("exp", (5, 2))),
        ("exp(5,2)", ("exp", (5, 2))),
        ("exp( 5, 2 )", ("exp", (5, 2))),
        ("lambda-truncated(1000)", ("lambda-truncated", (1000,))),
        ("counterexample:5", ("counterexample", (5,))),
        ("one", ("one", ())),
    ],
)
def test_parse_name(name, parsed):
    assert builtins.parse_name(name) == parsed


def test_both_syntaxes_give_same_builtin():
    a, b = builtins.get("exp:5:2"), builtins.get("exp(5,2)")
    assert a.name == b.name == "exp:5:2"
    assert all(a.F(n) == b.F(n) for n in range(1, 30))


@pytest.mark.parametrize("name", ["nope", "one:3", "exp:5", "exp:a:b", "counterexample"])
def test_unknown_builtin(name):
    with pytest.raises(builtins.UnknownBuiltin) as e:
        builtins.get(name)
    assert str(e.value) and not str(e.value).startswith("'")


def test_unknown_lists_known_names():
    with pytest.raises(builtins.UnknownBuiltin, match="sigma-over-n"):
        builtins.get("sigma")


@pytest.mark.parametrize(
    "name,F",
    [
        ("zero", lambda n: 0),
        ("one", lambda n: 1),
        ("identity", lambda n: n),
        ("mobius", mobius),
        ("phi-over-n", lambda n: Fraction(totient(n), n)),
        ("sigma-over-n", lambda n: Fraction(sum(divisors(n)), n)),
        ("counterexample:5", lambda n: ramanujan_sum(5, n - 1)),
    ],
)
def test_function_values(name, F):
    b = builtins.get(name)
    for n in range(1, 121):
        assert b.F(n) == F(n)


@pytest.mark.parametrize("name", ["zero", "one", "identity", "mobius", "phi-over-n", "sigma-over-n", "counterexample:5", "counterexample:7"])
def test_transform_inverts_exactly(name):
    b = builtins.get(name)
    for n in range(1, 121):
        assert sum(b.Fp(d) for d in divisors(n)) == b.F(n)


@pytest.mark.parametrize("name", ["lambda", "lambda-truncated:50", "exp:5:2", "exp:12:7"])
def test_transform_inverts_float(name):
    b = builtins.get(name)
    for n in range(1, 121):
        assert abs(sum(b.Fp(d) for d in divisors(n)) - b.F(n)) < 1e-9


def test_lambda_truncated_matches_lambda_below_N():
    full, trunc = builtins.get("lambda"), builtins.get("lambda-truncated:60")
    for m in range(1, 61):
        assert abs(trunc.F(m) - full.F(m)) < 1e-12
    assert trunc.Fp(61) == 0 and trunc.Fp(6) == pytest.approx(full.Fp(6))


def test_exp_values():
    b = builtins.get("exp:5:2")
    for n in range(1, 40):
        assert abs(b.F(n) - cmath.exp(2j * math.pi * 2 * n / 5)) < 1e-12


@pytest.mark.parametrize("name", ["one", "phi-over-n", "sigma-over-n", "lambda", "exp:5:2", "counterexample:5", "lambda-truncated:100"])
def test_array_rule_matches_scalar(name):
    b = builtins.get(name)
    for fn in (b.F, b.Fp):
        arr = fn.values(300)
        assert arr[0] == 0
        for n in range(1, 301):
            assert abs(complex(arr[n]) - complex(fn(n))) < 1e-9


def test_sigma_array_against_exact():
    b = builtins.get("sigma-over-n")
    assert b.F.array is not None
    got = b.F.values(1000)
    for m in (1, 2, 12, 360, 997, 1000):
        assert got[m] == pytest.approx(float(Fraction(sum(divisors(m)), m)), rel=1e-13)


def test_win_tables():
    one = builtins.get("one").win
    assert [one[q] for q in range(1, 6)] == [1, 0, 0, 0, 0]
    assert builtins.get("zero").win[7] == 0
    sigma = builtins.get("sigma-over-n").win
    for q in range(1, 30):
        assert sigma[q] == pytest.approx(ZETA2 / q**2, rel=1e-12)
    phi = builtins.get("phi-over-n").win
    for q in range(1, 30):
        expected = mobius(q) / math.prod(p * p - 1 for p in {p for p in range(2, q + 1) if q % p == 0 and all(p % r for r in range(2, p))}) / ZETA2
        assert phi[q] == pytest.approx(expected, abs=1e-14)
    ce = builtins.get("counterexample:5").win
    assert ce[5] == Fraction(-1, 4) and all(ce[q] == 0 for q in range(1, 30) if q != 5)


def test_lambda_truncated_win_is_finite_sum():
    N = 40
    win = builtins.get(f"lambda-truncated:{N}").win
    for q in range(1, 20):
        direct = -math.fsum(mobius(d) * math.log(d) / d for d in range(q, N + 1, q))
        assert win[q] == pytest.approx(direct, abs=1e-12)


def test_car_tables():
    lam = builtins.get("lambda").car
    for q in range(1, 30):
        assert lam[q] == pytest.approx(mobius(q) / totient(q))
    e = builtins.get("exp:5:2").car
    assert e[5] == Fraction(1, 4) and e[1] == e[10] == 0


def test_divergent_builtins_ship_no_wintner_table():
    for name in ("identity", "mobius", "lambda", "exp:5:2"):
        assert builtins.get(name).win is None
