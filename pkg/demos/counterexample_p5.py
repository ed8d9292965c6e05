"""The shifted Ramanujan sum F_0(a) = c_5(a - 1): a function with a finite Wintner table
whose finite Ramanujan expansion still fails.

Run: python demos/counterexample_p5.py
"""

from pathlib import Path

from rsm import builtins
from rsm.correlations import correlate, error_term, reef_rhs
from rsm.counterexample import CounterexampleSpec, multiplicative_order, s_prime_power
from rsm.decomposition import fai_split, finwin_record
from rsm.specs import load_correlation_spec

SPEC_FILE = Path(__file__).parent / "specs" / "counterexample-p5.json"


def main():
    ce = builtins.get("counterexample:5")
    print("F_0(a) for a = 1..10:", [ce.F(a) for a in range(1, 11)])
    print("F_0'(d) for d = 1..10:", [ce.Fp(d) for d in range(1, 11)])
    print("Win_q is zero except Win_5 =", ce.win[5])

    # powers of 2 keep F_0' from decaying: 2 has order 4 mod 5
    spec = CounterexampleSpec(5)
    o = multiplicative_order(2, 5)
    print(f"S(2^K), K = 1..12 (order {o}):", [s_prime_power(spec, 2, K) for K in range(1, 13)])

    # the finite expansion Win_5 c_5(a) = -c_5(a)/4 misses F_0 at a = 1
    split = fai_split(ce.Fp, finwin_record(ce.win))
    print("\n a  F_0(a)  A(a)  I(a)  A - I")
    for a in range(1, 11):
        A, I = split.A(a), split.I_closed(a)
        print(f"{a:2d}  {ce.F(a)!s:>6}  {A!s:>4}  {I!s:>5}  {A - I!s:>5}")

    # the same numbers as a correlation: f = [n = 4], g = c_5, shift a
    corr = load_correlation_spec(SPEC_FILE)
    print("\ncorrelation spec:", SPEC_FILE.name)
    for a in (1, 2, 5, 6):
        print(f"  a={a}: C = {correlate(corr, a)}, expansion = {reef_rhs(corr, a)}, error = {error_term(corr, a)}")


if __name__ == "__main__":
    main()
