"""Smooth summation of the Ramanujan expansion of sigma(n)/n.

The coefficients are zeta(2)/q^2.  Summing over P-smooth q gives a finite closed form
for every P, and the error at a fixed a shrinks as P grows.

Run: python demos/smooth_sigma.py
"""

from fractions import Fraction

from rsm import builtins
from rsm.arith import divisors
from rsm.smooth import constant_coefficients, smooth_ramanujan_sum


def main():
    sigma = builtins.get("sigma-over-n")
    print(" a   sigma(a)/a   P=11      P=31      P=101")
    for a in (1, 2, 6, 12, 30, 60):
        exact = Fraction(sum(divisors(a)), a)
        vals = [smooth_ramanujan_sum(sigma.win, a, P) for P in (11, 31, 101)]
        print(f"{a:3d}  {float(exact):9.6f}  " + "  ".join(f"{float(v):8.6f}" for v in vals))

    # constant coefficients sum to exactly zero over any P-smooth set
    one = constant_coefficients(Fraction(1))
    print("\nconstant coefficients, a = 1..5, P = 7:", [str(smooth_ramanujan_sum(one, a, 7)) for a in range(1, 6)])


if __name__ == "__main__":
    main()
