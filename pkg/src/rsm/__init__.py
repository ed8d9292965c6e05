"""Ramanujan sums, smooth summation of Ramanujan expansions and correlation experiments."""

__version__ = "0.1.0"

from .arith import ArithmeticFunction, divisors, factor, mobius, totient
from .ramanujan import ramanujan_sum

__all__ = ["ArithmeticFunction", "divisors", "factor", "mobius", "ramanujan_sum", "totient", "__version__"]
