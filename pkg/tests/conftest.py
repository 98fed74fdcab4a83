"""Shared fixtures and independent oracles for the test suite."""

from fractions import Fraction

import pytest

from e2sieve import TARGETS, leading_coefficient
from e2sieve.algebra import SymPoly, definite_integral_one_var


def iterated_simplex_integral(exponents) -> Fraction:
    """Slow oracle: integrate a monomial over the simplex one variable at a time.

    Integrates u_k from 0 to 1 - u_1 - ... - u_{k-1}, then u_{k-1}, and so on.
    Independent of the factorial formula under test.
    """
    k = len(exponents)
    poly = SymPoly(k, {tuple(exponents): Fraction(1)})
    for var in range(k - 1, -1, -1):
        upper = SymPoly.constant(k, 1)
        for j in range(var):
            upper = upper - SymPoly.variable(k, j)
        poly = definite_integral_one_var(poly, var, Fraction(0), upper)
    return poly.constant_value()


@pytest.fixture(scope="session")
def target_coefficients():
    """Leading coefficients of the three bundled targets, computed once."""
    out = {}
    for name, target in TARGETS.items():
        out[name] = leading_coefficient(target.test_function(), target.params(), target.variant)
    return out
