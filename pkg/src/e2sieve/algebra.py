"""Exact symbolic building blocks: rationals, sparse polynomials, log-linear values.

Everything downstream (simplex integrals, substituted functionals, sieve
weights) is built on three value types that are closed under the operations
we need:

* ``BigRational`` -- arbitrary-precision rationals; an alias of
  :class:`fractions.Fraction`.  There is nothing to add to Fraction, so we
  do not wrap it.
* ``SymPoly``     -- multivariate polynomials with Fraction coefficients,
  stored sparsely as {exponent tuple: coefficient}.
* ``LogLinear``   -- exact values of the shape  r0 + sum_i r_i * ln(q_i)
  with r_i, q_i rational and q_i > 0.  Closed under addition and rational
  scaling, which is all the closed-form outer integrals produce.

The only floating point in this module lives in evaluation helpers:
``loglinear_eval`` renders a LogLinear to a correctly rounded decimal string
through the stdlib ``decimal`` module (ln is correctly rounded in a widened
context, so the accumulated error stays far below one unit in the last
requested digit).
"""

from __future__ import annotations

import ast
import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

# Exact rational scalar used across the package.
BigRational = Fraction

RationalLike = Fraction | int


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and 'num/den' / decimal strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(
            "refusing to coerce float %r to an exact rational; pass a string "
            "or Fraction instead" % (x,)
        )
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# Sparse multivariate polynomials over Q
# ---------------------------------------------------------------------------


class SymPoly:
    """Multivariate polynomial with Fraction coefficients.

    Terms are held as a dict mapping exponent tuples (one entry per variable)
    to nonzero Fraction coefficients.  The zero polynomial has an empty dict.
    Instances are immutable by convention: all operations return new objects.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], RationalLike] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be >= 0")
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} does not match nvars={nvars}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = as_rational(coeff)
                if c != 0:
                    acc = clean.get(exps)
                    c = c if acc is None else acc + c
                    if c == 0:
                        clean.pop(exps, None)
                    else:
                        clean[exps] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, value: RationalLike) -> "SymPoly":
        value = as_rational(value)
        if value == 0:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def zero(cls, nvars: int) -> "SymPoly":
        return cls(nvars)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "SymPoly":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for nvars={nvars}")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: Fraction(1)})

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def uses_var(self, var: int) -> bool:
        return any(e[var] > 0 for e in self.terms)

    # -- ring operations -----------------------------------------------------

    def _coerce(self, other) -> "SymPoly | None":
        if isinstance(other, SymPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return SymPoly.constant(self.nvars, other)
        return None

    def __add__(self, other) -> "SymPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, Fraction(0)) + c
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        res = SymPoly.__new__(SymPoly)
        res.nvars = self.nvars
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "SymPoly":
        res = SymPoly.__new__(SymPoly)
        res.nvars = self.nvars
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other) -> "SymPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SymPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "SymPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        res = SymPoly.__new__(SymPoly)
        res.nvars = self.nvars
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SymPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = SymPoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SymPoly.constant(self.nvars, other)
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus ------------------------------------------------------------

    def derivative(self, var: int) -> "SymPoly":
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[var]
            if e == 0:
                continue
            ne = exps[:var] + (e - 1,) + exps[var + 1:]
            out[ne] = out.get(ne, Fraction(0)) + c * e
        return SymPoly(self.nvars, out)

    def antiderivative(self, var: int) -> "SymPoly":
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[var]
            ne = exps[:var] + (e + 1,) + exps[var + 1:]
            out[ne] = c / (e + 1)
        return SymPoly(self.nvars, out)

    def substitute(self, var: int, replacement: "SymPoly | RationalLike") -> "SymPoly":
        """Replace variable `var` by a polynomial in the same ring."""
        if isinstance(replacement, (int, Fraction)):
            replacement = SymPoly.constant(self.nvars, replacement)
        if replacement.nvars != self.nvars:
            raise ValueError("replacement lives in a different ring")
        # memoized powers of the replacement
        powers: dict[int, SymPoly] = {0: SymPoly.constant(self.nvars, 1), 1: replacement}

        def power(n: int) -> SymPoly:
            if n not in powers:
                powers[n] = power(n - 1) * replacement
            return powers[n]

        acc = SymPoly.zero(self.nvars)
        for exps, c in self.terms.items():
            e = exps[var]
            base = SymPoly(self.nvars, {exps[:var] + (0,) + exps[var + 1:]: c})
            acc = acc + (base * power(e) if e else base)
        return acc

    def eval(self, point: Sequence[RationalLike]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [as_rational(x) for x in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for x, e in zip(pt, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    def permuted(self, perm: Sequence[int]) -> "SymPoly":
        """Relabel variables: new variable perm[i] receives old variable i."""
        if sorted(perm) != list(range(self.nvars)):
            raise ValueError("perm must be a permutation of range(nvars)")
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            ne = [0] * self.nvars
            for i, e in enumerate(exps):
                ne[perm[i]] = e
            out[tuple(ne)] = c
        return SymPoly(self.nvars, out)

    # -- canonical text form ---------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Canonical serialization: graded-lex sorted 'coeff * u1^a1*u2^a2' terms."""
        if self.is_zero():
            return "0"
        if names is None:
            names = [f"u{i + 1}" for i in range(self.nvars)]
        elif len(names) != self.nvars:
            raise ValueError("names length must equal nvars")
        parts = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[exps]
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if factors:
                parts.append(f"{c} * " + "*".join(factors))
            else:
                parts.append(f"{c}")
        return " + ".join(parts)

    def __repr__(self):
        return f"SymPoly({self.nvars}, {self.to_text()!r})"

    # -- univariate helpers ------------------------------------------------------

    def univariate_coeffs(self) -> list[Fraction]:
        """Coefficient list [c0, c1, ...] for a 1-variable polynomial."""
        if self.nvars != 1:
            raise ValueError("univariate_coeffs needs nvars == 1")
        deg = self.total_degree()
        coeffs = [Fraction(0)] * (deg + 1 if deg >= 0 else 1)
        for (e,), c in self.terms.items():
            coeffs[e] = c
        return coeffs


def poly_eval(p: SymPoly, point: Sequence[RationalLike]) -> Fraction:
    """Evaluate p at an exact rational point."""
    return p.eval(point)


def definite_integral_one_var(
    f: SymPoly,
    var: int,
    lower: SymPoly | RationalLike,
    upper: SymPoly | RationalLike,
) -> SymPoly:
    """Integrate f with respect to one variable between polynomial limits.

    The limits may involve the other variables but not `var` itself; the
    result lives in the same ring, with `var` no longer appearing.
    """
    anti = f.antiderivative(var)
    for bound in (lower, upper):
        if isinstance(bound, SymPoly) and bound.uses_var(var):
            raise ValueError("integration limit must not involve the integration variable")
    result = anti.substitute(var, upper) - anti.substitute(var, lower)
    assert not result.uses_var(var)
    return result


# ---------------------------------------------------------------------------
# Expression parsing (safe, ast-based)
# ---------------------------------------------------------------------------

_MAX_POWER_SUM_INDEX = 50
_MAX_PARSE_EXPONENT = 64


def _power_sum(k: int, j: int) -> SymPoly:
    """P_j = u1^j + ... + uk^j in the k-variable ring."""
    out: dict[tuple[int, ...], Fraction] = {}
    for i in range(k):
        exps = tuple(j if t == i else 0 for t in range(k))
        out[exps] = Fraction(1)
    return SymPoly(k, out)


def parse_poly(expression: str, k: int) -> SymPoly:
    """Parse an arithmetic expression into a k-variable SymPoly.

    Names u1..uk denote the variables; names P1, P2, ... denote the power
    sums u1^j + ... + uk^j.  Integer literals, + - * / ** and parentheses are
    supported; division requires a nonzero constant divisor (this is how
    rational coefficients like 917/500 are written).
    """
    try:
        tree = ast.parse(expression, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression: {exc}") from None

    def build(node) -> SymPoly:
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, int):
                return SymPoly.constant(k, node.value)
            raise ValueError(f"only integer literals allowed, got {node.value!r}")
        if isinstance(node, ast.Name):
            name = node.id
            if name.startswith("u") and name[1:].isdigit():
                idx = int(name[1:])
                if not 1 <= idx <= k:
                    raise ValueError(f"variable {name} out of range for k={k}")
                return SymPoly.variable(k, idx - 1)
            if name.startswith("P") and name[1:].isdigit():
                j = int(name[1:])
                if not 1 <= j <= _MAX_POWER_SUM_INDEX:
                    raise ValueError(f"power-sum index {j} out of range")
                return _power_sum(k, j)
            raise ValueError(f"unknown name {name!r} (use u1..u{k} or P1, P2, ...)")
        if isinstance(node, ast.UnaryOp):
            operand = build(node.operand)
            if isinstance(node.op, ast.USub):
                return -operand
            if isinstance(node.op, ast.UAdd):
                return operand
            raise ValueError("unsupported unary operator")
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = build(node.left)
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponent must be an integer literal")
                exp = node.right.value
                if not 0 <= exp <= _MAX_PARSE_EXPONENT:
                    raise ValueError(f"exponent {exp} out of range")
                return base ** exp
            left = build(node.left)
            right = build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant():
                    raise ValueError("division only by nonzero constants")
                val = right.constant_value()
                if val == 0:
                    raise ValueError("division by zero")
                return left * Fraction(val.denominator, val.numerator)
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        raise ValueError(f"unsupported syntax element {type(node).__name__}")

    return build(tree)


def power_sum_build(k: int, expression: str) -> SymPoly:
    """Build a symmetric k-variable polynomial from a power-sum expression.

    Example: power_sum_build(2, "P1") == u1 + u2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return parse_poly(expression, k)


# ---------------------------------------------------------------------------
# Exact log-linear values  r0 + sum r_i * ln(q_i)
# ---------------------------------------------------------------------------


class LogLinear:
    """Exact value  const + sum_i coeff_i * ln(arg_i), all rational, args > 0.

    Construction merges duplicate args (exact Fraction equality) and drops
    zero coefficients and ln(1) terms.  Structural equality would miss
    relations like ln(4) = 2 ln(2), so __eq__ canonicalizes each argument
    into its prime-exponent vector first.
    """

    __slots__ = ("const", "terms")

    def __init__(self, const: RationalLike = 0, terms: Iterable[tuple[RationalLike, RationalLike]] = ()):
        self.const = as_rational(const)
        merged: dict[Fraction, Fraction] = {}
        for q, r in terms:
            q = as_rational(q)
            r = as_rational(r)
            if q <= 0:
                raise ValueError(f"log argument must be positive, got {q}")
            if q == 1 or r == 0:
                continue
            merged[q] = merged.get(q, Fraction(0)) + r
        self.terms = tuple(sorted(
            ((q, r) for q, r in merged.items() if r != 0),
            key=lambda t: (t[0].numerator, t[0].denominator),
        ))

    @classmethod
    def zero(cls) -> "LogLinear":
        return cls(0, ())

    @classmethod
    def log(cls, q: RationalLike, coeff: RationalLike = 1) -> "LogLinear":
        return cls(0, [(q, coeff)])

    # -- arithmetic (addition and rational scaling only) ----------------------

    def __add__(self, other) -> "LogLinear":
        if isinstance(other, (int, Fraction)):
            return LogLinear(self.const + other, self.terms)
        if isinstance(other, LogLinear):
            return LogLinear(self.const + other.const, self.terms + other.terms)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "LogLinear":
        return LogLinear(-self.const, [(q, -r) for q, r in self.terms])

    def __sub__(self, other) -> "LogLinear":
        if isinstance(other, (int, Fraction)):
            return LogLinear(self.const - other, self.terms)
        if isinstance(other, LogLinear):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> "LogLinear":
        return (-self) + other

    def __mul__(self, scalar) -> "LogLinear":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        s = as_rational(scalar)
        return LogLinear(self.const * s, [(q, r * s) for q, r in self.terms])

    __rmul__ = __mul__

    # -- canonical form and equality ------------------------------------------

    def canonical(self) -> tuple[Fraction, tuple[tuple[int, Fraction], ...]]:
        """(const, sorted prime-exponent vector): ln-args split into primes."""
        from sympy import factorint  # local import; sympy load is slow

        vec: dict[int, Fraction] = {}
        for q, r in self.terms:
            for p, e in factorint(q.numerator).items():
                vec[p] = vec.get(p, Fraction(0)) + r * e
            for p, e in factorint(q.denominator).items():
                vec[p] = vec.get(p, Fraction(0)) - r * e
        cleaned = tuple(sorted((p, c) for p, c in vec.items() if c != 0))
        return self.const, cleaned

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LogLinear(other)
        if not isinstance(other, LogLinear):
            return NotImplemented
        if self.const == other.const and self.terms == other.terms:
            return True  # cheap structural path
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def is_zero(self) -> bool:
        return self == LogLinear.zero()

    # -- numeric evaluation -----------------------------------------------------

    def evaluate_decimal(self, digits: int, guard: int = 15) -> decimal.Decimal:
        """Correctly rounded Decimal with `digits` significant digits."""
        if digits < 1:
            raise ValueError("digits must be >= 1")
        with decimal.localcontext() as ctx:
            ctx.prec = digits + guard
            total = decimal.Decimal(self.const.numerator) / decimal.Decimal(self.const.denominator)
            for q, r in self.terms:
                lnq = (decimal.Decimal(q.numerator) / decimal.Decimal(q.denominator)).ln()
                total += decimal.Decimal(r.numerator) / decimal.Decimal(r.denominator) * lnq
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            ctx.rounding = decimal.ROUND_HALF_EVEN
            return +total

    def to_float(self) -> float:
        return float(self.evaluate_decimal(25))

    def to_text(self) -> str:
        """Canonical serialization 'r0 + r1*ln(q1) + r2*ln(q2) + ...'."""
        parts = [str(self.const)]
        for q, r in self.terms:
            qs = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
            parts.append(f"{r}*ln({qs})")
        return " + ".join(parts)

    def __repr__(self):
        return f"LogLinear({self.to_text()!r})"


def loglinear_eval(value: LogLinear, digits: int) -> str:
    """Render a LogLinear as a decimal string with `digits` significant digits.

    digits must be at least 15.  The ln calls are correctly rounded at
    digits+15 working precision, so the printed string is accurate to well
    under one unit in the last place (final rounding: round-half-even).
    """
    if digits < 15:
        raise ValueError("digits must be >= 15")
    dec = value.evaluate_decimal(digits)
    if dec == 0:
        return "0"
    return str(dec)


# ---------------------------------------------------------------------------
# Test functions on the simplex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """A k-variable polynomial used as the sieve test function.

    box_bound, when set, records that the function should be treated as
    supported on the box {0 <= u_i <= box_bound} inside the simplex (the
    truncated support used by the asymptotic existence argument).  The
    functional layer only needs the structural consequence (inner integrals
    vanish when the substitution pushes past the box); general box-truncated
    integration is out of scope.
    """

    __test__ = False  # not a pytest class, despite the (mathematical) name

    k: int
    poly: SymPoly
    box_bound: Fraction | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.poly.nvars != self.k:
            raise ValueError("poly must have exactly k variables")
        if self.box_bound is not None and self.box_bound <= 0:
            raise ValueError("box_bound must be positive when given")

    @classmethod
    def from_expression(cls, k: int, expression: str,
                        box_bound: Fraction | None = None) -> "TestFunction":
        return cls(k=k, poly=parse_poly(expression, k), box_bound=box_bound)
