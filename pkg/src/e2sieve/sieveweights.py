"""Exact sieve weights for a shifted tuple, with every structural identity in Q.

The weights are the classical multidimensional ones: for a squarefree
d = (d_1, ..., d_k) with prod d_i < R and coprime to W,

    lambda_d = (prod_i mu(d_i) d_i) * sum_{d_i | r_i, supported r}
               y_r / prod_i phi(r_i),
    y_r      = F( log r_1 / log R, ..., log r_k / log R ),

and w_n = (sum_{d_i | n + h_i} lambda_d)^2.

Two deliberate implementation choices keep the whole pipeline exact:

* The irrational inputs log r / log R are replaced *once* by rational
  surrogates rounded to `log_digits` decimal digits (default 48); the
  surrogate error is at most 10^-log_digits per coordinate and is tracked
  (`log_eps`, `y_error_bound`).  Everything downstream is Fraction
  arithmetic, so the partition of the almost-prime sums into their four
  parts, the linear-combination identities, the symmetry and the c^2
  scaling all hold exactly, not just to rounding.
* `y_from_lambda` applies the exact Mobius inversion of the lambda
  transform (weights mu(r_i) phi(r_i) and 1/prod d_i), so a roundtrip
  through lambda reproduces the y table identically.  The classical
  asymptotic recovery with the singular-series weight g(p) = p - 2 is
  provided as `y_from_lambda_g` for comparison; it agrees only up to
  1 + O(1/p) factors and is not used in any identity.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Sequence

from .algebra import TestFunction, as_rational
from .numth import (
    euler_phi,
    floor_rational_power,
    is_squarefree,
    primes_in_range,
    primes_up_to,
)

_TUPLE_BUDGET = 2_000_000


def _mobius_squarefree(n: int) -> int:
    """mu(n) for squarefree n (counts prime factors)."""
    if n == 1:
        return 1
    count = 0
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            count += 1
            m //= d
            if m % d == 0:
                raise ValueError(f"{n} is not squarefree")
        d += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


def _squarefree_kernel_product(n: int, fn) -> int:
    """prod over primes p | n of fn(p), for squarefree n."""
    out = 1
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            out *= fn(d)
            m //= d
        d += 1
    if m > 1:
        out *= fn(m)
    return out


def _divisors(n: int) -> list[int]:
    out = [1]
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            exps = 0
            while m % d == 0:
                m //= d
                exps += 1
            out = [a * d ** e for a in out for e in range(exps + 1)]
        d += 1
    if m > 1:
        out = [a * p for a in out for p in (1, m)]
    return sorted(out)


@dataclass(frozen=True)
class IndexTuple:
    """A k-tuple of positive moduli indexing one sieve weight."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if not vals or any(v < 1 for v in vals):
            raise ValueError("index tuple needs positive entries")
        object.__setattr__(self, "values", vals)

    @property
    def product(self) -> int:
        out = 1
        for v in self.values:
            out *= v
        return out

    def is_supported(self, ctx: "SieveContext") -> bool:
        return ctx.is_supported(self.values)


class SieveContext:
    """Precomputed state for one weight system: moduli, tables, surrogate logs.

    Derived quantities:
      R  = floor(N^(theta/2 - delta)), the sieve level (R^2 < N is enforced),
      Y  = floor(N^eta), the lower cutoff for small prime factors,
      W  = product of primes <= D0 with D0 = max(2, floor(ln ln ln N)),
           unless overridden (W = 1 turns the pre-sieve off),
      nu0 = least non-negative residue with gcd(nu0 + h_i, W) = 1 for all i.
    """

    def __init__(
        self,
        N: int,
        shifts: Sequence[int],
        F: TestFunction,
        theta: Fraction,
        delta: Fraction = Fraction(0),
        eta: Fraction = Fraction(1, 100),
        W: int | None = None,
        log_digits: int = 48,
    ):
        if N < 16:
            raise ValueError("N is too small")
        self.N = int(N)
        self.shifts = tuple(sorted(int(h) for h in shifts))
        if len(set(self.shifts)) != len(self.shifts) or any(h < 0 for h in self.shifts):
            raise ValueError("shifts must be distinct and non-negative")
        self.k = len(self.shifts)
        if F.k != self.k:
            raise ValueError("test function arity must match the number of shifts")
        self.F = F
        self.theta = as_rational(theta)
        self.delta = as_rational(delta)
        self.eta = as_rational(eta)
        if not 0 < self.theta <= 1:
            raise ValueError("theta must be in (0, 1]")
        if self.delta < 0 or self.theta / 2 - self.delta <= 0:
            raise ValueError("need 0 <= delta < theta/2")
        if not 0 < self.eta < Fraction(1, 4):
            raise ValueError("eta must be in (0, 1/4)")
        if log_digits < 20:
            raise ValueError("log_digits must be >= 20")
        self.log_digits = int(log_digits)

        self.R = floor_rational_power(self.N, self.theta / 2 - self.delta)
        if self.R < 3:
            raise ValueError("sieve level R is too small")
        if self.R * self.R >= self.N:
            raise ValueError("R must satisfy R^2 < N; lower theta or raise delta")
        self.Y = floor_rational_power(self.N, self.eta)
        if self.Y >= self.R:
            raise ValueError("need Y < R")

        if W is None:
            lll = math.log(math.log(math.log(self.N)))
            self.D0 = max(2, math.floor(lll))
            self.W = 1
            for p in primes_up_to(self.D0):
                self.W *= p
        else:
            W = int(W)
            if W < 1 or (W > 1 and not is_squarefree(W)):
                raise ValueError("W must be a positive squarefree integer")
            self.D0 = None
            self.W = W

        self.nu0 = self._find_nu0()

        self._log_cache: dict[int, Fraction] = {1: Fraction(0)}
        self._sf_values = [
            v for v in range(1, self.R)
            if is_squarefree(v) and math.gcd(v, self.W) == 1
        ]
        self._tuples = self._enumerate_supported()
        self._y_table = {t: self._y_value(t) for t in self._tuples}
        self._lambda_table = self._build_lambda()

    # -- context structure ----------------------------------------------------

    def _find_nu0(self) -> int:
        for nu in range(self.W):
            if all(math.gcd(nu + h, self.W) == 1 for h in self.shifts):
                return nu
        raise ValueError("no admissible residue mod W; the shift set collides with W")

    def is_supported(self, values: Sequence[int]) -> bool:
        """Support predicate: squarefree product < R, coprime to W, arity k."""
        if len(values) != self.k:
            return False
        prod = 1
        for v in values:
            if v < 1:
                return False
            prod *= v
        if prod >= self.R:
            return False
        if math.gcd(prod, self.W) != 1:
            return False
        return is_squarefree(prod)

    def _enumerate_supported(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []

        def rec(pos: int, prefix: tuple[int, ...], prod: int):
            if pos == self.k:
                out.append(prefix)
                if len(out) > _TUPLE_BUDGET:
                    raise ValueError("supported-tuple enumeration exceeds budget")
                return
            for v in self._sf_values:
                newprod = prod * v
                if newprod >= self.R:
                    continue
                if math.gcd(v, prod) == 1:
                    rec(pos + 1, prefix + (v,), newprod)

        rec(0, (), 1)
        return out

    # -- surrogate logs ---------------------------------------------------------

    @property
    def log_eps(self) -> Fraction:
        """Certified bound on |surrogate - log(r)/log(R)| per coordinate."""
        return Fraction(1, 10 ** self.log_digits)

    def surrogate_log(self, r: int) -> Fraction:
        """log(r)/log(R) rounded once to log_digits decimal digits, as a Fraction."""
        if r < 1:
            raise ValueError("r must be >= 1")
        cached = self._log_cache.get(r)
        if cached is not None:
            return cached
        with decimal.localcontext() as ctx:
            ctx.prec = self.log_digits + 22
            ratio = decimal.Decimal(r).ln() / decimal.Decimal(self.R).ln()
            scaled = int((ratio * 10 ** self.log_digits)
                         .to_integral_value(rounding=decimal.ROUND_HALF_EVEN))
        val = Fraction(scaled, 10 ** self.log_digits)
        self._log_cache[r] = val
        return val

    def _y_value(self, t: tuple[int, ...]) -> Fraction:
        return self.F.poly.eval(tuple(self.surrogate_log(v) for v in t))

    def y_error_bound(self) -> Fraction:
        """Lipschitz bound on |y_r - F(true logs)| from the surrogate rounding.

        Uses sup |dF/du_j| <= sum_terms |c| e_j (3/2)^(deg-1) on [0, 3/2]^k,
        comfortably containing both the true ratios and their surrogates.
        """
        total = Fraction(0)
        for j in range(self.k):
            bound_j = Fraction(0)
            for exps, c in self.F.poly.terms.items():
                if exps[j]:
                    deg = sum(exps)
                    bound_j += abs(c) * exps[j] * Fraction(3, 2) ** (deg - 1)
            total += bound_j
        return total * self.log_eps

    # -- tables -------------------------------------------------------------------

    def _build_lambda(self) -> dict[tuple[int, ...], Fraction]:
        acc: dict[tuple[int, ...], Fraction] = {}
        for r in self._tuples:
            phis = 1
            for v in r:
                phis *= euler_phi(v)
            contrib = self._y_table[r] / phis
            if contrib == 0:
                continue
            divisor_lists = [_divisors(v) for v in r]
            for d in iter_product(*divisor_lists):
                acc[d] = acc.get(d, Fraction(0)) + contrib
        table: dict[tuple[int, ...], Fraction] = {}
        for d, s in acc.items():
            front = 1
            for v in d:
                front *= _mobius_squarefree(v) * v
            val = front * s
            if val != 0:
                table[d] = val
        return table

    def supported_tuples(self) -> list[tuple[int, ...]]:
        return list(self._tuples)

    def y_table_value(self, values: Sequence[int]) -> Fraction:
        """The defining y value: F at the surrogate log ratios (0 off support)."""
        t = tuple(int(v) for v in values)
        if not self.is_supported(t):
            return Fraction(0)
        return self._y_table[t]


def lambda_weight(ctx: SieveContext, t: IndexTuple | Sequence[int]) -> Fraction:
    """The sieve weight lambda_d, exactly; zero off support."""
    values = t.values if isinstance(t, IndexTuple) else tuple(int(v) for v in t)
    if not ctx.is_supported(values):
        return Fraction(0)
    return ctx._lambda_table.get(values, Fraction(0))


def y_from_lambda(ctx: SieveContext, r: IndexTuple | Sequence[int]) -> Fraction:
    """Recover y_r from the lambda table by exact Mobius inversion.

    y_r = (prod_i mu(r_i) phi(r_i)) * sum_{r_i | d_i} lambda_d / prod_i d_i.
    On the support this reproduces ctx.y_table_value(r) identically.
    """
    values = r.values if isinstance(r, IndexTuple) else tuple(int(v) for v in r)
    if not ctx.is_supported(values):
        return Fraction(0)
    acc = Fraction(0)
    for d, lam in ctx._lambda_table.items():
        if all(dv % rv == 0 for dv, rv in zip(d, values)):
            prod_d = 1
            for dv in d:
                prod_d *= dv
            acc += lam / prod_d
    front = 1
    for rv in values:
        front *= _mobius_squarefree(rv) * euler_phi(rv)
    return front * acc


def y_from_lambda_g(ctx: SieveContext, r: IndexTuple | Sequence[int]) -> Fraction:
    """Asymptotic recovery with the singular-series weight g(p) = p - 2.

    Not an exact inverse: it reproduces y_r only up to factors 1 + O(1/p)
    coming from g(p)/phi(p) mismatches (e.g. a single coordinate r = (5,)
    at R = 10 comes back scaled by 15/16).  Kept for diagnostics.
    """
    values = r.values if isinstance(r, IndexTuple) else tuple(int(v) for v in r)
    if not ctx.is_supported(values):
        return Fraction(0)
    acc = Fraction(0)
    for d, lam in ctx._lambda_table.items():
        if all(dv % rv == 0 for dv, rv in zip(d, values)):
            phis = 1
            for dv in d:
                phis *= euler_phi(dv)
            acc += lam / phis
    front = 1
    for rv in values:
        front *= _mobius_squarefree(rv) * _squarefree_kernel_product(rv, lambda p: p - 2)
    return front * acc


# ---------------------------------------------------------------------------
# Weighted sums over the shifted tuple
# ---------------------------------------------------------------------------


def _supported_divisor_values(ctx: SieveContext, value: int) -> list[int]:
    return [
        d for d in _divisors(value)
        if d < ctx.R and math.gcd(d, ctx.W) == 1 and is_squarefree(d)
    ]


def _lambda_sum(ctx: SieveContext, divisor_lists: list[list[int]],
                fixed: dict[int, int] | None = None) -> Fraction:
    """Sum of lambda over divisor tuples, optionally with coordinates pinned."""
    total = Fraction(0)
    table = ctx._lambda_table

    lists = []
    for i, lst in enumerate(divisor_lists):
        if fixed is not None and i in fixed:
            lists.append([fixed[i]])
        else:
            lists.append(lst)

    def rec(pos: int, prefix: tuple[int, ...], prod: int):
        nonlocal total
        if pos == len(lists):
            total += table.get(prefix, Fraction(0))
            return
        for d in lists[pos]:
            newprod = prod * d
            if newprod >= ctx.R:
                continue
            if math.gcd(d, prod) == 1:
                rec(pos + 1, prefix + (d,), newprod)

    rec(0, (), 1)
    return total


def weight_w(ctx: SieveContext, n: int) -> Fraction:
    """w_n = (sum over divisor tuples of the shifted values of lambda)^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lists = [_supported_divisor_values(ctx, n + h) for h in ctx.shifts]
    a = _lambda_sum(ctx, lists)
    return a * a


@dataclass(frozen=True)
class SSums:
    """All weighted sums over one window n in [N, 2N), n = nu0 (mod W).

    parts[m-1] splits the m-th almost-prime sum S2^(m) by whether the m-th
    modulus in each of the two weight factors is 1 or the small prime factor
    p1 of n + h_m: I = (p, 1), II = (1, p), III = (1, 1), IV = (p, p).
    All entries are exact rationals; S2^(m) equals the sum of its four parts
    identically, and S / Sprime are the stated linear combinations.
    """

    rho: int
    S0: Fraction
    S1: tuple[Fraction, ...]
    S2: tuple[Fraction, ...]
    parts: tuple[dict[str, Fraction], ...]
    S: Fraction
    Sprime: Fraction
    n_scanned: int


def s_sums(ctx: SieveContext, rho: int) -> SSums:
    """Accumulate S0, S1^(m), S2^(m) (with the four-way split), S and S'."""
    if rho < 1:
        raise ValueError("rho must be >= 1")
    k = ctx.k
    max_shift = ctx.shifts[-1]
    prime_set = set(primes_in_range(ctx.N, 2 * ctx.N + max_shift + 1))

    from .numth import beta as beta_indicator  # local to avoid cycle at import time

    beta_cache: dict[int, int] = {}

    def beta_at(v: int) -> int:
        got = beta_cache.get(v)
        if got is None:
            got = beta_indicator(v, ctx.N, ctx.eta)
            beta_cache[v] = got
        return got

    S0 = Fraction(0)
    S1 = [Fraction(0)] * k
    S2 = [Fraction(0)] * k
    parts = [
        {"I": Fraction(0), "II": Fraction(0), "III": Fraction(0), "IV": Fraction(0)}
        for _ in range(k)
    ]
    scanned = 0

    start = ctx.N + ((ctx.nu0 - ctx.N) % ctx.W)
    for n in range(start, 2 * ctx.N, ctx.W):
        scanned += 1
        lists = [_supported_divisor_values(ctx, n + h) for h in ctx.shifts]
        a_total = _lambda_sum(ctx, lists)
        w = a_total * a_total
        S0 += w
        for m in range(k):
            v = n + ctx.shifts[m]
            if v in prime_set:
                S1[m] += w
            if beta_at(v):
                S2[m] += w
                a1 = _lambda_sum(ctx, lists, fixed={m: 1})
                ap = a_total - a1
                parts[m]["I"] += ap * a1
                parts[m]["II"] += a1 * ap
                parts[m]["III"] += a1 * a1
                parts[m]["IV"] += ap * ap

    s_val = sum(S2, Fraction(0)) - rho * S0
    sprime_val = sum(S1, Fraction(0)) + sum(S2, Fraction(0)) - rho * S0
    return SSums(
        rho=rho,
        S0=S0,
        S1=tuple(S1),
        S2=tuple(S2),
        parts=tuple(parts),
        S=s_val,
        Sprime=sprime_val,
        n_scanned=scanned,
    )
