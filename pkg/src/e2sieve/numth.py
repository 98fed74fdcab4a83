"""Desk-scale number theory: sieves, semiprime counts, admissible shift sets.

Conventions (kept exactly as in the analytic setup this package models):

* beta(n) = 1 iff n = p1 * p2 with Y < p1 <= sqrt(N) < p2, where
  Y = floor(N^eta).  The comparisons are exact integer comparisons
  (p1^2 <= N, p2^2 > N, p1 > Y), so no floating point enters the counts.
* The flat prime counts run over [N, 2N); the beta counts run over (N, 2N].
  The asymmetry is deliberate and matched by the tests.
* E2 numbers are products of two *distinct* primes (4, 9, 25, ... excluded);
  P2 = primes union E2.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import as_rational

# ---------------------------------------------------------------------------
# Basic sieves and integer helpers
# ---------------------------------------------------------------------------


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit by a plain byte sieve."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi) by a segmented sieve (independent of primes_up_to
    beyond the base primes)."""
    if hi <= lo or hi <= 2:
        return []
    lo = max(lo, 2)
    base = primes_up_to(math.isqrt(hi - 1))
    seg = bytearray([1]) * (hi - lo)
    for p in base:
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start < hi:
            seg[start - lo:: p] = bytearray(len(seg[start - lo:: p]))
    return [lo + i for i, flag in enumerate(seg) if flag and lo + i >= 2]


def _is_prime(n: int) -> bool:
    # sympy's deterministic test; used only for cofactor checks at desk scale
    if n < 2:
        return False
    from sympy import isprime

    return bool(isprime(n))


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 4 == 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return True


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    result = n
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            result -= result // d
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        result -= result // m
    return result


def _integer_nth_root(x: int, n: int) -> int:
    """floor(x^(1/n)) for x >= 0, n >= 1, exactly."""
    if x < 0 or n < 1:
        raise ValueError("need x >= 0, n >= 1")
    if x in (0, 1) or n == 1:
        return x
    if n >= x.bit_length():
        return 1  # 2^n > x >= 2 implies the root is below 2
    r = 1 << -(-x.bit_length() // n)  # upper-ish start
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


_POWER_BIT_BUDGET = 4_000_000


def floor_rational_power(N: int, exponent: Fraction) -> int:
    """floor(N^exponent) computed exactly for rational exponent >= 0."""
    exponent = as_rational(exponent)
    if N < 1:
        raise ValueError("N must be >= 1")
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    if exponent == 0:
        return 1
    a, b = exponent.numerator, exponent.denominator
    if a * N.bit_length() > _POWER_BIT_BUDGET:
        raise ValueError("floor_rational_power: N^exponent numerator too large")
    return _integer_nth_root(N ** a, b)


# ---------------------------------------------------------------------------
# Prime and semiprime counting functions
# ---------------------------------------------------------------------------


def pi_flat(N: int) -> int:
    """Number of primes in [N, 2N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return len(primes_in_range(N, 2 * N))


def pi_flat_qa(N: int, q: int, a: int) -> int:
    """Number of primes p in [N, 2N) with p = a (mod q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return sum(1 for p in primes_in_range(N, 2 * N) if p % q == a % q)


def _smallest_prime_factor(n: int, base: Sequence[int]) -> int | None:
    for p in base:
        if p * p > n:
            return None  # n is prime
        if n % p == 0:
            return p
    return None


def beta(n: int, N: int, eta: Fraction) -> int:
    """Indicator that n = p1 p2 with floor(N^eta) < p1 <= sqrt(N) < p2."""
    eta = as_rational(eta)
    if n < 2:
        return 0
    Y = floor_rational_power(N, eta)
    base = primes_up_to(math.isqrt(n))
    p1 = _smallest_prime_factor(n, base)
    if p1 is None:
        return 0  # prime
    if not (p1 > Y and p1 * p1 <= N):
        return 0
    m = n // p1
    if p1 * m != n or m == p1:
        return 0
    if m * m <= N:
        return 0
    return 1 if _is_prime(m) else 0


@lru_cache(maxsize=16)
def _beta_numbers(N: int, eta: Fraction) -> tuple[int, ...]:
    """All n in (N, 2N] with beta(n) = 1, via a segmented least-factor scan."""
    eta = as_rational(eta)
    Y = floor_rational_power(N, eta)
    lo, hi = N + 1, 2 * N + 1  # half-open [lo, hi) == (N, 2N]
    base = primes_up_to(math.isqrt(hi - 1))
    spf = [0] * (hi - lo)
    for p in base:
        if p * p > N:
            break  # p1 must satisfy p1^2 <= N, larger factors cannot qualify
        start = ((lo + p - 1) // p) * p
        for idx in range(start - lo, hi - lo, p):
            if spf[idx] == 0:
                spf[idx] = p
    out = []
    for idx, p in enumerate(spf):
        if p == 0 or p <= Y:
            continue
        n = lo + idx
        m = n // p
        if n == p * m and m != p and m * m > N and _is_prime(m):
            out.append(n)
    return tuple(out)


def pi_beta(N: int, eta: Fraction) -> int:
    """sum of beta(n) over N < n <= 2N."""
    return len(_beta_numbers(N, as_rational(eta)))


def pi_beta_q(N: int, eta: Fraction, q: int) -> int:
    """Same sum restricted to n coprime to q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return sum(1 for n in _beta_numbers(N, as_rational(eta)) if math.gcd(n, q) == 1)


def pi_beta_qa(N: int, eta: Fraction, q: int, a: int) -> int:
    """Same sum restricted to n = a (mod q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return sum(1 for n in _beta_numbers(N, as_rational(eta)) if n % q == a % q)


def delta_beta(N: int, eta: Fraction, q: int, a: int) -> Fraction:
    """Discrepancy pi_beta(N;q,a) - pi_beta_q(N)/phi(q), exact.

    Requires gcd(a, q) = 1; summed over the coprime residues a the
    discrepancies cancel exactly.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if math.gcd(a, q) != 1:
        raise ValueError("a must be coprime to q")
    return Fraction(pi_beta_qa(N, eta, q, a)) - Fraction(pi_beta_q(N, eta, q), euler_phi(q))


# ---------------------------------------------------------------------------
# E2 / P2 sequences
# ---------------------------------------------------------------------------


def e2_sequence(limit: int) -> list[int]:
    """All products of two distinct primes up to limit, ascending.

    Uses an additive Omega sieve (numpy): one increment per prime divisor
    and per prime-power divisor gives Omega(n) with multiplicity; keep
    Omega = 2 and drop the prime squares.
    """
    if limit < 1:
        return []
    omega = np.zeros(limit + 1, dtype=np.int8)
    for p in primes_up_to(limit):
        omega[p::p] += 1
        pe = p * p
        while pe <= limit:
            omega[pe::pe] += 1
            pe *= p
    mask = omega == 2
    for p in primes_up_to(math.isqrt(limit)):
        mask[p * p] = False
    return [int(n) for n in np.nonzero(mask)[0]]


def p2_sequence(limit: int) -> list[int]:
    """Primes and E2 numbers up to limit, merged ascending."""
    return sorted(primes_up_to(limit) + e2_sequence(limit))


# ---------------------------------------------------------------------------
# Admissible shift sets
# ---------------------------------------------------------------------------


def is_admissible(shifts: Iterable[int]) -> tuple[bool, dict]:
    """Check that the shifts avoid a full residue system mod every prime <= k.

    Returns (True, {p: free_residue}) with a witness residue per prime, or
    (False, {"covering_prime": p}) for the first prime whose classes are all
    occupied.  Primes p > k can never be covered by k shifts.
    """
    hs = sorted(set(int(h) for h in shifts))
    if len(hs) == 0:
        raise ValueError("shift set must be nonempty")
    if any(h < 0 for h in hs):
        raise ValueError("shifts must be non-negative")
    certificate: dict[int, int] = {}
    for p in primes_up_to(len(hs)):
        taken = {h % p for h in hs}
        if len(taken) == p:
            return False, {"covering_prime": p}
        certificate[p] = min(r for r in range(p) if r not in taken)
    return True, certificate


@dataclass(frozen=True)
class AdmissibleSet:
    """A sorted admissible tuple of distinct non-negative shifts."""

    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(int(h) for h in self.elements))
        if len(set(elems)) != len(elems):
            raise ValueError("shifts must be distinct")
        object.__setattr__(self, "elements", elems)
        ok, cert = is_admissible(elems)
        if not ok:
            raise ValueError(f"shift set is not admissible: {cert}")

    @property
    def k(self) -> int:
        return len(self.elements)

    @property
    def diameter(self) -> int:
        return self.elements[-1] - self.elements[0]


def gen_admissible(k: int) -> AdmissibleSet:
    """The k primes just above k, shifted to start at 0.

    Standard construction: p_{pi(k)+1}, ..., p_{pi(k)+k} avoid every prime
    p <= k automatically (none of them is divisible by such p, so residue 0
    is free).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    bound = max(2 * k, 16)
    while True:
        ps = primes_up_to(bound)
        skip = sum(1 for p in ps if p <= k)
        if len(ps) >= skip + k:
            chosen = ps[skip:skip + k]
            break
        bound *= 2
    first = chosen[0]
    return AdmissibleSet(tuple(h - first for h in chosen))


# ---------------------------------------------------------------------------
# Gap scans and tuple hit counts
# ---------------------------------------------------------------------------

UNIVERSES = ("E2", "P2", "primes")


def _universe_sequence(universe: str, limit: int) -> list[int]:
    if universe == "E2":
        return e2_sequence(limit)
    if universe == "P2":
        return p2_sequence(limit)
    if universe == "primes":
        return primes_up_to(limit)
    raise ValueError(f"universe must be one of {UNIVERSES}")


@dataclass(frozen=True)
class GapReport:
    """Minimum rho-step gap in a sequence up to `limit`, with a witness."""

    universe: str
    limit: int
    rho: int
    min_gap: int
    argmin: tuple[int, ...]          # the rho+1 consecutive members realizing it
    histogram: dict[int, int] = field(repr=False)
    scanned: int = 0

    def to_dict(self) -> dict:
        return {
            "universe": self.universe,
            "limit": self.limit,
            "rho": self.rho,
            "min_gap": self.min_gap,
            "argmin": list(self.argmin),
            "histogram": {str(g): c for g, c in sorted(self.histogram.items())},
            "scanned": self.scanned,
        }


def gap_scan(limit: int, rho: int, universe: str) -> GapReport:
    """Scan q_{n+rho} - q_n over the chosen sequence up to limit."""
    if limit < 100:
        raise ValueError("limit must be >= 100")
    if rho < 1:
        raise ValueError("rho must be >= 1")
    seq = _universe_sequence(universe, limit)
    if len(seq) <= rho:
        raise ValueError("sequence too short for this rho")
    gaps = [seq[i + rho] - seq[i] for i in range(len(seq) - rho)]
    hist = Counter(gaps)
    min_gap = min(gaps)
    i0 = gaps.index(min_gap)
    witness = tuple(seq[i0:i0 + rho + 1])
    return GapReport(
        universe=universe,
        limit=limit,
        rho=rho,
        min_gap=min_gap,
        argmin=witness,
        histogram=dict(hist),
        scanned=len(gaps),
    )


@dataclass(frozen=True)
class TupleHitReport:
    shifts: tuple[int, ...]
    universe: str
    limit: int
    threshold: int
    count: int
    witnesses: tuple[int, ...]  # first 10 qualifying n

    def to_dict(self) -> dict:
        return {
            "shifts": list(self.shifts),
            "universe": self.universe,
            "limit": self.limit,
            "threshold": self.threshold,
            "count": self.count,
            "witnesses": list(self.witnesses),
        }


def tuple_hit_count(shifts: Sequence[int], limit: int, universe: str, threshold: int) -> TupleHitReport:
    """Count n <= limit for which at least `threshold` of n + h_i land in the universe."""
    hs = tuple(sorted(set(int(h) for h in shifts)))
    if not hs:
        raise ValueError("shift set must be nonempty")
    if not 0 <= threshold <= len(hs):
        raise ValueError("threshold must be between 0 and |shifts|")
    if universe not in ("E2", "P2"):
        raise ValueError("universe must be 'E2' or 'P2' for tuple hits")
    top = limit + hs[-1]
    members = bytearray(top + 1)
    for v in _universe_sequence(universe, top):
        members[v] = 1
    count = 0
    witnesses: list[int] = []
    for n in range(1, limit + 1):
        hits = sum(members[n + h] for h in hs)
        if hits >= threshold:
            count += 1
            if len(witnesses) < 10:
                witnesses.append(n)
    return TupleHitReport(
        shifts=hs,
        universe=universe,
        limit=limit,
        threshold=threshold,
        count=count,
        witnesses=tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# Distribution-in-progressions table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BVTable:
    """Exact discrepancy table over squarefree moduli q <= floor(N^theta).

    For the prime universe the reference count is pi_flat(N)/phi(q); for the
    beta universe it is the coprime-restricted pi_beta_q(N)/phi(q).  The
    weighted sum aggregates mu^2(q) * max_(a,q)=1 |discrepancy|.
    """

    N: int
    theta: Fraction
    eta: Fraction | None
    universe: str
    rows: dict[int, Fraction] = field(repr=False)
    weighted_sum: Fraction = Fraction(0)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "theta": str(self.theta),
            "eta": None if self.eta is None else str(self.eta),
            "universe": self.universe,
            "rows": {str(q): str(v) for q, v in sorted(self.rows.items())},
            "weighted_sum": str(self.weighted_sum),
        }


def bv_table(N: int, eta: Fraction | None, theta: Fraction, universe: str) -> BVTable:
    """Discrepancy diagnostics for primes or beta numbers in progressions."""
    theta = as_rational(theta)
    if universe not in ("primes", "beta"):
        raise ValueError("universe must be 'primes' or 'beta'")
    if not 0 < theta <= 1:
        raise ValueError("theta must satisfy 0 < theta <= 1")
    if universe == "beta":
        if eta is None:
            raise ValueError("beta universe needs eta")
        eta = as_rational(eta)
        values = list(_beta_numbers(N, eta))
    else:
        values = primes_in_range(N, 2 * N)
    qmax = floor_rational_power(N, theta)
    rows: dict[int, Fraction] = {}
    weighted = Fraction(0)
    total_unrestricted = len(values)
    for q in range(1, qmax + 1):
        if not is_squarefree(q):
            continue
        counts = [0] * q
        coprime_total = 0
        for v in values:
            counts[v % q] += 1
            if math.gcd(v, q) == 1:
                coprime_total += 1
        phi = euler_phi(q)
        if universe == "beta":
            reference = Fraction(coprime_total, phi)
        else:
            reference = Fraction(total_unrestricted, phi)
        worst = Fraction(0)
        for a in range(q):
            if math.gcd(a, q) == 1:
                disc = abs(Fraction(counts[a]) - reference)
                if disc > worst:
                    worst = disc
        rows[q] = worst
        weighted += worst  # mu^2(q) = 1 on the squarefree q we kept
    return BVTable(N=N, theta=theta, eta=eta, universe=universe, rows=rows, weighted_sum=weighted)
