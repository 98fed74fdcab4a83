"""Primes, two-prime-factor sequences, admissibility, scans, distribution tables."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from e2sieve.numth import (
    AdmissibleSet,
    beta,
    bv_table,
    delta_beta,
    e2_sequence,
    euler_phi,
    floor_rational_power,
    gap_scan,
    gen_admissible,
    is_admissible,
    is_squarefree,
    p2_sequence,
    pi_beta,
    pi_beta_q,
    pi_beta_qa,
    pi_flat,
    pi_flat_qa,
    primes_in_range,
    primes_up_to,
    tuple_hit_count,
)


def test_primes_up_to_basics():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []
    assert len(primes_up_to(10 ** 6)) == 78498


def test_primes_in_range_matches_plain_sieve():
    full = primes_up_to(5000)
    for lo, hi in [(0, 100), (100, 1000), (997, 998), (4000, 5001), (1, 2)]:
        expected = [p for p in full if lo <= p < hi]
        assert primes_in_range(lo, hi) == expected


def test_squarefree_and_phi():
    assert [n for n in range(1, 20) if is_squarefree(n)] == \
        [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19]
    assert euler_phi(1) == 1
    assert euler_phi(12) == 4
    assert euler_phi(97) == 96
    # multiplicativity on a coprime pair
    assert euler_phi(35) == euler_phi(5) * euler_phi(7)


def test_floor_rational_power():
    assert floor_rational_power(10, Fraction(1, 2)) == 3
    assert floor_rational_power(49, Fraction(1, 2)) == 7     # exact square
    assert floor_rational_power(1024, Fraction(3, 10)) == 8  # 2^10 -> 2^3
    assert floor_rational_power(101, Fraction(999, 2000)) == 10
    assert floor_rational_power(10 ** 10, Fraction(1, 10)) == 10


@given(st.integers(2, 10 ** 6), st.integers(1, 5), st.integers(2, 6))
@settings(max_examples=60)
def test_floor_rational_power_is_the_true_floor(N, num, den):
    exponent = Fraction(num, den)
    if exponent > 1:
        exponent = 1 / exponent
    r = floor_rational_power(N, exponent)
    # r <= N^exponent < r+1   <=>   r^den <= N^num < (r+1)^den
    assert r ** exponent.denominator <= N ** exponent.numerator
    assert (r + 1) ** exponent.denominator > N ** exponent.numerator


def test_pi_flat_counts_the_dyadic_window():
    assert pi_flat(10) == 4                 # 11, 13, 17, 19
    assert pi_flat_qa(10, 3, 1) == 2        # 13, 19
    assert pi_flat_qa(10, 3, 2) == 2        # 11, 17


# ---------------------------------------------------------------------------
# the restricted two-factor indicator
# ---------------------------------------------------------------------------


def test_beta_examples():
    eta = Fraction(1, 10)
    assert beta(202, 200, eta) == 1         # 2 * 101 with 1 < 2 <= sqrt(200) < 101
    assert beta(6, 200, eta) == 0           # below the window
    assert beta(209, 200, eta) == 1         # 11 * 19, 121 <= 200 < 361
    assert beta(211, 200, eta) == 0         # prime
    assert beta(225, 200, eta) == 0         # 15^2: p1 = p2 not allowed by the size split
    assert pi_beta(200, eta) == 60


def test_beta_matches_trial_division_oracle():
    N, eta = 3000, Fraction(1, 10)
    Y = floor_rational_power(N, eta)
    flagged = 0
    for n in range(N + 1, 2 * N + 1):
        # oracle: factor n as p1 * p2 and check the integer inequalities
        hits = 0
        for p in primes_up_to(int(math.isqrt(n)) + 1):
            if n % p == 0:
                q = n // p
                ok = (q != p and all(q % r for r in primes_up_to(int(math.isqrt(q)) + 1) if r < q)
                      and p > Y and p * p <= N and q * q > N)
                hits = 1 if ok else 0
                break
        assert beta(n, N, eta) == hits, n
        flagged += hits
    assert flagged == pi_beta(N, eta)


def test_beta_counts_split_by_residue():
    N, eta, q = 500, Fraction(1, 10), 6
    total_coprime = sum(pi_beta_qa(N, eta, q, a) for a in range(q) if math.gcd(a, q) == 1)
    assert total_coprime == pi_beta_q(N, eta, q)
    assert pi_beta_q(N, eta, 1) == pi_beta(N, eta)


def test_delta_beta_sums_to_zero_over_coprime_classes():
    eta = Fraction(1, 10)
    for N, q in [(200, 3), (200, 4), (500, 5), (1000, 6)]:
        total = sum(delta_beta(N, eta, q, a) for a in range(1, q + 1) if math.gcd(a, q) == 1)
        assert total == 0
    assert delta_beta(300, eta, 1, 1) == 0
    with pytest.raises(ValueError):
        delta_beta(200, eta, 6, 3)  # gcd(3, 6) != 1


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------


def test_e2_sequence_prefix():
    assert e2_sequence(40) == [6, 10, 14, 15, 21, 22, 26, 33, 34, 35, 38, 39]
    assert 4 not in e2_sequence(100)      # 2^2 is excluded
    assert 12 not in e2_sequence(100)     # three prime factors with multiplicity
    assert 49 not in e2_sequence(100)     # 7^2 is excluded


def test_e2_sequence_matches_prime_pair_oracle():
    limit = 20_000
    primes = primes_up_to(limit // 2)
    oracle = sorted(
        p * q
        for i, p in enumerate(primes)
        for q in primes[i + 1:]
        if p * q <= limit
    )
    assert e2_sequence(limit) == oracle


def test_p2_sequence_is_the_union():
    limit = 20_000
    expected = sorted(set(primes_up_to(limit)) | set(e2_sequence(limit)))
    assert p2_sequence(limit) == expected
    assert p2_sequence(40)[:10] == [2, 3, 5, 6, 7, 10, 11, 13, 14, 15]


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


def test_is_admissible_verdicts():
    ok, cert = is_admissible([0, 2, 6])
    assert ok
    # certificate: for each prime p <= k, a residue class mod p avoided by H
    for p, free in cert.items():
        assert all(h % p != free for h in [0, 2, 6])
    ok, cert = is_admissible([0, 2, 4])
    assert not ok and cert["covering_prime"] == 3
    assert {h % 3 for h in [0, 2, 4]} == {0, 1, 2}
    assert is_admissible([0, 2, 6, 8, 12])[0]
    assert is_admissible([0, 4, 6, 10, 12, 16])[0]


def test_admissible_set_normalizes_and_validates():
    s = AdmissibleSet((6, 0, 2))
    assert s.elements == (0, 2, 6)
    assert s.k == 3 and s.diameter == 6
    with pytest.raises(ValueError):
        AdmissibleSet((0, 2, 2))
    with pytest.raises(ValueError):
        AdmissibleSet((0, -2, 6))
    with pytest.raises(ValueError):
        AdmissibleSet((0, 2, 4))


def test_gen_admissible():
    assert gen_admissible(1).elements == (0,)
    assert gen_admissible(5).elements == (0, 4, 6, 10, 12)
    for k in range(1, 201):
        s = gen_admissible(k)   # AdmissibleSet re-checks admissibility on build
        assert s.k == k


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------


def test_gap_scan_witnesses():
    r1 = gap_scan(1000, 1, "E2")
    assert (r1.min_gap, r1.argmin) == (1, (14, 15))
    r2 = gap_scan(1000, 2, "E2")
    assert (r2.min_gap, r2.argmin) == (2, (33, 34, 35))
    rp = gap_scan(1000, 1, "primes")
    assert (rp.min_gap, rp.argmin) == (1, (2, 3))
    assert sum(r1.histogram.values()) == r1.scanned  # one histogram entry per index
    with pytest.raises(ValueError):
        gap_scan(1000, 1, "martians")


def test_tuple_hit_count():
    rep = tuple_hit_count((0, 2, 6), 100, "P2", 3)
    assert 5 in rep.witnesses          # 5, 7, 11 all prime
    assert rep.count >= 1
    zero = tuple_hit_count((0, 2), 50, "E2", 0)
    assert zero.count == 50            # threshold 0 is satisfied vacuously
    with pytest.raises(ValueError):
        tuple_hit_count((0, 2), 100, "P2", 3)   # threshold > |H|
    with pytest.raises(ValueError):
        tuple_hit_count((0, 2), 100, "primes", 1)  # universe not supported here


def test_bv_table_primes():
    table = bv_table(1000, None, Fraction(1, 3), "primes")
    assert sorted(table.rows) == [1, 2, 3, 5, 6, 7, 10]   # squarefree q <= 10
    assert table.rows[1] == 0
    assert table.rows[2] == 0        # all odd primes in (N, 2N] are 1 mod 2
    assert all(v >= 0 for v in table.rows.values())
    assert table.weighted_sum >= 0


def test_bv_table_beta():
    table = bv_table(500, Fraction(1, 10), Fraction(1, 4), "beta")
    assert 1 in table.rows and table.rows[1] == 0
    assert all(v >= 0 for v in table.rows.values())
