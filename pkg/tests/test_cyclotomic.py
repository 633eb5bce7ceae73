"""Oracle tests for Gaussian-period subfields.

The library derives the period polynomial from power sums and Newton's
identities.  The oracle here works in the group ring instead: periods
are dense integer vectors in Z[x]/(x^q - 1), the elementary symmetric
functions are expanded by exact convolution, and each one must collapse
to a rational integer.  Agreement between the two routes pins down the
polynomial itself, not just its printed form.
"""

import dataclasses
import math

import mpmath
import pytest

from capitula.arith import is_prime, sieve_primes
from capitula.cyclotomic import (
    ConsistencyError,
    _build_subfield,
    make_subfield,
    period_cosets,
    period_polynomial,
    poly_str,
    verify_subfield,
)


# ---------------------------------------------------------------------------
# group-ring oracle


def _zq_mul(a, b, q):
    out = [0] * q
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[(i + j) % q] += ai * bj
    return out


def _as_integer(vec, q):
    """The rational integer a vector in Z[zeta_q] represents, if any.

    1 + zeta + ... + zeta^(q-1) = 0, so subtract vec[1] off every
    coordinate; what survives must be concentrated at zeta^0.
    """
    t = vec[1]
    assert all(vec[i] == t for i in range(1, q)), "not a rational integer"
    return vec[0] - t


def oracle_period_polynomial(q, e):
    """Min poly of the degree-e periods by brute symmetric functions."""
    # own primitive-root search, independent of the library's
    g = next(
        g
        for g in range(2, q)
        if all(pow(g, (q - 1) // r, q) != 1 for r in set_prime_divisors(q - 1))
    )
    cosets = [[] for _ in range(e)]
    pw = 1
    for k in range(q - 1):
        cosets[k % e].append(pw)
        pw = pw * g % q
    periods = []
    for c in cosets:
        v = [0] * q
        for h in c:
            v[h] += 1
        periods.append(v)

    # expand prod (T - eta_m): coeffs[k] is the vector coefficient of T^k
    one = [0] * q
    one[0] = 1
    coeffs = [one]
    for eta in periods:
        neg = [-x for x in eta]
        nxt = [[0] * q for _ in range(len(coeffs) + 1)]
        for k, c in enumerate(coeffs):
            prod = _zq_mul(c, neg, q)
            nxt[k] = [a + b for a, b in zip(nxt[k], prod)]
            nxt[k + 1] = [a + b for a, b in zip(nxt[k + 1], c)]
        coeffs = nxt
    return tuple(_as_integer(c, q) for c in coeffs)


def set_prime_divisors(n):
    out = set()
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out.add(p)
            m //= p
        p += 1
    if m > 1:
        out.add(m)
    return out


# ---------------------------------------------------------------------------
# frozen values


def test_period_polynomial_frozen_7_3():
    sub = period_polynomial(7, 3)
    assert sub.period_poly == (-1, -2, 1, 1)
    assert sub.poly_str() == "x^3 + x^2 - 2x - 1"
    assert sub.f == 2
    assert sub.disc == 49


def test_period_polynomial_frozen_13_3():
    sub = period_polynomial(13, 3)
    assert sub.period_poly == (1, -4, 1, 1)
    assert sub.poly_str() == "x^3 + x^2 - 4x + 1"
    assert sub.f == 4


def test_cosets_frozen_7_3():
    assert period_cosets(7, 3) == ((1, 6), (3, 4), (2, 5))


def test_poly_str_edge_cases():
    assert poly_str((0,)) == "0"
    assert poly_str((-1, 0, 1)) == "x^2 - 1"
    assert poly_str((2, 1)) == "x + 2"


# ---------------------------------------------------------------------------
# oracle agreement


def test_polynomial_matches_symmetric_function_oracle():
    for q, e in [(7, 3), (13, 3), (31, 3), (31, 5), (19, 3), (19, 9), (29, 7), (43, 3)]:
        assert make_subfield(q, e).period_poly == oracle_period_polynomial(q, e), (q, e)


def test_polynomial_independent_of_primitive_root():
    for q, e in [(13, 3), (31, 5)]:
        canonical = make_subfield(q, e)
        others = [
            g
            for g in range(2, q)
            if all(pow(g, (q - 1) // r, q) != 1 for r in set_prime_divisors(q - 1))
        ]
        assert canonical.generator == others[0]
        for g in others[1:3]:
            alt = _build_subfield(q, e, g)
            assert alt.period_poly == canonical.period_poly
            assert set(map(frozenset, alt.coset_reps)) == set(
                map(frozenset, canonical.coset_reps)
            )


# ---------------------------------------------------------------------------
# verification sweep


def test_verify_all_cubic_subfields_up_to_200():
    for q in sieve_primes(200):
        if q % 3 != 1:
            continue
        report = verify_subfield(make_subfield(q, 3))
        assert report.ok
        assert report.disc == q * q
        assert report.real_roots == 3
        assert report.poly_disc == report.index**2 * q * q
        assert report.irreducible_mod is not None
        assert is_prime(report.irreducible_mod)


def test_known_index_values():
    # monogenic at 7 and 13, but not at 31
    assert verify_subfield(make_subfield(7, 3)).index == 1
    assert verify_subfield(make_subfield(13, 3)).index == 1
    assert verify_subfield(make_subfield(31, 3)).index == 2


def test_verify_degree_nine():
    report = verify_subfield(make_subfield(19, 9))
    assert report.disc == 19**8
    assert report.real_roots == 9


def test_verify_rejects_corruption():
    sub = make_subfield(13, 3)
    bad = dataclasses.replace(sub, period_poly=(1, -4, 2, 1))
    with pytest.raises(ConsistencyError):
        verify_subfield(bad)
    worse = dataclasses.replace(sub, disc=168)
    with pytest.raises(ConsistencyError):
        verify_subfield(worse)


def test_validation_rejects_bad_input():
    with pytest.raises(ValueError):
        make_subfield(15, 3)  # not prime
    with pytest.raises(ValueError):
        make_subfield(13, 5)  # 5 does not divide 12
    with pytest.raises(ValueError):
        make_subfield(13, 4)  # even degree
    with pytest.raises(ValueError):
        make_subfield(13, 0)


# ---------------------------------------------------------------------------
# numeric cross-checks of the multiplication table


def test_mul_coords_against_floats():
    import random

    rng = random.Random(5)
    for q, e in [(7, 3), (13, 3), (31, 5)]:
        sub = make_subfield(q, e)
        vals = sub.period_values(prec=200)
        for _ in range(20):
            u = [rng.randint(-9, 9) for _ in range(e)]
            v = [rng.randint(-9, 9) for _ in range(e)]
            w = sub.mul_coords(u, v)
            with mpmath.workprec(200):
                lhs = sum(ui * vals[i] for i, ui in enumerate(u)) * sum(
                    vj * vals[j] for j, vj in enumerate(v)
                )
                rhs = sum(wi * vals[i] for i, wi in enumerate(w))
                assert abs(lhs - rhs) < mpmath.mpf(2) ** -120


def test_each_period_is_a_root():
    for q, e in [(7, 3), (13, 3), (19, 9)]:
        sub = make_subfield(q, e)
        with mpmath.workprec(200):
            for val in sub.period_values(prec=200):
                acc = mpmath.mpf(0)
                for c in reversed(sub.period_poly):
                    acc = acc * val + c
                assert abs(acc) < mpmath.mpf(2) ** -100


def test_periods_sum_to_minus_one():
    for q, e in [(7, 3), (43, 7)]:
        sub = make_subfield(q, e)
        with mpmath.workprec(120):
            assert abs(mpmath.fsum(sub.period_values(120)) + 1) < mpmath.mpf(2) ** -80


def test_power_coords_matches_mul():
    sub = make_subfield(13, 3)
    sq = sub.mul_coords([1, 0, 0], [1, 0, 0])
    cube = sub.mul_coords(sq, [1, 0, 0])
    assert sub.power_coords(2) == sq
    assert sub.power_coords(3) == cube
    with pytest.raises(ValueError):
        sub.power_coords(0)


def test_trace_gram_is_symmetric_with_correct_determinant():
    from capitula.linalg import det_bareiss

    for q, e in [(7, 3), (13, 3), (31, 5)]:
        gram = make_subfield(q, e).trace_gram()
        assert all(gram[i][j] == gram[j][i] for i in range(e) for j in range(e))
        assert det_bareiss(gram) == q ** (e - 1)
