"""Tests for the compositum order, ideal lattices, and certificates.

The multiplication table is cross-checked three ways: against the
ring axioms on random elements, against the trace form it induces,
and against the float embeddings (product of conjugates vs Bareiss
norm).  Certificates are exercised end to end on the worked d = 79
capitulation and then attacked by corruption.
"""

import random

import pytest

from capitula.compositum import (
    IdealLatticeBasis,
    NotFound,
    PrincipalityCertificate,
    RadiusSchedule,
    _iroot,
    build_compositum,
    certify_principal,
    exact_norm,
    extend_ideal,
    verify_certificate,
)
from capitula.cyclotomic import make_subfield
from capitula.errors import ConsistencyError
from capitula.linalg import det_bareiss, lll_reduce_gram
from capitula.quadfield import (
    QuadIdeal,
    class_group,
    is_principal,
    make_field,
    prime_ideal_above,
)


def order_79_13():
    return build_compositum(make_field(79), make_subfield(13, 3))


def order_2_7():
    return build_compositum(make_field(2), make_subfield(7, 3))


# ---------------------------------------------------------------------------
# construction


def test_disc_79_13():
    order = order_79_13()
    assert order.degree == 6
    assert order.disc == 316**3 * 13**4


def test_disc_2_7():
    assert order_2_7().disc == 8**3 * 7**4


def test_coprimality_guard():
    with pytest.raises(ConsistencyError):
        build_compositum(make_field(13), make_subfield(13, 3))


def test_one_acts_as_identity():
    order = order_79_13()
    rng = random.Random(3)
    one = list(order.one_coords)
    for _ in range(10):
        x = [rng.randint(-5, 5) for _ in range(6)]
        assert order.mul(one, x) == x
        assert order.mul(x, one) == x


def test_mul_commutes_on_basis():
    for order in (order_79_13(), order_2_7()):
        n = order.degree
        for r in range(n):
            for c in range(n):
                assert order.mult_table[r][c] == order.mult_table[c][r]


def test_mul_associative_on_random_triples():
    order = order_79_13()
    rng = random.Random(41)
    for _ in range(1000):
        x, y, z = (
            [rng.randint(-4, 4) for _ in range(6)] for _ in range(3)
        )
        assert order.mul(order.mul(x, y), z) == order.mul(x, order.mul(y, z))


def test_gram_is_trace_of_products():
    order = order_79_13()
    n = order.degree
    for r in range(n):
        br = [1 if k == r else 0 for k in range(n)]
        for c in range(n):
            bc = [1 if k == c else 0 for k in range(n)]
            assert order.gram[r][c] == order.trace(order.mul(br, bc))


def test_t2_equals_trace_of_square():
    order = order_2_7()
    rng = random.Random(8)
    for _ in range(50):
        x = [rng.randint(-6, 6) for _ in range(6)]
        assert order.t2(x) == order.trace(order.mul(x, x))
        assert order.t2(x) >= 0  # totally real: T2 is positive definite


# ---------------------------------------------------------------------------
# norms


def test_norm_is_multiplicative():
    order = order_79_13()
    rng = random.Random(17)
    for _ in range(200):
        x = [rng.randint(-3, 3) for _ in range(6)]
        y = [rng.randint(-3, 3) for _ in range(6)]
        assert exact_norm(order.mul(x, y), order) == exact_norm(x, order) * exact_norm(
            y, order
        )


def test_norm_of_scalars_and_subfield_elements():
    order = order_79_13()
    L = order.L
    assert exact_norm(order.one_coords, order) == 1
    assert exact_norm(order.scalar_coords(5), order) == 5**6
    # x + y omega from L: norm is the quadratic norm cubed
    rng = random.Random(23)
    for _ in range(20):
        x, y = rng.randint(-9, 9), rng.randint(-9, 9)
        coords = [-x] * 3 + [-y] * 3
        assert exact_norm(coords, order) == L.norm_element(x, y) ** 3
    # eta_0 from F: its F-norm is +-1, squared in M either way
    eta0 = [0] * 6
    eta0[0] = 1
    assert exact_norm(eta0, order) == 1


def test_embeddings_reproduce_the_norm():
    order = order_79_13()
    assert order.embed_error < 1e-20
    rng = random.Random(31)
    for _ in range(25):
        x = [rng.randint(-5, 5) for _ in range(6)]
        prod = 1.0
        for row in order.embeddings:
            prod *= float(sum(row[c] * x[c] for c in range(6)))
        assert round(prod) == exact_norm(x, order)


# ---------------------------------------------------------------------------
# ideal lattices


def test_extend_ideal_index_law():
    order = order_79_13()
    L = order.L
    primes = [prime_ideal_above(L, q) for q in (3, 5, 7, 13, 43)]
    rng = random.Random(55)
    for _ in range(50):
        I = QuadIdeal(L, 1, 0)
        for _ in range(rng.randint(1, 3)):
            I = I * rng.choice(primes)
        if rng.random() < 0.3:
            from fractions import Fraction

            I = I * QuadIdeal(L, 1, 0, scale=Fraction(rng.randint(2, 4)))
        B = extend_ideal(I, order)
        assert isinstance(B, IdealLatticeBasis)
        assert B.norm == I.norm() ** 3
        n = order.degree
        assert len(B.hnf) == n
        for i in range(n):
            assert B.hnf[i][i] > 0
            assert all(B.hnf[i][j] == 0 for j in range(i))


def test_extend_ideal_rejects_foreign_and_fractional():
    order = order_79_13()
    with pytest.raises(ValueError):
        extend_ideal(prime_ideal_above(make_field(142), 7), order)
    from fractions import Fraction

    frac = QuadIdeal(make_field(79), 1, 0, scale=Fraction(1, 3))
    with pytest.raises(ValueError):
        extend_ideal(frac, order)


def test_lll_transform_is_unimodular():
    rng = random.Random(77)
    for _ in range(20):
        n = rng.choice((3, 4, 6))
        while True:
            basis = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
            if det_bareiss([row[:] for row in basis]) != 0:
                break
        gram = [
            [sum(basis[r][k] * basis[c][k] for k in range(n)) for c in range(n)]
            for r in range(n)
        ]
        red, U = lll_reduce_gram([row[:] for row in gram])
        assert abs(det_bareiss([list(r) for r in U])) == 1
        recomputed = [
            [
                sum(U[r][a] * gram[a][b] * U[c][b] for a in range(n) for b in range(n))
                for c in range(n)
            ]
            for r in range(n)
        ]
        assert [list(r) for r in red] == recomputed


def test_iroot_brute():
    for k in (2, 3, 6):
        for x in list(range(70)) + [10**12 + 7, 3**40]:
            r = _iroot(x, k)
            assert r**k <= x < (r + 1) ** k


# ---------------------------------------------------------------------------
# certificates


def test_certify_unit_ideal():
    order = order_2_7()
    B = extend_ideal(QuadIdeal(make_field(2), 1, 0), order)
    assert B.norm == 1
    cert = certify_principal(B, order)
    assert isinstance(cert, PrincipalityCertificate)
    assert abs(cert.norm_alpha) == 1


def test_certify_principal_prime_from_L():
    # 43 = -N(6 + sqrt(79)) splits and is already principal downstairs,
    # so its extension certifies with the same small generator norm
    L = make_field(79)
    cg = class_group(L)
    frak = prime_ideal_above(L, 43)
    assert cg.coords_of(frak) == cg.identity_coords()
    assert is_principal(L, frak)[0]
    order = order_79_13()
    B = extend_ideal(frak, order)
    cert = certify_principal(B, order)
    assert isinstance(cert, PrincipalityCertificate)
    assert abs(cert.norm_alpha) == 43**3


def test_flagship_capitulation_d79():
    # q_7 is not principal in Q(sqrt(79)) but becomes so in the
    # compositum with the cubic field of conductor 7
    L = make_field(79)
    frak = prime_ideal_above(L, 7)
    assert is_principal(L, frak)[0] is False
    order = build_compositum(L, make_subfield(7, 3))
    B = extend_ideal(frak, order)
    cert = certify_principal(B, order)
    assert isinstance(cert, PrincipalityCertificate)
    assert abs(cert.norm_alpha) == 343
    assert cert.ideal_norm == 343
    assert verify_certificate(cert, B, order)
    # containment really reproduces alpha
    n = order.degree
    rebuilt = [0] * n
    for i, ci in enumerate(cert.containment):
        for j in range(n):
            rebuilt[j] += ci * B.hnf[i][j]
    assert tuple(rebuilt) == cert.alpha


def test_certificates_are_deterministic():
    L = make_field(79)
    order = build_compositum(L, make_subfield(7, 3))
    B = extend_ideal(prime_ideal_above(L, 7), order)
    assert certify_principal(B, order) == certify_principal(B, order)


def test_corrupted_certificates_rejected():
    L = make_field(79)
    order = build_compositum(L, make_subfield(7, 3))
    B = extend_ideal(prime_ideal_above(L, 7), order)
    cert = certify_principal(B, order)
    import dataclasses

    for i in range(order.degree):
        alpha = list(cert.alpha)
        alpha[i] += 1
        assert not verify_certificate(
            dataclasses.replace(cert, alpha=tuple(alpha)), B, order
        )
        held = list(cert.containment)
        held[i] -= 1
        assert not verify_certificate(
            dataclasses.replace(cert, containment=tuple(held)), B, order
        )
    assert not verify_certificate(
        dataclasses.replace(cert, norm_alpha=cert.norm_alpha + 1), B, order
    )
    assert not verify_certificate(
        dataclasses.replace(cert, ideal_norm=cert.ideal_norm * 7), B, order
    )


def test_certificate_rejected_against_wrong_lattice():
    L = make_field(79)
    order = build_compositum(L, make_subfield(7, 3))
    B = extend_ideal(prime_ideal_above(L, 7), order)
    other = extend_ideal(prime_ideal_above(L, 7).conjugate(), order)
    cert = certify_principal(B, order)
    assert not verify_certificate(cert, other, order)


def test_not_found_is_inconclusive_and_reported():
    # a deliberately starved schedule on the hard d = 142 case
    L = make_field(142)
    order = build_compositum(L, make_subfield(7, 3))
    B = extend_ideal(prime_ideal_above(L, 7), order)
    out = certify_principal(
        B, order, RadiusSchedule(c0=1, max_doublings=0, max_vectors=500)
    )
    assert isinstance(out, NotFound)
    assert out.capped
    assert out.enumerated >= 500
    assert out.max_radius_sq > 0
    # without the cap the same starved radius is exhausted instead
    full = certify_principal(
        B, order, RadiusSchedule(c0=1, max_doublings=0, max_vectors=10**9)
    )
    assert isinstance(full, NotFound)
    assert not full.capped
    assert full.doublings_used == 0


def test_schedule_defaults():
    s = RadiusSchedule()
    assert (s.c0, s.max_doublings) == (2, 12)
    assert s.max_vectors == 60_000_000
