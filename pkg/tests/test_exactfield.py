from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edmonds.errors import (
    FieldTooSmallError,
    InvalidInputError,
    UnsupportedCharacteristicError,
    UnsupportedOperationError,
)
from edmonds.exactfield import (
    QQ,
    BiPoly,
    BiRational,
    PrimeField,
    make_field,
    make_unity_ring,
    sample_set,
)
from helpers import at_root, components, roots_of_unity_components


# -- fields -----------------------------------------------------------------


def test_field_descriptors():
    assert make_field("Fp:7").p == 7
    assert make_field("Q") is QQ
    with pytest.raises(InvalidInputError):
        make_field("Fp:8")
    with pytest.raises(InvalidInputError):
        make_field("GF(9)")


def test_prime_field_examples():
    F = make_field("Fp:7")
    assert F.mul(3, 5) == 1
    assert F(3) * F(5) == F(1)
    assert F.inv(3) == 5
    assert F.coerce(-1) == 6
    assert F.coerce("1/2") == 4


def test_rational_examples():
    assert QQ.add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)
    assert QQ.coerce("2/4") == QQ.coerce("1/2")
    with pytest.raises(ZeroDivisionError):
        QQ.inv(0)


def test_large_prime_uses_object_arrays():
    F = PrimeField(2**61 - 1)
    a = F.array([[2**60, 3]])
    assert a.dtype == object
    assert F.mul(2**60, 2) == 1


@settings(max_examples=300, deadline=None)
@given(st.integers(), st.integers(), st.integers(), st.sampled_from([2, 3, 7, 10007, 8388593]))
def test_prime_field_matches_modular_ints(a, b, c, p):
    F = PrimeField(p)
    assert F.add(a, b) == (a + b) % p
    assert F.mul(F.add(a, b), c) == ((a + b) * c) % p
    if b % p:
        assert F.mul(F.div(a, b), b) == a % p


@settings(max_examples=200, deadline=None)
@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_rational_ring_axioms(a, b, c):
    assert QQ.mul(a, QQ.add(b, c)) == QQ.add(QQ.mul(a, b), QQ.mul(a, c))
    assert QQ.add(a, QQ.neg(a)) == 0
    assert QQ.mul(QQ.mul(a, b), c) == QQ.mul(a, QQ.mul(b, c))


# -- sample sets ------------------------------------------------------------


def test_sample_set_examples():
    assert sample_set("Fp:7", 3) == [0, 1, 2]
    assert sample_set("Q", 5) == [0, 1, 2, 3, 4]
    assert sample_set("Fp:7", 3, exclude_zero=True) == [1, 2, 3]
    with pytest.raises(FieldTooSmallError):
        sample_set("Fp:2", 3)


def test_sample_set_seeded_is_distinct_and_reproducible():
    a = sample_set("Fp:10007", 50, seed=4)
    assert len(set(a)) == 50 and a == sample_set("Fp:10007", 50, seed=4)
    assert 0 not in sample_set("Fp:11", 10, exclude_zero=True, seed=1)


# -- unity ring -------------------------------------------------------------


def test_unity_ring_trivial_order():
    R = make_unity_ring("Fp:7", 1)
    assert R.k == 1 and R.eq(R.zeta_raw, R.one)


def test_unity_ring_f5_d4_components():
    R = make_unity_ring("Fp:5", 4)
    # x^4 - 1 splits over F_5; the order-4 part has roots 2 and 3
    assert sorted(components(R)) == [2, 3] == roots_of_unity_components(5, 4)
    z = R.zeta_raw
    assert R.eq(R.mul(z, R.pow(z, 3)), R.one)
    assert not R.eq(R.pow(z, 2), R.one)


def test_unity_ring_rational_d3_modulus():
    R = make_unity_ring("Q", 3)
    assert list(R.modulus) == [1, 1, 1]
    assert R.eq(R.pow(R.zeta_raw, 3), R.one)


def test_unity_ring_d2_over_f7_is_field_with_minus_one():
    R = make_unity_ring("Fp:7", 2)
    assert R.k == 1 and R.zeta_raw == (6,)


def test_unity_ring_rejects_bad_characteristic():
    with pytest.raises(UnsupportedCharacteristicError):
        make_unity_ring("Fp:3", 6)


def test_unity_ring_division_not_offered():
    R = make_unity_ring("Fp:5", 4)
    with pytest.raises(UnsupportedOperationError):
        R.div(R.one, R.zeta_raw)


@pytest.mark.parametrize("p,d", [(5, 4), (7, 3), (13, 6), (11, 5), (7, 6)])
def test_zeta_has_exact_order(p, d):
    R = make_unity_ring(f"Fp:{p}", d)
    z = R.zeta_raw
    assert R.eq(R.pow(z, d), R.one)
    for e in range(1, d):
        if d % e == 0:
            assert not R.is_zero(R.sub(R.pow(z, e), R.one))


ring_params = st.sampled_from([(5, 4), (7, 3), (13, 6), (13, 4), (31, 5)])


@settings(max_examples=200, deadline=None)
@given(ring_params, st.data())
def test_unity_ring_components_are_homomorphisms(pd, data):
    """Evaluating at each root of the modulus is a ring map into F_p."""
    p, d = pd
    R = make_unity_ring(f"Fp:{p}", d)
    roots = components(R)
    vec = st.lists(st.integers(0, p - 1), min_size=R.k, max_size=R.k)
    a, b, c = (R.coerce(data.draw(vec)) for _ in range(3))
    for z in roots:
        assert at_root(R, R.mul(a, b), z) == at_root(R, a, z) * at_root(R, b, z) % p
        assert at_root(R, R.add(a, c), z) == (at_root(R, a, z) + at_root(R, c, z)) % p
    assert R.eq(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
    assert R.eq(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))
    assert R.eq(R.mul(a, R.one), a)


def test_ring_axioms_bulk():
    """10^4 random triples per ring: associativity, distributivity, identities."""
    rng = np.random.default_rng(0)
    for desc, d in [("Fp:7", 1), ("Fp:10007", 1), ("Fp:13", 4), ("Fp:10007", 3)]:
        R = make_unity_ring(desc, d)
        p = R.base.p
        vals = rng.integers(0, p, size=(10_000, 3, R.k))
        for a, b, c in vals:
            a, b, c = tuple(a), tuple(b), tuple(c)
            a, b, c = R.coerce(a), R.coerce(b), R.coerce(c)
            assert R.eq(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
            assert R.eq(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))
            assert R.eq(R.add(a, R.zero), a) and R.eq(R.mul(R.one, a), a)


def test_rational_unity_ring_axioms():
    R = make_unity_ring("Q", 5)
    rng = np.random.default_rng(1)
    for _ in range(300):
        a, b, c = (R.coerce([Fraction(int(v), int(w)) for v, w in zip(rng.integers(-9, 9, R.k),
                                                                      rng.integers(1, 5, R.k))])
                   for _ in range(3))
        assert R.eq(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
        assert R.eq(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))


def test_unity_elem_operators():
    R = make_unity_ring("Fp:5", 4)
    z = R.zeta
    assert (z * z ** 3).coeffs == R.one
    assert z ** 4 == R(1)


# -- bivariate polynomials --------------------------------------------------


def test_bipoly_eval_examples():
    F7 = make_unity_ring("Fp:7", 1)
    X, Y = BiPoly.X(F7), BiPoly.Y(F7)
    assert F7.eq((X * Y + 1).eval(0, 5), F7.one)
    assert F7.eq((Y ** 3).eval(4, 2), F7.one)
    RQ = make_unity_ring("Q", 1)
    X, Y = BiPoly.X(RQ), BiPoly.Y(RQ)
    assert RQ.eq((X ** 2 + Y ** 2).eval(3, 4), RQ.coerce(25))


def test_bipoly_degree_and_coefficients():
    R = make_unity_ring("Fp:7", 1)
    X, Y = BiPoly.X(R), BiPoly.Y(R)
    p = X * Y ** 2 + 3 * X
    assert p.degree() == 3
    assert R.eq(p.coefficient(1, 0), R.coerce(3))
    assert BiPoly(R).degree() == -1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 12)), max_size=5),
       st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 12)), max_size=5),
       st.integers(0, 12), st.integers(0, 12))
def test_bipoly_evaluation_is_multiplicative(ta, tb, x0, y0):
    R = make_unity_ring("Fp:13", 4)

    def build(terms):
        p = BiPoly(R)
        for a, b, c in terms:
            p = p + BiPoly.monomial(R, a, b, R.coerce([c, (c * 5) % 13]))
        return p

    p, q = build(ta), build(tb)
    assert R.eq((p * q).eval(x0, y0), R.mul(p.eval(x0, y0), q.eval(x0, y0)))
    assert R.eq((p + q).eval(x0, y0), R.add(p.eval(x0, y0), q.eval(x0, y0)))


def test_birational_normalization_and_eval():
    R = make_unity_ring("Q", 1)
    X = BiPoly.X(R)
    r = BiRational(X * 2, X * 4)
    s = BiRational(BiPoly.const(R, R.one), BiPoly.const(R, R.coerce(2)))
    assert r.normalized() == s.normalized()
    assert r.eval(3, 1) == s.eval(3, 1)
