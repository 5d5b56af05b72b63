from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edmonds.errors import DimensionMismatchError
from edmonds.exactfield import QQ, BiPoly, BiRational, PrimeField, make_field, make_unity_ring
from edmonds.linalg import (
    PolyMatrix,
    Subspace,
    bareiss_echelon,
    charpoly_division_free,
    component_max_rank,
    function_field_rank,
    image,
    kernel,
    matmul,
    preimage,
    rank,
    rref,
    solve_particular,
)
from helpers import at_root, components
from oracles import faddeev_leverrier, naive_rank, poly_matrix_rank

F7 = make_field("Fp:7")
F10007 = make_field("Fp:10007")


def as_ints(M):
    return [[int(x) if not isinstance(x, Fraction) else x for x in row] for row in np.asarray(M)]


# -- rank / kernel / image --------------------------------------------------


def test_rank_examples():
    assert rank(F7, F7.identity(4)) == 4
    assert rank(F7, F7.zeros((3, 5))) == 0
    assert rank(QQ, QQ.array([[1, 2], [2, 4]])) == 1


def test_rref_is_reduced():
    M = QQ.array([[2, 4, 1], [1, 2, 0], [3, 6, 1]])
    R, piv = rref(QQ, M)
    assert piv == [0, 2]
    assert R[0, 0] == 1 and R[1, 2] == 1 and R[0, 2] == 0


def test_bareiss_handles_big_integers():
    M = [[10**30 + 1, 2], [3, 10**30]]
    E = bareiss_echelon(M)
    assert E is not None
    assert rank(QQ, QQ.array(M)) == 2


@pytest.mark.parametrize("F", [F7, F10007, QQ, PrimeField(2**61 - 1)], ids=["F7", "F10007", "Q", "F_2^61-1"])
def test_rank_nullity_and_oracle(F):
    rng = np.random.default_rng(0)
    p = F.order
    for _ in range(500):
        r, c = rng.integers(1, 6, size=2)
        M = F.array(rng.integers(-3, 4, (r, c)).tolist())
        # force some dependency
        if r > 1 and rng.random() < 0.4:
            M[-1] = F.reduce(M[0] * 2) if F.order else M[0] * 2
        rk = rank(F, M)
        K = kernel(F, M)
        assert rk + K.dim == c
        assert rk == naive_rank(as_ints(M), p)
        for v in K.vectors():
            assert not np.any(F.reduce(matmul(F, M, v.reshape(-1, 1))) if F.order else matmul(F, M, v.reshape(-1, 1)))


def test_preimage_examples():
    W = Subspace.span(F7, [F7.array([1, 0])])
    assert preimage(F7, F7.identity(2), W) == W
    assert preimage(F7, F7.zeros((2, 2)), W) == Subspace.full(F7, 2)
    assert preimage(F7, F7.array([[1, 0], [0, 0]]), W) == Subspace.full(F7, 2)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 4), st.integers(0, 2**31))
def test_preimage_property(n, m, wdim, seed):
    rng = np.random.default_rng(seed)
    F = F10007
    A = F.array(rng.integers(-2, 3, (n, m)).tolist())
    W = Subspace.span(F, [F.array(rng.integers(-2, 3, n).tolist()) for _ in range(min(wdim, n))], n)
    P = preimage(F, A, W)
    for v in P.vectors():
        assert W.contains_vector(F.reduce(A @ v))
    assert preimage(F, A, Subspace.zero(F, n)).dim == kernel(F, A).dim
    # maximality: dim A^-1(W) = dim ker A + dim(W ∩ im A)
    im = image(F, A)
    inter = W.dim + im.dim - (W + im).dim
    assert P.dim == kernel(F, A).dim + inter


def test_solve_particular():
    A = QQ.array([[1, 1], [0, 2]])
    x = solve_particular(QQ, A, QQ.array([3, 4]))
    assert list(QQ.reduce(A @ x)) == [3, 4]
    assert solve_particular(QQ, QQ.array([[1, 0], [0, 0]]), QQ.array([0, 1])) is None


def test_subspace_ordering():
    F = F7
    e1 = Subspace.span(F, [F.array([1, 0, 0])])
    e12 = Subspace.span(F, [F.array([1, 0, 0]), F.array([0, 1, 0])])
    assert e1 <= e12 and not e12 <= e1 and e12 >= e1
    assert (e1 + e12) == e12
    with pytest.raises(DimensionMismatchError):
        Subspace.span(F, [F.array([1, 0])], 3)


# -- characteristic polynomial ----------------------------------------------


def test_charpoly_examples():
    assert charpoly_division_free(QQ, QQ.identity(2)) == [1, -2, 1]
    assert charpoly_division_free(QQ, QQ.array([[0, 1], [0, 0]])) == [0, 0, 1]
    assert charpoly_division_free(QQ, QQ.array([[1, 2], [3, 4]])) == [-2, -5, 1]


@pytest.mark.parametrize("F", [F10007, QQ], ids=["F10007", "Q"])
def test_charpoly_agrees_with_faddeev_leverrier(F):
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        M = F.array(rng.integers(-4, 5, (n, n)).tolist())
        got = [F.coerce(c) for c in charpoly_division_free(F, M)]
        want = [F.coerce(c) for c in faddeev_leverrier(as_ints(M), F.order)]
        assert got == want


def test_charpoly_over_unity_ring_matches_components():
    R = make_unity_ring("Fp:13", 4)
    rng = np.random.default_rng(5)
    roots = components(R)
    for _ in range(30):
        n = int(rng.integers(1, 5))
        A = R.base.array(rng.integers(0, 13, (n, n, R.k)))
        coeffs = charpoly_division_free(R, A)
        for z in roots:
            Az = [[at_root(R, A[i, j], z) for j in range(n)] for i in range(n)]
            assert [at_root(R, c, z) for c in coeffs] == faddeev_leverrier(Az, 13)


# -- component maximum rank -------------------------------------------------


def test_component_max_rank_examples():
    R = make_unity_ring("Fp:7", 2)
    assert component_max_rank(R, R.lift(F7.identity(3))) == 3
    assert component_max_rank(R, R.zeros((2, 2))) == 0
    B = R.zeros((2, 2))
    B[0, 0] = R.to_vec(R.sub(R.zeta_raw, R.one))
    B[1, 1] = R.to_vec(R.one)
    assert component_max_rank(R, B) == 2


# p = 61 is large enough for the evaluation path at N <= 4; the small primes
# exercise the modulus-splitting path
@pytest.mark.parametrize("p,d", [(7, 1), (7, 2), (7, 3), (5, 4), (11, 5), (7, 6), (13, 6), (13, 4),
                                 (61, 3), (61, 4), (61, 5), (61, 6)])
def test_component_max_rank_matches_per_component(p, d):
    R = make_unity_ring(f"Fp:{p}", d)
    roots = components(R)
    assert len(roots) == R.k  # the modulus splits for these (p, d)
    rng = np.random.default_rng(p * 10 + d)
    for _ in range(100):
        N = int(rng.integers(1, 5))
        B = R.base.array(rng.integers(0, p, (N, N, R.k)))
        # make components disagree: zero out some rows in one component
        if rng.random() < 0.5 and R.k > 1:
            z = roots[0]
            # multiply row 0 by (x - z) to kill it at root z
            shift = R.coerce([(-z) % p, 1])
            B[0] = np.stack([R.to_vec(R.mul(R.from_vec(B[0, j]), shift)) for j in range(N)])
        want = max(naive_rank([[at_root(R, B[i, j], z) for j in range(N)] for i in range(N)], p)
                   for z in roots)
        assert component_max_rank(R, B) == want


# -- function field rank ----------------------------------------------------


def test_function_field_rank_examples():
    R = make_unity_ring("Fp:10007", 1)
    X, Y, one = BiPoly.X(R), BiPoly.Y(R), BiPoly.const(R, R.one)
    assert function_field_rank([[X, BiPoly(R)], [BiPoly(R), Y]], R) == 2
    assert function_field_rank([[X, X], [one, one]], R) == 1
    assert function_field_rank([[one, Y], [Y, Y * Y]], R) == 1
    assert function_field_rank([[one, Y], [Y, Y * Y]], R, deterministic=True) == 1


def test_function_field_rank_with_denominators():
    R = make_unity_ring("Q", 1)
    X, Y, one = BiPoly.X(R), BiPoly.Y(R), BiPoly.const(R, R.one)
    # rows (1/X, 1/Y) and (Y, X) are proportional
    M = [[one / X, one / Y], [Y, X]]
    assert function_field_rank(M, R) == 1
    assert function_field_rank(M, R, deterministic=True) == 1
    M2 = [[one / X, one / Y], [X, Y]]
    assert function_field_rank(M2, R) == 2


def _random_poly(rng, p, deg):
    f = {}
    for _ in range(int(rng.integers(0, 4))):
        a = int(rng.integers(0, deg + 1))
        b = int(rng.integers(0, deg + 1 - a))
        c = int(rng.integers(1, p)) if p else int(rng.integers(-3, 4))
        if c:
            f[(a, b)] = (f.get((a, b), 0) + c) % p if p else f.get((a, b), 0) + c
    return {k: v for k, v in f.items() if v}


def _to_bipoly(R, f):
    out = BiPoly(R)
    for (a, b), c in f.items():
        out = out + BiPoly.monomial(R, a, b, R.coerce(c))
    return out


@pytest.mark.parametrize("desc", ["Fp:10007", "Q"])
def test_function_field_rank_matches_minor_oracle(desc):
    R = make_unity_ring(desc, 1)
    p = R.base.order
    rng = np.random.default_rng(11)
    for trial in range(60):
        r, c = (int(v) for v in rng.integers(1, 5, size=2))
        polys = [[_random_poly(rng, p, 3) for _ in range(c)] for _ in range(r)]
        if r > 1 and trial % 3 == 0:
            # make the last row a polynomial multiple of the first
            mult = _random_poly(rng, p, 1) or {(1, 0): 1}
            from oracles import pmul
            polys[-1] = [pmul(f, mult, p) for f in polys[0]]
        want = poly_matrix_rank(polys, p)
        entries = [[_to_bipoly(R, f) for f in row] for row in polys]
        assert function_field_rank(entries, R, seed=trial) == want


def test_function_field_rank_over_unity_ring_is_component_max():
    R = make_unity_ring("Fp:13", 4)
    X = BiPoly.X(R)
    z = BiPoly.const(R, R.zeta_raw)
    one = BiPoly.const(R, R.one)
    # (zeta - r0) vanishes in one component only; max over components is 2
    r0 = components(R)[0]
    a = z - BiPoly.const(R, R.coerce(r0))
    M = [[a * X, BiPoly(R)], [BiPoly(R), one]]
    assert function_field_rank(M, R) == 2
    assert function_field_rank(M, R, deterministic=True) == 2


def test_poly_matrix_evaluate():
    R = make_unity_ring("Fp:7", 1)
    X, Y = BiPoly.X(R), BiPoly.Y(R)
    pm = PolyMatrix.from_entries(R, [[X + Y, X * Y]])
    assert pm.degree() == 2
    assert pm.evaluate(2, 3)[..., 0].tolist() == [[5, 6]]


def test_rational_entries_in_birational():
    R = make_unity_ring("Q", 1)
    X = BiPoly.X(R)
    r = BiRational(X, X * X)
    assert r.eval(2, 5) == R.coerce(Fraction(1, 2))
