import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edmonds.errors import FieldTooSmallError, InternalConsistencyError, InvalidInputError
from edmonds.exactfield import make_field, sample_set
from edmonds.linalg import Subspace, image, kernel, rank
from edmonds.mspace import BlowUp, MatrixSpace, apply_space
from edmonds.oracle import enumerate_shrunk, maximal_rank_members
from edmonds.wong import check_chain, pencil_max_rank, second_wong, wong_chain
from helpers import random_space, skew_space, unit

F2 = make_field("Fp:2")
F7 = make_field("Fp:7")
F10007 = make_field("Fp:10007")


def e(F, n, i):
    v = F.zeros(n)
    v[i] = F.one
    return v


# -- examples ---------------------------------------------------------------


def test_nonsingular_pivot_gives_zero_witness():
    F = F7
    s = MatrixSpace(F, 3, [F.identity(3), unit(F, 3, 0, 1)])
    res = second_wong(F.identity(3), s)
    assert res.contained_in_image
    assert res.limit.dim == 0 and res.witness.dim == 0
    assert res.chain is None


def test_single_singular_matrix_gives_its_kernel():
    F = F7
    A = F.array([[1, 2, 0], [2, 4, 0], [0, 0, 0]])
    res = second_wong(A, MatrixSpace(F, 3, [A]))
    assert res.contained_in_image
    assert res.dims() == [0]
    assert res.witness == kernel(F, A)
    # the kernel is cork(A)-shrunk: it has dim 3 - rank and the space kills it
    assert apply_space(MatrixSpace(F, 3, [A]), res.witness).dim == 0
    assert res.witness.dim == 3 - rank(F, A)


def test_skew_escapes_at_second_stage():
    F = F10007
    s = skew_space(F)
    A = s.basis[0]  # E12 - E21
    res = second_wong(A, s)
    assert res.escaped
    # ker A = <e3>, B(e3) = <e1, e2> = im A, then B(F^3) = F^3 leaves im A
    assert res.first_escape == 2
    assert res.dims() == [0, 2, 3]
    assert res.stages[1] == image(F, A)
    assert len(res.chain) == 2
    assert check_chain(F, A, res.chain)
    assert kernel(F, A).contains_vector(res.chain.vectors[0])


def test_pivot_outside_space_rejected():
    F = F7
    s = MatrixSpace(F, 2, [unit(F, 2, 0, 0)])
    with pytest.raises(InvalidInputError):
        second_wong(F.identity(2), s)
    with pytest.raises(InvalidInputError):
        second_wong(F.identity(3), s)


def test_chain_requires_escape():
    F = F7
    s = MatrixSpace(F, 2, [F.identity(2)])
    res = second_wong(F.identity(2), s)
    with pytest.raises(InvalidInputError):
        wong_chain(F.identity(2), s, res)


def test_first_stage_escape_chain_has_length_one():
    F = F7
    # A = E11, C = E12: ker A = <e2>, C e2 = e1 is in im A; use C = E22 instead
    s = MatrixSpace(F, 2, [unit(F, 2, 0, 0), unit(F, 2, 1, 1)])
    A = unit(F, 2, 0, 0)
    res = second_wong(A, s)
    assert res.first_escape == 1 and len(res.chain) == 1
    C, v = res.chain.matrices[0], res.chain.vectors[0]
    assert not image(F, A).contains_vector(F.reduce(C @ v))


def test_check_chain_rejects_broken_chains():
    F = F10007
    s = skew_space(F)
    A = s.basis[0]
    chain = second_wong(A, s).chain
    assert check_chain(F, A, chain)
    broken = type(chain)(chain.matrices, [F.reduce(chain.vectors[0] + e(F, 3, 0))] + chain.vectors[1:])
    assert not check_chain(F, A, broken)
    assert not check_chain(F, A, type(chain)([], []))


# -- pencil search ----------------------------------------------------------


def test_pencil_examples():
    F = F7
    S = sample_set("Fp:7", 5)
    C = F.identity(2)
    assert np.array_equal(pencil_max_rank(F, F.zeros((2, 2)), C, 1, S), C)
    M = pencil_max_rank(F, unit(F, 2, 0, 0), unit(F, 2, 1, 1), 1, S)
    assert rank(F, M) == 2 and M[0, 0] == 1 and M[1, 1] != 0
    A = F.array([[1, 0], [0, 0]])
    swap = F.array([[0, 1], [1, 0]])
    # swap already has rank 2 and is returned as is
    assert np.array_equal(pencil_max_rank(F, A, swap, 1, S), swap)
    # both rank 1; det(E21 + s E12) = -s, so s = 0 fails and s = 1 is taken
    half = F.array([[0, 1], [0, 0]])
    M = pencil_max_rank(F, F.array([[0, 0], [1, 0]]), half, 1, S)
    assert np.array_equal(M, F.array([[0, 1], [1, 0]]))


def test_pencil_exhausted_sample_raises():
    F = F7
    with pytest.raises(FieldTooSmallError):
        pencil_max_rank(F, unit(F, 2, 0, 0), unit(F, 2, 0, 1), 1, [0, 1, 2])


# -- invariants -------------------------------------------------------------


def _check_result(F, A, space, res):
    n = space.dim_n
    assert res.stages[0].dim == 0
    for prev, nxt in zip(res.stages, res.stages[1:]):
        assert prev <= nxt and prev.dim < nxt.dim
    imA = image(F, A)
    if res.contained_in_image:
        assert res.limit <= imA
        U = res.witness
        assert space.apply(U) == res.limit
        assert U.dim - res.limit.dim == n - rank(F, A)
    else:
        assert not res.limit <= imA
        assert all(W <= imA for W in res.stages[:-1])
        assert check_chain(F, A, res.chain)
        for C in res.chain.matrices:
            assert space.contains(C)


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**31))
def test_random_spaces_satisfy_wong_invariants(n, m, seed):
    rng = np.random.default_rng(seed)
    F = F10007
    space = random_space(F, rng, n, m, -1, 2)
    coeffs = F.array(rng.integers(0, 3, m).tolist())
    A = space.element(coeffs)
    res = second_wong(A, space)
    assert len(res.stages) <= n + 1
    _check_result(F, A, space, res)


@pytest.mark.parametrize("d", [2, 3])
def test_blowup_stages_have_dimension_divisible_by_d(d):
    rng = np.random.default_rng(10 + d)
    F = F10007
    seen_escape = False
    for _ in range(25):
        n = int(rng.integers(2, 4))
        base = random_space(F, rng, n, int(rng.integers(1, 3)), -1, 2)
        bu = BlowUp(base, d)
        # A = A0 (x) I keeps rank r d
        coeffs = np.zeros((base.m, d, d), dtype=object)
        c0 = rng.integers(0, 3, base.m)
        A0 = base.element(F.array(c0.tolist()))
        for i in range(base.m):
            for j in range(d):
                coeffs[i, j, j] = int(c0[i])
        A = bu.element(F.array(coeffs.tolist()))
        r = rank(F, A0)
        assert rank(F, A) == r * d
        res = second_wong(A, bu)
        assert len(res.stages) - 1 <= r + 1
        for W in res.stages[:-1] if res.escaped else res.stages:
            assert W.dim % d == 0
        _check_result(F, A, bu, res)
        seen_escape |= res.escaped
    assert seen_escape


def _all_spaces_f2(n, m):
    entries = list(itertools.product(range(2), repeat=n * n))
    for combo in itertools.combinations_with_replacement(range(len(entries)), m):
        yield MatrixSpace(F2, n, [F2.array(np.array(entries[i]).reshape(n, n).tolist()) for i in combo])


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_soundness_exhaustive_small(n, m):
    """Verdict matches brute force: contained iff a cork(A)-shrunk subspace exists."""
    mismatches = 0
    for space in _all_spaces_f2(n, m):
        best = enumerate_shrunk(space, 2).c
        r, members = maximal_rank_members(space)
        for A in members:
            res = second_wong(A, space)
            if res.contained_in_image != (best >= n - r):
                mismatches += 1
    assert mismatches == 0


def test_soundness_random_f2_n3():
    rng = np.random.default_rng(42)
    for _ in range(150):
        space = random_space(F2, rng, 3, int(rng.integers(1, 4)), 0, 2)
        best = enumerate_shrunk(space, 2).c
        r, members = maximal_rank_members(space)
        for A in members[:4]:
            res = second_wong(A, space)
            assert res.contained_in_image == (best >= 3 - r)
