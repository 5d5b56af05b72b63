"""Second Wong sequences ``W_0 = 0, W_i = B(A^-1(W_{i-1}))``.

If the limit stays inside ``im(A)`` then ``A^-1(W*)`` is a shrunk subspace
with gap at least the corank of ``A``; otherwise the first escape yields a
chain of space elements used to push the rank up.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import FieldTooSmallError, InternalConsistencyError, InvalidInputError
from .linalg import Subspace, apply_matrix, image, kernel, matmul, preimage, rank, solve_particular

log = logging.getLogger(__name__)


@dataclass
class WongChain:
    """``C_1..C_l`` and ``v_1..v_l`` with ``v_1 in ker A``, ``A v_j = C_{j-1} v_{j-1}``, ``C_l v_l`` outside ``im A``."""

    matrices: list
    vectors: list

    def __len__(self):
        return len(self.matrices)


@dataclass
class WongResult:
    stages: list
    contained_in_image: bool
    first_escape: int | None = None
    chain: WongChain | None = None
    witness: Subspace | None = None

    @property
    def limit(self) -> Subspace:
        return self.stages[-1]

    @property
    def escaped(self) -> bool:
        return not self.contained_in_image

    def dims(self):
        return [W.dim for W in self.stages]


def second_wong(A, space, step_cap: int | None = None, *, with_chain: bool = True,
                check_membership: bool = True) -> WongResult:
    """Iterate the second Wong sequence of ``A`` in ``space`` (MatrixSpace or BlowUp)."""
    F = space.field
    A = np.asarray(A)
    N = space.dim_n
    if A.shape != (N, N):
        raise InvalidInputError(f"pivot matrix has shape {A.shape}, expected {N}x{N}")
    if check_membership and not space.contains(A):
        raise InvalidInputError("pivot matrix does not belong to the space")
    imA = image(F, A)
    W = Subspace.zero(F, N)
    stages = [W]
    cap = N + 1 if step_cap is None else step_cap
    for i in range(1, cap + 1):
        nxt = space.apply(preimage(F, A, W))
        if not nxt <= imA:
            stages.append(nxt)
            res = WongResult(stages, False, first_escape=i)
            if with_chain:
                res.chain = wong_chain(A, space, res)
            log.debug("wong: escape at step %d, dims %s", i, res.dims())
            return res
        if nxt == W:
            log.debug("wong: stable after %d steps, dims %s", i - 1, [s.dim for s in stages])
            return WongResult(stages, True, witness=preimage(F, A, W))
        stages.append(nxt)
        W = nxt
    raise InternalConsistencyError(f"Wong sequence neither stabilized nor escaped within {cap} steps")


def _push(F, A, C, V: Subspace) -> Subspace:
    return apply_matrix(F, C, preimage(F, A, V))


def wong_chain(A, space, result: WongResult) -> WongChain:
    """Greedy extraction of the escaping chain, top index first.

    Inside ``im(A)`` the map ``V -> C A^-1(V)`` is additive, so whenever
    ``W_{j-1}`` pushed through the already chosen suffix escapes, one of the
    spanning pieces ``Y A^-1(W_{j-2})`` must escape as well.
    """
    if result.contained_in_image:
        raise InvalidInputError("the sequence did not escape; there is no chain")
    F = space.field
    A = np.asarray(A)
    imA = image(F, A)
    ell = result.first_escape
    basis = space.matrices()

    def through_suffix(V, suffix):
        for C in suffix:
            V = _push(F, A, C, V)
        return V

    suffix: list = []  # C_{j+1}, ..., C_ell in application order
    for j in range(ell, 0, -1):
        prev = result.stages[j - 1]
        for Y in basis:
            if not through_suffix(_push(F, A, Y, prev), suffix) <= imA:
                suffix.insert(0, Y)
                break
        else:
            raise InternalConsistencyError(f"no basis element keeps the escape at level {j}")
    ker = kernel(F, A)
    v1 = None
    for v in ker.vectors():
        if not through_suffix(Subspace.span(F, [matmul(F, suffix[0], v)], A.shape[0]), suffix[1:]) <= imA:
            v1 = v
            break
    if v1 is None:
        raise InternalConsistencyError("no kernel vector starts an escaping chain")
    vectors = [v1]
    for C in suffix[:-1]:
        target = matmul(F, C, vectors[-1])
        v = solve_particular(F, A, target)
        if v is None:
            raise InternalConsistencyError("chain vector left the image of A")
        vectors.append(v)
    chain = WongChain(suffix, vectors)
    if not check_chain(F, A, chain):
        raise InternalConsistencyError("extracted Wong chain violates its defining relations")
    return chain


def check_chain(F, A, chain: WongChain) -> bool:
    A = np.asarray(A)
    C, v = chain.matrices, chain.vectors
    if not C or len(C) != len(v):
        return False
    if np.any(matmul(F, A, v[0]) != 0):
        return False
    for j in range(1, len(v)):
        if np.any(matmul(F, A, v[j]) != matmul(F, C[j - 1], v[j - 1])):
            return False
    return not image(F, A).contains_vector(matmul(F, C[-1], v[-1]))


def pencil_max_rank(F, A, C, target: int, S):
    """A member of ``<A, C>`` of rank above ``target``: ``C`` itself or ``A + s C`` for the first good ``s``."""
    if rank(F, C) > target:
        return C
    for s in S:
        M = F.reduce(np.asarray(A) + F.coerce(s) * np.asarray(C))
        if rank(F, M) > target:
            return M
    raise FieldTooSmallError(
        f"no pencil member of rank > {target} among {len(S)} sample values", required=len(S) + 1
    )
