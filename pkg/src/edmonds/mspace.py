"""Matrix spaces, tensor blow-ups and shrunk-subspace witnesses.

Blow-up layout: ``B ⊗ E_jk`` is ``np.kron(B, E_jk)``, i.e. n x n blocks of
size d x d, and a vector of F^(nd) has coordinate ``a*d + j`` for base index
``a`` and tensor slot ``j``.  Coefficient arrays for blow-up elements have
shape ``(m, d, d)`` indexed ``[i, j, k]`` (0-based).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InternalConsistencyError,
    InvalidInputError,
    InvalidWitnessError,
)
from .exactfield import make_field
from .linalg import Subspace, matmul, rank, rref, solve_particular

log = logging.getLogger(__name__)


class MatrixSpace:
    """The span of n x n matrices ``B_1, ..., B_m`` over a field."""

    def __init__(self, field, n: int, basis):
        self.field = make_field(field)
        self.n = int(n)
        mats = [self.field.array(B) if not isinstance(B, np.ndarray) else self.field.reduce(B)
                for B in basis]
        for B in mats:
            if B.shape != (self.n, self.n):
                raise DimensionMismatchError(f"basis matrix of shape {B.shape}, expected {self.n}x{self.n}")
        self.basis = mats
        self._stack = (
            np.stack(mats) if mats else self.field.zeros((0, self.n, self.n))
        )

    @property
    def m(self) -> int:
        return len(self.basis)

    @property
    def dim_n(self) -> int:
        return self.n

    def span_dim(self) -> int:
        if not self.basis:
            return 0
        return rank(self.field, self._stack.reshape(self.m, -1))

    @property
    def independent(self) -> bool:
        return self.span_dim() == self.m

    def element(self, coeffs):
        coeffs = self.field.array(list(coeffs)) if not isinstance(coeffs, np.ndarray) else coeffs
        if len(coeffs) != self.m:
            raise DimensionMismatchError("one coefficient per basis matrix expected")
        if self.m == 0:
            return self.field.zeros((self.n, self.n))
        return self.field.reduce(np.tensordot(coeffs, self._stack, axes=1))

    def apply(self, U: Subspace) -> Subspace:
        return apply_space(self, U)

    def coordinates(self, A):
        """Coefficients expressing ``A`` in the basis, or None if ``A`` is outside the span."""
        if self.m == 0:
            return np.zeros(0, dtype=self.field.dtype) if not np.any(np.asarray(A) != 0) else None
        system = self._stack.reshape(self.m, -1).T
        return solve_particular(self.field, system, np.asarray(A).reshape(-1))

    def contains(self, A) -> bool:
        return self.coordinates(A) is not None

    def matrices(self):
        return list(self.basis)

    def __repr__(self):
        return f"MatrixSpace(n={self.n}, m={self.m}, field={self.field.name})"


def apply_space(space, U: Subspace) -> Subspace:
    """``span{B u : B in basis, u in basis(U)}``."""
    if U.ambient_dim != space.dim_n:
        raise DimensionMismatchError(
            f"subspace of F^{U.ambient_dim} applied to a space on F^{space.dim_n}"
        )
    if isinstance(space, BlowUp):
        return tensor_up(space.base.apply(contract(U, space.d)), space.d)
    F = space.field
    if U.dim == 0 or space.m == 0:
        return Subspace.zero(F, space.n)
    images = F.reduce(np.einsum("iab,bk->aik", space._stack, U.basis)).reshape(space.n, -1)
    return Subspace.span(F, images, space.n)


# ---------------------------------------------------------------------------
# commutative rank


@dataclass(frozen=True)
class RankEstimate:
    """One-sided estimate: ``rank`` never exceeds the true commutative rank."""

    rank: int
    trials: int
    sample_size: int | None
    failure_bound: float
    coeffs: np.ndarray = dc_field(repr=False)
    stable: bool = True

    def __int__(self):
        return self.rank


def _sample_span(field, default: int = 10**6) -> int | None:
    return field.order if field.order is not None else default


def random_coeffs(field, rng, count: int, sample_size: int | None = None):
    """Uniform coefficients from ``{0, ..., S-1}`` (S = field size when unspecified)."""
    span = sample_size or _sample_span(field)
    if field.order is not None:
        span = min(span, field.order)
    if field.dtype is object or span > 2**62:
        vals = [int(v) for v in rng.integers(0, min(span, 2**62), size=count)]
        return field.array(vals) if count else field.zeros(0)
    return field.array(rng.integers(0, span, size=count))


def commutative_rank_estimate(space: MatrixSpace, trials: int = 16, seed=0,
                              sample_size: int | None = None) -> RankEstimate:
    """Best rank among ``trials`` random members of the space.

    Each trial misses the commutative rank with probability at most
    ``n / |S|`` by Schwartz-Zippel.
    """
    F = space.field
    n = space.n
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    S = sample_size or _sample_span(F)
    if F.order is not None:
        S = min(S, F.order)
    if S <= n:
        log.warning("sample set of size %d does not exceed n=%d; estimate is not certified", S, n)
    best, best_c, hits = -1, None, 0
    for _ in range(max(trials, 1)):
        c = random_coeffs(F, rng, space.m, S)
        r = rank(F, space.element(c)) if space.m else 0
        if r > best:
            best, best_c, hits = r, c, 1
        elif r == best:
            hits += 1
    bound = min(1.0, n / S) ** max(trials, 1) if S else 1.0
    return RankEstimate(best, trials, S, float(bound), best_c, stable=hits >= 2 or best == n)


# ---------------------------------------------------------------------------
# blow-ups


def matrix_unit(d: int, j: int, k: int, field):
    E = field.zeros((d, d))
    E[j, k] = field.one
    return E


class BlowUp:
    """The tensor blow-up ``B ⊗ M(d)`` as a space of nd x nd matrices."""

    def __init__(self, base: MatrixSpace, d: int):
        if int(d) < 1:
            raise InvalidInputError("blow-up degree must be at least 1")
        self.base = base
        self.d = int(d)
        self.field = base.field

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m * self.d * self.d

    @property
    def dim_n(self) -> int:
        return self.base.n * self.d

    def element(self, coeffs):
        return blowup_element(self, coeffs)

    def matrices(self):
        """All ``B_i ⊗ E_jk`` in (i, j, k) lexicographic order."""
        F, d = self.field, self.d
        return [np.kron(B, matrix_unit(d, j, k, F))
                for B in self.base.basis for j in range(d) for k in range(d)]

    def as_space(self) -> MatrixSpace:
        return MatrixSpace(self.field, self.dim_n, self.matrices())

    def apply(self, U: Subspace) -> Subspace:
        return apply_space(self, U)

    def coordinates(self, A):
        return blowup_coordinates(self, A)

    def contains(self, A) -> bool:
        return blowup_coordinates(self, A) is not None

    def random_coeffs(self, rng, sample_size=None):
        c = random_coeffs(self.field, rng, self.m, sample_size)
        return c.reshape(self.base.m, self.d, self.d)

    def __repr__(self):
        return f"BlowUp(n={self.n}, m={self.base.m}, d={self.d})"


def _coeff_array(bu: BlowUp, coeffs):
    F = bu.field
    m, d = bu.base.m, bu.d
    if isinstance(coeffs, dict):
        arr = F.zeros((m, d, d))
        for (i, j, k), v in coeffs.items():
            if not (0 <= i < m and 0 <= j < d and 0 <= k < d):
                raise InvalidInputError(f"blow-up index {(i, j, k)} out of range")
            arr[i, j, k] = F.coerce(v)
        return arr
    arr = coeffs if isinstance(coeffs, np.ndarray) else F.array(coeffs)
    if arr.shape != (m, d, d):
        raise DimensionMismatchError(f"coefficient array of shape {arr.shape}, expected {(m, d, d)}")
    return arr


def blowup_element(bu: BlowUp, coeffs):
    """``sum coeffs[i, j, k] * B_i ⊗ E_jk`` from a dict or an (m, d, d) array."""
    F, n, d = bu.field, bu.n, bu.d
    c = _coeff_array(bu, coeffs)
    if bu.base.m == 0:
        return F.zeros((n * d, n * d))
    # entry (a*d + j, b*d + k) = sum_i c[i, j, k] * B_i[a, b]
    T = np.einsum("ijk,iab->ajbk", c, bu.base._stack)
    return F.reduce(T).reshape(n * d, n * d)


def blowup_coordinates(bu: BlowUp, A):
    """Coefficients ``nu[i, j, k]`` with ``A = sum nu B_i ⊗ E_jk``, or None if ``A`` is not in the blow-up."""
    F, n, d, m = bu.field, bu.n, bu.d, bu.base.m
    A = np.asarray(A)
    if A.shape != (n * d, n * d):
        raise DimensionMismatchError("matrix does not match the blow-up size")
    blocks = A.reshape(n, d, n, d).transpose(1, 3, 0, 2).reshape(d * d, n * n)
    if m == 0:
        return F.zeros((0, d, d)) if not np.any(blocks != 0) else None
    system = np.hstack([bu.base._stack.reshape(m, -1).T, blocks.T])
    R, piv = rref(F, system)
    if any(p >= m for p in piv):
        return None
    sol = F.zeros((m, d * d))
    for row, c in enumerate(piv):
        sol[c] = R[row, m:]
    return sol.reshape(m, d, d)


def embed_coeffs(coeffs, d_new: int, field):
    """Place (m, d, d) coefficients in the top-left corner of (m, d_new, d_new)."""
    m, d, _ = coeffs.shape
    out = field.zeros((m, d_new, d_new))
    out[:, :d, :d] = coeffs
    return out


def tensor_up(U0: Subspace, d: int) -> Subspace:
    """``U0 ⊗ F^d`` inside F^(nd)."""
    F, n = U0.field, U0.ambient_dim
    if d == 1:
        return U0
    if U0.dim == 0:
        return Subspace.zero(F, n * d)
    vecs = [np.kron(u, matrix_unit(d, j, 0, F)[:, 0]) for u in U0.vectors() for j in range(d)]
    return Subspace.span(F, vecs, n * d)


def contract(U: Subspace, d: int) -> Subspace:
    """Span of all d slot contractions ``u -> (u[a*d + q])_a`` of vectors of U."""
    F = U.field
    n = U.ambient_dim // d
    if d == 1:
        return U
    if U.dim == 0:
        return Subspace.zero(F, n)
    parts = U.rows.reshape(U.dim, n, d).transpose(0, 2, 1).reshape(U.dim * d, n)
    return Subspace.span(F, parts.T, n)


def is_blowup(mats, n: int, d: int, field):
    """Recover the base space if ``span(mats)`` equals ``B ⊗ M(d)``, else None.

    Every nd x nd matrix decomposes as ``sum_{ij} A_ij ⊗ E_ij`` with
    ``A_ij = A[i::d, j::d]``, so the span always sits inside ``B ⊗ M(d)``
    for ``B = span{A_ij}``; closure under the two-sided ``I ⊗ M(d)`` action
    holds exactly when the dimensions agree, ``dim = d^2 dim B``.
    """
    F = make_field(field)
    mats = [F.reduce(A) if isinstance(A, np.ndarray) else F.array(A) for A in mats]
    for A in mats:
        if A.shape != (n * d, n * d):
            raise DimensionMismatchError("matrix size is not n*d")
    if d == 1:
        return MatrixSpace(F, n, mats)
    pieces = [A[i::d, j::d] for A in mats for i in range(d) for j in range(d)]
    if not pieces:
        return MatrixSpace(F, n, [])
    R, piv = rref(F, np.stack(pieces).reshape(len(pieces), -1))
    base = MatrixSpace(F, n, [R[r].reshape(n, n) for r in range(len(piv))])
    dim_total = rank(F, np.stack(mats).reshape(len(mats), -1))
    if dim_total != d * d * len(piv):
        return None
    return base


# ---------------------------------------------------------------------------
# shrunk subspaces


@dataclass(frozen=True)
class ShrunkWitness:
    """``U`` with ``B(U) <= W`` and ``dim W <= dim U - c``; certifies ncrk <= n - c."""

    U: Subspace
    W: Subspace
    c: int

    def __post_init__(self):
        if int(self.c) < 1:
            raise InvalidWitnessError(f"shrunk witness needs c >= 1, got {self.c}")
        if self.U.ambient_dim != self.W.ambient_dim:
            raise InvalidWitnessError("U and W live in different ambient spaces")
        if self.W.dim > self.U.dim - self.c:
            raise InvalidWitnessError(
                f"dim W = {self.W.dim} exceeds dim U - c = {self.U.dim - self.c}"
            )

    @property
    def n(self) -> int:
        return self.U.ambient_dim


def verify_shrunk(space, w: ShrunkWitness) -> bool:
    """Recompute ``B(U)`` and check containment in ``W`` and the dimension gap."""
    if w.c < 1 or w.U.ambient_dim != space.dim_n or w.W.ambient_dim != space.dim_n:
        return False
    if w.W.dim > w.U.dim - w.c:
        return False
    return apply_space(space, w.U) <= w.W


def shrunk_from_subspace(space, U: Subspace) -> ShrunkWitness:
    """Witness ``(U, B(U), dim U - dim B(U))``; raises if U does not shrink."""
    W = apply_space(space, U)
    c = U.dim - W.dim
    if c < 1:
        raise InvalidWitnessError(f"subspace is not shrunk (dim U - dim B(U) = {c})")
    return ShrunkWitness(U, W, c)


def descend_witness(bu: BlowUp, U: Subspace) -> ShrunkWitness:
    """Turn a shrunk subspace of ``B ⊗ M(d)`` into one of ``B`` with the gap divided by d."""
    d = bu.d
    if U.ambient_dim != bu.dim_n:
        raise DimensionMismatchError("subspace does not live in F^(nd)")
    if apply_space(bu, U).dim >= U.dim:
        raise InvalidWitnessError("input subspace is not shrunk for the blow-up")
    U0 = contract(U, d)
    closed = tensor_up(U0, d)
    if not U <= closed or closed.dim != d * U0.dim:
        raise InternalConsistencyError("closure under I ⊗ M(d) is not of the form U0 ⊗ F^d")
    W0 = bu.base.apply(U0)
    c_big = closed.dim - apply_space(bu, closed).dim
    if c_big % d:
        raise InternalConsistencyError(f"blow-up gap {c_big} not divisible by d={d}")
    w = ShrunkWitness(U0, W0, c_big // d)
    if not verify_shrunk(bu.base, w):
        raise InternalConsistencyError("descended witness fails verification")
    return w
