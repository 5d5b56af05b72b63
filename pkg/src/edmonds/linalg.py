"""Dense exact linear algebra.

Matrices are plain numpy arrays paired with a ring context passed as the
first argument: ``(N, M)`` arrays of raw scalars for fields, ``(N, M, k)``
arrays of coefficient vectors for a :class:`~edmonds.exactfield.UnityRing`.
Over F_p everything stays in int64 (or object for huge p); over Q the
entries are Fractions and elimination is fraction-free.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DimensionMismatchError, FieldTooSmallError, InvalidInputError
from .exactfield import (
    BiPoly,
    BiRational,
    PrimeField,
    RationalField,
    UnityRing,
    as_unity_ring,
    is_field,
    _is_prime,
    _poly_divmod,
    _poly_gcd,
    sample_set,
)

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# elimination


def _rref_mod(M, p):
    M = M % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = M[r] * inv % p
        f = M[:, c].copy()
        f[r] = 0
        if np.any(f):
            M = (M - np.outer(f, M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def _integer_rows(M):
    """Scale each row of a Fraction matrix to integers (row scaling keeps the row space)."""
    out = np.empty(M.shape, dtype=object)
    for i, row in enumerate(M):
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        out[i] = [int(Fraction(v) * den) for v in row]
    return out


def bareiss_echelon(M):
    """Fraction-free row echelon form of an integer matrix.

    Returns ``(E, pivots)``; entries of ``E`` are minors of the input, so
    bit lengths stay polynomial.
    """
    E = np.array(M, dtype=object)
    rows, cols = E.shape
    prev = 1
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if E[i, c] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            E[[r, i]] = E[[i, r]]
        piv = E[r, c]
        if r + 1 < rows:
            below = E[r + 1:, c].copy()
            E[r + 1:, c + 1:] = (E[r + 1:, c + 1:] * piv - np.outer(below, E[r, c + 1:])) // prev
            E[r + 1:, c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return E, pivots


def _rref_rational(M):
    E, pivots = bareiss_echelon(_integer_rows(M))
    R = np.empty(E.shape, dtype=object)
    for i in range(E.shape[0]):
        R[i] = [Fraction(v) for v in E[i]]
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        R[i] = R[i] / R[i, c]
        for j in range(i):
            f = R[j, c]
            if f != 0:
                R[j] = R[j] - f * R[i]
    for i in range(len(pivots), R.shape[0]):
        R[i] = [Fraction(0)] * R.shape[1]
    return R, pivots


def rref(field, M):
    """Reduced row echelon form ``(R, pivots)`` over a field."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise DimensionMismatchError("rref expects a 2-d array")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return field.zeros(M.shape), []
    if isinstance(field, RationalField):
        return _rref_rational(M)
    return _rref_mod(M.astype(field.dtype), field.p)


def rank(field, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if isinstance(field, RationalField):
        return len(bareiss_echelon(_integer_rows(M))[1])
    return len(_rref_mod(M.astype(field.dtype), field.p)[1])


def matmul(field, A, B):
    return field.reduce(np.asarray(A) @ np.asarray(B))


def is_zero_matrix(M) -> bool:
    return not np.any(np.asarray(M) != 0)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of F^n stored by the reduced echelon form of a spanning set.

    ``basis`` gives the vectors as columns; the representation is canonical,
    so ``==`` is equality of subspaces.
    """

    __slots__ = ("field", "ambient_dim", "_rows")

    def __init__(self, field, ambient_dim: int, rows=None):
        self.field = field
        self.ambient_dim = int(ambient_dim)
        if rows is None:
            rows = field.zeros((0, self.ambient_dim))
        self._rows = rows

    @classmethod
    def span(cls, field, vectors, ambient_dim: int | None = None) -> "Subspace":
        """Span of ``vectors``: an (n, k) array of columns or a list of vectors."""
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            cols = vectors
        else:
            vectors = list(vectors)
            if not vectors:
                if ambient_dim is None:
                    raise InvalidInputError("ambient dimension needed for an empty span")
                return cls(field, ambient_dim)
            cols = np.stack([np.asarray(v) for v in vectors], axis=1)
        n = cols.shape[0] if ambient_dim is None else ambient_dim
        if cols.shape[0] != n:
            raise DimensionMismatchError("vector length does not match ambient dimension")
        if cols.shape[1] == 0:
            return cls(field, n)
        R, piv = rref(field, cols.T)
        return cls(field, n, R[: len(piv)].copy())

    @classmethod
    def zero(cls, field, n: int) -> "Subspace":
        return cls(field, n)

    @classmethod
    def full(cls, field, n: int) -> "Subspace":
        return cls(field, n, field.identity(n))

    @property
    def dim(self) -> int:
        return self._rows.shape[0]

    @property
    def basis(self):
        return self._rows.T

    @property
    def rows(self):
        return self._rows

    def vectors(self):
        return [self._rows[i] for i in range(self.dim)]

    def contains_vector(self, v) -> bool:
        v = np.asarray(v).reshape(1, -1)
        if self.dim == 0:
            return is_zero_matrix(v)
        return rank(self.field, np.vstack([self._rows, v])) == self.dim

    def __contains__(self, v) -> bool:
        return self.contains_vector(v)

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        if self.dim == 0:
            return True
        if other.dim == 0:
            return False
        return rank(self.field, np.vstack([other._rows, self._rows])) == other.dim

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and bool(np.all(self._rows == other._rows))
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        stacked = np.vstack([self._rows, other._rows])
        if stacked.shape[0] == 0:
            return Subspace(self.field, self.ambient_dim)
        return Subspace.span(self.field, stacked.T, self.ambient_dim)

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel(field, A) -> Subspace:
    A = np.asarray(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return Subspace.full(field, n)
    R, piv = rref(field, A)
    free = [c for c in range(n) if c not in set(piv)]
    vecs = []
    for f in free:
        v = field.zeros(n)
        v[f] = field.one
        for i, c in enumerate(piv):
            v[c] = field.neg(R[i, f])
        vecs.append(v)
    return Subspace.span(field, vecs, n)


def image(field, A) -> Subspace:
    A = np.asarray(A)
    return Subspace.span(field, A, A.shape[0])


def preimage(field, A, W: Subspace) -> Subspace:
    """``{v : A v in W}``, from the kernel of ``[A | -W]`` projected to the v-block."""
    A = np.asarray(A)
    if W.ambient_dim != A.shape[0]:
        raise DimensionMismatchError("target subspace does not match the row count")
    n = A.shape[1]
    if W.dim == 0:
        return kernel(field, A)
    system = np.hstack([A, field.reduce(-W.basis)])
    K = kernel(field, system)
    if K.dim == 0:
        return Subspace.zero(field, n)
    return Subspace.span(field, K.basis[:n], n)


def solve_particular(field, A, b):
    """Lexicographically-first solution of ``A v = b`` (free variables zero), or None."""
    A = np.asarray(A)
    b = np.asarray(b).reshape(-1, 1)
    aug = np.hstack([A, b])
    R, piv = rref(field, aug)
    n = A.shape[1]
    if n in piv:
        return None
    v = field.zeros(n)
    for i, c in enumerate(piv):
        v[c] = R[i, n]
    return v


def apply_matrix(field, B, U: Subspace) -> Subspace:
    if U.dim == 0:
        return Subspace.zero(field, B.shape[0])
    return Subspace.span(field, matmul(field, B, U.basis), B.shape[0])


# ---------------------------------------------------------------------------
# division-free characteristic polynomial


def _ring_tensor(ring, A):
    """Coerce an R-matrix given as array or nested lists into an (N, M, k) array."""
    if isinstance(A, np.ndarray) and A.ndim == 3:
        return A
    if is_field(ring):
        return as_unity_ring(ring).lift(ring.array(A) if not isinstance(A, np.ndarray) else A)
    return ring.array(A if not isinstance(A, np.ndarray) else A.tolist())


def _charpoly_vectors(R: UnityRing, A):
    """Berkowitz: det(xI - A) over R, coefficients highest degree first, shape (N+1, k)."""
    N = A.shape[0]
    k = R.k
    base = R.base
    one = R.to_vec(R.one)
    if N == 0:
        return one.reshape(1, k)
    L = R.regular(A)
    p = one.reshape(1, k)
    for r in range(N):
        rk = r * k
        t = [one, base.reduce(-A[r, r])]
        if r:
            Lr = L[:rk, :rk]
            v = L[:rk, rk].copy()
            row = L[rk:rk + k, :rk]
            for _ in range(r):
                t.append(base.reduce(-(row @ v)))
                v = base.reduce(Lr @ v)
        t = np.stack(t)
        # lower-triangular Toeplitz product: new[i] = sum_j t[i-j] * p[j]
        prods = R.mul_arrays(t[:, None, :], p[None, :, :])
        new = R.zeros((r + 2,))
        for j in range(p.shape[0]):
            new[j:] = new[j:] + prods[: r + 2 - j, j]
        p = base.reduce(new)
    return p


def charpoly_division_free(ring, A) -> list:
    """det(xI - A) computed with ring additions and multiplications only.

    Returns raw ring coefficients, lowest degree first (leading coefficient 1).
    """
    R = as_unity_ring(ring)
    T = _ring_tensor(ring, A)
    if T.shape[0] != T.shape[1]:
        raise DimensionMismatchError("characteristic polynomial needs a square matrix")
    coeffs = _charpoly_vectors(R, T)[::-1]
    if is_field(ring):
        return [ring.coerce(c[0]) for c in coeffs]
    return [R.from_vec(c) for c in coeffs]


# ---------------------------------------------------------------------------
# rank over the components of the unity ring


def _mulmuley_valuation(R: UnityRing, Bsym, y) -> int:
    """x-adic valuation of det(xI - D(y) B') with D(y) = diag(1, y, y^2, ...)."""
    n2 = Bsym.shape[0]
    base = R.base
    powers = [base.one]
    for _ in range(n2 - 1):
        powers.append(base.mul(powers[-1], y))
    scale = base.array(powers).reshape(n2, 1, 1)
    DB = base.reduce(Bsym * scale)
    coeffs = _charpoly_vectors(R, DB)[::-1]
    for m, c in enumerate(coeffs):
        if np.any(c != 0):
            return m
    return n2


def _symmetrize(R: UnityRing, B):
    N = B.shape[0]
    Z = R.zeros((N, N))
    top = np.concatenate([Z, B], axis=1)
    bottom = np.concatenate([np.transpose(B, (1, 0, 2)), Z], axis=1)
    return np.concatenate([top, bottom], axis=0)


def mulmuley_degree_bound(N: int) -> int:
    """Maximum y-degree of a coefficient of det(xI - D B') for a 2N x 2N B'."""
    return N * (2 * N - 1)


def component_max_rank(ring, B, *, y_points=None, stop_at: int | None = None) -> int:
    """Maximum rank over the components of an N x N matrix over a unity ring.

    Forms ``B' = [[0, B], [B^T, 0]]`` and ``D = diag(1, y, ..., y^(2N-1))``,
    computes ``det(xI - D B')`` division-free and returns ``(2N - M) / 2``
    where ``x^M`` is the largest power of x dividing it.  The dependence on
    ``y`` is resolved by evaluation: a coefficient is a polynomial in ``y`` of
    degree at most ``N(2N-1)``, so it vanishes identically iff it vanishes at
    that many plus one points.  Passing ``y_points`` evaluates only there,
    which yields a lower bound (the randomized mode).
    """
    R = as_unity_ring(ring)
    T = _ring_tensor(ring, B)
    N = T.shape[0]
    if T.shape[1] != N:
        raise DimensionMismatchError("component_max_rank needs a square matrix")
    if N == 0:
        return 0
    if R.is_zero_array(T):
        return 0
    if R.k == 1:
        return rank(R.base, T[..., 0])
    order = R.base.order
    if order is not None and order <= mulmuley_degree_bound(N):
        # too few evaluation points for y: split the modulus instead
        return splitting_rank(R, T)
    Bsym = _symmetrize(R, T)
    exact = y_points is None
    if exact:
        y_points = sample_set(R.base, mulmuley_degree_bound(N) + 1)
    best_m = 2 * N
    limit = N if stop_at is None else min(N, stop_at)
    for y in y_points:
        m = _mulmuley_valuation(R, Bsym, R.base.coerce(y))
        best_m = min(best_m, m)
        if (2 * N - best_m) // 2 >= limit:
            break
    return (2 * N - best_m) // 2


def _pmod(f, g, F):
    return _poly_divmod(f, g, F)[1]


def _pinv(a, g, F):
    """Inverse of ``a`` modulo ``g`` when they are coprime (extended Euclid)."""
    r0, r1 = list(g), _pmod(a, g, F)
    s0, s1 = [], [F.one]
    while r1:
        q, r = _poly_divmod(r0, r1, F)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, F), F)
    c = F.inv(r0[0])
    return _pmod([F.mul(x, c) for x in s0], g, F)


def _poly_mul(f, g, F):
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return out


def _poly_sub(f, g, F):
    n = max(len(f), len(g))
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    out = [F.sub(a, b) for a, b in zip(f, g)]
    while out and F.is_zero(out[-1]):
        out.pop()
    return out


def _split_eliminate(F, g, M) -> int:
    M = [[_pmod(e, g, F) for e in row] for row in M]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if not M[i][c]:
                continue
            h = _poly_gcd(M[i][c], g, F)
            if len(h) > 1:
                # zero divisor: the components on either side of h are independent
                rest = _poly_divmod(g, h, F)[0]
                return max(_split_eliminate(F, h, M), _split_eliminate(F, rest, M))
            piv = i
            break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = _pinv(M[r][c], g, F)
        M[r] = [_pmod(_poly_mul(e, inv, F), g, F) for e in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [_pmod(_poly_sub(a, _poly_mul(f, b, F), F), g, F) for a, b in zip(M[i], M[r])]
        r += 1
    return r


def splitting_rank(R: UnityRing, T) -> int:
    """Component maximum rank by elimination that splits the modulus at zero divisors.

    Used when the field is too small for the evaluation argument; every
    division is by a unit of the current factor ring.
    """
    F = R.base
    M = [[[F.coerce(c) for c in T[i, j]] for j in range(T.shape[1])] for i in range(T.shape[0])]
    for row in M:
        for e in row:
            while e and F.is_zero(e[-1]):
                e.pop()
    return _split_eliminate(F, list(R.modulus), M)


# ---------------------------------------------------------------------------
# matrices over ring[X, Y]


class PolyMatrix:
    """Matrix over ring[X, Y] stored as ``{(a, b): coefficient array}``."""

    def __init__(self, ring, shape, terms):
        self.ring = ring
        self.shape = tuple(shape)
        self.terms = terms

    @classmethod
    def from_entries(cls, ring, entries) -> "PolyMatrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        R = ring
        terms: dict = {}
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise DimensionMismatchError("ragged matrix")
            for j, e in enumerate(row):
                if not isinstance(e, BiPoly):
                    e = BiPoly.const(R, e)
                for mono, c in e.terms.items():
                    if mono not in terms:
                        terms[mono] = _zeros_for(R, (rows, cols))
                    terms[mono][i, j] = R.to_vec(c) if not is_field(R) else c
        return cls(R, (rows, cols), terms)

    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=0)

    def evaluate(self, x0, y0):
        base = self.ring.base
        x0, y0 = base.coerce(x0), base.coerce(y0)
        out = _zeros_for(self.ring, self.shape)
        for (a, b), T in self.terms.items():
            s = base.mul(base.pow(x0, a), base.pow(y0, b))
            out = base.reduce(out + T * s)
        return out


def _zeros_for(ring, shape):
    return ring.zeros(shape)


def _clear_denominators(entries):
    """Multiply each row by the product of its distinct denominators."""
    cleared = []
    for row in entries:
        dens = []
        for e in row:
            if isinstance(e, BiRational) and not _is_one(e.den):
                if not any(e.den.terms == d.terms for d in dens):
                    dens.append(e.den)
        new_row = []
        for e in row:
            if isinstance(e, BiRational):
                num, den = e.num, e.den
            else:
                num, den = e, None
            factor = None
            for d in dens:
                if den is not None and d.terms == den.terms:
                    continue
                factor = d if factor is None else factor * d
            if not isinstance(num, BiPoly):
                new_row.append(num if factor is None else factor * num)
            else:
                new_row.append(num if factor is None else num * factor)
        cleared.append(new_row)
    return cleared


def _is_one(p: BiPoly) -> bool:
    return list(p.terms) == [(0, 0)] and p.ring.eq(p.terms[(0, 0)], p.ring.one)


def specialized_rank(ring, M, *, y_points=None, stop_at=None) -> int:
    """Rank of a specialized matrix: ordinary rank over fields, component max over R."""
    if is_field(ring):
        return rank(ring, M)
    if ring.k == 1:
        return rank(ring.base, M[..., 0])
    rows, cols = M.shape[:2]
    if rows != cols:
        n = max(rows, cols)
        P = ring.zeros((n, n))
        P[:rows, :cols] = M
        M = P
    return component_max_rank(ring, M, y_points=y_points, stop_at=stop_at)


def random_points(field, rng, count: int, minimum_span: int):
    """``count`` random nonzero field elements from a set of size at least ``minimum_span``."""
    if field.order is not None:
        if field.dtype is object:
            return [field.coerce(int(v)) for v in rng.integers(1, 2**62, size=count)]
        return [int(v) for v in rng.integers(1, field.order, size=count)]
    # over Q, a set 16 times the degree bound keeps each point's failure
    # chance at 1/16 while keeping the integers short
    span = max(16 * minimum_span, 64)
    return [field.coerce(int(v)) for v in rng.integers(1, span, size=count)]


def function_field_rank(
    entries,
    ring=None,
    degree_bound: int | None = None,
    *,
    deterministic: bool = False,
    points: int = 20,
    seed=0,
    stop_at: int | None = None,
) -> int:
    """Rank of a matrix over ring(X, Y) by specialization.

    ``entries`` is a 2-d list of BiRational / BiPoly values (or a
    :class:`PolyMatrix`).  Denominators are cleared row by row; the minor
    degree bound is ``s = N * D'``.  Deterministic mode evaluates every point
    of an ``(s+1) x (s+1)`` grid; the default randomized mode takes the best
    of ``points`` random specializations (never an overestimate).
    """
    if isinstance(entries, PolyMatrix):
        pm = entries
    else:
        if ring is None:
            ring = _guess_ring(entries)
        pm = PolyMatrix.from_entries(ring, _clear_denominators(entries))
    ring = pm.ring
    base = ring.base
    rows, cols = pm.shape
    size = min(rows, cols)
    if size == 0 or not pm.terms:
        return 0
    dprime = max(pm.degree(), degree_bound or 0)
    s = size * dprime
    limit = size if stop_at is None else min(size, stop_at)
    best = 0
    if deterministic:
        S = sample_set(base, s + 1)
        for x0 in S:
            for y0 in S:
                best = max(best, specialized_rank(ring, pm.evaluate(x0, y0), stop_at=limit))
                if best >= limit:
                    return best
        return best
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    big = 2 * (s + 1) + mulmuley_degree_bound(max(rows, cols))
    if base.order is not None and base.order <= big:
        log.warning("%s is small for degree bound %d; random specialization is not certified",
                    base.name, big)
    for _ in range(points):
        x0, y0 = random_points(base, rng, 2, big)
        M = pm.evaluate(x0, y0)
        if base.order is None:
            # reducing modulo a random prime can only lower the rank
            ring_p = _random_prime_image(ring, rng)
            try:
                M = ring_p.base.array(M)
            except ZeroDivisionError:
                continue
            best = max(best, specialized_rank(
                ring_p, M, y_points=random_points(ring_p.base, rng, 1, big), stop_at=limit))
        else:
            best = max(best, specialized_rank(
                ring, M, y_points=random_points(base, rng, 1, big), stop_at=limit))
        if best >= limit:
            break
    return best


def random_prime(rng, low: int = 2**22, high: int = 2**23) -> int:
    while True:
        q = int(rng.integers(low, high)) | 1
        if _is_prime(q):
            return q


def _random_prime_image(ring, rng):
    """The same ring over F_q for a random prime q that does not divide its order."""
    while True:
        q = random_prime(rng)
        if isinstance(ring, UnityRing):
            if ring.d % q:
                return UnityRing(PrimeField(q), ring.d)
        else:
            return PrimeField(q)


def _guess_ring(entries):
    for row in entries:
        for e in row:
            if isinstance(e, (BiPoly, BiRational)):
                return e.ring
    raise InvalidInputError("cannot infer the coefficient ring; pass ring=")
