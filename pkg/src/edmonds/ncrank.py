"""Non-commutative rank through blow-ups.

Starting from a matrix ``A`` of rank ``s`` in the space, each round either
finds a shrunk subspace (which settles ncrk) or moves to a blow-up of
degree ``d * d'`` (``d' in {r+1, r+2}``) where the rank per block has
strictly grown.  The degree never exceeds ``(n+1)! / (s+1)!``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import (
    DegreeCapExceeded,
    FieldTooSmallError,
    InternalConsistencyError,
    InvalidInputError,
)
from .exactfield import sample_set
from .linalg import Subspace, rank
from .mspace import (
    BlowUp,
    MatrixSpace,
    ShrunkWitness,
    blowup_coordinates,
    commutative_rank_estimate,
    descend_witness,
    random_coeffs,
    shrunk_from_subspace,
    verify_shrunk,
)
from .roundup import default_sample_set, round_up_rank
from .wong import pencil_max_rank, second_wong

log = logging.getLogger(__name__)


@dataclass
class FullCert:
    """A blow-up member of degree ``d_prime`` with coefficients ``coeffs`` (m, d', d') and the stated rank."""

    d_prime: int
    coeffs: np.ndarray
    achieved_rank: int

    def matrix(self, space: MatrixSpace):
        return BlowUp(space, self.d_prime).element(self.coeffs)

    def verify(self, space: MatrixSpace) -> bool:
        if self.coeffs.shape != (space.m, self.d_prime, self.d_prime):
            return False
        return rank(space.field, self.matrix(space)) == self.achieved_rank

    @property
    def rank_per_block(self) -> Fraction:
        return Fraction(self.achieved_rank, self.d_prime)


@dataclass
class NcrkResult:
    ncrk: int
    witness: ShrunkWitness | FullCert | None
    trace: list
    start_rank: int
    rank_cert: FullCert | None = None
    seed: object = 0

    def verify(self, space: MatrixSpace) -> bool:
        if isinstance(self.witness, ShrunkWitness):
            ok = verify_shrunk(space, self.witness) and self.ncrk == space.n - self.witness.c
        elif isinstance(self.witness, FullCert):
            ok = self.witness.verify(space) and self.ncrk == space.n \
                and self.witness.achieved_rank == space.n * self.witness.d_prime
        else:
            ok = self.ncrk == 0 and space.n == 0
        if ok and self.rank_cert is not None:
            ok = self.rank_cert.verify(space) \
                and self.rank_cert.achieved_rank == self.ncrk * self.rank_cert.d_prime
        return ok


def choose_blowup_factor(r: int, characteristic: int) -> int:
    """``r + 1`` unless the characteristic divides it, then ``r + 2``."""
    for cand in (r + 1, r + 2):
        if not characteristic or cand % characteristic:
            return cand
    raise InternalConsistencyError(f"characteristic {characteristic} divides both {r + 1} and {r + 2}")


def shift_operators(F, d_prime: int, length: int):
    """``Z_1..Z_length`` in M(d'): ``Z_i e_i = e_(i+1)``, wrapping to ``e_1`` when ``i = d'``."""
    Zs = []
    for i in range(length):
        Z = F.zeros((d_prime, d_prime))
        Z[(i + 1) % d_prime, i] = F.one
        Zs.append(Z)
    return Zs


@dataclass
class Increment:
    """Outcome of one round: either a shrunk subspace of the blow-up or a bigger matrix."""

    witness: ShrunkWitness | None = None
    blowup: BlowUp | None = None
    matrix: np.ndarray | None = None


def increment_rank(bu: BlowUp, A, r: int, d_prime: int | None = None, S=None, *,
                   seed=0, cap_dim: int | None = None, deterministic: bool = False) -> Increment:
    """One round of rank increment at degree ``d`` for ``A`` of rank ``rd``.

    Either ``A^-1(W*)`` is an ``(n-r)d``-shrunk subspace of the blow-up, or
    the escaping Wong chain yields ``A ⊗ I + lambda * sum C_i ⊗ Z_i`` of rank
    above ``r d d'``, which is rounded up to at least ``(r+1) d d'``.
    """
    F, n, d = bu.field, bu.n, bu.d
    A = F.reduce(np.asarray(A))
    if r >= n:
        raise InvalidInputError("rank is already full; nothing to increment")
    if rank(F, A) != r * d:
        raise InvalidInputError(f"matrix rank is not r*d = {r * d}")
    res = second_wong(A, bu, step_cap=r + 1)
    if res.contained_in_image:
        w = shrunk_from_subspace(bu, res.witness)
        if w.c < (n - r) * d:
            raise InternalConsistencyError(f"Wong witness has gap {w.c} < {(n - r) * d}")
        return Increment(witness=w)
    d_prime = d_prime or choose_blowup_factor(r, F.characteristic)
    D = d * d_prime
    if cap_dim is not None and n * D > cap_dim:
        raise DegreeCapExceeded(
            f"blow-up to {n * D} rows exceeds the cap of {cap_dim}", partial=None
        )
    chain = res.chain
    Zs = shift_operators(F, d_prime, len(chain))
    A_big = np.kron(A, F.identity(d_prime))
    C_big = F.zeros(A_big.shape)
    for C, Z in zip(chain.matrices, Zs):
        C_big = F.reduce(C_big + np.kron(C, Z))
    big_bu = BlowUp(bu.base, D)
    if S is None:
        S = default_sample_set(F, n, D)
    M = pencil_max_rank(F, A_big, C_big, r * D, S)
    M = round_up_rank(big_bu, M, S, seed=seed, deterministic=deterministic)
    got = rank(F, M)
    if got < (r + 1) * D:
        raise InternalConsistencyError(f"increment reached rank {got} < {(r + 1) * D}")
    return Increment(blowup=big_bu, matrix=M)


def _initial_matrix(space: MatrixSpace, trials: int, rng, S):
    est = commutative_rank_estimate(space, trials, seed=rng)
    F = space.field
    A = space.element(est.coeffs) if space.m else F.zeros((space.n, space.n))
    r = rank(F, A)
    improved = True
    while improved and r < space.n:
        improved = False
        for B in space.basis:
            try:
                M = pencil_max_rank(F, A, B, r, S)
            except FieldTooSmallError:
                continue
            A, r, improved = M, rank(F, M), True
            break
    return A, r, est


def degree_bound_for(n: int, s: int) -> int:
    return factorial(n + 1) // factorial(s + 1)


def ncrk_main(space: MatrixSpace, seed=0, *, trials: int = 16, sample_size: int | None = None,
              cap_dim: int = 2000, deterministic: bool = False) -> NcrkResult:
    """Non-commutative rank with a certificate on each side."""
    F, n = space.field, space.n
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if n == 0:
        return NcrkResult(0, None, [(1, 0)], 0, seed=seed)
    if space.m == 0 or space.span_dim() == 0:
        w = ShrunkWitness(Subspace.full(F, n), Subspace.zero(F, n), n)
        cert = FullCert(1, F.zeros((space.m, 1, 1)), 0)
        return NcrkResult(0, w, [(1, 0)], 0, rank_cert=cert, seed=seed)
    S0 = sample_set(F, min(F.order or 10**9, max(n + 1, sample_size or 64)))
    A, r, est = _initial_matrix(space, trials, rng, S0)
    s = r
    bound = degree_bound_for(n, s)
    bu = BlowUp(space, 1)
    trace = [(1, r)]
    log.info("ncrk: n=%d, starting rank %d, degree bound %d", n, s, bound)
    while r < n:
        d = bu.d
        S = None if sample_size is None else sample_set(F, min(F.order or sample_size, sample_size))
        try:
            inc = increment_rank(bu, A, r, S=S, seed=rng, cap_dim=cap_dim,
                                 deterministic=deterministic)
        except DegreeCapExceeded as exc:
            raise DegreeCapExceeded(
                str(exc),
                partial=NcrkResult(r, None, trace, s,
                                   rank_cert=FullCert(d, blowup_coordinates(bu, A), r * d), seed=seed),
            ) from None
        if inc.witness is not None:
            w = descend_witness(bu, inc.witness.U)
            if w.c != n - r:
                raise InternalConsistencyError(f"descended gap {w.c} differs from n - r = {n - r}")
            cert = FullCert(d, blowup_coordinates(bu, A), r * d)
            result = NcrkResult(n - w.c, w, trace, s, rank_cert=cert, seed=seed)
            _final_check(space, result)
            return result
        bu, A = inc.blowup, inc.matrix
        new_r = rank(F, A) // bu.d
        if new_r <= r:
            raise InternalConsistencyError("no progress in rank increment")
        r = new_r
        trace.append((bu.d, r))
        log.info("ncrk: degree %d, rank per block %d", bu.d, r)
        if bu.d > bound:
            raise InternalConsistencyError(f"degree {bu.d} exceeds the bound {bound}")
    cert = FullCert(bu.d, blowup_coordinates(bu, A), n * bu.d)
    result = NcrkResult(n, cert, trace, s, rank_cert=cert, seed=seed)
    _final_check(space, result)
    return result


def _final_check(space, result: NcrkResult):
    if not result.verify(space):
        raise InternalConsistencyError("ncrk result failed its own verification")


# ---------------------------------------------------------------------------


@dataclass
class NullconeVerdict:
    in_nullcone: bool
    certificate: FullCert | None
    degrees_tried: int
    trials: int
    failure_bound: float
    definitive: bool

    @property
    def label(self) -> str:
        return "not-in-nullcone-with-certificate" if not self.in_nullcone else "in-nullcone-with-confidence"


def nullcone_test_randomized(space: MatrixSpace, d_max: int, trials: int = 8, seed=0,
                             sample_size: int | None = None) -> NullconeVerdict:
    """Look for a nonsingular member of some blow-up of degree ``d <= d_max``."""
    if d_max < 1:
        raise InvalidInputError("d_max must be at least 1")
    F, n = space.field, space.n
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    size = sample_size or (F.order if F.order is not None else 10**6)
    worst = 1.0
    for d in range(1, d_max + 1):
        bu = BlowUp(space, d)
        for _ in range(trials):
            c = random_coeffs(F, rng, bu.m, size).reshape(space.m, d, d)
            if rank(F, bu.element(c)) == n * d:
                return NullconeVerdict(False, FullCert(d, c, n * d), d, trials, 0.0, True)
        worst = min(1.0, n * d / size) ** trials
    definitive = d_max >= factorial(n + 1)
    return NullconeVerdict(True, None, d_max, trials, float(worst), definitive)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeBounds:
    n: int
    m: int
    sigma_paper: int
    sigma_derksen: int
    beta_derksen: Fraction
    beta_appendix: Fraction

    def as_dict(self):
        def show(v):
            v = Fraction(v)
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return {
            "n": self.n, "m": self.m,
            "sigma_paper": show(self.sigma_paper),
            "sigma_derksen": show(self.sigma_derksen),
            "beta_derksen": show(self.beta_derksen),
            "beta_appendix": show(self.beta_appendix),
        }


def _exact(v: Fraction):
    return v.numerator if v.denominator == 1 else v


def degree_bounds(n: int, m: int = 1) -> DegreeBounds:
    """Nullcone and invariant-generation degree bounds, evaluated exactly.

    ``sigma_paper = (n+1)!``, ``sigma_derksen = n^2 4^(n^2) / 4``,
    ``beta_derksen = max(2, 3/8 n^4 ((n+1)!)^2)`` and
    ``beta_appendix = 3/128 n^8 16^(n^2)``.
    """
    if n < 1 or m < 1:
        raise InvalidInputError("n and m must be positive")
    sigma_paper = factorial(n + 1)
    sigma_derksen = Fraction(n * n * 4 ** (n * n), 4)
    beta_derksen = max(Fraction(2), Fraction(3, 8) * n ** 4 * sigma_paper ** 2)
    beta_appendix = Fraction(3, 128) * n ** 8 * 16 ** (n * n)
    return DegreeBounds(n, m, sigma_paper, _exact(sigma_derksen), _exact(beta_derksen),
                        _exact(beta_appendix))
