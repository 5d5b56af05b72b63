"""Brute-force references: subspace enumeration, exhaustive rank, blow-up search.

Used by tests and the ``oracle`` command.  Everything here is one-sided:
an enumerated shrunk subspace bounds ncrk from above, a blow-up rank from
below.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .errors import InstanceTooLargeError, InvalidInputError
from .linalg import Subspace, rank
from .mspace import BlowUp, MatrixSpace, ShrunkWitness, apply_space, commutative_rank_estimate, random_coeffs

log = logging.getLogger(__name__)

ENUMERATION_LIMIT = 2_000_000


def echelon_forms(q: int, n: int, k: int):
    """All k x n reduced row echelon matrices over F_q with integer entries in ``[0, q)``.

    Each k-dimensional subspace of F_q^n appears exactly once.
    """
    for pivots in itertools.combinations(range(n), k):
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivots]
        for values in itertools.product(range(q), repeat=len(free)):
            M = np.zeros((k, n), dtype=np.int64)
            for i, p in enumerate(pivots):
                M[i, p] = 1
            for (i, j), v in zip(free, values):
                M[i, j] = v
            yield M


def count_subspaces(q: int, n: int) -> int:
    total = 0
    for k in range(n + 1):
        num, den = 1, 1
        for i in range(k):
            num *= q ** (n - i) - 1
            den *= q ** (i + 1) - 1
        total += num // den
    return total


def all_subspaces(field, q: int, n: int):
    """Subspaces of F_q^n, lifted into ``field`` through integer representatives."""
    for k in range(n + 1):
        for M in echelon_forms(q, n, k):
            if k == 0:
                yield Subspace.zero(field, n)
            else:
                yield Subspace.span(field, field.array(M.T.tolist()), n)


@dataclass
class ShrunkSearch:
    """Best enumerated ``(U, W = B(U), c)``; ``lifted`` when the instance field is not F_q itself."""

    U: Subspace
    W: Subspace
    c: int
    q: int
    lifted: bool
    visited: int

    def witness(self) -> ShrunkWitness | None:
        return ShrunkWitness(self.U, self.W, self.c) if self.c >= 1 else None


def enumerate_shrunk(space: MatrixSpace, q: int | None = None, *, max_count: int = ENUMERATION_LIMIT) -> ShrunkSearch:
    """Maximize ``dim U - dim B(U)`` over all subspaces of F_q^n.

    Over F_q itself this is exhaustive.  For other fields the F_q subspaces
    are lifted by their 0..q-1 representatives; each candidate is still
    evaluated over the instance field, so the result is a valid upper-bound
    witness but not an exhaustive search.
    """
    F, n = space.field, space.n
    if q is None:
        q = F.order if F.order is not None and F.order <= 3 else 2
    native = F.order == q
    if q < 2:
        raise InvalidInputError("q must be at least 2")
    total = count_subspaces(q, n)
    if total > max_count:
        raise InstanceTooLargeError(f"{total} subspaces of F_{q}^{n} exceed the limit {max_count}")
    best = None
    visited = 0
    for U in all_subspaces(F, q, n):
        visited += 1
        W = apply_space(space, U)
        c = U.dim - W.dim
        if best is None or c > best[2]:
            best = (U, W, c)
    U, W, c = best
    return ShrunkSearch(U, W, c, q, not native, visited)


def exhaustive_rank(space: MatrixSpace, *, max_count: int = ENUMERATION_LIMIT) -> int:
    """Maximum rank over all ``q^m`` members of a space over a small prime field."""
    F = space.field
    if F.order is None:
        raise InstanceTooLargeError("exhaustive rank needs a finite field")
    total = F.order ** space.m
    if total > max_count:
        raise InstanceTooLargeError(f"{total} combinations exceed the limit {max_count}")
    best = 0
    for coeffs in itertools.product(range(F.order), repeat=space.m):
        best = max(best, rank(F, space.element(F.array(list(coeffs)))))
        if best == space.n:
            break
    return best


def maximal_rank_members(space: MatrixSpace, *, max_count: int = ENUMERATION_LIMIT):
    """All members achieving the exhaustive maximum rank (small fields only)."""
    F = space.field
    if F.order is None or F.order ** space.m > max_count:
        raise InstanceTooLargeError("enumeration is infeasible")
    members = []
    best = -1
    for coeffs in itertools.product(range(F.order), repeat=space.m):
        A = space.element(F.array(list(coeffs)))
        r = rank(F, A)
        if r > best:
            best, members = r, [A]
        elif r == best:
            members.append(A)
    return best, members


def blowup_rank_search(space: MatrixSpace, d: int, trials: int = 16, seed=0,
                       sample_size: int | None = None) -> int:
    """Best rank over random members of the degree-d blow-up; lower-bounds ``ncrk * d``."""
    F = space.field
    if space.m == 0:
        return 0
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    bu = BlowUp(space, d)
    best = 0
    for _ in range(trials):
        c = random_coeffs(F, rng, bu.m, sample_size).reshape(space.m, d, d)
        best = max(best, rank(F, bu.element(c)))
        if best == space.n * d:
            break
    return best


@dataclass
class OracleReport:
    ncrk_upper: int
    ncrk_lower: int
    rank_lower: int
    enumeration_field: str
    upper_kind: str
    blowup_ranks: dict
    shrunk: ShrunkSearch

    def as_dict(self):
        return {
            "ncrk_upper": self.ncrk_upper,
            "ncrk_lower": self.ncrk_lower,
            "rank_lower": self.rank_lower,
            "enumeration_field": self.enumeration_field,
            "upper_kind": self.upper_kind,
            "blowup_ranks": {str(k): v for k, v in self.blowup_ranks.items()},
            "best_c": self.shrunk.c,
            "subspaces_visited": self.shrunk.visited,
        }


def oracle_report(space: MatrixSpace, q: int = 2, d_cap: int = 3, trials: int = 16, seed=0) -> OracleReport:
    """Sandwich ``ncrk_lower <= ncrk <= ncrk_upper`` from brute force."""
    rng = np.random.default_rng(seed)
    native = space.field.order == q
    search = enumerate_shrunk(space, q)
    ranks = {d: blowup_rank_search(space, d, trials, rng) for d in range(1, d_cap + 1)}
    lower = max((-(-r // d) for d, r in ranks.items()), default=0)
    est = commutative_rank_estimate(space, trials, seed=rng)
    kind = "exhaustive" if native else "lifted"
    return OracleReport(space.n - search.c, lower, est.rank, f"Fp:{q}", kind, ranks, search)
