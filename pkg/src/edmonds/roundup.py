"""Regularity of blow-ups made constructive.

``round_up_rank`` takes a blow-up member of rank ``(r-1)d + k`` with
``0 < k < d`` and returns one of rank at least ``rd``: rewrite the matrix
over the cyclic division algebra basis, pin the coefficients to a small
sample set while keeping rank above ``(r-1)d`` (which forces ``rd``), then
rewrite back in matrix units and pin again, landing in the base field.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .cda import cyclic_algebra_basis, expand_in_gamma, kummer_extension
from .errors import (
    FieldTooSmallError,
    InternalConsistencyError,
    InvalidInputError,
    UnsupportedCharacteristicError,
)
from .exactfield import BiPoly, BiRational, UnityRing, is_field, make_unity_ring, sample_set
from .linalg import PolyMatrix, random_points, rank, specialized_rank, _random_prime_image
from .mspace import BlowUp, blowup_coordinates, embed_coeffs

log = logging.getLogger(__name__)


@dataclass
class ReductionProblem:
    """Pin ``coeffs`` to values in ``S`` keeping ``rank(sum c_t T_t) >= rank_floor``.

    ``basis_at(x0, y0)`` returns the basis matrices specialized at a point as
    an array ``(t, N, N[, k])`` over ``ring``; coefficients are base-field
    scalars or BiPoly / BiRational values over ``ring``.
    """

    ring: object
    basis_at: Callable
    coeffs: list
    rank_floor: int
    S: list
    points: int = 2
    seed: object = 0
    deterministic: bool = False
    basis_degree: int = 0
    history: list = dc_field(default_factory=list)

    @classmethod
    def from_matrices(cls, ring, mats, coeffs, rank_floor, S, **kw):
        """Basis given as nested lists of BiPoly entries (or plain scalar matrices)."""
        pms = []
        for M in mats:
            if isinstance(M, np.ndarray) and M.dtype != object:
                M = M.tolist()
            pms.append(PolyMatrix.from_entries(ring, M))
        return cls(ring, lambda x0, y0: np.stack([pm.evaluate(x0, y0) for pm in pms]),
                   list(coeffs), rank_floor, list(S), **kw)


def _eval_coeff(ring, c, x0, y0):
    """Value of a coefficient at a point, as a raw ring value."""
    if isinstance(c, (BiPoly, BiRational)):
        v = c.num.eval(x0, y0) if isinstance(c, BiRational) else c.eval(x0, y0)
        if isinstance(c, BiRational):
            den = c.den.eval(x0, y0)
            if ring.is_zero(den):
                raise ZeroDivisionError
            return _ring_div_by_scalar(ring, v, den)
        return v
    return ring.coerce(c)


def _ring_div_by_scalar(ring, v, den):
    """Divide by a denominator value; denominators here are monomials times scalars."""
    if is_field(ring):
        return ring.div(v, den)
    base = ring.base
    nz = [i for i, c in enumerate(den) if not base.is_zero(c)]
    if nz != [0]:
        raise InvalidInputError("only scalar-valued denominators can be divided in the unity ring")
    inv = base.inv(den[0])
    return tuple(base.mul(x, inv) for x in v)


def _fixed_value(ring, c, S):
    """The base scalar equal to ``c`` when ``c`` is a constant from ``S``, else None."""
    base = ring.base
    if isinstance(c, BiRational):
        if not c.is_polynomial() or c.num.degree() > 0 or c.den.degree() > 0:
            return None
        c = _eval_coeff(ring, c, base.zero, base.zero)
    elif isinstance(c, BiPoly):
        if c.degree() > 0:
            return None
        c = c.coefficient(0, 0)
    if is_field(ring):
        v = ring.coerce(c)
    else:
        raw = ring.coerce(c)
        if any(not base.is_zero(x) for x in raw[1:]):
            return None
        v = raw[0]
    return v if any(base.eq(v, s) for s in S) else None


def _to_raw_coeffs(ring, values):
    """Stack raw ring values into an array of shape (t,) or (t, k)."""
    if is_field(ring):
        return ring.array(list(values))
    return ring.base.array([list(v) for v in values])


def _combine(ring, coeffs, mats):
    """``sum coeffs[t] * mats[t]`` for raw coefficient arrays over ``ring``."""
    if is_field(ring):
        return ring.reduce(np.tensordot(coeffs, mats, axes=1))
    prod = ring.mul_arrays(coeffs[:, None, None, :], mats)
    return ring.reduce(prod.sum(axis=0))


class _Evaluation:
    """One random specialization point with its running matrix sum."""

    def __init__(self, problem, rng, x0, y0):
        ring = problem.ring
        self.ring = ring
        self.mats = problem.basis_at(x0, y0)
        vals = [_eval_coeff(ring, c, x0, y0) for c in problem.coeffs]
        self.coeffs = _to_raw_coeffs(ring, vals)
        self.total = _combine(ring, self.coeffs, self.mats)
        self.rng = rng

    def candidate(self, t, value):
        ring = self.ring
        new = ring.coerce(value)
        if is_field(ring):
            delta = ring.reduce(self.mats[t] * ring.sub(new, self.coeffs[t]))
        else:
            diff = ring.base.array(list(ring.sub(new, ring.from_vec(self.coeffs[t]))))
            delta = ring.mul_arrays(diff[None, None, :], self.mats[t])
        return ring.reduce(self.total + delta)

    def accept(self, t, value, M):
        self.total = M
        self.coeffs[t] = self.ring.to_vec(self.ring.coerce(value)) if not is_field(self.ring) \
            else self.ring.coerce(value)


def _new_evaluation(problem, rng, big):
    base = problem.ring.base
    for _ in range(100):
        x0, y0 = random_points(base, rng, 2, big)
        try:
            return _Evaluation(problem, rng, x0, y0)
        except ZeroDivisionError:
            continue
    raise FieldTooSmallError("could not find a specialization point avoiding the denominators")


def _lower_rank(ring, M, rng, big, stop_at):
    """A certified lower bound on the component-max rank of a specialized matrix."""
    base = ring.base
    if base.order is None:
        ring_p = _random_prime_image(ring, rng)
        return specialized_rank(ring_p, ring_p.base.array(M),
                                y_points=random_points(ring_p.base, rng, 1, big), stop_at=stop_at)
    return specialized_rank(ring, M, y_points=random_points(base, rng, 1, big), stop_at=stop_at)


def data_reduce(problem: ReductionProblem) -> list:
    """Replace each coefficient by the first ``s in S`` keeping the rank floor.

    Ranks are checked at a few random specializations; a specialization
    can only underestimate, so every accepted step truly keeps the floor.
    Returns the list of base-field scalars.
    """
    ring = problem.ring
    rng = problem.seed if isinstance(problem.seed, np.random.Generator) \
        else np.random.default_rng(problem.seed)
    S = list(problem.S)
    floor = int(problem.rank_floor)
    if len(S) < floor + 1:
        log.warning("sample set of size %d below floor + 1 = %d", len(S), floor + 1)
    fixed = [_fixed_value(ring, c, S) for c in problem.coeffs]
    if all(v is not None for v in fixed):
        return fixed
    if problem.deterministic:
        return _data_reduce_grid(problem, fixed, S, floor)
    big = 4096
    evals = [_new_evaluation(problem, rng, big) for _ in range(max(problem.points, 1))]
    out = list(fixed)
    for t, c in enumerate(problem.coeffs):
        if fixed[t] is not None:
            continue
        for s in S:
            ok = floor <= 0
            cands = [ev.candidate(t, s) for ev in evals]
            if not ok:
                for M in cands:
                    if _lower_rank(ring, M, rng, big, floor) >= floor:
                        ok = True
                        break
            if ok:
                for ev, M in zip(evals, cands):
                    ev.accept(t, s, M)
                out[t] = s
                problem.history.append((t, s))
                log.debug("data_reduce: coefficient %d -> %s (floor %d)", t, s, floor)
                break
        else:
            raise FieldTooSmallError(
                f"no value in S keeps rank >= {floor} at coefficient {t}", required=len(S) + 1
            )
    return out


def _degree_after_clearing(ring, coeffs, basis_degree: int) -> int:
    deg = 0
    for c in coeffs:
        if isinstance(c, BiRational):
            deg = max(deg, c.num.degree() + c.den.degree())
        elif isinstance(c, BiPoly):
            deg = max(deg, c.degree())
    return deg + basis_degree


def _data_reduce_grid(problem: ReductionProblem, fixed, S, floor):
    """Grid variant: a candidate passes iff some point of the (s+1) x (s+1) grid certifies it.

    Points avoid zero so monomial denominators never vanish; each point
    uses the exact component rank, so the answer is exact but slow.
    """
    ring = problem.ring
    base = ring.base
    probe = problem.basis_at(base.one, base.one)
    N = probe.shape[1]
    s_bound = N * _degree_after_clearing(ring, problem.coeffs, problem.basis_degree)
    grid = sample_set(base, s_bound + 1, exclude_zero=True)
    current = list(problem.coeffs)
    out = list(fixed)

    def passes(values):
        for x0 in grid:
            for y0 in grid:
                mats = problem.basis_at(x0, y0)
                raw = _to_raw_coeffs(ring, [_eval_coeff(ring, c, x0, y0) for c in values])
                if specialized_rank(ring, _combine(ring, raw, mats), stop_at=floor) >= floor:
                    return True
        return False

    for t in range(len(current)):
        if fixed[t] is not None:
            current[t] = fixed[t]
            continue
        for s in S:
            trial = current[:t] + [s] + current[t + 1:]
            if floor <= 0 or passes(trial):
                current[t] = s
                out[t] = s
                problem.history.append((t, s))
                break
        else:
            raise FieldTooSmallError(
                f"no value in S keeps rank >= {floor} at coefficient {t}", required=len(S) + 1
            )
    return out


# ---------------------------------------------------------------------------


def default_sample_set(field, n: int, d: int, size: int | None = None):
    want = size or max(n * d + 1, 64)
    if field.order is not None:
        want = min(want, field.order)
        if want < n * d + 1:
            raise FieldTooSmallError(f"{field.name} has fewer than nd+1 = {n * d + 1} elements",
                                     required=n * d + 1)
    return sample_set(field, want)


def round_up_rank(bu: BlowUp, A, S=None, *, seed=0, points: int = 2, max_rounds: int = 8,
                  deterministic: bool = False):
    """Lift a blow-up member of rank ``(r-1)d + k`` (``0 < k < d``) to rank ``>= rd``.

    Inputs whose rank is already divisible by d are returned unchanged.
    The result lies in the blow-up and its rank is checked exactly.
    """
    F, d, n = bu.field, bu.d, bu.n
    A = F.reduce(np.asarray(A))
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(max_rounds):
        rk = rank(F, A)
        if rk % d == 0:
            return A
        A = _round_once(bu, A, rk, S, rng, points, deterministic)
    rk = rank(F, A)
    if rk % d:
        raise InternalConsistencyError(f"rank {rk} still not divisible by {d} after {max_rounds} rounds")
    return A


def _round_once(bu, A, rk, S, rng, points, deterministic=False):
    F, d, n, m = bu.field, bu.d, bu.n, bu.base.m
    if F.characteristic and d % F.characteristic == 0:
        raise UnsupportedCharacteristicError(f"characteristic {F.characteristic} divides d={d}")
    target = d * (-(-rk // d))
    nu = blowup_coordinates(bu, A)
    if nu is None:
        raise InvalidInputError("matrix is not in the blow-up")
    S = list(S) if S is not None else default_sample_set(F, n, d)
    R = make_unity_ring(F, d)
    ext = kummer_extension(R)
    dab = cyclic_algebra_basis(ext)
    B = bu.base._stack
    # phase 1: coefficients over the division algebra basis
    lam = expand_in_gamma(ext, nu)
    keys = sorted(lam)

    def phase1_basis(x0, y0):
        G = dab.evaluate(x0, y0)
        return np.stack([
            np.einsum("ab,jkc->ajbkc", B[i], G[kappa * d + l]).reshape(n * d, n * d, R.k)
            for (i, kappa, l) in keys
        ])

    p1 = ReductionProblem(R, phase1_basis, [lam[k] for k in keys], target - d + 1, S,
                          points=points, seed=rng, deterministic=deterministic,
                          basis_degree=dab.delta_bound)
    s1 = data_reduce(p1)
    log.info("round_up_rank: phase 1 done (d=%d, floor %d)", d, target - d + 1)
    # phase 2: back to matrix units; nu'[i, j, k] = sum s[i, kappa, l] Gamma_{kappa l}[j, k]
    nu2 = {}
    for (i, kappa, l), s in zip(keys, s1):
        if F.is_zero(s):
            continue
        G = dab.element(kappa, l)
        for j in range(d):
            for k in range(d):
                e = G[j][k]
                if e.is_zero():
                    continue
                term = e * BiPoly.const(R, R.coerce(s))
                nu2[(i, j, k)] = term if (i, j, k) not in nu2 else nu2[(i, j, k)] + term
    keys2 = [(i, j, k) for i in range(m) for j in range(d) for k in range(d)]
    units = np.stack([
        R.lift(np.kron(B[i], _unit(F, d, j, k))) for (i, j, k) in keys2
    ])
    p2 = ReductionProblem(R, lambda x0, y0: units,
                          [nu2.get(key, BiPoly(R)) for key in keys2], target, S,
                          points=points, seed=rng, deterministic=deterministic)
    s2 = data_reduce(p2)
    coeffs = F.array(list(s2)).reshape(m, d, d)
    out = bu.element(coeffs)
    got = rank(F, out)
    if got < target:
        raise InternalConsistencyError(f"round_up_rank produced rank {got} < {target}")
    log.info("round_up_rank: rank %d -> %d at d=%d", rk, got, d)
    return out


def _unit(F, d, j, k):
    E = F.zeros((d, d))
    E[j, k] = F.one
    return E


def lift_rank(bu: BlowUp, A, d_new: int, S=None, *, seed=0, deterministic: bool = False):
    """From rank ``rd`` at degree ``d >= n`` to rank ``>= r d_new`` at degree ``d_new``.

    Each step pads the coefficients into degree ``d+1``, where rank ``rd``
    exceeds ``(r-1)(d+1)``, and rounds up.  Returns ``(blow-up, matrix)``.
    """
    F, d, n = bu.field, bu.d, bu.n
    if d < n:
        raise InvalidInputError(f"rank lifting needs d >= n (got d={d}, n={n})")
    if d_new < d:
        raise InvalidInputError("target degree below the current one")
    rk = rank(F, A)
    if rk % d:
        raise InvalidInputError(f"rank {rk} is not a multiple of d={d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    cur_bu, cur = bu, F.reduce(np.asarray(A))
    while cur_bu.d < d_new:
        nu = blowup_coordinates(cur_bu, cur)
        if nu is None:
            raise InvalidInputError("matrix is not in the blow-up")
        nxt = BlowUp(bu.base, cur_bu.d + 1)
        if F.characteristic and nxt.d % F.characteristic == 0:
            raise UnsupportedCharacteristicError(
                f"characteristic {F.characteristic} divides the intermediate degree {nxt.d}"
            )
        cur = round_up_rank(nxt, nxt.element(embed_coeffs(nu, nxt.d, F)), S, seed=rng,
                           deterministic=deterministic)
        cur_bu = nxt
    return cur_bu, cur
