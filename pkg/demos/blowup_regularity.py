"""
Blow-up ranks come in multiples of d
====================================

Members of a blow-up can have any rank, but the best one always has rank
divisible by d.  Round-up turns a member of rank (r-1)d + k into one of rank rd.
"""

from collections import Counter

import numpy as np

from edmonds import MatrixSpace, make_field
from edmonds.linalg import rank
from edmonds.mspace import BlowUp
from edmonds.oracle import blowup_rank_search
from edmonds.roundup import round_up_rank

F = make_field("Fp:10007")
rng = np.random.default_rng(1)

space = MatrixSpace(F, 3, [F.array(rng.integers(-1, 2, (3, 3)).tolist()) for _ in range(2)])
# squash the last row so the space has a shrunk subspace and ncrk < 3
for B in space.basis:
    B[2, :] = 0

for d in (2, 3):
    bu = BlowUp(space, d)
    seen = Counter()
    for _ in range(200):
        c = F.array((rng.random((space.m, d, d)) < 0.3).astype(int).tolist())
        seen[rank(F, bu.element(c))] += 1
    print(f"d={d}: ranks of sparse members", dict(sorted(seen.items())))
    print(f"d={d}: best random member", blowup_rank_search(space, d, trials=16, seed=0))

    odd = next(r for r in sorted(seen) if r % d)
    while True:
        c = F.array((rng.random((space.m, d, d)) < 0.3).astype(int).tolist())
        A = bu.element(c)
        if rank(F, A) == odd:
            break
    out = round_up_rank(bu, A, seed=0)
    print(f"d={d}: rounded rank {odd} up to {rank(F, out)}; still in the blow-up: {bu.contains(out)}")
