"""
The 3x3 skew-symmetric space, step by step
==========================================

Every member of the space is singular, yet blowing up by 3 reaches full rank.
"""

import numpy as np

from edmonds import MatrixSpace, make_field
from edmonds.linalg import rank
from edmonds.mspace import BlowUp, commutative_rank_estimate
from edmonds.ncrank import increment_rank, ncrk_main
from edmonds.wong import second_wong

F = make_field("Fp:10007")


def skew(a, b):
    M = np.zeros((3, 3), dtype=np.int64)
    M[a, b], M[b, a] = 1, -1
    return F.array(M.tolist())


space = MatrixSpace(F, 3, [skew(0, 1), skew(0, 2), skew(1, 2)])

# odd skew matrices have even rank, so 2 is the best a single member can do
est = commutative_rank_estimate(space, trials=16, seed=0)
print("commutative rank:", est.rank, "failure bound", est.failure_bound)

# Wong sequence for A = E12 - E21: ker A = <e3>, then <e1, e2>, then all of F^3
A = space.basis[0]
wong = second_wong(A, space)
print("stage dimensions:", wong.dims(), "escapes at step", wong.first_escape)
for C, v in zip(wong.chain.matrices, wong.chain.vectors):
    print("  chain vector", v.tolist(), "pushed by", C.tolist())

# the escaping chain builds A (x) I + C' at degree 3, then gets rounded up
inc = increment_rank(BlowUp(space, 1), A, 2, d_prime=3)
print("blow-up degree", inc.blowup.d, "rank", rank(F, inc.matrix), "of", 3 * inc.blowup.d)

# the driver does the same and packages the certificate
res = ncrk_main(space, seed=0)
print("ncrk:", res.ncrk, "trace:", res.trace)
print("certificate verifies:", res.verify(space))
