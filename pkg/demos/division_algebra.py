"""
A cyclic division algebra as d x d polynomial matrices
======================================================

With Y1^d = X the shift matrices M_k and twists N_l = Y^l diag(zeta^(i l))
span a division algebra.  Tensoring a matrix space with it forces every
rank to be a multiple of d.
"""

import numpy as np

from edmonds.cda import (
    algebra_membership_rank_check,
    cyclic_algebra_basis,
    gamma_rank,
    kummer_extension,
    twist_power_is_central,
    twist_relation_holds,
)
from edmonds.exactfield import make_unity_ring

R = make_unity_ring("Fp:10007", 2)
ext = kummer_extension(R)
dab = cyclic_algebra_basis(ext)
for k in range(2):
    for l in range(2):
        print(f"M_{k} N_{l} =", [[str(e) for e in row] for row in dab.element(k, l)])

print("rank of the stacked basis over F(X, Y):", gamma_rank(dab))
print("N_1 M_k = zeta^k M_k N_1:", all(twist_relation_holds(ext, k) for k in range(2)))
print("N_1^2 = Y^2 I:", twist_power_is_central(ext))

# d = 3 needs a cube root of unity, simulated by the ring F[x]/(x^2 + x + 1)
R3 = make_unity_ring("Fp:10007", 3)
dab3 = cyclic_algebra_basis(kummer_extension(R3))
F = R3.base
rng = np.random.default_rng(0)
ranks = []
for trial in range(30):
    basis = [F.array(rng.integers(-2, 3, (2, 2)).tolist()) for _ in range(2)]
    coeffs = {(i, t): int(rng.integers(-3, 4)) for i in range(2) for t in range(9) if rng.random() < 0.3}
    r, ok = algebra_membership_rank_check(basis, dab3, coeffs, seed=trial)
    ranks.append(r)
print("ranks of random elements at d = 3:", sorted(set(ranks)))
