import numpy as np
from edmonds.exactfield import QQ, make_field
from edmonds.mspace import MatrixSpace

F7 = make_field("Fp:7")
F10007 = make_field("Fp:10007")

# criterion number -> PASS/FAIL line, filled by the acceptance suite
ACCEPTANCE = {}


def skew_basis(F, n=3):
    mats = []
    for a in range(n):
        for b in range(a + 1, n):
            M = np.zeros((n, n), dtype=np.int64)
            M[a, b], M[b, a] = 1, -1
            mats.append(F.array(M.tolist()))
    return mats


def skew_space(F=F10007, n=3):
    return MatrixSpace(F, n, skew_basis(F, n))


def unit(F, n, a, b):
    M = F.zeros((n, n))
    M[a, b] = F.one
    return M


def random_space(F, rng, n, m, low=-3, high=4):
    return MatrixSpace(F, n, [F.array(rng.integers(low, high, (n, n)).tolist()) for _ in range(m)])


def roots_of_unity_components(p, d):
    """Elements of F_p of exact multiplicative order d, found by exhaustion."""
    out = []
    for z in range(1, p):
        if pow(z, d, p) == 1 and all(pow(z, e, p) != 1 for e in range(1, d)):
            out.append(z)
    return out


def components(R):
    """Homomorphisms R -> F_p given by the roots of the modulus (exhaustive search)."""
    p = R.base.p
    out = []
    for z in range(p):
        val = 0
        for c in reversed(R.modulus):
            val = (val * z + c) % p
        if val == 0:
            out.append(z)
    return out


def at_root(R, a, z):
    p = R.base.p
    return sum(int(c) * pow(z, i, p) for i, c in enumerate(a)) % p
