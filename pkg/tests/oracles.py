"""Slow, independent reference computations used as test oracles.

Nothing here imports lielab: plain Python lists, Fractions and modular
integers, written for clarity rather than speed.
"""

from fractions import Fraction
from itertools import product


def _normalize(x, p):
    return x % p if p else Fraction(x)


def _inv(x, p):
    return pow(int(x), -1, p) if p else 1 / Fraction(x)


def rank(rows, p):
    """Rank of a list of rows over GF(p) (p = 0 for Q) by schoolbook elimination."""
    m = [[_normalize(c, p) for c in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = _inv(m[r][c], p)
        m[r] = [_normalize(v * inv, p) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                k = m[i][c]
                m[i] = [_normalize(a - k * b, p) for a, b in zip(m[i], m[r])]
        r += 1
    return r


def matmul(A, B, p):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return [[_normalize(sum(A[i][t] * B[t][j] for t in range(k)), p) for j in range(m)] for i in range(n)]


def commutator(A, B, p):
    AB, BA = matmul(A, B, p), matmul(B, A, p)
    return [[_normalize(a - b, p) for a, b in zip(r, s)] for r, s in zip(AB, BA)]


def mat_pow(A, k, p):
    n = len(A)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = matmul(out, A, p)
    return out


def is_zero_matrix(A):
    return all(c == 0 for r in A for c in r)


def structure_product(structure, dim, u, v, p):
    """u * v straight from (i, j, k, c) tuples."""
    out = [0] * dim
    for i, j, k, c in structure:
        out[k] += int(c) * int(u[i]) * int(v[j]) if p else Fraction(c) * u[i] * v[j]
    return [_normalize(x, p) for x in out]


def brute_sandwiches(structure, dim, p):
    """All nonzero x with [x, [x, b_i]] = 0 for every basis b_i, by full enumeration."""
    found = []
    basis = [[int(i == j) for j in range(dim)] for i in range(dim)]
    for x in product(range(p), repeat=dim):
        if not any(x):
            continue
        if all(not any(structure_product(structure, dim, x, structure_product(structure, dim, x, b, p), p))
               for b in basis):
            found.append(tuple(x))
    return sorted(found)


def ad_matrix_from_structure(structure, dim, x, p):
    """Column j is [x, b_j]."""
    cols = []
    for j in range(dim):
        b = [int(t == j) for t in range(dim)]
        cols.append(structure_product(structure, dim, x, b, p))
    return [[cols[j][i] for j in range(dim)] for i in range(dim)]
