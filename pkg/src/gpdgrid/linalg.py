"""Dense linear algebra over the prime field F_p on int64 numpy arrays.

Matrices here are small (module-level: a few dozen rows), so plain
Gauss-Jordan elimination with vectorized row updates is enough.
"""

from __future__ import annotations

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def asmat(A, p: int, shape=None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if shape is not None:
        A = A.reshape(shape)
    return A % p


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return (A @ B) % p


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : A x = 0}."""
    rows, cols = A.shape
    if rows == 0:
        return eye(cols)
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = zeros(cols, len(free))
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, pc in enumerate(pivots):
            N[pc, j] = (-R[i, f]) % p
    return N


def cokernel(A: np.ndarray, p: int) -> np.ndarray:
    """A surjection Q with kernel exactly im A (rows span the left null space)."""
    return nullspace(A.T, p).T.copy()


def solve(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """X with A X = B; raises if some column of B is outside im A."""
    rows, cols = A.shape
    aug = np.concatenate([A % p, B % p], axis=1)
    R, pivots = rref(aug, p)
    if any(c >= cols for c in pivots):
        raise ValueError("system is inconsistent")
    X = zeros(cols, B.shape[1])
    for i, c in enumerate(pivots):
        X[c] = R[i, cols:]
    return X
