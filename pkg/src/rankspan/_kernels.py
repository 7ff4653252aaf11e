"""Compiled batch kernels for small dense matrices over F_q.

Every kernel takes a stack of matrices as a uint8 array of shape (N, n, p)
with entries already reduced mod q, plus the table of inverses mod q.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def batch_rank(mats, q, inv):
    N, n, p = mats.shape
    out = np.empty(N, np.int64)
    buf = np.empty((n, p), np.int64)
    for t in range(N):
        for i in range(n):
            for j in range(p):
                buf[i, j] = mats[t, i, j]
        r = 0
        for c in range(p):
            if r == n:
                break
            piv = -1
            for i in range(r, n):
                if buf[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, p):
                    tmp = buf[r, j]
                    buf[r, j] = buf[piv, j]
                    buf[piv, j] = tmp
            s = inv[buf[r, c]]
            for j in range(c, p):
                buf[r, j] = (buf[r, j] * s) % q
            for i in range(r + 1, n):
                f = buf[i, c]
                if f != 0:
                    for j in range(c, p):
                        buf[i, j] = (buf[i, j] - f * buf[r, j]) % q
            r += 1
        out[t] = r
    return out


@njit(cache=True)
def batch_nonzero_eigenvalue(mats, q, inv):
    """Smallest lambda in 1..q-1 with det(M - lambda I) = 0, or 0 if none."""
    N, n, _ = mats.shape
    out = np.zeros(N, np.int64)
    buf = np.empty((n, n), np.int64)
    for t in range(N):
        for lam in range(1, q):
            for i in range(n):
                for j in range(n):
                    buf[i, j] = mats[t, i, j]
                buf[i, i] = (buf[i, i] - lam) % q
            singular = False
            for c in range(n):
                piv = -1
                for i in range(c, n):
                    if buf[i, c] != 0:
                        piv = i
                        break
                if piv < 0:
                    singular = True
                    break
                if piv != c:
                    for j in range(c, n):
                        tmp = buf[c, j]
                        buf[c, j] = buf[piv, j]
                        buf[piv, j] = tmp
                s = inv[buf[c, c]]
                for i in range(c + 1, n):
                    f = (buf[i, c] * s) % q
                    if f != 0:
                        for j in range(c, n):
                            buf[i, j] = (buf[i, j] - f * buf[c, j]) % q
            if singular:
                out[t] = lam
                break
    return out
