"""Exact arithmetic over small prime fields and dense matrices over them.

Matrices are immutable.  Single-matrix routines are plain Python (with a
bit-packed XOR path for F_2); the ``batch_*`` helpers push stacks of
matrices through compiled kernels and are what the enumeration code uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

SUPPORTED_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class Fq:
    """The prime field F_q."""

    q: int

    def __post_init__(self):
        if self.q not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported field size {self.q}; expected one of {SUPPORTED_PRIMES}")

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.q - 2, self.q)

    @property
    def elements(self) -> range:
        return range(self.q)

    def __repr__(self):
        return f"F{self.q}"


@lru_cache(maxsize=None)
def inverse_table(q: int) -> np.ndarray:
    """Array ``t`` with ``t[a] * a == 1 mod q`` (``t[0]`` is 0)."""
    t = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        t[a] = pow(a, q - 2, q)
    t.setflags(write=False)
    return t


def _as_field(field) -> Fq:
    return field if isinstance(field, Fq) else Fq(int(field))


class FqMat:
    """Dense n x p matrix over F_q.

    ``entries`` is a read-only uint8 array; every value lies in ``[0, q)``.
    """

    __slots__ = ("field", "entries")

    def __init__(self, entries, field):
        field = _as_field(field)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError(f"matrix entries must be a non-empty 2-D array, got shape {arr.shape}")
        arr = (arr % field.q).astype(np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FqMat is immutable")

    @classmethod
    def from_vector(cls, vec, n: int, p: int, field) -> FqMat:
        """Inverse of :meth:`vec` (row-major)."""
        return cls(np.asarray(vec).reshape(n, p), field)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def p(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def vec(self) -> np.ndarray:
        """Row-major vectorization in F_q^{n p}."""
        return self.entries.reshape(-1)

    def row(self, i: int) -> np.ndarray:
        """The i-th row (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"row index {i} out of range 1..{self.n}")
        return self.entries[i - 1]

    def __getitem__(self, idx):
        return self.entries[idx]

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def _check_compatible(self, other: FqMat):
        if not isinstance(other, FqMat):
            return NotImplemented
        if other.q != self.q:
            raise ValueError(f"field mismatch: F{self.q} vs F{other.q}")
        return None

    def __add__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return FqMat(self.entries.astype(np.int64) + other.entries, self.field)

    def __sub__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return FqMat(self.entries.astype(np.int64) - other.entries, self.field)

    def __neg__(self):
        return FqMat(-self.entries.astype(np.int64), self.field)

    def scale(self, c: int) -> FqMat:
        return FqMat(self.entries.astype(np.int64) * (c % self.q), self.field)

    def __matmul__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        if self.p != other.n:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        return FqMat(self.entries.astype(np.int64) @ other.entries.astype(np.int64), self.field)

    def __eq__(self, other):
        if not isinstance(other, FqMat):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.q, self.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"FqMat(q={self.q}, {self.tolist()})"

    def to_dict(self) -> dict:
        return {"q": self.q, "rows": self.n, "cols": self.p, "entries": self.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> FqMat:
        q = int(d["q"])
        entries = d["entries"]
        m = cls(entries, q)
        if "rows" in d and "cols" in d and m.shape != (int(d["rows"]), int(d["cols"])):
            raise ValueError(f"declared shape ({d['rows']}, {d['cols']}) does not match entries {m.shape}")
        if any(not 0 <= x < q for row in entries for x in row):
            raise ValueError(f"matrix entries must lie in [0, {q})")
        return m


# constructors


def zeros(n: int, p: int, field) -> FqMat:
    return FqMat(np.zeros((n, p), dtype=np.int64), field)


def identity(n: int, field) -> FqMat:
    return FqMat(np.eye(n, dtype=np.int64), field)


def elementary(n: int, p: int, i: int, j: int, field) -> FqMat:
    """E_{i,j}: the n x p matrix with a single 1 at (i, j), 1-based."""
    if not (1 <= i <= n and 1 <= j <= p):
        raise IndexError(f"position ({i}, {j}) outside a {n}x{p} matrix")
    a = np.zeros((n, p), dtype=np.int64)
    a[i - 1, j - 1] = 1
    return FqMat(a, field)


def block_identity(n: int, p: int, k: int, field) -> FqMat:
    """J_k = [[I_k, 0], [0, 0]] in Mat_{n,p}."""
    if not 0 <= k <= min(n, p):
        raise ValueError(f"k={k} out of range for {n}x{p}")
    a = np.zeros((n, p), dtype=np.int64)
    a[range(k), range(k)] = 1
    return FqMat(a, field)


def permutation_matrix(sigma: Sequence[int], field) -> FqMat:
    """Matrix P with P e_k = e_{sigma(k)}; ``sigma`` is 1-based images of 1..n."""
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{tuple(sigma)} is not a permutation of 1..{n}")
    a = np.zeros((n, n), dtype=np.int64)
    for k, s in enumerate(sigma):
        a[s - 1, k] = 1
    return FqMat(a, field)


def transpose(m: FqMat) -> FqMat:
    return FqMat(m.entries.T, m.field)


# single-matrix elimination


def _rank_f2(rows: np.ndarray) -> int:
    packed = [int("".join(map(str, r)), 2) for r in rows.tolist()]
    rank = 0
    while packed:
        pivot = packed.pop()
        if pivot == 0:
            continue
        rank += 1
        top = pivot.bit_length() - 1
        packed = [x ^ pivot if (x >> top) & 1 else x for x in packed]
    return rank


def rref(m: FqMat) -> FqMat:
    """Reduced row echelon form."""
    R, _ = rref_array(m.entries, m.q)
    out = np.zeros(m.shape, dtype=np.int64)
    out[: R.shape[0]] = R
    return FqMat(out, m.field)


def rank(m: FqMat) -> int:
    if m.q == 2:
        return _rank_f2(m.entries)
    return len(rref_array(m.entries, m.q)[1])


def det(m: FqMat) -> int:
    if m.n != m.p:
        raise ValueError(f"determinant of non-square {m.shape} matrix")
    q = m.q
    a = m.entries.astype(np.int64).tolist()
    n = m.n
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d = d * a[c][c] % q
        s = pow(a[c][c], q - 2, q)
        for i in range(c + 1, n):
            f = a[i][c] * s % q
            if f:
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[c])]
    return d % q


def is_invertible(m: FqMat) -> bool:
    return m.n == m.p and det(m) != 0


def inverse(m: FqMat) -> FqMat:
    if not is_invertible(m):
        raise ValueError("matrix is singular")
    aug = np.hstack([m.entries, np.eye(m.n, dtype=np.uint8)])
    R, _ = rref_array(aug, m.q)
    return FqMat(R[:, m.n :], m.field)


def spectrum_in_field(m: FqMat) -> set[int]:
    """Eigenvalues of ``m`` lying in F_q itself."""
    if m.n != m.p:
        raise ValueError(f"spectrum of non-square {m.shape} matrix")
    eye = np.eye(m.n, dtype=np.int64)
    return {lam for lam in range(m.q) if det(FqMat(m.entries.astype(np.int64) - lam * eye, m.field)) == 0}


def random_matrix(n: int, p: int, field, rng: np.random.Generator) -> FqMat:
    field = _as_field(field)
    return FqMat(rng.integers(0, field.q, size=(n, p)), field)


def random_invertible(n: int, field, rng: np.random.Generator) -> FqMat:
    field = _as_field(field)
    while True:
        m = random_matrix(n, n, field, rng)
        if is_invertible(m):
            return m


# array-level helpers (rows are vectors in F_q^m)


def rref_array(A, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a 2-D array mod q, with its pivot columns.

    Vectorized over rows, so it stays cheap for tall inputs (many candidate
    vectors, few coordinates).
    """
    R = np.array(A, dtype=np.int64) % q
    if R.ndim != 2:
        raise ValueError("rref_array expects a 2-D array")
    nrows, ncols = R.shape
    inv = inverse_table(q)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * inv[R[r, c]]) % q
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit] = (R[hit] - np.outer(col[hit], R[r])) % q
        pivots.append(c)
        r += 1
    return R[:r].astype(np.uint8) if nrows else R.astype(np.uint8), pivots


def rank_array(A, q: int) -> int:
    return len(rref_array(A, q)[1])


def nullspace_array(A, q: int, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0} in F_q^ncols."""
    A = np.asarray(A)
    if ncols is None:
        ncols = A.shape[1]
    if A.size == 0:
        return np.eye(ncols, dtype=np.uint8)
    R, pivots = rref_array(A, q)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for row, pc in enumerate(pivots):
            out[k, pc] = (-int(R[row, f])) % q
    return out.astype(np.uint8)


def solve_array(A, b, q: int) -> np.ndarray | None:
    """One solution x of x A = b (x a row vector), or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    k, m = A.shape
    aug = np.hstack([A.T, np.asarray(b, dtype=np.int64).reshape(m, 1)])
    R, pivots = rref_array(aug, q)
    if k in pivots:
        return None
    x = np.zeros(k, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = R[row, k]
    return x


def solve_many(A, B, q: int) -> np.ndarray:
    """X with X A = B for independent rows A; raises ValueError if some row of B is outside the row space."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64).reshape(-1, A.shape[1])
    k = A.shape[0]
    aug = np.hstack([A.T, B.T])
    R, pivots = rref_array(aug, q)
    if pivots != list(range(k)) or len(R) > k:
        raise ValueError("right-hand side outside the row space, or dependent rows")
    return R[:k, k:].T.astype(np.int64)


def batch_rank(mats, q: int) -> np.ndarray:
    """Ranks of a stack of matrices of shape (N, n, p)."""
    mats = np.ascontiguousarray(mats, dtype=np.uint8)
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return _kernels.batch_rank(mats, q, inverse_table(q))


def batch_nonzero_eigenvalue(mats, q: int) -> np.ndarray:
    """Per matrix, the smallest nonzero in-field eigenvalue, or 0 if there is none."""
    mats = np.ascontiguousarray(mats, dtype=np.uint8)
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if mats.shape[1] != mats.shape[2]:
        raise ValueError("eigenvalues need square matrices")
    return _kernels.batch_nonzero_eigenvalue(mats, q, inverse_table(q))


def encode(vectors, q: int) -> np.ndarray:
    """Integer code of each row vector, most significant coordinate first."""
    vectors = np.asarray(vectors, dtype=np.int64)
    m = vectors.shape[-1]
    weights = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return vectors @ weights


def decode(codes, m: int, q: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (m,), dtype=np.uint8)
    c = codes.copy()
    for j in range(m - 1, -1, -1):
        out[..., j] = c % q
        c //= q
    return out


def all_vectors(d: int, q: int) -> np.ndarray:
    """All q**d coefficient tuples in lexicographic order, shape (q**d, d)."""
    return decode(np.arange(q**d, dtype=np.int64), d, q)


@lru_cache(maxsize=32)
def rank_table(n: int, p: int, q: int) -> np.ndarray:
    """Rank of every n x p matrix, indexed by :func:`encode` of its vectorization."""
    m = n * p
    if q**m > 1 << 22:
        raise ValueError(f"rank table for {n}x{p} over F{q} is too large")
    t = batch_rank(decode(np.arange(q**m), m, q).reshape(-1, n, p), q).astype(np.uint8)
    t.setflags(write=False)
    return t


def ranks_of(mats, q: int) -> np.ndarray:
    """Ranks of a stack (N, n, p), via a lookup table when one is affordable."""
    mats = np.asarray(mats)
    N, n, p = mats.shape
    if q ** (n * p) <= 1 << 16:
        return rank_table(n, p, q)[encode(mats.reshape(N, n * p), q)].astype(np.int64)
    return batch_rank(mats, q)


def stack(mats: Iterable[FqMat]) -> np.ndarray:
    return np.stack([m.entries for m in mats])
