"""Linear subspaces of Mat_{n,p}(F_q) stored by a canonical basis.

A matrix is identified with its row-major vectorization in F_q^{n p}; a
subspace keeps the reduced row echelon form of a spanning set of such
vectors, so two equal subspaces always carry identical bases.
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

import numpy as np

from . import ffmat
from .ffmat import Fq, FqMat


class MatSubspace:
    """A linear subspace V of Mat_{n,p}(F_q)."""

    __slots__ = ("field", "n", "p", "basis_array", "pivots")

    def __init__(self, n: int, p: int, field, vectors=None):
        field = field if isinstance(field, Fq) else Fq(int(field))
        if n < 1 or p < 1:
            raise ValueError(f"ambient shape must be positive, got {n}x{p}")
        m = n * p
        if vectors is None or len(vectors) == 0:
            R, piv = np.zeros((0, m), dtype=np.uint8), []
        else:
            vectors = np.asarray(vectors)
            if vectors.ndim != 2 or vectors.shape[1] != m:
                raise ValueError(f"expected vectors of length {m}, got shape {vectors.shape}")
            R, piv = ffmat.rref_array(vectors, field.q)
        R = np.ascontiguousarray(R, dtype=np.uint8)
        R.setflags(write=False)
        for name, value in (("field", field), ("n", n), ("p", p), ("basis_array", R), ("pivots", tuple(piv))):
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("MatSubspace is immutable")

    @classmethod
    def from_basis(cls, mats: Sequence[FqMat], n: int | None = None, p: int | None = None, field=None) -> MatSubspace:
        """Span of ``mats``.  Pass the ambient shape explicitly when ``mats`` may be empty."""
        mats = list(mats)
        if not mats:
            if n is None or p is None or field is None:
                raise ValueError("empty basis needs an explicit ambient shape and field")
            return cls(n, p, field)
        first = mats[0]
        for m in mats:
            if m.q != first.q:
                raise ValueError(f"field mismatch: F{m.q} vs F{first.q}")
            if m.shape != first.shape:
                raise ValueError(f"shape mismatch: {m.shape} vs {first.shape}")
        if (n is not None and n != first.n) or (p is not None and p != first.p):
            raise ValueError("basis shape disagrees with the declared ambient shape")
        if field is not None and Fq(field.q if isinstance(field, Fq) else field) != first.field:
            raise ValueError("basis field disagrees with the declared field")
        return cls(first.n, first.p, first.field, np.stack([m.vec() for m in mats]))

    @classmethod
    def full(cls, n: int, p: int, field) -> MatSubspace:
        return cls(n, p, field, np.eye(n * p, dtype=np.uint8))

    @classmethod
    def zero(cls, n: int, p: int, field) -> MatSubspace:
        return cls(n, p, field)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def ambient_dim(self) -> int:
        return self.n * self.p

    @property
    def dim(self) -> int:
        return self.basis_array.shape[0]

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    @property
    def basis(self) -> list[FqMat]:
        return [FqMat.from_vector(v, self.n, self.p, self.field) for v in self.basis_array]

    def _check_same_ambient(self, other: MatSubspace):
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise ValueError(
                f"ambient mismatch: Mat_{{{self.n},{self.p}}}(F{self.q}) vs Mat_{{{other.n},{other.p}}}(F{other.q})"
            )

    def contains(self, m: FqMat) -> bool:
        if (m.n, m.p, m.q) != (self.n, self.p, self.q):
            raise ValueError(f"matrix of shape {m.shape} over F{m.q} is not in this ambient space")
        return self.contains_vectors(m.vec()[None, :])[0]

    def __contains__(self, m: FqMat) -> bool:
        return self.contains(m)

    def contains_vectors(self, vecs) -> np.ndarray:
        """Membership of each row vector, by reduction against the echelon basis."""
        return ~self.reduce(vecs).any(axis=1)

    def reduce(self, vecs) -> np.ndarray:
        """Reduce row vectors modulo V: the result vanishes on all pivot columns."""
        q = self.q
        out = np.array(vecs, dtype=np.int64, ndmin=2) % q
        for row, pc in enumerate(self.pivots):
            coef = out[:, pc].copy()
            if coef.any():
                out = (out - np.outer(coef, self.basis_array[row])) % q
        return out.astype(np.uint8)

    def annihilator(self) -> np.ndarray:
        """Rows y spanning {y : <y, v> = 0 for all v in V} (standard dot product)."""
        return ffmat.nullspace_array(self.basis_array, self.q, self.ambient_dim)

    def coordinates(self, m: FqMat) -> np.ndarray:
        """Coefficients of ``m`` against the canonical basis."""
        if not self.contains(m):
            raise ValueError("matrix is not in the subspace")
        return np.array([m.vec()[pc] for pc in self.pivots], dtype=np.int64)

    def is_subspace_of(self, other: MatSubspace) -> bool:
        self._check_same_ambient(other)
        return bool(other.contains_vectors(self.basis_array).all()) if self.dim else True

    def __le__(self, other: MatSubspace) -> bool:
        return self.is_subspace_of(other)

    def __eq__(self, other):
        if not isinstance(other, MatSubspace):
            return NotImplemented
        return (self.n, self.p, self.q) == (other.n, other.p, other.q) and np.array_equal(
            self.basis_array, other.basis_array
        )

    def __hash__(self):
        return hash((self.n, self.p, self.q, self.basis_array.tobytes()))

    def __repr__(self):
        return f"MatSubspace(Mat_{{{self.n},{self.p}}}(F{self.q}), dim={self.dim})"

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "rows": self.n,
            "cols": self.p,
            "basis": [v.reshape(self.n, self.p).tolist() for v in self.basis_array],
        }

    @classmethod
    def from_dict(cls, d: dict) -> MatSubspace:
        q, n, p = int(d["q"]), int(d["rows"]), int(d["cols"])
        mats = [FqMat.from_dict({"q": q, "rows": n, "cols": p, "entries": e}) for e in d.get("basis", [])]
        return cls.from_basis(mats, n, p, q)


def from_basis(mats, n=None, p=None, field=None) -> MatSubspace:
    return MatSubspace.from_basis(mats, n, p, field)


def span_vectors(n: int, p: int, field, vectors) -> MatSubspace:
    return MatSubspace(n, p, field, vectors)


def dim(V: MatSubspace) -> int:
    return V.dim


def codim(V: MatSubspace) -> int:
    return V.codim


def contains(V: MatSubspace, m: FqMat) -> bool:
    return V.contains(m)


def subspace_sum(V: MatSubspace, W: MatSubspace) -> MatSubspace:
    V._check_same_ambient(W)
    return MatSubspace(V.n, V.p, V.field, np.vstack([V.basis_array, W.basis_array]))


def intersect(V: MatSubspace, W: MatSubspace) -> MatSubspace:
    """V ∩ W as the common kernel of both annihilators."""
    V._check_same_ambient(W)
    ann = np.vstack([V.annihilator(), W.annihilator()])
    return MatSubspace(V.n, V.p, V.field, ffmat.nullspace_array(ann, V.q, V.ambient_dim))


def coordinate_subspace(n: int, p: int, field, positions: Iterable[tuple[int, int]]) -> MatSubspace:
    """Matrices supported on the given (1-based) positions."""
    vecs = [ffmat.elementary(n, p, i, j, field).vec() for i, j in positions]
    return MatSubspace(n, p, field, np.array(vecs) if vecs else None)


def equiv_act(P: FqMat, V: MatSubspace, Q: FqMat) -> MatSubspace:
    """{P M Q : M in V}."""
    if P.shape != (V.n, V.n) or Q.shape != (V.p, V.p):
        raise ValueError(f"need P of order {V.n} and Q of order {V.p}")
    if P.q != V.q or Q.q != V.q:
        raise ValueError("field mismatch")
    if not (ffmat.is_invertible(P) and ffmat.is_invertible(Q)):
        raise ValueError("P and Q must be invertible")
    if V.dim == 0:
        return V
    mats = V.basis_array.reshape(-1, V.n, V.p).astype(np.int64)
    images = (P.entries.astype(np.int64) @ mats @ Q.entries.astype(np.int64)) % V.q
    return MatSubspace(V.n, V.p, V.field, images.reshape(V.dim, -1))


def conjugate(P: FqMat, V: MatSubspace) -> MatSubspace:
    """P V P^{-1}."""
    return equiv_act(P, V, ffmat.inverse(P))


def _transpose_vectors(vecs: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(vecs).reshape(-1, n, n).transpose(0, 2, 1).reshape(len(vecs), -1)


def trace_orthogonal(V: MatSubspace) -> MatSubspace:
    """Orthogonal of V for the trace form b(A, B) = tr(AB).

    tr(AB) = <vec(A), vec(B^T)>, so V^⊥ is the transpose of the standard
    annihilator.
    """
    if V.n != V.p:
        raise ValueError("trace orthogonal is only defined for square ambient spaces")
    ann = V.annihilator()
    return MatSubspace(V.n, V.p, V.field, _transpose_vectors(ann, V.n) if len(ann) else None)


def row_restriction(V: MatSubspace, i: int) -> MatSubspace:
    """R_i(V): elements of V whose rows other than row i all vanish."""
    if not 1 <= i <= V.n:
        raise IndexError(f"row index {i} out of range 1..{V.n}")
    return intersect(V, coordinate_subspace(V.n, V.p, V.field, [(i, j) for j in range(1, V.p + 1)]))


def column_restriction(V: MatSubspace, r: int) -> MatSubspace:
    """W = {M in Mat_{n,r} : [M | 0] in V}."""
    if not 1 <= r <= V.p:
        raise ValueError(f"r={r} out of range 1..{V.p}")
    support = coordinate_subspace(V.n, V.p, V.field, [(i, j) for i in range(1, V.n + 1) for j in range(1, r + 1)])
    inter = intersect(V, support)
    left = inter.basis_array.reshape(-1, V.n, V.p)[:, :, :r].reshape(inter.dim, -1)
    return MatSubspace(V.n, r, V.field, left if inter.dim else None)


def embed_columns(m: FqMat, p: int) -> FqMat:
    """[m | 0] with p columns in total."""
    if m.p > p:
        raise ValueError("cannot embed into fewer columns")
    a = np.zeros((m.n, p), dtype=np.int64)
    a[:, : m.p] = m.entries
    return FqMat(a, m.field)


def random_subspace(n: int, p: int, field, codim: int, rng: np.random.Generator) -> MatSubspace:
    """Joint kernel of ``codim`` random independent linear functionals."""
    field = field if isinstance(field, Fq) else Fq(int(field))
    m = n * p
    if not 0 <= codim <= m:
        raise ValueError(f"codim {codim} out of range 0..{m}")
    rows: list[np.ndarray] = []
    while len(rows) < codim:
        cand = rng.integers(0, field.q, size=m)
        if ffmat.rank_array(np.array(rows + [cand]), field.q) == len(rows) + 1:
            rows.append(cand)
    if not rows:
        return MatSubspace.full(n, p, field)
    return MatSubspace(n, p, field, ffmat.nullspace_array(np.array(rows), field.q, m))


def random_subspace_of(V: MatSubspace, d: int, rng: np.random.Generator) -> MatSubspace:
    """A random d-dimensional subspace of V (uniform coefficient draws, rejection on dependence)."""
    if not 0 <= d <= V.dim:
        raise ValueError(f"d={d} out of range 0..{V.dim}")
    while True:
        coeffs = rng.integers(0, V.q, size=(d, V.dim))
        W = MatSubspace(V.n, V.p, V.field, (coeffs @ V.basis_array.astype(np.int64)) % V.q if d else None)
        if W.dim == d:
            return W


# named spaces


def upper_triangular(n: int, field) -> MatSubspace:
    """T_n^+: upper triangular matrices (diagonal included)."""
    return coordinate_subspace(n, n, field, [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)])


def strictly_upper_triangular(n: int, field) -> MatSubspace:
    """T_n^{++}: zeros on and below the diagonal."""
    return coordinate_subspace(n, n, field, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def lower_triangular(n: int, field) -> MatSubspace:
    """T_n^-: lower triangular matrices (diagonal included)."""
    return coordinate_subspace(n, n, field, [(i, j) for i in range(1, n + 1) for j in range(1, i + 1)])


def sl2_f2() -> MatSubspace:
    """Trace-zero 2x2 matrices over F_2."""
    f = Fq(2)
    gens = [ffmat.identity(2, f), FqMat([[1, 1], [0, 1]], f), FqMat([[1, 0], [1, 1]], f)]
    return MatSubspace.from_basis(gens)


def trace_zero(n: int, field) -> MatSubspace:
    return trace_orthogonal(MatSubspace.from_basis([ffmat.identity(n, field)]))


NAMED_SPACES = ("sl2_f2", "trace_zero", "t_upper", "t_strict_upper", "t_lower", "jk", "full", "zero")


def named_space(name: str, n: int = 2, p: int | None = None, k: int = 1, field=2) -> MatSubspace:
    """Look up one of the standard spaces by name.

    ``jk`` is the line spanned by J_k = [[I_k, 0], [0, 0]] in Mat_{n,p}.
    """
    p = n if p is None else p
    if name == "sl2_f2":
        return sl2_f2()
    if name == "trace_zero":
        return trace_zero(n, field)
    if name == "t_upper":
        return upper_triangular(n, field)
    if name == "t_strict_upper":
        return strictly_upper_triangular(n, field)
    if name == "t_lower":
        return lower_triangular(n, field)
    if name == "jk":
        return MatSubspace.from_basis([ffmat.block_identity(n, p, k, field)])
    if name == "full":
        return MatSubspace.full(n, p, field)
    if name == "zero":
        return MatSubspace.zero(n, p, field)
    raise KeyError(f"unknown space {name!r}; known: {', '.join(NAMED_SPACES)}")


class HyperplaneClass(str, enum.Enum):
    SL2_CLASS = "SL2_CLASS"
    T2PLUS_CLASS = "T2PLUS_CLASS"


def classify_hyperplane_2x2_F2(H: MatSubspace) -> HyperplaneClass:
    """Equivalence class of a hyperplane of Mat_2(F_2).

    The trace-orthogonal of H holds a single nonzero matrix C; H is
    equivalent to sl_2(F_2) when C is invertible and to T_2^+(F_2) otherwise.
    """
    if (H.q, H.n, H.p) != (2, 2, 2):
        raise ValueError("classifier only applies to Mat_2(F_2)")
    if H.dim != 3:
        raise ValueError(f"expected a hyperplane (dim 3), got dim {H.dim}")
    (C,) = trace_orthogonal(H).basis
    return HyperplaneClass.SL2_CLASS if ffmat.rank(C) == 2 else HyperplaneClass.T2PLUS_CLASS
