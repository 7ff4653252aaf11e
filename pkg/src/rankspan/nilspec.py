"""Subspaces of square matrices whose elements have no nonzero eigenvalue in F_q.

Covers the dimension bound C(n, 2), the search for a row index i with
R_i(V) = {0}, the f-cycle witness used to rule out the opposite situation,
and permutations P with P V P^{-1} meeting the lower triangular space only
in 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import comb
from typing import Mapping, Sequence

import numpy as np

from . import ffmat
from .ffmat import FqMat
from .strata import element_blocks
from .subspace import MatSubspace, coordinate_subspace, intersect, lower_triangular, row_restriction
from .verdict import BudgetExceeded, NoZeroRowIndex, Status, TriangularizationNotFound, Verdict

RECURSIVE = "RECURSIVE"
EXHAUSTIVE = "EXHAUSTIVE"
MAX_EXHAUSTIVE_ORDER = 8


def _require_square(V: MatSubspace):
    if V.n != V.p:
        raise ValueError(f"need a square ambient space, got {V.n}x{V.p}")


def has_zero_spectrum_property(V: MatSubspace, budget=None) -> Verdict:
    """PASS iff no element of V has an eigenvalue in F_q other than 0.

    Checks every element against every lambda in 1..q-1 by determinant.
    FAIL carries the first offending element in enumeration order.
    """
    _require_square(V)
    params = {"n": V.n, "q": V.q, "dim": V.dim}
    try:
        for blk in element_blocks(V, budget):
            lam = ffmat.batch_nonzero_eigenvalue(blk, V.q)
            hit = np.flatnonzero(lam)
            if hit.size:
                return Verdict(
                    "zero_spectrum",
                    Status.FAIL,
                    params,
                    witness={
                        "subspace": V.to_dict(),
                        "element": blk[hit[0]].tolist(),
                        "eigenvalue": int(lam[hit[0]]),
                        "predicate": "spectrum_in_field(element) <= {0}",
                    },
                )
    except BudgetExceeded as exc:
        return Verdict(
            "zero_spectrum", Status.BUDGET_EXCEEDED, params, witness={"required": exc.required, "budget": exc.budget}
        )
    return Verdict("zero_spectrum", Status.PASS, params, counts={"elements": V.q**V.dim})


@dataclass(frozen=True)
class ZeroRowWitness:
    index: int
    restriction: MatSubspace

    def verify(self, V: MatSubspace) -> bool:
        return row_restriction(V, self.index).dim == 0 and self.restriction.dim == 0


def zero_row_indices(V: MatSubspace) -> list[int]:
    _require_square(V)
    return [i for i in range(1, V.n + 1) if row_restriction(V, i).dim == 0]


def find_zero_row_index(V: MatSubspace) -> ZeroRowWitness:
    """Smallest i with R_i(V) = {0}."""
    _require_square(V)
    for i in range(1, V.n + 1):
        R = row_restriction(V, i)
        if R.dim == 0:
            return ZeroRowWitness(i, R)
    raise NoZeroRowIndex(f"every R_i(V) is nonzero for {V!r}")


@dataclass(frozen=True)
class CycleWitness:
    f: dict
    cycle: tuple
    matrix: FqMat

    def verify(self, V: MatSubspace) -> bool:
        c = self.cycle
        if len(set(c)) != len(c):
            return False
        if any(self.f[c[k]] != c[(k + 1) % len(c)] for k in range(len(c))):
            return False
        return V.contains(self.matrix) and 1 in ffmat.spectrum_in_field(self.matrix)

    def to_dict(self) -> dict:
        return {"f": {str(k): v for k, v in self.f.items()}, "cycle": list(self.cycle), "matrix": self.matrix.tolist()}


def cycle_matrix(n: int, cycle: Sequence[int], field) -> FqMat:
    """E_{i_1,i_p} + sum_k E_{i_{k+1},i_k}."""
    a = np.zeros((n, n), dtype=np.int64)
    for k, i in enumerate(cycle):
        a[cycle[(k + 1) % len(cycle)] - 1, i - 1] = 1
    return FqMat(a, field)


def build_cycle_witness(V: MatSubspace, f: Mapping[int, int], start: int = 1) -> CycleWitness:
    """Cycle of ``f`` reached from ``start`` and the matrix it assembles in V.

    ``f`` maps each column k to a row f(k) with E_{f(k),k} in V.  The
    indicator vector of the cycle rows is fixed by the assembled matrix, so
    1 is one of its eigenvalues.
    """
    _require_square(V)
    n = V.n
    f = {int(k): int(v) for k, v in f.items()}
    if sorted(f) != list(range(1, n + 1)) or any(not 1 <= v <= n for v in f.values()):
        raise ValueError(f"f must map 1..{n} into 1..{n}")
    for k, v in f.items():
        if not V.contains(ffmat.elementary(n, n, v, k, V.field)):
            raise ValueError(f"E_{{{v},{k}}} is not in V")
    seen: dict[int, int] = {}
    path: list[int] = []
    k = start
    while k not in seen:
        seen[k] = len(path)
        path.append(k)
        k = f[k]
    cycle = tuple(path[seen[k] :])
    M = cycle_matrix(n, cycle, V.field)
    indicator = np.zeros(n, dtype=np.int64)
    indicator[[i - 1 for i in cycle]] = 1
    assert V.contains(M), "cycle matrix left V"
    assert np.array_equal((M.entries.astype(np.int64) @ indicator) % V.q, indicator), "indicator is not fixed"
    return CycleWitness(f, cycle, M)


def find_elementary_map(V: MatSubspace):
    """Some f with E_{f(k),k} in V for every column k, or None."""
    _require_square(V)
    f = {}
    for k in range(1, V.n + 1):
        rows = [i for i in range(1, V.n + 1) if V.contains(ffmat.elementary(V.n, V.n, i, k, V.field))]
        if not rows:
            return None
        f[k] = rows[0]
    return f


def gerstenhaber_bound(n: int) -> int:
    return comb(n, 2)


def check_gerstenhaber_bound(V: MatSubspace) -> Verdict:
    """dim V <= C(n, 2); call on spaces that passed the zero-spectrum check."""
    _require_square(V)
    params = {"n": V.n, "q": V.q, "dim": V.dim, "bound": gerstenhaber_bound(V.n)}
    if V.dim <= gerstenhaber_bound(V.n):
        return Verdict("gerstenhaber_bound", Status.PASS, params)
    return Verdict(
        "gerstenhaber_bound",
        Status.FAIL,
        params,
        witness={"subspace": V.to_dict(), "predicate": "dim V <= C(n, 2)"},
    )


# block structure


@dataclass(frozen=True)
class BlockDecomposition:
    A: FqMat
    L: FqMat
    alpha: int

    def assemble(self) -> FqMat:
        n = self.A.n + 1
        a = np.zeros((n, n), dtype=np.int64)
        a[:-1, :-1] = self.A.entries
        a[-1, :-1] = self.L.entries[0]
        a[-1, -1] = self.alpha
        return FqMat(a, self.A.field)


def block_decompose(M: FqMat) -> BlockDecomposition:
    """Split [[A, 0], [L, alpha]]; the last column must vanish above the corner."""
    if M.n != M.p or M.n < 2:
        raise ValueError("need a square matrix of order at least 2")
    if M.entries[:-1, -1].any():
        raise ValueError("last column is not zero above the diagonal")
    e = M.entries
    return BlockDecomposition(FqMat(e[:-1, :-1], M.field), FqMat(e[-1:, :-1], M.field), int(e[-1, -1]))


def compress_last_row_zero(M: FqMat) -> FqMat:
    """Top-left (n-1) x (n-1) block of a matrix whose last row is zero."""
    if M.n != M.p or M.n < 2:
        raise ValueError("need a square matrix of order at least 2")
    if M.entries[-1].any():
        raise ValueError("last row is not zero")
    return FqMat(M.entries[:-1, :-1], M.field)


def last_column_constrained(V: MatSubspace) -> MatSubspace:
    """W = elements of V whose last column vanishes except in the corner."""
    _require_square(V)
    n = V.n
    allowed = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if j < n or i == n]
    return intersect(V, coordinate_subspace(n, n, V.field, allowed))


def top_left_block(W: MatSubspace) -> MatSubspace:
    """{A(M) : M in W}, a subspace of Mat_{n-1}."""
    n = W.n
    if W.dim == 0:
        return MatSubspace.zero(n - 1, n - 1, W.field)
    blocks = W.basis_array.reshape(-1, n, n)[:, :-1, :-1].reshape(W.dim, -1)
    return MatSubspace(n - 1, n - 1, W.field, blocks)


def last_row_zero_part(V: MatSubspace) -> MatSubspace:
    """Elements of V with a zero last row."""
    _require_square(V)
    n = V.n
    allowed = [(i, j) for i in range(1, n) for j in range(1, n + 1)]
    return intersect(V, coordinate_subspace(n, n, V.field, allowed))


# triangularization


def conjugate_by_permutation(V: MatSubspace, sigma: Sequence[int]) -> MatSubspace:
    """P V P^{-1} with P e_k = e_{sigma(k)}: entry (i, j) moves to (sigma(i), sigma(j))."""
    _require_square(V)
    n = V.n
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{tuple(sigma)} is not a permutation of 1..{n}")
    if V.dim == 0:
        return V
    idx = np.array(sigma) - 1
    mats = V.basis_array.reshape(-1, n, n)
    out = np.zeros_like(mats)
    out[:, idx[:, None], idx[None, :]] = mats
    return MatSubspace(n, n, V.field, out.reshape(V.dim, -1))


def meets_lower_trivially(V: MatSubspace) -> bool:
    """(V ∩ T_n^-) = {0}, via injectivity of the projection onto the strictly upper entries."""
    if V.dim == 0:
        return True
    n = V.n
    upper = [i * n + j for i in range(n) for j in range(i + 1, n)]
    return ffmat.rank_array(V.basis_array[:, upper], V.q) == V.dim if upper else False


def triangularizes(V: MatSubspace, sigma: Sequence[int]) -> bool:
    """Independent re-check through the generic intersection routine."""
    W = conjugate_by_permutation(V, sigma)
    return intersect(W, lower_triangular(V.n, V.field)).dim == 0


def _compose_last(sigma_inner: Sequence[int], i: int, n: int) -> tuple[int, ...]:
    """Send i to n, then apply sigma_inner to the remaining indices in order."""
    rest = [k for k in range(1, n + 1) if k != i]
    out = [0] * n
    out[i - 1] = n
    for pos, k in enumerate(rest):
        out[k - 1] = sigma_inner[pos]
    return tuple(out)


def _recursive(V: MatSubspace) -> tuple[int, ...]:
    n = V.n
    if n == 1:
        if V.dim:
            raise TriangularizationNotFound("nonzero 1x1 space cannot avoid the diagonal")
        return (1,)
    i = find_zero_row_index(V).index
    move = _compose_last(tuple(range(1, n)), i, n)
    V1 = conjugate_by_permutation(V, move)
    W = last_column_constrained(V1)
    inner = _recursive(top_left_block(W))
    return _compose_last(inner, i, n)


def triangularizing_permutation(V: MatSubspace, mode: str = RECURSIVE) -> tuple[int, ...]:
    """A permutation sigma (1-based images) with P V P^{-1} ∩ T_n^- = {0}.

    RECURSIVE moves a zero-row index last and recurses on the top-left
    blocks of the elements whose last column vanishes above the corner.
    EXHAUSTIVE tries all n! permutations in lexicographic order.
    """
    _require_square(V)
    mode = mode.upper()
    if mode == RECURSIVE:
        try:
            sigma = _recursive(V)
        except NoZeroRowIndex as exc:
            raise TriangularizationNotFound(str(exc)) from exc
        if not meets_lower_trivially(conjugate_by_permutation(V, sigma)):
            raise TriangularizationNotFound(f"recursive construction produced {sigma}, which does not work")
        return sigma
    if mode == EXHAUSTIVE:
        if V.n > MAX_EXHAUSTIVE_ORDER:
            raise ValueError(f"exhaustive mode is limited to n <= {MAX_EXHAUSTIVE_ORDER}")
        for perm in permutations(range(1, V.n + 1)):
            if meets_lower_trivially(conjugate_by_permutation(V, perm)):
                return perm
        raise TriangularizationNotFound(f"no permutation works for {V!r}")
    raise ValueError(f"unknown mode {mode!r}")
