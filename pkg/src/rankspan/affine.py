"""Affine subspaces M_0 + H of Mat_{n,p}(F_q) and their minimum rank."""

from __future__ import annotations

import warnings
from math import comb
from typing import Iterator

import numpy as np

from . import ffmat, grassmann
from .ffmat import Fq, FqMat
from .strata import check_budget, element_blocks, span_of_rank
from .subspace import MatSubspace, equiv_act
from .verdict import BudgetExceeded, Status, Verdict, default_budget

CONSTRUCT = "CONSTRUCT"
EXHAUSTIVE = "EXHAUSTIVE"


class AffineMatSubspace:
    """Coset ``point + direction``.

    The stored point is the canonical representative: ``point`` reduced
    modulo the direction, so equal cosets hold identical data.
    """

    __slots__ = ("point", "direction")

    def __init__(self, point: FqMat, direction: MatSubspace):
        if (point.n, point.p, point.q) != (direction.n, direction.p, direction.q):
            raise ValueError("point and direction live in different ambient spaces")
        canon = FqMat.from_vector(direction.reduce(point.vec())[0], point.n, point.p, point.field)
        object.__setattr__(self, "point", canon)
        object.__setattr__(self, "direction", direction)

    def __setattr__(self, name, value):
        raise AttributeError("AffineMatSubspace is immutable")

    @property
    def n(self) -> int:
        return self.direction.n

    @property
    def p(self) -> int:
        return self.direction.p

    @property
    def q(self) -> int:
        return self.direction.q

    @property
    def field(self) -> Fq:
        return self.direction.field

    @property
    def dim(self) -> int:
        return self.direction.dim

    @property
    def codim(self) -> int:
        return self.direction.codim

    def is_linear(self) -> bool:
        return not self.point.entries.any()

    def contains(self, m: FqMat) -> bool:
        return self.direction.contains(m - self.point)

    def element_blocks(self, budget=None) -> Iterator[np.ndarray]:
        shift = self.point.entries.astype(np.int64)
        for blk in element_blocks(self.direction, budget):
            yield ((blk + shift) % self.q).astype(np.uint8)

    def elements(self, budget=None) -> Iterator[FqMat]:
        for blk in self.element_blocks(budget):
            for a in blk:
                yield FqMat(a, self.field)

    def linear_span(self) -> MatSubspace:
        """Vect(point + direction) = direction + span{point}."""
        return MatSubspace(self.n, self.p, self.field, np.vstack([self.direction.basis_array, self.point.vec()[None]]))

    def equiv_act(self, P: FqMat, Q: FqMat) -> AffineMatSubspace:
        return AffineMatSubspace(P @ self.point @ Q, equiv_act(P, self.direction, Q))

    def __eq__(self, other):
        if not isinstance(other, AffineMatSubspace):
            return NotImplemented
        return self.direction == other.direction and self.point == other.point

    def __hash__(self):
        return hash((self.direction, self.point))

    def __repr__(self):
        return f"AffineMatSubspace(Mat_{{{self.n},{self.p}}}(F{self.q}), dim={self.dim}, linear={self.is_linear()})"

    def to_dict(self) -> dict:
        d = self.direction.to_dict()
        d["point"] = self.point.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> AffineMatSubspace:
        direction = MatSubspace.from_dict(d)
        point = FqMat.from_dict({"q": d["q"], "rows": d["rows"], "cols": d["cols"], "entries": d["point"]})
        return cls(point, direction)


def min_rank(A: AffineMatSubspace, budget=None) -> int:
    """Minimum rank over every element of the coset."""
    best = min(A.n, A.p)
    for blk in A.element_blocks(budget):
        best = min(best, int(ffmat.ranks_of(blk, A.q).min()))
        if best == 0:
            break
    return best


def h_value(n: int, p: int, k: int) -> int:
    """np - C(k+1, 2): the largest dimension of an affine space of rank >= k matrices."""
    return n * p - comb(k + 1, 2)


def _validate_npk(n: int, p: int, k: int, low: int = 1):
    if not (n >= p >= k >= low):
        raise ValueError(f"need n >= p >= k >= {low}, got n={n}, p={p}, k={k}")


def extremal_affine(n: int, p: int, k: int, field, budget=None, verify: bool = True) -> AffineMatSubspace:
    """J_k plus every matrix whose top-left k x k block is strictly upper triangular.

    Each element has top-left block I_k + T with T strictly upper, hence
    rank >= k.  With ``verify`` the codimension and minimum rank are
    re-checked by enumeration whenever that fits in the budget.
    """
    _validate_npk(n, p, k)
    field = field if isinstance(field, Fq) else Fq(int(field))
    positions = [(i, j) for i in range(1, n + 1) for j in range(1, p + 1) if i > k or j > k or i < j]
    vecs = np.array([ffmat.elementary(n, p, i, j, field).vec() for i, j in positions])
    direction = MatSubspace(n, p, field, vecs if len(vecs) else None)
    A = AffineMatSubspace(ffmat.block_identity(n, p, k, field), direction)
    if A.codim != comb(k + 1, 2):
        raise RuntimeError(f"extremal construction has codim {A.codim}, expected {comb(k + 1, 2)}")
    if verify:
        try:
            check_budget(direction, budget)
        except BudgetExceeded:
            return A
        if min_rank(A, budget) < k:
            raise RuntimeError("extremal construction contains a matrix of rank < k")
    return A


def unspanned_subspace(n: int, p: int, r: int, field, budget=None, verify: bool = True) -> MatSubspace:
    """Linear span of extremal_affine(n, p, r+1): codim C(r+2,2) - 1, not spanned by rank-r elements.

    Its rank <= r elements all lie in the direction of the affine space, a
    hyperplane of the span.
    """
    if r < 1 or p < r + 1 or n < p:
        raise ValueError(f"need n >= p >= r + 1 and r >= 1, got n={n}, p={p}, r={r}")
    if comb(r + 2, 2) - 1 >= n:
        warnings.warn(
            f"codim C(r+2,2)-1 = {comb(r + 2, 2) - 1} is not below n = {n}; outside the theorem regime",
            stacklevel=2,
        )
    A = extremal_affine(n, p, r + 1, field, budget, verify=verify)
    V = A.linear_span()
    if verify:
        try:
            check_budget(V, budget)
        except BudgetExceeded:
            return V
        for blk in element_blocks(V, budget):
            low = blk[ffmat.ranks_of(blk, V.q) <= r]
            if len(low) and not A.direction.contains_vectors(low.reshape(len(low), -1)).all():
                raise RuntimeError("a rank <= r element escapes the direction space")
        if span_of_rank(V, r, budget).dim >= V.dim:
            raise RuntimeError("constructed subspace is spanned by its rank-r elements")
    return V


def check_flanders(A: AffineMatSubspace, budget=None) -> Verdict:
    """No rank-p element forces codim >= n, and linearity when codim = n outside (2, 2, F_2)."""
    name = "flanders"
    params = {"n": A.n, "p": A.p, "q": A.q, "dim": A.dim, "codim": A.codim, "linear": A.is_linear()}
    if A.n < A.p:
        return Verdict(name, Status.HYPOTHESIS_NOT_MET, params, witness={"reason": "need n >= p"})
    try:
        for blk in A.element_blocks(budget):
            ranks = ffmat.ranks_of(blk, A.q)
            full = np.flatnonzero(ranks == A.p)
            if full.size:
                return Verdict(name, Status.VACUOUS, params, witness={"rank_p_element": blk[full[0]].tolist()})
    except BudgetExceeded as exc:
        return Verdict(name, Status.BUDGET_EXCEEDED, params, witness={"required": exc.required, "budget": exc.budget})
    if A.codim < A.n:
        return Verdict(name, Status.FAIL, params, witness={"affine": A.to_dict(), "predicate": "codim >= n"})
    if A.codim == A.n and not A.is_linear():
        if (A.n, A.p, A.q) == (2, 2, 2):
            return Verdict(name, Status.EXCEPTION_REGIME, params, witness={"affine": A.to_dict()})
        return Verdict(name, Status.FAIL, params, witness={"affine": A.to_dict(), "predicate": "codim == n implies linear"})
    return Verdict(name, Status.PASS, params)


def coset_count(n: int, p: int, q: int, d: int) -> int:
    """Number of d-dimensional affine subspaces of Mat_{n,p}(F_q)."""
    m = n * p
    return grassmann.gaussian_binomial(m, d, q) * q ** (m - d)


def scan_cosets(n: int, p: int, q: int, d: int, budget=None, chunk: int = 1 << 12):
    """Every d-dimensional coset of Mat_{n,p}(F_q) with the ranks of all its elements.

    Yields ``(bases, reps, ranks)``: bases (N, d, m) of directions, coset
    representatives (R, m) supported off the pivots (row 0 is the zero
    vector, i.e. the linear coset), and ranks of shape (N, R, q**d).
    """
    budget = default_budget() if budget is None else budget
    m = n * p
    work = coset_count(n, p, q, d) * q**d
    if work > budget:
        raise BudgetExceeded(work, budget, "coset elements")
    for pivots, bases in grassmann.iter_bases(m, d, q, chunk):
        reps = grassmann.coset_representatives(pivots, m, q)
        elems = grassmann.span_elements(bases, q)
        allel = (elems[:, None, :, :].astype(np.int64) + reps[None, :, None, :]) % q
        N, R, E, _ = allel.shape
        ranks = ffmat.ranks_of(allel.reshape(-1, n, p).astype(np.uint8), q).reshape(N, R, E)
        yield bases, reps, ranks


def check_h_bound(n: int, p: int, k: int, field, mode: str = CONSTRUCT, budget=None) -> Verdict:
    """Largest affine space of rank >= k matrices has dimension np - C(k+1, 2).

    CONSTRUCT checks the lower bound on the explicit extremal coset;
    EXHAUSTIVE scans every coset one dimension larger and expects none
    to stay at rank >= k.
    """
    _validate_npk(n, p, k)
    field = field if isinstance(field, Fq) else Fq(int(field))
    q = field.q
    h = h_value(n, p, k)
    params = {"n": n, "p": p, "k": k, "q": q, "mode": mode.upper(), "h": h}
    name = "hbound"
    mode = mode.upper()
    try:
        if mode == CONSTRUCT:
            A = extremal_affine(n, p, k, field, budget, verify=False)
            mr = min_rank(A, budget)
            counts = {"dim": A.dim, "min_rank": mr}
            ok = A.dim == h and mr >= k
            witness = {} if ok else {"affine": A.to_dict(), "predicate": "dim == h and min_rank >= k"}
            return Verdict(name, Status.PASS if ok else Status.FAIL, params, counts=counts, witness=witness)
        if mode == EXHAUSTIVE:
            d = h + 1
            expected = coset_count(n, p, q, d)
            scanned = 0
            for bases, reps, ranks in scan_cosets(n, p, q, d, budget):
                good = (ranks >= k).all(axis=2)
                scanned += good.size
                if good.any():
                    bi, ri = map(int, np.argwhere(good)[0])
                    direction = MatSubspace(n, p, field, bases[bi])
                    A = AffineMatSubspace(FqMat.from_vector(reps[ri], n, p, field), direction)
                    return Verdict(
                        name,
                        Status.FAIL,
                        params,
                        counts={"cosets_scanned": scanned},
                        witness={"affine": A.to_dict(), "predicate": "every coset of dimension h + 1 has min_rank < k"},
                    )
            if scanned != expected:
                raise RuntimeError(f"scanned {scanned} cosets, expected {expected}")
            return Verdict(
                name, Status.PASS, params, counts={"cosets_scanned": scanned, "expected": expected, "dimension": d}
            )
    except BudgetExceeded as exc:
        return Verdict(name, Status.BUDGET_EXCEEDED, params, witness={"required": exc.required, "budget": exc.budget})
    raise ValueError(f"unknown mode {mode!r}")
