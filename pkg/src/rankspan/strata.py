"""Rank strata of finite matrix subspaces and the spanning theorems.

Positive answers ("V is spanned by its rank r matrices", "V contains a
rank r matrix") are settled by an explicit witness whenever a seeded
search finds one; every witness is re-checked exactly.  A negative answer
is only ever reported after a complete enumeration of V.
"""

from __future__ import annotations

import zlib
from functools import lru_cache
from dataclasses import dataclass, field
from math import comb
from typing import Iterator

import numpy as np

from . import ffmat
from .ffmat import FqMat
from .subspace import MatSubspace, column_restriction
from .verdict import BudgetExceeded, Status, Verdict, default_budget

BLOCK = 1 << 16


def _budget(budget):
    return default_budget() if budget is None else budget


def check_budget(V: MatSubspace, budget=None) -> int:
    """Number of elements of V; raises BudgetExceeded when over budget."""
    budget = _budget(budget)
    size = V.q**V.dim
    if size > budget:
        raise BudgetExceeded(size, budget)
    return size


def element_blocks(V: MatSubspace, budget=None, block: int = BLOCK) -> Iterator[np.ndarray]:
    """All elements of V as stacked (N, n, p) arrays, in canonical order.

    Element number c has coefficient tuple ``decode(c)`` against the
    canonical basis (first basis vector most significant).
    """
    size = check_budget(V, budget)
    basis = V.basis_array.astype(np.int64)
    for start in range(0, size, block):
        codes = np.arange(start, min(size, start + block), dtype=np.int64)
        coeffs = ffmat.decode(codes, V.dim, V.q).astype(np.int64)
        vecs = (coeffs @ basis) % V.q if V.dim else np.zeros((len(codes), V.ambient_dim), dtype=np.int64)
        yield vecs.astype(np.uint8).reshape(-1, V.n, V.p)


def enumerate_elements(V: MatSubspace, budget=None) -> Iterator[FqMat]:
    """Every element of V exactly once."""
    for blk in element_blocks(V, budget):
        for a in blk:
            yield FqMat(a, V.field)


@dataclass(frozen=True)
class RankProfile:
    counts: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, r: int) -> int:
        return self.counts.get(r, 0)

    def to_dict(self) -> dict:
        return {str(k): v for k, v in sorted(self.counts.items())}


def rank_profile(V: MatSubspace, budget=None) -> RankProfile:
    counts = np.zeros(min(V.n, V.p) + 1, dtype=np.int64)
    for blk in element_blocks(V, budget):
        counts += np.bincount(ffmat.ranks_of(blk, V.q), minlength=len(counts))
    return RankProfile({r: int(c) for r, c in enumerate(counts) if c})


def _validate_rank(V: MatSubspace, r: int, low: int = 0):
    if not low <= r <= min(V.n, V.p):
        raise ValueError(f"rank {r} out of range {low}..{min(V.n, V.p)}")


def span_of_rank(V: MatSubspace, r: int, budget=None) -> MatSubspace:
    """Span of the rank-r elements of V, by full enumeration."""
    _validate_rank(V, r)
    acc = np.zeros((0, V.ambient_dim), dtype=np.uint8)
    for blk in element_blocks(V, budget):
        hits = blk[ffmat.ranks_of(blk, V.q) == r].reshape(-1, V.ambient_dim)
        if len(hits):
            acc, _ = ffmat.rref_array(np.vstack([acc, np.unique(hits, axis=0)]), V.q)
            if len(acc) == V.dim:
                break
    return MatSubspace(V.n, V.p, V.field, acc if len(acc) else None)


# witnesses


@dataclass
class SpanCertificate:
    """Explicit rank-r elements of V reproducing each canonical basis element.

    ``coefficients[i]`` gives basis element i as a combination of ``generators``.
    """

    space: MatSubspace
    r: int
    generators: list = field(default_factory=list)
    coefficients: list = field(default_factory=list)

    def verify(self) -> bool:
        V = self.space
        if len(self.coefficients) != V.dim:
            return False
        for g in self.generators:
            if ffmat.rank(g) != self.r or not V.contains(g):
                return False
        if V.dim == 0:
            return True
        G = np.stack([g.vec() for g in self.generators]).astype(np.int64) if self.generators else None
        for coeff, b in zip(self.coefficients, V.basis_array):
            if G is None:
                return False
            if not np.array_equal((np.asarray(coeff, dtype=np.int64) @ G) % V.q, b):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "space": self.space.to_dict(),
            "r": self.r,
            "generators": [g.tolist() for g in self.generators],
            "coefficients": [list(map(int, c)) for c in self.coefficients],
        }

    @classmethod
    def from_dict(cls, d: dict) -> SpanCertificate:
        V = MatSubspace.from_dict(d["space"])
        gens = [FqMat(e, V.field) for e in d["generators"]]
        return cls(V, int(d["r"]), gens, [list(c) for c in d["coefficients"]])


def _search_rng(V: MatSubspace, r: int, salt: int = 0) -> np.random.Generator:
    tag = zlib.crc32(V.basis_array.tobytes() + bytes([V.n, V.p, V.q, r, salt & 0xFF]))
    return np.random.default_rng([tag, V.dim, r, salt])


def _candidates(V: MatSubspace, r: int, rng: np.random.Generator, batch: int) -> np.ndarray:
    """Rank-r elements of V drawn three ways: plain random elements, elements
    of the column restriction padded with zeros, and random rank-r products
    U W filtered by membership."""
    q, n, p = V.q, V.n, V.p
    out = []
    if V.dim:
        coeffs = rng.integers(0, q, size=(batch, V.dim))
        out.append(((coeffs @ V.basis_array.astype(np.int64)) % q).astype(np.uint8))
    if 1 <= r <= p:
        W = column_restriction(V, r)
        if W.dim:
            coeffs = rng.integers(0, q, size=(batch, W.dim))
            left = ((coeffs @ W.basis_array.astype(np.int64)) % q).reshape(batch, n, r)
            padded = np.zeros((batch, n, p), dtype=np.uint8)
            padded[:, :, :r] = left
            out.append(padded.reshape(batch, -1))
        U = rng.integers(0, q, size=(batch, n, r))
        Wm = rng.integers(0, q, size=(batch, r, p))
        prods = ((U @ Wm) % q).astype(np.uint8).reshape(batch, -1)
        out.append(prods[V.contains_vectors(prods)])
    cand = np.vstack(out) if out else np.zeros((0, V.ambient_dim), dtype=np.uint8)
    if not len(cand):
        return cand
    return cand[ffmat.ranks_of(cand.reshape(-1, n, p), q) == r]


def _grow_independent(V: MatSubspace, gens: list, cand: np.ndarray) -> list:
    """Greedily append candidates that enlarge span(gens)."""
    q = V.q
    S = MatSubspace(V.n, V.p, V.field, np.array(gens) if gens else None)
    res = S.reduce(cand).astype(np.int64)
    inv = ffmat.inverse_table(q)
    while len(gens) < V.dim:
        live = np.flatnonzero(res.any(axis=1))
        if not live.size:
            break
        i = live[0]
        gens.append(cand[i])
        piv = np.flatnonzero(res[i])[0]
        row = (res[i] * inv[res[i, piv]]) % q
        res = (res - np.outer(res[:, piv], row)) % q
    return gens


def _certificate_from(V: MatSubspace, r: int, gens: list) -> SpanCertificate:
    coeffs = ffmat.solve_many(np.array(gens, dtype=np.int64), V.basis_array, V.q)
    return SpanCertificate(
        V, r, [FqMat.from_vector(g, V.n, V.p, V.field) for g in gens], [list(map(int, c)) for c in coeffs]
    )


@lru_cache(maxsize=256)
def find_span_certificate(V: MatSubspace, r: int, budget=None, rounds: int = 12, batch: int = 256):
    """A SpanCertificate when V is spanned by its rank-r elements, else None.

    None is only returned after exhaustive enumeration confirms the span is
    proper; raises BudgetExceeded if that enumeration is too large.  Results
    are memoized (V is immutable); treat the certificate as read-only.
    """
    _validate_rank(V, r)
    if V.dim == 0:
        return SpanCertificate(V, r, [], [])
    rng = _search_rng(V, r)
    gens: list = []
    for _ in range(rounds):
        gens = _grow_independent(V, gens, _candidates(V, r, rng, batch))
        if len(gens) == V.dim:
            return _certificate_from(V, r, gens)
    S = span_of_rank(V, r, budget)
    if S.dim < V.dim:
        return None
    return _certificate_from(V, r, list(S.basis_array))


def find_rank_element(V: MatSubspace, r: int, budget=None, rounds: int = 8, batch: int = 256):
    """Some rank-r element of V, or None once enumeration shows there is none."""
    _validate_rank(V, r)
    if r == 0:
        return ffmat.zeros(V.n, V.p, V.field)
    rng = _search_rng(V, r, salt=1)
    for _ in range(rounds):
        cand = _candidates(V, r, rng, batch)
        if len(cand):
            return FqMat.from_vector(cand[0], V.n, V.p, V.field)
    for blk in element_blocks(V, budget):
        hit = np.flatnonzero(ffmat.ranks_of(blk, V.q) == r)
        if hit.size:
            return FqMat(blk[hit[0]], V.field)
    return None


# theorem checks


def _params(V: MatSubspace, **extra) -> dict:
    return {"n": V.n, "p": V.p, "q": V.q, "dim": V.dim, "codim": V.codim, **extra}


def _budget_verdict(name: str, params: dict, exc: BudgetExceeded) -> Verdict:
    return Verdict(name, Status.BUDGET_EXCEEDED, params, witness={"required": exc.required, "budget": exc.budget})


_UNEVALUATED = object()


def _try(fn, *args):
    try:
        return fn(*args)
    except BudgetExceeded:
        return _UNEVALUATED


def _evaluated(value, pred):
    """``pred(value)``, or None when the value could not be computed within budget."""
    return None if value is _UNEVALUATED else pred(value)


def lcinf_exceptional(V: MatSubspace, r: int) -> bool:
    return (V.n, V.p, r, V.q, V.codim) == (2, 2, 2, 2, 1)


def check_lcinf(V: MatSubspace, r: int, s: int, budget=None) -> Verdict:
    """Every rank-s element of V is a combination of rank-r elements of V."""
    if not 1 <= r <= V.p:
        raise ValueError(f"r={r} out of range 1..{V.p}")
    if not 0 <= s <= r:
        raise ValueError(f"s={s} out of range 0..{r}")
    name = "lcinf"
    params = _params(V, r=r, s=s)
    if V.n < V.p or V.codim >= V.n:
        return Verdict(name, Status.HYPOTHESIS_NOT_MET, params, witness={"reason": "need n >= p and codim V < n"})
    if s in (0, r):
        return Verdict(name, Status.PASS, params, witness={"reason": "trivial: s = 0 or s = r"})
    try:
        cert = find_span_certificate(V, r, budget)
        if cert is not None:
            return Verdict(name, Status.PASS, params, witness={"certificate": cert.to_dict()})
        S = span_of_rank(V, r, budget)
        for blk in element_blocks(V, budget):
            sel = blk[ffmat.ranks_of(blk, V.q) == s]
            if not len(sel):
                continue
            outside = ~S.contains_vectors(sel.reshape(len(sel), -1))
            if outside.any():
                bad = FqMat(sel[np.flatnonzero(outside)[0]], V.field)
                status = Status.EXCEPTION_REGIME if lcinf_exceptional(V, r) else Status.FAIL
                return Verdict(
                    name,
                    status,
                    params,
                    witness={
                        "subspace": V.to_dict(),
                        "element": bad.tolist(),
                        "element_rank": s,
                        "span_of_rank_dim": S.dim,
                        "predicate": "element in span_of_rank(V, r)",
                    },
                )
    except BudgetExceeded as exc:
        return _budget_verdict(name, params, exc)
    return Verdict(name, Status.PASS, params, witness={"span_of_rank_dim": S.dim})


def check_exist(V: MatSubspace, r: int, budget=None) -> Verdict:
    """V contains a rank-r matrix."""
    if not 1 <= r <= V.p:
        raise ValueError(f"r={r} out of range 1..{V.p}")
    name = "exist"
    params = _params(V, r=r)
    if V.n < V.p or V.codim >= V.n:
        found = _try(find_rank_element, V, r, budget)
        return Verdict(
            name,
            Status.HYPOTHESIS_NOT_MET,
            params,
            witness={"reason": "need n >= p and codim V < n", "contains_rank_r": _evaluated(found, lambda f: f is not None)},
        )
    try:
        found = find_rank_element(V, r, budget)
    except BudgetExceeded as exc:
        return _budget_verdict(name, params, exc)
    if found is None:
        return Verdict(
            name,
            Status.FAIL,
            params,
            witness={"subspace": V.to_dict(), "predicate": "rank_profile(V)[r] > 0"},
        )
    return Verdict(name, Status.PASS, params, witness={"element": found.tolist()})


def condsuff_bound(r: int) -> int:
    """Largest codimension for which rank-r spanning is guaranteed: C(r+2, 2) - 2."""
    return comb(r + 2, 2) - 2


def check_condsuff(V: MatSubspace, r: int, budget=None) -> Verdict:
    """V is spanned by its rank-r matrices when codim V <= C(r+2,2) - 2 (and < n)."""
    if not 1 <= r <= V.p - 1:
        raise ValueError(f"r={r} out of range 1..{V.p - 1}")
    name = "condsuff"
    params = _params(V, r=r, bound=condsuff_bound(r))
    if V.n < V.p or V.codim >= V.n or V.codim > condsuff_bound(r):
        cert = _try(find_span_certificate, V, r, budget)
        return Verdict(
            name,
            Status.HYPOTHESIS_NOT_MET,
            params,
            witness={
                "reason": "need n >= p, codim V < n and codim V <= C(r+2,2)-2",
                "spanned": _evaluated(cert, lambda c: c is not None),
            },
        )
    try:
        cert = find_span_certificate(V, r, budget)
    except BudgetExceeded as exc:
        return _budget_verdict(name, params, exc)
    if cert is None:
        return Verdict(
            name,
            Status.FAIL,
            params,
            witness={
                "subspace": V.to_dict(),
                "span_of_rank_dim": span_of_rank(V, r, budget).dim,
                "predicate": "span_of_rank(V, r) == V",
            },
        )
    return Verdict(name, Status.PASS, params, witness={"certificate": cert.to_dict()})


def check_genrangmax(V: MatSubspace, budget=None) -> Verdict:
    """V is spanned by its rank-p matrices when codim V < n (with the Mat_2(F_2) exception)."""
    name = "genrangmax"
    params = _params(V, r=V.p)
    if V.n < V.p or V.codim >= V.n:
        return Verdict(name, Status.HYPOTHESIS_NOT_MET, params, witness={"reason": "need n >= p and codim V < n"})
    try:
        cert = find_span_certificate(V, V.p, budget)
    except BudgetExceeded as exc:
        return _budget_verdict(name, params, exc)
    exceptional = (V.n, V.p, V.q) == (2, 2, 2) and V.codim >= V.n - 1
    if cert is None:
        if exceptional:
            return Verdict(
                name,
                Status.HYPOTHESIS_NOT_MET,
                params,
                witness={"reason": "excluded case n = p = 2 over F_2 with codim 1", "spanned": False},
            )
        return Verdict(
            name,
            Status.FAIL,
            params,
            witness={"subspace": V.to_dict(), "predicate": "span_of_rank(V, p) == V"},
        )
    return Verdict(name, Status.PASS, params, witness={"certificate": cert.to_dict()})
