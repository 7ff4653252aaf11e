"""Exactly-once enumeration of the d-dimensional subspaces of F_q^m.

Each subspace is produced once, as its reduced row echelon basis: pick the
pivot columns, then fill every position to the right of a row's pivot that
is not itself a pivot column.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

import numpy as np

from .ffmat import all_vectors, decode, encode


def gaussian_binomial(m: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^m."""
    if d < 0 or d > m:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def free_positions(pivots: tuple[int, ...], m: int) -> list[tuple[int, int]]:
    pivset = set(pivots)
    return [(row, c) for row, pc in enumerate(pivots) for c in range(pc + 1, m) if c not in pivset]


def iter_pivot_patterns(m: int, d: int) -> Iterator[tuple[int, ...]]:
    return combinations(range(m), d)


def iter_bases(m: int, d: int, q: int, chunk: int = 1 << 15) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """Yield ``(pivots, bases)`` with ``bases`` of shape (N, d, m), uint8.

    Order: pivot patterns lexicographically, then free fillings in
    lexicographic order, so the stream is deterministic.
    """
    for pivots in iter_pivot_patterns(m, d):
        free = free_positions(pivots, m)
        template = np.zeros((d, m), dtype=np.uint8)
        template[range(d), pivots] = 1
        rows = np.array([r for r, _ in free], dtype=np.int64)
        cols = np.array([c for _, c in free], dtype=np.int64)
        total = q ** len(free)
        for start in range(0, total, chunk):
            codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
            fill = decode(codes, len(free), q)
            bases = np.broadcast_to(template, (len(codes), d, m)).copy()
            if len(free):
                bases[:, rows, cols] = fill
            yield pivots, bases


def coset_representatives(pivots: tuple[int, ...], m: int, q: int) -> np.ndarray:
    """One vector per coset of a subspace with the given pivot columns.

    The vectors supported off the pivot columns form a transversal: q**(m-d) of them.
    """
    nonpivot = [c for c in range(m) if c not in set(pivots)]
    reps = np.zeros((q ** len(nonpivot), m), dtype=np.uint8)
    if nonpivot:
        reps[:, nonpivot] = all_vectors(len(nonpivot), q)
    return reps


def span_elements(bases: np.ndarray, q: int) -> np.ndarray:
    """All elements of each spanned subspace, shape (N, q**d, m)."""
    N, d, m = bases.shape
    coeffs = all_vectors(d, q).astype(np.int64)
    return ((np.einsum("cd,ndm->ncm", coeffs, bases.astype(np.int64))) % q).astype(np.uint8)


def span_codes(bases: np.ndarray, q: int) -> np.ndarray:
    """Integer codes (see ``ffmat.encode``) of every element of each span, shape (N, q**d).

    Over F_2 the codes combine by XOR; otherwise elements are built by
    repeated vector addition and encoded afterwards.
    """
    N, d, m = bases.shape
    if q == 2:
        codes = encode(bases, 2)
        out = np.zeros((N, 1 << d), dtype=np.int64)
        coeffs = all_vectors(d, 2)
        for k in range(d):
            sel = coeffs[:, k] == 1
            out[:, sel] ^= codes[:, k : k + 1]
        return out
    elems = np.zeros((N, 1, m), dtype=np.uint8)
    for k in range(d - 1, -1, -1):
        b = bases[:, k, None, :].astype(np.int64)
        layers = [((elems + c * b) % q).astype(np.uint8) for c in range(q)]
        elems = np.concatenate(layers, axis=1)
    return encode(elems, q)
