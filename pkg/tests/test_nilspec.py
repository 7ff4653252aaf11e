from itertools import permutations

import numpy as np
import pytest

from rankspan import ffmat, nilspec, subspace
from rankspan.ffmat import FqMat
from rankspan.subspace import MatSubspace
from rankspan.verdict import NoZeroRowIndex, Status, TriangularizationNotFound

from oracles import closure, eigenvalues_in_field


def brute_zero_spectrum(V):
    n = V.n
    return all(
        eigenvalues_in_field(np.array(v).reshape(n, n), V.q) <= {0} for v in closure(V.basis_array, V.q, V.ambient_dim)
    )


@pytest.mark.parametrize("seed", range(10))
def test_zero_spectrum_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    q = (2, 3)[seed % 2]
    V = subspace.random_subspace(2, 2, q, int(rng.integers(1, 4)), rng)
    got = nilspec.has_zero_spectrum_property(V)
    assert (got.status is Status.PASS) == brute_zero_spectrum(V)
    if got.status is Status.FAIL:
        M = FqMat(got.witness["element"], q)
        assert got.witness["eigenvalue"] in ffmat.spectrum_in_field(M)


@pytest.mark.parametrize("n,q", [(n, q) for n in range(1, 6) for q in (2, 3)])
def test_strict_upper_attains_bound(n, q):
    T = subspace.strictly_upper_triangular(n, q)
    assert T.dim == nilspec.gerstenhaber_bound(n)
    assert nilspec.has_zero_spectrum_property(T).status is Status.PASS
    assert nilspec.check_gerstenhaber_bound(T).status is Status.PASS


def test_upper_triangular_is_not_zero_spectrum():
    v = nilspec.has_zero_spectrum_property(subspace.upper_triangular(3, 2))
    assert v.status is Status.FAIL
    assert nilspec.check_gerstenhaber_bound(subspace.upper_triangular(3, 2)).status is Status.FAIL


def test_zero_row_index():
    T = subspace.strictly_upper_triangular(4, 3)
    w = nilspec.find_zero_row_index(T)
    assert w.index == 4 and w.verify(T)
    assert nilspec.zero_row_indices(T) == [4]
    with pytest.raises(NoZeroRowIndex):
        nilspec.find_zero_row_index(MatSubspace.full(2, 2, 2))


def test_cycle_witness_example_f3():
    # f = (2, 4, 4, 2) on 1..4: E_{2,1}, E_{4,2}, E_{4,3}, E_{2,4} in V
    f = {1: 2, 2: 4, 3: 4, 4: 2}
    V = subspace.coordinate_subspace(4, 4, 3, [(v, k) for k, v in f.items()])
    w = nilspec.build_cycle_witness(V, f)
    assert set(w.cycle) == {2, 4}
    assert w.verify(V)
    assert 1 in ffmat.spectrum_in_field(w.matrix)
    assert nilspec.find_elementary_map(V) == f
    assert nilspec.find_elementary_map(subspace.strictly_upper_triangular(3, 3)) is None


def test_cycle_witness_rejects_missing_elementary():
    V = subspace.strictly_upper_triangular(3, 2)
    with pytest.raises(ValueError):
        nilspec.build_cycle_witness(V, {1: 1, 2: 1, 3: 1})


def test_block_decomposition_round_trip():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 5, size=(4, 4))
    a[:-1, -1] = 0
    M = FqMat(a, 5)
    assert nilspec.block_decompose(M).assemble() == M
    with pytest.raises(ValueError):
        nilspec.block_decompose(ffmat.identity(3, 5) + ffmat.elementary(3, 3, 1, 3, 5))
    b = rng.integers(0, 5, size=(3, 3))
    b[-1] = 0
    assert nilspec.compress_last_row_zero(FqMat(b, 5)).tolist() == b[:-1, :-1].tolist()


def test_block_dimension_inequality():
    rng = np.random.default_rng(2)
    for _ in range(20):
        T = nilspec.conjugate_by_permutation(subspace.strictly_upper_triangular(4, 2), tuple(rng.permutation(4) + 1))
        V = subspace.random_subspace_of(T, int(rng.integers(0, 7)), rng)
        i = nilspec.find_zero_row_index(V).index
        move = tuple(4 if k == i else (k if k < i else k - 1) for k in range(1, 5))
        V1 = nilspec.conjugate_by_permutation(V, move)
        W = nilspec.last_column_constrained(V1)
        assert V1.dim <= 3 + W.dim
        assert nilspec.has_zero_spectrum_property(nilspec.top_left_block(W)).status is Status.PASS


def test_conjugation_matches_matrix_product():
    sigma = (3, 1, 4, 2)
    P = ffmat.permutation_matrix(sigma, 3)
    V = subspace.random_subspace(4, 4, 3, 11, np.random.default_rng(1))
    assert nilspec.conjugate_by_permutation(V, sigma) == subspace.conjugate(P, V)


def brute_triangularizable(V):
    n = V.n
    for perm in permutations(range(1, n + 1)):
        W = nilspec.conjugate_by_permutation(V, perm)
        low = subspace.lower_triangular(n, V.q)
        if subspace.intersect(W, low).dim == 0:
            return True
    return False


@pytest.mark.parametrize("seed", range(15))
@pytest.mark.parametrize("mode", [nilspec.RECURSIVE, nilspec.EXHAUSTIVE])
def test_triangularization_modes(seed, mode):
    rng = np.random.default_rng(seed)
    n, q = int(rng.integers(2, 5)), int(rng.choice([2, 3]))
    T = nilspec.conjugate_by_permutation(subspace.strictly_upper_triangular(n, q), tuple(rng.permutation(n) + 1))
    V = subspace.random_subspace_of(T, int(rng.integers(0, T.dim + 1)), rng)
    sigma = nilspec.triangularizing_permutation(V, mode)
    assert nilspec.triangularizes(V, sigma)
    assert nilspec.meets_lower_trivially(nilspec.conjugate_by_permutation(V, sigma))


def test_triangularization_impossible_cases():
    # the full upper triangular space meets the diagonal for every permutation
    U = subspace.upper_triangular(2, 2)
    assert not brute_triangularizable(U)
    for mode in (nilspec.RECURSIVE, nilspec.EXHAUSTIVE):
        with pytest.raises(TriangularizationNotFound):
            nilspec.triangularizing_permutation(U, mode)
