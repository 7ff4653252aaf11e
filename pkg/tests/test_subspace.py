import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankspan import ffmat, subspace
from rankspan.subspace import HyperplaneClass, MatSubspace

from oracles import closure


@st.composite
def subspace_pairs(draw):
    q = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(1, 2))
    p = draw(st.integers(1, 3))
    m = n * p

    def vecs():
        k = draw(st.integers(0, 3))
        return np.array(draw(st.lists(st.lists(st.integers(0, q - 1), min_size=m, max_size=m), min_size=k, max_size=k)))

    a, b = vecs(), vecs()
    V = MatSubspace(n, p, q, a if len(a) else None)
    W = MatSubspace(n, p, q, b if len(b) else None)
    return V, W


def elements(V):
    return closure(V.basis_array, V.q, V.ambient_dim)


@settings(max_examples=80, deadline=None)
@given(subspace_pairs())
def test_sum_and_intersection_match_set_operations(pair):
    V, W = pair
    S, I = subspace.subspace_sum(V, W), subspace.intersect(V, W)
    eV, eW = elements(V), elements(W)
    assert elements(I) == eV & eW
    assert len(elements(S)) == V.q**S.dim
    assert eV | eW <= elements(S)
    # Grassmann formula
    assert S.dim + I.dim == V.dim + W.dim
    assert I <= V and V <= S


@settings(max_examples=60, deadline=None)
@given(subspace_pairs())
def test_canonical_basis_is_basis_independent(pair):
    V, _ = pair
    rng = np.random.default_rng(V.dim)
    if V.dim:
        P = ffmat.random_invertible(V.dim, V.q, rng).entries.astype(np.int64)
        mixed = (P @ V.basis_array.astype(np.int64)) % V.q
        assert MatSubspace(V.n, V.p, V.q, mixed) == V
        assert hash(MatSubspace(V.n, V.p, V.q, mixed)) == hash(V)
    assert len(elements(V)) == V.q**V.dim


def test_from_basis_and_membership():
    E = [ffmat.elementary(2, 2, 1, 2, 3), ffmat.elementary(2, 2, 2, 2, 3)]
    V = subspace.from_basis(E)
    assert V.dim == 2 and V.codim == 2
    assert E[0] + E[1].scale(2) in V
    assert ffmat.identity(2, 3) not in V
    c = V.coordinates(E[0] + E[1].scale(2))
    assert len(c) == 2
    with pytest.raises(ValueError):
        subspace.from_basis([])
    with pytest.raises(ValueError):
        subspace.from_basis([ffmat.identity(2, 2), ffmat.identity(2, 3)])
    assert subspace.from_basis([], 2, 3, 5).dim == 0


def test_json_round_trip():
    V = subspace.trace_zero(3, 3)
    d = V.to_dict()
    assert set(d) == {"q", "rows", "cols", "basis"}
    assert MatSubspace.from_dict(d) == V
    Z = MatSubspace.zero(2, 3, 2)
    assert MatSubspace.from_dict(Z.to_dict()) == Z


def test_named_spaces_dimensions():
    for n in range(1, 6):
        assert subspace.upper_triangular(n, 2).dim == n * (n + 1) // 2
        assert subspace.strictly_upper_triangular(n, 3).dim == n * (n - 1) // 2
        assert subspace.lower_triangular(n, 2).dim == n * (n + 1) // 2
        assert subspace.trace_zero(n, 3).codim == 1
    assert subspace.sl2_f2().dim == 3
    for name in subspace.NAMED_SPACES:
        subspace.named_space(name, 2, field=2)


def test_coordinate_subspace_and_restrictions():
    V = subspace.coordinate_subspace(3, 3, 2, [(1, 2), (1, 3), (2, 3)])
    assert V == subspace.strictly_upper_triangular(3, 2)
    assert subspace.row_restriction(V, 3).dim == 0
    assert subspace.row_restriction(V, 1).dim == 2
    C = subspace.column_restriction(V, 2)
    assert (C.n, C.p, C.dim) == (3, 2, 1)


@pytest.mark.parametrize("q", [2, 3])
def test_equivalence_preserves_rank_profile(q):
    from rankspan.strata import rank_profile

    rng = np.random.default_rng(q)
    V = subspace.random_subspace(3, 2, q, 3, rng)
    P, Q = ffmat.random_invertible(3, q, rng), ffmat.random_invertible(2, q, rng)
    W = subspace.equiv_act(P, V, Q)
    assert W.dim == V.dim
    assert rank_profile(W).counts == rank_profile(V).counts
    with pytest.raises(ValueError):
        subspace.equiv_act(ffmat.zeros(3, 3, q), V, Q)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_trace_orthogonal_brute_force(n, q):
    rng = np.random.default_rng(n * q)
    V = subspace.random_subspace(n, n, q, n * n - 2, rng)
    O = subspace.trace_orthogonal(V)
    assert O.dim == n * n - V.dim
    for A in V.basis:
        for B in O.basis:
            assert int(np.trace((A @ B).entries.astype(np.int64))) % q == 0
    assert subspace.trace_orthogonal(O) == V


def test_random_subspace_has_requested_codim():
    rng = np.random.default_rng(3)
    for codim in range(0, 7):
        V = subspace.random_subspace(2, 3, 3, codim, rng)
        assert V.codim == codim
        W = subspace.random_subspace_of(V, max(0, V.dim - 1), rng)
        assert W <= V and W.dim == max(0, V.dim - 1)


def test_hyperplane_classification_examples():
    assert subspace.classify_hyperplane_2x2_F2(subspace.sl2_f2()) is HyperplaneClass.SL2_CLASS
    # T_2^+ = upper triangular matrices
    assert subspace.classify_hyperplane_2x2_F2(subspace.upper_triangular(2, 2)) is HyperplaneClass.T2PLUS_CLASS
    with pytest.raises(ValueError):
        subspace.classify_hyperplane_2x2_F2(subspace.strictly_upper_triangular(2, 2))


def test_immutable():
    V = subspace.sl2_f2()
    with pytest.raises(AttributeError):
        V.n = 3
    with pytest.raises(ValueError):
        V.basis_array[0, 0] = 1
