import numpy as np
import pytest

from rankspan import ffmat, strata, subspace
from rankspan.ffmat import FqMat
from rankspan.subspace import MatSubspace
from rankspan.verdict import BudgetExceeded, Status

from oracles import closure, rank_by_kernel


def brute_profile(V):
    out = {}
    for v in closure(V.basis_array, V.q, V.ambient_dim):
        r = rank_by_kernel(np.array(v).reshape(V.n, V.p), V.q)
        out[r] = out.get(r, 0) + 1
    return out


def brute_span_dim(V, r):
    vecs = [v for v in closure(V.basis_array, V.q, V.ambient_dim) if rank_by_kernel(np.array(v).reshape(V.n, V.p), V.q) == r]
    size = len(closure(vecs, V.q, V.ambient_dim))
    return round(np.log(size) / np.log(V.q))


def test_known_profiles():
    assert strata.rank_profile(subspace.sl2_f2()).counts == {0: 1, 1: 3, 2: 4}
    assert strata.rank_profile(subspace.upper_triangular(2, 2)).counts == {0: 1, 1: 5, 2: 2}
    assert strata.rank_profile(MatSubspace.full(2, 2, 2)).counts == {0: 1, 1: 9, 2: 6}
    assert strata.rank_profile(MatSubspace.zero(3, 3, 5)).counts == {0: 1}


@pytest.mark.parametrize("seed", range(12))
def test_profile_and_span_match_brute_force(seed):
    rng = np.random.default_rng(seed)
    q = [2, 3][seed % 2]
    n, p = [(2, 2), (3, 2), (2, 3)][seed % 3]
    V = subspace.random_subspace(n, p, q, int(rng.integers(0, n * p - 1)), rng)
    assert strata.rank_profile(V).counts == brute_profile(V)
    for r in range(0, min(n, p) + 1):
        assert strata.span_of_rank(V, r).dim == brute_span_dim(V, r)


def test_full_space_profile_counts():
    # number of n x p matrices of rank r over F_q, by direct count
    from itertools import product

    for n, p, q in [(2, 2, 3), (2, 3, 2)]:
        prof = strata.rank_profile(MatSubspace.full(n, p, q))
        assert prof.total == q ** (n * p)
        direct = {}
        for e in product(range(q), repeat=n * p):
            r = rank_by_kernel(np.array(e).reshape(n, p), q)
            direct[r] = direct.get(r, 0) + 1
        assert prof.counts == direct


def test_budget_enforced():
    V = MatSubspace.full(3, 3, 3)
    with pytest.raises(BudgetExceeded) as info:
        strata.rank_profile(V, budget=1000)
    assert info.value.required == 3**9


@pytest.mark.parametrize("seed", range(6))
def test_span_certificates_verify(seed):
    rng = np.random.default_rng(seed)
    V = subspace.random_subspace(3, 3, 2 + seed % 2, 1, rng)
    for r in (1, 2, 3):
        cert = strata.find_span_certificate(V, r)
        assert cert is not None and cert.verify()
        back = strata.SpanCertificate.from_dict(cert.to_dict())
        assert back.verify()


def test_tampered_certificate_fails():
    V = subspace.sl2_f2()
    cert = strata.find_span_certificate(V, 2)
    d = cert.to_dict()
    d["generators"][0] = [[1, 0], [0, 0]]
    assert not strata.SpanCertificate.from_dict(d).verify()


def test_certificate_absent_only_when_not_spanned():
    T = subspace.upper_triangular(2, 2)
    assert strata.find_span_certificate(T, 2) is None
    assert strata.span_of_rank(T, 2).dim == 2


def test_lcinf_exception_on_t2plus():
    T = subspace.upper_triangular(2, 2)
    v = strata.check_lcinf(T, 2, 1)
    assert v.status is Status.EXCEPTION_REGIME
    M = FqMat(v.witness["element"], 2)
    assert ffmat.rank(M) == 1 and T.contains(M)
    assert not strata.span_of_rank(T, 2).contains(M)


def test_lcinf_trivial_and_hypothesis():
    V = MatSubspace.full(3, 2, 3)
    assert strata.check_lcinf(V, 2, 0).status is Status.PASS
    assert strata.check_lcinf(V, 2, 1).status is Status.PASS
    small = strata.check_lcinf(subspace.strictly_upper_triangular(3, 2), 2, 1)
    assert small.status is Status.HYPOTHESIS_NOT_MET
    with pytest.raises(ValueError):
        strata.check_lcinf(V, 3, 1)


def test_exist_witness_is_checked():
    V = subspace.trace_zero(3, 3)
    for r in (1, 2, 3):
        v = strata.check_exist(V, r)
        assert v.status is Status.PASS
        M = FqMat(v.witness["element"], 3)
        assert ffmat.rank(M) == r and V.contains(M)
    # T_3^{++} has codim 6 >= 3 and no invertible element
    h = strata.check_exist(subspace.strictly_upper_triangular(3, 2), 3)
    assert h.status is Status.HYPOTHESIS_NOT_MET and h.witness["contains_rank_r"] is False


def test_condsuff_hypothesis_regimes():
    assert strata.condsuff_bound(1) == 1
    assert strata.condsuff_bound(2) == 4
    rng = np.random.default_rng(7)
    V = subspace.random_subspace(4, 4, 2, 3, rng)
    assert strata.check_condsuff(V, 2).status is Status.PASS
    out = strata.check_condsuff(V, 1)
    assert out.status is Status.HYPOTHESIS_NOT_MET
    assert out.witness["spanned"] in (True, False)


def test_genrangmax_excluded_case():
    v = strata.check_genrangmax(subspace.upper_triangular(2, 2))
    assert v.status is Status.HYPOTHESIS_NOT_MET
    assert strata.check_genrangmax(subspace.sl2_f2()).status is Status.PASS
