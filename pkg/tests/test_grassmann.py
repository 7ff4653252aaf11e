import numpy as np
import pytest

from rankspan import ffmat, grassmann

from oracles import closure


def test_gaussian_binomial_small_values():
    assert grassmann.gaussian_binomial(4, 1, 2) == 15
    assert grassmann.gaussian_binomial(4, 2, 2) == 35
    assert grassmann.gaussian_binomial(4, 3, 3) == 40
    assert grassmann.gaussian_binomial(9, 8, 2) == 511
    assert grassmann.gaussian_binomial(9, 4, 2) == 3309747
    assert grassmann.gaussian_binomial(3, 5, 2) == 0


@pytest.mark.parametrize("m,d,q", [(4, 2, 2), (4, 1, 3), (3, 2, 3), (5, 3, 2), (4, 0, 2), (4, 4, 3)])
def test_iter_bases_enumerates_each_subspace_once(m, d, q):
    """Every subspace appears exactly once, and the count matches the formula."""
    spans = []
    for _, bases in grassmann.iter_bases(m, d, q, chunk=7):
        for b in bases:
            spans.append(frozenset(closure(b, q, m)))
            assert ffmat.rank_array(b, q) == d
    assert len(spans) == grassmann.gaussian_binomial(m, d, q)
    assert len(set(spans)) == len(spans)


def test_iter_bases_gives_rref():
    for pivots, bases in grassmann.iter_bases(5, 2, 3):
        for b in bases:
            R, piv = ffmat.rref_array(b, 3)
            assert tuple(piv) == pivots
            assert np.array_equal(R, b)


def test_coset_representatives_form_transversal():
    q, m = 3, 3
    for pivots, bases in grassmann.iter_bases(m, 1, q):
        reps = grassmann.coset_representatives(pivots, m, q)
        assert not reps[0].any()
        for b in bases:
            span = closure(b, q, m)
            cosets = {frozenset(tuple((np.array(s) + r) % q) for s in span) for r in reps.astype(np.int64)}
            assert len(cosets) == q ** (m - 1) == len(reps)


@pytest.mark.parametrize("q", [2, 3])
def test_span_codes_and_elements_agree(q):
    bases = next(grassmann.iter_bases(4, 2, q))[1]
    codes = grassmann.span_codes(bases, q)
    elems = grassmann.span_elements(bases, q)
    for b, c, e in zip(bases, codes, elems):
        expect = {tuple(v) for v in closure(b, q, 4)}
        assert {tuple(v) for v in ffmat.decode(c, 4, q)} == expect
        assert {tuple(v) for v in e} == expect
