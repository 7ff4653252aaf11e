"""Reproducible verification campaigns built from the module-level checks.

Randomized suites derive trial t's objects from ``default_rng([seed, t, ...])``
so the outcome never depends on how trials are spread over workers;
results are always aggregated in trial order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache, partial
from math import comb

import numpy as np

from . import affine, ffmat, grassmann, nilspec, strata
from .ffmat import Fq, FqMat
from .subspace import (
    HyperplaneClass,
    MatSubspace,
    classify_hyperplane_2x2_F2,
    random_subspace,
    random_subspace_of,
    strictly_upper_triangular,
    trace_orthogonal,
)
from .verdict import (
    BudgetExceeded,
    NoZeroRowIndex,
    Status,
    TriangularizationNotFound,
    Verdict,
    default_budget,
)

DEFAULT_TRIALS = 500
DEFAULT_SEED = 0

_SEVERITY = [Status.FAIL, Status.BUDGET_EXCEEDED, Status.HYPOTHESIS_NOT_MET, Status.EXCEPTION_REGIME, Status.VACUOUS]


def _pmap(fn, items, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _worst(statuses) -> Status:
    statuses = set(statuses)
    for s in _SEVERITY:
        if s in statuses:
            return s
    return Status.PASS


def _finish(v: Verdict, t0: float, inject_failure: bool = False) -> Verdict:
    v.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    if inject_failure:
        # test hook: pretend the first witness failed its re-check
        v.witness = {"injected_failure": True, "original_status": v.status.value, "original_witness": v.witness}
        v.status = Status.FAIL
    return v


def _rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng([seed, *keys])


# Mat_2(F_2) hyperplanes


def iter_hyperplanes(n: int, q: int):
    """Every hyperplane of Mat_n(F_q), as the trace-orthogonal of a line span{C}."""
    field = Fq(q)
    for _, bases in grassmann.iter_bases(n * n, 1, q):
        for b in bases:
            C = FqMat.from_vector(b[0], n, n, field)
            yield C, trace_orthogonal(MatSubspace(n, n, field, b))


def suite_oddcase(inject_failure: bool = False) -> Verdict:
    """Classify all 15 hyperplanes of Mat_2(F_2) and compare with enumeration."""
    t0 = time.perf_counter()
    counts = {"hyperplanes": 0, "SL2_CLASS": 0, "T2PLUS_CLASS": 0, "spanned": 0, "agree": 0}
    mismatch = None
    for C, H in iter_hyperplanes(2, 2):
        label = classify_hyperplane_2x2_F2(H)
        spanned = strata.span_of_rank(H, 2) == H
        counts["hyperplanes"] += 1
        counts[label.value] += 1
        counts["spanned"] += spanned
        if (label is HyperplaneClass.SL2_CLASS) == spanned:
            counts["agree"] += 1
        elif mismatch is None:
            mismatch = {"subspace": H.to_dict(), "label": label.value, "spanned": spanned}
    expected = grassmann.gaussian_binomial(4, 1, 2)
    ok = (
        counts["hyperplanes"] == expected
        and counts["agree"] == expected
        and (counts["SL2_CLASS"], counts["T2PLUS_CLASS"]) == (6, 9)
    )
    witness = {} if mismatch is None else {**mismatch, "predicate": "label == SL2_CLASS iff spanned by rank 2"}
    v = Verdict("oddcase", Status.PASS if ok else Status.FAIL, {"n": 2, "q": 2}, counts=counts, witness=witness)
    return _finish(v, t0, inject_failure)


# generalized Gerstenhaber bound


@lru_cache(maxsize=8)
def nonzero_eigenvalue_table(n: int, q: int) -> np.ndarray:
    """True at the code of every n x n matrix with an eigenvalue in F_q other than 0."""
    m = n * n
    if q**m > 1 << 22:
        raise ValueError("table too large")
    mats = ffmat.decode(np.arange(q**m), m, q).reshape(-1, n, n)
    t = ffmat.batch_nonzero_eigenvalue(mats, q) != 0
    t.setflags(write=False)
    return t


def _zero_spectrum_spans(bases: np.ndarray, n: int, q: int) -> np.ndarray:
    if q ** (n * n) <= 1 << 22:
        bad = nonzero_eigenvalue_table(n, q)[grassmann.span_codes(bases, q)]
        return ~bad.any(axis=1)
    elems = grassmann.span_elements(bases, q)
    N, E, _ = elems.shape
    lam = ffmat.batch_nonzero_eigenvalue(elems.reshape(-1, n, n), q).reshape(N, E)
    return ~(lam != 0).any(axis=1)


def suite_gerstenhaber_exhaustive(n: int, q: int, d: int | None = None, budget=None, inject_failure=False) -> Verdict:
    """Scan every d-dimensional subspace of Mat_n(F_q) for the zero-spectrum property.

    With d = C(n,2) + 1 (the default) PASS means none exists.
    """
    t0 = time.perf_counter()
    budget = default_budget() if budget is None else budget
    bound = comb(n, 2)
    d = bound + 1 if d is None else d
    m = n * n
    params = {"n": n, "q": q, "d": d, "bound": bound}
    expected = grassmann.gaussian_binomial(m, d, q)
    # the budget is charged per subspace here: each subspace costs q**d
    # table lookups, not q**d eigenvalue computations
    if expected > budget:
        v = Verdict("gerstenhaber", Status.BUDGET_EXCEEDED, params, witness={"required": expected, "budget": budget})
        return _finish(v, t0, inject_failure)
    scanned = found = 0
    example = None
    for _, bases in grassmann.iter_bases(m, d, q):
        ok = _zero_spectrum_spans(bases, n, q)
        scanned += len(bases)
        hits = np.flatnonzero(ok)
        found += int(hits.size)
        if hits.size and example is None:
            example = MatSubspace(n, n, Fq(q), bases[hits[0]])
    if scanned != expected:
        raise RuntimeError(f"scanned {scanned} subspaces, expected {expected}")
    counts = {"scanned": scanned, "expected": expected, "zero_spectrum": found}
    if d <= bound:
        status, witness = Status.VACUOUS, ({"example": example.to_dict()} if example else {})
    elif found:
        status = Status.FAIL
        witness = {"subspace": example.to_dict(), "predicate": "dim V <= C(n, 2) for zero-spectrum V"}
    else:
        status, witness = Status.PASS, {}
    return _finish(Verdict("gerstenhaber", status, params, counts=counts, witness=witness), t0, inject_failure)


def suite_strict_upper(ns=range(1, 7), qs=(2, 3), budget=None, inject_failure=False) -> Verdict:
    """T_n^{++}(F_q) is zero-spectrum with dimension exactly C(n, 2)."""
    t0 = time.perf_counter()
    counts, bad = {}, None
    statuses = []
    for q in qs:
        for n in ns:
            T = strictly_upper_triangular(n, q)
            zs = nilspec.has_zero_spectrum_property(T, budget)
            ok = zs.status is Status.PASS and T.dim == comb(n, 2)
            statuses.append(zs.status if zs.status is Status.BUDGET_EXCEEDED else (Status.PASS if ok else Status.FAIL))
            counts[f"n={n},q={q}"] = {"dim": T.dim, "zero_spectrum": zs.status.value}
            if not ok and bad is None:
                bad = {"subspace": T.to_dict(), "zero_spectrum": zs.to_dict(timing=False)}
    v = Verdict(
        "strict_upper", _worst(statuses), {"ns": list(ns), "qs": list(qs)}, counts=counts, witness=bad or {}
    )
    return _finish(v, t0, inject_failure)


# zero-row index and triangularization


def zero_spectrum_instance(seed: int, t: int, max_n: int = 5, qs=(2, 3)) -> MatSubspace:
    """Random subspace of a permutation conjugate of T_n^{++}, 2 <= n <= max_n."""
    rng = _rng(seed, t)
    n = int(rng.integers(2, max_n + 1))
    q = int(qs[int(rng.integers(len(qs)))])
    sigma = tuple(int(x) + 1 for x in rng.permutation(n))
    base = nilspec.conjugate_by_permutation(strictly_upper_triangular(n, q), sigma)
    return random_subspace_of(base, int(rng.integers(0, base.dim + 1)), rng)


def _combin_trial(t: int, seed: int, max_n: int) -> dict:
    V = zero_spectrum_instance(seed, t, max_n)
    out = {"trial": t, "n": V.n, "q": V.q, "dim": V.dim}
    zs = nilspec.has_zero_spectrum_property(V)
    if zs.status is not Status.PASS:
        return {**out, "status": "FAIL", "why": "instance is not zero-spectrum", "subspace": V.to_dict()}
    try:
        w = nilspec.find_zero_row_index(V)
    except NoZeroRowIndex:
        return {**out, "status": "FAIL", "why": "NoZeroRowIndex", "subspace": V.to_dict()}
    W = nilspec.last_column_constrained(V)
    checks = {
        "witness": w.verify(V),
        "bound": nilspec.check_gerstenhaber_bound(V).status is Status.PASS,
        "block_dim": V.dim <= (V.n - 1) + W.dim,
    }
    if not all(checks.values()):
        return {**out, "status": "FAIL", "why": checks, "subspace": V.to_dict()}
    return {**out, "status": "PASS", "index": w.index}


def _triangularize_trial(t: int, seed: int, max_n: int, modes) -> dict:
    V = zero_spectrum_instance(seed, t, max_n)
    out = {"trial": t, "n": V.n, "q": V.q, "dim": V.dim}
    res = {}
    for mode in modes:
        try:
            sigma = nilspec.triangularizing_permutation(V, mode)
            res[mode] = nilspec.triangularizes(V, sigma)
        except TriangularizationNotFound:
            res[mode] = False
    if all(res.values()):
        return {**out, "status": "PASS"}
    return {**out, "status": "FAIL", "why": res, "subspace": V.to_dict()}


def _trial_suite(name, fn, trials, seed, workers, params, inject_failure, t0) -> Verdict:
    results = _pmap(fn, range(trials), workers)
    statuses = [Status(r["status"]) for r in results]
    counts = {s.value: statuses.count(s) for s in Status if statuses.count(s)}
    counts["trials"] = len(results)
    fails = [r for r in results if r["status"] == Status.FAIL.value]
    witness = fails[0] if fails else {}
    v = Verdict(name, _worst(statuses), params, seed=seed, counts=counts, witness=witness)
    return _finish(v, t0, inject_failure)


def suite_combin(trials: int = 1000, seed: int = DEFAULT_SEED, max_n: int = 5, workers=1, inject_failure=False):
    """find_zero_row_index on seeded zero-spectrum subspaces; zero NoZeroRowIndex events expected."""
    t0 = time.perf_counter()
    fn = partial(_combin_trial, seed=seed, max_n=max_n)
    return _trial_suite("combin", fn, trials, seed, workers, {"max_n": max_n}, inject_failure, t0)


def suite_triangularize(
    trials: int = 1000,
    seed: int = DEFAULT_SEED,
    max_n: int = 5,
    modes=(nilspec.RECURSIVE, nilspec.EXHAUSTIVE),
    workers=1,
    inject_failure=False,
):
    """Triangularization on the same instances as suite_combin; each returned
    permutation is re-verified through the generic intersection routine."""
    t0 = time.perf_counter()
    modes = tuple(m.upper() for m in modes)
    fn = partial(_triangularize_trial, seed=seed, max_n=max_n, modes=modes)
    params = {"max_n": max_n, "modes": list(modes)}
    return _trial_suite("triangularize", fn, trials, seed, workers, params, inject_failure, t0)


def suite_cycle_witness(n: int = 4, q: int = 3, trials: int = 50, seed: int = DEFAULT_SEED, inject_failure=False):
    """Random maps f on 1..n: the assembled cycle matrix always has eigenvalue 1.

    V is the span of the required elementary matrices plus random extra
    vectors, so every such V must fail the zero-spectrum property.
    """
    t0 = time.perf_counter()
    field = Fq(q)
    statuses, bad = [], None
    for t in range(trials):
        rng = _rng(seed, t)
        f = {k: int(rng.integers(1, n + 1)) for k in range(1, n + 1)}
        vecs = [ffmat.elementary(n, n, v, k, field).vec() for k, v in f.items()]
        extra = rng.integers(0, q, size=(int(rng.integers(0, 3)), n * n))
        V = MatSubspace(n, n, field, np.vstack([np.array(vecs), extra]) if len(extra) else np.array(vecs))
        w = nilspec.build_cycle_witness(V, f, start=int(rng.integers(1, n + 1)))
        ok = w.verify(V) and nilspec.has_zero_spectrum_property(V).status is Status.FAIL
        statuses.append(Status.PASS if ok else Status.FAIL)
        if not ok and bad is None:
            bad = {"subspace": V.to_dict(), "cycle": w.to_dict()}
    v = Verdict(
        "cycle_witness",
        _worst(statuses),
        {"n": n, "q": q},
        seed=seed,
        counts={"trials": trials, "PASS": statuses.count(Status.PASS)},
        witness=bad or {},
    )
    return _finish(v, t0, inject_failure)


# spanning theorems on random subspaces


def _summarize(checks: list[Verdict]) -> dict:
    worst = _worst(c.status for c in checks)
    out = {"status": worst.value, "statuses": [c.status.value for c in checks]}
    if worst is not Status.PASS:
        first = next(c for c in checks if c.status is worst)
        out["first"] = {"params": first.params, "witness": first.witness}
    return out


def _audit(v: Verdict) -> Verdict:
    """Independently re-check a PASS certificate before counting it."""
    cert = v.witness.get("certificate")
    if v.status is Status.PASS and cert is not None:
        if not strata.SpanCertificate.from_dict(cert).verify():
            return Verdict(v.suite, Status.FAIL, v.params, witness={**v.witness, "predicate": "certificate re-check"})
    return v


def _ranks(low: int, high: int, only_r) -> list[int]:
    return [r for r in range(low, high + 1) if only_r is None or r == only_r]


def _lcinf_trial(t: int, n: int, p: int, q: int, seed: int, budget, only_r=None) -> dict:
    rng = _rng(seed, t)
    V = random_subspace(n, p, q, int(rng.integers(0, n)), rng)
    checks = [_audit(strata.check_lcinf(V, r, s, budget)) for r in _ranks(1, p, only_r) for s in range(0, r + 1)]
    return {"trial": t, "codim": V.codim, **_summarize(checks)}


def _exist_trial(t: int, n: int, p: int, q: int, seed: int, budget, only_r=None) -> dict:
    rng = _rng(seed, t)
    V = random_subspace(n, p, q, int(rng.integers(0, n)), rng)
    checks = []
    for r in _ranks(1, p, only_r):
        v = strata.check_exist(V, r, budget)
        if v.status is Status.PASS:
            M = FqMat(v.witness["element"], q)
            if ffmat.rank(M) != r or not V.contains(M):
                v = Verdict(v.suite, Status.FAIL, v.params, witness={**v.witness, "predicate": "witness re-check"})
        checks.append(v)
    return {"trial": t, "codim": V.codim, **_summarize(checks)}


def _condsuff_trial(t: int, n: int, p: int, q: int, seed: int, budget, only_r=None) -> dict:
    checks = []
    for r in _ranks(1, p - 1, only_r):
        rng = _rng(seed, t, r)
        top = min(n - 1, strata.condsuff_bound(r))
        V = random_subspace(n, p, q, int(rng.integers(0, top + 1)), rng)
        checks.append(_audit(strata.check_condsuff(V, r, budget)))
    return {"trial": t, **_summarize(checks)}


def _genrangmax_trial(t: int, n: int, p: int, q: int, seed: int, budget, only_r=None) -> dict:
    rng = _rng(seed, t)
    top = n - 2 if (n, p, q) == (2, 2, 2) else n - 1
    V = random_subspace(n, p, q, int(rng.integers(0, top + 1)), rng)
    return {"trial": t, "codim": V.codim, **_summarize([_audit(strata.check_genrangmax(V, budget))])}


_SPAN_TRIALS = {
    "lcinf": _lcinf_trial,
    "exist": _exist_trial,
    "condsuff": _condsuff_trial,
    "genrangmax": _genrangmax_trial,
}


def _spanning_suite(name, n, p, q, trials, seed, workers, budget, inject_failure, r=None) -> Verdict:
    if not n >= p >= 1:
        raise ValueError(f"need n >= p >= 1, got n={n}, p={p}")
    if name == "condsuff" and p < 2:
        raise ValueError("condsuff needs p >= 2 (r ranges over 1..p-1)")
    if r is not None:
        top = p - 1 if name == "condsuff" else p
        if name == "genrangmax" and r != p:
            raise ValueError("genrangmax is about rank r = p")
        if not 1 <= r <= top:
            raise ValueError(f"r={r} out of range 1..{top} for {name}")
    t0 = time.perf_counter()
    fn = partial(_SPAN_TRIALS[name], n=n, p=p, q=q, seed=seed, budget=budget, only_r=r)
    params = {"n": n, "p": p, "q": q, "trials": trials}
    if r is not None:
        params["r"] = r
    return _trial_suite(name, fn, trials, seed, workers, params, inject_failure, t0)


def suite_lcinf(n, p, q, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, workers=1, budget=None, inject_failure=False, r=None):
    """Every rank-s element is a combination of rank-r elements, all 1 <= r <= p, 0 <= s <= r."""
    return _spanning_suite("lcinf", n, p, q, trials, seed, workers, budget, inject_failure, r)


def suite_exist(n, p, q, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, workers=1, budget=None, inject_failure=False, r=None):
    return _spanning_suite("exist", n, p, q, trials, seed, workers, budget, inject_failure, r)


def suite_condsuff(n, p, q, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, workers=1, budget=None, inject_failure=False, r=None):
    """For each r in 1..p-1, a fresh subspace with codim <= min(n-1, C(r+2,2)-2) per trial."""
    return _spanning_suite("condsuff", n, p, q, trials, seed, workers, budget, inject_failure, r)


def suite_genrangmax(n, p, q, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, workers=1, budget=None, inject_failure=False, r=None):
    return _spanning_suite("genrangmax", n, p, q, trials, seed, workers, budget, inject_failure, r)


def suite_corhyper(n: int, q: int, budget=None, inject_failure=False) -> Verdict:
    """Every hyperplane of Mat_n(F_q) is spanned by its rank-r elements for all r, bar (2, 2, F_2)."""
    t0 = time.perf_counter()
    counts = {"hyperplanes": 0, "exceptions": 0, "exceptions_t2plus": 0}
    for r in range(1, n + 1):
        counts[f"spanned_r{r}"] = 0
    statuses, witness = [], {}
    try:
        for _, H in iter_hyperplanes(n, q):
            counts["hyperplanes"] += 1
            for r in range(1, n + 1):
                cert = strata.find_span_certificate(H, r, budget)
                if cert is not None and cert.verify():
                    counts[f"spanned_r{r}"] += 1
                    statuses.append(Status.PASS)
                elif (n, r, q) == (2, 2, 2):
                    counts["exceptions"] += 1
                    counts["exceptions_t2plus"] += classify_hyperplane_2x2_F2(H) is HyperplaneClass.T2PLUS_CLASS
                    statuses.append(Status.EXCEPTION_REGIME)
                else:
                    statuses.append(Status.FAIL)
                    witness = witness or {"subspace": H.to_dict(), "r": r, "predicate": "span_of_rank(H, r) == H"}
    except BudgetExceeded as exc:
        statuses.append(Status.BUDGET_EXCEEDED)
        witness = {"required": exc.required, "budget": exc.budget}
    expected = grassmann.gaussian_binomial(n * n, 1, q)
    if Status.BUDGET_EXCEEDED not in statuses and counts["hyperplanes"] != expected:
        raise RuntimeError(f"scanned {counts['hyperplanes']} hyperplanes, expected {expected}")
    counts["expected"] = expected
    v = Verdict("corhyper", _worst(statuses), {"n": n, "q": q}, counts=counts, witness=witness)
    return _finish(v, t0, inject_failure)


# affine suites


def suite_flanders(n: int, p: int, q: int, budget=None, inject_failure=False) -> Verdict:
    """Scan all cosets of codim <= n for ones avoiding rank p."""
    if n < p:
        raise ValueError("need n >= p")
    t0 = time.perf_counter()
    field = Fq(q)
    m = n * p
    counts, statuses, witness = {}, [], {}
    exception_example = None
    try:
        for codim in range(0, n + 1):
            d = m - codim
            if d < 0:
                continue
            c = {"cosets": 0, "avoiding": 0, "avoiding_nonlinear": 0}
            for bases, reps, ranks in affine.scan_cosets(n, p, q, d, budget):
                avoid = ~(ranks == p).any(axis=2)
                c["cosets"] += avoid.size
                c["avoiding"] += int(avoid.sum())
                nonlinear = avoid.copy()
                nonlinear[:, 0] = False
                c["avoiding_nonlinear"] += int(nonlinear.sum())
                if avoid.any() and (codim < n or nonlinear.any()):
                    sel = np.argwhere(avoid if codim < n else nonlinear)[0]
                    A = affine.AffineMatSubspace(
                        FqMat.from_vector(reps[sel[1]], n, p, field), MatSubspace(n, p, field, bases[sel[0]])
                    )
                    rv = affine.check_flanders(A, budget)
                    statuses.append(rv.status)
                    if rv.status is Status.EXCEPTION_REGIME and exception_example is None:
                        exception_example = A.to_dict()
                    elif rv.status is Status.FAIL and not witness:
                        witness = rv.witness
            if c["cosets"] != affine.coset_count(n, p, q, d):
                raise RuntimeError(f"coset count mismatch at codim {codim}")
            counts[f"codim={codim}"] = c
    except BudgetExceeded as exc:
        statuses.append(Status.BUDGET_EXCEEDED)
        witness = {"required": exc.required, "budget": exc.budget}
    if exception_example is not None and not witness:
        witness = {"exception_example": exception_example}
    v = Verdict("flanders", _worst(statuses), {"n": n, "p": p, "q": q}, counts=counts, witness=witness)
    return _finish(v, t0, inject_failure)


def hbound_points(max_np: int = 12):
    return [(n, p, k) for n in range(1, max_np + 1) for p in range(1, n + 1) if n * p <= max_np for k in range(1, p + 1)]


def suite_hbound(
    points=None, qs=(2, 3), mode: str = affine.CONSTRUCT, max_np: int = 12, budget=None, inject_failure=False
) -> Verdict:
    """h(n,p,k) = np - C(k+1,2): CONSTRUCT sweeps the lower bound, EXHAUSTIVE the upper bound."""
    t0 = time.perf_counter()
    points = hbound_points(max_np) if points is None else [tuple(x) for x in points]
    counts, statuses, witness = {}, [], {}
    for q in qs:
        for n, p, k in points:
            v = affine.check_h_bound(n, p, k, q, mode, budget)
            statuses.append(v.status)
            counts[f"{n},{p},{k},q={q}"] = {"status": v.status.value, **v.counts}
            if v.status is Status.FAIL and not witness:
                witness = v.witness
    params = {"points": [list(x) for x in points], "qs": list(qs), "mode": mode.upper()}
    return _finish(Verdict("hbound", _worst(statuses), params, counts=counts, witness=witness), t0, inject_failure)


def suite_tightness(n: int, p: int, r: int, q: int, budget=None, inject_failure=False) -> Verdict:
    """The constructed subspace of codim C(r+2,2)-1 is not spanned by its rank-r elements."""
    t0 = time.perf_counter()
    params = {"n": n, "p": p, "r": r, "q": q}
    A = affine.extremal_affine(n, p, r + 1, q, budget, verify=False)
    V = A.linear_span()
    try:
        S = strata.span_of_rank(V, r, budget)
        escaped = 0
        for blk in strata.element_blocks(V, budget):
            low = blk[ffmat.ranks_of(blk, q) <= r]
            escaped += int((~A.direction.contains_vectors(low.reshape(len(low), -1))).sum()) if len(low) else 0
    except BudgetExceeded as exc:
        v = Verdict("tightness", Status.BUDGET_EXCEEDED, params, witness={"required": exc.required, "budget": exc.budget})
        return _finish(v, t0, inject_failure)
    cs = strata.check_condsuff(V, r, budget) if 1 <= r <= p - 1 else None
    counts = {
        "dim": V.dim,
        "codim": V.codim,
        "expected_codim": comb(r + 2, 2) - 1,
        "span_of_rank_dim": S.dim,
        "low_rank_outside_direction": escaped,
        "elements": q**V.dim,
        "condsuff_status": cs.status.value if cs else None,
    }
    ok = V.codim == comb(r + 2, 2) - 1 and S.dim < V.dim and S <= A.direction and escaped == 0
    witness = {"subspace": V.to_dict(), "direction": A.direction.to_dict()}
    if not ok:
        witness["predicate"] = "codim == C(r+2,2)-1 and span_of_rank(V, r) proper"
    v = Verdict("tightness", Status.PASS if ok else Status.FAIL, params, counts=counts, witness=witness)
    return _finish(v, t0, inject_failure)


# re-checking stored verdicts


def recheck(v: Verdict | dict, budget=None) -> Verdict:
    """Re-run the module-level check behind a stored check verdict.

    Only verdicts whose witness stores the object they were computed on
    (failures, exceptions, and hypothesis-level witnesses) can be replayed.
    """
    if isinstance(v, dict):
        v = Verdict.from_dict(v)
    w, prm = v.witness, v.params
    key = "affine" if v.suite in ("flanders", "hbound") else "subspace"
    if key not in w:
        raise ValueError(f"{v.suite} verdict with status {v.status.value} stores no {key} to re-check")
    if key == "affine":
        A = affine.AffineMatSubspace.from_dict(w["affine"])
        if v.suite == "flanders":
            return affine.check_flanders(A, budget)
        # an hbound counterexample is a coset of dimension > h with no element of rank < k
        mr = affine.min_rank(A, budget)
        bad = A.dim > affine.h_value(A.n, A.p, prm["k"]) and mr >= prm["k"]
        return Verdict("hbound", Status.FAIL if bad else Status.PASS, prm, counts={"min_rank": mr}, witness=w)
    V = MatSubspace.from_dict(w["subspace"])
    checks = {
        "zero_spectrum": lambda: nilspec.has_zero_spectrum_property(V, budget),
        "gerstenhaber_bound": lambda: nilspec.check_gerstenhaber_bound(V),
        "lcinf": lambda: strata.check_lcinf(V, prm["r"], prm["s"], budget),
        "exist": lambda: strata.check_exist(V, prm["r"], budget),
        "condsuff": lambda: strata.check_condsuff(V, prm["r"], budget),
        "genrangmax": lambda: strata.check_genrangmax(V, budget),
    }
    if v.suite not in checks:
        raise ValueError(f"no re-check available for suite {v.suite!r}")
    return checks[v.suite]()


SUITES = (
    "oddcase",
    "gerstenhaber",
    "lcinf",
    "exist",
    "condsuff",
    "genrangmax",
    "corhyper",
    "flanders",
    "hbound",
    "tightness",
    "combin",
    "triangularize",
)
