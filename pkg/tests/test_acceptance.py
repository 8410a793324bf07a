"""Acceptance criteria, each at its exact tolerance.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
pytest terminal summary.  Run alone with

    pytest tests/test_acceptance.py -v -s
"""

import functools
import time

import numpy as np

from lielab.algcore import center, commutator_algebra, derived
from lielab.cli import SUITES, run_pipeline_command, run_properties, run_theorem3
from lielab.constructions import (
    BilinearForm,
    build_matrix_lie,
    heisenberg,
    matrix_algebra,
    matrix_unit,
    square_zero_element,
    tkk_skew,
)
from lielab.degeneracy import (
    all_elements,
    all_s_sequences_terminate,
    locally_degenerate_element,
    sandwich_set,
    sequence_step,
    verify_witness,
)
from lielab.exactcore import GF, QQ, ExactMatrix, is_zero, nilpotency_index
from lielab.grading import exp_ad, grading_from_h, graded_word_bound_check, is_automorphism, run_pipeline, vandermonde_recover
from lielab.jordan import IDENTITY_NAMES, descend_to_jordan, kostrikin_descent, verify_identities
from lielab.tower import (
    build_theorem3_level,
    commutator_obstruction,
    frontier_certificate,
    simplicity_certificate,
    theorem3_signature,
    trace_transport,
)

RESULTS: dict = {}


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS[number] = (title, False, f"{type(exc).__name__}: {exc}")
                print(f"criterion {number:2d} FAIL  {title}: {type(exc).__name__}: {exc}")
                raise
            RESULTS[number] = (title, True, detail)
            print(f"criterion {number:2d} PASS  {title}: {detail}")

        return run

    return wrap


@criterion(1, "involutive tower levels 1 and 2 at p = 3")
def test_c01_theorem3():
    t0 = time.perf_counter()
    L1 = build_theorem3_level(3, 1)
    L2 = build_theorem3_level(3, 2)
    reps = [commutator_obstruction(L1), commutator_obstruction(L2)]
    assert [(r.dim_K, r.dim_D) for r in reps] == [(9, 8), (81, 80)]
    for r in reps:
        assert r.passed and r.obstruction_outside_D and r.trace_of_obstruction == "1"
    tt = trace_transport(L1, L2)
    assert tt.preserved and tt.image_in_K and tt.obstruction_image_outside_D
    sc = simplicity_certificate(L1, seed=0, target=L2)
    assert sc.passed and sc.passed_probes == sc.probes
    # level 2 is the frontier: its step into M27 + M27 is certified on matrices
    fc = frontier_certificate(L2, theorem3_signature(3), seed=0)
    assert fc.passed and fc.trace_preserved and fc.obstruction_trace == "1"
    assert fc.passed_probes == fc.probes
    elapsed = time.perf_counter() - t0
    assert elapsed < 60, f"took {elapsed:.1f} s"
    return (f"K/[K,K] dims (9,8),(81,80); traces preserved; probes {sc.probes}+{fc.probes} pass; "
            f"{elapsed:.1f} s")


@criterion(2, "Jordan identity suite on sl4(GF(11))")
def test_c02_identities():
    F = GF(11)
    L = build_matrix_lie("sl", 4, F)
    x = square_zero_element("sl", 4, F)
    rep = verify_identities(L, x, trials=200, seed=0)
    assert [r.name for r in rep.results] == list(IDENTITY_NAMES)
    assert all(r.trials == 200 and r.failures == 0 for r in rep.results)
    return f"{rep.checks} checks, 0 failures"


@criterion(3, "Kostrikin descent on sl3 and sp4 over GF(11)")
def test_c03_descent():
    F = GF(11)
    total = 0
    summary = []
    for series, n in (("sl", 3), ("sp", 4)):
        L = build_matrix_lie(series, n, F)
        nil = [b.coeffs for b in L.basis_elements() if nilpotency_index(L.ad(b.coeffs)) is not None]
        cands = nil + [F.reduce(u + v) for i, u in enumerate(nil) for v in nil[i + 1:]]
        tests = [(a, nilpotency_index(L.ad(a))) for a in cands if a.any()]
        tests = [(a, m) for a, m in tests if m is not None and m >= 4]
        assert tests
        for a, m in tests:
            for deg in range(m, F.p):
                for b in L.basis_elements():
                    y = kostrikin_descent(L, a, b, deg)
                    assert (L.ad(y.coeffs) ** (deg - 1)).is_zero()
                    total += 1
        start, m0 = max(tests, key=lambda t: t[1])
        trace = descend_to_jordan(L, start)
        assert trace.reached_jordan
        fin = trace.final.coeffs
        assert not is_zero(fin) and (L.ad(fin) ** 3).is_zero()
        summary.append(f"{series}{n}: index {m0} -> 3 in {len(trace.steps)} step(s)")
    return f"{total} (a, b, n) checks exact; " + "; ".join(summary)


@criterion(4, "square-zero element to 5-grading for sl3, sp4, o5")
def test_c04_pipeline():
    dims = {}
    for series, n in (("sl", 3), ("sp", 4), ("o", 5)):
        rep = run_pipeline(series, n, GF(11))
        assert rep.passed, f"{series}{n} failed at {rep.failed_stage}: {rep.error}"
        assert rep.triple.check() == []
        G = rep.grading
        assert G.is_direct() and G.violations() == []
        dims[f"{series}{n}"] = G.dims
    assert dims["sl3"] == (1, 2, 2, 2, 1)
    return ", ".join(f"{k} {v}" for k, v in dims.items())


@criterion(5, "Vandermonde recovery and exp_ad on sl3(GF(11))")
def test_c05_vandermonde():
    F = GF(11)
    L = build_matrix_lie("sl", 3, F)
    upper = [L[lab].coeffs for lab in ("E12", "E13", "E23")]
    rng = np.random.default_rng(0)
    pairs = 0
    while pairs < 50:
        x = F.reduce(sum(int(rng.integers(0, 11)) * u for u in upper))
        if is_zero(x):
            continue
        d = nilpotency_index(L.ad(x))
        assert d <= 5
        v = F.random_vector(rng, L.dim)
        nodes = [int(c) for c in rng.choice(np.arange(1, 11), size=d, replace=False)]
        rec = vandermonde_recover(L, x, v, nodes)
        X, cur = L.ad(x), v
        for k in range(d):
            assert np.array_equal(rec[k], F.reduce(cur * F.factorial_inverse(k)))
            cur = X @ cur
        S = exp_ad(L, x, int(rng.integers(1, 11)))
        assert is_automorphism(L, S)
        pairs += 1
    return f"{pairs} pairs recovered exactly; exp_ad preserves all {L.dim ** 2} basis brackets"


@criterion(6, "graded-word bound on M3(GF(11))")
def test_c06_words():
    F = GF(11)
    R = matrix_algebra(3, F)
    h = F.reduce(matrix_unit(F, 3, 0, 0) - matrix_unit(F, 3, 2, 2)).ravel()
    G = grading_from_h(R, h)
    gens = [matrix_unit(F, 3, i, j).ravel() for i, j in ((0, 1), (1, 2), (1, 0), (2, 1))]
    rep = graded_word_bound_check(R, G, gens)
    assert rep.assoc_dim == 9 and rep.N == 12 and rep.M == 2 and rep.n == 4
    assert rep.assoc_dim <= rep.lie_dim ** (rep.N + 1) and rep.holds
    return f"dim Assoc = 9 <= {rep.lie_dim}^13 with N = 12"


@criterion(7, "degeneracy suite over GF(5)")
def test_c07_degeneracy():
    F = GF(5)
    sl2 = build_matrix_lie("sl", 2, F)
    ex = sandwich_set(sl2, "exact")
    assert ex.examined == 124 and ex.count == 0
    H = heisenberg(F)
    elems = all_elements(H)[1:]
    assert all(locally_degenerate_element(H, v) for v in elems)
    res = all_s_sequences_terminate(sl2, sl2["e"], [sl2["f"]])
    assert not res.terminates and verify_witness(sl2, res.witness)
    w = res.witness
    for k, s in enumerate(w.steps):
        assert np.array_equal(sequence_step(sl2, w.states[k], s), w.states[k + 1])
    return f"0 sandwiches in sl2; {len(elems)} heisenberg elements locally degenerate; witness of length {len(w.steps)} verified"


@criterion(8, "TKK dimension law over GF(11)")
def test_c08_tkk():
    dims = []
    for m in range(1, 6):
        L = tkk_skew(BilinearForm(ExactMatrix.identity(GF(11), m)))
        assert L.dim == (m + 3) * (m + 2) // 2
        assert center(L).dim == 0
        dims.append(L.dim)
    return f"dims {tuple(dims)}, centers 0"


@criterion(9, "Z(M_n) and [M_n, M_n] meet trivially over Q")
def test_c09_rationals():
    for n in (2, 3, 4):
        gl = commutator_algebra(matrix_algebra(n, QQ))
        Z, D = center(gl), derived(gl)
        assert Z.dim == 1 and D.dim == n * n - 1
        assert Z.intersection(D).dim == 0
    return "n = 2, 3, 4: intersection 0"


@criterion(10, "determinism of reports modulo timing")
def test_c10_determinism():
    runs = [lambda: run_properties(s, seed=3) for s in SUITES]
    runs.append(lambda: run_pipeline_command("sp", 4, 11, seed=3))
    runs.append(lambda: run_theorem3(3, levels=1, seed=3))
    for make in runs:
        a, b = make(), make()
        assert a.without_timing() == b.without_timing()
        assert a.to_json().split('"timing"')[0] == b.to_json().split('"timing"')[0]
    return f"{len(runs)} commands reproduced byte-for-byte"
