import numpy as np
import pytest
from hypothesis import given, strategies as st

from lielab.constructions import build_matrix_lie, matrix_algebra, matrix_unit
from lielab.errors import CharTooSmall, DuplicateNodes, NonSplitOperator, NonzeroDegreeRequired, NotRegular
from lielab.exactcore import GF, ExactMatrix, nilpotency_index
from lielab.grading import (
    complete_sl2,
    d_surrogate,
    exp_ad,
    grading_from_h,
    graded_word_bound_check,
    is_automorphism,
    regularity_witness,
    root_space_decomposition,
    root_string_check,
    run_pipeline,
    vandermonde_recover,
)

import oracles


class TestSl2:
    def test_regularity_witness_sl2(self, sl2_11):
        w = regularity_witness(sl2_11, sl2_11["e"])
        # [e, [e, 5f]] = 5 * (-2e) = e mod 11
        assert w.coeffs.tolist() == [0, 0, 5]

    def test_triple_from_e13(self, sl3_11):
        t = complete_sl2(sl3_11, sl3_11["E13"])
        assert t.check() == []
        assert t.h.coeffs.tolist() == ((sl3_11["H1"].coeffs + sl3_11["H2"].coeffs) % 11).tolist()
        assert t.f.coeffs.tolist() == sl3_11["E31"].coeffs.tolist()

    def test_not_regular(self):
        from lielab.constructions import heisenberg

        H = heisenberg(GF(7))
        with pytest.raises(NotRegular):
            complete_sl2(H, H.basis_element(2))

    @pytest.mark.parametrize("series,n", [("sl", 3), ("sp", 4), ("o", 5), ("sl", 4)])
    def test_triple_relations_by_matrices(self, series, n):
        F = GF(11)
        rep = run_pipeline(series, n, F)
        assert rep.passed, rep.error
        t = rep.triple
        L = t.parent
        mats = [[[int(c) for c in row] for row in (sum(int(t_) * m.data for t_, m in zip(x.coeffs, L.realization)) % 11)]
                for x in (t.e, t.h, t.f)]
        E, Hm, Fm = mats
        assert oracles.commutator(E, Fm, 11) == Hm
        assert oracles.commutator(Hm, E, 11) == [[2 * c % 11 for c in r] for r in E]
        assert oracles.commutator(Hm, Fm, 11) == [[-2 * c % 11 for c in r] for r in Fm]


class TestGradings:
    @pytest.mark.parametrize("series,n,dims", [("sl", 3, (1, 2, 2, 2, 1)), ("sp", 4, (1, 2, 4, 2, 1)),
                                               ("o", 5, (1, 2, 4, 2, 1))])
    def test_pipeline_dims(self, series, n, dims):
        rep = run_pipeline(series, n, GF(11))
        assert rep.passed
        assert rep.grading.dims == dims
        assert rep.grading.violations() == []
        assert sum(dims) == rep.grading.parent.dim

    def test_pipeline_bad_char(self):
        rep = run_pipeline("sl", 2, GF(2))
        assert rep.failed_stage == "build" and rep.error.startswith("BAD_CHAR")

    def test_m3_grading(self):
        F = GF(11)
        R = matrix_algebra(3, F)
        h = F.reduce(matrix_unit(F, 3, 0, 0) - matrix_unit(F, 3, 2, 2)).ravel()
        G = grading_from_h(R, h)
        assert G.dims == (1, 2, 3, 2, 1)
        assert G.violations() == []

    def test_grading_needs_spectrum(self, sl3_11):
        h = (3 * sl3_11["H1"].coeffs) % 11
        with pytest.raises(NonSplitOperator):
            grading_from_h(sl3_11, h)

    def test_root_spaces_kill_strings(self, sl3_11):
        # diag(1, 2, -3) is regular semisimple; its roots are the six differences
        a = (sl3_11["H1"].coeffs * 1 + sl3_11["H2"].coeffs * 3) % 11
        G = root_space_decomposition(sl3_11, a)
        nonzero = [d for d in G.degrees if d != 0]
        assert len(nonzero) == 6 and G.parts[0].dim == 2
        assert G.violations() == []
        assert root_string_check(sl3_11, G, len(nonzero)) == []

    def test_d_surrogate(self, sl3_11):
        D = d_surrogate(sl3_11, sl3_11.basis_elements())
        assert D.value == 5  # ad(H1) is diagonalizable with the five eigenvalues 0, +-1, +-2
        assert D.candidates == 8


class TestExpAndVandermonde:
    def test_sl2_chain(self, sl2_11):
        out = vandermonde_recover(sl2_11, sl2_11["e"], sl2_11["f"], [1, 2, 3])
        # f, [e, f] = h, [e, h]/2 = -e
        assert [v.tolist() for v in out] == [[0, 0, 1], [0, 1, 0], [10, 0, 0]]

    def test_duplicate_nodes(self, sl2_11):
        with pytest.raises(DuplicateNodes):
            vandermonde_recover(sl2_11, sl2_11["e"], sl2_11["f"], [1, 1, 2])

    @given(st.integers(0, 2**31), st.integers(1, 10))
    def test_exp_inverse(self, seed, xi):
        L = build_matrix_lie("sl", 3, GF(11))
        rng = np.random.default_rng(seed)
        x = L.zero().coeffs.copy()
        for lab in ("E12", "E13", "E23"):
            x = (x + int(rng.integers(0, 11)) * L[lab].coeffs) % 11
        if not x.any():
            return
        S, Sinv = exp_ad(L, x, xi), exp_ad(L, x, -xi)
        assert (S @ Sinv) == ExactMatrix.identity(L.field, L.dim)
        assert is_automorphism(L, S)

    @given(st.integers(0, 2**31))
    def test_recovery_matches_direct_chain(self, seed):
        L = build_matrix_lie("sl", 3, GF(11))
        rng = np.random.default_rng(seed)
        x = L.zero().coeffs.copy()
        for lab in ("E12", "E13", "E23"):
            x = (x + int(rng.integers(0, 11)) * L[lab].coeffs) % 11
        if not x.any():
            return
        v = rng.integers(0, 11, size=L.dim)
        d = nilpotency_index(L.ad(x))
        nodes = [int(c) for c in rng.choice(np.arange(1, 11), size=d, replace=False)]
        got = vandermonde_recover(L, x, v, nodes)
        ad = oracles.ad_matrix_from_structure(L.structure, L.dim, x.tolist(), 11)
        cur, fact = v.tolist(), 1
        for k in range(d):
            fact = fact * max(k, 1)
            expect = [c * pow(fact, -1, 11) % 11 for c in cur]
            assert got[k].tolist() == expect
            cur = [sum(ad[i][j] * cur[j] for j in range(L.dim)) % 11 for i in range(L.dim)]


class TestWordBound:
    def _setup(self):
        F = GF(11)
        R = matrix_algebra(3, F)
        h = F.reduce(matrix_unit(F, 3, 0, 0) - matrix_unit(F, 3, 2, 2)).ravel()
        return F, R, grading_from_h(R, h)

    def test_bound(self):
        F, R, G = self._setup()
        gens = [matrix_unit(F, 3, i, j).ravel() for i, j in ((0, 1), (1, 2), (1, 0), (2, 1))]
        rep = graded_word_bound_check(R, G, gens)
        assert (rep.M, rep.n, rep.N) == (2, 4, 12)
        assert rep.assoc_dim == 9 and rep.lie_dim == 8
        assert rep.holds and rep.bound == 8 ** 13

    def test_single_generator(self):
        F, R, G = self._setup()
        rep = graded_word_bound_check(R, G, [matrix_unit(F, 3, 0, 1).ravel()])
        assert rep.assoc_dim == 1

    def test_degree_zero_rejected(self):
        F, R, G = self._setup()
        with pytest.raises(NonzeroDegreeRequired):
            graded_word_bound_check(R, G, [matrix_unit(F, 3, 1, 1).ravel()])

    def test_small_characteristic(self):
        from lielab.grading import derivation_of, eigen_grading

        F = GF(3)
        R = matrix_algebra(3, F)
        h = F.reduce(matrix_unit(F, 3, 0, 0) - matrix_unit(F, 3, 2, 2)).ravel()
        G = eigen_grading(R, derivation_of(R, h), range(-4, 5))
        with pytest.raises(CharTooSmall):
            graded_word_bound_check(R, G, [matrix_unit(F, 3, 0, 1).ravel()])
