import numpy as np
import pytest
from hypothesis import given, strategies as st

from lielab.algcore import center, derived
from lielab.constructions import (
    BilinearForm,
    build_matrix_lie,
    direct_sum,
    exchange_involution,
    form_matrix,
    from_matrix,
    heisenberg,
    matrix_algebra,
    matrix_pair_algebra,
    one_dim_jordan,
    opposite,
    skew_part,
    square_zero_element,
    symmetric_matrix_jordan,
    tkk_skew,
    to_matrix,
    transpose_involution,
)
from lielab.errors import AxiomViolation, BadChar, BadParity, DegenerateForm, NoSuchElement
from lielab.exactcore import GF, QQ, ExactMatrix

import oracles

DIMS = {
    "gl": lambda n: n * n,
    "sl": lambda n: n * n - 1,
    "o": lambda n: n * (n - 1) // 2,
    "sp": lambda n: n * (n + 1) // 2,
}


def _valid(series, n):
    return not (series == "sp" and n % 2) and not (series == "sl" and n < 2)


@given(st.sampled_from(sorted(DIMS)), st.integers(2, 6), st.sampled_from([5, 7, 11]))
def test_series_dimensions(series, n, p):
    if not _valid(series, n):
        return
    L = build_matrix_lie(series, n, GF(p))
    assert L.dim == DIMS[series](n)


@given(st.sampled_from(["o", "sp"]), st.integers(2, 6))
def test_skew_condition_holds_on_basis(series, n):
    if not _valid(series, n):
        return
    F = GF(11)
    L = build_matrix_lie(series, n, F)
    G = form_matrix(series, n, F).tolist()
    for M in L.realization:
        X = M.data.tolist()
        Xt = [list(r) for r in zip(*X)]
        lhs = oracles.matmul(Xt, G, 11)
        rhs = oracles.matmul(G, X, 11)
        assert all((a + b) % 11 == 0 for r, s in zip(lhs, rhs) for a, b in zip(r, s))


def test_paper_forms_and_dims():
    F = GF(11)
    G = form_matrix("sp", 4, F)
    assert G.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1], [10, 0, 0, 0], [0, 10, 0, 0]]
    G5 = form_matrix("o", 5, F)
    assert G5[0, 0] == 1 and G5[1, 3] == 1 and G5[3, 1] == 1
    assert build_matrix_lie("sp", 4, F).dim == 10
    assert build_matrix_lie("o", 5, F).dim == 10


def test_errors():
    with pytest.raises(BadParity):
        build_matrix_lie("sp", 3, GF(11))
    with pytest.raises(BadChar):
        build_matrix_lie("o", 4, GF(2))
    with pytest.raises(NoSuchElement):
        square_zero_element("o", 3, GF(11))


@given(st.sampled_from([("sl", n) for n in range(2, 6)] + [("sp", 2), ("sp", 4), ("sp", 6)]
                       + [("o", n) for n in range(4, 8)]))
def test_square_zero_element(case):
    series, n = case
    F = GF(11)
    a = square_zero_element(series, n, F)
    A = to_matrix(a).data.tolist()
    assert oracles.is_zero_matrix(oracles.matmul(A, A, 11))
    assert not oracles.is_zero_matrix(A)
    L = a.parent
    ad = oracles.ad_matrix_from_structure(L.structure, L.dim, a.coeffs.tolist(), 11)
    assert oracles.is_zero_matrix(oracles.mat_pow(ad, 3, 11))


def test_sl4_square_zero_block():
    a = square_zero_element("sl", 4, GF(11))
    expect = [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert to_matrix(a).data.tolist() == expect


def test_from_matrix_round_trip(sl3_11):
    M = ExactMatrix(GF(11), [[1, 2, 0], [0, 3, 4], [5, 0, 7]])
    v = from_matrix(sl3_11, M)
    assert to_matrix(v) == M


class TestSkewParts:
    def test_transpose_skew_is_so3(self):
        inv = transpose_involution(3, GF(5))
        K = skew_part(inv.parent, inv)
        assert K.algebra.dim == 3

    def test_matrix_pair_skew(self):
        R, sigma = matrix_pair_algebra(3, GF(5))
        K = skew_part(R, sigma)
        assert K.algebra.dim == 9
        for r in K.subspace.rows:
            M, N = r[:9].reshape(3, 3), r[9:].reshape(3, 3)
            assert np.array_equal(N % 5, (-M.T) % 5)

    def test_exchange_gives_commutator_algebra(self):
        A = matrix_algebra(2, GF(7))
        R, sigma = exchange_involution(A)
        K = skew_part(R, sigma)
        assert K.algebra.dim == 4
        assert derived(K.algebra).dim == 3 and center(K.algebra).dim == 1

    def test_char_two(self):
        inv = transpose_involution(2, GF(2))
        with pytest.raises(BadChar):
            skew_part(inv.parent, inv)

    def test_bad_involution(self):
        from lielab.constructions import InvolutionMap

        A = matrix_algebra(2, GF(5))
        with pytest.raises(AxiomViolation):
            InvolutionMap(A, ExactMatrix.identity(GF(5), 4))  # identity is not an anti-automorphism


class TestTKK:
    @given(st.integers(1, 6))
    def test_dimension_law(self, m):
        L = tkk_skew(BilinearForm(ExactMatrix.identity(GF(11), m)))
        assert L.dim == (m + 3) * (m + 2) // 2

    def test_center_zero(self):
        for m in (1, 2, 3):
            assert center(tkk_skew(BilinearForm(ExactMatrix.identity(GF(11), m)))).dim == 0

    def test_degenerate(self):
        with pytest.raises(DegenerateForm):
            tkk_skew(BilinearForm(ExactMatrix(GF(11), [[1, 0], [0, 0]])))

    def test_over_rationals(self):
        assert tkk_skew(BilinearForm(ExactMatrix.identity(QQ, 2))).dim == 10


class TestSmallAlgebras:
    def test_heisenberg(self):
        H = heisenberg(GF(5))
        assert H.dim == 3 and center(H).dim == 1

    def test_direct_sum_and_opposite(self):
        A = matrix_algebra(2, GF(3))
        S = direct_sum(A, opposite(A))
        assert S.dim == 8
        assert S.basis[0] == "(E11,0)"

    def test_symmetric_jordan(self):
        H2 = symmetric_matrix_jordan(2, GF(7))
        assert H2.kind == "jordan" and H2.dim == 3
        s11 = H2.basis_element(0).coeffs
        assert np.array_equal(H2.product(s11, s11), s11)

    def test_one_dim(self):
        J = one_dim_jordan(GF(7))
        assert J.product(np.array([3]), np.array([5])).tolist() == [1]
