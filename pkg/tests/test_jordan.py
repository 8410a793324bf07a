import numpy as np
import pytest
from hypothesis import given, strategies as st

from lielab.algcore import powers_series
from lielab.constructions import (
    build_matrix_lie,
    heisenberg,
    one_dim_jordan,
    square_zero_element,
    symmetric_matrix_jordan,
)
from lielab.errors import (
    BadChar,
    NotIdempotent,
    NotJordanElement,
    PreconditionFailed,
    ZeroElement,
)
from lielab.exactcore import GF, QQ, nilpotency_index
from lielab.jordan import (
    IDENTITY_NAMES,
    IdempotentResult,
    NilCertificate,
    build_L_x,
    descend_to_jordan,
    find_idempotent,
    idempotent_from,
    is_jordan_element,
    kostrikin_descent,
    left_normed,
    pierce_decompose,
    u_operator,
    u_operator_agreement,
    verify_identities,
)

import oracles


def vec(p, n):
    return st.lists(st.integers(0, p - 1), min_size=n, max_size=n).map(np.array)


class TestJordanElements:
    def test_root_vector_is_jordan(self, sl3_11):
        ok, X = is_jordan_element(sl3_11, sl3_11["E13"])
        assert ok
        assert (X ** 3).is_zero()

    def test_regular_nilpotent_is_not(self, sl3_11):
        a = (sl3_11["E12"].coeffs + sl3_11["E23"].coeffs) % 11
        assert not is_jordan_element(sl3_11, a)[0]

    def test_zero(self, sl3_11):
        with pytest.raises(ZeroElement):
            is_jordan_element(sl3_11, sl3_11.zero().coeffs)

    def test_left_normed(self, sl2_11):
        e, h, f = (sl2_11.basis_element(i).coeffs for i in range(3))
        # [[f, e], e] = [-h, e] = -2e
        assert left_normed(sl2_11, f, e, 2).tolist() == [9, 0, 0]


class TestDescent:
    def test_sl3_descent_reaches_e13(self, sl3_11):
        a = (sl3_11["E12"].coeffs + sl3_11["E23"].coeffs) % 11
        assert nilpotency_index(sl3_11.ad(a)) == 5
        trace = descend_to_jordan(sl3_11, a)
        assert trace.reached_jordan
        assert [s.result_index for s in trace.steps] == [3]
        assert trace.final.coeffs.tolist() == (6 * sl3_11["E13"].coeffs % 11).tolist()

    @given(st.integers(0, 7), st.integers(5, 10))
    def test_descent_postcondition(self, bi, n):
        L = build_matrix_lie("sl", 3, GF(11))
        a = (L["E12"].coeffs + L["E23"].coeffs) % 11
        y = kostrikin_descent(L, a, L.basis_element(bi), n)
        ad = oracles.ad_matrix_from_structure(L.structure, L.dim, y.coeffs.tolist(), 11)
        assert oracles.is_zero_matrix(oracles.mat_pow(ad, n - 1, 11))

    def test_descent_can_vanish(self, sl3_11):
        a = (sl3_11["E12"].coeffs + sl3_11["E23"].coeffs) % 11
        assert not kostrikin_descent(sl3_11, a, sl3_11["E12"], 5).coeffs.any()

    def test_preconditions(self, sl3_11):
        a = (sl3_11["E12"].coeffs + sl3_11["E23"].coeffs) % 11
        with pytest.raises(PreconditionFailed):
            kostrikin_descent(sl3_11, a, sl3_11["E21"], 3)
        with pytest.raises(PreconditionFailed):
            kostrikin_descent(sl3_11, a, sl3_11["E21"], 4)  # ad(a)^4 != 0
        with pytest.raises(PreconditionFailed):
            kostrikin_descent(sl3_11, a, sl3_11["E21"], 11)  # n > p - 1
        L3 = build_matrix_lie("sl", 3, GF(3))
        with pytest.raises(PreconditionFailed):
            kostrikin_descent(L3, L3["E12"], L3["E21"], 4)


class TestLx:
    def test_sl2_at_e(self, sl2_11):
        JQ = build_L_x(sl2_11, sl2_11["e"])
        assert JQ.kernel.dim == 2 and JQ.algebra.dim == 1
        f = JQ.project(sl2_11["f"].coeffs)
        assert JQ.algebra.product(f.coeffs, f.coeffs).tolist() == (2 * f.coeffs % 11).tolist()

    def test_heisenberg_lx_is_zero(self):
        H = heisenberg(GF(5))
        JQ = build_L_x(H, H.basis_element(0))
        assert JQ.algebra.dim == 0
        assert isinstance(find_idempotent(JQ.algebra), NilCertificate)

    def test_not_jordan(self, sl3_11):
        a = (sl3_11["E12"].coeffs + sl3_11["E23"].coeffs) % 11
        with pytest.raises(NotJordanElement):
            build_L_x(sl3_11, a)

    @pytest.mark.parametrize("series,n", [("sl", 2), ("sl", 3), ("sp", 4), ("o", 5), ("sl", 4), ("o", 4)])
    def test_u_operators_agree(self, series, n):
        F = GF(11)
        L = build_matrix_lie(series, n, F)
        JQ = build_L_x(L, square_zero_element(series, n, F))
        assert u_operator_agreement(JQ) == []

    def test_kernel_is_bullet_ideal(self, sp4_11):
        x = square_zero_element("sp", 4, GF(11))
        JQ = build_L_x(sp4_11, x)
        for v in JQ.kernel.rows:
            for b in sp4_11.basis_elements():
                assert JQ.kernel.contains(JQ.bullet(v, b.coeffs))
                assert JQ.kernel.contains(JQ.bullet(b.coeffs, v))


class TestIdentities:
    def test_sl4_suite(self, sl4_11):
        x = square_zero_element("sl", 4, GF(11))
        rep = verify_identities(sl4_11, x, trials=60, seed=7)
        assert rep.passed
        assert [r.name for r in rep.results] == list(IDENTITY_NAMES)
        assert rep.checks == 60 * 8

    def test_suite_is_seeded(self, sl3_11):
        x = sl3_11["E13"]
        a = verify_identities(sl3_11, x, trials=10, seed=3).to_dict()
        b = verify_identities(sl3_11, x, trials=10, seed=3).to_dict()
        assert a == b

    @given(vec(11, 15), vec(11, 15))
    def test_identity_iv_antisymmetry(self, a, b):
        L = build_matrix_lie("sl", 4, GF(11))
        X = L.ad(square_zero_element("sl", 4, GF(11)).coeffs)
        X2 = X @ X
        lhs = L.product(X2 @ a, X @ b)
        rhs = L.product(X @ a, X2 @ b)
        assert not np.any((lhs + rhs) % 11)

    def test_rejects_non_jordan(self, sl3_11):
        a = (sl3_11["E12"].coeffs + sl3_11["E23"].coeffs) % 11
        with pytest.raises(NotJordanElement):
            verify_identities(sl3_11, a, trials=1)


class TestIdempotents:
    def test_sl2_idempotent_is_6f(self, sl2_11):
        JQ = build_L_x(sl2_11, sl2_11["e"])
        res = find_idempotent(JQ.algebra)
        assert isinstance(res, IdempotentResult)
        assert res.element.coeffs.tolist() == [6]

    def test_field_unit(self):
        J = one_dim_jordan(GF(7))
        assert idempotent_from(J, np.array([3])).element.coeffs.tolist() == [1]

    def test_zero_product_certificate(self):
        J = one_dim_jordan(GF(7), square=0)
        cert = find_idempotent(J)
        assert isinstance(cert, NilCertificate) and cert.nilpotent
        assert cert.power_series == powers_series(J)

    @given(vec(7, 3))
    def test_idempotent_from_any_element(self, a):
        J = symmetric_matrix_jordan(2, GF(7))
        if not a.any():
            return
        res = idempotent_from(J, a)
        if res is not None:
            e = res.element.coeffs
            assert e.any() and np.array_equal(J.product(e, e) % 7, e % 7)

    def test_rational_idempotent(self):
        J = symmetric_matrix_jordan(2, QQ)
        res = find_idempotent(J)
        e = res.element.coeffs
        assert list(J.product(e, e)) == list(e)


class TestPierce:
    def test_h2(self):
        J = symmetric_matrix_jordan(2, GF(7))
        P = pierce_decompose(J, J.basis_element(0))
        assert P.dims == (1, 1, 1)

    def test_one_dim(self):
        J = one_dim_jordan(GF(7))
        assert pierce_decompose(J, J.basis_element(0)).dims == (1, 0, 0)

    @pytest.mark.parametrize("series,n,dims", [("sp", 4, (1, 1, 1)), ("sl", 4, (1, 1, 2)), ("sp", 6, (1, 3, 2))])
    def test_lx_pierce(self, series, n, dims):
        F = GF(11)
        L = build_matrix_lie(series, n, F)
        JQ = build_L_x(L, square_zero_element(series, n, F))
        e = find_idempotent(JQ.algebra).element
        P = pierce_decompose(JQ.algebra, e)
        assert P.dims == dims
        assert sum(P.dims) == JQ.algebra.dim
        assert (P.one + P.zero + P.half).is_whole()

    def test_errors(self):
        J = symmetric_matrix_jordan(2, GF(7))
        with pytest.raises(NotIdempotent):
            pierce_decompose(J, (2 * J.basis_element(0).coeffs) % 7)
        J2 = one_dim_jordan(GF(2))
        with pytest.raises(BadChar):
            pierce_decompose(J2, J2.basis_element(0))


def test_u_operator_formula():
    J = symmetric_matrix_jordan(2, GF(7))
    a = J.basis_element(0).coeffs
    U = u_operator(J, a)
    # U_e on Pierce parts: 1 on e, 0 on the 0- and 1/2-parts
    assert (U @ a).tolist() == a.tolist()
    assert not (U @ J.basis_element(2).coeffs).any()
