import numpy as np
import pytest
from hypothesis import given, strategies as st

from lielab.errors import NotInK, PreconditionFailed, SizeBudget, SizeMismatch
from lielab.exactcore import GF
from lielab.tower import (
    SignatureEmbedding,
    build_level,
    build_theorem3_level,
    commutator_obstruction,
    commutators_after_embedding,
    embed_pair_matrices,
    frontier_certificate,
    generic_tower,
    obstruction_element,
    simplicity_certificate,
    theorem3_signature,
    trace_functional,
    trace_transport,
)


@pytest.fixture(scope="module")
def L1():
    return build_theorem3_level(3, 1)


@pytest.fixture(scope="module")
def L2():
    return build_theorem3_level(3, 2)


class TestSignatures:
    def test_theorem3_signature(self):
        assert theorem3_signature(3).as_tuple() == (2, 1, 0)
        assert theorem3_signature(7).as_tuple() == (4, 3, 0)

    def test_invalid(self):
        with pytest.raises(SizeMismatch):
            SignatureEmbedding(0, 0, 1)

    @given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(1, 2))
    def test_matrix_matches_block_form(self, s, t, z, n):
        if s + t == 0:
            return
        F = GF(5)
        sig = SignatureEmbedding(s, t, z)
        phi = sig.matrix(F, n)
        rng = np.random.default_rng(s * 100 + t * 10 + z + n)
        M, N = rng.integers(0, 5, size=(n, n)), rng.integers(0, 5, size=(n, n))
        A, B = embed_pair_matrices(sig, F, M, N)
        v = np.concatenate([M.ravel(), N.ravel()])
        assert (phi @ v).tolist() == np.concatenate([A.ravel(), B.ravel()]).tolist()


class TestLevels:
    def test_level_dims(self, L1, L2):
        assert (L1.n, L1.dim) == (3, 18)
        assert (L2.n, L2.dim) == (9, 162)
        assert L1.skew.subspace.dim == 9 and L2.skew.subspace.dim == 81

    def test_embedding_checks(self, L1, L2):
        assert L1.checks == {"injective": True, "multiplicative": True, "involutive": True}
        assert L1.embedding.rank() == L1.dim
        assert L2.embedding is None  # level 3 is beyond the default size budget

    def test_level3_size_budget(self):
        with pytest.raises(SizeBudget):
            build_theorem3_level(3, 3)

    def test_env_budget(self, monkeypatch):
        monkeypatch.setenv("LIELAB_BUDGET", "10")
        with pytest.raises(SizeBudget):
            build_theorem3_level(3, 1)

    def test_even_p(self):
        with pytest.raises(PreconditionFailed):
            build_theorem3_level(4, 1)


class TestObstruction:
    @pytest.mark.parametrize("level,dims", [(1, (9, 8)), (2, (81, 80))])
    def test_codimension_one(self, L1, L2, level, dims):
        rep = commutator_obstruction(L1 if level == 1 else L2)
        assert (rep.dim_K, rep.dim_D) == dims
        assert rep.passed and rep.trace_of_obstruction == "1"

    def test_trace_functional(self, L1):
        assert trace_functional(L1, obstruction_element(L1)) == 1
        v = np.zeros(L1.dim, dtype=np.int64)
        v[0] = 1  # (E11, 0) is not skew
        with pytest.raises(NotInK):
            trace_functional(L1, v)

    def test_transport(self, L1, L2):
        tt = trace_transport(L1, L2)
        assert tt.preserved and tt.image_in_K and tt.obstruction_image_outside_D

    def test_transport_needs_consecutive(self, L1):
        with pytest.raises(PreconditionFailed):
            trace_transport(L1, L1)


class TestSimplicity:
    def test_level1_probes(self, L1, L2):
        rep = simplicity_certificate(L1, random_probes=4, seed=0, target=L2)
        assert rep.passed and rep.probes == L1.dim + 4

    @pytest.mark.parametrize("level", [1, 2])
    def test_matrix_certificate(self, L1, L2, level):
        rep = frontier_certificate(L1 if level == 1 else L2, theorem3_signature(3), random_probes=8)
        assert rep.passed and rep.obstruction_trace == "1"


class TestGenericTowers:
    def test_unbalanced_signature_keeps_obstruction(self):
        _, summ = generic_tower([SignatureEmbedding(1, 0, 0)] * 2, 3, n0=2)
        assert [(s.dim_K, s.dim_D) for s in summ] == [(4, 3)] * 3

    def test_balanced_signature_kills_trace(self):
        levels, summ = generic_tower([SignatureEmbedding(1, 1, 0)], 3, n0=2)
        assert [(s.dim_K, s.dim_D) for s in summ] == [(4, 3), (16, 15)]
        assert not trace_transport(levels[0], levels[1]).preserved
        assert commutators_after_embedding(levels[0], levels[1]) == [0, 3]

    def test_sizes_must_match(self):
        with pytest.raises(SizeMismatch):
            generic_tower([SignatureEmbedding(1, 1, 0)], 3, n0=2, sizes=[2, 5])

    def test_build_level_with_padding(self):
        lvl = build_level(GF(3), 1, 2, SignatureEmbedding(1, 0, 1))
        assert lvl.next_n == 3 and all(lvl.checks.values())
