"""Direct systems of involutive matrix-pair algebras, levelwise.

Level i of the trace-obstructed involutive system is R_i = M_n ⊕ M_n with n = p^i and the
involution (A, B)* = (B^T, A^T).  The embedding of signature (s, t, z) is

    (M, N) -> (diag(M x s, N x t, 0_z), diag(N x s, M x t, 0_z)).

The direct limit is never built; every statement is checked at the levels
that fit in the size budget.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .algcore import AlgebraPresentation, Subspace, _sp_mul, derived, ideal_generated
from .config import size_budget
from .constructions import InvolutionMap, SkewPart, matrix_pair_algebra, skew_part
from .errors import (
    AxiomViolation,
    NotInK,
    PreconditionFailed,
    ProbeFailed,
    SizeBudget,
    SizeMismatch,
)
from .exactcore import ExactMatrix, FieldSpec, GF, is_prime, is_zero


@dataclass(frozen=True)
class SignatureEmbedding:
    s: int
    t: int
    z: int = 0

    def __post_init__(self):
        if min(self.s, self.t, self.z) < 0 or self.s + self.t == 0:
            raise SizeMismatch(f"invalid signature {(self.s, self.t, self.z)}")

    def target_size(self, n: int) -> int:
        return (self.s + self.t) * n + self.z

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.s, self.t, self.z)

    def matrix(self, field: FieldSpec, n: int, m: Optional[int] = None) -> ExactMatrix:
        """Matrix of the embedding M_n ⊕ M_n -> M_m ⊕ M_m in matrix-unit coordinates."""
        m = self.target_size(n) if m is None else m
        if m != self.target_size(n):
            raise SizeMismatch(f"signature {self.as_tuple()} maps size {n} to {self.target_size(n)}, not {m}")
        src, dst = 2 * n * n, 2 * m * m
        phi = field.zeros((dst, src))
        one = field(1)
        # block offsets (in units of n) of the copies in each coordinate
        first_M = [c * n for c in range(self.s)]
        first_N = [(self.s + c) * n for c in range(self.t)]
        second_N = first_M
        second_M = first_N
        for i in range(n):
            for j in range(n):
                col_M = i * n + j
                col_N = n * n + i * n + j
                for off in first_M:
                    phi[(off + i) * m + off + j, col_M] = one
                for off in second_M:
                    phi[m * m + (off + i) * m + off + j, col_M] = one
                for off in first_N:
                    phi[(off + i) * m + off + j, col_N] = one
                for off in second_N:
                    phi[m * m + (off + i) * m + off + j, col_N] = one
        return ExactMatrix(field, phi)


@dataclass
class TowerLevel:
    index: int
    n: int
    algebra: AlgebraPresentation
    involution: InvolutionMap
    signature: Optional[SignatureEmbedding] = None
    embedding: Optional[ExactMatrix] = None  # dim R_{i+1} x dim R_i
    next_n: Optional[int] = None
    checks: dict = dc_field(default_factory=dict)
    _skew: Optional[SkewPart] = None

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def skew(self) -> SkewPart:
        if self._skew is None:
            self._skew = skew_part(self.algebra, self.involution)
        return self._skew

    def pair(self, M, N) -> np.ndarray:
        """Coordinates of (M, N) in R_i."""
        f = self.field
        M = f.array(M) if not isinstance(M, np.ndarray) else f.reduce(M)
        N = f.array(N) if not isinstance(N, np.ndarray) else f.reduce(N)
        return np.concatenate([M.ravel(), N.ravel()])

    def split(self, v) -> tuple[np.ndarray, np.ndarray]:
        n2 = self.n * self.n
        return v[:n2].reshape(self.n, self.n), v[n2:].reshape(self.n, self.n)

    def embed(self, v) -> np.ndarray:
        if self.embedding is None:
            raise PreconditionFailed(f"level {self.index} is the frontier and has no embedding")
        return self.embedding @ v


def _check_embedding(src: AlgebraPresentation, sigma_src: InvolutionMap, dst: AlgebraPresentation,
                     sigma_dst: InvolutionMap, phi: ExactMatrix) -> dict:
    f = src.field
    cols = []
    for a in range(src.dim):
        col = phi.data[:, a]
        cols.append({int(k): col[k] for k in np.nonzero(col)[0]})
    injective = phi.rank() == src.dim
    multiplicative = True
    for a in range(src.dim):
        for b in range(src.dim):
            lhs: dict = {}
            for k, c in src.basis_product(a, b).items():
                for q, s in cols[k].items():
                    lhs[q] = f(lhs.get(q, 0) + c * s)
            lhs = {q: c for q, c in lhs.items() if c != 0}
            if lhs != _sp_mul(dst, cols[a], cols[b]):
                multiplicative = False
                break
        if not multiplicative:
            break
    involutive = (phi @ sigma_src.matrix) == (sigma_dst.matrix @ phi)
    return {"injective": injective, "multiplicative": multiplicative, "involutive": involutive}


def _require_odd_prime(p: int):
    if not (is_prime(p) and p % 2 == 1):
        raise PreconditionFailed(f"p must be an odd prime, got {p}")


def theorem3_signature(p: int) -> SignatureEmbedding:
    k = (p - 1) // 2
    return SignatureEmbedding(k + 1, k, 0)


def build_level(field: FieldSpec, index: int, n: int, signature: Optional[SignatureEmbedding],
                budget: Optional[int] = None, next_n: Optional[int] = None) -> TowerLevel:
    """R = M_n ⊕ M_n with its embedding of the given signature when the target fits the budget."""
    budget = size_budget() if budget is None else budget
    if 2 * n * n > budget:
        raise SizeBudget(f"level {index}: dim {2 * n * n} exceeds the size budget {budget}")
    R, sigma = matrix_pair_algebra(n, field)
    level = TowerLevel(index, n, R, sigma)
    if signature is not None:
        m = signature.target_size(n) if next_n is None else next_n
        if m != signature.target_size(n):
            raise SizeMismatch(f"signature {signature.as_tuple()} maps size {n} to {signature.target_size(n)}, not {m}")
        if 2 * m * m <= budget:
            R2, sigma2 = matrix_pair_algebra(m, field)
            phi = signature.matrix(field, n, m)
            checks = _check_embedding(R, sigma, R2, sigma2, phi)
            if not all(checks.values()):
                raise AxiomViolation(f"embedding checks failed: {checks}")
            level.signature, level.embedding, level.next_n = signature, phi, m
            level.checks.update(checks)
    return level


def build_theorem3_level(p: int, i: int, budget: Optional[int] = None) -> TowerLevel:
    """Level i of the trace-obstructed involutive system over GF(p), with the (k+1, k, 0) embedding below the frontier."""
    _require_odd_prime(p)
    if i < 1:
        raise PreconditionFailed("levels start at 1")
    return build_level(GF(p), i, p ** i, theorem3_signature(p), budget)


# -- trace obstruction ----------------------------------------------------


def trace_functional(level: TowerLevel, v) -> int:
    """Trace of the first coordinate of an element of K(R_i)."""
    v = level.field.reduce(np.asarray(v))
    if not level.skew.subspace.contains(v):
        raise NotInK("element is not skew for the involution")
    M, _ = level.split(v)
    return level.field(sum(M[i, i] for i in range(level.n)))


def obstruction_element(level: TowerLevel) -> np.ndarray:
    """(E11, -E11)."""
    f = level.field
    M = f.zeros((level.n, level.n))
    M[0, 0] = f(1)
    return level.pair(M, f.reduce(-M))


@dataclass
class ObstructionReport:
    level: int
    dim_K: int
    dim_D: int
    codim_one: bool
    obstruction_outside_D: bool
    trace_of_obstruction: str
    trace_vanishes_on_D: bool
    D_equals_trace_kernel: bool
    obstruction: list[str]

    @property
    def passed(self) -> bool:
        return (self.codim_one and self.obstruction_outside_D and self.trace_vanishes_on_D
                and self.D_equals_trace_kernel and self.trace_of_obstruction != "0")

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def derived_in_ambient(level: TowerLevel) -> Subspace:
    """[K, K] as a subspace of R_i."""
    K = level.skew
    D = derived(K.algebra)
    vecs = [K.inclusion @ r for r in D.rows]
    return Subspace.span(level.algebra, vecs)


def commutator_obstruction(level: TowerLevel) -> ObstructionReport:
    f = level.field
    K = level.skew
    D = derived_in_ambient(level)
    ob = obstruction_element(level)
    if not K.subspace.contains(ob):
        raise NotInK("(E11, -E11) is not skew")
    traces = [trace_functional(level, r) for r in D.rows]
    vanish = all(t == 0 for t in traces)
    trace_ker_dim = K.subspace.dim - 1  # the trace is nonzero on K, witnessed by the obstruction
    return ObstructionReport(
        level=level.index,
        dim_K=K.subspace.dim,
        dim_D=D.dim,
        codim_one=D.dim == K.subspace.dim - 1,
        obstruction_outside_D=not D.contains(ob),
        trace_of_obstruction=f.format(trace_functional(level, ob)),
        trace_vanishes_on_D=vanish,
        D_equals_trace_kernel=vanish and D.dim == trace_ker_dim,
        obstruction=[f.format(c) for c in ob.tolist()],
    )


@dataclass
class TraceTransport:
    level: int
    basis_checked: int
    preserved: bool
    image_in_K: bool
    obstruction_image_outside_D: Optional[bool]


def trace_transport(level: TowerLevel, nxt: TowerLevel, check_obstruction: bool = True) -> TraceTransport:
    """trace(phi(x)) = trace(x) on a basis of K(R_i), and phi((E11, -E11)) stays outside [K, K] upstairs."""
    if level.embedding is None or nxt.n != level.next_n:
        raise PreconditionFailed("levels are not consecutive")
    preserved = in_K = True
    for r in level.skew.subspace.rows:
        img = level.embed(r)
        if not nxt.skew.subspace.contains(img):
            in_K = False
            break
        if trace_functional(nxt, img) != trace_functional(level, r):
            preserved = False
    outside = None
    if check_obstruction:
        outside = not derived_in_ambient(nxt).contains(level.embed(obstruction_element(level)))
    return TraceTransport(level.index, level.skew.subspace.dim, preserved, in_K, outside)


# -- simplicity probes -------------------------------------------------------


@dataclass
class SimplicityReport:
    level: int
    probes: int
    passed_probes: int
    both_coordinates_nonzero: bool
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.passed_probes == self.probes and self.both_coordinates_nonzero

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def probe_set(level: TowerLevel, random_probes: int = 32, seed: int = 0) -> list[np.ndarray]:
    f = level.field
    dim = level.dim
    probes = []
    for k in range(dim):  # (E_ij, 0) and (0, E_ij)
        v = f.zeros(dim)
        v[k] = f(1)
        probes.append(v)
    rng = np.random.default_rng(seed)
    while len(probes) < dim + random_probes:
        v = f.random_vector(rng, dim)
        if not is_zero(v):
            probes.append(v)
    return probes


def simplicity_certificate(level: TowerLevel, random_probes: int = 32, seed: int = 0,
                           target: Optional[TowerLevel] = None, raise_on_failure: bool = False) -> SimplicityReport:
    """Every probe c has phi(c) with both coordinates nonzero, generating all of R_{i+1}."""
    if level.embedding is None:
        raise PreconditionFailed(f"level {level.index} has no embedding")
    if target is None:
        R2, _ = matrix_pair_algebra(level.next_n, level.field)
    else:
        R2 = target.algebra
    m2 = level.next_n ** 2
    probes = probe_set(level, random_probes, seed)
    ok = 0
    both = True
    failures = []
    for idx, c in enumerate(probes):
        img = level.embed(c)
        if is_zero(img[:m2]) or is_zero(img[m2:]):
            both = False
        ideal = ideal_generated([R2.element(img)])
        if ideal.is_whole():
            ok += 1
        else:
            failures.append({"probe": idx, "ideal_dim": ideal.dim})
            if raise_on_failure:
                raise ProbeFailed(f"probe {idx} generates a proper ideal of dim {ideal.dim}")
    return SimplicityReport(level.index, len(probes), ok, both, failures)


# -- whole towers --------------------------------------------------------------


@dataclass
class LevelSummary:
    index: int
    n: int
    dim_R: int
    dim_K: int
    dim_D: int
    signature: Optional[tuple]
    checks: dict
    seconds: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def generic_tower(signatures: Sequence[SignatureEmbedding], p: int, n0: int = 1, depth: Optional[int] = None,
                  budget: Optional[int] = None, sizes: Optional[Sequence[int]] = None) -> tuple[list[TowerLevel], list[LevelSummary]]:
    """Levels of M_n ⊕ M_n joined by the given signatures (one per step).

    ``sizes`` optionally states the intended matrix size of every level; a
    mismatch with the signature arithmetic raises SIZE_MISMATCH.
    """
    if not is_prime(p):
        raise PreconditionFailed(f"p must be prime, got {p}")
    field = GF(p)
    depth = len(signatures) + 1 if depth is None else depth
    if depth > len(signatures) + 1:
        raise SizeMismatch("need one signature per embedding")
    ns = [n0]
    for sig in signatures[: depth - 1]:
        ns.append(sig.target_size(ns[-1]))
    if sizes is not None:
        if len(sizes) < depth or list(sizes[:depth]) != ns:
            raise SizeMismatch(f"sizes {list(sizes)} do not match the signatures, which give {ns}")
    levels, summaries = [], []
    for i in range(depth):
        t0 = time.perf_counter()
        sig = signatures[i] if i < depth - 1 else None
        lvl = build_level(field, i + 1, ns[i], sig, budget, ns[i + 1] if sig else None)
        D = derived_in_ambient(lvl)
        levels.append(lvl)
        summaries.append(LevelSummary(i + 1, ns[i], lvl.dim, lvl.skew.subspace.dim, D.dim,
                                      sig.as_tuple() if sig else None, dict(lvl.checks), time.perf_counter() - t0))
    return levels, summaries


def commutators_after_embedding(level: TowerLevel, nxt: TowerLevel) -> list[int]:
    """Indices of K(R_i) basis vectors outside [K, K] whose image lands inside [K, K] one level up."""
    D_here = derived_in_ambient(level)
    D_up = derived_in_ambient(nxt)
    out = []
    for k, r in enumerate(level.skew.subspace.rows):
        if not D_here.contains(r) and D_up.contains(level.embed(r)):
            out.append(k)
    return out


# -- the frontier level ----------------------------------------------------------


def embed_pair_matrices(sig: SignatureEmbedding, field: FieldSpec, M: np.ndarray, N: np.ndarray):
    """(M, N) -> (diag(M x s, N x t, 0_z), diag(N x s, M x t, 0_z)) as dense matrices."""
    n = M.shape[0]
    m = sig.target_size(n)
    A, B = field.zeros((m, m)), field.zeros((m, m))
    for c in range(sig.s):
        o = c * n
        A[o:o + n, o:o + n] = M
        B[o:o + n, o:o + n] = N
    for c in range(sig.t):
        o = (sig.s + c) * n
        A[o:o + n, o:o + n] = N
        B[o:o + n, o:o + n] = M
    return A, B


def _unit_witness(field: FieldSpec, X: np.ndarray) -> bool:
    """X != 0 and E_{0r} X E_{c0} = X_rc E_00 for a nonzero entry (r, c), so X generates M_m."""
    nz = np.argwhere(X != 0)
    if len(nz) == 0:
        return False
    r, c = (int(t) for t in nz[0])
    m = X.shape[0]
    left, right = field.zeros((m, m)), field.zeros((m, m))
    left[0, r] = field(1)
    right[c, 0] = field(1)
    prod = field.matmul(field.matmul(left, X), right)
    expect = field.zeros((m, m))
    expect[0, 0] = X[r, c]
    return bool(np.all(prod == expect)) and X[r, c] != 0


@dataclass
class FrontierReport:
    level: int
    target_n: int
    probes: int
    passed_probes: int
    multiplicative_pairs: int
    multiplicative: bool
    images_skew: bool
    trace_preserved: bool
    obstruction_trace: str

    @property
    def passed(self) -> bool:
        return (self.passed_probes == self.probes and self.multiplicative and self.images_skew
                and self.trace_preserved and self.obstruction_trace != "0")

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def frontier_certificate(level: TowerLevel, signature: SignatureEmbedding, random_probes: int = 32,
                         seed: int = 0, pairs: int = 32) -> FrontierReport:
    """Checks of phi: R_i -> R_{i+1} done on matrices when R_{i+1} is too large to present.

    The next level's commutators lie in the kernel of the first-coordinate
    trace, so a nonzero trace of phi((E11, -E11)) keeps it outside [K, K].
    """
    f = level.field
    img = lambda v: embed_pair_matrices(signature, f, *level.split(v))
    ok = 0
    for c in probe_set(level, random_probes, seed):
        A, B = img(c)
        if _unit_witness(f, A) and _unit_witness(f, B):
            ok += 1
    rng = np.random.default_rng(seed)
    mult = True
    for _ in range(pairs):
        u, v = f.random_vector(rng, level.dim), f.random_vector(rng, level.dim)
        Au, Bu = img(u)
        Av, Bv = img(v)
        Aw, Bw = img(level.algebra.product(u, v))
        if not (np.all(Aw == f.matmul(Au, Av)) and np.all(Bw == f.matmul(Bu, Bv))):
            mult = False
            break
    skew = preserved = True
    tr = lambda X: f(sum(X[i, i] for i in range(X.shape[0])))
    for r in level.skew.subspace.rows:
        A, B = img(r)
        if not np.all(B == f.reduce(-A.T)):
            skew = False
        if tr(A) != trace_functional(level, r):
            preserved = False
    A, _ = img(obstruction_element(level))
    return FrontierReport(level.index, signature.target_size(level.n), len(probe_set(level, random_probes, seed)),
                          ok, pairs, mult, skew, preserved, f.format(tr(A)))
