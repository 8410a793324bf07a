"""From an idempotent of L_x to an sl2 triple and its 5-grading, plus the
automorphism and graded-word tools used alongside it."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import factorial
from typing import Optional, Sequence

import numpy as np

from .algcore import (
    AlgebraElement,
    AlgebraPresentation,
    Subspace,
    _coeffs,
    lie_closure,
    subalgebra_closure,
)
from .constructions import build_matrix_lie, square_zero_element
from .errors import (
    BadChar,
    CharTooSmall,
    DuplicateNodes,
    FactorialNotInvertible,
    LieLabError,
    NonSplitOperator,
    NonzeroDegreeRequired,
    NotIdempotent,
    NotJordanElement,
    NotNilpotent,
    NotRegular,
    PreconditionFailed,
    Sl2SearchExhausted,
    TheoremViolation,
    WitnessInvalid,
)
from .exactcore import (
    Echelon,
    ExactMatrix,
    FieldSpec,
    eigenspace,
    generalized_eigenspace,
    is_zero,
    minimal_polynomial,
    nilpotency_index,
    poly_eval_matrix,
    poly_roots,
    rref,
    solve_linear,
)
from .jordan import JordanQuotient, build_L_x, find_idempotent, pierce_decompose, IdempotentResult


@dataclass
class Sl2Data:
    parent: AlgebraPresentation
    e: AlgebraElement
    h: AlgebraElement
    f: AlgebraElement

    def check(self) -> list[str]:
        """Names of the failed relations (empty when (e, h, f) is an idempotent triple)."""
        L = self.parent
        e, h, f = self.e, self.h, self.f
        bad = []
        if e * f != h:
            bad.append("[e,f]=h")
        if h * e != 2 * e:
            bad.append("[h,e]=2e")
        if h * f != -2 * f:
            bad.append("[h,f]=-2f")
        if not (L.ad(e) ** 3).is_zero():
            bad.append("ad(e)^3=0")
        if not (L.ad(f) ** 3).is_zero():
            bad.append("ad(f)^3=0")
        return bad

    def to_dict(self) -> dict:
        return {"e": self.e.to_strings(), "h": self.h.to_strings(), "f": self.f.to_strings()}


@dataclass
class GradedDecomposition:
    parent: AlgebraPresentation
    parts: dict  # degree -> Subspace
    product: Optional[object] = None  # multiplication the grading refers to (default: the algebra's)

    @property
    def degrees(self) -> list:
        return sorted(self.parts)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.parts[d].dim for d in self.degrees)

    def is_direct(self) -> bool:
        vecs = [r for d in self.degrees for r in self.parts[d].rows]
        return len(vecs) == self.parent.dim and Subspace.span(self.parent, vecs).dim == self.parent.dim

    def degree_of(self, v) -> Optional[object]:
        """Degree of a nonzero homogeneous vector, else None."""
        v = _coeffs(v)
        if is_zero(v):
            return None
        for d in self.degrees:
            if self.parts[d].contains(v):
                return d
        return None

    def violations(self) -> list[tuple]:
        """Pairs (i, j) with A_i A_j not inside A_{i+j} (zero when i+j is not a degree)."""
        A = self.parent
        prod = self.product or A.product
        bad = []
        for i in self.degrees:
            for j in self.degrees:
                target = self.parts.get(self._add(i, j))
                for u in self.parts[i].rows:
                    for v in self.parts[j].rows:
                        w = prod(u, v)
                        ok = is_zero(w) if target is None else target.contains(w)
                        if not ok:
                            bad.append((i, j))
                            break
                    else:
                        continue
                    break
        return bad

    def _add(self, i, j):
        f = self.parent.field
        return f.signed(f(i + j)) if f.p else i + j

    def to_dict(self) -> dict:
        return {"degrees": [str(d) for d in self.degrees], "dims": list(self.dims)}


# -- regular elements and sl2 triples -----------------------------------------


def _require_jordan(L, e):
    ev = _coeffs(e)
    if is_zero(ev):
        raise NotJordanElement("zero is not a Jordan element")
    E = L.ad(ev)
    if not (E ** 3).is_zero():
        raise NotJordanElement("ad(e)^3 != 0")
    return ev, E


def regularity_witness(L: AlgebraPresentation, e) -> Optional[AlgebraElement]:
    """a with ad(e)^2 (a) = e, or None when e is not von Neumann regular."""
    ev, E = _require_jordan(L, e)
    sol = solve_linear(E @ E, ev)
    return None if sol is None else L.element(sol.x)


@dataclass
class LiftResult:
    e_prime: AlgebraElement
    witness: AlgebraElement  # a with ad(e')^2 a = e'
    preimage: np.ndarray  # the chosen lift e of the idempotent


def solve_witness(JQ: JordanQuotient, ebar) -> AlgebraElement:
    """abar with U_ebar(abar) = ebar."""
    J = JQ.algebra
    ev = _coeffs(ebar)
    sol = solve_linear(JQ.u_lifted(ev), ev)
    if sol is None:
        raise TheoremViolation("idempotent is not in the image of its own U-operator")
    return J.element(sol.x)


def lift_regular(L: AlgebraPresentation, x, JQ: JordanQuotient, ebar, abar) -> LiftResult:
    """e' = ad(x)^2 e for a lift e of the idempotent ebar; checks the chain
    X^2 E^2 X^2 a = X^2 e and ad(e')^2 = X^2 E^2 X^2 as matrices."""
    J = JQ.algebra
    f = J.field
    ev, av = _coeffs(ebar), _coeffs(abar)
    if is_zero(ev) or not is_zero(f.reduce(J.product(ev, ev) - ev)):
        raise NotIdempotent("ebar is not a nonzero idempotent")
    if not is_zero(f.reduce(JQ.u_lifted(ev) @ av - ev)):
        raise WitnessInvalid("U_e(a) != e")
    X2 = JQ.X2
    e = JQ.lift(ev)
    a = JQ.lift(av)
    E = L.ad(e)
    chain = X2 @ (E @ E) @ X2
    e_prime = X2 @ e
    if is_zero(e_prime):
        raise TheoremViolation("e' = ad(x)^2 e vanished")
    if not is_zero(f.reduce(chain @ a - e_prime)):
        raise WitnessInvalid("X^2 E^2 X^2 a != X^2 e")
    Ep = L.ad(e_prime)
    if not Ep @ Ep == chain:
        raise TheoremViolation("ad(X^2 e)^2 != X^2 E^2 X^2")
    if not (Ep ** 3).is_zero():
        raise TheoremViolation("e' is not a Jordan element")
    if regularity_witness(L, e_prime) is None:
        raise TheoremViolation("e' is not regular")
    return LiftResult(L.element(e_prime), L.element(a), e)


def complete_sl2(L: AlgebraPresentation, e_prime, budget: int = 256, seed: int = 0) -> Sl2Data:
    """h = [e', -2a] for a regularity witness a, then f from [e', f] = h, [h, f] = -2f with ad(f)^3 = 0."""
    fld = L.field
    ev, E = _require_jordan(L, e_prime)
    w = regularity_witness(L, ev)
    if w is None:
        raise NotRegular("e' is not in ad(e')^2 (L)")
    h = L.product(ev, fld.reduce(-2 * w.coeffs))
    if not is_zero(fld.reduce(L.product(h, ev) - 2 * ev)):
        raise TheoremViolation("[h, e'] != 2e'")
    H = L.ad(h)
    n = L.dim
    system = np.concatenate([E.data, fld.reduce(H.data + 2 * fld.identity(n))], axis=0)
    rhs = np.concatenate([h, fld.zeros(n)])
    sol = solve_linear(ExactMatrix(fld, system), rhs)
    if sol is None:
        raise TheoremViolation("no f with [e', f] = h and [h, f] = -2f")
    rng = np.random.default_rng(seed)
    cand = sol.x
    for attempt in range(budget):
        if attempt:
            if not sol.kernel:
                break
            coeffs = rng.integers(-3, 4, size=len(sol.kernel))
            cand = fld.reduce(sol.x + sum(int(c) * k for c, k in zip(coeffs, sol.kernel)))
        if (L.ad(cand) ** 3).is_zero():
            triple = Sl2Data(L, L.element(ev), L.element(h), L.element(cand))
            bad = triple.check()
            if bad:
                raise TheoremViolation(f"sl2 relations fail: {bad}")
            return triple
    raise Sl2SearchExhausted(f"no f with ad(f)^3 = 0 within {budget} candidates")


# -- gradings ----------------------------------------------------------------


def _label(field: FieldSpec, lam):
    return field.signed(lam) if field.p else lam


def eigen_grading(A: AlgebraPresentation, D: ExactMatrix, degrees: Sequence[int], product=None) -> GradedDecomposition:
    f = A.field
    parts = {}
    for d in degrees:
        parts[d] = Subspace.span(A, eigenspace(D, f(d)))
    return GradedDecomposition(A, parts, product)


def derivation_of(A: AlgebraPresentation, h) -> ExactMatrix:
    """ad(h) for Lie kind; the commutator map y -> hy - yh otherwise."""
    hv = _coeffs(h)
    if A.kind == "lie":
        return A.ad(hv)
    f = A.field
    return ExactMatrix(f, f.reduce(A.left_mult(hv) - A.right_mult(hv)))


def grading_from_h(L: AlgebraPresentation, h) -> GradedDecomposition:
    """Eigenspaces of ad(h) at -2..2; ad(h) must be annihilated by t(t^2-1)(t^2-4)."""
    f = L.field
    if f.p in (2, 3):
        raise NonSplitOperator(f"eigenvalues -2..2 are not distinct mod {f.p}")
    H = derivation_of(L, h)
    ann = [f(0), f(4), f(0), f(-5), f(0), f(1)]  # t^5 - 5t^3 + 4t
    if not poly_eval_matrix(ann, H).is_zero():
        raise NonSplitOperator("ad(h) is not diagonalizable with eigenvalues in -2..2")
    G = eigen_grading(L, H, range(-2, 3))
    if not G.is_direct():
        raise TheoremViolation("ad(h) eigenspaces do not span L")
    return G


def root_space_decomposition(L: AlgebraPresentation, a) -> GradedDecomposition:
    """Generalized eigenspaces of ad(a), labelled by the eigenvalues."""
    f = L.field
    D = derivation_of(L, a)
    mu = minimal_polynomial(D)
    roots = poly_roots(f, mu)
    parts = {}
    for lam, mult in roots.items():
        parts[_label(f, lam)] = Subspace.span(L, generalized_eigenspace(D, lam, mult))
    G = GradedDecomposition(L, parts)
    if not G.is_direct():
        raise TheoremViolation("root spaces do not span L")
    return G


def min_poly_degree(L: AlgebraPresentation, a) -> int:
    return len(minimal_polynomial(derivation_of(L, a))) - 1


@dataclass
class DSurrogate:
    value: Optional[int]
    witness: Optional[AlgebraElement]
    candidates: int


def d_surrogate(L: AlgebraPresentation, candidates: Sequence) -> DSurrogate:
    """min deg mu_a over the non-ad-nilpotent candidates (None if all are ad-nilpotent)."""
    best, who = None, None
    for c in candidates:
        v = _coeffs(c)
        D = L.ad(v)
        if nilpotency_index(D) is not None:
            continue
        deg = len(minimal_polynomial(D)) - 1
        if best is None or deg < best:
            best, who = deg, L.element(v)
    return DSurrogate(best, who, len(candidates))


def root_string_check(L: AlgebraPresentation, G: GradedDecomposition, d: int) -> list:
    """Root vectors x of nonzero roots with ad(x)^d != 0 (empty means every string is killed)."""
    bad = []
    for lam in G.degrees:
        if lam == 0:
            continue
        for v in G.parts[lam].rows:
            if not (L.ad(v) ** d).is_zero():
                bad.append(lam)
    return bad


# -- automorphisms and the Vandermonde system -------------------------------


def _factorial_inverse(f: FieldSpec, k: int):
    if f.p and k >= f.p:
        raise FactorialNotInvertible(f"{k}! is zero mod {f.p}")
    return f.inv(f(factorial(k)))


def exp_ad(L: AlgebraPresentation, x, xi) -> ExactMatrix:
    """sum_{k<d} xi^k ad(x)^k / k!; verified to preserve the bracket on basis pairs."""
    f = L.field
    X = L.ad(_coeffs(x))
    d = nilpotency_index(X)
    if d is None:
        raise NotNilpotent("ad(x) is not nilpotent")
    xi = f(xi)
    acc = f.zeros((L.dim, L.dim))
    power = f.identity(L.dim)
    for k in range(d):
        acc = acc + f.reduce(power * f(xi ** k * _factorial_inverse(f, k)))
        power = f.matmul(power, X.data)
    S = ExactMatrix(f, f.reduce(acc))
    if not is_automorphism(L, S):
        raise TheoremViolation("exp(xi ad x) does not preserve the bracket")
    return S


def is_automorphism(L: AlgebraPresentation, S: ExactMatrix) -> bool:
    """S [b_i, -] = [S b_i, -] S for every basis element b_i."""
    for i in range(L.dim):
        col = S.data[:, i]
        lhs = S @ ExactMatrix(L.field, L.left_mult(L.basis_element(i).coeffs))
        rhs = ExactMatrix(L.field, L.left_mult(col)) @ S
        if not lhs == rhs:
            return False
    return True


def vandermonde_recover(L: AlgebraPresentation, x, v, xis: Sequence) -> list[np.ndarray]:
    """Recover (v, ad_x v, ad_x^2 v/2!, ...) from v_i = exp(xi_i ad x) v by solving the Vandermonde system."""
    f = L.field
    xis = [f(c) for c in xis]
    d = len(xis)
    if d == 0:
        raise PreconditionFailed("need at least one node")
    if len(set(xis)) != d:
        raise DuplicateNodes("interpolation nodes must be distinct")
    if any(c == 0 for c in xis):
        raise PreconditionFailed("interpolation nodes must be nonzero")
    X = L.ad(_coeffs(x))
    if not (X ** d).is_zero():
        raise PreconditionFailed(f"ad(x)^{d} != 0")
    vv = _coeffs(v)
    direct = []
    cur = vv
    for k in range(d):
        direct.append(f.reduce(cur * _factorial_inverse(f, k)))
        cur = X @ cur
    samples = [f.reduce(sum(direct[k] * f(c ** k) for k in range(d))) for c in xis]
    V = f.array([[c ** k for k in range(d)] for c in xis])
    aug = np.concatenate([V, np.stack(samples)], axis=1)
    r, piv = rref(f, aug)
    if piv != list(range(d)):
        raise TheoremViolation("Vandermonde matrix is singular")
    recovered = [r[k, d:].copy() for k in range(d)]
    for k in range(d):
        if not is_zero(f.reduce(recovered[k] - direct[k])):
            raise TheoremViolation(f"recovered component {k} differs from the direct chain")
    return recovered


# -- graded words ------------------------------------------------------------


@dataclass
class WordBoundReport:
    M: int
    n: int
    N: int
    lie_dim: int
    assoc_dim: int
    bound: int
    stabilization_length: int
    holds: bool

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["bound"] = str(self.bound)
        return d


def _word_stabilization(R: AlgebraPresentation, gens: list[np.ndarray]) -> tuple[int, int]:
    """Least l such that words of length <= l span Assoc(gens); returns (l, dim)."""
    ech = Echelon(R.field, R.dim)
    layer = [g for g in gens if ech.add(g)]
    length = 1
    while layer:
        nxt = []
        for w in layer:
            for g in gens:
                p = R.product(w, g)
                if ech.add(p):
                    nxt.append(p)
        if not nxt:
            break
        layer = nxt
        length += 1
    return length, len(ech)


def graded_word_bound_check(R: AlgebraPresentation, grading: GradedDecomposition, gens: Sequence) -> WordBoundReport:
    """dim Assoc(gens) <= d^(N+1) with d = dim Lie(gens) and N = M(n+2)."""
    if R.kind != "associative":
        raise ValueError("graded_word_bound_check expects an associative algebra")
    f = R.field
    nonzero = [d for d in grading.degrees if grading.parts[d].dim]
    M = max(abs(int(d)) for d in nonzero) if nonzero else 0
    if f.p and f.p <= M:
        raise CharTooSmall(f"need p > M = {M}")
    vecs = []
    for g in gens:
        v = _coeffs(g)
        deg = grading.degree_of(v)
        if deg is None:
            raise PreconditionFailed("generator is not homogeneous")
        if deg == 0:
            raise NonzeroDegreeRequired("generators must have nonzero degree")
        vecs.append(v)
    elems = [R.element(v) for v in vecs]
    lie_dim = lie_closure(elems).dim
    assoc_dim = subalgebra_closure(elems).dim
    n = len(vecs)
    N = M * (n + 2)
    bound = lie_dim ** (N + 1)
    stab, dim_words = _word_stabilization(R, vecs)
    if dim_words != assoc_dim:
        raise TheoremViolation("word span and closure disagree")
    return WordBoundReport(M, n, N, lie_dim, assoc_dim, bound, stab, assoc_dim <= bound)


# -- the full pipeline -------------------------------------------------------


@dataclass
class PipelineReport:
    series: str
    n: int
    p: int
    seed: int
    stages: dict = dc_field(default_factory=dict)
    failed_stage: Optional[str] = None
    error: Optional[str] = None
    grading: Optional[GradedDecomposition] = None
    triple: Optional[Sl2Data] = None

    @property
    def passed(self) -> bool:
        return self.failed_stage is None

    def to_dict(self) -> dict:
        return {
            "series": self.series,
            "n": self.n,
            "p": self.p,
            "seed": self.seed,
            "passed": self.passed,
            "failed_stage": self.failed_stage,
            "error": self.error,
            "stages": self.stages,
        }


def run_pipeline(series: str, n: int, field: FieldSpec, seed: int = 0) -> PipelineReport:
    """Square-zero element -> L_x -> idempotent -> e' -> sl2 triple -> 5-grading."""
    rep = PipelineReport(series, n, field.p, seed)
    stage = "build"
    try:
        if field.p and field.p < 5:
            raise BadChar(f"the five grading degrees need p >= 5, got p = {field.p}")
        L = build_matrix_lie(series, n, field)
        rep.stages["build"] = {"dim": L.dim}
        stage = "jordan_element"
        x = square_zero_element(series, n, field)
        rep.stages["jordan_element"] = {"x": x.to_strings()}
        stage = "L_x"
        JQ = build_L_x(L, x)
        rep.stages["L_x"] = {"kernel_dim": JQ.kernel.dim, "dim": JQ.algebra.dim}
        stage = "idempotent"
        res = find_idempotent(JQ.algebra, seed=seed)
        if not isinstance(res, IdempotentResult):
            raise TheoremViolation("L_x is nilpotent; no idempotent to lift")
        ebar = res.element
        pierce = pierce_decompose(JQ.algebra, ebar)
        rep.stages["idempotent"] = {"e_bar": ebar.to_strings(), "pierce_dims": list(pierce.dims)}
        stage = "lift"
        abar = solve_witness(JQ, ebar)
        lift = lift_regular(L, x, JQ, ebar, abar)
        rep.stages["lift"] = {"a_bar": abar.to_strings(), "e_prime": lift.e_prime.to_strings()}
        stage = "sl2"
        triple = complete_sl2(L, lift.e_prime, seed=seed)
        rep.triple = triple
        rep.stages["sl2"] = triple.to_dict()
        stage = "grading"
        G = grading_from_h(L, triple.h)
        bad = G.violations()
        if bad:
            raise TheoremViolation(f"grading law fails on {bad}")
        rep.grading = G
        rep.stages["grading"] = {"degrees": [-2, -1, 0, 1, 2], "dims": list(G.dims), "law_holds": True}
    except LieLabError as exc:
        rep.failed_stage = stage
        rep.error = f"{exc.code}: {exc}"
    return rep
