"""Jordan elements of a Lie algebra and the Jordan algebra L_x they induce.

Conventions: ``X = ad(x)`` acts by ``X(y) = [x, y]``; the product on
``L^(x)`` is ``a • b = [[a, x], b]`` (no factor 1/2), and the triple product
on a Jordan algebra is ``{x, y, z} = (x∘y)∘z + x∘(y∘z) - y∘(x∘z)``, so that
``U_x(y) = 2 x∘(x∘y) - (x∘x)∘y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .algcore import (
    AlgebraElement,
    AlgebraPresentation,
    Quotient,
    Subspace,
    _coeffs,
    powers_series,
    quotient,
)
from .errors import (
    AxiomViolation,
    BadChar,
    BudgetExceeded,
    NotIdempotent,
    NotJordanElement,
    PreconditionFailed,
    TheoremViolation,
    ZeroElement,
)
from .exactcore import (
    Echelon,
    ExactMatrix,
    eigenspace,
    is_zero,
    kernel_basis,
    nilpotency_index,
    poly_divmod,
    poly_gcdex,
    poly_mul,
    solve_linear,
)


def _require_lie(L: AlgebraPresentation):
    if L.kind != "lie":
        raise ValueError(f"expected a Lie algebra, got kind {L.kind!r}")


def ad_matrix(L: AlgebraPresentation, x) -> ExactMatrix:
    return L.ad(_coeffs(x))


def is_jordan_element(L: AlgebraPresentation, x) -> tuple[bool, ExactMatrix]:
    """(ad(x)^3 == 0, ad(x)); zero is rejected since Jordan elements are nonzero."""
    _require_lie(L)
    v = _coeffs(x)
    if is_zero(v):
        raise ZeroElement("a Jordan element must be nonzero")
    X = L.ad(v)
    return (X ** 3).is_zero(), X


def _is_jordan_or_zero(L, v) -> bool:
    return is_zero(v) or (L.ad(v) ** 3).is_zero()


# -- Kostrikin descent -----------------------------------------------------


def left_normed(L: AlgebraPresentation, b, a, copies: int) -> np.ndarray:
    """[b, a, ..., a] = [[[b, a], a], ...] with ``copies`` factors of a."""
    y, av = _coeffs(b), _coeffs(a)
    for _ in range(copies):
        y = L.product(y, av)
    return y


def kostrikin_descent(L: AlgebraPresentation, a, b, n: int) -> AlgebraElement:
    """y = [b, a, ..., a] (n-1 copies of a); verifies ad(y)^(n-1) = 0."""
    _require_lie(L)
    p = L.field.p
    if p != 0 and p < 5:
        raise PreconditionFailed(f"descent needs characteristic >= 5, got {p}")
    if n < 4 or (p != 0 and n > p - 1):
        raise PreconditionFailed(f"descent needs 4 <= n <= p-1, got n = {n}")
    av = _coeffs(a)
    if is_zero(av):
        raise PreconditionFailed("a must be nonzero")
    if not (L.ad(av) ** n).is_zero():
        raise PreconditionFailed(f"ad(a)^{n} != 0")
    y = left_normed(L, b, av, n - 1)
    if not (L.ad(y) ** (n - 1)).is_zero():
        raise TheoremViolation(f"ad(y)^{n - 1} != 0 after descent", a=list(av), b=list(_coeffs(b)), n=n)
    return L.element(y)


@dataclass
class DescentStep:
    a: np.ndarray
    n: int
    b: np.ndarray
    result: np.ndarray
    result_index: Optional[int]


@dataclass
class DescentTrace:
    start: np.ndarray
    steps: list[DescentStep]
    final: Optional[AlgebraElement]  # a nonzero Jordan element, or None when every candidate gave 0

    @property
    def reached_jordan(self) -> bool:
        return self.final is not None


def descend_to_jordan(L: AlgebraPresentation, a, candidates: Optional[Sequence] = None) -> DescentTrace:
    """Apply descent repeatedly, trying ``candidates`` (default: the basis) for b,
    until the current element has ad^3 = 0."""
    _require_lie(L)
    av = _coeffs(a)
    if is_zero(av):
        raise PreconditionFailed("a must be nonzero")
    m = nilpotency_index(L.ad(av))
    if m is None:
        raise PreconditionFailed("a is not ad-nilpotent")
    cands = [_coeffs(c) for c in candidates] if candidates is not None else [
        b.coeffs for b in L.basis_elements()
    ]
    steps: list[DescentStep] = []
    cur = av
    while m > 3:
        nxt = None
        for b in cands:
            y = kostrikin_descent(L, cur, b, m).coeffs
            if not is_zero(y):
                nxt = y
                break
        if nxt is None:
            return DescentTrace(av, steps, None)
        idx = nilpotency_index(L.ad(nxt))
        steps.append(DescentStep(cur, m, b, nxt, idx))
        cur, m = nxt, idx
    return DescentTrace(av, steps, L.element(cur))


# -- the Jordan algebra L_x --------------------------------------------------


@dataclass
class JordanQuotient:
    source: AlgebraPresentation
    x: AlgebraElement
    kernel: Subspace
    quot: Quotient
    X: ExactMatrix
    X2: ExactMatrix

    @property
    def algebra(self) -> AlgebraPresentation:
        return self.quot.algebra

    @property
    def projection(self) -> ExactMatrix:
        return self.quot.projection

    def bullet(self, a, b) -> np.ndarray:
        L = self.source
        return L.product(L.product(_coeffs(a), self.x.coeffs), _coeffs(b))

    def project(self, v) -> AlgebraElement:
        return self.algebra.element(self.quot.project(v))

    def lift(self, w) -> np.ndarray:
        return self.quot.lift(w)

    def u_lifted(self, abar) -> ExactMatrix:
        """U_abar as an operator on L_x via the class of ad(a)^2 ad(x)^2 b."""
        L, J = self.source, self.algebra
        A = L.ad(self.lift(abar))
        op = (A @ A) @ self.X2  # on L
        lifts = ExactMatrix(L.field, np.stack([self.lift(e.coeffs) for e in J.basis_elements()], axis=1)) \
            if J.dim else ExactMatrix.zeros(L.field, L.dim, 0)
        return self.projection @ (op @ lifts)

    def u_triple(self, abar) -> ExactMatrix:
        return u_operator(self.algebra, abar)


def u_operator(J: AlgebraPresentation, a) -> ExactMatrix:
    """U_a(y) = {a, y, a} = 2 a∘(a∘y) - (a∘a)∘y as a matrix."""
    f = J.field
    av = _coeffs(a)
    La = J.left_mult(av)
    La2 = J.left_mult(J.product(av, av))
    return ExactMatrix(f, f.reduce(2 * f.matmul(La, La) - La2))


def triple_product(J: AlgebraPresentation, x, y, z) -> np.ndarray:
    x, y, z = _coeffs(x), _coeffs(y), _coeffs(z)
    m = J.product
    return J.field.reduce(m(m(x, y), z) + m(x, m(y, z)) - m(y, m(x, z)))


def build_L_x(L: AlgebraPresentation, x) -> JordanQuotient:
    """L^(x) / ker_L(x) with the product induced by a • b = [[a, x], b]."""
    _require_lie(L)
    xv = _coeffs(x)
    if is_zero(xv):
        raise NotJordanElement("x = 0 is not a Jordan element")
    ok, X = is_jordan_element(L, xv)
    if not ok:
        raise NotJordanElement("ad(x)^3 != 0")
    X2 = X @ X
    kernel = Subspace.span(L, kernel_basis(L.field, X2.data))

    def bullet(a, b):
        return L.product(L.product(a, xv), b)

    try:
        q = quotient(L, kernel, product=bullet, kind="jordan")
    except AxiomViolation as exc:
        raise TheoremViolation(f"L_x fails the Jordan axioms: {exc}") from exc
    return JordanQuotient(L, L.element(xv), kernel, q, X, X2)


def u_operator_agreement(JQ: JordanQuotient) -> list[tuple[int, int]]:
    """Basis pairs (i, j) where the triple-product and lifted U-operators differ."""
    J = JQ.algebra
    bad = []
    for i, a in enumerate(J.basis_elements()):
        T = JQ.u_triple(a)
        Lf = JQ.u_lifted(a)
        diff = J.field.reduce(T.data - Lf.data)
        for j in np.nonzero(np.any(diff != 0, axis=0))[0]:
            bad.append((i, int(j)))
    return bad


# -- the identity suite -------------------------------------------------------

IDENTITY_NAMES = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")


@dataclass
class IdentityResult:
    name: str
    trials: int
    seed: int
    failures: int = 0
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "identity": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "failures": self.failures,
            "counterexample": self.counterexample,
        }


@dataclass
class IdentityReport:
    results: list[IdentityResult] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def checks(self) -> int:
        return sum(r.trials for r in self.results)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "results": [r.to_dict() for r in self.results]}


def _identity_checks(L, x_vec, X, a, b) -> dict[str, bool]:
    f = L.field
    A = L.ad(a)
    X2 = X @ X
    Xa, Xb = X @ a, X @ b
    X2a, X2b = X2 @ a, X2 @ b
    out = {}
    out["i"] = X2 @ A @ X == X @ A @ X2
    out["ii"] = (X2 @ A @ X2).is_zero()
    A2 = A @ A
    out["iii"] = X2 @ A2 @ X @ A @ X2 == X2 @ A @ X @ A2 @ X2
    out["iv"] = is_zero(f.reduce(L.product(X2a, Xb) + L.product(Xa, X2b)))
    ax_b = L.product(L.product(a, x_vec), b)
    bx_a = L.product(L.product(b, x_vec), a)
    out["v"] = is_zero(f.reduce(X2 @ ax_b - X2 @ bx_a))
    out["vi"] = X2 @ L.ad(L.product(a, X2b)) == L.ad(L.product(X2a, b)) @ X2
    ad_x2a = L.ad(X2a)
    out["vii"] = ad_x2a @ ad_x2a == X2 @ A2 @ X2
    out["viii"] = _is_jordan_or_zero(L, X2a)
    return out


def verify_identities(L: AlgebraPresentation, x, trials: int = 200, seed: int = 0) -> IdentityReport:
    """Check identities i-viii on ``trials`` seeded random pairs (a, b)."""
    _require_lie(L)
    xv = _coeffs(x)
    if is_zero(xv):
        raise NotJordanElement("x = 0 is not a Jordan element")
    ok, X = is_jordan_element(L, xv)
    if not ok:
        raise NotJordanElement("ad(x)^3 != 0")
    rng = np.random.default_rng(seed)
    results = {name: IdentityResult(name, trials, seed) for name in IDENTITY_NAMES}
    f = L.field
    for _ in range(trials):
        a = f.random_vector(rng, L.dim)
        b = f.random_vector(rng, L.dim)
        for name, good in _identity_checks(L, xv, X, a, b).items():
            if not good:
                r = results[name]
                r.failures += 1
                if r.counterexample is None:
                    r.counterexample = {"a": [f.format(c) for c in a.tolist()], "b": [f.format(c) for c in b.tolist()]}
    return IdentityReport([results[n] for n in IDENTITY_NAMES])


# -- idempotents ---------------------------------------------------------------


@dataclass
class PowerData:
    """Powers a, a^2, ..., a^m (independent) and the relation for a^{m+1}."""

    element: np.ndarray
    powers: list[np.ndarray]
    min_poly: list  # constant term first, zero constant term, monic


@dataclass
class NilCertificate:
    candidates_tested: int
    nilpotency_indices: list[int]
    power_series: list[int]  # dims of J ⊇ J∘J ⊇ ... ending at 0

    @property
    def nilpotent(self) -> bool:
        return self.power_series[-1] == 0

    def to_dict(self) -> dict:
        return {
            "kind": "nil_certificate",
            "candidates_tested": self.candidates_tested,
            "power_series": self.power_series,
        }


@dataclass
class IdempotentResult:
    element: AlgebraElement
    source: np.ndarray  # the non-nilpotent element it was extracted from
    min_poly: list

    def to_dict(self) -> dict:
        return {"kind": "idempotent", "element": self.element.to_strings()}


def power_data(J: AlgebraPresentation, a) -> PowerData:
    """Powers of a single element and its (non-unital) minimal polynomial."""
    f = J.field
    av = _coeffs(a)
    ech = Echelon(f, J.dim)
    powers = []
    cur = av
    while ech.add(cur):
        powers.append(cur)
        cur = J.product(av, cur)
    # power associativity within the one-generated subalgebra
    m = len(powers)
    allp = powers + [cur]
    for i in range(m):
        for j in range(m - i):
            if not is_zero(f.reduce(J.product(allp[i], allp[j]) - allp[i + j + 1])):
                raise TheoremViolation("powers of one element do not associate", i=i + 1, j=j + 1)
    if m == 0:
        return PowerData(av, [], [f(0), f(1)])
    sol = solve_linear(ExactMatrix(f, np.stack(powers, axis=1)), cur)
    # a^{m+1} = sum c_k a^k  =>  t^{m+1} - sum c_k t^k
    poly = [f(0)] + [f(-c) for c in sol.x.tolist()] + [f(1)]
    return PowerData(av, powers, poly)


def _eval_no_constant(J, data: PowerData, q) -> np.ndarray:
    f = J.field
    out = f.zeros(J.dim)
    for k, c in enumerate(q):
        if k == 0:
            if c != 0:
                raise ValueError("polynomial has a constant term")
            continue
        if c != 0:
            out = out + c * data.powers[k - 1]
    return f.reduce(out)


def idempotent_from(J: AlgebraPresentation, a) -> Optional[IdempotentResult]:
    """Idempotent in the subalgebra generated by a, or None when a is nilpotent."""
    f = J.field
    data = power_data(J, a)
    mp = data.min_poly
    s = next(i for i, c in enumerate(mp) if c != 0)
    u = mp[s:]
    if len(u) == 1:
        return None
    ts = [f(0)] * s + [f(1)]
    d, sc, _ = poly_gcdex(f, ts, u)
    if d != [f(1)]:
        raise TheoremViolation("t^s and u(t) are not coprime")
    # q = s'(t) t^s is 0 mod t^s and 1 mod u
    q = poly_divmod(f, poly_mul(f, sc, ts), mp)[1]
    e = _eval_no_constant(J, data, q)
    if is_zero(e) or not is_zero(f.reduce(J.product(e, e) - e)):
        raise TheoremViolation("interpolated element is not a nonzero idempotent")
    return IdempotentResult(J.element(e), data.element, mp)


def find_idempotent(J: AlgebraPresentation, budget: int = 512, seed: int = 0):
    """A nonzero idempotent of J, or a NilCertificate proving J nilpotent."""
    if J.kind != "jordan":
        raise ValueError("find_idempotent expects a Jordan algebra")
    f = J.field
    indices = []
    tested = 0

    def candidates():
        for i in range(J.dim):
            yield J.basis_element(i).coeffs
        rng = np.random.default_rng(seed)
        while True:
            i, j = rng.integers(0, J.dim, size=2)
            v = f.zeros(J.dim)
            c1, c2 = (int(c) for c in rng.integers(1, 6, size=2))
            v[i] = f(v[i] + c1)
            v[j] = f(v[j] + c2)
            yield f.reduce(v)

    if J.dim:
        for v in candidates():
            if tested >= budget:
                break
            tested += 1
            if is_zero(v):
                continue
            res = idempotent_from(J, v)
            if res is not None:
                return res
            indices.append(len(power_data(J, v).powers) + 1)
    series = powers_series(J)
    cert = NilCertificate(tested, indices, series)
    if not cert.nilpotent:
        raise BudgetExceeded(f"no non-nilpotent element among {tested} candidates, yet J is not nilpotent")
    return cert


# -- Pierce decomposition -----------------------------------------------------


@dataclass
class PierceDecomposition:
    one: Subspace
    zero: Subspace
    half: Subspace

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.one.dim, self.zero.dim, self.half.dim)


def pierce_decompose(J: AlgebraPresentation, e) -> PierceDecomposition:
    """Eigenspaces of R_e at 1, 0 and 1/2."""
    f = J.field
    if f.p == 2:
        raise BadChar("the eigenvalue 1/2 needs p != 2")
    ev = _coeffs(e)
    if is_zero(ev) or not is_zero(f.reduce(J.product(ev, ev) - ev)):
        raise NotIdempotent("e is not a nonzero idempotent")
    R = ExactMatrix(f, J.right_mult(ev))
    parts = [Subspace.span(J, eigenspace(R, lam)) for lam in (f(1), f(0), f.inv(f(2)))]
    if sum(p.dim for p in parts) != J.dim:
        raise TheoremViolation("Pierce eigenspaces do not span J", dims=[p.dim for p in parts])
    if not parts[0].contains(ev):
        raise TheoremViolation("e is not in its own 1-eigenspace")
    return PierceDecomposition(*parts)
