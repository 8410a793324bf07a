"""Concrete algebras: matrix Lie algebras, matrix-unit associative algebras,
involutions, skew parts K(R, *), and the skew-endomorphism realization of
the Tits-Kantor-Koecher algebra of a symmetric form.

The orthogonal and symplectic algebras are defined relative to fixed
hyperbolic Gram matrices (see :func:`form_matrix`) so that the block
formulas of :func:`square_zero_element` are literally elements of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .algcore import AlgebraElement, AlgebraPresentation, Subspace, _sp_mul
from .errors import (
    AxiomViolation,
    BadChar,
    BadParity,
    DegenerateForm,
    DimensionMismatch,
    NoSuchElement,
)
from .exactcore import ExactMatrix, FieldSpec, is_zero, kernel_basis, rref

SERIES = ("gl", "sl", "o", "sp")


def matrix_unit(field: FieldSpec, n: int, i: int, j: int) -> np.ndarray:
    m = field.zeros((n, n))
    m[i, j] = field(1)
    return m


def _unit_label(n: int, i: int, j: int) -> str:
    return f"E{i + 1}{j + 1}" if n < 10 else f"E{i + 1}_{j + 1}"


def _matrix_label(field: FieldSpec, m: np.ndarray) -> str:
    n = m.shape[0]
    terms = []
    for i, j in zip(*np.nonzero(m)):
        c = field.signed(m[i, j])
        unit = _unit_label(n, int(i), int(j))
        if c == 1:
            terms.append(("+", unit))
        elif c == -1:
            terms.append(("-", unit))
        else:
            sign = "-" if c < 0 else "+"
            terms.append((sign, f"{abs(c)}{unit}"))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        out += sign + t
    return out


class _Coordinates:
    """Coordinates of flattened matrices relative to an independent basis."""

    def __init__(self, field: FieldSpec, rows: np.ndarray):
        d, m = rows.shape
        aug = np.concatenate([rows, field.identity(d)], axis=1)
        r, piv = rref(field, aug)
        if len(piv) != d or any(p >= m for p in piv):
            raise DimensionMismatch("matrix basis is not linearly independent")
        self.field = field
        self.rows = rows
        self.pivots = piv
        self.transform = r[:, m:]

    def __call__(self, v: np.ndarray) -> np.ndarray:
        c = self.field.reduce(v[self.pivots] @ self.transform)
        if not is_zero(self.field.reduce(c @ self.rows - v)):
            raise ValueError("matrix is not in the span of the basis")
        return c


def matrix_lie_algebra(
    field: FieldSpec, mats: Sequence[np.ndarray], labels: Sequence[str] | None = None, name: str = ""
) -> AlgebraPresentation:
    """Lie algebra spanned by ``mats`` (closed under commutator) with its structure constants."""
    mats = [field.reduce(np.asarray(m, dtype=field.dtype)) for m in mats]
    if not mats:
        raise ValueError("empty matrix basis")
    coords = _Coordinates(field, np.stack([m.ravel() for m in mats]))
    structure = []
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            if i >= j:
                continue
            comm = field.reduce(a @ b - b @ a)
            if is_zero(comm):
                continue
            c = coords(comm.ravel())
            for k in np.nonzero(c)[0]:
                structure.append((i, j, int(k), c[k]))
                structure.append((j, i, int(k), field(-c[k])))
    if labels is None:
        labels = [_matrix_label(field, m) for m in mats]
    alg = AlgebraPresentation(
        "lie", field, labels, structure, realization=[ExactMatrix(field, m) for m in mats], name=name
    )
    alg._coordinates = coords
    return alg


def to_matrix(x: AlgebraElement) -> ExactMatrix:
    alg = x.parent
    if alg.realization is None:
        raise ValueError(f"{alg.name} has no matrix realization")
    f = alg.field
    n = alg.realization[0].rows
    acc = f.zeros((n, n))
    for c, m in zip(x.coeffs.tolist(), alg.realization):
        if c != 0:
            acc = acc + c * m.data
    return ExactMatrix(f, f.reduce(acc))


def from_matrix(alg: AlgebraPresentation, m) -> AlgebraElement:
    m = m.data if isinstance(m, ExactMatrix) else alg.field.array(m)
    coords = getattr(alg, "_coordinates", None)
    if coords is None:
        coords = _Coordinates(alg.field, np.stack([r.data.ravel() for r in alg.realization]))
        alg._coordinates = coords
    return alg.element(coords(m.ravel()))


def form_matrix(series: str, n: int, field: FieldSpec) -> np.ndarray:
    """Gram matrix G of the bilinear form preserved by o_n or sp_n."""
    G = field.zeros((n, n))
    k = n // 2
    if series == "sp":
        if n % 2:
            raise BadParity(f"sp_n needs even n, got {n}")
        for i in range(k):
            G[i, k + i] = field(1)
            G[k + i, i] = field(-1)
    elif series == "o":
        off = n % 2
        if off:
            G[0, 0] = field(1)
        for i in range(k):
            G[off + i, off + k + i] = field(1)
            G[off + k + i, off + i] = field(1)
    else:
        raise ValueError(f"no form for series {series!r}")
    return G


def skew_matrices(field: FieldSpec, G: np.ndarray) -> list[np.ndarray]:
    """Basis of {X : X^T G = -G X} as n x n matrices."""
    n = G.shape[0]
    # linear map X -> X^T G + G X on flattened X
    rows = []
    for a in range(n):
        for b in range(n):
            X = matrix_unit(field, n, a, b)
            rows.append(field.reduce(X.T @ G + G @ X).ravel())
    system = np.stack(rows, axis=1)
    basis = kernel_basis(field, system)
    r, _ = rref(field, np.stack(basis)) if basis else (field.zeros((0, n * n)), [])
    return [row.reshape(n, n) for row in r]


@lru_cache(maxsize=None)
def build_matrix_lie(series: str, n: int, field: FieldSpec) -> AlgebraPresentation:
    """gl_n, sl_n, o_n or sp_n over ``field`` as a structure-constant presentation."""
    if series not in SERIES:
        raise ValueError(f"unknown series {series!r}; expected one of {SERIES}")
    if n < 1:
        raise ValueError("n must be positive")
    name = f"{series}{n}({field})"
    if series == "gl":
        mats, labels = [], []
        for i in range(n):
            for j in range(n):
                mats.append(matrix_unit(field, n, i, j))
                labels.append(_unit_label(n, i, j))
        return matrix_lie_algebra(field, mats, labels, name)
    if series == "sl":
        if n < 2:
            raise ValueError("sl_n needs n >= 2")
        if n == 2:
            e = matrix_unit(field, 2, 0, 1)
            h = field.reduce(matrix_unit(field, 2, 0, 0) - matrix_unit(field, 2, 1, 1))
            f = matrix_unit(field, 2, 1, 0)
            return matrix_lie_algebra(field, [e, h, f], ["e", "h", "f"], name)
        mats, labels = [], []
        for i in range(n):
            for j in range(i + 1, n):
                mats.append(matrix_unit(field, n, i, j))
                labels.append(_unit_label(n, i, j))
        for i in range(n - 1):
            mats.append(field.reduce(matrix_unit(field, n, i, i) - matrix_unit(field, n, i + 1, i + 1)))
            labels.append(f"H{i + 1}")
        for i in range(n):
            for j in range(i):
                mats.append(matrix_unit(field, n, i, j))
                labels.append(_unit_label(n, i, j))
        return matrix_lie_algebra(field, mats, labels, name)
    if series == "sp" and n % 2:
        raise BadParity(f"sp_n needs even n, got {n}")
    if field.p == 2:
        raise BadChar(f"{series}_n is not built in characteristic 2")
    G = form_matrix(series, n, field)
    mats = skew_matrices(field, G)
    if not mats:
        raise NoSuchElement(f"{series}{n} is zero")
    alg = matrix_lie_algebra(field, mats, None, name)
    alg.form = ExactMatrix(field, G)
    return alg


def square_zero_element(series: str, n: int, field: FieldSpec) -> AlgebraElement:
    """The block element a with a^2 = 0 in sl_n, sp_n or o_n."""
    f = field
    a = f.zeros((n, n))
    if series == "sl":
        if n < 2:
            raise NoSuchElement("sl_n needs n >= 2")
        k = n // 2
        for i in range(k):
            a[i, k + i] = f(1)
    elif series == "sp":
        if n < 2 or n % 2:
            raise NoSuchElement(f"sp_n square-zero element needs even n >= 2, got {n}")
        k = n // 2
        for i in range(k):  # B = I_k
            a[i, k + i] = f(1)
    elif series == "o":
        k = n // 2
        if k < 2:
            raise NoSuchElement(f"o_n square-zero element needs a nonzero {k}x{k} skew block")
        off = n % 2
        # C = E12 - E21 in the upper-right k x k block of the hyperbolic part
        a[off + 0, off + k + 1] = f(1)
        a[off + 1, off + k + 0] = f(-1)
    else:
        raise NoSuchElement(f"no square-zero construction for series {series!r}")
    if not is_zero(f.reduce(a @ a)):
        raise AxiomViolation("square-zero element does not square to zero")
    L = build_matrix_lie(series, n, field)
    return from_matrix(L, a)


def heisenberg(field: FieldSpec) -> AlgebraPresentation:
    """Basis x, y, z with [x, y] = z central."""
    return AlgebraPresentation(
        "lie", field, ["x", "y", "z"], [(0, 1, 2, 1), (1, 0, 2, field(-1))], name=f"heis({field})"
    )


# -- associative algebras ----------------------------------------------------


@lru_cache(maxsize=None)
def matrix_algebra(n: int, field: FieldSpec) -> AlgebraPresentation:
    """M_n(F) with matrix-unit basis E_ij at index i*n + j."""
    structure = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                structure.append((i * n + j, j * n + k, i * n + k, 1))
    labels = [_unit_label(n, i, j) for i in range(n) for j in range(n)]
    real = [ExactMatrix(field, matrix_unit(field, n, i, j)) for i in range(n) for j in range(n)]
    return AlgebraPresentation("associative", field, labels, structure, realization=real, name=f"M{n}({field})")


def direct_sum(A: AlgebraPresentation, B: AlgebraPresentation, name: str = "") -> AlgebraPresentation:
    if A.kind != B.kind or A.field != B.field:
        raise DimensionMismatch("direct sum needs algebras of one kind over one field")
    n = A.dim
    structure = list(A.structure) + [(i + n, j + n, k + n, c) for i, j, k, c in B.structure]
    labels = [f"({a},0)" for a in A.basis] + [f"(0,{b})" for b in B.basis]
    return AlgebraPresentation(A.kind, A.field, labels, structure, name=name or f"{A.name}+{B.name}", validate=False)


def opposite(A: AlgebraPresentation) -> AlgebraPresentation:
    structure = [(j, i, k, c) for i, j, k, c in A.structure]
    return AlgebraPresentation(A.kind, A.field, A.basis, structure, name=f"{A.name}^op", validate=False)


def upper_triangular(n: int, field: FieldSpec) -> AlgebraPresentation:
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {ij: t for t, ij in enumerate(idx)}
    structure = []
    for (i, j) in idx:
        for k in range(j, n):
            structure.append((pos[(i, j)], pos[(j, k)], pos[(i, k)], 1))
    return AlgebraPresentation(
        "associative", field, [_unit_label(n, i, j) for i, j in idx], structure, name=f"T{n}({field})"
    )


def truncated_polynomials(k: int, field: FieldSpec) -> AlgebraPresentation:
    """F[t]/(t^k) with basis 1, t, ..., t^{k-1}."""
    structure = [(i, j, i + j, 1) for i in range(k) for j in range(k) if i + j < k]
    labels = ["1"] + [f"t^{i}" if i > 1 else "t" for i in range(1, k)]
    return AlgebraPresentation("associative", field, labels, structure, name=f"F[t]/(t^{k})")


def symmetric_matrix_jordan(n: int, field: FieldSpec) -> AlgebraPresentation:
    """Symmetric n x n matrices with a∘b = (ab + ba)/2."""
    if field.p == 2:
        raise BadChar("the symmetrized product needs p != 2")
    mats, labels = [], []
    for i in range(n):
        for j in range(i, n):
            m = matrix_unit(field, n, i, j)
            if i != j:
                m = field.reduce(m + matrix_unit(field, n, j, i))
            mats.append(m)
            labels.append(f"S{i + 1}{j + 1}")
    coords = _Coordinates(field, np.stack([m.ravel() for m in mats]))
    half = field.inv(field(2))
    structure = []
    for a, ma in enumerate(mats):
        for b, mb in enumerate(mats):
            prod = field.reduce(field.reduce(ma @ mb + mb @ ma) * half)
            c = coords(prod.ravel())
            for k in np.nonzero(c)[0]:
                structure.append((a, b, int(k), c[k]))
    return AlgebraPresentation(
        "jordan", field, labels, structure, realization=[ExactMatrix(field, m) for m in mats], name=f"H{n}({field})"
    )


def one_dim_jordan(field: FieldSpec, square=1) -> AlgebraPresentation:
    """F·u with u∘u = square·u (square = 1 gives the field itself)."""
    return AlgebraPresentation("jordan", field, ["u"], [(0, 0, 0, square)] if square else [], name=f"F({field})")


# -- involutions and skew parts -----------------------------------------------


class InvolutionMap:
    """A linear map sigma on an associative algebra with sigma^2 = 1 and
    sigma(ab) = sigma(b) sigma(a), both verified on the basis."""

    def __init__(self, parent: AlgebraPresentation, matrix: ExactMatrix):
        if parent.kind != "associative":
            raise ValueError("involutions are defined on associative algebras")
        if matrix.shape != (parent.dim, parent.dim):
            raise DimensionMismatch("involution matrix has the wrong shape")
        self.parent = parent
        self.matrix = matrix
        self._verify()

    def _verify(self):
        A, S = self.parent, self.matrix
        f = A.field
        if not (S @ S) == ExactMatrix.identity(f, A.dim):
            raise AxiomViolation("involution is not of order 2")
        cols = []
        for i in range(A.dim):
            col = S.data[:, i]
            cols.append({int(k): col[k] for k in np.nonzero(col)[0]})
        for i in range(A.dim):
            for j in range(A.dim):
                prod = A.basis_product(i, j)
                lhs: dict = {}
                for k, c in prod.items():
                    for q, s in cols[k].items():
                        lhs[q] = f(lhs.get(q, 0) + c * s)
                lhs = {q: c for q, c in lhs.items() if c != 0}
                rhs = _sp_mul(A, cols[j], cols[i])
                if lhs != rhs:
                    raise AxiomViolation(f"(b_{i} b_{j})* != b_{j}* b_{i}*", pair=(i, j))

    def __call__(self, x):
        v = x.coeffs if isinstance(x, AlgebraElement) else x
        out = self.matrix @ v
        return self.parent.element(out) if isinstance(x, AlgebraElement) else out


def transpose_involution(n: int, field: FieldSpec) -> InvolutionMap:
    A = matrix_algebra(n, field)
    S = field.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            S[j * n + i, i * n + j] = field(1)
    return InvolutionMap(A, ExactMatrix(field, S))


def matrix_pair_algebra(n: int, field: FieldSpec) -> tuple[AlgebraPresentation, InvolutionMap]:
    """M_n ⊕ M_n with the exchange-transpose involution (A, B)* = (B^T, A^T)."""
    M = matrix_algebra(n, field)
    R = direct_sum(M, M, name=f"M{n}+M{n}({field})")
    m = n * n
    S = field.zeros((2 * m, 2 * m))
    for i in range(n):
        for j in range(n):
            S[m + j * n + i, i * n + j] = field(1)
            S[j * n + i, m + i * n + j] = field(1)
    R = AlgebraPresentation(
        "associative", field, R.basis, R.structure, involution=ExactMatrix(field, S), name=R.name, validate=False
    )
    return R, InvolutionMap(R, R.involution)


def exchange_involution(A: AlgebraPresentation) -> tuple[AlgebraPresentation, InvolutionMap]:
    """A ⊕ A^op with (a, b)* = (b, a)."""
    R = direct_sum(A, opposite(A), name=f"{A.name}+{A.name}^op")
    n = A.dim
    f = A.field
    S = f.zeros((2 * n, 2 * n))
    for i in range(n):
        S[n + i, i] = f(1)
        S[i, n + i] = f(1)
    R = AlgebraPresentation("associative", f, R.basis, R.structure, involution=ExactMatrix(f, S), name=R.name)
    return R, InvolutionMap(R, R.involution)


class SkewPart(NamedTuple):
    algebra: AlgebraPresentation  # K(R, sigma) with the commutator
    inclusion: ExactMatrix  # dim R x dim K; columns are the basis of K inside R
    subspace: Subspace  # K as a subspace of R

    def to_ambient(self, x) -> np.ndarray:
        v = x.coeffs if isinstance(x, AlgebraElement) else x
        return self.inclusion @ v

    def from_ambient(self, v) -> AlgebraElement:
        v = v.coeffs if isinstance(v, AlgebraElement) else v
        if not self.subspace.contains(v):
            raise ValueError("vector is not skew")
        return self.algebra.element(self.subspace.coordinates(v))


def skew_part(R: AlgebraPresentation, sigma: InvolutionMap) -> SkewPart:
    """K(R, sigma) = {x : sigma(x) = -x} as a Lie algebra under the commutator."""
    if sigma.parent is not R:
        raise ValueError("involution belongs to a different algebra")
    f = R.field
    if f.p == 2:
        raise BadChar("skew elements need p != 2")
    system = f.reduce(sigma.matrix.data + f.identity(R.dim))
    K = Subspace.span(R, kernel_basis(f, system))
    rows = K.rows
    piv = list(K.pivots)
    structure = []
    for a in range(K.dim):
        for b in range(a + 1, K.dim):
            u, v = rows[a], rows[b]
            comm = f.reduce(R.product(u, v) - R.product(v, u))
            if is_zero(comm):
                continue
            if not K.contains(comm):
                raise AxiomViolation("skew part is not closed under the commutator")
            c = comm[piv]
            for k in np.nonzero(c)[0]:
                structure.append((a, b, int(k), c[k]))
                structure.append((b, a, int(k), f(-c[k])))
    labels = [_vector_label(R, r) for r in rows]
    Kalg = AlgebraPresentation("lie", f, labels, structure, name=f"K({R.name})")
    incl = ExactMatrix(f, rows.T.copy()) if K.dim else ExactMatrix.zeros(f, R.dim, 0)
    return SkewPart(Kalg, incl, K)


def _vector_label(R: AlgebraPresentation, v: np.ndarray) -> str:
    f = R.field
    parts = []
    for k in np.nonzero(v)[0]:
        c = f.signed(v[k])
        lab = R.basis[k]
        if c == 1:
            parts.append(("+", lab))
        elif c == -1:
            parts.append(("-", lab))
        else:
            parts.append(("-" if c < 0 else "+", f"{abs(c)}{lab}"))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, t in parts[1:]:
        s += sign + t
    return s


# -- bilinear forms and the TKK realization -----------------------------------

W_FORM = ((0, 1, 0), (1, 0, 0), (0, 0, -1))


@dataclass(frozen=True)
class BilinearForm:
    gram: ExactMatrix
    symmetric: bool = True

    def __post_init__(self):
        G = self.gram
        if G.rows != G.cols:
            raise DimensionMismatch("Gram matrix must be square")
        expected = G if self.symmetric else -G
        if not G.T == expected:
            raise DegenerateForm("Gram matrix does not match its symmetry flag")

    @property
    def dim(self) -> int:
        return self.gram.rows

    def is_nondegenerate(self) -> bool:
        return self.gram.rank() == self.dim


def tkk_skew(form: BilinearForm) -> AlgebraPresentation:
    """Endomorphisms of V ⊥ W skew for f ⊥ g, with g the fixed 3x3 form on W."""
    if not form.symmetric or form.dim < 1 or not form.is_nondegenerate():
        raise DegenerateForm("tkk_skew needs a nondegenerate symmetric form on a space of dim >= 1")
    f = form.gram.field
    if f.p == 2:
        raise BadChar("skew endomorphisms need p != 2")
    m = form.dim
    H = f.zeros((m + 3, m + 3))
    H[:m, :m] = form.gram.data
    H[m:, m:] = f.array(W_FORM)
    mats = skew_matrices(f, H)
    alg = matrix_lie_algebra(f, mats, None, f"TKK(m={m},{f})")
    alg.form = ExactMatrix(f, H)
    return alg
