"""Finite-dimensional algebras given by structure constants.

An :class:`AlgebraPresentation` stores a sparse table of products of basis
elements.  Products of general elements are computed by gathering the
coefficients of every structure entry at once, which keeps the cost linear
in the number of nonzero structure constants.
"""

from __future__ import annotations

import json
from itertools import combinations_with_replacement
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    AxiomViolation,
    CharTooSmall,
    DimensionMismatch,
    NotAnIdeal,
    ParentMismatch,
    TheoremViolation,
)
from .exactcore import (
    Echelon,
    ExactMatrix,
    FieldSpec,
    is_zero,
    kernel_basis,
    span_rref,
)

KINDS = ("lie", "associative", "jordan")


class AlgebraPresentation:
    """Basis labels plus sparse structure constants ``b_i * b_j = sum c b_k``.

    ``involution`` (an optional dim x dim matrix) is carried for the JSON
    format; ``realization`` optionally records a matrix for each basis
    element when the algebra was built from matrices.
    """

    def __init__(
        self,
        kind: str,
        field: FieldSpec,
        basis: Sequence[str],
        structure: Iterable[tuple],
        *,
        involution: Optional[ExactMatrix] = None,
        realization: Optional[Sequence[ExactMatrix]] = None,
        name: str = "",
        validate: bool = True,
    ):
        if kind not in KINDS:
            raise ValueError(f"unknown algebra kind {kind!r}")
        self.kind = kind
        self.field = field
        self.basis = tuple(str(b) for b in basis)
        self.dim = len(self.basis)
        self.name = name or f"{kind}[{self.dim}]"
        merged: dict[tuple[int, int, int], object] = {}
        for i, j, k, c in structure:
            i, j, k = int(i), int(j), int(k)
            if not (0 <= i < self.dim and 0 <= j < self.dim and 0 <= k < self.dim):
                raise DimensionMismatch(f"structure index out of range: {(i, j, k)}")
            merged[(i, j, k)] = field(merged.get((i, j, k), 0) + field(c))
        self.structure = tuple(sorted((i, j, k, c) for (i, j, k), c in merged.items() if c != 0))
        self._table: dict[tuple[int, int], dict[int, object]] = {}
        for i, j, k, c in self.structure:
            self._table.setdefault((i, j), {})[k] = c
        n = len(self.structure)
        self._I = np.fromiter((s[0] for s in self.structure), dtype=np.int64, count=n)
        self._J = np.fromiter((s[1] for s in self.structure), dtype=np.int64, count=n)
        self._K = np.fromiter((s[2] for s in self.structure), dtype=np.int64, count=n)
        self._C = field.array([s[3] for s in self.structure]) if n else field.zeros(0)
        if involution is not None and involution.shape != (self.dim, self.dim):
            raise DimensionMismatch("involution matrix has the wrong shape")
        self.involution = involution
        self.realization = tuple(realization) if realization is not None else None
        if validate:
            check_axioms(self)

    def __repr__(self):
        return f"<AlgebraPresentation {self.name} {self.kind} dim={self.dim} over {self.field}>"

    # -- elements ----------------------------------------------------------

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, self.field.zeros(self.dim))

    def basis_element(self, i: int) -> "AlgebraElement":
        v = self.field.zeros(self.dim)
        v[i] = self.field(1)
        return AlgebraElement(self, v)

    def basis_elements(self) -> list["AlgebraElement"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def __getitem__(self, label: str) -> "AlgebraElement":
        return self.basis_element(self.basis.index(label))

    # -- raw vector products -----------------------------------------------

    def product(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        f = self.field
        out = f.zeros(self.dim)
        if self.structure:
            w = f.reduce(f.reduce(u[self._I] * v[self._J]) * self._C)
            np.add.at(out, self._K, w)
        return f.reduce(out)

    def left_mult(self, u: np.ndarray) -> np.ndarray:
        """Matrix of v -> u * v (columns indexed by the basis)."""
        f = self.field
        out = f.zeros((self.dim, self.dim))
        if self.structure:
            np.add.at(out, (self._K, self._J), f.reduce(u[self._I] * self._C))
        return f.reduce(out)

    def right_mult(self, v: np.ndarray) -> np.ndarray:
        """Matrix of u -> u * v."""
        f = self.field
        out = f.zeros((self.dim, self.dim))
        if self.structure:
            np.add.at(out, (self._K, self._I), f.reduce(v[self._J] * self._C))
        return f.reduce(out)

    def ad(self, x) -> ExactMatrix:
        """Left multiplication operator; ad(x) for Lie algebras."""
        return ExactMatrix(self.field, self.left_mult(_coeffs(x)))

    def basis_product(self, i: int, j: int) -> dict:
        return self._table.get((i, j), {})

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "p": self.field.p,
            "dim": self.dim,
            "basis": list(self.basis),
            "structure": [[i, j, k, self.field.format(c)] for i, j, k, c in self.structure],
        }
        if self.involution is not None:
            d["involution"] = self.involution.to_strings()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, d: dict, validate: bool = True) -> "AlgebraPresentation":
        field = FieldSpec(int(d["p"]))
        basis = d["basis"]
        if int(d["dim"]) != len(basis):
            raise DimensionMismatch("dim does not match the number of basis labels")
        structure = [(i, j, k, field.parse(str(c))) for i, j, k, c in d["structure"]]
        inv = d.get("involution")
        involution = ExactMatrix.from_strings(field, inv) if inv is not None else None
        return cls(d["kind"], field, basis, structure, involution=involution, validate=validate)

    @classmethod
    def from_json(cls, text: str, validate: bool = True) -> "AlgebraPresentation":
        return cls.from_dict(json.loads(text), validate=validate)


def _coeffs(x) -> np.ndarray:
    return x.coeffs if isinstance(x, AlgebraElement) else x


class AlgebraElement:
    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: AlgebraPresentation, coeffs):
        f = parent.field
        arr = np.asarray(coeffs)
        if arr.dtype != np.dtype(f.dtype):
            arr = f.array(list(arr.tolist()) if arr.ndim else [])
        else:
            arr = f.reduce(arr.copy())
        if arr.shape != (parent.dim,):
            raise DimensionMismatch(f"expected {parent.dim} coefficients, got {arr.shape}")
        arr.setflags(write=False)
        self.parent = parent
        self.coeffs = arr

    def _same(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.parent is not self.parent:
            raise ParentMismatch("elements of different algebras")
        return other

    def __add__(self, other):
        other = self._same(other)
        return AlgebraElement(self.parent, self.coeffs + other.coeffs)

    def __sub__(self, other):
        other = self._same(other)
        return AlgebraElement(self.parent, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgebraElement(self.parent, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.parent, self.coeffs * self.parent.field(other))

    def __rmul__(self, scalar):
        return AlgebraElement(self.parent, self.coeffs * self.parent.field(scalar))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.parent is other.parent and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash((id(self.parent), tuple(self.coeffs.tolist())))

    def is_zero(self) -> bool:
        return is_zero(self.coeffs)

    def key(self) -> tuple:
        return tuple(int(c) if self.parent.field.p else c for c in self.coeffs.tolist())

    def to_strings(self) -> list[str]:
        return [self.parent.field.format(c) for c in self.coeffs.tolist()]

    def __repr__(self):
        terms = []
        for c, lab in zip(self.coeffs.tolist(), self.parent.basis):
            if c != 0:
                terms.append(lab if c == 1 else f"{self.parent.field.format(c)}*{lab}")
        return " + ".join(terms) if terms else "0"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.parent is not b.parent:
        raise ParentMismatch("cannot multiply elements of different algebras")
    return AlgebraElement(a.parent, a.parent.product(a.coeffs, b.coeffs))


# -- axiom checks ------------------------------------------------------------


def _sp_mul(alg: AlgebraPresentation, u: dict, v: dict) -> dict:
    f = alg.field
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in alg._table.get((i, j), {}).items():
                out[k] = f(out.get(k, 0) + a * b * c)
    return {k: c for k, c in out.items() if c != 0}


def _sp_sub(f, u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        out[k] = f(out.get(k, 0) - c)
    return {k: c for k, c in out.items() if c != 0}


def check_axioms(alg: AlgebraPresentation) -> None:
    """Reject a presentation whose product violates its kind's axioms."""
    f = alg.field
    table = alg._table
    n = alg.dim
    by_left: dict[int, set[int]] = {}
    by_right: dict[int, set[int]] = {}
    for (i, j) in table:
        by_left.setdefault(i, set()).add(j)
        by_right.setdefault(j, set()).add(i)

    if alg.kind == "lie":
        for (i, j), prod in table.items():
            if i == j:
                raise AxiomViolation(f"[b{i}, b{i}] != 0", pair=(i, j))
            other = table.get((j, i), {})
            if _sp_sub(f, prod, {k: f(-c) for k, c in other.items()}):
                raise AxiomViolation(f"antisymmetry fails on ({i}, {j})", pair=(i, j))
        triples = set()
        for (i, j), prod in table.items():
            for kk in prod:
                for k in by_left.get(kk, ()):
                    triples.add(tuple(sorted((i, j, k))))
        for i, j, k in triples:
            bi, bj, bk = {i: 1}, {j: 1}, {k: 1}
            total = _sp_mul(alg, _sp_mul(alg, bi, bj), bk)
            for term in (_sp_mul(alg, _sp_mul(alg, bj, bk), bi), _sp_mul(alg, _sp_mul(alg, bk, bi), bj)):
                total = _sp_sub(f, total, {q: f(-c) for q, c in term.items()})
            if total:
                raise AxiomViolation(f"Jacobi identity fails on ({i}, {j}, {k})", triple=(i, j, k))

    elif alg.kind == "associative":
        triples = set()
        for (i, j), prod in table.items():
            for kk in prod:
                for k in by_left.get(kk, ()):
                    triples.add((i, j, k))
                for h in by_right.get(kk, ()):
                    # b_h (b_i b_j): middle and right factors are i, j
                    triples.add((h, i, j))
        for i, j, k in triples:
            bi, bj, bk = {i: 1}, {j: 1}, {k: 1}
            lhs = _sp_mul(alg, _sp_mul(alg, bi, bj), bk)
            rhs = _sp_mul(alg, bi, _sp_mul(alg, bj, bk))
            if _sp_sub(f, lhs, rhs):
                raise AxiomViolation(f"associativity fails on ({i}, {j}, {k})", triple=(i, j, k))

    else:
        for (i, j), prod in table.items():
            if _sp_sub(f, prod, table.get((j, i), {})):
                raise AxiomViolation(f"commutativity fails on ({i}, {j})", pair=(i, j))
        basis = [alg.basis_element(i).coeffs for i in range(n)]
        prod = alg.product
        for xi in range(n):
            x = basis[xi]
            x2 = prod(x, x)
            for yi in range(n):
                y = basis[yi]
                lhs = prod(x2, prod(y, x))
                rhs = prod(prod(x2, y), x)
                if not is_zero(f.reduce(lhs - rhs)):
                    raise AxiomViolation(f"Jordan identity fails on ({xi}, {yi})", pair=(xi, yi))
        if f.p not in (2, 3):
            # Polarized identity sum_cyc [R_{a∘b}, R_c] = 0 on basis triples is
            # equivalent to the Jordan identity for all elements when 6 is invertible.
            R = [alg.right_mult(b) for b in basis]
            for a, b, c in combinations_with_replacement(range(n), 3):
                total = f.zeros((n, n))
                for (u, v, w) in ((a, b, c), (b, c, a), (c, a, b)):
                    Ruv = alg.right_mult(prod(basis[u], basis[v]))
                    total = total + Ruv @ R[w] - R[w] @ Ruv
                if not is_zero(f.reduce(total)):
                    raise AxiomViolation(f"linearized Jordan identity fails on ({a}, {b}, {c})", triple=(a, b, c))


# -- subspaces ---------------------------------------------------------------


class Subspace:
    """A subspace of an algebra in canonical reduced row echelon form."""

    __slots__ = ("parent", "rows", "pivots")

    def __init__(self, parent: AlgebraPresentation, rows: np.ndarray, pivots: Sequence[int]):
        rows = np.array(rows, dtype=parent.field.dtype).reshape(len(pivots), parent.dim)
        rows.setflags(write=False)
        self.parent = parent
        self.rows = rows
        self.pivots = tuple(int(p) for p in pivots)

    @classmethod
    def span(cls, parent: AlgebraPresentation, vectors: Iterable) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            if isinstance(v, AlgebraElement) and v.parent is not parent:
                raise ParentMismatch("vector from a different algebra")
        vecs = [_coeffs(v) for v in vectors]
        rows, piv = span_rref(parent.field, vecs, parent.dim)
        return cls(parent, rows, piv)

    @classmethod
    def from_echelon(cls, parent, ech: Echelon) -> "Subspace":
        rows, piv = ech.canonical()
        return cls(parent, rows, piv)

    @classmethod
    def zero(cls, parent) -> "Subspace":
        return cls(parent, parent.field.zeros((0, parent.dim)), [])

    @classmethod
    def whole(cls, parent) -> "Subspace":
        return cls(parent, parent.field.identity(parent.dim), range(parent.dim))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[AlgebraElement]:
        return [AlgebraElement(self.parent, r) for r in self.rows]

    def reduce(self, v) -> np.ndarray:
        v = _coeffs(v)
        if not self.pivots:
            return self.parent.field.reduce(np.array(v, dtype=self.parent.field.dtype))
        return self.parent.field.reduce(v - v[list(self.pivots)] @ self.rows)

    def reduce_rows(self, m: np.ndarray) -> np.ndarray:
        if not self.pivots or m.shape[0] == 0:
            return self.parent.field.reduce(m)
        return self.parent.field.reduce(m - m[:, list(self.pivots)] @ self.rows)

    def contains(self, v) -> bool:
        if isinstance(v, AlgebraElement) and v.parent is not self.parent:
            raise ParentMismatch("element of a different algebra")
        return is_zero(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v) -> np.ndarray:
        """Coordinates relative to ``basis()``; the caller must ensure membership."""
        return _coeffs(v)[list(self.pivots)]

    def is_whole(self) -> bool:
        return self.dim == self.parent.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.parent is other.parent
            and self.pivots == other.pivots
            and bool(np.all(self.rows == other.rows))
        )

    def __le__(self, other: "Subspace") -> bool:
        return is_zero(other.reduce_rows(self.rows))

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.parent is not self.parent:
            raise ParentMismatch("subspaces of different algebras")
        return Subspace.span(self.parent, list(self.rows) + list(other.rows))

    def intersection(self, other: "Subspace") -> "Subspace":
        if other.parent is not self.parent:
            raise ParentMismatch("subspaces of different algebras")
        f = self.parent.field
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.parent)
        # a·U = b·W  <=>  [U; -W]^T (a, b) = 0
        stacked = np.concatenate([self.rows, f.reduce(-other.rows)], axis=0).T
        ker = kernel_basis(f, stacked)
        vecs = [f.reduce(k[: self.dim] @ self.rows) for k in ker]
        return Subspace.span(self.parent, vecs)

    def __repr__(self):
        return f"<Subspace dim={self.dim} of {self.parent.name}>"


# -- closures ----------------------------------------------------------------


def _check_parent(elems: Sequence[AlgebraElement]) -> AlgebraPresentation:
    if not elems:
        raise ValueError("need at least one generator")
    parent = elems[0].parent
    for e in elems:
        if e.parent is not parent:
            raise ParentMismatch("generators from different algebras")
    return parent


def closure(
    parent: AlgebraPresentation,
    gens: Iterable,
    product: Callable[[np.ndarray, np.ndarray], np.ndarray],
) -> Subspace:
    """Least subspace containing ``gens`` and closed under ``product``."""
    ech = Echelon(parent.field, parent.dim)
    members: list[np.ndarray] = []
    queue = []
    for g in gens:
        g = _coeffs(g)
        if ech.add(g):
            queue.append(g)
    while queue:
        v = queue.pop(0)
        members.append(v)
        for w in list(members):
            for p in (product(v, w), product(w, v)):
                if ech.add(p):
                    queue.append(p)
    return Subspace.from_echelon(parent, ech)


def subalgebra_closure(gens: Sequence[AlgebraElement]) -> Subspace:
    parent = _check_parent(gens)
    return closure(parent, gens, parent.product)


def lie_closure(gens: Sequence[AlgebraElement]) -> Subspace:
    """Lie subalgebra generated under the commutator of the parent's product."""
    parent = _check_parent(gens)
    f = parent.field
    return closure(parent, gens, lambda u, v: f.reduce(parent.product(u, v) - parent.product(v, u)))


def ideal_generated(S, extra: Sequence[AlgebraElement] = ()) -> Subspace:
    """Least two-sided ideal containing ``S`` (a Subspace or list of elements)."""
    if isinstance(S, Subspace):
        parent, gens = S.parent, list(S.rows)
    else:
        parent = _check_parent(list(S))
        gens = [e.coeffs for e in S]
    gens = gens + [e.coeffs for e in extra]
    f = parent.field
    ech = Echelon(f, parent.dim)
    queue = [g for g in gens if ech.add(g)]
    two_sided = parent.kind == "associative"
    while queue and len(ech) < parent.dim:
        v = queue.pop(0)
        # rows of right_mult(v)^T are b_i * v; rows of left_mult(v)^T are v * b_j
        blocks = [parent.right_mult(v).T]
        if two_sided:
            blocks.append(parent.left_mult(v).T)
        queue.extend(ech.add_block(np.concatenate(blocks, axis=0)))
    return Subspace.from_echelon(parent, ech)


def is_ideal(I: Subspace) -> bool:
    parent = I.parent
    for v in I.rows:
        blocks = [parent.right_mult(v).T, parent.left_mult(v).T]
        for b in blocks:
            if not is_zero(I.reduce_rows(b)):
                return False
    return True


class Quotient(NamedTuple):
    algebra: AlgebraPresentation
    projection: ExactMatrix  # (dim quotient) x (dim source)
    complement: tuple[int, ...]  # source basis indices that descend to the quotient basis

    def project(self, v) -> np.ndarray:
        return self.projection @ _coeffs(v)

    def lift(self, w) -> np.ndarray:
        """Section: quotient coordinates placed on the complement basis vectors."""
        src_dim = self.projection.cols
        f = self.projection.field
        out = f.zeros(src_dim)
        out[list(self.complement)] = _coeffs(w)
        return out


def quotient(
    A: AlgebraPresentation,
    I: Subspace,
    *,
    product: Optional[Callable] = None,
    kind: Optional[str] = None,
    check_ideal: bool = True,
    labels_suffix: str = "",
) -> Quotient:
    """Quotient presentation on the non-pivot coordinates of ``I``.

    ``product`` overrides the multiplication that descends (used for the
    algebra L^(x)); ``kind`` sets the kind of the result.
    """
    if I.parent is not A:
        raise ParentMismatch("ideal of a different algebra")
    f = A.field
    product = product or A.product
    kind = kind or A.kind
    n = A.dim
    if check_ideal:
        for v in I.rows:
            for i in range(n):
                b = A.basis_element(i).coeffs
                if not I.contains(product(b, v)) or not I.contains(product(v, b)):
                    raise NotAnIdeal("subspace does not absorb multiplication", basis_index=i)
    comp = tuple(c for c in range(n) if c not in set(I.pivots))
    red = I.reduce_rows(f.identity(n))  # row m = reduction of e_m
    proj = ExactMatrix(f, red[:, list(comp)].T.copy())
    structure = []
    for a, ia in enumerate(comp):
        for b, ib in enumerate(comp):
            prod = proj @ product(A.basis_element(ia).coeffs, A.basis_element(ib).coeffs)
            for k in np.nonzero(prod)[0]:
                structure.append((a, b, int(k), prod[k]))
    Q = AlgebraPresentation(
        kind, f, [A.basis[c] + labels_suffix for c in comp], structure, name=f"{A.name}/I"
    )
    # the projection must be multiplicative on every basis pair
    for i in range(n):
        bi = A.basis_element(i).coeffs
        pi = proj @ bi
        for j in range(n):
            bj = A.basis_element(j).coeffs
            if not is_zero(f.reduce(proj @ product(bi, bj) - Q.product(pi, proj @ bj))):
                raise NotAnIdeal("projection is not a homomorphism", pair=(i, j))
    return Quotient(Q, proj, comp)


def center(A: AlgebraPresentation) -> Subspace:
    f = A.field
    n = A.dim
    if n == 0:
        return Subspace.zero(A)
    blocks = []
    if A.kind == "lie":
        # z with [z, b_i] = 0: stack right-multiplication operators
        for i in range(n):
            blocks.append(A.right_mult(A.basis_element(i).coeffs))
    elif A.kind == "associative":
        for i in range(n):
            b = A.basis_element(i).coeffs
            blocks.append(f.reduce(A.right_mult(b) - A.left_mult(b)))
    else:
        # Jordan center: z with R_z commuting with every R_b
        R = [A.right_mult(A.basis_element(i).coeffs) for i in range(n)]
        for i in range(n):
            cols = []
            for m in range(n):
                Rm = A.right_mult(A.basis_element(m).coeffs)
                cols.append(f.reduce(Rm @ R[i] - R[i] @ Rm).ravel())
            blocks.append(np.stack(cols, axis=1))
    return Subspace.span(A, kernel_basis(f, np.concatenate(blocks, axis=0)))


def derived(A: AlgebraPresentation) -> Subspace:
    """Span of all products of basis elements ([A, A] for Lie algebras)."""
    f = A.field
    vecs = []
    for (i, j), prod in A._table.items():
        v = f.zeros(A.dim)
        for k, c in prod.items():
            v[k] = c
        vecs.append(v)
    return Subspace.span(A, vecs)


def commutator_algebra(R: AlgebraPresentation) -> AlgebraPresentation:
    """R^(-): the same space with the commutator product."""
    f = R.field
    structure = []
    for (i, j), prod in R._table.items():
        for k, c in prod.items():
            structure.append((i, j, k, c))
            structure.append((j, i, k, f(-c)))
    return AlgebraPresentation(
        "lie", f, R.basis, structure, realization=R.realization, name=f"{R.name}^(-)"
    )


def powers_series(A: AlgebraPresentation) -> list[int]:
    """Dimensions of A ⊇ A·A ⊇ (A·A)·A ⊇ ... (two-sided for associative kind)."""
    dims = []
    cur = Subspace.whole(A)
    while True:
        dims.append(cur.dim)
        if cur.dim == 0:
            return dims
        vecs = []
        for v in cur.rows:
            vecs.extend(A.right_mult(v).T)
            if A.kind == "associative":
                vecs.extend(A.left_mult(v).T)
        nxt = Subspace.span(A, vecs)
        if nxt.dim == cur.dim:
            dims.append(nxt.dim)
            return dims
        cur = nxt


def is_nilpotent_algebra(A: AlgebraPresentation) -> bool:
    return powers_series(A)[-1] == 0


def nil_radical_traceform(A: AlgebraPresentation) -> Subspace:
    """Radical of an associative algebra via the kernel of the trace form.

    Valid in characteristic 0 or p > dim.  The kernel is computed, the
    quotient is formed, and the procedure repeats until the quotient's form
    is nondegenerate.
    """
    if A.kind != "associative":
        raise ValueError("nil_radical_traceform needs an associative algebra")
    p = A.field.p
    if p != 0 and p <= A.dim:
        raise CharTooSmall(f"trace-form radical needs p > dim = {A.dim}, got p = {p}")
    N = _trace_kernel(A)
    while N.dim:
        q = quotient(A, N)
        extra = _trace_kernel(q.algebra)
        if extra.dim == 0:
            break
        lifts = [q.lift(v) for v in extra.rows]
        N = Subspace.span(A, list(N.rows) + lifts)
    if N.dim and not is_ideal(N):
        raise TheoremViolation("trace-form kernel is not an ideal")
    if not _is_nilpotent_subspace(A, N):
        raise TheoremViolation("trace-form kernel is not nilpotent")
    return N


def _trace_kernel(A: AlgebraPresentation) -> Subspace:
    f = A.field
    n = A.dim
    if n == 0:
        return Subspace.zero(A)
    trL = f.zeros(n)  # trL[k] = trace of left multiplication by b_k
    diag = A._J == A._K
    np.add.at(trL, A._I[diag], A._C[diag])
    trL = f.reduce(trL)
    G = f.zeros((n, n))
    np.add.at(G, (A._I, A._J), f.reduce(A._C * trL[A._K]))
    G = f.reduce(G)
    # x with sum_i x_i G[i, j] = 0 for all j and sum_i x_i trL[i] = 0
    system = np.concatenate([G.T, trL[None, :]], axis=0)
    return Subspace.span(A, kernel_basis(f, system))


def _is_nilpotent_subspace(A, N: Subspace) -> bool:
    cur = [r for r in N.rows]
    for _ in range(A.dim + 1):
        if not cur:
            return True
        prods = [A.product(u, v) for u in cur for v in N.rows]
        cur = list(Subspace.span(A, prods).rows)
    return not cur


def load_algebra(path) -> AlgebraPresentation:
    with open(path, "r", encoding="utf-8") as fh:
        return AlgebraPresentation.from_json(fh.read())


def save_algebra(A: AlgebraPresentation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(A.to_json())
