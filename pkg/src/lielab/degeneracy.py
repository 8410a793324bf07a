"""Sandwich elements, S-sequences and m-sequences over finite fields.

Over GF(p) an algebra is a finite set, so "every S-sequence from x
terminates" is decided by asking whether a cycle of nonzero elements is
reachable from x.  Elements are encoded as integers in base p.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .algcore import AlgebraPresentation, Subspace, _coeffs, is_nilpotent_algebra, lie_closure
from .config import enumeration_budget
from .errors import BudgetExceeded, NotJordanElement, PreconditionFailed, ZeroElement
from .exactcore import is_zero
from .jordan import build_L_x, u_operator

_CHUNK = 4096


def _require_finite(A: AlgebraPresentation):
    if not A.field.is_finite:
        raise BudgetExceeded("enumeration needs a finite field")


def _space_size(A: AlgebraPresentation) -> int:
    return A.field.p ** A.dim


def _weights(A: AlgebraPresentation) -> np.ndarray:
    return np.array([A.field.p ** i for i in range(A.dim)], dtype=object if _space_size(A) >= 2**62 else np.int64)


def encode(A: AlgebraPresentation, v) -> int:
    return int(sum(int(c) * A.field.p ** i for i, c in enumerate(_coeffs(v).tolist())))


def encode_rows(A: AlgebraPresentation, rows: np.ndarray) -> np.ndarray:
    return rows.astype(np.int64) @ _weights(A)


def decode(A: AlgebraPresentation, code: int) -> np.ndarray:
    p = A.field.p
    out = A.field.zeros(A.dim)
    for i in range(A.dim):
        code, out[i] = divmod(code, p)
    return out


def decode_range(A: AlgebraPresentation, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    p = A.field.p
    out = np.empty((len(codes), A.dim), dtype=np.int64)
    for i in range(A.dim):
        codes, out[:, i] = np.divmod(codes, p)
    return out


def _ad_tensor(L: AlgebraPresentation) -> np.ndarray:
    """T[i] = ad(b_i), so ad(x) = sum_i x_i T[i]."""
    return np.stack([L.left_mult(L.basis_element(i).coeffs) for i in range(L.dim)])


# -- sandwiches -----------------------------------------------------------------


@dataclass
class SandwichResult:
    mode: str  # "exact" or "sampled"
    examined: int
    elements: list[np.ndarray]

    @property
    def count(self) -> int:
        return len(self.elements)

    def to_dict(self) -> dict:
        return {"mode": self.mode, "examined": self.examined, "count": self.count}


def _is_sandwich_batch(L, T, X: np.ndarray) -> np.ndarray:
    p = L.field.p
    ad = np.tensordot(X, T, axes=(1, 0)) % p  # (batch, n, n)
    sq = np.matmul(ad, ad) % p
    return ~np.any(sq.reshape(len(X), -1), axis=1)


def sandwich_set(
    L: AlgebraPresentation,
    mode: str = "exact",
    budget: Optional[int] = None,
    samples: int = 10000,
    seed: int = 0,
) -> SandwichResult:
    """Nonzero x with ad(x)^2 L = 0; exhaustive in exact mode, random in sampled mode."""
    _require_finite(L)
    budget = enumeration_budget() if budget is None else budget
    T = _ad_tensor(L)
    found = []
    if mode == "exact":
        total = _space_size(L)
        if total > budget:
            raise BudgetExceeded(f"{total} elements exceed the enumeration budget {budget}")
        for start in range(1, total, _CHUNK):
            X = decode_range(L, start, min(start + _CHUNK, total))
            mask = _is_sandwich_batch(L, T, X)
            found.extend(X[mask])
        return SandwichResult("exact", total - 1, [L.field.reduce(v) for v in found])
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        X = rng.integers(0, L.field.p, size=(samples, L.dim), dtype=np.int64)
        X = X[np.any(X != 0, axis=1)]
        mask = _is_sandwich_batch(L, T, X)
        uniq = {tuple(v.tolist()): v for v in X[mask]}
        return SandwichResult("sampled", len(X), [uniq[k] for k in sorted(uniq)])
    raise ValueError(f"unknown mode {mode!r}")


def sandwich_set_by_products(L: AlgebraPresentation, budget: Optional[int] = None) -> list[np.ndarray]:
    """Independent enumeration: x is kept when [x, [x, b_i]] = 0 for every basis b_i.

    Elements are visited in reverse code order using the algebra's own
    product rather than ad matrices.
    """
    _require_finite(L)
    budget = enumeration_budget() if budget is None else budget
    total = _space_size(L)
    if total > budget:
        raise BudgetExceeded(f"{total} elements exceed the enumeration budget {budget}")
    basis = [b.coeffs for b in L.basis_elements()]
    out = []
    for code in range(total - 1, 0, -1):
        x = decode(L, code)
        if all(is_zero(L.product(x, L.product(x, b))) for b in basis):
            out.append(x)
    return out[::-1]


def is_nondegenerate(L: AlgebraPresentation, budget: Optional[int] = None) -> bool:
    return sandwich_set(L, budget=budget).count == 0


def sandwich_generated_nilpotent(L: AlgebraPresentation, gens: Sequence) -> tuple[bool, list[int]]:
    """Is Lie(gens) nilpotent?  Returns the flag and the lower central series dims."""
    elems = [L.element(_coeffs(g)) for g in gens]
    S = lie_closure(elems)
    dims = [S.dim]
    cur = S
    while cur.dim:
        vecs = [L.product(u, v) for u in S.rows for v in cur.rows]
        nxt = Subspace.span(L, vecs)
        if nxt.dim == cur.dim:
            return False, dims + [nxt.dim]
        dims.append(nxt.dim)
        cur = nxt
    return True, dims


# -- S-sequences ------------------------------------------------------------


@dataclass
class SequenceWitness:
    """A path x_0 -> x_1 -> ... that enters a cycle of nonzero elements.

    ``states[k+1]`` is the step of ``states[k]`` by ``steps[k]``; the last
    state equals ``states[cycle_start]``.
    """

    states: list[np.ndarray]
    steps: list[np.ndarray]
    cycle_start: int

    def to_dict(self, field) -> dict:
        return {
            "cycle_start": self.cycle_start,
            "path": [
                {"state": [field.format(c) for c in s.tolist()], "s": [field.format(c) for c in t.tolist()]}
                for s, t in zip(self.states, self.steps)
            ],
            "end": [field.format(c) for c in self.states[-1].tolist()],
        }


@dataclass
class TerminationResult:
    terminates: bool
    reachable: int
    witness: Optional[SequenceWitness] = None


def step_matrix(A: AlgebraPresentation, x) -> np.ndarray:
    """Matrix of s -> [x, [x, s]] (Lie) or s -> U_x(s) (Jordan)."""
    xv = _coeffs(x)
    if A.kind == "lie":
        X = A.ad(xv)
        return (X @ X).data
    if A.kind == "jordan":
        return u_operator(A, xv).data
    raise ValueError("S-sequences are defined for Lie and Jordan algebras")


def sequence_step(A: AlgebraPresentation, x, s) -> np.ndarray:
    xv, sv = _coeffs(x), _coeffs(s)
    if A.kind == "lie":
        return A.product(xv, A.product(xv, sv))
    return u_operator(A, xv) @ sv


def all_s_sequences_terminate(
    A: AlgebraPresentation, x, S: Sequence, budget: Optional[int] = None
) -> TerminationResult:
    """True iff no cycle of nonzero elements is reachable from x using steps from S."""
    _require_finite(A)
    budget = enumeration_budget() if budget is None else budget
    f = A.field
    xv = f.reduce(np.asarray(_coeffs(x)))
    S_arr = np.stack([f.reduce(np.asarray(_coeffs(s))) for s in S]) if len(S) else np.zeros((0, A.dim), dtype=np.int64)
    if is_zero(xv):
        return TerminationResult(True, 1)
    start = encode(A, xv)

    def successors(code):
        v = decode(A, code)
        M = step_matrix(A, v)
        img = f.reduce(S_arr.astype(np.int64) @ M.T) if len(S_arr) else np.zeros((0, A.dim), dtype=np.int64)
        codes = encode_rows(A, img)
        out = {}
        for k, c in enumerate(codes.tolist()):
            if c != 0 and c not in out:
                out[c] = k
        return list(out.items())

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {start: GRAY}
    stack = [(start, iter(successors(start)))]
    path_steps: list[int] = []
    while stack:
        node, it = stack[-1]
        advanced = False
        for nxt, s_idx in it:
            state = color.get(nxt, WHITE)
            if state == GRAY:
                nodes = [n for n, _ in stack]
                steps = path_steps + [s_idx]
                states = [decode(A, n) for n in nodes] + [decode(A, nxt)]
                witness = SequenceWitness(states, [S_arr[i] for i in steps], nodes.index(nxt))
                return TerminationResult(False, len(color), witness)
            if state == WHITE:
                if len(color) >= budget:
                    raise BudgetExceeded(f"reachable set exceeds the budget {budget}")
                color[nxt] = GRAY
                path_steps.append(s_idx)
                stack.append((nxt, iter(successors(nxt))))
                advanced = True
                break
        if not advanced:
            color[node] = BLACK
            stack.pop()
            if path_steps:
                path_steps.pop()
    return TerminationResult(True, len(color))


def verify_witness(A: AlgebraPresentation, w: SequenceWitness) -> bool:
    """Every edge is an exact sequence step, the states are nonzero, and the path closes."""
    f = A.field
    for k, s in enumerate(w.steps):
        nxt = sequence_step(A, w.states[k], s)
        if not is_zero(f.reduce(nxt - w.states[k + 1])) or is_zero(w.states[k + 1]):
            return False
    return bool(np.all(w.states[-1] == w.states[w.cycle_start]))


def all_elements(A: AlgebraPresentation, budget: Optional[int] = None) -> np.ndarray:
    _require_finite(A)
    budget = enumeration_budget() if budget is None else budget
    total = _space_size(A)
    if total > budget:
        raise BudgetExceeded(f"{total} elements exceed the enumeration budget {budget}")
    return decode_range(A, 0, total)


def locally_degenerate_element(L: AlgebraPresentation, x, budget: Optional[int] = None) -> bool:
    """Every S-sequence from x terminates, for S the whole (finite) algebra."""
    if is_zero(_coeffs(x)):
        raise ZeroElement("local degeneracy is defined for nonzero elements")
    return all_s_sequences_terminate(L, x, all_elements(L, budget), budget).terminates


@dataclass
class MSequenceResult:
    terminates: bool
    reachable: int
    witness: Optional[SequenceWitness]


def m_sequence_explore(J: AlgebraPresentation, x, budget: Optional[int] = None) -> MSequenceResult:
    """Reachability for a_{n+1} = U_{a_n}(b) over all b in J."""
    if J.kind != "jordan":
        raise ValueError("m-sequences here are explored in Jordan algebras")
    r = all_s_sequences_terminate(J, x, all_elements(J, budget), budget)
    return MSequenceResult(r.terminates, r.reachable, r.witness)


@dataclass
class KlocReport:
    lx_dim: int
    lx_nilpotent: bool
    locally_degenerate: bool
    violation: bool = False
    notes: list[str] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def kloc_experiment(L: AlgebraPresentation, x, budget: Optional[int] = None) -> KlocReport:
    """Nilpotent L_x should force x to be locally degenerate; flag any instance where it does not."""
    xv = _coeffs(x)
    if is_zero(xv) or not (L.ad(xv) ** 3).is_zero():
        raise PreconditionFailed("x must be a Jordan element")
    try:
        JQ = build_L_x(L, xv)
    except NotJordanElement as exc:
        raise PreconditionFailed(str(exc)) from exc
    nil = is_nilpotent_algebra(JQ.algebra)
    locdeg = locally_degenerate_element(L, xv, budget)
    rep = KlocReport(JQ.algebra.dim, nil, locdeg)
    if nil and not locdeg:
        rep.violation = True
        rep.notes.append("L_x nilpotent but x not locally degenerate")
    elif not nil:
        rep.notes.append("L_x not nilpotent; no claim")
    return rep
