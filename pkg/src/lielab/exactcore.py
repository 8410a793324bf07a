"""Exact scalars and dense linear algebra over GF(p) and the rationals.

Scalars are plain Python values: ``int`` residues in ``[0, p)`` for GF(p) and
``fractions.Fraction`` for the rationals.  Vectors and matrices are numpy
arrays whose dtype is chosen by the field: ``int64`` for primes below 2**24
(products of two residues and row sums of up to 2**15 of them stay below
2**63), ``object`` otherwise.  Nothing here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, NonSplitOperator

_INT64_PRIME_LIMIT = 1 << 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p) for a prime ``characteristic``, the rationals when it is 0."""

    characteristic: int

    def __post_init__(self):
        p = self.characteristic
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise ValueError(f"characteristic must be an integer, got {p!r}")
        if p != 0 and not is_prime(int(p)):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")
        object.__setattr__(self, "characteristic", int(p))

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    @property
    def order(self) -> Optional[int]:
        return self.characteristic or None

    @property
    def dtype(self):
        if 0 < self.characteristic < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self):
        return f"GF({self.p})" if self.p else "QQ"

    # -- scalars ---------------------------------------------------------

    def __call__(self, value) -> int | Fraction:
        """Canonical representative of ``value`` (int, Fraction or string)."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.p:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(int(x), -1, self.p)
        return 1 / Fraction(x)

    def format(self, x) -> str:
        return str(self(x))

    def parse(self, s: str):
        return self(s)

    def signed(self, x):
        """Integer representative in [-(p-1)/2, (p-1)/2]; identity over Q."""
        if not self.p:
            return Fraction(x)
        x = int(x) % self.p
        return x - self.p if x > self.p // 2 else x

    def elements(self) -> Iterator:
        if not self.p:
            raise ValueError("the rationals cannot be enumerated")
        return iter(range(self.p))

    def factorial_inverse(self, k: int):
        f = 1
        for i in range(2, k + 1):
            f *= i
        return self.inv(self(f))

    # -- arrays ----------------------------------------------------------

    def reduce(self, arr):
        if self.p:
            return arr % self.p
        return arr

    def array(self, values) -> np.ndarray:
        arr = np.array(values, dtype=object)
        if arr.size:
            arr = np.vectorize(self.__call__, otypes=[object])(arr)
        return arr.astype(self.dtype) if self.dtype is not object else arr

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            z = np.empty(shape, dtype=object)
            z.fill(0 if self.p else Fraction(0))
            return z
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        z = self.zeros((n, n))
        for i in range(n):
            z[i, i] = self(1)
        return z

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.dtype is object:
            return self.reduce(a @ b)
        a, b = a % self.p, b % self.p
        inner = a.shape[-1] if a.ndim else 1
        if (self.p - 1) ** 2 * max(inner, 1) < _FLOAT_EXACT:
            # every partial sum is an integer below 2**53, so BLAS is exact
            prod = np.rint(np.matmul(a.astype(np.float64), b.astype(np.float64)))
            return prod.astype(np.int64) % self.p
        return (a @ b) % self.p

    def random_vector(self, rng: np.random.Generator, n: int, low: int = -3, high: int = 3):
        """Random vector; uniform over GF(p), small integers over Q."""
        if self.p:
            if self.p < (1 << 62):
                return self.array(rng.integers(0, self.p, size=n).tolist())
            return self.array([int(rng.integers(0, 1 << 62)) for _ in range(n)])
        return self.array(rng.integers(low, high + 1, size=n).tolist())


QQ = FieldSpec(0)
_FLOAT_EXACT = 2**53


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def is_zero(v: np.ndarray) -> bool:
    return not np.any(v != 0)


class ExactMatrix:
    """Dense matrix over a FieldSpec.  Treated as immutable."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data):
        if not isinstance(data, np.ndarray) or data.dtype != np.dtype(field.dtype):
            data = field.array(data)
        else:
            data = field.reduce(data)
        if data.ndim != 2:
            raise DimensionMismatch(f"matrix must be 2-dimensional, got shape {data.shape}")
        data.setflags(write=False)
        self.field = field
        self.data = data

    @classmethod
    def identity(cls, field, n):
        return cls(field, field.identity(n))

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def from_columns(cls, field, columns: Sequence[np.ndarray], rows: int):
        if not columns:
            return cls(field, field.zeros((rows, 0)))
        return cls(field, np.stack(list(columns), axis=1))

    @property
    def shape(self):
        return self.data.shape

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def T(self):
        return ExactMatrix(self.field, self.data.T.copy())

    def _check(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if other.field != self.field:
            raise DimensionMismatch("matrices over different fields")
        return other

    def __matmul__(self, other):
        if isinstance(other, np.ndarray):
            if other.ndim != 1 or other.shape[0] != self.cols:
                raise DimensionMismatch(f"cannot apply {self.shape} matrix to {other.shape}")
            return self.field.matmul(self.data, other)
        other = self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return ExactMatrix(self.field, self.field.matmul(self.data, other.data))

    def __add__(self, other):
        other = self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix(self.field, self.data + other.data)

    def __sub__(self, other):
        other = self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return ExactMatrix(self.field, self.data - other.data)

    def __neg__(self):
        return ExactMatrix(self.field, -self.data)

    def __mul__(self, scalar):
        return ExactMatrix(self.field, self.data * self.field(scalar))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        result = self.field.identity(self.rows)
        base = self.data
        while k:
            if k & 1:
                result = self.field.matmul(result, base)
            k >>= 1
            if k:
                base = self.field.matmul(base, base)
        return ExactMatrix(self.field, result)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.data == other.data))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.data.ravel().tolist())))

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.to_strings()})"

    def is_zero(self) -> bool:
        return is_zero(self.data)

    def rank(self) -> int:
        return len(rref(self.field, self.data)[1])

    def trace(self):
        return self.field(sum(self.data[i, i] for i in range(min(self.shape))))

    def to_strings(self):
        return [[self.field.format(x) for x in row] for row in self.data.tolist()]

    @classmethod
    def from_strings(cls, field, rows):
        return cls(field, [[field.parse(x) for x in row] for row in rows])


# -- elimination ---------------------------------------------------------


def rref(field: FieldSpec, data: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = field.reduce(np.array(data, dtype=field.dtype, copy=True))
    if m.ndim != 2:
        raise DimensionMismatch("rref expects a 2-d array")
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = field.inv(m[r, c])
        m[r] = field.reduce(m[r] * inv)
        col = m[:, c].copy()
        col[r] = 0
        rows_to_fix = np.nonzero(col)[0]
        if rows_to_fix.size:
            m[rows_to_fix] = field.reduce(m[rows_to_fix] - np.outer(col[rows_to_fix], m[r]))
        pivots.append(c)
        r += 1
    return m[:r].copy(), pivots


class Echelon:
    """Incrementally grown, fully reduced echelon basis of a subspace of F^n."""

    def __init__(self, field: FieldSpec, n: int):
        self.field = field
        self.n = n
        self.rows = field.zeros((0, n))
        self.pivots: list[int] = []

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        if not self.pivots:
            return self.field.reduce(np.array(v, dtype=self.field.dtype))
        coeff = v[self.pivots]
        return self.field.reduce(v - self.field.matmul(coeff, self.rows))

    def contains(self, v) -> bool:
        return is_zero(self.reduce(v))

    def add(self, v) -> bool:
        """Insert ``v``; return True when it enlarged the span."""
        w = self.reduce(v)
        nz = np.nonzero(w)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        w = self.field.reduce(w * self.field.inv(w[c]))
        if self.pivots:
            col = self.rows[:, c]
            if np.any(col != 0):
                self.rows = self.field.reduce(self.rows - np.outer(col, w))
        self.rows = np.vstack([self.rows, w[None, :]])
        self.pivots.append(c)
        return True

    def extend(self, vectors: Iterable[np.ndarray]) -> int:
        return sum(1 for v in vectors if self.add(v))

    def add_block(self, block: np.ndarray) -> np.ndarray:
        """Insert every row of ``block`` at once; return rows spanning the new part."""
        f = self.field
        if block.shape[0] == 0:
            return f.zeros((0, self.n))
        red = f.reduce(block - f.matmul(block[:, self.pivots], self.rows)) if self.pivots else block
        r, piv = rref(f, red)
        if not piv:
            return r
        if self.pivots:
            coeff = self.rows[:, piv]
            if np.any(coeff != 0):
                self.rows = f.reduce(self.rows - f.matmul(coeff, r))
        self.rows = np.vstack([self.rows, r])
        self.pivots.extend(piv)
        return r

    def canonical(self) -> tuple[np.ndarray, list[int]]:
        order = np.argsort(self.pivots, kind="stable")
        return self.rows[order].copy(), [self.pivots[i] for i in order]


def span_rref(field: FieldSpec, vectors, n: int) -> tuple[np.ndarray, list[int]]:
    """Canonical basis of the span of ``vectors`` (any iterable of length-n arrays)."""
    vecs = list(vectors)
    if not vecs:
        return field.zeros((0, n)), []
    return rref(field, np.stack(vecs))


def kernel_basis(field: FieldSpec, data: np.ndarray) -> list[np.ndarray]:
    """Basis of {y : A y = 0}, one vector per free column."""
    ncols = data.shape[1]
    if data.shape[0] == 0:
        return [field.identity(ncols)[i] for i in range(ncols)]
    r, pivots = rref(field, data)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = field.zeros(ncols)
        v[f] = field(1)
        for row, pc in zip(r, pivots):
            v[pc] = field.reduce(-row[f])
        basis.append(v)
    return basis


class LinearSolution(NamedTuple):
    x: np.ndarray
    kernel: list[np.ndarray]


def solve_linear(A: ExactMatrix, b) -> Optional[LinearSolution]:
    """One solution of A x = b plus a kernel basis, or None when inconsistent.

    The particular solution sets every free variable to zero, so it is
    deterministic for a given (A, b).
    """
    field = A.field
    b = np.asarray(b)
    if b.ndim != 1 or b.shape[0] != A.rows:
        raise DimensionMismatch(f"right-hand side of length {b.shape} for a {A.shape} system")
    b = field.array(b.tolist()) if b.dtype != np.dtype(field.dtype) else field.reduce(b)
    aug = np.concatenate([A.data, b[:, None]], axis=1)
    r, pivots = rref(field, aug)
    if A.cols in pivots:
        return None
    x = field.zeros(A.cols)
    for row, pc in zip(r, pivots):
        x[pc] = row[A.cols]
    kernel = kernel_basis(field, A.data)
    assert is_zero(field.reduce(A.data @ x - b)), "solve_linear self-check failed"
    return LinearSolution(x, kernel)


def eigenspace(A: ExactMatrix, lam) -> list[np.ndarray]:
    """Basis of ker(A - lam I)."""
    if A.rows != A.cols:
        raise DimensionMismatch("eigenspace of a non-square matrix")
    field = A.field
    shifted = field.reduce(A.data - field(lam) * field.identity(A.rows))
    return kernel_basis(field, shifted)


def generalized_eigenspace(A: ExactMatrix, lam, multiplicity: int) -> list[np.ndarray]:
    field = A.field
    shifted = ExactMatrix(field, A.data - field(lam) * field.identity(A.rows))
    return kernel_basis(field, (shifted ** multiplicity).data)


# -- polynomials (coefficient lists, constant term first) ----------------


def poly_trim(f: list) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mul(field, f, g):
    if not f or not g:
        return []
    out = [field(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = field(out[i + j] + a * b)
    return poly_trim(out)


def poly_sub(field, f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return poly_trim([field(a - b) for a, b in zip(f, g)])


def poly_divmod(field, f, g):
    f = poly_trim([field(c) for c in f])
    g = poly_trim([field(c) for c in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field(0)] * max(len(f) - len(g) + 1, 0)
    lead_inv = field.inv(g[-1])
    while len(f) >= len(g) and f:
        shift = len(f) - len(g)
        c = field(f[-1] * lead_inv)
        q[shift] = c
        for i, gc in enumerate(g):
            f[shift + i] = field(f[shift + i] - c * gc)
        f = poly_trim(f)
    return poly_trim(q), f


def poly_gcdex(field, f, g):
    """(d, s, t) with s f + t g = d monic gcd."""
    r0, r1 = poly_trim([field(c) for c in f]), poly_trim([field(c) for c in g])
    s0, s1, t0, t1 = [field(1)], [], [], [field(1)]
    while r1:
        q, r = poly_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(field, s0, poly_mul(field, q, s1))
        t0, t1 = t1, poly_sub(field, t0, poly_mul(field, q, t1))
    if not r0:
        return [], [], []
    inv = field.inv(r0[-1])
    return ([field(c * inv) for c in r0], [field(c * inv) for c in s0], [field(c * inv) for c in t0])


def poly_eval(field, f, x):
    acc = field(0)
    for c in reversed(f):
        acc = field(acc * x + c)
    return acc


def poly_eval_matrix(f, A: ExactMatrix) -> ExactMatrix:
    field = A.field
    acc = field.zeros(A.shape)
    for c in reversed(f):
        acc = field.reduce(acc @ A.data + field(c) * field.identity(A.rows))
    return ExactMatrix(field, acc)


def minimal_polynomial(A: ExactMatrix) -> list:
    """Monic minimal polynomial of A, coefficients from the constant term up."""
    if A.rows != A.cols:
        raise DimensionMismatch("minimal polynomial of a non-square matrix")
    field = A.field
    n = A.rows
    ech = Echelon(field, n * n)
    # Track each power as a combination of lower powers through an augmented identity.
    powers = []
    cur = field.identity(n)
    while True:
        flat = cur.ravel()
        if not ech.add(flat):
            # first power dependent on the lower ones: solve for the relation
            M = np.stack([p.ravel() for p in powers], axis=1)
            sol = solve_linear(ExactMatrix(field, M), flat)
            return [field(-c) for c in sol.x] + [field(1)]
        powers.append(cur)
        cur = field.matmul(cur, A.data)


def nilpotency_index(A: ExactMatrix) -> Optional[int]:
    """Least d with A^d = 0, or None when A is not nilpotent."""
    if A.rows != A.cols:
        raise DimensionMismatch("nilpotency of a non-square matrix")
    cur = A.field.identity(A.rows)
    for d in range(0, A.rows + 1):
        if is_zero(cur):
            return d
        cur = A.field.matmul(cur, A.data)
    return None


def poly_roots(field: FieldSpec, f) -> dict:
    """Roots in the field with multiplicities; raises NonSplitOperator if f does not split."""
    f = poly_trim([field(c) for c in f])
    roots: dict = {}
    candidates = _root_candidates(field, f)
    for r in candidates:
        while len(f) > 1 and poly_eval(field, f, r) == 0:
            f, rem = poly_divmod(field, f, [field(-r), field(1)])
            assert not rem
            roots[r] = roots.get(r, 0) + 1
    if len(f) > 1:
        raise NonSplitOperator(f"polynomial does not split over {field}", remainder=f)
    return roots


def _root_candidates(field, f):
    if field.p:
        if field.p > 1 << 20:
            raise NonSplitOperator("root search limited to primes below 2**20")
        return list(range(field.p))
    # rational root theorem on the cleared-denominator polynomial
    from math import gcd

    den = 1
    for c in f:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f]
    cands = {Fraction(0)}
    while ints and ints[0] == 0:
        ints = ints[1:]
    if not ints:
        return sorted(cands)
    a0, an = abs(ints[0]), abs(ints[-1])
    for pn in _divisors(a0):
        for qd in _divisors(an):
            cands.add(Fraction(pn, qd))
            cands.add(Fraction(-pn, qd))
    return sorted(cands)


def _divisors(n):
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            out.append(n // i)
        i += 1
    return sorted(set(out))
