"""
QCore Service - exact rational linear algebra

This service provides the substrate for every other service: rational scalars
(sympy's QQ domain), small dense matrices, canonical subspaces in reduced row
echelon form, kernels, exact solving and span closure under a bilinear map.
Row reduction is delegated to sympy's DomainMatrix.
"""

from __future__ import annotations

from typing import Any, Callable, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from triality.utils.errors import DimensionMismatchError
from triality.utils.helpers import setup_logger

# Setup logging
logger = setup_logger(__name__)

Rational = Any  # element of QQ (gmpy2 mpq or sympy's PythonMPQ)
Vector = Tuple[Any, ...]

ZERO = QQ(0)
ONE = QQ(1)


def q(value: Any) -> Rational:
    """Coerce ints and QQ elements into QQ"""
    return QQ.convert(value)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def add_vectors(u: Sequence[Rational], v: Sequence[Rational]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c: Rational, v: Sequence[Rational]) -> Vector:
    return tuple(c * a for a in v)


def combine(coefficients: Sequence[Rational], vectors: Sequence[Sequence[Rational]], n: int) -> Vector:
    """Linear combination sum c_i v_i"""
    out = [ZERO] * n
    for c, v in zip(coefficients, vectors):
        if c:
            for j, a in enumerate(v):
                if a:
                    out[j] += c * a
    return tuple(out)


def is_zero(v: Sequence[Rational]) -> bool:
    return not any(v)


def row_reduce(rows: Sequence[Mapping[int, Rational]], ncols: int) -> Tuple[List[dict], Tuple[int, ...]]:
    """Reduced row echelon form of sparse rows; returns nonzero rows and pivot columns"""
    sdm = {}
    for i, row in enumerate(rows):
        entries = {j: q(v) for j, v in row.items() if v}
        if entries:
            sdm[i] = entries
    if not sdm:
        return [], ()
    matrix = DomainMatrix(sdm, (len(rows), ncols), QQ)
    reduced, pivots = matrix.rref()
    rep = reduced.to_sparse().rep
    return [dict(rep[i]) for i in sorted(rep)], tuple(pivots)


def _dense_to_sparse(v: Sequence[Rational]) -> dict:
    return {j: a for j, a in enumerate(v) if a}


class QMatrix:
    """Immutable dense rational matrix; acts on column vectors from the left"""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, entries: Sequence[Sequence[Any]], cols: Optional[int] = None):
        self.entries = tuple(tuple(q(a) for a in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = cols if cols is not None else (len(self.entries[0]) if self.entries else 0)
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatchError("ragged matrix rows")
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([unit_vector(n, i) for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([zero_vector(cols) for _ in range(rows)], cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], rows: Optional[int] = None) -> "QMatrix":
        n = rows if rows is not None else len(columns[0])
        return cls([[col[i] for col in columns] for i in range(n)], len(columns))

    @classmethod
    def from_vec(cls, vec: Sequence[Any], n: int) -> "QMatrix":
        """Inverse of vec() for square n x n matrices"""
        return cls([vec[i * n:(i + 1) * n] for i in range(n)], n)

    def vec(self) -> Vector:
        return tuple(a for row in self.entries for a in row)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "QMatrix":
        return QMatrix([self.column(j) for j in range(self.cols)], self.rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def apply(self, v: Sequence[Rational]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        out = []
        for row in self.entries:
            acc = ZERO
            for a, b in zip(row, v):
                if a and b:
                    acc += a * b
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_rows = [_dense_to_sparse(r) for r in other.entries]
        out = []
        for row in self.entries:
            acc = [ZERO] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in other_rows[k].items():
                        acc[j] += a * b
            out.append(acc)
        return QMatrix(out, other.cols)

    def _check_shape(self, other: "QMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("matrix shapes differ")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_shape(other)
        return QMatrix([add_vectors(a, b) for a, b in zip(self.entries, other.entries)], self.cols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_shape(other)
        return QMatrix([tuple(x - y for x, y in zip(a, b)) for a, b in zip(self.entries, other.entries)], self.cols)

    def __neg__(self) -> "QMatrix":
        return self.scale(-ONE)

    def scale(self, c: Any) -> "QMatrix":
        return QMatrix([scale_vector(q(c), row) for row in self.entries], self.cols)

    def power(self, k: int) -> "QMatrix":
        out = QMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def is_zero(self) -> bool:
        return all(not a for row in self.entries for a in row)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


def commutator(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b - b @ a


class Subspace:
    """Subspace of Q^n stored by its canonical reduced row echelon basis"""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Sequence[Vector], pivots: Sequence[int]):
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[Any]], ambient_dim: int) -> "Subspace":
        rows = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(f"vector of length {len(v)} in Q^{ambient_dim}")
            rows.append(_dense_to_sparse(v))
        reduced, pivots = row_reduce(rows, ambient_dim)
        basis = [tuple(row.get(j, ZERO) for j in range(ambient_dim)) for row in reduced]
        return cls(ambient_dim, basis, pivots)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [unit_vector(n, i) for i in range(n)], range(n))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Rational]) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector length differs from ambient dimension")
        residual = list(v)
        for p, b in zip(self.pivots, self.basis):
            c = residual[p]
            if c:
                for j, a in enumerate(b):
                    if a:
                        residual[j] -= c * a
        return not any(residual)

    def coordinates(self, v: Sequence[Rational]) -> Optional[Vector]:
        """Coefficients of v on the echelon basis, or None when v is outside"""
        if not self.contains(v):
            return None
        return tuple(v[p] for p in self.pivots)

    def join(self, vectors: Iterable[Sequence[Any]]) -> "Subspace":
        return Subspace.from_vectors(list(self.basis) + list(vectors), self.ambient_dim)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def null_space(rows: Sequence[Mapping[int, Rational]], ncols: int) -> Subspace:
    """Solutions of the homogeneous system given by sparse rows"""
    reduced, pivots = row_reduce(rows, ncols)
    pivot_set = set(pivots)
    vectors = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for row, p in zip(reduced, pivots):
            c = row.get(free)
            if c:
                v[p] = -c
        vectors.append(v)
    return Subspace.from_vectors(vectors, ncols)


def kernel(m: QMatrix) -> Subspace:
    """{v : m v = 0} as a canonical subspace"""
    return null_space([_dense_to_sparse(r) for r in m.entries], m.cols)


def image(m: QMatrix) -> Subspace:
    """Column space of m"""
    return Subspace.from_vectors([m.column(j) for j in range(m.cols)], m.rows)


def rank(m: QMatrix) -> int:
    return len(row_reduce([_dense_to_sparse(r) for r in m.entries], m.cols)[1])


def solve(m: QMatrix, rhs: Sequence[Any]) -> Optional[Vector]:
    """One exact solution of m x = rhs, or None"""
    if len(rhs) != m.rows:
        raise DimensionMismatchError("right-hand side length differs from row count")
    augmented = []
    for row, b in zip(m.entries, rhs):
        sparse = _dense_to_sparse(row)
        if b:
            sparse[m.cols] = q(b)
        augmented.append(sparse)
    reduced, pivots = row_reduce(augmented, m.cols + 1)
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for row, p in zip(reduced, pivots):
        x[p] = row.get(m.cols, ZERO)
    return tuple(x)


def sparse_rank(vectors: Iterable[Mapping[Hashable, Any]]) -> int:
    """Rank of sparse vectors keyed by arbitrary hashable coordinates"""
    columns: dict = {}
    rows = []
    for v in vectors:
        row = {}
        for key, value in v.items():
            if value:
                row[columns.setdefault(key, len(columns))] = value
        rows.append(row)
    if not columns:
        return 0
    return len(row_reduce(rows, len(columns))[1])


def spans_equal(a: Sequence[Mapping[Hashable, Any]], b: Sequence[Mapping[Hashable, Any]]) -> bool:
    ra, rb = sparse_rank(a), sparse_rank(b)
    return ra == rb == sparse_rank(list(a) + list(b))


def in_span(v: Mapping[Hashable, Any], vectors: Sequence[Mapping[Hashable, Any]]) -> bool:
    return sparse_rank(vectors) == sparse_rank(list(vectors) + [v])


def bracket_closure(seed: Sequence[QMatrix], bracket: Callable[[QMatrix, QMatrix], QMatrix]) -> Subspace:
    """Smallest subspace of n x n matrices containing seed and closed under bracket"""
    if not seed:
        raise DimensionMismatchError("empty seed")
    n = seed[0].rows
    for m in seed:
        if not m.is_square() or m.rows != n:
            raise DimensionMismatchError("seed matrices must be square of one size")

    current = Subspace.from_vectors([m.vec() for m in seed], n * n)
    rounds = 0
    while True:
        rounds += 1
        mats = [QMatrix.from_vec(b, n) for b in current.basis]
        products = [
            bracket(mats[i], mats[j]).vec()
            for i in range(len(mats))
            for j in range(len(mats))
        ]
        grown = current.join(products)
        logger.debug(f"closure round {rounds}: dim {current.dim} -> {grown.dim}")
        if grown.dim == current.dim:
            return current
        current = grown


class CoordinateSystem:
    """Coordinates with respect to an ordered, linearly independent list of vectors"""

    def __init__(self, vectors: Sequence[Sequence[Any]], ambient_dim: int):
        k = len(vectors)
        rows = []
        for i, v in enumerate(vectors):
            if len(v) != ambient_dim:
                raise DimensionMismatchError(f"vector of length {len(v)} in Q^{ambient_dim}")
            row = _dense_to_sparse(v)
            row[ambient_dim + i] = ONE
            rows.append(row)
        reduced, pivots = row_reduce(rows, ambient_dim + k)
        if len(pivots) < k or any(p >= ambient_dim for p in pivots):
            raise DimensionMismatchError("vectors are linearly dependent")
        self.ambient_dim = ambient_dim
        self.size = k
        self.vectors = tuple(tuple(q(a) for a in v) for v in vectors)
        self._pivots = pivots
        self._echelon = [{j: a for j, a in row.items() if j < ambient_dim} for row in reduced]
        self._transform = [[row.get(ambient_dim + i, ZERO) for i in range(k)] for row in reduced]

    def coordinates(self, v: Sequence[Rational]) -> Optional[Vector]:
        """c with sum c_i vectors[i] = v, or None when v is outside the span"""
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector length differs from ambient dimension")
        weights = [v[p] for p in self._pivots]
        residual = list(v)
        for w, row in zip(weights, self._echelon):
            if w:
                for j, a in row.items():
                    residual[j] -= w * a
        if any(residual):
            return None
        out = [ZERO] * self.size
        for w, row in zip(weights, self._transform):
            if w:
                for i, a in enumerate(row):
                    if a:
                        out[i] += w * a
        return tuple(out)

    def combination(self, coefficients: Sequence[Rational]) -> Vector:
        return combine(coefficients, self.vectors, self.ambient_dim)

    def subspace(self) -> Subspace:
        return Subspace.from_vectors(self.vectors, self.ambient_dim)
