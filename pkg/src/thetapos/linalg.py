"""Exact rational matrices.

Scalars are :class:`fractions.Fraction` throughout; nothing in this package
touches floating point. Matrices are immutable and hashable, so they can be
compared, cached and shared between threads freely.

Row and column indices are 0-based here. The JSON layer and the CLI speak
1-based index sets.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "DimensionError",
    "RatMatrix",
    "as_scalar",
    "det",
    "minor",
    "rank",
    "column_echelon",
    "nullspace",
    "inverse",
    "solve",
    "all_minors",
]


class DimensionError(ValueError):
    """Raised when matrix shapes do not fit the requested operation."""


def as_scalar(value) -> Fraction:
    """Coerce ints, Fractions and exact strings to a Fraction.

    Floats are rejected: a float is almost never the number the caller meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


class RatMatrix:
    """Dense immutable matrix over the rationals."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_scalar(x) for x in row) for row in data)
        if not rows:
            if cols is None:
                raise DimensionError("empty matrix needs an explicit column count")
            rows = ()
        width = len(rows[0]) if rows else cols
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        if cols is not None and width != cols:
            raise DimensionError(f"expected {cols} columns, got {width}")
        self.rows = len(rows)
        self.cols = width
        self._data = rows
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "RatMatrix":
        # trusted constructor: rows already tuples of Fractions
        m = object.__new__(cls)
        m.rows = len(rows)
        m.cols = ncols
        m._data = rows
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        zero = Fraction(0)
        return cls._raw(tuple((zero,) * cols for _ in range(rows)), cols)

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        vals = [as_scalar(v) for v in values]
        n = len(vals)
        zero = Fraction(0)
        return cls._raw(
            tuple(tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def column(cls, values: Sequence) -> "RatMatrix":
        return cls([[v] for v in values])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RatMatrix":
        if not columns:
            raise DimensionError("need at least one column")
        n = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(n)])

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RatMatrix"]]) -> "RatMatrix":
        """Assemble a block matrix; every block row must share a height."""
        out = []
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise DimensionError("block heights differ within a block row")
            for i in range(h):
                out.append(sum((b._data[i] for b in brow), ()))
        width = len(out[0])
        if any(len(r) != width for r in out):
            raise DimensionError("block widths differ between block rows")
        return cls._raw(tuple(out), width)

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        if isinstance(i, slice) or isinstance(j, slice):
            rows = self._data[i] if isinstance(i, slice) else (self._data[i],)
            if isinstance(j, slice):
                sub = tuple(r[j] for r in rows)
            else:
                sub = tuple((r[j],) for r in rows)
            return RatMatrix._raw(sub, len(sub[0]) if sub else 0)
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix._raw(
            tuple(tuple(self._data[i][j] for j in col_idx) for i in row_idx), len(col_idx)
        )

    def columns(self, col_idx: Sequence[int]) -> "RatMatrix":
        return self.submatrix(range(self.rows), col_idx)

    # arithmetic -----------------------------------------------------------

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._raw(tuple(zip(*self._data)), self.rows)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        # row-by-row accumulation over nonzero entries only; the matrices in
        # this package are mostly sparse unipotents
        sparse_rows = [[(j, b) for j, b in enumerate(row) if b] for row in other._data]
        zero = Fraction(0)
        out = []
        for r in self._data:
            acc = [zero] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse_rows[k]:
                        acc[j] += a * b
            out.append(tuple(acc))
        return RatMatrix._raw(tuple(out), other.cols)

    def _zip(self, other: "RatMatrix", op) -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return RatMatrix._raw(
            tuple(tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.cols,
        )

    def __add__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "RatMatrix":
        c = as_scalar(c)
        return RatMatrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.cols)

    def __mul__(self, c):
        if isinstance(c, RatMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatMatrix":
        if not self.is_square or k < 0:
            raise DimensionError("power needs a square matrix and k >= 0")
        out, base = RatMatrix.identity(self.rows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        return sum((self._data[i][i] for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.T

    # identity -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self._data)
        return f"RatMatrix([{body}])"


def _require_square(m: RatMatrix) -> None:
    if not m.is_square:
        raise DimensionError(f"expected a square matrix, got {m.shape}")


def _det_cofactor(a: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def _det_bareiss(a: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(a)
    m = [list(r) for r in a]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                # exact division: Sylvester's identity
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) / prev
            row_i[k] = Fraction(0)
        prev = pivot
    return sign * m[n - 1][n - 1]


def det(m: RatMatrix) -> Fraction:
    """Exact determinant.

    >>> det(RatMatrix([[1, 2], [3, 4]]))
    Fraction(-2, 1)
    """
    _require_square(m)
    if m.rows == 0:
        return Fraction(1)
    data = m._data
    if m.rows <= 3:
        return _det_cofactor(data)
    return _det_bareiss(data)


def _check_index_set(idx: Sequence[int], bound: int, name: str) -> tuple[int, ...]:
    idx = tuple(idx)
    if not idx:
        raise IndexError(f"{name} index set is empty")
    if any(not isinstance(i, int) or i < 0 or i >= bound for i in idx):
        raise IndexError(f"{name} index out of range: {idx}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise IndexError(f"{name} indices must be strictly increasing: {idx}")
    return idx


def minor(m: RatMatrix, row_idx: Sequence[int], col_idx: Sequence[int]) -> Fraction:
    """Determinant of the submatrix on the given (0-based) rows and columns."""
    rows = _check_index_set(row_idx, m.rows, "row")
    cols = _check_index_set(col_idx, m.cols, "column")
    if len(rows) != len(cols):
        raise IndexError("row and column index sets differ in size")
    return det(m.submatrix(rows, cols))


def all_minors(m: RatMatrix):
    """Yield ``(rows, cols, value)`` for every minor of a square matrix, by size."""
    _require_square(m)
    n = m.rows
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                yield rows, cols, det(m.submatrix(rows, cols))


def _row_echelon(data: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    nrows = len(data)
    ncols = len(data[0]) if data else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if data[i][c] != 0), None)
        if p is None:
            continue
        data[r], data[p] = data[p], data[r]
        inv = 1 / data[r][c]
        data[r] = [a * inv for a in data[r]]
        pivot_row = data[r]
        for i in range(nrows):
            if i != r and data[i][c] != 0:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], pivot_row)]
        pivots.append(c)
        r += 1
    return data, pivots


def rank(m: RatMatrix) -> int:
    """Exact rank."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _row_echelon(m.tolist())
    return len(pivots)


def column_echelon(m: RatMatrix) -> RatMatrix:
    """Reduced column echelon form, with zero columns dropped.

    Two matrices span the same column space exactly when their echelon forms
    are equal. A zero matrix keeps one zero column so the result is never
    empty.
    """
    reduced, pivots = _row_echelon(m.T.tolist())
    kept = reduced[: len(pivots)]
    if not kept:
        return RatMatrix.zeros(m.rows, 1)
    return RatMatrix(kept).T


def nullspace(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column."""
    reduced, pivots = _row_echelon(m.tolist())
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(tuple(v))
    return basis


def inverse(m: RatMatrix) -> RatMatrix:
    """Exact inverse; raises ZeroDivisionError for singular input."""
    _require_square(m)
    n = m.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m._data)]
    reduced, pivots = _row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return RatMatrix([r[n:] for r in reduced])


def solve(m: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Solve ``m @ x == b`` for invertible square ``m``."""
    _require_square(m)
    if b.rows != m.rows:
        raise DimensionError("right-hand side has the wrong height")
    n = m.rows
    aug = [list(r) + list(s) for r, s in zip(m._data, b._data)]
    reduced, pivots = _row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return RatMatrix([r[n:] for r in reduced])
