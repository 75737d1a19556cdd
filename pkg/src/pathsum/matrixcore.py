"""Dense matrices over exact scalars, floats and rational functions."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import DimensionMismatch, InvalidPermutation, NonSquare, Singular, SingularOverField
from .scalars import GaussRat, RatFn, exact, is_exact

FLOAT_SINGULAR_RTOL = 1e-13


class Mat:
    """Immutable row-major matrix; entries may be any field elements."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise DimensionMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(n, m, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows: int, cols: int, zero=0) -> "Mat":
        return cls(rows, cols, [zero] * (rows * cols))

    @classmethod
    def identity(cls, n: int, one=1, zero=0) -> "Mat":
        return cls(n, n, [one if i == j else zero for i in range(n) for j in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def map(self, fn: Callable) -> "Mat":
        return Mat(self.rows, self.cols, [fn(x) for x in self.entries])

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows,
                   [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not any(self.entries)
        return all(not x or abs(x) <= tol for x in self.entries)

    def max_abs(self) -> float:
        return max((abs(complex(x)) for x in self.entries), default=0.0)

    def __eq__(self, o):
        if not isinstance(o, Mat):
            return NotImplemented
        return self.shape == o.shape and all(a == b for a, b in zip(self.entries, o.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Mat({self.to_rows()!r})"

    def _check_same(self, o: "Mat") -> None:
        if self.shape != o.shape:
            raise DimensionMismatch(f"{self.shape} vs {o.shape}")

    def __add__(self, o: "Mat") -> "Mat":
        self._check_same(o)
        return Mat(self.rows, self.cols, [a + b for a, b in zip(self.entries, o.entries)])

    def __sub__(self, o: "Mat") -> "Mat":
        self._check_same(o)
        return Mat(self.rows, self.cols, [a - b for a, b in zip(self.entries, o.entries)])

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "Mat":
        return Mat(self.rows, self.cols, [c * a if a else a for a in self.entries])

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, o: "Mat") -> "Mat":
        return mat_mul(self, o)


def mat_mul(A: Mat, B: Mat) -> Mat:
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    n, m, p = A.rows, A.cols, B.cols
    a, b = A.entries, B.entries
    out = []
    for i in range(n):
        arow = a[i * m:(i + 1) * m]
        nz = [(k, x) for k, x in enumerate(arow) if x]
        for j in range(p):
            acc = None
            for k, x in nz:
                y = b[k * p + j]
                if y:
                    acc = x * y if acc is None else acc + x * y
            out.append(0 if acc is None else acc)
    return Mat(n, p, out)


# elimination ------------------------------------------------------------------------


def _kind(entries) -> str:
    kind = "exact"
    for x in entries:
        if isinstance(x, RatFn):
            return "ratfn"
        if isinstance(x, (float, complex)):
            kind = "float"
    return kind


def _gauss_jordan(A: Mat, choose_pivot, singular_exc, zero_test) -> Mat:
    n = A.rows
    rows = [list(A.entries[i * n:(i + 1) * n]) + [1 if j == i else 0 for j in range(n)]
            for i in range(n)]
    for col in range(n):
        piv = choose_pivot(rows, col)
        if piv is None:
            raise singular_exc(f"no usable pivot in column {col}")
        rows[col], rows[piv] = rows[piv], rows[col]
        prow = rows[col]
        p = prow[col]
        inv = 1 / p
        prow = [x * inv if x else x for x in prow]
        prow[col] = 1
        rows[col] = prow
        nzcols = [j for j in range(col, 2 * n) if prow[j]]
        for r in range(n):
            if r == col:
                continue
            row = rows[r]
            f = row[col]
            if zero_test(f):
                row[col] = 0
                continue
            for j in nzcols:
                row[j] = row[j] - f * prow[j]
            row[col] = 0
    return Mat(n, n, [x for r in rows for x in r[n:]])


def dense_inverse(A: Mat, rtol: float = FLOAT_SINGULAR_RTOL) -> Mat:
    """Inverse by Gauss-Jordan elimination.

    Exact entries use the first nonzero pivot, floats use partial pivoting
    and raise ``Singular`` when the best pivot is below ``rtol * max|A|``.
    Rational-function entries are delegated to ``ratmat_inverse``.
    """
    if not A.is_square:
        raise NonSquare(f"inverse of a {A.rows}x{A.cols} matrix")
    kind = _kind(A.entries)
    if kind == "ratfn":
        return ratmat_inverse(A)
    if kind == "exact":
        B = A.map(exact)

        def choose(rows, col):
            for r in range(col, len(rows)):
                if rows[r][col]:
                    return r
            return None

        return _gauss_jordan(B, choose, Singular, lambda x: not x).map(exact)

    B = A.map(complex)
    scale = B.max_abs()
    thresh = rtol * scale

    def choose_float(rows, col):
        best, best_abs = None, -1.0
        for r in range(col, len(rows)):
            v = abs(rows[r][col])
            if v > best_abs:
                best, best_abs = r, v
        return best if best_abs > thresh and best_abs > 0 else None

    return _gauss_jordan(B, choose_float, Singular, lambda x: x == 0).map(complex)


def _lift(x) -> RatFn:
    return x if isinstance(x, RatFn) else RatFn(x)


def ratmat_inverse(A: Mat) -> Mat:
    """Inverse over the rational-function field; pivots minimize total degree."""
    if not A.is_square:
        raise NonSquare(f"inverse of a {A.rows}x{A.cols} matrix")
    B = A.map(_lift)

    def choose(rows, col):
        best, best_deg = None, None
        for r in range(col, len(rows)):
            x = rows[r][col]
            if isinstance(x, RatFn) and x:
                deg = x.total_degree
                if best is None or deg < best_deg:
                    best, best_deg = r, deg
            elif not isinstance(x, RatFn) and x:
                return r
        return best

    out = _gauss_jordan(B, choose, SingularOverField, lambda x: not x)
    return out.map(_lift)


def permute_symmetric(M: Mat, perm: Sequence[int]) -> Mat:
    """``P M P^T`` where row ``i`` of the result is row ``perm[i]`` of ``M``."""
    n = M.rows
    if not M.is_square or sorted(perm) != list(range(n)):
        raise InvalidPermutation(f"{list(perm)} is not a permutation of 0..{n - 1}")
    return M.submatrix(perm, perm)


# helpers -------------------------------------------------------------------------


def to_float(M: Mat) -> Mat:
    return M.map(complex)


def to_exact(M: Mat, tol: float = 1e-12) -> Mat:
    from .scalars import rationalize

    return M.map(lambda x: rationalize(x, tol))


def is_exact_mat(M: Mat) -> bool:
    return all(is_exact(x) for x in M.entries)


def evaluate(M: Mat, x) -> Mat:
    """Evaluate a matrix of rational functions at the point ``x``."""
    return M.map(lambda e: e(x) if isinstance(e, RatFn) else e)


def max_diff(A: Mat, B: Mat) -> float:
    A._check_same(B)
    return max((abs(complex(a - b)) for a, b in zip(A.entries, B.entries)), default=0.0)


def scalar_matrix(n: int, c) -> Mat:
    return Mat.identity(n, one=c)


__all__ = [
    "GaussRat",
    "Mat",
    "dense_inverse",
    "evaluate",
    "is_exact_mat",
    "mat_mul",
    "max_diff",
    "permute_symmetric",
    "ratmat_inverse",
    "scalar_matrix",
    "to_exact",
    "to_float",
]
