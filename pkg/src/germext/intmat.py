"""Exact integer matrices and their normal forms.

Everything here works on Python ints, so entries never overflow. Matrices
are immutable; the algorithms copy into nested lists, operate in place and
wrap the result.

Conventions:

* ``det`` of a 0x0 matrix is 1.
* ``determinantal_divisors(M)`` returns ``[d_0, ..., d_m]`` with
  ``m = min(rows, cols)`` and ``d_0 = 1``; ``determinantal_divisor(M, k)``
  returns 0 for any larger ``k`` (gcd of an empty family of minors).
* Divisors are nonnegative; sign ambiguities live in the transforms.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import MatrixFormatError, ShapeError

__all__ = [
    "IntMatrix",
    "HnfResult",
    "SnfResult",
    "det",
    "hnf",
    "snf",
    "determinantal_divisors",
    "determinantal_divisor",
    "is_surjective",
    "is_unimodular",
    "mat_mul",
    "mat_add",
    "transpose",
    "identity",
    "zeros",
    "elementary",
    "hconcat",
    "inverse_unimodular",
    "rank",
    "parse_matrix",
    "format_matrix",
    "egcd",
]


class IntMatrix:
    """Dense immutable matrix of arbitrary-precision integers.

    ``IntMatrix([[1, 2], [3, 4]])``; empty shapes need ``cols``:
    ``IntMatrix([], cols=3)`` is 0x3.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]] = (), cols: int | None = None):
        rows = tuple(tuple(operator.index(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ShapeError("ragged rows")
            if cols is not None and cols != width:
                raise ShapeError(f"declared {cols} columns, rows have {width}")
            cols = width
        elif cols is None:
            cols = 0
        if cols < 0:
            raise ShapeError("negative column count")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence[int]) -> "IntMatrix":
        if rows < 0 or cols < 0:
            raise ShapeError("negative dimension")
        if len(entries) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(entries)}")
        return cls((entries[i * cols:(i + 1) * cols] for i in range(rows)), cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[int, ...]:
        """Row-major flat view."""
        return tuple(x for row in self._data for x in row)

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        if not self.rows:
            return f"IntMatrix([], cols={self.cols})"
        return f"IntMatrix({self.to_list()!r})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return mat_add(self, -other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(([-x for x in r] for r in self._data), cols=self.cols)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(([c * x for x in r] for r in self._data), cols=self.cols)

    @property
    def T(self) -> "IntMatrix":
        return transpose(self)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(x for r in self._data for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(([self._data[i][j] for j in cols] for i in rows), cols=len(cols))


@dataclass(frozen=True)
class HnfResult:
    """``B @ U == H`` with ``H`` upper triangular and ``U`` unimodular."""

    H: IntMatrix
    U: IntMatrix


@dataclass(frozen=True)
class SnfResult:
    """``U @ M @ V == S``; ``S`` is diagonal with the divisibility chain."""

    S: IntMatrix
    U: IntMatrix
    V: IntMatrix
    elementary_divisors: tuple[int, ...]
    determinantal_divisors: tuple[int, ...]


def identity(n: int) -> IntMatrix:
    return IntMatrix(([1 if i == j else 0 for j in range(n)] for i in range(n)), cols=n)


def zeros(rows: int, cols: int) -> IntMatrix:
    return IntMatrix(([0] * cols for _ in range(rows)), cols=cols)


def elementary(p: int, l: int, i: int, s: int) -> IntMatrix:
    """``I_p + s * E_{l,i}`` with 1-based ``(l, i)``; ``s`` is +1 or -1."""
    if s not in (1, -1):
        raise ValueError("s must be +1 or -1")
    if not (1 <= l <= p and 1 <= i <= p):
        raise ShapeError(f"position ({l}, {i}) outside {p}x{p}")
    if l == i:
        raise ValueError("elementary matrix needs l != i")
    m = identity(p).to_list()
    m[l - 1][i - 1] = s
    return IntMatrix(m, cols=p)


def transpose(M: IntMatrix) -> IntMatrix:
    return IntMatrix(zip(*M._data), cols=M.rows) if M.rows else IntMatrix(
        ([] for _ in range(M.cols)), cols=0)


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    bcols = list(zip(*B._data)) if B.rows else [()] * B.cols
    return IntMatrix(
        ([sum(a * b for a, b in zip(row, c)) for c in bcols] for row in A._data),
        cols=B.cols,
    )


def mat_add(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if A.shape != B.shape:
        raise ShapeError(f"cannot add {A.rows}x{A.cols} and {B.rows}x{B.cols}")
    return IntMatrix(([a + b for a, b in zip(ra, rb)] for ra, rb in zip(A._data, B._data)),
                     cols=A.cols)


def hconcat(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if A.rows != B.rows:
        raise ShapeError(f"row counts differ: {A.rows} vs {B.rows}")
    return IntMatrix((ra + rb for ra, rb in zip(A._data, B._data)), cols=A.cols + B.cols)


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``a*x + b*y = g``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not M.is_square():
        raise ShapeError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_list()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def is_unimodular(M: IntMatrix) -> bool:
    return M.is_square() and det(M) in (1, -1)


# -- in-place helpers on nested lists -------------------------------------

def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for r in a:
        r[i], r[j] = r[j], r[i]


def _add_row(a, dst, src, c):
    """row[dst] += c * row[src]"""
    if c:
        rs, rd = a[src], a[dst]
        for k in range(len(rd)):
            rd[k] += c * rs[k]


def _add_col(a, dst, src, c):
    """col[dst] += c * col[src]"""
    if c:
        for r in a:
            r[dst] += c * r[src]


def _combine_cols(a, j, k, x, y, u, v):
    """(col_j, col_k) <- (x col_j + y col_k, u col_j + v col_k)."""
    for r in a:
        cj, ck = r[j], r[k]
        r[j] = x * cj + y * ck
        r[k] = u * cj + v * ck


def _combine_rows(a, i, k, x, y, u, v):
    """(row_i, row_k) <- (x row_i + y row_k, u row_i + v row_k)."""
    ri, rk = a[i], a[k]
    for c in range(len(ri)):
        p, q = ri[c], rk[c]
        ri[c] = x * p + y * q
        rk[c] = u * p + v * q


def _ident(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# -------------------------------------------------------------------------

def hnf(B: IntMatrix) -> HnfResult:
    """Column-style Hermite form: ``B @ U = H`` with ``H[i][j] == 0`` for ``i > j``.

    Requires ``rows <= cols``; row ``i`` is pivoted in column
    ``cols - rows + i``. Nonzero pivots are positive and the entries to
    their right are reduced into ``[0, pivot)``.
    """
    p, q = B.shape
    if p > q:
        raise ShapeError(f"upper-triangular form by column operations needs rows <= cols, got {p}x{q}")
    a = B.to_list()
    u = _ident(q)
    for i in range(p - 1, -1, -1):
        c = q - p + i
        for j in range(c):
            b = a[i][j]
            if b == 0:
                continue
            piv = a[i][c]
            g, x, y = egcd(piv, b)
            # (col_c, col_j) <- (x col_c + y col_j, -(b/g) col_c + (piv/g) col_j)
            _combine_cols(a, c, j, x, y, -(b // g), piv // g)
            _combine_cols(u, c, j, x, y, -(b // g), piv // g)
        piv = a[i][c]
        if piv < 0:
            for r in a:
                r[c] = -r[c]
            for r in u:
                r[c] = -r[c]
            piv = -piv
        if piv:
            for j in range(c + 1, q):
                t = a[i][j] // piv
                if t:
                    _add_col(a, j, c, -t)
                    _add_col(u, j, c, -t)
    return HnfResult(IntMatrix(a, cols=q), IntMatrix(u, cols=q))


def snf(M: IntMatrix) -> SnfResult:
    """Smith normal form with transforms: ``U @ M @ V == S``."""
    m, n = M.shape
    a = M.to_list()
    u = _ident(m)
    v = _ident(n)
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            _swap_rows(a, i, t)
            _swap_rows(u, i, t)
        if j != t:
            _swap_cols(a, j, t)
            _swap_cols(v, j, t)
        piv = a[t][t]
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q_ = a[i][t] // piv
                _add_row(a, i, t, -q_)
                _add_row(u, i, t, -q_)
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q_ = a[t][j] // piv
                _add_col(a, j, t, -q_)
                _add_col(v, j, t, -q_)
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % piv:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            _add_row(a, t, bad, 1)
            _add_row(u, t, bad, 1)
            continue
        if piv < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    r = min(m, n)
    elem = tuple(a[k][k] for k in range(r))
    dets = [1]
    for s in elem:
        dets.append(dets[-1] * s)
    return SnfResult(
        S=IntMatrix(a, cols=n),
        U=IntMatrix(u, cols=m),
        V=IntMatrix(v, cols=n),
        elementary_divisors=elem,
        determinantal_divisors=tuple(dets),
    )


def determinantal_divisors(M: IntMatrix) -> list[int]:
    """``[d_0, d_1, ..., d_min(rows, cols)]``, computed through the SNF."""
    return list(snf(M).determinantal_divisors)


def determinantal_divisor(M: IntMatrix, k: int) -> int:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1
    if k > min(M.shape):
        return 0
    return snf(M).determinantal_divisors[k]


def is_surjective(M: IntMatrix) -> bool:
    """True iff ``M: Z^cols -> Z^rows`` is onto, i.e. ``d_rows(M) == 1``."""
    return determinantal_divisor(M, M.rows) == 1


def rank(M: IntMatrix) -> int:
    return sum(1 for s in snf(M).elementary_divisors if s)


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    """Integer inverse of a unimodular matrix."""
    if not M.is_square():
        raise ShapeError("inverse of non-square matrix")
    n = M.rows
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(M.to_list())]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = []
    for r in a:
        row = r[n:]
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return IntMatrix(out, cols=n)


def parse_matrix(text: str, first_line: int = 1) -> IntMatrix:
    """Parse ``"rows cols"`` followed by row-major integers.

    Line breaks inside the body are not significant.
    """
    lines = text.splitlines()
    header_at = None
    for idx, line in enumerate(lines):
        if line.strip():
            header_at = idx
            break
    if header_at is None:
        raise MatrixFormatError("empty input", line=first_line)
    head = lines[header_at].split()
    lineno = first_line + header_at
    if len(head) != 2:
        raise MatrixFormatError("header must be 'rows cols'", line=lineno)
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError:
        raise MatrixFormatError(f"bad header {lines[header_at].strip()!r}", line=lineno) from None
    if rows < 0 or cols < 0:
        raise MatrixFormatError("negative dimension", line=lineno)
    values = []
    for idx in range(header_at + 1, len(lines)):
        for tok in lines[idx].split():
            try:
                values.append(int(tok))
            except ValueError:
                raise MatrixFormatError(f"not an integer: {tok!r}", line=first_line + idx) from None
    if len(values) != rows * cols:
        raise MatrixFormatError(
            f"expected {rows * cols} entries for a {rows}x{cols} matrix, found {len(values)}",
            line=first_line + len(lines) - 1,
        )
    return IntMatrix.from_flat(rows, cols, values)


def format_matrix(M: IntMatrix) -> str:
    out = [f"{M.rows} {M.cols}"]
    out.extend(" ".join(str(x) for x in r) for r in M)
    return "\n".join(out) + "\n"


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
