"""Exact integer matrices.

Everything in this module works with Python ints, so entries never
overflow and no floating point is involved.  Matrices are immutable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

__all__ = [
    "IntMatrix",
    "MatrixOrder",
    "SmithNormalForm",
    "NonInvertible",
    "NotUnimodular",
    "det",
    "is_unimodular",
    "inverse",
    "power",
    "order",
    "smith_normal_form",
    "charpoly",
    "block_diag",
    "parse_matrix",
    "DEFAULT_ORDER_CAP",
]

DEFAULT_ORDER_CAP = 24


class NonInvertible(ArithmeticError):
    """Raised when an integer inverse is requested for a matrix with |det| != 1."""


class NotUnimodular(ValueError):
    """Raised when an operation requires an element of GL(k, Z)."""


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of arbitrary-precision integers.

    Parameters
    ----------
    rows : tuple of tuple of int
        Row-major entries.  Use :meth:`from_rows` to build one from any
        nested sequence.
    """

    rows: tuple

    def __post_init__(self):
        k = len(self.rows)
        if k < 1:
            raise ValueError("matrix must have dimension >= 1")
        for row in self.rows:
            if len(row) != k:
                raise ValueError("matrix must be square")
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise TypeError(f"entries must be integers, got {x!r}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        out = []
        for row in rows:
            r = []
            for x in row:
                # accept numpy integer scalars and integral floats from JSON
                if isinstance(x, float):
                    if not x.is_integer():
                        raise TypeError(f"non-integer entry {x!r}")
                r.append(int(x) if not isinstance(x, int) else x)
            out.append(tuple(r))
        return cls(tuple(out))

    @classmethod
    def identity(cls, k: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))

    @classmethod
    def zeros(cls, k: int) -> "IntMatrix":
        return cls(tuple((0,) * k for _ in range(k)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows)
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return IntMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return IntMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.dim))

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.dim)

    def tolist(self) -> list:
        return [list(r) for r in self.rows]

    def to_numpy(self, dtype=float):
        import numpy as np

        return np.array(self.rows, dtype=dtype)

    def __str__(self) -> str:
        return json.dumps(self.tolist(), separators=(",", ":"))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


@dataclass(frozen=True)
class MatrixOrder:
    """Order of a group element: a positive integer, or ``None`` for infinite."""

    value: Optional[int]

    @classmethod
    def finite(cls, m: int) -> "MatrixOrder":
        if m < 1:
            raise ValueError("finite order must be positive")
        return cls(m)

    @classmethod
    def infinite(cls) -> "MatrixOrder":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def to_json(self):
        return self.value if self.is_finite else "infinite"

    def __str__(self) -> str:
        return str(self.value) if self.is_finite else "infinite"


@dataclass(frozen=True)
class SmithNormalForm:
    """Result of :func:`smith_normal_form`: ``left @ A @ right == diag(diagonal)``."""

    diagonal: tuple
    left: IntMatrix
    right: IntMatrix

    def diagonal_matrix(self) -> IntMatrix:
        k = len(self.diagonal)
        return IntMatrix(
            tuple(tuple(self.diagonal[i] if i == j else 0 for j in range(k)) for i in range(k))
        )

    def cokernel(self):
        """Return ``(free_rank, torsion)`` of Z^k / image(A).

        Torsion coefficients equal to 1 are dropped; the rest are sorted.
        """
        free = sum(1 for d in self.diagonal if d == 0)
        torsion = tuple(sorted(d for d in self.diagonal if d > 1))
        return free, torsion


def _as_matrix(A) -> IntMatrix:
    if isinstance(A, IntMatrix):
        return A
    return IntMatrix.from_rows(A)


def det(A) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    A = _as_matrix(A)
    k = A.dim
    if k == 1:
        return A[0, 0]
    if k == 2:
        return A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    M = [list(r) for r in A.rows]
    sign = 1
    prev = 1
    for p in range(k - 1):
        if M[p][p] == 0:
            swap = next((i for i in range(p + 1, k) if M[i][p] != 0), None)
            if swap is None:
                return 0
            M[p], M[swap] = M[swap], M[p]
            sign = -sign
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                # exact by Sylvester's identity
                M[i][j] = (M[i][j] * M[p][p] - M[i][p] * M[p][j]) // prev
        prev = M[p][p]
    return sign * M[k - 1][k - 1]


def is_unimodular(A) -> bool:
    return abs(det(A)) == 1


def _adjugate(A: IntMatrix) -> IntMatrix:
    k = A.dim
    if k == 1:
        return IntMatrix(((1,),))
    cof = []
    for i in range(k):
        row = []
        for j in range(k):
            minor = [
                [A[r, c] for c in range(k) if c != j] for r in range(k) if r != i
            ]
            row.append((-1) ** (i + j) * det(IntMatrix.from_rows(minor)))
        cof.append(row)
    # adjugate is the transpose of the cofactor matrix
    return IntMatrix.from_rows(cof).T


def inverse(A) -> IntMatrix:
    """Integer inverse of a unimodular matrix, via the adjugate."""
    A = _as_matrix(A)
    D = det(A)
    if abs(D) != 1:
        raise NonInvertible(f"det = {D}; no integer inverse")
    adj = _adjugate(A)
    return IntMatrix(tuple(tuple(D * x for x in r) for r in adj.rows))


def power(A, e: int) -> IntMatrix:
    """Exact ``A**e`` by repeated squaring; ``e < 0`` needs ``A`` unimodular."""
    A = _as_matrix(A)
    if e < 0:
        A = inverse(A)
        e = -e
    result = IntMatrix.identity(A.dim)
    base = A
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def _gl2_has_finite_order(A: IntMatrix) -> bool:
    # trace test for 2x2 unimodular matrices: the characteristic polynomial
    # must be cyclotomic (or A = +-I)
    D = det(A)
    t = A.trace()
    if D == 1:
        if abs(t) < 2:
            return True
        if abs(t) == 2:
            return A == IntMatrix.identity(2) or A == -IntMatrix.identity(2)
        return False
    return t == 0


def order(A, cap: int = DEFAULT_ORDER_CAP) -> MatrixOrder:
    """Multiplicative order of a unimodular matrix, searched up to ``cap``.

    For 2x2 input an "infinite" verdict from iteration is cross-checked
    against the trace classification of finite-order elements of GL(2, Z);
    a disagreement means ``cap`` is too small and raises ``ValueError``.

    Raises
    ------
    NonInvertible
        If ``|det A| != 1``.
    """
    A = _as_matrix(A)
    if cap < 1:
        raise ValueError("cap must be positive")
    if not is_unimodular(A):
        raise NonInvertible(f"det = {det(A)}; order is only defined in GL(k, Z)")
    I = IntMatrix.identity(A.dim)
    P = A
    for j in range(1, cap + 1):
        if P == I:
            return MatrixOrder.finite(j)
        P = P @ A
    if A.dim == 2 and _gl2_has_finite_order(A):
        raise ValueError(f"cap={cap} too small: trace test says A has finite order")
    return MatrixOrder.infinite()


def smith_normal_form(A) -> SmithNormalForm:
    """Smith normal form with unimodular transforms.

    Returns ``S`` with ``S.left @ A @ S.right`` equal to the diagonal matrix of
    ``S.diagonal``, where the diagonal entries are nonnegative and each one
    divides the next (zeros last).
    """
    A = _as_matrix(A)
    k = A.dim
    M = [list(r) for r in A.rows]
    L = [[int(i == j) for j in range(k)] for i in range(k)]
    R = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        L[dst] = [a + q * b for a, b in zip(L[dst], L[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for row in M:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]

    for t in range(k):
        entries = [(abs(M[i][j]), i, j) for i in range(t, k) for j in range(t, k) if M[i][j]]
        if not entries:
            break
        while True:
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = M[t][t]
            for i in range(t + 1, k):
                if M[i][t]:
                    add_row(t, i, -(M[i][t] // p))
            for j in range(t + 1, k):
                if M[t][j]:
                    add_col(t, j, -(M[t][j] // p))
            rest = [i for i in range(t + 1, k) if M[i][t]] + [j for j in range(t + 1, k) if M[t][j]]
            if rest:
                # a remainder smaller than the pivot survived; re-pivot on it
                entries = [(abs(M[i][j]), i, j) for i in range(t, k) for j in range(t, k) if M[i][j]]
                continue
            bad = next(
                ((i, j) for i in range(t + 1, k) for j in range(t + 1, k) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
            entries = [(abs(M[i][j]), i, j) for i in range(t, k) for j in range(t, k) if M[i][j]]
        if M[t][t] < 0:
            M[t] = [-a for a in M[t]]
            L[t] = [-a for a in L[t]]

    diagonal = tuple(M[i][i] for i in range(k))
    return SmithNormalForm(diagonal, IntMatrix.from_rows(L), IntMatrix.from_rows(R))


def charpoly(A) -> tuple:
    """Coefficients ``(1, c1, ..., ck)`` of ``det(xI - A)``, highest degree first.

    Faddeev-LeVerrier recursion; every division is exact over Z.
    """
    A = _as_matrix(A)
    k = A.dim
    I = IntMatrix.identity(k)
    coeffs = [1]
    M = IntMatrix.zeros(k)
    c = 1
    for j in range(1, k + 1):
        M = A @ M + IntMatrix(tuple(tuple(c * x for x in r) for r in I.rows))
        AM = A @ M
        tr = AM.trace()
        assert tr % j == 0
        c = -tr // j
        coeffs.append(c)
    return tuple(coeffs)


def block_diag(*blocks) -> IntMatrix:
    """Block-diagonal matrix from square integer blocks, in order."""
    mats = [_as_matrix(b) for b in blocks]
    n = sum(m.dim for m in mats)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for m in mats:
        for i in range(m.dim):
            for j in range(m.dim):
                rows[off + i][off + j] = m[i, j]
        off += m.dim
    return IntMatrix.from_rows(rows)


_TEXT_ROW_SEP = re.compile(r"[;\n]")


def parse_matrix(text) -> IntMatrix:
    """Parse a matrix literal.

    Accepts a JSON array of integer rows (``"[[0,1],[-1,-1]]"``), the
    semicolon text form (``"0 1; -1 -1"``), or an already-nested sequence.
    A bare JSON integer or a single text number is read as a 1x1 matrix.
    """
    if isinstance(text, IntMatrix):
        return text
    if not isinstance(text, str):
        return _from_nested(text)
    s = text.strip()
    if not s:
        raise ValueError("empty matrix literal")
    if s[0] == "[" or s.lstrip("-").isdigit():
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            if s[0] == "[":
                raise ValueError(f"malformed JSON matrix: {exc}") from None
        else:
            return _from_nested(data)
    rows = []
    for chunk in _TEXT_ROW_SEP.split(s):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            rows.append([int(tok) for tok in chunk.replace(",", " ").split()])
        except ValueError:
            raise ValueError(f"malformed matrix row {chunk!r}") from None
    return _from_nested(rows)


def _from_nested(data) -> IntMatrix:
    if isinstance(data, int) and not isinstance(data, bool):
        return IntMatrix(((data,),))
    if isinstance(data, Sequence) and data and all(
        isinstance(x, int) and not isinstance(x, bool) for x in data
    ):
        # a flat list is only unambiguous for 1x1
        if len(data) == 1:
            return IntMatrix(((data[0],),))
        raise ValueError("flat list is not a square matrix; use rows")
    try:
        rows = [list(r) for r in data]
        for r in rows:
            for x in r:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise TypeError
    except TypeError:
        raise ValueError("matrix entries must be integers arranged in rows") from None
    try:
        return IntMatrix.from_rows(rows)
    except (TypeError, ValueError) as exc:
        raise ValueError(str(exc)) from None
