"""Exact integer matrix algebra.

Everything here works on Python ints, so entries never overflow.  Matrices are
immutable; the normal-form routines copy into plain lists, reduce in place and
wrap the result again.

Conventions for empty matrices: a 0 x n or n x 0 matrix is a legal value.  Its
Smith form has identity transforms of the right sizes, its kernel (for 0 rows)
is the whole of Z^n, and its cokernel (for 0 columns) is free of rank equal to
the row count.

Canonical coset representatives modulo a lattice use the column Hermite form
computed by :func:`hnf_columns`: the basis is in column echelon form with
positive pivots, strictly increasing pivot rows, and every entry to the left of
a pivot reduced into ``[0, pivot)``.  A vector is reduced by walking the pivots
top to bottom and bringing each pivot-row entry into ``[0, pivot)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class DimensionError(ValueError):
    """Operand shapes do not fit together."""


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("column count needed for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise DimensionError("column length does not match row count")
        n = len(columns)
        return cls(rows, n, tuple(int(columns[j][i]) for i in range(rows) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def column(cls, vec: Sequence[int]) -> "IntMatrix":
        return cls(len(vec), 1, tuple(int(x) for x in vec))

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list[int]]:
        return [self.col(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.entries)

    # arithmetic ---------------------------------------------------------

    def _same_shape(self, other: "IntMatrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        n, m, q = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * m:(i + 1) * m]
            for j in range(q):
                out.append(sum(arow[t] * b[t * q + j] for t in range(m)))
        return IntMatrix(n, q, tuple(out))

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} for {self.shape} matrix")
        m = self.cols
        return [sum(self.entries[i * m + t] * vec[t] for t in range(m)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionError("row counts differ")
        return IntMatrix.from_columns(self.columns() + other.columns(), self.rows)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_rows()})"


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    The inverses are kept alongside so unimodularity is witnessed explicitly.
    """

    U: IntMatrix
    V: IntMatrix
    D: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class AbelianGroupPresentation:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError("invariant factors must form a divisibility chain")

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def _identity_rows(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _wrap(rows: list[list[int]], ncols: int) -> IntMatrix:
    return IntMatrix(len(rows), ncols, tuple(x for r in rows for x in r))


class _Reducer:
    """Mutable working copy of a matrix with tracked row and column transforms.

    Invariant while reducing: ``U @ A0 @ V == A``, ``U @ Ui == I``, ``Vi @ V == I``.
    """

    def __init__(self, A: IntMatrix):
        self.n, self.m = A.rows, A.cols
        self.a = A.to_rows()
        self.U = _identity_rows(self.n)
        self.Ui = _identity_rows(self.n)
        self.V = _identity_rows(self.m)
        self.Vi = _identity_rows(self.m)

    # row i += c * row j
    def add_row(self, i: int, j: int, c: int):
        if not c:
            return
        a, U, Ui = self.a, self.U, self.Ui
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
        for r in Ui:
            r[j] -= c * r[i]

    def swap_rows(self, i: int, j: int):
        if i == j:
            return
        a, U = self.a, self.U
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in self.Ui:
            r[i], r[j] = r[j], r[i]

    def negate_row(self, i: int):
        self.a[i] = [-x for x in self.a[i]]
        self.U[i] = [-x for x in self.U[i]]
        for r in self.Ui:
            r[i] = -r[i]

    # col j += c * col i
    def add_col(self, j: int, i: int, c: int):
        if not c:
            return
        for r in self.a:
            r[j] += c * r[i]
        for r in self.V:
            r[j] += c * r[i]
        Vi = self.Vi
        Vi[i] = [x - c * y for x, y in zip(Vi[i], Vi[j])]

    def swap_cols(self, i: int, j: int):
        if i == j:
            return
        for r in self.a:
            r[i], r[j] = r[j], r[i]
        for r in self.V:
            r[i], r[j] = r[j], r[i]
        Vi = self.Vi
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def negate_col(self, j: int):
        for r in self.a:
            r[j] = -r[j]
        for r in self.V:
            r[j] = -r[j]
        self.Vi[j] = [-x for x in self.Vi[j]]


def snf(A: IntMatrix) -> SnfDecomposition:
    """Smith normal form ``U A V = D`` with ``d1 | d2 | ...`` and trailing zeros."""
    R = _Reducer(A)
    n, m = R.n, R.m
    a = R.a
    t = 0
    while t < min(n, m):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        R.swap_rows(t, best[0])
        R.swap_cols(t, best[1])
        while True:
            done = True
            piv = a[t][t]
            for i in range(t + 1, n):
                if a[i][t]:
                    R.add_row(i, t, -(a[i][t] // piv))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, m):
                if a[t][j]:
                    R.add_col(j, t, -(a[t][j] // piv))
                    if a[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, n):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                        best = i
                R.swap_rows(t, best)
                bestc = None
                for j in range(t, m):
                    if a[t][j] and (bestc is None or abs(a[t][j]) < abs(a[t][bestc])):
                        bestc = j
                R.swap_cols(t, bestc)
                continue
            # row and column cleared; enforce divisibility of the remaining block
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            R.add_row(t, bad, 1)
        if a[t][t] < 0:
            R.negate_row(t)
        t += 1
    return SnfDecomposition(
        U=_wrap(R.U, n), V=_wrap(R.V, m), D=_wrap(a, m),
        U_inv=_wrap(R.Ui, n), V_inv=_wrap(R.Vi, m),
    )


def hnf_columns(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, list[int]]:
    """Column Hermite form ``H = A @ T`` with ``T`` unimodular.

    Returns ``(H, T, pivot_rows)``; the first ``len(pivot_rows)`` columns of
    ``H`` are the echelon basis of the column lattice, the rest are zero.
    """
    R = _Reducer(A)
    n, m = R.n, R.m
    a = R.a
    pivots: list[int] = []
    c = 0
    for i in range(n):
        if c >= m:
            break
        while True:
            nz = [j for j in range(c, m) if a[i][j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(a[i][j]), j))
            R.swap_cols(c, j0)
            piv = a[i][c]
            for j in range(c + 1, m):
                if a[i][j]:
                    R.add_col(j, c, -(a[i][j] // piv))
            if not any(a[i][j] for j in range(c + 1, m)):
                break
        if a[i][c] == 0:
            continue
        if a[i][c] < 0:
            R.negate_col(c)
        piv = a[i][c]
        for j in range(c):
            if a[i][j] < 0 or a[i][j] >= piv:
                R.add_col(j, c, -(a[i][j] // piv))
        pivots.append(i)
        c += 1
    return _wrap(a, m), _wrap(R.V, m), pivots


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form the Hermite-reduced basis of ``{x in Z^cols : A x = 0}``."""
    H, T, pivots = hnf_columns(A)
    r = len(pivots)
    K = IntMatrix.from_columns([T.col(j) for j in range(r, A.cols)], A.cols)
    if K.cols == 0:
        return K
    Hk, _, piv = hnf_columns(K)
    return IntMatrix.from_columns([Hk.col(j) for j in range(len(piv))], A.cols)


def cokernel(A: IntMatrix) -> AbelianGroupPresentation:
    """``Z^rows / (column span of A)`` by its invariant factors."""
    diag = snf(A).diagonal
    rank = sum(1 for d in diag if d)
    return AbelianGroupPresentation(A.rows - rank, tuple(d for d in diag if d > 1))


def solve_linear(A: IntMatrix, b: Sequence[int]) -> Optional[list[int]]:
    """An integer ``x`` with ``A x = b``, or ``None`` when none exists."""
    b = [int(x) for x in b]
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side of length {len(b)} for {A.shape} matrix")
    S = snf(A)
    c = S.U.apply(b)
    diag = S.diagonal
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    x = S.V.apply(y)
    if A.apply(x) != b:
        raise ArithmeticError("solution failed substitution check")
    return x


def reduce_mod_lattice(L: IntMatrix, v: Sequence[int]) -> tuple[list[int], list[int]]:
    """Canonical representative of ``v`` modulo the column span of ``L``.

    Returns ``(residue, coeffs)`` with ``v - residue == L @ coeffs``.
    """
    v = [int(x) for x in v]
    if len(v) != L.rows:
        raise DimensionError(f"vector of length {len(v)} for lattice in Z^{L.rows}")
    H, T, pivots = hnf_columns(L)
    res = list(v)
    hcoef = [0] * L.cols
    for c, i in enumerate(pivots):
        q = res[i] // H[i, c]
        if q:
            hcoef[c] = q
            col = H.col(c)
            res = [x - q * y for x, y in zip(res, col)]
    coeffs = T.apply(hcoef)
    return res, coeffs


def matrix_rank(A: IntMatrix) -> int:
    return snf(A).rank


def vec_add(u: Iterable[int], v: Iterable[int]) -> list[int]:
    return [a + b for a, b in zip(u, v, strict=True)]


def vec_sub(u: Iterable[int], v: Iterable[int]) -> list[int]:
    return [a - b for a, b in zip(u, v, strict=True)]
