"""Dense exact linear algebra over a FieldSpec.

Everything downstream (hom spaces, Ext groups, splitting tests) reduces to
rref / solve on these matrices.  Dense row-major storage; window sizes stay
small enough that Gaussian elimination is all we need.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fields import FieldSpec


class Matrix:
    """Immutable dense matrix over a fixed field.

    `data` is a 2D numpy array: int64 (reduced mod p) for prime fields,
    object/Fraction for the rationals.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FieldSpec, data):
        a = np.array(data, dtype=field.dtype)
        if a.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        if field.is_prime_field:
            a = a % field.p
        else:
            a = np.array([[Fraction(x) for x in row] for row in a.tolist()],
                         dtype=object).reshape(a.shape) if a.size else a
        self.field = field
        self.rows, self.cols = a.shape
        self.data = a
        self.data.setflags(write=False)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return Matrix(field, field.empty(rows, cols))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        a = field.empty(n, n)
        for i in range(n):
            a[i, i] = field.one()
        return Matrix(field, a)

    @staticmethod
    def from_rows(field: FieldSpec, rows: list[list]) -> "Matrix":
        if not rows:
            return Matrix.zeros(field, 0, 0)
        a = field.empty(len(rows), len(rows[0]))
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                a[i, j] = field.coerce(x)
        return Matrix(field, a)

    @staticmethod
    def column(field: FieldSpec, entries: list) -> "Matrix":
        return Matrix.from_rows(field, [[x] for x in entries])

    # -- basic algebra ---------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix(self.field, self.field.normalize(self.data.dot(other.data)))

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, self.field.normalize(self.data + other.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, self.field.normalize(self.data - other.data))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.field.normalize(-self.data))

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        return Matrix(self.field, self.field.normalize(self.data * c))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        if self.data.size == 0:
            return True
        return not np.any(self.data != self.field.zero())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        raise TypeError("Matrix is not hashable")

    def __repr__(self):
        return f"Matrix({self.field}, {self.data.tolist()})"

    def entry(self, i: int, j: int):
        return self.data[i, j]

    def tolist(self):
        return self.data.tolist()

    def column_vector(self, j: int) -> "Matrix":
        return Matrix(self.field, self.data[:, j:j + 1].copy())

    # -- stacking ---------------------------------------------------------

    @staticmethod
    def hstack(field: FieldSpec, mats: list["Matrix"]) -> "Matrix":
        mats = [m for m in mats]
        if not mats:
            return Matrix.zeros(field, 0, 0)
        rows = mats[0].rows
        datas = [m.data for m in mats if m.cols > 0]
        if not datas:
            return Matrix.zeros(field, rows, 0)
        return Matrix(field, np.hstack(datas))

    @staticmethod
    def vstack(field: FieldSpec, mats: list["Matrix"]) -> "Matrix":
        mats = [m for m in mats]
        if not mats:
            return Matrix.zeros(field, 0, 0)
        cols = mats[0].cols
        datas = [m.data for m in mats if m.rows > 0]
        if not datas:
            return Matrix.zeros(field, 0, cols)
        return Matrix(field, np.vstack(datas))

    @staticmethod
    def block_diag(field: FieldSpec, mats: list["Matrix"]) -> "Matrix":
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        a = field.empty(rows, cols)
        r = c = 0
        for m in mats:
            if m.rows and m.cols:
                a[r:r + m.rows, c:c + m.cols] = m.data
            r += m.rows
            c += m.cols
        return Matrix(field, a)


@dataclass
class Subspace:
    """A subspace of k^ambient_dim spanned by the columns of `basis`."""

    ambient_dim: int
    basis: Matrix

    @property
    def dim(self) -> int:
        return self.basis.cols

    def contains(self, v: Matrix) -> bool:
        return solve_linear(self.basis, v) is not None


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------

def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form.  Returns (rref, pivot columns, rank)."""
    field = m.field
    a = m.data.copy()
    a.setflags(write=True)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    if field.is_prime_field:
        p = field.p
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
            col = a[:, c].copy()
            col[r] = 0
            mask = col != 0
            if mask.any():
                a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
            pivots.append(c)
            r += 1
    else:
        for c in range(ncols):
            if r == nrows:
                break
            i = next((k for k in range(r, nrows) if a[k, c] != 0), None)
            if i is None:
                continue
            if i != r:
                a[[r, i]] = a[[i, r]]
            a[r] = a[r] * (Fraction(1) / a[r, c])
            for k in range(nrows):
                if k != r and a[k, c] != 0:
                    a[k] = a[k] - a[k, c] * a[r]
            pivots.append(c)
            r += 1
    return Matrix(field, a), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel(m: Matrix) -> Subspace:
    """Basis of the right null space, one column per free variable."""
    field = m.field
    R, pivots, rk = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = field.empty(m.cols, len(free))
    for j, fc in enumerate(free):
        basis[fc, j] = field.one()
        for i, pc in enumerate(pivots):
            basis[pc, j] = field.neg(R.data[i, fc])
    return Subspace(m.cols, Matrix(field, basis))


def image(m: Matrix) -> Subspace:
    """Column space basis: the pivot columns of m itself."""
    _, pivots, _ = rref(m)
    if not pivots:
        return Subspace(m.rows, Matrix.zeros(m.field, m.rows, 0))
    cols = [m.column_vector(c) for c in pivots]
    return Subspace(m.rows, Matrix.hstack(m.field, cols))


def cokernel_projection(m: Matrix) -> Matrix:
    """A full-rank map k^rows -> k^(rows - rank m) annihilating im(m).

    Rows are a basis of the left null space of m.
    """
    ker = kernel(m.transpose())
    return ker.basis.transpose()


def subspace_ops(m: Matrix) -> dict:
    return {
        "kernel": kernel(m),
        "image": image(m),
        "cokernel_projection": cokernel_projection(m),
    }


def solve_linear(m: Matrix, b: Matrix) -> Matrix | None:
    """One exact solution of m @ x = b, or None when the system is inconsistent.

    b may have several columns; all are solved simultaneously.
    """
    field = m.field
    if b.rows != m.rows:
        raise ValueError(f"shape mismatch: {m.shape} x = {b.shape}")
    aug = Matrix.hstack(field, [m, b])
    R, pivots, rk = rref(aug)
    if any(c >= m.cols for c in pivots):
        return None
    x = field.empty(m.cols, b.cols)
    for i, pc in enumerate(pivots):
        x[pc, :] = R.data[i, m.cols:]
    return Matrix(field, x)


def solve_with_kernel(m: Matrix, b: Matrix) -> tuple[Matrix, Subspace] | None:
    sol = solve_linear(m, b)
    if sol is None:
        return None
    return sol, kernel(m)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product, realising tensor products of linear maps."""
    field = a.field
    out = field.empty(a.rows * b.rows, a.cols * b.cols)
    if a.data.size and b.data.size:
        if field.is_prime_field:
            out = np.kron(a.data, b.data) % field.p
        else:
            for i in range(a.rows):
                for j in range(a.cols):
                    out[i * b.rows:(i + 1) * b.rows, j * b.cols:(j + 1) * b.cols] = \
                        a.data[i, j] * b.data
    return Matrix(field, out)


def kron_dsum(a: Matrix, b: Matrix, mode: str) -> Matrix:
    if mode == "Tensor":
        return kron(a, b)
    if mode == "DirectSum":
        return Matrix.block_diag(a.field, [a, b])
    raise ValueError(f"unknown mode {mode!r}")


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces of the same ambient space."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    field = a.basis.field
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.ambient_dim, Matrix.zeros(field, a.ambient_dim, 0))
    stacked = Matrix.hstack(field, [a.basis, b.basis])
    ker = kernel(stacked)
    cols = []
    for j in range(ker.dim):
        coeff = Matrix(field, ker.basis.data[:a.dim, j:j + 1])
        cols.append(a.basis @ coeff)
    if not cols:
        return Subspace(a.ambient_dim, Matrix.zeros(field, a.ambient_dim, 0))
    span = Matrix.hstack(field, cols)
    return image(span)


def sum_spaces(ambient_dim: int, field: FieldSpec, spaces: list[Subspace]) -> Subspace:
    mats = [s.basis for s in spaces if s.dim > 0]
    if not mats:
        return Subspace(ambient_dim, Matrix.zeros(field, ambient_dim, 0))
    return image(Matrix.hstack(field, mats))
