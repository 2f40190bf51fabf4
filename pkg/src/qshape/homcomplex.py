"""Coordinate-level cochain complexes and subquotients.

A CoordComplex records, per degree, the dimension of a coordinate space and
the differential matrices between consecutive degrees.  Cohomology is a
Subquotient: cycle basis, boundary coordinates inside it, and a chosen
complement giving explicit representatives and projections, so induced maps
on cohomology stay computable matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldSpec
from .linalg import Matrix, image, kernel, rank, solve_linear


class Subquotient:
    """H = Z/B inside an ambient coordinate space."""

    def __init__(self, field: FieldSpec, ambient_dim: int, cycles: Matrix,
                 boundary_cols: Matrix):
        self.field = field
        self.ambient_dim = ambient_dim
        self.cycles = cycles  # ambient x z
        z = cycles.cols
        if boundary_cols.cols:
            w = solve_linear(cycles, boundary_cols)
            if w is None:
                raise ValueError("boundaries do not lie inside the cycles")
            self.b_in_z = image(w).basis  # z x b
        else:
            self.b_in_z = Matrix.zeros(field, z, 0)
        b = self.b_in_z.cols
        # greedily complete the boundary space to all of Z with coordinate vectors
        chosen: list[int] = []
        current = self.b_in_z
        r = b
        for j in range(z):
            if r == z:
                break
            e = field.empty(z, 1)
            e[j, 0] = field.one()
            cand = Matrix.hstack(field, [current, Matrix(field, e)])
            if rank(cand) > r:
                chosen.append(j)
                current = cand
                r += 1
        self.chosen = chosen
        self.dim = z - b
        if self.dim:
            T = current  # z x z invertible: [boundaries | chosen]
            Tinv = solve_linear(T, Matrix.identity(field, z))
            self._pi = Matrix(field, Tinv.data[b:, :].copy())  # h x z
        else:
            self._pi = Matrix.zeros(field, 0, z)

    def project(self, ambient_vec: Matrix) -> Matrix:
        """H-coordinates of a cycle given in ambient coordinates."""
        c = solve_linear(self.cycles, ambient_vec)
        if c is None:
            raise ValueError("vector is not a cycle")
        return self._pi @ c

    def representative(self, j: int) -> Matrix:
        """Ambient-coordinate representative of the j-th H-basis vector."""
        e = self.field.empty(self.cycles.cols, 1)
        e[self.chosen[j], 0] = self.field.one()
        return self.cycles @ Matrix(self.field, e)

    def induced_map(self, target: "Subquotient", ambient_map: Matrix) -> Matrix:
        """Matrix of the map induced on cohomology by a chain-level map of
        ambient coordinates (source degree = self, target degree = target)."""
        cols = []
        for j in range(self.dim):
            v = ambient_map @ self.representative(j)
            cols.append(target.project(v))
        if not cols:
            return Matrix.zeros(self.field, target.dim, 0)
        return Matrix.hstack(self.field, cols)


@dataclass
class CoordComplex:
    """degrees: degree -> coordinate dimension; diffs: degree j -> matrix of
    d^j : C^j -> C^{j+1} (shape dim_{j+1} x dim_j)."""

    field: FieldSpec
    dims: dict[int, int]
    diffs: dict[int, Matrix]

    def dim(self, j: int) -> int:
        return self.dims.get(j, 0)

    def diff(self, j: int) -> Matrix:
        got = self.diffs.get(j)
        if got is not None:
            return got
        return Matrix.zeros(self.field, self.dim(j + 1), self.dim(j))

    def check_complex(self) -> bool:
        for j in sorted(self.dims):
            if (self.diff(j + 0) is not None and self.dim(j) and self.dim(j + 2)):
                if not (self.diff(j + 1) @ self.diff(j)).is_zero():
                    return False
        return True

    def cohomology_at(self, m: int) -> Subquotient:
        n = self.dim(m)
        if n == 0:
            return Subquotient(self.field, 0,
                               Matrix.zeros(self.field, 0, 0),
                               Matrix.zeros(self.field, 0, 0))
        z = kernel(self.diff(m)).basis
        b = self.diff(m - 1)
        bcols = b if b.cols else Matrix.zeros(self.field, n, 0)
        return Subquotient(self.field, n, z, bcols)
