"""Finite-dimensional k-algebras and their finite-dimensional left modules.

An algebra is given by structure constants; a module by one action matrix
per algebra basis element.  Hom spaces, theta-precovers and relative
exactness of short sequences all reduce to linear solves.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import NotExact
from .fields import FieldSpec
from .linalg import Matrix, image, kernel, rank, rref, solve_linear


class Algebra:
    """Associative unital k-algebra by structure constants.

    mult[i][j] is the coordinate vector of (e_i * e_j); unit is the
    coordinate vector of 1.
    """

    def __init__(self, field: FieldSpec, dim: int, mult, unit, labels=None):
        self.field = field
        self.dim = dim
        self.labels = list(labels) if labels else [f"e{i}" for i in range(dim)]
        m = np.empty((dim, dim, dim), dtype=field.dtype)
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    m[i, j, k] = field.coerce(mult[i][j][k])
        self.mult = m
        self.unit = Matrix.column(field, list(unit))
        self._regular = None

    def multiply_coords(self, a: Matrix, b: Matrix) -> Matrix:
        out = self.field.empty(self.dim, 1)
        for i in range(self.dim):
            ai = a.data[i, 0]
            if ai == self.field.zero():
                continue
            for j in range(self.dim):
                bj = b.data[j, 0]
                if bj == self.field.zero():
                    continue
                out[:, 0] = self.field.normalize(out[:, 0] + ai * bj * self.mult[i, j, :])
        return Matrix(self.field, out)

    def basis_vector(self, i: int) -> Matrix:
        v = self.field.empty(self.dim, 1)
        v[i, 0] = self.field.one()
        return Matrix(self.field, v)

    def check_associative_unital(self) -> tuple[bool, tuple | None]:
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    ei, ej, ek = (self.basis_vector(t) for t in (i, j, k))
                    lhs = self.multiply_coords(self.multiply_coords(ei, ej), ek)
                    rhs = self.multiply_coords(ei, self.multiply_coords(ej, ek))
                    if lhs != rhs:
                        return False, ("assoc", i, j, k)
        for i in range(self.dim):
            ei = self.basis_vector(i)
            if self.multiply_coords(self.unit, ei) != ei:
                return False, ("left-unit", i)
            if self.multiply_coords(ei, self.unit) != ei:
                return False, ("right-unit", i)
        return True, None

    def opposite(self) -> "Algebra":
        m = np.empty_like(self.mult)
        for i in range(self.dim):
            for j in range(self.dim):
                m[i, j, :] = self.mult[j, i, :]
        return Algebra(self.field, self.dim,
                       m.tolist(), [self.unit.entry(i, 0) for i in range(self.dim)],
                       labels=self.labels)

    def regular_module(self) -> "AModule":
        """A as a left module over itself: action(e_i) = left multiplication."""
        if self._regular is None:
            actions = []
            for i in range(self.dim):
                m = self.field.empty(self.dim, self.dim)
                for j in range(self.dim):
                    m[:, j] = self.mult[i, j, :]
                actions.append(Matrix(self.field, m))
            self._regular = AModule(self, self.dim, actions, name="A")
        return self._regular

    def __repr__(self):
        return f"Algebra(dim={self.dim}, labels={self.labels})"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "labels": self.labels,
            "mult": [[[self.field.scalar_str(self.mult[i, j, k]) for k in range(self.dim)]
                      for j in range(self.dim)] for i in range(self.dim)],
            "unit": [self.field.scalar_str(self.unit.entry(i, 0)) for i in range(self.dim)],
        }

    @staticmethod
    def from_json(field: FieldSpec, d: dict) -> "Algebra":
        return Algebra(field, d["dim"], d["mult"], d["unit"], d.get("labels"))


class AModule:
    """Finite-dimensional left module: one dim x dim action matrix per
    algebra basis element."""

    def __init__(self, algebra: Algebra, dim: int, action: list[Matrix], name: str = ""):
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)
        self.name = name
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def act_coords(self, a: Matrix) -> Matrix:
        """Action matrix of the algebra element with coordinates a."""
        out = self.field.empty(self.dim, self.dim)
        for i in range(self.algebra.dim):
            c = a.data[i, 0]
            if c != self.field.zero():
                out = self.field.normalize(out + c * self.action[i].data)
        return Matrix(self.field, out)

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        return f"AModule({self.name or '?'}, dim={self.dim})"

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "action": {self.algebra.labels[i]:
                           [[self.field.scalar_str(x) for x in row]
                            for row in self.action[i].tolist()]
                           for i in range(self.algebra.dim)}}

    @staticmethod
    def from_json(algebra: Algebra, d: dict, name: str = "") -> "AModule":
        dim = d["dim"]
        action = []
        for i in range(algebra.dim):
            rows = d["action"][algebra.labels[i]]
            action.append(Matrix.from_rows(algebra.field, rows) if dim else
                          Matrix.zeros(algebra.field, 0, 0))
        return AModule(algebra, dim, action, name=name)


def zero_module(algebra: Algebra) -> AModule:
    return AModule(algebra, 0, [Matrix.zeros(algebra.field, 0, 0)] * algebra.dim,
                   name="0")


@dataclass
class AModMap:
    source: AModule
    target: AModule
    matrix: Matrix

    def is_a_linear(self) -> bool:
        for i in range(self.source.algebra.dim):
            if self.matrix @ self.source.action[i] != self.target.action[i] @ self.matrix:
                return False
        return True

    def compose(self, other: "AModMap") -> "AModMap":
        """self o other."""
        return AModMap(other.source, self.target, self.matrix @ other.matrix)


@dataclass
class ThetaSet:
    """Finite list of modules defining a theta-exact structure."""

    modules: list[AModule]

    def __post_init__(self):
        if not self.modules:
            raise ValueError("theta set must be nonempty")


def validate_algebra_module(A: Algebra, M: AModule) -> dict:
    """Unital-representation check, with a witness pair on failure."""
    field = A.field
    report = {"ok": True, "witness": None}
    if M.act_coords(A.unit) != Matrix.identity(field, M.dim):
        return {"ok": False, "witness": ("unit",)}
    for i in range(A.dim):
        for j in range(A.dim):
            prod = A.multiply_coords(A.basis_vector(i), A.basis_vector(j))
            lhs = M.action[i] @ M.action[j]
            if lhs != M.act_coords(prod):
                return {"ok": False, "witness": (A.labels[i], A.labels[j])}
    return report


def hom_A(M: AModule, N: AModule) -> list[Matrix]:
    """Basis of Hom_A(M, N): solutions of the intertwining constraints."""
    field = M.field
    if M.algebra.dim != N.algebra.dim or M.field != N.field:
        raise ValueError("modules over incompatible algebras")
    if M.dim == 0 or N.dim == 0:
        return []
    n_unknowns = N.dim * M.dim  # phi[i,j] at index i*M.dim + j
    rows = []
    for t in range(M.algebra.dim):
        aM, aN = M.action[t], N.action[t]
        # phi @ aM - aN @ phi = 0
        for i in range(N.dim):
            for j in range(M.dim):
                row = field.empty(1, n_unknowns)[0]
                for l in range(M.dim):
                    row[i * M.dim + l] = field.normalize(row[i * M.dim + l] + aM.data[l, j])
                for l in range(N.dim):
                    row[l * M.dim + j] = field.normalize(row[l * M.dim + j] - aN.data[i, l])
                rows.append(row)
    if rows:
        sys = Matrix(field, np.array(rows, dtype=field.dtype))
        ker = kernel(sys)
    else:
        ker = kernel(Matrix.zeros(field, 1, n_unknowns))
    out = []
    for c in range(ker.dim):
        v = ker.basis.data[:, c]
        out.append(Matrix(field, v.reshape(N.dim, M.dim)))
    return out


def hom_A_dim(M: AModule, N: AModule) -> int:
    return len(hom_A(M, N))


def direct_sum(mods: list[AModule]) -> tuple[AModule, list[Matrix], list[Matrix]]:
    """Direct sum with inclusion and projection matrices."""
    if not mods:
        raise ValueError("empty direct sum; use zero_module")
    algebra = mods[0].algebra
    field = algebra.field
    total = sum(m.dim for m in mods)
    action = []
    for i in range(algebra.dim):
        action.append(Matrix.block_diag(field, [m.action[i] for m in mods]))
    out = AModule(algebra, total, action,
                  name="(" + "+".join(m.name or "?" for m in mods) + ")")
    incs, projs = [], []
    offset = 0
    for m in mods:
        inc = field.empty(total, m.dim)
        proj = field.empty(m.dim, total)
        for j in range(m.dim):
            inc[offset + j, j] = field.one()
            proj[j, offset + j] = field.one()
        incs.append(Matrix(field, inc))
        projs.append(Matrix(field, proj))
        offset += m.dim
    return out, incs, projs


def tensor_k(M: AModule, vdim: int) -> AModule:
    """M tensored with a vdim-dimensional k-space (basis order: m_i x v_j)."""
    field = M.field
    idv = Matrix.identity(field, vdim)
    from .linalg import kron
    action = [kron(M.action[i], idv) for i in range(M.algebra.dim)]
    return AModule(M.algebra, M.dim * vdim, action, name=f"{M.name}^k{vdim}")


def dual(M: AModule) -> AModule:
    """Hom_k(M, k) as a left module over the opposite algebra (transposed
    actions).  For self-opposite algebras this is the usual k-dual."""
    Aop = M.algebra.opposite()
    action = [M.action[i].transpose() for i in range(M.algebra.dim)]
    return AModule(Aop, M.dim, action, name=f"D({M.name})")


def submodule(M: AModule, basis: Matrix, name: str = "") -> tuple[AModule, Matrix]:
    """Submodule spanned by the columns of `basis` (must be action-stable).
    Returns (module, inclusion matrix)."""
    field = M.field
    action = []
    for i in range(M.algebra.dim):
        moved = M.action[i] @ basis
        coords = solve_linear(basis, moved)
        if coords is None:
            raise ValueError("basis does not span an action-stable subspace")
        action.append(coords)
    return AModule(M.algebra, basis.cols, action, name=name), basis


def quotient_module(M: AModule, proj: Matrix, name: str = "") -> AModule:
    """Quotient along a full-rank projection with proj-stable kernel."""
    field = M.field
    # section: right inverse of proj
    sec = solve_linear(proj, Matrix.identity(field, proj.rows))
    if sec is None:
        raise ValueError("projection is not surjective")
    action = [proj @ M.action[i] @ sec for i in range(M.algebra.dim)]
    return AModule(M.algebra, proj.rows, action, name=name)


# ---------------------------------------------------------------------------
# theta machinery
# ---------------------------------------------------------------------------

def theta_precover(M: AModule, theta: ThetaSet) -> AModMap:
    """The canonical evaluation deflation onto M.

    One summand T per basis element of Hom_A(T, M) for each T in theta,
    plus just enough free copies of A to cover the cokernel of the
    evaluation, so the result is surjective (hence a deflation).
    """
    algebra = M.algebra
    field = algebra.field
    summands: list[AModule] = []
    columns: list[Matrix] = []
    for T in theta.modules:
        for f in hom_A(T, M):
            summands.append(T)
            columns.append(f)
    ev_cols = [c for c in columns]
    if ev_cols:
        ev = Matrix.hstack(field, ev_cols)
        covered = rank(ev)
    else:
        covered = 0
    if covered < M.dim:
        # free completion A^{dim M}: the j-th copy sends 1 to the j-th basis
        # vector, so a |-> action_M(a) e_j columnwise over the algebra basis
        A = algebra.regular_module()
        for j in range(M.dim):
            mat = field.empty(M.dim, A.dim)
            ej = field.empty(M.dim, 1)
            ej[j, 0] = field.one()
            for i in range(algebra.dim):
                mat[:, i] = (M.action[i] @ Matrix(field, ej)).data[:, 0]
            summands.append(A)
            columns.append(Matrix(field, mat))
    if not summands:
        return AModMap(zero_module(algebra), M, Matrix.zeros(field, M.dim, 0))
    total, incs, projs = direct_sum(summands)
    mat = Matrix.hstack(field, columns)
    return AModMap(total, M, mat)


def is_surjective(m: Matrix) -> bool:
    return rank(m) == m.rows


def map_lifts_through(f: Matrix, g: Matrix) -> bool:
    """Does f factor as g @ h for some h (as plain matrices)?"""
    return solve_linear(g, f) is not None


def is_theta_exact_seq(iota: AModMap, pi: AModMap, theta: ThetaSet) -> bool:
    """Is 0 -> M' -> M -> M'' -> 0 a conflation of the theta-exact structure?

    Requires the sequence to be exact in Mod A (else NotExact); then tests
    that Hom_A(T, M) -> Hom_A(T, M'') is surjective for every T in theta.
    """
    Mp, M, Mpp = iota.source, iota.target, pi.target
    field = M.field
    if pi.source is not M and pi.source.dim != M.dim:
        raise ValueError("maps not composable")
    comp = pi.matrix @ iota.matrix
    exact = (comp.is_zero()
             and rank(iota.matrix) == Mp.dim
             and rank(pi.matrix) == Mpp.dim
             and Mp.dim + Mpp.dim == M.dim)
    if not exact:
        raise NotExact("sequence is not exact in Mod A")
    for T in theta.modules:
        for f in hom_A(T, Mpp):
            # lift f through pi as an A-linear map: solve in the hom space
            lifted = _lift_hom(T, pi, f)
            if lifted is None:
                return False
    return True


def _lift_hom(T: AModule, pi: AModMap, f: Matrix) -> Matrix | None:
    """Find A-linear h: T -> source(pi) with pi o h = f."""
    field = T.field
    basis = hom_A(T, pi.source)
    if not basis:
        return None if not f.is_zero() else Matrix.zeros(field, pi.source.dim, T.dim)
    cols = [ (pi.matrix @ b) for b in basis ]
    sys = Matrix.hstack(field, [Matrix(field, c.data.reshape(-1, 1)) for c in cols])
    rhs = Matrix(field, f.data.reshape(-1, 1))
    sol = solve_linear(sys, rhs)
    if sol is None:
        return None
    acc = field.empty(pi.source.dim, T.dim)
    for i, b in enumerate(basis):
        c = sol.entry(i, 0)
        if c != field.zero():
            acc = field.normalize(acc + c * b.data)
    return Matrix(field, acc)


def is_module_relative_projective(M: AModule, theta: ThetaSet | None) -> bool:
    """Projectivity in the theta-exact structure: the canonical theta-precover
    deflation splits.  theta=None encodes the split structure (everything
    is projective at module level)."""
    if theta is None:
        return True
    if M.dim == 0:
        return True
    cover = theta_precover(M, theta)
    # a section s with cover o s = id, A-linearly
    sec = _lift_hom(M, cover, Matrix.identity(M.field, M.dim))
    return sec is not None


def module_iso(M: AModule, N: AModule, seed: int = 0) -> Matrix | None:
    """An explicit A-linear isomorphism M -> N, if one exists."""
    import random as _random
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return Matrix.zeros(M.field, 0, 0)
    basis = hom_A(M, N)
    if not basis:
        return None
    for b in basis:
        if rank(b) == M.dim:
            return b
    rng = _random.Random(seed)
    field = M.field
    for _ in range(64):
        acc = field.empty(M.dim, M.dim)
        for b in basis:
            acc = field.normalize(acc + field.coerce(rng.randrange(0, 101)) * b.data)
        cand = Matrix(field, acc)
        if rank(cand) == M.dim:
            return cand
    return None


# ---------------------------------------------------------------------------
# standard algebras
# ---------------------------------------------------------------------------

def field_algebra(field: FieldSpec) -> Algebra:
    return Algebra(field, 1, [[[1]]], [1], labels=["1"])


def dual_numbers(field: FieldSpec) -> Algebra:
    """k[x]/(x^2), basis {1, x}."""
    mult = [[[1, 0], [0, 1]],
            [[0, 1], [0, 0]]]
    return Algebra(field, 2, mult, [1, 0], labels=["1", "x"])


def path_algebra_a2(field: FieldSpec) -> Algebra:
    """Path algebra of 1 -> 2, basis {e1, e2, a} with a = path from 1 to 2.

    e1 e1 = e1, e2 e2 = e2, a e1 = a, e2 a = a, everything else zero.
    Hereditary with global dimension 1.
    """
    z = [0, 0, 0]
    mult = [
        # e1 * -
        [[1, 0, 0], z, z],
        # e2 * -
        [z, [0, 1, 0], [0, 0, 1]],
        # a * -
        [[0, 0, 1], z, z],
    ]
    return Algebra(field, 3, mult, [1, 1, 0], labels=["e1", "e2", "a"])


def simple_module_dual_numbers(A: Algebra) -> AModule:
    """k = A/(x) for the dual numbers."""
    field = A.field
    return AModule(A, 1, [Matrix.identity(field, 1), Matrix.zeros(field, 1, 1)],
                   name="k")


def a2_projectives(A: Algebra) -> tuple[AModule, AModule]:
    """The indecomposable projectives P1 = A e1 (dim 2: {e1, a}) and
    P2 = A e2 (dim 1: {e2}) over the A2 path algebra."""
    field = A.field
    # P1 basis {e1, a}: e1 acts as diag(1,0); e2 as diag(0,1); a maps e1 -> a
    p1 = AModule(A, 2, [
        Matrix.from_rows(field, [[1, 0], [0, 0]]),
        Matrix.from_rows(field, [[0, 0], [0, 1]]),
        Matrix.from_rows(field, [[0, 0], [1, 0]]),
    ], name="P1")
    p2 = AModule(A, 1, [
        Matrix.zeros(field, 1, 1),
        Matrix.identity(field, 1),
        Matrix.zeros(field, 1, 1),
    ], name="P2")
    return p1, p2
