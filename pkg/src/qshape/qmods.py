"""Q-shaped A-modules: k-linear functors from a shape window to Mod A.

A QMod stores per-object modules (sparsely, by support) and one matrix per
arrow.  Natural transformation spaces are computed as kernels of explicit
constraint systems and kept coordinatised (NatSpace) so that cohomology can
act on them; kernels, cokernels and images are computed objectwise with
arrow actions induced by the unique fill-in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebras import Algebra, AModule, field_algebra, validate_algebra_module, zero_module
from .errors import ObjectOutsideWindow, ShapeMismatch, WindowInsufficient
from .fields import FieldSpec
from .linalg import (Matrix, cokernel_projection, image as im_space, kernel,
                     rank, solve_linear)
from .shapes import KCategory


class QMod:
    """A finitely supported functor from the shape into Mod A."""

    def __init__(self, shape: KCategory, algebra: Algebra,
                 values: dict[str, AModule], arrow_action: dict[str, Matrix],
                 name: str = ""):
        self.shape = shape
        self.algebra = algebra
        self.values = {q: m for q, m in values.items() if m.dim > 0}
        for q in self.values:
            if q not in shape._obj_index:
                raise ObjectOutsideWindow(f"object {q} not in window")
        self.arrow_action = {}
        for name_, mat in arrow_action.items():
            a = shape.arrows_by_name[name_]
            if self.dim(a.src) and self.dim(a.dst) and not mat.is_zero():
                self.arrow_action[name_] = mat
        self.name = name
        self._morphism_cache: dict = {}

    @property
    def field(self) -> FieldSpec:
        return self.shape.field

    def dim(self, q: str) -> int:
        m = self.values.get(q)
        return m.dim if m else 0

    def value(self, q: str) -> AModule:
        return self.values.get(q) or zero_module(self.algebra)

    @property
    def support(self) -> list[str]:
        return [q for q in self.shape.objects if self.dim(q) > 0]

    def is_zero(self) -> bool:
        return not self.values

    def total_dim(self) -> int:
        return sum(m.dim for m in self.values.values())

    def arrow_matrix(self, name: str) -> Matrix:
        a = self.shape.arrows_by_name[name]
        got = self.arrow_action.get(name)
        if got is not None:
            return got
        return Matrix.zeros(self.field, self.dim(a.dst), self.dim(a.src))

    def path_matrix(self, path: tuple, src: str) -> Matrix:
        m = Matrix.identity(self.field, self.dim(src))
        at = src
        for name in path:
            a = self.shape.arrows_by_name[name]
            m = self.arrow_matrix(name) @ m
            at = a.dst
        return m

    def morphism_action(self, p: str, q: str, i: int) -> Matrix:
        """Action matrix X(b): X(p) -> X(q) of the i-th hom basis element,
        evaluated as the product of arrow matrices along its path rep."""
        key = (p, q, i)
        if key not in self._morphism_cache:
            path = self.shape.hom_basis[(p, q)][i]
            self._morphism_cache[key] = self.path_matrix(path, p)
        return self._morphism_cache[key]

    def act_coords(self, p: str, q: str, coords: Matrix) -> Matrix:
        out = self.field.empty(self.dim(q), self.dim(p))
        for i in range(coords.rows):
            c = coords.data[i, 0]
            if c != self.field.zero():
                out = self.field.normalize(out + c * self.morphism_action(p, q, i).data)
        return Matrix(self.field, out)

    def __repr__(self):
        dims = {q: self.dim(q) for q in self.support}
        return f"QMod({self.name or '?'}, {dims})"

    def to_json(self, module_names: dict | None = None) -> dict:
        values = {}
        for q, m in self.values.items():
            values[q] = module_names.get(id(m)) if module_names else m.to_json()
        return {"values": values,
                "arrows": {n: [[self.field.scalar_str(x) for x in row]
                               for row in m.tolist()]
                           for n, m in self.arrow_action.items()}}


def zero_qmod(shape: KCategory, algebra: Algebra) -> QMod:
    return QMod(shape, algebra, {}, {}, name="0")


class QModMap:
    """Natural A-linear transformation between QMods, one matrix per object."""

    def __init__(self, source: QMod, target: QMod, components: dict[str, Matrix],
                 name: str = ""):
        self.source = source
        self.target = target
        self.components = {q: m for q, m in components.items()
                           if m.rows > 0 and m.cols > 0 and not m.is_zero()}
        self.name = name

    @property
    def field(self) -> FieldSpec:
        return self.source.field

    def component(self, q: str) -> Matrix:
        got = self.components.get(q)
        if got is not None:
            return got
        return Matrix.zeros(self.field, self.target.dim(q), self.source.dim(q))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components.values())

    def compose(self, other: "QModMap") -> "QModMap":
        """self o other."""
        comps = {}
        for q in other.source.shape.objects:
            if other.source.dim(q) and self.target.dim(q):
                comps[q] = self.component(q) @ other.component(q)
        return QModMap(other.source, self.target, comps)

    def __add__(self, other: "QModMap") -> "QModMap":
        comps = {}
        for q in set(self.components) | set(other.components):
            comps[q] = self.component(q) + other.component(q)
        return QModMap(self.source, self.target, comps)

    def __sub__(self, other: "QModMap") -> "QModMap":
        comps = {}
        for q in set(self.components) | set(other.components):
            comps[q] = self.component(q) - other.component(q)
        return QModMap(self.source, self.target, comps)

    def is_natural_a_linear(self) -> tuple[bool, tuple | None]:
        X, Y = self.source, self.target
        for q in X.support:
            if not Y.dim(q):
                if not self.component(q).is_zero():
                    return False, ("component-shape", q)
                continue
            for i in range(X.algebra.dim):
                lhs = self.component(q) @ X.value(q).action[i]
                rhs = Y.value(q).action[i] @ self.component(q)
                if lhs != rhs:
                    return False, ("a-linear", q, X.algebra.labels[i])
        for a in X.shape.arrows:
            if X.dim(a.src) and Y.dim(a.dst):
                lhs = self.component(a.dst) @ X.arrow_matrix(a.name)
                rhs = Y.arrow_matrix(a.name) @ self.component(a.src)
                if lhs != rhs:
                    return False, ("natural", a.name)
        return True, None


def identity_map(X: QMod) -> QModMap:
    return QModMap(X, X, {q: Matrix.identity(X.field, X.dim(q)) for q in X.support},
                   name="id")


def zero_map(X: QMod, Y: QMod) -> QModMap:
    return QModMap(X, Y, {})


@dataclass
class ShortSeq:
    """Candidate short exact sequence X' -> X -> X''."""

    iota: QModMap
    pi: QModMap


def validate_qmod(X: QMod, check_modules: bool = True) -> dict:
    """Functoriality report: action matrices A-linear, relations vanish."""
    if check_modules:
        for q, m in X.values.items():
            rep = validate_algebra_module(X.algebra, m)
            if not rep["ok"]:
                return {"ok": False, "witness": ("module", q, rep["witness"])}
    for name, mat in X.arrow_action.items():
        a = X.shape.arrows_by_name[name]
        src, dst = X.value(a.src), X.value(a.dst)
        if (mat.rows, mat.cols) != (dst.dim, src.dim):
            return {"ok": False, "witness": ("shape", name)}
        for i in range(X.algebra.dim):
            if mat @ src.action[i] != dst.action[i] @ mat:
                return {"ok": False, "witness": ("a-linear", name, X.algebra.labels[i])}
    for ridx, rel in enumerate(X.shape.presentation.relations):
        u = X.shape.arrows_by_name[rel[0][1][0]].src
        if X.dim(u) == 0:
            continue
        v = X.shape._path_target(rel[0][1])
        acc = X.field.empty(X.dim(v), X.dim(u))
        for coeff, path in rel:
            acc = X.field.normalize(
                acc + X.field.coerce(coeff) * X.path_matrix(path, u).data)
        if np.any(acc != X.field.zero()):
            return {"ok": False, "witness": ("relation", ridx)}
    return {"ok": True, "witness": None}


# ---------------------------------------------------------------------------
# Natural transformation spaces, coordinatised
# ---------------------------------------------------------------------------

class NatSpace:
    """The space of natural transformations X -> Y as the kernel of an
    explicit constraint matrix.

    With a_linear=True the components must also commute with the algebra
    action (Hom in Mod(Q,A)); with a_linear=False only naturality is
    imposed (k-linear Hom, used when the source lives over k) and the
    solution space carries an induced A-module structure from Y.
    """

    def __init__(self, X: QMod, Y: QMod, a_linear: bool = True):
        if X.shape is not Y.shape and not X.shape.same_data(Y.shape):
            raise ShapeMismatch("hom between different shapes")
        self.X, self.Y = X, Y
        self.a_linear = a_linear
        field = X.field
        self.field = field
        self.ps = [q for q in X.shape.objects if X.dim(q) and Y.dim(q)]
        self.offsets = {}
        off = 0
        for q in self.ps:
            self.offsets[q] = off
            off += Y.dim(q) * X.dim(q)
        self.total = off
        rows = []
        if a_linear:
            for q in self.ps:
                dX, dY = X.dim(q), Y.dim(q)
                for t in range(X.algebra.dim):
                    aX = X.value(q).action[t]
                    aY = Y.value(q).action[t]
                    for i in range(dY):
                        for j in range(dX):
                            row = field.empty(1, self.total)[0]
                            base = self.offsets[q]
                            for l in range(dX):
                                row[base + i * dX + l] = field.normalize(
                                    row[base + i * dX + l] + aX.data[l, j])
                            for l in range(dY):
                                row[base + l * dX + j] = field.normalize(
                                    row[base + l * dX + j] - aY.data[i, l])
                            rows.append(row)
        for a in X.shape.arrows:
            p, p2 = a.src, a.dst
            if X.dim(p) == 0 or Y.dim(p2) == 0:
                continue
            Xa = X.arrow_matrix(a.name)
            Ya = Y.arrow_matrix(a.name)
            dXp, dXp2 = X.dim(p), X.dim(p2)
            dYp, dYp2 = Y.dim(p), Y.dim(p2)
            for i in range(dYp2):
                for j in range(dXp):
                    row = field.empty(1, self.total)[0]
                    if p2 in self.offsets:
                        base = self.offsets[p2]
                        for l in range(dXp2):
                            row[base + i * dXp2 + l] = field.normalize(
                                row[base + i * dXp2 + l] + Xa.data[l, j])
                    if p in self.offsets:
                        base = self.offsets[p]
                        for l in range(dYp):
                            row[base + l * dXp + j] = field.normalize(
                                row[base + l * dXp + j] - Ya.data[i, l])
                    if np.any(row != field.zero()):
                        rows.append(row)
        if rows:
            sys = Matrix(field, np.array(rows, dtype=field.dtype))
        else:
            sys = Matrix.zeros(field, 1, self.total)
        self.basis = kernel(sys).basis  # total x dim

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectorize(self, phi: QModMap) -> Matrix:
        v = self.field.empty(self.total, 1)
        for q in self.ps:
            dX = self.X.dim(q)
            comp = phi.component(q)
            base = self.offsets[q]
            for i in range(comp.rows):
                for j in range(dX):
                    v[base + i * dX + j, 0] = comp.data[i, j]
        return Matrix(self.field, v)

    def map_from_vector(self, v: Matrix) -> QModMap:
        comps = {}
        for q in self.ps:
            dX, dY = self.X.dim(q), self.Y.dim(q)
            base = self.offsets[q]
            block = v.data[base:base + dX * dY, 0].reshape(dY, dX)
            comps[q] = Matrix(self.field, block.copy())
        return QModMap(self.X, self.Y, comps)

    def map_from_coords(self, coords: Matrix) -> QModMap:
        return self.map_from_vector(self.basis @ coords)

    def coords_of_map(self, phi: QModMap) -> Matrix | None:
        return solve_linear(self.basis, self.vectorize(phi))

    def basis_maps(self) -> list[QModMap]:
        return [self.map_from_vector(self.basis.column_vector(j))
                for j in range(self.dim)]

    def module_structure(self) -> AModule:
        """The solution space as a module over Y's algebra, acting by
        postcomposition.  Only meaningful when a_linear=False (or the
        algebra is commutative)."""
        A = self.Y.algebra
        field = self.field
        actions = []
        for t in range(A.dim):
            cols = []
            for j in range(self.dim):
                phi = self.map_from_coords(Matrix(field, _unit_col(field, self.dim, j)))
                comps = {q: self.Y.value(q).action[t] @ phi.component(q)
                         for q in self.ps}
                tv = self.vectorize(QModMap(self.X, self.Y, comps))
                c = solve_linear(self.basis, tv)
                if c is None:
                    raise ShapeMismatch("postcomposition left the hom space")
                cols.append(c)
            actions.append(Matrix.hstack(field, cols) if cols
                           else Matrix.zeros(field, 0, 0))
        return AModule(A, self.dim, actions, name="Hom")


def _unit_col(field, n, j):
    v = field.empty(n, 1)
    v[j, 0] = field.one()
    return v


def hom_QA(X: QMod, Y: QMod) -> list[QModMap]:
    """Basis of Hom_{Q,A}(X, Y)."""
    return NatSpace(X, Y, a_linear=True).basis_maps()


def hom_QA_dim(X: QMod, Y: QMod) -> int:
    return NatSpace(X, Y, a_linear=True).dim


# ---------------------------------------------------------------------------
# abelian operations
# ---------------------------------------------------------------------------

def _induce_arrows(shape, algebra, bases: dict[str, Matrix], parent: QMod,
                   mode: str) -> QMod:
    """Sub or quotient functor along objectwise bases/projections."""
    field = parent.field
    values = {}
    for q, b in bases.items():
        d = b.cols if mode == "sub" else b.rows
        if d == 0:
            continue
        if mode == "sub":
            action = []
            for i in range(algebra.dim):
                coords = solve_linear(b, parent.value(q).action[i] @ b)
                if coords is None:
                    raise ValueError("subspace not action-stable")
                action.append(coords)
        else:
            sec = solve_linear(b, Matrix.identity(field, b.rows))
            action = [b @ parent.value(q).action[i] @ sec
                      for i in range(algebra.dim)]
        values[q] = AModule(algebra, d, action)
    arrows = {}
    for a in shape.arrows:
        p, p2 = a.src, a.dst
        if p not in values or p2 not in values:
            continue
        if mode == "sub":
            moved = parent.arrow_matrix(a.name) @ bases[p]
            coords = solve_linear(bases[p2], moved)
            if coords is None:
                raise ValueError("arrow action does not preserve the subfunctor")
            arrows[a.name] = coords
        else:
            sec = solve_linear(bases[p], Matrix.identity(field, bases[p].rows))
            cand = bases[p2] @ parent.arrow_matrix(a.name) @ sec
            if cand @ bases[p] != bases[p2] @ parent.arrow_matrix(a.name):
                raise ValueError("arrow action does not descend to the quotient")
            arrows[a.name] = cand
    return QMod(shape, algebra, values, arrows)


def kernel_qmod(phi: QModMap) -> tuple[QMod, QModMap]:
    X = phi.source
    bases = {}
    for q in X.support:
        bases[q] = kernel(phi.component(q)).basis
    K = _induce_arrows(X.shape, X.algebra, bases, X, "sub")
    incl = QModMap(K, X, {q: bases[q] for q in K.support}, name="ker-incl")
    return K, incl


def image_qmod(phi: QModMap) -> tuple[QMod, QModMap]:
    Y = phi.target
    bases = {}
    for q in Y.shape.objects:
        if phi.source.dim(q) and Y.dim(q):
            bases[q] = im_space(phi.component(q)).basis
    bases = {q: b for q, b in bases.items() if b.cols > 0}
    I = _induce_arrows(Y.shape, Y.algebra, bases, Y, "sub")
    incl = QModMap(I, Y, {q: bases[q] for q in I.support}, name="im-incl")
    return I, incl


def cokernel_qmod(phi: QModMap) -> tuple[QMod, QModMap]:
    Y = phi.target
    projs = {}
    for q in Y.support:
        projs[q] = cokernel_projection(phi.component(q))
    C = _induce_arrows(Y.shape, Y.algebra, projs, Y, "quot")
    proj = QModMap(Y, C, {q: projs[q] for q in C.support}, name="coker-proj")
    return C, proj


def direct_sum_qmod(summands: list[QMod]) -> tuple[QMod, list[QModMap], list[QModMap]]:
    if not summands:
        raise ValueError("empty direct sum; use zero_qmod")
    shape = summands[0].shape
    algebra = summands[0].algebra
    field = summands[0].field
    values = {}
    for q in shape.objects:
        dims = [X.dim(q) for X in summands]
        total = sum(dims)
        if total == 0:
            continue
        action = []
        for i in range(algebra.dim):
            action.append(Matrix.block_diag(field, [
                X.value(q).action[i] if X.dim(q) else Matrix.zeros(field, 0, 0)
                for X in summands]))
        values[q] = AModule(algebra, total, action)
    arrows = {}
    for a in shape.arrows:
        if all(X.dim(a.src) == 0 for X in summands):
            continue
        if all(X.dim(a.dst) == 0 for X in summands):
            continue
        arrows[a.name] = Matrix.block_diag(field, [
            X.arrow_matrix(a.name) for X in summands])
    total_mod = QMod(shape, algebra, values, arrows, name="(+)")
    incs, projs = [], []
    for idx, X in enumerate(summands):
        ic, pc = {}, {}
        for q in X.support:
            before = sum(Y.dim(q) for Y in summands[:idx])
            tot = sum(Y.dim(q) for Y in summands)
            inc = field.empty(tot, X.dim(q))
            prj = field.empty(X.dim(q), tot)
            for j in range(X.dim(q)):
                inc[before + j, j] = field.one()
                prj[j, before + j] = field.one()
            ic[q] = Matrix(field, inc)
            pc[q] = Matrix(field, prj)
        incs.append(QModMap(X, total_mod, ic))
        projs.append(QModMap(total_mod, X, pc))
    return total_mod, incs, projs


def is_short_exact(s: ShortSeq) -> bool:
    Xp, X, Xpp = s.iota.source, s.iota.target, s.pi.target
    if s.pi.source is not X:
        if s.pi.source.support != X.support:
            return False
    comp = s.pi.compose(s.iota)
    if not comp.is_zero():
        return False
    for q in X.shape.objects:
        di, dm, dp = Xp.dim(q), X.dim(q), Xpp.dim(q)
        if di + dp != dm:
            return False
        if di and rank(s.iota.component(q)) != di:
            return False
        if dp and rank(s.pi.component(q)) != dp:
            return False
    return True


def evaluate(X: QMod, q: str) -> AModule:
    if q not in X.shape._obj_index:
        raise ObjectOutsideWindow(f"{q} outside window")
    return X.value(q)


def underlying_k(X: QMod) -> QMod:
    """Forget the algebra action: same k-spaces and arrow matrices over k."""
    kalg = field_algebra(X.field)
    values = {q: AModule(kalg, m.dim, [Matrix.identity(X.field, m.dim)])
              for q, m in X.values.items()}
    return QMod(X.shape, kalg, values, dict(X.arrow_action),
                name=f"{X.name}^forget")


# ---------------------------------------------------------------------------
# tensor over the shape (coend) and right representables
# ---------------------------------------------------------------------------

class TensorSpace:
    """(+)_q R(q) (x) X(q) modulo the arrow relations, coordinatised.

    R lives over the opposite shape (a right module), X over the base
    shape; the result is an A-module through X.  The window is exact for
    honestly finitely supported inputs; boundary-incomplete supports are
    rejected to stay margin-honest.
    """

    def __init__(self, R: QMod, X: QMod):
        C = X.shape
        if not R.shape.same_data(C.opposite()) and not _opposite_of(R.shape, C):
            raise ShapeMismatch("first factor must live over the opposite shape")
        field = X.field
        self.R, self.X = R, X
        self.field = field
        for q in R.support:
            if not C.in_complete(q):
                raise WindowInsufficient(f"right factor supported at boundary object {q}")
        for p in X.support:
            if not C.out_complete(p):
                raise WindowInsufficient(f"left factor supported at boundary object {p}")
        self.qs = [q for q in C.objects if R.dim(q) and X.dim(q)]
        self.offsets = {}
        off = 0
        for q in self.qs:
            self.offsets[q] = off
            off += R.dim(q) * X.dim(q)
        self.ambient = off
        rel_cols = []
        for a in C.arrows:
            p, q = a.src, a.dst
            if R.dim(q) == 0 or X.dim(p) == 0:
                continue
            Rmat = R.arrow_matrix(a.name)  # R(q) -> R(p) over the opposite shape
            Xmat = X.arrow_matrix(a.name)  # X(p) -> X(q)
            for r in range(R.dim(q)):
                for x in range(X.dim(p)):
                    col = field.empty(self.ambient, 1)
                    if p in self.offsets:
                        base = self.offsets[p]
                        for rp in range(R.dim(p)):
                            c = Rmat.data[rp, r]
                            if c != field.zero():
                                col[base + rp * X.dim(p) + x, 0] = field.normalize(
                                    col[base + rp * X.dim(p) + x, 0] + c)
                    if q in self.offsets:
                        base = self.offsets[q]
                        for xq in range(X.dim(q)):
                            c = Xmat.data[xq, x]
                            if c != field.zero():
                                col[base + r * X.dim(q) + xq, 0] = field.normalize(
                                    col[base + r * X.dim(q) + xq, 0] - c)
                    if np.any(col != field.zero()):
                        rel_cols.append(Matrix(field, col))
        if rel_cols:
            rels = Matrix.hstack(field, rel_cols)
        else:
            rels = Matrix.zeros(field, self.ambient, 0)
        self.relations = rels
        self.proj = cokernel_projection(rels)  # quotient coords
        self.section = solve_linear(self.proj, Matrix.identity(field, self.proj.rows)) \
            if self.proj.rows else Matrix.zeros(field, self.ambient, 0)

    @property
    def dim(self) -> int:
        return self.proj.rows

    def module(self) -> AModule:
        A = self.X.algebra
        field = self.field
        actions = []
        for t in range(A.dim):
            blocks = []
            for q in self.qs:
                from .linalg import kron
                blocks.append(kron(Matrix.identity(field, self.R.dim(q)),
                                   self.X.value(q).action[t]))
            amb = Matrix.block_diag(field, blocks) if blocks else \
                Matrix.zeros(field, 0, 0)
            actions.append(self.proj @ amb @ self.section if self.dim else
                           Matrix.zeros(field, 0, 0))
        return AModule(A, self.dim, actions, name="tensor")

    def pure_tensor_coords(self, q: str, r: int, x: int) -> Matrix:
        v = self.field.empty(self.ambient, 1)
        if q in self.offsets:
            v[self.offsets[q] + r * self.X.dim(q) + x, 0] = self.field.one()
        return self.proj @ Matrix(self.field, v)


def _opposite_of(shape_a: KCategory, shape_b: KCategory) -> bool:
    if shape_a.objects != shape_b.objects:
        return False
    for p in shape_a.objects:
        for q in shape_a.objects:
            if shape_a.dim(p, q) != shape_b.dim(q, p):
                return False
    return True


def tensor_over_Q(R: QMod, X: QMod) -> AModule:
    """The A-module R (x)_Q X; R is a right module (over the opposite shape)."""
    return TensorSpace(R, X).module()


def representable_right(C: KCategory, Cop: KCategory, q: str) -> QMod:
    """Q(-, q) as a right module, i.e. a QMod over the opposite shape."""
    C.require_margin([q], 1, "in", what="right representable")
    field = C.field
    kalg = field_algebra(field)
    values = {}
    for p in C.objects:
        d = C.dim(p, q)
        if d:
            values[p] = AModule(kalg, d, [Matrix.identity(field, d)])
    arrows = {}
    for a in C.arrows:
        # over the opposite shape the arrow runs dst -> src; its action is
        # precomposition Q(dst, q) -> Q(src, q)
        if C.dim(a.dst, q) and C.dim(a.src, q):
            arrows[a.name] = C.precompose_matrix(q, a.name)
    return QMod(Cop, kalg, values, arrows, name=f"Q(-,{q})")
