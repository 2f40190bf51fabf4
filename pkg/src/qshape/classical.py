"""Independent ground-truth engine: chain complexes and N-complexes of
modules, their cohomology, amplitude cohomology, quasi-isomorphisms and
chain-homotopy classes, plus translators to and from shape modules on
generated mesh windows.

Everything here is implemented directly from the textbook definitions on
top of the exact linear algebra layer; none of the engine's resolution or
cohomology machinery is reused, so agreement between the two is a real
check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebras import AModule, Algebra, hom_A, zero_module
from .errors import ShapeMismatch
from .fields import FieldSpec
from .linalg import Matrix, kernel, rank, rref, solve_linear
from .qmods import QMod, QModMap
from .shapes import KCategory


class ComplexA:
    """A bounded (N-)complex of modules: terms by integer degree, with
    differentials d^n: X^n -> X^{n+1}; any N consecutive compose to zero."""

    def __init__(self, algebra: Algebra, terms: dict[int, AModule],
                 diffs: dict[int, Matrix], N: int = 2):
        self.algebra = algebra
        self.N = N
        self.terms = {n: m for n, m in terms.items() if m.dim > 0}
        self.diffs = {}
        for n, d in diffs.items():
            if self.dim(n) and self.dim(n + 1) and not d.is_zero():
                self.diffs[n] = d

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def dim(self, n: int) -> int:
        m = self.terms.get(n)
        return m.dim if m else 0

    def term(self, n: int) -> AModule:
        return self.terms.get(n) or zero_module(self.algebra)

    def diff(self, n: int) -> Matrix:
        got = self.diffs.get(n)
        if got is not None:
            return got
        return Matrix.zeros(self.field, self.dim(n + 1), self.dim(n))

    @property
    def support(self) -> list[int]:
        return sorted(self.terms)

    def is_valid(self) -> bool:
        for n in self.support:
            for i in range(self.algebra.dim):
                d = self.diff(n)
                if d @ self.term(n).action[i] != self.term(n + 1).action[i] @ d:
                    return False
        for n in self.support:
            comp = Matrix.identity(self.field, self.dim(n))
            for step in range(self.N):
                comp = self.diff(n + step) @ comp
            if not comp.is_zero():
                return False
        return True

    def composite(self, n: int, steps: int) -> Matrix:
        out = Matrix.identity(self.field, self.dim(n))
        for s in range(steps):
            out = self.diff(n + s) @ out
        return out


# -- a small self-contained subquotient ------------------------------------

def _complement_reps(field, Z: Matrix, B_in_Z: Matrix) -> list[Matrix]:
    """Columns of Z completing the span of B_in_Z coordinate-wise."""
    reps = []
    current = B_in_Z
    r = rank(current)
    for j in range(Z.cols):
        e = field.empty(Z.cols, 1)
        e[j, 0] = field.one()
        cand = Matrix.hstack(field, [current, Matrix(field, e)])
        if rank(cand) > r:
            reps.append(Z @ Matrix(field, e))
            current = cand
            r += 1
    return reps


def _subquotient_module(M: AModule, Z: Matrix, Bcols: Matrix) -> AModule:
    """(span Z)/(span Bcols) as a module, Bcols given in ambient coords."""
    field = M.field
    if Z.cols == 0:
        return zero_module(M.algebra)
    B_in_Z = solve_linear(Z, Bcols) if Bcols.cols else \
        Matrix.zeros(field, Z.cols, 0)
    if B_in_Z is None:
        raise ValueError("boundaries are not cycles")
    reps = _complement_reps(field, Z, B_in_Z)
    h = len(reps)
    if h == 0:
        return zero_module(M.algebra)
    basis = Matrix.hstack(field, reps)
    # express the action on representatives, modulo boundaries
    glue = Matrix.hstack(field, [basis, Bcols]) if Bcols.cols else basis
    action = []
    for i in range(M.algebra.dim):
        moved = M.action[i] @ basis
        sol = solve_linear(glue, moved)
        if sol is None:
            raise ValueError("subquotient is not action-stable")
        action.append(Matrix(field, sol.data[:h, :].copy()))
    return AModule(M.algebra, h, action, name="H")


def cohomology_classical(C: ComplexA, m: int) -> AModule:
    """ker d^m / im d^{m-1} with its induced module structure."""
    if C.dim(m) == 0:
        return zero_module(C.algebra)
    Z = kernel(C.diff(m)).basis
    B = C.diff(m - 1)
    return _subquotient_module(C.term(m), Z,
                               B if B.cols else Matrix.zeros(C.field, C.dim(m), 0))


def amplitude(C: ComplexA, r: int, m: int) -> AModule:
    """Amplitude cohomology of an N-complex: ker of r consecutive
    differentials from degree m, modulo the image of N-r into it."""
    if not (1 <= r <= C.N - 1):
        raise ValueError("amplitude index out of range")
    if C.dim(m) == 0:
        return zero_module(C.algebra)
    Z = kernel(C.composite(m, r)).basis
    B = C.composite(m - (C.N - r), C.N - r)
    return _subquotient_module(C.term(m), Z, B)


def all_amplitude_vanish(C: ComplexA) -> bool:
    degs = C.support
    if not degs:
        return True
    for m in range(degs[0] - C.N, degs[-1] + C.N + 1):
        for r in range(1, C.N):
            if amplitude(C, r, m).dim:
                return False
    return True


def is_acyclic(C: ComplexA) -> bool:
    degs = C.support
    if not degs:
        return True
    return all(cohomology_classical(C, m).dim == 0
               for m in range(degs[0] - 1, degs[-1] + 2))


@dataclass
class ChainMap:
    source: ComplexA
    target: ComplexA
    components: dict[int, Matrix]

    def component(self, n: int) -> Matrix:
        got = self.components.get(n)
        if got is not None:
            return got
        return Matrix.zeros(self.source.field, self.target.dim(n), self.source.dim(n))

    def is_chain_map(self) -> bool:
        for n in set(self.source.support) | set(self.target.support):
            if self.target.diff(n) @ self.component(n) != \
                    self.component(n + 1) @ self.source.diff(n):
                return False
            for i in range(self.source.algebra.dim):
                if self.component(n) @ self.source.term(n).action[i] != \
                        self.target.term(n).action[i] @ self.component(n):
                    return False
        return True


def is_quasi_iso(f: ChainMap) -> bool:
    """Does f induce isomorphisms on all cohomologies?"""
    if not f.is_chain_map():
        return False
    C, D = f.source, f.target
    degs = sorted(set(C.support) | set(D.support))
    if not degs:
        return True
    field = C.field
    for m in range(degs[0] - 1, degs[-1] + 2):
        ZC = kernel(C.diff(m)).basis
        ZD = kernel(D.diff(m)).basis
        BC = C.diff(m - 1)
        BD = D.diff(m - 1)
        BC_in = solve_linear(ZC, BC) if BC.cols else Matrix.zeros(field, ZC.cols, 0)
        BD_in = solve_linear(ZD, BD) if BD.cols else Matrix.zeros(field, ZD.cols, 0)
        reps_C = _complement_reps(field, ZC, BC_in)
        hC = len(reps_C)
        hD = ZD.cols - rank(BD_in)
        if hC != hD:
            return False
        if hC == 0:
            continue
        # rank of [f(reps) | boundaries] minus boundary rank = rank of H(f)
        moved = Matrix.hstack(field, [f.component(m) @ v for v in reps_C])
        glue = Matrix.hstack(field, [BD, moved]) if BD.cols else moved
        if rank(glue) - rank(BD) != hC:
            return False
    return True


def chain_map_space(C: ComplexA, D: ComplexA) -> tuple[list[dict[int, Matrix]], list[int]]:
    """Basis of the space of chain maps C -> D (A-linear, commuting with the
    differentials), assembled degreewise as one linear system."""
    field = C.field
    degs = sorted(set(C.support) | set(D.support))
    slots = [n for n in degs if C.dim(n) and D.dim(n)]
    offsets = {}
    total = 0
    for n in slots:
        offsets[n] = total
        total += D.dim(n) * C.dim(n)
    rows = []
    for n in degs:
        # A-linearity at n
        if n in offsets:
            dC, dD = C.dim(n), D.dim(n)
            for i in range(C.algebra.dim):
                aC = C.term(n).action[i]
                aD = D.term(n).action[i]
                for a in range(dD):
                    for b in range(dC):
                        row = field.empty(1, total)[0]
                        base = offsets[n]
                        for l in range(dC):
                            row[base + a * dC + l] = field.normalize(
                                row[base + a * dC + l] + aC.data[l, b])
                        for l in range(dD):
                            row[base + l * dC + b] = field.normalize(
                                row[base + l * dC + b] - aD.data[a, l])
                        rows.append(row)
        # commutation with d at n: f_{n+1} d_C = d_D f_n
        if C.dim(n) and D.dim(n + 1):
            dC = C.diff(n)
            dD = D.diff(n)
            for a in range(D.dim(n + 1)):
                for b in range(C.dim(n)):
                    row = field.empty(1, total)[0]
                    if n + 1 in offsets:
                        base = offsets[n + 1]
                        for l in range(C.dim(n + 1)):
                            row[base + a * C.dim(n + 1) + l] = field.normalize(
                                row[base + a * C.dim(n + 1) + l] + dC.data[l, b])
                    if n in offsets:
                        base = offsets[n]
                        for l in range(D.dim(n)):
                            row[base + l * C.dim(n) + b] = field.normalize(
                                row[base + l * C.dim(n) + b] - dD.data[a, l])
                    if np.any(row != field.zero()):
                        rows.append(row)
    sys = Matrix(field, np.array(rows, dtype=field.dtype)) if rows else \
        Matrix.zeros(field, 1, total)
    ker = kernel(sys)
    out = []
    for j in range(ker.dim):
        comp = {}
        for n in slots:
            dC, dD = C.dim(n), D.dim(n)
            base = offsets[n]
            comp[n] = Matrix(field,
                             ker.basis.data[base:base + dC * dD, j].reshape(dD, dC).copy())
        out.append(comp)
    return out, slots


def homotopy_class_dim(C: ComplexA, D: ComplexA) -> int:
    """Dimension of chain maps modulo chain homotopy.

    A degreewise A-linear h_n : C^n -> D^{n-1} contributes the null map
    with components d_D h (at degree n) and h d_C (at degree n-1); null
    maps are chain maps, so the class count is the chain-map dimension
    minus the rank of the null span.
    """
    field = C.field
    basis, slots = chain_map_space(C, D)
    if not basis:
        return 0

    def vec(comp: dict[int, Matrix]) -> Matrix:
        cols = []
        for n in slots:
            block = comp.get(n) or Matrix.zeros(field, D.dim(n), C.dim(n))
            cols.append(Matrix(field, block.data.reshape(-1, 1)))
        return Matrix.vstack(field, cols)

    degs = sorted(set(C.support) | set(D.support))
    null_cols = []
    for n in degs:
        if C.dim(n) == 0 or D.dim(n - 1) == 0:
            continue
        for h in hom_A(C.term(n), D.term(n - 1)):
            comp: dict[int, Matrix] = {}
            if n in slots:
                comp[n] = D.diff(n - 1) @ h
            if (n - 1) in slots:
                comp[n - 1] = h @ C.diff(n - 1)
            null_cols.append(vec(comp))
    if not null_cols:
        return len(basis)
    return len(basis) - rank(Matrix.hstack(field, null_cols))


def translate_to_complex(X: QMod) -> ComplexA:
    """A shape module on a generated integer-line window as a complex."""
    meta = X.shape.window_meta
    if meta is None or "positions" not in meta:
        raise ShapeMismatch("translation needs a generated mesh window")
    N = 2 if meta["family"] in ("complex", "mesh_a2") else \
        int(meta["family"].replace("ncomplex", "") or 2)
    pos = meta["positions"]
    terms = {pos[q]: X.value(q) for q in X.support}
    diffs = {}
    for a in X.shape.arrows:
        if X.dim(a.src) and X.dim(a.dst):
            if pos[a.dst] != pos[a.src] + 1:
                raise ShapeMismatch("window is not a line")
            diffs[pos[a.src]] = X.arrow_matrix(a.name)
    return ComplexA(X.algebra, terms, diffs, N=N)


def translate_to_qmod(Cx: ComplexA, shape: KCategory) -> QMod:
    meta = shape.window_meta
    if meta is None or "positions" not in meta:
        raise ShapeMismatch("translation needs a generated mesh window")
    back = {v: k for k, v in meta["positions"].items()}
    values = {}
    for n in Cx.support:
        if n not in back:
            raise ShapeMismatch(f"degree {n} outside window")
        values[back[n]] = Cx.term(n)
    arrows = {}
    for a in shape.arrows:
        psrc = meta["positions"][a.src]
        if Cx.dim(psrc) and Cx.dim(psrc + 1):
            arrows[a.name] = Cx.diff(psrc)
    return QMod(shape, Cx.algebra, values, arrows, name="from-complex")


def translate_map_to_qmodmap(f: ChainMap, Xq: QMod, Yq: QMod) -> QModMap:
    meta = Xq.shape.window_meta
    back = {v: k for k, v in meta["positions"].items()}
    comps = {}
    for n, mat in f.components.items():
        comps[back[n]] = mat
    return QModMap(Xq, Yq, comps)
