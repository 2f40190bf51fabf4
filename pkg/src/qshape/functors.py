"""Induction, coinduction and stalk functors, their adjoints, and the
canonical cover/envelope conflations.

induce(..., kind="F") is tensoring with a corepresentable, kind="G" the
dual hom construction, kind="S" the stalk.  cover/envelope assemble the
objectwise-split short exact sequences K -> F(X) -> X and X -> G(X) -> C
that drive every resolution in the engine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebras import AModule, Algebra, hom_A, zero_module
from .errors import AdjointMismatch, WindowInsufficient
from .fields import FieldSpec
from .linalg import Matrix, kron, rank, solve_linear
from .qmods import (NatSpace, QMod, QModMap, ShortSeq, cokernel_qmod,
                    direct_sum_qmod, identity_map, is_short_exact,
                    kernel_qmod, zero_qmod)
from .shapes import KCategory


def induce(shape: KCategory, q: str, M: AModule, kind: str) -> QMod:
    """The induced module at q: "F" (corepresentable tensor M), "G"
    (dual-representable hom into M), or "S" (stalk)."""
    field = shape.field
    algebra = M.algebra
    if M.dim == 0:
        return zero_qmod(shape, algebra)
    if kind == "S":
        return QMod(shape, algebra, {q: M}, {}, name=f"S[{q}]({M.name})")
    if kind == "F":
        shape.require_margin([q], 1, "out", what="induction")
        values = {}
        for p in shape.objects:
            d = shape.dim(q, p)
            if d:
                values[p] = _tensor_left(M, d)
        arrows = {}
        for a in shape.arrows:
            if shape.dim(q, a.src) and shape.dim(q, a.dst):
                arrows[a.name] = kron(shape.postcompose_matrix(q, a.name),
                                      Matrix.identity(field, M.dim))
        return QMod(shape, algebra, values, arrows, name=f"F[{q}]({M.name})")
    if kind == "G":
        shape.require_margin([q], 1, "in", what="coinduction")
        values = {}
        for p in shape.objects:
            d = shape.dim(p, q)
            if d:
                values[p] = _tensor_left(M, d)
        arrows = {}
        for a in shape.arrows:
            if shape.dim(a.src, q) and shape.dim(a.dst, q):
                arrows[a.name] = kron(shape.precompose_matrix(q, a.name).transpose(),
                                      Matrix.identity(field, M.dim))
        return QMod(shape, algebra, values, arrows, name=f"G[{q}]({M.name})")
    raise ValueError(f"unknown kind {kind!r}")


def _tensor_left(M: AModule, d: int) -> AModule:
    """k^d (x) M with index layout (hom index, module index)."""
    field = M.field
    action = [kron(Matrix.identity(field, d), M.action[i])
              for i in range(M.algebra.dim)]
    return AModule(M.algebra, d * M.dim, action)


def stalk(shape: KCategory, q: str, M: AModule) -> QMod:
    return induce(shape, q, M, "S")


def tensor_with_module(U: QMod, T: AModule) -> QMod:
    """U (x)_k T, turning a shape module over k into one over T's algebra.

    Index layout (u_i, t_j): values are k^{dim U(q)} (x) T and arrows act
    on the left factor only.
    """
    field = U.field
    values = {q: _tensor_left(T, U.dim(q)) for q in U.support}
    arrows = {name: kron(mat, Matrix.identity(field, T.dim))
              for name, mat in U.arrow_action.items()}
    return QMod(U.shape, T.algebra, values, arrows,
                name=f"{U.name}(x){T.name}")


def tensor_map_with_module(phi: QModMap, T: AModule,
                           src: QMod, tgt: QMod) -> QModMap:
    comps = {q: kron(phi.component(q), Matrix.identity(phi.field, T.dim))
             for q in phi.source.support if phi.source.dim(q) and phi.target.dim(q)}
    return QModMap(src, tgt, comps)


def dual_qmod(R: QMod, I: AModule, base_shape: KCategory) -> QMod:
    """Hom_k(R, I) for a right module R over k: a module over I's algebra
    on the base shape, with values R(p)* (x) I."""
    field = R.field
    values = {p: _tensor_left(I, R.dim(p)) for p in R.support}
    arrows = {}
    for a in base_shape.arrows:
        if R.dim(a.src) and R.dim(a.dst):
            # base arrow p -> q acts by precomposition with R's action,
            # which runs R(q) -> R(p) over the opposite shape
            arrows[a.name] = kron(R.arrow_matrix(a.name).transpose(),
                                  Matrix.identity(field, I.dim))
    return QMod(base_shape, I.algebra, values, arrows,
                name=f"Hom_k({R.name},{I.name})")


@dataclass
class CoverEnvelope:
    """The canonical conflations around X: kernel -> cover -> X and
    X -> envelope -> cokernel, with their structure maps."""

    cover: QMod
    counit: QModMap
    counit_kernel: QMod
    kernel_incl: QModMap
    envelope: QMod
    unit: QModMap
    unit_cokernel: QMod
    cokernel_proj: QModMap

    @property
    def cover_seq(self) -> ShortSeq:
        return ShortSeq(self.kernel_incl, self.counit)

    @property
    def envelope_seq(self) -> ShortSeq:
        return ShortSeq(self.unit, self.cokernel_proj)


def cover_of(X: QMod) -> tuple[QMod, QModMap]:
    """The total induced cover (+) F_q(X(q)) with its counit onto X."""
    shape, algebra, field = X.shape, X.algebra, X.field
    supp = X.support
    shape.require_margin(supp, 1, "out", what="cover")
    if not supp:
        Z = zero_qmod(shape, algebra)
        return Z, QModMap(Z, X, {})
    summands = [induce(shape, q, X.value(q), "F") for q in supp]
    total, incs, _ = direct_sum_qmod(summands)
    comps = {}
    for p in X.support:
        blocks = []
        for q in supp:
            d = shape.dim(q, p)
            if d == 0:
                blocks.append(Matrix.zeros(field, X.dim(p), d * X.dim(q)))
                continue
            cols = [X.morphism_action(q, p, i) for i in range(d)]
            blocks.append(Matrix.hstack(field, cols))
        comps[p] = Matrix.hstack(field, [
            b if b.cols == summands[i].dim(p) else
            Matrix.zeros(field, X.dim(p), summands[i].dim(p))
            for i, b in enumerate(blocks)])
    total.name = f"cover({X.name})"
    return total, QModMap(total, X, comps, name="counit")


def envelope_of(X: QMod) -> tuple[QMod, QModMap]:
    """The total coinduced envelope with its unit from X."""
    shape, algebra, field = X.shape, X.algebra, X.field
    supp = X.support
    shape.require_margin(supp, 1, "in", what="envelope")
    if not supp:
        Z = zero_qmod(shape, algebra)
        return Z, QModMap(X, Z, {})
    summands = [induce(shape, q, X.value(q), "G") for q in supp]
    total, incs, _ = direct_sum_qmod(summands)
    comps = {}
    for p in X.support:
        blocks = []
        for i, q in enumerate(supp):
            d = shape.dim(p, q)
            if d == 0:
                blocks.append(Matrix.zeros(field, summands[i].dim(p), X.dim(p)))
                continue
            rows = [X.morphism_action(p, q, t) for t in range(d)]
            blocks.append(Matrix.vstack(field, rows))
        comps[p] = Matrix.vstack(field, blocks)
    total.name = f"envelope({X.name})"
    return total, QModMap(X, total, comps, name="unit")


def global_fgkc(X: QMod, check_split: bool = True) -> CoverEnvelope:
    cover, eps = cover_of(X)
    K, kincl = kernel_qmod(eps)
    K.name = f"K({X.name})"
    env, eta = envelope_of(X)
    C, cproj = cokernel_qmod(eta)
    C.name = f"C({X.name})"
    ce = CoverEnvelope(cover, eps, K, kincl, env, eta, C, cproj)
    if not X.is_zero():
        if not is_short_exact(ce.cover_seq) or not is_short_exact(ce.envelope_seq):
            raise AdjointMismatch("canonical sequences are not short exact")
        if check_split:
            if not objectwise_split(ce.cover_seq) or not objectwise_split(ce.envelope_seq):
                raise AdjointMismatch("canonical sequences are not objectwise split")
    return ce


def counit_kernel(X: QMod) -> QMod:
    cover, eps = cover_of(X)
    K, _ = kernel_qmod(eps)
    K.name = f"K({X.name})"
    return K


def unit_cokernel(X: QMod) -> QMod:
    env, eta = envelope_of(X)
    C, _ = cokernel_qmod(eta)
    C.name = f"C({X.name})"
    return C


def _a_linear_section(pi: Matrix, M_src: AModule, M_tgt: AModule) -> Matrix | None:
    """A-linear s with pi o s = id, found inside Hom_A(target, source)."""
    field = pi.field
    basis = hom_A(M_tgt, M_src)
    if not basis:
        return None if M_tgt.dim else Matrix.zeros(field, M_src.dim, 0)
    cols = [Matrix(field, (pi @ b).data.reshape(-1, 1)) for b in basis]
    sys = Matrix.hstack(field, cols)
    rhs = Matrix(field, Matrix.identity(field, M_tgt.dim).data.reshape(-1, 1))
    sol = solve_linear(sys, rhs)
    if sol is None:
        return None
    acc = field.empty(M_src.dim, M_tgt.dim)
    for i, b in enumerate(basis):
        c = sol.entry(i, 0)
        if c != field.zero():
            acc = field.normalize(acc + c * b.data)
    return Matrix(field, acc)


def objectwise_split(s: ShortSeq) -> bool:
    """Each evaluation splits in Mod A: the deflation has an A-linear
    section (equivalently the inflation has an A-linear retraction)."""
    X = s.iota.target
    for q in X.support:
        tgt = s.pi.target.value(q)
        if tgt.dim == 0:
            continue
        if _a_linear_section(s.pi.component(q), X.value(q), tgt) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# stalk adjoints
# ---------------------------------------------------------------------------

def stalk_adjoints(X: QMod, q: str, side: str) -> tuple[AModule, Matrix]:
    """K-side: the joint kernel of the radical actions out of q, as a
    submodule of X(q) (returned with its inclusion).  C-side: the quotient
    of X(q) by the radical images into q (returned with its projection)."""
    shape = X.shape
    field = X.field
    Mq = X.value(q)
    if side == "K":
        shape.require_margin([q], 1, "out", what="stalk right adjoint")
        stacked = []
        for p in shape.objects:
            rad = shape.radical_basis[(q, p)]
            for j in range(rad.cols):
                stacked.append(X.act_coords(q, p, rad.column_vector(j)))
        if Mq.dim == 0:
            return zero_module(X.algebra), Matrix.zeros(field, 0, 0)
        if not stacked:
            return Mq, Matrix.identity(field, Mq.dim)
        from .linalg import kernel as ker_space
        big = Matrix.vstack(field, stacked)
        basis = ker_space(big).basis
        from .algebras import submodule
        sub, incl = submodule(Mq, basis)
        return sub, incl
    if side == "C":
        shape.require_margin([q], 1, "in", what="stalk left adjoint")
        images = []
        for p in shape.objects:
            rad = shape.radical_basis[(p, q)]
            for j in range(rad.cols):
                if X.dim(p):
                    images.append(X.act_coords(p, q, rad.column_vector(j)))
        if Mq.dim == 0:
            return zero_module(X.algebra), Matrix.zeros(field, 0, 0)
        if not images:
            return Mq, Matrix.identity(field, Mq.dim)
        from .linalg import cokernel_projection
        stacked = Matrix.hstack(field, images)
        proj = cokernel_projection(stacked)
        from .algebras import quotient_module
        quot = quotient_module(Mq, proj) if proj.rows else zero_module(X.algebra)
        return quot, proj
    raise ValueError("side must be 'K' or 'C'")


# ---------------------------------------------------------------------------
# Serre comparison and adjunction validation
# ---------------------------------------------------------------------------

def _iso_in_hom_space(space: NatSpace, seed: int = 0) -> QModMap | None:
    X, Y = space.X, space.Y
    for q in X.shape.objects:
        if X.dim(q) != Y.dim(q):
            return None
    def invertible(phi):
        return all(rank(phi.component(q)) == X.dim(q) for q in X.support)
    for j in range(space.dim):
        phi = space.map_from_coords(
            Matrix(space.field, _unit(space.field, space.dim, j)))
        if invertible(phi):
            return phi
    rng = random.Random(seed)
    for _ in range(64):
        coords = space.field.empty(space.dim, 1)
        for j in range(space.dim):
            coords[j, 0] = space.field.coerce(rng.randrange(0, 101))
        phi = space.map_from_coords(Matrix(space.field, coords))
        if invertible(phi):
            return phi
    return None


def _unit(field, n, j):
    v = field.empty(n, 1)
    v[j, 0] = field.one()
    return v


def serre_compare(shape: KCategory, q: str, M: AModule, seed: int = 0) -> dict:
    """Dimensionwise and explicit-iso comparison of the coinduced module at
    the Serre image against the induced module at q."""
    if shape.serre is None or q not in shape.serre:
        raise WindowInsufficient(f"Serre image of {q} not available in window")
    sq = shape.serre[q]
    F = induce(shape, q, M, "F")
    G = induce(shape, sq, M, "G")
    dims_ok = all(F.dim(p) == G.dim(p) for p in shape.objects)
    if M.dim == 0:
        return {"dims_ok": True, "iso_found": True, "iso": None}
    iso = None
    if dims_ok:
        space = NatSpace(F, G, a_linear=True)
        iso = _iso_in_hom_space(space, seed=seed)
    return {"dims_ok": dims_ok, "iso_found": iso is not None, "iso": iso,
            "witness": None if dims_ok else
            next(p for p in shape.objects if F.dim(p) != G.dim(p))}


def adjunction_check(shape: KCategory, pair: str, q: str, M: AModule,
                     X: QMod) -> dict:
    """Hom-set bijection test for one adjoint pair on one sample.

    Computes both hom spaces independently, then checks that the canonical
    unit/counit composite is a linear isomorphism between them.
    """
    field = shape.field
    if pair == "F-E":
        FM = induce(shape, q, M, "F")
        lhs = NatSpace(FM, X, a_linear=True)
        rhs = hom_A(M, X.value(q))
        bij = _bijection_ok(
            lhs, rhs, lambda phi: phi.component(q) @ _unit_into_f(shape, q, M),
            M, X.value(q))
        return {"pair": pair, "lhs_dim": lhs.dim, "rhs_dim": len(rhs), "bijective": bij,
                "ok": lhs.dim == len(rhs) and bij}
    if pair == "E-G":
        GM = induce(shape, q, M, "G")
        lhs = NatSpace(X, GM, a_linear=True)
        rhs = hom_A(X.value(q), M)
        ev = _eval_at_identity(shape, q, M)
        bij = _bijection_ok(lhs, rhs, lambda phi: ev @ phi.component(q),
                            X.value(q), M)
        return {"pair": pair, "lhs_dim": lhs.dim, "rhs_dim": len(rhs), "bijective": bij,
                "ok": lhs.dim == len(rhs) and bij}
    if pair == "C-S":
        SM = stalk(shape, q, M)
        CX, proj = stalk_adjoints(X, q, "C")
        lhs = NatSpace(X, SM, a_linear=True)
        rhs = hom_A(CX, M)
        # phi at q kills the radical images, so it factors through the
        # projection; the factoring matrix is the correspondent
        sec = solve_linear(proj, Matrix.identity(field, proj.rows)) \
            if proj.rows else Matrix.zeros(field, X.dim(q), 0)
        bij = _bijection_ok(lhs, rhs, lambda phi: phi.component(q) @ sec, CX, M)
        return {"pair": pair, "lhs_dim": lhs.dim, "rhs_dim": len(rhs), "bijective": bij,
                "ok": lhs.dim == len(rhs) and bij}
    if pair == "S-K":
        SM = stalk(shape, q, M)
        KX, incl = stalk_adjoints(X, q, "K")
        lhs = NatSpace(SM, X, a_linear=True)
        rhs = hom_A(M, KX)
        def corestrict(phi):
            got = solve_linear(incl, phi.component(q)) if incl.cols else \
                Matrix.zeros(field, 0, M.dim)
            if got is None:
                raise AdjointMismatch("stalk map does not land in the joint kernel")
            return got
        bij = _bijection_ok(lhs, rhs, corestrict, M, KX)
        return {"pair": pair, "lhs_dim": lhs.dim, "rhs_dim": len(rhs), "bijective": bij,
                "ok": lhs.dim == len(rhs) and bij}
    raise ValueError(f"unknown adjoint pair {pair!r}")


def _unit_into_f(shape: KCategory, q: str, M: AModule) -> Matrix:
    """M -> F_q(M)(q) = Q(q,q) (x) M, m |-> id (x) m."""
    return kron(shape.id_coords(q), Matrix.identity(shape.field, M.dim))


def _eval_at_identity(shape: KCategory, q: str, M: AModule) -> Matrix:
    """G_q(M)(q) = Q(q,q)* (x) M -> M, phi |-> phi(id)."""
    return kron(shape.id_coords(q).transpose(), Matrix.identity(shape.field, M.dim))


def _bijection_ok(lhs: NatSpace, rhs_basis: list[Matrix], transfer, src: AModule,
                  tgt: AModule) -> bool:
    """Is the transfer map a bijection from the lhs hom space onto the span
    of rhs_basis?"""
    field = lhs.field
    if lhs.dim != len(rhs_basis):
        return False
    if lhs.dim == 0:
        return True
    cols = []
    for j in range(lhs.dim):
        phi = lhs.map_from_coords(Matrix(field, _unit(field, lhs.dim, j)))
        img = transfer(phi)
        cols.append(Matrix(field, img.data.reshape(-1, 1)))
    transfer_mat = Matrix.hstack(field, cols)
    if rank(transfer_mat) != lhs.dim:
        return False
    span = Matrix.hstack(field, [Matrix(field, b.data.reshape(-1, 1))
                                 for b in rhs_basis])
    return solve_linear(span, transfer_mat) is not None


def kq_gp_pattern(shape: KCategory, q: str, p: str, M: AModule) -> dict:
    """The vanishing/identity pattern of the stalk right adjoint applied to
    a coinduced module: zero off the diagonal, M on it."""
    GM = induce(shape, p, M, "G")
    KX, incl = stalk_adjoints(GM, q, "K")
    if p != q:
        return {"expected": 0, "dim": KX.dim, "ok": KX.dim == 0}
    from .algebras import module_iso
    iso = module_iso(KX, M)
    return {"expected": M.dim, "dim": KX.dim,
            "ok": KX.dim == M.dim and (M.dim == 0 or iso is not None)}
