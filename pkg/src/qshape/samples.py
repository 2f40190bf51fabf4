"""Seeded random generators for modules, complexes and maps.

All randomness flows through an explicit random.Random instance so every
test and acceptance run is reproducible from its seed.
"""

from __future__ import annotations

import random

from .algebras import AModule, Algebra, hom_A
from .classical import ChainMap, ComplexA, chain_map_space
from .fields import FieldSpec
from .linalg import Matrix, kernel, rank, solve_linear
from .qmods import QMod
from .shapes import KCategory


def _rand_scalar(field: FieldSpec, rng: random.Random):
    return field.coerce(rng.randrange(0, field.p if field.is_prime_field else 13))


def _rand_matrix(field: FieldSpec, rows: int, cols: int, rng: random.Random) -> Matrix:
    a = field.empty(rows, cols)
    for i in range(rows):
        for j in range(cols):
            a[i, j] = _rand_scalar(field, rng)
    return Matrix(field, a)


def _rand_invertible(field: FieldSpec, n: int, rng: random.Random) -> Matrix:
    while True:
        m = _rand_matrix(field, n, n, rng)
        if rank(m) == n:
            return m


def random_module(A: Algebra, rng: random.Random, max_dim: int = 3) -> AModule:
    """A random valid module over one of the shipped algebras."""
    field = A.field
    if A.dim == 1:
        d = rng.randrange(1, max_dim + 1)
        return AModule(A, d, [Matrix.identity(field, d)], name=f"k^{d}")
    if A.labels == ["1", "x"]:
        # dual numbers: x acts by a square-zero matrix
        d = rng.randrange(1, max_dim + 1)
        r = rng.randrange(0, d // 2 + 1)
        nil = field.empty(d, d)
        for i in range(r):
            nil[d - 1 - i, i] = field.one()
        P = _rand_invertible(field, d, rng)
        Pinv = solve_linear(P, Matrix.identity(field, d))
        x_act = P @ Matrix(field, nil) @ Pinv
        return AModule(A, d, [Matrix.identity(field, d), x_act], name=f"D{d}r{r}")
    if A.labels == ["e1", "e2", "a"]:
        # path algebra of 1 -> 2: a pair of spaces with a map between them
        d1 = rng.randrange(0, max_dim + 1)
        d2 = rng.randrange(0 if d1 else 1, max_dim + 1)
        d = d1 + d2
        e1 = field.empty(d, d)
        e2 = field.empty(d, d)
        for i in range(d1):
            e1[i, i] = field.one()
        for i in range(d1, d):
            e2[i, i] = field.one()
        f = _rand_matrix(field, d2, d1, rng)
        a_act = field.empty(d, d)
        if d1 and d2:
            a_act[d1:, :d1] = f.data
        return AModule(A, d, [Matrix(field, e1), Matrix(field, e2),
                              Matrix(field, a_act)], name=f"A2({d1},{d2})")
    raise ValueError("no random generator for this algebra")


def random_projective_a2(A: Algebra, rng: random.Random, max_copies: int = 2) -> AModule:
    """Random direct sum of the two indecomposable projectives over the
    path algebra of 1 -> 2."""
    from .algebras import a2_projectives, direct_sum
    P1, P2 = a2_projectives(A)
    picks = []
    for _ in range(rng.randrange(1, max_copies + 1)):
        picks.append(P1 if rng.random() < 0.5 else P2)
    return direct_sum(picks)[0]


def random_complex(algebra: Algebra, rng: random.Random, lo: int, length: int,
                   max_dim: int = 2, N: int = 2,
                   module_factory=None) -> ComplexA:
    """A random bounded (N-)complex: terms drawn from the module factory,
    differentials sampled from the space of maps whose composite with the
    previous N-1 differentials vanishes."""
    factory = module_factory or (lambda: random_module(algebra, rng, max_dim))
    terms = {}
    for n in range(lo, lo + length):
        terms[n] = factory()
    field = algebra.field
    diffs = {}
    cx = ComplexA(algebra, terms, {}, N=N)
    for n in range(lo, lo + length - 1):
        src, tgt = cx.term(n), cx.term(n + 1)
        basis = hom_A(src, tgt)
        if not basis:
            continue
        # composite of the previous N-1 differentials into degree n
        comp = Matrix.identity(field, cx.dim(n - (N - 1)))
        for s in range(N - 1):
            dmat = diffs.get(n - (N - 1) + s)
            if dmat is None:
                dmat = Matrix.zeros(field, cx.dim(n - (N - 1) + s + 1),
                                    cx.dim(n - (N - 1) + s))
            comp = dmat @ comp
        if comp.cols and not comp.is_zero():
            cols = [Matrix(field, (b @ comp).data.reshape(-1, 1)) for b in basis]
            coeff_kernel = kernel(Matrix.hstack(field, cols)).basis
        else:
            coeff_kernel = Matrix.identity(field, len(basis))
        if coeff_kernel.cols == 0:
            continue
        coeffs = _rand_matrix(field, coeff_kernel.cols, 1, rng)
        sel = coeff_kernel @ coeffs
        acc = field.empty(tgt.dim, src.dim)
        for jj, b in enumerate(basis):
            c = sel.entry(jj, 0)
            if c != field.zero():
                acc = field.normalize(acc + c * b.data)
        d = Matrix(field, acc)
        if not d.is_zero():
            diffs[n] = d
            cx = ComplexA(algebra, terms, diffs, N=N)
    out = ComplexA(algebra, terms, diffs, N=N)
    assert out.is_valid()
    return out


def cone_of_identity(C: ComplexA) -> ComplexA:
    """The mapping cone of the identity: a contractible complex."""
    field = C.field
    algebra = C.algebra
    degs = C.support
    terms = {}
    diffs = {}
    from .algebras import direct_sum as dsum
    rng_range = range(degs[0] - 1, degs[-1] + 1)
    for n in rng_range:
        up = C.term(n + 1)
        here = C.term(n)
        if up.dim + here.dim == 0:
            continue
        mods = [m for m in (up, here)]
        total, _, _ = dsum(mods)
        terms[n] = total
    for n in rng_range:
        if n not in terms or (n + 1) not in terms:
            continue
        # d(x, y) = (-d x, x + d y) in the (shift, original) decomposition
        a = C.dim(n + 2)
        b = C.dim(n + 1)
        c = C.dim(n + 1)
        d0 = C.dim(n)
        blk = field.empty(a + c, b + d0)
        if a and b:
            blk[:a, :b] = (-C.diff(n + 1)).data
        if c and b:
            blk[a:, :b] = Matrix.identity(field, b).data
        if c and d0:
            blk[a:, b:] = C.diff(n).data
        diffs[n] = Matrix(field, blk)
    cone = ComplexA(algebra, terms, diffs, N=C.N)
    assert cone.is_valid()
    return cone


def random_chain_map(C: ComplexA, D: ComplexA, rng: random.Random) -> ChainMap:
    basis, slots = chain_map_space(C, D)
    field = C.field
    comps: dict[int, Matrix] = {}
    for bmap in basis:
        c = _rand_scalar(field, rng)
        for n, mat in bmap.items():
            acc = comps.get(n)
            scaled = mat.scale(c)
            comps[n] = scaled if acc is None else acc + scaled
    return ChainMap(C, D, comps)


def perturbed_identity(C: ComplexA, rng: random.Random) -> ChainMap:
    """Identity plus a null-homotopic perturbation: a quasi-isomorphism."""
    field = C.field
    comps = {n: Matrix.identity(field, C.dim(n)) for n in C.support}
    degs = C.support
    for n in degs:
        if C.dim(n) == 0 or C.dim(n - 1) == 0:
            continue
        hs = hom_A(C.term(n), C.term(n - 1))
        if not hs:
            continue
        h = hs[rng.randrange(len(hs))].scale(_rand_scalar(field, rng))
        if n in comps:
            comps[n] = comps[n] + C.diff(n - 1) @ h
        if (n - 1) in comps:
            comps[n - 1] = comps[n - 1] + h @ C.diff(n - 1)
    return ChainMap(C, C, comps)
