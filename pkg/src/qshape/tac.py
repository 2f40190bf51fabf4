"""The canonical totally acyclic complex of an objectwise-projective module,
its syzygy representatives, and a total-acyclicity verifier.

The complex glues the iterated cover conflations on the negative side with
the iterated envelope conflations on the positive side:

    ... -> cover(K^2 X) -> cover(K X) -> cover(X) -> env(X) -> env(C X) -> ...

sitting in degrees ..., -3, -2, -1, 0, 1, ... with zeroth cycle X.  Cycles
are stored explicitly: degree -n holds K^n(X), degree n holds C^n(X).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebras import AModule, hom_A
from .errors import NotObjectwiseProjective, WindowInsufficient
from .functors import cover_of, envelope_of
from .linalg import Matrix, rank
from .qmods import (QMod, QModMap, ShortSeq, cokernel_qmod, kernel_qmod,
                    zero_qmod)
from .structures import (ExactStructureDescriptor, is_conflation,
                         is_relative_projective, is_value_projective)


@dataclass
class TacWindow:
    """A bounded slice [dlo, dhi] of the canonical totally acyclic complex."""

    base: QMod
    structure: ExactStructureDescriptor
    dlo: int
    dhi: int
    terms: dict[int, QMod]
    diffs: dict[int, QModMap]          # d^n : T^n -> T^{n+1}
    cycles: dict[int, QMod]            # Cy^n, for dlo <= n <= dhi + 1
    cycle_incls: dict[int, QModMap]    # Cy^n -> T^n
    cycle_projs: dict[int, QModMap]    # T^n ->> Cy^{n+1}
    margin_valid: bool = True

    def term(self, n: int) -> QMod:
        got = self.terms.get(n)
        if got is None:
            raise WindowInsufficient(f"degree {n} outside tac window "
                                     f"[{self.dlo}, {self.dhi}]")
        return got

    def diff(self, n: int) -> QModMap:
        got = self.diffs.get(n)
        if got is None:
            raise WindowInsufficient(f"differential {n} outside tac window")
        return got

    def cycle(self, n: int) -> QMod:
        got = self.cycles.get(n)
        if got is None:
            raise WindowInsufficient(f"cycle {n} outside tac window")
        return got

    def to_json(self) -> dict:
        return {
            "range": [self.dlo, self.dhi],
            "terms": {str(n): {q: t.dim(q) for q in t.support}
                      for n, t in sorted(self.terms.items())},
            "cycles": {str(n): {q: c.dim(q) for q in c.support}
                       for n, c in sorted(self.cycles.items())},
            "margin_valid": self.margin_valid,
        }


def _require_objectwise_projective(X: QMod, E: ExactStructureDescriptor):
    for q in X.support:
        if not is_value_projective(X.value(q), E):
            raise NotObjectwiseProjective(
                f"value at {q} is not projective for {E}")


def canonical_tac(X: QMod, E: ExactStructureDescriptor,
                  drange: tuple[int, int]) -> TacWindow:
    """Build the canonical totally acyclic complex of X on [dlo, dhi].

    Requires every value X(q) to be projective in the module-level
    structure; margins are enforced by the cover/envelope constructors and
    surface as WindowInsufficient.
    """
    dlo, dhi = drange
    if dlo > dhi:
        raise ValueError("empty tac range")
    _require_objectwise_projective(X, E)
    shape, algebra = X.shape, X.algebra
    terms: dict[int, QMod] = {}
    diffs: dict[int, QModMap] = {}
    cycles: dict[int, QMod] = {0: X}
    cycle_incls: dict[int, QModMap] = {}
    cycle_projs: dict[int, QModMap] = {}

    # negative side: degree -(n+1) holds the cover of K^n(X)
    counits: dict[int, QModMap] = {}
    kincls: dict[int, QModMap] = {}
    K = X
    for n in range(max(0, -dlo)):
        coverK, eps = cover_of(K)
        terms[-(n + 1)] = coverK
        counits[n] = eps
        Knext, kincl = kernel_qmod(eps)
        Knext.name = f"K^{n + 1}({X.name})"
        kincls[n] = kincl
        cycles[-(n + 1)] = Knext
        cycle_projs[-(n + 1)] = eps          # T^{-(n+1)} ->> Cy^{-n}
        K = Knext

    # positive side: degree n holds the envelope of C^n(X); skipped
    # entirely for purely negative windows, which then need no in-margin
    units: dict[int, QModMap] = {}
    cprojs: dict[int, QModMap] = {}
    C = X
    for n in range(max(0, dhi + 1)):
        envC, eta = envelope_of(C)
        terms[n] = envC
        units[n] = eta
        Cnext, cproj = cokernel_qmod(eta)
        Cnext.name = f"C^{n + 1}({X.name})"
        cprojs[n] = cproj
        cycles[n + 1] = Cnext
        cycle_incls[n] = eta                 # Cy^n -> T^n
        cycle_projs[n] = cproj               # T^n ->> Cy^{n+1}
        C = Cnext

    # cycle inclusions on the negative side: K^{n+1} includes into the
    # cover of K^n, which is the term at degree -(n+1)
    for n in range(max(0, -dlo)):
        cycle_incls[-(n + 1)] = kincls[n]

    # differentials
    for m in range(dlo, dhi):
        if m <= -2:
            # cover(K^{-m-1}) ->> K^{-m-1} -> cover(K^{-m-2})
            diffs[m] = cycle_incls[m + 1].compose(cycle_projs[m])
        elif m == -1:
            diffs[m] = units[0].compose(counits[0])
        else:
            diffs[m] = cycle_incls[m + 1].compose(cycle_projs[m])
    tw = TacWindow(X, E, dlo, dhi, terms, diffs, cycles, cycle_incls,
                   cycle_projs)
    return tw


def sigma_n(X: QMod, n: int, E: ExactStructureDescriptor) -> QMod:
    """The canonical syzygy representative: iterated cover-kernels for
    negative n, the module itself at 0, iterated envelope-cokernels above."""
    _require_objectwise_projective(X, E)
    if n == 0:
        return X
    current = X
    if n < 0:
        for _ in range(-n):
            _, eps = cover_of(current)
            current, _ = kernel_qmod(eps)
        current.name = f"K^{-n}({X.name})"
        return current
    for _ in range(n):
        _, eta = envelope_of(current)
        current, _ = cokernel_qmod(eta)
    current.name = f"C^{n}({X.name})"
    return current


def verify_totally_acyclic(W: TacWindow, test_modules: list[AModule]) -> dict:
    """Degreewise verification: terms projective, squares zero, the
    factorisations are conflations, and Hom into each test module is exact
    at every inner degree.  Reports the first failing degree per check."""
    report = {"ok": True, "failures": [], "first_failure": None}

    def fail(kind, degree):
        report["ok"] = False
        report["failures"].append({"check": kind, "degree": degree})
        if report["first_failure"] is None:
            report["first_failure"] = {"check": kind, "degree": degree}

    for m in range(W.dlo, W.dhi + 1):
        if not is_relative_projective(W.terms[m], W.structure):
            fail("term-projective", m)
            break
    for m in range(W.dlo, W.dhi):
        if m + 1 in W.diffs:
            if not W.diffs[m + 1].compose(W.diffs[m]).is_zero():
                fail("square-zero", m)
    for m in range(W.dlo, W.dhi + 1):
        if m in W.cycle_incls and m in W.cycle_projs:
            s = ShortSeq(W.cycle_incls[m], W.cycle_projs[m])
            try:
                if not is_conflation(s, W.structure):
                    fail("factorisation-conflation", m)
            except Exception:
                fail("factorisation-conflation", m)
        if m in W.diffs and m + 1 in W.cycle_incls:
            recomposed = W.cycle_incls[m + 1].compose(W.cycle_projs[m])
            if not (recomposed - W.diffs[m]).is_zero():
                fail("factorisation-match", m)

    # total acyclicity at evaluation: Hom_A(T(q), M) exact for each test module
    support = sorted({q for t in W.terms.values() for q in t.support},
                     key=lambda q: W.base.shape._obj_index[q])
    field = W.base.field
    for M in test_modules:
        for q in support:
            dims = {}
            ranks = {}
            for m in range(W.dlo, W.dhi + 1):
                dims[m] = len(hom_A(W.terms[m].value(q), M))
            for m in range(W.dlo, W.dhi):
                # Hom(T^{m+1}(q), M) -> Hom(T^m(q), M), phi -> phi o d^m(q)
                src = hom_A(W.terms[m + 1].value(q), M)
                dmat = W.diffs[m].component(q)
                cols = [Matrix(field, (b @ dmat).data.reshape(-1, 1)) for b in src]
                ranks[m] = rank(Matrix.hstack(field, cols)) if cols else 0
            for m in range(W.dlo + 1, W.dhi):
                # exactness of Hom(T(q), M) at the slot between d^{m-1}, d^m
                incoming = ranks[m]       # image of Hom(T^{m+1}) -> Hom(T^m)
                outgoing = ranks[m - 1]   # rank of Hom(T^m) -> Hom(T^{m-1})
                if dims[m] != incoming + outgoing:
                    fail("hom-exactness", m)
                    break
    return report
