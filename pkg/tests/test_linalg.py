import random

from qshape.fields import GF, QQ
from qshape.linalg import (Matrix, cokernel_projection, image, kernel, kron,
                           kron_dsum, rank, rref, solve_linear, subspace_ops)

F101 = GF(101)


def rand_matrix(field, rows, cols, rng):
    return Matrix.from_rows(field, [[rng.randrange(0, 101) for _ in range(cols)]
                                    for _ in range(rows)])


def test_rref_identity_f101():
    m = Matrix.identity(F101, 2)
    R, pivots, rk = rref(m)
    assert R == m
    assert pivots == [0, 1]
    assert rk == 2


def test_rref_rank_one_rational():
    # [[2,4],[1,2]] over QQ reduces to [[1,2],[0,0]] by hand elimination.
    m = Matrix.from_rows(QQ, [[2, 4], [1, 2]])
    R, pivots, rk = rref(m)
    assert R == Matrix.from_rows(QQ, [[1, 2], [0, 0]])
    assert rk == 1


def test_rref_zero():
    m = Matrix.zeros(F101, 3, 3)
    R, pivots, rk = rref(m)
    assert R.is_zero() and pivots == [] and rk == 0


def test_subspace_ops_projection_case():
    m = Matrix.from_rows(QQ, [[1, 0], [0, 0]])
    ops = subspace_ops(m)
    assert ops["kernel"].dim == 1
    assert ops["kernel"].basis == Matrix.from_rows(QQ, [[0], [1]])
    assert ops["image"].dim == 1
    assert ops["image"].basis == Matrix.from_rows(QQ, [[1], [0]])


def test_subspace_ops_injective_column():
    m = Matrix.from_rows(F101, [[1], [1]])
    ops = subspace_ops(m)
    assert ops["kernel"].dim == 0
    proj = ops["cokernel_projection"]
    assert proj.rows == 1  # rows - rank = 2 - 1
    assert (proj @ m).is_zero()
    assert rank(proj) == 1


def test_subspace_ops_identity():
    m = Matrix.identity(F101, 3)
    ops = subspace_ops(m)
    assert ops["kernel"].dim == 0
    assert ops["cokernel_projection"].rows == 0


def test_solve_identity():
    b = Matrix.column(F101, [5, 7, 9])
    x = solve_linear(Matrix.identity(F101, 3), b)
    assert x == b


def test_solve_underdetermined():
    m = Matrix.from_rows(F101, [[1, 1]])
    b = Matrix.column(F101, [1])
    x = solve_linear(m, b)
    assert x is not None
    assert (int(x.entry(0, 0)) + int(x.entry(1, 0))) % 101 == 1


def test_solve_inconsistent():
    m = Matrix.from_rows(F101, [[0]])
    b = Matrix.column(F101, [1])
    assert solve_linear(m, b) is None


def test_kron_identities():
    assert kron(Matrix.identity(QQ, 2), Matrix.identity(QQ, 3)) == Matrix.identity(QQ, 6)
    got = kron(Matrix.from_rows(QQ, [[2]]), Matrix.from_rows(QQ, [[0, 1], [1, 0]]))
    assert got == Matrix.from_rows(QQ, [[0, 2], [2, 0]])


def test_dsum():
    got = kron_dsum(Matrix.identity(QQ, 1), Matrix.zeros(QQ, 1, 1), "DirectSum")
    assert got == Matrix.from_rows(QQ, [[1, 0], [0, 0]])


def test_rank_properties_random():
    rng = random.Random(7)
    for _ in range(25):
        m = rand_matrix(F101, rng.randrange(0, 6), rng.randrange(0, 6), rng)
        R, _, rk = rref(m)
        assert rank(m) == rk == rank(m.transpose())
        ker = kernel(m)
        assert ker.dim + rk == m.cols
        if ker.dim and m.rows:
            assert (m @ ker.basis).is_zero()
        # determinism: rerun gives identical output
        R2, p2, rk2 = rref(m)
        assert R2 == R and rk2 == rk


def test_rank_of_kron_multiplicative():
    rng = random.Random(11)
    for _ in range(10):
        a = rand_matrix(F101, rng.randrange(1, 4), rng.randrange(1, 4), rng)
        b = rand_matrix(F101, rng.randrange(1, 4), rng.randrange(1, 4), rng)
        assert rank(kron(a, b)) == rank(a) * rank(b)
