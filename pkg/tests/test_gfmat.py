import numpy as np
import pytest

from blockmack import gfmat
from blockmack.gfmat import FFMatrix


def test_rref_hand_example():
    # det = 1 - 4 = 0 mod 3, single pivot row
    M = FFMatrix([[1, 2], [2, 1]], 3)
    res = gfmat.rref(M)
    assert res.rank == 1
    assert res.R.tolist() == [[1, 2], [0, 0]]
    assert res.T @ M == res.R
    assert gfmat.rank(res.T) == 2


def test_rref_identity_and_zero():
    for n in (1, 3, 5):
        res = gfmat.rref(FFMatrix.identity(n, 5))
        assert res.rank == n and res.R == FFMatrix.identity(n, 5)
    res = gfmat.rref(FFMatrix.zeros(3, 4, 3))
    assert res.rank == 0


def test_rref_idempotence_randomized():
    rng = np.random.default_rng(11)
    for p in (2, 3, 7):
        for _ in range(10):
            M = FFMatrix.random(rng, 5, 7, p)
            R = gfmat.rref(M).R
            assert gfmat.rref(R).R == R


def test_kernel_hand_example():
    M = FFMatrix([[1, 2], [2, 1]], 3)
    K = gfmat.kernel(M)
    assert K.rows == 1
    assert (M @ K.transpose()).is_zero()
    # the kernel contains the direction (1, 1)
    v = FFMatrix([[1], [1]], 3)
    assert (M @ v).is_zero()


def test_kernel_identity_and_zero():
    assert gfmat.kernel(FFMatrix.identity(4, 3)).rows == 0
    assert gfmat.kernel(FFMatrix.zeros(2, 2, 3)).rows == 2


def test_kernel_rank_nullity_randomized():
    rng = np.random.default_rng(5)
    for _ in range(20):
        M = FFMatrix.random(rng, 6, 9, 3)
        K = gfmat.kernel(M)
        assert K.rows == 9 - gfmat.rank(M)
        assert (M @ K.transpose()).is_zero()
        assert gfmat.rank(K) == K.rows


def test_solve():
    I = FFMatrix.identity(3, 7)
    b = FFMatrix([[2], [4], [6]], 7)
    x = gfmat.solve(I, b)
    assert x == b
    M = FFMatrix([[1, 2], [2, 1]], 3)
    assert gfmat.solve(M, [0, 0]) is not None
    # (1, 0) is not in the column space {(t, 2t)}
    assert gfmat.solve(M, [1, 0]) is None


def test_solve_exact_residual_randomized():
    rng = np.random.default_rng(17)
    for _ in range(20):
        A = FFMatrix.random(rng, 5, 4, 5)
        x0 = FFMatrix.random(rng, 4, 1, 5)
        b = A @ x0
        x = gfmat.solve(A, b)
        assert x is not None
        assert (A @ x - b).is_zero()


def test_kronecker():
    B = FFMatrix([[1, 2], [0, 1]], 3)
    one = FFMatrix([[1]], 3)
    assert gfmat.kronecker(one, B) == B
    zero = FFMatrix([[0]], 3)
    assert gfmat.kronecker(B, zero).is_zero()
    # rank-1 (x) rank-1 has rank 1
    u = FFMatrix([[1, 2], [2, 4]], 5)
    v = FFMatrix([[1, 1], [3, 3]], 5)
    assert gfmat.rank(u) == 1 and gfmat.rank(v) == 1
    assert gfmat.rank(gfmat.kronecker(u, v)) == 1


def test_kronecker_rank_multiplicative_randomized():
    rng = np.random.default_rng(23)
    for _ in range(15):
        A = FFMatrix.random(rng, 3, 4, 3)
        B = FFMatrix.random(rng, 4, 3, 3)
        assert gfmat.rank(gfmat.kronecker(A, B)) == \
            gfmat.rank(A) * gfmat.rank(B)


def test_modulus_checks():
    with pytest.raises(ValueError):
        FFMatrix([[1]], 4)
    with pytest.raises(ValueError):
        FFMatrix([[1]], 1)
    A = FFMatrix([[1]], 3)
    B = FFMatrix([[1]], 5)
    with pytest.raises(ValueError):
        A @ B


def test_immutability():
    A = FFMatrix([[1, 2]], 3)
    with pytest.raises(Exception):
        A.a[0, 0] = 2
    with pytest.raises(AttributeError):
        A.p = 5


def test_span_solver():
    basis = FFMatrix([[1, 0, 2], [0, 1, 1]], 3)
    sol = gfmat.SpanSolver(basis)
    v = FFMatrix([[2, 1, 2]], 3)  # 2*r0 + r1
    coords = sol.coords_row(v)
    assert coords.tolist() == [[2, 1]]
    assert sol.coords_row(FFMatrix([[0, 0, 1]], 3)) is None


def test_quotient_space():
    rel = FFMatrix([[1, 1, 0]], 3)
    q = gfmat.QuotientSpace(rel, 3)
    assert q.dim == 2
    # project kills the relation and fixes a complement
    assert (q.project @ rel.transpose()).is_zero()
    assert q.project @ q.section == FFMatrix.identity(2, 3)


def test_large_prime_matmul():
    p = 2147483647  # 2^31 - 1
    rng = np.random.default_rng(3)
    A = FFMatrix.random(rng, 4, 4, p)
    B = FFMatrix.random(rng, 4, 4, p)
    got = (A @ B).a
    want = np.zeros((4, 4), dtype=object)
    for i in range(4):
        for j in range(4):
            want[i, j] = sum(int(A.a[i, k]) * int(B.a[k, j])
                             for k in range(4)) % p
    assert (got == want.astype(np.int64)).all()
