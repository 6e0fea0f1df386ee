import numpy as np

from blockmack import gfpoly
from blockmack.gfmat import FFMatrix


def test_divmod_gcd():
    p = 5
    f = [1, 0, 1]          # x^2 + 1
    g = [2, 1]             # x + 2
    q, r = gfpoly.pdivmod(f, g, p)
    assert gfpoly.padd(gfpoly.pmul(q, g, p), r, p) == f
    assert gfpoly.pgcd([1, 0, 1], [2, 1], 5) == [2, 1]  # x^2+1 = (x+2)(x+3) mod 5


def test_ext_gcd():
    p = 7
    f = [1, 1]
    g = [3, 1]
    d, u, v = gfpoly.pext_gcd(f, g, p)
    assert d == [1]
    assert gfpoly.padd(gfpoly.pmul(u, f, p), gfpoly.pmul(v, g, p), p) == [1]


def test_factor_known():
    # x^3 - 1 = (x - 1)^3 over GF(3)
    fac = gfpoly.factor([2, 0, 0, 1], 3)
    assert fac == [([2, 1], 3)]
    # x^3 - 1 = (x + 1)(x^2 + x + 1) over GF(2)
    fac2 = gfpoly.factor([1, 0, 0, 1], 2)
    assert sorted((g, m) for g, m in fac2) == [([1, 1], 1), ([1, 1, 1], 1)]


def test_factor_roundtrip_randomized():
    rng = np.random.default_rng(9)
    for p in (2, 3, 5, 7):
        for _ in range(10):
            deg = int(rng.integers(1, 7))
            f = [int(x) for x in rng.integers(0, p, size=deg + 1)]
            f = gfpoly.normalize(f, p)
            if gfpoly.deg(f) < 1:
                continue
            f = gfpoly.monic(f, p)
            prod = [1]
            for g, m in gfpoly.factor(f, p, rng):
                assert gfpoly.is_irreducible(g, p, rng)
                for _ in range(m):
                    prod = gfpoly.pmul(prod, g, p)
            assert prod == f


def test_roots():
    # (x-1)(x-2)(x-4) over GF(7)
    f = [1]
    for c in (1, 2, 4):
        f = gfpoly.pmul(f, [(-c) % 7, 1], 7)
    assert gfpoly.roots(f, 7) == [1, 2, 4]


def test_min_poly():
    # nilpotent Jordan block: x^3
    N = FFMatrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]], 5)
    assert gfpoly.min_poly(N) == [0, 0, 0, 1]
    assert gfpoly.min_poly(FFMatrix.identity(4, 3)) == [2, 1]  # x - 1
    # companion matrix of x^2 + 1 over GF(3)
    C = FFMatrix([[0, 2], [1, 0]], 3)
    m = gfpoly.min_poly(C)
    assert m == [1, 0, 1]
    assert gfpoly.eval_matrix(m, C).is_zero()


def test_min_poly_annihilates_randomized():
    rng = np.random.default_rng(31)
    for _ in range(10):
        M = FFMatrix.random(rng, 6, 6, 3)
        m = gfpoly.min_poly(M)
        assert gfpoly.eval_matrix(m, M).is_zero()
        assert m[-1] == 1
