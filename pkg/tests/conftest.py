import numpy as np
import pytest

from blockmack import condense, fdalg, fixtures, mackey, permgrp


@pytest.fixture(scope="session")
def s3():
    return fixtures.s3()


@pytest.fixture(scope="session")
def c3():
    return fixtures.c3()


@pytest.fixture(scope="session")
def a4():
    return fixtures.a4()


@pytest.fixture(scope="session")
def kS3(s3):
    return fdalg.group_algebra(s3, 3)


@pytest.fixture(scope="session")
def kC3(c3):
    return fdalg.group_algebra(c3, 3)


@pytest.fixture(scope="session")
def kA4(a4):
    return fdalg.group_algebra(a4, 3)


@pytest.fixture(scope="session")
def Y_s3(s3, kS3):
    b = mackey.principal_block(kS3, seed=1)
    return mackey.yoshida_algebra(s3, 3, b, seed=1, kG=kS3)


@pytest.fixture(scope="session")
def Y_c3(c3, kC3):
    b = mackey.principal_block(kC3, seed=1)
    return mackey.yoshida_algebra(c3, 3, b, seed=1, kG=kC3)


@pytest.fixture(scope="session")
def Y_a4(a4, kA4):
    b = mackey.principal_block(kA4, seed=1)
    return mackey.yoshida_algebra(a4, 3, b, seed=1, kG=kA4)


@pytest.fixture(scope="session")
def corner_s3(Y_s3):
    return condense.proj_inj_corner(Y_s3, seed=1)


@pytest.fixture(scope="session")
def corner_c3(Y_c3):
    return condense.proj_inj_corner(Y_c3, seed=1)


@pytest.fixture(scope="session")
def corner_a4(Y_a4):
    return condense.proj_inj_corner(Y_a4, seed=1)


def random_small_groups(n: int, seed: int, max_order: int = 48):
    """Seeded sample of small permutation groups of order <= max_order."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        degree = int(rng.integers(3, 7))
        gens = [tuple(rng.permutation(degree)) for _ in range(2)]
        try:
            G = permgrp.close_group(degree, [list(g) for g in gens])
        except permgrp.GroupSizeError:
            continue
        if G.order <= max_order:
            out.append(G)
    return out
