"""Canonical fixture constructions shared by tests, docs and CLI demos."""

from __future__ import annotations

import numpy as np

from . import condense, fdalg, fdmod, mackey, morita, permgrp
from .fdalg import FDAlgebra, Idempotent
from .gfmat import FFMatrix, SpanSolver, rank, solve_matrix


def s3() -> permgrp.PermGroup:
    return permgrp.close_group(3, [[1, 0, 2], [1, 2, 0]])


def c3() -> permgrp.PermGroup:
    return permgrp.close_group(3, [[1, 2, 0]])


def a4() -> permgrp.PermGroup:
    return permgrp.close_group(4, [[1, 2, 0, 3], [1, 0, 3, 2]])


def standard_yoshida(G: permgrp.PermGroup, p: int,
                     seed: int = 0) -> mackey.YoshidaData:
    kG = fdalg.group_algebra(G, p)
    b = mackey.principal_block(kG, seed)
    return mackey.yoshida_algebra(G, p, b, seed=seed, kG=kG)


def local_uniserial_iso(A: FDAlgebra, B: FDAlgebra) -> FFMatrix:
    """An algebra isomorphism between commutative local algebras with
    radical series (d, d-1, ..., 1), e.g. a nilpotent block and k[defect].

    Picks a radical generator on each side and matches power bases.
    """
    if A.dim != B.dim or not (A.is_commutative() and B.is_commutative()):
        raise ValueError("algebras are not both commutative of equal dim")
    xa = _radical_generator(A)
    xb = _radical_generator(B)
    d = A.dim
    basis_a = _power_basis(A, xa)
    basis_b = _power_basis(B, xb)
    # map sends xa^i to xb^i; matrix in the original coordinates
    Pa = FFMatrix(np.array(basis_a, dtype=np.int64).T, A.p, _raw=True)
    Pb = FFMatrix(np.array(basis_b, dtype=np.int64).T, B.p, _raw=True)
    Pa_inv = solve_matrix(Pa, FFMatrix.identity(d, A.p))
    if Pa_inv is None:
        raise ValueError("power basis is degenerate")
    chi = Pb @ Pa_inv
    return chi


def _radical_generator(A: FDAlgebra) -> np.ndarray:
    J = fdalg.radical(A)
    if J.rows != A.dim - 1:
        raise ValueError("algebra is not local with 1-dim top")
    # an element of J whose powers reach every radical layer
    for i in range(J.rows):
        x = J.a[i]
        if _power_basis_ok(A, x):
            return x
    rng = np.random.default_rng(0)
    for _ in range(200):
        coeffs = rng.integers(0, A.p, size=J.rows)
        x = np.mod(coeffs @ J.a, A.p)
        if _power_basis_ok(A, x):
            return x
    raise ValueError("no uniserial radical generator found")


def _power_basis(A: FDAlgebra, x: np.ndarray) -> list[np.ndarray]:
    out = [A.unit.copy()]
    cur = A.unit.copy()
    for _ in range(A.dim - 1):
        cur = A.mult(cur, x)
        out.append(cur)
    return out


def _power_basis_ok(A: FDAlgebra, x: np.ndarray) -> bool:
    rows = FFMatrix(np.array(_power_basis(A, x), dtype=np.int64), A.p)
    return rank(rows) == A.dim


def cross_block_certificate(Y1: mackey.YoshidaData, Y2: mackey.YoshidaData,
                            seed: int = 0) -> morita.MoritaCertificate:
    """A Morita certificate between the Yoshida algebras of two blocks whose
    block algebras are isomorphic local uniserial algebras (e.g. the
    principal blocks of A4 and of its defect group C3 at p = 3)."""
    A = Y1.blk.algebra
    B = Y2.blk.algebra
    psi = local_uniserial_iso(A, B)
    psi_inv = solve_matrix(psi, FFMatrix.identity(A.dim, A.p))
    # X1 pulled back along psi^{-1} becomes a B-module on the same space
    acts = np.zeros((B.dim, Y1.X.dim, Y1.X.dim), dtype=np.int64)
    for i in range(B.dim):
        a_coords = (psi_inv.a @ B.basis_vector(i)) % B.p
        acts[i] = Y1.X.act_vec(a_coords).a
    X1_over_B = fdmod.ModRep(B, acts, check=False, name="X1^psi")
    match = fdmod.is_isomorphic(X1_over_B, Y2.X, seed=seed)
    if not match.isomorphic:
        raise ValueError("transported X1 is not isomorphic to X2 over B")
    theta = match.witness                     # X1^psi -> X2
    theta_inv = solve_matrix(theta, FFMatrix.identity(theta.rows, B.p))
    cols = []
    for i in range(Y1.E.dim):
        f = Y1.endo.basis_mats[i]
        g = theta @ f @ theta_inv             # an End_B(X2) matrix
        cols.append(Y2.endo.coords_of(g))
    chi = FFMatrix(np.array(cols, dtype=np.int64).T, A.p, _raw=True)
    return morita.iso_twist_certificate(Y1.E, Y2.E, chi)
