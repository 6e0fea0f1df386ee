import numpy as np
import pytest

from blockmack import condense, fdalg, fdmod, mackey
from blockmack.fdalg import Idempotent

from conftest import random_small_groups


def test_proj_inj_corner_dims(Y_s3, Y_c3, Y_a4, corner_s3, corner_c3, corner_a4):
    assert corner_s3.dim == 6
    assert corner_c3.dim == 3
    assert corner_a4.dim == 3


def test_corner_recovers_block_algebra(Y_s3, Y_c3, Y_a4,
                                       corner_s3, corner_c3, corner_a4):
    for Y, ctx in [(Y_s3, corner_s3), (Y_c3, corner_c3), (Y_a4, corner_a4)]:
        # e(X) is the regular module of the block algebra
        W = condense.corner_image_module(Y, ctx)
        reg = fdmod.regular_module(Y.blk.algebra)
        assert fdmod.is_isomorphic(W, reg, seed=1).isomorphic
        iso = condense.verify_corner_is_Aop(ctx, Y, seed=1)
        assert iso.matrix.shape == (ctx.dim, ctx.dim)


def test_corner_iso_trivial_group():
    triv = __import__("blockmack.permgrp", fromlist=["close_group"]) \
        .close_group(1, [[0]])
    Y = mackey.yoshida_algebra(triv, 3, mackey.principal_block(
        fdalg.group_algebra(triv, 3)), seed=1)
    ctx = condense.proj_inj_corner(Y, seed=1)
    assert ctx.dim == 1
    iso = condense.verify_corner_is_Aop(ctx, Y, seed=1)
    assert iso.target.dim == 1


def test_selfinjective_corner(Y_s3, Y_c3, Y_a4,
                              corner_s3, corner_c3, corner_a4):
    for ctx in (corner_s3, corner_c3, corner_a4):
        v = condense.verify_selfinjective_corner(ctx, seed=1)
        assert v.applicable and v.selfinjective
    # a symmetric algebra is its own selfinjective corner at e = 1
    kS3 = corner_s3.E  # any symmetric? E is not symmetric; use group algebra
    # (checked separately below with the group algebra)


def test_symmetric_algebra_is_selfinjective(kS3):
    reg = fdmod.regular_module(kS3)
    assert fdmod.is_injective(reg, seed=1)


def test_counter_probe_not_applicable(Y_s3):
    nonproj = [k for k, t in enumerate(Y_s3.summand_tags) if not t.projective]
    ctx = condense.corner_at_classes(Y_s3, nonproj, which="non-projective")
    v = condense.verify_selfinjective_corner(ctx, seed=1)
    assert not v.applicable and v.selfinjective is None
    assert "not applicable" in v.which


def test_transported_sym_form(Y_s3, corner_s3):
    iso = condense.verify_corner_is_Aop(corner_s3, Y_s3, seed=1)
    s = condense.transported_sym_form(iso)
    # the pulled-back form symmetrizes the corner: Gram symmetric invertible
    eEe = corner_s3.eEe
    probe = fdalg.FDAlgebra(eEe.p, eEe.structure, eEe.unit, s, check=True)
    assert probe.sym_form is not None


def test_condense_module_dims(Y_s3, corner_s3):
    E = Y_s3.E
    Ereg = fdmod.regular_module(E)
    eE, _, _ = condense.condense_module(corner_s3, Ereg)
    # dim eE = dim Hom(X, e(X)) = 8 for the S3 fixture
    assert eE.dim == 8
    # e applied to E*e gives the corner itself
    Ee = fdmod.projective_module(E, corner_s3.e)
    eEe_mod, _, _ = condense.condense_module(corner_s3, Ee)
    assert eEe_mod.dim == corner_s3.dim == 6
    z = fdmod.zero_module(E)
    ez, _, _ = condense.condense_module(corner_s3, z)
    assert ez.dim == 0


def test_condense_hom_module(Y_s3, corner_s3):
    # condense(Hom(X, k_triv)): dim Hom(e(X), k_triv) = dim Hom(kS3, k_triv) = 1
    E = Y_s3.E
    one_dim_tags = [t for t in Y_s3.summand_tags if t.dimension == 1]
    tag = one_dim_tags[0]
    homs = fdmod.hom_space(Y_s3.X, tag.module)
    k = len(homs)
    p = E.p
    from blockmack.gfmat import FFMatrix, SpanSolver
    stack = FFMatrix(np.array([h.a.reshape(-1) for h in homs]), p)
    solver = SpanSolver(stack)
    acts = np.zeros((E.dim, k, k), dtype=np.int64)
    for i in range(E.dim):
        mat = Y_s3.endo.basis_mats[i]
        for j, h in enumerate(homs):
            acts[i, :, j] = solver.coords_row(
                FFMatrix((h @ mat).a.reshape(1, -1), p)).a[0]
    hom_mod = fdmod.ModRep(E, acts, check=False)
    eH, _, _ = condense.condense_module(corner_s3, hom_mod)
    assert eH.dim == 1


def test_dual_condense_compatibility(Y_s3, corner_s3):
    E = Y_s3.E
    Eop = E.opposite()
    # sample right modules: eE and E as right modules
    right_reg = fdmod.right_regular_module(E)
    assert condense.dual_condense_compatible(corner_s3, right_reg, seed=1)
    eE = fdmod.projective_module(Eop, Idempotent(Eop, corner_s3.e.coords))
    assert condense.dual_condense_compatible(corner_s3, eE, seed=1)


def test_emf_base_cases(Y_s3, corner_s3):
    E = Y_s3.E
    e = corner_s3.e
    Eop = E.opposite()
    Ee = fdmod.projective_module(E, e)
    eE = fdmod.projective_module(Eop, Idempotent(Eop, e.coords))
    r = condense.check_eMf_identity(E, e, Ee, eE, seed=0)
    assert r.holds and r.lhs_dim == r.rhs_dim
    # V = eA with U an arbitrary projective
    prims = fdalg.complete_primitive_idempotents(E, seed=1)
    U_any = fdmod.projective_module(E, prims[0])
    r2 = condense.check_eMf_identity(E, e, U_any, eE, seed=0)
    assert r2.holds


def test_emf_seeded_samples(Y_s3, corner_s3):
    E = Y_s3.E
    e = corner_s3.e
    Eop = E.opposite()
    Ee = fdmod.projective_module(E, e)
    eE = fdmod.projective_module(Eop, Idempotent(Eop, e.coords))
    DU = fdmod.decompose(Ee, seed=3)
    DV = fdmod.decompose(eE, seed=3)
    rng = np.random.default_rng(99)
    for _ in range(12):
        us = [DU.summands[i].module
              for i in rng.integers(0, len(DU.summands),
                                    size=rng.integers(1, 4))]
        vs = [DV.summands[i].module
              for i in rng.integers(0, len(DV.summands),
                                    size=rng.integers(1, 4))]
        r = condense.check_eMf_identity(E, e, fdmod.direct_sum(us),
                                        fdmod.direct_sum(vs),
                                        seed=int(rng.integers(10**6)))
        assert r.holds


def test_emf_precondition(Y_s3, corner_s3):
    E = Y_s3.E
    e = corner_s3.e
    # both arguments outside add(Ee)/add(eA): a non-projective class idem
    nonproj = [t for t in Y_s3.summand_tags if not t.projective][0]
    Eiota = fdmod.projective_module(E, nonproj.idem)
    Eop = E.opposite()
    iotaE = fdmod.projective_module(Eop, Idempotent(Eop, nonproj.idem.coords))
    with pytest.raises(ValueError):
        condense.check_eMf_identity(E, e, Eiota, iotaE, seed=0)
