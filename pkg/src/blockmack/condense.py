"""Idempotent condensation: corners eEe, condensed modules eU, and the
constructive checks the equivalence-transport arguments rest on.

The distinguished corner comes from the projective(-injective) summand
classes of X: e is the sum of one primitive idempotent per projective
class, so e(X) recovers the block algebra and eEe is its opposite, which
the restriction map exhibits explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fdalg, fdmod
from .fdalg import CornerAlgebra, FDAlgebra, Idempotent
from .fdmod import Bimodule, ModRep, TensorProduct
from .gfmat import (FFMatrix, SpanSolver, rank, row_space_basis, solve_matrix,
                    vstack)
from .mackey import YoshidaData


@dataclass
class CornerContext:
    """A corner eEe with provenance of the defining idempotent."""
    E: FDAlgebra
    e: Idempotent
    corner: CornerAlgebra
    which: str
    endo: object = None          # EndoAlgebraData when E is an End algebra
    proj_inj: bool = False       # e assembled from the projective classes?

    @property
    def eEe(self) -> FDAlgebra:
        return self.corner.algebra

    @property
    def dim(self) -> int:
        return self.corner.dim


def proj_inj_corner(Y: YoshidaData, seed: int = 0) -> CornerContext:
    """e = sum of one primitive idempotent per projective summand class."""
    coords = np.zeros(Y.E.dim, dtype=np.int64)
    picked = 0
    for tag in Y.summand_tags:
        if tag.projective:
            coords = np.mod(coords + tag.idem.coords, Y.E.p)
            picked += 1
    if picked == 0:
        raise RuntimeError("no projective class; the Q=1 summand guarantees one")
    e = Idempotent(Y.E, coords)
    corner = fdalg.corner_algebra(Y.E, e)
    return CornerContext(E=Y.E, e=e, corner=corner,
                         which="sum of projective-injective class idempotents",
                         endo=Y.endo, proj_inj=True)


def proj_inj_corner_of_endo(endo: fdalg.EndoAlgebraData,
                            seed: int = 0) -> CornerContext:
    """The proj-inj corner of End(X) for any endo-algebra data.

    Decomposes X, tags summand classes by projectivity over the base
    algebra, and sums one primitive idempotent per projective class.
    """
    decomp = fdmod.decompose(endo.X, seed=seed)
    coords = np.zeros(endo.E.dim, dtype=np.int64)
    picked = 0
    for cls in decomp.classes:
        rep = decomp.summands[cls[0]]
        if fdmod.is_projective(rep.module, seed=seed):
            emat = rep.include @ rep.project
            coords = np.mod(coords + endo.coords_of(emat), endo.E.p)
            picked += 1
    if picked == 0:
        raise RuntimeError("X has no projective summand class")
    e = Idempotent(endo.E, coords)
    corner = fdalg.corner_algebra(endo.E, e)
    return CornerContext(E=endo.E, e=e, corner=corner,
                         which="sum of projective-injective class idempotents",
                         endo=endo, proj_inj=True)


def corner_at_classes(Y: YoshidaData, class_indices: list[int],
                      which: str = "custom class selection") -> CornerContext:
    coords = np.zeros(Y.E.dim, dtype=np.int64)
    for k in class_indices:
        coords = np.mod(coords + Y.summand_tags[k].idem.coords, Y.E.p)
    e = Idempotent(Y.E, coords)
    corner = fdalg.corner_algebra(Y.E, e)
    proj_inj = all(Y.summand_tags[k].projective for k in class_indices) and \
        {k for k in class_indices} == \
        {k for k, t in enumerate(Y.summand_tags) if t.projective}
    return CornerContext(E=Y.E, e=e, corner=corner, which=which,
                         endo=Y.endo, proj_inj=proj_inj)


def corner_image_module(Y: YoshidaData, ctx: CornerContext) -> ModRep:
    """e(X) as a module over the block algebra."""
    emat = Y.endo.mat_of(ctx.e.coords)
    sub, _, _ = fdmod.split_by_idempotent(Y.X, emat)
    return sub


@dataclass
class CornerIso:
    """An exact algebra isomorphism eEe -> A^op through End_A(e(X))."""
    ctx: CornerContext
    target: FDAlgebra            # A^op for A the block algebra
    matrix: FFMatrix             # corner coords -> A^op coords
    inverse: FFMatrix
    alpha: FFMatrix              # A-module iso: regular A -> e(X) inside X


def verify_corner_is_Aop(ctx: CornerContext, Y=None,
                         seed: int = 0) -> CornerIso:
    """Build and verify the isomorphism eEe -> End_A(e(X)) -> A^op.

    Requires e(X) isomorphic to the regular module of the base algebra;
    that holds for the proj-inj corner whenever the regular module is
    multiplicity-free, which covers all fixtures.  Accepts YoshidaData or
    falls back to the endo data stored on the context.
    """
    endo = Y.endo if Y is not None else ctx.endo
    if endo is None:
        raise ValueError("corner context carries no endo-algebra data")
    A = endo.base
    Aop = A.opposite()
    emat = endo.mat_of(ctx.e.coords)
    W, incl, proj = fdmod.split_by_idempotent(endo.X, emat)
    reg = fdmod.regular_module(A)
    iso = fdmod.is_isomorphic(reg, W, seed=seed)
    if not iso.isomorphic:
        raise RuntimeError("e(X) is not isomorphic to the block algebra; "
                           "corner recovery needs the multiplicity-free case")
    alpha = iso.witness                      # columns: A-coords -> W-coords
    alpha_inv = solve_matrix(alpha, FFMatrix.identity(alpha.rows, alpha.p))
    cols = []
    for i in range(ctx.dim):
        x = ctx.corner.to_parent(np.eye(ctx.dim, dtype=np.int64)[i])
        xmat = endo.mat_of(x)
        # restriction of x to W, conjugated to an endomorphism of regular A
        endo_mat = alpha_inv @ (proj @ xmat @ incl) @ alpha
        # an A-endomorphism of the regular module is right multiplication
        a = endo_mat @ FFMatrix(A.unit.reshape(-1, 1), A.p)
        if A.right_mult_matrix(a.a[:, 0]) != endo_mat:
            raise RuntimeError("restricted endomorphism is not a right "
                               "multiplication; corner map is broken")
        cols.append(a.a[:, 0])
    phi = FFMatrix(np.array(cols, dtype=np.int64).T, A.p, _raw=True)
    # exact checks: unital, multiplicative into A^op, bijective
    eq_unit = (phi @ FFMatrix(ctx.eEe.unit.reshape(-1, 1), A.p)).a[:, 0]
    if (eq_unit != Aop.unit).any():
        raise RuntimeError("corner map is not unital")
    inv = _two_sided_inverse(phi)
    if inv is None:
        raise RuntimeError("corner map is not bijective")
    d = ctx.dim
    for i in range(d):
        for j in range(d):
            prod = ctx.eEe.mult(np.eye(d, dtype=np.int64)[i],
                                np.eye(d, dtype=np.int64)[j])
            lhs = (phi @ FFMatrix(prod.reshape(-1, 1), A.p)).a[:, 0]
            rhs = Aop.mult((phi.a @ np.eye(d, dtype=np.int64)[i]) % A.p,
                           (phi.a @ np.eye(d, dtype=np.int64)[j]) % A.p)
            if (lhs != rhs).any():
                raise RuntimeError("corner map is not multiplicative into A^op")
    return CornerIso(ctx=ctx, target=Aop, matrix=phi, inverse=inv, alpha=alpha)


def _two_sided_inverse(M: FFMatrix) -> Optional[FFMatrix]:
    if M.rows != M.cols or rank(M) != M.rows:
        return None
    return solve_matrix(M, FFMatrix.identity(M.rows, M.p))


def transported_sym_form(iso: CornerIso) -> np.ndarray:
    """Pull the symmetrizing form of A^op back to the corner."""
    s = iso.target.sym_form
    if s is None:
        raise ValueError("target algebra carries no symmetrizing form")
    return np.mod(s.reshape(1, -1) @ iso.matrix.a, iso.target.p)[0]


@dataclass
class SelfinjectiveVerdict:
    applicable: bool
    selfinjective: Optional[bool]
    which: str


def verify_selfinjective_corner(ctx: CornerContext,
                                seed: int = 0) -> SelfinjectiveVerdict:
    """Is the corner selfinjective?  Only claimed for the proj-inj corner."""
    if not ctx.proj_inj:
        return SelfinjectiveVerdict(applicable=False, selfinjective=None,
                                    which=f"not applicable: {ctx.which}")
    reg = fdmod.regular_module(ctx.eEe)
    return SelfinjectiveVerdict(applicable=True,
                                selfinjective=fdmod.is_injective(reg, seed),
                                which=ctx.which)


# ---------------------------------------------------------------------
# Condensing modules and bimodules
# ---------------------------------------------------------------------

def condense_module(ctx: CornerContext, U: ModRep) -> tuple[ModRep, FFMatrix, FFMatrix]:
    """e*U as a module over eEe; returns (module, inclusion, projection)."""
    if U.algebra is not ctx.E:
        raise ValueError("module is not over the corner's ambient algebra")
    emat = U.act_vec(ctx.e.coords)
    rows = row_space_basis(emat.transpose())
    incl = rows.transpose()
    proj = solve_matrix(incl, emat)
    solver = SpanSolver(rows)
    k = rows.rows
    acts = np.zeros((ctx.dim, k, k), dtype=np.int64)
    for i in range(ctx.dim):
        big = U.act_vec(ctx.corner.rows.a[i])
        coords = solver.coords_columns(big @ incl)
        if coords is None:
            raise RuntimeError("corner element does not stabilize eU")
        acts[i] = coords.a
    return ModRep(ctx.eEe, acts, check=False, name=f"e({U.name})"), incl, proj


def condense_bimodule(M: Bimodule, left: Optional[CornerContext],
                      right: Optional[CornerContext]) -> Bimodule:
    """eMf (or eM / Mf when one side is None) with corner actions."""
    p = M.p
    lmat = FFMatrix.identity(M.dim, p) if left is None else \
        _bimodule_left_action(M, left)
    rmat = FFMatrix.identity(M.dim, p) if right is None else \
        _bimodule_right_action(M, right)
    emat = lmat @ rmat
    if emat @ emat != emat:
        raise RuntimeError("corner projections do not commute on the bimodule")
    rows = row_space_basis(emat.transpose())
    incl = rows.transpose()
    solver = SpanSolver(rows)
    la = left.eEe if left is not None else M.left_algebra
    ra = right.eEe if right is not None else M.right_algebra
    lacts = np.zeros((la.dim, rows.rows, rows.rows), dtype=np.int64)
    racts = np.zeros((ra.dim, rows.rows, rows.rows), dtype=np.int64)
    for i in range(la.dim):
        big = (M.left_module().act_vec(left.corner.rows.a[i]) if left is not None
               else M.left_act_basis(i))
        coords = solver.coords_columns(big @ incl)
        if coords is None:
            raise RuntimeError("left corner action does not stabilize eMf")
        lacts[i] = coords.a
    for j in range(ra.dim):
        big = (M.right_module().act_vec(right.corner.rows.a[j]) if right is not None
               else M.right_act_basis(j))
        coords = solver.coords_columns(big @ incl)
        if coords is None:
            raise RuntimeError("right corner action does not stabilize eMf")
        racts[j] = coords.a
    sub = Bimodule(la, ra, lacts, racts, check=False,
                   name=f"corner({M.name})")
    sub._corner_inclusion = incl
    sub._corner_projection = solve_matrix(incl, emat)
    return sub


def _bimodule_left_action(M: Bimodule, ctx: CornerContext) -> FFMatrix:
    if M.left_algebra is not ctx.E:
        raise ValueError("left algebra mismatch for condensation")
    return M.left_module().act_vec(ctx.e.coords)


def _bimodule_right_action(M: Bimodule, ctx: CornerContext) -> FFMatrix:
    if M.right_algebra is not ctx.E:
        raise ValueError("right algebra mismatch for condensation")
    return M.right_module().act_vec(ctx.e.coords)


def dual_condense_compatible(ctx: CornerContext, U: ModRep,
                             seed: int = 0) -> bool:
    """dual(U*e) and e*dual(U) agree as corner modules.

    U is a right E-module presented over E^op; U*e condenses on the right,
    dual(U) is a left E-module.  The corner of E^op at e has the same basis
    rows as eEe with the opposite multiplication, so its opposite is eEe
    coordinate for coordinate and the two sides compare directly.
    """
    if U.algebra is not ctx.E.opposite():
        raise ValueError("expected a right module over E (left over E^op)")
    Eop = ctx.E.opposite()
    eop = Idempotent(Eop, ctx.e.coords)
    corner_op = fdalg.corner_algebra(Eop, eop)
    if not (corner_op.rows.a == ctx.corner.rows.a).all():
        raise RuntimeError("corner bases of E and E^op disagree")
    eop_ctx = CornerContext(E=Eop, e=eop, corner=corner_op,
                            which="opposite corner")
    Ue, _, _ = condense_module(eop_ctx, U)
    dual_Ue = fdmod.dual(Ue)       # structurally a module over eEe
    rebound = ModRep(ctx.eEe, dual_Ue.acts, check=False)
    left_dual, _, _ = condense_module(ctx, fdmod.dual(U))
    return fdmod.is_isomorphic(rebound, left_dual, seed=seed).isomorphic


# ---------------------------------------------------------------------
# The corner tensor identity
# ---------------------------------------------------------------------

@dataclass
class EMFReport:
    holds: bool
    lhs_dim: int
    rhs_dim: int
    map_rank: int


def check_eMf_identity(A: FDAlgebra, e: Idempotent, U: ModRep, V: ModRep,
                       seed: int = 0) -> EMFReport:
    """The natural map Ve (x)_{eAe} eU -> V (x)_A U is bijective.

    Hypothesis: U is a finite direct sum of summands of Ae, or V of eA;
    verified by decomposing against the reference ideal before tensoring.
    """
    if U.algebra is not A or V.algebra is not A.opposite():
        raise ValueError("U must be a left A-module and V a right A-module")
    in_add_Ae = _in_add_of_ideal(A, e, U, side="left", seed=seed)
    in_add_eA = _in_add_of_ideal(A, e, V, side="right", seed=seed)
    if not (in_add_Ae or in_add_eA):
        raise ValueError("hypothesis fails: U not in add(Ae) and V not in add(eA)")
    corner = fdalg.corner_algebra(A, e)
    # eU as a left eAe-module
    eU, eU_incl, _ = _corner_restrict_left(corner, U)
    # Ve as a right eAe-module (left over the corner's opposite)
    Ve, Ve_incl, _ = _corner_restrict_right(corner, V)
    lhs = fdmod.tensor_over_algebra(Ve, eU, corner.algebra)
    rhs = fdmod.tensor_over_algebra(V, U, A)
    nat = rhs.project @ Ve_incl.kron(eU_incl) @ lhs.section
    holds = (lhs.dim == rhs.dim and rank(nat) == lhs.dim)
    return EMFReport(holds=holds, lhs_dim=lhs.dim, rhs_dim=rhs.dim,
                     map_rank=rank(nat))


def _corner_restrict_left(corner: CornerAlgebra, U: ModRep):
    """e*U over eAe for a left A-module U; returns (module, incl, proj)."""
    emat = U.act_vec(corner.e.coords)
    rows = row_space_basis(emat.transpose())
    incl = rows.transpose()
    proj = solve_matrix(incl, emat)
    solver = SpanSolver(rows)
    k = rows.rows
    acts = np.zeros((corner.dim, k, k), dtype=np.int64)
    for i in range(corner.dim):
        big = U.act_vec(corner.rows.a[i])
        coords = solver.coords_columns(big @ incl)
        if coords is None:
            raise RuntimeError("corner does not stabilize eU")
        acts[i] = coords.a
    return ModRep(corner.algebra, acts, check=False), incl, proj


def _corner_restrict_right(corner: CornerAlgebra, V: ModRep):
    """V*e over eAe (as a left module over (eAe)^op) for a right A-module V."""
    A = corner.parent
    emat = V.act_vec(corner.e.coords)   # V over A^op: action of e = right mult
    rows = row_space_basis(emat.transpose())
    incl = rows.transpose()
    proj = solve_matrix(incl, emat)
    solver = SpanSolver(rows)
    k = rows.rows
    acts = np.zeros((corner.dim, k, k), dtype=np.int64)
    for i in range(corner.dim):
        big = V.act_vec(corner.rows.a[i])
        coords = solver.coords_columns(big @ incl)
        if coords is None:
            raise RuntimeError("corner does not stabilize Ve")
        acts[i] = coords.a
    return ModRep(corner.algebra.opposite(), acts, check=False), incl, proj


def _in_add_of_ideal(A: FDAlgebra, e: Idempotent, U, side: str,
                     seed: int = 0) -> bool:
    if U.dim == 0:
        return True
    if side == "left":
        ref = fdmod.projective_module(A, e)
    else:
        Aop = A.opposite()
        ref = fdmod.projective_module(Aop, Idempotent(Aop, e.coords))
    ref_classes = [s.module for s in _class_reps(ref, seed)]
    for s in _class_reps(U, seed):
        if not any(s.module.dim == r.dim and
                   fdmod.indecomposable_iso(s.module, r) is not None
                   for r in ref_classes):
            return False
    return True


def _class_reps(U, seed):
    D = fdmod.decompose(U, seed)
    return [D.summands[c[0]] for c in D.classes]
