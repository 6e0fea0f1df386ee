"""Block-level Yoshida endomorphism algebras and the idempotent classification.

For a block idempotent b of kG and a fixed Sylow p-subgroup P, the model is

    X = (+)_Q  b * k[G/Q],    E = End_{kGb}(X),

with Q running over G-conjugacy class representatives of subgroups of P,
each class taken once.  The classification of summand classes of X matches
three conditions per class iota: E*iota injective over E, iota*E injective
over E^op, and iota(X) projective over the block algebra; the construction
asserts their equivalence on every class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fdalg, fdmod, permgrp
from .fdalg import CornerAlgebra, FDAlgebra, Idempotent
from .fdmod import ModRep
from .gfmat import FFMatrix, row_space_basis


def permutation_module(A: FDAlgebra, G: permgrp.PermGroup,
                       act: permgrp.CosetAction) -> ModRep:
    """k[G/Q] as a module over the full group algebra kG."""
    elems = A._group_elements
    n = act.n_points
    acts = np.zeros((A.dim, n, n), dtype=np.int64)
    for i, g in enumerate(elems):
        pi = act.perm_of(g)
        for c in range(n):
            acts[i, pi[c], c] = 1
    return ModRep(A, acts, check=False, name=f"k[G/Q|{n}]")


def block_algebra(kG: FDAlgebra, b: Idempotent) -> CornerAlgebra:
    """kGb as a corner of kG (b central, so the corner is the ideal)."""
    cached = getattr(b, "_block_corner", None)
    if cached is not None:
        return cached
    if kG.left_mult_matrix(b.coords) != kG.right_mult_matrix(b.coords):
        raise ValueError("idempotent is not central")
    corner = fdalg.corner_algebra(kG, b)
    b._block_corner = corner
    return corner


def block_permutation_module(kG: FDAlgebra, G: permgrp.PermGroup,
                             blk: CornerAlgebra,
                             Q: frozenset) -> ModRep:
    """The image of b on k[G/Q], as a module over the block algebra kGb."""
    act = permgrp.coset_action(G, Q)
    full = permutation_module(kG, G, act)
    bmat = full.act_vec(blk.e.coords)
    rows = row_space_basis(bmat.transpose())
    # restrict the action of the block-algebra basis to the image of b
    from .gfmat import SpanSolver
    solver = SpanSolver(rows)
    incl = rows.transpose()
    acts = np.zeros((blk.dim, rows.rows, rows.rows), dtype=np.int64)
    for i in range(blk.dim):
        img = full.act_vec(blk.rows.a[i]) @ incl
        coords = solver.coords_columns(img)
        if coords is None:
            raise RuntimeError("block does not stabilize its own image")
        acts[i] = coords.a
    return ModRep(blk.algebra, acts, check=False,
                  name=f"b.k[G/Q|{act.n_points}]")


@dataclass
class SummandClassTag:
    """Per indecomposable summand class of X: dimensions and verdicts."""
    dimension: int
    multiplicity: int
    projective: bool
    injective_E_side: bool
    idem: Idempotent                   # one primitive idempotent of E
    module: ModRep                     # representative as a block module


@dataclass
class YoshidaData:
    group: permgrp.PermGroup
    p: int
    block: Idempotent                  # central primitive idempotent of kG
    kG: FDAlgebra
    blk: CornerAlgebra                 # the block algebra kGb
    class_list: permgrp.SubgroupClassList
    q_modules: list[ModRep]            # b*k[G/Q] per class rep Q
    endo: fdalg.EndoAlgebraData        # E = End(X) with basis matrices
    X: ModRep
    decomposition: fdmod.Decomposition
    summand_tags: list[SummandClassTag]

    @property
    def E(self) -> FDAlgebra:
        return self.endo.E

    def idem_matrix(self, e: Idempotent) -> FFMatrix:
        return self.endo.mat_of(e.coords)

    def module_of_idempotent(self, e: Idempotent) -> ModRep:
        """iota(X): the image of an idempotent of E as a block module."""
        sub, _, _ = fdmod.split_by_idempotent(self.X, self.idem_matrix(e))
        return sub


def left_ideal_module(E: FDAlgebra, e: Idempotent) -> ModRep:
    """E*e as a left E-module."""
    return fdmod.projective_module(E, e)


def right_ideal_module(E: FDAlgebra, e: Idempotent) -> ModRep:
    """e*E as a left module over E^op."""
    Eop = E.opposite()
    eop = Idempotent(Eop, e.coords)
    return fdmod.projective_module(Eop, eop)


def yoshida_algebra(G: permgrp.PermGroup, p: int, b: Idempotent,
                    seed: int = 0, *,
                    kG: Optional[FDAlgebra] = None,
                    summand_order: Optional[list[int]] = None) -> YoshidaData:
    """Construct X, E, the summand classification and the source-type tags.

    `summand_order` permutes the Q-indexed summands of X (used to exercise
    order-independence); the class list itself is always canonical.
    """
    if kG is None:
        kG = fdalg.group_algebra(G, p)
    if b.algebra is not kG:
        b = Idempotent(kG, b.coords)
    blk = block_algebra(kG, b)
    P = permgrp.sylow_subgroup(G, p)
    class_list = permgrp.subgroup_class_reps(G, P, p)
    q_modules = [block_permutation_module(kG, G, blk, Q)
                 for Q in class_list.reps]
    order = list(range(len(q_modules))) if summand_order is None else summand_order
    ordered = [q_modules[i] for i in order]
    endo = fdalg.endo_algebra(blk.algebra, ordered)
    X = endo.X
    endo.E._matrix_basis = endo.basis_mats
    decomp = fdmod.decompose(X, seed=seed, end=endo.E)
    tags = []
    for k, cls in enumerate(decomp.classes):
        rep = decomp.summands[cls[0]]
        emat = rep.include @ rep.project
        idem = Idempotent(endo.E, endo.coords_of(emat))
        proj = fdmod.is_projective(rep.module, seed=seed)
        inj_E = fdmod.is_injective(left_ideal_module(endo.E, idem), seed=seed)
        tags.append(SummandClassTag(dimension=rep.module.dim,
                                    multiplicity=len(cls),
                                    projective=proj,
                                    injective_E_side=inj_E,
                                    idem=idem, module=rep.module))
    data = YoshidaData(group=G, p=p, block=b, kG=kG, blk=blk,
                       class_list=class_list, q_modules=q_modules,
                       endo=endo, X=X, decomposition=decomp,
                       summand_tags=tags)
    _assert_source_classification(data, seed)
    return data


@dataclass
class ClassVerdict:
    dimension: int
    left_injective: bool      # (i)  E*iota injective over E
    right_injective: bool     # (ii) iota*E injective over E^op
    image_projective: bool    # (iii) iota(X) projective over kGb

    @property
    def consistent(self) -> bool:
        return self.left_injective == self.right_injective == self.image_projective


def classify_idempotents(Y: YoshidaData, seed: int = 0) -> list[ClassVerdict]:
    """The three equivalent conditions, computed independently per class."""
    out = []
    for tag in Y.summand_tags:
        li = fdmod.is_injective(left_ideal_module(Y.E, tag.idem), seed=seed)
        ri = fdmod.is_injective(right_ideal_module(Y.E, tag.idem), seed=seed)
        ip = fdmod.is_projective(Y.module_of_idempotent(tag.idem), seed=seed)
        v = ClassVerdict(tag.dimension, li, ri, ip)
        if not v.consistent:
            raise RuntimeError(
                f"source classification inconsistent on a class of dim "
                f"{tag.dimension}: {v}")
        out.append(v)
    return out


def _assert_source_classification(Y: YoshidaData, seed: int):
    verdicts = classify_idempotents(Y, seed)
    for tag, v in zip(Y.summand_tags, verdicts):
        if tag.projective != v.image_projective:
            raise RuntimeError("projectivity tags disagree with classification")
    # The Q = 1 term contains the block algebra itself, so some class is
    # projective.
    if not any(t.projective for t in Y.summand_tags):
        raise RuntimeError("no projective summand class; Q=1 term missing")


def x_as_E_module(Y: YoshidaData) -> ModRep:
    """X as a left module over E (the basis matrices act directly)."""
    acts = np.stack([m.a for m in Y.endo.basis_mats])
    return ModRep(Y.E, acts, check=False, name="X over E")


def principal_block(kG: FDAlgebra, seed: int = 0) -> Idempotent:
    """The block acting as identity on the trivial module."""
    blocks = fdalg.central_primitive_idempotents(kG, seed)
    for b in blocks:
        total = int(np.sum(b.coords) % kG.p)  # action on the trivial module
        if total == 1:
            return b
    raise RuntimeError("no block acts as 1 on the trivial module")
