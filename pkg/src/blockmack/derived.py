"""Derived-equivalence transport: split corner complexes, build eMf/fNe,
verify the two quasi-isomorphisms with one-sided homotopy equivalences, and
emit a derived-equivalence certificate.

The output type is deliberately weaker than a Rickard certificate: the
corner complexes come with bimodule quasi-isomorphisms whose one-sided
restrictions are homotopy equivalences, plus a table of derived invariants
that must agree.  Nothing here upgrades that to a two-sided homotopy
equivalence.

Witness synthesis follows the minimization route: minimize the one-sided
restriction, identify the minimal part with the corner algebra in a single
degree, lift through the minimization isomorphism, then correct by an
automorphism so the forward-after-backward composite is the identity and
solve the remaining null-homotopy exactly.  Any failure is reported as
"not verified", never as success.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import chainkit, condense, fdalg, fdmod, mackey, morita, permgrp
from .chainkit import (BoundedComplex, ChainMap, ComplexTensor,
                       HomotopyWitness, RickardCertificate, cone,
                       direct_sum_complexes, identity_chain_map, minimize,
                       single_complex, tensor_complexes)
from .condense import CornerContext
from .fdalg import FDAlgebra, Idempotent
from .fdmod import Bimodule, ModRep
from .gfmat import FFMatrix, rank, solve_matrix, kernel, row_space_basis
from .morita import InvariantTriple, MoritaCertificate, algebra_invariants


# ---------------------------------------------------------------------
# Rickard certificate builders
# ---------------------------------------------------------------------

def rickard_from_morita(cert: MoritaCertificate) -> RickardCertificate:
    """Embed a Morita certificate in degree zero; homotopies are empty."""
    M = single_complex(cert.M, 0, name="M")
    N = single_complex(cert.N, 0, name="N")
    TE = tensor_complexes(M, N, cert.F).complex
    TF = tensor_complexes(N, M, cert.E).complex
    tgtE = single_complex(fdmod.regular_bimodule(cert.E), 0, name="E")
    tgtF = single_complex(fdmod.regular_bimodule(cert.F), 0, name="F")
    wEM_inv = solve_matrix(cert.witness_EM,
                           FFMatrix.identity(cert.E.dim, cert.E.p))
    wFN_inv = solve_matrix(cert.witness_FN,
                           FFMatrix.identity(cert.F.dim, cert.F.p))
    htpy_E = HomotopyWitness(fwd=ChainMap(TE, tgtE, {0: cert.witness_EM}),
                             bwd=ChainMap(tgtE, TE, {0: wEM_inv}),
                             h_src={}, h_tgt={})
    htpy_F = HomotopyWitness(fwd=ChainMap(TF, tgtF, {0: cert.witness_FN}),
                             bwd=ChainMap(tgtF, TF, {0: wFN_inv}),
                             h_src={}, h_tgt={})
    return RickardCertificate(E=cert.E, F=cert.F, M=M, N=N,
                              htpy_E=htpy_E, htpy_F=htpy_F)


@dataclass
class SynthesisFailure(Exception):
    reason: str

    def __str__(self):
        return self.reason


def synthesize_homotopy_witness(S: BoundedComplex, target: BoundedComplex,
                                seed: int = 0) -> HomotopyWitness:
    """A homotopy equivalence S ~ target for a single-degree target.

    Minimize S; the minimal part must match the target degreewise up to
    isomorphism.  Raises SynthesisFailure when it does not.
    """
    res = minimize(S, seed=seed)
    sigma: dict[int, FFMatrix] = {}
    for n in range(min(S.lo, target.lo), max(S.hi, target.hi) + 1):
        c0 = res.C0.component(n)
        t = target.component(n)
        if c0.dim != t.dim:
            raise SynthesisFailure(
                f"minimal part has dim {c0.dim} vs target {t.dim} in degree {n}")
        if c0.dim == 0:
            continue
        iso = fdmod.is_isomorphic(c0, t, seed=seed)
        if not iso.isomorphic:
            raise SynthesisFailure(f"minimal part not isomorphic to target "
                                   f"in degree {n}")
        sigma[n] = iso.witness
    # check sigma is a chain map (for single-degree targets this is empty)
    for n in range(target.lo + 1, target.hi + 1):
        if n in sigma and n - 1 in sigma:
            if target.differential(n) @ sigma[n] != \
                    sigma[n - 1] @ res.C0.differential(n):
                raise SynthesisFailure("degreewise isomorphism is not a "
                                       "chain map")
    fwd_comps = {}
    bwd_comps = {}
    for n in range(S.lo, S.hi + 1):
        dim0 = res.C0.component(n).dim
        dimS = S.component(n).dim
        if dimS == 0:
            continue
        iso_n = res.iso[n]
        inv_n = solve_matrix(iso_n, FFMatrix.identity(dimS, S.p))
        proj0 = FFMatrix(iso_n.a[:dim0].copy(), S.p, _raw=True)
        sect0 = FFMatrix(inv_n.a[:, :dim0].copy(), S.p, _raw=True)
        if n in sigma:
            fwd_comps[n] = sigma[n] @ proj0
            inv_sigma = solve_matrix(sigma[n],
                                     FFMatrix.identity(sigma[n].rows, S.p))
            bwd_comps[n] = sect0 @ inv_sigma
    fwd = ChainMap(S, target, fwd_comps)
    bwd = ChainMap(target, S, bwd_comps)
    fwd.verify()
    bwd.verify()
    # fwd o bwd = id on the target holds by construction; solve the source side
    comp = bwd.compose(fwd)
    diff = ChainMap(S, S, {n: comp.component(n) -
                           FFMatrix.identity(S.component(n).dim, S.p)
                           for n in range(S.lo, S.hi + 1)})
    h_src = chainkit.null_homotopy(diff)
    if h_src is None:
        raise SynthesisFailure("source-side homotopy system is unsolvable")
    for n in range(target.lo, target.hi + 1):
        got = fwd.component(n) @ bwd.component(n)
        if got != FFMatrix.identity(target.component(n).dim, S.p):
            raise SynthesisFailure("forward-after-backward is not the identity")
    return HomotopyWitness(fwd=fwd, bwd=bwd, h_src=h_src, h_tgt={})


def make_rickard_certificate(E: FDAlgebra, F: FDAlgebra, M: BoundedComplex,
                             N: BoundedComplex,
                             seed: int = 0) -> RickardCertificate:
    """Package complexes into a certificate, synthesizing all witnesses."""
    TE = tensor_complexes(M, N, F).complex
    TF = tensor_complexes(N, M, E).complex
    tgtE = single_complex(fdmod.regular_bimodule(E), 0, name="E")
    tgtF = single_complex(fdmod.regular_bimodule(F), 0, name="F")
    htpy_E = synthesize_homotopy_witness(TE, tgtE, seed)
    htpy_F = synthesize_homotopy_witness(TF, tgtF, seed)
    return RickardCertificate(E=E, F=F, M=M, N=N, htpy_E=htpy_E,
                              htpy_F=htpy_F)


def identity_rickard_certificate(E: FDAlgebra) -> RickardCertificate:
    return rickard_from_morita(morita.identity_certificate(E))


def shift_certificate(cert: RickardCertificate, k: int,
                      seed: int = 0) -> RickardCertificate:
    """The certificate with M shifted by [k] and N by [-k]."""
    return make_rickard_certificate(cert.E, cert.F, cert.M.shift(k),
                                    cert.N.shift(-k), seed=seed)


def pad_certificate_with_cone(cert: RickardCertificate, degree: int = 0,
                              seed: int = 0) -> RickardCertificate:
    """Adjoin cone(id) of the regular (E,F)-prototype M[degree] summand to M."""
    piece = cert.M.component(_lowest_nonzero_degree(cert.M))
    padding = cone(identity_chain_map(
        single_complex(piece, degree, name="pad")), check=False)
    M2 = direct_sum_complexes([cert.M, padding])
    return make_rickard_certificate(cert.E, cert.F, M2, cert.N, seed=seed)


def _lowest_nonzero_degree(C: BoundedComplex) -> int:
    for n in range(C.lo, C.hi + 1):
        if C.component(n).dim:
            return n
    raise ValueError("zero complex")


# ---------------------------------------------------------------------
# Corner complexes
# ---------------------------------------------------------------------

def condense_complex(C: BoundedComplex, left: Optional[CornerContext],
                     right: Optional[CornerContext]) -> BoundedComplex:
    """Degreewise corner condensation of a bimodule complex."""
    comps = {}
    incls = {}
    projs = {}
    for n in range(C.lo, C.hi + 1):
        comp = C.component(n)
        if comp.dim == 0:
            comps[n] = _zero_corner_bimodule(comp, left, right)
            incls[n] = FFMatrix.zeros(comp.dim, 0, C.p)
            projs[n] = FFMatrix.zeros(0, comp.dim, C.p)
            continue
        sub = condense.condense_bimodule(comp, left, right)
        comps[n] = sub
        incls[n] = sub._corner_inclusion
        projs[n] = sub._corner_projection
    diffs = {}
    for n in range(C.lo + 1, C.hi + 1):
        diffs[n] = projs[n - 1] @ C.differential(n) @ incls[n]
    out = BoundedComplex(C.lo, C.hi, comps, diffs, check=False,
                         name=f"corner({C.name})")
    out._corner_incls = incls
    out._corner_projs = projs
    return out


def _zero_corner_bimodule(comp: Bimodule, left, right) -> Bimodule:
    la = left.eEe if left is not None else comp.left_algebra
    ra = right.eEe if right is not None else comp.right_algebra
    return Bimodule(la, ra, np.zeros((la.dim, 0, 0), dtype=np.int64),
                    np.zeros((ra.dim, 0, 0), dtype=np.int64), check=False)


@dataclass
class SplitCornerResult:
    N0: BoundedComplex
    N1: BoundedComplex
    violations: list
    minimization: chainkit.MinimizeResult


def split_corner_complex(N: BoundedComplex, ctx_e: CornerContext,
                         ctx_f: CornerContext,
                         seed: int = 0) -> SplitCornerResult:
    """Ne minimized into N0 + N1 with N0 components inside add(Ff).

    N is a complex of (F, E)-bimodules; Ne keeps the left F-structure.
    """
    Ne = condense_complex(N, None, ctx_e).restrict_left()
    res = minimize(Ne, seed=seed)
    F = N.component(_lowest_nonzero_degree(N)).left_algebra
    Ff = fdmod.projective_module(F, ctx_f.e)
    ref = fdmod.decompose(Ff, seed=seed)
    ref_classes = [ref.summands[c[0]].module for c in ref.classes]
    violations = chainkit.projinj_components_check(res.C0, ref_classes, seed)
    return SplitCornerResult(N0=res.C0, N1=res.C1, violations=violations,
                             minimization=res)


# ---------------------------------------------------------------------
# The derived certificate
# ---------------------------------------------------------------------

@dataclass
class QisWitness:
    comparison: ChainMap                 # corner tensor -> corner algebra [0]
    homology_dims: dict[int, int]
    homology_iso: bool
    left_witness: Optional[HomotopyWitness]
    right_witness: Optional[HomotopyWitness]

    @property
    def verified(self) -> bool:
        return (self.homology_iso and self.left_witness is not None
                and self.right_witness is not None)


@dataclass
class DerivedCertificate:
    eEe: FDAlgebra
    fFf: FDAlgebra
    eMf: BoundedComplex
    fNe: BoundedComplex
    qis_E: QisWitness
    qis_F: QisWitness
    invariants_table: tuple[InvariantTriple, InvariantTriple]
    verified: bool
    diagnostics: list[str] = field(default_factory=list)


def _corner_tensor_comparison(Mc: BoundedComplex, Nc: BoundedComplex,
                              M: BoundedComplex, N: BoundedComplex,
                              middle: FDAlgebra, corner_mid: FDAlgebra,
                              fwd: ChainMap, ctx_out: CornerContext
                              ) -> ChainMap:
    """The chain map eMf (x) fNe -> corner of (M (x) N) -> eEe[0]."""
    ct_corner = tensor_complexes(Mc, Nc, corner_mid)
    ct_big = tensor_complexes(M, N, middle)
    to_corner = morita.corner_coordinate_map(ctx_out)
    comps = {}
    T = ct_corner.complex
    for n in range(T.lo, T.hi + 1):
        if n != 0 or T.component(n).dim == 0:
            continue
        embed = np.zeros((ct_big.complex.component(n).dim,
                          T.component(n).dim), dtype=np.int64)
        for cell, off in ct_corner.offsets[n].items():
            i, j = cell
            Tc = ct_corner.grid[cell]
            Tb = ct_big.grid[cell]
            inclM = Mc.component(i)._corner_inclusion if Mc.component(i).dim \
                else FFMatrix.zeros(M.component(i).dim, 0, T.p)
            inclN = Nc.component(j)._corner_inclusion if Nc.component(j).dim \
                else FFMatrix.zeros(N.component(j).dim, 0, T.p)
            block = Tb.project @ inclM.kron(inclN) @ Tc.section
            roff = ct_big.offsets[n][cell]
            embed[roff:roff + Tb.dim, off:off + Tc.dim] = block.a
        embed_m = FFMatrix(embed, T.p, _raw=True)
        comps[n] = to_corner @ fwd.component(n) @ embed_m
    target = single_complex(fdmod.regular_bimodule(ctx_out.eEe), 0)
    out = ChainMap(T, target, comps)
    out._corner_tensor = ct_corner
    return out


def _homology_iso_check(q: ChainMap) -> tuple[dict[int, int], bool]:
    """Is the induced map on homology an isomorphism (target in degree 0)?"""
    T = q.src
    dims = chainkit.homology(T)
    tgt_dim = q.dst.component(0).dim
    ok = all(d == (tgt_dim if n == 0 else 0) for n, d in dims.items())
    if ok and tgt_dim:
        d0 = T.differential(0)
        Z = kernel(d0) if d0.cols else FFMatrix.zeros(0, 0, T.p)
        img = q.component(0) @ Z.transpose()
        ok = rank(img) == tgt_dim
    return dims, ok


def _one_sided_inverse(q: ChainMap, side: str,
                       seed: int) -> Optional[HomotopyWitness]:
    """Homotopy inverse of the one-sided restriction of q, or None."""
    S = q.src.restrict_left() if side == "left" else q.src.restrict_right()
    Tg = q.dst.restrict_left() if side == "left" else q.dst.restrict_right()
    q_side = ChainMap(S, Tg, dict(q.comps))
    try:
        base = synthesize_homotopy_witness(S, Tg, seed)
    except SynthesisFailure:
        return None
    # mu = q_side o base.bwd is a degree-0 endomorphism of the target
    mu = q_side.compose(base.bwd)
    mu0 = mu.component(0)
    if rank(mu0) != Tg.component(0).dim:
        return None
    mu_inv = solve_matrix(mu0, FFMatrix.identity(mu0.rows, S.p))
    r = ChainMap(Tg, S, {n: base.bwd.component(n) @ mu_inv
                         for n in base.bwd.comps})
    # now q_side o r = id on the target exactly
    comp = r.compose(q_side)
    diff = ChainMap(S, S, {n: comp.component(n) -
                           FFMatrix.identity(S.component(n).dim, S.p)
                           for n in range(S.lo, S.hi + 1)})
    h = chainkit.null_homotopy(diff)
    if h is None:
        return None
    for n in range(Tg.lo, Tg.hi + 1):
        got = q_side.component(n) @ r.component(n)
        if got != FFMatrix.identity(Tg.component(n).dim, S.p):
            return None
    return HomotopyWitness(fwd=q_side, bwd=r, h_src=h, h_tgt={})


def transport_derived(cert: RickardCertificate, ctx_e: CornerContext,
                      ctx_f: CornerContext, seed: int = 0) -> DerivedCertificate:
    """Theorem-3 transport: corner complexes plus verified quasi-isomorphisms."""
    diagnostics: list[str] = []
    eMf = condense_complex(cert.M, ctx_e, ctx_f)
    fNe = condense_complex(cert.N, ctx_f, ctx_e)
    qE = _corner_tensor_comparison(eMf, fNe, cert.M, cert.N, cert.F,
                                   ctx_f.eEe, cert.htpy_E.fwd, ctx_e)
    qF = _corner_tensor_comparison(fNe, eMf, cert.N, cert.M, cert.E,
                                   ctx_e.eEe, cert.htpy_F.fwd, ctx_f)
    qE.verify()
    qF.verify()
    dimsE, okE = _homology_iso_check(qE)
    dimsF, okF = _homology_iso_check(qF)
    if not okE:
        diagnostics.append(f"E-side homology not concentrated/iso: {dimsE}")
    if not okF:
        diagnostics.append(f"F-side homology not concentrated/iso: {dimsF}")
    lwE = _one_sided_inverse(qE, "left", seed)
    rwE = _one_sided_inverse(qE, "right", seed)
    lwF = _one_sided_inverse(qF, "left", seed)
    rwF = _one_sided_inverse(qF, "right", seed)
    for tag, w in [("E left", lwE), ("E right", rwE),
                   ("F left", lwF), ("F right", rwF)]:
        if w is None:
            diagnostics.append(f"{tag} homotopy-inverse synthesis failed")
    invE = algebra_invariants(ctx_e.eEe, seed)
    invF = algebra_invariants(ctx_f.eEe, seed)
    if invE.as_tuple() != invF.as_tuple():
        diagnostics.append(f"derived invariants differ: {invE} vs {invF}")
        raise RuntimeError("invariant tables disagree; certificate rejected: "
                           + "; ".join(diagnostics))
    qis_E = QisWitness(comparison=qE, homology_dims=dimsE, homology_iso=okE,
                       left_witness=lwE, right_witness=rwE)
    qis_F = QisWitness(comparison=qF, homology_dims=dimsF, homology_iso=okF,
                       left_witness=lwF, right_witness=rwF)
    verified = qis_E.verified and qis_F.verified and not diagnostics
    return DerivedCertificate(eEe=ctx_e.eEe, fFf=ctx_f.eEe, eMf=eMf, fNe=fNe,
                              qis_E=qis_E, qis_F=qis_F,
                              invariants_table=(invE, invF),
                              verified=verified, diagnostics=diagnostics)


def derived_invariants(A: FDAlgebra, seed: int = 0) -> InvariantTriple:
    return algebra_invariants(A, seed)


# ---------------------------------------------------------------------
# Nilpotent-block probe
# ---------------------------------------------------------------------

@dataclass
class NilpotentProbeReport:
    group_order: int
    p: int
    defect_order: int
    block_dim: int
    basic_dim: int
    basic_local: bool
    basic_commutative: bool
    radical_series: list[int]
    kp_radical_series: list[int]
    yoshida_invariants: InvariantTriple
    sylow_yoshida_invariants: InvariantTriple
    consistent: bool
    diagnostics: list[str]


def _radical_series_dims(A: FDAlgebra, seed: int = 0) -> list[int]:
    """Dims of A, J, J^2, ... down to zero (zero omitted)."""
    from .gfmat import SpanSolver, vstack as vs
    series = [A.dim]
    J = fdalg.radical(A, seed)
    cur = J
    while cur.rows:
        series.append(cur.rows)
        rows = []
        for i in range(cur.rows):
            for j in range(J.rows):
                rows.append(A.mult(cur.a[i], J.a[j]))
        if rows:
            stacked = FFMatrix(np.array(rows, dtype=np.int64), A.p)
            cur = row_space_basis(stacked)
        else:
            break
        if cur.rows == 0:
            break
    return series


def nilpotent_probe(G: permgrp.PermGroup, p: int,
                    seed: int = 0) -> NilpotentProbeReport:
    """Necessary conditions for nilpotency of the principal block.

    Compares the basic algebra of the block with the group algebra of the
    Sylow subgroup, and the derived invariants of the two Yoshida algebras.
    Never asserts nilpotency, only consistency.
    """
    diagnostics: list[str] = []
    kG = fdalg.group_algebra(G, p)
    b0 = mackey.principal_block(kG, seed)
    blk = mackey.block_algebra(kG, b0)
    A = blk.algebra
    P = permgrp.sylow_subgroup(G, p)
    Pgrp = permgrp.as_perm_group(G, P)
    kP = fdalg.group_algebra(Pgrp, p)
    idems = fdalg.complete_primitive_idempotents(A, seed)
    # one idempotent per projective class
    reps: list[Idempotent] = []
    for e in idems:
        Pe = fdmod.projective_module(A, e)
        if not any(Pe.dim == fdmod.projective_module(A, f).dim and
                   fdmod.indecomposable_iso(
                       Pe, fdmod.projective_module(A, f)) is not None
                   for f in reps):
            reps.append(e)
    e_basic = np.zeros(A.dim, dtype=np.int64)
    for e in reps:
        e_basic = np.mod(e_basic + e.coords, A.p)
    basic = fdalg.corner_algebra(A, Idempotent(A, e_basic)).algebra
    basic_local = len(reps) == 1
    basic_comm = basic.is_commutative()
    series = _radical_series_dims(basic, seed)
    kp_series = _radical_series_dims(kP, seed)
    Yg = mackey.yoshida_algebra(G, p, b0, seed=seed, kG=kG)
    bP = mackey.principal_block(kP, seed)
    Yp = mackey.yoshida_algebra(Pgrp, p, bP, seed=seed, kG=kP)
    invG = algebra_invariants(Yg.E, seed)
    invP = algebra_invariants(Yp.E, seed)
    if not basic_local:
        diagnostics.append(f"basic algebra has {len(reps)} simple classes")
    if basic.dim != kP.dim:
        diagnostics.append(f"basic dim {basic.dim} != |P| = {kP.dim}")
    if basic_comm != kP.is_commutative():
        diagnostics.append("commutativity of basic algebra differs from kP")
    if series != kp_series:
        diagnostics.append(f"radical series {series} != kP series {kp_series}")
    if invG.as_tuple() != invP.as_tuple():
        diagnostics.append(f"Yoshida invariants differ: {invG} vs {invP}")
    return NilpotentProbeReport(
        group_order=G.order, p=p, defect_order=len(P), block_dim=A.dim,
        basic_dim=basic.dim, basic_local=basic_local,
        basic_commutative=basic_comm, radical_series=series,
        kp_radical_series=kp_series, yoshida_invariants=invG,
        sylow_yoshida_invariants=invP, consistent=not diagnostics,
        diagnostics=diagnostics)
