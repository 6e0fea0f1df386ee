"""Morita-equivalence certificates and their transport to corners.

A certificate is a pair of bimodules with explicit inverse tensor
isomorphisms; nothing is ever searched for, only verified.  Transport
condenses both bimodules at the distinguished corners and conjugates the
witnesses through the corner tensor identity, then re-verifies from
scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import condense, fdalg, fdmod
from .condense import CornerContext, CornerIso
from .fdalg import EndoAlgebraData, FDAlgebra, Idempotent
from .fdmod import Bimodule, ModRep, TensorProduct
from .gfmat import FFMatrix, SpanSolver, rank, solve_matrix
from .mackey import YoshidaData


@dataclass
class MoritaCertificate:
    E: FDAlgebra
    F: FDAlgebra
    M: Bimodule                  # (E, F)
    N: Bimodule                  # (F, E)
    witness_EM: FFMatrix         # M (x)_F N -> E, in quotient coordinates
    witness_FN: FFMatrix         # N (x)_E M -> F


@dataclass
class CheckItem:
    axiom: str
    ok: bool
    detail: str = ""


@dataclass
class MoritaVerdict:
    ok: bool
    checks: list[CheckItem]

    def failed(self) -> list[str]:
        return [c.axiom for c in self.checks if not c.ok]


def _bimodule_linear_checks(wit: FFMatrix, T: Bimodule, target: Bimodule,
                            tag: str) -> list[CheckItem]:
    out = []
    for i, g in enumerate(T.left_algebra.generator_elements()):
        ok = wit @ T.left_act_vec(g) == target.left_act_vec(g) @ wit
        out.append(CheckItem(f"{tag}_left_linear_g{i}", ok))
        if not ok:
            break
    for i, g in enumerate(T.right_algebra.generator_elements()):
        ok = wit @ T.right_act_vec(g) == target.right_act_vec(g) @ wit
        out.append(CheckItem(f"{tag}_right_linear_g{i}", ok))
        if not ok:
            break
    return out


def verify_morita(cand: MoritaCertificate, seed: int = 0) -> MoritaVerdict:
    """Exact verification: one-sided projectivity plus bijective bimodule maps."""
    checks: list[CheckItem] = []
    E, F, M, N = cand.E, cand.F, cand.M, cand.N
    if M.left_algebra is not E or M.right_algebra is not F or \
            N.left_algebra is not F or N.right_algebra is not E:
        raise ValueError("certificate algebras do not match its bimodules")
    checks.append(CheckItem("M_left_projective",
                            fdmod.is_projective(M.left_module(), seed)))
    checks.append(CheckItem("M_right_projective",
                            fdmod.is_projective(M.right_module(), seed)))
    checks.append(CheckItem("N_left_projective",
                            fdmod.is_projective(N.left_module(), seed)))
    checks.append(CheckItem("N_right_projective",
                            fdmod.is_projective(N.right_module(), seed)))
    TMN = fdmod.tensor_over_algebra(M, N, F)
    TNM = fdmod.tensor_over_algebra(N, M, E)
    regE = fdmod.regular_bimodule(E)
    regF = fdmod.regular_bimodule(F)
    wEM, wFN = cand.witness_EM, cand.witness_FN
    shape_ok = (wEM.shape == (E.dim, TMN.dim) and wFN.shape == (F.dim, TNM.dim))
    checks.append(CheckItem("witness_shapes", shape_ok,
                            f"EM {wEM.shape} vs {(E.dim, TMN.dim)}, "
                            f"FN {wFN.shape} vs {(F.dim, TNM.dim)}"))
    if shape_ok:
        checks.append(CheckItem("witness_EM_bijective",
                                E.dim == TMN.dim and rank(wEM) == E.dim))
        checks.append(CheckItem("witness_FN_bijective",
                                F.dim == TNM.dim and rank(wFN) == F.dim))
        checks.extend(_bimodule_linear_checks(wEM, TMN.module, regE, "witness_EM"))
        checks.extend(_bimodule_linear_checks(wFN, TNM.module, regF, "witness_FN"))
    return MoritaVerdict(ok=all(c.ok for c in checks), checks=checks)


# ---------------------------------------------------------------------
# Certificate builders
# ---------------------------------------------------------------------

def _hom_bimodule(src: EndoAlgebraData, dst: EndoAlgebraData) -> Bimodule:
    """Hom_A(X_src, X_dst) as an (End(X_dst), End(X_src))-bimodule."""
    homs = fdmod.hom_space(src.X, dst.X)
    p = src.E.p
    k = len(homs)
    stack = FFMatrix(np.array([h.a.reshape(-1) for h in homs], dtype=np.int64),
                     p, _raw=True)
    solver = SpanSolver(stack)

    def coords(mat: FFMatrix) -> np.ndarray:
        c = solver.coords_row(FFMatrix(mat.a.reshape(1, -1), p, _raw=True))
        if c is None:
            raise RuntimeError("hom space not stable under the actions")
        return c.a[0]

    lacts = np.zeros((dst.E.dim, k, k), dtype=np.int64)
    racts = np.zeros((src.E.dim, k, k), dtype=np.int64)
    for i in range(dst.E.dim):
        mat = dst.basis_mats[i]
        for j, h in enumerate(homs):
            lacts[i, :, j] = coords(mat @ h)
    for i in range(src.E.dim):
        mat = src.basis_mats[i]
        for j, h in enumerate(homs):
            racts[i, :, j] = coords(h @ mat)
    bm = Bimodule(dst.E, src.E, lacts, racts, check=False,
                  name=f"Hom({src.X.name},{dst.X.name})")
    bm._hom_basis = homs
    bm._hom_solver = solver
    return bm


def _composition_witness(left: Bimodule, right: Bimodule,
                         target_data: EndoAlgebraData,
                         middle: FDAlgebra) -> FFMatrix:
    """The map left (x)_middle right -> End given by composition of homs."""
    T = fdmod.tensor_over_algebra(left, right, middle)
    p = left.p
    lh = left._hom_basis
    rh = right._hom_basis
    raw_cols = np.zeros((target_data.E.dim, len(lh) * len(rh)), dtype=np.int64)
    for a, ha in enumerate(lh):
        for b, hb in enumerate(rh):
            raw_cols[:, a * len(rh) + b] = target_data.coords_of(ha @ hb)
    raw = FFMatrix(raw_cols, p, _raw=True)
    return raw @ T.section


def generator_variation_certificate(endoX: EndoAlgebraData,
                                    endoXp: EndoAlgebraData,
                                    seed: int = 0) -> MoritaCertificate:
    """Standard Morita certificate between End(X) and End(X') when
    add(X) = add(X'), via M = Hom(X', X) and N = Hom(X, X')."""
    A = endoX.base
    if endoXp.base is not A:
        raise ValueError("summand lists live over different algebras")
    _require_same_add(endoX.X, endoXp.X, A, seed)
    M = _hom_bimodule(endoXp, endoX)     # (E, F)
    N = _hom_bimodule(endoX, endoXp)     # (F, E)
    wEM = _composition_witness(M, N, endoX, endoXp.E)
    wFN = _composition_witness(N, M, endoXp, endoX.E)
    return MoritaCertificate(E=endoX.E, F=endoXp.E, M=M, N=N,
                             witness_EM=wEM, witness_FN=wFN)


def _require_same_add(X, Xp, A: FDAlgebra, seed: int):
    DX = fdmod.decompose(X, seed)
    DXp = fdmod.decompose(Xp, seed)
    reps_x = [DX.summands[c[0]].module for c in DX.classes]
    reps_xp = [DXp.summands[c[0]].module for c in DXp.classes]
    for U in reps_x:
        if not any(U.dim == V.dim and fdmod.indecomposable_iso(U, V) is not None
                   for V in reps_xp):
            raise ValueError("add(X) is not contained in add(X')")
    for V in reps_xp:
        if not any(U.dim == V.dim and fdmod.indecomposable_iso(V, U) is not None
                   for U in reps_x):
            raise ValueError("add(X') is not contained in add(X)")
    reg_classes = fdmod._regular_class_reps(A, seed)
    for P in reg_classes:
        if not any(P.dim == U.dim and fdmod.indecomposable_iso(P, U) is not None
                   for U in reps_x):
            raise ValueError("the regular module is not a summand of X")


def identity_certificate(E: FDAlgebra) -> MoritaCertificate:
    """E as an (E,E)-bimodule on both sides, witnesses by multiplication."""
    M = fdmod.regular_bimodule(E)
    N = fdmod.regular_bimodule(E)
    T = fdmod.tensor_over_algebra(M, N, E)
    raw_cols = np.zeros((E.dim, E.dim * E.dim), dtype=np.int64)
    for a in range(E.dim):
        for b in range(E.dim):
            raw_cols[:, a * E.dim + b] = E.mult(E.basis_vector(a),
                                                E.basis_vector(b))
    wit = FFMatrix(raw_cols, E.p, _raw=True) @ T.section
    return MoritaCertificate(E=E, F=E, M=M, N=N, witness_EM=wit,
                             witness_FN=wit)


def iso_twist_certificate(E: FDAlgebra, F: FDAlgebra,
                          chi: FFMatrix) -> MoritaCertificate:
    """A certificate induced by an explicit algebra isomorphism chi: E -> F."""
    p = E.p
    chi_inv = solve_matrix(chi, FFMatrix.identity(F.dim, p))
    if chi_inv is None:
        raise ValueError("chi is not invertible")
    # exact multiplicativity check
    for i in range(E.dim):
        for j in range(E.dim):
            lhs = (chi.a @ E.mult(E.basis_vector(i), E.basis_vector(j))) % p
            rhs = F.mult(chi.a[:, i], chi.a[:, j])
            if (lhs != rhs).any():
                raise ValueError("chi is not an algebra homomorphism")
    if ((chi.a @ E.unit) % p != F.unit).any():
        raise ValueError("chi is not unital")
    # M = F as (E, F)-bimodule through chi; N = F as (F, E)-bimodule
    lactsM = np.zeros((E.dim, F.dim, F.dim), dtype=np.int64)
    for i in range(E.dim):
        lactsM[i] = F.left_mult_matrix((chi.a @ E.basis_vector(i)) % p).a
    M = Bimodule(E, F, lactsM, F.right_mults(), check=False, name="F_chi")
    ractsN = np.zeros((E.dim, F.dim, F.dim), dtype=np.int64)
    for i in range(E.dim):
        ractsN[i] = F.right_mult_matrix((chi.a @ E.basis_vector(i)) % p).a
    N = Bimodule(F, E, F.left_mults(), ractsN, check=False, name="chi_F")
    TMN = fdmod.tensor_over_algebra(M, N, F)
    raw = np.zeros((E.dim, F.dim * F.dim), dtype=np.int64)
    for a in range(F.dim):
        for b in range(F.dim):
            raw[:, a * F.dim + b] = (chi_inv.a @ F.mult(F.basis_vector(a),
                                                        F.basis_vector(b))) % p
    wEM = FFMatrix(raw, p, _raw=True) @ TMN.section
    TNM = fdmod.tensor_over_algebra(N, M, E)
    rawf = np.zeros((F.dim, F.dim * F.dim), dtype=np.int64)
    for a in range(F.dim):
        for b in range(F.dim):
            rawf[:, a * F.dim + b] = F.mult(F.basis_vector(a), F.basis_vector(b))
    wFN = FFMatrix(rawf, p, _raw=True) @ TNM.section
    return MoritaCertificate(E=E, F=F, M=M, N=N, witness_EM=wEM,
                             witness_FN=wFN)


# ---------------------------------------------------------------------
# Transport through corners
# ---------------------------------------------------------------------

def corner_coordinate_map(ctx: CornerContext) -> FFMatrix:
    """The linear map E -> eEe, x -> coordinates of e x e in the corner basis."""
    E = ctx.E
    cols = []
    for i in range(E.dim):
        v = E.mult(ctx.e.coords, E.mult(E.basis_vector(i), ctx.e.coords))
        cols.append(ctx.corner.from_parent(v))
    return FFMatrix(np.array(cols, dtype=np.int64).T, E.p, _raw=True)


@dataclass
class TransportReport:
    input: MoritaCertificate
    e: Idempotent
    f: Idempotent
    output: MoritaCertificate
    verdict: MoritaVerdict
    add_check: Optional[list[tuple[int, int]]] = None


def transport_morita(cert: MoritaCertificate, ctx_e: CornerContext,
                     ctx_f: CornerContext, seed: int = 0) -> TransportReport:
    """Condense a verified certificate to the corners and re-verify it."""
    eMf = condense.condense_bimodule(cert.M, ctx_e, ctx_f)
    fNe = condense.condense_bimodule(cert.N, ctx_f, ctx_e)
    wEM = _corner_witness(cert.M, cert.N, eMf, fNe, cert.F, ctx_f,
                          cert.witness_EM, ctx_e)
    wFN = _corner_witness(cert.N, cert.M, fNe, eMf, cert.E, ctx_e,
                          cert.witness_FN, ctx_f)
    out = MoritaCertificate(E=ctx_e.eEe, F=ctx_f.eEe, M=eMf, N=fNe,
                            witness_EM=wEM, witness_FN=wFN)
    verdict = verify_morita(out, seed)
    if not verdict.ok:
        raise RuntimeError(f"transported certificate failed verification: "
                           f"{verdict.failed()}")
    return TransportReport(input=cert, e=ctx_e.e, f=ctx_f.e, output=out,
                           verdict=verdict)


def _corner_witness(M: Bimodule, N: Bimodule, Mc: Bimodule, Nc: Bimodule,
                    middle: FDAlgebra, ctx_mid: CornerContext,
                    witness: FFMatrix, ctx_out: CornerContext) -> FFMatrix:
    """Conjugate a tensor witness through the corner inclusion maps."""
    T_corner = fdmod.tensor_over_algebra(Mc, Nc, ctx_mid.eEe)
    T_big = fdmod.tensor_over_algebra(M, N, middle)
    inclM = Mc._corner_inclusion
    inclN = Nc._corner_inclusion
    into_big = T_big.project @ inclM.kron(inclN) @ T_corner.section
    to_corner = corner_coordinate_map(ctx_out)
    return to_corner @ witness @ into_big


# ---------------------------------------------------------------------
# add(X) <-> add(Y) correspondence
# ---------------------------------------------------------------------

def _pullback_module(rows_alg: FDAlgebra, U: ModRep, phi: FFMatrix) -> ModRep:
    """U (over the target of phi) as a module over the source algebra."""
    acts = np.zeros((rows_alg.dim, U.dim, U.dim), dtype=np.int64)
    for i in range(rows_alg.dim):
        target_coords = (phi.a @ rows_alg.basis_vector(i)) % rows_alg.p
        acts[i] = U.act_vec(target_coords).a
    return ModRep(rows_alg, acts, check=False)


def check_add_correspondence(report: TransportReport, Y_src: YoshidaData,
                             Y_dst: YoshidaData, iso_e: CornerIso,
                             iso_f: CornerIso, seed: int = 0) -> list[tuple[int, int]]:
    """Match every summand class V of X to a class W of Y with
    fNe (x)_{eEe} dual(V) isomorphic to dual(W); must be a bijection."""
    fNe = report.output.N
    eEe = report.output.E
    fFf = report.output.F
    B = Y_dst.blk.algebra
    matches: list[tuple[int, int]] = []
    used: set[int] = set()
    for vi, tag in enumerate(Y_src.summand_tags):
        dV = fdmod.dual(tag.module)              # over A^op
        dV_corner = _pullback_module(eEe, dV, iso_e.matrix)
        T = fdmod.tensor_over_algebra(fNe, dV_corner, eEe)
        left_mod = T.module                      # over fFf
        as_Bop = _pullback_module_inverse(left_mod, iso_f)
        hit = None
        for wi, wtag in enumerate(Y_dst.summand_tags):
            if wi in used:
                continue
            dW = fdmod.dual(wtag.module)
            if dW.dim != as_Bop.dim:
                continue
            if fdmod.is_isomorphic(as_Bop, dW, seed=seed).isomorphic:
                hit = wi
                break
        if hit is None:
            raise RuntimeError(f"class {vi} of X has no partner in add(Y)")
        used.add(hit)
        matches.append((vi, hit))
    if len(used) != len(Y_dst.summand_tags):
        raise RuntimeError("class correspondence is not surjective")
    return matches


def _pullback_module_inverse(U: ModRep, iso: CornerIso) -> ModRep:
    """A module over fFf rewritten over B^op through the corner isomorphism."""
    Bop = iso.target
    acts = np.zeros((Bop.dim, U.dim, U.dim), dtype=np.int64)
    for i in range(Bop.dim):
        corner_coords = (iso.inverse.a @ Bop.basis_vector(i)) % Bop.p
        acts[i] = U.act_vec(corner_coords).a
    return ModRep(Bop, acts, check=False)


# ---------------------------------------------------------------------
# Necessary-condition oracle
# ---------------------------------------------------------------------

@dataclass
class InvariantTriple:
    n_simples: int
    center_dim: int
    cartan_det: int

    def as_tuple(self):
        return (self.n_simples, self.center_dim, self.cartan_det)


def algebra_invariants(A: FDAlgebra, seed: int = 0) -> InvariantTriple:
    cd = fdalg.cartan_matrix(A, seed)
    return InvariantTriple(n_simples=cd.n_simples,
                           center_dim=fdalg.center(A).rows,
                           cartan_det=cd.det_abs)


def morita_invariants(E: FDAlgebra, F: FDAlgebra,
                      seed: int = 0) -> tuple[InvariantTriple, InvariantTriple]:
    return algebra_invariants(E, seed), algebra_invariants(F, seed)
