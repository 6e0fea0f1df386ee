"""Bounded chain complexes of modules and bimodules.

Homological indexing: differentials lower degree by one, d_{n-1} d_n = 0
exactly, components vanish outside [lo, hi].  The shift [n] moves the
component in degree m to degree m+n and scales differentials by (-1)^n.

Minimization is iterated Gaussian cancellation: decompose adjacent
components into indecomposables once, then repeatedly cancel any block of
the differential that is an isomorphism between summands, via the standard
change of basis.  All basis changes are module maps, so the surviving
summands keep their module structures; the stripped pieces assemble into
an explicitly contractible complex, and the change of basis is returned as
an exact degreewise isomorphism onto minimal-plus-contractible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from . import fdmod
from .fdalg import FDAlgebra
from .fdmod import Bimodule, ModRep, TensorProduct
from .gfmat import FFMatrix, block_diag, rank, solve, solve_matrix, vstack

Component = Union[ModRep, Bimodule]


def _zero_like(template: Component) -> Component:
    if isinstance(template, Bimodule):
        A, B = template.left_algebra, template.right_algebra
        return Bimodule(A, B, np.zeros((A.dim, 0, 0), dtype=np.int64),
                        np.zeros((B.dim, 0, 0), dtype=np.int64), check=False)
    return fdmod.zero_module(template.algebra)


def _dsum(comps: list[Component]) -> Component:
    if isinstance(comps[0], Bimodule):
        return fdmod.bimodule_direct_sum(comps)
    return fdmod.direct_sum(comps)


def _generator_actions(U: Component) -> list[tuple[int, FFMatrix, str]]:
    if isinstance(U, Bimodule):
        out = [(i, U.left_act_vec(g), "left")
               for i, g in enumerate(U.left_algebra.generator_elements())]
        out += [(i, U.right_act_vec(g), "right")
                for i, g in enumerate(U.right_algebra.generator_elements())]
        return out
    return [(i, U.act_vec(g), "left")
            for i, g in enumerate(U.algebra.generator_elements())]


def _is_module_map(f: FFMatrix, src: Component, dst: Component) -> bool:
    if src.dim == 0 or dst.dim == 0:
        return True
    acts_src = _generator_actions(src)
    acts_dst = _generator_actions(dst)
    for (g, ms, side), (g2, md, side2) in zip(acts_src, acts_dst):
        if g != g2 or side != side2:
            raise ValueError("components live over different algebras")
        if f @ ms != md @ f:
            return False
    return True


class BoundedComplex:
    """A finite complex; diffs[n] maps component n to component n-1."""

    def __init__(self, lo: int, hi: int, comps: dict[int, Component],
                 diffs: dict[int, FFMatrix], *, check: bool = True,
                 name: str = ""):
        if hi < lo:
            raise ValueError("empty degree range")
        self.lo = lo
        self.hi = hi
        template = next(iter(comps.values()))
        self._template = template
        self.p = template.p
        self.comps = {}
        for n in range(lo, hi + 1):
            self.comps[n] = comps.get(n) or _zero_like(template)
        self.diffs = {}
        for n in range(lo + 1, hi + 1):
            d = diffs.get(n)
            if d is None:
                d = FFMatrix.zeros(self.comps[n - 1].dim, self.comps[n].dim,
                                   self.p)
            self.diffs[n] = d
        self.name = name
        if check:
            self.verify()

    def component(self, n: int) -> Component:
        if self.lo <= n <= self.hi:
            return self.comps[n]
        return _zero_like(self._template)

    def differential(self, n: int) -> FFMatrix:
        if self.lo + 1 <= n <= self.hi:
            return self.diffs[n]
        return FFMatrix.zeros(self.component(n - 1).dim,
                              self.component(n).dim, self.p)

    @property
    def total_dim(self) -> int:
        return sum(c.dim for c in self.comps.values())

    def is_bimodule_complex(self) -> bool:
        return isinstance(self._template, Bimodule)

    def verify(self):
        for n in range(self.lo + 1, self.hi + 1):
            d = self.diffs[n]
            if d.shape != (self.comps[n - 1].dim, self.comps[n].dim):
                raise ValueError(f"differential {n} has shape {d.shape}")
            if not _is_module_map(d, self.comps[n], self.comps[n - 1]):
                raise ValueError(f"differential {n} is not a module map")
        for n in range(self.lo + 2, self.hi + 1):
            prod = self.diffs[n - 1] @ self.diffs[n]
            if not prod.is_zero():
                raise ValueError(f"d^2 != 0 between degrees {n} and {n-2}")

    def shift(self, k: int) -> "BoundedComplex":
        sign = 1 if k % 2 == 0 else -1
        comps = {n + k: self.comps[n] for n in self.comps}
        diffs = {}
        for n, d in self.diffs.items():
            diffs[n + k] = d if sign == 1 else -d
        return BoundedComplex(self.lo + k, self.hi + k, comps, diffs,
                              check=False, name=f"{self.name}[{k}]")

    def restrict_left(self) -> "BoundedComplex":
        """Forget the right structure of a bimodule complex."""
        if not self.is_bimodule_complex():
            return self
        comps = {n: c.left_module() for n, c in self.comps.items()}
        return BoundedComplex(self.lo, self.hi, comps, dict(self.diffs),
                              check=False, name=f"{self.name}|left")

    def restrict_right(self) -> "BoundedComplex":
        if not self.is_bimodule_complex():
            return self
        comps = {n: c.right_module() for n, c in self.comps.items()}
        return BoundedComplex(self.lo, self.hi, comps, dict(self.diffs),
                              check=False, name=f"{self.name}|right")

    def __repr__(self):
        dims = {n: c.dim for n, c in sorted(self.comps.items())}
        return f"BoundedComplex({dims})"


def single_complex(U: Component, degree: int = 0,
                   name: str = "") -> BoundedComplex:
    return BoundedComplex(degree, degree, {degree: U}, {}, check=False,
                          name=name)


def direct_sum_complexes(cs: list[BoundedComplex]) -> BoundedComplex:
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    comps = {}
    diffs = {}
    for n in range(lo, hi + 1):
        comps[n] = _dsum([c.component(n) for c in cs])
    for n in range(lo + 1, hi + 1):
        diffs[n] = block_diag([c.differential(n) for c in cs], cs[0].p)
    return BoundedComplex(lo, hi, comps, diffs, check=False)


@dataclass
class ChainMap:
    src: BoundedComplex
    dst: BoundedComplex
    comps: dict[int, FFMatrix]

    def component(self, n: int) -> FFMatrix:
        if n in self.comps:
            return self.comps[n]
        return FFMatrix.zeros(self.dst.component(n).dim,
                              self.src.component(n).dim, self.src.p)

    def verify(self):
        lo = min(self.src.lo, self.dst.lo)
        hi = max(self.src.hi, self.dst.hi)
        for n in range(lo, hi + 1):
            f = self.component(n)
            if f.shape != (self.dst.component(n).dim, self.src.component(n).dim):
                raise ValueError(f"chain map has wrong shape in degree {n}")
            if not _is_module_map(f, self.src.component(n),
                                  self.dst.component(n)):
                raise ValueError(f"chain map not module-linear in degree {n}")
        for n in range(lo + 1, hi + 1):
            lhs = self.dst.differential(n) @ self.component(n)
            rhs = self.component(n - 1) @ self.src.differential(n)
            if lhs != rhs:
                raise ValueError(f"chain map does not commute with d at {n}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        lo = min(other.src.lo, self.dst.lo)
        hi = max(other.src.hi, self.dst.hi)
        comps = {n: self.component(n) @ other.component(n)
                 for n in range(lo, hi + 1)}
        return ChainMap(other.src, self.dst, comps)


def identity_chain_map(C: BoundedComplex) -> ChainMap:
    return ChainMap(C, C, {n: FFMatrix.identity(C.component(n).dim, C.p)
                           for n in range(C.lo, C.hi + 1)})


def zero_chain_map(src: BoundedComplex, dst: BoundedComplex) -> ChainMap:
    return ChainMap(src, dst, {})


def cone(f: ChainMap, check: bool = True) -> BoundedComplex:
    """The mapping cone: components dst_n + src_{n-1}."""
    if check:
        f.verify()
    C, D = f.src, f.dst
    lo = min(D.lo, C.lo + 1)
    hi = max(D.hi, C.hi + 1)
    comps = {}
    diffs = {}
    for n in range(lo, hi + 1):
        comps[n] = _dsum([D.component(n), C.component(n - 1)])
    for n in range(lo + 1, hi + 1):
        dD = D.differential(n)
        dC = C.differential(n - 1)
        fn = f.component(n - 1)
        top = np.hstack([dD.a, fn.a])
        bot = np.hstack([np.zeros((dC.rows, dD.cols), dtype=np.int64),
                         (-dC.a) % C.p])
        diffs[n] = FFMatrix(np.vstack([top, bot]), C.p, _raw=True)
    return BoundedComplex(lo, hi, comps, diffs, check=False,
                          name=f"cone({f.src.name})")


# ---------------------------------------------------------------------
# Homology and homotopy
# ---------------------------------------------------------------------

def homology(C: BoundedComplex) -> dict[int, int]:
    """H_n = ker d_n / im d_{n+1}, dimensions per degree."""
    out = {}
    for n in range(C.lo, C.hi + 1):
        dn = C.differential(n)
        dn1 = C.differential(n + 1)
        kdim = C.component(n).dim - rank(dn)
        idim = rank(dn1)
        out[n] = kdim - idim
    return out


def null_homotopy(f: ChainMap) -> Optional[dict[int, FFMatrix]]:
    """h with d h + h d = f (module-linear degreewise), or None.

    The unknowns are coefficients over the hom-space bases
    Hom(src_n, dst_{n+1}); the identity is a linear system solved exactly.
    """
    C, D = f.src, f.dst
    lo = min(C.lo, D.lo)
    hi = max(C.hi, D.hi)
    hom_bases: dict[int, list[FFMatrix]] = {}
    offsets: dict[int, int] = {}
    total = 0
    for n in range(lo, hi + 1):
        src_n = C.component(n)
        dst_n1 = D.component(n + 1)
        if src_n.dim == 0 or dst_n1.dim == 0:
            hom_bases[n] = []
        else:
            hom_bases[n] = fdmod.hom_space(src_n, dst_n1)
        offsets[n] = total
        total += len(hom_bases[n])
    rows = []
    rhs = []
    p = C.p
    for n in range(lo, hi + 1):
        fn = f.component(n)
        eq_rows = fn.rows * fn.cols
        if eq_rows == 0:
            continue
        block = np.zeros((eq_rows, total), dtype=np.int64)
        dD = D.differential(n + 1)
        for k, H in enumerate(hom_bases[n]):
            block[:, offsets[n] + k] = (dD @ H).a.reshape(-1)
        dC = C.differential(n)
        for k, G in enumerate(hom_bases.get(n - 1, [])):
            block[:, offsets[n - 1] + k] = (G @ dC).a.reshape(-1)
        rows.append(block)
        rhs.append(fn.a.reshape(-1))
    if not rows:
        return {}
    big = FFMatrix(np.vstack(rows) % p, p, _raw=True)
    b = FFMatrix(np.concatenate(rhs).reshape(-1, 1) % p, p, _raw=True)
    x = solve_matrix(big, b)
    if x is None:
        return None
    sol = x.a[:, 0]
    out = {}
    for n in range(lo, hi + 1):
        if not hom_bases[n]:
            continue
        acc = np.zeros((D.component(n + 1).dim, C.component(n).dim),
                       dtype=np.int64)
        for k, H in enumerate(hom_bases[n]):
            c = int(sol[offsets[n] + k])
            if c:
                acc = (acc + c * H.a) % p
        out[n] = FFMatrix(acc, p, _raw=True)
    return out


def is_contractible(C: BoundedComplex) -> bool:
    return null_homotopy(identity_chain_map(C)) is not None


# ---------------------------------------------------------------------
# Minimization
# ---------------------------------------------------------------------

@dataclass
class MinimizeResult:
    C0: BoundedComplex                  # minimal part
    C1: BoundedComplex                  # contractible part
    iso: dict[int, FFMatrix]            # C_n -> (C0 + C1)_n, invertible
    stripped_dim: int

    def verify(self, original: BoundedComplex):
        both = direct_sum_complexes([self.C0, self.C1])
        for n in range(original.lo, original.hi + 1):
            m = self.iso.get(n)
            dim = original.component(n).dim
            if dim == 0:
                continue
            if m is None or rank(m) != dim:
                raise RuntimeError(f"minimization iso not invertible at {n}")
        for n in range(original.lo + 1, original.hi + 1):
            lhs = both.differential(n) @ self._iso_at(original, n)
            rhs = self._iso_at(original, n - 1) @ original.differential(n)
            if lhs != rhs:
                raise RuntimeError(f"minimization iso not a chain map at {n}")

    def _iso_at(self, original: BoundedComplex, n: int) -> FFMatrix:
        m = self.iso.get(n)
        if m is not None:
            return m
        return FFMatrix.zeros(0, original.component(n).dim, original.p)


def minimize(C: BoundedComplex, seed: int = 0) -> MinimizeResult:
    """Strip contractible two-term pieces until the differential is radical."""
    p = C.p
    # decompose every component once; all later basis changes preserve
    # the summand module structures
    summands: dict[int, list] = {}
    trans: dict[int, FFMatrix] = {}      # original coords -> active coords
    for n in range(C.lo, C.hi + 1):
        comp = C.component(n)
        if comp.dim == 0:
            summands[n] = []
            trans[n] = FFMatrix.zeros(0, 0, p)
            continue
        D = fdmod.decompose(comp, seed=seed)
        order = sorted(range(len(D.summands)),
                       key=lambda i: (D.summands[i].module.dim, i))
        summands[n] = [D.summands[i].module for i in order]
        trans[n] = vstack([D.summands[i].project for i in order])
    diffs: dict[int, FFMatrix] = {}
    for n in range(C.lo + 1, C.hi + 1):
        d = C.differential(n)
        tp = trans[n]
        tm = trans[n - 1]
        inv_tp = _inverse_or_zero(tp, p)
        diffs[n] = tm @ d @ inv_tp
    retired: dict[int, list] = {n: [] for n in range(C.lo, C.hi + 1)}
    retired_trans: dict[int, list[FFMatrix]] = {n: [] for n in
                                                range(C.lo, C.hi + 1)}
    pieces: list[tuple[int, object, object]] = []   # (degree n, W, V)
    piece_alphas: list[FFMatrix] = []

    def offsets(n):
        offs = [0]
        for m in summands[n]:
            offs.append(offs[-1] + m.dim)
        return offs

    changed = True
    while changed:
        changed = False
        for n in range(C.lo + 1, C.hi + 1):
            offs_n = offsets(n)
            offs_m = offsets(n - 1)
            d = diffs[n]
            hit = None
            for j, W in enumerate(summands[n]):
                for i, V in enumerate(summands[n - 1]):
                    if W.dim == 0 or W.dim != V.dim:
                        continue
                    block = FFMatrix(
                        d.a[offs_m[i]:offs_m[i + 1],
                            offs_n[j]:offs_n[j + 1]].copy(), p, _raw=True)
                    if rank(block) == W.dim:
                        hit = (j, i, block)
                        break
                if hit:
                    break
            if hit is None:
                continue
            j, i, alpha = hit
            _cancel(C, p, summands, diffs, trans, retired, retired_trans,
                    pieces, piece_alphas, n, j, i, alpha, offsets)
            changed = True
            break
    return _assemble(C, p, summands, diffs, trans, retired, retired_trans,
                     pieces, piece_alphas)


def _inverse_or_zero(m: FFMatrix, p: int) -> FFMatrix:
    if m.rows == 0:
        return FFMatrix.zeros(m.cols, 0, p)
    inv = solve_matrix(m, FFMatrix.identity(m.rows, p))
    if inv is None:
        raise RuntimeError("component transform is not invertible")
    return inv


def _cancel(C, p, summands, diffs, trans, retired, retired_trans, pieces,
            piece_alphas, n, j, i, alpha, offsets):
    """Gaussian cancellation of summand j (degree n) against i (degree n-1)."""
    offs_n = offsets(n)
    offs_m = offsets(n - 1)
    d = diffs[n].a
    W = summands[n][j]
    V = summands[n - 1][i]
    perm_n = list(range(offs_n[j], offs_n[j + 1])) + \
        [c for c in range(d.shape[1]) if not offs_n[j] <= c < offs_n[j + 1]]
    perm_m = list(range(offs_m[i], offs_m[i + 1])) + \
        [r for r in range(d.shape[0]) if not offs_m[i] <= r < offs_m[i + 1]]
    dp = d[np.ix_(perm_m, perm_n)]
    k = W.dim
    a = dp[:k, :k]
    beta = dp[:k, k:]
    gamma = dp[k:, :k]
    delta = dp[k:, k:]
    alpha_inv = solve_matrix(FFMatrix(a, p, _raw=True),
                             FFMatrix.identity(k, p)).a
    new_delta = (delta - gamma @ alpha_inv @ beta) % p
    # source transform S^{-1} = [[I, alpha^{-1} beta], [0, I]] with respect
    # to the permuted coordinates; target transform T = [[I,0],[-gamma a^{-1}, I]]
    nsrc = d.shape[1]
    ndst = d.shape[0]
    S_inv = np.eye(nsrc, dtype=np.int64)
    S_inv[:k, k:] = (alpha_inv @ beta) % p
    T = np.eye(ndst, dtype=np.int64)
    T[k:, :k] = (-gamma @ alpha_inv) % p
    P_n = np.eye(nsrc, dtype=np.int64)[perm_n, :]
    P_m = np.eye(ndst, dtype=np.int64)[perm_m, :]
    src_full = FFMatrix((S_inv @ P_n) % p, p, _raw=True)   # old -> [W | rest]
    dst_full = FFMatrix((T @ P_m) % p, p, _raw=True)       # old -> [V | rest]
    # update incoming differential d_{n+1}: rows in new source coords
    if n + 1 in diffs:
        upd = (src_full @ diffs[n + 1]).a
        if upd[:k].any():
            raise RuntimeError("cancellation leak into incoming differential")
        diffs[n + 1] = FFMatrix(upd[k:].copy(), p, _raw=True)
    # update outgoing differential d_{n-1}: columns in new target coords
    if n - 1 in diffs:
        inv_dst = solve_matrix(dst_full, FFMatrix.identity(ndst, p))
        upd = (diffs[n - 1] @ inv_dst).a
        if upd[:, :k].any():
            raise RuntimeError("cancellation leak into outgoing differential")
        diffs[n - 1] = FFMatrix(upd[:, k:].copy(), p, _raw=True)
    # update this differential
    diffs[n] = FFMatrix(new_delta, p, _raw=True)
    # update transforms and retire the piece
    full_n = src_full @ trans[n]
    retired_trans[n].append(FFMatrix(full_n.a[:k].copy(), p, _raw=True))
    trans[n] = FFMatrix(full_n.a[k:].copy(), p, _raw=True)
    full_m = dst_full @ trans[n - 1]
    retired_trans[n - 1].append(FFMatrix(full_m.a[:k].copy(), p, _raw=True))
    trans[n - 1] = FFMatrix(full_m.a[k:].copy(), p, _raw=True)
    pieces.append((n, W, V))
    piece_alphas.append(FFMatrix(a, p, _raw=True))
    retired[n].append(("W", len(pieces) - 1, W))
    retired[n - 1].append(("V", len(pieces) - 1, V))
    del summands[n][j]
    del summands[n - 1][i]


def _assemble(C, p, summands, diffs, trans, retired, retired_trans, pieces,
              piece_alphas) -> MinimizeResult:
    template = C._template
    c0_comps = {}
    for n in range(C.lo, C.hi + 1):
        mods = summands[n]
        c0_comps[n] = _dsum(mods) if mods else _zero_like(template)
    c0_diffs = {n: diffs[n] for n in range(C.lo + 1, C.hi + 1)}
    C0 = BoundedComplex(C.lo, C.hi, c0_comps, c0_diffs, check=False,
                        name=f"min({C.name})")
    # contractible part: per degree, retired blocks in retirement order
    c1_comps = {}
    c1_offsets: dict[int, dict] = {}
    for n in range(C.lo, C.hi + 1):
        mods = [m for _, _, m in retired[n]]
        c1_comps[n] = _dsum(mods) if mods else _zero_like(template)
        offs = {}
        pos = 0
        for rec in retired[n]:
            offs[(rec[0], rec[1])] = pos
            pos += rec[2].dim
        c1_offsets[n] = offs
    c1_diffs = {}
    for n in range(C.lo + 1, C.hi + 1):
        dmat = np.zeros((c1_comps[n - 1].dim, c1_comps[n].dim), dtype=np.int64)
        for pi, (deg, W, V) in enumerate(pieces):
            if deg != n:
                continue
            r = c1_offsets[n - 1][("V", pi)]
            c = c1_offsets[n][("W", pi)]
            dmat[r:r + V.dim, c:c + W.dim] = piece_alphas[pi].a
        c1_diffs[n] = FFMatrix(dmat, p, _raw=True)
    C1 = BoundedComplex(C.lo, C.hi, c1_comps, c1_diffs, check=False,
                        name=f"contractible({C.name})")
    iso = {}
    for n in range(C.lo, C.hi + 1):
        blocks = [trans[n]] + retired_trans[n]
        iso[n] = vstack(blocks) if blocks else trans[n]
    result = MinimizeResult(C0=C0, C1=C1, iso=iso,
                            stripped_dim=sum(w.dim + v.dim
                                             for _, w, v in pieces))
    result.verify(C)
    return result


# ---------------------------------------------------------------------
# Component membership checks
# ---------------------------------------------------------------------

@dataclass
class ProjInjViolation:
    degree: int
    summand_dim: int


def projinj_components_check(C: BoundedComplex, reference_classes: list,
                             seed: int = 0) -> list[ProjInjViolation]:
    """Every indecomposable summand of every component lies in the reference
    add-category; returns the violations (empty = pass)."""
    violations = []
    for n in range(C.lo, C.hi + 1):
        comp = C.component(n)
        if comp.dim == 0:
            continue
        D = fdmod.decompose(comp, seed=seed)
        for cls in D.classes:
            S = D.summands[cls[0]].module
            if not any(S.dim == R.dim and
                       fdmod.indecomposable_iso(S, R) is not None
                       for R in reference_classes):
                violations.append(ProjInjViolation(degree=n,
                                                   summand_dim=S.dim))
    return violations


# ---------------------------------------------------------------------
# Tensor product of complexes
# ---------------------------------------------------------------------

@dataclass
class ComplexTensor:
    complex: BoundedComplex
    grid: dict[tuple[int, int], TensorProduct]
    offsets: dict[int, dict[tuple[int, int], int]]


def tensor_complexes(M: BoundedComplex, N: BoundedComplex,
                     middle: FDAlgebra) -> ComplexTensor:
    """Total complex of the double complex, d(m@n) = dm@n + (-1)^deg(m) m@dn."""
    p = M.p
    lo = M.lo + N.lo
    hi = M.hi + N.hi
    grid: dict[tuple[int, int], TensorProduct] = {}
    for i in range(M.lo, M.hi + 1):
        for jj in range(N.lo, N.hi + 1):
            grid[(i, jj)] = fdmod.tensor_over_algebra(M.component(i),
                                                      N.component(jj), middle)
    comps = {}
    offsets: dict[int, dict[tuple[int, int], int]] = {}
    for n in range(lo, hi + 1):
        cells = [(i, n - i) for i in range(M.lo, M.hi + 1)
                 if N.lo <= n - i <= N.hi]
        offsets[n] = {}
        pos = 0
        mods = []
        for cell in cells:
            offsets[n][cell] = pos
            pos += grid[cell].dim
            if grid[cell].module is not None:
                mods.append(grid[cell].module)
        if mods:
            comps[n] = _dsum_padded(mods, cells, grid)
        else:
            comps[n] = _plain_space(cells, grid, p, middle)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        dmat = np.zeros((comps[n - 1].dim, comps[n].dim), dtype=np.int64)
        for (i, jj), off in offsets[n].items():
            T = grid[(i, jj)]
            # horizontal: d_M (x) id into cell (i-1, jj)
            if (i - 1, jj) in offsets[n - 1]:
                Tdst = grid[(i - 1, jj)]
                fmat = _left_component_map(M, i, T, Tdst, p)
                r = offsets[n - 1][(i - 1, jj)]
                dmat[r:r + Tdst.dim, off:off + T.dim] = fmat.a
            # vertical: (-1)^i id (x) d_N into cell (i, jj-1)
            if (i, jj - 1) in offsets[n - 1]:
                Tdst = grid[(i, jj - 1)]
                gmat = _right_component_map(N, jj, T, Tdst, p)
                sign = 1 if i % 2 == 0 else -1
                r = offsets[n - 1][(i, jj - 1)]
                dmat[r:r + Tdst.dim, off:off + T.dim] = \
                    (sign * gmat.a) % p
        diffs[n] = FFMatrix(dmat, p, _raw=True)
    total = BoundedComplex(lo, hi, comps, diffs, check=False,
                           name=f"{M.name}(x){N.name}")
    # exactness of the sign convention
    for n in range(lo + 2, hi + 1):
        if not (total.differential(n - 1) @ total.differential(n)).is_zero():
            raise RuntimeError("total complex differential fails d^2 = 0")
    return ComplexTensor(complex=total, grid=grid, offsets=offsets)


def _dsum_padded(mods, cells, grid):
    # cells with dim 0 contribute nothing; direct-sum the module parts in
    # cell order (dims match the offset layout because zero cells are empty)
    parts = []
    for cell in cells:
        m = grid[cell].module
        if m is not None:
            parts.append(m)
    return _dsum(parts)


def _plain_space(cells, grid, p, middle):
    raise RuntimeError("tensor components without outer actions are not "
                       "used by the transport pipeline")


def _left_component_map(M, i, T: TensorProduct, Tdst: TensorProduct,
                        p: int) -> FFMatrix:
    d = M.differential(i)
    eye = FFMatrix.identity(T.nU, p)
    return Tdst.project @ d.kron(eye) @ T.section


def _right_component_map(N, jj, T: TensorProduct, Tdst: TensorProduct,
                         p: int) -> FFMatrix:
    d = N.differential(jj)
    eye = FFMatrix.identity(T.nV, p)
    return Tdst.project @ eye.kron(d) @ T.section


# ---------------------------------------------------------------------
# Rickard certificates
# ---------------------------------------------------------------------

@dataclass
class HomotopyWitness:
    """A homotopy equivalence S ~ T: maps both ways plus two homotopies."""
    fwd: ChainMap                       # S -> T
    bwd: ChainMap                       # T -> S
    h_src: dict[int, FFMatrix]          # bwd fwd - id = d h + h d on S
    h_tgt: dict[int, FFMatrix]          # fwd bwd - id = d h + h d on T


@dataclass
class RickardCertificate:
    E: FDAlgebra
    F: FDAlgebra
    M: BoundedComplex                   # complexes of (E,F)-bimodules
    N: BoundedComplex                   # complexes of (F,E)-bimodules
    htpy_E: HomotopyWitness             # M (x)_F N ~ E[0]
    htpy_F: HomotopyWitness             # N (x)_E M ~ F[0]


def _homotopy_identity_holds(f: ChainMap, g: ChainMap,
                             h: dict[int, FFMatrix]) -> bool:
    """g f - id = d h + h d on the source complex of f."""
    C = f.src
    for n in range(C.lo, C.hi + 1):
        dim = C.component(n).dim
        lhs = (g.component(n) @ f.component(n)) - FFMatrix.identity(dim, C.p)
        dh = C.differential(n + 1) @ _h_at(h, C, n)
        hd = _h_at(h, C, n - 1) @ C.differential(n)
        if lhs != dh + hd:
            return False
    return True


def _h_at(h: dict[int, FFMatrix], C: BoundedComplex, n: int) -> FFMatrix:
    if n in h:
        return h[n]
    return FFMatrix.zeros(C.component(n + 1).dim, C.component(n).dim, C.p)


@dataclass
class RickardVerdict:
    ok: bool
    checks: list


def verify_rickard(cand: RickardCertificate, seed: int = 0) -> RickardVerdict:
    """Chain-map laws, homotopy identities and one-sided projectivity."""
    from .morita import CheckItem
    checks: list[CheckItem] = []
    for label, side in [("M", cand.M), ("N", cand.N)]:
        for n in range(side.lo, side.hi + 1):
            comp = side.component(n)
            if comp.dim == 0:
                continue
            checks.append(CheckItem(
                f"{label}[{n}]_left_projective",
                fdmod.is_projective(comp.left_module(), seed)))
            checks.append(CheckItem(
                f"{label}[{n}]_right_projective",
                fdmod.is_projective(comp.right_module(), seed)))
    for tag, wit in [("E", cand.htpy_E), ("F", cand.htpy_F)]:
        try:
            wit.fwd.verify()
            wit.bwd.verify()
            checks.append(CheckItem(f"htpy_{tag}_chain_maps", True))
        except ValueError as exc:
            checks.append(CheckItem(f"htpy_{tag}_chain_maps", False, str(exc)))
            continue
        checks.append(CheckItem(
            f"htpy_{tag}_source_identity",
            _homotopy_identity_holds(wit.fwd, wit.bwd, wit.h_src)))
        checks.append(CheckItem(
            f"htpy_{tag}_target_identity",
            _homotopy_identity_holds(wit.bwd, wit.fwd, wit.h_tgt)))
    return RickardVerdict(ok=all(c.ok for c in checks), checks=checks)
