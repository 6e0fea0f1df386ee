"""Modules over finite-dimensional algebras: MeatAxe, Hom, decomposition.

A module stores one action matrix per algebra basis element (column-vector
convention).  Because the full basis of the algebra is available, the
submodule generated by a vector is simply the span of its basis images, so
"spinning" costs one stack-and-reduce.

The irreducibility engine is the standard MeatAxe with the
nullity-equals-degree certificate: for a sampled element t of the image
algebra and an irreducible factor f of its minimal polynomial with
dim ker f(t) = deg f, a full spin of one kernel vector plus a full spin of
one transposed kernel vector proves irreducibility; any proper spin splits
the module.  Decomposition into indecomposables then rides on the
idempotent machinery of the endomorphism algebra (Fitting), and the
isomorphism test for indecomposables is the deterministic scan for a pair
of homs composing to a unit, which is complete because endomorphism rings
of indecomposables are local.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import gfpoly
from .fdalg import FDAlgebra, Idempotent, complete_primitive_idempotents, endo_algebra, radical
from .gfmat import (FFMatrix, QuotientSpace, SpanSolver, kernel, rank,
                    row_space_basis, solve_matrix, vstack, _matmul_mod)


class ModRep:
    """A finitely generated left module: one action matrix per basis element."""

    def __init__(self, algebra: FDAlgebra, acts: np.ndarray, *,
                 check: bool = True, name: str = ""):
        self.algebra = algebra
        p = algebra.p
        acts = np.mod(np.asarray(acts, dtype=np.int64), p)
        if acts.ndim != 3 or acts.shape[0] != algebra.dim or \
                acts.shape[1] != acts.shape[2]:
            raise ValueError(f"action stack has wrong shape {acts.shape}")
        acts.flags.writeable = False
        self.acts = acts
        self.dim = acts.shape[1]
        self.p = p
        self.name = name
        if check:
            self.verify()

    def act_basis(self, i: int) -> FFMatrix:
        return FFMatrix(self.acts[i], self.p, _raw=True)

    def act_vec(self, coords: np.ndarray) -> FFMatrix:
        m = _matmul_mod(np.mod(coords, self.p).reshape(1, -1),
                        self.acts.reshape(self.algebra.dim, -1), self.p)
        return FFMatrix(m.reshape(self.dim, self.dim), self.p, _raw=True)

    def acts_of_rows(self, rows: np.ndarray) -> np.ndarray:
        """Action matrices of several algebra elements at once, (r, n, n)."""
        r = rows.shape[0]
        m = _matmul_mod(np.mod(rows, self.p),
                        self.acts.reshape(self.algebra.dim, -1), self.p)
        return m.reshape(r, self.dim, self.dim)

    def verify(self, full: bool = False):
        """Check the action respects the structure constants.

        Generator products suffice: if rho(g)rho(x) = rho(gx) for all
        generators g and basis x, multiplicativity follows for all words,
        hence for the whole algebra.
        """
        A = self.algebra
        if self.dim == 0:
            return
        eye = FFMatrix.identity(self.dim, self.p)
        if self.act_vec(A.unit) != eye:
            raise ValueError("unit does not act as the identity")
        gens = ([A.basis_vector(i) for i in range(A.dim)] if full
                else A.generator_elements())
        for gi, g in enumerate(gens):
            gmat = self.act_vec(g)
            for j in range(A.dim):
                lhs = gmat @ self.act_basis(j)
                rhs = self.act_vec(A.mult(g, A.basis_vector(j)))
                if lhs != rhs:
                    raise ValueError(
                        f"action violates structure at generator {gi}, "
                        f"basis {j}")

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"ModRep(dim={self.dim}, alg={self.algebra.dim}{label})"


def zero_module(A: FDAlgebra) -> ModRep:
    return ModRep(A, np.zeros((A.dim, 0, 0), dtype=np.int64), check=False)


def regular_module(A: FDAlgebra) -> ModRep:
    return ModRep(A, A.left_mults(), check=False, name="regular")


def right_regular_module(A: FDAlgebra) -> ModRep:
    """The right regular module of A, as a left module over A^op."""
    return ModRep(A.opposite(), A.right_mults(), check=False, name="regular-op")


def direct_sum(mods: Sequence[ModRep]) -> ModRep:
    A = mods[0].algebra
    if any(m.algebra is not A for m in mods):
        raise ValueError("direct sum across different algebras")
    n = sum(m.dim for m in mods)
    acts = np.zeros((A.dim, n, n), dtype=np.int64)
    off = 0
    for m in mods:
        acts[:, off:off + m.dim, off:off + m.dim] = m.acts
        off += m.dim
    return ModRep(A, acts, check=False)


def restrict(U: ModRep, rows: FFMatrix) -> tuple[ModRep, FFMatrix]:
    """Submodule on an invariant row-basis; returns (module, inclusion)."""
    solver = SpanSolver(rows)
    incl = rows.transpose()
    d = U.algebra.dim
    k = rows.rows
    n = U.dim
    imgs = _matmul_mod(U.acts.reshape(d * n, n), incl.a, U.p).reshape(d, n, k)
    batched = FFMatrix(np.ascontiguousarray(
        imgs.transpose(1, 0, 2).reshape(n, d * k)), U.p, _raw=True)
    coords = solver.coords_columns(batched)
    if coords is None:
        raise ValueError("row space is not a submodule")
    acts = np.ascontiguousarray(
        coords.a.reshape(k, d, k).transpose(1, 0, 2))
    return ModRep(U.algebra, acts, check=False), incl


def quotient(U: ModRep, rows: FFMatrix) -> tuple[ModRep, FFMatrix]:
    """Quotient by an invariant row space; returns (module, projection)."""
    q = QuotientSpace(rows, U.dim)
    d = U.algebra.dim
    n = U.dim
    k = q.dim
    right = _matmul_mod(U.acts.reshape(d * n, n), q.section.a, U.p)
    right = right.reshape(d, n, k).transpose(1, 0, 2).reshape(n, d * k)
    acts = _matmul_mod(q.project.a, np.ascontiguousarray(right), U.p)
    acts = np.ascontiguousarray(acts.reshape(k, d, k).transpose(1, 0, 2))
    return ModRep(U.algebra, acts, check=False), q.project


def split_by_idempotent(U: ModRep, emat: FFMatrix) -> tuple[ModRep, FFMatrix, FFMatrix]:
    """Direct summand cut out by an idempotent endomorphism.

    Returns (summand, inclusion, projection) with incl @ proj = emat and
    proj @ incl = identity.
    """
    rows = row_space_basis(emat.transpose())
    incl = rows.transpose()
    proj = solve_matrix(incl, emat)
    if proj is None:
        raise RuntimeError("idempotent image basis inconsistent")
    sub, _ = restrict(U, rows)
    eye = FFMatrix.identity(rows.rows, U.p)
    if proj @ incl != eye:
        raise RuntimeError("idempotent splitting failed")
    return sub, incl, proj


def spin(U: ModRep, seed_rows: FFMatrix) -> FFMatrix:
    """Row basis of the submodule generated by the given row vectors."""
    if seed_rows.rows == 0 or U.dim == 0:
        return FFMatrix.zeros(0, U.dim, U.p)
    d = U.algebra.dim
    images = np.einsum('kn,dnm->dkm', seed_rows.a,
                       U.acts.transpose(0, 2, 1)) % U.p
    stacked = FFMatrix(images.reshape(d * seed_rows.rows, U.dim), U.p, _raw=True)
    return row_space_basis(stacked)


def dual(U: ModRep) -> ModRep:
    """The linear dual, a module over the opposite algebra."""
    out = ModRep(U.algebra.opposite(), U.acts.transpose(0, 2, 1), check=False,
                 name=f"dual({U.name})" if U.name else "")
    out._dual_of = U
    return out


def projective_module(A: FDAlgebra, e: Idempotent) -> ModRep:
    """The left ideal A*e as a module, tagged for the Hom fast path."""
    cache = getattr(A, "_proj_module_cache", None)
    if cache is None:
        cache = A._proj_module_cache = {}
    key = bytes(np.mod(e.coords, A.p))
    if key in cache:
        return cache[key]
    re = A.right_mult_matrix(e.coords)
    rows = row_space_basis(re.transpose())
    reg = regular_module(A)
    sub, _ = restrict(reg, rows)
    sub._ideal_idempotent = e
    sub._ideal_rows = rows
    cache[key] = sub
    return sub


def top_of_projective(A: FDAlgebra, P: ModRep) -> ModRep:
    """P / J(A)P, the simple head of a projective indecomposable."""
    J = radical(A)
    if J.rows == 0:
        return P
    pieces = []
    for r in range(J.rows):
        m = P.act_vec(J.a[r])
        pieces.append(m.transpose())
    sub = row_space_basis(vstack(pieces))
    top, _ = quotient(P, sub)
    return top


# ---------------------------------------------------------------------
# MeatAxe
# ---------------------------------------------------------------------

def _spin_gens(gmats: list[np.ndarray], seed_row: np.ndarray, n: int,
               p: int) -> "RowReducer":
    """Row reducer holding the submodule generated by one vector, closing
    under the generator actions."""
    from .gfmat import RowReducer
    red = RowReducer(n, p)
    red.add(seed_row)
    frontier = [red.rows[-1]] if red.rank else []
    while frontier:
        nxt = []
        for w in frontier:
            for g in gmats:
                if red.add((g @ w) % p):
                    nxt.append(red.rows[-1])
        frontier = nxt
    return red


def _sample_image_element(gmats: list[np.ndarray], n: int, p: int,
                          rng: np.random.Generator) -> FFMatrix:
    """A pseudo-random element of the image algebra from generator words."""
    words = [np.eye(n, dtype=np.int64)] + list(gmats)
    for _ in range(min(3, len(gmats))):
        a = gmats[int(rng.integers(0, len(gmats)))]
        b = words[int(rng.integers(0, len(words)))]
        words.append((a @ b) % p)
    acc = np.zeros((n, n), dtype=np.int64)
    for w in words:
        c = int(rng.integers(0, p))
        if c:
            acc = (acc + c * w) % p
    return FFMatrix(acc, p, _raw=True)


def chop(U: ModRep, seed: int = 0) -> list[ModRep]:
    """Composition factors of U (with multiplicity, in chop order).

    The recursion carries only the generator action matrices; each leaf is
    rebuilt as a module over the full algebra through the accumulated
    subquotient projection/section pair.
    """
    if U.dim == 0:
        return []
    p = U.p
    gens = U.algebra.generator_elements()
    gmats = [U.act_vec(g).a for g in gens]
    eye = np.eye(U.dim, dtype=np.int64)
    leaves = _chop_worker(gmats, eye.copy(), eye.copy(), p, seed, 0)
    out = []
    d = U.algebra.dim
    n = U.dim
    for pi, sigma in leaves:
        k = pi.shape[0]
        right = _matmul_mod(U.acts.reshape(d * n, n), sigma, p)
        right = right.reshape(d, n, k).transpose(1, 0, 2).reshape(n, d * k)
        acts = _matmul_mod(pi, np.ascontiguousarray(right), p)
        acts = np.ascontiguousarray(acts.reshape(k, d, k).transpose(1, 0, 2))
        out.append(ModRep(U.algebra, acts, check=False))
    return out


def _chop_worker(gmats: list[np.ndarray], pi: np.ndarray, sigma: np.ndarray,
                 p: int, seed: int, depth: int):
    """Returns a list of (projection, section) pairs for the factors."""
    n = gmats[0].shape[0] if gmats else pi.shape[0]
    n = pi.shape[0]
    if n == 0:
        return []
    if n == 1:
        return [(pi, sigma)]
    if not gmats:
        # trivial action: every line is a factor
        out = []
        for i in range(n):
            e = np.zeros((1, n), dtype=np.int64)
            e[0, i] = 1
            out.append(((e @ pi) % p, (sigma @ e.T) % p))
        return out
    rng = np.random.default_rng((seed, 0xC0FFEE, depth))
    for _ in range(300):
        theta = _sample_image_element(gmats, n, p, rng)
        m = gfpoly.min_poly(theta)
        factors = gfpoly.factor(m, p, rng)
        for f, _mult in sorted(factors, key=lambda t: (len(t[0]), t[0])):
            ft = gfpoly.eval_matrix(f, theta)
            K = kernel(ft)
            if K.rows == 0:
                continue
            red = _spin_gens(gmats, K.a[0], n, p)
            if 0 < red.rank < n:
                return _split_worker(gmats, pi, sigma, red.basis(), p, seed,
                                     depth)
            if K.rows == len(f) - 1:
                # nullity-one certificate: check the transposed module
                ftT = np.ascontiguousarray(ft.a.T)
                Kt = kernel(FFMatrix(ftT, p, _raw=True))
                gm_t = [np.ascontiguousarray(g.T) for g in gmats]
                red_t = _spin_gens(gm_t, Kt.a[0], n, p)
                if red_t.rank == n:
                    return [(pi, sigma)]  # irreducible
                perp = kernel(red_t.basis())
                if 0 < perp.rows < n:
                    return _split_worker(gmats, pi, sigma, perp, p, seed,
                                         depth)
                raise RuntimeError("transposed spin produced no usable split")
    raise RuntimeError("meataxe sampling budget exhausted")


def _split_worker(gmats, pi, sigma, rows: FFMatrix, p, seed, depth):
    # submodule part: rows is in reduced echelon form, so the pivot-column
    # selector is a left inverse of the inclusion
    from .gfmat import _rref_raw
    R, pivots, _ = _rref_raw(rows.a, p, transform=False)
    k = rows.rows
    n = rows.cols
    incl = np.ascontiguousarray(R[:k].T)           # (n, k)
    sel = np.zeros((k, n), dtype=np.int64)
    for idx, c in enumerate(pivots):
        sel[idx, c] = 1
    sub_g = [(sel @ g @ incl) % p for g in gmats]
    sub_pi = (sel @ pi) % p
    sub_sigma = (sigma @ incl) % p
    q = QuotientSpace(FFMatrix(R[:k], p, _raw=True), n)
    quo_g = [(q.project.a @ g @ q.section.a) % p for g in gmats]
    quo_pi = (q.project.a @ pi) % p
    quo_sigma = (sigma @ q.section.a) % p
    return (_chop_worker(sub_g, sub_pi, sub_sigma, p, seed, depth + 1)
            + _chop_worker(quo_g, quo_pi, quo_sigma, p, seed, depth + 1))


def composition_factors(U: ModRep, seed: int = 0) -> list[ModRep]:
    return chop(U, seed)


# ---------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------

def _intertwiner_space(pairs: list[tuple[FFMatrix, FFMatrix]], n_u: int,
                       n_v: int, p: int) -> list[FFMatrix]:
    """Basis of {H : Mv H = H Mu for all pairs (Mv, Mu)}, H of shape n_v x n_u."""
    if n_u == 0 or n_v == 0:
        return []
    basis: Optional[FFMatrix] = None  # rows = vec(H), row-major
    eye_u = np.eye(n_u, dtype=np.int64)
    eye_v = np.eye(n_v, dtype=np.int64)
    for Mv, Mu in pairs:
        C = np.mod(np.kron(Mv.a, eye_u) - np.kron(eye_v, Mu.a.T), p)
        Cm = FFMatrix(C, p, _raw=True)
        if basis is None:
            basis = kernel(Cm)
        else:
            restricted = Cm @ basis.transpose()
            inner = kernel(restricted)
            basis = inner @ basis
        if basis.rows == 0:
            return []
    if basis is None:
        basis = FFMatrix.identity(n_v * n_u, p)
    return [FFMatrix(basis.a[i].reshape(n_v, n_u).copy(), p, _raw=True)
            for i in range(basis.rows)]


def hom_space(U, V) -> list[FFMatrix]:
    """Basis of Hom(U, V) as matrices (column convention: H maps U-coords to V).

    Fast paths: Hom(Ae, V) is e*V via phi_v(x) = x.v, and homs between
    duals are transposes of homs in the opposite direction.
    """
    if isinstance(U, Bimodule) or isinstance(V, Bimodule):
        if not (isinstance(U, Bimodule) and isinstance(V, Bimodule)):
            raise ValueError("hom between a bimodule and a one-sided module")
        if U.left_algebra is not V.left_algebra or \
                U.right_algebra is not V.right_algebra:
            raise ValueError("bimodule algebras mismatch")
        pairs = []
        for g in U.left_algebra.generator_elements():
            pairs.append((V.left_act_vec(g), U.left_act_vec(g)))
        for g in U.right_algebra.generator_elements():
            pairs.append((V.right_act_vec(g), U.right_act_vec(g)))
        return _intertwiner_space(pairs, U.dim, V.dim, U.p)
    if U.algebra is not V.algebra:
        raise ValueError("hom between modules over different algebras")
    U0 = getattr(U, "_dual_of", None)
    V0 = getattr(V, "_dual_of", None)
    if U0 is not None and V0 is not None:
        return [h.transpose() for h in hom_space(V0, U0)]
    e = getattr(U, "_ideal_idempotent", None)
    if e is not None:
        return _hom_from_ideal(U, V, e)
    pairs = [(V.act_vec(g), U.act_vec(g))
             for g in U.algebra.generator_elements()]
    return _intertwiner_space(pairs, U.dim, V.dim, U.p)


def _hom_from_ideal(U: ModRep, V: ModRep, e: Idempotent) -> list[FFMatrix]:
    """Hom(Ae, V) via v in eV mapped to (x -> x.v)."""
    p = U.p
    emat = V.act_vec(e.coords)
    ev_rows = row_space_basis(emat.transpose())
    m = ev_rows.rows
    if m == 0:
        return []
    rows_B = U._ideal_rows          # basis of Ae inside A
    k = rows_B.rows
    acts = V.acts_of_rows(rows_B.a)                       # (k, nV, nV)
    imgs = _matmul_mod(acts.reshape(k * V.dim, V.dim),
                       np.ascontiguousarray(ev_rows.a.T), p)
    imgs = imgs.reshape(k, V.dim, m)
    return [FFMatrix(np.ascontiguousarray(imgs[:, :, j].T), p, _raw=True)
            for j in range(m)]


def hom_dim(U, V) -> int:
    return len(hom_space(U, V))


# ---------------------------------------------------------------------
# Decomposition and isomorphism
# ---------------------------------------------------------------------

@dataclass
class Summand:
    module: object
    include: FFMatrix   # (dim U x dim summand)
    project: FFMatrix   # (dim summand x dim U)


@dataclass
class Decomposition:
    parent: object
    summands: list[Summand]
    classes: list[list[int]]   # indices into summands, grouped by iso class
    class_isos: list[list[FFMatrix]]  # iso from class rep to each member

    def pairs(self):
        """[(representative module, multiplicity)] in canonical order."""
        return [(self.summands[c[0]].module, len(c)) for c in self.classes]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def class_representative(self, k: int) -> Summand:
        return self.summands[self.classes[k][0]]


def _module_of_matrix_algebra(mats: list[FFMatrix], p: int) -> FDAlgebra:
    stack = FFMatrix(np.array([m.a.reshape(-1) for m in mats], dtype=np.int64),
                     p, _raw=True)
    solver = SpanSolver(stack)
    d = len(mats)
    n = mats[0].rows
    big = np.stack([m.a for m in mats])
    c = np.zeros((d, d, d), dtype=np.int64)
    for a in range(d):
        prods = np.matmul(mats[a].a, big) % p
        coords = solver.coords_columns(
            FFMatrix(prods.reshape(d, n * n).T, p, _raw=True))
        if coords is None:
            raise RuntimeError("matrix span is not closed under products")
        c[a] = coords.a.T
    ucoords = solver.coords_row(
        FFMatrix(np.eye(n, dtype=np.int64).reshape(1, -1), p, _raw=True))
    if ucoords is None:
        raise RuntimeError("identity matrix outside endomorphism span")
    E = FDAlgebra(p, c, ucoords.a[0], check=False, name="End")
    E._matrix_basis = mats
    return E


def end_algebra(U) -> FDAlgebra:
    """End(U) as an abstract algebra; basis matrices are kept on the result."""
    homs = hom_space(U, U)
    return _module_of_matrix_algebra(homs, U.p)


def _mat_from_coords(E: FDAlgebra, coords: np.ndarray) -> FFMatrix:
    mats = E._matrix_basis
    p = E.p
    acc = np.zeros(mats[0].shape, dtype=np.int64)
    for c, m in zip(np.mod(coords, p), mats):
        if c:
            acc = (acc + int(c) * m.a) % p
    return FFMatrix(acc, p, _raw=True)


def decompose(U, seed: int = 0, end: Optional[FDAlgebra] = None) -> Decomposition:
    """Indecomposable direct-sum decomposition with inclusions/projections.

    `end` may supply a precomputed End(U) (with its matrix basis attached)
    to avoid recomputing the hom space.
    """
    if U.dim == 0:
        return Decomposition(U, [], [], [])
    E = end if end is not None else end_algebra(U)
    idems = complete_primitive_idempotents(E, seed)
    summands: list[Summand] = []
    total = None
    for e in idems:
        emat = _mat_from_coords(E, e.coords)
        if isinstance(U, Bimodule):
            sub, incl, proj = U.split_by_idempotent(emat)
        else:
            sub, incl, proj = split_by_idempotent(U, emat)
        summands.append(Summand(sub, incl, proj))
        total = emat if total is None else total + emat
    if total != FFMatrix.identity(U.dim, U.p):
        raise RuntimeError("summand idempotents do not sum to the identity")
    # group into isomorphism classes
    order = sorted(range(len(summands)),
                   key=lambda i: (summands[i].module.dim,
                                  tuple(int(x) for x in idems[i].coords)))
    classes: list[list[int]] = []
    class_isos: list[list[FFMatrix]] = []
    for i in order:
        placed = False
        for k, cls in enumerate(classes):
            rep = summands[cls[0]].module
            res = indecomposable_iso(rep, summands[i].module)
            if res is not None:
                cls.append(i)
                class_isos[k].append(res)
                placed = True
                break
        if not placed:
            classes.append([i])
            class_isos.append([FFMatrix.identity(summands[i].module.dim, U.p)])
    return Decomposition(U, summands, classes, class_isos)


def indecomposable_iso(U, V) -> Optional[FFMatrix]:
    """An explicit isomorphism U -> V between indecomposables, or None.

    For small hom spaces an exhaustive scan for an invertible element is a
    complete decision (an invertible hom is an isomorphism, and any
    isomorphism lies in the hom space).  Otherwise the pair scan
    psi@phi over two hom bases decides, because End(U) is local: an
    isomorphism forces some composite outside the radical, hence
    invertible.
    """
    if U.dim != V.dim:
        return None
    if U.dim == 0:
        return FFMatrix.zeros(0, 0, U.p)
    p = U.p
    # prefer the direction with a cheap hom space; existence of an
    # invertible hom is symmetric, and the witness inverts exactly
    if _has_fast_hom(V) and not _has_fast_hom(U):
        H_vu = hom_space(V, U)
        if not H_vu:
            return None
        psi = None
        for cand in H_vu:
            if rank(cand) == U.dim:
                psi = cand
                break
        if psi is None and p ** len(H_vu) <= EXHAUSTIVE_CAP:
            psi = _exhaustive_invertible(H_vu, p, U.dim)
        if psi is not None:
            return solve_matrix(psi, FFMatrix.identity(U.dim, p))
        if p ** len(H_vu) <= EXHAUSTIVE_CAP:
            return None
    H_uv = hom_space(U, V)
    if not H_uv:
        return None
    for phi in H_uv:
        if rank(phi) == U.dim:
            return phi
    if p ** len(H_uv) <= EXHAUSTIVE_CAP:
        phi = _exhaustive_invertible(H_uv, p, U.dim)
        return phi
    H_vu = hom_space(V, U)
    if not H_vu:
        return None
    for phi in H_uv:
        for psi in H_vu:
            if rank(psi @ phi) == U.dim:
                return phi
    return None


def _has_fast_hom(U) -> bool:
    return getattr(U, "_ideal_idempotent", None) is not None


def _exhaustive_invertible(homs: list[FFMatrix], p: int,
                           dim: int) -> Optional[FFMatrix]:
    coeffs = np.zeros(len(homs), dtype=np.int64)
    while True:
        i = 0
        while i < len(homs):
            coeffs[i] += 1
            if coeffs[i] < p:
                break
            coeffs[i] = 0
            i += 1
        if i == len(homs):
            return None
        cand = _combine(homs, coeffs, p)
        if rank(cand) == dim:
            return cand


def _combine(mats: list[FFMatrix], coeffs, p: int) -> FFMatrix:
    acc = np.zeros(mats[0].shape, dtype=np.int64)
    for c, m in zip(coeffs, mats):
        if c % p:
            acc = (acc + int(c % p) * m.a) % p
    return FFMatrix(acc, p, _raw=True)


@dataclass
class IsoResult:
    isomorphic: bool
    witness: Optional[FFMatrix] = None


EXHAUSTIVE_CAP = 3 ** 8


def is_isomorphic(U, V, seed: int = 0) -> IsoResult:
    """Isomorphism verdict with an explicit invertible intertwiner on success."""
    if U.dim != V.dim:
        return IsoResult(False)
    if U.dim == 0:
        return IsoResult(True, FFMatrix.zeros(0, 0, U.p))
    homs = hom_space(U, V)
    if not homs:
        return IsoResult(False)
    back = hom_space(V, U)
    if len(back) != len(homs):
        return IsoResult(False)
    p = U.p
    rng = np.random.default_rng((seed, 0x150))
    for m in homs:
        if rank(m) == U.dim:
            return IsoResult(True, m)
    for _ in range(40):
        cand = _combine(homs, rng.integers(0, p, size=len(homs)), p)
        if rank(cand) == U.dim:
            return IsoResult(True, cand)
    if p ** len(homs) <= EXHAUSTIVE_CAP:
        cand = _exhaustive_invertible(homs, p, U.dim)
        return IsoResult(cand is not None, cand)
    # decompose both sides and match classes
    DU = decompose(U, seed)
    DV = decompose(V, seed + 1)
    used = [False] * len(DV.summands)
    pieces: list[tuple[Summand, Summand, FFMatrix]] = []
    for su in DU.summands:
        hit = None
        for j, sv in enumerate(DV.summands):
            if used[j]:
                continue
            sigma = indecomposable_iso(su.module, sv.module)
            if sigma is not None:
                hit = (j, sigma)
                break
        if hit is None:
            return IsoResult(False)
        used[hit[0]] = True
        pieces.append((su, DV.summands[hit[0]], hit[1]))
    total = FFMatrix.zeros(V.dim, U.dim, p)
    for su, sv, sigma in pieces:
        total = total + (sv.include @ sigma @ su.project)
    if rank(total) != U.dim:
        raise RuntimeError("assembled class-matching map is not invertible")
    return IsoResult(True, total)


# ---------------------------------------------------------------------
# Projectivity / injectivity / Nakayama
# ---------------------------------------------------------------------

def _regular_class_reps(A: FDAlgebra, seed: int = 0) -> list[ModRep]:
    if not hasattr(A, "_projective_class_reps"):
        idems = complete_primitive_idempotents(A, seed)
        reps: list[ModRep] = []
        for e in idems:
            P = projective_module(A, e)
            if not any(P.dim == Q.dim and indecomposable_iso(P, Q) is not None
                       for Q in reps):
                reps.append(P)
        A._projective_class_reps = reps
    return A._projective_class_reps


def is_projective(U: ModRep, seed: int = 0) -> bool:
    """True iff every indecomposable summand embeds in the regular module."""
    if U.dim == 0:
        return True
    reps = _regular_class_reps(U.algebra, seed)
    D = decompose(U, seed)
    for cls in D.classes:
        S = D.summands[cls[0]].module
        if not any(S.dim == P.dim and indecomposable_iso(S, P) is not None
                   for P in reps):
            return False
    return True


def is_injective(U: ModRep, seed: int = 0) -> bool:
    """True iff the dual is projective over the opposite algebra."""
    return is_projective(dual(U), seed)


def nakayama(U: ModRep, seed: int = 0) -> ModRep:
    """The Nakayama transform dual(Hom(U, A)) as a left module."""
    A = U.algebra
    reg = regular_module(A)
    homs = hom_space(U, reg)
    k = len(homs)
    p = A.p
    if k == 0:
        return zero_module(A)
    stack = FFMatrix(np.array([h.a.reshape(-1) for h in homs], dtype=np.int64),
                     p, _raw=True)
    solver = SpanSolver(stack)
    # Hom(U, A) is a right A-module via post-composition with right mult.
    acts = np.zeros((A.dim, k, k), dtype=np.int64)
    for i in range(A.dim):
        R = A.right_mult_matrix(A.basis_vector(i))
        for j, h in enumerate(homs):
            img = R @ h
            coords = solver.coords_row(
                FFMatrix(img.a.reshape(1, -1), p, _raw=True))
            if coords is None:
                raise RuntimeError("Hom(U,A) is not stable under right action")
            acts[i, :, j] = coords.a[0]
    hom_mod = ModRep(A.opposite(), acts, check=False, name="Hom(U,A)")
    return dual(hom_mod)


# ---------------------------------------------------------------------
# Bimodules
# ---------------------------------------------------------------------

class Bimodule:
    """An (A,B)-bimodule: commuting left A-action and right B-action."""

    def __init__(self, left_algebra: FDAlgebra, right_algebra: FDAlgebra,
                 left_acts: np.ndarray, right_acts: np.ndarray, *,
                 check: bool = True, name: str = ""):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.p = left_algebra.p
        if right_algebra.p != self.p:
            raise ValueError("bimodule sides live over different primes")
        self.left_acts = np.mod(np.asarray(left_acts, dtype=np.int64), self.p)
        self.right_acts = np.mod(np.asarray(right_acts, dtype=np.int64), self.p)
        self.left_acts.flags.writeable = False
        self.right_acts.flags.writeable = False
        self.dim = self.left_acts.shape[1]
        self.name = name
        if check:
            self.verify()

    def verify(self):
        self.left_module().verify()
        self.right_module().verify()
        for g in self.left_algebra.generator_elements():
            for h in self.right_algebra.generator_elements():
                lm = self.left_act_vec(g)
                rm = self.right_act_vec(h)
                if lm @ rm != rm @ lm:
                    raise ValueError("left and right actions do not commute")

    def left_act_basis(self, i: int) -> FFMatrix:
        return FFMatrix(self.left_acts[i], self.p, _raw=True)

    def right_act_basis(self, j: int) -> FFMatrix:
        return FFMatrix(self.right_acts[j], self.p, _raw=True)

    def left_act_vec(self, coords: np.ndarray) -> FFMatrix:
        m = _matmul_mod(np.mod(coords, self.p).reshape(1, -1),
                        self.left_acts.reshape(self.left_algebra.dim, -1),
                        self.p)
        return FFMatrix(m.reshape(self.dim, self.dim), self.p, _raw=True)

    def right_act_vec(self, coords: np.ndarray) -> FFMatrix:
        m = _matmul_mod(np.mod(coords, self.p).reshape(1, -1),
                        self.right_acts.reshape(self.right_algebra.dim, -1),
                        self.p)
        return FFMatrix(m.reshape(self.dim, self.dim), self.p, _raw=True)

    def left_module(self) -> ModRep:
        return ModRep(self.left_algebra, self.left_acts, check=False,
                      name=f"{self.name}|left")

    def right_module(self) -> ModRep:
        """The right B-structure as a left module over B^op."""
        return ModRep(self.right_algebra.opposite(), self.right_acts,
                      check=False, name=f"{self.name}|right")

    def split_by_idempotent(self, emat: FFMatrix):
        rows = row_space_basis(emat.transpose())
        incl = rows.transpose()
        proj = solve_matrix(incl, emat)
        if proj is None:
            raise RuntimeError("idempotent image basis inconsistent")
        solver = SpanSolver(rows)
        dl = self.left_algebra.dim
        dr = self.right_algebra.dim
        k = rows.rows
        lacts = np.zeros((dl, k, k), dtype=np.int64)
        racts = np.zeros((dr, k, k), dtype=np.int64)
        for i in range(dl):
            coords = solver.coords_columns(self.left_act_basis(i) @ incl)
            if coords is None:
                raise RuntimeError("summand not left-invariant")
            lacts[i] = coords.a
        for j in range(dr):
            coords = solver.coords_columns(self.right_act_basis(j) @ incl)
            if coords is None:
                raise RuntimeError("summand not right-invariant")
            racts[j] = coords.a
        sub = Bimodule(self.left_algebra, self.right_algebra, lacts, racts,
                       check=False)
        return sub, incl, proj

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return (f"Bimodule(dim={self.dim}, {self.left_algebra.dim}x"
                f"{self.right_algebra.dim}{label})")


def regular_bimodule(A: FDAlgebra) -> Bimodule:
    return Bimodule(A, A, A.left_mults(), A.right_mults(), check=False,
                    name="A-A")


def bimodule_direct_sum(mods: Sequence[Bimodule]) -> Bimodule:
    A = mods[0].left_algebra
    B = mods[0].right_algebra
    n = sum(m.dim for m in mods)
    lacts = np.zeros((A.dim, n, n), dtype=np.int64)
    racts = np.zeros((B.dim, n, n), dtype=np.int64)
    off = 0
    for m in mods:
        lacts[:, off:off + m.dim, off:off + m.dim] = m.left_acts
        racts[:, off:off + m.dim, off:off + m.dim] = m.right_acts
        off += m.dim
    return Bimodule(A, B, lacts, racts, check=False)


# ---------------------------------------------------------------------
# Tensor products over the algebra
# ---------------------------------------------------------------------

@dataclass
class TensorProduct:
    """V (x)_A U as a quotient of the plain tensor space.

    `project`/`section` are the explicit quotient maps; `module` carries
    the induced outer structure (None for a bare vector space, ModRep for
    one outer action, Bimodule for two).
    """
    middle: FDAlgebra
    V: object
    U: object
    nV: int
    nU: int
    dim: int
    project: FFMatrix
    section: FFMatrix
    module: object

    def pure_tensor(self, v: np.ndarray, u: np.ndarray) -> FFMatrix:
        raw = np.outer(np.mod(v, self.project.p),
                       np.mod(u, self.project.p)).reshape(-1, 1)
        return self.project @ FFMatrix(raw, self.project.p)


def _middle_right_acts(V, middle: FDAlgebra) -> np.ndarray:
    if isinstance(V, Bimodule):
        if V.right_algebra is not middle:
            raise ValueError("V's right algebra is not the middle algebra")
        return V.right_acts
    if V.algebra is not middle.opposite():
        raise ValueError("V must be a right middle-module (over middle^op)")
    return V.acts


def _middle_left_acts(U, middle: FDAlgebra) -> np.ndarray:
    if isinstance(U, Bimodule):
        if U.left_algebra is not middle:
            raise ValueError("U's left algebra is not the middle algebra")
        return U.left_acts
    if U.algebra is not middle:
        raise ValueError("U must be a left middle-module")
    return U.acts


def tensor_over_algebra(V, U, middle: FDAlgebra) -> TensorProduct:
    """V (x)_middle U as the cokernel of the balancing map.

    Relations va (x) u - v (x) au for middle generators a span the full
    balancing subspace because the relation for a product decomposes into
    relations for its factors.
    """
    p = middle.p
    racts = _middle_right_acts(V, middle)
    lacts = _middle_left_acts(U, middle)
    nV, nU = racts.shape[1], lacts.shape[1]
    N = nV * nU
    rel_rows: list[FFMatrix] = []
    eye_u = np.eye(nU, dtype=np.int64)
    eye_v = np.eye(nV, dtype=np.int64)
    gens = np.array(middle.generator_elements(), dtype=np.int64).reshape(
        -1, middle.dim)
    r_gen = _matmul_mod(gens, racts.reshape(middle.dim, -1), p).reshape(
        -1, nV, nV)
    l_gen = _matmul_mod(gens, lacts.reshape(middle.dim, -1), p).reshape(
        -1, nU, nU)
    for gi in range(gens.shape[0]):
        op = np.mod(np.kron(r_gen[gi], eye_u) - np.kron(eye_v, l_gen[gi]), p)
        rel_rows.append(FFMatrix(np.ascontiguousarray(op.T), p, _raw=True))
    if rel_rows:
        relations = row_space_basis(vstack(rel_rows))
    else:
        relations = FFMatrix.zeros(0, N, p)
    q = QuotientSpace(relations, N)
    # outer actions descend to the quotient
    left_outer = V.left_algebra if isinstance(V, Bimodule) else None
    right_outer = U.right_algebra if isinstance(U, Bimodule) else None
    module = None
    lacts_out = racts_out = None
    if left_outer is not None:
        lacts_out = np.zeros((left_outer.dim, q.dim, q.dim), dtype=np.int64)
        for i in range(left_outer.dim):
            op = FFMatrix(np.kron(V.left_acts[i], eye_u), p, _raw=True)
            lacts_out[i] = (q.project @ op @ q.section).a
    if right_outer is not None:
        racts_out = np.zeros((right_outer.dim, q.dim, q.dim), dtype=np.int64)
        for j in range(right_outer.dim):
            op = FFMatrix(np.kron(eye_v, U.right_acts[j]), p, _raw=True)
            racts_out[j] = (q.project @ op @ q.section).a
    if left_outer is not None and right_outer is not None:
        module = Bimodule(left_outer, right_outer, lacts_out, racts_out,
                          check=False)
    elif left_outer is not None:
        module = ModRep(left_outer, lacts_out, check=False)
    elif right_outer is not None:
        module = ModRep(right_outer.opposite(), racts_out, check=False)
    return TensorProduct(middle=middle, V=V, U=U, nV=nV, nU=nU, dim=q.dim,
                         project=q.project, section=q.section, module=module)


def induced_tensor_map(src: TensorProduct, dst: TensorProduct,
                       f_V: FFMatrix, f_U: FFMatrix) -> FFMatrix:
    """The map src -> dst induced by a pair of balanced maps (f_V, f_U)."""
    return dst.project @ f_V.kron(f_U) @ src.section
