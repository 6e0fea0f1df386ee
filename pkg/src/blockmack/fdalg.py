"""Finite-dimensional associative algebras over GF(p) via structure constants.

An algebra is a dense tensor c[i,j,k] (coefficient of basis_k in
basis_i * basis_j) plus a unit vector and an optional symmetrizing
functional.  On top of that sit the constructions the rest of the package
leans on: group algebras, centers and block idempotents, radicals,
complete systems of primitive idempotents (lifted through the radical by
p-power stabilization), corner algebras, opposites, Cartan matrices and
endomorphism algebras of module lists.

Idempotent machinery is deterministic given an explicit seed: the only
randomized steps are equal-degree polynomial splitting and the search for
splitting elements in simple (matrix) components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import gfpoly
from .gfmat import (FFMatrix, QuotientSpace, SpanSolver, check_prime, kernel,
                    rank, rref, row_space_basis, solve, solve_matrix, vstack,
                    _matmul_mod)
from .permgrp import PermGroup


def _reduce_rows(a: np.ndarray, p: int) -> np.ndarray:
    return np.mod(a, p)


class FDAlgebra:
    """Associative unital algebra by structure constants over GF(p)."""

    def __init__(self, p: int, structure: np.ndarray, unit: np.ndarray,
                 sym_form: Optional[np.ndarray] = None, *,
                 gen_indices: Optional[list[int]] = None,
                 check: bool = True, name: str = ""):
        self.p = check_prime(p)
        self.structure = np.mod(np.asarray(structure, dtype=np.int64), p)
        self.structure.flags.writeable = False
        self.dim = self.structure.shape[0]
        if self.structure.shape != (self.dim, self.dim, self.dim):
            raise ValueError("structure tensor must be cubic")
        self.unit = np.mod(np.asarray(unit, dtype=np.int64).reshape(-1), p)
        if self.unit.shape != (self.dim,):
            raise ValueError("unit vector has wrong length")
        self.sym_form = None
        if sym_form is not None:
            self.sym_form = np.mod(np.asarray(sym_form, dtype=np.int64).reshape(-1), p)
        self.name = name
        self._gen_indices = gen_indices
        self._gen_elements: Optional[list[np.ndarray]] = None
        self._op: Optional["FDAlgebra"] = None
        self._radical_rows: Optional[FFMatrix] = None
        self._left_mats: Optional[np.ndarray] = None
        self._right_mats: Optional[np.ndarray] = None
        if check:
            self.verify()

    # -- basic structure ------------------------------------------------

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def mult(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p = self.p
        t = _matmul_mod(np.mod(a, p).reshape(1, -1),
                        self.structure.reshape(self.dim, -1), p)
        t = t.reshape(self.dim, self.dim)
        return _matmul_mod(np.mod(b, p).reshape(1, -1), t, p).reshape(-1)

    def power(self, a: np.ndarray, k: int) -> np.ndarray:
        result = self.unit.copy()
        base = np.mod(a, self.p)
        while k > 0:
            if k & 1:
                result = self.mult(result, base)
            base = self.mult(base, base)
            k >>= 1
        return result

    def left_mults(self) -> np.ndarray:
        """Stacked matrices L_i with L_i x = basis_i * x (shape d,d,d)."""
        if self._left_mats is None:
            m = self.structure.transpose(0, 2, 1).copy()  # L_i[k, j] = c[i, j, k]
            m.flags.writeable = False
            self._left_mats = m
        return self._left_mats

    def right_mults(self) -> np.ndarray:
        """Stacked matrices R_j with R_j x = x * basis_j."""
        if self._right_mats is None:
            m = self.structure.transpose(1, 2, 0).copy()  # R_j[k, i] = c[i, j, k]
            m.flags.writeable = False
            self._right_mats = m
        return self._right_mats

    def left_mult_matrix(self, a: np.ndarray) -> FFMatrix:
        p = self.p
        m = _matmul_mod(np.mod(a, p).reshape(1, -1),
                        self.left_mults().reshape(self.dim, -1), p)
        return FFMatrix(m.reshape(self.dim, self.dim), p, _raw=True)

    def right_mult_matrix(self, a: np.ndarray) -> FFMatrix:
        p = self.p
        m = _matmul_mod(np.mod(a, p).reshape(1, -1),
                        self.right_mults().reshape(self.dim, -1), p)
        return FFMatrix(m.reshape(self.dim, self.dim), p, _raw=True)

    def is_commutative(self) -> bool:
        return bool((self.structure == self.structure.transpose(1, 0, 2)).all())

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, size=self.dim, dtype=np.int64)

    def sym_gram(self) -> FFMatrix:
        if self.sym_form is None:
            raise ValueError("algebra carries no symmetrizing form")
        p = self.p
        g = _matmul_mod(self.structure.reshape(-1, self.dim),
                        self.sym_form.reshape(-1, 1), p)
        return FFMatrix(g.reshape(self.dim, self.dim), p, _raw=True)

    def verify(self):
        """Exhaustive associativity, unit and symmetrizing-form checks."""
        p, d, c = self.p, self.dim, self.structure
        for i in range(d):
            lhs = np.tensordot(c[i], c, axes=([1], [0]))   # (e_i e_j) e_k
            rhs = np.tensordot(c, c[i], axes=([2], [0]))   # e_i (e_j e_k)
            if ((lhs - rhs) % p).any():
                raise ValueError(f"associativity fails at basis index {i}")
        lu = self.left_mult_matrix(self.unit)
        ru = self.right_mult_matrix(self.unit)
        eye = FFMatrix.identity(d, p)
        if lu != eye or ru != eye:
            raise ValueError("unit law fails")
        if self.sym_form is not None:
            g = self.sym_gram()
            if g != g.transpose():
                raise ValueError("symmetrizing form is not symmetric")
            if rank(g) != d:
                raise ValueError("symmetrizing form is degenerate")

    # -- generators -----------------------------------------------------

    def _spanned_by(self, cands: list[np.ndarray]) -> bool:
        """Does the list generate the whole algebra (words + unit)?"""
        from .gfmat import RowReducer
        red = RowReducer(self.dim, self.p)
        red.add(self.unit)
        frontier = [self.unit]
        for c in cands:
            if red.add(np.mod(c, self.p)):
                frontier.append(red.rows[-1])
        lmats = [self.left_mult_matrix(c).a for c in cands]
        while frontier and red.rank < self.dim:
            nxt = []
            for w in frontier:
                for L in lmats:
                    if red.add((L @ w) % self.p):
                        nxt.append(red.rows[-1])
            frontier = nxt
        return red.rank == self.dim

    def generator_elements(self) -> list[np.ndarray]:
        """A small generating list of elements (cached, deterministic).

        Preset generators (e.g. group elements for a group algebra) win;
        otherwise a seeded search tries a few random elements before
        falling back to a greedy basis scan.
        """
        if self._gen_elements is None and self._op is not None and \
                self._op._gen_elements is not None:
            self._gen_elements = self._op._gen_elements
        if self._gen_elements is None and self._gen_indices is not None:
            self._gen_elements = [self.basis_vector(i)
                                  for i in self._gen_indices]
        if self._gen_elements is None:
            rng = np.random.default_rng(0xB10C)
            found = None
            for k in (2, 3, 4, 6, 8, 12):
                if k >= self.dim:
                    break
                for _ in range(8):
                    cands = [self.random_element(rng) for _ in range(k)]
                    if self._spanned_by(cands):
                        found = cands
                        break
                if found:
                    break
            if found is None:
                found = self._greedy_basis_generators()
            self._gen_elements = found
        return self._gen_elements

    def _greedy_basis_generators(self) -> list[np.ndarray]:
        from .gfmat import RowReducer
        gens: list[np.ndarray] = []
        red = RowReducer(self.dim, self.p)
        red.add(self.unit)
        lmats: list[np.ndarray] = []
        frontier: list[np.ndarray] = [self.unit]
        for i in range(self.dim):
            if red.rank == self.dim:
                break
            v = self.basis_vector(i)
            if red.contains(v):
                continue
            gens.append(v)
            lmats.append(self.left_mult_matrix(v).a)
            frontier = [r.copy() for r in red.rows]
            red.add(v)
            frontier.append(v)
            while frontier and red.rank < self.dim:
                nxt = []
                for w in frontier:
                    for L in lmats:
                        if red.add((L @ w) % self.p):
                            nxt.append(red.rows[-1])
                frontier = nxt
        return gens

    # -- opposite ---------------------------------------------------------

    def opposite(self) -> "FDAlgebra":
        if self._op is None:
            op = FDAlgebra(self.p, self.structure.transpose(1, 0, 2),
                           self.unit, self.sym_form, check=False,
                           name=f"{self.name}^op" if self.name else "")
            op._gen_indices = self._gen_indices
            op._op = self
            self._op = op
        return self._op

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"FDAlgebra(p={self.p}, dim={self.dim}{label})"


@dataclass
class Idempotent:
    """An exact idempotent element of an algebra."""
    algebra: FDAlgebra
    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.mod(np.asarray(self.coords, dtype=np.int64).reshape(-1),
                             self.algebra.p)
        sq = self.algebra.mult(self.coords, self.coords)
        if (sq != self.coords).any():
            raise ValueError("element is not idempotent")

    def is_zero(self) -> bool:
        return not self.coords.any()

    def rank_left(self) -> int:
        """dim of A*e."""
        return rank(self.algebra.right_mult_matrix(self.coords))

    def __repr__(self):
        return f"Idempotent(dim Ae={self.rank_left()})"


# ---------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------

def group_algebra(G: PermGroup, p: int) -> FDAlgebra:
    """The group algebra kG with its standard symmetrizing form s(g)=[g=1]."""
    elems = G.elements
    n = len(elems)
    if n > 512:
        raise ValueError(f"group too large for a dense group algebra (|G|={n})")
    index = {g: i for i, g in enumerate(elems)}
    c = np.zeros((n, n, n), dtype=np.int64)
    from .permgrp import pmul
    for i, g in enumerate(elems):
        for j, h in enumerate(elems):
            c[i, j, index[pmul(g, h)]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[index[G.identity()]] = 1
    sym = unit.copy()
    gen_indices = sorted({index[g] for g in G.generators} | {index[G.identity()]})
    A = FDAlgebra(p, c, unit, sym, gen_indices=gen_indices, check=False,
                  name=f"k[G|{n}]")
    A._group_elements = elems  # used by block/permutation-module builders
    A._group_index = index
    return A


def algebra_from_subspace(parent: FDAlgebra, rows: FFMatrix,
                          unit_vec: np.ndarray, *, name: str = "",
                          sym_form: Optional[np.ndarray] = None,
                          check: bool = False) -> tuple[FDAlgebra, FFMatrix]:
    """The subspace (given by independent rows, closed under mult) as an algebra.

    Returns (algebra, rows); coordinates of the new algebra refer to the rows.
    """
    solver = SpanSolver(rows)
    k = rows.rows
    p = parent.p
    c = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            prod = parent.mult(rows.a[i], rows.a[j])
            coords = solver.coords_row(FFMatrix(prod.reshape(1, -1), p))
            if coords is None:
                raise ValueError("subspace is not closed under multiplication")
            c[i, j] = coords.a[0]
    ucoords = solver.coords_row(FFMatrix(np.mod(unit_vec, p).reshape(1, -1), p))
    if ucoords is None:
        raise ValueError("unit vector lies outside the subspace")
    sub = FDAlgebra(p, c, ucoords.a[0], sym_form, check=check, name=name)
    return sub, rows


def center(A: FDAlgebra) -> FFMatrix:
    """Row basis of the center Z(A)."""
    mats = []
    for g in A.generator_elements():
        li = A.left_mult_matrix(g)
        ri = A.right_mult_matrix(g)
        mats.append(li - ri)
    if not mats:
        return FFMatrix.identity(A.dim, A.p)
    return kernel(vstack(mats))


def center_algebra(A: FDAlgebra) -> tuple[FDAlgebra, FFMatrix]:
    rows = center(A)
    return algebra_from_subspace(A, rows, A.unit, name="Z", check=False)


def radical(A: FDAlgebra, seed: int = 0) -> FFMatrix:
    """Row basis of the Jacobson radical J(A).

    J(A) is the intersection of the annihilators of the composition factors
    of the regular module, which the MeatAxe delivers; valid over any field
    in any characteristic.
    """
    if A._radical_rows is not None:
        return A._radical_rows
    if A._op is not None and A._op._radical_rows is not None:
        A._radical_rows = A._op._radical_rows  # J(A^op) = J(A) as a subspace
        return A._radical_rows
    from . import fdmod
    reg = fdmod.regular_module(A)
    factors = fdmod.composition_factors(reg, seed=seed)
    # a in J iff sum_i a_i rho_S(e_i) = 0 for every composition factor S
    blocks = []
    for S in factors:
        blocks.append(S.acts.reshape(A.dim, -1))
    big = np.hstack(blocks) if blocks else np.zeros((A.dim, 0), dtype=np.int64)
    J = kernel(FFMatrix(big.T, A.p, _raw=True))
    A._radical_rows = J
    return J


def quotient_algebra(A: FDAlgebra, ideal_rows: FFMatrix,
                     name: str = "") -> tuple[FDAlgebra, QuotientSpace]:
    """A / (two-sided ideal), with the quotient-space data for lifting."""
    q = QuotientSpace(ideal_rows, A.dim)
    k = q.dim
    p = A.p
    c = np.zeros((k, k, k), dtype=np.int64)
    sec = q.section.a
    proj = q.project
    for i in range(k):
        for j in range(k):
            prod = A.mult(sec[:, i], sec[:, j])
            c[i, j] = (proj @ FFMatrix(prod.reshape(-1, 1), p)).a[:, 0]
    unit = (proj @ FFMatrix(A.unit.reshape(-1, 1), p)).a[:, 0]
    Q = FDAlgebra(p, c, unit, check=False, name=name or "quotient")
    return Q, q


def corner_algebra(A: FDAlgebra, e: Idempotent) -> "CornerAlgebra":
    """The corner eAe with embedding data; the unit of eAe is e."""
    if e.is_zero():
        raise ValueError("corner at the zero idempotent")
    p = A.p
    cand = []
    for i in range(A.dim):
        v = A.mult(e.coords, A.mult(A.basis_vector(i), e.coords))
        cand.append(v)
    rows_all = FFMatrix(np.array(cand, dtype=np.int64), p)
    from .gfmat import independent_subset
    keep = independent_subset([FFMatrix(r.reshape(1, -1), p) for r in rows_all.a])
    rows = FFMatrix(rows_all.a[keep].copy(), p, _raw=True)
    sym = None
    sub, _ = algebra_from_subspace(A, rows, e.coords, name=f"e({A.name})e")
    if A.sym_form is not None:
        # restriction of a symmetrizing form to a corner stays symmetrizing
        sym = np.array([int(np.dot(A.sym_form, rows.a[i]) % p)
                        for i in range(rows.rows)], dtype=np.int64)
        sub = FDAlgebra(p, sub.structure, sub.unit, sym, check=False,
                        name=sub.name)
    return CornerAlgebra(parent=A, e=e, algebra=sub, rows=rows,
                         solver=SpanSolver(rows))


@dataclass
class CornerAlgebra:
    """eAe together with its embedding into A."""
    parent: FDAlgebra
    e: Idempotent
    algebra: FDAlgebra
    rows: FFMatrix
    solver: SpanSolver

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def to_parent(self, x: np.ndarray) -> np.ndarray:
        return np.mod(np.asarray(x).reshape(1, -1) @ self.rows.a, self.parent.p)[0]

    def from_parent(self, a: np.ndarray) -> np.ndarray:
        coords = self.solver.coords_row(
            FFMatrix(np.mod(a, self.parent.p).reshape(1, -1), self.parent.p))
        if coords is None:
            raise ValueError("element not in the corner subspace")
        return coords.a[0]


def opposite(A: FDAlgebra) -> FDAlgebra:
    return A.opposite()


# ---------------------------------------------------------------------
# Idempotent machinery
# ---------------------------------------------------------------------

def _element_min_poly(A: FDAlgebra, a: np.ndarray) -> list[int]:
    return gfpoly.min_poly(A.left_mult_matrix(a))


def _eval_element(A: FDAlgebra, f: list[int], a: np.ndarray) -> np.ndarray:
    """f(a) inside A."""
    acc = np.zeros(A.dim, dtype=np.int64)
    for c in reversed(f):
        acc = A.mult(acc, a)
        acc = np.mod(acc + c * A.unit, A.p)
    return acc


def _p_power_stabilize(A: FDAlgebra, a: np.ndarray, max_iter: int = 256) -> np.ndarray:
    """Iterate a <- a^p until a^2 = a; exact in characteristic p."""
    x = np.mod(a, A.p)
    for _ in range(max_iter):
        if (A.mult(x, x) == x).all():
            return x
        x = A.power(x, A.p)
    raise RuntimeError("idempotent lifting did not stabilize")


def _split_by_element(A: FDAlgebra, a: np.ndarray,
                      rng: np.random.Generator) -> Optional[list[np.ndarray]]:
    """Orthogonal idempotent decomposition of 1 from the min poly of a, if split."""
    m = _element_min_poly(A, a)
    fac = gfpoly.factor(m, A.p, rng)
    if len(fac) < 2:
        return None
    idems = []
    for f, mult in fac:
        g = [1]
        for f2, mult2 in fac:
            if f2 is f:
                continue
            for _ in range(mult2):
                g = gfpoly.pmul(g, f2, A.p)
        fm = [1]
        for _ in range(mult):
            fm = gfpoly.pmul(fm, f, A.p)
        d, u, v = gfpoly.pext_gcd(g, fm, A.p)
        if d != [1]:
            return None
        # u*g = 1 mod f^mult, 0 mod (rest): the CRT idempotent for this factor
        eps_poly = gfpoly.pmod(gfpoly.pmul(u, g, A.p), m, A.p)
        idems.append(_eval_element(A, eps_poly, a))
    return idems


def _ss_simple_primitive_idempotents(C: FDAlgebra, rng: np.random.Generator,
                                     depth: int = 0) -> list[np.ndarray]:
    """Complete orthogonal primitive idempotents of a semisimple algebra C.

    A finite simple algebra is a matrix ring over a finite field
    (Wedderburn), so a semisimple corner is a division algebra exactly when
    it is commutative; that is the deterministic leaf test.
    """
    if C.is_commutative():
        return _commutative_primitive_idempotents(C, rng, semisimple=True)
    # find a nontrivial split by sampling minimal polynomials
    for attempt in range(500):
        a = C.random_element(rng) if attempt else C.basis_vector(0)
        pieces = _split_by_element(C, a, rng)
        if pieces is None or len(pieces) < 2:
            continue
        out = []
        for eps in pieces:
            corner = corner_algebra(C, Idempotent(C, eps))
            for sub in _ss_simple_primitive_idempotents(corner.algebra, rng,
                                                        depth + 1):
                out.append(corner.to_parent(sub))
        return out
    raise RuntimeError("no splitting element found in a noncommutative "
                       "semisimple algebra; sampling budget exhausted")


def _commutative_primitive_idempotents(C: FDAlgebra, rng: np.random.Generator,
                                       *, semisimple: bool = False) -> list[np.ndarray]:
    """Primitive idempotents of a commutative algebra.

    The fixed space of the (GF(p)-linear) Frobenius on C/J(C) has dimension
    equal to the number of field components; a non-scalar fixed element has
    squarefree totally-split minimal polynomial, so Lagrange interpolation
    yields the splitting idempotents.  This certifies termination.
    """
    p = C.p
    if not semisimple:
        J = radical(C)
        if J.rows:
            S, q = quotient_algebra(C, J, name="C/J")
            prims_bar = _commutative_primitive_idempotents(S, rng, semisimple=True)
            lifted = []
            esum = np.zeros(C.dim, dtype=np.int64)
            for eb in prims_bar:
                a = np.mod(q.section.a @ eb, p)
                one_minus = np.mod(C.unit - esum, p)
                a = C.mult(one_minus, C.mult(a, one_minus))
                e = _p_power_stabilize(C, a)
                lifted.append(e)
                esum = np.mod(esum + e, p)
            return lifted
    # semisimple commutative: Frobenius fixed space
    frob_cols = []
    for i in range(C.dim):
        frob_cols.append(C.power(C.basis_vector(i), p))
    F = FFMatrix(np.array(frob_cols, dtype=np.int64).T, p, _raw=True)
    fixed = kernel(F - FFMatrix.identity(C.dim, p))
    t = fixed.rows
    if t <= 1:
        return [C.unit.copy()]
    # pick a fixed element that is not a scalar multiple of the unit
    unit_solver = SpanSolver(FFMatrix(C.unit.reshape(1, -1), p))
    z = None
    for i in range(t):
        row = FFMatrix(fixed.a[i].reshape(1, -1), p)
        if not unit_solver.contains_row(row):
            z = fixed.a[i]
            break
    if z is None:
        raise RuntimeError("Frobenius fixed space inconsistent")
    m = _element_min_poly(C, z)
    cs = gfpoly.roots(m, p, rng)
    out = []
    for ci in cs:
        # Lagrange idempotent for the eigenvalue ci of z
        num = C.unit.copy()
        denom = 1
        for cj in cs:
            if cj == ci:
                continue
            num = C.mult(num, np.mod(z - cj * C.unit, p))
            denom = (denom * (ci - cj)) % p
        eps = np.mod(num * pow(denom, -1, p), p)
        corner = corner_algebra(C, Idempotent(C, eps))
        for sub in _commutative_primitive_idempotents(corner.algebra, rng,
                                                      semisimple=True):
            out.append(corner.to_parent(sub))
    return out


def _canonical_idem_sort(A: FDAlgebra, idems: list[np.ndarray]) -> list[np.ndarray]:
    return sorted(idems, key=lambda e: (rank(A.right_mult_matrix(e)),
                                        tuple(int(x) for x in e)))


def complete_primitive_idempotents(A: FDAlgebra, seed: int = 0) -> list[Idempotent]:
    """A complete list of pairwise orthogonal primitive idempotents of A."""
    cache = getattr(A, "_prim_cache", None)
    if cache is None:
        cache = A._prim_cache = {}
    if seed in cache:
        return cache[seed]
    rng = np.random.default_rng(seed)
    J = radical(A, seed=seed)
    if J.rows == 0:
        raw = _ss_simple_primitive_idempotents(A, rng)
    else:
        Abar, q = quotient_algebra(A, J, name="A/J")
        prims_bar = _ss_simple_primitive_idempotents(Abar, rng)
        raw = []
        esum = np.zeros(A.dim, dtype=np.int64)
        for eb in prims_bar:
            a = np.mod(q.section.a @ eb, A.p)
            one_minus = np.mod(A.unit - esum, A.p)
            a = A.mult(one_minus, A.mult(a, one_minus))
            e = _p_power_stabilize(A, a)
            raw.append(e)
            esum = np.mod(esum + e, A.p)
    raw = _canonical_idem_sort(A, raw)
    out = [Idempotent(A, e) for e in raw]
    _assert_complete_orthogonal(A, out)
    cache[seed] = out
    return out


def lift_idempotents(A: FDAlgebra, seed: int = 0) -> list[Idempotent]:
    """Spec-facing alias: complete orthogonal primitive idempotents of A."""
    return complete_primitive_idempotents(A, seed)


def _assert_complete_orthogonal(A: FDAlgebra, idems: Sequence[Idempotent]):
    total = np.zeros(A.dim, dtype=np.int64)
    for i, e in enumerate(idems):
        total = np.mod(total + e.coords, A.p)
        for j, f in enumerate(idems):
            prod = A.mult(e.coords, f.coords)
            want = e.coords if i == j else np.zeros(A.dim, dtype=np.int64)
            if (prod != want).any():
                raise RuntimeError("idempotent system is not orthogonal")
    if (total != A.unit).any():
        raise RuntimeError("idempotent system does not sum to 1")


def central_primitive_idempotents(A: FDAlgebra, seed: int = 0) -> list[Idempotent]:
    """The blocks of A: primitive idempotents of the center."""
    rng = np.random.default_rng(seed)
    Z, zrows = center_algebra(A)
    prims = _commutative_primitive_idempotents(Z, rng)
    raw = [np.mod(e.reshape(1, -1) @ zrows.a, A.p)[0] for e in prims]
    raw = _canonical_idem_sort(A, raw)
    out = [Idempotent(A, e) for e in raw]
    _assert_complete_orthogonal(A, out)
    for e in out:
        le = A.left_mult_matrix(e.coords)
        re = A.right_mult_matrix(e.coords)
        if le != re:
            raise RuntimeError("block idempotent is not central")
    return out


def is_local(A: FDAlgebra, seed: int = 0) -> bool:
    return len(complete_primitive_idempotents(A, seed)) == 1


# ---------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------

def _int_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _int_det(minor)
    return total


@dataclass
class CartanData:
    matrix: list[list[int]]          # c[i][j] = [P_i : S_j]
    simple_dims: list[int]
    projective_dims: list[int]
    multiplicities: list[int]        # of P_i in the regular module

    @property
    def det_abs(self) -> int:
        return abs(_int_det(self.matrix))

    @property
    def n_simples(self) -> int:
        return len(self.simple_dims)


def cartan_matrix(A: FDAlgebra, seed: int = 0) -> CartanData:
    """Composition multiplicities of simples in the projective indecomposables."""
    from . import fdmod
    idems = complete_primitive_idempotents(A, seed)
    projs = [fdmod.projective_module(A, e) for e in idems]
    classes: list[int] = []  # index into projs of class representatives
    mult: list[int] = []
    for i, P in enumerate(projs):
        found = False
        for k, ci in enumerate(classes):
            if fdmod.is_isomorphic(P, projs[ci], seed=seed).isomorphic:
                mult[k] += 1
                found = True
                break
        if not found:
            classes.append(i)
            mult.append(1)
    reps = [projs[c] for c in classes]
    simples = [fdmod.top_of_projective(A, projs[c]) for c in classes]
    cmat = []
    for P in reps:
        row = [0] * len(simples)
        for S in fdmod.composition_factors(P, seed=seed):
            hit = None
            for j, T in enumerate(simples):
                if S.dim == T.dim and fdmod.is_isomorphic(S, T, seed=seed).isomorphic:
                    hit = j
                    break
            if hit is None:
                raise RuntimeError("composition factor matches no simple top")
            row[hit] += 1
        cmat.append(row)
    data = CartanData(matrix=cmat, simple_dims=[S.dim for S in simples],
                      projective_dims=[P.dim for P in reps],
                      multiplicities=mult)
    for i, P in enumerate(reps):
        if P.dim != sum(cmat[i][j] * data.simple_dims[j]
                        for j in range(len(simples))):
            raise RuntimeError("Cartan row violates dim P = sum c_ij dim S_j")
    return data


# ---------------------------------------------------------------------
# Endomorphism algebras
# ---------------------------------------------------------------------

@dataclass
class EndoAlgebraData:
    """E = End_A(X) for X the direct sum of a module list.

    `basis_mats` realizes each E-basis element as a matrix on X; proj_idems
    are the block projections onto the summands.
    """
    base: FDAlgebra
    summands: list
    E: FDAlgebra
    proj_idems: list[Idempotent]
    X: object
    basis_mats: list[FFMatrix]
    offsets: list[int]
    solver: SpanSolver = field(repr=False, default=None)

    def mat_of(self, coords: np.ndarray) -> FFMatrix:
        p = self.E.p
        n = self.X.dim
        acc = np.zeros((n, n), dtype=np.int64)
        for c, m in zip(np.mod(coords, p), self.basis_mats):
            if c:
                acc = (acc + int(c) * m.a) % p
        return FFMatrix(acc, p, _raw=True)

    def coords_of(self, mat: FFMatrix) -> np.ndarray:
        row = FFMatrix(mat.a.reshape(1, -1), self.E.p, _raw=True)
        coords = self.solver.coords_row(row)
        if coords is None:
            raise ValueError("matrix is not an A-endomorphism of X")
        return coords.a[0]


def endo_algebra(A: FDAlgebra, summands: Sequence) -> EndoAlgebraData:
    """End_A(X_1 + ... + X_r) with block projections, dims cross-checked."""
    from . import fdmod
    if not summands:
        raise ValueError("summand list must be nonempty")
    p = A.p
    X = fdmod.direct_sum(list(summands))
    offsets = [0]
    for U in summands:
        offsets.append(offsets[-1] + U.dim)
    n = X.dim
    mats: list[FFMatrix] = []
    hom_dims = 0
    for j, Uj in enumerate(summands):
        for i, Ui in enumerate(summands):
            basis = fdmod.hom_space(Ui, Uj)
            hom_dims += len(basis)
            for h in basis:
                big = np.zeros((n, n), dtype=np.int64)
                big[offsets[j]:offsets[j + 1], offsets[i]:offsets[i + 1]] = h.a
                mats.append(FFMatrix(big, p, _raw=True))
    dim_e = len(mats)
    if dim_e != hom_dims:
        raise RuntimeError("hom-dimension bookkeeping is inconsistent")
    stack = FFMatrix(np.array([m.a.reshape(-1) for m in mats], dtype=np.int64),
                     p, _raw=True)
    solver = SpanSolver(stack)
    big = np.stack([m.a for m in mats])
    c = np.zeros((dim_e, dim_e, dim_e), dtype=np.int64)
    for a in range(dim_e):
        prods = np.matmul(mats[a].a, big) % p          # (dim_e, n, n)
        coords = solver.coords_columns(
            FFMatrix(prods.reshape(dim_e, n * n).T, p, _raw=True))
        if coords is None:
            raise RuntimeError("End(X) is not closed; hom bases corrupted")
        c[a] = coords.a.T
    unit_coords = solver.coords_row(
        FFMatrix(np.eye(n, dtype=np.int64).reshape(1, -1), p, _raw=True))
    if unit_coords is None:
        raise RuntimeError("identity not contained in End(X) span")
    E = FDAlgebra(p, c, unit_coords.a[0], check=False, name="End(X)")
    data = EndoAlgebraData(base=A, summands=list(summands), E=E,
                           proj_idems=[], X=X, basis_mats=mats,
                           offsets=offsets, solver=solver)
    for i in range(len(summands)):
        blk = np.zeros((n, n), dtype=np.int64)
        sl = slice(offsets[i], offsets[i + 1])
        blk[sl, sl] = np.eye(offsets[i + 1] - offsets[i], dtype=np.int64)
        data.proj_idems.append(
            Idempotent(E, data.coords_of(FFMatrix(blk, p, _raw=True))))
    return data
