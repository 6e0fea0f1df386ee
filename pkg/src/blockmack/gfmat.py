"""Exact dense linear algebra over prime fields GF(p).

Everything downstream (group algebras, endomorphism algebras, complexes)
reduces to the kernels in this module: row reduction with transform
tracking, null spaces, linear solves and Kronecker products, all in exact
residue arithmetic.  Matrices are immutable wrappers around row-major
numpy int64 arrays with entries in {0..p-1}.

Conventions used throughout the package:
  * vectors are columns; a matrix acts on the left,
  * a subspace is a row-basis matrix B of shape (k, n),
  * the inclusion of a subspace is B.T, a projection is any left inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

_PRIMES: set[int] = set()


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if p not in _PRIMES:
        if not isinstance(p, (int, np.integer)) or not 2 <= p <= 2**31:
            raise ValueError(f"modulus must be an integer in [2, 2^31], got {p!r}")
        if not is_prime(int(p)):
            raise ValueError(f"modulus {p} is not prime")
        _PRIMES.add(int(p))
    return int(p)


def _as_array(data, p: int) -> np.ndarray:
    a = np.array(data, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"matrix data must be 2-dimensional, got shape {a.shape}")
    return np.mod(a, p)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # (p-1)^2 * chunk must stay below 2^63; only huge p needs chunking.
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    chunk = max(1, (2**62) // max(1, (p - 1) ** 2))
    if a.shape[1] <= chunk:
        return np.mod(a @ b, p)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for lo in range(0, a.shape[1], chunk):
        hi = lo + chunk
        out = np.mod(out + a[:, lo:hi] @ b[lo:hi, :], p)
    return out


class FFMatrix:
    """Dense matrix over GF(p), immutable after construction."""

    __slots__ = ("a", "p")

    def __init__(self, data, p: int, *, _raw: bool = False):
        p = check_prime(p)
        if _raw:
            a = data
        else:
            a = _as_array(data, p)
        a.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("FFMatrix is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int, p: int) -> "FFMatrix":
        return FFMatrix(np.zeros((rows, cols), dtype=np.int64), check_prime(p), _raw=True)

    @staticmethod
    def identity(n: int, p: int) -> "FFMatrix":
        return FFMatrix(np.eye(n, dtype=np.int64), check_prime(p), _raw=True)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], p: int) -> "FFMatrix":
        return FFMatrix(rows, p)

    @staticmethod
    def random(rng: np.random.Generator, rows: int, cols: int, p: int) -> "FFMatrix":
        return FFMatrix(rng.integers(0, p, size=(rows, cols), dtype=np.int64),
                        check_prime(p), _raw=True)

    # -- basic queries ------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def is_zero(self) -> bool:
        return not self.a.any()

    def __eq__(self, other) -> bool:
        return (isinstance(other, FFMatrix) and self.p == other.p
                and self.a.shape == other.a.shape and bool((self.a == other.a).all()))

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"FFMatrix(p={self.p}, {self.rows}x{self.cols})"

    def tolist(self):
        return self.a.tolist()

    # -- arithmetic ---------------------------------------------------

    def _check_p(self, other: "FFMatrix"):
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        self._check_p(other)
        return FFMatrix(np.mod(self.a + other.a, self.p), self.p, _raw=True)

    def __sub__(self, other: "FFMatrix") -> "FFMatrix":
        self._check_p(other)
        return FFMatrix(np.mod(self.a - other.a, self.p), self.p, _raw=True)

    def __neg__(self) -> "FFMatrix":
        return FFMatrix(np.mod(-self.a, self.p), self.p, _raw=True)

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        self._check_p(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        return FFMatrix(_matmul_mod(self.a, other.a, self.p), self.p, _raw=True)

    def scale(self, c: int) -> "FFMatrix":
        return FFMatrix(np.mod(self.a * (c % self.p), self.p), self.p, _raw=True)

    def transpose(self) -> "FFMatrix":
        return FFMatrix(np.ascontiguousarray(self.a.T), self.p, _raw=True)

    @property
    def T(self) -> "FFMatrix":
        return self.transpose()

    def kron(self, other: "FFMatrix") -> "FFMatrix":
        self._check_p(other)
        return FFMatrix(np.mod(np.kron(self.a, other.a), self.p), self.p, _raw=True)


def hstack(mats: Sequence[FFMatrix]) -> FFMatrix:
    p = mats[0].p
    return FFMatrix(np.hstack([m.a for m in mats]), p, _raw=True)


def vstack(mats: Sequence[FFMatrix]) -> FFMatrix:
    p = mats[0].p
    return FFMatrix(np.vstack([m.a for m in mats]), p, _raw=True)


def block_diag(mats: Sequence[FFMatrix], p: int) -> FFMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FFMatrix(out, p, _raw=True)


# ---------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------

def _rref_raw(a: np.ndarray, p: int, transform: bool):
    """Gauss-Jordan elimination. Returns (R, pivots, T) with T @ a = R mod p."""
    m, n = a.shape
    r = a.copy()
    t = np.eye(m, dtype=np.int64) if transform else None
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
            if transform:
                t[[row, piv]] = t[[piv, row]]
        inv = pow(int(r[row, col]), -1, p)
        if inv != 1:
            r[row] = (r[row] * inv) % p
            if transform:
                t[row] = (t[row] * inv) % p
        mask = r[:, col] != 0
        mask[row] = False
        if mask.any():
            factors = r[mask, col].copy()
            r[mask] = (r[mask] - factors[:, None] * r[row]) % p
            if transform:
                t[mask] = (t[mask] - factors[:, None] * t[row]) % p
        pivots.append(col)
        row += 1
    return r, pivots, t


@dataclass(frozen=True)
class RrefResult:
    R: FFMatrix
    rank: int
    T: FFMatrix
    pivots: tuple[int, ...]


def rref(M: FFMatrix) -> RrefResult:
    """Reduced row echelon form with invertible transform T, T @ M = R."""
    R, pivots, T = _rref_raw(M.a, M.p, transform=True)
    return RrefResult(FFMatrix(R, M.p, _raw=True), len(pivots),
                      FFMatrix(T, M.p, _raw=True), tuple(pivots))


def rank(M: FFMatrix) -> int:
    _, pivots, _ = _rref_raw(M.a, M.p, transform=False)
    return len(pivots)


def kernel(M: FFMatrix) -> FFMatrix:
    """Row basis of the right null space {v : M v = 0}."""
    R, pivots, _ = _rref_raw(M.a, M.p, transform=False)
    p = M.p
    n = M.cols
    free = [j for j in range(n) if j not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        basis[k, j] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, j]) % p
    return FFMatrix(basis, p, _raw=True)


def solve_matrix(A: FFMatrix, B: FFMatrix) -> Optional[FFMatrix]:
    """A particular X with A @ X = B, or None when inconsistent."""
    A._check_p(B)
    if A.rows != B.rows:
        raise ValueError(f"shape mismatch: {A.shape} vs rhs {B.shape}")
    aug = np.hstack([A.a, B.a])
    R, pivots, _ = _rref_raw(aug, A.p, transform=False)
    n = A.cols
    pivots_in = [c for c in pivots if c < n]
    if len(pivots_in) < len(pivots):
        return None
    X = np.zeros((n, B.cols), dtype=np.int64)
    for i, c in enumerate(pivots_in):
        X[c] = R[i, n:]
    return FFMatrix(X, A.p, _raw=True)


def solve(A: FFMatrix, b) -> Optional[FFMatrix]:
    """A particular solution column x of A x = b, or None ("inconsistent")."""
    if not isinstance(b, FFMatrix):
        b = FFMatrix(np.asarray(b, dtype=np.int64).reshape(-1, 1), A.p)
    elif b.cols != 1:
        b = b.transpose()
    return solve_matrix(A, b)


def inverse(M: FFMatrix) -> FFMatrix:
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    res = rref(M)
    if res.rank != M.rows:
        raise ValueError("matrix is singular")
    return res.T


def is_invertible(M: FFMatrix) -> bool:
    return M.rows == M.cols and rank(M) == M.rows


def kronecker(A: FFMatrix, B: FFMatrix) -> FFMatrix:
    return A.kron(B)


# ---------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------

class SpanSolver:
    """Coordinate solver for the row space of an independent row basis.

    Inverts the pivot-column block once; coordinates of many vectors then
    cost one small product plus an exact membership check.
    """

    def __init__(self, basis: FFMatrix):
        self.basis = basis
        self.p = basis.p
        self.k = basis.rows
        self.n = basis.cols
        if self.k == 0:
            self._pivcols = []
            self._pinv_t = FFMatrix.zeros(0, 0, self.p)
            return
        _, pivots, _ = _rref_raw(basis.a, self.p, transform=False)
        if len(pivots) != self.k:
            raise ValueError("basis rows are not linearly independent")
        self._pivcols = list(pivots)
        P = basis.a[:, self._pivcols]          # (k, k) invertible
        Rp, piv2, T = _rref_raw(P.T.copy(), self.p, transform=True)
        if len(piv2) != self.k:
            raise ValueError("pivot block is singular")
        self._pinv_t = FFMatrix(T, self.p, _raw=True)   # inverse of P^T

    def coords_columns(self, vectors: FFMatrix) -> Optional[FFMatrix]:
        """Coordinates (as columns) of column vectors; None if any is outside."""
        if self.k == 0:
            if vectors.a.any():
                return None
            return FFMatrix.zeros(0, vectors.cols, self.p)
        sliced = FFMatrix(np.ascontiguousarray(vectors.a[self._pivcols, :]),
                          self.p, _raw=True)
        coords = self._pinv_t @ sliced
        recon = _matmul_mod(self.basis.a.T, coords.a, self.p)
        if (recon != vectors.a).any():
            return None
        return coords

    def coords_row(self, vector_row: FFMatrix) -> Optional[FFMatrix]:
        """Coordinates (as a row) of a row vector in the basis."""
        c = self.coords_columns(vector_row.transpose())
        return None if c is None else c.transpose()

    def contains_row(self, vector_row: FFMatrix) -> bool:
        return self.coords_row(vector_row) is not None


def row_space_basis(M: FFMatrix) -> FFMatrix:
    res = rref(M)
    return FFMatrix(res.R.a[: res.rank].copy(), M.p, _raw=True)


class RowReducer:
    """Incremental row-space accumulator: add rows one at a time, each
    reduced against the rows already kept (echelon, not fully reduced)."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = check_prime(p)
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: np.ndarray) -> np.ndarray:
        row = np.mod(row, self.p)
        for piv, red in zip(self.pivots, self.rows):
            c = row[piv]
            if c:
                row = (row - c * red) % self.p
        return row

    def add(self, row: np.ndarray) -> bool:
        """Returns True when the row enlarged the span."""
        row = self.reduce(row)
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        inv = pow(int(row[piv]), -1, self.p)
        self.rows.append((row * inv) % self.p)
        self.pivots.append(piv)
        return True

    def contains(self, row: np.ndarray) -> bool:
        return not self.reduce(row).any()

    def basis(self) -> FFMatrix:
        if not self.rows:
            return FFMatrix.zeros(0, self.n, self.p)
        return row_space_basis(
            FFMatrix(np.array(self.rows, dtype=np.int64), self.p, _raw=True))


def independent_subset(rows: Iterable[FFMatrix]) -> list[int]:
    """Indices of a maximal independent subset, scanning in the given order."""
    kept: list[int] = []
    acc = None
    rk = 0
    for i, r in enumerate(rows):
        cand = r if acc is None else vstack([acc, r])
        reduced = row_space_basis(cand)
        if reduced.rows > rk:
            kept.append(i)
            acc = reduced
            rk = reduced.rows
    return kept


class QuotientSpace:
    """Quotient of GF(p)^n by the row space of a relations matrix.

    Coordinates of the quotient are the non-pivot positions of the reduced
    relations; `project` and `section` are explicit matrices so quotient
    constructions compose with other linear maps.
    """

    def __init__(self, relations: FFMatrix, n: Optional[int] = None):
        p = relations.p
        n = relations.cols if n is None else n
        R, pivots, _ = _rref_raw(relations.a, p, transform=False)
        free = [j for j in range(n) if j not in set(pivots)]
        self.p = p
        self.n = n
        self.dim = len(free)
        self.free = free
        # Reducing v by the relations zeroes its pivot coordinates and leaves
        # v'_j = v_j - sum_i v_{pivot_i} R[i, j] at each free position j.
        proj = np.zeros((len(free), n), dtype=np.int64)
        for k, j in enumerate(free):
            proj[k, j] = 1
            for i, c in enumerate(pivots):
                proj[k, c] = (-R[i, j]) % p
        self._project = FFMatrix(proj, p, _raw=True)
        sec = np.zeros((n, len(free)), dtype=np.int64)
        for k, j in enumerate(free):
            sec[j, k] = 1
        self._section = FFMatrix(sec, p, _raw=True)

    @property
    def project(self) -> FFMatrix:
        """(dim x n) matrix sending an ambient column to quotient coordinates."""
        return self._project

    @property
    def section(self) -> FFMatrix:
        """(n x dim) matrix choosing representatives; project @ section = id."""
        return self._section
