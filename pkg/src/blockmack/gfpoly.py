"""Univariate polynomial arithmetic and factorization over GF(p).

Polynomials are lists of ints (ascending powers, normalized so the last
coefficient is nonzero; the zero polynomial is the empty list).  Supplies
minimal polynomials of matrices and full factorization via squarefree /
distinct-degree / equal-degree splitting, the substrate for idempotent
lifting and center decomposition.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .gfmat import FFMatrix, _matmul_mod


def normalize(f: list[int], p: int) -> list[int]:
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f: list[int]) -> int:
    return len(f) - 1


def padd(f, g, p):
    n = max(len(f), len(g))
    return normalize([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                      for i in range(n)], p)


def psub(f, g, p):
    n = max(len(f), len(g))
    return normalize([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)
                      for i in range(n)], p)


def pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return normalize(out, p)


def pscale(f, c, p):
    return normalize([a * c for a in f], p)


def monic(f, p):
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return pscale(f, inv, p)


def pdivmod(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g) and any(f):
        if f[-1] == 0:
            f.pop()
            continue
        shift = len(f) - len(g)
        c = (f[-1] * inv) % p
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        f.pop()
    return normalize(q, p), normalize(f, p)


def pmod(f, g, p):
    return pdivmod(f, g, p)[1]


def pgcd(f, g, p):
    f, g = normalize(list(f), p), normalize(list(g), p)
    while g:
        f, g = g, pmod(f, g, p)
    return monic(f, p)


def pext_gcd(f, g, p):
    """(d, u, v) with u f + v g = d = monic gcd."""
    r0, r1 = normalize(list(f), p), normalize(list(g), p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    if not r0:
        return [], [], []
    c = pow(r0[-1], -1, p)
    return pscale(r0, c, p), pscale(s0, c, p), pscale(t0, c, p)


def ppowmod(f, e: int, m, p):
    result = [1]
    base = pmod(f, m, p)
    while e > 0:
        if e & 1:
            result = pmod(pmul(result, base, p), m, p)
        base = pmod(pmul(base, base, p), m, p)
        e >>= 1
    return result


def derivative(f, p):
    return normalize([(i * f[i]) % p for i in range(1, len(f))], p)


def evaluate(f, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def eval_matrix(f, M: FFMatrix) -> FFMatrix:
    """f(M) by Horner's rule."""
    p = M.p
    n = M.rows
    acc = np.zeros((n, n), dtype=np.int64)
    for c in reversed(f):
        acc = _matmul_mod(acc, M.a, p)
        if c % p:
            acc[np.diag_indices(n)] = (acc[np.diag_indices(n)] + c) % p
    return FFMatrix(acc, p, _raw=True)


# ---------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------

def squarefree_parts(f, p):
    """List of (squarefree g, multiplicity m) with f = prod g^m (f monic)."""
    f = monic(f, p)
    out = []

    def rec(f, mult):
        if deg(f) < 1:
            return
        d = derivative(f, p)
        if not d:
            # f = g(x^p); over the prime field the p-th root just contracts exponents
            g = [f[i] for i in range(0, len(f), p)]
            rec(normalize(g, p), mult * p)
            return
        a = pgcd(f, d, p)
        b = pdivmod(f, a, p)[0]  # product of distinct factors
        m = 1
        while deg(b) >= 1:
            c = pgcd(a, b, p)
            part = pdivmod(b, c, p)[0]  # factors of exact multiplicity m
            if deg(part) >= 1:
                out.append((part, mult * m))
            b = c
            a = pdivmod(a, c, p)[0]
            m += 1
        if deg(a) >= 1:
            rec(a, mult)

    rec(f, 1)
    return out


def distinct_degree(f, p):
    """List of (product of irreducibles of degree d, d) for squarefree monic f."""
    out = []
    x = [0, 1]
    h = x
    v = f
    d = 0
    while deg(v) >= 1:
        d += 1
        if 2 * d > deg(v):
            out.append((v, deg(v)))
            break
        h = ppowmod(h, p, f, p)
        g = pgcd(psub(h, x, p), v, p)
        if deg(g) >= 1:
            out.append((g, d))
            v = pdivmod(v, g, p)[0]
    return out


def equal_degree_split(f, d: int, p: int, rng: np.random.Generator):
    """One nontrivial monic factor of f = product of >= 2 irreducibles of degree d."""
    n = deg(f)
    while True:
        r = [int(rng.integers(0, p)) for _ in range(n)]
        r = normalize(r, p)
        if deg(r) < 1:
            continue
        g = pgcd(r, f, p)
        if 1 <= deg(g) < n:
            return g
        if p == 2:
            # trace map over GF(2^d)
            t = r
            acc = r
            for _ in range(d - 1):
                t = pmod(pmul(t, t, p), f, p)
                acc = padd(acc, t, p)
            g = pgcd(acc, f, p)
        else:
            e = (p ** d - 1) // 2
            t = ppowmod(r, e, f, p)
            g = pgcd(psub(t, [1], p), f, p)
        if 1 <= deg(g) < n:
            return g


def equal_degree_factor(f, d: int, p: int, rng) -> list[list[int]]:
    f = monic(f, p)
    if deg(f) == d:
        return [f]
    g = equal_degree_split(f, d, p, rng)
    h = pdivmod(f, g, p)[0]
    return equal_degree_factor(g, d, p, rng) + equal_degree_factor(h, d, p, rng)


def factor(f, p, rng: Optional[np.random.Generator] = None) -> list[tuple[list[int], int]]:
    """Full factorization of f into (monic irreducible, multiplicity) pairs."""
    if rng is None:
        rng = np.random.default_rng(0)
    f = normalize(list(f), p)
    if deg(f) < 1:
        return []
    out = []
    for sf, mult in squarefree_parts(f, p):
        for prod, d in distinct_degree(sf, p):
            for irr in equal_degree_factor(prod, d, p, rng):
                out.append((irr, mult))
    out.sort(key=lambda t: (deg(t[0]), t[0]))
    return out


def roots(f, p, rng=None) -> list[int]:
    """Roots in GF(p) of f (with multiplicity ignored)."""
    return sorted((-g[0]) % p for g, _ in factor(f, p, rng) if deg(g) == 1)


def is_irreducible(f, p, rng=None) -> bool:
    f = normalize(list(f), p)
    if deg(f) < 1:
        return False
    fac = factor(f, p, rng)
    return len(fac) == 1 and fac[0][1] == 1


# ---------------------------------------------------------------------
# Minimal polynomials
# ---------------------------------------------------------------------

def min_poly_vector(M: FFMatrix, v: FFMatrix) -> list[int]:
    """Monic minimal polynomial of M relative to the column vector v.

    Maintains an incrementally reduced Krylov basis with coefficient
    tracking, so each step costs one reduction rather than a fresh
    elimination.
    """
    p = M.p
    if v.is_zero():
        return [1]
    n = M.rows
    reduced: list[np.ndarray] = []       # rows with distinct pivot columns
    pivots: list[int] = []
    coeff_rows: list[np.ndarray] = []    # combination over Krylov vectors
    w = v.a[:, 0].copy()
    step = 0
    while True:
        row = w.copy()
        coeff = np.zeros(n + 1, dtype=np.int64)
        coeff[step] = 1
        for piv, red, cf in zip(pivots, reduced, coeff_rows):
            c = row[piv]
            if c:
                row = (row - c * red) % p
                coeff = (coeff - c * cf) % p
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            inv = pow(int(coeff[step]), -1, p)
            return normalize([int(c * inv % p) for c in coeff[: step + 1]], p)
        piv = int(nz[0])
        inv = pow(int(row[piv]), -1, p)
        reduced.append((row * inv) % p)
        coeff_rows.append((coeff * inv) % p)
        pivots.append(piv)
        w = (M.a @ w) % p
        step += 1


def min_poly(M: FFMatrix) -> list[int]:
    """Monic minimal polynomial of a square matrix over GF(p).

    Accumulates the union of Krylov subspaces: a basis vector already inside
    the (M-invariant) union contributes nothing, and once the union is full
    the lcm of the local polynomials is the minimal polynomial.
    """
    p = M.p
    n = M.rows
    if n == 0:
        return [1]
    m = [1]
    acc_rows: list[np.ndarray] = []
    acc_pivots: list[int] = []

    def reduce_row(row):
        row = row.copy()
        for piv, red in zip(acc_pivots, acc_rows):
            c = row[piv]
            if c:
                row = (row - c * red) % p
        return row

    def absorb(row):
        row = reduce_row(row)
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        inv = pow(int(row[piv]), -1, p)
        acc_rows.append((row * inv) % p)
        acc_pivots.append(piv)
        return True

    for j in range(n):
        if len(acc_rows) == n:
            break
        e = np.zeros(n, dtype=np.int64)
        e[j] = 1
        if not reduce_row(e).any():
            continue
        v = FFMatrix(e.reshape(-1, 1), p, _raw=True)
        local = min_poly_vector(M, v)
        g = pgcd(m, local, p)
        m = pdivmod(pmul(m, local, p), g, p)[0]
        w = e
        for _ in range(deg(local)):
            if not absorb(w):
                break
            w = (M.a @ w) % p
    return monic(m, p)
