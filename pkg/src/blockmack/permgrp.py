"""Minimal permutation-group engine.

Supplies the group-theoretic inputs of the pipeline: closed element lists,
Sylow subgroups, conjugacy-class representatives of subgroups of a fixed
Sylow subgroup, and coset actions.  Permutations are tuples of images on
0..degree-1; everything is brute force under a hard order cap, which is
exactly what desk scale needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

ORDER_CAP = 20000

Perm = tuple[int, ...]


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def pmul(a: Perm, b: Perm) -> Perm:
    """Composition a∘b: apply b first."""
    return tuple(a[b[i]] for i in range(len(a)))


def pinv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_order(a: Perm) -> int:
    n = 1
    x = a
    e = identity_perm(len(a))
    while x != e:
        x = pmul(x, a)
        n += 1
    return n


def _check_perm(images: Sequence[int], degree: int) -> Perm:
    t = tuple(images)
    if len(t) != degree or sorted(t) != list(range(degree)):
        raise ValueError(f"not a permutation of 0..{degree - 1}: {images}")
    return t


class GroupSizeError(ValueError):
    """Raised when closing a generating set exceeds the configured cap."""


class PermGroup:
    """A permutation group given by generators, with a cached element list."""

    def __init__(self, degree: int, generators: Sequence[Sequence[int]]):
        self.degree = degree
        self.generators = [_check_perm(g, degree) for g in generators]
        self._elements: Optional[list[Perm]] = None

    @property
    def elements(self) -> list[Perm]:
        if self._elements is None:
            self._elements = close_elements(self.degree, self.generators)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    def __contains__(self, g: Perm) -> bool:
        return g in set(self.elements)

    def identity(self) -> Perm:
        return identity_perm(self.degree)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"


def close_elements(degree: int, generators: Sequence[Perm]) -> list[Perm]:
    e = identity_perm(degree)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = pmul(x, g)
                if y not in seen:
                    if len(seen) >= ORDER_CAP:
                        raise GroupSizeError(
                            f"group order exceeds cap {ORDER_CAP}")
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def close_group(degree: int, generators: Sequence[Sequence[int]]) -> PermGroup:
    G = PermGroup(degree, generators)
    G.elements  # force closure now so size errors surface here
    return G


def closure_of_subset(G: PermGroup, elems: set[Perm]) -> frozenset[Perm]:
    """Subgroup of G generated by elems (as an element set)."""
    e = G.identity()
    seen = {e} | set(elems)
    frontier = list(seen)
    gens = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = pmul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def p_part(n: int, p: int) -> int:
    q = 1
    while n % (q * p) == 0:
        q *= p
    return q


def _normalizer(G: PermGroup, S: frozenset[Perm]) -> list[Perm]:
    out = []
    for g in G.elements:
        gi = pinv(g)
        if all(pmul(pmul(g, s), gi) in S for s in S):
            out.append(g)
    return out


def sylow_subgroup(G: PermGroup, p: int) -> frozenset[Perm]:
    """A Sylow p-subgroup of G as an element set.

    Grows a p-subgroup through its normalizer: while |S| is below the
    p-part, some x in N_G(S) \\ S has x^p in S, and <S, x> is p times
    larger.
    """
    target = p_part(G.order, p)
    S = frozenset([G.identity()])
    while len(S) < target:
        grown = False
        for x in _normalizer(G, S):
            if x in S:
                continue
            xp = x
            for _ in range(p - 1):
                xp = pmul(xp, x)
            if xp in S:
                S = closure_of_subset(G, set(S) | {x})
                grown = True
                break
        if not grown:
            raise RuntimeError("sylow growth stalled; group data inconsistent")
    return S


def all_subgroups_of_p_group(G: PermGroup, P: frozenset[Perm], p: int) -> list[frozenset[Perm]]:
    """Every subgroup of the p-group P, found level by level.

    Each subgroup of order p^(k+1) arises from a maximal (hence normal)
    subgroup of order p^k extended by one element, so upward extension
    along normalizers is exhaustive.
    """
    trivial = frozenset([G.identity()])
    levels: list[set[frozenset[Perm]]] = [{trivial}]
    all_subs: set[frozenset[Perm]] = {trivial}
    while True:
        cur = levels[-1]
        nxt: set[frozenset[Perm]] = set()
        for H in cur:
            if len(H) * p > len(P):
                continue
            # normalizer of H inside P
            for x in P:
                if x in H:
                    continue
                xi = pinv(x)
                if not all(pmul(pmul(x, h), xi) in H for h in H):
                    continue
                xp = x
                for _ in range(p - 1):
                    xp = pmul(xp, x)
                if xp in H:
                    K = closure_of_subset(G, set(H) | {x})
                    if len(K) == len(H) * p:
                        nxt.add(K)
        if not nxt:
            break
        all_subs |= nxt
        levels.append(nxt)
    return sorted(all_subs, key=lambda s: (len(s), sorted(s)))


def are_conjugate_subgroups(G: PermGroup, H: frozenset[Perm], K: frozenset[Perm]) -> bool:
    if len(H) != len(K):
        return False
    for g in G.elements:
        gi = pinv(g)
        if all(pmul(pmul(g, h), gi) in K for h in H):
            return True
    return False


@dataclass
class SubgroupClassList:
    """G-conjugacy class representatives of the subgroups of a Sylow subgroup."""
    parent: PermGroup
    sylow: frozenset[Perm]
    reps: list[frozenset[Perm]]


def subgroup_class_reps(G: PermGroup, P: frozenset[Perm], p: int) -> SubgroupClassList:
    subs = all_subgroups_of_p_group(G, P, p)
    reps: list[frozenset[Perm]] = []
    for H in subs:
        if not any(are_conjugate_subgroups(G, H, K) for K in reps):
            reps.append(H)
    reps.sort(key=lambda s: (len(s), sorted(s)))
    return SubgroupClassList(parent=G, sylow=P, reps=reps)


@dataclass
class CosetAction:
    """Left action of G on the cosets G/Q, with generator images."""
    group: PermGroup
    subgroup: frozenset[Perm]
    cosets: list[frozenset[Perm]]
    gen_images: list[Perm]
    _elem_to_coset: dict = field(repr=False, default_factory=dict)

    @property
    def n_points(self) -> int:
        return len(self.cosets)

    def coset_index(self, g: Perm) -> int:
        return self._elem_to_coset[g]

    def perm_of(self, g: Perm) -> Perm:
        """The permutation of coset indices induced by left multiplication by g."""
        out = []
        for c in self.cosets:
            rep = next(iter(c))
            out.append(self._elem_to_coset[pmul(g, rep)])
        return tuple(out)


def coset_action(G: PermGroup, Q: frozenset[Perm]) -> CosetAction:
    elems = set(G.elements)
    if not Q <= elems or not all(pmul(a, pinv(b)) in Q for a in Q for b in Q):
        raise ValueError("Q is not a subgroup of G")
    remaining = set(elems)
    cosets: list[frozenset[Perm]] = []
    elem_to_coset: dict[Perm, int] = {}
    for g in G.elements:  # deterministic order
        if g not in remaining:
            continue
        c = frozenset(pmul(g, q) for q in Q)
        idx = len(cosets)
        cosets.append(c)
        for x in c:
            elem_to_coset[x] = idx
            remaining.discard(x)
    act = CosetAction(G, Q, cosets, [], _elem_to_coset=elem_to_coset)
    act.gen_images = [act.perm_of(g) for g in G.generators]
    return act


def subgroup_generators(G: PermGroup, H: frozenset[Perm]) -> list[Perm]:
    """A small generating set for a subgroup given as an element set."""
    gens: list[Perm] = []
    span: frozenset[Perm] = frozenset([G.identity()])
    for h in sorted(H):
        if h not in span:
            gens.append(h)
            span = closure_of_subset(G, set(span) | {h})
            if len(span) == len(H):
                break
    return gens


def as_perm_group(G: PermGroup, H: frozenset[Perm]) -> PermGroup:
    """A subgroup as a PermGroup on the same points."""
    gens = subgroup_generators(G, H)
    if not gens:
        gens = [G.identity()]
    K = PermGroup(G.degree, gens)
    K._elements = sorted(H)
    return K
