"""Frobenius, Verschiebung, conjugation, truncation, Teichmuller and external product.

Each operator is the unique lift of a map of ghost groups.  It is evaluated by
taking the ghost image of a free-model lift, applying the ghost-level map and
taking the preimage in the target free model; finitely presented targets then
reduce.  Naturality in the coefficients makes this independent of the lift.
"""

from __future__ import annotations

from typing import Callable, Optional

from .errors import ContextError
from .ghost import GhostSpace, GhostVector, ghost_linear, ghost_preimage, ghost_space
from .group import (
    CosetTable,
    FiniteGroup,
    Subgroup,
    all_subgroups,
    fixed_cosets,
    subgroup_as_group,
    subgroups_of,
)
from .tensor import TensorElement, act, retabulate, shuffle, tensor_power_reindexed
from .truncation import TruncationSet, all_subgroups_set, conjugate, restrict
from .witt import AbPresentation, WittElement, WittFreeGroup, WittGroup, witt_group

GhostOp = Callable[[GhostVector], GhostVector]


def _through_ghost(x: WittElement, target: WittGroup, op: GhostOp) -> WittElement:
    src = x.group
    a = ghost_linear(src.free.space, src.lift(x.coords))
    b = op(a)
    return WittElement(target, target.reduce(ghost_preimage(b)))


# -- ghost-level maps ---------------------------------------------------------


def ghost_frobenius(a: GhostVector, target: GhostSpace) -> GhostVector:
    return GhostVector(target, {U: a.component(U) for U in target.canon})


def ghost_verschiebung(a: GhostVector, target: GhostSpace) -> GhostVector:
    """(V a)_W = sum over hK in (H/K)^W of h . a_{W^h}."""
    G = target.G
    K = a.space.H
    comps = {}
    for W in target.canon:
        out = TensorElement.zero(target.tables[W], target.rank)
        for h in fixed_cosets(G, target.H, K, W):
            Wh = G.conjugate_subgroup(G.inv(h), W)
            out = out + act(h, a.component(Wh), target.tables[W])
        comps[W] = out
    return GhostVector(target, comps)


def ghost_conjugation(a: GhostVector, g: int, target: GhostSpace) -> GhostVector:
    G = target.G
    gi = G.inv(g)
    comps = {}
    for U2 in target.canon:
        U = G.conjugate_subgroup(gi, U2)
        comps[U2] = act(g, a.component(U), target.tables[U2])
    return GhostVector(target, comps)


def ghost_truncation(a: GhostVector, target: GhostSpace) -> GhostVector:
    return GhostVector(target, {U: a.components[U] for U in target.canon})


def ghost_teichmuller(m: TensorElement, target: GhostSpace) -> GhostVector:
    """Components f_{G/H}(m^{(x) H/U}), using the representatives carried by m's table."""
    return GhostVector(target, {U: tensor_power_reindexed(m, U, target.tables[U]) for U in target.canon})


def ghost_product(a: GhostVector, b: GhostVector, target: GhostSpace) -> GhostVector:
    return GhostVector(target, {U: shuffle(a.components[U], b.components[U]) for U in target.canon})


# -- Witt-level operators -------------------------------------------------------


def frobenius(x: WittElement, K: Subgroup) -> WittElement:
    """F^H_K : W^S_H -> W^{S|K}_K."""
    src = x.group
    if not K <= src.H:
        raise ContextError(f"{K!r} is not contained in {src.H!r}")
    target = src.sibling(K, restrict(src.S, K))
    return _through_ghost(x, target, lambda a: ghost_frobenius(a, target.free.space))


def _default_overset(src: WittGroup, H: Subgroup) -> TruncationSet:
    full = all_subgroups_set(src.G, src.H)
    if src.S.members != full.members:
        raise ContextError("pass the target truncation set explicitly for truncated inputs")
    return all_subgroups_set(src.G, H)


def verschiebung(x: WittElement, H: Subgroup, S: Optional[TruncationSet] = None) -> WittElement:
    """V^H_K : W^{S|K}_K -> W^S_H, where K is the ambient group of x."""
    src = x.group
    K = src.H
    if not K <= H:
        raise ContextError(f"{K!r} is not contained in {H!r}")
    S = S if S is not None else _default_overset(src, H)
    if restrict(S, K).members != src.S.members:
        raise ContextError("source truncation set is not the restriction of the target one")
    target = src.sibling(H, S)
    return _through_ghost(x, target, lambda a: ghost_verschiebung(a, target.free.space))


def verschiebung_orbit(x: WittElement, H: Subgroup, S: Optional[TruncationSet] = None) -> WittElement:
    """V^H_K directly on free orbit coordinates: each basis orbit moves to its H-orbit."""
    src = x.group
    if not isinstance(src, WittFreeGroup):
        raise ContextError("orbit-coordinate Verschiebung needs free coefficients")
    S = S if S is not None else _default_overset(src, H)
    target = src.sibling(H, S)
    tsp = target.space
    G = src.G
    out = [0] * target.rank
    for c, (V2, w) in zip(x.coords, src.space.basis):
        if not c:
            continue
        V, h = tsp.class_of(V2)  # V2 = h V h^-1
        mono = TensorElement.monomial(src.space.tables[V2], src.space.rank, w)
        moved = act(G.inv(h), mono, tsp.tables[V])
        (w2,) = moved.terms
        out[tsp.offsets[V] + tsp.orbits[V].position(w2)] += c
    return WittElement(target, tuple(out))


def conjugation(x: WittElement, g: int) -> WittElement:
    """c_g : W^S_H -> W^{gS}_{gHg^-1}."""
    src = x.group
    G = src.G
    H2 = G.conjugate_subgroup(g, src.H)
    target = src.sibling(H2, conjugate(src.S, g))
    return _through_ghost(x, target, lambda a: ghost_conjugation(a, g, target.free.space))


def truncate(x: WittElement, S2: TruncationSet) -> WittElement:
    """R_{S'} : W^S_H -> W^{S'}_H for S' inside S."""
    src = x.group
    if S2.ambient != src.H or not S2.members <= src.S.members:
        raise ContextError("truncation target must be a truncation set inside S")
    target = src.sibling(src.H, S2)
    return _through_ghost(x, target, lambda a: ghost_truncation(a, target.free.space))


def _top_table(group: WittGroup, table: Optional[CosetTable]) -> CosetTable:
    G = group.G
    table = table or G.coset_table(group.H)
    if table.subgroup != group.H:
        raise ContextError("Teichmuller input must live over G/H")
    return table


def teichmuller(group: WittGroup, m: TensorElement, table: Optional[CosetTable] = None) -> WittElement:
    """tau_{G/H}(m); ``table`` fixes the representatives of G/H used by f_{G/H}.

    For finitely presented M, m is any lift over Z^b.
    """
    table = _top_table(group, table)
    if not group.S.members:
        return group.zero()
    m = retabulate(m, table)
    space = group.free.space
    if m.rank != space.rank:
        raise ContextError("Teichmuller input has the wrong coefficient rank")
    return WittElement(group, group.reduce(ghost_preimage(ghost_teichmuller(m, space))))


def teichmuller_linear(group: WittGroup, m: TensorElement) -> WittElement:
    """tau^f(m): the H-component in orbit coordinates (free coefficients only)."""
    if not isinstance(group, WittFreeGroup):
        raise ContextError("the linear Teichmuller map needs free coefficients")
    if not group.S.members:
        return group.zero()
    space = group.space
    H = group.H
    m = retabulate(m, space.tables[H])
    out = [0] * space.dim
    for w, c in m.terms.items():
        out[space.offsets[H] + space.orbits[H].position(w)] += c
    return WittElement(group, tuple(out))


def external_product(x: WittElement, y: WittElement) -> WittElement:
    """x * y over coefficients Y x Y' (generator pairs indexed y * |Y'| + y')."""
    A, B = x.group, y.group
    if A.G is not B.G or A.H != B.H or A.S.members != B.S.members:
        raise ContextError("external product needs a common (G, H, S)")
    if isinstance(A.coeff, AbPresentation) or isinstance(B.coeff, AbPresentation):
        pa = A.coeff if isinstance(A.coeff, AbPresentation) else AbPresentation.free(A.coeff)
        pb = B.coeff if isinstance(B.coeff, AbPresentation) else AbPresentation.free(B.coeff)
        coeff = pa.tensor(pb)
    else:
        coeff = A.coeff * B.coeff
    target = witt_group(A.G, A.H, A.S, coeff)
    a = ghost_linear(A.free.space, A.lift(x.coords))
    b = ghost_linear(B.free.space, B.lift(y.coords))
    g = ghost_product(a, b, target.free.space)
    return WittElement(target, target.reduce(ghost_preimage(g)))


def unit(group: WittGroup) -> WittElement:
    """tau_{G/H}(1) for rank-one coefficients."""
    space = group.free.space
    if space.rank != 1:
        raise ContextError("unit needs rank-one coefficients")
    return teichmuller(group, TensorElement.scalar(space.tables[group.H], 1))


def ring_structure(group: WittFreeGroup) -> dict:
    """Multiplication table of W^S_H(Z; Z) on the orbit basis, with ghost checks."""
    if not isinstance(group, WittFreeGroup) or group.coeff != 1:
        raise ContextError("ring structure needs rank-one free coefficients")
    n = group.rank
    basis = [group.element([1 if i == j else 0 for i in range(n)]) for j in range(n)]
    table = [[external_product(a, b).coords for b in basis] for a in basis]
    ghosts = [group.space.apply_linear(e.coords) for e in basis]
    for i in range(n):
        for j in range(n):
            lhs = group.space.apply_linear(table[i][j])
            rhs = [u * v for u, v in zip(ghosts[i], ghosts[j])]
            if lhs != rhs:
                raise AssertionError(f"ghost components are not multiplicative at ({i}, {j})")
    one = unit(group)
    return {"table": table, "unit": one.coords, "ghost_of_unit": group.space.apply_linear(one.coords)}


def multiply(x: WittElement, y: WittElement) -> WittElement:
    """Ring product for rank-one free coefficients (Z (x) Z = Z)."""
    z = external_product(x, y)
    if z.group is not x.group:
        raise ContextError("multiply needs rank-one coefficients")
    return z


# -- the HGHH isomorphism -------------------------------------------------------


class HGHH:
    """Reindexing W^S_{H<=G}(Z; M) ~ W^S_{H<=H}(Z; M^{(x) G/H}) through f_{G/H}.

    Letters on the right are words over G/H encoded big-endian in base b, which
    matches the generator order of ``AbPresentation.power``.
    """

    def __init__(self, src: WittGroup):
        self.src = src
        G, H = src.G, src.H
        self.Hg, self.embed = subgroup_as_group(G, H)
        self.back = {v: k for k, v in self.embed.items()}
        self.top = G.coset_table(H)
        m = len(self.top)
        self.m = m
        S2 = TruncationSet(
            self.Hg.whole, frozenset(self._to_h(U) for U in src.S.members), self.Hg
        )
        self.S2 = S2
        coeff = src.coeff
        if isinstance(coeff, AbPresentation):
            tcoeff = coeff.power(m)
        else:
            tcoeff = coeff**m
        self.b = coeff.rank if isinstance(coeff, AbPresentation) else coeff
        self.target = witt_group(self.Hg, self.Hg.whole, S2, tcoeff)

    def _to_h(self, U: Subgroup) -> Subgroup:
        return self.Hg.subgroup(self.embed[u] for u in U.elements)

    def _to_g(self, U: Subgroup) -> Subgroup:
        return self.src.G.subgroup(self.back[u] for u in U.elements)

    def _encode(self, letters) -> int:
        out = 0
        for x in letters:
            out = out * self.b + x
        return out

    def _decode(self, code: int) -> list[int]:
        out = []
        for _ in range(self.m):
            code, r = divmod(code, self.b)
            out.append(r)
        return out[::-1]

    def _slots(self, U: Subgroup, tab_h) -> list[list[int]]:
        """slots[k][i] = position in G/U of g_i s_k, s_k the k-th rep of H/U."""
        G = self.src.G
        tab_g = G.coset_table(U)
        return [
            [tab_g.position(G.mul(g, self.back[s])) for g in self.top.reps]
            for s in tab_h.reps
        ]

    def ghost_forward(self, a: GhostVector) -> GhostVector:
        tsp = self.target.free.space
        comps = {}
        for U2 in tsp.canon:
            t = a.component(self._to_g(U2))
            slots = self._slots(self._to_g(U2), tsp.tables[U2])
            terms = {}
            for w, c in t.terms.items():
                key = tuple(self._encode([w[p] for p in row]) for row in slots)
                terms[key] = terms.get(key, 0) + c
            comps[U2] = TensorElement(tsp.tables[U2], tsp.rank, terms)
        return GhostVector(tsp, comps)

    def ghost_backward(self, a: GhostVector) -> GhostVector:
        ssp = self.src.free.space
        comps = {}
        for U in ssp.canon:
            U2 = self._to_h(U)
            t = a.component(U2)
            slots = self._slots(U, a.space.G.coset_table(U2))
            terms = {}
            for w, c in t.terms.items():
                word = [0] * len(ssp.G.coset_table(U))
                for k, code in enumerate(w):
                    for i, x in enumerate(self._decode(code)):
                        word[slots[k][i]] = x
                key = tuple(word)
                terms[key] = terms.get(key, 0) + c
            comps[U] = TensorElement(ssp.tables[U], ssp.rank, terms)
        return GhostVector(ssp, comps)

    def forward(self, x: WittElement) -> WittElement:
        return _through_ghost(x, self.target, self.ghost_forward)

    def backward(self, y: WittElement) -> WittElement:
        return _through_ghost(y, self.src, self.ghost_backward)


def hgh_iso(x: WittElement) -> WittElement:
    return HGHH(x.group).forward(x)
