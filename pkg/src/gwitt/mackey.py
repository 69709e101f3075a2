"""The Witt Mackey functor K -> W^{S|K}_{K<=G}(Z; M) on subgroups of H.

Maps between levels are integer matrices on the normal-form coordinates of
the level groups: column i is the image of the i-th unit residue vector.
Levels are kept for every subgroup of H, not only class representatives, so
that the double coset formula can be checked without transporting along
conjugations first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import linalg
from .errors import ContextError, SizeBoundError
from .group import FiniteGroup, Subgroup, conjugacy_classes, double_cosets, subgroups_of
from .operators import conjugation, frobenius, teichmuller, truncate, verschiebung
from .tensor import TensorElement
from .truncation import TruncationSet, all_subgroups_set, is_minimal, remove_subconjugate, restrict, top
from .witt import AbPresentation, Coefficients, WittElement, WittGroup, witt_group

Mat = list[list[int]]


def _apply(M: Mat, target: WittGroup, v: Sequence[int]) -> tuple[int, ...]:
    return target.normalize(linalg.matvec(M, v)) if M else ()


def _matrix_of(f, src: WittGroup, target: WittGroup) -> Mat:
    cols = []
    for i in range(src.rank):
        e = src.element([1 if j == i else 0 for j in range(src.rank)])
        cols.append(f(e).coords)
    return linalg.from_columns(cols, target.rank)


@dataclass
class MackeyTable:
    G: FiniteGroup
    H: Subgroup
    S: TruncationSet
    coeff: Coefficients
    subgroups: list[Subgroup]
    levels: dict[Subgroup, WittGroup]
    res: dict[tuple[Subgroup, Subgroup], Mat] = field(default_factory=dict)
    tr: dict[tuple[Subgroup, Subgroup], Mat] = field(default_factory=dict)
    conj: dict[tuple[int, Subgroup], Mat] = field(default_factory=dict)

    @property
    def canonical(self) -> list[Subgroup]:
        return [c for c, _ in conjugacy_classes(self.G, self.H)]

    def restriction(self, K: Subgroup, L: Subgroup, v: Sequence[int]) -> tuple[int, ...]:
        return _apply(self.res[(K, L)], self.levels[L], v)

    def transfer(self, L: Subgroup, K: Subgroup, v: Sequence[int]) -> tuple[int, ...]:
        return _apply(self.tr[(L, K)], self.levels[K], v)

    def conjugate(self, h: int, K: Subgroup, v: Sequence[int]) -> tuple[int, ...]:
        return _apply(self.conj[(h, K)], self.levels[self.G.conjugate_subgroup(h, K)], v)

    def corrupted(self) -> "MackeyTable":
        """A copy with one proper transfer matrix perturbed (a negative control)."""
        import copy

        t = copy.copy(self)
        t.tr = dict(self.tr)
        for (L, K), M in sorted(self.tr.items(), key=lambda kv: (-kv[0][1].order, kv[0][0].order)):
            if L != K and M and M[0]:
                M2 = [row[:] for row in M]
                M2[0][0] += 1
                if self.levels[K].normalize([r[0] for r in M2]) != self.levels[K].normalize([r[0] for r in M]):
                    t.tr[(L, K)] = M2
                    return t
        raise ContextError("no transfer matrix can be perturbed visibly")


def assemble(G: FiniteGroup, H: Subgroup, S: TruncationSet, coeff: Coefficients) -> MackeyTable:
    subs = subgroups_of(G, H)
    levels = {K: witt_group(G, K, restrict(S, K), coeff) for K in subs}
    t = MackeyTable(G, H, S, coeff, subs, levels)
    for K in subs:
        SK = restrict(S, K)
        for L in subs:
            if L <= K:
                t.res[(K, L)] = _matrix_of(lambda e: frobenius(e, L), levels[K], levels[L])
                t.tr[(L, K)] = _matrix_of(lambda e: verschiebung(e, K, SK), levels[L], levels[K])
        for h in H.elements:
            target = levels[G.conjugate_subgroup(h, K)]
            t.conj[(h, K)] = _matrix_of(lambda e: conjugation(e, h), levels[K], target)
    return t


@dataclass
class AxiomReport:
    passed: bool
    checked: int
    failures: list[str]

    def describe(self) -> str:
        head = f"axioms: {'pass' if self.passed else 'fail'} ({self.checked} checks)"
        return "\n".join([head] + [f"  witness: {f}" for f in self.failures[:5]])


def _inter(G: FiniteGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    return G.subgroup(A.element_set & B.element_set)


def verify_axioms(t: MackeyTable, samples: int = 3, seed: int = 0) -> AxiomReport:
    rng = random.Random(seed)
    G = t.G
    fails: list[str] = []
    checked = 0

    def vectors(K):
        # unit vectors catch any single corrupted matrix entry; random ones mix them
        n = t.levels[K].rank
        units = [t.levels[K].normalize([1 if j == i else 0 for j in range(n)]) for i in range(n)]
        return units + [t.levels[K].random_element(rng).coords for _ in range(samples)]

    def check(ok: bool, what: str):
        nonlocal checked
        checked += 1
        if not ok:
            fails.append(what)

    subs = t.subgroups
    for K in subs:
        for v in vectors(K):
            check(t.restriction(K, K, v) == v, f"res^{K!r}_{K!r} != id on {v}")
            check(t.transfer(K, K, v) == v, f"tr^{K!r}_{K!r} != id on {v}")
            for k in K.elements:
                check(t.conjugate(k, K, v) == v, f"c_{G.label(k)} != id on level {K!r}, {v}")
    for K in subs:
        for L in subs:
            if not L <= K:
                continue
            for J in subs:
                if not J <= L:
                    continue
                for v in vectors(K):
                    check(t.restriction(L, J, t.restriction(K, L, v)) == t.restriction(K, J, v),
                          f"res {K!r}>{L!r}>{J!r} on {v}")
                for u in vectors(J):
                    check(t.transfer(L, K, t.transfer(J, L, u)) == t.transfer(J, K, u),
                          f"tr {J!r}<{L!r}<{K!r} on {u}")
    for K in subs:
        for v in vectors(K):
            g, g2 = rng.choice(t.H.elements), rng.choice(t.H.elements)
            lhs = t.conjugate(g, G.conjugate_subgroup(g2, K), t.conjugate(g2, K, v))
            check(lhs == t.conjugate(G.mul(g, g2), K, v), f"c_g c_g' on {K!r}, {v}")
            for L in subs:
                if L <= K:
                    gK, gL = G.conjugate_subgroup(g, K), G.conjugate_subgroup(g, L)
                    u = rng.choice(vectors(L))
                    check(t.conjugate(g, K, t.transfer(L, K, u)) == t.transfer(gL, gK, t.conjugate(g, L, u)),
                          f"c tr on {L!r}<{K!r}, {u}")
                    check(t.conjugate(g, L, t.restriction(K, L, v)) == t.restriction(gK, gL, t.conjugate(g, K, v)),
                          f"c res on {L!r}<{K!r}, {v}")
    for A in subs:
        for J in subs:
            if not J <= A:
                continue
            for K in subs:
                if not K <= A:
                    continue
                for u in vectors(K):
                    lhs = t.restriction(A, J, t.transfer(K, A, u))
                    tot = [0] * t.levels[J].rank
                    for h in double_cosets(G, A, J, K):
                        low = _inter(G, G.conjugate_subgroup(G.inv(h), J), K)
                        z = t.restriction(K, low, u)
                        z = t.conjugate(h, low, z)
                        z = t.transfer(G.conjugate_subgroup(h, low), J, z)
                        tot = [a + b for a, b in zip(tot, z)]
                    check(lhs == t.levels[J].normalize(tot), f"double coset {A!r} J={J!r} K={K!r} on {u}")
    return AxiomReport(not fails, checked, fails)


# ---------------------------------------------------------------------------
# exactness


@dataclass
class ExactnessReport:
    passed: bool
    image_in_kernel: bool
    kernel_in_image: bool
    surjective: bool
    quotient_factors: tuple[int, ...]
    target_factors: tuple[int, ...]

    def describe(self) -> str:
        return (f"exactness: {'pass' if self.passed else 'fail'} im<=ker={self.image_in_kernel} "
                f"ker<=im={self.kernel_in_image} surjective={self.surjective} "
                f"quotient={self.quotient_factors} target={self.target_factors}")


def _diag_rows(factors: Sequence[int]) -> Mat:
    n = len(factors)
    return [[d if j == i else 0 for j in range(n)] for i, d in enumerate(factors) if d]


def _contains(big: Mat, small: Mat, dim: int) -> bool:
    return linalg.same_lattice(big, big + small, dim)


def exactness_check(G: FiniteGroup, H: Subgroup, S: TruncationSet, coeff: Coefficients, K: Subgroup) -> ExactnessReport:
    """(M^{(x) G/K})_{N_H(K)} --V tau--> W^S_H --R--> W^{S minus K}_H --> 0 for K minimal in S."""
    if not is_minimal(S, K):
        raise ContextError(f"{K!r} is not minimal in the truncation set")
    A = witt_group(G, H, S, coeff)
    S2 = remove_subconjugate(S, K)
    B = witt_group(G, H, S2, coeff)
    bottom = witt_group(G, K, top(G, K), coeff)
    kA, kB = A.rank, B.rank
    R = _matrix_of(lambda e: truncate(e, S2), A, B)
    images = []
    b = bottom.free.space.rank
    table = G.coset_table(K)
    import itertools

    for w in itertools.product(range(b), repeat=len(table)):
        m = TensorElement.monomial(table, b, w)
        images.append(list(verschiebung(teichmuller(bottom, m), H, S).coords))
    DA, DB = _diag_rows(A.invariant_factors), _diag_rows(B.invariant_factors)
    im_lat = [v for v in images if any(v)] + DA
    # kernel of y -> R y modulo DB
    big = [R[i] + [row[i] for row in DB] for i in range(kB)] if kB else []
    ncols = kA + len(DB)
    ker = linalg.kernel(big, ncols=ncols) if kB else [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    ker_lat = [v[:kA] for v in ker if any(v[:kA])] + DA
    im_in_ker = _contains(ker_lat, im_lat, kA)
    ker_in_im = _contains(im_lat, ker_lat, kA)
    rcols = [[R[i][j] for i in range(kB)] for j in range(kA)]
    surj = linalg.same_lattice(rcols + DB, linalg.identity(kB), kB) if kB else True
    qf = linalg.cokernel_factors(linalg.transpose(im_lat, ncols=kA), kA) if im_lat else (0,) * kA
    return ExactnessReport(im_in_ker and ker_in_im and surj and qf == B.invariant_factors,
                           im_in_ker, ker_in_im, surj, qf, B.invariant_factors)


def geometric_fixed_points(G: FiniteGroup, K: Subgroup, coeff: Coefficients) -> tuple[int, ...]:
    """Invariant factors of W^{{K}}_{K<=G}(Z; M), which is M^{(x) G/K}."""
    return witt_group(G, K, top(G, K), coeff).invariant_factors


# ---------------------------------------------------------------------------
# box product


@dataclass
class BoxReport:
    factors: tuple[int, ...]
    expected: tuple[int, ...]

    @property
    def match(self) -> bool:
        return self.factors == self.expected


def _as_pres(c: Coefficients) -> AbPresentation:
    return c if isinstance(c, AbPresentation) else AbPresentation.free(c)


def box_product_small(t1: MackeyTable, t2: MackeyTable) -> BoxReport:
    """(sum_K W(K) (x) W'(K)) modulo reciprocity and conjugation relations, at the top level."""
    if t1.G is not t2.G or t1.H != t2.H or t1.S.members != t2.S.members:
        raise ContextError("box product needs two tables over the same (G, H, S)")
    p1, p2 = _as_pres(t1.coeff), _as_pres(t2.coeff)
    if t1.H.order > 6 or p1.rank > 2 or p2.rank > 2:
        raise SizeBoundError("box product is gated to |H| <= 6 and coefficient ranks <= 2")
    G = t1.G
    subs = t1.subgroups
    offset = {}
    n = 0
    for K in subs:
        offset[K] = n
        n += t1.levels[K].rank * t2.levels[K].rank

    def gen(K, i, j):
        return offset[K] + i * t2.levels[K].rank + j

    rels: list[dict[int, int]] = []
    for K in subs:
        f1, f2 = t1.levels[K].invariant_factors, t2.levels[K].invariant_factors
        for i, d in enumerate(f1):
            for j, d2 in enumerate(f2):
                for x in (d, d2):
                    if x:
                        rels.append({gen(K, i, j): x})

    def add(rel, K, v1, v2, sign):
        for a, x in enumerate(v1):
            if x:
                for b, y in enumerate(v2):
                    if y:
                        k = gen(K, a, b)
                        rel[k] = rel.get(k, 0) + sign * x * y

    unit = lambda k, i: [1 if j == i else 0 for j in range(k)]
    for K in subs:
        for L in subs:
            if not (L <= K) or L == K:
                continue
            r1L, r1K, r2L, r2K = t1.levels[L].rank, t1.levels[K].rank, t2.levels[L].rank, t2.levels[K].rank
            for i in range(r1L):
                for j in range(r2K):
                    rel: dict[int, int] = {}
                    add(rel, K, t1.transfer(L, K, unit(r1L, i)), unit(r2K, j), 1)
                    add(rel, L, unit(r1L, i), t2.restriction(K, L, unit(r2K, j)), -1)
                    rels.append(rel)
            for i in range(r1K):
                for j in range(r2L):
                    rel = {}
                    add(rel, K, unit(r1K, i), t2.transfer(L, K, unit(r2L, j)), 1)
                    add(rel, L, t1.restriction(K, L, unit(r1K, i)), unit(r2L, j), -1)
                    rels.append(rel)
    for K in subs:
        for h in t1.H.elements:
            hK = G.conjugate_subgroup(h, K)
            r1, r2 = t1.levels[K].rank, t2.levels[K].rank
            for i in range(r1):
                for j in range(r2):
                    rel = {gen(K, i, j): 1}
                    add(rel, hK, t1.conjugate(h, K, unit(r1, i)), t2.conjugate(h, K, unit(r2, j)), -1)
                    rels.append(rel)
    cols = [[r.get(k, 0) for k in range(n)] for r in rels if any(r.values())]
    factors = linalg.cokernel_factors(linalg.from_columns(cols, n), n) if cols else (0,) * n
    expected = witt_group(G, t1.H, t1.S, p1.tensor(p2)).invariant_factors
    return BoxReport(tuple(factors), tuple(expected))
