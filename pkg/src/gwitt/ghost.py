"""Ghost groups, the ghost map, the linear embedding and Dwork congruences.

A ghost vector is stored by its components at the canonical subgroups of S;
each component is fixed by the normaliser N_H(V).  Integer coordinates on
the ghost group read off the coefficient of every orbit-representative word,
which makes the linear embedding a square, block-triangular integer matrix
indexed by the same orbit basis as the Witt group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
import random
from typing import Mapping, Optional, Sequence

from . import linalg
from .config import BOUNDS
from .errors import ContextError, DworkError
from .group import (
    FiniteGroup,
    Subgroup,
    canonical_of,
    fixed_cosets,
    left_coset_reps,
    normalizer,
    subgroup_generated,
)
from .tensor import (
    OrbitData,
    TensorElement,
    act,
    format_tensor,
    frobenius_lift,
    tensor_power_reindexed,
)
from .truncation import TruncationSet


class GhostSpace:
    """Everything about (G, H, S, |Y|) that the ghost and Witt layers share."""

    def __init__(self, G: FiniteGroup, H: Subgroup, S: TruncationSet, rank: int):
        if S.ambient != H:
            raise ContextError("truncation set ambient does not match H")
        if rank < 1:
            raise ContextError("coefficient rank must be positive")
        self.G = G
        self.H = H
        self.S = S
        self.rank = rank
        self.canon: tuple[Subgroup, ...] = S.canonical
        self.tables = {V: G.coset_table(V) for V in self.canon}
        self.normalizers = {V: normalizer(G, V, H) for V in self.canon}
        self.orbits = {V: OrbitData(self.tables[V], self.normalizers[V], rank) for V in self.canon}
        self.offsets: dict[Subgroup, int] = {}
        basis = []
        for V in self.canon:
            self.offsets[V] = len(basis)
            basis.extend((V, w) for w in self.orbits[V].reps)
        self.basis: tuple[tuple[Subgroup, tuple[int, ...]], ...] = tuple(basis)
        self.dim = len(basis)
        self._class_cache: dict[Subgroup, tuple[Subgroup, int]] = {}

    def __repr__(self) -> str:
        return f"GhostSpace({self.G.name}, H={self.H!r}, |can S|={len(self.canon)}, |Y|={self.rank})"

    # -- subgroup bookkeeping ----------------------------------------------
    def class_of(self, U: Subgroup) -> tuple[Subgroup, int]:
        """Canonical V in S and h in H with U = h V h^-1."""
        hit = self._class_cache.get(U)
        if hit is None:
            if U not in self.S.members:
                raise ContextError(f"{U!r} is not in the truncation set")
            hit = canonical_of(self.G, self.H, U)
            self._class_cache[U] = hit
        return hit

    def block(self, V: Subgroup) -> range:
        start = self.offsets[V]
        return range(start, start + len(self.orbits[V]))

    def basis_label(self, i: int) -> str:
        V, w = self.basis[i]
        return f"{V!r}:(" + ",".join(f"y{x}" for x in w) + ")"

    # -- coordinates --------------------------------------------------------
    def flatten(self, components: Mapping[Subgroup, TensorElement]) -> list[int]:
        out = []
        for V in self.canon:
            t = components[V]
            out.extend(t.coefficient(w) for w in self.orbits[V].reps)
        return out

    def unflatten(self, coords: Sequence[int]) -> dict[Subgroup, TensorElement]:
        comps = {}
        for V in self.canon:
            od = self.orbits[V]
            terms = {}
            for k, w in enumerate(od.reps):
                c = coords[self.offsets[V] + k]
                if c:
                    for x in od.orbit(w):
                        terms[x] = c
            comps[V] = TensorElement(self.tables[V], self.rank, terms)
        return comps

    def unflatten_sparse(self, coords: Mapping[int, int]) -> dict[Subgroup, TensorElement]:
        terms: dict[Subgroup, dict] = {V: {} for V in self.canon}
        for i, c in coords.items():
            if c:
                V, w = self.basis[i]
                for x in self.orbits[V].orbit(w):
                    terms[V][x] = c
        return {V: TensorElement(self.tables[V], self.rank, t) for V, t in terms.items()}

    def unit_orbit(self, i: int) -> TensorElement:
        V, w = self.basis[i]
        return TensorElement.monomial(self.tables[V], self.rank, w)

    # -- the linear embedding ----------------------------------------------
    def linear_component(self, V: Subgroup, x: TensorElement, U: Subgroup) -> TensorElement:
        """sum over hV in (H/V)^U of h . phi^V_{U^h}(x), over the default table of G/U."""
        G = self.G
        out = TensorElement.zero(G.coset_table(U), self.rank)
        for h in fixed_cosets(G, self.H, V, U):
            Uh = G.conjugate_subgroup(G.inv(h), U)
            out = out + act(h, frobenius_lift(x, Uh))
        return out

    @cached_property
    def ghost_columns(self) -> tuple[dict[int, int], ...]:
        """Sparse columns of the linear embedding: basis unit -> ghost coordinates."""
        cols = []
        for i, (V, w) in enumerate(self.basis):
            x = self.unit_orbit(i)
            col = {}
            for U in self.canon:
                # only subgroups subconjugate to V receive a contribution
                if U.order > V.order or V.order % U.order:
                    continue
                comp = self.linear_component(V, x, U)
                if comp.is_zero():
                    continue
                off = self.offsets[U]
                index = self.orbits[U].index
                for r, c in comp.terms.items():
                    k = index.get(r)
                    if k is not None:
                        col[off + k] = c
            cols.append(col)
        return tuple(cols)

    @cached_property
    def ghost_matrix(self) -> list[list[int]]:
        M = linalg.zeros(self.dim, self.dim)
        for j, col in enumerate(self.ghost_columns):
            for i, c in col.items():
                M[i][j] = c
        return M

    def ghost_columns_dense(self, j: int) -> list[int]:
        out = [0] * self.dim
        for i, c in self.ghost_columns[j].items():
            out[i] = c
        return out

    def apply_linear(self, coords: Sequence[int]) -> list[int]:
        out = [0] * self.dim
        for j, c in enumerate(coords):
            if c:
                for i, m in self.ghost_columns[j].items():
                    out[i] += c * m
        return out

    def diagonal(self, i: int) -> int:
        V, w = self.basis[i]
        return self.orbits[V].stabilizer_size(w)


@lru_cache(maxsize=None)
def ghost_space(G: FiniteGroup, H: Subgroup, S: TruncationSet, rank: int) -> GhostSpace:
    return GhostSpace(G, H, S, rank)


# ---------------------------------------------------------------------------
# vectors


class GhostVector:
    """Element of the ghost group, stored at canonical subgroups."""

    __slots__ = ("space", "components")

    def __init__(self, space: GhostSpace, components: Mapping[Subgroup, TensorElement], check: Optional[bool] = None):
        self.space = space
        comps = {}
        for V in space.canon:
            t = components.get(V)
            comps[V] = t if t is not None else TensorElement.zero(space.tables[V], space.rank)
        self.components = comps
        if check if check is not None else BOUNDS.checks:
            for V, t in comps.items():
                if not _fixed(t, space, V):
                    raise AssertionError(f"ghost component at {V!r} is not fixed by its normaliser")

    @classmethod
    def from_coords(cls, space: GhostSpace, coords: Sequence[int]) -> "GhostVector":
        return cls(space, space.unflatten(coords), check=False)

    @classmethod
    def from_sparse(cls, space: GhostSpace, coords: Mapping[int, int]) -> "GhostVector":
        return cls(space, space.unflatten_sparse(coords), check=False)

    @classmethod
    def zero(cls, space: GhostSpace) -> "GhostVector":
        return cls(space, {}, check=False)

    def coords(self) -> list[int]:
        return self.space.flatten(self.components)

    def component(self, U: Subgroup) -> TensorElement:
        """Component at any U in S, reconstructed by equivariance."""
        V, h = self.space.class_of(U)
        t = self.components[V]
        if U == V:
            return t
        return act(h, t, self.space.G.coset_table(U))

    def __add__(self, other: "GhostVector") -> "GhostVector":
        self._same(other)
        return GhostVector(self.space, {V: self.components[V] + other.components[V] for V in self.space.canon}, False)

    def __sub__(self, other: "GhostVector") -> "GhostVector":
        self._same(other)
        return GhostVector(self.space, {V: self.components[V] - other.components[V] for V in self.space.canon}, False)

    def __neg__(self) -> "GhostVector":
        return GhostVector(self.space, {V: -t for V, t in self.components.items()}, False)

    def _same(self, other: "GhostVector") -> None:
        if other.space is not self.space:
            raise ContextError("ghost vectors from different contexts")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GhostVector):
            return NotImplemented
        return other.space is self.space and all(self.components[V] == other.components[V] for V in self.space.canon)

    def __repr__(self) -> str:
        return "\n".join(f"{V!r}: {format_tensor(t)}" for V, t in self.components.items())


def _fixed(t: TensorElement, space: GhostSpace, V: Subgroup) -> bool:
    od = space.orbits[V]
    for w, c in t.terms.items():
        for x in od.orbit(w):
            if t.terms.get(x, 0) != c:
                return False
    return True


class ComponentFamily:
    """One tensor element over G/V for every canonical V; no fixed-point condition."""

    __slots__ = ("space", "entries")

    def __init__(self, space: GhostSpace, entries: Mapping[Subgroup, TensorElement]):
        self.space = space
        ents = {}
        for V in space.canon:
            t = entries.get(V)
            ents[V] = TensorElement.zero(space.tables[V], space.rank) if t is None else t
        extra = set(entries) - set(space.canon)
        if extra:
            raise ContextError(f"entries at non-canonical subgroups {sorted(map(repr, extra))}")
        self.entries = ents

    def __getitem__(self, V: Subgroup) -> TensorElement:
        return self.entries[V]

    def __repr__(self) -> str:
        return "\n".join(f"{V!r}: {format_tensor(t)}" for V, t in self.entries.items())


def random_family(space: GhostSpace, rng: random.Random, max_terms: int = 3, bound: int = 4) -> ComponentFamily:
    entries = {}
    for V in space.canon:
        k = len(space.tables[V])
        terms = {}
        for _ in range(rng.randint(0, max_terms)):
            w = tuple(rng.randrange(space.rank) for _ in range(k))
            terms[w] = rng.randint(-bound, bound)
        entries[V] = TensorElement(space.tables[V], space.rank, terms)
    return ComponentFamily(space, entries)


# ---------------------------------------------------------------------------
# maps


def ghost_component(n: ComponentFamily, U: Subgroup) -> TensorElement:
    """w_U(n) = sum_V sum_{hV in (H/V)^U} h . f_{G/V}(n_V^{(x) V/U^h})."""
    space = n.space
    G = space.G
    out = TensorElement.zero(G.coset_table(U), space.rank)
    for V in space.canon:
        t = n.entries[V]
        if t.is_zero():
            continue
        for h in fixed_cosets(G, space.H, V, U):
            Uh = G.conjugate_subgroup(G.inv(h), U)
            out = out + act(h, tensor_power_reindexed(t, Uh), G.coset_table(U))
    return out


def ghost_map(n: ComponentFamily) -> GhostVector:
    space = n.space
    return GhostVector(space, {U: ghost_component(n, U) for U in space.canon})


def ghost_linear(space: GhostSpace, coords: Sequence[int]) -> GhostVector:
    if len(coords) != space.dim:
        raise ContextError(f"expected {space.dim} orbit coordinates, got {len(coords)}")
    return GhostVector.from_coords(space, space.apply_linear(coords))


def dwork_sum(a: GhostVector, U: Subgroup) -> TensorElement:
    """sum over vU in N_H(U)/U of phi^{<vU>}_U(a_{<vU>})."""
    space = a.space
    G = space.G
    N = normalizer(G, U, space.H)
    out = TensorElement.zero(G.coset_table(U), space.rank)
    for v in left_coset_reps(G, N, U):
        L = subgroup_generated(G, [G.mul(v, u) for u in U.elements])
        out = out + frobenius_lift(a.component(L), U)
    return out


@dataclass
class DworkVerdict:
    passed: bool
    subgroup: Optional[Subgroup] = None
    dwork_sum: Optional[TensorElement] = None
    residual: Optional[TensorElement] = None

    def __bool__(self) -> bool:
        return self.passed

    def describe(self) -> str:
        if self.passed:
            return "dwork: pass"
        return f"dwork: fail at {self.subgroup!r} residual {format_tensor(self.residual)}"


def transfer_image_residual(t: TensorElement, N: Subgroup) -> TensorElement:
    """Reduce t modulo the image of tr_U^N on Z(Y)^{(x) G/U}, by HNF on orbit sums."""
    G = t.group
    U = t.subgroup
    table = t.table
    words: list = []
    index: dict = {}
    reps = left_coset_reps(G, N, U)
    orbit_reps = []
    for w in sorted(t.terms):
        if w in index:
            continue
        orb = sorted({act_word(G, n, table, w) for n in reps})
        orbit_reps.append(orb[0])
        for x in orb:
            index[x] = len(words)
            words.append(x)
    cols = []
    for r in orbit_reps:
        col = [0] * len(words)
        for n in reps:
            col[index[act_word(G, n, table, r)]] += 1
        cols.append(col)
    v = [t.coefficient(w) for w in words]
    A = linalg.from_columns(cols, len(words))
    res = linalg.lattice_residue(v, A)
    return TensorElement(table, t.rank, {w: c for w, c in zip(words, res)})


def act_word(G: FiniteGroup, n: int, table, w):
    return tuple(w[table.position(G.mul(c, n))] for c in table.reps)


def dwork_check(a: GhostVector) -> DworkVerdict:
    space = a.space
    for U in space.canon:
        D = dwork_sum(a, U)
        res = transfer_image_residual(D, space.normalizers[U])
        if not res.is_zero():
            return DworkVerdict(False, U, D, res)
    return DworkVerdict(True)


def ghost_preimage(a: GhostVector) -> tuple[int, ...]:
    """Orbit coordinates x with ghost_linear(x) = a.

    Canonical subgroups are visited by increasing index; within the block of W
    the embedding is diagonal with the stabiliser orders, so each coordinate is
    an exact division of what the larger subgroups leave behind.
    """
    space = a.space
    residual = a.coords()
    x = [0] * space.dim
    for W in space.canon:
        for i in space.block(W):
            r = residual[i]
            if r == 0:
                continue
            d = space.diagonal(i)
            q, rem = divmod(r, d)
            if rem:
                verdict = dwork_check(a)
                if verdict.passed:
                    raise AssertionError("Dwork check passed but the transfer division failed")
                raise DworkError(verdict.describe(), verdict)
            x[i] = q
            for k, m in space.ghost_columns[i].items():
                residual[k] -= q * m
    if any(residual):
        raise AssertionError("ghost preimage left a nonzero residual")
    return tuple(x)


def component_preimage(a: GhostVector) -> ComponentFamily:
    """A family n with ghost_map(n) = a, built by the same induction on the index."""
    space = a.space
    entries: dict[Subgroup, TensorElement] = {}
    for W in space.canon:
        fam = ComponentFamily(space, entries)
        r = a.components[W] - ghost_component(fam, W)
        od = space.orbits[W]
        terms = {}
        for w in od.reps:
            c = r.coefficient(w)
            if c:
                q, rem = divmod(c, od.stabilizer_size(w))
                if rem:
                    verdict = dwork_check(a)
                    raise DworkError(verdict.describe(), verdict)
                terms[w] = q
        entries[W] = TensorElement(space.tables[W], space.rank, terms)
    return ComponentFamily(space, entries)


def classical_ghost_reference(p: int, n: int, a: Sequence[int]) -> list[int]:
    """w_j = sum_{0 <= i <= j} p^i a_i^(p^(j-i)) for j < n."""
    if len(a) != n:
        raise ValueError("sequence length must equal n")
    return [sum(p**i * a[i] ** (p ** (j - i)) for i in range(j + 1)) for j in range(n)]
