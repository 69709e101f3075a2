"""Witt groups W^S_{H<=G}(Z; M) for free and finitely presented M.

For M = Z^b the group is free on the orbit basis of the ghost space and the
element chart is the orbit coordinates.  A finitely presented
M = Z^b / A (A a b x a matrix) is the reflexive coequaliser of
p, q : Z^{b+a} -> Z^b with p(x, y) = x + A y and q(x, y) = x; the Witt group is
the free group over Z^b modulo the images p_*(y) - q_*(y) of the orbit
generators y over Z^{b+a}.  Elements of such a group are stored as residues
in Smith coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping, Optional, Sequence, Union

from . import linalg
from .errors import ContextError, DworkError
from .ghost import (
    ComponentFamily,
    GhostSpace,
    GhostVector,
    ghost_linear,
    ghost_map,
    ghost_preimage,
    ghost_space,
)
from .group import FiniteGroup, Subgroup
from .tensor import TensorElement, pushforward
from .truncation import TruncationSet


@dataclass(frozen=True)
class AbPresentation:
    """M = Z^rank / column span of ``relations`` (rank rows)."""

    rank: int
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rel = tuple(tuple(int(x) for x in r) for r in self.relations)
        if rel and len(rel) != self.rank:
            raise ContextError("relation matrix must have one row per generator")
        if rel and len({len(r) for r in rel}) != 1:
            raise ContextError("relation matrix rows have different lengths")
        if not rel and self.rank:
            rel = tuple(() for _ in range(self.rank))
        object.__setattr__(self, "relations", rel)

    @property
    def ncols(self) -> int:
        return len(self.relations[0]) if self.relations else 0

    @classmethod
    def free(cls, b: int) -> "AbPresentation":
        return cls(b)

    @classmethod
    def cyclic(cls, n: int) -> "AbPresentation":
        return cls(1, ((n,),))

    @classmethod
    def from_columns(cls, rank: int, cols: Sequence[Sequence[int]]) -> "AbPresentation":
        return cls(rank, tuple(tuple(c[i] for c in cols) for i in range(rank)))

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(self.relations[i][j] for i in range(self.rank)) for j in range(self.ncols)]

    def p_matrix(self) -> list[list[int]]:
        """p(x, y) = x + A y as a b x (b+a) matrix."""
        b = self.rank
        return [[1 if i == j else 0 for j in range(b)] + list(self.relations[i]) for i in range(b)]

    def q_matrix(self) -> list[list[int]]:
        b, a = self.rank, self.ncols
        return [[1 if i == j else 0 for j in range(b)] + [0] * a for i in range(b)]

    def tensor(self, other: "AbPresentation") -> "AbPresentation":
        """Presentation of M (x) M' on generators e_i (x) e'_j, indexed i * b' + j."""
        b, b2 = self.rank, other.rank
        cols = []
        for r in self.columns():
            for j in range(b2):
                v = [0] * (b * b2)
                for i in range(b):
                    v[i * b2 + j] = r[i]
                cols.append(v)
        for r in other.columns():
            for i in range(b):
                v = [0] * (b * b2)
                for j in range(b2):
                    v[i * b2 + j] = r[j]
                cols.append(v)
        return AbPresentation.from_columns(b * b2, cols)

    def power(self, k: int) -> "AbPresentation":
        out = AbPresentation(1, ((),)) if k == 0 else self
        for _ in range(k - 1):
            out = out.tensor(self)
        return out

    def invariant_factors(self) -> tuple[int, ...]:
        if self.rank == 0:
            return ()
        return linalg.cokernel_factors(self.relations, self.rank) if self.ncols else (0,) * self.rank

    def simplify(self) -> "AbPresentation":
        """Diagonal presentation with the same invariant factors."""
        fs = self.invariant_factors()
        n = len(fs)
        cols = [[fs[i] if k == i else 0 for k in range(n)] for i in range(n) if fs[i]]
        return AbPresentation.from_columns(n, cols) if cols else AbPresentation(n)

    def order(self) -> Optional[int]:
        out = 1
        for d in self.invariant_factors():
            if d == 0:
                return None
            out *= d
        return out

    def describe(self) -> str:
        return describe_factors(self.invariant_factors())


def describe_factors(fs: Sequence[int]) -> str:
    if not fs:
        return "0"
    return " + ".join("Z" if d == 0 else f"Z/{d}" for d in fs)


Coefficients = Union[int, AbPresentation]


class WittGroup:
    """Common interface; ``free`` is the free model whose coordinates carry the computations."""

    G: FiniteGroup
    H: Subgroup
    S: TruncationSet
    coeff: Coefficients

    @property
    def free(self) -> "WittFreeGroup":
        raise NotImplementedError

    def reduce(self, free_coords: Sequence[int]) -> tuple[int, ...]:
        raise NotImplementedError

    def lift(self, coords: Sequence[int]) -> tuple[int, ...]:
        raise NotImplementedError

    def normalize(self, coords: Sequence[int]) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def rank(self) -> int:
        """Length of the coordinate vector of an element."""
        raise NotImplementedError

    def order(self) -> Optional[int]:
        out = 1
        for d in self.invariant_factors:
            if d == 0:
                return None
            out *= d
        return out

    def describe(self) -> str:
        return describe_factors(self.invariant_factors)

    def element(self, coords: Sequence[int]) -> "WittElement":
        if len(coords) != self.rank:
            raise ContextError(f"expected {self.rank} coordinates, got {len(coords)}")
        return WittElement(self, self.normalize(coords))

    def zero(self) -> "WittElement":
        return WittElement(self, (0,) * self.rank)

    def sibling(self, H: Subgroup, S: TruncationSet, G: Optional[FiniteGroup] = None) -> "WittGroup":
        return witt_group(G or self.G, H, S, self.coeff)

    def from_components(self, n: Union[ComponentFamily, Mapping[Subgroup, TensorElement]]) -> "WittElement":
        """q(n): ghost map, then preimage on the free model, then reduce."""
        space = self.free.space
        fam = n if isinstance(n, ComponentFamily) else ComponentFamily(space, n)
        if fam.space is not space:
            raise ContextError("component family belongs to another context")
        x = ghost_preimage(ghost_map(fam))
        return WittElement(self, self.reduce(x))

    def ghost(self, x: "WittElement") -> GhostVector:
        """Ghost image of a lift of x (well defined only for free coefficients)."""
        return ghost_linear(self.free.space, self.lift(x.coords))

    def random_element(self, rng: random.Random, bound: int = 4) -> "WittElement":
        raise NotImplementedError

    def context(self) -> str:
        return f"G={self.G.name} H={self.H!r} S={self.S.describe()}"


class WittFreeGroup(WittGroup):
    """W^S_{H<=G}(Z; Z^b): free on the N_H(V)-orbits of words over each G/V."""

    def __init__(self, G: FiniteGroup, H: Subgroup, S: TruncationSet, b: int):
        self.G, self.H, self.S, self.coeff = G, H, S, b
        self.space: GhostSpace = ghost_space(G, H, S, b)

    @property
    def free(self) -> "WittFreeGroup":
        return self

    @property
    def rank(self) -> int:
        return self.space.dim

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return (0,) * self.space.dim

    @property
    def basis(self):
        return self.space.basis

    @property
    def ghost_matrix(self) -> list[list[int]]:
        return self.space.ghost_matrix

    def reduce(self, free_coords):
        return tuple(free_coords)

    def lift(self, coords):
        return tuple(coords)

    def normalize(self, coords):
        return tuple(coords)

    def from_ghost(self, a: GhostVector) -> "WittElement":
        return WittElement(self, ghost_preimage(a))

    def random_element(self, rng: random.Random, bound: int = 4) -> "WittElement":
        return WittElement(self, tuple(rng.randint(-bound, bound) for _ in range(self.rank)))

    def __repr__(self) -> str:
        return f"WittFreeGroup({self.context()}, |Y|={self.coeff}, rank={self.rank})"


class WittGroupFP(WittGroup):
    """W^S_{H<=G}(Z; M) for M = Z^b / A, as a quotient of the free model over Z^b."""

    def __init__(self, G: FiniteGroup, H: Subgroup, S: TruncationSet, pres: AbPresentation):
        if pres.rank < 1:
            raise ContextError("use the zero group for b = 0")
        self.G, self.H, self.S, self.coeff = G, H, S, pres
        self.presentation = pres
        self._free = witt_group(G, H, S, pres.rank)
        self.relations = self._relations()
        n = self._free.rank
        self.smith = linalg.snf(linalg.from_columns(self.relations, n), ncols=len(self.relations)) \
            if self.relations else linalg.snf(linalg.zeros(n, 0), ncols=0)
        self.kept = tuple(i for i in range(n) if self.smith.factor(i) != 1)
        self._factors = tuple(self.smith.factor(i) for i in self.kept)

    def _relations(self) -> list[tuple[int, ...]]:
        """p_*(w(y)) - q_*(w(y)) for every orbit generator y over Z^{b+a}, solved in the free model."""
        pres = self.presentation
        if pres.ncols == 0:
            return []
        big = ghost_space(self.G, self.H, self.S, pres.rank + pres.ncols)
        small = self._free.space
        P, Q = pres.p_matrix(), pres.q_matrix()
        out = []
        seen = set()
        for i in range(big.dim):
            g = GhostVector.from_sparse(big, big.ghost_columns[i])
            dp = {V: pushforward(P, t) for V, t in g.components.items()}
            dq = {V: pushforward(Q, t) for V, t in g.components.items()}
            diff = GhostVector(small, {V: dp[V] - dq[V] for V in small.canon}, check=False)
            try:
                r = ghost_preimage(diff)
            except DworkError as e:  # naturality of the ghost map forbids this
                raise AssertionError(f"relation vector is not a ghost image: {e}") from None
            if any(r) and r not in seen:
                seen.add(r)
                out.append(r)
        return out

    @property
    def free(self) -> WittFreeGroup:
        return self._free

    @property
    def rank(self) -> int:
        return len(self.kept)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self._factors

    def normalize(self, coords):
        return tuple(c % d if d else c for c, d in zip(coords, self._factors))

    def reduce(self, free_coords):
        U = self.smith.U
        out = []
        for i, d in zip(self.kept, self._factors):
            y = sum(a * x for a, x in zip(U[i], free_coords))
            out.append(y % d if d else y)
        return tuple(out)

    def lift(self, coords):
        n = self._free.rank
        y = [0] * n
        for i, c in zip(self.kept, coords):
            y[i] = c
        return tuple(linalg.matvec(self.smith.U_inv, y))

    def random_element(self, rng: random.Random, bound: int = 4) -> "WittElement":
        return WittElement(self, tuple(rng.randrange(d) if d else rng.randint(-bound, bound) for d in self._factors))

    def relation_matrix(self) -> list[list[int]]:
        return linalg.from_columns(self.relations, self._free.rank)

    def __repr__(self) -> str:
        return f"WittGroupFP({self.context()}, M={self.presentation.describe()}, {self.describe()})"


class ZeroWittGroup(WittGroup):
    """The zero group (b = 0)."""

    def __init__(self, G, H, S, pres):
        self.G, self.H, self.S, self.coeff = G, H, S, pres

    @property
    def free(self):
        raise ContextError("the zero coefficient module has no free model")

    rank = 0
    invariant_factors = ()

    def reduce(self, free_coords):
        return ()

    def lift(self, coords):
        return ()

    def normalize(self, coords):
        return ()

    def random_element(self, rng, bound=4):
        return self.zero()


@lru_cache(maxsize=None)
def witt_group(G: FiniteGroup, H: Subgroup, S: TruncationSet, coeff: Coefficients) -> WittGroup:
    if isinstance(coeff, AbPresentation):
        if coeff.rank == 0:
            return ZeroWittGroup(G, H, S, coeff)
        return WittGroupFP(G, H, S, coeff)
    return WittFreeGroup(G, H, S, int(coeff))


def build_free(G: FiniteGroup, H: Subgroup, S: TruncationSet, Y: int) -> WittFreeGroup:
    return witt_group(G, H, S, Y)


def build_fp(G: FiniteGroup, H: Subgroup, S: TruncationSet, pres: AbPresentation) -> WittGroup:
    return witt_group(G, H, S, pres)


@dataclass(frozen=True, eq=False)
class WittElement:
    group: WittGroup
    coords: tuple[int, ...]

    def _check(self, other: "WittElement") -> None:
        if other.group is not self.group:
            raise ContextError("Witt elements from different groups")

    def __add__(self, other: "WittElement") -> "WittElement":
        self._check(other)
        return WittElement(self.group, self.group.normalize([a + b for a, b in zip(self.coords, other.coords)]))

    def __sub__(self, other: "WittElement") -> "WittElement":
        self._check(other)
        return WittElement(self.group, self.group.normalize([a - b for a, b in zip(self.coords, other.coords)]))

    def __neg__(self) -> "WittElement":
        return WittElement(self.group, self.group.normalize([-a for a in self.coords]))

    def __mul__(self, k: int) -> "WittElement":
        return WittElement(self.group, self.group.normalize([k * a for a in self.coords]))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, WittElement) and other.group is self.group and other.coords == self.coords

    def __hash__(self) -> int:
        return hash((id(self.group), self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"WittElement({list(self.coords)})"


def add(x: WittElement, y: WittElement) -> WittElement:
    return x + y


def neg(x: WittElement) -> WittElement:
    return -x
