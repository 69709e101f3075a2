"""Finite groups given by Cayley tables, with subgroup and coset combinatorics.

Elements are indices ``0..order-1``.  Groups built from permutations list
their elements in lexicographic order of image tuples and multiply as
composition of functions: ``(a*b)(x) = a(b(x))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .config import BOUNDS
from .errors import GroupError, SizeBoundError


@dataclass(frozen=True)
class Subgroup:
    """A subgroup, stored as its strictly sorted tuple of element indices."""

    elements: tuple[int, ...]
    parent: "FiniteGroup" = field(compare=False, hash=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.element_set

    def __le__(self, other: "Subgroup") -> bool:
        return self.element_set <= other.element_set

    def __lt__(self, other: "Subgroup") -> bool:
        return self.element_set < other.element_set

    def sort_key(self) -> tuple:
        return (self.order, self.elements)

    def canonical_key(self) -> tuple:
        """Decreasing order, then element set: the ordering of ghost coordinates."""
        return (-self.order, self.elements)

    def __repr__(self) -> str:
        return self.parent.subgroup_name(self)


@dataclass(frozen=True)
class Choices:
    """Overrides for the default deterministic choices.

    ``canonical`` lists subgroups (by element tuple) preferred as conjugacy
    class representatives.  ``coset_reps`` pins the representatives of G/V
    (keyed by the element tuple of V) in the given order.
    """

    canonical: tuple[tuple[int, ...], ...] = ()
    coset_reps: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    names: tuple[tuple[tuple[int, ...], str], ...] = ()

    def reps_for(self, elements: tuple[int, ...]) -> Optional[tuple[int, ...]]:
        for key, reps in self.coset_reps:
            if key == elements:
                return reps
        return None


class FiniteGroup:
    """A finite group on ``0..order-1`` given by its Cayley table."""

    def __init__(
        self,
        cayley: Sequence[Sequence[int]],
        labels: Optional[Sequence[str]] = None,
        choices: Choices = Choices(),
        name: str = "G",
        check: bool = True,
    ):
        n = len(cayley)
        if n == 0:
            raise GroupError("empty Cayley table")
        if n > BOUNDS.group_order:
            raise SizeBoundError(f"group order {n} exceeds bound {BOUNDS.group_order}")
        self.cayley: tuple[tuple[int, ...], ...] = tuple(tuple(int(x) for x in row) for row in cayley)
        self.order = n
        self.name = name
        if labels is not None and len(labels) != n:
            raise GroupError("label count does not match group order")
        self.element_labels: Optional[tuple[str, ...]] = tuple(labels) if labels is not None else None
        self.choices = choices
        if check:
            self._validate()
        self.identity = next(e for e in range(n) if all(self.cayley[e][a] == a for a in range(n)))
        self.inverses = tuple(next(b for b in range(n) if self.cayley[a][b] == self.identity) for a in range(n))
        self._coset_cache: dict = {}
        self._conj_cache: dict = {}

    # -- validation -------------------------------------------------------
    def _validate(self) -> None:
        n = self.order
        T = self.cayley
        for row in T:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise GroupError("Cayley table rows must be permutations of 0..n-1")
            if len(set(row)) != n:
                raise GroupError("Cayley table row is not a permutation (not a Latin square)")
        for j in range(n):
            if len({T[i][j] for i in range(n)}) != n:
                raise GroupError("Cayley table column is not a permutation (not a Latin square)")
        units = [e for e in range(n) if all(T[e][a] == a and T[a][e] == a for a in range(n))]
        if not units:
            raise GroupError("no two-sided identity")
        for a in range(n):
            Ta = T[a]
            for b in range(n):
                Tab = Ta[b]
                Tb = T[b]
                TTab = T[Tab]
                for c in range(n):
                    if TTab[c] != Ta[Tb[c]]:
                        raise GroupError(f"table is not associative at ({a}, {b}, {c})")

    # -- arithmetic -------------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self.cayley[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.cayley[self.cayley[g][x]][self.inverses[g]]

    def product(self, *elems: int) -> int:
        out = self.identity
        for e in elems:
            out = self.cayley[out][e]
        return out

    def label(self, g: int) -> str:
        return self.element_labels[g] if self.element_labels else str(g)

    def element_by_label(self, lab: str) -> int:
        if self.element_labels and lab in self.element_labels:
            return self.element_labels.index(lab)
        try:
            g = int(lab)
        except ValueError:
            raise GroupError(f"unknown element label {lab!r}") from None
        if not 0 <= g < self.order:
            raise GroupError(f"element index {g} out of range")
        return g

    # -- subgroups --------------------------------------------------------
    def subgroup(self, elements: Iterable[int]) -> Subgroup:
        els = tuple(sorted(set(elements)))
        return Subgroup(els, self)

    def check_subgroup(self, elements: Iterable[int]) -> Subgroup:
        S = self.subgroup(elements)
        s = S.element_set
        if self.identity not in s:
            raise GroupError("subset does not contain the identity")
        for a in s:
            if self.inverses[a] not in s:
                raise GroupError(f"subset not closed under inverses at {a}")
            for b in s:
                if self.cayley[a][b] not in s:
                    raise GroupError(f"subset not closed under products at ({a}, {b})")
        return S

    @cached_property
    def whole(self) -> Subgroup:
        return self.subgroup(range(self.order))

    @cached_property
    def trivial(self) -> Subgroup:
        return self.subgroup([self.identity])

    def conjugate_subgroup(self, g: int, V: Subgroup) -> Subgroup:
        """``g V g^-1``."""
        return self.subgroup(self.conj(g, v) for v in V.elements)

    def subgroup_name(self, V: Subgroup) -> str:
        for key, nm in self.choices.names:
            if key == V.elements:
                return nm
        return "{" + ",".join(self.label(v) for v in V.elements) + "}"

    def with_choices(self, choices: Choices) -> "FiniteGroup":
        return FiniteGroup(self.cayley, self.element_labels, choices, self.name, check=False)

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.cayley[x][g]
            k += 1
        return k

    # -- caches used by the heavier modules --------------------------------
    def coset_table(self, V: Subgroup) -> "CosetTable":
        """The default table for G/V, honouring ``choices.coset_reps``."""
        key = V.elements
        tab = self._coset_cache.get(key)
        if tab is None:
            reps = self.choices.reps_for(key)
            tab = CosetTable.from_reps(self, V, reps) if reps is not None else CosetTable.minimal(self, V)
            self._coset_cache[key] = tab
        return tab

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


# ---------------------------------------------------------------------------
# construction


def _perm_compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a[b[i]] for i in range(len(a)))


def from_permutations(
    degree: int,
    generators: Sequence[Sequence[int]],
    labels: Optional[Sequence[str]] = None,
    name: str = "G",
) -> FiniteGroup:
    """Close 0-based image tuples under composition; elements sorted lexicographically."""
    ident = tuple(range(degree))
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(ident):
            raise GroupError(f"generator {g} is not a permutation of {degree} points")
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _perm_compose(g, x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > BOUNDS.group_order:
                        raise SizeBoundError(f"generated group exceeds order bound {BOUNDS.group_order}")
                    nxt.append(y)
        frontier = nxt
    elems = sorted(seen)
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[_perm_compose(a, b)] for b in elems] for a in elems]
    G = FiniteGroup(table, labels, name=name, check=False)
    G.permutations = tuple(elems)
    return G


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """``(1 2 3)(4 5)`` (1-based points) to a 0-based image tuple."""
    img = list(range(degree))
    text = text.strip()
    if text in ("", "()", "e", "id"):
        return tuple(img)
    for cyc in text.replace(")", ") ").split(")"):
        cyc = cyc.strip().lstrip("(").strip()
        if not cyc:
            continue
        pts = [int(x) - 1 for x in cyc.replace(",", " ").split()]
        for p in pts:
            if not 0 <= p < degree:
                raise GroupError(f"point {p + 1} outside degree {degree}")
        if len(set(pts)) != len(pts):
            raise GroupError(f"repeated point in cycle ({cyc})")
        for i, p in enumerate(pts):
            img[p] = pts[(i + 1) % len(pts)]
    return tuple(img)


def build_group(spec: str, name: str = "G") -> FiniteGroup:
    """Parse the text grammar: ``cayley <n>`` + rows, or ``perm <deg>`` + cycle generators.

    An optional ``labels a b c ...`` line names the elements in final order.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in spec.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GroupError("empty group specification")
    head = lines[0].split()
    labels = None
    body = []
    for ln in lines[1:]:
        if ln.startswith("labels"):
            labels = ln.split()[1:]
        else:
            body.append(ln)
    if head[0] == "cayley" and len(head) == 2:
        n = int(head[1])
        if len(body) != n:
            raise GroupError(f"expected {n} table rows, got {len(body)}")
        rows = [[int(x) for x in ln.split()] for ln in body]
        return FiniteGroup(rows, labels, name=name)
    if head[0] == "perm" and len(head) == 2:
        deg = int(head[1])
        gens = [parse_cycles(ln, deg) for ln in body]
        return from_permutations(deg, gens, labels, name=name)
    raise GroupError(f"unrecognised group specification header {lines[0]!r}")


def cyclic(n: int) -> FiniteGroup:
    """Element k is g^k; labels e, g, g2, ..."""
    gen = tuple((i + 1) % n for i in range(n)) if n > 1 else (0,)
    labels = ["e"] + ["g" if k == 1 else f"g{k}" for k in range(1, n)]
    return from_permutations(n, [gen], labels, name=f"C{n}")


def dihedral6() -> FiniteGroup:
    """D6 on three points, r = (1 2 3), s = (2 3), labelled e r r2 s sr sr2."""
    r = parse_cycles("(1 2 3)", 3)
    s = parse_cycles("(2 3)", 3)
    G = from_permutations(3, [r, s], name="D6")
    ri, si = G.permutations.index(r), G.permutations.index(s)
    names = {}
    for k in range(3):
        rk = G.identity
        for _ in range(k):
            rk = G.mul(rk, ri)
        names[rk] = "r" * (k > 0) + (str(k) if k > 1 else "")
        names[G.mul(si, rk)] = "s" + names[rk] if k else "s"
    names[G.identity] = "e"
    labels = [names[g] for g in range(G.order)]
    return FiniteGroup(G.cayley, labels, name="D6", check=False)


def named_group(name: str) -> FiniteGroup:
    key = name.lower()
    if key == "d6":
        return dihedral6()
    if key == "s3":
        return from_permutations(3, [parse_cycles("(1 2)", 3), parse_cycles("(1 2 3)", 3)], name="S3")
    if key == "d8":
        return from_permutations(4, [parse_cycles("(1 2 3 4)", 4), parse_cycles("(1 3)", 4)], name="D8")
    if key == "a4":
        return from_permutations(4, [parse_cycles("(1 2 3)", 4), parse_cycles("(1 2)(3 4)", 4)], name="A4")
    if key.startswith("c") and key[1:].isdigit():
        n = int(key[1:])
        if n < 1:
            raise GroupError("cyclic order must be positive")
        if n > BOUNDS.group_order:
            raise SizeBoundError(f"group order {n} exceeds bound {BOUNDS.group_order}")
        return cyclic(n)
    raise GroupError(f"unknown group name {name!r}")


def relabel(G: FiniteGroup, perm: Sequence[int]) -> FiniteGroup:
    """Isomorphic copy where old element ``g`` gets index ``perm[g]``."""
    n = G.order
    inv = [0] * n
    for g, p in enumerate(perm):
        inv[p] = g
    table = [[perm[G.mul(inv[a], inv[b])] for b in range(n)] for a in range(n)]
    labels = [G.label(inv[a]) for a in range(n)] if G.element_labels else None
    return FiniteGroup(table, labels, name=G.name, check=False)


# ---------------------------------------------------------------------------
# subgroup lattice


def subgroup_generated(G: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    found = {G.identity}
    gens = set(elems)
    frontier = list(gens - found)
    found |= gens
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return G.subgroup(found)


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, sorted by (order, element tuple)."""
    cache = G.__dict__.setdefault("_subgroups", None)
    if cache is not None:
        return list(cache)
    cyclics = {subgroup_generated(G, [g]) for g in range(G.order)}
    found = set(cyclics)
    frontier = list(cyclics)
    while frontier:
        nxt = []
        for X in frontier:
            for C in cyclics:
                if not C <= X:
                    Y = subgroup_generated(G, X.elements + C.elements)
                    if Y not in found:
                        found.add(Y)
                        nxt.append(Y)
        frontier = nxt
    out = sorted(found, key=Subgroup.sort_key)
    G._subgroups = tuple(out)
    return out


def subgroups_of(G: FiniteGroup, H: Subgroup) -> list[Subgroup]:
    return [U for U in all_subgroups(G) if U <= H]


def normalizer(G: FiniteGroup, V: Subgroup, inside: Optional[Subgroup] = None) -> Subgroup:
    inside = inside or G.whole
    return G.subgroup(h for h in inside.elements if G.conjugate_subgroup(h, V) == V)


def is_subconjugate(G: FiniteGroup, U: Subgroup, V: Subgroup, H: Subgroup) -> bool:
    """Is ``h U h^-1 <= V`` for some ``h`` in ``H``?"""
    return any(G.conjugate_subgroup(h, U) <= V for h in H.elements)


def conjugacy_classes(G: FiniteGroup, H: Subgroup) -> list[tuple[Subgroup, frozenset[Subgroup]]]:
    """H-conjugacy classes of subgroups of H, each with its canonical member.

    The canonical member is the class minimum under (order, element tuple)
    unless ``G.choices.canonical`` names a member.  Classes come in
    (order, canonical element tuple) order.
    """
    key = H.elements
    cached = G._conj_cache.get(key)
    if cached is not None:
        return cached
    preferred = set(G.choices.canonical)
    remaining = subgroups_of(G, H)
    seen: set[Subgroup] = set()
    classes = []
    for U in remaining:
        if U in seen:
            continue
        members = frozenset(G.conjugate_subgroup(h, U) for h in H.elements)
        seen |= members
        pick = [M for M in members if M.elements in preferred]
        canon = min(pick or members, key=Subgroup.sort_key)
        classes.append((canon, members))
    classes.sort(key=lambda c: c[0].sort_key())
    G._conj_cache[key] = classes
    return classes


def canonical_of(G: FiniteGroup, H: Subgroup, U: Subgroup) -> tuple[Subgroup, int]:
    """Canonical representative ``V`` of U's H-class and the least ``h`` in H with ``U = h V h^-1``."""
    for canon, members in conjugacy_classes(G, H):
        if U in members:
            for h in H.elements:
                if G.conjugate_subgroup(h, canon) == U:
                    return canon, h
    raise GroupError(f"{U!r} is not a subgroup of {H!r}")


def left_coset_reps(G: FiniteGroup, H: Subgroup, V: Subgroup) -> list[int]:
    """Minimal representative of each left coset hV in H, in increasing order."""
    seen: set[int] = set()
    reps = []
    for h in H.elements:
        if h in seen:
            continue
        reps.append(h)
        seen.update(G.mul(h, v) for v in V.elements)
    return reps


def fixed_cosets(G: FiniteGroup, H: Subgroup, V: Subgroup, U: Subgroup) -> list[int]:
    """Representatives h of cosets in (H/V)^U, i.e. with ``h^-1 U h <= V``."""
    out = []
    for h in left_coset_reps(G, H, V):
        hi = G.inv(h)
        if all(G.conj(hi, u) in V for u in U.elements):
            out.append(h)
    return out


def double_cosets(G: FiniteGroup, H: Subgroup, J: Subgroup, K: Subgroup) -> list[int]:
    """Minimal representative of each double coset J h K inside H."""
    seen: set[int] = set()
    reps = []
    for h in H.elements:
        if h in seen:
            continue
        reps.append(h)
        for j in J.elements:
            jh = G.mul(j, h)
            seen.update(G.mul(jh, k) for k in K.elements)
    return reps


def table_of_marks(G: FiniteGroup) -> tuple[list[Subgroup], list[list[int]]]:
    """Marks ``|(G/V)^U|`` by direct fixed-point counting on coset sets.

    Rows are indexed by U and columns by V, both running over canonical class
    representatives in decreasing order then element tuple.
    """
    reps = sorted((c for c, _ in conjugacy_classes(G, G.whole)), key=Subgroup.canonical_key)
    cosets = {}
    for V in reps:
        cs = set()
        for g in range(G.order):
            cs.add(frozenset(G.mul(g, v) for v in V.elements))
        cosets[V] = cs
    table = []
    for U in reps:
        row = []
        for V in reps:
            row.append(sum(1 for c in cosets[V] if all(frozenset(G.mul(u, x) for x in c) == c for u in U.elements)))
        table.append(row)
    return reps, table


# ---------------------------------------------------------------------------
# coset tables


class CosetTable:
    """Ordered left-coset representatives of G/V with the element-to-position map."""

    def __init__(self, group: FiniteGroup, subgroup: Subgroup, reps: Sequence[int]):
        self.group = group
        self.subgroup = subgroup
        self.reps = tuple(reps)
        rep_of = [-1] * group.order
        for i, g in enumerate(self.reps):
            for v in subgroup.elements:
                x = group.mul(g, v)
                if rep_of[x] != -1:
                    raise GroupError(f"representatives {self.reps} repeat a coset of {subgroup!r}")
                rep_of[x] = i
        if -1 in rep_of:
            raise GroupError(f"representatives {self.reps} do not cover G/{subgroup!r}")
        self.rep_of = tuple(rep_of)

    @classmethod
    def minimal(cls, G: FiniteGroup, V: Subgroup) -> "CosetTable":
        reps = left_coset_reps(G, G.whole, V)
        # the trivial coset keeps the identity as its representative and comes first
        triv = next(i for i, g in enumerate(reps) if g in V)
        reps = [G.identity] + reps[:triv] + reps[triv + 1:]
        return cls(G, V, reps)

    @classmethod
    def from_reps(cls, G: FiniteGroup, V: Subgroup, reps: Sequence[int]) -> "CosetTable":
        return cls(G, V, reps)

    def __len__(self) -> int:
        return len(self.reps)

    def position(self, g: int) -> int:
        return self.rep_of[g]

    def __eq__(self, other) -> bool:
        return isinstance(other, CosetTable) and other.group is self.group and other.reps == self.reps \
            and other.subgroup == self.subgroup

    def __hash__(self) -> int:
        return hash((id(self.group), self.subgroup.elements, self.reps))

    def __repr__(self) -> str:
        return f"CosetTable(G/{self.subgroup!r}, reps={[self.group.label(g) for g in self.reps]})"


def subgroup_as_group(G: FiniteGroup, H: Subgroup) -> tuple[FiniteGroup, dict[int, int]]:
    """H as a group in its own right; returns it with the embedding-index map old -> new.

    Indices follow the sorted element tuple of H, so minimal coset
    representatives correspond on both sides.
    """
    els = H.elements
    new = {g: i for i, g in enumerate(els)}
    table = [[new[G.mul(a, b)] for b in els] for a in els]
    labels = [G.label(g) for g in els] if G.element_labels else None
    return FiniteGroup(table, labels, name=f"{G.name}|{G.subgroup_name(H)}", check=False), new
