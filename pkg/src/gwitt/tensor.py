"""Coset-indexed tensor powers of free abelian groups.

An element of Z(Y)^{(x) G/V} is a sparse integer combination of words
``w`` of length |G/V| with letters in ``range(|Y|)``; position ``i`` holds
the letter at the coset ``reps[i] V`` of the element's coset table.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .config import BOUNDS
from .errors import ContextError, ParseError, SizeBoundError
from .group import CosetTable, FiniteGroup, Subgroup, left_coset_reps

Word = tuple[int, ...]


@dataclass(frozen=True)
class GeneratorSet:
    size: int
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise ContextError("generator set must be nonempty")

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"y{i}"


class TensorElement:
    """Sparse element of Z(Y)^{(x) G/V}; zero coefficients are never stored."""

    __slots__ = ("table", "rank", "terms")

    def __init__(self, table: CosetTable, rank: int, terms: Optional[Mapping[Word, int]] = None):
        self.table = table
        self.rank = rank
        self.terms: dict[Word, int] = {w: c for w, c in (terms or {}).items() if c}

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, table: CosetTable, rank: int) -> "TensorElement":
        return cls(table, rank)

    @classmethod
    def monomial(cls, table: CosetTable, rank: int, word: Sequence[int], coeff: int = 1) -> "TensorElement":
        w = tuple(word)
        if len(w) != len(table):
            raise ContextError(f"word length {len(w)} does not match |G/V| = {len(table)}")
        if any(not 0 <= x < rank for x in w):
            raise ContextError(f"word {w} has letters outside range({rank})")
        return cls(table, rank, {w: coeff})

    @classmethod
    def scalar(cls, table: CosetTable, value: int) -> "TensorElement":
        """Rank-one element ``value * (y0,...,y0)``."""
        return cls(table, 1, {(0,) * len(table): value})

    # -- basic structure --------------------------------------------------
    @property
    def subgroup(self) -> Subgroup:
        return self.table.subgroup

    @property
    def group(self) -> FiniteGroup:
        return self.table.group

    @property
    def degree(self) -> int:
        return len(self.table)

    def items(self) -> list[tuple[Word, int]]:
        return sorted(self.terms.items())

    def coefficient(self, word: Sequence[int]) -> int:
        return self.terms.get(tuple(word), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def as_scalar(self) -> int:
        """The single coefficient of a rank-one element."""
        if self.rank != 1:
            raise ContextError("as_scalar needs rank-one coefficients")
        return self.terms.get((0,) * self.degree, 0)

    def _compatible(self, other: "TensorElement") -> "TensorElement":
        if other.rank != self.rank or other.table.subgroup != self.table.subgroup:
            raise ContextError("tensor elements live in different tensor powers")
        if other.table.reps != self.table.reps:
            return retabulate(other, self.table)
        return other

    def __add__(self, other: "TensorElement") -> "TensorElement":
        other = self._compatible(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return TensorElement(self.table, self.rank, out)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.table, self.rank, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __mul__(self, k: int) -> "TensorElement":
        return TensorElement(self.table, self.rank, {w: k * c for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        try:
            other = self._compatible(other)
        except ContextError:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.table.subgroup.elements, self.rank, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return format_tensor(self)


# ---------------------------------------------------------------------------
# position maps (cached per pair of coset tables)

_ACT_CACHE: dict = {}
_POW_CACHE: dict = {}


def _act_map(g: int, src: CosetTable, dst: CosetTable) -> tuple[int, ...]:
    key = (g, src, dst)
    P = _ACT_CACHE.get(key)
    if P is None:
        G = src.group
        P = tuple(src.position(G.mul(c, g)) for c in dst.reps)
        _ACT_CACHE[key] = P
    return P


def _apply(P: Sequence[int], w: Word) -> Word:
    return tuple(w[p] for p in P)


def retabulate(t: TensorElement, table: CosetTable) -> TensorElement:
    """The same element written against another table of the same G/V."""
    if table.subgroup != t.table.subgroup:
        raise ContextError("retabulate needs a table for the same subgroup")
    if table.reps == t.table.reps:
        return t
    P = tuple(t.table.position(c) for c in table.reps)
    return TensorElement(table, t.rank, {_apply(P, w): c for w, c in t.terms.items()})


def act(g: int, t: TensorElement, target: Optional[CosetTable] = None) -> TensorElement:
    """g . t over G/(g V g^-1): the letter at c.gVg^-1 is the old letter at (c g) V."""
    G = t.group
    if target is None:
        target = G.coset_table(G.conjugate_subgroup(g, t.subgroup))
    P = _act_map(g, t.table, target)
    return TensorElement(target, t.rank, {_apply(P, w): c for w, c in t.terms.items()})


def is_fixed(t: TensorElement, N: Subgroup) -> bool:
    G = t.group
    for n in N.elements:
        if G.conjugate_subgroup(n, t.subgroup) != t.subgroup:
            return False
        if act(n, t, t.table) != t:
            return False
    return True


def transfer(t: TensorElement, W: Subgroup, W2: Subgroup) -> TensorElement:
    """tr_W^{W2}(t) = sum over w in W2/W of w.t, for V <= W <= W2 <= N_G(V)."""
    G = t.group
    V = t.subgroup
    if not (V <= W <= W2):
        raise ContextError("transfer needs V <= W <= W'")
    if any(G.conjugate_subgroup(x, V) != V for x in W2.elements):
        raise ContextError("transfer needs W' inside the normaliser of V")
    if not is_fixed(t, W):
        raise ContextError("transfer input is not fixed by W")
    out = TensorElement.zero(t.table, t.rank)
    for w in left_coset_reps(G, W2, W):
        out = out + act(w, t, t.table)
    return out


def frobenius_lift(t: TensorElement, U: Subgroup, target: Optional[CosetTable] = None) -> TensorElement:
    """Pull back along G/U -> G/V; coefficients unchanged over Z."""
    if not U <= t.subgroup:
        raise ContextError(f"frobenius_lift needs {U!r} <= {t.subgroup!r}")
    G = t.group
    target = target or G.coset_table(U)
    key = ("phi", t.table, target)
    P = _ACT_CACHE.get(key)
    if P is None:
        P = tuple(t.table.position(c) for c in target.reps)
        _ACT_CACHE[key] = P
    return TensorElement(target, t.rank, {_apply(P, w): c for w, c in t.terms.items()})


def _power_layout(src: CosetTable, U: Subgroup, dst: CosetTable) -> tuple[tuple[int, ...], ...]:
    """For each coset s U of V/U, the source positions feeding target positions 0..|G/U|-1.

    Position j with representative c_j = g_i s (g_i from ``src``) receives the
    letter at position i of the factor indexed by the coset s U.
    """
    key = (src, U.elements, dst)
    lay = _POW_CACHE.get(key)
    if lay is not None:
        return lay
    G = src.group
    V = src.subgroup
    vreps = left_coset_reps(G, V, U)
    coset_index = {}
    for k, s in enumerate(vreps):
        for u in U.elements:
            coset_index[G.mul(s, u)] = k
    m = len(dst)
    out = [[-1] * m for _ in vreps]
    for j, c in enumerate(dst.reps):
        i = src.position(c)
        s = G.mul(G.inv(src.reps[i]), c)
        k = coset_index[s]
        out[k][j] = i
    lay = tuple(tuple(r) for r in out)
    _POW_CACHE[key] = lay
    return lay


def tensor_power_reindexed(t: TensorElement, U: Subgroup, target: Optional[CosetTable] = None) -> TensorElement:
    """f_{G/V}(t^{(x) V/U}) over G/U, using the representatives of ``t.table``."""
    V = t.subgroup
    if not U <= V:
        raise ContextError(f"tensor_power_reindexed needs {U!r} <= {V!r}")
    G = t.group
    target = target or G.coset_table(U)
    layout = _power_layout(t.table, U, target)
    index = len(layout)
    terms = t.items()
    if not terms:
        return TensorElement.zero(target, t.rank)
    if len(terms) ** index > BOUNDS.tensor_terms:
        raise SizeBoundError(f"expansion of {len(terms)}^{index} terms exceeds bound {BOUNDS.tensor_terms}")
    m = len(target)
    out: dict[Word, int] = {}
    for choice in itertools.product(terms, repeat=index):
        word = [0] * m
        coeff = 1
        for k, (w, c) in enumerate(choice):
            coeff *= c
            for j, i in enumerate(layout[k]):
                if i >= 0:
                    word[j] = w[i]
        key = tuple(word)
        out[key] = out.get(key, 0) + coeff
    return TensorElement(target, t.rank, out)


def pushforward(A: Sequence[Sequence[int]], t: TensorElement, out_rank: Optional[int] = None) -> TensorElement:
    """Multilinear extension of the map y_i -> sum_j A[j][i] y'_j."""
    rows = len(A)
    out_rank = rows if out_rank is None else out_rank
    if rows and len(A[0]) != t.rank:
        raise ContextError(f"matrix has {len(A[0])} columns for rank {t.rank}")
    cols = [[(j, A[j][i]) for j in range(rows) if A[j][i]] for i in range(t.rank)]
    out: dict[Word, int] = {}
    for w, c in t.terms.items():
        factors = [cols[y] for y in w]
        size = 1
        for f in factors:
            size *= len(f)
        if size > BOUNDS.tensor_terms:
            raise SizeBoundError(f"pushforward expansion of {size} terms exceeds bound")
        for pick in itertools.product(*factors):
            coeff = c
            for _, a in pick:
                coeff *= a
            key = tuple(j for j, _ in pick)
            out[key] = out.get(key, 0) + coeff
    return TensorElement(t.table, out_rank, out)


def shuffle(a: TensorElement, b: TensorElement) -> TensorElement:
    """s(a (x) b): positionwise pairing of letters, (y, y') -> y * |Y'| + y'."""
    b = retabulate(b, a.table) if b.table.reps != a.table.reps else b
    if b.table.subgroup != a.table.subgroup:
        raise ContextError("shuffle needs both factors over the same G/V")
    r2 = b.rank
    out: dict[Word, int] = {}
    for w, c in a.terms.items():
        for w2, c2 in b.terms.items():
            key = tuple(x * r2 + y for x, y in zip(w, w2))
            out[key] = out.get(key, 0) + c * c2
    return TensorElement(a.table, a.rank * r2, out)


# ---------------------------------------------------------------------------
# orbits


class OrbitData:
    """N-orbits of words over G/V (N inside the normaliser of V)."""

    def __init__(self, table: CosetTable, N: Subgroup, rank: int):
        G = table.group
        V = table.subgroup
        self.table = table
        self.rank = rank
        self.normalizer = N
        self.weyl_reps = tuple(left_coset_reps(G, N, V))
        self.perms = tuple(_act_map(n, table, table) for n in self.weyl_reps)
        k = len(table)
        if rank ** k > BOUNDS.tensor_terms:
            raise SizeBoundError(f"{rank}^{k} words over G/{V!r} exceed bound {BOUNDS.tensor_terms}")
        reps = []
        seen: set[Word] = set()
        for w in itertools.product(range(rank), repeat=k):
            if w in seen:
                continue
            reps.append(w)
            seen.update(_apply(P, w) for P in self.perms)
        self.reps: tuple[Word, ...] = tuple(reps)
        self.index = {w: i for i, w in enumerate(reps)}

    def __len__(self) -> int:
        return len(self.reps)

    def canonical(self, w: Word) -> Word:
        return min(_apply(P, w) for P in self.perms)

    def orbit(self, w: Word) -> set[Word]:
        return {_apply(P, w) for P in self.perms}

    def stabilizer_size(self, w: Word) -> int:
        return sum(1 for P in self.perms if _apply(P, w) == w)

    def position(self, w: Word) -> int:
        return self.index[self.canonical(w)]


def orbit_basis(table: CosetTable, N: Subgroup, Y: GeneratorSet | int) -> list[Word]:
    """Lexicographically minimal word of each N-orbit, in lexicographic order."""
    rank = Y.size if isinstance(Y, GeneratorSet) else Y
    return list(OrbitData(table, N, rank).reps)


# ---------------------------------------------------------------------------
# literals

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*?\s*)?(\(([^)]*)\))?")


def parse_tensor(text: str, table: CosetTable, rank: int) -> TensorElement:
    """Parse ``3*(y0,y1,y0) - (y1,y1,y1)``; a bare integer is allowed for rank one."""
    s = text.strip()
    if not s:
        raise ParseError("empty tensor literal")
    pos = 0
    out = TensorElement.zero(table, rank)
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse tensor literal near {s[pos:]!r}")
        sign, num, _, body = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing operator near {s[pos:]!r}")
        if num is None and body is None:
            raise ParseError(f"empty term near {s[pos:]!r}")
        coeff = int(num) if num is not None else 1
        if sign == "-":
            coeff = -coeff
        if body is None:
            if rank != 1 and coeff != 0:
                raise ParseError("bare integers are only allowed for rank-one coefficients")
            word = (0,) * len(table)
        else:
            letters = [x.strip() for x in body.split(",") if x.strip()]
            try:
                word = tuple(int(x[1:]) if x.startswith("y") else int(x) for x in letters)
            except ValueError:
                raise ParseError(f"bad letter in ({body})") from None
        try:
            out = out + TensorElement.monomial(table, rank, word, coeff)
        except ContextError as e:
            raise ParseError(str(e)) from None
        pos = m.end()
        first = False
    return out


def format_tensor(t: TensorElement) -> str:
    parts = []
    for w, c in t.items():
        body = "(" + ",".join(f"y{x}" for x in w) + ")"
        mag = abs(c)
        term = body if mag == 1 else f"{mag}*{body}"
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) if parts else "0"
