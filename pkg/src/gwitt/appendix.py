"""The worked D6 example with Z/3 coefficients, pinned to a fixed set of choices.

Z/3 is the coequaliser of p, q : Z^2 -> Z with p(a, b) = a + 3b and q(a, b) = a.
For every orbit generator y of W_{D6}(Z; Z^2) the report lists the subgroup
W carrying y, the letter counts (u, v) of y, and the rank-one ghost
coordinates of p_* w(y) and q_* w(y).
"""

from __future__ import annotations

import random
from importlib import resources
from typing import Optional, Sequence

from .ghost import GhostVector, ghost_space
from .group import Choices, FiniteGroup, dihedral6, relabel
from .tensor import pushforward
from .truncation import all_subgroups_set
from .witt import AbPresentation, build_fp, build_free

HEADER = "# gwitt reproduce d6-appendix v1"

# coset representatives per subgroup, by element labels
REPS = {
    ("e",): ("e", "r", "r2", "s", "sr", "sr2"),
    ("e", "s"): ("e", "r", "r2"),
    ("e", "r", "r2"): ("e", "s"),
    ("e", "r", "r2", "s", "sr", "sr2"): ("e",),
}
NAMES = {
    ("e",): "{e}",
    ("e", "s"): "<s>",
    ("e", "r", "r2"): "<r>",
    ("e", "r", "r2", "s", "sr", "sr2"): "D6",
}


def appendix_group(permutation_seed: Optional[int] = None) -> FiniteGroup:
    """D6 with the pinned representatives; optionally with shuffled element indices."""
    G = dihedral6()
    if permutation_seed is not None:
        perm = list(range(G.order))
        random.Random(permutation_seed).shuffle(perm)
        G = relabel(G, perm)
    idx = {G.label(g): g for g in range(G.order)}

    def key(labels: Sequence[str]) -> tuple[int, ...]:
        return tuple(sorted(idx[x] for x in labels))

    choices = Choices(
        canonical=(key(("e", "s")),),
        coset_reps=tuple((key(k), tuple(idx[x] for x in v)) for k, v in REPS.items()),
        names=tuple((key(k), v) for k, v in NAMES.items()),
    )
    return G.with_choices(choices)


def _fmt(v: Sequence[int]) -> str:
    return " ".join(str(x) for x in v)


def reproduce_lines(G: Optional[FiniteGroup] = None) -> list[str]:
    G = G or appendix_group()
    H = G.whole
    S = all_subgroups_set(G, H)
    lines = [HEADER]
    free1 = build_free(G, H, S, 1)
    for j in range(free1.rank):
        col = tuple(free1.ghost_matrix[i][j] for i in range(free1.rank))
        lines.append(f"basis {col}")
    pres = AbPresentation.cyclic(3)
    big = ghost_space(G, H, S, 2)
    P, Q = pres.p_matrix(), pres.q_matrix()

    def rank_one(g: GhostVector, A) -> tuple[int, ...]:
        return tuple(pushforward(A, g.components[U]).as_scalar() for U in big.canon)

    for W in big.canon:
        k = len(big.tables[W])
        for u in range(k, -1, -1):
            v = k - u
            gens = [i for i in big.block(W) if big.basis[i][1].count(0) == u]
            values = set()
            for i in gens:
                g = GhostVector.from_sparse(big, big.ghost_columns[i])
                values.add((rank_one(g, P), rank_one(g, Q)))
            if len(values) != 1:
                raise AssertionError(f"generators at {W!r} with counts ({u}, {v}) disagree: {sorted(values)}")
            (p, q), = values
            lines.append(f"row {W!r} {u} {v} | {_fmt(p)} | {_fmt(q)}")
    fp = build_fp(G, H, S, pres)
    lines.append("invariant_factors " + _fmt(fp.invariant_factors))
    lines.append("group " + fp.describe())
    lines.append(f"order {fp.order()}")
    return lines


def golden_lines(path: Optional[str] = None) -> list[str]:
    if path is None:
        text = resources.files("gwitt").joinpath("data/d6_appendix.golden").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return text.splitlines()


def first_difference(got: Sequence[str], want: Sequence[str]) -> Optional[tuple[int, str, str]]:
    """1-based line number and both lines at the first mismatch, or None if identical."""
    for i in range(max(len(got), len(want))):
        a = got[i] if i < len(got) else "<missing>"
        b = want[i] if i < len(want) else "<missing>"
        if a != b:
            return i + 1, a, b
    return None
