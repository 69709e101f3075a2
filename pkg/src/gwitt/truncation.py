"""Truncation sets: upward- and conjugation-closed sets of subgroups of H."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import TruncationError
from .group import FiniteGroup, Subgroup, conjugacy_classes, is_subconjugate, subgroups_of


@dataclass(frozen=True)
class TruncationSet:
    ambient: Subgroup
    members: frozenset[Subgroup]
    group: FiniteGroup = field(compare=False, hash=False, repr=False)

    @property
    def canonical(self) -> tuple[Subgroup, ...]:
        """Canonical class representatives that lie in the set, largest first."""
        cached = self.__dict__.get("_canonical")
        if cached is None:
            reps = [c for c, _ in conjugacy_classes(self.group, self.ambient) if c in self.members]
            cached = tuple(sorted(reps, key=Subgroup.canonical_key))
            object.__setattr__(self, "_canonical", cached)
        return cached

    def __contains__(self, U: Subgroup) -> bool:
        return U in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[Subgroup]:
        return sorted(self.members, key=Subgroup.canonical_key)

    def describe(self) -> str:
        return "{" + ", ".join(repr(U) for U in self.sorted_members()) + "}"


def validate(G: FiniteGroup, H: Subgroup, proposed: Iterable[Subgroup]) -> TruncationSet:
    """Check closure; the first violation raises with a witness pair."""
    members = frozenset(proposed)
    for U in sorted(members, key=Subgroup.sort_key):
        if not U <= H:
            raise TruncationError(f"{U!r} is not contained in {H!r}", witness=(U, H))
    subs = subgroups_of(G, H)
    for U in sorted(members, key=Subgroup.sort_key):
        for W in subs:
            if U < W and W not in members:
                raise TruncationError(f"not upward closed: {U!r} < {W!r} but {W!r} missing", witness=(U, W))
    for U in sorted(members, key=Subgroup.sort_key):
        for h in H.elements:
            C = G.conjugate_subgroup(h, U)
            if C not in members:
                raise TruncationError(
                    f"not conjugation closed: {U!r} conjugated by {G.label(h)} gives missing {C!r}",
                    witness=(U, h),
                )
    return TruncationSet(H, members, G)


def all_subgroups_set(G: FiniteGroup, H: Subgroup) -> TruncationSet:
    return TruncationSet(H, frozenset(subgroups_of(G, H)), G)


def top(G: FiniteGroup, H: Subgroup) -> TruncationSet:
    return TruncationSet(H, frozenset([H]), G)


def empty(G: FiniteGroup, H: Subgroup) -> TruncationSet:
    return TruncationSet(H, frozenset(), G)


def restrict(S: TruncationSet, K: Subgroup) -> TruncationSet:
    if not K <= S.ambient:
        raise TruncationError(f"{K!r} is not contained in {S.ambient!r}", witness=(K, S.ambient))
    return TruncationSet(K, frozenset(U for U in S.members if U <= K), S.group)


def remove_subconjugate(S: TruncationSet, K: Subgroup) -> TruncationSet:
    """Members of S that are not H-subconjugate to K."""
    H = S.ambient
    keep = (U for U in S.members if not is_subconjugate(S.group, U, K, H))
    return TruncationSet(H, frozenset(keep), S.group)


def conjugate(S: TruncationSet, g: int) -> TruncationSet:
    G = S.group
    return TruncationSet(
        G.conjugate_subgroup(g, S.ambient),
        frozenset(G.conjugate_subgroup(g, U) for U in S.members),
        G,
    )


def is_minimal(S: TruncationSet, K: Subgroup) -> bool:
    return K in S.members and not any(U < K for U in S.members)
