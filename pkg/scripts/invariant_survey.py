"""Invariant factors of W_G(Z; Z/n) over a grid of groups and moduli."""

import argparse
import time
from dataclasses import dataclass, field

from gwitt.errors import SizeBoundError
from gwitt.group import named_group
from gwitt.truncation import all_subgroups_set
from gwitt.witt import AbPresentation, build_fp


@dataclass
class SurveyConfig:
    groups: list[str] = field(default_factory=lambda: ["c2", "c3", "c4", "c6", "s3", "d6"])
    moduli: list[int] = field(default_factory=lambda: [2, 3, 4])
    time_limit: float = 30.0


def survey(cfg: SurveyConfig) -> list[tuple[str, int, str, float]]:
    rows = []
    for name in cfg.groups:
        G = named_group(name)
        S = all_subgroups_set(G, G.whole)
        for n in cfg.moduli:
            t0 = time.perf_counter()
            try:
                desc = build_fp(G, G.whole, S, AbPresentation.cyclic(n)).describe()
            except SizeBoundError as e:
                desc = f"skipped ({e})"
            dt = time.perf_counter() - t0
            rows.append((G.name, n, desc, dt))
            if dt > cfg.time_limit:
                return rows
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--groups", nargs="*")
    ap.add_argument("--moduli", nargs="*", type=int)
    args = ap.parse_args()
    cfg = SurveyConfig()
    if args.groups:
        cfg.groups = args.groups
    if args.moduli:
        cfg.moduli = args.moduli
    for g, n, desc, dt in survey(cfg):
        print(f"{g:>4}  Z/{n:<3} {desc}  ({dt:.2f}s)")


if __name__ == "__main__":
    main()
