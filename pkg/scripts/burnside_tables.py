"""Tables of marks and Burnside ring products for the built-in groups.

The multiplication is computed through W_G(Z; Z), not from the marks, so the
two printed tables are an independent check of each other.
"""

import argparse

from gwitt.group import named_group, table_of_marks
from gwitt.operators import ring_structure
from gwitt.truncation import all_subgroups_set
from gwitt.witt import build_free


def show(name: str) -> None:
    G = named_group(name)
    W = build_free(G, G.whole, all_subgroups_set(G, G.whole), 1)
    reps, marks = table_of_marks(G)
    labels = [G.subgroup_name(V) for V in reps]
    width = max(len(s) for s in labels) + 2
    print(f"== {G.name} (order {G.order}) ==")
    print("marks (row U, column [G/V]):")
    for U, row in zip(labels, marks):
        print(f"  {U:<{width}}" + " ".join(f"{x:>3}" for x in row))
    info = ring_structure(W)
    print("products of basis sets [G/V] [G/V'] in the basis [G/V]:")
    for i, a in enumerate(labels):
        for j in range(i, len(labels)):
            coeffs = info["table"][i][j]
            terms = [f"{c}[{labels[k]}]" for k, c in enumerate(coeffs) if c]
            print(f"  [{a}] [{labels[j]}] = {' + '.join(terms) or '0'}")
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("groups", nargs="*", default=["c2", "c3", "c4", "c6", "s3"])
    for name in ap.parse_args().groups:
        show(name)


if __name__ == "__main__":
    main()
