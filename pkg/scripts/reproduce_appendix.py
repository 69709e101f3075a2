"""Print the pinned D6 / Z/3 report and diff it against the embedded golden file.

    python3 scripts/reproduce_appendix.py [--permute SEED]
"""

import argparse
import sys
import time

from gwitt.appendix import appendix_group, first_difference, golden_lines, reproduce_lines


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--permute", type=int, default=None, help="shuffle internal element indices first")
    args = ap.parse_args()
    t0 = time.perf_counter()
    lines = reproduce_lines(appendix_group(args.permute))
    elapsed = time.perf_counter() - t0
    print("\n".join(lines))
    diff = first_difference(lines, golden_lines())
    if diff:
        n, got, want = diff
        print(f"mismatch at line {n}:\n  got      {got}\n  expected {want}", file=sys.stderr)
        return 3
    print(f"# matches golden ({elapsed:.2f}s)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
