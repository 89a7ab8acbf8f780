"""Print every chord diagram with k chords, its comparable pair and element."""

import argparse

from sutured.chord import solve_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("k", type=int, nargs="?", default=4)
    args = ap.parse_args()
    table = solve_table(args.k)
    for d in sorted(table.entries, key=table.pair):
        lo, hi = table.pair(d)
        print(f"{lo or '1':>8} .. {hi or '1':<8} {str(d):<40} {table.element(d)}")


if __name__ == "__main__":
    main()
