"""Elements of slope sutures on the punctured torus, propagated over the Farey graph."""

import argparse

from sutured import torus as T


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=5)
    args = ap.parse_args()
    table = T.farey_propagate(max(args.bound, 1))
    for (p, q), c in sorted(table.items(), key=lambda kv: (abs(kv[0][0]) + abs(kv[0][1]), kv[0])):
        print(f"slope {q}/{p:<4} element ±{c}")
    print(f"{len(table)} slopes, base {sorted(T.base_slopes())}")


if __name__ == "__main__":
    main()
