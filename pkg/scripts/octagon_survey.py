"""Glue every chord diagram into the octagons and tally the resulting classes."""

from collections import Counter

from sutured import torus as T
from sutured.chord import enumerate_diagrams


def main():
    for ij, bg in T.OCTAGONS.items():
        tally = Counter()
        for d in enumerate_diagrams(bg.num_points // 2):
            s = T.glue_octagon(d, bg)
            tally[(str(s), str(T.octagon_element(d, ij)))] += 1
        print(f"O{ij[0]}{ij[1]}: {sum(tally.values())} diagrams")
        for (cls, el), n in sorted(tally.items()):
            print(f"  {n:4d}  {cls:<20} {el}")


if __name__ == "__main__":
    main()
