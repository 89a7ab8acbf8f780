"""Chord diagrams on a marked disc and their suture elements.

Points are labelled ``0..2k-1`` clockwise from the basepoint.  Boundary
segment ``j`` runs from point ``j`` to ``j+1`` and has sign ``(-1)**j``, so
the region touching the segment between points 0 and 1 is positive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .fock import FockElement, LaxElement, Word, charge, comparable_pairs, support_interval


class InvalidDiagram(ValueError):
    pass


class DiagramParseError(InvalidDiagram):
    """The text is not in diagram syntax at all."""


class InconsistentConstraints(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class ChordDiagram:
    """A noncrossing perfect matching, plus a count of closed loops."""

    matching: tuple[int, ...]
    loops: int = 0

    def __post_init__(self):
        m = self.matching
        n = len(m)
        if n == 0 or n % 2:
            raise InvalidDiagram("need a positive even number of points")
        for a, b in enumerate(m):
            if not 0 <= b < n or b == a or m[b] != a:
                raise InvalidDiagram(f"not a perfect matching: {m}")
        for a, b in self.chords():
            for c, d in self.chords():
                if a < c < b < d:
                    raise InvalidDiagram(f"chords {a}-{b} and {c}-{d} cross")
        if self.loops < 0:
            raise InvalidDiagram("negative loop count")

    @classmethod
    def from_chords(cls, pairs, loops: int = 0) -> "ChordDiagram":
        pairs = list(pairs)
        m = [-1] * (2 * len(pairs))
        for a, b in pairs:
            if not (0 <= a < len(m) and 0 <= b < len(m)) or m[a] != -1 or m[b] != -1:
                raise InvalidDiagram(f"bad chord list {pairs}")
            m[a], m[b] = b, a
        return cls(tuple(m), loops)

    @classmethod
    def parse(cls, text: str) -> "ChordDiagram":
        """Read ``"k=4; 0-7 1-2 3-6 4-5; loops=0"`` (loops part optional)."""
        fields = [f.strip() for f in text.strip().split(";")]
        m = re.fullmatch(r"k\s*=\s*(\d+)", fields[0]) if fields else None
        if not m or len(fields) not in (2, 3):
            raise DiagramParseError(f"cannot parse diagram {text!r}")
        k = int(m.group(1))
        pairs = []
        for tok in fields[1].split():
            mm = re.fullmatch(r"(\d+)-(\d+)", tok)
            if not mm:
                raise DiagramParseError(f"bad chord {tok!r}")
            pairs.append((int(mm.group(1)), int(mm.group(2))))
        loops = 0
        if len(fields) == 3:
            ml = re.fullmatch(r"loops\s*=\s*(\d+)", fields[2])
            if not ml:
                raise DiagramParseError(f"bad loops field {fields[2]!r}")
            loops = int(ml.group(1))
        if len(pairs) != k:
            raise DiagramParseError(f"expected {k} chords, got {len(pairs)}")
        return cls.from_chords(pairs, loops)

    def __str__(self) -> str:
        body = " ".join(f"{a}-{b}" for a, b in self.chords())
        return f"k={self.num_chords}; {body}; loops={self.loops}"

    @property
    def num_points(self) -> int:
        return len(self.matching)

    @property
    def num_chords(self) -> int:
        return len(self.matching) // 2

    def chords(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in enumerate(self.matching) if a < b]

    def without_loops(self) -> "ChordDiagram":
        return ChordDiagram(self.matching)


VACUUM = ChordDiagram((1, 0))


def segment_sign(j: int) -> int:
    return 1 if j % 2 == 0 else -1


def regions(d: ChordDiagram) -> list[list[int]]:
    """Complementary regions, each given as its list of boundary segments."""
    n = d.num_points
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        reg, j = [], s
        while not seen[j]:
            seen[j] = True
            reg.append(j)
            j = d.matching[(j + 1) % n]
        out.append(reg)
    return out


def euler_class(d: ChordDiagram) -> int:
    if d.loops:
        raise InvalidDiagram("euler_class is defined here for loop-free diagrams")
    total = 0
    for reg in regions(d):
        signs = {segment_sign(j) for j in reg}
        if len(signs) != 1:
            raise InvalidDiagram("inconsistent region colouring")
        total += signs.pop()
    return total


@lru_cache(maxsize=None)
def _matchings(lo: int, hi: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    if lo > hi:
        return ((),)
    out = []
    for p in range(lo + 1, hi + 1, 2):
        for inner in _matchings(lo + 1, p - 1):
            for outer in _matchings(p + 1, hi):
                out.append(((lo, p),) + inner + outer)
    return tuple(out)


def enumerate_diagrams(k: int) -> list[ChordDiagram]:
    if k < 1:
        raise ValueError("need at least one chord")
    return sorted(ChordDiagram.from_chords(ch) for ch in _matchings(0, 2 * k - 1))


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def juxtapose(d1: ChordDiagram, d2: ChordDiagram) -> ChordDiagram:
    """Glue ``d2`` at its point 0 onto ``d1`` at point ``1 + n1 + e1``.

    ``n1 = chords(d1) - 1`` and ``e1`` is the Euler class of ``d1``; the
    points ``1..`` of ``d2`` take the place of the glued point.  On basis
    diagrams this is word concatenation.
    """
    if d1.loops or d2.loops:
        raise InvalidDiagram("juxtapose needs loop-free diagrams")
    n1, n2 = d1.num_points, d2.num_points
    g = (n1 // 2 + euler_class(d1)) % n1
    shift = n2 - 2

    def p1(a):
        return a if a < g else a + shift

    def p2(b):
        return g + b - 1

    pairs = []
    for a, b in d1.chords():
        if g not in (a, b):
            pairs.append((p1(a), p1(b)))
    for a, b in d2.chords():
        if 0 not in (a, b):
            pairs.append((p2(a), p2(b)))
    pairs.append((p1(d1.matching[g]), p2(d2.matching[0])))
    return ChordDiagram.from_chords(pairs)


LETTER_DIAGRAMS = {
    "x": ChordDiagram.from_chords([(0, 3), (1, 2)]),
    "y": ChordDiagram.from_chords([(0, 1), (2, 3)]),
}


@lru_cache(maxsize=None)
def basis_diagram(w: Word) -> ChordDiagram:
    d = VACUUM
    for letter in w:
        d = juxtapose(d, LETTER_DIAGRAMS[letter])
    return d


def basis_diagram_by_prepending(w: Word) -> ChordDiagram:
    """Independent recursive construction used as a check on ``basis_diagram``.

    A leading ``y`` adds the outermost chord 0-1 in front of the rest; a
    leading ``x`` adds the chord (last)-0 and moves the rest's basepoint to
    the point just before it.
    """
    if not w:
        return VACUUM
    rest = basis_diagram_by_prepending(w[1:])
    n = rest.num_points + 2
    if w[0] == "y":
        pairs = [(a + 2, b + 2) for a, b in rest.chords()] + [(0, 1)]
    else:
        m = lambda j: n - 2 if j == 0 else j
        pairs = [(m(a), m(b)) for a, b in rest.chords()] + [(0, n - 1)]
    return ChordDiagram.from_chords(pairs)


@dataclass(frozen=True)
class BypassTriple:
    """Three diagrams related cyclically by bypass surgery.

    ``arc_witness`` lists the three chords of ``diagrams[0]`` cut by the
    attaching arc; the six endpoints are shared by all three members.
    """

    diagrams: tuple[ChordDiagram, ChordDiagram, ChordDiagram]
    arc_witness: tuple[tuple[int, int], ...]

    def key(self) -> frozenset:
        return frozenset(self.diagrams)


def _rotations(points: list[int]) -> list[list[tuple[int, int]]]:
    p = sorted(points)
    return [[(p[(r + a) % 6], p[(r + b) % 6]) for a, b in ((0, 5), (1, 4), (2, 3))] for r in range(3)]


def _chord_sides(d: ChordDiagram) -> dict[tuple[int, int], tuple[int, int]]:
    reg_of = {}
    for idx, reg in enumerate(regions(d)):
        for s in reg:
            reg_of[s] = idx
    return {(a, b): (reg_of[a], reg_of[b]) for a, b in d.chords()}


def bypass_triples(d: ChordDiagram) -> list[BypassTriple]:
    """Nontrivial bypass triples through ``d``.

    An attaching arc runs through three distinct chords c1, c2, c3 where c1
    and c3 border the two regions on either side of c2.  Arcs meeting one
    chord twice are not generated.
    """
    if d.loops:
        return []
    sides = _chord_sides(d)
    by_region: dict[int, list[tuple[int, int]]] = {}
    for c, (r0, r1) in sides.items():
        by_region.setdefault(r0, []).append(c)
        by_region.setdefault(r1, []).append(c)
    rest_cache = {}
    found: dict[frozenset, BypassTriple] = {}
    for c2, (ra, rb) in sides.items():
        for c1 in by_region[ra]:
            for c3 in by_region[rb]:
                if len({c1, c2, c3}) < 3:
                    continue
                cut = tuple(sorted((c1, c2, c3)))
                if cut in rest_cache:
                    continue
                rest_cache[cut] = True
                pts = [p for c in cut for p in c]
                others = [c for c in d.chords() if c not in cut]
                members = [ChordDiagram.from_chords(others + r) for r in _rotations(pts)]
                start = members.index(d)
                ordered = tuple(members[(start + t) % 3] for t in range(3))
                if len(set(ordered)) < 3:
                    continue
                trip = BypassTriple(ordered, cut)
                found.setdefault(trip.key(), trip)
    return list(found.values())


def bypass_surgery(d: ChordDiagram, arc_witness) -> ChordDiagram:
    """One upward surgery along the arc cutting the given three chords."""
    cut = tuple(sorted(tuple(sorted(c)) for c in arc_witness))
    pts = [p for c in cut for p in c]
    others = [c for c in d.chords() if c not in cut]
    if len(others) != d.num_chords - 3:
        raise InvalidDiagram("witness chords are not chords of the diagram")
    members = [ChordDiagram.from_chords(others + r) for r in _rotations(pts)]
    return members[(members.index(d) + 1) % 3]


@dataclass
class ElementTable:
    """Suture elements of every loop-free diagram with ``size`` chords."""

    size: int
    entries: dict[ChordDiagram, FockElement] = field(default_factory=dict)

    def element(self, d: ChordDiagram) -> LaxElement:
        if d.loops:
            return LaxElement(FockElement())
        return LaxElement(self.entries[d])

    def pair(self, d: ChordDiagram) -> tuple[Word, Word]:
        return support_interval(self.entries[d])

    def by_pair(self) -> dict[tuple[Word, Word], ChordDiagram]:
        return {self.pair(d): d for d in self.entries}

    def validate(self) -> list[str]:
        """Problems with the table's invariants (empty when all hold)."""
        k = self.size
        problems = []
        diagrams = enumerate_diagrams(k)
        if set(self.entries) != set(diagrams):
            problems.append("diagram set differs from the enumeration")
            return problems
        basis = {basis_diagram(w): w for w in _all_words(k - 1)}
        pairs = []
        for d, el in self.entries.items():
            if el.is_zero() or any(abs(c) != 1 for c in el.values()):
                problems.append(f"{d}: coefficients not all ±1")
                continue
            if any(len(w) != k - 1 for w in el):
                problems.append(f"{d}: wrong word length")
            if d in basis:
                if LaxElement(el) != LaxElement(FockElement.word(basis[d])):
                    problems.append(f"{d}: basis diagram not mapped to its word")
            elif el.coefficient_sum() != 0:
                problems.append(f"{d}: non-basis coefficient sum is not 0")
            if any(charge(w) != euler_class(d) for w in el):
                problems.append(f"{d}: charge differs from Euler class")
            si = support_interval(el)
            if si is None:
                problems.append(f"{d}: no support interval")
            pairs.append(si)
        if sorted(p for p in pairs if p) != sorted(comparable_pairs(k - 1)):
            problems.append("support intervals are not a bijection onto comparable pairs")
        for d in diagrams:
            for t in bypass_triples(d):
                a, b, c = (self.entries[m] for m in t.diagrams)
                if not _sums_to_zero(a, b, c):
                    problems.append(f"triple through {d} has no vanishing signed sum")
        return problems


def _all_words(n: int) -> list[Word]:
    from .fock import words

    return words(n)


def _sums_to_zero(a: FockElement, b: FockElement, c: FockElement) -> bool:
    return any((a + b.scale(s) + c.scale(t)).is_zero() for s in (1, -1) for t in (1, -1))


def _admissible(el: FockElement, used_pairs: set, is_basis: bool) -> bool:
    if el.is_zero() or any(abs(c) != 1 for c in el.values()):
        return False
    if not is_basis and el.coefficient_sum() != 0:
        return False
    si = support_interval(el)
    return si is not None and si not in used_pairs


@lru_cache(maxsize=None)
def solve_table(k: int) -> ElementTable:
    """Determine every k-chord element from basis seeds and bypass triples."""
    diagrams = enumerate_diagrams(k)
    index = {d: i for i, d in enumerate(diagrams)}
    triples = {}
    for d in diagrams:
        for t in bypass_triples(d):
            triples.setdefault(t.key(), tuple(index[m] for m in t.diagrams))
    triples = list(triples.values())
    touching: dict[int, list[tuple[int, int, int]]] = {i: [] for i in range(len(diagrams))}
    for t in triples:
        for i in t:
            touching[i].append(t)
    known: dict[int, FockElement] = {}
    for w in _all_words(k - 1):
        known[index[basis_diagram(w)]] = FockElement.word(w)
    basis_idx = set(known)

    def candidates(state, i):
        used = {support_interval(e) for e in state.values()}
        opts = None
        for t in touching[i]:
            others = [j for j in t if j != i]
            if all(j in state for j in others):
                a, b = (state[j] for j in others)
                here = {LaxElement(a + b), LaxElement(a - b)}
                here = {c for c in here if _admissible(c.value, used, i in basis_idx)}
                opts = here if opts is None else opts & here
        return opts

    def consistent(state):
        return all(_sums_to_zero(*(state[j] for j in t)) for t in triples if all(j in state for j in t))

    def propagate(state):
        changed = True
        while changed:
            changed = False
            for i in range(len(diagrams)):
                if i in state:
                    continue
                opts = candidates(state, i)
                if opts is None:
                    continue
                if not opts:
                    return None
                if len(opts) == 1:
                    state[i] = next(iter(opts)).value
                    changed = True
        return state if consistent(state) else None

    def search(state):
        state = propagate(state)
        if state is None:
            return None
        if len(state) == len(diagrams):
            return state
        pending = [(len(o), i, o) for i in range(len(diagrams)) if i not in state and (o := candidates(state, i))]
        if not pending:
            return None
        _, i, opts = min(pending, key=lambda p: (p[0], p[1]))
        for opt in sorted(opts, key=str):
            trial = dict(state)
            trial[i] = opt.value
            got = search(trial)
            if got is not None:
                return got
        return None

    solved = search(dict(known))
    if solved is None:
        raise InconsistentConstraints(f"inconsistent constraints at k={k}")
    table = ElementTable(k, {diagrams[i]: solved[i] for i in range(len(diagrams))})
    return table


def suture_element(d: ChordDiagram) -> LaxElement:
    if d.loops:
        return LaxElement(FockElement())
    return solve_table(d.num_chords).element(d)


def diagram_pair(d: ChordDiagram) -> tuple[Word, Word]:
    return solve_table(d.num_chords).pair(d)
