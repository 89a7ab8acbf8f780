"""Curve tracing on discs whose sides are glued in pairs.

A :class:`SidePairing` identifies side ``a`` with side ``b`` point by point.
A curve reaching a point of ``a`` continues from the matching point of ``b``
and records the generator with exponent +1; the reverse records -1.  The
result is a list of arcs between surviving boundary points, each carrying a
freely reduced word, and closed loops carrying cyclically reduced words.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chord import ChordDiagram, InvalidDiagram, segment_sign

Letter = tuple[str, int]


@dataclass(frozen=True)
class SidePairing:
    generator: str
    a: tuple[int, ...]
    b: tuple[int, ...]


@dataclass(frozen=True)
class TracedArc:
    start: str
    end: str
    word: tuple[Letter, ...]


@dataclass(frozen=True)
class TracedLoop:
    word: tuple[Letter, ...]


def reduce_word(word) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, s in word:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def inverse_word(word) -> tuple[Letter, ...]:
    return tuple((g, -s) for g, s in reversed(word))


def cyclic_reduce(word) -> tuple[Letter, ...]:
    w = list(reduce_word(word))
    while len(w) >= 2 and w[0] == (w[-1][0], -w[-1][1]):
        w = w[1:-1]
    return tuple(w)


def canonical_cyclic(word) -> tuple[Letter, ...]:
    """Representative of a cyclic word up to rotation and inversion."""
    w = cyclic_reduce(word)
    if not w:
        return ()
    cands = []
    for v in (w, inverse_word(w)):
        cands.extend(v[k:] + v[:k] for k in range(len(v)))
    return min(cands)


def exponent_sum(word, generator: str) -> int:
    return sum(s for g, s in word if g == generator)


def trace(
    d: ChordDiagram,
    pairings: list[SidePairing],
    boundary: dict[int, str],
) -> tuple[list[TracedArc], list[TracedLoop]]:
    """Follow the chords of ``d`` through the side identifications."""
    n = d.num_points
    jump: dict[int, tuple[int, Letter]] = {}
    for sp in pairings:
        if len(sp.a) != len(sp.b):
            raise InvalidDiagram("paired sides have different point counts")
        for p, q in zip(sp.a, sp.b):
            jump[p] = (q, (sp.generator, 1))
            jump[q] = (p, (sp.generator, -1))
    labels = set(jump) | set(boundary)
    if labels != set(range(n)) or set(jump) & set(boundary):
        raise InvalidDiagram(f"layout does not cover the {n} points exactly")
    seen: set[int] = set()
    arcs = []
    order = sorted(boundary, key=lambda p: boundary[p])
    for p in order:
        if p in seen:
            continue
        word, cur = [], p
        seen.add(p)
        while True:
            q = d.matching[cur]
            seen.add(q)
            if q in boundary:
                break
            nxt, letter = jump[q]
            word.append(letter)
            seen.add(nxt)
            cur = nxt
        arcs.append(TracedArc(boundary[p], boundary[q], reduce_word(word)))
    loops = []
    for p in range(n):
        if p in seen:
            continue
        word, cur = [], p
        while True:
            seen.add(cur)
            q = d.matching[cur]
            seen.add(q)
            nxt, letter = jump[q]
            word.append(letter)
            cur = nxt
            if cur == p:
                break
        loops.append(TracedLoop(cyclic_reduce(word)))
    return arcs, loops


def glued_euler_shift(n: int, pairings: list[SidePairing]) -> int:
    """Change in Euler class caused by the side identifications.

    Each glued side with ``j`` points consists of ``j+1`` pieces of boundary
    segments; identifying a piece joins two regions along an interval and
    lowers the Euler characteristic of that region by one.
    """
    shift = 0
    for sp in pairings:
        pts = sorted(sp.a)
        if not pts:
            raise ValueError("glued sides need at least one marked point")
        pieces = [(pts[0] - 1) % n] + pts
        shift -= sum(segment_sign(s) for s in pieces)
    return shift
