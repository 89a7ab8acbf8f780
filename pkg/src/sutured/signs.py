"""Resolving gluing maps whose columns are only known up to sign.

A gluing map sends each basis word of a disc's module to a vector in the
coordinates of the glued surface.  Observations say what the image of a
diagram's element must be: zero, plus-or-minus a known vector, or (for
diagrams whose glued sutures coincide) equal up to sign to each other.
Columns are resolved by propagating candidate sets and then searching over
the remaining sign choices, one Euler-class summand at a time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .fock import FockElement, LaxElement, Word, charge

Vector = tuple[int, ...]


class DerivationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class Target:
    """What an observed image must be.

    ``kind`` is ``"zero"``, ``"known"`` (equal to ``±value``) or ``"free"``
    (equal up to sign to every other observation sharing ``key``).
    ``nonzero`` asks for a primitive nonzero image; ``xi`` fixes the
    magnitude of a linear functional on the image.
    """

    kind: str
    value: Vector | None = None
    key: Hashable = None
    nonzero: bool = False
    xi: int | None = None


@dataclass(frozen=True)
class Observation:
    element: FockElement
    target: Target
    label: str = ""


@dataclass
class SignedGluingMap:
    """Integer matrix from words of the domain to codomain coordinates."""

    name: str
    domain: tuple[Word, ...]
    codomain: tuple[Word, ...]
    columns: dict[Word, Vector] = field(default_factory=dict)
    resolved: dict[Word, bool] = field(default_factory=dict)
    constraints: list[str] = field(default_factory=list)

    def column(self, w: Word) -> Vector:
        return self.columns[w]

    def apply(self, el: FockElement) -> Vector:
        out = [0] * len(self.codomain)
        for w, c in el.items():
            for k, v in enumerate(self.columns[w]):
                out[k] += c * v
        return tuple(out)

    def apply_word(self, w: Word) -> Vector:
        return self.columns[w]

    def as_element(self, vec: Vector) -> FockElement:
        return FockElement(zip(self.codomain, vec))

    def image(self, el: FockElement) -> FockElement:
        return self.as_element(self.apply(el))

    def compose_after(self, other: "SignedGluingMap", name: str) -> "SignedGluingMap":
        """``self ∘ other`` (apply ``other`` first)."""
        if tuple(other.codomain) != tuple(self.domain):
            raise ValueError("codomain/domain mismatch")
        cols = {w: self.apply(other.as_element(other.columns[w])) for w in other.domain}
        return SignedGluingMap(name, other.domain, self.codomain, cols, {w: True for w in cols})


def _add(u: Vector, v: Vector, k: int = 1) -> Vector:
    return tuple(a + k * b for a, b in zip(u, v))


def _neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def _primitive(v: Vector) -> bool:
    return math.gcd(*v) == 1


def _value(el: FockElement, assign: dict[Word, Vector], dim: int) -> Vector:
    out = (0,) * dim
    for w, c in el.items():
        out = _add(out, assign[w], c)
    return out


def _target_options(t: Target, dim: int) -> list[Vector] | None:
    if t.kind == "zero":
        return [(0,) * dim]
    if t.kind == "known":
        return sorted({t.value, _neg(t.value)})
    return None


def resolve_map(
    name: str,
    domain: Sequence[Word],
    codomain: Sequence[Word],
    observations: Sequence[Observation],
    anchors: dict[Word, Vector] | None = None,
    xi: Vector | None = None,
    max_solutions: int = 2,
    charges: Sequence[int] | None = None,
) -> SignedGluingMap:
    """Find the unique column assignment consistent with the observations.

    Anchors pin chosen columns exactly, fixing the sign freedom of their
    summand; a summand with no anchor has its first nonzero column made
    lexicographically positive.  ``charges`` restricts the work to some
    Euler-class summands of the domain.
    """
    anchors = dict(anchors or {})
    dim = len(codomain)
    gmap = SignedGluingMap(name, tuple(domain), tuple(codomain))
    by_charge: dict[int, list[Word]] = {}
    for w in domain:
        by_charge.setdefault(charge(w), []).append(w)
    for e, ws in sorted(by_charge.items()):
        if charges is not None and e not in charges:
            continue
        obs = [o for o in observations if o.element and charge(next(iter(o.element))) == e]
        cols = _solve_summand(ws, obs, {w: v for w, v in anchors.items() if w in ws}, dim, xi, max_solutions, name, e)
        gmap.columns.update(cols)
        gmap.resolved.update({w: True for w in cols})
        gmap.constraints.extend(f"{o.label or o.element}: {o.target.kind}" for o in obs)
    return gmap


def _solve_summand(ws, obs, anchors, dim, xi, max_solutions, name, e):
    cands: dict[Word, list[Vector] | None] = {w: None for w in ws}
    for w, v in anchors.items():
        cands[w] = [v]
    for o in obs:
        if len(o.element) == 1:
            (w, c), = o.element.items()
            opts = _target_options(o.target, dim)
            if opts is not None and cands[w] is None:
                cands[w] = sorted({tuple(x // c for x in v) for v in opts if all(x % c == 0 for x in v)})
    groups: dict[Hashable, list[Observation]] = {}
    for o in obs:
        if o.target.kind == "free":
            groups.setdefault(o.target.key, []).append(o)

    def fixed_targets(o):
        opts = _target_options(o.target, dim)
        if opts is not None:
            return opts
        vals = set()
        for other in groups[o.target.key]:
            if other is o or any(cands[u] is None for u in other.element):
                continue
            if math.prod(len(cands[u]) for u in other.element) > 4096:
                continue
            for combo in itertools.product(*(cands[u] for u in other.element)):
                v = _value(other.element, dict(zip(other.element, combo)), dim)
                vals.update({v, _neg(v)})
        return sorted(vals) if vals else None

    changed = True
    while changed:
        changed = False
        for o in obs:
            missing = [u for u in o.element if cands[u] is None]
            if len(missing) != 1:
                continue
            w = missing[0]
            others = [u for u in o.element if u != w]
            if math.prod(len(cands[u]) for u in others) > 4096:
                continue
            targets = fixed_targets(o)
            if targets is None:
                continue
            c = o.element[w]
            found = set()
            for combo in itertools.product(*(cands[u] for u in others)):
                rest = _value(FockElement({u: o.element[u] for u in others}), dict(zip(others, combo)), dim)
                for t in targets:
                    diff = _add(t, rest, -1)
                    if all(x % c == 0 for x in diff):
                        found.add(tuple(x // c for x in diff))
            cands[w] = sorted(found)
            changed = True
    undetermined = [w for w in ws if cands[w] is None]
    if undetermined:
        raise DerivationFailed(f"{name}: columns {undetermined} (e={e}) have no candidate values")

    order = _variable_order(ws, obs)
    if not anchors:
        first = next((w for w in order if any(any(v) for v in cands[w])), None)
        if first is not None:
            cands[first] = [v for v in cands[first] if not any(v) or v > _neg(v)]
    checks_at: dict[int, list[Observation]] = {}
    pos = {w: k for k, w in enumerate(order)}
    for o in obs:
        checks_at.setdefault(max(pos[u] for u in o.element), []).append(o)
    group_vals: dict[Hashable, list] = {}
    solutions = []
    assign: dict[Word, Vector] = {}

    def ok(o) -> bool:
        v = _value(o.element, assign, dim)
        t = o.target
        if t.kind == "zero" and any(v):
            return False
        if t.kind == "known" and v not in (t.value, _neg(t.value)):
            return False
        if t.nonzero and not (any(v) and _primitive(v)):
            return False
        if t.xi is not None and xi is not None:
            if abs(sum(a * b for a, b in zip(xi, v))) != t.xi:
                return False
        if t.kind == "free":
            seen = group_vals.setdefault(t.key, [])
            if seen and LaxElement(seen[0][1]) != LaxElement(v):
                return False
            seen.append((o, v))
        return True

    def undo(o):
        if o.target.kind == "free":
            group_vals[o.target.key] = [p for p in group_vals[o.target.key] if p[0] is not o]

    def search(k):
        if len(solutions) >= max_solutions:
            return
        if k == len(order):
            solutions.append(dict(assign))
            return
        w = order[k]
        for v in cands[w]:
            assign[w] = v
            done = []
            good = True
            for o in checks_at.get(k, []):
                if ok(o):
                    done.append(o)
                else:
                    good = False
                    break
            if good:
                search(k + 1)
            for o in done:
                undo(o)
            del assign[w]

    search(0)
    if not solutions:
        raise DerivationFailed(f"{name}: no consistent sign assignment for e={e}")
    if len(solutions) > 1:
        diff = [w for w in ws if solutions[0][w] != solutions[1][w]]
        raise DerivationFailed(f"{name}: e={e} underdetermined, columns {diff} admit several values")
    return solutions[0]


def _variable_order(ws, obs) -> list[Word]:
    """Greedy order that completes many observations early."""
    remaining = list(ws)
    order: list[Word] = []
    placed: set[Word] = set()
    while remaining:
        def score(w):
            done = sum(1 for o in obs if w in o.element and all(u in placed or u == w for u in o.element))
            near = sum(1 for o in obs if w in o.element)
            return (done, near)

        best = max(remaining, key=score)
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order
