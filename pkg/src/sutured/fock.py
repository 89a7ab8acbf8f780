"""Words in two non-commuting letters and their integer combinations.

The empty word prints as ``1``.  Letters are ``x`` (charge -1) and ``y``
(charge +1).  Iteration order for words of a fixed length is lexicographic
with ``x < y``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Word = str
LETTERS = ("x", "y")

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*([xy]+|1)")


def check_word(w: Word) -> Word:
    if any(c not in "xy" for c in w):
        raise ValueError(f"not a word over x, y: {w!r}")
    return w


def charge(w: Word) -> int:
    return w.count("y") - w.count("x")


def multidegree(w: Word) -> tuple[int, int]:
    return w.count("x"), w.count("y")


def words(n: int, e: int | None = None) -> list[Word]:
    """All words of length ``n`` (optionally of charge ``e``) in lex order."""
    out = ["".join(p) for p in itertools.product(LETTERS, repeat=n)]
    if e is not None:
        out = [w for w in out if charge(w) == e]
    return out


def words_of_degree(nx: int, ny: int) -> list[Word]:
    return [w for w in words(nx + ny) if w.count("x") == nx]


def leq(w0: Word, w1: Word) -> bool:
    """True iff ``w1`` is obtained from ``w0`` by moving x's to the right."""
    if len(w0) != len(w1) or w0.count("y") != w1.count("y"):
        return False
    c0 = c1 = 0
    for a, b in zip(w0, w1):
        c0 += a == "y"
        c1 += b == "y"
        if c1 < c0:
            return False
    return True


def leq_closure(w0: Word) -> set[Word]:
    """Brute-force set of words reachable from ``w0`` by xy -> yx swaps."""
    seen = {w0}
    stack = [w0]
    while stack:
        w = stack.pop()
        for k in range(len(w) - 1):
            if w[k : k + 2] == "xy":
                v = w[:k] + "yx" + w[k + 2 :]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return seen


class FockElement(Mapping[Word, int]):
    """Finite integer combination of words; immutable, no zero coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        acc: dict[Word, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            check_word(w)
            acc[w] = acc.get(w, 0) + int(c)
        self._terms = {w: acc[w] for w in sorted(acc, key=_word_key) if acc[w]}
        self._hash = None

    @classmethod
    def word(cls, w: Word, coeff: int = 1) -> "FockElement":
        return cls({w: coeff})

    @classmethod
    def parse(cls, text: str) -> "FockElement":
        s = text.replace(" ", "").replace("−", "-")
        if s in ("", "0"):
            return cls()
        pos, terms = 0, []
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or (pos > 0 and not m.group(1)):
                raise ValueError(f"cannot parse element {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            w = "" if m.group(3) == "1" else m.group(3)
            terms.append((w, sign * coeff))
            pos = m.end()
        return cls(terms)

    def __getitem__(self, w: Word) -> int:
        return self._terms.get(w, 0)

    def __iter__(self) -> Iterator[Word]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FockElement):
            return self._terms == other._terms
        return NotImplemented

    def __add__(self, other: "FockElement") -> "FockElement":
        return FockElement(itertools.chain(self._terms.items(), other._terms.items()))

    def __neg__(self) -> "FockElement":
        return FockElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "FockElement") -> "FockElement":
        return self + (-other)

    def scale(self, k: int) -> "FockElement":
        return FockElement({w: k * c for w, c in self._terms.items()})

    def __mul__(self, other: "FockElement") -> "FockElement":
        return multiply(self, other)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    def content(self) -> int:
        return math.gcd(*self._terms.values()) if self._terms else 0

    def gradings(self) -> set[tuple[int, int]]:
        return {multidegree(w) for w in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.gradings()) <= 1

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, (w, c) in enumerate(self._terms.items()):
            sign = "-" if c < 0 else ("+" if k else "")
            mag = abs(c)
            body = w or "1"
            parts.append(f"{sign}{'' if mag == 1 else mag}{body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"FockElement({str(self)!r})"


def _word_key(w: Word) -> tuple[int, str]:
    return len(w), w


def multiply(a: FockElement, b: FockElement) -> FockElement:
    return FockElement((u + v, c * d) for u, c in a.items() for v, d in b.items())


def pairing(u: FockElement, v: FockElement) -> int:
    return sum(c * d for a, c in u.items() for b, d in v.items() if leq(a, b))


@lru_cache(maxsize=None)
def gram_matrix(nx: int, ny: int) -> tuple[tuple[int, ...], ...]:
    ws = words_of_degree(nx, ny)
    return tuple(tuple(int(leq(a, b)) for b in ws) for a in ws)


def duality_H(u: FockElement) -> FockElement:
    """The element ``Hu`` with ``<u|v> = <v|Hu>`` for every ``v``.

    Per multidegree block, ``M h = M^T u`` with ``M`` upper unitriangular in
    lex order, so back substitution stays integral.
    """
    out = FockElement()
    for nx, ny in sorted(u.gradings()):
        ws = words_of_degree(nx, ny)
        m = gram_matrix(nx, ny)
        vec = [u[w] for w in ws]
        rhs = [sum(m[r][c] * vec[r] for r in range(len(ws))) for c in range(len(ws))]
        h = [0] * len(ws)
        for r in reversed(range(len(ws))):
            h[r] = rhs[r] - sum(m[r][c] * h[c] for c in range(r + 1, len(ws)))
        out = out + FockElement(zip(ws, h))
    return out


def support_interval(a: FockElement) -> tuple[Word, Word] | None:
    """Unique minimum and maximum of the support under ``leq``, if both exist."""
    if a.is_zero():
        raise ValueError("support_interval of zero")
    sup = list(a)
    lows = [w for w in sup if all(leq(w, v) for v in sup)]
    highs = [w for w in sup if all(leq(v, w) for v in sup)]
    if len(lows) == 1 and len(highs) == 1:
        return lows[0], highs[0]
    return None


def comparable_pairs(n: int) -> list[tuple[Word, Word]]:
    ws = words(n)
    return [(a, b) for a in ws for b in ws if leq(a, b)]


@dataclass(frozen=True)
class LaxElement:
    """An element identified with its negation.

    ``value`` is either a :class:`FockElement` or a tuple of integer
    coordinates.  The stored representative has a nonnegative leading entry.
    """

    value: FockElement | tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "value", _canonical_sign(self.value))

    @property
    def is_zero(self) -> bool:
        return not any(_entries(self.value))

    def content(self) -> int:
        return math.gcd(*_entries(self.value)) if not self.is_zero else 0

    def is_primitive(self) -> bool:
        return self.content() == 1

    def matches(self, other) -> bool:
        if isinstance(other, LaxElement):
            return self == other
        return self == LaxElement(other)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if isinstance(self.value, FockElement):
            return "±" + ("(" + str(self.value) + ")" if len(self.value) > 1 else str(self.value))
        return "±(" + ",".join(map(str, self.value)) + ")"


def _entries(v) -> list[int]:
    return list(v.values()) if isinstance(v, FockElement) else list(v)


def _canonical_sign(v):
    ent = _entries(v)
    lead = next((c for c in ent if c), 0)
    if lead >= 0:
        return v if isinstance(v, FockElement) else tuple(v)
    return -v if isinstance(v, FockElement) else tuple(-c for c in v)
