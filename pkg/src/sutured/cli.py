"""Command-line front end.

Exit codes: 0 success, 1 a claim failed, 2 unparseable input, 3 an
invariant failed, 4 cache version mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import annulus as ann
from . import torus as tor
from .chord import (
    ChordDiagram,
    DiagramParseError,
    ElementTable,
    InvalidDiagram,
    catalan,
    enumerate_diagrams,
    solve_table,
    suture_element,
)
from .fock import FockElement, LaxElement, comparable_pairs, multiply, words

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_INVARIANT, EXIT_VERSION = 0, 1, 2, 3, 4
CACHE_FORMAT = "sutured-element-tables"
CACHE_VERSION = 1
MAX_CHORDS = 7


@dataclass(frozen=True)
class Claim:
    id: str
    scope: str
    check: Callable[[int], tuple[bool, str]]


@dataclass
class ClaimResult:
    id: str
    status: str
    witness: str


@dataclass
class VerificationReport:
    results: list[ClaimResult]

    @property
    def failed(self) -> int:
        return sum(r.status != "verified" for r in self.results)

    def to_json(self) -> dict:
        return {
            "claims": [{"id": r.id, "status": r.status, "witness": r.witness} for r in self.results],
            "summary": {"verified": len(self.results) - self.failed, "failed": self.failed},
        }

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"{r.id}: {r.status}")
            if r.witness:
                lines.extend("    " + w for w in r.witness.splitlines())
        lines.append(f"{len(self.results) - self.failed} verified, {self.failed} failed")
        return "\n".join(lines)


# disc ---------------------------------------------------------------------

def _catalan_counts(k: int):
    counts = [len(enumerate_diagrams(n)) for n in range(1, k + 1)]
    return counts == [catalan(n) for n in range(1, k + 1)], f"counts {counts}"


def _element_tables(k: int):
    problems = [f"k={n}: {p}" for n in range(1, k + 1) for p in solve_table(n).validate()]
    return not problems, "\n".join(problems[:5]) or f"tables k=1..{k} valid"


def _pair_bijection(k: int):
    counts = []
    for n in range(1, k + 1):
        t = solve_table(n)
        pairs = {t.pair(d) for d in t.entries}
        if pairs != set(comparable_pairs(n - 1)):
            return False, f"k={n}: support intervals differ from comparable pairs"
        counts.append(len(pairs))
    return True, f"pairs {counts}"


def _menagerie(_k: int):
    d = solve_table(5).by_pair()[("xyxy", "yxyx")]
    square = FockElement.parse("xy-yx")
    want = LaxElement(multiply(square, square))
    got = suture_element(d)
    return got == want, f"{d} -> {got}"


def _rank(vectors) -> int:
    from sympy import Matrix

    rows = [list(v) for v in vectors if any(v)]
    return Matrix(rows).rank() if rows else 0


def _disc_rank(k: int):
    out = []
    for n in range(1, k + 1):
        ws = words(n - 1)
        r = _rank([tuple(el[w] for w in ws) for el in solve_table(n).entries.values()])
        if r != 2 ** (n - 1):
            return False, f"k={n}: rank {r}"
        out.append(r)
    return True, f"ranks {out}"


def _disc_primitive(k: int):
    bad = [str(d) for n in range(1, k + 1) for d, el in solve_table(n).entries.items() if el.content() != 1]
    return not bad, ", ".join(bad[:3]) or "all elements primitive"


# annulus ------------------------------------------------------------------

def _lemma_lines(basepoint="left") -> list[str]:
    return ann.derive_lemmas(basepoint).identities


def _expect(lines: list[str], wanted: list[str]):
    missing = [w for w in wanted if w not in lines]
    return not missing, "missing: " + "; ".join(missing) if missing else "\n".join(wanted)


def _phi3_basis(_k: int):
    return _expect(_lemma_lines(), [
        "PHI[3](xxyy) = PHI[1](xy)",
        "PHI[3](xyyx) = PHI[1](yx)",
        "PHI[3](yxxy) = PHI[1](yx)",
        "PHI[3](yyxx) = PHI[1](yx)",
    ])


def _xi_values(_k: int):
    return _expect(_lemma_lines(), ["XI PHI[1](xy) = ±1", "XI PHI[1](yx) = 0", "XI PHI[3](xxyy-xyxy) = 0"])


def _phi3_xyxy(_k: int):
    return _expect(_lemma_lines(), ["PHI[3](xyxy) = PHI[1](xy+yx)"])


def _phi3_yxyx(_k: int):
    return _expect(_lemma_lines(), ["PHI[3](yxyx) = 0"])


def _upsilon(_k: int):
    return _expect(_lemma_lines(), [
        "UPSILON PHI[2](xyy) = ±PHI[1](yx)",
        "UPSILON PHI[2](yxy) = ±PHI[3](yxyx) = 0",
        "PHI[2](yxy) = 0",
    ])


def _alternate(_k: int):
    return _expect(_lemma_lines("right"), [
        "PHI[3](yyxx) = PHI[1](yx)",
        "PHI[3](xxyy) = PHI[1](xy)",
        "PHI[3](xyyx) = PHI[1](xy)",
        "PHI[3](yxxy) = PHI[1](xy)",
        "PHI[3](yxyx) = PHI[1](xy+yx)",
        "PHI[3](xyxy) = 0",
    ])


def _torsion(_k: int):
    res = ann.torsion_vanishing_check()
    bad = {k: v for k, v in res["torsion_values"].items() if any(v)}
    return not bad, f"{len(res['torsion_values'])} torsion classes, nonzero: {bad or 'none'}"


def _theta(_k: int):
    m = ann.theta_matrix()
    th = ann.derive_theta()
    ok = m == ((1, 0), (-1, 1)) and th.column("xx") == (1, 0, 0, 0) and th.column("yy") == (0, 0, 0, 1)
    return ok, f"matrix {[list(r) for r in m]}"


def _annulus_classification(_k: int):
    problems = ann.verify_annulus_classification(10)
    return not problems, "\n".join(problems[:5]) or "evaluate matches derived maps; SlopeArcs(n) -> ±(1,n) for |n| <= 10"


def _annulus_values():
    vals = [ann.evaluate(ann.normalize(ann.glue_rectangle(d, i)))
            for i, k in ((1, 3), (2, 4), (3, 5)) for d in enumerate_diagrams(k)]
    vals += [ann.evaluate(ann.AnnulusNormalForm("SlopeArcs", n)) for n in range(-10, 11)]
    return vals


def _annulus_rank(_k: int):
    r = _rank([v.value for v in _annulus_values()])
    return r == 4, f"rank {r}"


def _annulus_primitive(_k: int):
    bad = [str(v) for v in _annulus_values() if not v.is_zero and not v.is_primitive()]
    return not bad, ", ".join(bad[:3]) or "all nonzero values primitive"


# torus --------------------------------------------------------------------

def _orders(_k: int):
    bad = tor.verify_gluing_orders()
    return not bad, "\n".join(bad[:5]) or "LR-first and TB-first agree on every diagram of O11, O13, O31, O33"


def _coherence(_k: int):
    s = tor.solve_sign_scheme()
    bad = {ij: s.square(ij) for ij in tor.OCTAGONS if s.square(ij)}
    chase = tor.coherence_chase(s)
    return not bad, "\n".join(s.log + chase) if not bad else f"squares failing: {bad}"


def _boundary_parallel(_k: int):
    r = tor.derive_thm52()
    return r.ok, str(r)


def _torus_values():
    out = []
    for ij, bg in tor.OCTAGONS.items():
        for d in enumerate_diagrams(bg.num_points // 2):
            out.append((tor.glue_octagon(d, bg), tor.octagon_element(d, ij)))
    return out


def _isolating_torus(_k: int):
    iso = [(s, e) for s, e in _torus_values() if tor.is_isolating(s)]
    bad = [str(s) for s, e in iso if not e.is_zero]
    return not bad, f"{len(iso)} isolating octagon gluings, nonzero: {bad[:3] or 'none'}"


def _twists(_k: int):
    r = tor.verify_lemma55(10)
    return r.ok, f"{len(r.realized)} octagon triples, {r.transported} slopes with |p|,|q| <= 10"


def _slopes(_k: int):
    try:
        f = tor.farey_propagate(20)
    except tor.PropagationConflict as e:
        return False, str(e)
    wrong = [k for k, v in f.items() if k != v]
    glued = [(s, e) for s, e in _torus_values() if s.kind == "Slope"]
    off = [str(s) for s, e in glued if e != tor.element_T1(s)]
    base = tor.base_slopes()
    ok = not wrong and not off and len(f) == len(tor.primitive_vectors(20))
    return ok, f"|p|,|q| <= 20: {len(f)} slopes; base {sorted(base)}; {len(glued)} octagon slope classes agree"


def _superbases(_k: int):
    total, problems = 0, []
    for ij in tor.OCTAGONS:
        n, p = tor.verify_superbasis_triples(ij)
        total += n
        problems += p
    return not problems, "\n".join(problems[:5]) or f"{total} bypass triples of slope classes form lax superbases"


def _torus_rank(_k: int):
    r = _rank([e.value for _, e in _torus_values()])
    return r == 4, f"rank {r}"


def _torus_primitive(_k: int):
    vals = [e for _, e in _torus_values()] + [tor.element_T1(tor.slope_class(*v)) for v in tor.primitive_vectors(20)]
    bad = [str(v) for v in vals if not v.is_zero and not v.is_primitive()]
    return not bad, ", ".join(bad[:3]) or "all nonzero values primitive"


CLAIMS = (
    Claim("catalan-counts", "disc", _catalan_counts),
    Claim("element-tables", "disc", _element_tables),
    Claim("pair-bijection", "disc", _pair_bijection),
    Claim("menagerie-xyxy", "disc", _menagerie),
    Claim("disc-rank", "disc", _disc_rank),
    Claim("disc-primitivity", "disc", _disc_primitive),
    Claim("phi3-basis-identities", "annulus", _phi3_basis),
    Claim("xi-values", "annulus", _xi_values),
    Claim("phi3-xyxy", "annulus", _phi3_xyxy),
    Claim("phi3-yxyx-vanishes", "annulus", _phi3_yxyx),
    Claim("upsilon-phi2-yxy", "annulus", _upsilon),
    Claim("alternate-basepoint", "annulus", _alternate),
    Claim("torsion-vanishing", "annulus", _torsion),
    Claim("theta-matrix", "annulus", _theta),
    Claim("annulus-classification", "annulus", _annulus_classification),
    Claim("annulus-rank", "annulus", _annulus_rank),
    Claim("annulus-primitivity", "annulus", _annulus_primitive),
    Claim("gluing-orders", "torus", _orders),
    Claim("sign-coherence", "torus", _coherence),
    Claim("boundary-parallel-vanishing", "torus", _boundary_parallel),
    Claim("isolating-vanishing", "torus", _isolating_torus),
    Claim("boundary-twist-invariance", "torus", _twists),
    Claim("slope-classification", "torus", _slopes),
    Claim("superbasis-triples", "torus", _superbases),
    Claim("torus-rank", "torus", _torus_rank),
    Claim("torus-primitivity", "torus", _torus_primitive),
)


def run_claims(scope: str = "all", max_chords: int = 6) -> VerificationReport:
    results = []
    for c in CLAIMS:
        if scope not in ("all", c.scope):
            continue
        try:
            ok, witness = c.check(max_chords)
        except Exception as e:  # a crashed derivation is a failed claim
            ok, witness = False, f"{type(e).__name__}: {e}"
        results.append(ClaimResult(c.id, "verified" if ok else "failed", witness))
    return VerificationReport(results)


# cache --------------------------------------------------------------------

class CacheVersionError(RuntimeError):
    pass


def tables_to_json(max_chords: int) -> dict:
    return {
        "format": CACHE_FORMAT,
        "version": CACHE_VERSION,
        "tables": {
            str(k): [[str(d), str(el)] for d, el in sorted(solve_table(k).entries.items())]
            for k in range(1, max_chords + 1)
        },
    }


def tables_from_json(data: dict) -> dict[int, ElementTable]:
    """Rebuild and revalidate cached tables."""
    if data.get("format") != CACHE_FORMAT or data.get("version") != CACHE_VERSION:
        raise CacheVersionError(f"cache version {data.get('version')!r}, expected {CACHE_VERSION}")
    out = {}
    for key, rows in data["tables"].items():
        k = int(key)
        t = ElementTable(k, {ChordDiagram.parse(d): FockElement.parse(e) for d, e in rows})
        problems = t.validate()
        if problems:
            raise InvalidDiagram(f"cached table k={k}: {problems[0]}")
        out[k] = t
    return out


def cache_drift(tables: dict[int, ElementTable]) -> list[str]:
    drift = []
    for k, t in sorted(tables.items()):
        fresh = solve_table(k)
        for d, el in t.entries.items():
            if LaxElement(el) != fresh.element(d):
                drift.append(f"k={k} {d}: cached {el}, solved {fresh.entries[d]}")
    return drift


def _read_cache(path: str) -> dict[int, ElementTable]:
    return tables_from_json(json.loads(Path(path).read_text()))


# commands -----------------------------------------------------------------

def cmd_element(args) -> int:
    d = ChordDiagram.parse(args.diagram)
    print(suture_element(d))
    return EXIT_OK


def cmd_glue(args) -> int:
    d = ChordDiagram.parse(args.diagram)
    if args.torus:
        i, j = (int(x) for x in args.torus.split(","))
        bg = tor.octagon(i, j)
        curves = tor.glue_octagon_curves(d, bg, args.order)[1]
        print(curves)
        print(tor.classify(curves))
        if (i, j) in tor.OCTAGONS:
            print(tor.octagon_element(d, (i, j)))
    else:
        c = ann.glue_rectangle(d, args.annulus, args.basepoint)
        print(c)
        if (len(c.top_signs), len(c.bottom_signs)) == (2, 2):
            f = ann.normalize(c)
            print(f)
            print(ann.evaluate(f))
    return EXIT_OK


def cmd_verify(args) -> int:
    k = min(args.max_chords, MAX_CHORDS)
    report = run_claims(args.scope, k)
    if args.cache:
        tables = _read_cache(args.cache)
        drift = cache_drift(tables)
        report.results.append(ClaimResult("cache-consistency", "failed" if drift else "verified",
                                          "\n".join(drift[:5]) or f"{len(tables)} cached tables agree"))
    print(json.dumps(report.to_json(), indent=2) if args.json else report.to_text())
    return EXIT_FAILED if report.failed else EXIT_OK


def cmd_cache(args) -> int:
    if args.action == "write":
        text = json.dumps(tables_to_json(min(args.max_chords, MAX_CHORDS)), indent=1, sort_keys=True)
        Path(args.path).write_text(text + "\n")
        print(f"wrote {args.path}")
        return EXIT_OK
    tables = _read_cache(args.path)
    if args.action == "read":
        print(", ".join(f"k={k}: {len(t.entries)} diagrams" for k, t in sorted(tables.items())))
        return EXIT_OK
    drift = cache_drift(tables)
    print("\n".join(drift) if drift else "no drift")
    return EXIT_FAILED if drift else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sutured", description="Suture elements on discs, annuli and punctured tori.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("element", help="lax element of a chord diagram")
    e.add_argument("diagram", help='e.g. "k=2; 0-3 1-2"')
    e.set_defaults(func=cmd_element)

    g = sub.add_parser("glue", help="glue a diagram into an annulus or punctured torus")
    g.add_argument("diagram")
    where = g.add_mutually_exclusive_group(required=True)
    where.add_argument("--annulus", type=int, metavar="I", help="rectangle with I points per side")
    where.add_argument("--torus", metavar="I,J", help="octagon O_IJ")
    g.add_argument("--basepoint", choices=("left", "right"), default="left")
    g.add_argument("--order", choices=tor.ORDERS, default="LR")
    g.set_defaults(func=cmd_glue)

    v = sub.add_parser("verify", help="re-derive and check the claim registry")
    v.add_argument("--scope", choices=("all", "disc", "annulus", "torus"), default="all")
    v.add_argument("--max-chords", type=int, default=6)
    v.add_argument("--json", action="store_true")
    v.add_argument("--cache", metavar="PATH")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("cache", help="write, read or check cached element tables")
    c.add_argument("action", choices=("write", "read", "check"))
    c.add_argument("path")
    c.add_argument("--max-chords", type=int, default=6)
    c.set_defaults(func=cmd_cache)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiagramParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CacheVersionError as e:
        print(f"version mismatch: {e}", file=sys.stderr)
        return EXIT_VERSION
    except (InvalidDiagram, ValueError, KeyError) as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
