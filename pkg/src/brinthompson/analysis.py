"""Localized subgroups, word balls and bounded algebraic disjointness.

Words in the generators are tuples of signed, 1-based indices: ``3`` is the
third generator and ``-3`` its inverse.  A word ``(s_1, ..., s_n)`` evaluates
to ``s_1 o s_2 o ... o s_n``.

Algebraic disjointness quantifies over the whole group, so every search here
is confined to a ball of given radius and its verdicts say so.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .clopen import Clopen
from .tables import (
    Element,
    commutator,
    commutes,
    compose,
    invert,
    is_identity,
    power,
    rsupp,
)
from .words import Signature, SignatureMismatch

GenWord = tuple[int, ...]

VERIFIED = "VerifiedUpTo"
COUNTEREXAMPLE = "Counterexample"
INCONCLUSIVE = "Inconclusive"


@dataclass
class GeneratorSet:
    name: str
    elements: list[Element]
    notes: str = ""

    def __post_init__(self):
        if not self.elements:
            raise ValueError("empty generator set")
        sig = self.elements[0].signature
        for n, g in enumerate(self.elements):
            if g.signature != sig:
                raise SignatureMismatch(f"generator {n} is over {g.signature}, expected {sig}")
            if is_identity(g):
                raise ValueError(f"generator {n} is the identity")

    @property
    def signature(self) -> Signature:
        return self.elements[0].signature

    def letter(self, s: int) -> Element:
        g = self.elements[abs(s) - 1]
        return g if s > 0 else invert(g)

    def evaluate(self, word: Sequence[int]) -> Element:
        out = Element.identity(self.signature)
        for s in word:
            out = compose(out, self.letter(s))
        return out


def in_localized_subgroup(e: Element, U: Clopen) -> bool:
    """Membership in Gamma_U for clopen U (open support inside U)."""
    return rsupp(e).subset(U)


@dataclass
class BallEntry:
    word: GenWord
    element: Element


def ball(gens: GeneratorSet, radius: int) -> list[BallEntry]:
    """Elements of word length <= radius, breadth first, one entry per element.

    Each element is listed with the first word that reached it.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    letters = []
    for n in range(1, len(gens.elements) + 1):
        letters.append(n)
        letters.append(-n)
    letter_elems = {s: gens.letter(s) for s in letters}
    entries = [BallEntry((), Element.identity(gens.signature))]
    seen = {entries[0].element}
    frontier = entries
    for _ in range(radius):
        nxt = []
        for entry in frontier:
            for s in letters:
                if entry.word and entry.word[-1] == -s:
                    continue
                e = compose(entry.element, letter_elems[s])
                if e in seen:
                    continue
                seen.add(e)
                nxt.append(BallEntry(entry.word + (s,), e))
        entries.extend(nxt)
        frontier = nxt
    return entries


@dataclass
class BoundedVerdict:
    """Outcome of a bounded search.  ``VerifiedUpTo`` only speaks about the
    searched ball and is never a proof about the whole group."""

    kind: str
    radius: int
    witness: GenWord | None = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.kind == VERIFIED

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "radius": self.radius, "stats": dict(self.stats)}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        if self.reason:
            d["reason"] = self.reason
        d["stats"].pop("seconds", None)
        return d


class DisjointnessSearch:
    """Shared state for many algebraic disjointness queries against one f.

    The h-candidates (ball elements not commuting with f) and the f-ball are
    computed once; double commutators are cached per (f1, f2, h).
    """

    def __init__(self, f: Element, gens: GeneratorSet, rH: int = 3, rF: int = 3,
                 budget: int | None = None):
        if f.signature != gens.signature:
            raise SignatureMismatch(f"{f.signature} vs {gens.signature}")
        self.f = f
        self.gens = gens
        self.rH, self.rF = rH, rF
        self.budget = budget
        self.h_ball = ball(gens, rH)
        self.f_ball = self.h_ball if rF == rH else ball(gens, rF)
        self.hs = [b for b in self.h_ball if not commutes(b.element, f)]
        self._inner: dict[tuple[int, int], Element] = {}

    def _inner_commutator(self, j2: int, ih: int) -> Element:
        key = (j2, ih)
        c = self._inner.get(key)
        if c is None:
            c = commutator(self.f_ball[j2].element, self.hs[ih].element)
            self._inner[key] = c
        return c

    def check(self, g: Element) -> BoundedVerdict:
        start = time.perf_counter()
        centralizer = [j for j, b in enumerate(self.f_ball) if commutes(b.element, g)]
        pairs = 0
        for ih, h in enumerate(self.hs):
            found = False
            for j2 in centralizer:
                inner = self._inner_commutator(j2, ih)
                if is_identity(inner):
                    continue
                for j1 in centralizer:
                    pairs += 1
                    if self.budget is not None and pairs > self.budget:
                        return BoundedVerdict(
                            INCONCLUSIVE, self.rH, reason="pair budget exhausted",
                            stats=self._stats(pairs, len(centralizer), start))
                    c = commutator(self.f_ball[j1].element, inner)
                    if not is_identity(c) and commutes(c, g):
                        found = True
                        break
                if found:
                    break
            if not found:
                return BoundedVerdict(COUNTEREXAMPLE, self.rH, witness=h.word,
                                      stats=self._stats(pairs, len(centralizer), start))
        return BoundedVerdict(VERIFIED, self.rH,
                              stats=self._stats(pairs, len(centralizer), start))

    def _stats(self, pairs, n_cent, start):
        return {"h_ball": len(self.h_ball), "f_ball": len(self.f_ball),
                "h_candidates": len(self.hs), "centralizer_in_ball": n_cent,
                "pairs_checked": pairs, "seconds": time.perf_counter() - start}


def algebraically_disjoint(g: Element, f: Element, gens: GeneratorSet, rH: int = 3,
                           rF: int = 3, budget: int | None = None) -> BoundedVerdict:
    """Bounded test of whether g is algebraically disjoint from f.

    For every h in the rH-ball not commuting with f, look for f1, f2 in the
    rF-ball commuting with g such that [f1, [f2, h]] is a nontrivial element
    commuting with g.
    """
    return DisjointnessSearch(f, gens, rH, rF, budget).check(g)


def replay_counterexample(g: Element, f: Element, gens: GeneratorSet, verdict: BoundedVerdict,
                          rF: int) -> bool:
    """Re-run the failing h of a counterexample from its word alone; True if
    the failure reproduces."""
    if verdict.kind != COUNTEREXAMPLE or verdict.witness is None:
        return False
    h = gens.evaluate(verdict.witness)
    if commutes(h, f):
        return False
    cent = [b.element for b in ball(gens, rF) if commutes(b.element, g)]
    for f2 in cent:
        inner = commutator(f2, h)
        for f1 in cent:
            c = commutator(f1, inner)
            if not is_identity(c) and commutes(c, g):
                return False
    return True


@dataclass
class AlgSuppReport:
    radius: int
    f_support: Clopen
    lhs: list[bool]
    rhs: list[bool]
    words: list[GenWord]
    verified_g: list[GenWord]
    verdicts: dict[GenWord, BoundedVerdict]
    containment_violations: list[dict]
    converse_gaps: list[dict]

    @property
    def ok(self) -> bool:
        return not self.containment_violations

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "rsupp_f": str(self.f_support),
            "ball_size": len(self.words),
            "verified_disjoint": [list(w) for w in self.verified_g],
            "verdict_counts": _count_kinds(self.verdicts.values()),
            "agreement": [{"word": list(w), "lhs": l, "rhs": r}
                          for w, l, r in zip(self.words, self.lhs, self.rhs)],
            "containment_violations": self.containment_violations,
            "converse_gaps": self.converse_gaps,
            "ok": self.ok,
        }


def _count_kinds(verdicts) -> dict:
    out: dict[str, int] = {}
    for v in verdicts:
        out[v.kind] = out.get(v.kind, 0) + 1
    return dict(sorted(out.items()))


def check_alg_supp(f: Element, gens: GeneratorSet, radius: int = 3, rH: int | None = None,
                   rF: int | None = None, budget: int | None = None) -> AlgSuppReport:
    """Compare membership in Gamma_{rsupp f} with commuting with g^12 for the
    ball elements g that pass the bounded disjointness search.

    Only "member => commutes" is expected to hold exactly; the converse is
    recorded as a gap since the bounded search can miss disjoint elements.
    """
    if is_identity(f):
        raise ValueError("f must be nontrivial")
    rH = radius if rH is None else rH
    rF = radius if rF is None else rF
    search = DisjointnessSearch(f, gens, rH, rF, budget)
    entries = search.h_ball if rH == radius else ball(gens, radius)
    support = rsupp(f)
    verdicts: dict[GenWord, BoundedVerdict] = {}
    twelfth: list[tuple[GenWord, Element]] = []
    for entry in entries:
        if is_identity(entry.element):
            continue
        v = search.check(entry.element)
        verdicts[entry.word] = v
        if v.verified:
            twelfth.append((entry.word, power(entry.element, 12)))
    lhs, rhs, words = [], [], []
    violations, gaps = [], []
    for entry in entries:
        member = in_localized_subgroup(entry.element, support)
        failing = [w for w, g12 in twelfth if not commutes(entry.element, g12)]
        lhs.append(member)
        rhs.append(not failing)
        words.append(entry.word)
        if member and failing:
            violations.append({"gamma": list(entry.word), "g": [list(w) for w in failing]})
        elif not member and not failing:
            gaps.append({"gamma": list(entry.word)})
    return AlgSuppReport(radius, support, lhs, rhs, words, [w for w, _ in twelfth],
                         verdicts, violations, gaps)
