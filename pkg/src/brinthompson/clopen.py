"""Clopen subsets of prod X_{k_i} as finite disjoint unions of multicylinders.

A multicylinder is a word tuple ``(u_1, ..., u_m)`` standing for
``u_1 X_{k_1} x ... x u_m X_{k_m}``.  :class:`Clopen` keeps its cylinders
pairwise disjoint at all times, which makes the uniform product measure
additive and reduces containment to emptiness of a difference.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .words import (
    RationalPoint,
    Signature,
    SignatureMismatch,
    WordTuple,
    as_signature,
    comparable,
    format_tuple,
    parse_tuple,
    point_has_prefix,
)

MultiCylinder = WordTuple


class InvariantViolation(ValueError):
    """Cylinders that were supposed to be disjoint overlap."""


def intersect_cylinders(a: MultiCylinder, b: MultiCylinder) -> MultiCylinder | None:
    if len(a) != len(b):
        raise SignatureMismatch("cylinders over different signatures")
    out = []
    for x, y in zip(a, b):
        if len(x) <= len(y):
            if y[:len(x)] != x:
                return None
            out.append(y)
        else:
            if x[:len(y)] != y:
                return None
            out.append(x)
    return tuple(out)


def cylinders_disjoint(a: MultiCylinder, b: MultiCylinder) -> bool:
    return not all(comparable(x, y) for x, y in zip(a, b))


def cylinder_contains(outer: MultiCylinder, inner: MultiCylinder) -> bool:
    return all(len(o) <= len(i) and i[:len(o)] == o for o, i in zip(outer, inner))


def cylinder_measure(c: MultiCylinder, sig: Signature) -> Fraction:
    den = 1
    for w, k in zip(c, sig.sizes):
        den *= k ** len(w)
    return Fraction(1, den)


def _word_minus(a, c, k):
    """Disjoint cylinders covering aX minus cX, for c extending a."""
    out = []
    for n in range(len(a), len(c)):
        p = c[:n]
        for letter in range(k):
            if letter != c[n]:
                out.append(p + (letter,))
    return out


def cylinder_minus(a: MultiCylinder, b: MultiCylinder, sig: Signature) -> list[MultiCylinder]:
    """Disjoint cylinders covering a minus b."""
    c = intersect_cylinders(a, b)
    if c is None:
        return [a]
    out = []
    # coordinate i leaves c_i while coordinates before it are already inside c
    for i in range(len(a)):
        head = c[:i]
        tail = a[i + 1:]
        for piece in _word_minus(a[i], c[i], sig.sizes[i]):
            out.append(head + (piece,) + tail)
    return out


def total_measure(cells: Iterable[MultiCylinder], sig) -> Fraction:
    """Exact measure of a union of cylinders that must be pairwise disjoint."""
    sig = as_signature(sig)
    cells = list(cells)
    for a, b in itertools.combinations(cells, 2):
        if not cylinders_disjoint(a, b):
            raise InvariantViolation(f"cylinders {format_tuple(a)} and {format_tuple(b)} overlap")
    return sum((cylinder_measure(c, sig) for c in cells), Fraction(0))


def first_overlap(cells: Sequence[MultiCylinder]) -> tuple[int, int] | None:
    for i, j in itertools.combinations(range(len(cells)), 2):
        if not cylinders_disjoint(cells[i], cells[j]):
            return i, j
    return None


def is_partition(cells: Sequence[MultiCylinder], sig) -> bool:
    sig = as_signature(sig)
    for c in cells:
        sig.check_tuple(c)
    if first_overlap(cells) is not None:
        return False
    return sum((cylinder_measure(c, sig) for c in cells), Fraction(0)) == 1


def refine_cylinder(c: MultiCylinder, depths: Sequence[int], sig: Signature) -> list[MultiCylinder]:
    """All cylinders at exactly ``depths`` below c (c must not be deeper)."""
    factors = []
    for w, d, k in zip(c, depths, sig.sizes):
        extra = d - len(w)
        factors.append([w + tail for tail in itertools.product(range(k), repeat=extra)])
    return [tuple(x) for x in itertools.product(*factors)]


def _merge_siblings(cells: set, sig: Signature) -> set:
    cells = set(cells)
    changed = True
    while changed:
        changed = False
        for i, k in enumerate(sig.sizes):
            while True:
                groups = defaultdict(set)
                for c in cells:
                    w = c[i]
                    if w:
                        groups[c[:i] + (w[:-1],) + c[i + 1:]].add(w[-1])
                parents = [p for p, letters in groups.items() if len(letters) == k]
                if not parents:
                    break
                changed = True
                for p in sorted(parents):
                    for a in range(k):
                        cells.discard(p[:i] + (p[i] + (a,),) + p[i + 1:])
                    cells.add(p)
    return cells


@dataclass(frozen=True, eq=False)
class Clopen:
    """A clopen set held as pairwise disjoint multicylinders.

    ``==`` compares the denoted sets, not the representations.
    """

    signature: Signature
    cylinders: tuple[MultiCylinder, ...]

    # constructors

    @classmethod
    def empty(cls, sig) -> "Clopen":
        return cls(as_signature(sig), ())

    @classmethod
    def whole(cls, sig) -> "Clopen":
        sig = as_signature(sig)
        return cls(sig, (sig.empty_tuple(),))

    @classmethod
    def cylinder(cls, sig, c: MultiCylinder) -> "Clopen":
        sig = as_signature(sig)
        sig.check_tuple(c)
        return cls(sig, (tuple(c),))

    @classmethod
    def from_cylinders(cls, sig, cylinders: Iterable[MultiCylinder]) -> "Clopen":
        """Union of arbitrary (possibly overlapping) cylinders."""
        sig = as_signature(sig)
        out: list[MultiCylinder] = []
        for c in cylinders:
            c = tuple(c)
            sig.check_tuple(c)
            pieces = [c]
            for d in out:
                pieces = [q for p in pieces for q in cylinder_minus(p, d, sig)]
                if not pieces:
                    break
            out.extend(pieces)
        return cls(sig, tuple(out))

    @classmethod
    def disjoint(cls, sig, cylinders: Iterable[MultiCylinder]) -> "Clopen":
        """Trusted constructor for cylinders known to be pairwise disjoint."""
        return cls(as_signature(sig), tuple(cylinders))

    # set algebra

    def _check(self, other: "Clopen"):
        if self.signature != other.signature:
            raise SignatureMismatch(f"{self.signature} vs {other.signature}")

    def is_empty(self) -> bool:
        return not self.cylinders

    def difference(self, other: "Clopen") -> "Clopen":
        self._check(other)
        pieces = list(self.cylinders)
        for b in other.cylinders:
            nxt = []
            for p in pieces:
                nxt.extend(cylinder_minus(p, b, self.signature))
            pieces = nxt
            if not pieces:
                break
        return Clopen(self.signature, tuple(pieces))

    def complement(self) -> "Clopen":
        return Clopen.whole(self.signature).difference(self)

    def intersect(self, other: "Clopen") -> "Clopen":
        self._check(other)
        out = []
        for a in self.cylinders:
            for b in other.cylinders:
                c = intersect_cylinders(a, b)
                if c is not None:
                    out.append(c)
        return Clopen(self.signature, tuple(out))

    def union(self, other: "Clopen") -> "Clopen":
        return Clopen(self.signature, self.cylinders + other.difference(self).cylinders)

    def subset(self, other: "Clopen") -> bool:
        self._check(other)
        return self.difference(other).is_empty()

    def isdisjoint(self, other: "Clopen") -> bool:
        self._check(other)
        return all(cylinders_disjoint(a, b) for a in self.cylinders for b in other.cylinders)

    def equals(self, other: "Clopen") -> bool:
        return self.subset(other) and other.subset(self)

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __le__ = subset

    def __invert__(self):
        return self.complement()

    def __eq__(self, other):
        if not isinstance(other, Clopen):
            return NotImplemented
        return self.signature == other.signature and self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def contains_point(self, p: RationalPoint) -> bool:
        return any(point_has_prefix(p, c) for c in self.cylinders)

    def measure(self) -> Fraction:
        return total_measure(self.cylinders, self.signature)

    # representatives

    def max_depths(self) -> tuple[int, ...]:
        depths = [0] * self.signature.m
        for c in self.cylinders:
            for i, w in enumerate(c):
                depths[i] = max(depths[i], len(w))
        return tuple(depths)

    def refine(self, depths: Sequence[int] | None = None) -> "Clopen":
        if depths is None:
            depths = self.max_depths()
        out = []
        for c in self.cylinders:
            out.extend(refine_cylinder(c, depths, self.signature))
        return Clopen(self.signature, tuple(out))

    def normalize(self) -> "Clopen":
        """Merge sibling families greedily (coordinate 1 first) and sort."""
        cells = _merge_siblings(set(self.cylinders), self.signature)
        return Clopen(self.signature, tuple(sorted(cells, key=_cylinder_key)))

    def canonical(self) -> "Clopen":
        """Normalize after refining to the maximal word length per coordinate."""
        return self.refine().normalize()

    def __len__(self):
        return len(self.cylinders)

    def __iter__(self):
        return iter(self.cylinders)

    def __str__(self):
        return format_clopen(self)

    def __repr__(self):
        return f"Clopen({self.signature}, {format_clopen(self)})"


def _cylinder_key(c: MultiCylinder):
    return tuple((len(w), w) for w in c)


def format_clopen(c: Clopen) -> str:
    if not c.cylinders:
        return "{}"
    return "{ " + "; ".join(format_tuple(x, c.signature) for x in c.cylinders) + " }"


def parse_clopen(s: str, sig) -> Clopen:
    sig = as_signature(sig)
    body = s.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    parts = [p for p in body.split(";") if p.strip()]
    return Clopen.from_cylinders(sig, (parse_tuple(p, sig) for p in parts))


def partition_by_grid(cells: Sequence[MultiCylinder], sig) -> bool:
    """Brute force partition test: expand every cell to a common depth and
    check that every grid cell is hit exactly once."""
    sig = as_signature(sig)
    depths = [0] * sig.m
    for c in cells:
        for i, w in enumerate(c):
            depths[i] = max(depths[i], len(w))
    hits: dict[MultiCylinder, int] = {}
    for c in cells:
        for g in refine_cylinder(c, depths, sig):
            hits[g] = hits.get(g, 0) + 1
    total = 1
    for k, d in zip(sig.sizes, depths):
        total *= k ** d
    return len(hits) == total and all(v == 1 for v in hits.values())
