"""Tables and the generalized Brin-Thompson groups V_{k_1,...,k_m}.

A table is a list of rows ``(v, u)`` of word tuples such that both the
v-cylinders and the u-cylinders partition the product space.  It induces the
prefix replacement ``v.x -> u.x``.  :class:`Element` is a validated table,
viewed as a group element; equality between elements is decided by composing
with the inverse and checking that every row is trivial.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .clopen import (
    Clopen,
    MultiCylinder,
    cylinder_measure,
    first_overlap,
    intersect_cylinders,
)
from .words import (
    RationalPoint,
    Signature,
    SignatureMismatch,
    Word,
    WordTuple,
    as_signature,
    format_tuple,
    is_prefix,
    point_has_prefix,
    strip_prefix,
)

Row = tuple[WordTuple, WordTuple]


class TableError(ValueError):
    kind = "TableError"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class OverlappingCells(TableError):
    kind = "OverlappingCells"

    def __init__(self, i: int, j: int, which: str):
        self.i, self.j, self.which = i, j, which
        super().__init__(f"{which}-cells of rows {i} and {j} overlap")

    def to_dict(self):
        return {"error": self.kind, "rows": [self.i, self.j], "which": self.which,
                "message": str(self)}


class MeasureDeficit(TableError):
    kind = "MeasureDeficit"

    def __init__(self, deficit: Fraction, which: str):
        self.deficit, self.which = deficit, which
        super().__init__(f"{which}-cells miss a set of measure {deficit}")

    def to_dict(self):
        return {"error": self.kind, "deficit": str(self.deficit), "which": self.which,
                "message": str(self)}


class TableSignatureMismatch(TableError, SignatureMismatch):
    kind = "SignatureMismatch"


@dataclass(frozen=True)
class Table:
    """Raw two-row table; may be invalid until :func:`validate` accepts it."""

    signature: Signature
    rows: tuple[Row, ...]

    @classmethod
    def make(cls, sig, rows: Iterable[tuple[Sequence, Sequence]]) -> "Table":
        rows = tuple((tuple(map(tuple, v)), tuple(map(tuple, u))) for v, u in rows)
        return cls(as_signature(sig), rows)


def validate(t: Table) -> None:
    """Raise a :class:`TableError` unless both rows of ``t`` are partitions."""
    sig = t.signature
    if not t.rows:
        raise MeasureDeficit(Fraction(1), "v")
    for n, (v, u) in enumerate(t.rows):
        for w in (v, u):
            try:
                sig.check_tuple(w)
            except ValueError as exc:
                raise TableSignatureMismatch(f"row {n}: {exc}") from None
    for which, cells in (("v", [r[0] for r in t.rows]), ("u", [r[1] for r in t.rows])):
        hit = first_overlap(cells)
        if hit is not None:
            raise OverlappingCells(hit[0], hit[1], which)
        total = sum((cylinder_measure(c, sig) for c in cells), Fraction(0))
        if total != 1:
            raise MeasureDeficit(1 - total, which)


def _row_key(row: Row):
    return tuple((len(w), w) for w in row[0])


def reduce_rows(rows: Iterable[Row], sig: Signature) -> list[Row]:
    """Collapse families of k_i rows that differ only by a common last letter
    in coordinate i of both v and u."""
    rows = set(rows)
    changed = True
    while changed:
        changed = False
        for i, k in enumerate(sig.sizes):
            groups: dict[Row, dict[int, Row]] = defaultdict(dict)
            for row in rows:
                v, u = row
                vi, ui = v[i], u[i]
                if vi and ui and vi[-1] == ui[-1]:
                    parent = (v[:i] + (vi[:-1],) + v[i + 1:], u[:i] + (ui[:-1],) + u[i + 1:])
                    groups[parent][vi[-1]] = row
            for parent, children in groups.items():
                if len(children) == k:
                    rows.difference_update(children.values())
                    rows.add(parent)
                    changed = True
    return sorted(rows, key=_row_key)


# probe points used for the hash fingerprint of an element
_PROBE_COORDS = [
    ((), (0,)), ((), (1,)), ((), (0, 1)), ((1,), (0,)), ((0,), (1,)),
    ((0, 1, 1), (0, 0, 1)), ((1, 0), (1, 1, 0)), ((1, 1, 0, 1), (0, 1, 1, 1, 0)),
]


def probe_points(sig: Signature) -> list[RationalPoint]:
    pts = []
    n = len(_PROBE_COORDS)
    for j in range(n):
        coords = [_PROBE_COORDS[(j + 3 * i) % n] for i in range(sig.m)]
        pts.append(RationalPoint.make(coords))
    return pts


@dataclass(frozen=True, eq=False)
class FactorLocus:
    """One coordinate of a fixed-point locus: the whole factor of the row's
    cylinder, a single point, or nothing."""

    kind: str  # "full" | "point" | "empty"
    point: tuple[Word, Word] | None = None


@dataclass(frozen=True)
class RowLocus:
    row: int
    cylinder: MultiCylinder
    factors: tuple[FactorLocus, ...]

    @property
    def is_empty(self) -> bool:
        return any(f.kind == "empty" for f in self.factors)


@dataclass(frozen=True, eq=False)
class Element:
    """A group element of V_{k_1,...,k_m} given by one of its tables."""

    signature: Signature
    rows: tuple[Row, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_table(cls, t: Table, reduce: bool = True) -> "Element":
        validate(t)
        rows = reduce_rows(t.rows, t.signature) if reduce else sorted(t.rows, key=_row_key)
        return cls(t.signature, tuple(rows))

    @classmethod
    def from_rows(cls, sig, rows, reduce: bool = True) -> "Element":
        return cls.from_table(Table.make(sig, rows), reduce=reduce)

    @classmethod
    def _trusted(cls, sig: Signature, rows: Iterable[Row]) -> "Element":
        return cls(sig, tuple(reduce_rows(rows, sig)))

    @classmethod
    def identity(cls, sig) -> "Element":
        sig = as_signature(sig)
        e = sig.empty_tuple()
        return cls(sig, ((e, e),))

    @property
    def table(self) -> Table:
        return Table(self.signature, self.rows)

    def __len__(self):
        return len(self.rows)

    # group structure

    def __mul__(self, other: "Element") -> "Element":
        return compose(self, other)

    def __invert__(self) -> "Element":
        return invert(self)

    def __pow__(self, n: int) -> "Element":
        return power(self, n)

    def __call__(self, p: RationalPoint) -> RationalPoint:
        return apply(self, p)

    def is_identity(self) -> bool:
        return is_identity(self)

    def fingerprint(self) -> tuple:
        fp = self._cache.get("fp")
        if fp is None:
            fp = tuple(apply(self, p).coords for p in probe_points(self.signature))
            self._cache["fp"] = fp
        return fp

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if self.signature != other.signature:
            return False
        if self.rows == other.rows:
            return True
        if self.fingerprint() != other.fingerprint():
            return False
        return is_identity(compose(self, invert(other)))

    def __hash__(self):
        return hash((self.signature, self.fingerprint()))

    def __repr__(self):
        body = ", ".join(f"{format_tuple(v)}->{format_tuple(u)}" for v, u in self.rows)
        return f"Element{self.signature}[{body}]"


def _same_sig(a: Element, b: Element):
    if a.signature != b.signature:
        raise SignatureMismatch(f"{a.signature} vs {b.signature}")


def apply(e: Element, p: RationalPoint) -> RationalPoint:
    if p.m != e.signature.m:
        raise SignatureMismatch(f"point has {p.m} coordinates, element acts on {e.signature.m}")
    for v, u in e.rows:
        if point_has_prefix(p, v):
            return strip_prefix(p, v).prepend(u)
    raise AssertionError("table rows do not cover the point")


def apply_prefix(e: Element, w: WordTuple) -> WordTuple | None:
    """Image of the cylinder wX when it lies in a single row, else None."""
    for v, u in e.rows:
        if all(is_prefix(vi, wi) for vi, wi in zip(v, w)):
            return tuple(ui + wi[len(vi):] for vi, ui, wi in zip(v, u, w))
    return None


def compose(a: Element, b: Element) -> Element:
    """The element a o b (b acts first)."""
    _same_sig(a, b)
    m = a.signature.m
    rows = []
    for vb, ub in b.rows:
        for va, ua in a.rows:
            nv, nu = [], []
            for i in range(m):
                x, y = ub[i], va[i]
                if len(x) <= len(y):
                    if y[:len(x)] != x:
                        break
                    nv.append(vb[i] + y[len(x):])
                    nu.append(ua[i])
                else:
                    if x[:len(y)] != y:
                        break
                    nv.append(vb[i])
                    nu.append(ua[i] + x[len(y):])
            else:
                rows.append((tuple(nv), tuple(nu)))
    return Element._trusted(a.signature, rows)


def invert(e: Element) -> Element:
    return Element(e.signature, tuple(sorted(((u, v) for v, u in e.rows), key=_row_key)))


def is_identity(e: Element) -> bool:
    flag = e._cache.get("id")
    if flag is None:
        flag = all(v == u for v, u in e.rows)
        e._cache["id"] = flag
    return flag


def equal(a: Element, b: Element) -> bool:
    _same_sig(a, b)
    return is_identity(compose(a, invert(b)))


def rsupp(e: Element, side: str = "v") -> Clopen:
    """Regular support: the union of the cylinders of the moving rows."""
    key = "rsupp_" + side
    c = e._cache.get(key)
    if c is None:
        idx = 0 if side == "v" else 1
        c = Clopen.disjoint(e.signature, (r[idx] for r in e.rows if r[0] != r[1])).normalize()
        e._cache[key] = c
    return c


def fixed_locus(e: Element) -> list[RowLocus]:
    """Fixed points inside the moving rows, one product locus per row."""
    out = []
    for n, (v, u) in enumerate(e.rows):
        if v == u:
            continue
        factors = []
        for vi, ui in zip(v, u):
            if vi == ui:
                factors.append(FactorLocus("full"))
            elif is_prefix(vi, ui):
                factors.append(FactorLocus("point", (vi, ui[len(vi):])))
            elif is_prefix(ui, vi):
                factors.append(FactorLocus("point", (vi, vi[len(ui):])))
            else:
                factors.append(FactorLocus("empty"))
        out.append(RowLocus(n, v, tuple(factors)))
    return out


def open_support_contains(e: Element, p: RationalPoint) -> bool:
    return apply(e, p) != p


def commutes(a: Element, b: Element) -> bool:
    _same_sig(a, b)
    if is_identity(a) or is_identity(b):
        return True
    ab, ba = compose(a, b), compose(b, a)
    if ab.rows == ba.rows:
        return True
    if ab.fingerprint() != ba.fingerprint():
        return False
    return is_identity(compose(ab, invert(ba)))


def conjugate(a: Element, g: Element) -> Element:
    """g a g^-1."""
    return compose(compose(g, a), invert(g))


def commutator(a: Element, b: Element) -> Element:
    """[a, b] = a b a^-1 b^-1."""
    return compose(compose(a, b), invert(compose(b, a)))


def power(a: Element, n: int) -> Element:
    if n < 0:
        return power(invert(a), -n)
    result = Element.identity(a.signature)
    base = a
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def image_clopen(e: Element, c: Clopen) -> Clopen:
    if c.signature != e.signature:
        raise SignatureMismatch(f"{c.signature} vs {e.signature}")
    out = []
    for cyl in c.cylinders:
        for v, u in e.rows:
            meet = intersect_cylinders(cyl, v)
            if meet is not None:
                out.append(tuple(ui + mi[len(vi):] for vi, ui, mi in zip(v, u, meet)))
    return Clopen.disjoint(e.signature, out).normalize()


def localize(e: Element, mu: MultiCylinder) -> Element:
    """Copy of e acting inside the cylinder mu, identity elsewhere."""
    sig = e.signature
    mu = tuple(tuple(w) for w in mu)
    sig.check_tuple(mu)
    rows = [(tuple(a + b for a, b in zip(mu, v)), tuple(a + b for a, b in zip(mu, u)))
            for v, u in e.rows]
    rows += [(c, c) for c in Clopen.cylinder(sig, mu).complement().cylinders]
    return Element._trusted(sig, rows)


def _split(cells: list, idx: int, coord: int, sig: Signature) -> None:
    c = cells.pop(idx)
    for a in range(sig.sizes[coord]):
        cells.append(c[:coord] + (c[coord] + (a,),) + c[coord + 1:])


def random_partition(sig, splits: int, rng: random.Random) -> list[MultiCylinder]:
    sig = as_signature(sig)
    cells = [sig.empty_tuple()]
    for _ in range(splits):
        _split(cells, rng.randrange(len(cells)), rng.randrange(sig.m), sig)
    return cells


def random_element(sig, depth: int, seed: int) -> Element:
    """Pair two randomly grown partitions (``depth`` cell splits each, then
    topped up to equal size) by a random bijection."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    sig = as_signature(sig)
    rng = random.Random(seed)
    left = random_partition(sig, depth, rng)
    right = random_partition(sig, depth, rng)
    guard = 0
    while len(left) != len(right):
        small = left if len(left) < len(right) else right
        gap = abs(len(left) - len(right))
        exact = [i for i, k in enumerate(sig.sizes) if gap % (k - 1) == 0]
        coord = rng.choice(exact) if exact else rng.randrange(sig.m)
        _split(small, rng.randrange(len(small)), coord, sig)
        guard += 1
        if guard > 10_000:
            raise RuntimeError("could not balance partitions")
    rng.shuffle(right)
    rows = sorted(zip(left, right), key=_row_key)
    return Element._trusted(sig, rows)


def random_local_element(sig, depth: int, seed: int, max_prefix: int = 3) -> Element:
    """A random element squeezed into a random cylinder, so that its support
    is usually a proper subset of the space."""
    sig = as_signature(sig)
    rng = random.Random(seed * 7919 + 17)
    mu = tuple(tuple(rng.randrange(k) for _ in range(rng.randrange(max_prefix + 1)))
               for k in sig.sizes)
    return localize(random_element(sig, depth, rng.randrange(2**31)), mu)


def row_count_stats(elements: Sequence[Element]) -> dict:
    sizes = [len(e.rows) for e in elements]
    if not sizes:
        return {"count": 0}
    return {"count": len(sizes), "min_rows": min(sizes), "max_rows": max(sizes),
            "mean_rows": sum(sizes) / len(sizes)}


def odometer_like(sig) -> Element:
    """Full-support element acting on the first letters of coordinate 1.

    For k = 2 it is the table v=(0,10,11), u=(1,00,01); for larger k the
    first letter is cycled.
    """
    sig = as_signature(sig)
    k = sig.sizes[0]
    rest = sig.empty_tuple()[1:]
    if k == 2:
        rows = [(((0,),) + rest, ((1,),) + rest),
                (((1, 0),) + rest, ((0, 0),) + rest),
                (((1, 1),) + rest, ((0, 1),) + rest)]
    else:
        rows = [(((a,),) + rest, (((a + 1) % k,),) + rest) for a in range(k)]
    return Element.from_rows(sig, rows)


def transposition(sig, a: MultiCylinder, b: MultiCylinder) -> Element:
    """Swap two disjoint cylinders, fixing everything else."""
    sig = as_signature(sig)
    a = tuple(map(tuple, a))
    b = tuple(map(tuple, b))
    rest = Clopen.from_cylinders(sig, [a, b]).complement()
    rows = [(a, b), (b, a)] + [(c, c) for c in rest.cylinders]
    return Element.from_rows(sig, rows)

