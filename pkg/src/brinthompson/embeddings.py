"""Coordinatewise embeddings between generalized Brin-Thompson groups.

An :class:`EmbeddingSpec` sends source coordinate ``i`` to target coordinate
``coordinate_map[i]``; target coordinates that are not hit stay passive and
carry empty words.  The anchor map of such an embedding is the coordinate
projection ``rho(y)_i = y_{map[i]}``, and everything here checks that claim
exactly on clopen sets or on rational points.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .clopen import Clopen, MultiCylinder
from .tables import (
    Element,
    FactorLocus,
    apply,
    fixed_locus,
    is_identity,
    localize,
    odometer_like,
    random_element,
    rsupp,
)
from .words import (
    RationalPoint,
    Signature,
    SignatureMismatch,
    WordTuple,
    as_signature,
    format_point,
    format_tuple,
    normalize_coordinate,
    unroll_coordinate,
)


class NoWitness(LookupError):
    pass


@dataclass(frozen=True)
class EmbeddingSpec:
    source: Signature
    target: Signature
    coordinate_map: tuple[int, ...]

    def __post_init__(self):
        src, tgt = as_signature(self.source), as_signature(self.target)
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        cmap = tuple(int(j) for j in self.coordinate_map)
        object.__setattr__(self, "coordinate_map", cmap)
        if len(cmap) != src.m:
            raise ValueError(f"coordinate map covers {len(cmap)} of {src.m} source coordinates")
        if len(set(cmap)) != len(cmap):
            raise ValueError("coordinate map is not injective")
        for i, j in enumerate(cmap):
            if not 0 <= j < tgt.m:
                raise ValueError(f"source coordinate {i} maps to missing target coordinate {j}")
            if src[i] != tgt[j]:
                raise ValueError(f"alphabet sizes differ: source {i} has k={src[i]}, "
                                 f"target {j} has k={tgt[j]}")

    @classmethod
    def from_dict(cls, d: dict) -> "EmbeddingSpec":
        src = as_signature(d["source"])
        cmap = d.get("map", {})
        try:
            order = [cmap[str(i)] if str(i) in cmap else cmap[i] for i in range(src.m)]
        except KeyError as exc:
            raise ValueError(f"map has no entry for source coordinate {exc}") from None
        return cls(src, as_signature(d["target"]), tuple(order))

    def to_dict(self) -> dict:
        return {"source": list(self.source.sizes), "target": list(self.target.sizes),
                "map": {str(i): j for i, j in enumerate(self.coordinate_map)}}

    @property
    def passive(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.target.m) if j not in self.coordinate_map)

    def then(self, other: "EmbeddingSpec") -> "EmbeddingSpec":
        """The composite embedding: first self, then other."""
        if self.target != other.source:
            raise SignatureMismatch(f"{self.target} vs {other.source}")
        return EmbeddingSpec(self.source, other.target,
                             tuple(other.coordinate_map[j] for j in self.coordinate_map))

    def lift_tuple(self, w: WordTuple) -> WordTuple:
        out: list = [()] * self.target.m
        for i, j in enumerate(self.coordinate_map):
            out[j] = w[i]
        return tuple(out)

    def project_tuple(self, w: WordTuple) -> WordTuple:
        return tuple(w[j] for j in self.coordinate_map)

    def project(self, y: RationalPoint) -> RationalPoint:
        """The anchor map: keep the mapped coordinates of a target point."""
        if y.m != self.target.m:
            raise SignatureMismatch(f"point has {y.m} coordinates, target has {self.target.m}")
        return RationalPoint(tuple(y.coords[j] for j in self.coordinate_map))


def identity_spec(sig) -> EmbeddingSpec:
    sig = as_signature(sig)
    return EmbeddingSpec(sig, sig, tuple(range(sig.m)))


def iota() -> EmbeddingSpec:
    """V_2 into 2V_2 acting on the first coordinate."""
    return EmbeddingSpec(Signature((2,)), Signature((2, 2)), (0,))


def push_forward(spec: EmbeddingSpec, e: Element) -> Element:
    if e.signature != spec.source:
        raise SignatureMismatch(f"element over {e.signature}, embedding from {spec.source}")
    rows = [(spec.lift_tuple(v), spec.lift_tuple(u)) for v, u in e.rows]
    return Element._trusted(spec.target, rows)


def anchor_preimage(spec: EmbeddingSpec, c: Clopen) -> Clopen:
    if c.signature != spec.source:
        raise SignatureMismatch(f"clopen over {c.signature}, embedding from {spec.source}")
    return Clopen.disjoint(spec.target, (spec.lift_tuple(cyl) for cyl in c.cylinders))


def is_saturated_basic_union(spec: EmbeddingSpec, c: Clopen) -> bool:
    """True if every cylinder of the normal form has empty passive words."""
    passive = spec.passive
    return all(not cyl[j] for cyl in c.normalize().cylinders for j in passive)


def random_point(sig, rng: random.Random, max_pre: int = 3, max_per: int = 2) -> RationalPoint:
    sig = as_signature(sig)
    coords = []
    for k in sig.sizes:
        pre = tuple(rng.randrange(k) for _ in range(rng.randint(0, max_pre)))
        per = tuple(rng.randrange(k) for _ in range(rng.randint(1, max_per)))
        coords.append((pre, per))
    return RationalPoint.make(coords)


@dataclass
class AnchorEntry:
    index: int
    preimage: Clopen
    support: Clopen
    equal: bool
    equivariant: bool
    saturated: bool
    failing_point: str | None = None

    def to_dict(self) -> dict:
        d = {"index": self.index, "rho_preimage_rsupp": str(self.preimage),
             "rsupp_image": str(self.support), "equal": self.equal,
             "equivariant": self.equivariant, "saturated": self.saturated}
        if self.failing_point is not None:
            d["failing_point"] = self.failing_point
        return d


@dataclass
class AnchorReport:
    entries: list[AnchorEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.equal and e.equivariant and e.saturated for e in self.entries)

    @property
    def failures(self) -> list[AnchorEntry]:
        return [e for e in self.entries if not (e.equal and e.equivariant and e.saturated)]

    def to_dict(self, full: bool = False) -> dict:
        d = {"checked": len(self.entries), "passed": len(self.entries) - len(self.failures),
             "ok": self.ok, "failures": [e.to_dict() for e in self.failures]}
        if full:
            d["entries"] = [e.to_dict() for e in self.entries]
        return d


def check_anchor(spec: EmbeddingSpec, elements: Sequence[Element], points_per_element: int = 10,
                 seed: int = 0) -> AnchorReport:
    """Compare rho^-1(rsupp(g)) with rsupp(Phi(g)) and test rho o Phi(g) = g o rho."""
    rng = random.Random(seed)
    report = AnchorReport()
    for n, g in enumerate(elements):
        image = push_forward(spec, g)
        pre = anchor_preimage(spec, rsupp(g))
        sup = rsupp(image)
        equal = pre.equals(sup)
        equivariant, bad = True, None
        for _ in range(points_per_element):
            q = random_point(spec.target, rng)
            if spec.project(apply(image, q)) != apply(g, spec.project(q)):
                equivariant, bad = False, format_point(q)
                break
        report.entries.append(AnchorEntry(n, pre, sup, equal, equivariant,
                                          is_saturated_basic_union(spec, sup), bad))
    return report


@dataclass
class LocalRegularityReport:
    gamma_support: Clopen
    image_support: Clopen
    probes: list[dict]

    @property
    def ok(self) -> bool:
        return all(p["source_side"] == p["target_side"] for p in self.probes)

    def to_dict(self) -> dict:
        return {"rsupp_gamma": str(self.gamma_support), "rsupp_image": str(self.image_support),
                "probes": self.probes, "ok": self.ok}


def check_local_regularity(spec: EmbeddingSpec, gamma: Element,
                           probes: Sequence[Element]) -> LocalRegularityReport:
    """For each probe tau: rsupp(tau) in rsupp(gamma) iff the same holds for
    the images under the embedding."""
    g_sup = rsupp(gamma)
    img_sup = rsupp(push_forward(spec, gamma))
    rows = []
    for n, tau in enumerate(probes):
        src = rsupp(tau).subset(g_sup)
        tgt = rsupp(push_forward(spec, tau)).subset(img_sup)
        rows.append({"probe": n, "source_side": src, "target_side": tgt})
    return LocalRegularityReport(g_sup, img_sup, rows)


# -- global fixed points --------------------------------------------------------

# A "piece" is a product set: coordinate i is either ("cyl", word) for the
# cylinder word.X or ("pt", (pre, per)) for a single point.

def _meet_factor(a, b):
    if a[0] == "cyl" and b[0] == "cyl":
        x, y = a[1], b[1]
        if len(x) <= len(y):
            return b if y[:len(x)] == x else None
        return a if x[:len(y)] == y else None
    if a[0] == "pt" and b[0] == "pt":
        return a if a[1] == b[1] else None
    cyl, pt = (a, b) if a[0] == "cyl" else (b, a)
    pre, per = pt[1]
    w = cyl[1]
    return pt if unroll_coordinate(pre, per, len(w)) == w else None


def _meet_piece(p, q):
    out = []
    for a, b in zip(p, q):
        c = _meet_factor(a, b)
        if c is None:
            return None
        out.append(c)
    return tuple(out)


def _locus_piece(cyl: MultiCylinder, factors: Sequence[FactorLocus]):
    out = []
    for w, f in zip(cyl, factors):
        if f.kind == "empty":
            return None
        if f.kind == "full":
            out.append(("cyl", w))
        else:
            pre, per = f.point
            out.append(("pt", normalize_coordinate(pre, per)))
    return tuple(out)


def fixed_pieces(e: Element) -> list:
    """Fix(e) as a finite union of product pieces (exact)."""
    pieces = [tuple(("cyl", w) for w in cyl) for cyl in rsupp(e).complement().cylinders]
    for locus in fixed_locus(e):
        p = _locus_piece(locus.cylinder, locus.factors)
        if p is not None:
            pieces.append(p)
    return pieces


def _render_piece(p, sig: Signature, depth: int) -> dict:
    kinds = ["cylinder" if f[0] == "cyl" else "point" for f in p]
    text = []
    for f, k in zip(p, sig.sizes):
        if f[0] == "cyl":
            text.append(format_tuple((f[1],), sig=Signature((k,)))[1:-1] + "*")
        else:
            pre, per = f[1]
            text.append(format_point(RationalPoint(((pre, per),)), Signature((k,)))[1:-1])
    prefix = []
    for f in p:
        if f[0] == "cyl":
            prefix.append(f[1])
        else:
            prefix.append(unroll_coordinate(f[1][0], f[1][1], depth))
    return {"set": "[" + ",".join(text) + "]", "kinds": kinds,
            "prefix": format_tuple(tuple(prefix), sig)}


@dataclass
class FullSupportReport:
    clopen_fixed: Clopen
    pieces: list
    depth: int

    @property
    def clopen_certified(self) -> bool:
        return self.clopen_fixed.is_empty()

    @property
    def full_support(self) -> bool:
        return not self.pieces

    def to_dict(self) -> dict:
        sig = self.clopen_fixed.signature
        return {"clopen_fixed_part": str(self.clopen_fixed),
                "clopen_level_full_support": self.clopen_certified,
                "global_fixed_pieces": [_render_piece(p, sig, self.depth) for p in self.pieces],
                "full_support": self.full_support}


def check_full_support(spec: EmbeddingSpec, gens: Iterable[Element], depth: int = 6) -> FullSupportReport:
    """Common fixed set of the images of ``gens``.

    The clopen part is the intersection of the complements of the regular
    supports.  The full fixed set also contains the isolated fixed loci of
    moving rows; it is intersected exactly, piece by piece.
    """
    images = [push_forward(spec, g) for g in gens]
    if not images:
        raise ValueError("need at least one generator")
    clopen_part = Clopen.whole(spec.target)
    pieces = None
    for img in images:
        clopen_part = clopen_part.intersect(rsupp(img).complement())
        fp = fixed_pieces(img)
        if pieces is None:
            pieces = fp
        else:
            pieces = [r for p in pieces for q in fp if (r := _meet_piece(p, q)) is not None]
    return FullSupportReport(clopen_part.normalize(), _dedupe(pieces or []), depth)


def _dedupe(pieces):
    out = []
    for p in pieces:
        if any(_contains_piece(q, p) for q in out):
            continue
        out = [q for q in out if not _contains_piece(p, q)]
        out.append(p)
    return out


def _contains_piece(big, small) -> bool:
    return _meet_piece(big, small) == small


# -- local density witnesses ----------------------------------------------------

def full_support_element(sig, seed: int | None = None, tries: int = 64) -> Element:
    """A source element whose regular support is the whole space.

    ``seed=None`` gives the odometer-like table; otherwise a seeded random
    element with full support (falling back to the odometer-like table).
    """
    sig = as_signature(sig)
    if seed is None:
        return odometer_like(sig)
    rng = random.Random(seed)
    whole = Clopen.whole(sig)
    for _ in range(tries):
        e = random_element(sig, rng.randint(1, 4), rng.randrange(2**31))
        if rsupp(e).equals(whole):
            return e
    return odometer_like(sig)


def _children(mu: WordTuple, sig: Signature):
    for letters in itertools.product(*(range(k) for k in sig.sizes)):
        yield tuple(w + (a,) for w, a in zip(mu, letters))


def witness_local_density(spec: EmbeddingSpec, y: RationalPoint, U: Clopen, min_length: int = 0,
                          probe_depth: int = 64, full_support: Element | None = None) -> Element:
    """A source element tau with y in rsupp(Phi(tau)) contained in U.

    Candidates are full-support elements localized into source cylinders
    mu; mu is grown one letter per coordinate at a time, keeping the child
    whose pushed-forward support contains y.  Only target-side membership
    tests are used, never the projection of y.
    """
    if U.signature != spec.target or y.m != spec.target.m:
        raise SignatureMismatch("point and clopen must live on the target space")
    if not U.contains_point(y):
        raise NoWitness(f"{format_point(y)} is not in {U}")
    fs = full_support if full_support is not None else odometer_like(spec.source)
    mu = spec.source.empty_tuple()
    for length in range(probe_depth + 1):
        if length > 0:
            for child in _children(mu, spec.source):
                if rsupp(push_forward(spec, localize(fs, child))).contains_point(y):
                    mu = child
                    break
            else:
                raise NoWitness(f"no child cylinder of {format_tuple(mu)} sees {format_point(y)}")
        if length < min_length:
            continue
        tau = localize(fs, mu) if length else fs
        sup = rsupp(push_forward(spec, tau))
        if sup.contains_point(y) and sup.subset(U):
            return tau
    raise NoWitness(f"no saturated basic around {format_point(y)} inside {U} "
                    f"up to depth {probe_depth}")


def injective_on(spec: EmbeddingSpec, e: Element) -> bool:
    """push_forward(e) trivial only if e is trivial."""
    return is_identity(push_forward(spec, e)) == is_identity(e)


__all__ = [
    "EmbeddingSpec", "NoWitness", "AnchorReport", "FullSupportReport", "LocalRegularityReport",
    "anchor_preimage", "check_anchor", "check_full_support", "check_local_regularity",
    "full_support_element", "identity_spec", "iota", "push_forward", "random_point",
    "witness_local_density",
]
