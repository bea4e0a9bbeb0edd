"""Seeded batch checks behind the acceptance suite and ``brinthompson selftest``.

Every check returns a :class:`CheckResult`; counts are exact and the
randomness is fully determined by the seed.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .analysis import check_alg_supp, in_localized_subgroup
from .clopen import Clopen, is_partition, partition_by_grid
from .embeddings import (
    check_anchor,
    check_local_regularity,
    iota,
    random_point,
)
from .limits import rho_eval
from .serialize import data_file, element_from_dict, generators_from_dict, load_json, table_from_dict
from .tables import (
    Element,
    MeasureDeficit,
    OverlappingCells,
    TableError,
    TableSignatureMismatch,
    apply,
    compose,
    conjugate,
    image_clopen,
    invert,
    is_identity,
    localize,
    random_element,
    random_local_element,
    random_partition,
    rsupp,
    transposition,
    validate,
)
from .words import RationalPoint, Signature, format_tuple

V2 = Signature((2,))
V22 = Signature((2, 2))


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: {self.checked} checks, "
                f"{len(self.failures)} failures, {self.seconds:.1f}s")


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - start
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _points(sig, rng, n):
    return [random_point(sig, rng, max_pre=3, max_per=2) for _ in range(n)]


def sample_elements(sig, n: int, seed: int, max_depth: int = 4, local_every: int = 0) -> list[Element]:
    """n seeded random elements with depths cycling through 1..max_depth.

    With ``local_every = r`` every r-th element is localized into a random
    cylinder so that proper supports show up.
    """
    rng = random.Random(seed)
    out = []
    for i in range(n):
        depth = 1 + i % max_depth
        s = rng.randrange(2**31)
        if local_every and i % local_every == 0:
            out.append(random_local_element(sig, depth, s))
        else:
            out.append(random_element(sig, depth, s))
    return out


@_timed
def group_laws(n_v2: int = 1000, n_2v2: int = 200, seed: int = 1, points: int = 3) -> CheckResult:
    """Associativity, inverse and identity laws, evaluation homomorphism."""
    res = CheckResult("group laws", True)
    rng = random.Random(seed)
    for sig, n in ((V2, n_v2), (V22, n_2v2)):
        els = sample_elements(sig, n, rng.randrange(2**31))
        ident = Element.identity(sig)
        for i, a in enumerate(els):
            b, c = els[(i + 1) % n], els[(i + 2) % n]
            checks = {
                "assoc": compose(compose(a, b), c) == compose(a, compose(b, c)),
                "inverse": is_identity(compose(a, invert(a))) and is_identity(compose(invert(a), a)),
                "identity": compose(a, ident) == a and compose(ident, a) == a,
            }
            ab = compose(a, b)
            checks["evaluation"] = all(apply(ab, p) == apply(a, apply(b, p))
                                       for p in _points(sig, rng, points))
            res.checked += len(checks)
            for k, ok in checks.items():
                if not ok:
                    res.failures.append({"law": k, "signature": str(sig), "index": i})
    res.passed = not res.failures
    return res


def refine_row(e: Element, rng: random.Random) -> Element:
    """Same element, one row split into its k_i children in both v and u."""
    rows = list(e.rows)
    n = rng.randrange(len(rows))
    v, u = rows.pop(n)
    i = rng.randrange(e.signature.m)
    for a in range(e.signature.sizes[i]):
        rows.append((v[:i] + (v[i] + (a,),) + v[i + 1:], u[:i] + (u[i] + (a,),) + u[i + 1:]))
    return Element(e.signature, tuple(rows))


_TAILS = [((0,), (1,)), ((1,), (0,)), ((), (0, 1))]


def moved_inside(e: Element, cyl) -> bool:
    """Whether e moves some point of the cylinder.

    Three tails that differ in every coordinate are tried; inside one row a
    moving table fixes at most one value per coordinate it shifts, so one of
    the three always detects motion.
    """
    for j in range(len(_TAILS)):
        tail = RationalPoint.make([_TAILS[(j + i) % 3] for i in range(e.signature.m)])
        p = tail.prepend(cyl)
        if apply(e, p) != p:
            return True
    return False


@_timed
def support_correctness(n: int = 500, seed: int = 2) -> CheckResult:
    res = CheckResult("support correctness", True)
    rng = random.Random(seed)
    for sig in (V2, V22):
        els = sample_elements(sig, n // 2, rng.randrange(2**31), local_every=2)
        for i, e in enumerate(els):
            g = els[(i + 7) % len(els)]
            sup = rsupp(e)
            fine = refine_row(e, rng)
            checks = {
                "v_equals_u": sup.equals(rsupp(e, side="u")),
                "inverse": sup.equals(rsupp(invert(e))),
                "conjugate": rsupp(conjugate(e, g)).equals(image_clopen(g, sup)),
                "refinement": (rsupp(fine).equals(sup) and fine == e
                               and all(apply(fine, p) == apply(e, p) for p in _points(sig, rng, 3))),
                "moved_in_support": all(moved_inside(e, c) for c in sup.refine().cylinders),
                "fixed_off_support": all(not moved_inside(e, c)
                                         for c in sup.complement().cylinders),
            }
            res.checked += len(checks)
            for k, ok in checks.items():
                if not ok:
                    res.failures.append({"check": k, "signature": str(sig), "index": i})
    res.passed = not res.failures
    return res


def random_clopen(sig: Signature, rng: random.Random, max_len: int = 3, max_cyl: int = 3) -> Clopen:
    cyls = [tuple(tuple(rng.randrange(k) for _ in range(rng.randint(0, max_len))) for k in sig.sizes)
            for _ in range(rng.randint(1, max_cyl))]
    return Clopen.from_cylinders(sig, cyls)


def random_member(U: Clopen, rng: random.Random) -> Element:
    """A random element of Gamma_U: a product of random elements localized
    into cylinders of U."""
    e = Element.identity(U.signature)
    cyls = U.cylinders
    for c in rng.sample(cyls, k=min(len(cyls), rng.randint(1, 2))):
        piece = localize(random_element(U.signature, rng.randint(1, 3), rng.randrange(2**31)), c)
        e = compose(piece, e)
    return e


@_timed
def localized_subgroup_laws(n: int = 300, seed: int = 3) -> CheckResult:
    res = CheckResult("localized subgroup laws", True)
    rng = random.Random(seed)
    for i in range(n):
        sig = V2 if i % 2 == 0 else V22
        U = random_clopen(sig, rng)
        while U.is_empty():
            U = random_clopen(sig, rng)
        gamma = random_element(sig, rng.randint(1, 4), rng.randrange(2**31))
        a, b = random_member(U, rng), random_member(U, rng)
        tau = random_element(sig, rng.randint(1, 3), rng.randrange(2**31))
        gU = image_clopen(gamma, U)
        c = random_member(gU, rng)
        checks = {
            "members": in_localized_subgroup(a, U) and in_localized_subgroup(b, U),
            "product": in_localized_subgroup(compose(a, b), U),
            "inverse": in_localized_subgroup(invert(a), U),
            "conjugate_member": in_localized_subgroup(conjugate(a, gamma), gU),
            "conjugate_back": in_localized_subgroup(conjugate(c, invert(gamma)), U),
            "conjugate_iff": (in_localized_subgroup(conjugate(tau, gamma), gU)
                              == in_localized_subgroup(tau, U)),
        }
        res.checked += len(checks)
        for k, ok in checks.items():
            if not ok:
                res.failures.append({"check": k, "index": i, "U": str(U)})
    res.passed = not res.failures
    return res


def random_cell_set(sig: Signature, rng: random.Random) -> list:
    """A partition, sometimes damaged by dropping, duplicating or
    replacing a cell."""
    cells = random_partition(sig, rng.randint(0, 5), rng)
    mode = rng.randrange(5)
    if mode == 1 and len(cells) > 1:
        cells.pop(rng.randrange(len(cells)))
    elif mode == 2:
        c = cells[rng.randrange(len(cells))]
        i = rng.randrange(sig.m)
        cells.append(c[:i] + (c[i] + (rng.randrange(sig.sizes[i]),),) + c[i + 1:])
    elif mode == 3:
        n = rng.randrange(len(cells))
        c = cells[n]
        i = rng.randrange(sig.m)
        if c[i]:
            cells[n] = c[:i] + (c[i][:-1],) + c[i + 1:]
    elif mode == 4:
        cells = [tuple(tuple(rng.randrange(k) for _ in range(rng.randint(0, 2))) for k in sig.sizes)
                 for _ in range(rng.randint(1, 5))]
    return cells


@_timed
def partition_oracle(n: int = 500, seed: int = 4) -> CheckResult:
    res = CheckResult("partition oracle", True)
    rng = random.Random(seed)
    sigs = [Signature((2,)), Signature((3,)), V22]
    positives = 0
    for i in range(n):
        sig = sigs[i % 3]
        cells = random_cell_set(sig, rng)
        fast, brute = is_partition(cells, sig), partition_by_grid(cells, sig)
        positives += brute
        res.checked += 1
        if fast != brute:
            res.failures.append({"signature": str(sig), "cells": [format_tuple(c) for c in cells],
                                 "is_partition": fast, "grid": brute})
    res.details["partitions"] = positives
    res.passed = not res.failures
    return res


@_timed
def flagship_anchor(n: int = 500, seed: int = 7, points: int = 10) -> CheckResult:
    res = CheckResult("flagship anchor identity", True)
    els = sample_elements(V2, n, seed, local_every=3)
    report = check_anchor(iota(), els, points_per_element=points, seed=seed)
    res.checked = len(report.entries)
    res.failures = [e.to_dict() for e in report.failures]
    res.details["nontrivial_proper_supports"] = sum(
        1 for e in report.entries if not e.support.is_empty()
        and not e.support.equals(Clopen.whole(V22)))
    res.passed = report.ok and res.checked == n
    return res


def limit_points(n: int, seed: int, cover: int = 5) -> list[RationalPoint]:
    """Points of X_2 x X_2 whose first coordinates run through every prefix
    of length ``cover``, topped up with random points."""
    rng = random.Random(seed)
    pts = []
    for w in itertools.product((0, 1), repeat=cover):
        if len(pts) >= n:
            break
        pts.append(RationalPoint.make([(w, (rng.randrange(2),)), ((), tuple(rng.randrange(2) for _ in range(rng.randint(1, 2))))]))
    while len(pts) < n:
        pts.append(random_point(V22, rng))
    return pts


@_timed
def anchor_limits(n: int = 50, depth: int = 8, seed: int = 11, cover: int = 5) -> CheckResult:
    res = CheckResult("anchor limits", True)
    spec = iota()
    seen = set()
    for i, y in enumerate(limit_points(n, seed, cover)):
        a = rho_eval(spec, y, depth)
        b = rho_eval(spec, y, depth, seed=seed + 1 + i)
        res.checked += 2
        if not a.agrees:
            res.failures.append({"point": str(y), "prefix": format_tuple(a.prefix),
                                 "projection": format_tuple(a.projection_prefix)})
        if a.prefix != b.prefix:
            res.failures.append({"point": str(y), "chain_a": format_tuple(a.prefix),
                                 "chain_b": format_tuple(b.prefix)})
        w = a.prefix[0]
        for length in range(min(cover, len(w)) + 1):
            seen.add(w[:length])
    missing = [w for length in range(cover + 1)
               for w in itertools.product((0, 1), repeat=length) if w not in seen]
    res.checked += 1
    if missing:
        res.failures.append({"unrealized_prefixes": ["".join(map(str, w)) for w in missing]})
    res.details["realized_prefixes"] = len(seen)
    res.passed = not res.failures
    return res


@_timed
def alg_disjointness_coherence(radius: int = 3, gens_file: str = "v2_cfp_gens.json",
                               f_file: str = "swap00_01.json") -> CheckResult:
    """Containment direction: members of Gamma_{rsupp f} commute with g^12
    for every g that passes the bounded disjointness search."""
    res = CheckResult("algebraic disjointness coherence", True)
    gens = generators_from_dict(load_json(data_file(gens_file)))
    f = element_from_dict(load_json(data_file(f_file)))
    report = check_alg_supp(f, gens, radius)
    res.checked = sum(report.lhs) * len(report.verified_g)
    res.failures = report.containment_violations
    supp_f = rsupp(f)
    inside = [w for w in report.verified_g if rsupp(gens.evaluate(w)).subset(supp_f)]
    res.details = {"ball_size": len(report.words), "members": sum(report.lhs),
                   "verified_g": [list(w) for w in report.verified_g],
                   "verified_g_inside_rsupp_f": [list(w) for w in inside],
                   "converse_gaps": len(report.converse_gaps)}
    res.passed = not res.failures
    return res


def _malformed(name):
    return table_from_dict(load_json(data_file(name)))


@_timed
def negative_controls() -> CheckResult:
    res = CheckResult("negative controls", True)
    expected = {"bad_overlap.json": OverlappingCells, "bad_deficit.json": MeasureDeficit,
                "bad_signature.json": TableSignatureMismatch}
    for name, kind in expected.items():
        res.checked += 1
        try:
            validate(_malformed(name))
            got = None
        except TableError as exc:
            got = exc
        if not isinstance(got, kind):
            res.failures.append({"fixture": name, "expected": kind.kind,
                                 "got": getattr(got, "kind", None)})
    spec = iota()
    left = transposition(V2, ((0, 0),), ((0, 1),))
    right = transposition(V2, ((1, 0),), ((1, 1),))
    half = transposition(V2, ((0,),), ((1,),))
    pairs = [(right, left), (left, right), (half, left), (half, right),
             (localize(half, ((1,),)), left)]
    for tau, gamma in pairs:
        rep = check_local_regularity(spec, gamma, [tau])
        probe = rep.probes[0]
        res.checked += 1
        if probe["source_side"] or probe["target_side"]:
            res.failures.append({"probe": str(tau), "gamma": str(gamma), **probe})
    res.passed = not res.failures
    return res


ALL_CHECKS = [group_laws, support_correctness, localized_subgroup_laws, partition_oracle,
              flagship_anchor, anchor_limits, alg_disjointness_coherence, negative_controls]


def quick_checks() -> list[CheckResult]:
    """Reduced sizes for ``selftest``; the acceptance suite runs full sizes."""
    return [
        group_laws(100, 20), support_correctness(60), localized_subgroup_laws(40),
        partition_oracle(90), flagship_anchor(50), anchor_limits(8, depth=6, cover=3),
        alg_disjointness_coherence(2, "v2_gens.json"), negative_controls(),
    ]


def full_checks() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
