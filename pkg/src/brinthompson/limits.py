"""Finite-depth anchor limits.

Around a target point y we build a descending chain of saturated basics
V_1 > V_2 > ... > V_d, each of the form rsupp(Phi(tau_j)) with an explicit
source witness tau_j.  Sending V_j to rsupp(tau_j) gives a descending chain
of source clopens whose common prefix approximates the anchor image of y.
The chain stands in for an ultrafilter converging to y; the limit is only
ever reported to finite precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clopen import Clopen
from .embeddings import (
    EmbeddingSpec,
    full_support_element,
    push_forward,
    witness_local_density,
)
from .tables import Element, rsupp
from .words import RationalPoint, WordTuple, format_point, format_tuple


class NestingViolation(AssertionError):
    pass


@dataclass
class CylinderChain:
    spec: EmbeddingSpec
    point: RationalPoint
    basics: list[Clopen] = field(default_factory=list)
    witnesses: list[Element] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.basics)


@dataclass
class LimitApproximation:
    source_basics: list[Clopen]
    prefix: WordTuple

    @property
    def precision(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.prefix)


def build_chain(spec: EmbeddingSpec, y: RationalPoint, depth: int, seed: int | None = None) -> CylinderChain:
    """Descending chain of ``depth`` target basics around y.

    ``seed`` picks the full-support source element that gets localized;
    ``None`` uses the odometer-like table.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    fs = full_support_element(spec.source, seed)
    chain = CylinderChain(spec, y)
    prev = Clopen.whole(spec.target)
    for j in range(1, depth + 1):
        tau = witness_local_density(spec, y, prev, min_length=j, full_support=fs)
        basic = rsupp(push_forward(spec, tau))
        if not basic.contains_point(y):
            raise NestingViolation(f"basic {j} misses {format_point(y)}")
        if not basic.subset(prev):
            raise NestingViolation(f"basic {j} is not inside basic {j - 1}")
        chain.basics.append(basic)
        chain.witnesses.append(tau)
        prev = basic
    return chain


def common_prefix(c: Clopen) -> WordTuple:
    """Longest word tuple that every cylinder of the normal form extends."""
    cyls = c.normalize().cylinders
    if not cyls:
        raise ValueError("empty clopen has no prefix")
    out = []
    for i in range(c.signature.m):
        words = [cyl[i] for cyl in cyls]
        first = words[0]
        n = min(len(w) for w in words)
        length = 0
        while length < n and all(w[length] == first[length] for w in words):
            length += 1
        out.append(first[:length])
    return tuple(out)


def p_map(chain: CylinderChain) -> LimitApproximation:
    """Send each basic rsupp(Phi(tau_j)) to rsupp(tau_j) and read off the
    common prefix of the last one.  Raises :class:`NestingViolation` if the
    order is not preserved."""
    if not chain.basics:
        raise ValueError("empty chain")
    source = [rsupp(tau) for tau in chain.witnesses]
    for j in range(1, len(source)):
        if not source[j].subset(source[j - 1]):
            raise NestingViolation(f"P(V_{j + 1}) is not inside P(V_{j})")
        strict_target = not chain.basics[j - 1].subset(chain.basics[j])
        strict_source = not source[j - 1].subset(source[j])
        if strict_target != strict_source:
            raise NestingViolation(f"strictness differs at step {j + 1}")
    return LimitApproximation(source, common_prefix(source[-1]))


@dataclass
class RhoResult:
    point: RationalPoint
    depth: int
    prefix: WordTuple
    projection_prefix: WordTuple
    chain: CylinderChain
    limit: LimitApproximation

    @property
    def agrees(self) -> bool:
        return self.prefix == self.projection_prefix

    def to_dict(self) -> dict:
        sig = self.chain.spec.source
        return {
            "point": format_point(self.point, self.chain.spec.target),
            "depth": self.depth,
            "prefix": format_tuple(self.prefix, sig),
            "projection_prefix": format_tuple(self.projection_prefix, sig),
            "agrees_with_projection": self.agrees,
            "chain": [{"target_basic": str(v), "source_basic": str(p),
                       "witness_rows": len(t.rows)}
                      for v, p, t in zip(self.chain.basics, self.limit.source_basics,
                                         self.chain.witnesses)],
        }


def rho_eval(spec: EmbeddingSpec, y: RationalPoint, depth: int = 8, seed: int | None = None) -> RhoResult:
    """Anchor image of y to ``depth`` letters per source coordinate, together
    with the direct projection of y for comparison."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    chain = build_chain(spec, y, depth, seed)
    limit = p_map(chain)
    direct = spec.project(y).unroll([len(w) for w in limit.prefix])
    return RhoResult(y, depth, limit.prefix, direct, chain, limit)
