"""Alphabets, finite words, word tuples and eventually periodic points.

Words are plain tuples of small integers and word tuples are tuples of words,
one per coordinate of a :class:`Signature`.  Points of the product Cantor
space are only handled when every coordinate is eventually periodic; those
live in :class:`RationalPoint`, always stored in normal form so that equality
of points is structural.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

Word = tuple[int, ...]
WordTuple = tuple[Word, ...]

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
EMPTY: Word = ()


class SignatureMismatch(ValueError):
    pass


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Alphabet sizes (k_1, ..., k_m) of the product space prod X_{k_i}."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.sizes)
        if not sizes:
            raise ValueError("a signature needs at least one coordinate")
        for k in sizes:
            if k < 2:
                raise ValueError(f"alphabet sizes must be >= 2, got {k}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def m(self) -> int:
        return len(self.sizes)

    def __len__(self):
        return len(self.sizes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sizes)

    def __getitem__(self, i: int) -> int:
        return self.sizes[i]

    def __str__(self):
        return "(" + ",".join(map(str, self.sizes)) + ")"

    def empty_tuple(self) -> WordTuple:
        return tuple(EMPTY for _ in self.sizes)

    def check_tuple(self, w: WordTuple) -> None:
        if len(w) != self.m:
            raise SignatureMismatch(
                f"word tuple has {len(w)} coordinates, signature {self} has {self.m}")
        for i, (word, k) in enumerate(zip(w, self.sizes)):
            for a in word:
                if not 0 <= a < k:
                    raise AlphabetError(f"letter {a} out of range for k={k} in coordinate {i}")


def as_signature(sig) -> Signature:
    if isinstance(sig, Signature):
        return sig
    return Signature(tuple(sig))


class PrefixRelation(enum.Enum):
    A_IS_PREFIX = "AIsPrefix"
    B_IS_PREFIX = "BIsPrefix"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def prefix_compare(a: Word, b: Word, k: int | None = None) -> PrefixRelation:
    """Compare two words under the prefix order.

    If ``k`` is given both words are checked against the alphabet size.
    """
    if k is not None:
        for a_ in (a, b):
            if any(not 0 <= x < k for x in a_):
                raise AlphabetError(f"word {a_} is not over an alphabet of size {k}")
    if a == b:
        return PrefixRelation.EQUAL
    if len(a) < len(b):
        return PrefixRelation.A_IS_PREFIX if b[:len(a)] == a else PrefixRelation.INCOMPARABLE
    if len(b) < len(a):
        return PrefixRelation.B_IS_PREFIX if a[:len(b)] == b else PrefixRelation.INCOMPARABLE
    return PrefixRelation.INCOMPARABLE


def is_prefix(a: Word, b: Word) -> bool:
    return len(a) <= len(b) and b[:len(a)] == a


def comparable(a: Word, b: Word) -> bool:
    n = min(len(a), len(b))
    return a[:n] == b[:n]


def concat(a: WordTuple, b: WordTuple) -> WordTuple:
    return tuple(x + y for x, y in zip(a, b))


# -- eventually periodic coordinates ------------------------------------------

def _primitive_root(per: Word) -> Word:
    n = len(per)
    for d in range(1, n + 1):
        if n % d == 0 and per[:d] * (n // d) == per:
            return per[:d]
    return per


def normalize_coordinate(pre: Word, per: Word) -> tuple[Word, Word]:
    """Normal form of pre.per^inf: primitive period, shortest preperiod."""
    if not per:
        raise ValueError("period must be nonempty")
    per = _primitive_root(tuple(per))
    pre = tuple(pre)
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1:] + per[:-1]
    return pre, per


def unroll_coordinate(pre: Word, per: Word, n: int) -> Word:
    """First n letters of pre.per^inf."""
    if n <= len(pre):
        return pre[:n]
    rest = n - len(pre)
    reps = -(-rest // len(per))
    return pre + (per * reps)[:rest]


@dataclass(frozen=True)
class RationalPoint:
    """A point of prod X_{k_i} whose coordinates are all eventually periodic.

    ``coords[i]`` is a ``(preperiod, period)`` pair.  Construct through
    :meth:`make` (or :func:`parse_point`) to get the normal form.
    """

    coords: tuple[tuple[Word, Word], ...]

    @classmethod
    def make(cls, coords: Sequence[tuple[Sequence[int], Sequence[int]]]) -> "RationalPoint":
        return cls(tuple(normalize_coordinate(tuple(p), tuple(q)) for p, q in coords))

    @property
    def m(self) -> int:
        return len(self.coords)

    def unroll(self, lengths: Sequence[int]) -> WordTuple:
        return tuple(unroll_coordinate(p, q, n) for (p, q), n in zip(self.coords, lengths))

    def prepend(self, w: WordTuple) -> "RationalPoint":
        return RationalPoint.make([(wi + p, q) for wi, (p, q) in zip(w, self.coords)])

    def coordinate(self, i: int) -> tuple[Word, Word]:
        return self.coords[i]

    def __str__(self):
        return format_point(self)


def point_has_prefix(p: RationalPoint, w: WordTuple) -> bool:
    if p.m != len(w):
        raise SignatureMismatch(f"point has {p.m} coordinates, word tuple has {len(w)}")
    return all(unroll_coordinate(pre, per, len(wi)) == wi
               for (pre, per), wi in zip(p.coords, w))


def strip_coordinate(pre: Word, per: Word, n: int) -> tuple[Word, Word]:
    if n <= len(pre):
        return normalize_coordinate(pre[n:], per)
    shift = (n - len(pre)) % len(per)
    return normalize_coordinate((), per[shift:] + per[:shift])


def strip_prefix(p: RationalPoint, w: WordTuple) -> RationalPoint:
    """The tail x with p = w.x."""
    if not point_has_prefix(p, w):
        raise ValueError(f"{format_point(p)} does not start with {format_tuple(w)}")
    return RationalPoint(tuple(strip_coordinate(pre, per, len(wi))
                               for (pre, per), wi in zip(p.coords, w)))


def same_point_by_unrolling(p: RationalPoint, q: RationalPoint) -> bool:
    """Equality of denoted points by comparing long enough unrollings.

    Works on any (not necessarily normalized) representation and is used
    as an independent check on the normal form.
    """
    if p.m != q.m:
        return False
    for (p1, q1), (p2, q2) in zip(p.coords, q.coords):
        n = len(p1) + len(p2) + 2 * math.lcm(len(q1), len(q2))
        if unroll_coordinate(p1, q1, n) != unroll_coordinate(p2, q2, n):
            return False
    return True


# -- text forms ---------------------------------------------------------------

def _big(k: int | None) -> bool:
    return k is not None and k > len(DIGITS)


def format_word(w: Word, k: int | None = None) -> str:
    if _big(k) or any(a >= len(DIGITS) for a in w):
        return ".".join(map(str, w))
    return "".join(DIGITS[a] for a in w)


def parse_word(s: str, k: int | None = None) -> Word:
    s = s.strip()
    if s in ("", "ε", "e", "eps"):
        return EMPTY
    if _big(k) or "." in s:
        letters = tuple(int(x) for x in s.split("."))
    else:
        try:
            letters = tuple(DIGITS.index(c) for c in s.lower())
        except ValueError:
            raise AlphabetError(f"cannot parse word {s!r}") from None
    if k is not None and any(a >= k for a in letters):
        raise AlphabetError(f"word {s!r} uses letters outside an alphabet of size {k}")
    return letters


def format_tuple(w: WordTuple, sig: Signature | None = None) -> str:
    ks = sig.sizes if sig is not None else (None,) * len(w)
    return "[" + ",".join(format_word(x, k) for x, k in zip(w, ks)) + "]"


def _strip_brackets(s: str, left: str, right: str) -> str:
    s = s.strip()
    if s.startswith(left) and s.endswith(right):
        return s[1:-1]
    return s


def parse_tuple(s: str, sig: Signature | None = None) -> WordTuple:
    body = _strip_brackets(s, "[", "]")
    parts = body.split(",")
    if sig is not None and len(parts) != sig.m:
        raise SignatureMismatch(f"{s!r} has {len(parts)} coordinates, expected {sig.m}")
    ks = sig.sizes if sig is not None else (None,) * len(parts)
    return tuple(parse_word(part, k) for part, k in zip(parts, ks))


def format_point(p: RationalPoint, sig: Signature | None = None) -> str:
    ks = sig.sizes if sig is not None else (None,) * p.m
    return "[" + ",".join(f"{format_word(pre, k)}({format_word(per, k)})"
                          for (pre, per), k in zip(p.coords, ks)) + "]"


def parse_point(s: str, sig: Signature | None = None) -> RationalPoint:
    body = _strip_brackets(s, "[", "]")
    parts = [x for x in body.split(",")]
    if sig is not None and len(parts) != sig.m:
        raise SignatureMismatch(f"{s!r} has {len(parts)} coordinates, expected {sig.m}")
    ks = sig.sizes if sig is not None else (None,) * len(parts)
    coords = []
    for part, k in zip(parts, ks):
        part = part.strip()
        if "(" not in part or not part.endswith(")"):
            raise ValueError(f"coordinate {part!r} is not of the form pre(per)")
        pre, per = part[:-1].split("(", 1)
        per_w = parse_word(per, k)
        if not per_w:
            raise ValueError(f"coordinate {part!r} has an empty period")
        coords.append((parse_word(pre, k), per_w))
    return RationalPoint.make(coords)
