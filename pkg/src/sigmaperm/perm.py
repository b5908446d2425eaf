"""Permutations of the points 1..n, with cycle-notation parsing.

Products are taken left to right throughout the package: (p * q) means
"apply p first, then q", so (p * q)(x) = q(p(x)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

from .errors import CycleParseError, DegreeCapError, DegreeMismatchError

DEGREE_CAP = 64

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1, .., n}; images[k - 1] is the image of point k."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n < 1:
            raise ValueError("degree must be at least 1")
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"images {self.images!r} are not a bijection of 1..{n}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(1, degree + 1)))

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return all(img == k for k, img in enumerate(self.images, start=1))

    def __call__(self, point: int) -> int:
        if not 1 <= point <= self.degree:
            raise ValueError(f"point {point} outside 1..{self.degree}")
        return self.images[point - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for k, img in enumerate(self.images, start=1):
            inv[img - 1] = k
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles of length >= 2, each starting at its least point."""
        seen = [False] * self.degree
        out: list[tuple[int, ...]] = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            seen[start - 1] = True
            cyc = [start]
            point = self.images[start - 1]
            while point != start:
                seen[point - 1] = True
                cyc.append(point)
                point = self.images[point - 1]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycs)

    def __str__(self) -> str:
        return self.cycle_string()


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right product: apply p first, then q."""
    if p.degree != q.degree:
        raise DegreeMismatchError(f"degree {p.degree} composed with degree {q.degree}")
    return Permutation(tuple(q.images[img - 1] for img in p.images))


def compose_all(perms: list[Permutation], degree: int) -> Permutation:
    return reduce(compose, perms, Permutation.identity(degree))


def _cycle_to_permutation(points: list[int], degree: int) -> Permutation:
    images = list(range(1, degree + 1))
    for k, point in enumerate(points):
        images[point - 1] = points[(k + 1) % len(points)]
    return Permutation(tuple(images))


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse cycle notation such as "(1 2 3)(4 5)" into a Permutation.

    Cycles apply left to right.  The empty string denotes the identity.
    Raises CycleParseError for malformed input, a repeated point inside a
    cycle, or a point outside 1..degree.
    """
    if degree < 1:
        raise CycleParseError(f"degree must be at least 1, got {degree}")
    if degree > DEGREE_CAP:
        raise DegreeCapError(f"degree {degree} beyond the cap of {DEGREE_CAP}")
    leftover = _CYCLE_RE.sub("", text)
    if leftover.strip():
        raise CycleParseError(f"unparseable text {leftover.strip()!r} in {text!r}")
    factors: list[Permutation] = []
    for body in _CYCLE_RE.findall(text):
        tokens = body.split()
        if not tokens:
            continue
        points: list[int] = []
        for token in tokens:
            try:
                point = int(token)
            except ValueError:
                raise CycleParseError(f"bad point {token!r} in {text!r}") from None
            if not 1 <= point <= degree:
                raise CycleParseError(f"point {point} outside 1..{degree}")
            if point in points:
                raise CycleParseError(f"point {point} repeated within a cycle")
            points.append(point)
        if len(points) > 1:
            factors.append(_cycle_to_permutation(points, degree))
    return compose_all(factors, degree)
