"""Finite permutation groups stored as full multiplication tables.

Elements are indexed 0..n-1 in a canonical order: sorted by image tuple,
which always places the identity at index 0.  All heavier machinery works
on these integer indices; Permutation objects appear only at the edges.
"""

from __future__ import annotations

import hashlib
import os
from typing import Iterable, Sequence

import numpy as np

from .errors import OrderCapError
from .perm import Permutation, compose

DEFAULT_ORDER_CAP = 512
ORDER_CAP_ENV = "SIGMAPERM_ORDER_CAP"


def order_cap() -> int:
    """Effective cap on group order; the environment variable overrides."""
    raw = os.environ.get(ORDER_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_ORDER_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{ORDER_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{ORDER_CAP_ENV} must be positive, got {cap}")
    return cap


class FiniteGroup:
    """Immutable table group.  Index 0 is the identity.

    The element list must already be closed under composition; use
    generate_closure to build a group from generators.
    """

    def __init__(self, elements: Sequence[Permutation], generator_indices: Sequence[int]):
        elements = tuple(elements)
        if not elements:
            raise ValueError("a group needs at least the identity")
        degree = elements[0].degree
        if any(p.degree != degree for p in elements):
            raise ValueError("mixed degrees in element list")
        if list(elements) != sorted(elements, key=lambda p: p.images):
            raise ValueError("element list is not in canonical sorted order")
        if not elements[0].is_identity:
            raise ValueError("canonical ordering must place the identity first")

        n = len(elements)
        base = np.array([[img - 1 for img in p.images] for p in elements], dtype=np.int32)
        row_index = {base[j].tobytes(): j for j in range(n)}
        if len(row_index) != n:
            raise ValueError("duplicate elements")

        mul = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            composed = base[:, base[i]]
            for j in range(n):
                k = row_index.get(composed[j].tobytes())
                if k is None:
                    raise ValueError("element list is not closed under composition")
                mul[i, j] = k

        inv = (mul == 0).argmax(axis=1).astype(np.int32)
        if not (mul[np.arange(n), inv] == 0).all():
            raise ValueError("element list is not closed under inversion")

        self.degree = degree
        self.elements = elements
        self.mul = mul
        self.inv = inv
        self.generator_indices = tuple(dict.fromkeys(int(g) for g in generator_indices))
        self._element_index = {p.images: i for i, p in enumerate(elements)}
        self._is_abelian: bool | None = None
        mul.setflags(write=False)
        inv.setflags(write=False)
        self._spot_check_associativity()

    def _spot_check_associativity(self, samples: int = 32) -> None:
        n = self.order
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, samples))
        if not (self.mul[self.mul[a, b], c] == self.mul[a, self.mul[b, c]]).all():
            raise ValueError("multiplication table is not associative")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> int:
        return 0

    def element_index(self, p: Permutation) -> int:
        try:
            return self._element_index[p.images]
        except KeyError:
            raise ValueError(f"{p.cycle_string()} is not an element of this group") from None

    def __contains__(self, p: Permutation) -> bool:
        return isinstance(p, Permutation) and p.images in self._element_index

    def element_order(self, g: int) -> int:
        k = 1
        x = int(g)
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    def generated_indices(self, gens: Iterable[int]) -> np.ndarray:
        """Sorted element indices of the subgroup generated by gens."""
        gens = [int(g) for g in gens]
        visited = np.zeros(self.order, dtype=bool)
        visited[0] = True
        queue = [0]
        while queue:
            x = queue.pop()
            for g in gens:
                y = int(self.mul[x, g])
                if not visited[y]:
                    visited[y] = True
                    queue.append(y)
        return np.flatnonzero(visited)

    def is_abelian(self) -> bool:
        if self._is_abelian is None:
            self._is_abelian = bool((self.mul == self.mul.T).all())
        return self._is_abelian

    def conjugate(self, g: int, x: int) -> int:
        """Index of x^-1 * g * x."""
        return int(self.mul[self.mul[self.inv[x], g], x])

    def commutator_closure(self, indices: np.ndarray) -> np.ndarray:
        """Derived subgroup of the subgroup on the given element indices."""
        sub = np.asarray(indices)
        left = self.mul[np.ix_(self.inv[sub], self.inv[sub])]
        right = self.mul[np.ix_(sub, sub)]
        comms = np.unique(self.mul[left, right])
        return self.generated_indices(comms)

    def table_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.degree}:{self.order}".encode())
        for p in self.elements:
            h.update(bytes(img for img in p.images))
        return h.hexdigest()

    def __repr__(self) -> str:
        gens = ", ".join(self.elements[g].cycle_string() for g in self.generator_indices)
        return f"FiniteGroup(order={self.order}, degree={self.degree}, gens=[{gens}])"


def generate_closure(generators: Sequence[Permutation], max_order: int | None = None) -> FiniteGroup:
    """Close a nonempty generator list under composition.

    Aborts with OrderCapError once the closure grows past max_order
    (default: order_cap()), reporting how many elements were reached.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    degree = generators[0].degree
    for p in generators:
        if p.degree != degree:
            raise ValueError("generators act on different point sets")
    cap = order_cap() if max_order is None else max_order

    identity = Permutation.identity(degree)
    found: dict[tuple[int, ...], Permutation] = {identity.images: identity}
    for p in generators:
        found.setdefault(p.images, p)
    queue = list(found.values())
    while queue:
        x = queue.pop()
        for g in generators:
            y = compose(x, g)
            if y.images not in found:
                found[y.images] = y
                queue.append(y)
                if len(found) > cap:
                    raise OrderCapError(
                        f"order cap {cap} exceeded: at least {len(found)} elements generated"
                    )
    elements = [found[key] for key in sorted(found)]
    index = {p.images: i for i, p in enumerate(elements)}
    return FiniteGroup(elements, [index[g.images] for g in generators])


def element_order(g: int, G: FiniteGroup) -> int:
    """Least k >= 1 with g^k equal to the identity."""
    return G.element_order(g)


def is_soluble(G: FiniteGroup) -> bool:
    """Whether the derived series reaches the trivial subgroup."""
    current = np.arange(G.order)
    while True:
        nxt = G.commutator_closure(current)
        if nxt.size == current.size:
            return current.size == 1
        current = nxt
