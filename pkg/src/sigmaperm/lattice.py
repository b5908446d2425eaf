"""Subgroup algebra and exhaustive subgroup-lattice enumeration.

Subgroups are bitmasks over the parent group's element indices, so set
operations are integer bit arithmetic.  The lattice holds every subgroup in
a canonical order (by order, then by sorted member tuple) together with
normality flags, conjugacy classes, and memo tables for the relational
queries the analysis layers lean on.
"""

from __future__ import annotations

import json
from collections import deque
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    InvariantViolation,
    NotNormalError,
    ParentMismatchError,
    WorkLimitError,
)
from .group import FiniteGroup
from .perm import Permutation

DEFAULT_SUBGROUP_LIMIT = 10000


def _mask_from_array(n: int, indices: np.ndarray) -> int:
    bits = np.zeros(n, dtype=bool)
    bits[indices] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _array_from_mask(n: int, mask: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:n])


class Subgroup:
    """A subgroup of a FiniteGroup, stored as a bitmask of element indices."""

    __slots__ = ("parent", "mask", "order", "_indices", "_gens")

    def __init__(self, parent: FiniteGroup, mask: int, gens: Sequence[int] | None = None):
        if not mask & 1:
            raise ValueError("subgroup mask must contain the identity (bit 0)")
        self.parent = parent
        self.mask = mask
        self.order = mask.bit_count()
        self._indices: np.ndarray | None = None
        self._gens = tuple(int(g) for g in gens) if gens is not None else None

    @property
    def indices(self) -> np.ndarray:
        if self._indices is None:
            self._indices = _array_from_mask(self.parent.order, self.mask)
        return self._indices

    def contains_index(self, g: int) -> bool:
        return bool((self.mask >> g) & 1)

    def is_subset_of(self, other: "Subgroup") -> bool:
        _require_same_parent(self, other)
        return self.mask & other.mask == self.mask

    def generator_indices(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily over ascending indices."""
        if self._gens is None:
            gens: list[int] = []
            have = 1
            for g in self.indices:
                if not (have >> int(g)) & 1:
                    gens.append(int(g))
                    have = _mask_from_array(
                        self.parent.order, self.parent.generated_indices(gens)
                    )
            self._gens = tuple(gens)
        return self._gens

    def describe(self) -> str:
        gens = self.generator_indices()
        if not gens:
            return "order 1: <()>"
        words = ", ".join(self.parent.elements[g].cycle_string() for g in gens)
        return f"order {self.order}: <{words}>"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and other.mask == self.mask
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.mask))

    def __repr__(self) -> str:
        return f"Subgroup({self.describe()})"


def _require_same_parent(H: Subgroup, K: Subgroup) -> None:
    if H.parent is not K.parent:
        raise ParentMismatchError("subgroups belong to different parent groups")


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, 1, gens=())


def whole_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (1 << G.order) - 1, gens=G.generator_indices)


def cyclic_subgroup(G: FiniteGroup, g: int) -> Subgroup:
    return Subgroup(G, _mask_from_array(G.order, G.generated_indices([g])), gens=(g,))


def subgroup_generated(G: FiniteGroup, element_indices: Iterable[int]) -> Subgroup:
    gens = [int(g) for g in element_indices]
    return Subgroup(G, _mask_from_array(G.order, G.generated_indices(gens)), gens=gens)


def subgroup_from_indices(G: FiniteGroup, element_indices: Iterable[int]) -> Subgroup:
    """Wrap an explicit element set, verifying it really is a subgroup."""
    idx = np.unique(np.fromiter((int(g) for g in element_indices), dtype=np.int64))
    if idx.size == 0 or idx[0] != 0:
        raise ValueError("a subgroup must contain the identity")
    closed = np.unique(G.mul[np.ix_(idx, idx)])
    if closed.size != idx.size or not (closed == idx).all():
        raise ValueError("element set is not closed under multiplication")
    return Subgroup(G, _mask_from_array(G.order, idx))


def product_set(H: Subgroup, K: Subgroup) -> frozenset[int]:
    """The element-index set HK = {h * k}."""
    _require_same_parent(H, K)
    prods = H.parent.mul[np.ix_(H.indices, K.indices)]
    return frozenset(int(x) for x in np.unique(prods))


def permutes(H: Subgroup, K: Subgroup) -> bool:
    """Whether HK = KH as sets (equivalently, HK is a subgroup)."""
    _require_same_parent(H, K)
    if H.mask & K.mask in (H.mask, K.mask):
        return True
    mul = H.parent.mul
    hk = np.unique(mul[np.ix_(H.indices, K.indices)])
    kh = np.unique(mul[np.ix_(K.indices, H.indices)])
    return hk.size == kh.size and bool((hk == kh).all())


def _closure_indices(G: FiniteGroup, seed: np.ndarray) -> np.ndarray:
    # Iterated full product; the seed must contain the identity, so the
    # running set only grows and the fixpoint is the generated subgroup.
    current = np.unique(seed)
    while True:
        nxt = np.unique(G.mul[np.ix_(current, current)])
        if nxt.size == current.size:
            return nxt
        current = nxt


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    """Smallest subgroup containing both H and K."""
    _require_same_parent(H, K)
    union = H.mask | K.mask
    if union == H.mask:
        return H
    if union == K.mask:
        return K
    G = H.parent
    idx = _closure_indices(G, np.concatenate([H.indices, K.indices]))
    return Subgroup(G, _mask_from_array(G.order, idx))


def intersect(H: Subgroup, K: Subgroup) -> Subgroup:
    _require_same_parent(H, K)
    return Subgroup(H.parent, H.mask & K.mask)


def conjugate_subgroup(H: Subgroup, x: int) -> Subgroup:
    """The subgroup H^x = {x^-1 h x : h in H}."""
    G = H.parent
    moved = G.mul[G.mul[G.inv[x], H.indices], x]
    return Subgroup(G, _mask_from_array(G.order, moved))


def _conjugate_rows(G: FiniteGroup, sub_idx: np.ndarray) -> np.ndarray:
    # Row x holds the element indices of H^x (unsorted).
    rows = G.mul[G.inv][:, sub_idx]
    return G.mul[rows, np.arange(G.order)[:, None]]


def normalizer(H: Subgroup) -> Subgroup:
    """Largest subgroup in which H is normal: {x : H^x = H}."""
    G = H.parent
    rows = np.sort(_conjugate_rows(G, H.indices), axis=1)
    fixed = (rows == H.indices[None, :]).all(axis=1)
    return Subgroup(G, int.from_bytes(np.packbits(fixed, bitorder="little").tobytes(), "little"))


def normal_closure(H: Subgroup) -> Subgroup:
    """Smallest normal subgroup of the parent containing H."""
    G = H.parent
    conjugates = np.unique(_conjugate_rows(G, H.indices))
    idx = _closure_indices(G, np.concatenate([[0], conjugates]))
    return Subgroup(G, _mask_from_array(G.order, idx))


def core(H: Subgroup) -> Subgroup:
    """Largest normal subgroup of the parent contained in H."""
    G = H.parent
    rows = _conjugate_rows(G, H.indices)
    hit = np.zeros((G.order, G.order), dtype=bool)
    hit[np.arange(G.order)[:, None], rows] = True
    common = hit.all(axis=0)
    return Subgroup(G, int.from_bytes(np.packbits(common, bitorder="little").tobytes(), "little"))


def is_normal(H: Subgroup) -> bool:
    """Normality in the parent, checked on the parent's generators only."""
    G = H.parent
    idx = H.indices
    for g in G.generator_indices:
        moved = np.sort(G.mul[G.mul[G.inv[g], idx], g])
        if moved.size != idx.size or not (moved == idx).all():
            return False
    return True


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, without enumerating the full lattice.

    Seeds with normal closures of cyclic subgroups and closes under joins;
    the product of two normal subgroups is already a subgroup, so each join
    is a single product pass.
    """
    seeds: dict[int, Subgroup] = {}
    for g in range(G.order):
        nc = normal_closure(cyclic_subgroup(G, g))
        seeds.setdefault(nc.mask, nc)
    found = dict(seeds)
    queue = deque(found.values())
    seed_list = list(seeds.values())
    while queue:
        A = queue.popleft()
        for B in seed_list:
            if B.mask | A.mask == A.mask:
                continue
            prod = np.unique(G.mul[np.ix_(A.indices, B.indices)])
            mask = _mask_from_array(G.order, prod)
            if mask not in found:
                sub = Subgroup(G, mask)
                found[mask] = sub
                queue.append(sub)
    return sorted(found.values(), key=lambda s: (s.order, tuple(s.indices)))


class QuotientMap:
    """Projection of a group onto G/N via the action on right cosets of N."""

    def __init__(self, group: FiniteGroup, kernel: Subgroup, quotient: FiniteGroup,
                 projection: np.ndarray):
        self.group = group
        self.kernel = kernel
        self.quotient = quotient
        self.projection = projection

    def image(self, H: Subgroup) -> Subgroup:
        if H.parent is not self.group:
            raise ParentMismatchError("subgroup does not live in the projected group")
        idx = np.unique(self.projection[H.indices])
        return Subgroup(self.quotient, _mask_from_array(self.quotient.order, idx))

    def preimage(self, S: Subgroup) -> Subgroup:
        if S.parent is not self.quotient:
            raise ParentMismatchError("subgroup does not live in the quotient group")
        keep = np.isin(self.projection, S.indices)
        return Subgroup(
            self.group,
            int.from_bytes(np.packbits(keep, bitorder="little").tobytes(), "little"),
        )


def quotient(G: FiniteGroup, N: Subgroup) -> QuotientMap:
    """Build G/N as a first-class group acting on the cosets of N."""
    if N.parent is not G:
        raise ParentMismatchError("kernel does not live in the given group")
    if not is_normal(N):
        raise NotNormalError(f"subgroup ({N.describe()}) is not normal")

    n = G.order
    m = n // N.order
    coset_of = np.full(n, -1, dtype=np.int32)
    reps: list[int] = []
    for g in range(n):
        if coset_of[g] < 0:
            coset_of[G.mul[N.indices, g]] = len(reps)
            reps.append(g)
    if len(reps) != m:
        raise InvariantViolation("coset count disagrees with the index")

    # acts[c, g] = coset of rep_c * g; column g is the coset permutation of g.
    acts = coset_of[G.mul[np.asarray(reps)]]
    images = [tuple(int(x) + 1 for x in acts[:, g]) for g in range(n)]
    distinct = sorted(set(images))
    if len(distinct) != m:
        raise InvariantViolation("quotient action has the wrong number of distinct maps")
    position = {img: i for i, img in enumerate(distinct)}

    gen_images = list(dict.fromkeys(images[g] for g in G.generator_indices))
    gen_images = [img for img in gen_images if img != images[0]] or [images[0]]
    Q = FiniteGroup([Permutation(img) for img in distinct],
                    [position[img] for img in gen_images])
    projection = np.array([position[img] for img in images], dtype=np.int32)
    return QuotientMap(G, N, Q, projection)


class SubgroupLattice:
    """Every subgroup of a group, plus cached relational queries."""

    def __init__(self, group: FiniteGroup, subgroups: Sequence[Subgroup],
                 normal_flags: Sequence[bool]):
        self.group = group
        self.subgroups = tuple(subgroups)
        self.normal_flags = tuple(bool(f) for f in normal_flags)
        self.orders = tuple(s.order for s in self.subgroups)
        self._index = {s.mask: i for i, s in enumerate(self.subgroups)}
        if len(self._index) != len(self.subgroups):
            raise InvariantViolation("duplicate subgroups in lattice")
        n = group.order
        if 1 not in self._index or (1 << n) - 1 not in self._index:
            raise InvariantViolation("lattice must contain the trivial and whole subgroups")

        # conj[x, g] = x^-1 g x, one row per conjugating element.
        rows = group.mul[group.inv]
        self.conj = group.mul[rows, np.arange(n)[:, None]]
        self.conj.setflags(write=False)

        self.class_of, self.conjugacy_classes = self._conjugacy_classes()
        self._permutes: dict[tuple[int, int], bool] = {}
        self._join: dict[tuple[int, int], int] = {}
        self._normalizer_mask: dict[int, int] = {}
        self._core_in: dict[tuple[int, int], int] = {}
        self._below: dict[int, tuple[int, ...]] = {}
        self._memo: dict[object, object] = {}

    # -- construction helpers -------------------------------------------

    def _conjugacy_classes(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        count = len(self.subgroups)
        class_of = [-1] * count
        classes: list[tuple[int, ...]] = []
        if self.group.is_abelian():
            for i in range(count):
                class_of[i] = i
            return tuple(class_of), tuple((i,) for i in range(count))
        gens = self.group.generator_indices
        for i in range(count):
            if class_of[i] >= 0:
                continue
            cid = len(classes)
            orbit = {self.subgroups[i].mask}
            queue = [self.subgroups[i].indices]
            while queue:
                idx = queue.pop()
                for g in gens:
                    moved = np.sort(self.conj[g, idx])
                    mask = _mask_from_array(self.group.order, moved)
                    if mask not in orbit:
                        orbit.add(mask)
                        queue.append(moved)
            members = sorted(self._index[m] for m in orbit)
            for j in members:
                class_of[j] = cid
            classes.append(tuple(members))
        return tuple(class_of), tuple(classes)

    # -- basic lookups ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.subgroups)

    @property
    def trivial_index(self) -> int:
        return 0

    @property
    def whole_index(self) -> int:
        return len(self.subgroups) - 1

    def index_of(self, H: Subgroup) -> int:
        if H.parent is not self.group:
            raise ParentMismatchError("subgroup does not live in this lattice's group")
        try:
            return self._index[H.mask]
        except KeyError:
            raise InvariantViolation("subgroup missing from an exhaustive lattice") from None

    def index_of_mask(self, mask: int) -> int:
        try:
            return self._index[mask]
        except KeyError:
            raise InvariantViolation("subgroup missing from an exhaustive lattice") from None

    def below(self, b: int) -> tuple[int, ...]:
        """Indices of all subgroups contained in subgroup b."""
        cached = self._below.get(b)
        if cached is None:
            mask = self.subgroups[b].mask
            cached = tuple(
                i for i, s in enumerate(self.subgroups) if s.mask & mask == s.mask
            )
            self._below[b] = cached
        return cached

    # -- relational queries, cached ---------------------------------------

    def permutes_indices(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        key = (i, j)
        hit = self._permutes.get(key)
        if hit is None:
            A, B = self.subgroups[i], self.subgroups[j]
            if A.mask & B.mask in (A.mask, B.mask) or self.normal_flags[i] or self.normal_flags[j]:
                hit = True
            else:
                hit = permutes(A, B)
            self._permutes[key] = hit
        return hit

    def join_indices(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        key = (i, j)
        hit = self._join.get(key)
        if hit is None:
            A, B = self.subgroups[i], self.subgroups[j]
            union = A.mask | B.mask
            if union == A.mask:
                hit = i
            elif union == B.mask:
                hit = j
            elif union in self._index:
                hit = self._index[union]
            elif self.normal_flags[i] or self.normal_flags[j]:
                prod = np.unique(self.group.mul[np.ix_(A.indices, B.indices)])
                hit = self.index_of_mask(_mask_from_array(self.group.order, prod))
            else:
                idx = _closure_indices(self.group, np.concatenate([A.indices, B.indices]))
                hit = self.index_of_mask(_mask_from_array(self.group.order, idx))
            self._join[key] = hit
        return hit

    def meet_indices(self, i: int, j: int) -> int:
        return self.index_of_mask(self.subgroups[i].mask & self.subgroups[j].mask)

    def normalizer_mask(self, i: int) -> int:
        hit = self._normalizer_mask.get(i)
        if hit is None:
            if self.normal_flags[i]:
                hit = self.subgroups[self.whole_index].mask
            else:
                hit = normalizer(self.subgroups[i]).mask
            self._normalizer_mask[i] = hit
        return hit

    def normalizer_index(self, i: int) -> int:
        return self.index_of_mask(self.normalizer_mask(i))

    def normal_in(self, a: int, b: int) -> bool:
        """Whether subgroup a is normal in subgroup b (a <= b assumed)."""
        mask_b = self.subgroups[b].mask
        return self.normalizer_mask(a) & mask_b == mask_b

    def conjugate_mask(self, i: int, x: int) -> int:
        moved = np.sort(self.conj[x, self.subgroups[i].indices])
        return _mask_from_array(self.group.order, moved)

    def conjugates_in(self, i: int, b: int) -> set[int]:
        """Lattice indices of the orbit of subgroup i under conjugation by b."""
        if self.normal_flags[i]:
            return {i}
        orbit = {i}
        queue = [i]
        members = [int(x) for x in self.subgroups[b].indices]
        while queue:
            j = queue.pop()
            for x in members:
                k = self.index_of_mask(self.conjugate_mask(j, x))
                if k not in orbit:
                    orbit.add(k)
                    queue.append(k)
        return orbit

    def core_mask_in(self, a: int, b: int) -> int:
        """Mask of the core of subgroup a in subgroup b: the meet of all a^x, x in b."""
        key = (a, b)
        hit = self._core_in.get(key)
        if hit is None:
            if self.normal_in(a, b):
                hit = self.subgroups[a].mask & self.subgroups[b].mask
            else:
                idx = self.subgroups[a].indices
                rows = self.conj[np.ix_(self.subgroups[b].indices, idx)]
                hitmat = np.zeros((rows.shape[0], self.group.order), dtype=bool)
                hitmat[np.arange(rows.shape[0])[:, None], rows] = True
                common = hitmat.all(axis=0)
                hit = int.from_bytes(np.packbits(common, bitorder="little").tobytes(), "little")
            self._core_in[key] = hit
        return hit

    def memo(self, key: object, factory: Callable[[], object]) -> object:
        if key not in self._memo:
            self._memo[key] = factory()
        return self._memo[key]


def all_subgroups(G: FiniteGroup, max_subgroups: int = DEFAULT_SUBGROUP_LIMIT) -> SubgroupLattice:
    """Enumerate every subgroup of G.

    Seeds with the cyclic subgroups and repeatedly joins worklist entries
    with cyclic seeds; every subgroup is a join of cyclic subgroups, so the
    fixpoint is exhaustive.  Raises WorkLimitError past max_subgroups.
    """
    n = G.order
    mul = G.mul

    gen_conj = {g: G.mul[G.mul[G.inv[g]], g] for g in G.generator_indices}

    def normal_flag(idx: np.ndarray) -> bool:
        for g, row in gen_conj.items():
            moved = np.sort(row[idx])
            if not (moved == idx).all():
                return False
        return True

    found: dict[int, tuple[np.ndarray, bool]] = {}

    def insert(idx: np.ndarray) -> int:
        mask = _mask_from_array(n, idx)
        if mask not in found:
            if len(found) >= max_subgroups:
                raise WorkLimitError(
                    f"more than {max_subgroups} subgroups; raise max_subgroups to proceed"
                )
            found[mask] = (idx, normal_flag(idx))
        return mask

    insert(np.array([0]))
    seeds: list[tuple[int, np.ndarray, int]] = []  # (mask, indices, generator)
    seen_cyclic: set[int] = set()
    for g in range(1, n):
        idx = G.generated_indices([g])
        mask = insert(idx)
        if mask not in seen_cyclic:
            seen_cyclic.add(mask)
            seeds.append((mask, idx, g))

    queue = deque(found.keys())
    while queue:
        mask = queue.popleft()
        idx, flag = found[mask]
        for seed_mask, seed_idx, g in seeds:
            if (mask >> g) & 1:
                continue
            seed_flag = found[seed_mask][1]
            if flag or seed_flag:
                prod = np.unique(mul[np.ix_(idx, seed_idx)])
            else:
                prod = _closure_indices(G, np.concatenate([idx, seed_idx]))
            new_mask = _mask_from_array(n, prod)
            if new_mask not in found:
                insert(prod)
                queue.append(new_mask)

    ordered = sorted(found.items(), key=lambda kv: (len(kv[1][0]), tuple(kv[1][0])))
    subgroups = [Subgroup(G, mask) for mask, _ in ordered]
    flags = [flag for _, (_, flag) in ordered]
    return SubgroupLattice(G, subgroups, flags)


_LATTICES: dict[FiniteGroup, SubgroupLattice] = {}


def lattice_of(G: FiniteGroup) -> SubgroupLattice:
    """Process-lifetime memoized all_subgroups."""
    lat = _LATTICES.get(G)
    if lat is None:
        lat = all_subgroups(G)
        _LATTICES[G] = lat
    return lat


LATTICE_FILE_FORMAT = 1


def save_lattice(lattice: SubgroupLattice, path: str | Path) -> None:
    """Write the lattice to a JSON cache file tied to the group's table hash."""
    payload = {
        "format": LATTICE_FILE_FORMAT,
        "group_hash": lattice.group.table_hash(),
        "degree": lattice.group.degree,
        "order": lattice.group.order,
        "subgroups": [
            {
                "order": s.order,
                "members": [int(x) for x in s.indices],
                "normal": bool(flag),
            }
            for s, flag in zip(lattice.subgroups, lattice.normal_flags)
        ],
    }
    Path(path).write_text(json.dumps(payload))


def load_lattice(G: FiniteGroup, path: str | Path) -> SubgroupLattice:
    """Reload a cache file; refuses files written for a different group."""
    payload = json.loads(Path(path).read_text())
    if payload.get("format") != LATTICE_FILE_FORMAT:
        raise ValueError(f"unsupported lattice file format {payload.get('format')!r}")
    if payload.get("group_hash") != G.table_hash():
        raise ValueError("lattice file was written for a different group")
    subgroups = []
    flags = []
    for entry in payload["subgroups"]:
        idx = np.array(entry["members"], dtype=np.int64)
        subgroups.append(Subgroup(G, _mask_from_array(G.order, idx)))
        flags.append(bool(entry["normal"]))
    return SubgroupLattice(G, subgroups, flags)
