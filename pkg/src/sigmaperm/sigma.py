"""Prime partitions and the permutability predicates built on them.

A partition splits the prime support of a group into disjoint blocks.  A
subgroup H is measured against each block at one of four levels:

  level 1      H permutes with every maximal block-subgroup
  level 2      H permutes with every block projector
  level 3      H permutes with all conjugates of some one block projector
  skiba        H permutes with all conjugates of some one Hall block-subgroup
               (undefined when a block has no Hall subgroup at all)

Level 1 implies level 2 implies level 3, and a true skiba verdict implies
level 3; all four coincide on soluble groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Union

import numpy as np

from .errors import ParentMismatchError, SigmaError
from .group import FiniteGroup
from .lattice import Subgroup, SubgroupLattice, normal_subgroups
from .pi import (
    PrimeSet,
    _hall_in,
    _pi_maximal_in,
    _projector_indices,
    is_pi_number,
    is_pi_prime_free,
    p_part,
    prime_support,
)

MAX_PARTITION_PRIMES = 6


@dataclass(frozen=True)
class SigmaPartition:
    """Disjoint prime blocks covering exactly the parent group's prime support."""

    blocks: tuple[PrimeSet, ...]
    context: PrimeSet

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise SigmaError("empty block in partition")
            if seen & set(block.primes):
                raise SigmaError("blocks overlap")
            seen |= set(block.primes)
        if seen != set(self.context.primes):
            raise SigmaError("blocks do not cover the context primes exactly")
        mins = [min(block.primes) for block in self.blocks]
        if mins != sorted(mins):
            raise SigmaError("blocks must be sorted by least prime")

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(block.primes for block in self.blocks)

    @property
    def is_singletons(self) -> bool:
        return all(len(block) == 1 for block in self.blocks)

    def restricted_to(self, group: FiniteGroup) -> "SigmaPartition":
        return canonicalize_sigma(self.blocks, group)

    def __str__(self) -> str:
        return "|".join(str(block) for block in self.blocks) if self.blocks else "-"


def canonicalize_sigma(blocks: Iterable[Iterable[int]], G: FiniteGroup) -> SigmaPartition:
    """Validate blocks against G: disjoint, covering, then trim to its primes."""
    psets = [b if isinstance(b, PrimeSet) else PrimeSet.of(b) for b in blocks]
    seen: set[int] = set()
    for b in psets:
        if seen & set(b.primes):
            raise SigmaError(f"blocks overlap at {sorted(seen & set(b.primes))}")
        seen |= set(b.primes)
    context = prime_support(G.order)
    missing = [p for p in context if p not in seen]
    if missing:
        raise SigmaError(f"primes {missing} of the group are not covered by any block")
    kept = [b.intersect(context) for b in psets]
    kept = [b for b in kept if b]
    kept.sort(key=lambda b: b.primes[0])
    return SigmaPartition(tuple(kept), context)


def singleton_partition(G: FiniteGroup) -> SigmaPartition:
    """One block per prime of the group."""
    return canonicalize_sigma([(p,) for p in prime_support(G.order)], G)


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [part[k] + [first]] + part[k + 1 :]
        yield [[first]] + part


def enumerate_sigma_partitions(G: FiniteGroup) -> list[SigmaPartition]:
    """Every partition of the group's prime support, canonically ordered."""
    primes = list(prime_support(G.order))
    if len(primes) > MAX_PARTITION_PRIMES:
        raise SigmaError(f"too many primes ({len(primes)}) to sweep partitions")
    out = {}
    for part in _set_partitions(primes):
        sigma = canonicalize_sigma([tuple(b) for b in part], G)
        out[sigma.key] = sigma
    return [out[k] for k in sorted(out)]


class PermutabilityLevel(Enum):
    MAXIMAL = 1
    PROJECTOR = 2
    PROJECTOR_CLASS = 3
    SKIBA = "skiba"


LevelInput = Union[PermutabilityLevel, int, str]


def coerce_level(level: LevelInput) -> PermutabilityLevel:
    if isinstance(level, PermutabilityLevel):
        return level
    if isinstance(level, str):
        text = level.strip().lower()
        if text == "skiba":
            return PermutabilityLevel.SKIBA
        if text in ("1", "2", "3"):
            return PermutabilityLevel(int(text))
        raise SigmaError(f"level must be 1, 2, 3, or 'skiba', got {level!r}")
    if level in (1, 2, 3):
        return PermutabilityLevel(level)
    raise SigmaError(f"level must be 1, 2, 3, or 'skiba', got {level!r}")


@dataclass(frozen=True)
class PermutabilityWitness:
    block: PrimeSet
    offender: Optional[Subgroup]
    note: str


@dataclass(frozen=True)
class PermutabilityResult:
    verdict: Optional[bool]
    witness: Optional[PermutabilityWitness] = None


@dataclass(frozen=True)
class _BlockData:
    pm: tuple[int, ...]
    proj: tuple[int, ...]
    hall: tuple[int, ...]
    proj_classes: tuple[tuple[int, ...], ...]
    hall_classes: tuple[tuple[int, ...], ...]
    lvl1: frozenset[int]
    lvl2: frozenset[int]
    lvl3: frozenset[int]
    skiba: Optional[frozenset[int]]


def _classes_of(lat: SubgroupLattice, members: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    by_class: dict[int, list[int]] = {}
    for i in members:
        by_class.setdefault(lat.class_of[i], []).append(i)
    return tuple(tuple(sorted(v)) for _, v in sorted(by_class.items(), key=lambda kv: kv[1][0]))


def _block_data(lat: SubgroupLattice, block: PrimeSet) -> _BlockData:
    def build() -> _BlockData:
        whole = lat.whole_index
        pm = tuple(_pi_maximal_in(lat, block, whole))
        proj = tuple(_projector_indices(lat, block))
        hall = tuple(_hall_in(lat, block, whole))
        proj_classes = _classes_of(lat, proj)
        hall_classes = _classes_of(lat, hall)
        count = len(lat.subgroups)

        def permutes_with_all(h: int, targets: tuple[int, ...]) -> bool:
            return all(lat.permutes_indices(h, t) for t in targets)

        lvl1 = frozenset(h for h in range(count) if permutes_with_all(h, pm))
        lvl2 = frozenset(h for h in range(count) if permutes_with_all(h, proj))
        lvl3 = frozenset(
            h
            for h in range(count)
            if any(permutes_with_all(h, cls) for cls in proj_classes)
        )
        skiba = None
        if hall:
            skiba = frozenset(
                h
                for h in range(count)
                if any(permutes_with_all(h, cls) for cls in hall_classes)
            )
        return _BlockData(pm, proj, hall, proj_classes, hall_classes, lvl1, lvl2, lvl3, skiba)

    return lat.memo(("sigma-block", block), build)


def _check_sigma(G: FiniteGroup, sigma: SigmaPartition) -> None:
    if sigma.context != prime_support(G.order):
        raise SigmaError(
            f"partition context {sigma.context} does not match the group support "
            f"{prime_support(G.order)}"
        )


def _check_lattice(G: FiniteGroup, lattice: SubgroupLattice) -> None:
    if lattice.group is not G:
        raise ParentMismatchError("lattice was built for a different group")


def level_indices(
    lat: SubgroupLattice, sigma: SigmaPartition, level: LevelInput
) -> Optional[frozenset[int]]:
    """Lattice indices passing the given level for every block (None: undefined)."""
    lvl = coerce_level(level)

    def build() -> Optional[frozenset[int]]:
        result = frozenset(range(len(lat.subgroups)))
        for block in sigma.blocks:
            data = _block_data(lat, block)
            per_block = {
                PermutabilityLevel.MAXIMAL: data.lvl1,
                PermutabilityLevel.PROJECTOR: data.lvl2,
                PermutabilityLevel.PROJECTOR_CLASS: data.lvl3,
                PermutabilityLevel.SKIBA: data.skiba,
            }[lvl]
            if per_block is None:
                return None
            result &= per_block
        return result

    return lat.memo(("sigma-level", sigma.key, lvl), build)


def _first_failing_member(
    lat: SubgroupLattice, h: int, targets: Iterable[int]
) -> Optional[int]:
    for t in targets:
        if not lat.permutes_indices(h, t):
            return t
    return None


def _find_offender(
    lat: SubgroupLattice, sigma: SigmaPartition, idx: int, lvl: PermutabilityLevel
) -> PermutabilityWitness:
    for block in sigma.blocks:
        data = _block_data(lat, block)
        if lvl is PermutabilityLevel.MAXIMAL and idx not in data.lvl1:
            off = _first_failing_member(lat, idx, data.pm)
            return PermutabilityWitness(
                block, lat.subgroups[off], f"does not permute with a maximal {block}-subgroup"
            )
        if lvl is PermutabilityLevel.PROJECTOR and idx not in data.lvl2:
            off = _first_failing_member(lat, idx, data.proj)
            return PermutabilityWitness(
                block, lat.subgroups[off], f"does not permute with a {block}-projector"
            )
        if lvl is PermutabilityLevel.PROJECTOR_CLASS and idx not in data.lvl3:
            off = _first_failing_member(lat, idx, data.proj_classes[0])
            return PermutabilityWitness(
                block,
                lat.subgroups[off],
                f"every conjugacy class of {block}-projectors has a non-permuting member",
            )
        if lvl is PermutabilityLevel.SKIBA and (data.skiba is None or idx not in data.skiba):
            off = _first_failing_member(lat, idx, data.hall_classes[0])
            return PermutabilityWitness(
                block,
                lat.subgroups[off],
                f"every conjugacy class of Hall {block}-subgroups has a non-permuting member",
            )
    raise AssertionError("offender requested for a passing subgroup")


def sigma_permutable(
    H: Subgroup,
    G: FiniteGroup,
    sigma: SigmaPartition,
    level: LevelInput,
    lattice: SubgroupLattice,
) -> PermutabilityResult:
    """Evaluate one subgroup at one level; false verdicts carry a witness."""
    _check_lattice(G, lattice)
    if H.parent is not G:
        raise ParentMismatchError("subgroup does not live in the given group")
    _check_sigma(G, sigma)
    lvl = coerce_level(level)
    idx = lattice.index_of(H)
    members = level_indices(lattice, sigma, lvl)
    if members is None:
        for block in sigma.blocks:
            if _block_data(lattice, block).skiba is None:
                return PermutabilityResult(
                    None,
                    PermutabilityWitness(
                        block, None, f"no Hall {block}-subgroup exists; verdict undefined"
                    ),
                )
        raise AssertionError("undefined level without a Hall-free block")
    if idx in members:
        return PermutabilityResult(True)
    return PermutabilityResult(False, _find_offender(lattice, sigma, idx, lvl))


# -- subnormality -----------------------------------------------------------

def _step_info(lat: SubgroupLattice, a: int, b: int):
    # (normal, support of |b| / |core of a in b|); support is None when normal.
    def build():
        if lat.normal_in(a, b):
            return (True, None)
        core_order = lat.core_mask_in(a, b).bit_count()
        return (False, prime_support(lat.orders[b] // core_order))

    return lat.memo(("step", a, b), build)


def _step_ok(lat: SubgroupLattice, sigma: SigmaPartition, a: int, b: int) -> bool:
    normal, support = _step_info(lat, a, b)
    if normal:
        return True
    return any(support.issubset(block) for block in sigma.blocks)


def subnormal_indices(
    lat: SubgroupLattice, sigma: SigmaPartition, top: Optional[int] = None
) -> frozenset[int]:
    """Members reachable from `top` by a chain of admissible steps.

    A step from A up to B is admissible when A is normal in B or when
    B over the core of A in B is a single-block group.
    """
    if top is None:
        top = lat.whole_index

    def build() -> frozenset[int]:
        below = lat.below(top)
        ok = {top}
        for a in sorted(below, key=lambda i: -lat.orders[i]):
            if a == top:
                continue
            mask_a = lat.subgroups[a].mask
            order_a = lat.orders[a]
            for b in below:
                if lat.orders[b] <= order_a or b not in ok:
                    continue
                if mask_a & lat.subgroups[b].mask != mask_a:
                    continue
                if _step_ok(lat, sigma, a, b):
                    ok.add(a)
                    break
        return frozenset(ok)

    return lat.memo(("sigma-subnormal", sigma.key, top), build)


def sigma_subnormal(
    H: Subgroup, G: FiniteGroup, sigma: SigmaPartition, lattice: SubgroupLattice
) -> bool:
    """Whether H is reachable from G by admissible steps (H = G counts)."""
    _check_lattice(G, lattice)
    if H.parent is not G:
        raise ParentMismatchError("subgroup does not live in the given group")
    _check_sigma(G, sigma)
    return lattice.index_of(H) in subnormal_indices(lattice, sigma)


# -- nilpotency across blocks ------------------------------------------------

_NORMALS_CACHE: dict[FiniteGroup, list[Subgroup]] = {}


def _normals_of(G: FiniteGroup) -> list[Subgroup]:
    normals = _NORMALS_CACHE.get(G)
    if normals is None:
        normals = normal_subgroups(G)
        _NORMALS_CACHE[G] = normals
    return normals


def sigma_nilpotent(G: FiniteGroup, sigma: SigmaPartition) -> bool:
    """Whether G is the direct product of Hall subgroups, one per block.

    Checked as: for every block, the largest normal block-subgroup is Hall,
    and the block pieces multiply up to the full order.  Works from the
    normal subgroups alone, with no full lattice.
    """
    _check_sigma(G, sigma)
    if G.order == 1:
        return True
    normals = _normals_of(G)
    total = 1
    for block in sigma.blocks:
        acc = np.array([0], dtype=np.int64)
        for N in normals:
            if is_pi_number(N.order, block):
                acc = np.unique(G.mul[np.ix_(acc, N.indices)])
        o_order = int(acc.size)
        if not is_pi_prime_free(G.order // o_order, block):
            return False
        total *= o_order
    return total == G.order


def sigma_nilpotent_section(
    lat: SubgroupLattice, sigma: SigmaPartition, b: int, a: int
) -> bool:
    """Whether the section (subgroup b) / (subgroup a) is nilpotent across blocks.

    Requires a normal in b.  Uses the correspondence between subgroups of
    the section and lattice members between a and b, so no quotient group
    is materialised.
    """
    if not lat.normal_in(a, b):
        raise ValueError("section requested over a non-normal subgroup")

    def build() -> bool:
        order_a, order_b = lat.orders[a], lat.orders[b]
        if order_a == order_b:
            return True
        mask_a = lat.subgroups[a].mask
        between = [x for x in lat.below(b) if lat.subgroups[x].mask & mask_a == mask_a]
        section_order = order_b // order_a
        total = 1
        for block in sigma.blocks:
            if is_pi_prime_free(section_order, block):
                continue
            o = a
            for x in between:
                if is_pi_number(lat.orders[x] // order_a, block) and lat.normal_in(x, b):
                    o = lat.join_indices(o, x)
            if not is_pi_prime_free(order_b // lat.orders[o], block):
                return False
            total *= lat.orders[o] // order_a
        return total == section_order

    return bool(lat.memo(("sigma-nilpotent-section", sigma.key, b, a), build))


# -- independent singleton-partition oracles ---------------------------------

def s_permutable(H: Subgroup, G: FiniteGroup, lattice: SubgroupLattice) -> bool:
    """Whether H permutes with every Sylow subgroup of G.

    Deliberately self-contained: its own Sylow filter and its own
    product-set comparison in plain Python, so it can serve as an oracle
    for the singleton-partition level-1 predicate.
    """
    _check_lattice(G, lattice)
    if H.parent is not G:
        raise ParentMismatchError("subgroup does not live in the given group")
    mul = G.mul
    h_idx = [int(x) for x in H.indices]
    for p in prime_support(G.order):
        target = p_part(G.order, p)
        for S in lattice.subgroups:
            if S.order != target:
                continue
            s_idx = [int(x) for x in S.indices]
            hs = {int(mul[x, y]) for x in h_idx for y in s_idx}
            sh = {int(mul[y, x]) for x in h_idx for y in s_idx}
            if hs != sh:
                return False
    return True
