"""Prime-set machinery: Sylow and Hall subgroups, O_pi, O^pi, projectors.

Everything here runs against a complete SubgroupLattice.  The public
functions answer for the whole group; the _*_in variants answer inside an
arbitrary member subgroup and are shared with the verification harness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvariantViolation, ParentMismatchError
from .group import FiniteGroup
from .lattice import Subgroup, SubgroupLattice


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeSet:
    """Sorted, duplicate-free set of primes."""

    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError(f"primes {self.primes!r} must be sorted and duplicate-free")
        for p in self.primes:
            if not _is_prime(p):
                raise ValueError(f"{p} is not a prime")

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(tuple(sorted(set(int(p) for p in primes))))

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __bool__(self) -> bool:
        return bool(self.primes)

    def issubset(self, other: "PrimeSet") -> bool:
        return set(self.primes) <= set(other.primes)

    def isdisjoint(self, other: "PrimeSet") -> bool:
        return set(self.primes).isdisjoint(other.primes)

    def intersect(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet.of(set(self.primes) & set(other.primes))

    def union(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet.of(set(self.primes) | set(other.primes))

    def difference(self, other: "PrimeSet") -> "PrimeSet":
        return PrimeSet.of(set(self.primes) - set(other.primes))

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.primes) if self.primes else "{}"


def prime_support(n: int) -> PrimeSet:
    """The set of primes dividing n; empty for n = 1."""
    if n < 1:
        raise ValueError(f"positive integer required, got {n}")
    out = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return PrimeSet(tuple(out))


def is_pi_number(n: int, pi: PrimeSet) -> bool:
    """Whether every prime divisor of n lies in pi (1 counts for every pi)."""
    m = n
    for p in pi:
        while m % p == 0:
            m //= p
    return m == 1


def is_pi_prime_free(n: int, pi: PrimeSet) -> bool:
    """Whether no prime of pi divides n (n is a pi'-number)."""
    return all(n % p != 0 for p in pi)


def is_pi_group(H: Subgroup, pi: PrimeSet) -> bool:
    return is_pi_number(H.order, pi)


def p_part(n: int, p: int) -> int:
    part = 1
    while n % p == 0:
        n //= p
        part *= p
    return part


def _check_lattice(G: FiniteGroup, lattice: SubgroupLattice) -> None:
    if lattice.group is not G:
        raise ParentMismatchError("lattice was built for a different group")


# -- relative forms, shared with the harness ------------------------------

def _pi_subgroups_in(lat: SubgroupLattice, pi: PrimeSet, b: int) -> list[int]:
    return [i for i in lat.below(b) if is_pi_number(lat.orders[i], pi)]


def _pi_maximal_in(lat: SubgroupLattice, pi: PrimeSet, b: int) -> list[int]:
    """Members maximal among the pi-subgroups of subgroup b."""
    def build() -> tuple[int, ...]:
        candidates = _pi_subgroups_in(lat, pi, b)
        # Descending by order: a non-maximal member always sits inside an
        # already accepted maximal one, so one containment scan suffices.
        accepted: list[int] = []
        for i in sorted(candidates, key=lambda k: -lat.orders[k]):
            mask = lat.subgroups[i].mask
            if not any(mask & lat.subgroups[j].mask == mask for j in accepted):
                accepted.append(i)
        return tuple(sorted(accepted))

    return list(lat.memo(("pi-maximal", pi, b), build))


def _sylow_in(lat: SubgroupLattice, p: int, b: int) -> list[int]:
    target = p_part(lat.orders[b], p)
    return [i for i in lat.below(b) if lat.orders[i] == target]


def _hall_in(lat: SubgroupLattice, pi: PrimeSet, b: int) -> list[int]:
    order_b = lat.orders[b]
    return [
        i
        for i in lat.below(b)
        if is_pi_number(lat.orders[i], pi) and is_pi_prime_free(order_b // lat.orders[i], pi)
    ]


def _o_pi_in(lat: SubgroupLattice, pi: PrimeSet, b: int) -> int:
    """Index of the largest normal pi-subgroup of subgroup b."""
    def build() -> int:
        acc = lat.trivial_index
        for i in lat.below(b):
            if is_pi_number(lat.orders[i], pi) and lat.normal_in(i, b):
                acc = lat.join_indices(acc, i)
        return acc

    return lat.memo(("o-pi", pi, b), build)


def _o_upper_pi_in(lat: SubgroupLattice, pi: PrimeSet, b: int) -> int:
    """Index of the smallest normal subgroup of b with pi-number index in b."""
    def build() -> int:
        order_b = lat.orders[b]
        mask = lat.subgroups[b].mask
        for i in lat.below(b):
            if is_pi_number(order_b // lat.orders[i], pi) and lat.normal_in(i, b):
                mask &= lat.subgroups[i].mask
        return lat.index_of_mask(mask)

    return lat.memo(("o-upper-pi", pi, b), build)


def _has_d_pi_in(lat: SubgroupLattice, pi: PrimeSet, b: int) -> bool:
    """Hall pi-subgroups of b exist, are conjugate in b, and absorb all pi-subgroups."""
    def build() -> bool:
        halls = _hall_in(lat, pi, b)
        if not halls:
            return False
        orbit = lat.conjugates_in(halls[0], b)
        if orbit != set(halls):
            return False
        hall_masks = [lat.subgroups[i].mask for i in halls]
        for i in _pi_subgroups_in(lat, pi, b):
            mask = lat.subgroups[i].mask
            if not any(mask & hm == mask for hm in hall_masks):
                return False
        return True

    return lat.memo(("d-pi", pi, b), build)


def _projector_indices(lat: SubgroupLattice, pi: PrimeSet) -> tuple[int, ...]:
    """Projector members for the class of all pi-groups.

    H qualifies when HN/N is a maximal pi-subgroup of G/N for every normal
    N.  By the correspondence between subgroups of G/N and subgroups of G
    above N, that holds exactly when no Y > HN with Y >= N has pi-number
    index over N, which this scans for without rebuilding quotients.
    """
    def build() -> tuple[int, ...]:
        whole = lat.whole_index
        normals = [i for i, f in enumerate(lat.normal_flags) if f]
        out = []
        for h in _pi_maximal_in(lat, pi, whole):
            if h == whole:
                out.append(h)
                continue
            good = True
            for n_idx in normals:
                hn = lat.join_indices(h, n_idx)
                if hn == whole:
                    continue
                hn_mask = lat.subgroups[hn].mask
                order_n = lat.orders[n_idx]
                found_larger = False
                for y in range(hn + 1, len(lat.subgroups)):
                    if lat.orders[y] <= lat.orders[hn]:
                        continue
                    y_mask = lat.subgroups[y].mask
                    if y_mask & hn_mask == hn_mask and is_pi_number(lat.orders[y] // order_n, pi):
                        found_larger = True
                        break
                if found_larger:
                    good = False
                    break
            if good:
                out.append(h)
        if not out:
            raise InvariantViolation(
                f"no projector found for pi={pi}; projectors always exist, so this is a bug"
            )
        return tuple(sorted(out))

    return lat.memo(("projectors", pi), build)


# -- whole-group interface -------------------------------------------------

def pi_maximal_subgroups(G: FiniteGroup, pi: PrimeSet, lattice: SubgroupLattice) -> list[Subgroup]:
    """Subgroups maximal among all pi-subgroups of G (never empty)."""
    _check_lattice(G, lattice)
    return [lattice.subgroups[i] for i in _pi_maximal_in(lattice, pi, lattice.whole_index)]


def sylow_subgroups(G: FiniteGroup, p: int, lattice: SubgroupLattice) -> list[Subgroup]:
    """Subgroups whose order is the full p-part of |G| ({1} when p does not divide)."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not a prime")
    _check_lattice(G, lattice)
    return [lattice.subgroups[i] for i in _sylow_in(lattice, p, lattice.whole_index)]


def hall_subgroups(G: FiniteGroup, pi: PrimeSet, lattice: SubgroupLattice) -> list[Subgroup]:
    """pi-subgroups with pi-free index; may be empty for insoluble groups."""
    _check_lattice(G, lattice)
    return [lattice.subgroups[i] for i in _hall_in(lattice, pi, lattice.whole_index)]


def o_pi(G: FiniteGroup, pi: PrimeSet, lattice: SubgroupLattice) -> Subgroup:
    """The largest normal pi-subgroup of G."""
    _check_lattice(G, lattice)
    return lattice.subgroups[_o_pi_in(lattice, pi, lattice.whole_index)]


def o_upper_pi(G: FiniteGroup, pi: PrimeSet, lattice: SubgroupLattice) -> Subgroup:
    """The smallest normal subgroup whose quotient is a pi-group."""
    _check_lattice(G, lattice)
    return lattice.subgroups[_o_upper_pi_in(lattice, pi, lattice.whole_index)]


def gpi_projectors(G: FiniteGroup, pi: PrimeSet, lattice: SubgroupLattice) -> list[Subgroup]:
    """Projectors of G for the class of pi-groups (never empty)."""
    _check_lattice(G, lattice)
    return [lattice.subgroups[i] for i in _projector_indices(lattice, pi)]


def has_d_pi_property(G: FiniteGroup, pi: PrimeSet, lattice: SubgroupLattice) -> bool:
    """Hall pi-subgroups exist, are conjugate, and contain every pi-subgroup."""
    _check_lattice(G, lattice)
    return _has_d_pi_in(lattice, pi, lattice.whole_index)


def is_nilpotent(G: FiniteGroup, lattice: SubgroupLattice) -> bool:
    """Whether every Sylow subgroup is normal."""
    _check_lattice(G, lattice)
    return _is_nilpotent_in(lattice, lattice.whole_index)


def _is_nilpotent_in(lat: SubgroupLattice, b: int) -> bool:
    def build() -> bool:
        for p in prime_support(lat.orders[b]):
            for i in _sylow_in(lat, p, b):
                if not lat.normal_in(i, b):
                    return False
        return True

    return lat.memo(("nilpotent", b), build)
