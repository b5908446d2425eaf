"""Named group constructors, spec strings, and the scan catalog.

Spec grammar:
  C<n>                cyclic of order n
  D<n>                dihedral of order 2n (n >= 1)
  S<n>, A<n>          symmetric / alternating on n points
  Q8, SL(2,3)         the two named exceptional constructors
  <spec>x<spec>x...   direct product of named constructors, disjoint points
  perm[<n>]:<cycles>;<cycles>;...   explicit generators on n points

Partition specs ("sigma specs"):
  s1                  one block per prime of the group
  2,3|5               explicit blocks, primes comma-separated, blocks bar-separated
  2|*                 a trailing * collects every remaining prime into one block
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Optional

import numpy as np

from .errors import DegreeCapError, GroupSpecError, InvariantViolation, OrderCapError, SigmaError
from .group import FiniteGroup, generate_closure, order_cap
from .lattice import Subgroup, lattice_of, quotient, subgroup_from_indices
from .perm import DEGREE_CAP, Permutation, parse_cycles
from .pi import PrimeSet, _is_prime, prime_support
from .sigma import SigmaPartition, canonicalize_sigma, singleton_partition


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "named" | "product" | "perm"
    name: str = ""
    factors: tuple["GroupSpec", ...] = ()
    degree: int = 0
    gens: tuple[str, ...] = ()


_NAMED_RE = re.compile(r"^(C|D|S|A)(\d+)$")
_PERM_RE = re.compile(r"^perm\[(\d+)\]:(.*)$", re.DOTALL)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse a group spec string; see the module docstring for the grammar."""
    raw = text.strip()
    if not raw:
        raise GroupSpecError("empty group spec")
    if raw.lower().startswith("perm["):
        m = _PERM_RE.match(raw if raw.startswith("perm") else raw.lower())
        if not m:
            raise GroupSpecError(f"malformed perm spec {text!r}")
        degree = int(m.group(1))
        gens = tuple(part.strip() for part in m.group(2).split(";") if part.strip())
        if not gens:
            raise GroupSpecError("perm spec needs at least one generator")
        return GroupSpec(kind="perm", degree=degree, gens=gens)
    parts = raw.split("x")
    if len(parts) > 1:
        factors = tuple(_parse_named(p) for p in parts)
        return GroupSpec(kind="product", factors=factors)
    return _parse_named(raw)


def _parse_named(text: str) -> GroupSpec:
    raw = text.strip().upper()
    if not raw:
        raise GroupSpecError(f"empty factor in group spec")
    if raw == "Q8":
        return GroupSpec(kind="named", name="Q8")
    if raw in ("SL(2,3)", "SL23"):
        return GroupSpec(kind="named", name="SL(2,3)")
    m = _NAMED_RE.match(raw)
    if not m:
        raise GroupSpecError(f"unknown group spec {text!r}")
    family, num = m.group(1), int(m.group(2))
    if num < 1:
        raise GroupSpecError(f"index must be positive in {text!r}")
    return GroupSpec(kind="named", name=f"{family}{num}")


def format_group_spec(spec: GroupSpec) -> str:
    if spec.kind == "named":
        return spec.name
    if spec.kind == "product":
        return "x".join(format_group_spec(f) for f in spec.factors)
    return f"perm[{spec.degree}]:" + ";".join(spec.gens)


def _named_order(name: str) -> int:
    if name == "Q8":
        return 8
    if name == "SL(2,3)":
        return 24
    family, num = name[0], int(name[1:])
    if family == "C":
        return num
    if family == "D":
        return 2 * num
    if family == "S":
        return factorial(num)
    return max(factorial(num) // 2, 1)


def spec_order(spec: GroupSpec) -> Optional[int]:
    """Predicted order, or None for explicit perm specs."""
    if spec.kind == "named":
        return _named_order(spec.name)
    if spec.kind == "product":
        total = 1
        for f in spec.factors:
            total *= spec_order(f)
        return total
    return None


def _named_degree(name: str) -> int:
    """Points used by a named constructor, computed without building anything."""
    if name in ("Q8", "SL(2,3)"):
        return 8
    family, num = name[0], int(name[1:])
    if family == "D":
        return 2 if num == 1 else (4 if num == 2 else num)
    return max(num, 1)


def _cyclic_gens(n: int, offset: int = 0) -> list[Permutation]:
    if n == 1:
        return [Permutation.identity(offset + 1)] if offset == 0 else []
    images = list(range(1, offset + n + 1))
    images[offset:] = list(range(offset + 2, offset + n + 1)) + [offset + 1]
    return [Permutation(tuple(images))]


def _named_generators(name: str, degree_offset: int = 0) -> tuple[list[Permutation], int]:
    """(generators shifted by degree_offset, points used)."""
    def shifted(cycles: str, degree: int) -> Permutation:
        base = parse_cycles(cycles, degree)
        images = list(range(1, degree_offset + degree + 1))
        for k, img in enumerate(base.images, start=1):
            images[degree_offset + k - 1] = degree_offset + img
        return Permutation(tuple(images))

    if name == "Q8":
        return [shifted("(1 2 5 6)(3 8 7 4)", 8), shifted("(1 3 5 7)(2 4 6 8)", 8)], 8
    if name == "SL(2,3)":
        vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
        position = {v: i + 1 for i, v in enumerate(vectors)}

        def action(matrix) -> Permutation:
            images = list(range(1, degree_offset + 8 + 1))
            for v, i in position.items():
                w = (
                    (matrix[0][0] * v[0] + matrix[0][1] * v[1]) % 3,
                    (matrix[1][0] * v[0] + matrix[1][1] * v[1]) % 3,
                )
                images[degree_offset + i - 1] = degree_offset + position[w]
            return Permutation(tuple(images))

        return [action(((0, 2), (1, 0))), action(((1, 1), (0, 1)))], 8

    family, num = name[0], int(name[1:])
    if family == "C":
        if num == 1:
            return [Permutation.identity(degree_offset + 1)], 1
        return [shifted("(" + " ".join(str(i) for i in range(1, num + 1)) + ")", num)], num
    if family == "D":
        if num == 1:
            return [shifted("(1 2)", 2)], 2
        if num == 2:
            return [shifted("(1 2)", 4), shifted("(3 4)", 4)], 4
        rot = "(" + " ".join(str(i) for i in range(1, num + 1)) + ")"
        flip_pairs = "".join(f"({i} {num + 2 - i})" for i in range(2, num // 2 + 2) if i != num + 2 - i)
        return [shifted(rot, num), shifted(flip_pairs, num)], num
    if family == "S":
        if num == 1:
            return [Permutation.identity(degree_offset + 1)], 1
        if num == 2:
            return [shifted("(1 2)", 2)], 2
        cycle = "(" + " ".join(str(i) for i in range(1, num + 1)) + ")"
        return [shifted("(1 2)", num), shifted(cycle, num)], num
    if family == "A":
        if num <= 2:
            return [Permutation.identity(degree_offset + num)], num
        if num == 3:
            return [shifted("(1 2 3)", 3)], 3
        if num % 2 == 1:
            cycle = "(" + " ".join(str(i) for i in range(1, num + 1)) + ")"
        else:
            cycle = "(" + " ".join(str(i) for i in range(2, num + 1)) + ")"
        return [shifted("(1 2 3)", num), shifted(cycle, num)], num
    raise GroupSpecError(f"unknown named group {name!r}")


def build_group(spec: GroupSpec | str) -> FiniteGroup:
    """Materialise a spec; orders of named specs are asserted after closure."""
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    if spec.kind == "perm":
        if spec.degree < 1:
            raise GroupSpecError("perm spec degree must be at least 1")
        if spec.degree > DEGREE_CAP:
            raise DegreeCapError(f"degree {spec.degree} exceeds the cap of {DEGREE_CAP}")
        gens = [parse_cycles(text, spec.degree) for text in spec.gens]
        return generate_closure(gens)

    expected = spec_order(spec)
    if expected > order_cap():
        raise OrderCapError(
            f"{format_group_spec(spec)} has order {expected}, beyond the cap of {order_cap()}"
        )
    factors = spec.factors if spec.kind == "product" else (spec,)
    needed = sum(_named_degree(f.name) for f in factors)
    if needed > DEGREE_CAP:
        raise DegreeCapError(
            f"{format_group_spec(spec)} needs {needed} points, beyond the cap of {DEGREE_CAP}"
        )
    gens: list[Permutation] = []
    offset = 0
    for f in factors:
        f_gens, used = _named_generators(f.name, offset)
        gens.extend(f_gens)
        offset += used
    # pad every generator to the full degree
    padded = []
    for p in gens:
        images = list(p.images) + list(range(p.degree + 1, offset + 1))
        padded.append(Permutation(tuple(images)))
    G = generate_closure(padded)
    if G.order != expected:
        raise InvariantViolation(
            f"{format_group_spec(spec)} built with order {G.order}, expected {expected}"
        )
    return G


# -- invariants used for catalog dedup ---------------------------------------

def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of the abelianisation of G."""
    derived = G.commutator_closure(np.arange(G.order))
    if derived.size == G.order:
        return ()
    A = quotient(G, subgroup_from_indices(G, derived)).quotient
    orders = [A.element_order(g) for g in range(A.order)]
    per_prime: dict[int, list[int]] = {}
    for p in prime_support(A.order):
        counts = []
        k = 1
        while True:
            torsion = sum(1 for o in orders if p ** k % o == 0)
            s_k = 0
            while p ** s_k < torsion:
                s_k += 1
            counts.append(s_k)
            if p ** k >= A.order or (len(counts) > 1 and counts[-1] == counts[-2]):
                break
            k += 1
        parts_geq = [counts[0]] + [counts[i] - counts[i - 1] for i in range(1, len(counts))]
        values = []
        i = 1
        while True:
            lam = sum(1 for m in parts_geq if m >= i)
            if lam == 0:
                break
            values.append(p ** lam)
            i += 1
        per_prime[p] = sorted(values, reverse=True)
    width = max(len(v) for v in per_prime.values())
    factors = []
    for j in range(width):
        d = 1
        for p, values in per_prime.items():
            if j < len(values):
                d *= values[j]
        factors.append(d)
    return tuple(sorted(factors))


# -- the catalog ---------------------------------------------------------------

_KIND_RANK = {"named": 0, "product": 1, "perm": 2}


def _atoms(max_order: int) -> list[GroupSpec]:
    out = []
    for n in range(1, max_order + 1):
        out.append(GroupSpec("named", name=f"C{n}"))
    n = 1
    while 2 * n <= max_order:
        if n >= 2:
            out.append(GroupSpec("named", name=f"D{n}"))
        n += 1
    n = 3
    while factorial(n) <= max_order:
        out.append(GroupSpec("named", name=f"S{n}"))
        n += 1
    n = 4
    while factorial(n) // 2 <= max_order:
        out.append(GroupSpec("named", name=f"A{n}"))
        n += 1
    if max_order >= 8:
        out.append(GroupSpec("named", name="Q8"))
    if max_order >= 24:
        out.append(GroupSpec("named", name="SL(2,3)"))
    return out


def _product_specs(atoms: list[GroupSpec], max_order: int):
    ordered = sorted(atoms, key=lambda a: (_named_order(a.name), a.name))
    ordered = [a for a in ordered if _named_order(a.name) >= 2]

    def degree_of(spec: GroupSpec) -> int:
        return _named_degree(spec.name)

    def walk(start: int, chosen: list[GroupSpec], order: int, degree: int):
        if len(chosen) >= 2:
            yield GroupSpec("product", factors=tuple(chosen))
        for k in range(start, len(ordered)):
            atom = ordered[k]
            new_order = order * _named_order(atom.name)
            if new_order > max_order:
                continue
            new_degree = degree + degree_of(atom)
            if new_degree > DEGREE_CAP:
                continue
            yield from walk(k, chosen + [atom], new_order, new_degree)

    yield from walk(0, [], 1, 0)


def catalog(max_order: int) -> list[tuple[str, FiniteGroup]]:
    """Representatives of the named groups and their direct products.

    Deduplicated by the fingerprint (order, abelian invariants, subgroup
    count); subgroup counts are only computed inside ambiguous buckets.
    Deterministic: sorted by (order, spec string).
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    atoms = [
        a for a in _atoms(max_order)
        if _named_order(a.name) <= max_order and _named_degree(a.name) <= DEGREE_CAP
    ]
    specs = list(atoms)
    specs.extend(_product_specs(atoms, max_order))

    built: list[tuple[GroupSpec, FiniteGroup]] = []
    seen_specs: set[str] = set()
    for spec in specs:
        text = format_group_spec(spec)
        if text in seen_specs:
            continue
        seen_specs.add(text)
        built.append((spec, build_group(spec)))

    buckets: dict[tuple, list[tuple[GroupSpec, FiniteGroup]]] = {}
    for spec, G in built:
        buckets.setdefault((G.order, abelian_invariants(G)), []).append((spec, G))

    chosen: list[tuple[str, FiniteGroup]] = []
    for key in sorted(buckets):
        bucket = buckets[key]
        bucket.sort(key=lambda sg: (_KIND_RANK[sg[0].kind], format_group_spec(sg[0])))
        if len(bucket) == 1:
            spec, G = bucket[0]
            chosen.append((format_group_spec(spec), G))
            continue
        by_count: dict[int, tuple[GroupSpec, FiniteGroup]] = {}
        for spec, G in bucket:
            count = len(lattice_of(G))
            if count not in by_count:
                by_count[count] = (spec, G)
        for count in sorted(by_count):
            spec, G = by_count[count]
            chosen.append((format_group_spec(spec), G))

    chosen.sort(key=lambda sg: (sg[1].order, sg[0]))
    return chosen


# -- partition specs -----------------------------------------------------------

@dataclass(frozen=True)
class SigmaSpec:
    singletons: bool = False
    blocks: tuple[PrimeSet, ...] = ()
    collect_rest: bool = False

    def resolve(self, G: FiniteGroup) -> SigmaPartition:
        if self.singletons:
            return singleton_partition(G)
        blocks = list(self.blocks)
        if self.collect_rest:
            named = set()
            for b in blocks:
                named |= set(b.primes)
            rest = [p for p in prime_support(G.order) if p not in named]
            if rest:
                blocks.append(PrimeSet.of(rest))
        return canonicalize_sigma(blocks, G)


def parse_sigma_spec(text: str) -> SigmaSpec:
    """Parse a partition spec; see the module docstring for the grammar."""
    raw = text.strip()
    if not raw:
        raise SigmaError("empty partition spec")
    if raw.lower() == "s1":
        return SigmaSpec(singletons=True)
    parts = raw.split("|")
    collect_rest = False
    if parts and parts[-1].strip() == "*":
        collect_rest = True
        parts = parts[:-1]
        if not parts:
            raise SigmaError("a bare * is not a partition spec")
    blocks = []
    seen: set[int] = set()
    for part in parts:
        tokens = [t.strip() for t in part.split(",")]
        if not any(tokens):
            raise SigmaError(f"empty block in partition spec {text!r}")
        primes = []
        for tok in tokens:
            if not tok:
                raise SigmaError(f"empty prime in partition spec {text!r}")
            try:
                p = int(tok)
            except ValueError:
                raise SigmaError(f"bad prime {tok!r} in partition spec {text!r}") from None
            if not _is_prime(p):
                raise SigmaError(f"{p} is not a prime")
            if p in seen:
                raise SigmaError(f"prime {p} appears in two blocks")
            seen.add(p)
            primes.append(p)
        blocks.append(PrimeSet.of(primes))
    return SigmaSpec(blocks=tuple(blocks), collect_rest=collect_rest)
