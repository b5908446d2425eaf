"""Prime sets, Sylow and Hall machinery, O_pi operators, and projectors."""

import itertools

import pytest

from sigmaperm.errors import InvariantViolation
from sigmaperm.group import is_soluble
from sigmaperm.lattice import lattice_of, normal_subgroups, quotient
from sigmaperm.pi import (
    PrimeSet,
    gpi_projectors,
    hall_subgroups,
    has_d_pi_property,
    is_nilpotent,
    is_pi_group,
    is_pi_number,
    is_pi_prime_free,
    o_pi,
    o_upper_pi,
    p_part,
    pi_maximal_subgroups,
    prime_support,
    sylow_subgroups,
)


def subsets_of(pi):
    for r in range(len(pi) + 1):
        yield from (PrimeSet.of(c) for c in itertools.combinations(sorted(pi), r))


def pi_maximal_oracle(lat, pi):
    """Oracle: pi-subgroups with no strictly larger pi-subgroup above them."""
    members = [s for s in lat.subgroups if is_pi_number(s.order, pi)]
    return {
        h.mask
        for h in members
        if not any(h.mask != k.mask and h.is_subset_of(k) for k in members)
    }


def test_prime_set_construction_and_validation():
    assert PrimeSet.of([3, 2, 2]).primes == (2, 3)
    assert str(PrimeSet.of([5, 2])) == "2,5"
    assert str(PrimeSet.of([])) == "{}"
    with pytest.raises(ValueError):
        PrimeSet.of([4])
    with pytest.raises(ValueError):
        PrimeSet.of([1])
    with pytest.raises(ValueError):
        PrimeSet.of([-2])


def test_prime_set_ops():
    a, b = PrimeSet.of([2, 3]), PrimeSet.of([3, 5])
    assert 2 in a and 5 not in a
    assert a.intersect(b).primes == (3,)
    assert a.union(b).primes == (2, 3, 5)
    assert a.difference(b).primes == (2,)
    assert a.issubset(a.union(b))
    assert not a.isdisjoint(b)
    assert set(a) == {2, 3}
    assert len(b) == 2 and bool(b) and not bool(PrimeSet.of([]))


def test_prime_support():
    assert prime_support(60).primes == (2, 3, 5)
    assert prime_support(1).primes == ()
    assert prime_support(49).primes == (7,)


def test_pi_number_predicates():
    pi = PrimeSet.of([2, 5])
    assert is_pi_number(40, pi)
    assert is_pi_number(1, pi)
    assert not is_pi_number(6, pi)
    assert is_pi_number(1, PrimeSet.of([]))
    assert is_pi_prime_free(9, pi)
    assert not is_pi_prime_free(10, pi)
    assert p_part(360, 2) == 8
    assert p_part(360, 7) == 1


def test_pi_maximal_matches_double_loop_oracle(make):
    for spec in ["S4", "A5", "D6", "SL(2,3)"]:
        G = make(spec)
        lat = lattice_of(G)
        for pi in subsets_of(prime_support(G.order)):
            got = {h.mask for h in pi_maximal_subgroups(G, pi, lat)}
            assert got == pi_maximal_oracle(lat, pi), (spec, str(pi))


def test_pi_maximal_for_empty_pi_is_trivial(make):
    G = make("S4")
    out = pi_maximal_subgroups(G, PrimeSet.of([]), lattice_of(G))
    assert [h.order for h in out] == [1]


def test_sylow_orders_and_counts(make):
    G = make("S4")
    lat = lattice_of(G)
    two = sylow_subgroups(G, 2, lat)
    three = sylow_subgroups(G, 3, lat)
    assert [h.order for h in two] == [8, 8, 8]
    assert [h.order for h in three] == [3, 3, 3, 3]
    A5 = make("A5")
    latA = lattice_of(A5)
    assert [len(sylow_subgroups(A5, p, latA)) for p in (2, 3, 5)] == [5, 10, 6]


def test_sylow_counts_satisfy_the_congruence(make):
    for spec in ["S4", "A5", "D6", "Q8", "C12"]:
        G = make(spec)
        lat = lattice_of(G)
        for p in prime_support(G.order):
            n_p = len(sylow_subgroups(G, p, lat))
            assert n_p % p == 1
            assert G.order % n_p == 0


def test_hall_subgroups_exist_exactly_when_order_fits(make):
    G = make("A5")
    lat = lattice_of(G)
    assert [h.order for h in hall_subgroups(G, PrimeSet.of([2, 3]), lat)] == [12] * 5
    assert hall_subgroups(G, PrimeSet.of([2, 5]), lat) == []
    assert hall_subgroups(G, PrimeSet.of([3, 5]), lat) == []
    whole = hall_subgroups(G, PrimeSet.of([2, 3, 5]), lat)
    assert [h.order for h in whole] == [60]


def test_hall_subgroups_on_soluble_groups_exist_for_every_pi(catalog24):
    for gid, G in catalog24:
        if not is_soluble(G):
            continue
        lat = lattice_of(G)
        for pi in subsets_of(prime_support(G.order)):
            halls = hall_subgroups(G, pi, lat)
            assert halls, (gid, str(pi))
            want = 1
            for p in pi:
                want *= p_part(G.order, p)
            assert all(h.order == want for h in halls)


def o_pi_oracle(G, pi):
    normals = [s for s in normal_subgroups(G) if is_pi_group(s, pi)]
    best = max(normals, key=lambda s: s.order)
    assert all(s.is_subset_of(best) for s in normals)
    return best.mask


def o_upper_oracle(G, pi):
    normals = [
        s for s in normal_subgroups(G) if is_pi_number(G.order // s.order, pi)
    ]
    best = min(normals, key=lambda s: s.order)
    assert all(best.is_subset_of(s) for s in normals)
    return best.mask


def test_o_pi_matches_normal_subgroup_oracle(make):
    for spec in ["S4", "A4", "D6", "SL(2,3)", "C12", "A5"]:
        G = make(spec)
        lat = lattice_of(G)
        for pi in subsets_of(prime_support(G.order)):
            assert o_pi(G, pi, lat).mask == o_pi_oracle(G, pi), (spec, str(pi))
            assert o_upper_pi(G, pi, lat).mask == o_upper_oracle(G, pi), (spec, str(pi))


def test_o_pi_spot_values(make):
    G = make("S4")
    lat = lattice_of(G)
    assert o_pi(G, PrimeSet.of([2]), lat).order == 4
    assert o_upper_pi(G, PrimeSet.of([2]), lat).order == 12
    A4 = make("A4")
    latA = lattice_of(A4)
    assert o_pi(A4, PrimeSet.of([2]), latA).order == 4
    assert o_upper_pi(A4, PrimeSet.of([2]), latA).order == 12
    assert o_upper_pi(A4, PrimeSet.of([3]), latA).order == 4


def projector_oracle_masks(G, pi):
    """Oracle: image must be pi-maximal in every true quotient group."""
    maps = [quotient(G, N) for N in normal_subgroups(G)]
    out = set()
    for H in lattice_of(G).subgroups:
        ok = True
        for qm in maps:
            img = qm.image(H)
            if img.mask not in pi_maximal_oracle(lattice_of(qm.quotient), pi):
                ok = False
                break
        if ok:
            out.add(H.mask)
    return out


def test_projectors_match_quotient_definition_oracle(make):
    for spec in ["S4", "A4", "D6", "C12", "SL(2,3)", "A5"]:
        G = make(spec)
        lat = lattice_of(G)
        for pi in subsets_of(prime_support(G.order)):
            got = {h.mask for h in gpi_projectors(G, pi, lat)}
            assert got == projector_oracle_masks(G, pi), (spec, str(pi))


def test_projectors_equal_halls_on_soluble_groups(catalog24):
    for gid, G in catalog24:
        if not is_soluble(G):
            continue
        lat = lattice_of(G)
        for pi in subsets_of(prime_support(G.order)):
            proj = {h.mask for h in gpi_projectors(G, pi, lat)}
            halls = {h.mask for h in hall_subgroups(G, pi, lat)}
            assert proj == halls, (gid, str(pi))


def test_a5_projectors_for_two_five(make):
    G = make("A5")
    proj = gpi_projectors(G, PrimeSet.of([2, 5]), lattice_of(G))
    assert sorted(h.order for h in proj) == [4] * 5 + [10] * 6


def test_projectors_are_never_empty(catalog24):
    for gid, G in catalog24:
        lat = lattice_of(G)
        for pi in subsets_of(prime_support(G.order)):
            assert gpi_projectors(G, pi, lat), (gid, str(pi))


def test_d_pi_property_cases(make):
    A5 = make("A5")
    lat = lattice_of(A5)
    verdicts = {
        str(pi): has_d_pi_property(A5, pi, lat)
        for pi in subsets_of(prime_support(60))
    }
    assert verdicts == {
        "{}": True, "2": True, "3": True, "5": True,
        "2,3": False, "2,5": False, "3,5": False, "2,3,5": True,
    }
    S4 = make("S4")
    latS = lattice_of(S4)
    assert all(
        has_d_pi_property(S4, pi, latS) for pi in subsets_of(prime_support(24))
    )


def test_nilpotency(make):
    for spec, want in [
        ("C12", True), ("D4", True), ("Q8", True), ("C2 x C6", True),
        ("S3", False), ("A4", False), ("D6", False), ("SL(2,3)", False),
    ]:
        G = make(spec)
        assert is_nilpotent(G, lattice_of(G)) == want, spec
