"""Closure generation and the multiplication-table machinery."""

from math import gcd

import pytest

from sigmaperm.errors import OrderCapError
from sigmaperm.group import (
    FiniteGroup,
    element_order,
    generate_closure,
    is_soluble,
    order_cap,
)
from sigmaperm.perm import Permutation, compose, parse_cycles


def naive_closure(gens, degree):
    """Oracle: close the set under pairwise products, no table tricks."""
    elems = {Permutation.identity(degree)}
    elems.update(gens)
    while True:
        fresh = {compose(a, b) for a in elems for b in elems} - elems
        if not fresh:
            return elems
        elems.update(fresh)


def test_closure_matches_naive_oracle_on_s4():
    gens = [parse_cycles("(1 2)", 4), parse_cycles("(1 2 3 4)", 4)]
    G = generate_closure(gens)
    oracle = naive_closure(gens, 4)
    assert G.order == len(oracle) == 24
    assert set(G.elements) == oracle


def test_closure_matches_naive_oracle_on_dihedral():
    gens = [parse_cycles("(1 2 3 4 5)", 5), parse_cycles("(2 5)(3 4)", 5)]
    G = generate_closure(gens)
    oracle = naive_closure(gens, 5)
    assert G.order == len(oracle) == 10
    assert set(G.elements) == oracle


def test_a5_has_order_60(make):
    assert make("A5").order == 60


def test_canonical_element_order(make):
    G = make("S4")
    assert G.elements[0].is_identity
    assert list(G.elements) == sorted(G.elements, key=lambda p: p.images)


def test_multiplication_table_matches_composition(make):
    G = make("S3")
    for i in range(G.order):
        for j in range(G.order):
            assert G.elements[G.mul[i, j]] == compose(G.elements[i], G.elements[j])


def test_inverse_table(make):
    G = make("D5")
    for i in range(G.order):
        assert G.mul[i, G.inv[i]] == 0
        assert G.mul[G.inv[i], i] == 0


def test_element_order_matches_direct_powers(make):
    G = make("S4")
    for i in range(G.order):
        p = G.elements[i]
        k, acc = 1, p
        while not acc.is_identity:
            acc = compose(acc, p)
            k += 1
        assert element_order(i, G) == k


def test_s4_element_order_census(make):
    G = make("S4")
    census = {}
    for i in range(G.order):
        census[element_order(i, G)] = census.get(element_order(i, G), 0) + 1
    assert census == {1: 1, 2: 9, 3: 8, 4: 6}


def test_order_cap_stops_s6():
    gens = [parse_cycles("(1 2)", 6), parse_cycles("(1 2 3 4 5 6)", 6)]
    with pytest.raises(OrderCapError) as exc:
        generate_closure(gens)
    assert str(order_cap()) in str(exc.value)


def test_explicit_order_cap_overrides_default():
    gens = [parse_cycles("(1 2 3 4 5)", 5)]
    with pytest.raises(OrderCapError):
        generate_closure(gens, max_order=4)
    assert generate_closure(gens, max_order=5).order == 5


def test_order_cap_env_override(monkeypatch):
    monkeypatch.setenv("SIGMAPERM_ORDER_CAP", "16")
    assert order_cap() == 16
    monkeypatch.delenv("SIGMAPERM_ORDER_CAP")
    assert order_cap() == 512


def test_is_abelian(make):
    assert make("C6").is_abelian()
    assert make("C2 x C4").is_abelian()
    assert not make("S3").is_abelian()
    assert not make("Q8").is_abelian()


def test_conjugate_matches_definition(make):
    G = make("S4")
    for g in range(0, G.order, 5):
        for x in range(0, G.order, 7):
            expected = G.mul[G.mul[G.inv[x], g], x]
            assert G.conjugate(g, x) == expected


def test_commutator_closure_of_s3_is_a3(make):
    import numpy as np

    G = make("S3")
    derived = G.commutator_closure(np.arange(G.order))
    assert len(derived) == 3
    assert all(element_order(int(i), G) in (1, 3) for i in derived)


def test_solubility(make):
    assert is_soluble(make("S4"))
    assert is_soluble(make("C12"))
    assert is_soluble(make("SL(2,3)"))
    assert not is_soluble(make("A5"))


def test_table_hash_distinguishes_groups(make):
    assert make("S3").table_hash() == make("S3").table_hash()
    assert make("S3").table_hash() != make("C6").table_hash()


def test_element_index_round_trips(make):
    G = make("D4")
    for i in range(G.order):
        assert G.element_index(G.elements[i]) == i


def test_generated_indices_covers_the_word_closure(make):
    G = make("S4")
    three_cycle = G.element_index(parse_cycles("(1 2 3)", 4))
    swap = G.element_index(parse_cycles("(1 2)", 4))
    assert len(G.generated_indices([three_cycle])) == 3
    assert len(G.generated_indices([three_cycle, swap])) == 6
    assert len(G.generated_indices([])) == 1
