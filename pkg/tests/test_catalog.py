"""Group constructors, spec grammars, invariants, and catalog assembly."""

from collections import Counter

import pytest

from sigmaperm.errors import (
    CycleParseError,
    DegreeCapError,
    GroupSpecError,
    OrderCapError,
    SigmaError,
)
from sigmaperm.catalog import (
    SigmaSpec,
    abelian_invariants,
    build_group,
    catalog,
    format_group_spec,
    parse_group_spec,
    parse_sigma_spec,
    spec_order,
)
from sigmaperm.group import element_order
from sigmaperm.lattice import lattice_of


def test_named_constructor_orders(make):
    for spec, order in [
        ("C1", 1), ("C7", 7), ("S1", 1), ("S2", 2), ("S4", 24),
        ("A4", 12), ("A5", 60), ("D1", 2), ("D2", 4), ("D4", 8),
        ("D6", 12), ("Q8", 8), ("SL(2,3)", 24),
    ]:
        assert make(spec).order == order, spec


def test_product_orders_multiply(make):
    assert make("S3 x C2").order == 12
    assert make("C2 x C2 x C2").order == 8
    assert make("D5 x C3").order == 30


def test_spec_round_trip():
    for text in ["C6", "D12", "S4", "Q8", "SL(2,3)", "C2xD4", "A4xC2"]:
        spec = parse_group_spec(text)
        assert format_group_spec(parse_group_spec(format_group_spec(spec))) == (
            format_group_spec(spec)
        )


def test_spec_parsing_normalizes_case_and_spaces():
    assert format_group_spec(parse_group_spec(" s4 ")) == "S4"
    assert format_group_spec(parse_group_spec("c2 x d4")) == "C2xD4"
    assert format_group_spec(parse_group_spec("sl23")) == "SL(2,3)"


def test_spec_order_prediction(make):
    for text in ["C6", "D12", "S4", "Q8", "SL(2,3)", "C2xD4", "A4xC2"]:
        spec = parse_group_spec(text)
        assert spec_order(spec) == build_group(text).order
    assert spec_order(parse_group_spec("perm[3]:(1 2)")) is None


def test_explicit_generator_specs():
    G = build_group("perm[4]:(1 2);(1 2 3 4)")
    assert G.order == 24
    H = build_group("perm[5]:(1 2 3 4 5)")
    assert H.order == 5


def test_bad_specs_are_rejected():
    for text in ["", "E7", "C0", "Dx", "Q16", "C2 y C3", "perm[4]:", "perm[4]"]:
        with pytest.raises(GroupSpecError):
            parse_group_spec(text)
    with pytest.raises(CycleParseError):
        build_group("perm[4]:(1 2")
    with pytest.raises(CycleParseError):
        build_group("perm[4]:(1 5)")


def test_caps_are_enforced():
    with pytest.raises(OrderCapError):
        build_group("C513")
    with pytest.raises(OrderCapError):
        build_group("S5 x S5")
    with pytest.raises(DegreeCapError):
        build_group("C65")
    with pytest.raises(DegreeCapError):
        build_group("C2 x C63")


def test_quaternion_group_shape(make):
    G = make("Q8")
    assert G.order == 8
    assert sum(1 for i in range(8) if element_order(i, G) == 2) == 1
    assert sorted(s.order for s in lattice_of(G).subgroups) == [1, 2, 4, 4, 4, 8]


def test_special_linear_group_shape(make):
    G = make("SL(2,3)")
    assert G.order == 24
    assert sum(1 for i in range(24) if element_order(i, G) == 2) == 1
    orders = sorted(s.order for s in lattice_of(G).subgroups)
    assert orders == [1, 2, 3, 3, 3, 3, 4, 4, 4, 6, 6, 6, 6, 8, 24]
    assert 12 not in orders


def test_abelian_invariants_spot_values(make):
    for spec, want in [
        ("C1", ()), ("C6", (6,)), ("C2 x C4", (2, 4)), ("C2 x C2 x C3", (2, 6)),
        ("S4", (2,)), ("A4", (3,)), ("Q8", (2, 2)), ("SL(2,3)", (3,)),
        ("D4", (2, 2)), ("D6", (2, 2)), ("D3", (2,)),
    ]:
        assert abelian_invariants(make(spec)) == want, spec


def test_abelian_invariants_divide_in_sequence(catalog24):
    for gid, G in catalog24:
        inv = abelian_invariants(G)
        for a, b in zip(inv, inv[1:]):
            assert b % a == 0, gid


def test_abelian_invariants_match_element_order_census(catalog24, make):
    # two abelian groups are isomorphic iff the element-order census agrees
    for gid, G in catalog24:
        if not G.is_abelian():
            continue
        inv = abelian_invariants(G)
        rebuilt = make(" x ".join(f"C{d}" for d in inv)) if inv else make("C1")
        census = lambda H: Counter(element_order(i, H) for i in range(H.order))
        assert census(rebuilt) == census(G), gid


def test_catalog_24_contents(catalog24):
    assert [gid for gid, _ in catalog24] == [
        "C1", "C2", "C3", "C4", "D2", "C5", "C6", "D3", "C7", "C2xC2xC2",
        "C2xC4", "C8", "D4", "Q8", "C3xC3", "C9", "C10", "D5", "C11", "A4",
        "C12", "C2xC2xC3", "D6", "C13", "C14", "D7", "C15", "C16",
        "C2xC2xC2xC2", "C2xC2xC4", "C2xC8", "C2xD4", "C2xQ8", "C4xC4", "D8",
        "C17", "C18", "C2xC3xC3", "C3xD3", "D9", "C19", "C20", "C2xC10",
        "D10", "C21", "C22", "D11", "C23", "C24", "C2xA4", "C2xC12",
        "C2xC2xC2xC3", "C2xC2xD3", "C3xD4", "C3xQ8", "C4xD3", "D12", "S4",
        "SL(2,3)",
    ]


def test_catalog_entries_are_deduplicated_and_ordered(catalog60):
    fingerprints = set()
    last_order = 0
    for gid, G in catalog60:
        assert G.order <= 60
        assert G.order >= last_order
        last_order = G.order
        fp = (G.order, abelian_invariants(G), len(lattice_of(G)))
        assert fp not in fingerprints, gid
        fingerprints.add(fp)


def test_catalog_is_deterministic():
    a = [gid for gid, _ in catalog(16)]
    b = [gid for gid, _ in catalog(16)]
    assert a == b


def test_catalog_rejects_nonpositive_cap():
    with pytest.raises(ValueError):
        catalog(0)


def test_sigma_spec_grammar(make):
    assert parse_sigma_spec("s1").singletons
    blocks = parse_sigma_spec("2,3|5")
    assert [tuple(b) for b in blocks.blocks] == [(2, 3), (5,)]
    spread = parse_sigma_spec("2|*")
    assert spread.collect_rest
    D15 = make("D15")
    assert str(spread.resolve(D15)) == "2|3,5"
    assert str(parse_sigma_spec("s1").resolve(D15)) == "2|3|5"
    assert str(parse_sigma_spec("2,3,5").resolve(D15)) == "2,3,5"


def test_sigma_spec_rejects_bad_text():
    for text in ["", "2|2", "4", "2||3", "*|2", "2,x", "s1|2"]:
        with pytest.raises(SigmaError):
            parse_sigma_spec(text)


def test_sigma_spec_resolve_checks_coverage(make):
    with pytest.raises(SigmaError):
        parse_sigma_spec("2|5").resolve(make("D15"))
