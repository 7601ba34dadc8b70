import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elltowers import (
    CharacterIndex,
    CharacterOrbit,
    VanishingLValueError,
    VoltageSpec,
    build_graph,
    default_section,
    derived_graph,
    enumerate_orbits,
    kappa_matrix_tree,
    kappa_via_lfunctions,
    l_value_at_one,
    orbit_records,
    orbit_value,
    phi_ell_power,
    twisted_adjacency,
)
from elltowers.cyclotomic import CycInt
from elltowers.lfunctions import TowerCalculator, _character_value

from conftest import fixture_spec, random_connected_spec

E1 = fixture_spec("bouquet2_ell2")
E4 = fixture_spec("bouquet2_ell3")


def test_trivial_character_gives_plain_adjacency():
    g = build_graph(2, [(0, 1), (0, 1), (0, 0)])
    spec = VoltageSpec(g, default_section(g), ((1, 0), (0, 1), (1, 1)), 2, 2)
    a = twisted_adjacency(spec, 1, CharacterIndex(1, (0, 0)))
    from elltowers import matrices

    plain = matrices(g).adjacency
    for i in range(2):
        for j in range(2):
            assert a[i][j] == plain[i][j]


def test_twisted_adjacency_examples():
    a = twisted_adjacency(E1, 1, CharacterIndex(1, (1, 0)))
    assert a[0][0] == CycInt.integer(2, 1, 0)
    a = twisted_adjacency(E1, 1, CharacterIndex(1, (1, 1)))
    assert a[0][0] == CycInt.integer(2, 1, -4)


def test_twisted_adjacency_conjugate_symmetric():
    rng = random.Random(11)
    for _ in range(5):
        spec = random_connected_spec(rng, max_vertices=3)
        n = 2
        m = spec.ell**n
        chi = CharacterIndex(n, tuple(rng.randrange(m) for _ in range(spec.d)))
        a = twisted_adjacency(spec, n, chi)
        g = spec.base
        for i in range(g.n_vertices):
            for j in range(g.n_vertices):
                assert a[j][i] == a[i][j].conjugate(m - 1)


def test_l_value_examples():
    assert l_value_at_one(E1, 1, CharacterIndex(1, (0, 0))).is_zero()
    assert l_value_at_one(E1, 1, CharacterIndex(1, (1, 0))) == CycInt.integer(2, 1, 4)
    assert l_value_at_one(E1, 1, CharacterIndex(1, (1, 1))) == CycInt.integer(2, 1, 8)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_bouquet_epsilon_sum_matches_determinant(seed):
    # the epsilon-sum fast path equals the determinant route on bouquets
    rng = random.Random(seed)
    loops = rng.randint(2, 4)
    g = build_graph(1, [(0, 0)] * loops)
    ell = rng.choice((2, 3))
    alpha = tuple(tuple(rng.randint(-5, 5) for _ in range(2)) for _ in range(loops))
    spec = VoltageSpec(g, default_section(g), alpha, ell, 2)
    n = rng.randint(1, 2)
    m = ell**n
    vec = tuple(rng.randrange(m) for _ in range(2))
    assert _character_value(spec, n, vec) == l_value_at_one(spec, n, CharacterIndex(n, vec))


def test_orbit_enumeration_small_cases():
    orbits = enumerate_orbits(2, 1, 2)
    assert len(orbits) == 3
    assert all(o.size == 1 for o in orbits)
    assert {o.representative.vector for o in orbits} == {(0, 1), (1, 0), (1, 1)}

    orbits = enumerate_orbits(3, 1, 2)
    assert len(orbits) == 4
    assert all(o.size == 2 for o in orbits)

    orbits = enumerate_orbits(2, 2, 1)
    reps = {o.representative.vector: o for o in orbits}
    assert set(reps) == {(2,), (1,)}
    assert reps[(2,)].size == 1 and reps[(2,)].exact_order == 2
    assert reps[(1,)].size == 2 and reps[(1,)].exact_order == 4
    assert [m.vector for m in reps[(1,)].members()] == [(1,), (3,)]


def _exact_level(ell, order):
    k = 0
    while order > 1:
        order //= ell
        k += 1
    return k


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from((2, 3, 5)),
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=2),
)
def test_orbits_partition_the_nontrivial_indices(ell, n, d):
    if ell**(n * d) > 2500:
        return
    orbits = enumerate_orbits(ell, n, d)
    seen = set()
    for o in orbits:
        members = o.members()
        assert len(members) == o.size
        assert o.size == phi_ell_power(ell, _exact_level(ell, o.exact_order))
        assert o.representative == members[0]
        for mem in members:
            assert mem.vector not in seen
            seen.add(mem.vector)
    assert len(seen) == ell ** (n * d) - 1
    assert (0,) * d not in seen


def test_representative_is_lexicographically_least():
    for ell, n, d in ((2, 3, 2), (3, 2, 2), (2, 4, 1)):
        for o in enumerate_orbits(ell, n, d):
            assert o.representative.vector == min(m.vector for m in o.members())


def test_orbit_values_example_one():
    orbits = enumerate_orbits(2, 1, 2)
    records = {o.representative.vector: orbit_value(E1, 1, o) for o in orbits}
    assert records[(1, 0)].integer_value == 4
    assert records[(0, 1)].integer_value == 4
    assert records[(1, 1)].integer_value == 8
    product = 1
    for rec in records.values():
        product *= rec.integer_value
    # ell^(2n) kappa_n: 128 = 4 * 32
    assert product == 2**2 * 32


def test_orbit_ord_sum_example_four():
    total = sum(orbit_value(E4, 1, o).ord_ell for o in enumerate_orbits(3, 1, 2))
    assert total == 8  # 2*1 + ord_3(kappa_1) with kappa_1 valuation 6


def test_trivial_orbit_rejected():
    fake = CharacterOrbit(2, 1, CharacterIndex(1, (0, 0)), 1, 1)
    with pytest.raises(ValueError):
        orbit_value(E1, 1, fake)


def test_vanishing_value_signals_disconnection():
    g = build_graph(1, [(0, 0), (0, 0)])
    bad = VoltageSpec(g, default_section(g), ((2, 0), (0, 1)), 2, 2)
    orbit = next(o for o in enumerate_orbits(2, 1, 2) if o.representative.vector == (1, 0))
    with pytest.raises(VanishingLValueError):
        orbit_value(bad, 1, orbit)


def test_conjugate_character_pairing():
    rng = random.Random(23)
    for _ in range(5):
        spec = random_connected_spec(rng, max_vertices=3)
        n = 2
        m = spec.ell**n
        vec = tuple(rng.randrange(m) for _ in range(spec.d))
        neg = tuple((-x) % m for x in vec)
        a = l_value_at_one(spec, n, CharacterIndex(n, vec))
        b = l_value_at_one(spec, n, CharacterIndex(n, neg))
        assert b == a.conjugate(m - 1)


def test_orbit_integer_values_positive():
    rng = random.Random(5)
    specs = [E1, E4] + [random_connected_spec(rng, max_vertices=3) for _ in range(4)]
    for spec in specs:
        for rec in orbit_records(spec, 2):
            assert rec.integer_value is not None and rec.integer_value > 0


def test_route_equivalence_on_random_specs():
    rng = random.Random(31)
    for _ in range(4):
        spec = random_connected_spec(rng, max_vertices=3)
        for n in (1, 2):
            if spec.base.n_vertices * spec.ell ** (spec.d * n) > 800:
                continue
            layer = derived_graph(spec, n)
            assert kappa_matrix_tree(layer.graph).kappa == kappa_via_lfunctions(spec, n).kappa


def test_digit_limit_suppresses_large_norms():
    records = orbit_records(E1, 3, digit_limit=2)
    assert any(rec.integer_value is None for rec in records)
    assert all(rec.ord_ell >= 0 for rec in records)
    full = orbit_records(E1, 3)
    assert all(rec.integer_value is not None for rec in full)
    for a, b in zip(records, full):
        assert a.ord_ell == b.ord_ell


def test_calculator_rejects_bad_towers():
    g = build_graph(1, [(0, 0), (0, 0)])
    bad = VoltageSpec(g, default_section(g), ((2, 0), (0, 1)), 2, 2)
    from elltowers import DisconnectedCoverError

    with pytest.raises(DisconnectedCoverError):
        TowerCalculator(bad)
    c3 = build_graph(3, [(0, 1), (1, 2), (2, 0)])
    chi_zero = VoltageSpec(c3, default_section(c3), ((1, 0), (0, 1), (1, 1)), 2, 2)
    with pytest.raises(ValueError):
        TowerCalculator(chi_zero)


def test_parallel_orbit_evaluation_matches_sequential():
    seq = TowerCalculator(E4).level_ords(2)
    par = TowerCalculator(E4, jobs=2).level_ords(2)
    assert seq == par


def test_non_bouquet_tower_tables():
    # 2 vertices joined by 3 parallel edges: chi = -1, kappa_X = 3, so the
    # base factor enters the product formula (with ord_3(kappa_X) = 1 for
    # ell = 3).  Frozen values were cross-checked against matrix-tree
    # counts of the explicit layers (route "both-agree" up to the budget).
    from elltowers import valuation_sequence

    g = build_graph(2, [(0, 1), (0, 1), (0, 1)])
    spec2 = VoltageSpec(g, default_section(g), ((1, 0), (0, 1), (0, 0)), 2, 2)
    seq2 = valuation_sequence(spec2, 3, matrix_tree_budget=600)
    assert [e.ord_ell for e in seq2.entries] == [7, 35, 111]
    assert all(e.route == "both-agree" for e in seq2.entries)

    spec3 = VoltageSpec(g, default_section(g), ((1, 0), (1, 1), (0, 2)), 3, 2)
    seq3 = valuation_sequence(spec3, 2, matrix_tree_budget=300)
    assert [e.ord_ell for e in seq3.entries] == [9, 37]
    assert all(e.route == "both-agree" for e in seq3.entries)
