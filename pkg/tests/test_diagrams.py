import json
import random
from itertools import permutations

import pytest

from cob1d.diagrams import (Cobordism, Component, Kind, NDiagram, OrbitSignature,
                            canonical_decode, canonical_encode, diagram_order, dual_diagram,
                            enumerate_diagrams, enumerate_orbits, iter_diagrams,
                            orbit_cardinality, permute, reflect, signature)
from cob1d.errors import ResourceLimitError

from oracles import as_block_set, diagram_count_recurrence, diagrams_via_involutions, random_diagram

O = OrbitSignature


@pytest.mark.parametrize("n", range(0, 8))
def test_counts_match_recurrence(n):
    diagrams = enumerate_diagrams(n)
    assert len(diagrams) == diagram_count_recurrence(n)
    assert len(diagrams) == sum(orbit_cardinality(s) for s in enumerate_orbits(n))


def test_recurrence_values():
    assert [diagram_count_recurrence(n) for n in range(8)] == [1, 2, 6, 20, 76, 312, 1384, 6512]


@pytest.mark.parametrize("n", range(0, 6))
def test_enumeration_matches_involution_oracle(n):
    mine = [as_block_set(x) for x in iter_diagrams(n)]
    assert len(mine) == len(set(mine))
    assert set(mine) == diagrams_via_involutions(n)


def test_orbit_table_n2():
    assert enumerate_orbits(2) == [O(0, 2, 0, 0), O(0, 0, 0, 1), O(1, 1, 0, 0),
                                   O(0, 0, 1, 0), O(2, 0, 0, 0)]
    assert [orbit_cardinality(s) for s in enumerate_orbits(2)] == [1, 1, 2, 1, 1]


def test_orbit_table_n3():
    assert enumerate_orbits(3) == [
        O(0, 3, 0, 0), O(0, 1, 0, 1), O(1, 2, 0, 0), O(1, 0, 0, 1),
        O(0, 1, 1, 0), O(2, 1, 0, 0), O(1, 0, 1, 0), O(3, 0, 0, 0)]
    assert [orbit_cardinality(s) for s in enumerate_orbits(3)] == [1, 3, 3, 3, 3, 3, 3, 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_orbit_sizes_by_enumeration(n):
    counts = {}
    for x in enumerate_diagrams(n):
        counts[x.signature] = counts.get(x.signature, 0) + 1
    assert counts == {s: orbit_cardinality(s) for s in enumerate_orbits(n)}


def test_signature_statistics():
    s = O(2, 1, 2, 1)
    assert (s.n, s.defects, s.comp, s.arcs, s.cups) == (9, 2, 6, 3, 3)
    assert s.dual() == O(1, 2, 1, 2)
    assert str(s) == "O(2,1,2,1)"


def test_nine_point_example():
    x = NDiagram.of(9, arcs=[(1, 0), (3, 0), (6, 1)], cups=[(2, 5, 0), (4, 7, 1), (8, 9, 0)])
    assert signature(x) == O(2, 1, 2, 1)


def test_dual_example_n5():
    x = NDiagram.of(5, arcs=[(1, 0), (2, 1), (5, 0)], cups=[(3, 4, 0)])
    expected = NDiagram.of(5, arcs=[(1, 1), (2, 0), (5, 1)], cups=[(3, 4, 1)])
    assert dual_diagram(x) == expected


def test_dual_of_dotless_is_all_dotted():
    x =NDiagram.of(4, arcs=[(2, 0), (3, 0)], cups=[(1, 4, 0)])
    y = dual_diagram(x)
    assert all(c.dots == 1 for c in y.components)
    assert [c.endpoints for c in y.components] == [c.endpoints for c in x.components]


@pytest.mark.parametrize("n", range(0, 6))
def test_dual_involution_and_signature(n):
    for x in enumerate_diagrams(n):
        y = dual_diagram(x)
        assert dual_diagram(y) == x
        assert y.mate == x.mate
        assert y.signature == x.signature.dual()


def test_order_examples():
    x = NDiagram.of(2, arcs=[(1, 1), (2, 1)])
    y = NDiagram.of(2, arcs=[(1, 0), (2, 0)])
    assert diagram_order(x, y) == -1
    assert diagram_order(y, x) == 1
    x = NDiagram.of(3, arcs=[(1, 0)], cups=[(2, 3, 1)])
    y = NDiagram.of(3, arcs=[(1, 1)], cups=[(2, 3, 0)])
    assert (x.signature, y.signature) == (O(1, 0, 0, 1), O(0, 1, 1, 0))
    assert diagram_order(x, y) == -1
    assert diagram_order(x, x) == 0


def test_order_rejects_mismatched_n():
    with pytest.raises(ValueError):
        diagram_order(NDiagram.of(1, arcs=[(1, 0)]), NDiagram.of(2, cups=[(1, 2, 0)]))


@pytest.mark.parametrize("n", range(0, 5))
def test_order_is_strict_total(n):
    ds = list(enumerate_diagrams(n))
    for x in ds:
        for y in ds:
            c = diagram_order(x, y)
            assert c == -diagram_order(y, x)
            assert (c == 0) == (x == y)
    # sorted output is strictly increasing, which with antisymmetry gives transitivity
    assert all(diagram_order(a, b) == -1 for a, b in zip(ds, ds[1:]))
    keys = [x.signature.order_key() for x in ds]
    assert keys == sorted(keys)


def test_order_transitive_sampled():
    rng = random.Random(3)
    ds = enumerate_diagrams(5)
    for _ in range(2000):
        a, b, c = rng.sample(ds, 3)
        if diagram_order(a, b) < 0 and diagram_order(b, c) < 0:
            assert diagram_order(a, c) < 0


@pytest.mark.parametrize("n", range(0, 6))
def test_encode_round_trip(n):
    codes = set()
    for x in enumerate_diagrams(n):
        code = canonical_encode(x)
        codes.add(code)
        assert canonical_decode(code) == x.to_cobordism()
        assert NDiagram.from_cobordism(canonical_decode(code)) == x
    assert len(codes) == len(enumerate_diagrams(n))


def test_encode_ignores_component_order():
    rng = random.Random(1)
    for _ in range(50):
        x = random_diagram(rng, 7)
        comps = list(x.components)
        rng.shuffle(comps)
        y = NDiagram(7, tuple(comps))
        assert y == x and canonical_encode(y) == canonical_encode(x)


def test_encode_format():
    x = NDiagram.of(3, arcs=[(3, 1)], cups=[(1, 2, 0)])
    assert canonical_encode(x) == b"0>3|A1.2:0;a3:1"


@pytest.mark.parametrize("n", range(1, 6))
def test_signature_constant_on_orbits(n):
    rng = random.Random(n)
    for x in enumerate_diagrams(n):
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
        assert permute(x, sigma).signature == x.signature


@pytest.mark.parametrize("n", range(1, 6))
def test_signature_is_complete_invariant(n):
    ds = enumerate_diagrams(n)
    index = {x: i for i, x in enumerate(ds)}
    parent = list(range(len(ds)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for sigma in permutations(range(1, n + 1)):
        for x in ds:
            a, b = find(index[x]), find(index[permute(x, sigma)])
            parent[a] = b
    classes = {}
    for x in ds:
        classes.setdefault(find(index[x]), set()).add(x.signature)
    assert all(len(sigs) == 1 for sigs in classes.values())
    assert len(classes) == len(enumerate_orbits(n))


def test_reflect_swaps_sides():
    x = Cobordism(2, 1, (Component(Kind.ARC2, (1, 3), 1), Component(Kind.ARC1, (2,), 0),
                         Component(Kind.CIRCLE, (), 1)))
    r = reflect(x)
    assert (r.n, r.m) == (1, 2)
    assert Component(Kind.ARC2, (1, 2), 1) in r.components
    assert Component(Kind.ARC1, (3,), 0) in r.components
    assert Component(Kind.CIRCLE, (), 1) in r.components
    assert reflect(r) == x


def test_reflect_identity_and_diagram():
    assert reflect(Cobordism.identity(3)) == Cobordism.identity(3)
    x = NDiagram.of(4, arcs=[(1, 1), (3, 0)], cups=[(2, 4, 1)]).to_cobordism()
    r = reflect(x)
    assert (r.n, r.m) == (4, 0)
    assert [c.endpoints for c in r.components] == [c.endpoints for c in x.components]


def test_cobordism_validation():
    with pytest.raises(ValueError):
        Cobordism(1, 1, (Component(Kind.ARC1, (1,), 0),))
    with pytest.raises(ValueError):
        Cobordism(1, 0, (Component(Kind.ARC1, (1,), 0), Component(Kind.ARC1, (1,), 0)))
    with pytest.raises(ValueError):
        Component(Kind.ARC2, (1, 1), 0)
    with pytest.raises(ValueError):
        Component(Kind.CIRCLE, (1,), 0)
    with pytest.raises(ValueError):
        Component(Kind.ARC1, (1,), -1)
    with pytest.raises(ValueError):
        NDiagram.of(2, arcs=[(1, 2), (2, 0)])
    with pytest.raises(ValueError):
        NDiagram(1, (Component(Kind.ARC1, (1,), 0), Component(Kind.CIRCLE, (), 0)))


def test_cobordism_json_schema():
    x = Cobordism(1, 2, (Component(Kind.ARC2, (3, 1), 1), Component(Kind.ARC1, (2,), 0),
                         Component(Kind.INTERVAL, (), 2)))
    d = x.to_dict()
    assert d == {"n": 1, "m": 2, "components": [
        {"kind": "arc2", "endpoints": [1, 3], "dots": 1},
        {"kind": "arc1", "endpoints": [2], "dots": 0},
        {"kind": "interval", "endpoints": [], "dots": 2}]}
    assert Cobordism.from_dict(json.loads(json.dumps(d))) == x


def test_enumeration_cap(monkeypatch):
    with pytest.raises(ResourceLimitError):
        enumerate_diagrams(3, cap=2)
    monkeypatch.setenv("COB1D_MAX_N", "2")
    with pytest.raises(ResourceLimitError):
        enumerate_diagrams(3)
    assert len(enumerate_diagrams(3, cap=3)) == 20


def test_enumerate_zero():
    assert enumerate_diagrams(0) == (NDiagram(0, ()),)
    assert enumerate_orbits(0) == [O(0, 0, 0, 0)]
