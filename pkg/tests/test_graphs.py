from fractions import Fraction

import pytest

from conftest import rose
from nielsenkit.graphs import (
    Dart,
    EdgePath,
    Graph,
    GraphMap,
    NonIsolatedFixedSet,
    circle_degree,
    classify_turn,
    derivative,
    fixed_directions,
    fixed_vertices,
    induced_endo,
    interior_fixed_points,
    map_path,
    spanning_data,
    subdivide_at,
    subdivided_fixed_map,
    tighten,
    trivial_path,
    trivial_route_endo,
)

ex1 = rose({"a": ["a", "a"], "b": ["b", "b"]})
ex2 = rose({"a1": ["a1"], "a2": ["a2-", "a1", "a2"]})
ex3 = rose({"a": ["b"], "b": ["a-"]})
ex4 = rose({"a": ["a-"], "b": ["a-", "b", "b"]})
derived = rose({"a": ["a"], "b": ["b", "a"]})


def darts(*tokens):
    from nielsenkit.graphs import parse_dart

    return tuple(parse_dart(t) for t in tokens)


class TestTighten:
    def test_backtrack(self):
        g = ex1.graph
        p = tighten(g, darts("a", "a-"))
        assert p.is_trivial and p.at == "*"

    def test_already_tight(self):
        g = ex1.graph
        p = tighten(g, darts("a", "b", "a-"))
        assert p.darts == darts("a", "b", "a-")

    def test_idempotent(self):
        g = ex1.graph
        seq = darts("a", "b", "b-", "b", "a-", "a")
        once = tighten(g, seq)
        assert tighten(g, once.darts) == once

    def test_rotation_image(self):
        # image of the loop a.b under a->b, b->a^-1 is already tight
        p = map_path(ex3, EdgePath(darts("a", "b")))
        assert p.darts == darts("b", "a-")


class TestMapPath:
    def test_identity(self):
        ident = rose({"a": ["a"], "b": ["b"]})
        p = EdgePath(darts("a", "b", "a-"))
        assert map_path(ident, p) == p

    def test_nielsen_path_of_derived_map(self):
        p = EdgePath(darts("b", "a", "b-"))
        assert map_path(derived, p) == p

    def test_doubling(self):
        assert map_path(ex1, EdgePath(darts("a"))).darts == darts("a", "a")

    def test_trivial_path(self):
        assert map_path(ex1, trivial_path("*")) == trivial_path("*")

    def test_composition(self):
        p = EdgePath(darts("a", "b", "a-", "b"))
        twice = map_path(ex3, map_path(ex3, p))
        composed = GraphMap(
            ex3.graph, ex3.vertex_map,
            {e: map_path(ex3, ex3.edge_map[e]) for e in ex3.graph.edges})
        assert map_path(composed, p) == twice


class TestDerivative:
    def test_conjugating(self):
        assert derivative(ex2, Dart("a2", False)) == Dart("a2", False)
        assert derivative(ex2, Dart("a2", True)) == Dart("a2", False)

    def test_rotation(self):
        assert derivative(ex3, Dart("a", True)) == Dart("b", True)

    def test_trivial_image(self):
        collapsing = rose({"a": ["a"], "b": []})
        assert derivative(collapsing, Dart("b", True)) is None

    def test_involution_compatibility(self):
        for f in (ex1, ex2, ex3, ex4, derived):
            for e in f.graph.edges:
                img = f.edge_map[e]
                if img.is_trivial:
                    continue
                assert derivative(f, Dart(e, False)) == img.darts[-1].rev


class TestTurns:
    def test_degenerate(self):
        assert classify_turn(ex1, Dart("a", True), Dart("a", True)) == "degenerate"

    def test_illegal_in_derived(self):
        assert classify_turn(derived, Dart("a", False), Dart("b", False)) == "illegal"

    def test_legal_in_doubling(self):
        assert classify_turn(ex1, Dart("a", True), Dart("b", True)) == "legal"

    def test_stable_under_longer_iteration(self):
        for f in (ex1, ex2, ex3, ex4, derived):
            ds = f.graph.darts()
            bound = len(ds) ** 2 + 1
            for i in range(len(ds)):
                for j in range(i, len(ds)):
                    a, b = ds[i], ds[j]
                    assert classify_turn(f, a, b, bound) == classify_turn(f, a, b, 4 * bound)


class TestFixedData:
    def test_fixed_vertices(self):
        assert fixed_vertices(ex1) == ["*"]

    def test_doubling_delta(self):
        assert len(fixed_directions(ex1, "*")) == 4  # 2n for n = 2

    def test_conjugating_delta_on_top_stratum(self):
        assert fixed_directions(ex2, "*", ["a2"]) == [Dart("a2", False)]

    def test_rotation_no_fixed_directions(self):
        assert fixed_directions(ex3, "*") == []

    def test_identity_edge_counts_once(self):
        assert fixed_directions(ex2, "*", ["a1"]) == [Dart("a1", True)]


class TestInteriorFixedPoints:
    def test_jiang(self):
        assert interior_fixed_points(ex4) == [
            ("a", Fraction(1, 2)), ("b", Fraction(1, 2))]

    def test_doubling_has_none(self):
        assert interior_fixed_points(ex1) == []

    def test_identity_rejected(self):
        with pytest.raises(NonIsolatedFixedSet):
            interior_fixed_points(rose({"a": ["a"], "b": ["b"]}))

    def test_flip(self):
        assert interior_fixed_points(rose({"e": ["e-"]})) == [("e", Fraction(1, 2))]

    def test_triple(self):
        assert interior_fixed_points(rose({"e": ["e", "e", "e"]})) == [
            ("e", Fraction(1, 2))]

    def test_identity_edge_skipped(self):
        # a is pointwise fixed but the map is not the identity: perturbed away
        assert interior_fixed_points(ex2) == [("a2", Fraction(1, 4))]


class TestSubdivision:
    def test_jiang_subdivided_map(self):
        g, pts = subdivided_fixed_map(ex4)
        assert pts == [("a", Fraction(1, 2)), ("b", Fraction(1, 2))]
        em = {e: tuple(str(d) for d in g.edge_map[e].darts) for e in g.graph.edges}
        assert em == {
            "a:1": ("a:2-",),
            "a:2": ("a:1-",),
            "b:1": ("a:2-", "a:1-", "b:1"),
            "b:2": ("b:2", "b:1", "b:2"),
        }
        assert g.vertex_map == {"*": "*", "a@1/2": "a@1/2", "b@1/2": "b@1/2"}

    def test_no_points_after(self):
        for f in (ex2, ex4, rose({"e": ["e-", "e-"]})):
            g, _ = subdivided_fixed_map(f)
            assert interior_fixed_points(g) == []

    def test_junction_point_is_closed(self):
        # 3 * (1/3) hits the junction between image segments: lands on a vertex
        g = subdivide_at(ex4, [("b", Fraction(1, 3))])
        assert g.vertex_map["b@1/3"] == "*"

    def test_not_closed_rejected(self):
        with pytest.raises(ValueError):
            subdivide_at(ex4, [("b", Fraction(1, 5))])

    def test_validates(self):
        g, _ = subdivided_fixed_map(rose({"a": ["b", "a", "a"], "b": ["b"]}))
        g.validate()


class TestPi1:
    def test_rotation_route(self):
        phi = induced_endo(ex3, "*", EdgePath(darts("a")))
        b = phi.basis
        assert [b.format(w) for w in phi.images] == ["abA", "A"]

    def test_trivial_route_is_the_endo(self):
        phi = trivial_route_endo(ex2, "*")
        b = phi.basis
        assert [b.format(w) for w in phi.images] == ["a1", "a2- a1 a2"]

    def test_identity_map(self):
        ident = rose({"a": ["a"], "b": ["b"]})
        phi = induced_endo(ident, "*", trivial_path("*"))
        assert phi == __import__("nielsenkit.words", fromlist=["identity_endo"]).identity_endo(phi.basis)

    def test_wrong_route_rejected(self):
        # a route must start at the base
        g, _ = subdivided_fixed_map(ex4)
        with pytest.raises(ValueError):
            induced_endo(g, "a@1/2", trivial_path("*"))

    def test_spanning_tree_multi_vertex(self):
        g, _ = subdivided_fixed_map(ex4)
        data = spanning_data(g.graph, "*")
        assert sorted(data.basis_edges) == ["a:2", "b:2"]
        phi = trivial_route_endo(g, "*")
        assert phi.rank == 2


class TestCircle:
    @pytest.mark.parametrize("k", [-3, -1, 1, 2, 3])
    def test_degree(self, k):
        image = ["e"] * k if k > 0 else ["e-"] * (-k)
        assert circle_degree(rose({"e": image})) == k

    def test_subdivided_flip(self):
        g, _ = subdivided_fixed_map(rose({"e": ["e-"]}))
        assert circle_degree(g) == -1

    def test_invariant_subcircle_of_conjugating_map(self):
        sub = GraphMap(
            Graph(("*",), {"a1": ("*", "*")}),
            {"*": "*"},
            {"a1": EdgePath(darts("a1"))},
        )
        assert circle_degree(sub) == 1

    def test_not_circle_rejected(self):
        with pytest.raises(ValueError):
            circle_degree(ex1)

    def test_euler_characteristic(self):
        assert ex1.graph.euler_characteristic() == -1
        g, _ = subdivided_fixed_map(ex4)
        assert g.graph.euler_characteristic() == -1
