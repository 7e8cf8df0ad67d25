from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jsjtree.errors import InvalidInputError
from jsjtree.extnat import INF, ZERO, ExtNat
from jsjtree.graph import (CURVE, SURFACE, BipartiteMultigraph, PManifold, VertexKind,
                           orbifold_euler, scale_chi, validate_chi_decoration, validate_jsj_graph,
                           validate_pmanifold)

from generators import graph, square, star

naturals = st.integers(min_value=0, max_value=10**6)
extnats = st.one_of(naturals.map(ExtNat), st.just(INF))


class TestExtNat:
    @given(naturals, naturals)
    def test_finite_sums_stay_finite(self, a, b):
        s = ExtNat(a) + ExtNat(b)
        assert s.is_finite and s == a + b

    @given(extnats)
    def test_infinity_absorbs(self, x):
        assert x + INF == INF
        assert INF + x == INF

    @given(extnats, extnats, extnats)
    def test_addition_laws(self, a, b, c):
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)

    @given(extnats, extnats)
    def test_total_order(self, a, b):
        assert (a < b) + (a == b) + (a > b) == 1

    @given(naturals)
    def test_infinity_is_largest(self, a):
        assert ExtNat(a) < INF

    def test_int_interop(self):
        assert ExtNat(3) == 3 and hash(ExtNat(3)) == hash(3)
        assert ExtNat(2) + 1 == 3
        assert 1 + ExtNat(2) == 3
        assert not ZERO and INF and ExtNat(1)

    def test_parse_and_str(self):
        assert ExtNat.parse("inf") is INF
        assert ExtNat.parse("∞") is INF
        assert ExtNat.parse(" 7 ") == 7
        assert str(INF) == "inf" and str(ExtNat(4)) == "4"
        with pytest.raises(ValueError):
            ExtNat.parse("-1")

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            ExtNat(-1)
        with pytest.raises(TypeError):
            ExtNat(1.5)
        with pytest.raises(OverflowError):
            int(INF)


class TestVertexKind:
    def test_aliases(self):
        assert VertexKind.TWO_ENDED is CURVE
        assert VertexKind.FUCHSIAN is SURFACE
        assert VertexKind.parse("T") is CURVE and VertexKind.parse("surface") is SURFACE
        assert CURVE.letter == "T" and SURFACE.letter == "F"


class TestGraph:
    def test_parallel_entries_add_up(self):
        g = graph(["c"], ["s"], [("c", "s"), ("s", "c", 2)])
        assert g.multiplicity("c", "s") == 3
        assert list(g.edges()) == [("c", "s", 3)]
        assert g.valence("c") == 3 and g.edge_count == 3 and g.bundle_count == 1

    def test_construction_errors(self):
        with pytest.raises(InvalidInputError):
            graph(["c", "c"], [], [])
        with pytest.raises(InvalidInputError):
            graph(["c"], ["s"], [("c", "x")])
        with pytest.raises(InvalidInputError):
            graph(["c"], ["s"], [("c", "s", 0)])
        with pytest.raises(InvalidInputError):
            graph(["c"], ["s"], [("c", "c")])

    def test_vertex_order_is_input_order(self):
        g = BipartiteMultigraph([("s", SURFACE), ("c", CURVE)], [("c", "s")])
        assert g.vertices == ("s", "c")
        assert g.curves == ("c",) and g.surfaces == ("s",)

    def test_tree_predicates(self):
        double = graph(["c"], ["s"], [("c", "s", 2)])
        assert double.is_simple_tree() and not double.is_tree()
        assert not square().is_simple_forest()
        assert graph(["c"], ["s"], [("c", "s")]).is_tree()

    def test_components_and_without(self):
        g = square().without(["c1"])
        assert g.vertices == ("c2", "s1", "s2")
        assert g.is_connected()
        assert len(square().without(["c1", "c2"]).components()) == 2

    def test_relabel_preserves_structure(self):
        g = square()
        h = g.relabel({"c1": "a", "c2": "b", "s1": "x", "s2": "y"})
        assert h.multiplicity("a", "x") == 1 and h.vertices == ("a", "b", "x", "y")

    def test_equality(self):
        assert square() == square()
        assert hash(square()) == hash(square())
        assert square() != square().without(["c1"])


class TestValidation:
    def test_single_edge_is_valid(self):
        assert validate_jsj_graph(graph(["c"], ["s"], [("c", "s")])) == []

    def test_same_kind_edge(self):
        g = BipartiteMultigraph([("a", CURVE), ("b", CURVE), ("s", SURFACE)], [("a", "b"), ("a", "s")])
        assert any("joins two TwoEnded vertices" in p for p in validate_jsj_graph(g))

    def test_disconnected(self):
        g = graph(["c1", "c2"], ["s1", "s2"], [("c1", "s1"), ("c2", "s2")])
        assert any(p.startswith("disconnected") for p in validate_jsj_graph(g))

    def test_star_is_a_strict_pmanifold(self):
        assert validate_pmanifold(star([-1, -2, -3]), strict=True) == []

    def test_nonnegative_chi(self):
        assert any("chi must be negative" in p for p in validate_pmanifold(star([0, -2, -3])))

    def test_low_curve_valence(self):
        p = PManifold(graph(["c"], ["s"], [("c", "s")]), {"s": -1})
        assert any("curve valence < 3" in p for p in validate_pmanifold(p, strict=True))
        assert validate_pmanifold(p, strict=False) == []

    def test_chi_decoration(self):
        g = graph(["c"], ["s1", "s2"], [("c", "s1"), ("c", "s2")])
        assert validate_chi_decoration(g, {"s1": Fraction(-1, 2), "s2": -1}) == []
        assert validate_chi_decoration(g, {"s1": -1}) == ["surface s2 has no chi"]


class TestEuler:
    def test_circle(self):
        assert orbifold_euler([(0, 1), (1, 1)]) == 0

    def test_genus_two(self):
        assert orbifold_euler([(0, 1)] + [(1, 1)] * 4 + [(2, 1)]) == -2

    def test_triangle_orbifold(self):
        # Barycentric cells of the (2,3,7) triangle orbifold: the sphere is two
        # triangles glued along their boundary, cone points at the three corners.
        cells = [(0, 2), (0, 3), (0, 7), (1, 1), (1, 1), (1, 1), (2, 1), (2, 1)]
        chi = orbifold_euler(cells)
        assert chi == Fraction(-1, 42)
        assert chi == 2 - sum(1 - Fraction(1, n) for n in (2, 3, 7))

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            orbifold_euler([])
        with pytest.raises(InvalidInputError):
            orbifold_euler([(0, 0)])

    def test_scale_chi(self):
        assert scale_chi(Fraction(-1, 42), 84) == -2
        assert scale_chi(-3, 1) == -3
        assert scale_chi(Fraction(-5, 2), 4) == -10

    @given(st.fractions(max_denominator=100), st.fractions(max_denominator=100))
    def test_rationals_are_canonical(self, a, b):
        p = a * b
        assert p == Fraction(p.numerator, p.denominator)
        assert p.denominator > 0
