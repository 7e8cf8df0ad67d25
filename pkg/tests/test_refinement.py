from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jsjtree.blocks import augmented_graph_of_blocks
from jsjtree.errors import InvalidInputError
from jsjtree.extnat import INF
from jsjtree.graph import CURVE, SURFACE
from jsjtree.refinement import (BlockPermutation, DegreeRefinement, augmented_valence,
                                degree_partition, degree_refinement, iota, is_quasi_isometric,
                                iter_equivalences, refinement_equivalent, refinement_history)

from conftest import matrix
from generators import (graph, random_bipartite, random_connected, random_kind_permutation,
                        relabeled, square)

REFERENCE_MATRICES = ["leaf_bundles", "block_cycle", "facing_bundles", "surface_amalgam"]


class TestIota:
    def test_square(self):
        g = square()
        assert iota(g, "s1", "c1") == INF
        assert iota(g, "c1", "s1") == 1
        assert iota(g, "c1", "c2") == 0

    def test_unknown_vertex(self):
        with pytest.raises(InvalidInputError):
            iota(square(), "c1", "zz")

    def test_augmented_valence(self):
        g0 = augmented_graph_of_blocks(matrix("leaf_bundles"))
        assert augmented_valence(g0, "t1") == 3
        assert augmented_valence(g0, "t2") == 4
        assert augmented_valence(g0, "f1") == INF
        lonely = graph(["c"], ["s"], [])
        assert augmented_valence(lonely, "c") == 0 and augmented_valence(lonely, "s") == 0


class TestPartition:
    def test_square(self):
        p = degree_partition(square())
        assert p.blocks == (("c1", "c2"), ("s1", "s2"))
        assert degree_refinement(square()) == DegreeRefinement([CURVE, SURFACE], [[0, 2], [INF, 0]])

    def test_single_edge(self):
        assert degree_partition(graph(["c"], ["s"], [("c", "s")])).blocks == (("c",), ("s",))

    def test_leaf_bundles_blocks_are_singletons(self):
        g0 = augmented_graph_of_blocks(matrix("leaf_bundles"))
        assert all(len(b) == 1 for b in degree_partition(g0).blocks)
        assert len(degree_partition(g0)) == 5

    @pytest.mark.parametrize("name", REFERENCE_MATRICES)
    def test_reference_matrices_reproduce(self, name):
        M = matrix(name)
        assert refinement_equivalent(degree_refinement(augmented_graph_of_blocks(M)), M) is not None

    def test_block_order_ignores_ids(self):
        rng = random.Random(7)
        g = random_connected(rng, 9, 3)
        h = relabeled(rng, g)
        assert degree_refinement(g) == degree_refinement(h)

    def test_history_only_refines(self):
        rng = random.Random(3)
        for _ in range(50):
            g = random_bipartite(rng, 9)
            hist = refinement_history(g)
            assert len(hist) <= len(g) + 1
            for a, b in zip(hist, hist[1:]):
                assert len(b) > len(a)
                for block in b.blocks:
                    assert any(set(block) <= set(big) for big in a.blocks)

    @settings(max_examples=200)
    @given(st.integers(0, 2**32))
    def test_partition_is_equitable_and_idempotent(self, seed):
        rng = random.Random(seed)
        g = random_bipartite(rng, 9)
        M = degree_refinement(g)
        part = M.partition
        where = {v: i for i, b in enumerate(part.blocks) for v in b}
        for i, block in enumerate(part.blocks):
            for v in block:
                row = [0] * len(part.blocks)
                for w in g.vertices:
                    if w != v:
                        row[where[w]] = row[where[w]] + iota(g, v, w)
                assert tuple(row) == M.matrix[i]
        # re-running on the quotient-respecting relabelling gives the same blocks
        assert degree_partition(relabeled(rng, g)).blocks.__len__() == len(part)
        assert M.problems() == []


class TestEquivalence:
    def test_identity(self):
        M = matrix("surface_amalgam")
        perm = refinement_equivalent(M, M)
        assert perm is not None and M.permuted(perm) == M

    @pytest.mark.parametrize("seed", range(20))
    def test_recovers_random_permutation(self, seed):
        rng = random.Random(seed)
        M = matrix(REFERENCE_MATRICES[seed % 4])
        P = random_kind_permutation(rng, M)
        M2 = M.permuted(P)
        found = refinement_equivalent(M, M2)
        assert found is not None and M.permuted(found) == M2

    def test_every_witness_is_valid(self):
        M = degree_refinement(square())
        for perm in iter_equivalences(M, M):
            assert M.permuted(perm) == M

    def test_different_sizes(self):
        assert refinement_equivalent(matrix("leaf_bundles"), matrix("facing_bundles")) is None

    def test_kinds_must_match(self):
        a = DegreeRefinement([CURVE, SURFACE], [[0, 1], [INF, 0]])
        b = DegreeRefinement([SURFACE, CURVE], [[0, INF], [1, 0]])
        c = DegreeRefinement([CURVE, SURFACE], [[0, 2], [INF, 0]])
        assert refinement_equivalent(a, b) is not None
        assert refinement_equivalent(a, c) is None

    def test_text_round_trip(self):
        M = matrix("leaf_bundles")
        text = M.to_text()
        assert text.splitlines()[0] == "blocks: T T F F F"
        assert text.splitlines()[3] == "inf inf 0 0 0"
        assert DegreeRefinement.from_text(text) == M

    def test_problems(self):
        bad = DegreeRefinement([CURVE, SURFACE], [[0, 1], [2, 0]])
        assert bad.problems()
        with pytest.raises(InvalidInputError):
            bad.require_well_formed()
        asym = DegreeRefinement([CURVE, SURFACE], [[0, 1], [0, 0]])
        assert any("disagree" in p for p in asym.problems())


class TestQuasiIsometry:
    def test_relabelled_copy(self):
        rng = random.Random(11)
        g = random_connected(rng, 10, 2)
        v = is_quasi_isometric(g, relabeled(rng, g))
        assert v and v.permutation is not None

    def test_reference_matrices_differ(self):
        a = augmented_graph_of_blocks(matrix("leaf_bundles"))
        b = augmented_graph_of_blocks(matrix("facing_bundles"))
        assert not is_quasi_isometric(a, b)

    def test_requires_jsj_graphs(self):
        bad = graph(["c1", "c2"], ["s1", "s2"], [("c1", "s1"), ("c2", "s2")])
        with pytest.raises(InvalidInputError):
            is_quasi_isometric(bad, bad)

    @settings(max_examples=100)
    @given(st.integers(0, 2**32))
    def test_renaming_invariance(self, seed):
        rng = random.Random(seed)
        g = random_bipartite(rng, 8)
        assert refinement_equivalent(degree_refinement(g), degree_refinement(relabeled(rng, g)))
