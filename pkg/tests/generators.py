"""Small graph builders and seeded random generators shared by the tests."""

from __future__ import annotations

import random

from jsjtree.graph import CURVE, SURFACE, BipartiteMultigraph, PManifold
from jsjtree.refinement import BlockPermutation, DegreeRefinement


def graph(curves, surfaces, edges, name=""):
    return BipartiteMultigraph([(c, CURVE) for c in curves] + [(s, SURFACE) for s in surfaces],
                               edges, name=name)


def star(chis, name="star") -> PManifold:
    surfaces = [f"s{i + 1}" for i in range(len(chis))]
    g = graph(["c"], surfaces, [("c", s) for s in surfaces], name)
    return PManifold(g, dict(zip(surfaces, chis)))


def theta(chis=(-1, -2, -3)) -> PManifold:
    surfaces = [f"s{i + 1}" for i in range(len(chis))]
    g = graph(["c1", "c2"], surfaces, [(c, s) for s in surfaces for c in ("c1", "c2")], "theta")
    return PManifold(g, dict(zip(surfaces, chis)))


def square() -> BipartiteMultigraph:
    return graph(["c1", "c2"], ["s1", "s2"],
                 [("c1", "s1"), ("s1", "c2"), ("c2", "s2"), ("s2", "c1")], "square")


def doubled_triangle() -> PManifold:
    """Three curves; each pair of curves bounds two surfaces with two boundary circles."""
    pairs = [("c1", "c2"), ("c2", "c3"), ("c1", "c3")]
    surfaces, edges = [], []
    for a, b in pairs:
        for k in "ab":
            s = f"s{a[1]}{b[1]}{k}"
            surfaces.append(s)
            edges += [(a, s), (b, s)]
    g = graph(["c1", "c2", "c3"], surfaces, edges, "doubled triangle")
    return PManifold(g, {s: -1 for s in surfaces})


def random_bipartite(rng: random.Random, max_vertices: int = 6, max_mult: int = 3,
                     density: float = 0.5) -> BipartiteMultigraph:
    """Any bipartite multigraph, possibly disconnected or with isolated vertices."""
    n = rng.randint(1, max_vertices)
    kinds = [rng.choice((CURVE, SURFACE)) for _ in range(n)]
    vertices = [(f"v{i}", k) for i, k in enumerate(kinds)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if kinds[i] is not kinds[j] and rng.random() < density:
                edges.append((f"v{i}", f"v{j}", rng.randint(1, max_mult)))
    return BipartiteMultigraph(vertices, edges)


def random_tree(rng: random.Random, n: int, max_mult: int = 3) -> BipartiteMultigraph:
    """A bipartite multigraph whose underlying simple graph is a tree on ``n >= 2`` vertices."""
    kinds = [rng.choice((CURVE, SURFACE))]
    edges = []
    for i in range(1, n):
        parent = rng.randrange(i)
        kinds.append(SURFACE if kinds[parent] is CURVE else CURVE)
        edges.append((f"v{parent}", f"v{i}", rng.randint(1, max_mult)))
    return BipartiteMultigraph([(f"v{i}", k) for i, k in enumerate(kinds)], edges)


def random_connected(rng: random.Random, n: int, extra: int, max_mult: int = 3) -> BipartiteMultigraph:
    """A random tree with up to ``extra`` additional curve-surface bundles."""
    t = random_tree(rng, n, max_mult)
    edges = list(t.edges())
    curves, surfaces = t.curves, t.surfaces
    for _ in range(extra):
        if curves and surfaces:
            c, s = rng.choice(curves), rng.choice(surfaces)
            edges.append((c, s, rng.randint(1, max_mult)))
    return BipartiteMultigraph(t.items(), edges)


def random_uniform_forest(rng: random.Random, degree: int, components: int = 1,
                          max_curves: int = 6) -> PManifold:
    """A forest with single edges in which every curve meets exactly ``degree`` surfaces."""
    vertices, edges, chi = [], [], {}
    counter = [0]

    def fresh(prefix: str, kind) -> str:
        counter[0] += 1
        v = f"{prefix}{counter[0]}"
        vertices.append((v, kind))
        if kind is SURFACE:
            chi[v] = -rng.randint(1, 5)
        return v

    for _ in range(components):
        frontier = []  # surfaces that may receive more curves
        first_curve = fresh("c", CURVE)
        for _ in range(degree):
            s = fresh("s", SURFACE)
            edges.append((first_curve, s))
            frontier.append(s)
        curves = 1
        while curves < max_curves and frontier and rng.random() < 0.8:
            s = rng.choice(frontier)
            c = fresh("c", CURVE)
            curves += 1
            edges.append((c, s))
            for _ in range(degree - 1):
                s2 = fresh("s", SURFACE)
                edges.append((c, s2))
                frontier.append(s2)
    order = list(range(len(vertices)))
    rng.shuffle(order)
    g = BipartiteMultigraph([vertices[i] for i in order], edges)
    return PManifold(g, chi)


def relabeled(rng: random.Random, g: BipartiteMultigraph) -> BipartiteMultigraph:
    """An isomorphic copy with fresh ids in a shuffled order."""
    ids = list(g.vertices)
    new_ids = [f"x{i}" for i in range(len(ids))]
    rng.shuffle(new_ids)
    mapping = dict(zip(ids, new_ids))
    order = list(ids)
    rng.shuffle(order)
    return g.relabel(mapping, order=order)


def random_kind_permutation(rng: random.Random, M: DegreeRefinement) -> BlockPermutation:
    image = list(range(M.order))
    for kind in (CURVE, SURFACE):
        idx = [i for i, k in enumerate(M.kinds) if k is kind]
        shuffled = idx[:]
        rng.shuffle(shuffled)
        for a, b in zip(idx, shuffled):
            image[a] = b
    return BlockPermutation(tuple(image))
