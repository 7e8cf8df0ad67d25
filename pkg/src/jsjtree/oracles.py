"""Brute-force reference implementations for tests and ``--verify``.

Each oracle works straight from a definition, sharing no search code with
the production algorithms it checks. They are exponential and guarded by
hard size limits.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Sequence

from .commensurability import Matching
from .errors import InternalError, InvalidInputError, ResourceLimitError
from .graph import CURVE, SURFACE, BipartiteMultigraph, PManifold
from .refinement import DegreePartition

MAX_PARTITION_VERTICES = 10
MAX_MATCHING_SURFACES = 20


def set_partitions(items: Sequence[str]) -> Iterator[list[list[str]]]:
    """Every set partition of ``items``, each exactly once (restricted growth strings)."""
    n = len(items)
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            blocks: list[list[str]] = [[] for _ in range(top + 1)]
            for item, lab in zip(items, labels):
                blocks[lab].append(item)
            yield blocks
            return
        for lab in range(top + 2):
            labels[i] = lab
            yield from rec(i + 1, max(top, lab))

    labels[0] = 0
    yield from rec(1, 0)


def _is_equitable(g: BipartiteMultigraph, blocks: list[list[str]]) -> bool:
    where = {v: i for i, b in enumerate(blocks) for v in b}
    for block in blocks:
        seen = None
        for v in block:
            sums = [0] * len(blocks)
            for w, m in g.neighbors(v).items():
                if g.kind(v) is CURVE:
                    sums[where[w]] += m
                else:
                    sums[where[w]] = 1  # any surface neighbour gives ι = ∞
            sig = tuple(sums)
            if seen is None:
                seen = sig
            elif sig != seen:
                return False
    return True


def coarsest_equitable_bruteforce(g: BipartiteMultigraph) -> DegreePartition:
    """The equitable kind-homogeneous partition with the fewest blocks, by exhaustion.

    Blocks are listed curves first, each kind by first member. Raises
    :class:`InternalError` if two different partitions tie for fewest blocks.
    """
    if len(g) > MAX_PARTITION_VERTICES:
        raise ResourceLimitError(f"brute-force partition needs at most {MAX_PARTITION_VERTICES} vertices")
    curves, surfaces = list(g.curves), list(g.surfaces)
    best: list[list[list[str]]] = []
    best_size = None
    for pc, ps in product(list(set_partitions(curves)), list(set_partitions(surfaces))):
        blocks = pc + ps
        if best_size is not None and len(blocks) > best_size:
            continue
        if not _is_equitable(g, blocks):
            continue
        if best_size is None or len(blocks) < best_size:
            best, best_size = [blocks], len(blocks)
        else:
            best.append(blocks)
    if not best:
        raise InternalError("no equitable partition found; the discrete partition always is one")
    if len({frozenset(frozenset(b) for b in bl) for bl in best}) != 1:
        raise InternalError(f"{len(best)} distinct coarsest equitable partitions")
    blocks = best[0]
    pos = {v: i for i, v in enumerate(g.vertices)}
    blocks = sorted((sorted(b, key=pos.__getitem__) for b in blocks),
                    key=lambda b: (g.kind(b[0]) is SURFACE, pos[b[0]]))
    return DegreePartition(tuple(tuple(b) for b in blocks), tuple(g.kind(b[0]) for b in blocks))


def matchings_bruteforce(p: PManifold | BipartiteMultigraph) -> list[Matching]:
    """All surface subsets meeting every curve along exactly one edge."""
    g = p.graph if isinstance(p, PManifold) else p
    surfaces = list(g.surfaces)
    if len(surfaces) > MAX_MATCHING_SURFACES:
        raise ResourceLimitError(f"brute-force matchings need at most {MAX_MATCHING_SURFACES} surfaces")
    found = []
    for k in range(len(surfaces) + 1):
        for subset in combinations(surfaces, k):
            chosen = set(subset)
            if all(sum(m for s, m in g.neighbors(c).items() if s in chosen) == 1 for c in g.curves):
                found.append(subset)
    pos = {v: i for i, v in enumerate(g.vertices)}
    found.sort(key=lambda sub: tuple(pos[s] for s in sub))
    return [Matching(sub) for sub in found]


def tree_code_bruteforce(t: BipartiteMultigraph, root: str) -> str:
    """Canonical rooted-tree code: kind letter plus sorted child codes."""
    if not t.is_tree():
        raise InvalidInputError("tree code needs a connected tree with single edges")
    if root not in t:
        raise InvalidInputError(f"unknown root {root!r}")

    def code(v: str, parent: str | None) -> str:
        kids = sorted(code(w, v) for w in t.neighbors(v) if w != parent)
        return "(" + t.kind(v).letter + "".join(kids) + ")"

    return code(root, None)


def unrooted_tree_code(t: BipartiteMultigraph) -> str:
    """Smallest rooted code over all roots; equal iff the trees are isomorphic."""
    return min(tree_code_bruteforce(t, v) for v in t.vertices)
