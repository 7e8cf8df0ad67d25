"""Vertex splitting and the unwrapping of an augmented graph of blocks into a tree.

Splitting a surface ``f`` along a separating bundle of ``r`` parallel edges
to a curve ``t`` replaces the ``f``-side component by ``r`` disjoint copies,
each attached to ``t`` by a single edge. The degree refinement is unchanged,
so repeated splitting of multi-edge bundles turns an augmented graph of
blocks satisfying (M1) and (M2) into a finite tree with the same refinement.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .blocks import check_m1, check_m2
from .errors import InternalError, InvalidInputError, PreconditionError
from .graph import CURVE, SURFACE, BipartiteMultigraph, component_without_bundle
from .refinement import DegreeRefinement, degree_partition, degree_refinement


@dataclass(frozen=True)
class SplitSite:
    """A separating bundle of ``r`` parallel edges between curve ``t`` and surface ``f``."""

    t: str
    f: str
    r: int
    f_side: frozenset[str] = field(compare=False)
    t_side: frozenset[str] = field(compare=False)


def _site(g: BipartiteMultigraph, t: str, f: str, r: int) -> SplitSite | None:
    f_side = component_without_bundle(g, f, t, f)
    if t in f_side:
        return None
    t_side = component_without_bundle(g, t, t, f)
    return SplitSite(t, f, r, frozenset(f_side), frozenset(t_side))


def find_split_sites(g: BipartiteMultigraph) -> list[SplitSite]:
    """Every curve–surface bundle whose removal separates its endpoints, in edge order."""
    sites = []
    for u, v, m in g.edges():
        if g.kind(u) is CURVE and g.kind(v) is SURFACE:
            s = _site(g, u, v, m)
            if s is not None:
                sites.append(s)
    return sites


@dataclass(frozen=True)
class SplitResult:
    graph: BipartiteMultigraph
    projection: dict[str, str]
    """Maps every vertex of ``graph`` to the vertex of the input it copies."""


def split_vertex(g: BipartiteMultigraph, site: SplitSite) -> SplitResult:
    """Split ``site.f`` into ``site.r`` vertices.

    Copies of an ``f``-side vertex ``v`` are named ``v#1 .. v#r`` and take
    the place of ``v`` in vertex order.
    """
    t, f, r = site.t, site.f, site.r
    if (t not in g or f not in g or g.kind(t) is not CURVE or g.kind(f) is not SURFACE
            or g.multiplicity(t, f) != r):
        raise InvalidInputError(f"stale split site ({t}, {f}, r={r})")
    fresh = _site(g, t, f, r)
    if fresh is None or fresh.f_side != site.f_side:
        raise InvalidInputError(f"stale split site ({t}, {f}, r={r}): bundle does not separate")
    side = fresh.f_side

    vertices, projection = [], {}
    for v, kind in g.items():
        if v in side:
            for k in range(1, r + 1):
                vertices.append((f"{v}#{k}", kind))
                projection[f"{v}#{k}"] = v
        else:
            vertices.append((v, kind))
            projection[v] = v
    if len(projection) != len(vertices):
        raise InvalidInputError("copy names collide with existing vertex ids")

    edges = []
    for u, v, m in g.edges():
        if {u, v} == {t, f}:
            edges.extend((t, f"{f}#{k}", 1) for k in range(1, r + 1))
        elif u in side:
            edges.extend((f"{u}#{k}", f"{v}#{k}", m) for k in range(1, r + 1))
        else:
            edges.append((u, v, m))
    return SplitResult(BipartiteMultigraph(vertices, edges, name=g.name), projection)


# ----------------------------------------------------------------------
# unwrapping


@dataclass(frozen=True)
class SplitRecord:
    """One performed split, in the ids of the graph it was applied to."""

    t: str
    f: str
    r: int
    copied: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"t": self.t, "f": self.f, "r": self.r, "copied": list(self.copied)}


@dataclass(frozen=True)
class UnwrapResult:
    tree: BipartiteMultigraph
    trace: tuple[SplitRecord, ...]
    projection: dict[str, str]
    """Maps every tree vertex to the input vertex it covers."""


def _multi_bundles(g: BipartiteMultigraph) -> list[tuple[str, str, int]]:
    return [(u, v, m) for u, v, m in g.edges() if m > 1]


def _pick_extremal(g: BipartiteMultigraph, bundles) -> SplitSite | None:
    for t, f, r in bundles:
        site = _site(g, t, f, r)
        if site is None:
            continue
        if not any((t2, f2) != (t, f) and t2 in site.f_side and f2 in site.f_side
                   for t2, f2, _ in bundles):
            return site
    return None


def _pick_outermost(g: BipartiteMultigraph, bundles) -> SplitSite | None:
    sites = [s for s in (_site(g, t, f, r) for t, f, r in bundles) if s is not None]
    for s in sites:
        if not any(o is not s and s.t in o.f_side for o in sites):
            return s
    return None


def unwrap_to_tree(g0: BipartiteMultigraph, order: str = "extremal") -> UnwrapResult:
    """Split multi-edge bundles of ``g0`` until it becomes a tree.

    ``order="extremal"`` always splits a bundle with no other multi-edge
    bundle on its surface side, so no multi-edge is ever copied and each
    split removes one bundle. ``order="outermost"`` splits top-down instead
    (a bundle not lying on the surface side of any other), copying inner
    bundles that are split later; it exists to compare split orders.
    """
    if order not in ("extremal", "outermost"):
        raise ValueError(f"unknown split order {order!r}")
    if not g0.is_connected():
        raise PreconditionError("input graph is disconnected", ("connected",))
    failed = []
    part = degree_partition(g0)
    if any(len(b) > 1 for b in part.blocks):
        failed.append("singleton-blocks")
    M = degree_refinement(g0)
    if not check_m1(M):
        failed.append("M1")
    if not check_m2(M):
        failed.append("M2")
    if failed:
        raise PreconditionError("cannot unwrap: " + ", ".join(failed) + " failed", tuple(failed))

    g = g0
    projection = {v: v for v in g0.vertices}
    trace: list[SplitRecord] = []
    initial = len(_multi_bundles(g0))
    pick = _pick_extremal if order == "extremal" else _pick_outermost
    cap = initial + 1 if order == "extremal" else None
    while True:
        bundles = _multi_bundles(g)
        if not bundles:
            break
        if cap is not None and len(trace) >= cap:
            raise InternalError(f"split cap {cap} exceeded with {len(bundles)} bundles left")
        site = pick(g, bundles)
        if site is None:
            raise InternalError(f"no splittable bundle among {[(t, f) for t, f, _ in bundles]}")
        res = split_vertex(g, site)
        trace.append(SplitRecord(site.t, site.f, site.r,
                                 tuple(v for v in g.vertices if v in site.f_side)))
        if order == "extremal" and len(_multi_bundles(res.graph)) != len(bundles) - 1:
            raise InternalError(f"split at ({site.t}, {site.f}) did not remove exactly one bundle")
        projection = {v: projection[res.projection[v]] for v in res.graph.vertices}
        g = res.graph
    if not g.is_tree():
        raise InternalError("unwrapping finished without producing a tree")
    return UnwrapResult(g, tuple(trace), projection)


# ----------------------------------------------------------------------
# capped truncations of the universal tree of a refinement


@dataclass(frozen=True)
class TruncNode:
    block: int
    children: tuple[TruncNode, ...]
    code: str


@dataclass(frozen=True)
class RootedTruncation:
    root: int
    depth: int
    cap: int
    tree: TruncNode

    @property
    def code(self) -> str:
        return self.tree.code


def truncated_block_tree(M: DegreeRefinement, root: int, depth: int, cap: int) -> RootedTruncation:
    """Depth-``depth`` truncation of the tree with degree refinement ``M``.

    A node in block ``i`` gets ``min(m_ij, cap)`` children in block ``j``,
    one fewer for its parent's block (except at the root). Codes hash the
    sorted child codes with the node's kind only, so they are invariant
    under block relabelling. Subtrees are shared, keeping this polynomial.
    """
    M.require_well_formed()
    if not 0 <= root < M.order:
        raise InvalidInputError(f"root block {root} out of range")
    if depth < 0 or cap < 1:
        raise InvalidInputError("need depth >= 0 and cap >= 1")
    memo: dict[tuple[int, int | None, int], TruncNode] = {}

    def build(i: int, parent: int | None, d: int) -> TruncNode:
        key = (i, parent, d)
        if key in memo:
            return memo[key]
        kids = []
        if d > 0:
            for j in range(M.order):
                x = M.matrix[i][j]
                if not x:
                    continue
                count = cap if not x.is_finite else min(int(x), cap)
                if j == parent:
                    count -= 1
                child = build(j, i, d - 1)
                kids.extend([child] * count)
        codes = sorted(k.code for k in kids)
        digest = hashlib.sha256((M.kinds[i].letter + "(" + ",".join(codes) + ")").encode()).hexdigest()
        node = TruncNode(i, tuple(kids), digest)
        memo[key] = node
        return node

    return RootedTruncation(root, depth, cap, build(root, None, depth))
