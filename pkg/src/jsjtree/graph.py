"""Bipartite multigraphs, P-manifolds and Euler characteristic helpers.

A :class:`BipartiteMultigraph` is the underlying graph of a JSJ
decomposition: *curve* vertices carry two-ended vertex groups and *surface*
vertices carry maximal hanging Fuchsian groups. Edge multiplicities record
how many edges join a pair. Graphs are immutable; every operation in the
package returns new graphs.
"""

from __future__ import annotations

import enum
from collections import deque
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInputError


class VertexKind(enum.Enum):
    CURVE = "curve"
    SURFACE = "surface"

    # aliases used in the group-theoretic vocabulary
    TWO_ENDED = "curve"
    FUCHSIAN = "surface"

    @property
    def letter(self) -> str:
        return "T" if self is VertexKind.CURVE else "F"

    @classmethod
    def parse(cls, text: str) -> VertexKind:
        key = text.strip().lower()
        if key in ("curve", "t", "two_ended", "twoended"):
            return cls.CURVE
        if key in ("surface", "f", "fuchsian"):
            return cls.SURFACE
        raise ValueError(f"unknown vertex kind {text!r}")


CURVE = VertexKind.CURVE
SURFACE = VertexKind.SURFACE


class BipartiteMultigraph:
    """Finite multigraph whose vertices are tagged curve or surface.

    Construction only enforces well-typed data (unique ids, known endpoints,
    positive multiplicities, no loops). Bipartiteness by kind and
    connectivity are *reported* by :func:`validate_jsj_graph`, since invalid
    graphs must be representable to be diagnosed.

    Parallel entries for the same pair are summed. Vertex order is the input
    order and is preserved by every derived graph.
    """

    __slots__ = ("_name", "_kinds", "_index", "_edges", "_adj", "_hash")

    def __init__(self, vertices: Iterable[tuple[str, VertexKind]],
                 edges: Iterable[tuple[str, str] | tuple[str, str, int]] = (),
                 name: str = ""):
        kinds: dict[str, VertexKind] = {}
        for vid, kind in vertices:
            if not isinstance(vid, str):
                raise InvalidInputError(f"vertex id must be a string, got {vid!r}")
            if vid in kinds:
                raise InvalidInputError(f"duplicate vertex id {vid!r}")
            if not isinstance(kind, VertexKind):
                raise InvalidInputError(f"vertex {vid!r} has invalid kind {kind!r}")
            kinds[vid] = kind
        index = {v: i for i, v in enumerate(kinds)}

        acc: dict[tuple[str, str], int] = {}
        for e in edges:
            if len(e) == 2:
                u, v = e  # type: ignore[misc]
                mult = 1
            elif len(e) == 3:
                u, v, mult = e  # type: ignore[misc]
            else:
                raise InvalidInputError(f"malformed edge {e!r}")
            for x in (u, v):
                if x not in index:
                    raise InvalidInputError(f"edge {e!r} names unknown vertex {x!r}")
            if u == v:
                raise InvalidInputError(f"self-loop at {u!r}")
            if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
                raise InvalidInputError(f"edge {e!r} needs a positive integer multiplicity")
            key = _edge_key(u, v, kinds, index)
            acc[key] = acc.get(key, 0) + mult

        self._name = name
        self._kinds = kinds
        self._index = index
        self._edges = dict(sorted(acc.items(), key=lambda kv: (index[kv[0][0]], index[kv[0][1]])))
        adj: dict[str, dict[str, int]] = {v: {} for v in kinds}
        for (u, v), m in self._edges.items():
            adj[u][v] = m
            adj[v][u] = m
        for v in adj:
            adj[v] = dict(sorted(adj[v].items(), key=lambda kv: index[kv[0]]))
        self._adj = adj
        self._hash: int | None = None

    # -- basic accessors ------------------------------------------------

    @property
    def name(self) -> str:
        return self._name

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self._kinds)

    def __len__(self) -> int:
        return len(self._kinds)

    def __contains__(self, v: object) -> bool:
        return v in self._kinds

    def __iter__(self) -> Iterator[str]:
        return iter(self._kinds)

    def kind(self, v: str) -> VertexKind:
        try:
            return self._kinds[v]
        except KeyError:
            raise InvalidInputError(f"unknown vertex {v!r}") from None

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InvalidInputError(f"unknown vertex {v!r}") from None

    @property
    def curves(self) -> tuple[str, ...]:
        return tuple(v for v, k in self._kinds.items() if k is CURVE)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(v for v, k in self._kinds.items() if k is SURFACE)

    def items(self) -> Iterator[tuple[str, VertexKind]]:
        return iter(self._kinds.items())

    def edges(self) -> Iterator[tuple[str, str, int]]:
        """Yield ``(u, v, multiplicity)``; curve first for curve–surface edges."""
        for (u, v), m in self._edges.items():
            yield u, v, m

    @property
    def edge_count(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(self._edges.values())

    @property
    def bundle_count(self) -> int:
        """Number of adjacent pairs (edges of the underlying simple graph)."""
        return len(self._edges)

    def multiplicity(self, u: str, v: str) -> int:
        self.kind(u), self.kind(v)
        return self._adj[u].get(v, 0)

    def neighbors(self, v: str) -> Mapping[str, int]:
        """Neighbours of ``v`` in vertex order, mapped to edge multiplicity."""
        self.kind(v)
        return self._adj[v]

    def valence(self, v: str) -> int:
        """Valence counted with multiplicity."""
        return sum(self.neighbors(v).values())

    # -- structure ------------------------------------------------------

    def components(self) -> list[tuple[str, ...]]:
        seen: set[str] = set()
        out = []
        for s in self._kinds:
            if s in seen:
                continue
            comp = _bfs(self._adj, s)
            seen.update(comp)
            out.append(tuple(v for v in self._kinds if v in comp))
        return out

    def is_connected(self) -> bool:
        return len(self) > 0 and len(self.components()) == 1

    def is_simple_forest(self) -> bool:
        """True if the underlying simple graph has no cycle."""
        return len(self._edges) == len(self) - len(self.components())

    def is_forest(self) -> bool:
        """True if the multigraph itself has no cycle (so no multiplicity > 1)."""
        return self.is_simple_forest() and all(m == 1 for m in self._edges.values())

    def is_simple_tree(self) -> bool:
        return self.is_connected() and self.is_simple_forest()

    def is_tree(self) -> bool:
        return self.is_connected() and self.is_forest()

    # -- derived graphs -------------------------------------------------

    def subgraph(self, keep: Iterable[str], name: str | None = None) -> BipartiteMultigraph:
        keep = set(keep)
        for v in keep:
            self.kind(v)
        return BipartiteMultigraph(
            ((v, k) for v, k in self._kinds.items() if v in keep),
            ((u, v, m) for (u, v), m in self._edges.items() if u in keep and v in keep),
            name=self._name if name is None else name,
        )

    def without(self, drop: Iterable[str]) -> BipartiteMultigraph:
        drop = set(drop)
        return self.subgraph(v for v in self._kinds if v not in drop)

    def relabel(self, mapping: Mapping[str, str], *, order: Iterable[str] | None = None) -> BipartiteMultigraph:
        """Rename vertices by ``mapping``; ``order`` optionally lists old ids in the new order."""
        olds = list(self._kinds) if order is None else list(order)
        if sorted(olds) != sorted(self._kinds):
            raise InvalidInputError("order must be a permutation of the vertices")
        return BipartiteMultigraph(
            ((mapping[v], self._kinds[v]) for v in olds),
            ((mapping[u], mapping[v], m) for (u, v), m in self._edges.items()),
            name=self._name,
        )

    def renamed(self, name: str) -> BipartiteMultigraph:
        return BipartiteMultigraph(self._kinds.items(), self.edges(), name=name)

    # -- equality ---------------------------------------------------------

    def _signature(self):
        return (tuple(self._kinds.items()), tuple(sorted(self._edges.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteMultigraph):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._signature())
        return self._hash

    def __repr__(self) -> str:
        label = f" {self._name!r}" if self._name else ""
        return (f"<BipartiteMultigraph{label}: {len(self.curves)} curves, "
                f"{len(self.surfaces)} surfaces, {self.edge_count} edges>")


def _edge_key(u: str, v: str, kinds, index) -> tuple[str, str]:
    if kinds[u] is not kinds[v]:
        return (u, v) if kinds[u] is CURVE else (v, u)
    return (u, v) if index[u] < index[v] else (v, u)


def _bfs(adj: Mapping[str, Mapping[str, int]], start: str,
         blocked: frozenset[tuple[str, str]] = frozenset()) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y in seen or (x, y) in blocked:
                continue
            seen.add(y)
            queue.append(y)
    return seen


def component_without_bundle(g: BipartiteMultigraph, start: str, u: str, v: str) -> set[str]:
    """Vertices reachable from ``start`` once every edge between ``u`` and ``v`` is removed."""
    return _bfs(g._adj, start, frozenset({(u, v), (v, u)}))


# ----------------------------------------------------------------------
# P-manifolds


@dataclass(frozen=True)
class PManifold:
    """A bipartite multigraph whose surfaces carry integer Euler characteristics.

    The valence of a surface (counted with multiplicity) is its number of
    boundary circles.
    """

    graph: BipartiteMultigraph
    chi: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "chi", dict(self.chi))

    def __hash__(self) -> int:
        return hash((self.graph, tuple(sorted(self.chi.items()))))

    def surface_chi(self, v: str) -> int:
        try:
            return self.chi[v]
        except KeyError:
            raise InvalidInputError(f"no Euler characteristic for surface {v!r}") from None

    def total_chi(self) -> int:
        return sum(self.chi[s] for s in self.graph.surfaces)

    def restrict(self, keep: Iterable[str]) -> PManifold:
        sub = self.graph.subgraph(keep)
        return PManifold(sub, {s: self.chi[s] for s in sub.surfaces})

    def without(self, drop: Iterable[str]) -> PManifold:
        drop = set(drop)
        return self.restrict(v for v in self.graph if v not in drop)

    def with_chi(self, v: str, value: int) -> PManifold:
        if self.graph.kind(v) is not SURFACE:
            raise InvalidInputError(f"{v!r} is not a surface vertex")
        chi = dict(self.chi)
        chi[v] = value
        return PManifold(self.graph, chi)


# ----------------------------------------------------------------------
# validation


def validate_jsj_graph(g: BipartiteMultigraph) -> list[str]:
    """Return the ways in which ``g`` fails to be a JSJ graph (empty if valid)."""
    problems = []
    if not g.curves:
        problems.append("no curve (two-ended) vertex")
    if not g.surfaces:
        problems.append("no surface (Fuchsian) vertex")
    problems += _kind_violations(g)
    if len(g) and not g.is_connected():
        problems.append(f"disconnected ({len(g.components())} components)")
    return problems


def _kind_violations(g: BipartiteMultigraph) -> list[str]:
    out = []
    for u, v, _ in g.edges():
        ku, kv = g.kind(u), g.kind(v)
        if ku is kv:
            which = "TwoEnded" if ku is CURVE else "Fuchsian"
            out.append(f"edge {u}-{v} joins two {which} vertices")
    return out


def validate_pmanifold(p: PManifold, strict: bool = True, *, connected: bool = True) -> list[str]:
    """Return violations of the P-manifold conditions (empty if valid).

    With ``strict`` every curve must have valence at least three. Layered
    residuals are disconnected and have low-valence curves, so they are
    checked with ``strict=False, connected=False``.
    """
    g = p.graph
    problems = validate_jsj_graph(g) if connected else _kind_violations(g)
    for s in g.surfaces:
        if s not in p.chi:
            problems.append(f"surface {s} has no chi")
            continue
        c = p.chi[s]
        if isinstance(c, bool) or not isinstance(c, int):
            problems.append(f"surface {s}: chi must be an integer, got {c!r}")
        elif c >= 0:
            problems.append(f"surface {s}: chi must be negative, got {c}")
        if g.valence(s) < 1:
            problems.append(f"surface {s} has empty boundary")
    for v in p.chi:
        if v not in g or g.kind(v) is not SURFACE:
            problems.append(f"chi given for non-surface vertex {v}")
    if strict:
        for c in g.curves:
            if g.valence(c) < 3:
                problems.append(f"curve {c}: curve valence < 3 (got {g.valence(c)})")
    return problems


def validate_chi_decoration(g: BipartiteMultigraph, chi: Mapping[str, Fraction]) -> list[str]:
    problems = []
    for s in g.surfaces:
        if s not in chi:
            problems.append(f"surface {s} has no chi")
        elif not chi[s] < 0:
            problems.append(f"surface {s}: chi must be negative, got {chi[s]}")
    for v in chi:
        if v not in g or g.kind(v) is not SURFACE:
            problems.append(f"chi given for non-surface vertex {v}")
    return problems


# ----------------------------------------------------------------------
# Euler characteristics


def orbifold_euler(cells: Iterable[tuple[int, int]]) -> Fraction:
    """Euler characteristic of a cell decomposition with finite isotropy.

    Each cell is ``(dimension, isotropy_order)``; a cell contributes
    ``(-1)**dimension / isotropy_order``.
    """
    cells = list(cells)
    if not cells:
        raise InvalidInputError("cell list is empty")
    total = Fraction(0)
    for dim, order in cells:
        if dim not in (0, 1, 2):
            raise InvalidInputError(f"cell dimension must be 0, 1 or 2, got {dim}")
        if isinstance(order, bool) or not isinstance(order, int) or order < 1:
            raise InvalidInputError(f"isotropy order must be a positive integer, got {order!r}")
        total += Fraction((-1) ** dim, order)
    return total


def scale_chi(chi: Fraction | int, index: int) -> Fraction:
    """Euler characteristic of an index-``index`` subgroup."""
    if isinstance(index, bool) or not isinstance(index, int) or index < 1:
        raise InvalidInputError(f"index must be a positive integer, got {index!r}")
    return Fraction(chi) * index
