"""Degree partitions, degree refinements and quasi-isometry.

The refinement here is the bipartite one used for JSJ graphs: a surface
vertex sees each adjacent vertex with weight ``∞`` (its lifts in the JSJ
tree have infinite valence), while a curve vertex sees a surface with
weight equal to the number of edges joining them.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from .errors import InvalidInputError
from .extnat import INF, ZERO, ExtNat
from .graph import CURVE, SURFACE, BipartiteMultigraph, VertexKind, validate_jsj_graph


@dataclass(frozen=True)
class DegreePartition:
    """Blocks of vertices, each kind-homogeneous, in canonical order."""

    blocks: tuple[tuple[str, ...], ...]
    kinds: tuple[VertexKind, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, v: str) -> int:
        for i, b in enumerate(self.blocks):
            if v in b:
                return i
        raise InvalidInputError(f"vertex {v!r} is not in the partition")

    def as_sets(self) -> frozenset[frozenset[str]]:
        """Order-free view, for comparing partitions."""
        return frozenset(frozenset(b) for b in self.blocks)


@dataclass(frozen=True)
class BlockPermutation:
    """Block bijection ``i -> mapping[i]`` witnessing ``M2 = P M P^T``."""

    mapping: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __len__(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> BlockPermutation:
        return cls(tuple(range(n)))

    def inverse(self) -> BlockPermutation:
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return BlockPermutation(tuple(inv))


class DegreeRefinement:
    """Square matrix over ``N ∪ {∞}`` with one kind per block.

    ``matrix[i][j]`` is the ι-sum from any vertex of block ``i`` into block
    ``j``. ``partition`` is present when the matrix was computed from a
    graph and absent when it was given directly.
    """

    __slots__ = ("kinds", "matrix", "partition")

    def __init__(self, kinds: Sequence[VertexKind], matrix: Sequence[Sequence[ExtNat | int]],
                 partition: DegreePartition | None = None):
        kinds = tuple(kinds)
        rows = tuple(tuple(ExtNat.coerce(x) for x in row) for row in matrix)
        if len(rows) != len(kinds) or any(len(r) != len(kinds) for r in rows):
            raise InvalidInputError(
                f"matrix must be {len(kinds)}x{len(kinds)} to match its block kinds")
        self.kinds = kinds
        self.matrix = rows
        self.partition = partition

    @property
    def order(self) -> int:
        return len(self.kinds)

    def __getitem__(self, ij: tuple[int, int]) -> ExtNat:
        i, j = ij
        return self.matrix[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DegreeRefinement):
            return NotImplemented
        return self.kinds == other.kinds and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.kinds, self.matrix))

    def __repr__(self) -> str:
        return f"DegreeRefinement({''.join(k.letter for k in self.kinds)}, {self.to_text()!r})"

    @property
    def curve_blocks(self) -> list[int]:
        return [i for i, k in enumerate(self.kinds) if k is CURVE]

    @property
    def surface_blocks(self) -> list[int]:
        return [i for i, k in enumerate(self.kinds) if k is SURFACE]

    def problems(self) -> list[str]:
        out = []
        n = self.order
        for i in range(n):
            for j in range(n):
                x = self.matrix[i][j]
                if self.kinds[i] is self.kinds[j] and x != 0:
                    out.append(f"entry ({i + 1},{j + 1}) joins blocks of the same kind but is {x}")
                elif self.kinds[i] is SURFACE and x not in (ZERO, INF):
                    out.append(f"surface-row entry ({i + 1},{j + 1}) must be 0 or inf, got {x}")
                elif self.kinds[i] is CURVE and not x.is_finite:
                    out.append(f"curve-row entry ({i + 1},{j + 1}) must be finite")
                if bool(x) != bool(self.matrix[j][i]):
                    if i < j:
                        out.append(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) disagree on adjacency")
        return out

    def require_well_formed(self) -> None:
        problems = self.problems()
        if problems:
            raise InvalidInputError("ill-formed degree refinement: " + "; ".join(problems))

    def permuted(self, perm: BlockPermutation) -> DegreeRefinement:
        """The matrix ``P M P^T``: block ``i`` moves to position ``perm(i)``."""
        n = self.order
        inv = perm.inverse()
        kinds = [self.kinds[inv(a)] for a in range(n)]
        rows = [[self.matrix[inv(a)][inv(b)] for b in range(n)] for a in range(n)]
        return DegreeRefinement(kinds, rows)

    def to_text(self) -> str:
        lines = ["blocks: " + " ".join(k.letter for k in self.kinds)]
        lines += [" ".join(str(x) for x in row) for row in self.matrix]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> DegreeRefinement:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("blocks:"):
            raise InvalidInputError("matrix text must start with a 'blocks:' header")
        kinds = [VertexKind.parse(t) for t in lines[0][len("blocks:"):].split()]
        rows = [[ExtNat.parse(t) for t in ln.split()] for ln in lines[1:]]
        return cls(kinds, rows)


# ----------------------------------------------------------------------
# ι and augmented valence


def iota(g: BipartiteMultigraph, r: str, s: str) -> ExtNat:
    """Weight with which ``r`` sees ``s`` in the JSJ tree."""
    kr = g.kind(r)
    g.kind(s)
    if r == s:
        raise InvalidInputError("iota needs two distinct vertices")
    m = g.multiplicity(r, s)
    if m == 0:
        return ZERO
    return INF if kr is SURFACE else ExtNat(m)


def augmented_valence(g: BipartiteMultigraph, r: str) -> ExtNat:
    """Valence of any lift of ``r`` in the JSJ tree."""
    nbrs = g.neighbors(r)
    if g.kind(r) is SURFACE:
        return INF if nbrs else ZERO
    return ExtNat(sum(nbrs.values()))


# ----------------------------------------------------------------------
# refinement


def _rank(keys: dict[str, tuple]) -> dict[str, int]:
    order = {k: i for i, k in enumerate(sorted(set(keys.values())))}
    return {v: order[k] for v, k in keys.items()}


def _colorings(g: BipartiteMultigraph) -> list[dict[str, int]]:
    # Surface sums are encoded as 0/1 flags (0 or ∞); the kind is already
    # the leading component of every colour, so flags never mix with counts.
    keys = {}
    for v, kind in g.items():
        if kind is CURVE:
            keys[v] = (0, g.valence(v))
        else:
            keys[v] = (1, 1 if g.neighbors(v) else 0)
    colors = _rank(keys)
    history = [colors]
    for _ in range(len(g) + 1):
        ncolors = len(set(colors.values()))
        sig = {}
        for v, kind in g.items():
            sums = [0] * ncolors
            for w, m in g.neighbors(v).items():
                if kind is CURVE:
                    sums[colors[w]] += m
                else:
                    sums[colors[w]] = 1
            sig[v] = (colors[v], tuple(sums))
        new = _rank(sig)
        if len(set(new.values())) == ncolors:
            return history
        colors = new
        history.append(colors)
    raise AssertionError("refinement failed to stabilise")  # pragma: no cover


def _partition_from(g: BipartiteMultigraph, colors: dict[str, int]) -> DegreePartition:
    n = len(set(colors.values()))
    blocks: list[list[str]] = [[] for _ in range(n)]
    for v in g.vertices:
        blocks[colors[v]].append(v)
    return DegreePartition(tuple(tuple(b) for b in blocks),
                           tuple(g.kind(b[0]) for b in blocks))


def refinement_history(g: BipartiteMultigraph) -> list[DegreePartition]:
    """Partition after the initial step and after each refining pass."""
    return [_partition_from(g, c) for c in _colorings(g)]


def degree_partition(g: BipartiteMultigraph) -> DegreePartition:
    """Coarsest equitable kind-homogeneous partition of ``g``.

    Blocks are ordered by their final refinement colour, which depends only
    on the isomorphism type of ``g`` (curve blocks first); members are
    listed in vertex order. Disconnected graphs are accepted.
    """
    return _partition_from(g, _colorings(g)[-1])


def degree_refinement(g: BipartiteMultigraph) -> DegreeRefinement:
    part = degree_partition(g)
    where = {v: i for i, b in enumerate(part.blocks) for v in b}
    rows = []
    for i, block in enumerate(part.blocks):
        rep = block[0]
        row = [ZERO] * len(part.blocks)
        for w, m in g.neighbors(rep).items():
            j = where[w]
            row[j] = INF if part.kinds[i] is SURFACE else row[j] + m
        rows.append(row)
    return DegreeRefinement(part.kinds, rows, part)


# ----------------------------------------------------------------------
# equivalence


def _matrix_colors(ms: Sequence[DegreeRefinement]) -> list[list[int]]:
    """Joint refinement colours of the blocks of several matrices.

    Colours are computed on the disjoint union so they are comparable
    across matrices; equivalent blocks always share a colour.
    """
    keys = {}
    for a, m in enumerate(ms):
        for i in range(m.order):
            keys[(a, i)] = (m.kinds[i].letter, m.matrix[i][i])
    colors = _rank(keys)
    while True:
        ncolors = len(set(colors.values()))
        sig = {}
        for a, m in enumerate(ms):
            for i in range(m.order):
                nb = sorted((colors[(a, j)], m.matrix[i][j], m.matrix[j][i])
                            for j in range(m.order) if j != i)
                sig[(a, i)] = (colors[(a, i)], tuple(nb))
        new = _rank(sig)
        if len(set(new.values())) == ncolors:
            break
        colors = new
    return [[colors[(a, i)] for i in range(m.order)] for a, m in enumerate(ms)]


def iter_equivalences(M: DegreeRefinement, M2: DegreeRefinement) -> Iterator[BlockPermutation]:
    """Yield every kind-preserving ``P`` with ``M2 = P M P^T``.

    Exhaustive backtracking; candidates are pruned by joint refinement
    colour, which any witness must preserve.
    """
    n = M.order
    if M2.order != n or sorted(k.letter for k in M.kinds) != sorted(k.letter for k in M2.kinds):
        return
    c1, c2 = _matrix_colors([M, M2])
    if sorted(c1) != sorted(c2):
        return
    cands = [[j for j in range(n) if c2[j] == c1[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: (len(cands[i]), i))
    assign: dict[int, int] = {}
    used = [False] * n
    a, b = M.matrix, M2.matrix

    def extend(depth: int) -> Iterator[BlockPermutation]:
        if depth == n:
            yield BlockPermutation(tuple(assign[i] for i in range(n)))
            return
        i = order[depth]
        for j in cands[i]:
            if used[j] or a[i][i] != b[j][j]:
                continue
            if any(a[i][k] != b[j][pk] or a[k][i] != b[pk][j] for k, pk in assign.items()):
                continue
            assign[i] = j
            used[j] = True
            yield from extend(depth + 1)
            del assign[i]
            used[j] = False

    yield from extend(0)


def refinement_equivalent(M: DegreeRefinement, M2: DegreeRefinement) -> BlockPermutation | None:
    """A witness that ``M`` and ``M2`` are equivalent, or ``None``."""
    return next(iter_equivalences(M, M2), None)


@dataclass(frozen=True)
class QIVerdict:
    equivalent: bool
    permutation: BlockPermutation | None
    first: DegreeRefinement
    second: DegreeRefinement

    def __bool__(self) -> bool:
        return self.equivalent


def is_quasi_isometric(g: BipartiteMultigraph, g2: BipartiteMultigraph) -> QIVerdict:
    """Decide whether groups with JSJ graphs ``g`` and ``g2`` are quasi-isometric."""
    for label, h in (("first", g), ("second", g2)):
        problems = validate_jsj_graph(h)
        if problems:
            raise InvalidInputError(f"{label} graph is not a JSJ graph: " + "; ".join(problems))
    m1, m2 = degree_refinement(g), degree_refinement(g2)
    perm = refinement_equivalent(m1, m2)
    return QIVerdict(perm is not None, perm, m1, m2)
