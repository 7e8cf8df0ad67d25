"""Euler characteristic vectors that obstruct abstract commensurability.

Both tests here are necessary conditions only. A failing comparison proves
two groups are not abstractly commensurable; a passing one proves nothing.

Matchings follow the boundary-circle reading: a chosen set of surfaces must
meet every curve along exactly one edge, counted with multiplicity.
"""

from __future__ import annotations

import enum
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, combinations

from .errors import Cancelled, InternalError, InvalidInputError, NoMatchingError, ResourceLimitError
from .graph import (SURFACE, BipartiteMultigraph, PManifold, validate_chi_decoration,
                    validate_jsj_graph)
from .refinement import degree_partition, degree_refinement, iter_equivalences

MAX_SEARCH_NODES = 2**30
_CANCEL_EVERY = 1024


# ----------------------------------------------------------------------
# vectors


@dataclass(frozen=True)
class EulerVector:
    """A tuple of exact Euler characteristics.

    Block vectors are sorted ascending; matching vectors keep layer order.
    """

    entries: tuple[Fraction, ...]

    def __init__(self, entries: Iterable[Fraction | int]):
        object.__setattr__(self, "entries", tuple(Fraction(x) for x in entries))

    @classmethod
    def sorted(cls, entries: Iterable[Fraction | int]) -> EulerVector:
        return cls(sorted(Fraction(x) for x in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, EulerVector):
            return self.entries == other.entries
        if isinstance(other, tuple):
            return self.entries == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.entries) + ")"

    def scaled(self, d: int | Fraction) -> EulerVector:
        return EulerVector(x * d for x in self.entries)


def vectors_commensurable(v: Sequence[Fraction | int], w: Sequence[Fraction | int]) -> tuple[int, int] | None:
    """Integers ``(K, K2)`` in lowest terms with ``K * v == K2 * w``, or ``None``.

    ``K2`` is always positive; ``K`` is positive whenever the vectors have a
    common sign, which is the case for Euler characteristic vectors.
    """
    v = [Fraction(x) for x in v]
    w = [Fraction(x) for x in w]
    if len(v) != len(w):
        return None
    ratio = None
    for a, b in zip(v, w):
        if (a == 0) != (b == 0):
            return None
        if a != 0:
            q = b / a
            if ratio is None:
                ratio = q
            elif q != ratio:
                return None
    if ratio is None:
        return (1, 1)
    return (ratio.numerator, ratio.denominator)


# ----------------------------------------------------------------------
# verdicts


class Verdict(enum.Enum):
    OBSTRUCTED = "OBSTRUCTED"
    NOT_OBSTRUCTED = "NOT_OBSTRUCTED"
    INAPPLICABLE = "INAPPLICABLE"


@dataclass(frozen=True)
class CommVerdict:
    test: str
    verdict: Verdict
    first: EulerVector | None = None
    second: EulerVector | None = None
    witness: tuple[int, int] | None = None
    reason: str = ""

    @property
    def obstructed(self) -> bool:
        return self.verdict is Verdict.OBSTRUCTED

    def line(self) -> str:
        parts = [f"{self.test}: {self.verdict.value}"]
        if self.first is not None and self.second is not None:
            parts.append(f"{self.first} vs {self.second}")
        if self.witness is not None:
            parts.append(f"witness K={self.witness[0]} K'={self.witness[1]}")
        if self.reason:
            parts.append(f"({self.reason})")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "verdict": self.verdict.value,
            "first": None if self.first is None else str(self.first),
            "second": None if self.second is None else str(self.second),
            "witness": None if self.witness is None else list(self.witness),
            "reason": self.reason,
        }


# ----------------------------------------------------------------------
# block Euler characteristic vectors


def _graph_and_chi(x) -> tuple[BipartiteMultigraph, Mapping[str, Fraction | int]]:
    if isinstance(x, PManifold):
        return x.graph, x.chi
    g, chi = x
    return g, chi


def _checked(g: BipartiteMultigraph, chi: Mapping) -> None:
    problems = validate_jsj_graph(g) + validate_chi_decoration(g, chi)
    if problems:
        raise InvalidInputError("; ".join(problems))


def _block_sums(g: BipartiteMultigraph, chi: Mapping) -> list[Fraction]:
    """Per-block χ sums in block order, one entry per surface block."""
    part = degree_partition(g)
    return [sum((Fraction(chi[v]) for v in b), Fraction(0))
            for b, k in zip(part.blocks, part.kinds) if k is SURFACE]


def block_euler_vector(g: BipartiteMultigraph | PManifold,
                       chi: Mapping[str, Fraction | int] | None = None) -> EulerVector:
    """Sum χ over each surface block of the degree partition and sort the sums."""
    if chi is None:
        g, chi = _graph_and_chi(g)
    _checked(g, chi)
    return EulerVector.sorted(_block_sums(g, chi))


def block_obstruction(a, b, *, blockwise: bool = False) -> CommVerdict:
    """Compare block Euler characteristic vectors.

    ``a`` and ``b`` are P-manifolds or ``(graph, chi)`` pairs. The default
    compares sorted vectors. ``blockwise=True`` instead compares per-block
    sums along every block correspondence between the two degree
    refinements, and is inapplicable when there is none.
    """
    ga, ca = _graph_and_chi(a)
    gb, cb = _graph_and_chi(b)
    _checked(ga, ca)
    _checked(gb, cb)
    if not blockwise:
        va = EulerVector.sorted(_block_sums(ga, ca))
        vb = EulerVector.sorted(_block_sums(gb, cb))
        k = vectors_commensurable(va, vb)
        return CommVerdict("block", Verdict.NOT_OBSTRUCTED if k else Verdict.OBSTRUCTED, va, vb, k)

    ma, mb = degree_refinement(ga), degree_refinement(gb)
    sa, sb = _per_block(ca, ma), _per_block(cb, mb)
    va = EulerVector(sa[i] for i in ma.surface_blocks)
    seen = False
    for perm in iter_equivalences(ma, mb):
        seen = True
        vb = EulerVector(sb[perm(i)] for i in ma.surface_blocks)
        k = vectors_commensurable(va, vb)
        if k:
            return CommVerdict("block-blockwise", Verdict.NOT_OBSTRUCTED, va, vb, k)
    if not seen:
        return CommVerdict("block-blockwise", Verdict.INAPPLICABLE,
                           reason="degree refinements are not equivalent")
    return CommVerdict("block-blockwise", Verdict.OBSTRUCTED, va,
                       reason="no block correspondence makes the sums commensurable")


def _per_block(chi, m) -> dict[int, Fraction]:
    return {i: sum((Fraction(chi[v]) for v in b), Fraction(0))
            for i, b in enumerate(m.partition.blocks) if m.kinds[i] is SURFACE}


# ----------------------------------------------------------------------
# matchings


@dataclass(frozen=True)
class Matching:
    """A set of surfaces meeting every curve along exactly one edge."""

    chosen: tuple[str, ...]

    def __contains__(self, v: object) -> bool:
        return v in self.chosen

    def __len__(self) -> int:
        return len(self.chosen)

    def as_set(self) -> frozenset[str]:
        return frozenset(self.chosen)

    def chi(self, p: PManifold) -> Fraction:
        return sum((Fraction(p.surface_chi(s)) for s in self.chosen), Fraction(0))

    def __str__(self) -> str:
        return "{" + ", ".join(self.chosen) + "}"


def _graph(p: PManifold | BipartiteMultigraph) -> BipartiteMultigraph:
    return p.graph if isinstance(p, PManifold) else p


def is_matching(p: PManifold | BipartiteMultigraph, chosen: Iterable[str]) -> bool:
    g = _graph(p)
    chosen = set(chosen)
    if any(v not in g or g.kind(v) is not SURFACE for v in chosen):
        return False
    return all(sum(m for s, m in g.neighbors(c).items() if s in chosen) == 1 for c in g.curves)


def uniform_curve_degree(p: PManifold | BipartiteMultigraph) -> int | None:
    """The common valence of all curves, if they share one."""
    g = _graph(p)
    degrees = {g.valence(c) for c in g.curves}
    return degrees.pop() if len(degrees) == 1 else None


def _powerset(items: Sequence[str]):
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


class _Search:
    """Exact cover of curves by surfaces meeting each along single edges."""

    def __init__(self, g: BipartiteMultigraph, cancel, max_nodes: int):
        self.g = g
        self.cancel = cancel
        self.max_nodes = max_nodes
        self.nodes = 0
        # A surface meeting some curve twice over-covers it and is never usable.
        self.usable = [s for s in g.surfaces
                       if g.neighbors(s) and all(m == 1 for m in g.neighbors(s).values())]
        self.isolated = tuple(s for s in g.surfaces if not g.neighbors(s))
        self.pos = {v: i for i, v in enumerate(g.vertices)}

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceLimitError(f"matching search exceeded {self.max_nodes} nodes")
        if self.cancel is not None and self.nodes % _CANCEL_EVERY == 0 and self.cancel.is_set():
            raise Cancelled("matching search cancelled")

    def candidates(self, c: str, covered: set[str]) -> list[str]:
        g = self.g
        return [s for s in g.neighbors(c)
                if s in self.usable_set and not any(c2 in covered for c2 in g.neighbors(s))]

    def covers(self, visit) -> None:
        """Call ``visit(chosen)`` for every exact cover of the curves.

        Branches on the uncovered curve with the fewest candidates. Any cover
        uses exactly one surface at that curve, so each cover is met once.
        """
        g = self.g
        self.usable_set = set(self.usable)
        covered: set[str] = set()
        chosen: list[str] = []

        def rec() -> None:
            self.tick()
            best, best_cands = None, None
            for c in g.curves:
                if c in covered:
                    continue
                cands = self.candidates(c, covered)
                if best is None or len(cands) < len(best_cands):
                    best, best_cands = c, cands
                    if not cands:
                        return
            if best is None:
                visit(chosen)
                return
            for s in best_cands:
                chosen.append(s)
                newly = list(g.neighbors(s))
                covered.update(newly)
                if visit.descend(chosen):
                    rec()
                covered.difference_update(newly)
                chosen.pop()

        rec()

    def sort_key(self, chosen: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted(self.pos[s] for s in chosen))

    def ordered(self, chosen: Iterable[str]) -> tuple[str, ...]:
        return tuple(self.g.vertices[i] for i in self.sort_key(chosen))


class _Collect:
    def __init__(self):
        self.found: list[tuple[str, ...]] = []

    def __call__(self, chosen):
        self.found.append(tuple(chosen))

    def descend(self, chosen) -> bool:
        return True


def enumerate_matchings(p: PManifold | BipartiteMultigraph, *, cancel=None,
                        max_nodes: int = MAX_SEARCH_NODES) -> list[Matching]:
    """Every matching, ordered by the input positions of the chosen surfaces.

    Surfaces without boundary affect no curve, so each may be added to any
    matching. ``cancel`` is any object with ``is_set()``, such as a
    :class:`threading.Event`.
    """
    search = _Search(_graph(p), cancel, max_nodes)
    collect = _Collect()
    search.covers(collect)
    out = set()
    for base in collect.found:
        for extra in _powerset(search.isolated):
            out.add(search.sort_key(base + extra))
    g = search.g
    return [Matching(tuple(g.vertices[i] for i in key)) for key in sorted(out)]


@dataclass(frozen=True)
class MaximalMatching:
    matching: Matching
    chi: Fraction
    optimal: tuple[Matching, ...] = ()
    """All matchings attaining ``chi``, when requested."""


class _Best:
    def __init__(self, p: PManifold, search: _Search):
        self.p = p
        self.search = search
        self.chi = {s: Fraction(p.surface_chi(s)) for s in p.graph.surfaces}
        self.best: Fraction | None = None
        self.winners: list[tuple[str, ...]] = []

    def partial(self, chosen) -> Fraction:
        return sum((self.chi[s] for s in chosen), Fraction(0))

    def descend(self, chosen) -> bool:
        # χ < 0, so the running sum only falls: prune once it is already worse.
        return self.best is None or self.partial(chosen) >= self.best

    def __call__(self, chosen):
        total = self.partial(chosen)
        if self.best is None or total > self.best:
            self.best, self.winners = total, [tuple(chosen)]
        elif total == self.best:
            self.winners.append(tuple(chosen))


def maximal_matching(p: PManifold, *, all_optimal: bool = False, cancel=None,
                     max_nodes: int = MAX_SEARCH_NODES) -> MaximalMatching | None:
    """A matching of greatest total χ, or ``None`` when no matching exists.

    Ties go to the matching whose chosen surfaces, listed by input position,
    form the lexicographically smallest tuple of positions. Surfaces
    without boundary are never chosen, since they only lower the total.
    """
    problems = validate_chi_decoration(p.graph, p.chi)
    if problems:
        raise InvalidInputError("; ".join(problems))
    search = _Search(p.graph, cancel, max_nodes)
    best = _Best(p, search)
    search.covers(best)
    if best.best is None:
        return None
    keys = sorted(search.sort_key(w) for w in best.winners)
    g = p.graph
    as_matching = [Matching(tuple(g.vertices[i] for i in k)) for k in keys]
    return MaximalMatching(as_matching[0], best.best, tuple(as_matching) if all_optimal else ())


def forest_matching(p: PManifold | BipartiteMultigraph) -> Matching:
    """A matching of a forest with uniform curve degree at least two.

    Grown outward from the first surface of each component: every chosen
    surface covers its curves, the other surfaces at those curves are
    excluded, and each curve reached only through an excluded surface picks
    its first remaining surface.
    """
    g = _graph(p)
    if not g.is_forest():
        raise InvalidInputError("forest_matching needs a forest with all multiplicities 1")
    n = uniform_curve_degree(g)
    if g.curves and (n is None or n < 2):
        raise InvalidInputError("forest_matching needs a uniform curve degree of at least 2")
    pos = {v: i for i, v in enumerate(g.vertices)}

    def ordered(vs):
        return sorted(vs, key=pos.__getitem__)

    chosen: set[str] = set()
    excluded: set[str] = set()
    covered: set[str] = set()
    for comp in g.components():
        surfaces = [v for v in comp if g.kind(v) is SURFACE]
        if not surfaces:
            continue
        queue = deque([surfaces[0]])
        queued = {surfaces[0]}
        while queue:
            s = queue.popleft()
            chosen.add(s)
            for c in ordered(g.neighbors(s)):
                if c in covered:
                    raise InternalError(f"curve {c} covered twice")
                covered.add(c)
                for x in ordered(g.neighbors(c)):
                    if x == s or x in excluded:
                        continue
                    excluded.add(x)
                    # In a forest each other curve of x is first reached here.
                    for c2 in ordered(g.neighbors(x)):
                        if c2 == c:
                            continue
                        options = [y for y in ordered(g.neighbors(c2))
                                   if y != x and y not in excluded and y not in queued]
                        if not options:
                            raise InternalError(f"curve {c2} has no surface left to cover it")
                        queue.append(options[0])
                        queued.add(options[0])
    result = Matching(tuple(ordered(chosen)))
    if not is_matching(g, result.chosen):
        raise InternalError(f"forest procedure produced a non-matching {result}")
    return result


# ----------------------------------------------------------------------
# matching Euler characteristic vectors


@dataclass(frozen=True)
class MatchingVector:
    vector: EulerVector
    layers: tuple[Matching, ...]
    alternatives: frozenset[tuple[Fraction, ...]] = frozenset()
    """Every vector reachable through some choice of optimal layers, when checked."""
    diagnostics: tuple[str, ...] = ()

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return self.vector.entries

    def __str__(self) -> str:
        return str(self.vector)


def _layer_step(residual: PManifold, m: Matching, layer: int) -> PManifold:
    nxt = residual.without(m.chosen)
    for c in residual.graph.curves:
        if nxt.graph.valence(c) != residual.graph.valence(c) - 1:
            raise InternalError(f"layer {layer}: curve {c} did not lose exactly one edge")
    return nxt


def _all_vectors(p: PManifold, remaining: int, cancel, max_nodes) -> set[tuple[Fraction, ...]]:
    if remaining == 0:
        return {()}
    mm = maximal_matching(p, all_optimal=True, cancel=cancel, max_nodes=max_nodes)
    if mm is None:
        return set()
    out = set()
    for m in mm.optimal:
        for rest in _all_vectors(p.without(m.chosen), remaining - 1, cancel, max_nodes):
            out.add((mm.chi,) + rest)
    return out


def matching_vector(p: PManifold, *, check_invariance: bool = False, cancel=None,
                    max_nodes: int = MAX_SEARCH_NODES) -> MatchingVector:
    """Peel ``n`` maximal matchings off ``p``, where ``n`` is the curve degree.

    Raises :class:`NoMatchingError` naming the first layer without a
    matching. With ``check_invariance`` every optimal choice at every layer
    is explored and any disagreement is reported in ``diagnostics``.
    """
    n = uniform_curve_degree(p)
    if n is None:
        raise InvalidInputError("curves do not share a uniform degree")
    residual = p
    layers, values = [], []
    for layer in range(1, n + 1):
        mm = maximal_matching(residual, cancel=cancel, max_nodes=max_nodes)
        if mm is None:
            raise NoMatchingError(layer)
        layers.append(mm.matching)
        values.append(mm.chi)
        residual = _layer_step(residual, mm.matching, layer)
    if residual.graph.surfaces:
        raise InternalError(f"surfaces {residual.graph.surfaces} left after {n} layers")
    vector = EulerVector(values)

    alternatives: frozenset = frozenset()
    diagnostics: tuple[str, ...] = ()
    if check_invariance:
        alternatives = frozenset(_all_vectors(p, n, cancel, max_nodes))
        if alternatives != {vector.entries}:
            others = sorted(a for a in alternatives if a != vector.entries)
            diagnostics = tuple(
                "optimal layer choices also give " + str(EulerVector(a)) for a in others)
    return MatchingVector(vector, tuple(layers), alternatives, diagnostics)


def matching_obstruction(a: PManifold, b: PManifold, *, check_invariance: bool = False) -> CommVerdict:
    """Compare matching vectors of two tree P-manifolds of the same curve degree."""
    for label, p in (("first", a), ("second", b)):
        if not p.graph.is_tree():
            return CommVerdict("matching", Verdict.INAPPLICABLE,
                               reason=f"{label} graph is not a tree with single edges")
    na, nb = uniform_curve_degree(a), uniform_curve_degree(b)
    if na is None or nb is None:
        return CommVerdict("matching", Verdict.INAPPLICABLE, reason="curve degree is not uniform")
    if na != nb:
        return CommVerdict("matching", Verdict.INAPPLICABLE,
                           reason=f"curve degrees differ ({na} vs {nb})")
    try:
        va = matching_vector(a, check_invariance=check_invariance)
        vb = matching_vector(b, check_invariance=check_invariance)
    except NoMatchingError as exc:
        raise InternalError(f"tree P-manifold without a matching: {exc}") from exc
    k = vectors_commensurable(va.vector, vb.vector)
    diag = "; ".join(va.diagnostics + vb.diagnostics)
    return CommVerdict("matching", Verdict.NOT_OBSTRUCTED if k else Verdict.OBSTRUCTED,
                       va.vector, vb.vector, k, reason=diag)


# ----------------------------------------------------------------------
# genus families


def genus_family(p: PManifold, v: str, genus: int) -> PManifold:
    """Replace surface ``v`` by the orientable genus-``genus`` surface with the same boundary."""
    if v not in p.graph or p.graph.kind(v) is not SURFACE:
        raise InvalidInputError(f"{v!r} is not a surface vertex")
    if isinstance(genus, bool) or not isinstance(genus, int) or genus < 1:
        raise InvalidInputError(f"genus must be a positive integer, got {genus!r}")
    b = p.graph.valence(v)
    chi = 2 - 2 * genus - b
    if chi >= 0:
        raise InvalidInputError(f"genus {genus} with {b} boundary circles has chi {chi} >= 0")
    return p.with_chi(v, chi)


__all__ = [
    "CommVerdict", "EulerVector", "Matching", "MatchingVector", "MaximalMatching", "Verdict",
    "block_euler_vector", "block_obstruction", "enumerate_matchings", "forest_matching",
    "genus_family", "is_matching", "matching_obstruction", "matching_vector",
    "maximal_matching", "uniform_curve_degree", "vectors_commensurable",
]
