"""Strict JSON documents for graphs and degree refinements.

A graph document::

    {"name": "star",
     "vertices": [{"id": "c", "kind": "curve"},
                  {"id": "s1", "kind": "surface", "chi": -1}],
     "edges": [["c", "s1"], ["c", "s2", 2]]}

``chi`` is an integer or a string ``"p/q"``. Repeated edges add up.

A matrix document gives a degree refinement directly::

    {"name": "example", "kinds": ["T", "F"], "rows": [[0, 1], ["inf", 0]]}

Unknown keys are rejected in both.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import InvalidInputError, ParseError
from .extnat import ExtNat
from .graph import BipartiteMultigraph, PManifold, VertexKind
from .refinement import DegreeRefinement

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


@dataclass(frozen=True)
class GraphDocument:
    graph: BipartiteMultigraph
    chi: dict[str, Fraction] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.graph.name

    def to_pmanifold(self) -> PManifold:
        """The P-manifold view; every χ must be an integer."""
        chi = {}
        for v, x in self.chi.items():
            if x.denominator != 1:
                raise InvalidInputError(f"surface {v}: P-manifold chi must be an integer, got {x}")
            chi[v] = int(x)
        return PManifold(self.graph, chi)


@dataclass(frozen=True)
class MatrixDocument:
    refinement: DegreeRefinement
    name: str = ""


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise ParseError(message, path=path)


def _keys(obj: dict, allowed: set[str], required: set[str], path: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise ParseError(f"unknown key {min(extra)!r}", path=path)
    missing = required - set(obj)
    if missing:
        raise ParseError(f"missing key {min(missing)!r}", path=path)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _chi(x, path: str) -> Fraction:
    if _is_int(x):
        return Fraction(x)
    _expect(isinstance(x, str) and _RATIONAL.fullmatch(x) is not None,
            f"chi must be an integer or a string 'p/q', got {x!r}", path)
    num, _, den = x.partition("/")
    _expect(den == "" or int(den) != 0, "chi has zero denominator", path)
    return Fraction(int(num), int(den) if den else 1)


def _graph_from(obj: dict) -> GraphDocument:
    _keys(obj, {"name", "vertices", "edges"}, {"vertices", "edges"}, "$")
    name = obj.get("name", "")
    _expect(isinstance(name, str), "name must be a string", "$.name")
    _expect(isinstance(obj["vertices"], list), "vertices must be an array", "$.vertices")
    _expect(isinstance(obj["edges"], list), "edges must be an array", "$.edges")

    vertices, chi, seen = [], {}, set()
    for i, v in enumerate(obj["vertices"]):
        path = f"$.vertices[{i}]"
        _expect(isinstance(v, dict), "vertex must be an object", path)
        _keys(v, {"id", "kind", "chi"}, {"id", "kind"}, path)
        vid = v["id"]
        _expect(isinstance(vid, str) and vid != "", "id must be a non-empty string", path + ".id")
        _expect(vid not in seen, f"duplicate vertex id {vid!r}", path + ".id")
        seen.add(vid)
        _expect(v["kind"] in ("curve", "surface"), "kind must be 'curve' or 'surface'", path + ".kind")
        kind = VertexKind(v["kind"])
        if "chi" in v:
            _expect(kind is VertexKind.SURFACE, "only surface vertices carry chi", path + ".chi")
            chi[vid] = _chi(v["chi"], path + ".chi")
        vertices.append((vid, kind))

    edges = []
    for i, e in enumerate(obj["edges"]):
        path = f"$.edges[{i}]"
        _expect(isinstance(e, list) and len(e) in (2, 3), "edge must be [curve, surface] or "
                "[curve, surface, multiplicity]", path)
        for k in (0, 1):
            _expect(isinstance(e[k], str) and e[k] in seen, f"unknown vertex {e[k]!r}", f"{path}[{k}]")
        _expect(e[0] != e[1], "edge joins a vertex to itself", path)
        m = e[2] if len(e) == 3 else 1
        _expect(_is_int(m) and m >= 1, "multiplicity must be a positive integer", f"{path}[2]")
        edges.append((e[0], e[1], m))
    return GraphDocument(BipartiteMultigraph(vertices, edges, name=name), chi)


def _matrix_from(obj: dict) -> MatrixDocument:
    _keys(obj, {"name", "kinds", "rows"}, {"kinds", "rows"}, "$")
    name = obj.get("name", "")
    _expect(isinstance(name, str), "name must be a string", "$.name")
    kinds_raw, rows_raw = obj["kinds"], obj["rows"]
    _expect(isinstance(kinds_raw, list), "kinds must be an array", "$.kinds")
    kinds = []
    for i, k in enumerate(kinds_raw):
        _expect(k in ("T", "F"), "kind must be 'T' or 'F'", f"$.kinds[{i}]")
        kinds.append(VertexKind.parse(k))
    _expect(isinstance(rows_raw, list) and len(rows_raw) == len(kinds),
            f"rows must be an array of {len(kinds)} rows", "$.rows")
    rows = []
    for i, row in enumerate(rows_raw):
        _expect(isinstance(row, list) and len(row) == len(kinds),
                f"row must have {len(kinds)} entries", f"$.rows[{i}]")
        out = []
        for j, x in enumerate(row):
            _expect((_is_int(x) and x >= 0) or x == "inf",
                    "entry must be a non-negative integer or 'inf'", f"$.rows[{i}][{j}]")
            out.append(ExtNat.parse(x) if x == "inf" else ExtNat(x))
        rows.append(out)
    # Well-formedness is left to consumers so that ``validate`` can report it.
    return MatrixDocument(DegreeRefinement(kinds, rows), name)


def loads(text: str) -> GraphDocument | MatrixDocument:
    """Parse a graph or matrix document, telling them apart by their keys."""
    obj = _loads(text)
    _expect(isinstance(obj, dict), "document must be a JSON object", "$")
    if "rows" in obj or "kinds" in obj:
        return _matrix_from(obj)
    return _graph_from(obj)


def load(path: str | Path) -> GraphDocument | MatrixDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text: {exc.reason}") from None
    return loads(text)


def loads_graph(text: str) -> GraphDocument:
    doc = loads(text)
    if not isinstance(doc, GraphDocument):
        raise ParseError("expected a graph document, got a matrix document", path="$")
    return doc


def loads_matrix(text: str) -> MatrixDocument:
    doc = loads(text)
    if not isinstance(doc, MatrixDocument):
        raise ParseError("expected a matrix document, got a graph document", path="$")
    return doc


def _chi_json(x: Fraction | int):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def graph_to_obj(g: BipartiteMultigraph, chi=None) -> dict:
    chi = dict(chi or {})
    vertices = []
    for v, kind in g.items():
        entry = {"id": v, "kind": kind.value}
        if v in chi:
            entry["chi"] = _chi_json(chi[v])
        vertices.append(entry)
    return {"name": g.name, "vertices": vertices, "edges": [[u, v, m] for u, v, m in g.edges()]}


def _dump_rows(obj: dict, list_keys: tuple[str, ...]) -> str:
    # One list item per line keeps documents diffable.
    parts = []
    for key, value in obj.items():
        if key in list_keys:
            items = ",\n".join("    " + json.dumps(x, ensure_ascii=False) for x in value)
            body = f"[\n{items}\n  ]" if value else "[]"
        else:
            body = json.dumps(value, ensure_ascii=False)
        parts.append(f"  {json.dumps(key)}: {body}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def dumps_graph(g: BipartiteMultigraph | PManifold | GraphDocument, chi=None) -> str:
    if isinstance(g, (PManifold, GraphDocument)):
        g, chi = g.graph, g.chi
    return _dump_rows(graph_to_obj(g, chi), ("vertices", "edges"))


def matrix_to_obj(m: DegreeRefinement, name: str = "") -> dict:
    obj = {"name": name} if name else {}
    obj["kinds"] = [k.letter for k in m.kinds]
    obj["rows"] = [[x.value if x.is_finite else "inf" for x in row] for row in m.matrix]
    return obj


def dumps_matrix(m: DegreeRefinement, name: str = "") -> str:
    return _dump_rows(matrix_to_obj(m, name), ("rows",))
