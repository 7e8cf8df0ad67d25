"""Graphviz DOT export."""

from __future__ import annotations

from collections.abc import Mapping

from .graph import CURVE, BipartiteMultigraph


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: BipartiteMultigraph, annotations: Mapping[str, str] | None = None) -> str:
    """DOT text for ``g``: curves as open circles, surfaces filled.

    Each bundle of ``k > 1`` parallel edges is drawn once with label
    ``xk``. ``annotations`` adds an external label to chosen vertices.
    """
    annotations = annotations or {}
    lines = [f"graph {_quote(g.name or 'G')} {{"]
    for v, kind in g.items():
        attrs = ["shape=circle"]
        if kind is CURVE:
            attrs.append("style=solid")
        else:
            attrs += ["style=filled", "fillcolor=black", "fontcolor=white"]
        if v in annotations:
            attrs.append(f"xlabel={_quote(str(annotations[v]))}")
        lines.append(f"  {_quote(v)} [{', '.join(attrs)}];")
    for u, v, m in g.edges():
        label = f" [label={_quote(f'x{m}')}]" if m > 1 else ""
        lines.append(f"  {_quote(u)} -- {_quote(v)}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"
