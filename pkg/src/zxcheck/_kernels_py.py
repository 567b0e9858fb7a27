"""Pure-Python neighbourhood toggles used by local complementation and pivoting.

``adj`` is a diagram's ``{v: {w: edge_type}}`` map. All vertices passed in are
spiders, and every spider-spider edge is a Hadamard edge, so toggling means
inserting or deleting a Hadamard edge.
"""

from __future__ import annotations

_H = 2


def toggle_clique(adj: dict, vs: list) -> int:
    """Toggle the edge between every unordered pair of ``vs``. Returns pairs touched."""
    n = len(vs)
    for i in range(n):
        a = vs[i]
        na = adj[a]
        for j in range(i + 1, n):
            b = vs[j]
            if b in na:
                del na[b]
                del adj[b][a]
            else:
                na[b] = _H
                adj[b][a] = _H
    return n * (n - 1) // 2


def toggle_bipartite(adj: dict, xs: list, ys: list) -> int:
    """Toggle the edge between every ``x`` in ``xs`` and ``y`` in ``ys`` (disjoint lists)."""
    for a in xs:
        na = adj[a]
        for b in ys:
            if b in na:
                del na[b]
                del adj[b][a]
            else:
                na[b] = _H
                adj[b][a] = _H
    return len(xs) * len(ys)
