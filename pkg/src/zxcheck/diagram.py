"""Open ZX-diagrams: spiders, boundary vertices and typed edges."""

from __future__ import annotations

import json
from enum import IntEnum
from typing import Iterable, Iterator

from .phase import PI, ZERO, Phase


class VertexType(IntEnum):
    BOUNDARY = 0
    Z = 1
    X = 2


class EdgeType(IntEnum):
    SIMPLE = 1
    HADAMARD = 2


B, Z, X = VertexType.BOUNDARY, VertexType.Z, VertexType.X
S, H = EdgeType.SIMPLE, EdgeType.HADAMARD

_KIND_CODES = {B: "B", Z: "Z", X: "X"}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}
_EDGE_CODES = {S: "S", H: "H"}
_CODE_EDGES = {v: k for k, v in _EDGE_CODES.items()}


class DiagramError(ValueError):
    pass


def compose_kinds(k1: int, k2: int) -> EdgeType:
    """Kind of the wire obtained by splicing two stubs end to end."""
    return S if k1 == k2 else H


def toggle_kind(k: int) -> EdgeType:
    return H if k == S else S


class Diagram:
    """Mutable ZX-diagram with monotone vertex ids.

    Adjacency is stored as ``{v: {w: edge_type}}``. Vertex dictionaries are
    filled in id order, so iterating them yields ascending ids.
    """

    __slots__ = ("_types", "_phases", "_adj", "inputs", "outputs", "_next_id", "events")

    def __init__(self) -> None:
        self._types: dict[int, VertexType] = {}
        self._phases: dict[int, Phase] = {}
        self._adj: dict[int, dict[int, int]] = {}
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self._next_id = 0
        # counts of edge-level rewrites resolved by add_edge_smart
        self.events: dict[str, int] = {}

    # ---- vertices

    def add_vertex(self, ty: VertexType, phase: Phase = ZERO) -> int:
        v = self._next_id
        self._next_id += 1
        self._types[v] = ty
        self._adj[v] = {}
        if ty != B:
            self._phases[v] = phase
        return v

    def add_input(self) -> int:
        v = self.add_vertex(B)
        self.inputs.append(v)
        return v

    def add_output(self) -> int:
        v = self.add_vertex(B)
        self.outputs.append(v)
        return v

    def remove_vertex(self, v: int) -> None:
        adj = self._adj
        for w in adj.pop(v):
            del adj[w][v]
        if self._types.pop(v) == B:
            if v in self.inputs:
                self.inputs.remove(v)
            elif v in self.outputs:
                self.outputs.remove(v)
        else:
            del self._phases[v]

    def vertices(self) -> list[int]:
        return list(self._types)

    def spiders(self) -> list[int]:
        return [v for v, t in self._types.items() if t != B]

    def __contains__(self, v: object) -> bool:
        return v in self._types

    def __len__(self) -> int:
        return len(self._types)

    def num_spiders(self) -> int:
        return len(self._phases)

    def type(self, v: int) -> VertexType:
        return self._types[v]

    def is_boundary(self, v: int) -> bool:
        return self._types[v] == B

    def set_type(self, v: int, ty: VertexType) -> None:
        if (ty == B) != (self._types[v] == B):
            raise DiagramError("cannot convert between boundary and spider")
        self._types[v] = ty

    def phase(self, v: int) -> Phase:
        return self._phases[v]

    def set_phase(self, v: int, p: Phase) -> None:
        if v not in self._phases:
            raise DiagramError(f"vertex {v} carries no phase")
        self._phases[v] = p

    def add_to_phase(self, v: int, p: Phase) -> None:
        self._phases[v] = self._phases[v] + p

    # ---- edges

    def neighbors(self, v: int) -> Iterable[int]:
        return self._adj[v].keys()

    def incident(self, v: int) -> dict[int, int]:
        """Live neighbour-to-edge-type map of ``v``. Do not mutate."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edge_type(self, u: int, v: int) -> EdgeType | None:
        k = self._adj[u].get(v)
        return None if k is None else EdgeType(k)

    def connected(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int, EdgeType]]:
        for u, nb in self._adj.items():
            for v, k in sorted(nb.items()):
                if u < v:
                    yield u, v, EdgeType(k)

    def num_edges(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    def connect(self, u: int, v: int, k: int) -> None:
        """Insert an edge without any rewriting. Both ends must be free of it."""
        if u == v:
            raise DiagramError("self-loops are not stored")
        if v in self._adj[u]:
            raise DiagramError(f"edge {u}-{v} already present")
        self._adj[u][v] = k
        self._adj[v][u] = k

    def remove_edge(self, u: int, v: int) -> None:
        del self._adj[u][v]
        del self._adj[v][u]

    def set_edge_type(self, u: int, v: int, k: int) -> None:
        if v not in self._adj[u]:
            raise DiagramError(f"no edge {u}-{v}")
        self._adj[u][v] = k
        self._adj[v][u] = k

    def _event(self, name: str) -> None:
        self.events[name] = self.events.get(name, 0) + 1

    def add_edge_smart(self, u: int, v: int, k: int) -> Diagram:
        """Add an edge, resolving self-loops and parallel edges on the spot."""
        types = self._types
        tu = types.get(u)
        tv = types.get(v)
        if tu is None or tv is None:
            raise DiagramError(f"unknown vertex id {u if tu is None else v}")
        adj = self._adj
        if u == v:
            if tu == B:
                raise DiagramError("self-loop on a boundary vertex")
            if k == H:
                self._phases[u] = self._phases[u] + PI
                self._event("h_self_loop")
            else:
                self._event("self_loop")
            return self
        if tu == B or tv == B:
            if adj[u] and tu == B or adj[v] and tv == B:
                raise DiagramError("boundary vertex would exceed degree 1")
            adj[u][v] = k
            adj[v][u] = k
            return self
        old = adj[u].get(v)
        if old is None:
            adj[u][v] = k
            adj[v][u] = k
            return self
        same = tu == tv
        # reason in the frame where both ends have the same colour
        a = old if same else (H if old == S else S)
        b = k if same else (H if k == S else S)
        if a == S and b == S:
            merged = S
        elif a == H and b == H:
            merged = None
            self._event("zhh" if same else "hopf")
        else:
            merged = S
            self._phases[u] = self._phases[u] + PI
            self._event("parallel_mixed")
        if merged is None:
            del adj[u][v]
            del adj[v][u]
        else:
            if not same:
                merged = H if merged == S else S
            adj[u][v] = merged
            adj[v][u] = merged
        return self

    def fuse(self, u: int, v: int) -> None:
        """Merge spider ``v`` into its same-coloured neighbour ``u``."""
        adj = self._adj
        if self._types[u] != self._types[v] or self._types[u] == B:
            raise DiagramError("fusion needs two spiders of one colour")
        if adj[u].get(v) != S:
            raise DiagramError(f"no simple edge {u}-{v}")
        self._phases[u] = self._phases[u] + self._phases[v]
        nbrs = adj.pop(v)
        del self._types[v]
        del self._phases[v]
        for w, k in nbrs.items():
            del adj[w][v]
        for w, k in nbrs.items():
            if w != u:
                self.add_edge_smart(u, w, k)

    # ---- whole-diagram helpers

    def copy(self) -> Diagram:
        d = Diagram.__new__(Diagram)
        d._types = dict(self._types)
        d._phases = dict(self._phases)
        d._adj = {v: dict(nb) for v, nb in self._adj.items()}
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d._next_id = self._next_id
        d.events = dict(self.events)
        return d

    def relabeled(self) -> Diagram:
        """Copy with ids renumbered 0..n-1 in ascending order of the old ids."""
        d, _ = _copy_into(Diagram(), self)
        return d

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (self._types == other._types and self._phases == other._phases
                and self._adj == other._adj and self.inputs == other.inputs
                and self.outputs == other.outputs)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (f"Diagram(spiders={self.num_spiders()}, edges={self.num_edges()}, "
                f"inputs={len(self.inputs)}, outputs={len(self.outputs)})")

    def to_dict(self) -> dict:
        verts = []
        for v, t in self._types.items():
            rec: dict = {"id": v, "kind": _KIND_CODES[t]}
            if t != B:
                rec["phase"] = self._phases[v].to_dict()
            verts.append(rec)
        return {
            "vertices": verts,
            "edges": [[u, v, _EDGE_CODES[k]] for u, v, k in self.edges()],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Diagram:
        d = cls()
        try:
            for rec in sorted(data["vertices"], key=lambda r: int(r["id"])):
                v = int(rec["id"])
                t = _CODE_KINDS[rec["kind"]]
                d._types[v] = t
                d._adj[v] = {}
                if t != B:
                    d._phases[v] = Phase.from_dict(rec.get("phase") or {})
                d._next_id = v + 1
            for u, v, k in data["edges"]:
                if u not in d._types or v not in d._types:
                    raise DiagramError(f"edge {u}-{v} references an unknown vertex")
                d.connect(int(u), int(v), _CODE_EDGES[k])
            d.inputs = [int(v) for v in data["inputs"]]
            d.outputs = [int(v) for v in data["outputs"]]
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram document: {exc!r}") from exc
        d.validate()
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> Diagram:
        return cls.from_dict(json.loads(text))

    def validate(self) -> None:
        """Raise DiagramError unless the structural invariants hold."""
        io = self.inputs + self.outputs
        if len(set(io)) != len(io):
            raise DiagramError("a boundary is listed twice")
        bset = {v for v, t in self._types.items() if t == B}
        if set(io) != bset:
            raise DiagramError("inputs/outputs must list exactly the boundary vertices")
        for v, nb in self._adj.items():
            if v in nb:
                raise DiagramError(f"self-loop on {v}")
            if self._types[v] == B and len(nb) != 1:
                raise DiagramError(f"boundary {v} has degree {len(nb)}")
            for w, k in nb.items():
                if self._adj[w].get(v) != k:
                    raise DiagramError(f"asymmetric edge {v}-{w}")


def _copy_into(target: Diagram, src: Diagram) -> tuple[Diagram, dict[int, int]]:
    m: dict[int, int] = {}
    for v, t in src._types.items():
        m[v] = target.add_vertex(t, src._phases.get(v, ZERO))
    for v, nb in src._adj.items():
        mv = m[v]
        for w, k in nb.items():
            if v < w:
                target.connect(mv, m[w], k)
    target.inputs.extend(m[v] for v in src.inputs)
    target.outputs.extend(m[v] for v in src.outputs)
    return target, m


def identity(n: int) -> Diagram:
    """``n`` bare wires."""
    d = Diagram()
    ins = [d.add_input() for _ in range(n)]
    outs = [d.add_output() for _ in range(n)]
    for i, o in zip(ins, outs):
        d.connect(i, o, S)
    return d


def adjoint(d: Diagram) -> Diagram:
    r = d.copy()
    r.inputs, r.outputs = r.outputs, r.inputs
    for v, p in r._phases.items():
        r._phases[v] = -p
    return r


def tensor(a: Diagram, b: Diagram) -> Diagram:
    r, _ = _copy_into(Diagram(), a)
    _copy_into(r, b)
    return r


def compose(a: Diagram, b: Diagram) -> Diagram:
    """Diagram applying ``a`` first, then ``b``."""
    if len(a.outputs) != len(b.inputs):
        raise DiagramError(f"cannot compose: {len(a.outputs)} outputs vs {len(b.inputs)} inputs")
    r = Diagram()
    _, ma = _copy_into(r, a)
    r.inputs, r.outputs = [], []
    _, mb = _copy_into(r, b)
    r.inputs = [ma[v] for v in a.inputs]
    r.outputs = [mb[v] for v in b.outputs]
    adj = r._adj
    for o_old, i_old in zip(a.outputs, b.inputs):
        o, i = ma[o_old], mb[i_old]
        (x, k1), = adj[o].items()
        (y, k2), = adj[i].items()
        if x == i:
            # o and i joined each other through earlier splices: a closed loop
            for v in (o, i):
                del adj[v]
                del r._types[v]
            continue
        r.remove_edge(o, x)
        r.remove_edge(i, y)
        for v in (o, i):
            del adj[v]
            del r._types[v]
        r.add_edge_smart(x, y, compose_kinds(k1, k2))
    return r


def color_change(d: Diagram) -> None:
    """Turn every X-spider into a Z-spider, toggling its incident edges (in place)."""
    adj = d._adj
    for v, t in list(d._types.items()):
        if t != X:
            continue
        d._types[v] = Z
        for w, k in adj[v].items():
            nk = H if k == S else S
            adj[v][w] = nk
            adj[w][v] = nk


def fuse_all(d: Diagram) -> int:
    """Fuse every simple edge between same-coloured spiders. Returns the fusion count."""
    types, adj = d._types, d._adj
    count = 0
    for v in list(types):
        tv = types.get(v)
        if tv is None or tv == B:
            continue
        while True:
            w = next((w for w, k in adj[v].items() if k == S and types[w] == tv), None)
            if w is None:
                break
            d.fuse(v, w)
            count += 1
    return count


def to_graph_like(d: Diagram) -> Diagram:
    r = d.copy()
    make_graph_like(r)
    return r


def make_graph_like(d: Diagram) -> int:
    """In-place conversion to graph-like form. Returns the number of fusions."""
    color_change(d)
    fused = fuse_all(d)
    adj, types = d._adj, d._types
    claimed: set[int] = set()
    for b in [v for v, t in types.items() if t == B]:
        nb = adj[b]
        if len(nb) != 1:
            continue
        (w, k), = nb.items()
        if types[w] == B:
            if b > w:
                continue
            d.remove_edge(b, w)
            z1 = d.add_vertex(Z)
            d.connect(b, z1, S)
            last = z1
            if k == S:
                mid = d.add_vertex(Z)
                d.connect(last, mid, H)
                last = mid
            z2 = d.add_vertex(Z)
            d.connect(last, z2, H)
            d.connect(z2, w, S)
            claimed.update((z1, z2))
            continue
        if k == S and w not in claimed:
            claimed.add(w)
            continue
        d.remove_edge(b, w)
        z = d.add_vertex(Z)
        d.connect(b, z, S)
        claimed.add(z)
        if k == H:
            d.connect(z, w, H)
        else:
            mid = d.add_vertex(Z)
            d.connect(z, mid, H)
            d.connect(mid, w, H)
    return fused


def is_graph_like(d: Diagram, strict_boundaries: bool = True) -> bool:
    """Check the four graph-like conditions.

    With ``strict_boundaries`` every boundary must hang off its own Z-spider by a
    simple edge; otherwise a boundary may also attach by a Hadamard edge and
    several boundaries may share a spider (as happens after simplification).
    """
    types, adj = d._types, d._adj
    for v, t in types.items():
        nb = adj[v]
        if v in nb:
            return False
        if t == X:
            return False
        if t == Z:
            nbound = 0
            for w, k in nb.items():
                if types[w] == B:
                    nbound += 1
                elif k != H:
                    return False
            if strict_boundaries and nbound > 1:
                return False
        else:
            if len(nb) != 1:
                return False
            (w, k), = nb.items()
            if types[w] != Z:
                return False
            if strict_boundaries and k != S:
                return False
    return True
