"""Graph-like rewrite rules and the driver that runs them to a fixpoint.

Every pass processes candidates through a min-heap of vertex ids, so ties are
always broken towards the smallest id and a run is reproducible.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import B, H, S, Z, Diagram, DiagramError, make_graph_like
from .kernels import toggle_bipartite, toggle_clique
from .phase import PI, ZERO, Phase

_HALF_PI = math.pi / 2


class SimplifyError(RuntimeError):
    pass


class SimplifyTimeout(SimplifyError):
    pass


@dataclass
class SimplifyOptions:
    rounding_enabled: bool = False
    epsilon: float = 1e-10
    max_iterations: int = 1000
    trace: bool = False
    time_limit: float | None = None  # seconds

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass
class SimplifyReport:
    rule_counts: dict[str, int] = field(default_factory=dict)
    iterations: int = 0
    spiders_before: int = 0
    spiders_after: int = 0
    trace: list[str] = field(default_factory=list)

    def total(self) -> int:
        return sum(self.rule_counts.values())


# ---------------------------------------------------------------- predicates

def _interior(d: Diagram, v: int) -> bool:
    types = d._types
    return all(types[w] != B for w in d._adj[v])


def _is_hub(d: Diagram, v: int) -> bool:
    """Interior Pauli spider with exactly one degree-1 neighbour."""
    adj = d._adj
    if d._types[v] != Z or not d._phases[v].is_pauli or not _interior(d, v):
        return False
    return sum(1 for w in adj[v] if len(adj[w]) == 1) == 1


def _lc_candidate(d: Diagram, v: int) -> bool:
    return d._types.get(v) == Z and d._phases[v].is_proper_clifford and _interior(d, v)


def _pauli_interior(d: Diagram, v: int) -> bool:
    return d._types.get(v) == Z and d._phases[v].is_pauli and _interior(d, v)


def pivot_partner(d: Diagram, u: int) -> int | None:
    """Smallest interior Pauli neighbour of the interior Pauli spider ``u``."""
    if not _pauli_interior(d, u):
        return None
    best = None
    for v in d._adj[u]:
        if (best is None or v < best) and _pauli_interior(d, v):
            best = v
    return best


def _gb_target(d: Diagram, u: int, v: int) -> bool:
    adj, types = d._adj, d._types
    if types[v] != Z or len(adj[v]) < 2:
        return False
    nbound = 0
    for w in adj[v]:
        if types[w] == B:
            nbound += 1
        elif w != u and len(adj[w]) == 1:
            return False
    if nbound:
        return True
    return not d._phases[v].is_clifford


def boundary_pivot_partner(d: Diagram, u: int) -> int | None:
    """Partner for a boundary/gadget pivot: a boundary spider or interior non-Clifford spider."""
    if not _pauli_interior(d, u):
        return None
    adj = d._adj
    if any(len(adj[w]) == 1 for w in adj[u]):
        return None
    for v in sorted(adj[u]):
        if _gb_target(d, u, v):
            return v
    return None


def find_gadgets(d: Diagram) -> list[tuple[int, int]]:
    """(hub, leaf) pairs in ascending hub order."""
    adj, types = d._adj, d._types
    out = []
    for h in d.spiders():
        if not _is_hub(d, h):
            continue
        leaf = next(w for w in adj[h] if len(adj[w]) == 1)
        if types[leaf] == Z and len(adj[h]) >= 2:
            out.append((h, leaf))
    return out


def is_reduced(d: Diagram) -> bool:
    """True when no rule of the engine applies any more."""
    adj, types, phases = d._adj, d._types, d._phases
    for v in d.spiders():
        nb = adj[v]
        for w, k in nb.items():
            if types[w] != B and k == S:
                return False
        if len(nb) == 2 and phases[v].is_zero:
            return False
        if len(nb) == 0:
            return False
        if _lc_candidate(d, v):
            return False
        if pivot_partner(d, v) is not None or boundary_pivot_partner(d, v) is not None:
            return False
    seen = set()
    for h, leaf in find_gadgets(d):
        targets = frozenset(adj[h]) - {leaf}
        if len(targets) == 1 or targets in seen:
            return False
        seen.add(targets)
    return True


# ---------------------------------------------------------------- single rewrites

def local_complementation(d: Diagram, v: int) -> list[int]:
    """Remove the interior proper-Clifford spider ``v`` (rule LC). Returns its old neighbours."""
    if not _lc_candidate(d, v):
        raise SimplifyError(f"vertex {v} is not an interior proper-Clifford spider")
    adj = d._adj
    if any(k != H for k in adj[v].values()):
        raise SimplifyError(f"vertex {v} has a non-Hadamard edge")
    p = d._phases.pop(v)
    ns = sorted(adj.pop(v))
    del d._types[v]
    phases = d._phases
    neg = -p
    for n in ns:
        del adj[n][v]
        phases[n] = phases[n] + neg
    toggle_clique(adj, ns)
    return ns


def pivot(d: Diagram, u: int, v: int) -> list[int]:
    """Remove two adjacent interior Pauli spiders (rule P). Returns the affected neighbours."""
    adj = d._adj
    if not (_pauli_interior(d, u) and _pauli_interior(d, v) and adj[u].get(v) == H):
        raise SimplifyError(f"{u}-{v} is not a Hadamard edge between interior Pauli spiders")
    return _pivot_unchecked(d, u, v)


def _pivot_unchecked(d: Diagram, u: int, v: int) -> list[int]:
    adj, phases, types = d._adj, d._phases, d._types
    nu = set(adj[u])
    nu.discard(v)
    nv = set(adj[v])
    nv.discard(u)
    common = sorted(nu & nv)
    only_u = sorted(nu.difference(common))
    only_v = sorted(nv.difference(common))
    pu = phases.pop(u)
    pv = phases.pop(v)
    for x in (u, v):
        for w in adj.pop(x):
            if w != u and w != v:
                del adj[w][x]
        del types[x]
    if pv.exact:
        for n in only_u:
            phases[n] = phases[n] + pv
    if pu.exact:
        for n in only_v:
            phases[n] = phases[n] + pu
    shift = pu + pv + PI
    if shift.exact:
        for n in common:
            phases[n] = phases[n] + shift
    toggle_bipartite(adj, only_u, only_v)
    toggle_bipartite(adj, only_u, common)
    toggle_bipartite(adj, only_v, common)
    return only_u + only_v + common


def gadgetize(d: Diagram, v: int) -> tuple[int, int]:
    """Move the phase of ``v`` onto a new gadget hanging off ``v``. Returns (hub, leaf)."""
    p = d._phases[v]
    d._phases[v] = ZERO
    hub = d.add_vertex(Z)
    leaf = d.add_vertex(Z, p)
    d.connect(v, hub, H)
    d.connect(hub, leaf, H)
    return hub, leaf


def unfuse_boundaries(d: Diagram, v: int) -> list[int]:
    """Put a fresh phase-0 spider between ``v`` and each of its boundaries."""
    adj = d._adj
    new = []
    for b in sorted(w for w in adj[v] if d._types[w] == B):
        k = adj[v][b]
        d.remove_edge(v, b)
        n = d.add_vertex(Z)
        d.connect(v, n, H)
        d.connect(n, b, H if k == S else S)
        new.append(n)
    return new


def boundary_pivot(d: Diagram, u: int, v: int) -> list[int]:
    """Pivot a Pauli spider ``u`` against a boundary or non-Clifford neighbour ``v`` (rule GB)."""
    if not _pauli_interior(d, u) or d._adj[u].get(v) != H:
        raise SimplifyError(f"{u} is not an interior Pauli spider H-joined to {v}")
    if not _gb_target(d, u, v):
        raise SimplifyError(f"{v} is neither a boundary spider nor an interior non-Clifford spider")
    unfuse_boundaries(d, v)
    if not d._phases[v].is_pauli:
        gadgetize(d, v)
    return _pivot_unchecked(d, u, v)


def fold_unary_gadget(d: Diagram, hub: int, leaf: int) -> int:
    """Rule UG: absorb a one-target gadget into its target. Returns the target."""
    (t,) = [w for w in d._adj[hub] if w != leaf]
    sign_flip = d._phases[hub].exact == 1
    a = d._phases[leaf]
    d.remove_vertex(hub)
    d.remove_vertex(leaf)
    d._phases[t] = d._phases[t] + (-a if sign_flip else a)
    return t


def fuse_gadgets(d: Diagram, gadgets: list[tuple[int, int]]) -> int:
    """Rule GF: merge gadgets sharing one target set into the first. Returns the kept hub."""
    total = ZERO
    for h, leaf in gadgets:
        a = d._phases[leaf]
        total = total + (-a if d._phases[h].exact == 1 else a)
    h0, l0 = gadgets[0]
    d._phases[h0] = ZERO
    d._phases[l0] = total
    for h, leaf in gadgets[1:]:
        d.remove_vertex(h)
        d.remove_vertex(leaf)
    return h0


def round_phases(d: Diagram, epsilon: float) -> bool:
    """Snap phases within ``epsilon`` of a multiple of pi/2 to that multiple."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    changed = False
    phases = d._phases
    for v, p in phases.items():
        if p.residual == 0.0:
            continue
        ang = p.radians()
        k = round(ang / _HALF_PI)
        if abs(ang - k * _HALF_PI) <= epsilon:
            phases[v] = Phase(Fraction(k, 2))
            changed = True
    return changed


# ---------------------------------------------------------------- engine

class _Engine:
    def __init__(self, d: Diagram, opts: SimplifyOptions) -> None:
        self.d = d
        self.opts = opts
        self.counts: dict[str, int] = {}
        self.trace: list[str] | None = [] if opts.trace else None
        self.deadline = None if opts.time_limit is None else time.monotonic() + opts.time_limit
        self.ticks = 0

    def note(self, rule: str, *vs: int) -> None:
        self.counts[rule] = self.counts.get(rule, 0) + 1
        if self.trace is not None:
            ph = self.d._phases
            desc = " ".join(f"{v}:{ph[v]}" if v in ph else str(v) for v in vs)
            self.trace.append(f"{rule} {desc}")

    def tick(self) -> None:
        self.ticks += 1
        if self.deadline is not None and self.ticks % 256 == 0 and time.monotonic() > self.deadline:
            raise SimplifyTimeout("simplification time limit exceeded")

    # -- passes

    def fuse_pass(self) -> bool:
        d = self.d
        types, adj = d._types, d._adj
        changed = False
        for v in d.spiders():
            if v not in types:
                continue
            while True:
                w = min((w for w, k in adj[v].items() if k == S and types[w] == types[v]), default=None)
                if w is None:
                    break
                self.note("fuse", v, w)
                d.fuse(v, w)
                changed = True
                self.tick()
        return changed

    def id_pass(self) -> bool:
        d = self.d
        types, adj, phases = d._types, d._adj, d._phases
        heap = d.spiders()
        queued = set(heap)
        changed = False

        def push(x: int) -> None:
            if x not in queued and types.get(x, B) != B:
                queued.add(x)
                heapq.heappush(heap, x)

        while heap:
            v = heapq.heappop(heap)
            queued.discard(v)
            if v not in types:
                continue
            self.tick()
            nb = adj[v]
            deg = len(nb)
            if deg == 2 and phases[v].is_zero:
                (x, k1), (y, k2) = nb.items()
                self.note("id", v)
                d.remove_vertex(v)
                d.add_edge_smart(x, y, S if k1 == k2 else H)
                if adj[x].get(y) == S and types[x] == types[y] != B:
                    keep, gone = min(x, y), max(x, y)
                    self.note("fuse", keep, gone)
                    touched = list(adj[gone])
                    d.fuse(keep, gone)
                    push(keep)
                    for w in touched:
                        push(w)
                    for w in adj[keep]:
                        push(w)
                else:
                    push(x)
                    push(y)
                changed = True
            elif deg == 0:
                self.note("scalar", v)
                d.remove_vertex(v)
                changed = True
            elif deg == 1:
                (w,) = nb
                if types[w] != B and len(adj[w]) == 1:
                    self.note("scalar", v, w)
                    d.remove_vertex(v)
                    d.remove_vertex(w)
                    changed = True
        return changed

    def lc_pass(self) -> bool:
        d = self.d
        types = d._types
        heap = d.spiders()
        queued = set(heap)
        changed = False
        while heap:
            v = heapq.heappop(heap)
            queued.discard(v)
            if v not in types or not _lc_candidate(d, v):
                continue
            self.tick()
            self.note("lc", v)
            for n in local_complementation(d, v):
                if n not in queued:
                    queued.add(n)
                    heapq.heappush(heap, n)
            changed = True
        return changed

    def pivot_pass(self) -> bool:
        d = self.d
        types = d._types
        heap = d.spiders()
        queued = set(heap)
        changed = False
        while heap:
            u = heapq.heappop(heap)
            queued.discard(u)
            if u not in types:
                continue
            v = pivot_partner(d, u)
            if v is None:
                continue
            self.tick()
            self.note("pivot", u, v)
            for n in _pivot_unchecked(d, u, v):
                if n not in queued:
                    queued.add(n)
                    heapq.heappush(heap, n)
            changed = True
        return changed

    def boundary_pivot_pass(self) -> bool:
        d = self.d
        types = d._types
        changed = False
        for u in d.spiders():
            if u not in types:
                continue
            v = boundary_pivot_partner(d, u)
            if v is None:
                continue
            self.tick()
            self.note("pivot_boundary" if any(types[w] == B for w in d._adj[v]) else "pivot_gadget", u, v)
            unfuse_boundaries(d, v)
            if not d._phases[v].is_pauli:
                gadgetize(d, v)
            _pivot_unchecked(d, u, v)
            changed = True
        return changed

    def gadget_pass(self) -> bool:
        d = self.d
        adj = d._adj
        changed = False
        for h, leaf in find_gadgets(d):
            if h in adj and len(adj[h]) == 2 and _is_hub(d, h) and leaf in adj[h]:
                self.tick()
                self.note("unary_gadget", h, leaf)
                fold_unary_gadget(d, h, leaf)
                changed = True
        groups: dict[frozenset, list[tuple[int, int]]] = {}
        for h, leaf in find_gadgets(d):
            groups.setdefault(frozenset(adj[h]) - {leaf}, []).append((h, leaf))
        for targets, gs in groups.items():
            if len(gs) < 2:
                continue
            self.tick()
            self.note("gadget_fusion", *[h for h, _ in gs])
            fuse_gadgets(d, gs)
            changed = True
        return changed

    def round_pass(self) -> bool:
        before = {v: p for v, p in self.d._phases.items() if p.residual}
        if not round_phases(self.d, self.opts.epsilon):
            return False
        for v in before:
            if not self.d._phases[v].residual:
                self.note("round", v)
        return True

    def run(self) -> int:
        d = self.d
        passes = [self.fuse_pass, self.id_pass, self.lc_pass, self.pivot_pass,
                  self.boundary_pivot_pass, self.gadget_pass]
        if self.opts.rounding_enabled:
            passes.append(self.round_pass)
        for it in range(1, self.opts.max_iterations + 1):
            changed = False
            for p in passes:
                if p():
                    changed = True
            if not changed:
                return it
        raise SimplifyError(f"no fixpoint after {self.opts.max_iterations} iterations ({d!r})")


def _flush_events(d: Diagram, counts: dict[str, int], start: dict[str, int]) -> None:
    for k, n in d.events.items():
        delta = n - start.get(k, 0)
        if delta:
            counts[k] = counts.get(k, 0) + delta


def full_reduce(d: Diagram, opts: SimplifyOptions | None = None) -> SimplifyReport:
    """Rewrite ``d`` in place to reduced gadget form."""
    opts = opts or SimplifyOptions()
    report = SimplifyReport(spiders_before=d.num_spiders())
    start = dict(d.events)
    fused = make_graph_like(d)
    eng = _Engine(d, opts)
    if fused:
        eng.counts["fuse"] = fused
    try:
        report.iterations = eng.run()
    finally:
        _flush_events(d, eng.counts, start)
        report.rule_counts = dict(sorted(eng.counts.items()))
        report.spiders_after = d.num_spiders()
        if eng.trace is not None:
            report.trace = eng.trace
    return report


def _single_pass(name: str):
    def run(d: Diagram) -> bool:
        eng = _Engine(d, SimplifyOptions())
        return getattr(eng, name)()
    run.__name__ = name
    return run


fuse_spiders_pass = _single_pass("fuse_pass")
fuse_spiders_pass.__doc__ = "Fuse spiders joined by simple edges. Returns whether anything changed."
remove_identities_pass = _single_pass("id_pass")
remove_identities_pass.__doc__ = "Remove phase-0 degree-2 spiders and stray scalars."
gadget_fusion_pass = _single_pass("gadget_pass")
gadget_fusion_pass.__doc__ = "Fold unary gadgets and merge gadgets with equal targets."

__all__ = [
    "SimplifyOptions", "SimplifyReport", "SimplifyError", "SimplifyTimeout", "DiagramError",
    "full_reduce", "fuse_spiders_pass", "remove_identities_pass", "local_complementation",
    "pivot", "boundary_pivot", "gadget_fusion_pass", "round_phases", "is_reduced",
    "find_gadgets", "gadgetize", "unfuse_boundaries", "fold_unary_gadget", "fuse_gadgets",
    "pivot_partner", "boundary_pivot_partner",
]
