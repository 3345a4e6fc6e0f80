"""Exact coboundary decisions: transfer function or violating cycle.

The potential lives on the vertices of the transfer graph (words one
shorter than the observable's window; symbols themselves when the window
is 1).  Integrating along a BFS spanning tree fixes the potential up to one
additive constant; a non-tree edge whose increment disagrees yields a
closed walk, hence a primitive periodic orbit, with nonzero sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import FieldValue, Observable, PeriodicOrbit, Sft, Word, primitive_root
from .debruijn import TransferGraph, transfer_graph, walk_word
from .errors import InputError
from .meanpath import extremal_mean_cycle
from .orbits import (
    SpectrumReport,
    cyclic_window_sum,
    enumerate_primitive_orbits,
    spectrum,
    spectrum_growth,
)


@dataclass(frozen=True)
class CoboundaryCertificate:
    potential: dict  # vertex word -> FieldValue
    verified: bool
    window: int  # the observable's window; keys have length max(window-1, 1)


@dataclass(frozen=True)
class ViolatingCycle:
    orbit: PeriodicOrbit
    sum: FieldValue


def _graph_window(f: Observable) -> int:
    return f.window


def _bfs_tree(graph: TransferGraph):
    """Deterministic BFS arborescence from the lexicographically least vertex."""
    root = 0
    parent_edge: list[int | None] = [None] * graph.size
    order = [root]
    seen = {root}
    queue = [root]
    while queue:
        u = queue.pop(0)
        for eid in graph.out_edges[u]:
            v = graph.edges[eid].head
            if v not in seen:
                seen.add(v)
                parent_edge[v] = eid
                order.append(v)
                queue.append(v)
    return parent_edge, order


def _tree_path_edges(graph, parent_edge, v: int) -> list[int]:
    path = []
    while parent_edge[v] is not None:
        eid = parent_edge[v]
        path.append(eid)
        v = graph.edges[eid].tail
    path.reverse()
    return path


def _any_path_edges(graph, src: int, dst: int) -> list[int]:
    if src == dst:
        return []
    prev: dict[int, int] = {}
    queue = [src]
    seen = {src}
    while queue:
        u = queue.pop(0)
        for eid in graph.out_edges[u]:
            v = graph.edges[eid].head
            if v in seen:
                continue
            seen.add(v)
            prev[v] = eid
            if v == dst:
                path = []
                while v != src:
                    path.append(prev[v])
                    v = graph.edges[prev[v]].tail
                path.reverse()
                return path
            queue.append(v)
    raise AssertionError("strongly connected graph must contain the path")


def _walk_cycle_orbit(graph, edge_ids: list[int], f: Observable) -> ViolatingCycle:
    word = tuple(graph.vertices[graph.edges[eid].tail][0] for eid in edge_ids)
    root, k = primitive_root(word)
    orbit = PeriodicOrbit(min(root[i:] + root[:i] for i in range(len(root))))
    s = cyclic_window_sum(orbit.word, f)
    assert s.sign() != 0, "extracted violating cycle must have nonzero sum"
    return ViolatingCycle(orbit, s)


def solve_coboundary(sft: Sft, f: Observable):
    """Return a CoboundaryCertificate, or a ViolatingCycle with nonzero sum.

    Complete for all periods at once: closed walks of the transfer graph
    realize every periodic orbit, and their sums telescope against the
    potential, so the certificate holds exactly when all sums vanish.
    """
    if not f.is_exact:
        raise InputError("solve_coboundary requires an exact-mode observable")
    graph = transfer_graph(sft, _graph_window(f), f)
    parent_edge, order = _bfs_tree(graph)

    potential: list[FieldValue | None] = [None] * graph.size
    potential[0] = FieldValue(0)
    for v in order[1:]:
        e = graph.edges[parent_edge[v]]
        potential[v] = potential[e.tail] + e.weight

    tree_ids = set(eid for eid in parent_edge if eid is not None)
    for eid, e in enumerate(graph.edges):
        if eid in tree_ids:
            continue
        residual = e.weight - (potential[e.head] - potential[e.tail])
        if residual.sign() == 0:
            continue
        # build a closed walk with nonzero sum out of the violated edge
        back = _any_path_edges(graph, e.head, 0)
        loop = _tree_path_edges(graph, parent_edge, e.head) + back
        if loop:
            total = FieldValue(0)
            for i in loop:
                total = total + graph.edges[i].weight
            if total.sign() != 0:
                return _walk_cycle_orbit(graph, loop, f)
        walk = _tree_path_edges(graph, parent_edge, e.tail) + [eid] + back
        return _walk_cycle_orbit(graph, walk, f)

    table = {graph.vertices[i]: potential[i] for i in range(graph.size)}
    return CoboundaryCertificate(table, True, f.window)


def check_certificate(sft: Sft, f: Observable, cert: CoboundaryCertificate) -> bool:
    """Re-verify f(e) = potential(head) - potential(tail) on every edge."""
    graph = transfer_graph(sft, _graph_window(f), f)
    for e in graph.edges:
        u = graph.vertices[e.tail]
        v = graph.vertices[e.head]
        if e.weight != cert.potential[v] - cert.potential[u]:
            return False
    return True


def coboundary_observable(sft: Sft, potential: dict) -> Observable:
    """The observable u∘shift - u of a vertex potential (fixture helper)."""
    some_key = next(iter(potential))
    w = len(some_key) + 1
    graph = transfer_graph(sft, w)
    table = {}
    for e in graph.edges:
        u = graph.vertices[e.tail]
        v = graph.vertices[e.head]
        pu = potential[u] if isinstance(potential[u], FieldValue) else FieldValue(potential[u])
        pv = potential[v] if isinstance(potential[v], FieldValue) else FieldValue(potential[v])
        table[e.word[:w]] = pv - pu
    return Observable(w, table, "exact")


@dataclass(frozen=True)
class ConstantCohomology:
    kind: str  # "yes" | "no"
    c: FieldValue | None = None
    certificate: CoboundaryCertificate | None = None
    witnesses: tuple | None = None  # two (orbit, average) pairs with distinct averages


def cohomologous_to_constant(sft: Sft, f: Observable) -> ConstantCohomology:
    """f ~ c exactly when all cycle averages coincide and f - c is a coboundary."""
    low = extremal_mean_cycle(sft, f, "min")
    high = extremal_mean_cycle(sft, f, "max")
    if low.value != high.value:
        return ConstantCohomology(
            "no",
            witnesses=((low.witness, low.value), (high.witness, high.value)),
        )
    c = low.value
    result = solve_coboundary(sft, f.minus(c))
    assert isinstance(result, CoboundaryCertificate), \
        "equal extremal means force the shifted observable to be a coboundary"
    return ConstantCohomology("yes", c=c, certificate=result)


@dataclass(frozen=True)
class BoundednessVerdict:
    kind: str  # "coboundary" | "unbounded_evidence"
    certificate: CoboundaryCertificate | None = None
    violating_cycle: ViolatingCycle | None = None
    growth: list | None = None


def boundedness_verdict(sft: Sft, f: Observable, n_max: int = 12) -> BoundednessVerdict:
    """The bounded-spectrum dichotomy: coboundary certificate or growth evidence.

    A certificate pins the spectrum to {0}; otherwise the violating cycle
    guarantees linear growth, and the running maxima up to n_max are
    returned as the finite-horizon evidence.
    """
    result = solve_coboundary(sft, f)
    if isinstance(result, CoboundaryCertificate):
        return BoundednessVerdict("coboundary", certificate=result)
    growth = spectrum_growth(spectrum(sft, f, n_max))
    return BoundednessVerdict("unbounded_evidence", violating_cycle=result,
                              growth=growth)


@dataclass(frozen=True)
class ApproximateLivsicReport:
    epsilon: Fraction
    consistent: bool
    violation: PeriodicOrbit | None
    violation_epsilon: Fraction | None
    schedule_cap: int | None
    schedule_consistent: bool | None
    coboundary_confirmed: bool | None


def _max_period_for(eps: Fraction) -> int:
    # largest integer t with t*t*eps <= 1
    t = int(float(eps) ** -0.5) + 2
    while t * t * eps > 1:
        t -= 1
    return max(t, 0)


def approximate_livsic_check(sft: Sft, f: Observable, eps,
                             schedule_cap: int | None = None) -> ApproximateLivsicReport:
    """Check |S| <= eps over all orbits with period <= eps^(-1/2), exactly.

    With schedule_cap set, the hypothesis is additionally checked for the
    schedule eps_n = min(eps, 1/n^2) through n = schedule_cap; surviving the
    whole schedule means every scanned sum is that small, and the coboundary
    solver is cross-checked to confirm the residual term vanishes.
    """
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise InputError("epsilon must lie in (0, 1]")
    horizon = _max_period_for(eps)

    violation = None
    violation_eps = None
    if horizon >= 1:
        for orbit in enumerate_primitive_orbits(sft, horizon):
            s = cyclic_window_sum(orbit.word, f)
            if abs(s) > eps:
                violation = orbit
                violation_eps = eps
                break
    consistent = violation is None

    schedule_consistent = None
    coboundary_confirmed = None
    if consistent and schedule_cap is not None:
        tight = min(eps, Fraction(1, schedule_cap * schedule_cap))
        schedule_consistent = True
        for orbit in enumerate_primitive_orbits(sft, schedule_cap):
            s = cyclic_window_sum(orbit.word, f)
            if abs(s) > tight:
                schedule_consistent = False
                violation = orbit
                violation_eps = tight
                break
        if schedule_consistent:
            result = solve_coboundary(sft, f)
            coboundary_confirmed = isinstance(result, CoboundaryCertificate)

    return ApproximateLivsicReport(eps, consistent, violation, violation_eps,
                                   schedule_cap, schedule_consistent,
                                   coboundary_confirmed)
