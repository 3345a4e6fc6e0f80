"""Transfer (de Bruijn) graphs of a subshift and exact min-mean-cycle search.

For window w >= 2 the vertices are admissible words of length w-1 and the
edges are admissible words of length w; for w = 1 the graph is the symbol
graph itself, with edge weight read at the tail symbol.  Closed walks of
length L correspond one-to-one with admissible cyclic words of period L, so
cycle optimization over this graph is exact optimization over periodic
orbits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import FieldValue, Observable, Sft, Word, admissible_words


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    word: Word  # the window word labeling this edge
    weight: object = None  # FieldValue when an observable is attached


@dataclass
class TransferGraph:
    window: int
    vertices: list[Word]
    index: dict[Word, int]
    edges: list[Edge]
    out_edges: list[list[int]] = field(default_factory=list)
    in_edges: list[list[int]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.vertices)


def transfer_graph(sft: Sft, window: int, f: Observable | None = None) -> TransferGraph:
    """Build the transfer graph; attach f's values as edge weights when given."""
    if f is not None and f.window != window:
        raise ValueError("observable window must match the graph window")
    w = window
    if w == 1:
        vertices = [(s,) for s in range(sft.alphabet_size)]
    else:
        vertices = sorted(admissible_words(sft, w - 1))
    index = {v: i for i, v in enumerate(vertices)}

    edges: list[Edge] = []
    out_edges: list[list[int]] = [[] for _ in vertices]
    in_edges: list[list[int]] = [[] for _ in vertices]
    for ui, u in enumerate(vertices):
        for c in sft.followers(u[-1]):
            v = u[1:] + (c,) if w >= 2 else (c,)
            vi = index[v]
            word = u + (c,)
            weight = f.value(word[:w]) if f is not None else None
            eid = len(edges)
            edges.append(Edge(ui, vi, word, weight))
            out_edges[ui].append(eid)
            in_edges[vi].append(eid)
    return TransferGraph(w, vertices, index, edges, out_edges, in_edges)


def walk_word(graph: TransferGraph, vertex_cycle: list[int]) -> Word:
    """The cyclic word generated by a closed walk (first symbol of each vertex)."""
    return tuple(graph.vertices[v][0] for v in vertex_cycle)


def walk_weight(graph: TransferGraph, edge_ids: list[int]) -> FieldValue:
    total = FieldValue(0)
    for eid in edge_ids:
        total = total + graph.edges[eid].weight
    return total


def karp_min_mean(graph: TransferGraph):
    """Exact minimum cycle mean plus an attaining simple cycle.

    The value comes from the classic dynamic program over walk lengths
    0..V from a fixed source; the witness is extracted from the subgraph of
    tight edges under shortest-path potentials for the reduced weights.
    Requires a strongly connected graph, which every validated Sft provides.
    Returns (mean: FieldValue, cycle_vertices: list[int], cycle_edges: list[int]).
    """
    V = graph.size
    source = 0
    # dp[k][v] = min weight of a k-edge walk source -> v, None if none exists
    dp = [[None] * V for _ in range(V + 1)]
    dp[0][source] = FieldValue(0)
    for k in range(1, V + 1):
        prev, cur = dp[k - 1], dp[k]
        for e in graph.edges:
            base = prev[e.tail]
            if base is None:
                continue
            cand = base + e.weight
            if cur[e.head] is None or cand < cur[e.head]:
                cur[e.head] = cand

    best = None
    for v in range(V):
        top = dp[V][v]
        if top is None:
            continue
        worst = None
        for k in range(V):
            base = dp[k][v]
            if base is None:
                continue
            ratio = (top - base) / (V - k)
            if worst is None or ratio > worst:
                worst = ratio
        if worst is not None and (best is None or worst < best):
            best = worst
    assert best is not None, "strongly connected graph must have a cycle"

    cycle_vertices, cycle_edges = _extract_tight_cycle(graph, best)
    return best, cycle_vertices, cycle_edges


def _extract_tight_cycle(graph: TransferGraph, mean: FieldValue):
    """Find a simple cycle whose edges are all tight for weight - mean.

    Bellman-Ford potentials make every reduced weight nonnegative; the
    optimal cycles are exactly the cycles of the zero-reduced subgraph.
    """
    V = graph.size
    phi: list[FieldValue | None] = [None] * V
    phi[0] = FieldValue(0)
    for _ in range(V):
        changed = False
        for e in graph.edges:
            if phi[e.tail] is None:
                continue
            cand = phi[e.tail] + e.weight - mean
            if phi[e.head] is None or cand < phi[e.head]:
                phi[e.head] = cand
                changed = True
        if not changed:
            break

    tight: list[list[tuple[int, int]]] = [[] for _ in range(V)]
    for eid, e in enumerate(graph.edges):
        if phi[e.tail] is None or phi[e.head] is None:
            continue
        if phi[e.tail] + e.weight - mean == phi[e.head]:
            tight[e.tail].append((e.head, eid))

    # DFS for a cycle inside the tight subgraph
    color = [0] * V  # 0 unvisited, 1 on stack, 2 done
    parent_edge: dict[int, tuple[int, int]] = {}
    for root in range(V):
        if color[root]:
            continue
        stack = [(root, iter(tight[root]))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for v, eid in it:
                if color[v] == 1:
                    # close the cycle u -> v back along the stack
                    cycle_vertices = [v]
                    cycle_edges = [eid]
                    w = u
                    while w != v:
                        pu, peid = parent_edge[w]
                        cycle_vertices.append(w)
                        cycle_edges.append(peid)
                        w = pu
                    cycle_vertices.reverse()
                    cycle_edges.reverse()
                    return cycle_vertices, cycle_edges
                if color[v] == 0:
                    color[v] = 1
                    parent_edge[v] = (u, eid)
                    stack.append((v, iter(tight[v])))
                    advanced = True
                    break
            if not advanced:
                color[u] = 2
                stack.pop()
    raise AssertionError("tight subgraph of an optimal mean must contain a cycle")
