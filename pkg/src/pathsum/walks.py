"""Simple paths, bare cycles and walks on a partition graph.

Vertex sets are plain ``int`` bit masks (bit ``v`` set means vertex ``v``
is in the set).  Paths and cycles are enumerated on the loopless graph
restricted to the vertices not in ``removed``.
"""

from __future__ import annotations

from typing import Iterable

from .errors import VertexRemoved
from .matrixcore import Mat
from .partition import MAX_GROUPS, PartitionGraph

VertexSet = int
EMPTY: VertexSet = 0


def vertex_set(vertices: Iterable[int] = ()) -> VertexSet:
    mask = 0
    for v in vertices:
        if not 0 <= v < MAX_GROUPS:
            raise ValueError(f"vertex {v} outside 0..{MAX_GROUPS - 1}")
        mask |= 1 << v
    return mask


def members(mask: VertexSet) -> list[int]:
    out, v = [], 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _check_live(removed: VertexSet, *vs: int) -> None:
    for v in vs:
        if removed >> v & 1:
            raise VertexRemoved(f"vertex {v} has been removed")


def simple_paths(G: PartitionGraph, removed: VertexSet, alpha: int, omega: int) -> list[tuple[int, ...]]:
    """All simple paths ``alpha -> omega``, in lexicographic order."""
    _check_live(removed, alpha, omega)
    if alpha == omega:
        return [(alpha,)]
    out: list[tuple[int, ...]] = []
    path = [alpha]

    def dfs(v: int, visited: int) -> None:
        nxt = G.succ[v] & ~visited
        for u in members(nxt):
            if u == omega:
                out.append(tuple(path) + (u,))
                continue
            path.append(u)
            dfs(u, visited | 1 << u)
            path.pop()

    dfs(alpha, removed | 1 << alpha)
    return out


def bare_cycles(G: PartitionGraph, removed: VertexSet, alpha: int) -> list[tuple[int, ...]]:
    """Bare cycles ``(alpha, mu_2, ..., mu_m, alpha)`` with ``m >= 2``; loops excluded."""
    _check_live(removed, alpha)
    out: list[tuple[int, ...]] = []
    path = [alpha]

    def dfs(v: int, visited: int) -> None:
        for u in members(G.succ[v] & ~visited):
            path.append(u)
            if G.succ[u] >> alpha & 1:
                out.append(tuple(path) + (alpha,))
            dfs(u, visited | 1 << u)
            path.pop()

    dfs(alpha, removed | 1 << alpha)
    return out


def enumerate_walks(G: PartitionGraph, alpha: int, omega: int, k: int) -> list[tuple[int, ...]]:
    """Walks of exactly ``k`` steps on the full graph (loops included).

    Exponential in ``k``; meant as a test oracle.
    """
    out: list[tuple[int, ...]] = []
    walk = [alpha]

    def step(v: int, left: int) -> None:
        if left == 0:
            if v == omega:
                out.append(tuple(walk))
            return
        targets = members(G.succ[v])
        if G.loops[v]:
            targets = sorted(targets + [v])
        for u in targets:
            walk.append(u)
            step(u, left - 1)
            walk.pop()

    step(alpha, k)
    return out


def walk_contribution(G: PartitionGraph, walk: tuple[int, ...]) -> Mat:
    """Right-to-left product of edge weights along ``walk``."""
    d0 = G.dims[walk[0]]
    acc = Mat.identity(d0)
    for a, b in zip(walk, walk[1:]):
        acc = G.weight(b, a) @ acc
    return acc


def walk_contributions_power(G: PartitionGraph, alpha: int, omega: int, k: int) -> Mat:
    """Sum of all length-``k`` walk contributions; equals block ``(omega, alpha)`` of ``M**k``."""
    walks = enumerate_walks(G, alpha, omega, k)
    acc = Mat.zeros(G.dims[omega], G.dims[alpha])
    for w in walks:
        acc = acc + walk_contribution(G, w)
    return acc


def loopless_walks(G: PartitionGraph, alpha: int, omega: int, max_len: int) -> list[tuple[int, ...]]:
    """Walks ``alpha -> omega`` on the loopless graph with at most ``max_len`` links."""
    out: list[tuple[int, ...]] = []
    walk = [alpha]

    def step(v: int, left: int) -> None:
        if v == omega:
            out.append(tuple(walk))
        if left == 0:
            return
        for u in members(G.succ[v]):
            walk.append(u)
            step(u, left - 1)
            walk.pop()

    step(alpha, max_len)
    return out
