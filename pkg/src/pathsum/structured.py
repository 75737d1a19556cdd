"""Block-tridiagonal (linear chain) closed forms and the tree cost model.

For a chain ``0 - 1 - ... - N-1`` the dressed weights reduce to two finite
continued fractions, ``X_k`` built from the far end and ``Y_k`` from the
near end, and every block of the function is a left product of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotAChain, NotATree, Singular, SingularChain
from .functions import invert_Laplace
from .matrixcore import Mat, dense_inverse, is_exact_mat, to_exact
from .partition import Partition, general_partition, partition_graph
from .scalars import RatFn
from .walks import members


@dataclass(frozen=True)
class LnBlocks:
    """Statics ``M_k`` and flips ``upper[k] = M_{k,k+1}``, ``lower[k] = M_{k+1,k}``."""

    statics: tuple[Mat, ...]
    upper: tuple[Mat, ...]
    lower: tuple[Mat, ...]

    def __post_init__(self):
        N = len(self.statics)
        if N == 0 or len(self.upper) != N - 1 or len(self.lower) != N - 1:
            raise NotAChain("a chain of N statics needs N-1 upper and N-1 lower flips")
        for k in range(N - 1):
            d, e = self.statics[k].rows, self.statics[k + 1].rows
            if self.upper[k].shape != (d, e) or self.lower[k].shape != (e, d):
                raise NotAChain(f"flip shapes between vertices {k} and {k + 1} do not match")

    @property
    def N(self) -> int:
        return len(self.statics)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(S.rows for S in self.statics)

    def groups(self) -> list[list[int]]:
        out, start = [], 0
        for d in self.dims:
            out.append(list(range(start, start + d)))
            start += d
        return out

    def assemble(self) -> Mat:
        """The block-tridiagonal matrix, chain order along the diagonal."""
        N = self.N
        table = [[None] * N for _ in range(N)]
        for k in range(N):
            table[k][k] = self.statics[k]
            if k + 1 < N:
                table[k][k + 1] = self.upper[k]
                table[k + 1][k] = self.lower[k]
        return assemble_table(table, self.dims)

    def map(self, statics_fn, flips_fn) -> "LnBlocks":
        return LnBlocks(tuple(statics_fn(S) for S in self.statics),
                        tuple(flips_fn(B) for B in self.upper),
                        tuple(flips_fn(B) for B in self.lower))


def assemble_table(table, dims: Sequence[int]) -> Mat:
    """Full matrix from a square table of blocks; ``None`` means a zero block."""
    offs = [0]
    for d in dims:
        offs.append(offs[-1] + d)
    D = offs[-1]
    out = [0] * (D * D)
    for i, row in enumerate(table):
        for j, B in enumerate(row):
            if B is None:
                continue
            for a in range(B.rows):
                base = (offs[i] + a) * D + offs[j]
                for b in range(B.cols):
                    out[base + b] = B[a, b]
    return Mat(D, D, out)


def _chain_order(P: Partition) -> list[int]:
    G = partition_graph(P)
    n = G.n
    if n == 1:
        return [0]
    nbrs = [members(G.neighbours(v)) for v in range(n)]
    ends = [v for v in range(n) if len(nbrs[v]) == 1]
    if len(ends) != 2 or any(len(x) > 2 for x in nbrs):
        raise NotAChain("partition graph is not a linear chain")
    order, prev = [ends[0]], None
    while len(order) < n:
        cur = order[-1]
        nxt = [u for u in nbrs[cur] if u != prev]
        if not nxt:
            raise NotAChain("partition graph is not connected")
        prev = cur
        order.append(nxt[0])
    return order


def ln_blocks_from_partition(M: Mat, groups: Sequence[Sequence[int]]) -> tuple[LnBlocks, list[int]]:
    """Chain blocks of ``M`` and the group order along the chain."""
    P = general_partition(M, groups)
    order = _chain_order(P)
    blocks = LnBlocks(tuple(P.block(v, v) for v in order),
                      tuple(P.block(order[k], order[k + 1]) for k in range(len(order) - 1)),
                      tuple(P.block(order[k + 1], order[k]) for k in range(len(order) - 1)))
    return blocks, order


# chain recursions --------------------------------------------------------------------


def _inv(A: Mat, what: str) -> Mat:
    try:
        return dense_inverse(A)
    except Singular as exc:
        raise SingularChain(f"{what} is singular") from exc


def _chain_table(tilde: Sequence[Mat], upper: Sequence[Mat], lower: Sequence[Mat]):
    """Blocks of ``T**-1`` where ``T`` has diagonal ``tilde`` and flips ``-upper``/``-lower``."""
    N = len(tilde)
    Xb = [None] * N
    Yb = [None] * N
    X = [None] * N
    Y = [None] * N
    Xb[N - 1] = tilde[N - 1]
    X[N - 1] = _inv(Xb[N - 1], f"X[{N - 1}]")
    for k in range(N - 2, -1, -1):
        Xb[k] = tilde[k] - upper[k] @ X[k + 1] @ lower[k]
        X[k] = _inv(Xb[k], f"X[{k}]")
    Yb[0] = tilde[0]
    Y[0] = _inv(Yb[0], "Y[0]")
    for k in range(1, N):
        Yb[k] = tilde[k] - lower[k - 1] @ Y[k - 1] @ upper[k - 1]
        Y[k] = _inv(Yb[k], f"Y[{k}]")
    U = [[None] * N for _ in range(N)]
    for k in range(N):
        U[k][k] = _inv(Xb[k] + Yb[k] - tilde[k], f"U[{k},{k}]")
    for kp in range(N):
        acc = U[kp][kp]
        for k in range(kp + 1, N):
            acc = X[k] @ (lower[k - 1] @ acc)
            U[k][kp] = acc
        acc = U[kp][kp]
        for k in range(kp - 1, -1, -1):
            acc = Y[k] @ (upper[k] @ acc)
            U[k][kp] = acc
    return U


def ln_resolvent(blocks: LnBlocks, s) -> list[list[Mat]]:
    """Table of blocks of ``(sI - M)**-1``; ``s`` may be a scalar or a ``RatFn``."""
    tilde = [Mat.identity(S.rows, one=s) - S for S in blocks.statics]
    return _chain_table(tilde, blocks.upper, blocks.lower)


def ln_inverse(blocks: LnBlocks) -> Mat:
    """``M**-1`` with the inverse signs: statics as bases, each link carries ``-1``."""
    neg = [-B for B in blocks.upper], [-B for B in blocks.lower]
    return assemble_table(_chain_table(list(blocks.statics), *neg), blocks.dims)


def ln_inverse_shifted_recipe(blocks: LnBlocks) -> Mat:
    """The resolvent recursion with ``sI`` replaced by ``I``, taken literally.

    This evaluates ``(I - M)**-1``, not ``M**-1``; feeding it the blocks of
    ``I - M`` recovers ``ln_inverse``.
    """
    return assemble_table(ln_resolvent(blocks, 1), blocks.dims)


def identity_minus(blocks: LnBlocks) -> LnBlocks:
    """Chain blocks of ``I - M``."""
    return blocks.map(lambda S: Mat.identity(S.rows) - S, lambda B: -B)


def ln_exp(blocks: LnBlocks, t) -> Mat:
    """``exp(t M)`` from the symbolic chain resolvent and inverse Laplace transforms."""
    if t == 0:
        return Mat.identity(sum(blocks.dims))
    if not all(is_exact_mat(S) for S in blocks.statics + blocks.upper + blocks.lower):
        blocks = blocks.map(to_exact, to_exact)
    U = ln_resolvent(blocks, RatFn.var())
    R = assemble_table(U, blocks.dims)
    return R.map(lambda e: invert_Laplace(e)(t))


# tree cost model -----------------------------------------------------------------------


@dataclass(frozen=True)
class CostReport:
    """Block operation counts; ``flops(d)`` weights them by ``d**3`` and ``d**2``."""

    inversions: int
    multiplications: int
    additions: int
    d: int = 1

    def flops(self, d: int | None = None) -> int:
        d = self.d if d is None else d
        return (self.inversions + self.multiplications) * d ** 3 + self.additions * d ** 2

    def __add__(self, o: "CostReport") -> "CostReport":
        return CostReport(self.inversions + o.inversions,
                          self.multiplications + o.multiplications,
                          self.additions + o.additions, self.d)

    def summary(self) -> str:
        return f"inv={self.inversions} mul={self.multiplications} add={self.additions}"


def _adjacency(N: int, edges: Sequence[tuple[int, int]]) -> list[set[int]]:
    if N < 1:
        raise NotATree("a tree needs at least one vertex")
    adj: list[set[int]] = [set() for _ in range(N)]
    for u, v in edges:
        if not (0 <= u < N and 0 <= v < N) or u == v:
            raise NotATree(f"bad edge ({u}, {v})")
        if v in adj[u]:
            raise NotATree(f"repeated edge ({u}, {v})")
        adj[u].add(v)
        adj[v].add(u)
    if sum(len(a) for a in adj) // 2 != N - 1 or len(_component(adj, set(), 0)) != N:
        raise NotATree("graph is not a connected acyclic graph")
    return adj


def _component(adj: list[set[int]], removed: set[int], v: int) -> set[int]:
    seen, stack = {v}, [v]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen and w not in removed:
                seen.add(w)
                stack.append(w)
    return seen


def _tree_path(adj: list[set[int]], alpha: int, omega: int) -> list[int]:
    parent = {alpha: None}
    stack = [alpha]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                stack.append(w)
    path = [omega]
    while path[-1] != alpha:
        path.append(parent[path[-1]])
    return path[::-1]


def _dressing_cost(n: int, d: int) -> CostReport:
    return CostReport(n, 2 * (n - 1), n - 1, d)


def tree_cost(N: int, edges: Sequence[tuple[int, int]], d: int, alpha: int,
              omega: int | None = None) -> CostReport:
    """Predicted block operations for entry ``(omega, alpha)`` on a tree (0-based).

    Dressing a vertex whose component has ``n`` vertices costs ``n``
    inversions, ``2(n-1)`` multiplications and ``n-1`` additions; a path
    of ``l`` links adds ``2l`` multiplications plus the dressing of each
    vertex on the successively pruned trees.
    """
    adj = _adjacency(N, edges)
    omega = alpha if omega is None else omega
    for v in (alpha, omega):
        if not 0 <= v < N:
            raise NotATree(f"vertex {v} not in a tree on {N} vertices")
    path = _tree_path(adj, alpha, omega)
    ell = len(path) - 1
    total = CostReport(0, 2 * ell, 0, d)
    removed: set[int] = set()
    for v in path:
        total = total + _dressing_cost(len(_component(adj, removed, v)), d)
        removed.add(v)
    return total


def tree_from_partition(M: Mat, groups: Sequence[Sequence[int]]) -> tuple[int, list[tuple[int, int]]]:
    """Vertex count and undirected edges of a partition whose graph is a tree."""
    G = partition_graph(general_partition(M, groups))
    edges = []
    for u in range(G.n):
        for v in members(G.neighbours(u)):
            if u < v:
                if not (G.has_edge(u, v) and G.has_edge(v, u)):
                    raise NotATree(f"edge between {u} and {v} is not bidirectional")
                edges.append((u, v))
    _adjacency(G.n, edges)
    return G.n, edges
