"""Matrix partitions and the weighted directed graph they induce.

Indices are 0-based throughout the library; the CLI converts from the
1-based notation used in partition spec strings.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BadDims, BadGroups, NonSquare
from .matrixcore import Mat, is_exact_mat

MAX_GROUPS = 64
FLOAT_ZERO_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class Partition:
    """A square matrix together with a grouping of its index set.

    ``blocks[mu][nu]`` is the ``d_mu x d_nu`` submatrix with rows from group
    ``mu`` and columns from group ``nu``.
    """

    source: Mat
    groups: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[Mat, ...], ...]

    @property
    def D(self) -> int:
        return self.source.rows

    @property
    def n(self) -> int:
        return len(self.groups)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    def block(self, mu: int, nu: int) -> Mat:
        return self.blocks[mu][nu]

    def __eq__(self, o):
        if not isinstance(o, Partition):
            return NotImplemented
        return (self.source == o.source and self.groups == o.groups
                and self.blocks == o.blocks)

    def __hash__(self):
        return hash((self.source, self.groups))


def _check_groups(D: int, groups: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    out = tuple(tuple(int(i) for i in g) for g in groups)
    if not out or any(len(g) == 0 for g in out):
        raise BadGroups("groups must be non-empty")
    if len(out) > MAX_GROUPS:
        raise BadGroups(f"at most {MAX_GROUPS} groups are supported, got {len(out)}")
    seen: set[int] = set()
    for g in out:
        for i in g:
            if not 0 <= i < D:
                raise BadGroups(f"index {i} out of range for dimension {D}")
            if i in seen:
                raise BadGroups(f"index {i} appears in more than one group")
            seen.add(i)
    if len(seen) != D:
        missing = sorted(set(range(D)) - seen)
        raise BadGroups(f"indices {missing} are not covered by any group")
    return out


def general_partition(M: Mat, groups: Sequence[Sequence[int]]) -> Partition:
    if not M.is_square:
        raise NonSquare(f"cannot partition a {M.rows}x{M.cols} matrix")
    gs = _check_groups(M.rows, groups)
    blocks = tuple(tuple(M.submatrix(gm, gn) for gn in gs) for gm in gs)
    return Partition(M, gs, blocks)


def tensor_groups(dims: Sequence[int], subsystem: int) -> list[list[int]]:
    """Index groups of the tensor-product partition acting on ``subsystem``.

    Global indices are row-major multi-indices over ``dims``; each group fixes
    every component except ``subsystem``.
    """
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise BadDims(f"invalid subsystem dimensions {dims}")
    if not 0 <= subsystem < len(dims):
        raise BadDims(f"subsystem {subsystem} out of range for {len(dims)} factors")
    strides = [math.prod(dims[k + 1:]) for k in range(len(dims))]
    others = [k for k in range(len(dims)) if k != subsystem]
    groups = []
    n_other = math.prod(dims[k] for k in others)
    for flat in range(n_other):
        # decode the multi-index of the fixed factors, row-major
        rem = flat
        fixed = {}
        for k in reversed(others):
            fixed[k] = rem % dims[k]
            rem //= dims[k]
        base = sum(fixed[k] * strides[k] for k in others)
        groups.append([base + a * strides[subsystem] for a in range(dims[subsystem])])
    return groups


def tensor_partition(M: Mat, dims: Sequence[int], subsystem: int) -> Partition:
    if math.prod(dims) != M.rows:
        raise BadDims(f"product of {list(dims)} does not equal D={M.rows}")
    return general_partition(M, tensor_groups(dims, subsystem))


def block_permutation(P: Partition) -> list[int]:
    """Index order making every block contiguous (groups concatenated)."""
    return [i for g in P.groups for i in g]


def scatter(P: Partition, blocks: Sequence[Sequence[Mat]], zero=0) -> Mat:
    """Reassemble a full matrix from a table of blocks laid out as ``P``."""
    D = P.D
    out = [zero] * (D * D)
    for mu, gm in enumerate(P.groups):
        for nu, gn in enumerate(P.groups):
            B = blocks[mu][nu]
            for k, i in enumerate(gm):
                for l, j in enumerate(gn):
                    out[i * D + j] = B[k, l]
    return Mat(D, D, out)


# graph ------------------------------------------------------------------------


class GraphVariant(enum.Enum):
    OF_M = "M"
    OF_M_MINUS_I = "M-I"


@dataclass(frozen=True, eq=False)
class PartitionGraph:
    """Directed graph of a partition; an edge ``nu -> mu`` carries ``block(mu, nu)``.

    ``succ[v]`` and ``pred[v]`` are bit masks over the loopless graph.
    """

    partition: Partition
    variant: GraphVariant
    succ: tuple[int, ...]
    pred: tuple[int, ...]
    loops: tuple[bool, ...]

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def dims(self) -> tuple[int, ...]:
        return self.partition.dims

    def weight(self, mu: int, nu: int) -> Mat:
        return self.partition.blocks[mu][nu]

    def has_edge(self, nu: int, mu: int) -> bool:
        if nu == mu:
            return self.loops[mu]
        return bool(self.succ[nu] >> mu & 1)

    def links(self) -> list[tuple[int, int]]:
        return [(nu, mu) for nu in range(self.n) for mu in range(self.n)
                if nu != mu and self.succ[nu] >> mu & 1]

    def edge_count(self) -> int:
        return len(self.links()) + sum(self.loops)

    def neighbours(self, v: int) -> int:
        """Mask of vertices joined to ``v`` in either direction."""
        return (self.succ[v] | self.pred[v]) & ~(1 << v)


def _zero_tol(M: Mat) -> float:
    if is_exact_mat(M):
        return 0.0
    return FLOAT_ZERO_RTOL * M.max_abs()


def _is_identity(B: Mat, tol: float) -> bool:
    n = B.rows
    for i in range(n):
        for j in range(n):
            x = B[i, j] - (1 if i == j else 0)
            if x and abs(x) > tol:
                return False
    return True


def partition_graph(P: Partition, variant: GraphVariant = GraphVariant.OF_M) -> PartitionGraph:
    """Graph of ``P``; with ``OF_M_MINUS_I`` a loop exists iff the static differs from I."""
    variant = GraphVariant(variant)
    tol = _zero_tol(P.source)
    n = P.n
    succ = [0] * n
    pred = [0] * n
    loops = []
    for mu in range(n):
        static = P.block(mu, mu)
        if variant is GraphVariant.OF_M:
            loops.append(not static.is_zero(tol))
        else:
            loops.append(not _is_identity(static, tol))
        for nu in range(n):
            if nu != mu and not P.block(mu, nu).is_zero(tol):
                succ[nu] |= 1 << mu
                pred[mu] |= 1 << nu
    return PartitionGraph(P, variant, tuple(succ), tuple(pred), tuple(loops))


def describe_graph(G: PartitionGraph) -> str:
    """Plain-text edge list (1-based vertices)."""
    lines = [f"graph {G.n} variant={G.variant.value}",
             "dims " + " ".join(str(d) for d in G.dims)]
    for mu in range(G.n):
        if G.loops[mu]:
            lines.append(f"{mu + 1} -> {mu + 1} [loop]")
    for nu, mu in sorted(G.links()):
        lines.append(f"{nu + 1} -> {mu + 1}")
    return "\n".join(lines) + "\n"
