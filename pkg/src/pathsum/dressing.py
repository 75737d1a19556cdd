"""Vertex dressing and path assembly: the path-sum engine.

A dressed vertex weight is the matrix continued fraction

    F_{G\\R}[a] = [B_a - sum_cycles sign(m) * M_{a,m_m} F[m_m] ... F[m_2] M_{m_2,a}]^-1

where the sum runs over bare cycles of the loopless graph restricted to the
live vertices and every inner ``F`` is dressed on the graph with the
already-visited vertices removed.  ``Variant`` fixes the base term ``B_a``
and the sign attached to cycles and paths, so one engine serves the
inverse, resolvent, power and logarithm front-ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import Singular, SingularDressing
from .matrixcore import Mat, dense_inverse
from .partition import PartitionGraph, scatter
from .scalars import Poly, RatFn
from .walks import VertexSet, bare_cycles, simple_paths


@dataclass(frozen=True)
class Variant:
    """Base term and signs for one matrix function.

    ``kind`` is one of ``"inverse"``, ``"resolvent"``, ``"power_z"`` and
    ``"log_x"``; ``point`` holds ``s`` (resolvent, scalar or ``RatFn``) or
    ``x`` (logarithm).
    """

    kind: str
    point: object = None

    @classmethod
    def inverse(cls) -> "Variant":
        return cls("inverse")

    @classmethod
    def resolvent(cls, s) -> "Variant":
        return cls("resolvent", s)

    @classmethod
    def power_z(cls) -> "Variant":
        return cls("power_z")

    @classmethod
    def log_x(cls, x) -> "Variant":
        return cls("log_x", x)

    def base(self, static: Mat) -> Mat:
        n = static.rows
        if self.kind == "inverse":
            return static
        if self.kind == "resolvent":
            return Mat.identity(n, one=self.point) - static
        if self.kind == "power_z":
            zinv = RatFn(Poly.const(1), Poly.x())
            return Mat.identity(n, one=zinv, zero=RatFn(0)) - static
        if self.kind == "log_x":
            x = self.point
            return Mat.identity(n) - (Mat.identity(n) - static).scale(x)
        raise ValueError(f"unknown variant {self.kind!r}")

    def cycle_sign(self, m: int):
        if self.kind == "inverse":
            return -1 if m % 2 else 1
        if self.kind == "log_x":
            return (-self.point) ** m
        return 1

    def path_sign(self, length: int):
        """Sign of a path with ``length`` links; for ``log_x`` this is ``(-x)**(length-1)``."""
        if self.kind == "inverse":
            return -1 if length % 2 else 1
        if self.kind == "log_x":
            return (-self.point) ** (length - 1) if length >= 1 else -1 / self.point
        return 1


@dataclass
class OpCounter:
    """Counts of block inversions, multiplications and additions/subtractions."""

    inversions: int = 0
    multiplications: int = 0
    additions: int = 0

    def as_tuple(self) -> tuple[int, int, int]:
        return self.inversions, self.multiplications, self.additions


@dataclass
class DressContext:
    """One evaluation of the engine: graph, variant, memo of dressed weights.

    A context is single-writer; give each evaluation point its own.
    """

    graph: PartitionGraph
    variant: Variant
    memoize: bool = True
    counter: OpCounter | None = None
    memo: dict[tuple[int, VertexSet], Mat] = field(default_factory=dict)

    # counted block operations ------------------------------------------------

    def _mul(self, A: Mat, B: Mat) -> Mat:
        if self.counter is not None:
            self.counter.multiplications += 1
        return A @ B

    def _accumulate(self, acc: Mat, term: Mat, sign, subtract: bool) -> Mat:
        if self.counter is not None:
            self.counter.additions += 1
        if sign == 1:
            return acc - term if subtract else acc + term
        if sign == -1:
            return acc + term if subtract else acc - term
        term = term.scale(sign)
        return acc - term if subtract else acc + term

    def _inv(self, A: Mat, alpha: int) -> Mat:
        if self.counter is not None:
            self.counter.inversions += 1
        try:
            return dense_inverse(A)
        except Singular as exc:
            raise SingularDressing(f"dressing bracket of vertex {alpha} is singular") from exc

    # engine -------------------------------------------------------------------

    def dress(self, removed: VertexSet, alpha: int) -> Mat:
        key = (alpha, removed)
        if self.memoize and key in self.memo:
            return self.memo[key]
        G = self.graph
        bracket = self.variant.base(G.weight(alpha, alpha))
        for cycle in bare_cycles(G, removed, alpha):
            m = len(cycle) - 1
            acc = G.weight(cycle[1], alpha)
            rem = removed | 1 << alpha
            for i in range(1, m):
                mu = cycle[i]
                acc = self._mul(self.dress(rem, mu), acc)
                rem |= 1 << mu
                acc = self._mul(G.weight(cycle[i + 1], mu), acc)
            bracket = self._accumulate(bracket, acc, self.variant.cycle_sign(m), subtract=True)
        F = self._inv(bracket, alpha)
        if self.memoize:
            self.memo[key] = F
        return F

    def path_product(self, path: tuple[int, ...]) -> Mat:
        """``F[omega] M ... F[nu_2] M F[alpha]`` along ``path``, without the sign."""
        G = self.graph
        alpha = path[0]
        acc = self.dress(0, alpha)
        rem = 1 << alpha
        for prev, u in zip(path, path[1:]):
            acc = self._mul(G.weight(u, prev), acc)
            acc = self._mul(self.dress(rem, u), acc)
            rem |= 1 << u
        return acc

    def path_sum_block(self, alpha: int, omega: int) -> Mat:
        """Block ``(omega, alpha)`` of the function: signed sum over simple paths."""
        G = self.graph
        paths = simple_paths(G, 0, alpha, omega)
        if not paths:
            return Mat.zeros(G.dims[omega], G.dims[alpha])
        total = None
        for path in paths:
            ell = len(path) - 1
            term = self.path_product(path)
            sign = self.variant.path_sign(ell)
            if total is None:
                total = term if sign == 1 else term.scale(sign)
            else:
                total = self._accumulate(total, term, sign, subtract=False)
        return total

    def assemble(self, block_fn: Callable[[int, int], Mat] | None = None) -> Mat:
        """Full matrix from ``path_sum_block`` (or ``block_fn``) over all vertex pairs."""
        fn = block_fn or self.path_sum_block
        n = self.graph.n
        blocks = [[fn(nu, mu) for nu in range(n)] for mu in range(n)]
        return scatter(self.graph.partition, blocks)


def dress(ctx: DressContext, removed: VertexSet, alpha: int) -> Mat:
    return ctx.dress(removed, alpha)


def path_sum_block(ctx: DressContext, alpha: int, omega: int) -> Mat:
    return ctx.path_sum_block(alpha, omega)
