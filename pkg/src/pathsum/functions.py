"""Matrix functions by path-sums: inverse, resolvent, exponential, logarithm, powers.

Indices and groups are 0-based.  The transform-domain routes (power and
exponential) work over exact scalars; float inputs are rationalized first.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .dressing import DressContext, OpCounter, Variant
from .errors import (NilpotentUnsupported, NonConvergence, NotStrictlyProper,
                     SingularDressing)
from .matrixcore import Mat, is_exact_mat, to_exact, to_float
from .partition import GraphVariant, PartitionGraph, general_partition, partition_graph
from .reference import ref_exp
from .scalars import (GaussRat, Poly, RatFn, _series_div, exact, is_exact,
                      partial_fractions, principal_power, rationalize)
from .walks import loopless_walks

LOG_QUAD_ORDER = 32
LOG_QUAD_TOL = 1e-11
LOG_QUAD_MAX_ORDER = 512
NODE_PERTURBATION = 1e-9
RATIONALIZE_TOL = 1e-12


def _graph(M: Mat, groups, variant: GraphVariant) -> PartitionGraph:
    return partition_graph(general_partition(M, groups), variant)


def _float_graph(G: PartitionGraph) -> PartitionGraph:
    """Same edge structure as ``G`` with complex block weights (faster arithmetic)."""
    P = G.partition
    return replace(G, partition=general_partition(to_float(P.source), P.groups))


def _exact_input(M: Mat) -> Mat:
    return M if is_exact_mat(M) else to_exact(M, RATIONALIZE_TOL)


def _perturbed(x):
    return complex(x) + 1j * NODE_PERTURBATION * (1 + abs(complex(x)))


# inverse and resolvent -----------------------------------------------------------


def ps_inverse(M: Mat, groups: Sequence[Sequence[int]], *,
               counter: OpCounter | None = None) -> Mat:
    """``M**-1`` from signed path-sums on the graph of ``M - I``."""
    G = _graph(M, groups, GraphVariant.OF_M_MINUS_I)
    return DressContext(G, Variant.inverse(), counter=counter).assemble()


def ps_resolvent(M: Mat, groups: Sequence[Sequence[int]], s) -> Mat:
    """``(sI - M)**-1`` at a scalar point ``s``.

    An inexact ``s`` that hits a pole of an intermediate continued fraction
    is nudged off the real line once and retried.
    """
    G = _graph(M, groups, GraphVariant.OF_M)
    exact_run = is_exact(s) and is_exact_mat(M)
    if not exact_run:
        G = _float_graph(G)
        s = complex(s)
    try:
        return DressContext(G, Variant.resolvent(s)).assemble()
    except SingularDressing:
        if exact_run:
            raise
        return DressContext(G, Variant.resolvent(_perturbed(s))).assemble()


def ps_resolvent_symbolic(M: Mat, groups: Sequence[Sequence[int]]) -> Mat:
    """``(sI - M)**-1`` as a matrix of rational functions in ``s``."""
    G = _graph(_exact_input(M), groups, GraphVariant.OF_M)
    return DressContext(G, Variant.resolvent(RatFn.var())).assemble()


# inverse Laplace transform --------------------------------------------------------


@dataclass(frozen=True)
class LaplaceCoefficientForm:
    """``sum c * t**j * exp(a t) / j!`` over ``terms = ((a, j, c), ...)``."""

    terms: tuple[tuple[object, int, object], ...]

    def __call__(self, t):
        if t == 0:
            acc = 0
            for a, j, c in self.terms:
                if j == 0:
                    acc = acc + c
            return acc
        tc = complex(t)
        acc = 0j
        for a, j, c in self.terms:
            acc += complex(c) * tc ** j * cmath.exp(complex(a) * tc) / math.factorial(j)
        return acc


def invert_Laplace(r: RatFn) -> LaplaceCoefficientForm:
    if not isinstance(r, RatFn):
        r = RatFn(r)
    if r.is_zero():
        return LaplaceCoefficientForm(())
    if r.num.degree >= r.den.degree:
        raise NotStrictlyProper(f"degree {r.num.degree} numerator over degree {r.den.degree}")
    pf = partial_fractions(r)
    terms = []
    for pole in pf.poles:
        for j, c in enumerate(pole.coeffs):
            if c:
                terms.append((pole.root, j, c))
    return LaplaceCoefficientForm(tuple(terms))


def laplace_forms(M: Mat, groups: Sequence[Sequence[int]]) -> list[list[LaplaceCoefficientForm]]:
    R = ps_resolvent_symbolic(M, groups)
    return [[invert_Laplace(e) for e in row] for row in R.to_rows()]


def _eval_forms(forms, x) -> Mat:
    return Mat.from_rows([[f(x) for f in row] for row in forms])


def ps_exp(M: Mat, groups: Sequence[Sequence[int]], t=1) -> Mat:
    """``exp(t M)`` by inverting the Laplace transform of the symbolic resolvent."""
    if t == 0:
        return Mat.identity(M.rows)
    return _eval_forms(laplace_forms(M, groups), t)


def _walk_term(G: PartitionGraph, walk: tuple[int, ...], t) -> Mat:
    # nested convolution of exp((t_{i+1}-t_i) M_v) along the walk is the top-right
    # block of exp(t A) with A block upper bidiagonal
    seq = walk[::-1]
    dims = [G.dims[v] for v in seq]
    offs = [sum(dims[:i]) for i in range(len(dims) + 1)]
    n = offs[-1]
    entries = [0j] * (n * n)

    def put(i: int, j: int, B: Mat) -> None:
        for a in range(B.rows):
            for b in range(B.cols):
                entries[(offs[i] + a) * n + offs[j] + b] = complex(B[a, b])

    for i, v in enumerate(seq):
        put(i, i, G.weight(v, v))
        if i + 1 < len(seq):
            put(i, i + 1, G.weight(v, seq[i + 1]))
    E = ref_exp(Mat(n, n, entries), t)
    return E.submatrix(range(offs[0], offs[1]), range(offs[-2], offs[-1]))


def ps_walk_exp(M: Mat, groups: Sequence[Sequence[int]], t=1, max_len: int = 2) -> Mat:
    """Truncated walk-sum for ``exp(t M)``: loopless walks of at most ``max_len`` links."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    G = _graph(M, groups, GraphVariant.OF_M)

    def block(alpha: int, omega: int) -> Mat:
        acc = Mat.zeros(G.dims[omega], G.dims[alpha], 0j)
        for w in loopless_walks(G, alpha, omega, max_len):
            acc = acc + _walk_term(G, w, t)
        return acc

    return DressContext(G, Variant.inverse()).assemble(block)


# logarithm -------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    x, w = np.polynomial.legendre.leggauss(order)
    return tuple(float(v) for v in (x + 1) / 2), tuple(float(v) for v in w / 2)


def _log_integrand(G: PartitionGraph, x) -> Mat:
    ctx = DressContext(G, Variant.log_x(x))

    def block(alpha: int, omega: int) -> Mat:
        B = ctx.path_sum_block(alpha, omega)
        if alpha == omega:
            B = B + Mat.identity(G.dims[alpha]).scale(1 / x)
        return B

    return ctx.assemble(block)


def _log_node(G: PartitionGraph, x: float) -> Mat:
    try:
        return _log_integrand(G, x)
    except SingularDressing:
        return _log_integrand(G, _perturbed(x))


def _log_quadrature(G: PartitionGraph, order: int, workers: int) -> Mat:
    nodes, weights = _gauss_legendre(order)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(lambda x: _log_node(G, x), nodes))
    else:
        values = [_log_node(G, x) for x in nodes]
    # fixed summation order keeps the result independent of scheduling
    acc = None
    for w, V in zip(weights, values):
        term = V.scale(w)
        acc = term if acc is None else acc + term
    return acc


def ps_log(M: Mat, groups: Sequence[Sequence[int]], quad_order: int = LOG_QUAD_ORDER, *,
           tol: float = LOG_QUAD_TOL, max_order: int = LOG_QUAD_MAX_ORDER,
           workers: int = 1) -> Mat:
    """Principal logarithm from the Richter integral, by Gauss-Legendre quadrature.

    The order is doubled from ``quad_order`` until two successive results
    agree to ``tol`` in max norm; ``NonConvergence`` past ``max_order``.
    """
    if quad_order < 1:
        raise ValueError("quad_order must be positive")
    G = _float_graph(_graph(M, groups, GraphVariant.OF_M_MINUS_I))
    order = quad_order
    prev = _log_quadrature(G, order, workers)
    while order * 2 <= max_order:
        order *= 2
        cur = _log_quadrature(G, order, workers)
        diff = max((abs(a - b) for a, b in zip(cur.entries, prev.entries)), default=0.0)
        if diff < tol:
            return cur
        prev = cur
    raise NonConvergence(f"log quadrature did not settle to {tol} by order {max_order}")


# inverse Z transform and powers ----------------------------------------------------


@dataclass(frozen=True)
class ZCoefficientForm:
    """Coefficient of ``z**(n+1)`` as ``sum P_k(n) b_k**n`` plus Kronecker terms.

    ``terms`` holds ``(b_k, P_k)`` with ``P_k`` a ``Poly`` in ``n``;
    ``kronecker`` holds ``(n, value)`` pairs from the polynomial part.
    """

    terms: tuple[tuple[object, Poly], ...]
    kronecker: tuple[tuple[int, object], ...]
    source: RatFn | None = None

    def continuation(self, n):
        """Analytic continuation in ``n`` (principal branch for ``b**n``)."""
        acc = 0
        for b, P in self.terms:
            acc = acc + P(n) * principal_power(b, n)
        return acc

    def __call__(self, n):
        acc = self.continuation(n)
        k = _as_int(n)
        if k is not None:
            for idx, val in self.kronecker:
                if idx == k:
                    acc = acc + val
        return acc

    def series_coefficient(self, n: int):
        """Coefficient of ``z**(n+1)`` in the series of ``source`` by long division."""
        if self.source is None:
            raise ValueError("form has no source rational function")
        if n < -1:
            return 0
        num, den = self.source.num.coeffs, self.source.den.coeffs
        return _series_div(list(num), list(den), n + 2)[n + 1]


def _as_int(q) -> int | None:
    if isinstance(q, bool):
        return None
    if isinstance(q, int):
        return q
    if isinstance(q, Fraction):
        return int(q) if q.denominator == 1 else None
    if isinstance(q, GaussRat):
        if not q.im and q.re.denominator == 1:
            return int(q.re)
        return None
    c = complex(q)
    if c.imag == 0 and c.real == int(c.real):
        return int(c.real)
    return None


def _binom_poly(j: int) -> Poly:
    """``binom(n + j, j - 1)`` as a polynomial in ``n``."""
    P = Poly.const(1)
    for i in range(2, j + 1):
        P = P * Poly([i, 1])
    return P * Fraction(1, math.factorial(j - 1))


def invert_Z(r: RatFn) -> ZCoefficientForm:
    """Closed form of the coefficient of ``z**(n+1)`` in the series of ``r`` about 0.

    A pole ``a`` of multiplicity ``p`` contributes a degree ``p-1``
    polynomial in ``n`` times ``(1/a)**n``.
    """
    if not isinstance(r, RatFn):
        r = RatFn(r)
    if r.den(0) == 0:
        raise ValueError("rational function has a pole at z=0; no power series")
    pf = partial_fractions(r)
    terms = []
    for pole in pf.poles:
        a = pole.root
        b = 1 / exact(a) if is_exact(a) else 1 / complex(a)
        P = Poly.const(0)
        for j, C in enumerate(pole.coeffs, start=1):
            if not C:
                continue
            # C/(z-a)**j = C (-b)**j (1 - b z)**-j; shift index so the power is b**n
            P = P + _binom_poly(j) * (C * (-b) ** j * b)
        if not P.is_zero():
            terms.append((b, P))
    kron = tuple((i - 1, c) for i, c in enumerate(pf.polynomial_part.coeffs) if c)
    return ZCoefficientForm(tuple(terms), kron, r)


def _self_test_z_calibration() -> None:
    z = Poly.x()
    form = invert_Z(RatFn(z, Poly([1, 4])))
    for n in range(4):
        if form(n) != (-4) ** n:
            raise AssertionError("inverse Z calibration failed on z/(1+4z)")


_CALIBRATED = False


def _ensure_calibrated() -> None:
    global _CALIBRATED
    if not _CALIBRATED:
        _self_test_z_calibration()
        _CALIBRATED = True


class PowerFamily:
    """``M**q`` for any complex ``q``, sharing one symbolic computation."""

    def __init__(self, M: Mat, groups: Sequence[Sequence[int]]):
        _ensure_calibrated()
        Me = _exact_input(M)
        G = _graph(Me, groups, GraphVariant.OF_M_MINUS_I)
        Mz = DressContext(G, Variant.power_z()).assemble()
        entries = [e if isinstance(e, RatFn) else RatFn(e) for e in Mz.entries]
        if all(e.den.degree == 0 for e in entries):
            raise NilpotentUnsupported("matrix is nilpotent; no complex powers")
        self.shape = Mz.shape
        self.symbolic = Mat(Mz.rows, Mz.cols, entries)
        self.forms = [invert_Z(e) for e in entries]

    def __call__(self, q) -> Mat:
        k = _as_int(q)
        if k is not None and k >= 1:
            # finite series coefficient: exact even with irrational poles
            vals = [f.series_coefficient(k) for f in self.forms]
        else:
            # Kronecker terms are dropped at q <= 0 and at non-integer q
            vals = [f.continuation(q if k is None else k) for f in self.forms]
        return Mat(self.shape[0], self.shape[1], vals)


def ps_power(M: Mat, groups: Sequence[Sequence[int]], q) -> Mat:
    """``M**q`` as the analytic continuation of the inverse Z transform at ``n = q``."""
    return PowerFamily(M, groups)(q)


__all__ = [
    "LaplaceCoefficientForm",
    "PowerFamily",
    "ZCoefficientForm",
    "invert_Laplace",
    "invert_Z",
    "laplace_forms",
    "ps_exp",
    "ps_inverse",
    "ps_log",
    "ps_power",
    "ps_resolvent",
    "ps_resolvent_symbolic",
    "ps_walk_exp",
]
