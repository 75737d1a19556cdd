"""Brute-force oracles: scaling-and-squaring exponential, repeated squaring.

Nothing here touches the graph or dressing code, so these functions can
be used to check it.
"""

from __future__ import annotations

import math

from .errors import NonSquare
from .matrixcore import Mat, dense_inverse, mat_mul, max_diff, to_float

TAYLOR_TERM_TOL = 1e-18
SCALE_TARGET = 0.5


def _inf_norm(A: Mat) -> float:
    c = A.cols
    return max((sum(abs(x) for x in A.entries[i * c:(i + 1) * c]) for i in range(A.rows)),
               default=0.0)


def ref_exp(M: Mat, t=1.0) -> Mat:
    """``exp(t M)`` by scaling by ``2**-j``, a Taylor series, and ``j`` squarings."""
    if not M.is_square:
        raise NonSquare(f"exp of a {M.rows}x{M.cols} matrix")
    n = M.rows
    A = to_float(M).scale(complex(t))
    norm = _inf_norm(A)
    j = 0
    if norm > SCALE_TARGET:
        j = math.ceil(math.log2(norm / SCALE_TARGET))
    A = A.scale(0.5 ** j)
    result = Mat.identity(n, one=1 + 0j, zero=0j)
    term = result
    k = 1
    while True:
        term = mat_mul(term, A).scale(1.0 / k)
        result = result + term
        if term.max_abs() < TAYLOR_TERM_TOL or k > 200:
            break
        k += 1
    for _ in range(j):
        result = mat_mul(result, result)
    return result


def ref_power_int(M: Mat, k: int) -> Mat:
    """``M**k`` by repeated squaring; negative ``k`` inverts first."""
    if not M.is_square:
        raise NonSquare(f"power of a {M.rows}x{M.cols} matrix")
    base = M
    if k < 0:
        base = dense_inverse(M)
        k = -k
    result = Mat.identity(M.rows)
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def _residual(A: Mat, B: Mat) -> float:
    # exact inputs give an exact zero when the identity holds
    return max_diff(A, B)


def check_identity_suite(M: Mat, *, drazin: Mat | None = None, flat: Mat | None = None,
                         sqrt: Mat | None = None, log: Mat | None = None,
                         inverse: Mat | None = None, exp: Mat | None = None,
                         t=1.0) -> dict[str, float]:
    """Residuals (max-abs) of the functional identities that apply to the given results."""
    out: dict[str, float] = {}
    n = M.rows
    eye = Mat.identity(n)
    if inverse is not None:
        out["M.inv=I"] = _residual(M @ inverse, eye)
        out["inv.M=I"] = _residual(inverse @ M, eye)
    if drazin is not None:
        out["M.D.M=M"] = _residual(M @ drazin @ M, M)
        out["D.M.D=D"] = _residual(drazin @ M @ drazin, drazin)
        out["D.M=M.D"] = _residual(drazin @ M, M @ drazin)
        if flat is not None:
            out["D.M=flat"] = _residual(drazin @ M, flat)
    if flat is not None:
        out["flat.M=M"] = _residual(flat @ M, M)
        out["M.flat=M"] = _residual(M @ flat, M)
    if sqrt is not None:
        out["sqrt^2=M"] = _residual(sqrt @ sqrt, M)
    if log is not None:
        out["exp(log)=M"] = _residual(ref_exp(log, 1.0), to_float(M))
    if exp is not None:
        out["exp=ref_exp"] = _residual(to_float(exp), ref_exp(M, t))
    return out


__all__ = ["check_identity_suite", "ref_exp", "ref_power_int"]
