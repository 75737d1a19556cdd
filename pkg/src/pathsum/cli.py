"""Command-line front end.

    pathsum <function> --matrix FILE --partition SPEC [--t C] [--q C] [--s C]
                       [--mode exact|float] [--quad N] [--tol X] [--out FILE]

Vertices and matrix indices are 1-based on the command line and in
partition specs; the library underneath is 0-based.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from typing import Sequence

from .dressing import DressContext, OpCounter, Variant
from .errors import BadDims, BadGroups, NonSquare, NumericalError, ParseError, UsageError
from .functions import (LOG_QUAD_ORDER, LOG_QUAD_TOL, ps_exp, ps_inverse, ps_log, ps_power,
                        ps_resolvent)
from .matrixcore import Mat, is_exact_mat, to_float
from .partition import GraphVariant, describe_graph, general_partition, partition_graph, tensor_groups
from .scalars import format_scalar, parse_scalar
from .structured import tree_cost, tree_from_partition

FUNCTIONS = ("inverse", "exp", "log", "power", "resolvent", "cost", "graph")
_REQUIRED = {"exp": "t", "power": "q", "resolvent": "s"}


# matrix files --------------------------------------------------------------------


def parse_matrix_text(text: str, mode: str | None = None) -> Mat:
    """Parse the ``matrix R C exact|float`` format; ``mode`` overrides the header."""
    rows: list[list] = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "matrix":
                raise ParseError("expected header 'matrix R C exact|float'", lineno, 1)
            try:
                R, C = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("matrix dimensions must be integers", lineno, 1) from None
            if parts[3] not in ("exact", "float"):
                raise ParseError(f"unknown mode {parts[3]!r}", lineno, line.index(parts[3]) + 1)
            header = (R, C, mode or parts[3])
            continue
        R, C, m = header
        if len(rows) == R:
            raise ParseError(f"more than {R} rows", lineno, 1)
        row = []
        for tok in re.finditer(r"\S+", line):
            try:
                row.append(parse_scalar(tok.group(), exact_mode=(m == "exact")))
            except ParseError as exc:
                raise ParseError(f"malformed entry {tok.group()!r}", lineno, tok.start() + 1) from exc
        if len(row) != C:
            raise ParseError(f"expected {C} entries, found {len(row)}", lineno, 1)
        rows.append(row)
    if header is None:
        raise ParseError("empty matrix file", 1, 1)
    if len(rows) != header[0]:
        raise ParseError(f"expected {header[0]} rows, found {len(rows)}", None)
    return Mat(header[0], header[1], [x for r in rows for x in r])


def parse_matrix(path: str, mode: str | None = None) -> Mat:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix_text(fh.read(), mode)


def serialize_matrix(M: Mat) -> str:
    mode = "exact" if is_exact_mat(M) else "float"
    out = [f"matrix {M.rows} {M.cols} {mode}"]
    for row in M.to_rows():
        out.append(" ".join(format_scalar(x) for x in row))
    return "\n".join(out) + "\n"


# partitions ------------------------------------------------------------------------


def parse_partition(spec: str, D: int) -> list[list[int]]:
    """Groups (0-based) from ``trivial``, ``singletons``, ``tensor:d1xd2..:S`` or ``{1,3},{2}``."""
    spec = spec.strip()
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            spec = fh.read().strip()
    if spec == "trivial":
        return [list(range(D))]
    if spec == "singletons":
        return [[i] for i in range(D)]
    if spec.startswith("tensor:"):
        m = re.fullmatch(r"tensor:(\d+(?:x\d+)*):(\d+)", spec)
        if not m:
            raise BadGroups(f"malformed tensor partition {spec!r}")
        dims = [int(d) for d in m.group(1).split("x")]
        sub = int(m.group(2))
        prod = 1
        for d in dims:
            prod *= d
        if prod != D:
            raise BadDims(f"tensor dimensions {dims} do not multiply to {D}")
        return tensor_groups(dims, sub - 1)
    body = re.sub(r"\s+", "", spec)
    if not re.fullmatch(r"\{\d+(?:,\d+)*\}(?:,\{\d+(?:,\d+)*\})*", body):
        raise BadGroups(f"malformed partition {spec!r}")
    groups = [[int(i) - 1 for i in g.split(",")] for g in re.findall(r"\{([^}]*)\}", body)]
    if any(i < 0 for g in groups for i in g):
        raise BadGroups("indices are 1-based")
    return groups


# jobs -------------------------------------------------------------------------------


@dataclass(frozen=True)
class JobSpec:
    function: str
    matrix: str
    partition: str = "trivial"
    t: str | None = None
    q: str | None = None
    s: str | None = None
    mode: str | None = None
    quad: int = LOG_QUAD_ORDER
    tol: float = LOG_QUAD_TOL
    out: str | None = None
    alpha: int | None = None
    omega: int | None = None
    graph_variant: str = "M"

    def validate(self) -> None:
        if self.function not in FUNCTIONS:
            raise UsageError(f"unknown function {self.function!r}")
        need = _REQUIRED.get(self.function)
        if need and getattr(self, need) is None:
            raise UsageError(f"--{need} is required for {self.function}")
        if self.function == "cost" and self.alpha is None:
            raise UsageError("--alpha is required for cost")


def _cost_report(M: Mat, groups, alpha: int, omega: int | None) -> str:
    N, edges = tree_from_partition(M, groups)
    dims = {len(g) for g in groups}
    if len(dims) != 1:
        raise BadDims("cost model needs equal block sizes")
    d = dims.pop()
    a = alpha - 1
    w = a if omega is None else omega - 1
    for v in (a, w):
        if not 0 <= v < N:
            raise UsageError(f"vertex {v + 1} outside 1..{N}")
    report = tree_cost(N, edges, d, a, w)
    G = partition_graph(general_partition(M, groups), GraphVariant.OF_M_MINUS_I)
    counter = OpCounter()
    DressContext(G, Variant.inverse(), memoize=False, counter=counter).path_sum_block(a, w)
    inv, mul, add = counter.as_tuple()
    return (f"{report.summary()}\n"
            f"flops={report.flops()} d={d}\n"
            f"measured inv={inv} mul={mul} add={add}\n")


def execute(job: JobSpec) -> str:
    """Run ``job`` and return the text to write."""
    job.validate()
    M = parse_matrix(job.matrix, job.mode)
    if not M.is_square:
        raise NonSquare(f"matrix is {M.rows}x{M.cols}")
    if job.mode == "float":
        M = to_float(M)
    groups = parse_partition(job.partition, M.rows)
    fn = job.function
    if fn == "graph":
        G = partition_graph(general_partition(M, groups), GraphVariant(job.graph_variant))
        return describe_graph(G)
    if fn == "cost":
        return _cost_report(M, groups, job.alpha, job.omega)
    if fn == "inverse":
        R = ps_inverse(M, groups)
    elif fn == "resolvent":
        R = ps_resolvent(M, groups, parse_scalar(job.s))
    elif fn == "exp":
        R = ps_exp(M, groups, parse_scalar(job.t))
    elif fn == "log":
        R = ps_log(M, groups, job.quad, tol=job.tol)
    else:
        R = ps_power(M, groups, parse_scalar(job.q))
    return serialize_matrix(R)


def run(job: JobSpec, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        text = execute(job)
    except UsageError as exc:
        print(f"pathsum: error: {exc}", file=stderr)
        return 1
    except NumericalError as exc:
        print(f"pathsum: numerical failure: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"pathsum: error: {exc}", file=stderr)
        return 1
    if job.out and job.out != "-":
        with open(job.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pathsum", description="Matrix functions by the method of path-sums.")
    p.add_argument("function", choices=FUNCTIONS)
    p.add_argument("--matrix", required=True, help="matrix file")
    p.add_argument("--partition", default="trivial",
                   help="trivial | singletons | tensor:d1xd2..:S | {1,3},{2} (1-based) or a file")
    p.add_argument("--t", help="time for exp")
    p.add_argument("--q", help="exponent for power")
    p.add_argument("--s", help="point for resolvent")
    p.add_argument("--mode", choices=("exact", "float"), help="override the file's mode")
    p.add_argument("--quad", type=int, default=LOG_QUAD_ORDER, help="initial log quadrature order")
    p.add_argument("--tol", type=float, default=LOG_QUAD_TOL, help="log quadrature tolerance")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--alpha", type=int, help="source vertex for cost (1-based)")
    p.add_argument("--omega", type=int, help="target vertex for cost (default: alpha)")
    p.add_argument("--graph-variant", choices=("M", "M-I"), default="M",
                   help="graph of M or of M-I for the graph job")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"pathsum: error: {exc}", file=sys.stderr)
        return 1
    job = JobSpec(ns.function, ns.matrix, ns.partition, ns.t, ns.q, ns.s, ns.mode, ns.quad,
                  ns.tol, ns.out, ns.alpha, ns.omega, ns.graph_variant)
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
