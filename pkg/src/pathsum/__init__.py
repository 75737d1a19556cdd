"""Matrix functions of block-partitioned matrices by the method of path-sums."""

from .dressing import DressContext, OpCounter, Variant, dress, path_sum_block
from .errors import NumericalError, PathSumError, UsageError
from .functions import (PowerFamily, invert_Laplace, invert_Z, ps_exp, ps_inverse, ps_log,
                        ps_power, ps_resolvent, ps_resolvent_symbolic, ps_walk_exp)
from .matrixcore import Mat, dense_inverse
from .partition import GraphVariant, general_partition, partition_graph, tensor_partition
from .scalars import GaussRat, Poly, RatFn, parse_scalar
from .structured import (CostReport, LnBlocks, ln_blocks_from_partition, ln_exp, ln_inverse,
                         ln_resolvent, tree_cost)

__all__ = [
    "CostReport", "DressContext", "GaussRat", "GraphVariant", "LnBlocks", "Mat",
    "NumericalError", "OpCounter", "PathSumError", "Poly", "PowerFamily", "RatFn",
    "UsageError", "Variant", "dense_inverse", "dress", "general_partition", "invert_Laplace",
    "invert_Z", "ln_blocks_from_partition", "ln_exp", "ln_inverse", "ln_resolvent",
    "parse_scalar", "partition_graph", "path_sum_block", "ps_exp", "ps_inverse", "ps_log",
    "ps_power", "ps_resolvent", "ps_resolvent_symbolic", "ps_walk_exp", "tensor_partition",
    "tree_cost",
]
