"""
Complexity classes and flop estimates for planned graphs.

Each node is charged by where it runs. Nodes between a forward and an inverse
transform are spectral; all others are spatial.

| node                 | spatial                 | spectral          |
|----------------------|-------------------------|-------------------|
| transform            |                         | c_t n log2 n      |
| convolution          | c_d n k        O(n k)   | c_s n      O(n)   |
| activation           | c_s n          O(n)     | c_s n      O(n)   |
| pooling              | c_d n n_out    O(n^2)   | c_s n      O(n)   |
| boundary             | 0              O(n)     |                   |

A spectral activation realized through embedded transforms costs
c_a n log2 n instead; both totals are reported.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from spectralchain.core.exceptions import MissingShapeMetadataError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.planner.graph import LayerKind, LayerNode, PlannedGraph


class ComplexityClass(str, Enum):
    LINEAR = "O(n)"
    LINEARITHMIC = "O(n log n)"
    DIRECT = "O(n·k)"
    QUADRATIC = "O(n²)"


@dataclass(frozen=True)
class CostConstants:
    """
    Per-point flop constants.

    Attributes
    ----------
    `c_t` : `float`
        Transform flops per point per log2 level.
    `c_s` : `float`
        Complex multiply-add per point.
    `c_d` : `float`
        Real multiply-add per point per tap.
    `c_a` : `float`
        Spectral activation flops per point per log2 level when the mask
        product runs through embedded transforms.
    """

    c_t: float = 5.0
    c_s: float = 6.0
    c_d: float = 2.0
    c_a: float = 5.0


DEFAULT_CONSTANTS = CostConstants()

ACTIVATION_NOTE = (
    "spectral activation is labelled O(n) with a precomputed mask spectrum, but "
    "l_multiply is a circular convolution of spectra: O(n log n) through embedded "
    "transforms, O(n^2) evaluated directly; estimated_flops uses the precomputed "
    "accounting and embedded_activation_flops the embedded-transform one"
)


class NodeCost(BaseModel):
    position: int
    kind: LayerKind
    symbol: str
    domain: str
    complexity: ComplexityClass
    n: int
    k: Optional[int] = None
    flops: float
    embedded_complexity: Optional[ComplexityClass] = None
    embedded_flops: Optional[float] = None


class CostReport(BaseModel):
    """
    Cost summary for one planned graph.

    `transform_count` always equals the number of transform nodes of the plan.
    """

    mode: str
    plan: str
    transform_count: int = Field(ge=0)
    nodes: List[NodeCost]
    estimated_flops: float = Field(ge=0.0)
    embedded_activation_flops: float = Field(ge=0.0)
    activation_note: str = ACTIVATION_NOTE


def _require(node: LayerNode, position: int, *fields: str) -> None:
    for name in fields:
        if getattr(node, name) is None:
            raise MissingShapeMetadataError(position, node.kind.value, name)


def _n_log_n(n: int) -> float:
    return n * math.log2(n) if n > 1 else 0.0


def _node_cost(
    node: LayerNode, position: int, spectral: bool, constants: CostConstants
) -> NodeCost:
    _require(node, position, "height", "width")
    n = node.n
    fields = dict(
        position=position,
        kind=node.kind,
        symbol=node.symbol,
        domain="spectral" if spectral else "spatial",
        n=n,
    )

    if node.is_transform:
        return NodeCost(
            complexity=ComplexityClass.LINEARITHMIC,
            flops=constants.c_t * _n_log_n(n),
            **fields,
        )
    if node.kind is LayerKind.CONVOLUTION:
        _require(node, position, "kernel_height", "kernel_width")
        if spectral:
            return NodeCost(
                complexity=ComplexityClass.LINEAR,
                k=node.k,
                flops=constants.c_s * n * node.channels,
                **fields,
            )
        return NodeCost(
            complexity=ComplexityClass.DIRECT,
            k=node.k,
            flops=constants.c_d * n * node.k * node.channels,
            **fields,
        )
    if node.kind is LayerKind.ACTIVATION:
        if spectral:
            return NodeCost(
                complexity=ComplexityClass.LINEAR,
                flops=constants.c_s * n,
                embedded_complexity=ComplexityClass.LINEARITHMIC,
                embedded_flops=constants.c_a * _n_log_n(n),
                **fields,
            )
        return NodeCost(complexity=ComplexityClass.LINEAR, flops=constants.c_s * n, **fields)
    if node.kind is LayerKind.POOLING:
        _require(node, position, "out_height", "out_width")
        if spectral:
            return NodeCost(
                complexity=ComplexityClass.LINEAR, flops=constants.c_s * n, **fields
            )
        n_out = node.out_height * node.out_width
        return NodeCost(
            complexity=ComplexityClass.QUADRATIC,
            flops=constants.c_d * n * n_out,
            **fields,
        )
    return NodeCost(complexity=ComplexityClass.LINEAR, flops=0.0, **fields)


def cost_estimate(
    plan: PlannedGraph, constants: CostConstants = DEFAULT_CONSTANTS
) -> CostReport:
    """
    Classes every node of `plan` and sums its estimated flops.

    Raises:
        MissingShapeMetadataError: if a node lacks a dimension its cost needs.
    """
    costs: List[NodeCost] = []
    spectral = False
    for position, node in enumerate(plan.nodes):
        if node.kind is LayerKind.FORWARD_TRANSFORM:
            spectral = True
        costs.append(_node_cost(node, position, spectral, constants))
        if node.kind is LayerKind.INVERSE_TRANSFORM:
            spectral = False

    estimated = sum(cost.flops for cost in costs)
    embedded = sum(
        cost.embedded_flops if cost.embedded_flops is not None else cost.flops
        for cost in costs
    )
    report = CostReport(
        mode=plan.mode.value,
        plan=plan.render(),
        transform_count=plan.transform_count,
        nodes=costs,
        estimated_flops=estimated,
        embedded_activation_flops=embedded,
    )
    SpectralLogger.get().info(
        **wrap_constants(
            message="Cost estimated",
            **{
                LC.EVENT_TYPE: "planner",
                LC.ACTION: "cost_estimated",
                LC.MODE: report.mode,
                LC.PREDICTED_COUNT: report.transform_count,
                LC.ESTIMATED_FLOPS: report.estimated_flops,
            },
        )
    )
    return report
