from typing import List, Union

from spectralchain.core.exceptions import InvalidPlanningModeError, MalformedGraphError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.modes import PlanningMode, coerce_mode
from spectralchain.planner.graph import LayerGraph, LayerKind, LayerNode, PlannedGraph


def _forward_before(node: LayerNode) -> LayerNode:
    return LayerNode(LayerKind.FORWARD_TRANSFORM, height=node.height, width=node.width)


def _inverse_after(node: LayerNode) -> LayerNode:
    shape = node.output_shape
    if shape is None:
        return LayerNode(LayerKind.INVERSE_TRANSFORM)
    return LayerNode(LayerKind.INVERSE_TRANSFORM, height=shape[0], width=shape[1])


def _legacy(nodes) -> List[LayerNode]:
    placed: List[LayerNode] = []
    for node in nodes:
        if node.kind is LayerKind.CONVOLUTION:
            placed.extend((_forward_before(node), node, _inverse_after(node)))
        else:
            placed.append(node)
    return placed


def _fused(nodes) -> List[LayerNode]:
    placed: List[LayerNode] = []
    in_region = False
    for node in nodes:
        if node.spectral_compatible and not in_region:
            placed.append(_forward_before(node))
            in_region = True
        elif not node.spectral_compatible and in_region:
            placed.append(_inverse_after(placed[-1]))
            in_region = False
        placed.append(node)
    if in_region:
        placed.append(_inverse_after(placed[-1]))
    return placed


def place_transforms(
    graph: LayerGraph, mode: Union[PlanningMode, str]
) -> PlannedGraph:
    """
    Places forward/inverse transform nodes around the spectral regions of a graph.

    - `naive` inserts nothing; every node runs spatially.
    - `legacy_spectral` wraps each convolution in its own pair; other nodes
      stay spatial.
    - `fused_spectral` wraps each maximal run of spectral-compatible nodes
      (convolution, pooling and non-ReLU activation) in exactly one pair.

    Raises:
        InvalidPlanningModeError: if `mode` is not a planning mode.
        MalformedGraphError: if `graph` is not a LayerGraph.
    """
    mode = coerce_mode(PlanningMode, mode, InvalidPlanningModeError)
    if not isinstance(graph, LayerGraph):
        raise MalformedGraphError(f"expected LayerGraph, got {type(graph).__name__}")

    if mode is PlanningMode.NAIVE:
        nodes = list(graph.nodes)
    elif mode is PlanningMode.LEGACY_SPECTRAL:
        nodes = _legacy(graph.nodes)
    else:
        nodes = _fused(graph.nodes)

    plan = PlannedGraph(tuple(nodes), mode, graph.name)
    SpectralLogger.get().info(
        **wrap_constants(
            message="Transforms placed",
            **{
                LC.EVENT_TYPE: "planner",
                LC.ACTION: "transforms_placed",
                LC.MODE: mode.value,
                LC.PREDICTED_COUNT: plan.transform_count,
                LC.CUSTOM: {"plan": plan.render()},
            },
        )
    )
    return plan


def count_transforms(plan: PlannedGraph) -> int:
    """Number of forward plus inverse transform nodes in `plan`."""
    return plan.transform_count
