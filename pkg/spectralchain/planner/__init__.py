from spectralchain.planner.graph import LayerGraph, LayerKind, LayerNode, PlannedGraph
from spectralchain.planner.builder import LayerGraphBuilder
from spectralchain.planner.placement import count_transforms, place_transforms
from spectralchain.planner.cost import (
    ComplexityClass,
    CostConstants,
    CostReport,
    NodeCost,
    cost_estimate,
)

__all__ = [
    "ComplexityClass",
    "CostConstants",
    "CostReport",
    "LayerGraph",
    "LayerGraphBuilder",
    "LayerKind",
    "LayerNode",
    "NodeCost",
    "PlannedGraph",
    "cost_estimate",
    "count_transforms",
    "place_transforms",
]
