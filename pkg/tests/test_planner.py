import pytest

from spectralchain.core.exceptions import (
    InvalidPlanningModeError,
    MalformedGraphError,
    MissingShapeMetadataError,
)
from spectralchain.core.modes import ActivationMode, PlanningMode
from spectralchain.planner.builder import LayerGraphBuilder
from spectralchain.planner.cost import ComplexityClass, CostConstants, cost_estimate
from spectralchain.planner.graph import LayerGraph, LayerKind, LayerNode, PlannedGraph
from spectralchain.planner.placement import count_transforms, place_transforms


def _chain(blocks: int, size: int = 64, kernel: int = 3) -> LayerGraph:
    builder = LayerGraphBuilder(size, size)
    for _ in range(blocks):
        builder.add_convolution(kernel, kernel).add_activation()
    return builder.build()


def test_01_fused_wraps_conv_activation_chain_once():
    plan = place_transforms(LayerGraph.from_symbols(["C", "A", "C", "A"]), "fused_spectral")
    assert plan.render() == "F -> C -> A -> C -> A -> F^-1"
    assert count_transforms(plan) == 2


def test_02_legacy_wraps_each_convolution():
    plan = place_transforms(LayerGraph.from_symbols(["C", "A", "C", "A"]), PlanningMode.LEGACY_SPECTRAL)
    assert plan.render() == "F -> C -> F^-1 -> A -> F -> C -> F^-1 -> A"
    assert count_transforms(plan) == 4


def test_03_single_activation_region():
    plan = place_transforms(LayerGraph.from_symbols(["A"]), "fused_spectral")
    assert plan.render() == "F -> A -> F^-1"


def test_04_naive_inserts_nothing():
    graph = LayerGraph.from_symbols(["C", "A", "P", "B", "C"])
    plan = place_transforms(graph, "naive")
    assert count_transforms(plan) == 0
    assert plan.nodes == graph.nodes


def test_05_boundary_splits_regions():
    plan = place_transforms(LayerGraph.from_symbols(["C", "A", "B", "C", "A"]), "fused_spectral")
    assert plan.render() == "F -> C -> A -> F^-1 -> B -> F -> C -> A -> F^-1"
    assert count_transforms(plan) == 4
    assert plan.regions() == [(0, 3), (5, 8)]


def test_06_relu_activation_closes_the_region():
    graph = (
        LayerGraphBuilder(8, 8)
        .add_convolution(3, 3)
        .add_activation(ActivationMode.TRUE_RELU_ROUNDTRIP)
        .add_convolution(3, 3)
        .build()
    )
    plan = place_transforms(graph, "fused_spectral")
    assert plan.render() == "F -> C -> F^-1 -> A -> F -> C -> F^-1"


@pytest.mark.parametrize("blocks", range(1, 9))
def test_07_fused_count_is_independent_of_depth(blocks):
    graph = _chain(blocks, size=16)
    assert count_transforms(place_transforms(graph, "fused_spectral")) == 2
    assert count_transforms(place_transforms(graph, "legacy_spectral")) == 2 * blocks


def test_08_invalid_mode_and_graph():
    with pytest.raises(InvalidPlanningModeError):
        place_transforms(LayerGraph.from_symbols(["C"]), "greedy")
    with pytest.raises(MalformedGraphError):
        place_transforms(["C"], "naive")


def test_09_malformed_graphs_are_rejected():
    with pytest.raises(MalformedGraphError):
        LayerGraph(())
    with pytest.raises(MalformedGraphError):
        LayerGraph.from_symbols(["C", "X"])
    with pytest.raises(MalformedGraphError):
        LayerGraph((LayerNode(LayerKind.FORWARD_TRANSFORM),))
    with pytest.raises(MalformedGraphError):
        LayerGraph(
            (
                LayerNode(LayerKind.CONVOLUTION, 4, 4, 3, 3),
                LayerNode(LayerKind.ACTIVATION, 4, 4),
            )
        )


def test_10_unpaired_transforms_are_rejected():
    f, c, inv = (
        LayerNode(LayerKind.FORWARD_TRANSFORM),
        LayerNode(LayerKind.CONVOLUTION),
        LayerNode(LayerKind.INVERSE_TRANSFORM),
    )
    with pytest.raises(MalformedGraphError):
        PlannedGraph((f, c), PlanningMode.FUSED_SPECTRAL)
    with pytest.raises(MalformedGraphError):
        PlannedGraph((f, f, c, inv), PlanningMode.FUSED_SPECTRAL)
    with pytest.raises(MalformedGraphError):
        PlannedGraph((c, inv), PlanningMode.FUSED_SPECTRAL)
    with pytest.raises(MalformedGraphError):
        PlannedGraph((f, LayerNode(LayerKind.BOUNDARY), inv), PlanningMode.FUSED_SPECTRAL)
    with pytest.raises(MalformedGraphError):
        PlannedGraph((f, c, inv), PlanningMode.NAIVE)


def test_11_builder_propagates_shapes():
    graph = (
        LayerGraphBuilder(32, 32)
        .add_convolution(5, 5, channels=2)
        .add_activation()
        .add_pooling(16, 16)
        .add_boundary()
        .build()
    )
    conv, act, pool, boundary = graph.nodes
    assert conv.output_shape == (36, 36)
    assert (act.height, act.width) == (36, 36)
    assert pool.output_shape == (16, 16)
    assert (boundary.height, boundary.width) == (16, 16)
    assert conv.channels == 2


def test_12_builder_rejects_invalid_steps():
    with pytest.raises(MalformedGraphError):
        LayerGraphBuilder(4, 4).add_pooling(5, 2)
    with pytest.raises(MalformedGraphError):
        LayerGraphBuilder(4, 4).add_convolution(0, 3)
    with pytest.raises(MalformedGraphError):
        LayerGraphBuilder(4, 4).add_activation("sigmoid")
    with pytest.raises(MalformedGraphError):
        LayerGraphBuilder(4, 4).build()
    with pytest.raises(MalformedGraphError):
        LayerGraphBuilder(0, 4)


def test_13_naive_convolution_cost():
    graph = LayerGraphBuilder(32, 32).add_convolution(3, 3).build()
    report = cost_estimate(place_transforms(graph, "naive"))
    (node,) = report.nodes
    assert node.complexity is ComplexityClass.DIRECT
    assert (node.n, node.k) == (1024, 9)
    assert report.estimated_flops == CostConstants().c_d * 9216
    assert report.transform_count == 0


def test_14_fused_classes():
    graph = LayerGraphBuilder(32, 32).add_convolution(1, 1).add_activation().build()
    report = cost_estimate(place_transforms(graph, "fused_spectral"))
    classes = [node.complexity for node in report.nodes]
    assert classes == [
        ComplexityClass.LINEARITHMIC,
        ComplexityClass.LINEAR,
        ComplexityClass.LINEAR,
        ComplexityClass.LINEARITHMIC,
    ]
    assert report.nodes[0].flops == pytest.approx(5.0 * 1024 * 10)
    activation = report.nodes[2]
    assert activation.embedded_complexity is ComplexityClass.LINEARITHMIC
    assert report.embedded_activation_flops > report.estimated_flops
    assert report.transform_count == 2


def test_15_fused_is_cheaper_than_legacy():
    graph = _chain(2, size=64)
    fused = cost_estimate(place_transforms(graph, "fused_spectral"))
    legacy = cost_estimate(place_transforms(graph, "legacy_spectral"))
    assert fused.estimated_flops < legacy.estimated_flops
    assert fused.embedded_activation_flops < legacy.embedded_activation_flops


@pytest.mark.parametrize("size", [4, 16, 33])
@pytest.mark.parametrize("blocks", [1, 3])
def test_16_fused_never_exceeds_legacy(size, blocks):
    graph = _chain(blocks, size=size)
    fused = cost_estimate(place_transforms(graph, "fused_spectral"))
    legacy = cost_estimate(place_transforms(graph, "legacy_spectral"))
    assert fused.estimated_flops <= legacy.estimated_flops


def test_17_pooling_and_boundary_costs():
    graph = LayerGraphBuilder(8, 8).add_pooling(2, 2).add_boundary().build()
    report = cost_estimate(place_transforms(graph, "naive"))
    pool, boundary = report.nodes
    assert pool.complexity is ComplexityClass.QUADRATIC
    assert pool.flops == 2.0 * 64 * 4
    assert boundary.flops == 0.0


def test_18_missing_shape_metadata():
    plan = place_transforms(LayerGraph.from_symbols(["C", "A"]), "fused_spectral")
    with pytest.raises(MissingShapeMetadataError):
        cost_estimate(plan)


def test_19_cost_report_round_trips():
    report = cost_estimate(place_transforms(_chain(2, size=16), "legacy_spectral"))
    again = type(report).model_validate_json(report.model_dump_json())
    assert again == report
