from typing import List, Optional, Union

from spectralchain.core.exceptions import MalformedGraphError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.modes import ActivationMode
from spectralchain.planner.graph import LayerGraph, LayerKind, LayerNode


class LayerGraphBuilder:
    """
    LayerGraphBuilder constructs a shape-annotated LayerGraph one op at a time.

    It tracks the map size flowing through the chain, so every node receives
    its input dimensions and invalid steps (such as pooling to a larger size)
    are rejected where they are added.
    """

    def __init__(self, height: int, width: int, name: Optional[str] = "pipeline"):
        if height < 1 or width < 1:
            raise MalformedGraphError(f"input must be at least 1x1, got {height}x{width}")
        self.name = name or "pipeline"
        self.nodes: List[LayerNode] = []
        self.height = height
        self.width = width

        SpectralLogger.get().info(
            **wrap_constants(
                message="LayerGraphBuilder initialized",
                **{
                    LC.EVENT_TYPE: "planner",
                    LC.ACTION: "builder_init",
                    LC.SHAPE: [height, width],
                    LC.CUSTOM: {"graph_name": self.name},
                },
            )
        )

    def _append(self, node: LayerNode) -> "LayerGraphBuilder":
        self.nodes.append(node)
        self.height, self.width = node.output_shape
        SpectralLogger.get().debug(
            **wrap_constants(
                message="Layer node added",
                level="DEBUG",
                **{
                    LC.EVENT_TYPE: "planner",
                    LC.ACTION: "node_added",
                    LC.STAGE_INDEX: len(self.nodes) - 1,
                    LC.OP_KIND: node.kind.value,
                    LC.SHAPE: [node.height, node.width],
                },
            )
        )
        return self

    def add_convolution(
        self,
        kernel_height: int,
        kernel_width: int,
        channels: int = 1,
        label: Optional[str] = None,
    ) -> "LayerGraphBuilder":
        """
        Adds a (multichannel) full linear convolution.

        Raises:
            MalformedGraphError: if the kernel is empty or no channel is given.
        """
        if kernel_height < 1 or kernel_width < 1 or channels < 1:
            raise MalformedGraphError(
                f"convolution needs a non-empty kernel and at least one channel, "
                f"got {kernel_height}x{kernel_width} x{channels}",
                len(self.nodes),
            )
        return self._append(
            LayerNode(
                LayerKind.CONVOLUTION,
                height=self.height,
                width=self.width,
                kernel_height=kernel_height,
                kernel_width=kernel_width,
                channels=channels,
                label=label,
            )
        )

    def add_activation(
        self,
        activation_mode: Union[ActivationMode, str] = ActivationMode.PAPER_MASK,
        label: Optional[str] = None,
    ) -> "LayerGraphBuilder":
        try:
            mode = ActivationMode(activation_mode)
        except ValueError:
            raise MalformedGraphError(
                f"unknown activation mode '{activation_mode}'", len(self.nodes)
            ) from None
        return self._append(
            LayerNode(
                LayerKind.ACTIVATION,
                height=self.height,
                width=self.width,
                activation_mode=mode,
                label=label,
            )
        )

    def add_pooling(
        self, out_height: int, out_width: int, label: Optional[str] = None
    ) -> "LayerGraphBuilder":
        """
        Adds spectral pooling to `out_height` x `out_width`.

        Raises:
            MalformedGraphError: if the output is empty or larger than the input.
        """
        if not (1 <= out_height <= self.height and 1 <= out_width <= self.width):
            raise MalformedGraphError(
                f"pooling to {out_height}x{out_width} from {self.height}x{self.width}",
                len(self.nodes),
            )
        return self._append(
            LayerNode(
                LayerKind.POOLING,
                height=self.height,
                width=self.width,
                out_height=out_height,
                out_width=out_width,
                label=label,
            )
        )

    def add_boundary(self, label: Optional[str] = None) -> "LayerGraphBuilder":
        """Adds a non-spectral layer, e.g. a fully connected stage."""
        return self._append(
            LayerNode(LayerKind.BOUNDARY, height=self.height, width=self.width, label=label)
        )

    def build(self) -> LayerGraph:
        """
        Returns the LayerGraph built so far.

        Raises:
            MalformedGraphError: if no node was added.
        """
        graph = LayerGraph(tuple(self.nodes), self.name)
        SpectralLogger.get().info(
            **wrap_constants(
                message="Layer graph built",
                **{
                    LC.EVENT_TYPE: "planner",
                    LC.ACTION: "graph_built",
                    LC.CUSTOM: {
                        "graph_name": self.name,
                        "nodes": [node.symbol for node in graph.nodes],
                        "output_shape": [self.height, self.width],
                    },
                },
            )
        )
        return graph
