from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from spectralchain.core.exceptions import MalformedGraphError
from spectralchain.core.modes import ActivationMode, PlanningMode


class LayerKind(str, Enum):
    CONVOLUTION = "convolution"
    ACTIVATION = "activation"
    POOLING = "pooling"
    BOUNDARY = "boundary"
    FORWARD_TRANSFORM = "forward_transform"
    INVERSE_TRANSFORM = "inverse_transform"


SYMBOLS = {
    LayerKind.CONVOLUTION: "C",
    LayerKind.ACTIVATION: "A",
    LayerKind.POOLING: "P",
    LayerKind.BOUNDARY: "B",
    LayerKind.FORWARD_TRANSFORM: "F",
    LayerKind.INVERSE_TRANSFORM: "F^-1",
}
_KIND_BY_SYMBOL = {symbol: kind for kind, symbol in SYMBOLS.items()}

TRANSFORM_KINDS = frozenset(
    {LayerKind.FORWARD_TRANSFORM, LayerKind.INVERSE_TRANSFORM}
)


@dataclass(frozen=True)
class LayerNode:
    """
    One op in a network segment, with the shape metadata the cost model needs.

    Attributes
    ----------
    `kind` : `LayerKind`
        What the node computes.
    `height`, `width` : `Optional[int]`
        Dimensions of the map entering the node (n = height * width).
    `kernel_height`, `kernel_width` : `Optional[int]`
        Kernel dimensions for convolution nodes (k = kernel_height * kernel_width).
    `channels` : `int`
        Kernel count of a multichannel convolution.
    `out_height`, `out_width` : `Optional[int]`
        Output dimensions of a pooling node.
    `activation_mode` : `ActivationMode`
        Only `true_relu_roundtrip` activations are spatial-only.
    `label` : `Optional[str]`
        Free-form name used in reports.
    """

    kind: LayerKind
    height: Optional[int] = None
    width: Optional[int] = None
    kernel_height: Optional[int] = None
    kernel_width: Optional[int] = None
    channels: int = 1
    out_height: Optional[int] = None
    out_width: Optional[int] = None
    activation_mode: ActivationMode = ActivationMode.PAPER_MASK
    label: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", LayerKind(self.kind))
        object.__setattr__(self, "activation_mode", ActivationMode(self.activation_mode))

    @property
    def symbol(self) -> str:
        return SYMBOLS[self.kind]

    @property
    def is_transform(self) -> bool:
        return self.kind in TRANSFORM_KINDS

    @property
    def spectral_compatible(self) -> bool:
        """Whether the node may run between a forward and an inverse transform."""
        if self.kind in (LayerKind.CONVOLUTION, LayerKind.POOLING):
            return True
        if self.kind is LayerKind.ACTIVATION:
            return self.activation_mode is not ActivationMode.TRUE_RELU_ROUNDTRIP
        return False

    @property
    def has_shape(self) -> bool:
        return self.height is not None and self.width is not None

    @property
    def n(self) -> Optional[int]:
        return self.height * self.width if self.has_shape else None

    @property
    def k(self) -> Optional[int]:
        if self.kernel_height is None or self.kernel_width is None:
            return None
        return self.kernel_height * self.kernel_width

    @property
    def output_shape(self) -> Optional[Tuple[int, int]]:
        if not self.has_shape:
            return None
        if self.kind is LayerKind.CONVOLUTION:
            if self.k is None:
                return None
            return (
                self.height + self.kernel_height - 1,
                self.width + self.kernel_width - 1,
            )
        if self.kind is LayerKind.POOLING:
            if self.out_height is None or self.out_width is None:
                return None
            return (self.out_height, self.out_width)
        return (self.height, self.width)


@dataclass(frozen=True)
class LayerGraph:
    """
    An ordered, non-empty chain of layer nodes describing a network segment.

    Transform nodes are not allowed here; they are inserted by the planner.
    When consecutive nodes both carry shapes, each node's input must equal
    its predecessor's output.
    """

    nodes: Tuple[LayerNode, ...]
    name: str = "pipeline"

    def __post_init__(self):
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if not nodes:
            raise MalformedGraphError("layer graph must contain at least one node")
        for position, node in enumerate(nodes):
            if not isinstance(node, LayerNode):
                raise MalformedGraphError(
                    f"expected LayerNode, got {type(node).__name__}", position
                )
            if node.is_transform:
                raise MalformedGraphError(
                    "transform nodes are placed by the planner, not declared", position
                )
            if position == 0:
                continue
            previous = nodes[position - 1].output_shape
            if previous is not None and node.has_shape:
                if previous != (node.height, node.width):
                    raise MalformedGraphError(
                        f"node expects {node.height}x{node.width} input but the "
                        f"previous node produces {previous[0]}x{previous[1]}",
                        position,
                    )

    @classmethod
    def from_symbols(cls, symbols: Iterable[str], name: str = "pipeline") -> "LayerGraph":
        """
        Builds a shape-less graph from symbols such as `["C", "A", "B"]`.
        """
        nodes = []
        for position, symbol in enumerate(symbols):
            kind = _KIND_BY_SYMBOL.get(symbol)
            if kind is None:
                raise MalformedGraphError(f"unknown node symbol '{symbol}'", position)
            nodes.append(LayerNode(kind))
        return cls(tuple(nodes), name)

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"LayerGraph({' -> '.join(node.symbol for node in self.nodes)})"


@dataclass(frozen=True)
class PlannedGraph:
    """
    A layer graph with forward and inverse transform nodes placed around its
    spectral regions.

    Attributes
    ----------
    `nodes` : `Tuple[LayerNode, ...]`
        Layer nodes interleaved with transform nodes.
    `mode` : `PlanningMode`
        The placement mode that produced the plan.
    `name` : `str`
        Name of the originating graph.

    Raises
    ------
    `MalformedGraphError`
        If transforms are unpaired or nested, a region is empty, or a
        spatial-only node sits inside a region.
    """

    nodes: Tuple[LayerNode, ...]
    mode: PlanningMode
    name: str = "pipeline"

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "mode", PlanningMode(self.mode))
        self.regions()

    def regions(self) -> List[Tuple[int, int]]:
        """
        Returns `(open, close)` positions of every forward/inverse pair,
        validating the pairing on the way.
        """
        regions = []
        opened: Optional[int] = None
        for position, node in enumerate(self.nodes):
            if node.kind is LayerKind.FORWARD_TRANSFORM:
                if opened is not None:
                    raise MalformedGraphError("nested forward transform", position)
                opened = position
            elif node.kind is LayerKind.INVERSE_TRANSFORM:
                if opened is None:
                    raise MalformedGraphError("inverse transform without a forward", position)
                if position == opened + 1:
                    raise MalformedGraphError("empty spectral region", position)
                regions.append((opened, position))
                opened = None
            elif opened is not None and not node.spectral_compatible:
                raise MalformedGraphError(
                    f"{node.kind.value} node cannot run in the frequency domain", position
                )
        if opened is not None:
            raise MalformedGraphError("forward transform is never closed", opened)
        if self.mode is PlanningMode.NAIVE and regions:
            raise MalformedGraphError("naive plans contain no transforms")
        return regions

    @property
    def transform_count(self) -> int:
        return sum(1 for node in self.nodes if node.is_transform)

    def render(self) -> str:
        return " -> ".join(node.symbol for node in self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"PlannedGraph({self.mode.value}: {self.render()})"
