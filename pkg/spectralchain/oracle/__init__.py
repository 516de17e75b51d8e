from spectralchain.oracle.support import SupportBox
from spectralchain.oracle.spatial import (
    circular_conv2,
    direct_conv2,
    naive_dft2,
    position_mask,
    relu_pointwise,
    truncation_lowpass_oracle,
)

__all__ = [
    "SupportBox",
    "circular_conv2",
    "direct_conv2",
    "naive_dft2",
    "position_mask",
    "relu_pointwise",
    "truncation_lowpass_oracle",
]
