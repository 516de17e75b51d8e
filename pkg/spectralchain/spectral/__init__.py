from spectralchain.spectral.ops import (
    heaviside_spectrum,
    l_multiply,
    multichannel_spectral_conv,
    spectral_activation,
    spectral_conv,
    spectral_pool,
    spectral_regrid,
    support_bounds,
)
from spectralchain.spectral.kernels import (
    KernelSet,
    KernelSpectrumCache,
    default_kernel_cache,
)
from spectralchain.spectral.block import (
    SpectralBlockConfig,
    activate,
    run_spectral_block,
)

__all__ = [
    "KernelSet",
    "KernelSpectrumCache",
    "SpectralBlockConfig",
    "activate",
    "default_kernel_cache",
    "heaviside_spectrum",
    "l_multiply",
    "multichannel_spectral_conv",
    "run_spectral_block",
    "spectral_activation",
    "spectral_conv",
    "spectral_pool",
    "spectral_regrid",
    "support_bounds",
]
