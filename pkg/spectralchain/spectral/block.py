import time
from dataclasses import dataclass
from typing import Optional, Union

from spectralchain.core.exceptions import SpectralConfigurationError
from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.modes import (
    AccumulationMode,
    ActivationMode,
    LMultiplyMethod,
    coerce_mode,
)
from spectralchain.core.settings import current_settings
from spectralchain.oracle.spatial import relu_pointwise
from spectralchain.oracle.support import SupportBox
from spectralchain.spectral.kernels import (
    KernelSet,
    KernelSpectrumCache,
    default_kernel_cache,
)
from spectralchain.spectral.ops import (
    multichannel_spectral_conv,
    spectral_activation,
    spectral_conv,
    support_bounds,
)
from spectralchain.transforms.fourier import (
    fast_length,
    forward_transform,
    inverse_transform,
)
from spectralchain.transforms.maps import SpatialMap, SpectralMap


def _config_error(field: str, enum_cls):
    return lambda value: SpectralConfigurationError(
        field, value, [m.value for m in enum_cls]
    )


@dataclass(frozen=True)
class SpectralBlockConfig:
    """
    Interpretation choices for one spectral convolution-with-activation block.

    Attributes
    ----------
    `activation_mode` : `ActivationMode`
        `paper_mask` masks to the support box in the frequency domain,
        `true_relu_roundtrip` leaves the frequency domain to apply max(0, x),
        `none` skips activation.
    `accumulation_mode` : `AccumulationMode`
        `sum_then_activate` sums every channel and activates once.
        `as_written` follows the loop body literally: each iteration overwrites
        the accumulator with one masked channel, so only the last channel
        survives.
    `fast_padding` : `Optional[bool]`
        Round the padded grid up to a fast FFT length; `None` defers to
        `SpectralSettings`.
    `l_multiply_method` : `LMultiplyMethod`
        How the activation's circular convolution is evaluated.
    """

    activation_mode: ActivationMode = ActivationMode.PAPER_MASK
    accumulation_mode: AccumulationMode = AccumulationMode.SUM_THEN_ACTIVATE
    fast_padding: Optional[bool] = None
    l_multiply_method: LMultiplyMethod = LMultiplyMethod.FFT

    def __post_init__(self):
        for field, enum_cls in (
            ("activation_mode", ActivationMode),
            ("accumulation_mode", AccumulationMode),
            ("l_multiply_method", LMultiplyMethod),
        ):
            value = coerce_mode(
                enum_cls, getattr(self, field), _config_error(field, enum_cls)
            )
            object.__setattr__(self, field, value)

    def padded_grid(self, box: SupportBox) -> tuple:
        fast = (
            current_settings().fast_padding
            if self.fast_padding is None
            else self.fast_padding
        )
        if fast:
            return (fast_length(box.p), fast_length(box.q))
        return box.as_tuple()


def activate(
    c_spec: SpectralMap,
    box: SupportBox,
    mode: Union[ActivationMode, str],
    method: LMultiplyMethod = LMultiplyMethod.FFT,
) -> SpectralMap:
    """Applies one activation to a convolution spectrum whose support is `box`."""
    mode = coerce_mode(ActivationMode, mode, _config_error("activation_mode", ActivationMode))
    if mode is ActivationMode.PAPER_MASK:
        return spectral_activation(c_spec, box, method)
    if mode is ActivationMode.TRUE_RELU_ROUNDTRIP:
        rectified = relu_pointwise(inverse_transform(c_spec)).window(box.p, box.q)
        return forward_transform(rectified, c_spec.padded_height, c_spec.padded_width)
    return c_spec


def run_spectral_block(
    image: SpatialMap,
    kernels: KernelSet,
    config: Optional[SpectralBlockConfig] = None,
    cache: Optional[KernelSpectrumCache] = None,
) -> SpatialMap:
    """
    Spectral convolution with activation.

    Pads to the support of the convolution, transforms the image once, takes
    kernel spectra from the cache, accumulates and activates in the frequency
    domain, and transforms back once. With `paper_mask` the block performs
    exactly one signal forward and one signal inverse transform whatever the
    channel count.

    Parameters
    ----------
    `image` : `SpatialMap`
        The input map x_in.
    `kernels` : `KernelSet`
        The filters w_i.
    `config` : `Optional[SpectralBlockConfig]`
        Interpretation choices; defaults to `SpectralBlockConfig()`.
    `cache` : `Optional[KernelSpectrumCache]`
        Kernel spectrum cache; defaults to the process-wide cache.

    Returns
    -------
    `SpatialMap`
        The activated convolution, `p` x `q` where (p, q) is the support box.
    """
    config = config if config is not None else SpectralBlockConfig()
    if not isinstance(config, SpectralBlockConfig):
        raise SpectralConfigurationError("config", type(config).__name__, ["SpectralBlockConfig"])
    cache = cache if cache is not None else default_kernel_cache
    log = SpectralLogger.get()
    started = time.perf_counter()

    box = support_bounds(image.height, image.width, kernels.kernel_height, kernels.kernel_width)
    pad_height, pad_width = config.padded_grid(box)

    log.info(
        **wrap_constants(
            message="Spectral block started",
            **{
                LC.EVENT_TYPE: "block",
                LC.ACTION: "execute_start",
                LC.SHAPE: [image.height, image.width],
                LC.PADDED_SHAPE: [pad_height, pad_width],
                LC.SUPPORT: list(box.as_tuple()),
                LC.CHANNELS: kernels.channel_count,
                LC.CUSTOM: {
                    "activation_mode": config.activation_mode.value,
                    "accumulation_mode": config.accumulation_mode.value,
                },
            },
        )
    )

    image_spec = forward_transform(image, pad_height, pad_width)
    kernel_specs = cache.spectra(kernels, pad_height, pad_width)

    if config.accumulation_mode is AccumulationMode.SUM_THEN_ACTIVATE:
        c_spec = multichannel_spectral_conv(image_spec, kernel_specs)
        c_spec = activate(c_spec, box, config.activation_mode, config.l_multiply_method)
    else:
        if kernels.channel_count > 1:
            log.warning(
                **wrap_constants(
                    message="as_written accumulation keeps only the last channel",
                    level="WARNING",
                    **{
                        LC.EVENT_TYPE: "block",
                        LC.ACTION: "channels_overwritten",
                        LC.CHANNELS: kernels.channel_count,
                    },
                )
            )
        for kernel_spec in kernel_specs:
            c_spec = spectral_conv(image_spec, kernel_spec)
            c_spec = activate(c_spec, box, config.activation_mode, config.l_multiply_method)

    result = inverse_transform(c_spec).window(box.p, box.q)

    log.info(
        **wrap_constants(
            message="Spectral block completed",
            **{
                LC.EVENT_TYPE: "block",
                LC.ACTION: "execute_end",
                LC.SHAPE: [result.height, result.width],
                LC.DURATION_MS: round((time.perf_counter() - started) * 1000.0, 3),
            },
        )
    )
    return result
