from enum import Enum
from typing import Callable, Type, TypeVar

E = TypeVar("E", bound=Enum)


class ActivationMode(str, Enum):
    PAPER_MASK = "paper_mask"  # position mask applied in the frequency domain
    TRUE_RELU_ROUNDTRIP = "true_relu_roundtrip"  # inverse, max(0, x), forward
    NONE = "none"


class AccumulationMode(str, Enum):
    SUM_THEN_ACTIVATE = "sum_then_activate"
    AS_WRITTEN = "as_written"


class PlanningMode(str, Enum):
    NAIVE = "naive"
    LEGACY_SPECTRAL = "legacy_spectral"
    FUSED_SPECTRAL = "fused_spectral"


class LMultiplyMethod(str, Enum):
    FFT = "fft"  # embedded transforms, O(n log n)
    DIRECT = "direct"  # circular convolution of the spectra, O(n^2)


def coerce_mode(
    enum_cls: Type[E], value: object, on_error: Callable[[object], Exception]
) -> E:
    """Returns `value` as a member of `enum_cls` or raises `on_error(value)`."""
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        raise on_error(value) from None
