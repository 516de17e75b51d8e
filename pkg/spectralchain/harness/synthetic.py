from spectralchain.core.exceptions import PipelineConfigurationError
from spectralchain.transforms.maps import SpatialMap

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
LCG_MODULUS = 1 << 64

_MANTISSA_SCALE = float(1 << 53)


class SyntheticStream:
    """
    Seeded stream of uniform reals from a 64-bit linear congruential generator.

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64, and
    each sample takes the top 53 bits of the new state as a fraction in [0, 1)
    scaled to [low, high). The stream is fully specified, so any implementation
    seeded with the same value reproduces the same maps.
    """

    def __init__(self, seed: int):
        if seed < 0 or seed >= LCG_MODULUS:
            raise PipelineConfigurationError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.state = int(seed)

    def next_uint64(self) -> int:
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) % LCG_MODULUS
        return self.state

    def uniform(self, low: float = -1.0, high: float = 1.0) -> float:
        fraction = (self.next_uint64() >> 11) / _MANTISSA_SCALE
        return low + (high - low) * fraction

    def grid(
        self, height: int, width: int, low: float = -1.0, high: float = 1.0
    ) -> SpatialMap:
        """Draws a `height` x `width` map in row-major order."""
        rows = [[self.uniform(low, high) for _ in range(width)] for _ in range(height)]
        return SpatialMap.from_rows(rows)
