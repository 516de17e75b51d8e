from dataclasses import dataclass

from spectralchain.core.exceptions import DimensionError


@dataclass(frozen=True)
class SupportBox:
    """
    Finite support bounds (p, q) of a convolution output.

    The kept region is the index window `[0, p) x [0, q)`: samples are treated
    as interior points of the open box `p > x > 0, q > y > 0`, so a box equal to
    the map's size keeps every pixel.

    Attributes
    ----------
    `p` : `int`
        Height bound in pixels.
    `q` : `int`
        Width bound in pixels.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise DimensionError(
                "SupportBox", f"bounds must be positive, got ({self.p}, {self.q})"
            )

    def fits(self, height: int, width: int) -> bool:
        return self.p <= height and self.q <= width

    def as_tuple(self) -> tuple:
        return (self.p, self.q)
