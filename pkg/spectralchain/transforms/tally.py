import contextlib
import contextvars
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional


class TransformKind(str, Enum):
    SIGNAL_FORWARD = "signal_forward"
    SIGNAL_INVERSE = "signal_inverse"
    KERNEL_FORWARD = "kernel_forward"
    EMBEDDED = "embedded"


@dataclass
class TransformTally:
    """
    Counts the transforms executed while the tally is active.

    Only signal transforms are comparable with the planner: kernel spectra are
    precomputable and embedded transforms are internal to `l_multiply` and
    `spectral_regrid`. All four counts are kept so the difference stays visible.
    """

    signal_forward: int = 0
    signal_inverse: int = 0
    kernel_forward: int = 0
    embedded: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, kind: TransformKind, count: int = 1) -> None:
        with self._lock:
            attribute = TransformKind(kind).value
            setattr(self, attribute, getattr(self, attribute) + count)

    @property
    def boundary_count(self) -> int:
        """Signal forward plus signal inverse transforms."""
        return self.signal_forward + self.signal_inverse

    def as_dict(self) -> dict:
        return {
            "signal_forward": self.signal_forward,
            "signal_inverse": self.signal_inverse,
            "kernel_forward": self.kernel_forward,
            "embedded": self.embedded,
        }


_active_tally: contextvars.ContextVar[Optional[TransformTally]] = (
    contextvars.ContextVar("transform_tally", default=None)
)


@contextlib.contextmanager
def transform_tally() -> Iterator[TransformTally]:
    """
    Activates a fresh `TransformTally` for the current context.

    Tallies nest: the inner one shadows the outer one until it exits.
    """
    tally = TransformTally()
    token = _active_tally.set(tally)
    try:
        yield tally
    finally:
        _active_tally.reset(token)


def record_transform(kind: TransformKind, count: int = 1) -> None:
    tally = _active_tally.get()
    if tally is not None:
        tally.record(kind, count)
