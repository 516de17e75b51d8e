import functools
import os
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

from spectralchain.core.exceptions import PipelineConfigurationError

MAX_WORKERS_ENV = "SPECTRALCHAIN_MAX_WORKERS"
FAST_PADDING_ENV = "SPECTRALCHAIN_FAST_PADDING"
LOG_FILE_ENV = "SPECTRALCHAIN_LOG_FILE"

_FALSE_WORDS = {"0", "false", "no", "off"}


class SpectralSettings(BaseModel):
    """
    Process-level runtime settings read from the environment.

    Attributes
    ----------
    `max_workers` : `int`
        Upper bound on FFT worker threads and on pipeline modes run concurrently.
    `fast_padding` : `bool`
        Round padded grids up to the next fast FFT length. Outputs are always
        trimmed back to the declared support, so this never changes results
        beyond floating-point rounding.
    `log_file` : `Optional[str]`
        When set, the CLI writes structured logs there.
    """

    max_workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    fast_padding: bool = True
    log_file: Optional[str] = None

    @classmethod
    def from_env(cls) -> "SpectralSettings":
        values = {}
        if os.environ.get(MAX_WORKERS_ENV):
            values["max_workers"] = os.environ[MAX_WORKERS_ENV]
        if os.environ.get(FAST_PADDING_ENV):
            values["fast_padding"] = (
                os.environ[FAST_PADDING_ENV].strip().lower() not in _FALSE_WORDS
            )
        if os.environ.get(LOG_FILE_ENV):
            values["log_file"] = os.environ[LOG_FILE_ENV]
        try:
            return cls(**values)
        except ValidationError as e:
            raise PipelineConfigurationError(f"invalid environment settings: {e}")


@functools.lru_cache(maxsize=1)
def current_settings() -> SpectralSettings:
    """
    Settings resolved from the environment once per process. Call
    `current_settings.cache_clear()` to pick up a changed environment.
    """
    return SpectralSettings.from_env()
