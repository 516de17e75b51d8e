import json
import sys
import threading
from typing import Any, Optional

from spectralchain.core.log_constants import LogConstants as LC
from spectralchain.core.log_utils import wrap_constants


class NullSpectralLogger:
    """
    A no-op logger used when SpectralLogger is not initialized.
    Library code can always call `SpectralLogger.get().info(...)` without a guard.
    """

    def info(self, *args, **kwargs):
        pass

    def debug(self, *args, **kwargs):
        pass

    def error(self, *args, **kwargs):
        pass

    def warning(self, *args, **kwargs):
        pass


class SpectralLogger:
    """
    Singleton logger that emits structured JSON lines using wrap_constants().
    Entries go to a file when one is configured, otherwise to standard error so
    that CLI output on standard output stays machine-readable.
    """

    _instance: Optional["SpectralLogger"] = None

    def __init__(self, filename: Optional[str] = None):
        self.filename = filename
        self._lock = threading.Lock()
        if filename:
            self._file = open(filename, "a", encoding="utf-8")
        else:
            self._file = sys.stderr

    def _log(self, level: str, message: str, /, **fields: Any):
        # Fields may come prebuilt by wrap_constants(); the method's level wins.
        fields.pop(LC.LEVEL.value, None)
        message = fields.pop(LC.MESSAGE.value, message)
        log_entry = wrap_constants(message, level, **fields)
        line = json.dumps(log_entry, default=str) + "\n"
        # Stages may log from worker threads
        with self._lock:
            self._file.write(line)
            self._file.flush()

    def info(self, message: str = "", /, **kwargs: Any):
        """Logs a message with the INFO level."""
        self._log("INFO", message, **kwargs)

    def debug(self, message: str = "", /, **kwargs: Any):
        """Logs a message with the DEBUG level."""
        self._log("DEBUG", message, **kwargs)

    def warning(self, message: str = "", /, **kwargs: Any):
        """Logs a message with the WARNING level."""
        self._log("WARNING", message, **kwargs)

    def error(self, message: str = "", /, **kwargs: Any):
        """Logs a message with the ERROR level."""
        self._log("ERROR", message, **kwargs)

    def close(self):
        """Closes the log file. Standard error is left open."""
        if self._file is not sys.stderr:
            self._file.close()

    @classmethod
    def initialize(cls, filename: Optional[str] = None):
        """
        Initializes the singleton instance of SpectralLogger.
        If called multiple times, it overrides the previous instance.
        """
        if cls._instance is not None:
            cls._instance.close()
        cls._instance = cls(filename)

    @classmethod
    def reset(cls):
        """Drops the singleton so later calls fall back to the no-op logger."""
        if cls._instance is not None:
            cls._instance.close()
        cls._instance = None

    @classmethod
    def get(cls) -> "SpectralLogger":
        """
        Returns the singleton instance of SpectralLogger.
        If not initialized, returns the NullSpectralLogger.
        """
        return cls._instance if cls._instance else NullSpectralLogger()
