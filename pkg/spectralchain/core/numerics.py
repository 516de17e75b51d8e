import numpy as np

# Double-precision tolerance shared by every module.
RELATIVE_TOLERANCE = 1e-10


def relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    """
    Max-abs difference scaled by max(1, max|expected|).

    Returns `inf` when the shapes disagree so callers can treat it as a failure.
    """
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    if actual.shape != expected.shape:
        return float("inf")
    if actual.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(expected))))
    return float(np.max(np.abs(actual - expected))) / scale
