from typing import Optional, Sequence

from spectralchain.core.logger import SpectralLogger
from spectralchain.core.log_utils import wrap_constants
from spectralchain.core.log_constants import LogConstants as LC


class SpectralChainException(Exception):
    """
    Base exception class for all exceptions raised by spectralchain.
    It serves as the root of the custom exception hierarchy for this project.
    """

    pass


class DimensionError(SpectralChainException):
    """
    Raised when grid dimensions are invalid or incompatible: padding smaller than
    the source, mismatched spectra, or pooling to a larger size.
    """

    def __init__(self, operation: str, message: str):
        msg = f"{operation}: {message}"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "numeric",
                    LC.ACTION: "dimension_error",
                    LC.CUSTOM: {"operation": operation, "reason": message},
                },
            )
        )
        super().__init__(msg)
        self.operation = operation


class NonFiniteSampleError(SpectralChainException):
    """
    Raised when a spatial map handed to a transform contains NaN or infinity.
    """

    def __init__(self, operation: str, count: int):
        msg = f"{operation}: input contains {count} non-finite sample(s)"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "numeric",
                    LC.ACTION: "non_finite_input",
                    LC.CUSTOM: {"operation": operation, "count": count},
                },
            )
        )
        super().__init__(msg)
        self.count = count


class SymmetryError(SpectralChainException):
    """
    Raised when the inverse of a spectrum carries an imaginary residue above
    tolerance, i.e. the spectrum is not conjugate-symmetric.
    """

    def __init__(self, residue: float, tolerance: float):
        msg = (
            f"Inverse transform imaginary residue {residue:.3e} exceeds "
            f"tolerance {tolerance:.3e}; spectrum is not conjugate-symmetric"
        )
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "numeric",
                    LC.ACTION: "symmetry_violation",
                    LC.CUSTOM: {"residue": residue, "tolerance": tolerance},
                },
            )
        )
        super().__init__(msg)
        self.residue = residue
        self.tolerance = tolerance


class SupportBoundsError(SpectralChainException):
    """
    Raised when a support box does not fit the map or grid it is applied to.
    """

    def __init__(self, box: Sequence[int], limits: Sequence[int]):
        msg = f"Support box {tuple(box)} exceeds dimensions {tuple(limits)}"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "numeric",
                    LC.ACTION: "support_out_of_bounds",
                    LC.SUPPORT: list(box),
                    LC.SHAPE: list(limits),
                },
            )
        )
        super().__init__(msg)


class EmptyKernelSetError(SpectralChainException):
    """
    Raised when a multichannel convolution receives no kernels.
    """

    def __init__(self):
        msg = "Multichannel convolution requires at least one kernel"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{LC.EVENT_TYPE: "spectral", LC.ACTION: "empty_kernel_set"},
            )
        )
        super().__init__(msg)


class SpectralConfigurationError(SpectralChainException):
    """
    Raised when a spectral block configuration names an unknown mode.
    """

    def __init__(self, field: str, value: object, allowed: Sequence[str]):
        msg = f"Unknown {field} '{value}'; expected one of {list(allowed)}"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "block",
                    LC.ACTION: "config_error",
                    LC.CUSTOM: {"field": field, "value": str(value)},
                },
            )
        )
        super().__init__(msg)
        self.field = field


class InvalidPlanningModeError(SpectralChainException):
    """
    Raised when transform placement is requested for an unknown planning mode.
    """

    def __init__(self, mode: object):
        msg = f"Invalid planning mode '{mode}'"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "planner",
                    LC.ACTION: "invalid_mode",
                    LC.CUSTOM: {"mode": str(mode)},
                },
            )
        )
        super().__init__(msg)


class MalformedGraphError(SpectralChainException):
    """
    Raised when a layer graph or a planned graph violates its structural invariants.
    """

    def __init__(self, message: str, position: Optional[int] = None):
        msg = f"Malformed graph: {message}"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "planner",
                    LC.ACTION: "malformed_graph",
                    LC.STAGE_INDEX: position,
                    LC.CUSTOM: {"reason": message},
                },
            )
        )
        super().__init__(msg)
        self.position = position


class MissingShapeMetadataError(SpectralChainException):
    """
    Raised when cost estimation meets a node without the shape fields it needs.
    """

    def __init__(self, position: int, kind: str, field: str):
        msg = f"Node {position} ({kind}) is missing shape metadata '{field}'"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "planner",
                    LC.ACTION: "missing_shape_metadata",
                    LC.STAGE_INDEX: position,
                    LC.OP_KIND: kind,
                    LC.CUSTOM: {"field": field},
                },
            )
        )
        super().__init__(msg)
        self.position = position


class PipelineConfigurationError(SpectralChainException):
    """
    Raised when a pipeline config fails validation, a reference cannot be
    resolved, or a map file cannot be read.
    """

    def __init__(self, message: str, path: Optional[str] = None):
        msg = f"Pipeline configuration error: {message}"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "harness",
                    LC.ACTION: "config_error",
                    LC.PATH: path,
                    LC.CUSTOM: {"error": message},
                },
            )
        )
        super().__init__(msg)
        self.path = path


class StageExecutionError(SpectralChainException):
    """
    Raised when a pipeline stage fails. Carries the stage position and kind so
    numeric errors can be traced back to the op that produced them.
    """

    def __init__(self, stage_index: int, kind: str, message: str):
        msg = f"Execution failed at stage {stage_index} ({kind}): {message}"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "stage",
                    LC.ACTION: "execution_failed",
                    LC.STAGE_INDEX: stage_index,
                    LC.OP_KIND: kind,
                    LC.CUSTOM: {"reason": message},
                },
            )
        )
        super().__init__(msg)
        self.stage_index = stage_index
        self.kind = kind
        self.message = message


class EquivalenceCheckError(SpectralChainException):
    """
    Raised by --check runs when a measured result disagrees with its reference.
    """

    def __init__(self, check: str, detail: str):
        msg = f"Check '{check}' failed: {detail}"
        SpectralLogger.get().error(
            **wrap_constants(
                message=msg,
                **{
                    LC.EVENT_TYPE: "harness",
                    LC.ACTION: "check_failed",
                    LC.SUCCESS: False,
                    LC.CUSTOM: {"check": check, "detail": detail},
                },
            )
        )
        super().__init__(msg)
        self.check = check
