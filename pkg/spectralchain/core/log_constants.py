from enum import Enum


class LogConstants(str, Enum):
    # ──────────────── Meta Info ────────────────
    TIMESTAMP = "timestamp"  # ISO 8601 UTC timestamp
    LEVEL = "level"  # INFO / DEBUG / ERROR
    MESSAGE = "message"  # Human-readable description
    THREAD = "thread"  # Thread name (e.g., MainThread, asyncio_0)

    # ──────────────── Execution Context ────────────────
    RUN_ID = "run_id"  # UUID per pipeline execution
    PIPELINE_NAME = "pipeline_name"  # Config file stem or user-defined name
    MODE = "mode"  # naive / legacy_spectral / fused_spectral / oracle

    # ──────────────── Stage Metadata ────────────────
    EVENT_TYPE = "event_type"  # e.g. transform, stage, planner, block, harness
    STAGE_INDEX = "stage_index"  # Position of the node in the planned graph
    OP_KIND = "op_kind"  # convolution, activation, pooling, boundary, F, F^-1
    ACTION = "action"  # e.g., execute_start, execute_end, created, failed

    # ──────────────── Shapes ────────────────
    SHAPE = "shape"  # (height, width) of a spatial map
    PADDED_SHAPE = "padded_shape"  # (P, Q) of a spectral grid
    SUPPORT = "support"  # (p, q) support box
    CHANNELS = "channels"  # |W| for multichannel convolution

    # ──────────────── Transforms & Cost ────────────────
    TRANSFORM_KIND = "transform_kind"  # signal_forward / signal_inverse / kernel / embedded
    TRANSFORM_COUNT = "transform_count"  # Measured boundary transforms
    PREDICTED_COUNT = "predicted_count"  # Planner prediction
    ESTIMATED_FLOPS = "estimated_flops"  # Planner estimate

    # ──────────────── I/O & Performance ────────────────
    PATH = "path"  # File read or written
    DURATION_MS = "duration_ms"  # Execution time in milliseconds
    REPETITIONS = "repetitions"  # Benchmark repetitions
    SUCCESS = "success"  # True/False for status

    # ──────────────── External Context (Optional) ────────────────
    SEED = "seed"  # Synthetic data seed

    # ──────────────── Catch-all (Custom/Debug) ────────────────
    CUSTOM = "custom"  # Arbitrary JSON blob (for extra debug info)
