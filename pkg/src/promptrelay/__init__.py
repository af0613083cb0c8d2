"""Temporal cross-attention routing with boundary-attention-decay penalties."""

from .attention import (
    AttentionInputs,
    AttentionOutput,
    attention,
    penalized_attention,
    prior_multiplier_oracle,
)
from .errors import (
    BoundsError,
    ConfigError,
    DegenerateRowError,
    DegenerateWindowError,
    EmptyScheduleError,
    FullyBlockedQueryError,
    GapError,
    InvariantError,
    LayoutError,
    OverlapError,
    RelayError,
    ScheduleError,
    ScheduleFormatError,
    ShapeError,
)
from .matrix import matmul, row_softmax
from .occupancy import (
    BoundaryReport,
    OccupancyTrace,
    boundary_report,
    occupancy,
    prior_occupancy,
    synth_inputs,
)
from .penalty import (
    AUTO,
    DecayCurve,
    Mode,
    PenaltyConfig,
    PenaltyMatrix,
    build_penalty_matrix,
    decay_curve,
    offset_penalty,
    penalty_value,
    sigma_for,
)
from .timeline import (
    GLOBAL,
    SegmentSchedule,
    TemporalSegment,
    TokenLayout,
    build_token_layout,
    load_schedule,
    validate_schedule,
)

__version__ = "0.1.0"
