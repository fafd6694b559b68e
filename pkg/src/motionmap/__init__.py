"""motionmap: 6-DOF device-to-object motion mapping.

Core pieces: a quaternion/vector kernel (geometry), mapping sessions that
turn tracked device motion into object motion (engine, gains), trace text
tooling (traces, replay), an empirical property lab (compliance, report),
and an HTTP/websocket service with a thin CLI on top.
"""

from .geometry import (
    Channel,
    IDENTITY,
    IDENTITY_POSE,
    Pose,
    UnitQuat,
    Vec3,
    ZERO_VEC,
    compose,
    conjugate_rot,
    from_axis_angle,
    inverse,
    pose_dist,
    quat_pow,
    rotate_vec,
    slerp,
    unit,
)
from .gains import (
    ConstantGain,
    DeadbandGain,
    DistanceGain,
    GainSpec,
    ScheduleGain,
    SpeedGain,
    format_gain_spec,
    parse_gain_spec,
)
from .engine import (
    Displacement,
    MappingConfig,
    MappingKind,
    Session,
    TrackerSample,
    apply_gain,
    disengage,
    engage,
    engage_config,
    eval_gain,
    parse_mapping_kind,
    step,
    step_relative_incremental,
    to_screen_space,
)
from .errors import ConfigError, EngineError, TraceError
from .traces import (
    Trace,
    TraceWarning,
    gen_trajectory,
    incoming_quat,
    parse_trace,
    random_unit_quat,
    random_unit_vec,
    serialize_trace,
    trace_from_poses,
)
from .replay import ReplayResult, TraceMetrics, engaged_segments, object_trace, replay
from .compliance import (
    ComplianceReport,
    Counterexample,
    StepVerdict,
    check_trace,
    classify,
    directional_verdicts,
    k_minus1_equivalence,
    nulling_check,
    rerun_counterexample,
    step_verdict,
    transitivity_check,
)
from .report import (
    parse_reports,
    render_check_report,
    render_classify_report,
    render_classify_summary,
)

__version__ = "0.1.0"
