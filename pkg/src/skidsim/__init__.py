"""skidsim: slip-affected skid-steer wheel dynamics with an adaptive RBF
velocity controller, a PID baseline, trace metrics, and a teleoperation
service."""

from .controllers import (
    ControllerGains,
    ControlPreset,
    PidGains,
    PRESETS,
    adaptive_rate,
    control_law,
    controller_step,
    get_preset,
    pid_step,
)
from .dynamics import (
    DisturbanceProfile,
    DomainError,
    IDEAL_TERRAIN,
    PlantFault,
    PlantParams,
    PlantState,
    TERRAINS,
    TerrainModel,
    advance_slip,
    get_terrain,
    plant_derivative,
    resample_slip,
    slip_multiplier,
    slip_ratio,
)
from .engine import (
    Pose,
    ScenarioConfig,
    SchemaError,
    SimTrace,
    TRACE_COLUMNS,
    load_scenario,
    load_trace,
    pose_update,
    run_scenario,
    run_sweep,
    scenario_from_dict,
)
from .metrics import (
    ExpEnvelope,
    StepMetrics,
    aggregate_sweep,
    compare_controllers,
    exp_envelope_fit,
    step_metrics,
    theoretical_rate,
)
from .rbf import RbfNetwork, basis_eval, basis_gradient, basis_norm, init_centers
from .reference import (
    ReferenceSample,
    TeleopReferenceSource,
    profile_from_config,
    reference_at,
)

__version__ = "0.1.0"
