"""Two-box vertical-mixing model with a smooth switching zone.

A convection/diffusion box model whose exchange coefficient switches
smoothly (steepness 1/epsilon) across a density threshold. The package
covers direct simulation, the piecewise-smooth limit epsilon = 0,
equilibrium and two-parameter bifurcation continuation, periodic-orbit
collocation with boundary tangency detection, and (mu, eta)-plane
oscillation atlases.
"""

from .atlas import (
    DriftRun,
    OscillationClass,
    ScanResult,
    bracket_cutoff,
    classify,
    hopf_window,
    region_scan,
    run_drift,
    window_signature,
)
from .continuation import (
    BranchPoint,
    CurvePoint,
    EquilibriumBranch,
    ParamCurve,
    SpecialPoint,
    bifurcation_diagram,
    continue_equilibria,
    fold_curve,
    hopf_curve,
    intersect_curves,
    snic_probe,
)
from .dynamics import (
    EquilibriumAttractor,
    PeriodicAttractor,
    Trajectory,
    TrajectoryEvent,
    ZoneDurations,
    find_attractor,
    phase_durations,
    simulate,
)
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    EscapeError,
    MeshLimitError,
    NoCrossingError,
    NonSmoothError,
    ScanWindowError,
    StepUnderflowError,
    TangentialContactError,
    TooFewCyclesError,
    WelanderError,
)
from .filippov import (
    ReturnMapPoint,
    filippov_simulate,
    return_map,
    return_map_fixed_point,
)
from .model import (
    Equilibrium,
    ModelParams,
    State,
    SwitchingZone,
    classify_state,
    curvature_root_function,
    exchange,
    exchange_deriv,
    find_equilibria,
    jacobian,
    rhs,
    switching_zone,
)
from .orbits import (
    AnchoredOrbit,
    PeriodicOrbit,
    TangencyPoint,
    anchor_phase,
    detect_tangency,
    solve_periodic_bvp,
    tangency_curve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
