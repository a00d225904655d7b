"""Average-SINR analysis and IRS-user association for distributed-IRS MISO downlinks."""

from .analytic import (
    AvgSinrReport,
    CorrelationBlocks,
    CorrelationMatrix,
    SinrEvaluator,
    avg_sinr,
    correlation_matrix,
    correlation_stack,
    cross_irs_term,
    cross_term,
    fourth_moment,
    mean_sq_gain,
    sigma_v,
    sinr_bounds,
)
from .assoc import (
    AssociationMatrix,
    CodebookBudgetError,
    SolveResult,
    codebook,
    exhaustive_search,
    nearest_rule,
    random_assignment,
    successive_refinement,
)
from .beamform import PowerAllocation, equal_power, mrt_precoders, optimal_reflect_vector
from .channel import (
    ChannelSet,
    LosChannel,
    RngStream,
    cascaded_channel,
    draw_channels,
    effective_channel,
    los_channels,
    ula_steering,
    upa_steering,
)
from .montecarlo import McConfig, McEstimate, instantaneous_sinr, mc_average_sinr, mc_correlation
from .scenario import (
    ArcLayout,
    ArrayGeometry,
    ConfigurationError,
    DeploymentScenario,
    LinkLosses,
    PathLossModel,
    SystemDims,
    build_arc_scenario,
    centralize_irs,
    path_gain,
    scenario_from_dict,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
