"""
Indoor mmWave network simulation: geometry, antennas, body blockage,
channel and the Monte Carlo engine
"""
from .geometry import (
    Venue,
    Point2,
    Deployment,
    generate_hex_grid,
    hex_cell_area,
    sample_uniform_point,
    horizontal_distance,
    euclidean_3d_distance,
    azimuth
)
from .antenna import (
    AntennaPattern,
    BeamState,
    main_lobe_gain,
    ap_illumination_radius,
    ap_gain,
    ue_bound_distance,
    ue_gain,
    ue_gain_as_serving
)
from .quadrature import adaptive_simpson, QuadratureError
from .blockage import (
    BodyGeometry,
    Body,
    BlockageState,
    BlockageMode,
    BlockageModel,
    shadow_angle,
    inverse_shadow_angle,
    free_zone_radius,
    is_blocked_geometric,
    distance_pdf_square,
    distance_cdf_square,
    shadow_angle_pdf,
    p_self,
    p_random_one,
    p_blocked,
    p_blocked_array,
    sample_blockage_state,
    RandomBodyTable,
    BodyScene,
    sample_body_scene,
    scene_blocks
)
from .channel import (
    StateParams,
    ChannelParams,
    RadioConfig,
    LinkSample,
    CHANNEL_ROWS,
    path_gain,
    sample_shadowing,
    sample_fading,
    noise_power_mw,
    received_power,
    sinr
)
from .reporting import (
    MetricsRow,
    MetricsTable,
    aggregate_metrics,
    optimal_configurations,
    tradeoff_summary,
    feasible_deployments,
    profile_extrema,
    spearman_trend
)
from .engine import (
    SCENARIOS,
    UePlacement,
    SimulationConfig,
    TrialResult,
    apply_scenario,
    run_trial,
    run_batch,
    sweep,
    validate_blockage
)

__all__ = [
    'Venue', 'Point2', 'Deployment', 'generate_hex_grid', 'hex_cell_area',
    'sample_uniform_point', 'horizontal_distance', 'euclidean_3d_distance', 'azimuth',
    'AntennaPattern', 'BeamState', 'main_lobe_gain', 'ap_illumination_radius', 'ap_gain',
    'ue_bound_distance', 'ue_gain', 'ue_gain_as_serving',
    'adaptive_simpson', 'QuadratureError',
    'BodyGeometry', 'Body', 'BlockageState', 'BlockageMode', 'BlockageModel',
    'shadow_angle', 'inverse_shadow_angle', 'free_zone_radius', 'is_blocked_geometric',
    'distance_pdf_square', 'distance_cdf_square', 'shadow_angle_pdf',
    'p_self', 'p_random_one', 'p_blocked', 'p_blocked_array', 'sample_blockage_state',
    'RandomBodyTable', 'BodyScene', 'sample_body_scene', 'scene_blocks',
    'StateParams', 'ChannelParams', 'RadioConfig', 'LinkSample', 'CHANNEL_ROWS',
    'path_gain', 'sample_shadowing', 'sample_fading', 'noise_power_mw', 'received_power', 'sinr',
    'MetricsRow', 'MetricsTable', 'aggregate_metrics', 'optimal_configurations',
    'tradeoff_summary', 'feasible_deployments', 'profile_extrema', 'spearman_trend',
    'SCENARIOS', 'UePlacement', 'SimulationConfig', 'TrialResult', 'apply_scenario',
    'run_trial', 'run_batch', 'sweep', 'validate_blockage'
]
