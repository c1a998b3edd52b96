"""System-level Monte Carlo simulator for cellular networks with aerial UEs."""

__version__ = "0.1.0"

from .antenna import (ArrayGeometry, BeamWeights, BEAMFORMING_UPA,
                      FIXED_PATTERN_ULA, downtilt_weights, element_gain_db,
                      fixed_pattern_gain_db, mrt_weights, steering_vector)
from .channel import (ChannelParams, ChannelVector, LargeScaleState,
                      draw_channel_vector, draw_large_scale, los_probability,
                      noise_power_dbm, pathloss_db, shadowing_sigma_db)
from .experiments import (CncResult, ExperimentConfig, SharedResult,
                          default_config, ecdf, percentile, run_cnc, run_shared)
from .geometry import (CellDescriptor, DirectionAngles, NetworkLayout, UeKind,
                       UeState, build_layout, distances, drop_ues, local_angles,
                       nearest_facing_cells)
from .link import (LinkMetrics, PowerConfig, associate, noma_pair_rates,
                   oma_pair_rates, rsrp_bf, rsrp_fixed, shannon_rate,
                   sinr_shared)
