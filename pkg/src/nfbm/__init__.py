"""Near-field MIMO link-level simulator for beamspace modulation studies."""

__version__ = "0.1.0"

from .geometry import ArrayGeometry, aperture, build_ula, fraunhofer_distance  # noqa: F401
from .channel import (  # noqa: F401
    ChannelMatrix,
    awgn_sample,
    planewave_channel,
    spherical_los_channel,
)
from .dof import DofProfile, analytic_dof, effective_dof, threshold_distance  # noqa: F401
from .beamspace import (  # noqa: F401
    BeamSubset,
    BeamspaceDecomposition,
    combination_capacity,
    decompose,
    enumerate_subsets,
    receive_combiner,
    waterfill,
)
from .schemes import (  # noqa: F401
    ActivationDistribution,
    SignalSet,
    bbs_rate,
    bm_rate,
    build_signal_set,
    optimal_activation,
)
from .mc import SimResult, estimate_se_gap, ml_detect, run_ser  # noqa: F401
