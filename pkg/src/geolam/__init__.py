"""Train tracks, realized edge-path languages of laminations, and their metrics."""

from .assets import BUNDLED, load_asset
from .errors import (
    ContractViolation,
    DepthLimitError,
    EnumerationLimitError,
    GeolamError,
    TrackStructureError,
)
from .lamination import (
    ExplicitLanguage,
    Lamination,
    PeriodicLamination,
    RealizedPathSet,
    equal_up_to_depth,
    from_multicurve,
)
from .metrics import check_triangle_dlog, check_ultrametric, d_log_transform, d_theta
from .torus import Slope, farey_slopes, parse_slope, slope_to_lamination
from .track import (
    DirectedEdge,
    TrainTrack,
    complementary_regions,
    enumerate_paths,
    euler_characteristic,
    load_track,
    multicurve_from_weights,
    parse_track,
    validate,
    weight_space_dimension,
)

__version__ = "0.1.0"
