"""Temporal digital topology over video frame sequences.

Adjacency and proximity predicates on grayscale lattices, connectedness and
continuity checks, derivative-based foreground segmentation, region tracking,
and value-class persistence diagrams, with a property-check harness and a
CLI (``tdt``).
"""

__version__ = "0.1.0"

from .core import (
    BLACK,
    WHITE,
    Frame,
    HalfPoint,
    Region,
    TimeStamp,
    Video,
    boundary_corners,
    partial_derivative,
    value_at,
    voxels_adjacent,
)
from .topology import (
    AdjacencyScheme,
    ContinuityVerdict,
    OneCycle,
    cat_number,
    check_kappa_continuity,
    connected_components,
    is_connected,
    jordan_partition,
    near_discrete,
    subimages_adjacent,
)
from .temporal import (
    DEFAULT_BINS,
    PersistenceInterval,
    SegmentationMask,
    TrackedRegion,
    ValueBin,
    check_temporal_continuity,
    cross_frame_adjacent,
    frame_value_adjacent,
    gap_distance,
    lifespan,
    lifespans_overlap,
    location_value_adjacent,
    map_track,
    parse_bins,
    persistence_diagram,
    point_across_adjacent,
    segment,
    temporally_adjacent,
    temporally_metric_near,
    temporally_near,
    temporally_video_frame_connected,
    track,
    video_frame_connected,
    voxel_value_adjacent,
)
