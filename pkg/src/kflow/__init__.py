"""Flow of homogeneous 3-geometries driven by the fourth-order K tensor."""

from .milnor import (
    BIANCHI_CLASSES,
    FrameDiagonal,
    MilnorMetric,
    StructureConstants,
    cotton_star_frame,
    frame_to_coordinate,
    h_frame,
    j_frame,
    k_frame,
    k_trace,
    ricci_frame,
    scalar_curvature,
    schouten_frame,
)

__version__ = "0.1.0"
