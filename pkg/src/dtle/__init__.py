"""Reversible data hiding by double-peak two-layer prediction-error expansion on the HSB plane."""

from .bitplane import PlanePair, decompose, recompose
from .codec import (
    Capacity,
    StegoHeader,
    StegoResult,
    capacity,
    compressed_map_length,
    context_traces,
    embed,
    extract,
    is_complex,
    marked_fraction,
    scan_order,
)
from .errors import (
    CorruptionError,
    DTLEError,
    HeaderSpaceError,
    InsufficientCapacity,
    ParameterError,
    ParseError,
    PixelOverflowError,
    PositionError,
    RangeError,
    ShapeError,
)
from .image_io import load_pgm, read_pgm, save_pgm, write_pgm
from .med import AuxInfo, med_forward, med_inverse, med_predict
from .metrics import embedding_rate, psnr, spe
from .pixel import embed_pixel, extract_pixel, predictor_pair
from .tle import TleParams, tle_embed, tle_extract

__version__ = "0.1.0"
