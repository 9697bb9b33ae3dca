"""Symbolic time-series approximation with lower-bounding distance measures.

Provides PAA/SAX plus season-aware (sSAX) and trend-aware (tSAX) variants,
an exact/approximate matching engine with lower-bound pruning, synthetic
dataset generators with controlled component strength, binary on-disk
storage, and an evaluation harness (entropy, TLB, pruning power,
approximate accuracy, runtime).
"""

from . import errors
from .core import Dataset, component_strength, euclidean_distance, normalize
from .quantization import (
    BreakpointVector,
    CellTable,
    SignedBoundTable,
    TrendCellTable,
    build_cell_table,
    build_signed_bound_table,
    build_trend_cell_table,
    discretize,
    gaussian_breakpoints,
    normal_quantile,
    uniform_breakpoints,
)
from .paa_sax import PaaRepresentation, SaxRepresentation, d_paa, d_sax, paa, sax_encode
from .season import (
    SpaaRepresentation,
    SsaxRepresentation,
    cell4,
    d_spaa,
    d_ssax,
    extract_season,
    season_sd_heuristics,
    spaa,
    ssax_encode,
)
from .trend import (
    TpaaRepresentation,
    TsaxRepresentation,
    d_tpaa,
    d_tsax,
    fit_trend,
    phi_max,
    tpaa,
    trend_residual_sd,
    tsax_encode,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Dataset",
    "normalize",
    "euclidean_distance",
    "component_strength",
    "BreakpointVector",
    "CellTable",
    "SignedBoundTable",
    "TrendCellTable",
    "gaussian_breakpoints",
    "uniform_breakpoints",
    "discretize",
    "normal_quantile",
    "build_cell_table",
    "build_signed_bound_table",
    "build_trend_cell_table",
    "PaaRepresentation",
    "SaxRepresentation",
    "paa",
    "sax_encode",
    "d_paa",
    "d_sax",
    "SpaaRepresentation",
    "SsaxRepresentation",
    "extract_season",
    "season_sd_heuristics",
    "spaa",
    "ssax_encode",
    "cell4",
    "d_spaa",
    "d_ssax",
    "TpaaRepresentation",
    "TsaxRepresentation",
    "fit_trend",
    "phi_max",
    "trend_residual_sd",
    "tpaa",
    "tsax_encode",
    "d_tpaa",
    "d_tsax",
    "__version__",
]
