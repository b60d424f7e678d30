"""Spectral and combinatorial characterisations of distance-regular graphs."""

from .criteria import (
    CriterionReport,
    CriterionResult,
    InternalConsistencyError,
    OracleGateError,
    full_report,
    oracle_drg,
)
from .fixtures import FixtureError, load_fixture
from .graph import (
    Graph,
    GraphFormatError,
    build_named,
    distance_data,
    encode_graph6,
    parse_edge_list,
    parse_graph6,
)
from .prepoly import PredistanceSystem, predistance_system
from .spectral import DisconnectedGraphError, Spectrum, ToleranceConfig, spectrum_of

__version__ = "0.1.0"

__all__ = [
    "CriterionReport",
    "CriterionResult",
    "DisconnectedGraphError",
    "FixtureError",
    "Graph",
    "GraphFormatError",
    "InternalConsistencyError",
    "OracleGateError",
    "PredistanceSystem",
    "Spectrum",
    "ToleranceConfig",
    "build_named",
    "distance_data",
    "encode_graph6",
    "full_report",
    "load_fixture",
    "oracle_drg",
    "parse_edge_list",
    "parse_graph6",
    "predistance_system",
    "spectrum_of",
]
