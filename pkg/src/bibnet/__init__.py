"""Bibliometric network matrices under full and fractional counting."""

from bibnet.aggregation import aggregate_incidence, aggregate_then_project
from bibnet.counting import build_incidence, credit_vector, incidence_mass
from bibnet.errors import BibnetError
from bibnet.model import (
    AggregationMap,
    ConservationReport,
    CountingScheme,
    EntityId,
    IncidenceMatrix,
    Level,
    NetworkMatrix,
    PaperRecord,
)
from bibnet.projection import (
    audit_conservation,
    audit_network,
    mass_decomposition,
    network_mass,
    oracle_project,
    project,
)

__all__ = [
    "AggregationMap",
    "BibnetError",
    "ConservationReport",
    "CountingScheme",
    "EntityId",
    "IncidenceMatrix",
    "Level",
    "NetworkMatrix",
    "PaperRecord",
    "aggregate_incidence",
    "aggregate_then_project",
    "audit_conservation",
    "audit_network",
    "build_incidence",
    "credit_vector",
    "incidence_mass",
    "mass_decomposition",
    "network_mass",
    "oracle_project",
    "project",
]

__version__ = "0.1.0"
