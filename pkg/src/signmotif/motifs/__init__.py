from .catalog import CATALOG, DEFAULT_S_INDEX, PredictorId, catalog, get_predictor, s_name
from .counting import (
    EntityCounts,
    EntityMismatch,
    NeighborEntity,
    count_cl,
    count_cn,
    count_plain,
    coverage_table,
    enumerate_entities,
    motif_coverage,
    predictor_instances,
)
from .index import Evidence, MotifIndex
from .oracle import brute_force_counts, brute_force_coverage, brute_force_entities

__all__ = [
    "CATALOG", "DEFAULT_S_INDEX", "PredictorId", "catalog", "get_predictor", "s_name",
    "EntityCounts", "EntityMismatch", "NeighborEntity", "count_cl", "count_cn", "count_plain",
    "coverage_table", "enumerate_entities", "motif_coverage", "predictor_instances",
    "Evidence", "MotifIndex", "brute_force_counts", "brute_force_coverage", "brute_force_entities",
]
