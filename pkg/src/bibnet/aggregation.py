"""Regrouping the rows of ``A`` to a coarser entity level.

Aggregation is done on the incidence matrix, before projection. Summing rows
within a group leaves every column sum unchanged, so a column-stochastic ``A``
stays column-stochastic and the projected mass is still the paper count.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from bibnet.errors import LevelMismatch, UnmappedEntity
from bibnet.model import AggregationMap, EntityId, IncidenceMatrix, NetworkMatrix
from bibnet.projection import project


def aggregate_incidence(A: IncidenceMatrix, mapping: AggregationMap) -> IncidenceMatrix:
    for entity in A.rows:
        if entity.level is not mapping.from_level:
            raise LevelMismatch(
                f"entity {entity.id!r} is at level {entity.level}, "
                f"map aggregates from {mapping.from_level}"
            )
        if entity not in mapping:
            raise UnmappedEntity(entity.id)

    groups = sorted({mapping[e] for e in A.rows}, key=EntityId.sort_key)
    position = {g: i for i, g in enumerate(groups)}
    target = np.array([position[mapping[e]] for e in A.rows], dtype=np.int64)

    # 0/1 group-membership matrix S (groups x entities); aggregate is S @ A
    membership = sp.csr_array(
        (np.ones(len(A.rows)), (target, np.arange(len(A.rows)))),
        shape=(len(groups), len(A.rows)),
    )
    entries = sp.csc_array(membership @ A.entries)
    return IncidenceMatrix(tuple(groups), A.cols, entries, A.scheme)


def aggregate_then_project(A: IncidenceMatrix, mapping: AggregationMap) -> NetworkMatrix:
    return project(aggregate_incidence(A, mapping))
