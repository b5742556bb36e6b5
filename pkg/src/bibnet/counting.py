"""Building the entity-by-paper incidence matrix from paper records."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import scipy.sparse as sp

from bibnet.errors import DuplicatePaperId, EmptyRecordList, MissingOverride
from bibnet.model import CountingScheme, EntityId, IncidenceMatrix, PaperRecord


def credit_vector(record: PaperRecord, scheme: CountingScheme | str) -> list[float]:
    """Credit each contributor of ``record`` receives under ``scheme``.

    Full counting gives every contributor 1, equal fractional counting gives
    each of k contributors 1/k, and custom fractional counting returns the
    record's override weights (already validated to sum to 1).
    """
    scheme = CountingScheme(scheme)
    k = len(record.contributors)
    if scheme is CountingScheme.FULL:
        return [1.0] * k
    if scheme is CountingScheme.FRACTIONAL_EQUAL:
        return [1.0 / k] * k
    if record.credit_override is None:
        raise MissingOverride(record.paper_id)
    return list(record.credit_override)


def build_incidence(
    records: Sequence[PaperRecord], scheme: CountingScheme | str
) -> IncidenceMatrix:
    """Assemble ``A``: rows are the distinct contributors sorted by (level, id),
    columns follow the order of ``records``."""
    scheme = CountingScheme(scheme)
    if not records:
        raise EmptyRecordList()

    seen: set[str] = set()
    for rec in records:
        if rec.paper_id in seen:
            raise DuplicatePaperId(rec.paper_id)
        seen.add(rec.paper_id)

    rows = sorted({c for rec in records for c in rec.contributors}, key=EntityId.sort_key)
    index = {e: i for i, e in enumerate(rows)}

    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for rec in records:
        credits = credit_vector(rec, scheme)
        # CSC wants each column's row indices ascending
        for i, w in sorted(zip((index[c] for c in rec.contributors), credits)):
            indices.append(i)
            data.append(w)
        indptr.append(len(indices))

    entries = sp.csc_array(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64), np.array(indptr)),
        shape=(len(rows), len(records)),
    )
    return IncidenceMatrix(tuple(rows), tuple(r.paper_id for r in records), entries, scheme)


def incidence_mass(A: IncidenceMatrix) -> float:
    return math.fsum(A.entries.data.tolist())
