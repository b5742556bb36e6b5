"""Domain types shared by the counting, projection, aggregation and export code.

All types are immutable after construction. Matrices keep their numpy buffers
read-only so a shared instance cannot be mutated from under a reader.
"""

from __future__ import annotations

import enum
import math
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np
import scipy.sparse as sp

from bibnet.errors import (
    AsymmetricInput,
    DuplicateContributor,
    InvalidIdentifier,
    InvalidMatrix,
    InvalidOverride,
    WeightSumViolation,
)

#: Absolute tolerance for unit column sums and credit weights.
UNIT_SUM_TOL = 1e-9


class Level(str, enum.Enum):
    AUTHOR = "author"
    INSTITUTE = "institute"
    COUNTRY = "country"
    JOURNAL = "journal"
    CUSTOM = "custom"

    def __str__(self) -> str:
        return self.value


class CountingScheme(str, enum.Enum):
    FULL = "full"
    FRACTIONAL_EQUAL = "fractional_equal"
    FRACTIONAL_CUSTOM = "fractional_custom"

    @property
    def is_fractional(self) -> bool:
        return self is not CountingScheme.FULL

    def __str__(self) -> str:
        return self.value


# the Unicode "Cc" category: C0 controls, DEL and C1 controls
_CONTROL = re.compile("[\x00-\x1f\x7f-\x9f]")


def _check_identifier(value: object, what: str) -> str:
    if not isinstance(value, str) or not value:
        raise InvalidIdentifier(f"{what} must be a non-empty string, got {value!r}")
    if _CONTROL.search(value):
        raise InvalidIdentifier(f"{what} {value!r} contains control characters")
    return value


@dataclass(frozen=True)
class EntityId:
    """An entity (author, institute, ...). Identity is the (id, level) pair."""

    id: str
    level: Level = Level.AUTHOR

    def __post_init__(self) -> None:
        _check_identifier(self.id, "entity id")
        if not isinstance(self.level, Level):
            object.__setattr__(self, "level", Level(self.level))

    def sort_key(self) -> tuple[str, str]:
        return (self.level.value, self.id)

    def __str__(self) -> str:
        return self.id


def _as_entity(value: EntityId | str, level: Level = Level.AUTHOR) -> EntityId:
    if isinstance(value, EntityId):
        return value
    return EntityId(value, level)


@dataclass(frozen=True)
class PaperRecord:
    """One paper and its ordered contributors.

    Plain strings in ``contributors`` are taken as author ids. When given,
    ``credit_override`` holds one non-negative weight per contributor and must
    sum to 1.
    """

    paper_id: str
    contributors: tuple[EntityId, ...]
    credit_override: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        _check_identifier(self.paper_id, "paper id")
        contributors = tuple(_as_entity(c) for c in self.contributors)
        if not contributors:
            raise InvalidIdentifier(f"paper {self.paper_id!r} has no contributors")
        seen: set[EntityId] = set()
        for c in contributors:
            if c in seen:
                raise DuplicateContributor(self.paper_id, c.id)
            seen.add(c)
        object.__setattr__(self, "contributors", contributors)

        if self.credit_override is not None:
            weights = tuple(float(w) for w in self.credit_override)
            if len(weights) != len(contributors):
                raise InvalidOverride(
                    f"paper {self.paper_id!r} has {len(contributors)} contributors "
                    f"but {len(weights)} weights"
                )
            if any(not math.isfinite(w) or w < 0 for w in weights):
                raise InvalidOverride(
                    f"paper {self.paper_id!r} has a negative or non-finite weight"
                )
            total = math.fsum(weights)
            if abs(total - 1.0) > UNIT_SUM_TOL:
                raise WeightSumViolation(self.paper_id, total)
            object.__setattr__(self, "credit_override", weights)

    def __len__(self) -> int:
        return len(self.contributors)


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    """Entity-by-paper credit matrix ``A`` (I x J), stored as sparse CSC.

    Full-counting matrices hold positive integer entries: 1 straight from
    :func:`bibnet.counting.build_incidence`, possibly larger after rows have
    been aggregated. Fractional matrices have every column summing to 1.
    """

    rows: tuple[EntityId, ...]
    cols: tuple[str, ...]
    entries: sp.csc_array
    scheme: CountingScheme

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        cols = tuple(self.cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "scheme", CountingScheme(self.scheme))

        if len(set(rows)) != len(rows):
            raise InvalidMatrix("duplicate row entities")
        if len(set(cols)) != len(cols):
            raise InvalidMatrix("duplicate paper ids")

        entries = sp.csc_array(self.entries, dtype=np.float64, copy=True)
        if entries.shape != (len(rows), len(cols)):
            raise InvalidMatrix(
                f"entries have shape {entries.shape}, expected {(len(rows), len(cols))}"
            )
        entries.sum_duplicates()
        entries.eliminate_zeros()
        entries.sort_indices()
        data = entries.data
        if not np.all(np.isfinite(data)) or np.any(data < 0):
            raise InvalidMatrix("entries must be finite and non-negative")
        if self.scheme is CountingScheme.FULL:
            if np.any(data != np.round(data)):
                raise InvalidMatrix("full counting entries must be whole numbers")
        else:
            sums = np.asarray(entries.sum(axis=0)).ravel()
            bad = np.flatnonzero(np.abs(sums - 1.0) > UNIT_SUM_TOL)
            if bad.size:
                k = int(bad[0])
                raise InvalidMatrix(
                    f"column {cols[k]!r} sums to {sums[k]!r}; fractional columns must sum to 1"
                )
        _freeze(entries.data)
        _freeze(entries.indices)
        _freeze(entries.indptr)
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    def column_sums(self) -> np.ndarray:
        return np.asarray(self.entries.sum(axis=0)).ravel()

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.entries.sum(axis=1)).ravel()

    def toarray(self) -> np.ndarray:
        return self.entries.toarray()

    def column(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Row indices and values of the stored entries of column ``k``."""
        start, stop = self.entries.indptr[k], self.entries.indptr[k + 1]
        return self.entries.indices[start:stop], self.entries.data[start:stop]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncidenceMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.scheme == other.scheme
            and (self.entries != other.entries).nnz == 0
        )


@dataclass(frozen=True, eq=False)
class NetworkMatrix:
    """Entity-by-entity co-occurrence matrix ``B = A Aᵀ``.

    ``entries`` is either a dense symmetric ndarray, or a sparse array holding
    only the upper triangle and diagonal (the lower half is implied).
    """

    entities: tuple[EntityId, ...]
    entries: np.ndarray | sp.csr_array
    source_paper_count: int

    def __post_init__(self) -> None:
        entities = tuple(self.entities)
        object.__setattr__(self, "entities", entities)
        n = len(entities)
        if self.source_paper_count < 0:
            raise InvalidMatrix("source_paper_count must be non-negative")

        if sp.issparse(self.entries):
            entries = sp.csr_array(self.entries, dtype=np.float64, copy=True)
            entries.sum_duplicates()
            entries.eliminate_zeros()
            entries.sort_indices()
            if entries.shape != (n, n):
                raise InvalidMatrix(f"entries have shape {entries.shape}, expected {(n, n)}")
            if sp.tril(entries, k=-1).nnz:
                raise InvalidMatrix("sparse network entries must be upper-triangular")
            _freeze(entries.data)
            _freeze(entries.indices)
            _freeze(entries.indptr)
        else:
            entries = np.array(self.entries, dtype=np.float64, copy=True)
            if n == 0:
                entries = entries.reshape(0, 0)
            if entries.shape != (n, n):
                raise InvalidMatrix(f"entries have shape {entries.shape}, expected {(n, n)}")
            if not np.array_equal(entries, entries.T):
                raise AsymmetricInput("network matrix is not symmetric")
            _freeze(entries)
        object.__setattr__(self, "entries", entries)

        diag = self.diagonal()
        if not np.all(np.isfinite(diag)) or np.any(diag < 0):
            raise InvalidMatrix("diagonal entries must be finite and non-negative")

    @property
    def is_dense(self) -> bool:
        return not sp.issparse(self.entries)

    @property
    def size(self) -> int:
        return len(self.entities)

    def diagonal(self) -> np.ndarray:
        return np.asarray(self.entries.diagonal(), dtype=np.float64)

    def toarray(self) -> np.ndarray:
        if self.is_dense:
            return np.array(self.entries)
        upper = self.entries.toarray()
        return upper + np.triu(upper, k=1).T

    def upper_entries(self) -> Iterator[tuple[int, int, float]]:
        """Yield ``(i, j, b_ij)`` for every nonzero entry with ``i <= j``, row-major."""
        if self.is_dense:
            ii, jj = np.nonzero(np.triu(self.entries))
            for i, j in zip(ii.tolist(), jj.tolist()):
                yield i, j, float(self.entries[i, j])
        else:
            coo = self.entries.tocoo()
            order = np.lexsort((coo.col, coo.row))
            for k in order.tolist():
                yield int(coo.row[k]), int(coo.col[k]), float(coo.data[k])

    def satisfies_cauchy_schwarz(self, tol: float = 1e-9) -> bool:
        diag = self.diagonal()
        for i, j, w in self.upper_entries():
            if w * w > diag[i] * diag[j] + tol:
                return False
        return True

    def without_diagonal(self) -> NetworkMatrix:
        """Copy with every self-loop (diagonal entry) set to zero."""
        if self.is_dense:
            stripped = np.array(self.entries)
            np.fill_diagonal(stripped, 0.0)
        else:
            stripped = sp.triu(self.entries, k=1, format="csr")
        return NetworkMatrix(self.entities, stripped, self.source_paper_count)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetworkMatrix):
            return NotImplemented
        return (
            self.entities == other.entities
            and self.source_paper_count == other.source_paper_count
            and np.array_equal(self.toarray(), other.toarray())
        )


@dataclass(frozen=True)
class AggregationMap:
    """Single-valued map from fine entities to coarse groups."""

    from_level: Level
    to_level: Level
    mapping: Mapping[EntityId, EntityId] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "from_level", Level(self.from_level))
        object.__setattr__(self, "to_level", Level(self.to_level))
        mapping: dict[EntityId, EntityId] = {}
        for src, dst in self.mapping.items():
            src = _as_entity(src, self.from_level)
            dst = _as_entity(dst, self.to_level)
            if src.level is not self.from_level or dst.level is not self.to_level:
                raise InvalidIdentifier(
                    f"mapping {src.id!r} -> {dst.id!r} does not go "
                    f"from {self.from_level} to {self.to_level}"
                )
            mapping[src] = dst
        object.__setattr__(self, "mapping", MappingProxyType(mapping))

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, str]], from_level: Level | str, to_level: Level | str
    ) -> AggregationMap:
        from_level, to_level = Level(from_level), Level(to_level)
        return cls(
            from_level,
            to_level,
            {EntityId(a, from_level): EntityId(g, to_level) for a, g in pairs},
        )

    def __getitem__(self, entity: EntityId) -> EntityId:
        return self.mapping[entity]

    def __contains__(self, entity: object) -> bool:
        return entity in self.mapping

    def __len__(self) -> int:
        return len(self.mapping)

    def then(self, other: AggregationMap) -> AggregationMap:
        """Compose: apply this map, then ``other``. Entities whose group ``other``
        does not cover are dropped from the result."""
        return AggregationMap(
            self.from_level,
            other.to_level,
            {src: other[dst] for src, dst in self.mapping.items() if dst in other},
        )


@dataclass(frozen=True)
class ConservationReport:
    incidence_mass: float
    network_mass: float
    expected: int
    column_violations: tuple[tuple[str, float], ...]
    conserved: bool
    tolerance: float

    def to_text(self) -> str:
        """Fixed-order ``key=value`` block, one field per line."""
        lines = [
            f"papers={self.expected}",
            f"incidence_mass={self.incidence_mass:.9f}",
            f"network_mass={self.network_mass:.9f}",
            f"expected={self.expected}",
            f"tolerance={self.tolerance!r}",
            f"column_violations={len(self.column_violations)}",
        ]
        lines += [f"violation={pid},{total:.9f}" for pid, total in self.column_violations]
        lines.append(f"conserved={'true' if self.conserved else 'false'}")
        return "\n".join(lines) + "\n"

