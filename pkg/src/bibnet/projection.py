"""Network-level projection ``B = A Aᵀ``, mass bookkeeping and the conservation audit.

The kernel adds one outer product per paper over that paper's nonzero rows, so
cost grows with the sum of squared column sizes rather than I² J. Papers are
accumulated in column order, which fixes the floating-point summation order
and keeps ``B`` bit-symmetric: ``v[a] * v[b]`` and ``v[b] * v[a]`` are the same
double, and both cells receive the same addends in the same order.

``oracle_project`` is a deliberately naive dense triple loop over
:class:`fractions.Fraction` values. Tests check the fast path against it.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from bibnet.errors import AsymmetricInput, InvalidMatrix
from bibnet.model import (
    ConservationReport,
    CountingScheme,
    EntityId,
    IncidenceMatrix,
    NetworkMatrix,
    PaperRecord,
)

#: Largest entity count for which ``B`` is materialized densely.
DENSE_LIMIT = 10_000

_SYMMETRY_TOL = 1e-12


def project(A: IncidenceMatrix, *, dense_limit: int = DENSE_LIMIT) -> NetworkMatrix:
    n_entities, n_papers = A.shape
    if n_entities <= dense_limit:
        B = np.zeros((n_entities, n_entities), dtype=np.float64)
        for k in range(n_papers):
            idx, v = A.column(k)
            if idx.size:
                B[np.ix_(idx, idx)] += np.multiply.outer(v, v)
        return NetworkMatrix(A.rows, B, n_papers)
    return NetworkMatrix(A.rows, _project_upper(A), n_papers)


def _project_upper(A: IncidenceMatrix) -> sp.csr_array:
    n_entities, n_papers = A.shape
    rows, cols, vals = [], [], []
    for k in range(n_papers):
        idx, v = A.column(k)
        a, b = np.triu_indices(idx.size)
        # column indices are sorted, so idx[a] <= idx[b]
        rows.append(idx[a])
        cols.append(idx[b])
        vals.append(v[a] * v[b])
    if not rows:
        return sp.csr_array((n_entities, n_entities), dtype=np.float64)
    r = np.concatenate(rows).astype(np.int64)
    c = np.concatenate(cols).astype(np.int64)
    w = np.concatenate(vals)
    # stable sort keeps paper order among the addends of each cell
    order = np.argsort(r * n_entities + c, kind="stable")
    r, c, w = r[order], c[order], w[order]
    key = r * n_entities + c
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    summed = np.add.reduceat(w, starts)
    return sp.csr_array((summed, (r[starts], c[starts])), shape=(n_entities, n_entities))


def _split(B: NetworkMatrix | np.ndarray) -> tuple[float, float]:
    if isinstance(B, NetworkMatrix):
        entries = B.entries
    else:
        entries = np.asarray(B, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidMatrix(f"expected a square matrix, got shape {entries.shape}")
        if not np.allclose(entries, entries.T, rtol=0.0, atol=_SYMMETRY_TOL):
            raise AsymmetricInput("matrix is not symmetric within 1e-12")
    self_mass = float(np.sum(entries.diagonal()))
    if sp.issparse(entries):
        collaboration = float(sp.triu(entries, k=1).sum())
    else:
        collaboration = float(np.sum(np.triu(entries, k=1)))
    return self_mass, collaboration


def mass_decomposition(B: NetworkMatrix | np.ndarray) -> tuple[float, float]:
    """Return ``(self_mass, collaboration_mass)``: the trace and the strict upper
    triangle sum. ``self_mass + 2 * collaboration_mass`` is the network mass."""
    return _split(B)


def network_mass(B: NetworkMatrix | np.ndarray) -> float:
    if isinstance(B, NetworkMatrix) and B.is_dense:
        return float(np.sum(B.entries))
    if not isinstance(B, NetworkMatrix):
        return float(np.sum(np.asarray(B, dtype=np.float64)))
    self_mass, collaboration = _split(B)
    return self_mass + 2.0 * collaboration


def audit_network(
    B: NetworkMatrix, A: IncidenceMatrix, tolerance: float = 1e-9
) -> ConservationReport:
    """Audit a network matrix against the incidence matrix it claims to come from.

    Column violations are read off ``A``; the mass comparison uses ``B`` as
    given, so a tampered ``B`` (say, with its diagonal dropped) fails here even
    though ``A`` is column-stochastic.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    if B.source_paper_count != len(A.cols):
        raise InvalidMatrix(
            f"network matrix counts {B.source_paper_count} papers, incidence has {len(A.cols)}"
        )
    sums = A.column_sums()
    violations = tuple(
        (pid, float(s)) for pid, s in zip(A.cols, sums) if abs(s - 1.0) > tolerance
    )
    expected = len(A.cols)
    mass = network_mass(B)
    conserved = not violations and abs(mass - expected) <= tolerance * max(1, expected)
    return ConservationReport(
        incidence_mass=math.fsum(A.entries.data.tolist()),
        network_mass=mass,
        expected=expected,
        column_violations=violations,
        conserved=conserved,
        tolerance=tolerance,
    )


def audit_conservation(A: IncidenceMatrix, tolerance: float = 1e-9) -> ConservationReport:
    return audit_network(project(A), A, tolerance)


# -- exact oracle -------------------------------------------------------------


def oracle_project(A: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Dense ``A Aᵀ`` by the textbook triple loop, in exact rationals."""
    n = len(A)
    m = len(A[0]) if n else 0
    B = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            total = Fraction(0)
            for k in range(m):
                total += Fraction(A[i][k]) * Fraction(A[j][k])
            B[i][j] = total
    return B


def exact_incidence(
    records: Sequence[PaperRecord], scheme: CountingScheme | str
) -> tuple[list[EntityId], list[list[Fraction]]]:
    """Rational counterpart of :func:`bibnet.counting.build_incidence`.

    Equal shares are exact ``Fraction(1, k)``; custom weights are converted
    from their float value without rounding.
    """
    scheme = CountingScheme(scheme)
    rows = sorted({c for r in records for c in r.contributors}, key=EntityId.sort_key)
    pos = {e: i for i, e in enumerate(rows)}
    A = [[Fraction(0)] * len(records) for _ in rows]
    for k, rec in enumerate(records):
        n = len(rec.contributors)
        for t, c in enumerate(rec.contributors):
            if scheme is CountingScheme.FULL:
                A[pos[c]][k] = Fraction(1)
            elif scheme is CountingScheme.FRACTIONAL_EQUAL:
                A[pos[c]][k] = Fraction(1, n)
            else:
                A[pos[c]][k] = Fraction(rec.credit_override[t])
    return rows, A


def exact_entries(A: IncidenceMatrix) -> list[list[Fraction]]:
    """The stored floats of ``A`` as exact rationals."""
    return [[Fraction(x) for x in row] for row in A.toarray().tolist()]
