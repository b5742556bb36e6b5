"""Readers for paper-record and aggregation-map files.

Records CSV::

    paper_id,entity_id[,weight]
    p1,a1
    p1,a2

Rows of one paper must be adjacent. With a ``weight`` column a paper gives a
weight on every one of its rows or on none of them.

Records JSONL, one object per line::

    {"paper_id": "p1", "contributors": ["a1", "a2"], "weights": [0.5, 0.5]}

Aggregation map CSV::

    entity_id,group_id
    a1,g1

Every error raised here carries the 1-based line number it was found on.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

from bibnet.errors import (
    BibnetError,
    ConflictingMapping,
    DuplicateContributor,
    DuplicatePaperId,
    InvalidIdentifier,
    InvalidOverride,
    MalformedLine,
    MalformedRow,
    NonContiguousPaper,
    PartialWeights,
    WeightSumViolation,
)
from bibnet.model import UNIT_SUM_TOL, AggregationMap, EntityId, Level, PaperRecord

RECORD_HEADER = ("paper_id", "entity_id")
WEIGHTED_RECORD_HEADER = ("paper_id", "entity_id", "weight")
MAP_HEADER = ("entity_id", "group_id")


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise BibnetError(f"input is not valid UTF-8 ({exc.reason} at byte {exc.start})") from None


def _csv_rows(text: str) -> Iterable[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(text, newline=""), skipinitialspace=True)
    try:
        for row in reader:
            if not row or all(not f.strip() for f in row):
                continue
            yield reader.line_num, [f.strip() for f in row]
    except csv.Error as exc:
        raise MalformedRow(reader.line_num, str(exc)) from None


def _parse_weight(raw: str, line: int) -> float:
    try:
        w = float(raw)
    except ValueError:
        raise MalformedRow(line, f"weight {raw!r} is not a number") from None
    if not math.isfinite(w) or w < 0:
        raise MalformedRow(line, f"weight {raw!r} must be a finite non-negative number")
    return w


class _PaperBuffer:
    """Rows collected for the paper currently being read."""

    def __init__(self, paper_id: str, line: int) -> None:
        self.paper_id = paper_id
        self.first_line = line
        self.entities: list[EntityId] = []
        self.weights: list[float | None] = []
        self.lines: list[int] = []

    def add(self, entity: EntityId, weight: float | None, line: int) -> None:
        if entity in self.entities:
            raise DuplicateContributor(self.paper_id, entity.id, line=line)
        self.entities.append(entity)
        self.weights.append(weight)
        self.lines.append(line)

    def finish(self) -> PaperRecord:
        has = [w is not None for w in self.weights]
        if any(has) and not all(has):
            odd = next(k for k, h in enumerate(has) if h != has[0])
            raise PartialWeights(self.paper_id, line=self.lines[odd])
        override = None
        if all(has):
            override = tuple(self.weights)
            total = math.fsum(override)
            if abs(total - 1.0) > UNIT_SUM_TOL:
                raise WeightSumViolation(self.paper_id, total, line=self.first_line)
        return _make_record(self.paper_id, self.entities, override, self.first_line)


def _make_record(
    paper_id: str,
    entities: Sequence[EntityId],
    override: tuple[float, ...] | None,
    line: int,
    malformed: type[MalformedRow] | type[MalformedLine] = MalformedRow,
) -> PaperRecord:
    """Build a record, re-raising validation errors with ``line`` attached."""
    try:
        return PaperRecord(paper_id, tuple(entities), override)
    except WeightSumViolation as exc:
        raise WeightSumViolation(exc.paper_id, exc.total, line=line) from None
    except DuplicateContributor as exc:
        raise DuplicateContributor(exc.paper_id, exc.entity_id, line=line) from None
    except InvalidOverride as exc:
        raise InvalidOverride(str(exc), line=line) from None
    except InvalidIdentifier as exc:
        raise malformed(line, str(exc)) from None


def parse_records_csv(data: bytes | str, level: Level | str = Level.AUTHOR) -> list[PaperRecord]:
    level = Level(level)
    rows = _csv_rows(_decode(data))
    try:
        header_line, header = next(rows)
    except StopIteration:
        raise MalformedRow(1, "missing header 'paper_id,entity_id[,weight]'") from None
    if tuple(header) not in (RECORD_HEADER, WEIGHTED_RECORD_HEADER):
        raise MalformedRow(
            header_line, f"expected header 'paper_id,entity_id[,weight]', got {','.join(header)!r}"
        )
    weighted = len(header) == 3

    records: list[PaperRecord] = []
    finished: set[str] = set()
    current: _PaperBuffer | None = None
    for line, fields in rows:
        if len(fields) not in ((2, 3) if weighted else (2,)):
            raise MalformedRow(line, f"expected {len(header)} fields, got {len(fields)}")
        paper_id, entity_id = fields[0], fields[1]
        if not paper_id or not entity_id:
            raise MalformedRow(line, "paper_id and entity_id must be non-empty")
        weight = _parse_weight(fields[2], line) if len(fields) == 3 and fields[2] else None
        try:
            entity = EntityId(entity_id, level)
        except InvalidIdentifier as exc:
            raise MalformedRow(line, str(exc)) from None

        if current is None or current.paper_id != paper_id:
            if current is not None:
                records.append(current.finish())
                finished.add(current.paper_id)
            if paper_id in finished:
                raise NonContiguousPaper(paper_id, line=line)
            current = _PaperBuffer(paper_id, line)
        current.add(entity, weight, line)
    if current is not None:
        records.append(current.finish())
    return records


def parse_records_jsonl(data: bytes | str, level: Level | str = Level.AUTHOR) -> list[PaperRecord]:
    level = Level(level)
    records: list[PaperRecord] = []
    seen: set[str] = set()
    for line, raw in enumerate(_decode(data).splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedLine(line, f"invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise MalformedLine(line, "expected a JSON object")
        paper_id = obj.get("paper_id")
        contributors = obj.get("contributors")
        weights = obj.get("weights")
        if not isinstance(paper_id, str) or not paper_id.strip():
            raise MalformedLine(line, "'paper_id' must be a non-empty string")
        if (
            not isinstance(contributors, list)
            or not contributors
            or not all(isinstance(c, str) and c.strip() for c in contributors)
        ):
            raise MalformedLine(line, "'contributors' must be a non-empty array of strings")
        if weights is not None:
            if not isinstance(weights, list) or not all(
                isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights
            ):
                raise MalformedLine(line, "'weights' must be an array of numbers")
            if len(weights) != len(contributors):
                raise MalformedLine(
                    line, f"{len(contributors)} contributors but {len(weights)} weights"
                )
            if any(not math.isfinite(w) or w < 0 for w in weights):
                raise MalformedLine(line, "weights must be finite and non-negative")
        paper_id = paper_id.strip()
        if paper_id in seen:
            raise DuplicatePaperId(paper_id, line=line)
        seen.add(paper_id)
        try:
            entities = [EntityId(c.strip(), level) for c in contributors]
        except InvalidIdentifier as exc:
            raise MalformedLine(line, str(exc)) from None
        override = tuple(float(w) for w in weights) if weights is not None else None
        records.append(_make_record(paper_id, entities, override, line, MalformedLine))
    return records


def parse_aggregation_map(
    data: bytes | str, from_level: Level | str, to_level: Level | str
) -> AggregationMap:
    from_level, to_level = Level(from_level), Level(to_level)
    rows = _csv_rows(_decode(data))
    mapping: dict[EntityId, EntityId] = {}
    header = next(rows, None)
    if header is None:
        return AggregationMap(from_level, to_level, mapping)
    header_line, fields = header
    if tuple(fields) != MAP_HEADER:
        raise MalformedRow(header_line, f"expected header 'entity_id,group_id', got {','.join(fields)!r}")
    for line, fields in rows:
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise MalformedRow(line, "expected two non-empty fields 'entity_id,group_id'")
        try:
            src, dst = EntityId(fields[0], from_level), EntityId(fields[1], to_level)
        except InvalidIdentifier as exc:
            raise MalformedRow(line, str(exc)) from None
        if src in mapping and mapping[src] != dst:
            raise ConflictingMapping(src.id, line=line)
        mapping[src] = dst
    return AggregationMap(from_level, to_level, mapping)


def read_records(path: str | Path, level: Level | str = Level.AUTHOR) -> list[PaperRecord]:
    """Read a records file, picking the parser from the extension (.csv or .jsonl)."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".csv":
        parser = parse_records_csv
    elif suffix in (".jsonl", ".ndjson"):
        parser = parse_records_jsonl
    else:
        raise BibnetError(f"{path}: unknown records format {suffix!r} (use .csv or .jsonl)")
    return parser(path.read_bytes(), level)


def format_records_csv(records: Sequence[PaperRecord]) -> str:
    weighted = any(r.credit_override is not None for r in records)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(WEIGHTED_RECORD_HEADER if weighted else RECORD_HEADER)
    for rec in records:
        for k, entity in enumerate(rec.contributors):
            row = [rec.paper_id, entity.id]
            if weighted:
                row.append(repr(rec.credit_override[k]) if rec.credit_override else "")
            writer.writerow(row)
    return out.getvalue()


def format_records_jsonl(records: Sequence[PaperRecord]) -> str:
    lines = []
    for rec in records:
        obj: dict[str, object] = {
            "paper_id": rec.paper_id,
            "contributors": [c.id for c in rec.contributors],
        }
        if rec.credit_override is not None:
            obj["weights"] = list(rec.credit_override)
        lines.append(json.dumps(obj))
    return "".join(line + "\n" for line in lines)
