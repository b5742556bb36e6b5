"""Exception hierarchy.

Every error derives from :class:`BibnetError` (itself a ``ValueError``).
Parser errors carry the 1-based ``line`` they were detected on; the CLI
prefixes messages with the file path.
"""

from __future__ import annotations


class BibnetError(ValueError):
    def __init__(self, message: str, *, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidIdentifier(BibnetError):
    pass


class DuplicateContributor(BibnetError):
    def __init__(self, paper_id: str, entity_id: str, *, line: int | None = None) -> None:
        self.paper_id = paper_id
        self.entity_id = entity_id
        super().__init__(
            f"paper {paper_id!r} lists contributor {entity_id!r} more than once", line=line
        )


class EmptyRecordList(BibnetError):
    def __init__(self) -> None:
        super().__init__("no paper records supplied")


class DuplicatePaperId(BibnetError):
    def __init__(self, paper_id: str, *, line: int | None = None) -> None:
        self.paper_id = paper_id
        super().__init__(f"paper id {paper_id!r} appears more than once", line=line)


class MissingOverride(BibnetError):
    def __init__(self, paper_id: str) -> None:
        self.paper_id = paper_id
        super().__init__(
            f"paper {paper_id!r} has no credit weights; fractional_custom counting needs them"
        )


class InvalidOverride(BibnetError):
    pass


class WeightSumViolation(InvalidOverride):
    def __init__(self, paper_id: str, total: float, *, line: int | None = None) -> None:
        self.paper_id = paper_id
        self.total = total
        super().__init__(
            f"credit weights of paper {paper_id!r} sum to {total!r}, expected 1", line=line
        )


class InvalidMatrix(BibnetError):
    pass


class AsymmetricInput(BibnetError):
    pass


class UnmappedEntity(BibnetError):
    def __init__(self, entity_id: str) -> None:
        self.entity_id = entity_id
        super().__init__(f"entity {entity_id!r} has no image in the aggregation map")


class LevelMismatch(BibnetError):
    pass


class MalformedRow(BibnetError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"malformed row: {reason}", line=line)


class MalformedLine(BibnetError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"malformed line: {reason}", line=line)


class NonContiguousPaper(BibnetError):
    def __init__(self, paper_id: str, *, line: int) -> None:
        self.paper_id = paper_id
        super().__init__(
            f"rows for paper {paper_id!r} are not contiguous", line=line
        )


class PartialWeights(BibnetError):
    def __init__(self, paper_id: str, *, line: int) -> None:
        self.paper_id = paper_id
        super().__init__(
            f"paper {paper_id!r} gives weights for some contributors but not all", line=line
        )


class ConflictingMapping(BibnetError):
    def __init__(self, entity_id: str, *, line: int | None = None) -> None:
        self.entity_id = entity_id
        super().__init__(f"entity {entity_id!r} is mapped to more than one group", line=line)
