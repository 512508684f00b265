"""Long-format opinion-score CSV (``subject,condition,score``)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .descr import GroupSample
from .errors import DataFormatError, QstatError

HEADER = ("subject", "condition", "score")


@dataclass(frozen=True)
class Record:
    subject: str
    condition: str
    score: float


class UnknownConditionError(QstatError, KeyError):
    pass


@dataclass
class OpinionDataset:
    records: list[Record]

    def conditions(self) -> list[str]:
        """Condition ids in order of first appearance."""
        return list(dict.fromkeys(r.condition for r in self.records))

    def group(self, condition: str) -> GroupSample:
        scores = [r.score for r in self.records if r.condition == condition]
        if not scores:
            raise UnknownConditionError(f"unknown condition {condition!r}; available: {', '.join(self.conditions())}")
        return GroupSample(condition, scores)

    def groups(self, conditions: Sequence[str] | None = None) -> list[GroupSample]:
        return [self.group(c) for c in (conditions or self.conditions())]


def parse_csv(lines: Iterable[str], source: str = "<input>") -> OpinionDataset:
    reader = csv.reader(lines)
    header = None
    records: list[Record] = []
    seen: dict[tuple[str, str], int] = {}
    for row in reader:
        lineno = reader.line_num
        if header is None:
            if not row:
                continue
            header = tuple(c.strip() for c in row)
            if header != HEADER:
                missing = [c for c in HEADER if c not in header]
                extra = [c for c in header if c not in HEADER]
                raise DataFormatError(
                    f"{source}: row {lineno}: header must be exactly {','.join(HEADER)}"
                    + (f"; missing {missing}" if missing else "")
                    + (f"; unexpected {extra}" if extra else "")
                )
            continue
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise DataFormatError(f"{source}: row {lineno}: expected 3 fields, got {len(row)}")
        subject, condition, raw = (c.strip() for c in row)
        if not subject or not condition:
            raise DataFormatError(f"{source}: row {lineno}: empty subject or condition")
        try:
            score = float(raw)
        except ValueError:
            raise DataFormatError(f"{source}: row {lineno}, column 'score': cannot parse {raw!r} as a number") from None
        if not math.isfinite(score):
            raise DataFormatError(f"{source}: row {lineno}, column 'score': non-finite value {raw!r}")
        key = (subject, condition)
        if key in seen:
            raise DataFormatError(
                f"{source}: row {lineno}: duplicate record for subject {subject!r}, "
                f"condition {condition!r} (first at row {seen[key]})"
            )
        seen[key] = lineno
        records.append(Record(subject, condition, score))
    if header is None:
        raise DataFormatError(f"{source}: empty file")
    if not records:
        raise DataFormatError(f"{source}: no data rows")
    return OpinionDataset(records)


def load_csv(path) -> OpinionDataset:
    with open(path, encoding="utf-8-sig", newline="") as fh:
        return parse_csv(fh, str(path))


def write_csv(rows: Iterable[tuple[str, str, float]], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(HEADER)
    for subject, condition, score in rows:
        w.writerow([subject, condition, repr(float(score))])
