"""Dataset persistence: append-only JSON files, one per revision.

Layout: <root>/<dataset_id>/rev<k>.json. The dataset id is a content hash of
the first revision, so ingesting the same file twice is idempotent.
Coordinates are stored as exact "num/den" strings and round-trip without
loss.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from .classify import ACCEPTABLE, UNACCEPTABLE
from .rationals import fraction_str
from .ranking import AlternativeSet, LabeledPoint


class CsvError(ValueError):
    """Malformed dataset CSV (reported with the offending row number)."""


class UnknownDatasetError(KeyError):
    pass


class RevisionConflictError(ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    dataset_id: str
    revision: int
    alternatives: AlternativeSet
    labels: dict[str, str]
    criteria: tuple[str, ...]
    created_at: str


def parse_csv(text: str) -> tuple[AlternativeSet, dict[str, str], tuple[str, ...]]:
    """Parse `id,<criterion>...[,label]` CSV into alternatives and labels."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvError("empty CSV") from None
    header = [h.strip() for h in header]
    if not header or header[0].lower() != "id":
        raise CsvError("first CSV column must be 'id'")
    label_idx = None
    crit_idx = []
    for j, name in enumerate(header[1:], start=1):
        if name.lower() == "label":
            if label_idx is not None:
                raise CsvError("duplicate label column")
            label_idx = j
        else:
            crit_idx.append(j)
    if len(crit_idx) < 2:
        raise CsvError("need at least two criteria columns")
    criteria = tuple(header[j] for j in crit_idx)

    rows: list[tuple[str, tuple[Fraction, ...]]] = []
    labels: dict[str, str] = {}
    seen: set[str] = set()
    for rownum, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise CsvError(f"row {rownum}: expected {len(header)} cells, got {len(row)}")
        pid = row[0].strip()
        if not pid:
            raise CsvError(f"row {rownum}: empty id")
        if pid in seen:
            raise CsvError(f"row {rownum}: duplicate id {pid!r}")
        seen.add(pid)
        coords = []
        for j in crit_idx:
            cell = row[j].strip()
            try:
                coords.append(Fraction(cell))
            except (ValueError, ZeroDivisionError):
                raise CsvError(
                    f"row {rownum}: non-numeric value {cell!r} in column {header[j]!r}"
                ) from None
        rows.append((pid, tuple(coords)))
        if label_idx is not None:
            cell = row[label_idx].strip()
            if cell == "":
                pass
            elif cell == "1":
                labels[pid] = ACCEPTABLE
            elif cell == "0":
                labels[pid] = UNACCEPTABLE
            else:
                raise CsvError(f"row {rownum}: label must be 1, 0 or empty, got {cell!r}")
    if len(rows) < 2:
        raise CsvError("need at least two data rows")
    try:
        alts = AlternativeSet(tuple(LabeledPoint(i, c) for i, c in rows))
    except ValueError as e:
        raise CsvError(str(e)) from None
    return alts, labels, criteria


def _content_payload(alts: AlternativeSet, labels: dict[str, str], criteria) -> dict:
    return {
        "alternatives": [
            [p.id, [fraction_str(c) for c in p.coords]] for p in alts.points
        ],
        "labels": {k: labels[k] for k in sorted(labels)},
        "criteria": list(criteria),
    }


def _dataset_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


class Store:
    """File-backed dataset store; commits are serialized per dataset id."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, dataset_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(dataset_id, threading.Lock())

    def _rev_path(self, dataset_id: str, revision: int) -> Path:
        return self.root / dataset_id / f"rev{revision}.json"

    def _latest_revision(self, dataset_id: str) -> int:
        d = self.root / dataset_id
        if not d.is_dir():
            raise UnknownDatasetError(dataset_id)
        revs = sorted(
            int(p.stem[3:]) for p in d.glob("rev*.json") if p.stem[3:].isdigit()
        )
        if not revs:
            raise UnknownDatasetError(dataset_id)
        return revs[-1]

    def _write_revision(
        self,
        dataset_id: str,
        revision: int,
        alts: AlternativeSet,
        labels: dict[str, str],
        criteria,
    ) -> Dataset:
        payload = _content_payload(alts, labels, criteria)
        created = datetime.now(timezone.utc).isoformat()
        doc = {"dataset": dataset_id, "revision": revision, "created_at": created, **payload}
        path = self._rev_path(dataset_id, revision)
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.exists():
            raise RevisionConflictError(f"revision {revision} already exists")
        path.write_text(json.dumps(doc, sort_keys=True, indent=1))
        return Dataset(dataset_id, revision, alts, dict(labels), tuple(criteria), created)

    def put_new(
        self, alts: AlternativeSet, labels: dict[str, str] | None = None, criteria=None
    ) -> Dataset:
        labels = labels or {}
        criteria = tuple(criteria) if criteria else tuple(f"c{j+1}" for j in range(alts.dim))
        dataset_id = _dataset_hash(_content_payload(alts, labels, criteria))
        with self._lock(dataset_id):
            if (self.root / dataset_id).is_dir():
                return self.get(dataset_id)  # idempotent re-ingest
            return self._write_revision(dataset_id, 1, alts, labels, criteria)

    def ingest_csv(self, text: str) -> Dataset:
        alts, labels, criteria = parse_csv(text)
        return self.put_new(alts, labels, criteria)

    def get(self, dataset_id: str, revision: int | None = None) -> Dataset:
        if revision is None:
            revision = self._latest_revision(dataset_id)
        path = self._rev_path(dataset_id, revision)
        if not path.exists():
            raise UnknownDatasetError(f"{dataset_id}@{revision}")
        doc = json.loads(path.read_text())
        alts = AlternativeSet(
            tuple(
                LabeledPoint(pid, tuple(Fraction(c) for c in coords))
                for pid, coords in doc["alternatives"]
            )
        )
        return Dataset(
            dataset_id=doc["dataset"],
            revision=doc["revision"],
            alternatives=alts,
            labels=dict(doc["labels"]),
            criteria=tuple(doc["criteria"]),
            created_at=doc["created_at"],
        )

    def commit_revision(
        self,
        dataset_id: str,
        alts: AlternativeSet,
        labels: dict[str, str],
        expect_revision: int,
    ) -> Dataset:
        with self._lock(dataset_id):
            latest = self._latest_revision(dataset_id)
            if latest != expect_revision:
                raise RevisionConflictError(
                    f"dataset {dataset_id} is at revision {latest}, not {expect_revision}"
                )
            current = self.get(dataset_id, latest)
            return self._write_revision(
                dataset_id, latest + 1, alts, labels, current.criteria
            )

    def latest_revision(self, dataset_id: str) -> int:
        return self._latest_revision(dataset_id)

    def list_datasets(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir() if p.is_dir())
