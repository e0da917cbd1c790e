"""Recording data model, CSV loading, TLX label binning and train/test splitting."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

logger = logging.getLogger(__name__)

CLASSES = ("C1", "C2", "C3")
SUBSCALES = ("mental", "physical", "temporal", "performance", "effort", "frustration")
RECORDING_HEADER = ("t", "diameter", "confidence")
MANIFEST_HEADER = ("path", "subject", "activity") + SUBSCALES

DEFAULT_RATE_HZ = 240.0
DEFAULT_CONFIDENCE = 0.6


class RecordingError(ValueError):
    """Malformed or unusable recording data."""


class EmptyRecordingError(RecordingError):
    pass


class PupilSample(NamedTuple):
    t: float
    diameter: float
    confidence: float = 1.0


def bin_class(mean_score: float) -> str:
    """Map a mean NASA-TLX score to C1 (<30), C2 ([30, 50]) or C3 (>50)."""
    if not (0.0 <= mean_score <= 100.0):
        raise ValueError(f"TLX score must lie in [0, 100], got {mean_score!r}")
    if mean_score < 30.0:
        return "C1"
    if mean_score <= 50.0:
        return "C2"
    return "C3"


@dataclass(frozen=True)
class TlxLabel:
    subscores: tuple[float, ...]

    def __post_init__(self):
        scores = tuple(float(s) for s in self.subscores)
        if len(scores) != len(SUBSCALES):
            raise ValueError(f"expected {len(SUBSCALES)} TLX subscores, got {len(scores)}")
        for s in scores:
            if not (0.0 <= s <= 100.0):
                raise ValueError(f"TLX subscore out of [0, 100]: {s!r}")
        object.__setattr__(self, "subscores", scores)

    @classmethod
    def from_mean(cls, mean_score: float) -> "TlxLabel":
        return cls((mean_score,) * len(SUBSCALES))

    @property
    def mean_score(self) -> float:
        return math.fsum(self.subscores) / len(self.subscores)

    @property
    def label(self) -> str:
        return bin_class(self.mean_score)

    @property
    def class_index(self) -> int:
        return CLASSES.index(self.label)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Recording:
    """Pupil-diameter time series of one subject performing one activity.

    Samples are held column-wise (``t``, ``diameter``, ``confidence``) in
    read-only arrays sorted by time.
    """

    id: str
    t: np.ndarray
    diameter: np.ndarray
    confidence: np.ndarray = None
    label: TlxLabel | None = None
    subject_id: str = ""
    activity_id: str = ""
    nominal_rate: float = DEFAULT_RATE_HZ

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        d = np.asarray(self.diameter, dtype=float)
        c = np.ones_like(t) if self.confidence is None else np.asarray(self.confidence, dtype=float)
        if not (t.ndim == d.ndim == c.ndim == 1) or not (len(t) == len(d) == len(c)):
            raise RecordingError("t, diameter and confidence must be 1-d arrays of equal length")
        if len(t) == 0:
            raise EmptyRecordingError(f"recording {self.id!r} has no samples")
        if np.any(np.diff(t) < 0):
            order = np.argsort(t, kind="stable")
            t, d, c = t[order], d[order], c[order]
        object.__setattr__(self, "t", _frozen(t))
        object.__setattr__(self, "diameter", _frozen(d))
        object.__setattr__(self, "confidence", _frozen(c))

    def __len__(self):
        return len(self.t)

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    @property
    def samples(self) -> list[PupilSample]:
        return [PupilSample(*row) for row in zip(self.t.tolist(), self.diameter.tolist(),
                                                 self.confidence.tolist())]

    def with_samples(self, mask) -> "Recording":
        return replace(self, t=self.t[mask], diameter=self.diameter[mask],
                       confidence=self.confidence[mask])


def _parse_float(text: str, path, lineno: int, column: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        raise RecordingError(f"{path}:{lineno}: cannot parse {column} value {text!r}") from None


def load_recording(path, format: str = "csv", *, id: str | None = None, **metadata) -> Recording:
    """Read a ``t,diameter,confidence`` CSV into a Recording.

    Rows with a non-finite or non-positive diameter are dropped (the count is
    logged). The confidence column is optional and defaults to 1.0.
    """
    if format != "csv":
        raise ValueError(f"unsupported recording format {format!r}")
    path = Path(path)
    ts, ds, cs = [], [], []
    dropped = 0
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyRecordingError(f"{path}: empty file")
        header = [h.strip().lower() for h in header]
        if header[:2] != ["t", "diameter"] or (len(header) > 2 and header[2] != "confidence"):
            raise RecordingError(f"{path}:1: expected header 't,diameter,confidence', got {header}")
        has_conf = len(header) > 2
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise RecordingError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            t = _parse_float(row[0], path, lineno, "t")
            d = _parse_float(row[1], path, lineno, "diameter")
            c = _parse_float(row[2], path, lineno, "confidence") if has_conf else 1.0
            if not math.isfinite(t):
                raise RecordingError(f"{path}:{lineno}: non-finite timestamp")
            if not math.isfinite(d) or d <= 0:
                dropped += 1
                continue
            ts.append(t)
            ds.append(d)
            cs.append(c)
    if dropped:
        logger.info("%s: dropped %d samples with invalid diameter", path, dropped)
    if not ts:
        raise EmptyRecordingError(f"{path}: no valid samples")
    return Recording(id=id if id is not None else path.stem, t=ts, diameter=ds,
                     confidence=cs, **metadata)


def write_recording(rec: Recording, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORDING_HEADER)
        for row in zip(rec.t.tolist(), rec.diameter.tolist(), rec.confidence.tolist()):
            writer.writerow([repr(v) for v in row])


def filter_confidence(rec: Recording, threshold: float = DEFAULT_CONFIDENCE) -> Recording:
    if not (0.0 <= threshold <= 1.0):
        raise ValueError(f"confidence threshold must lie in [0, 1], got {threshold!r}")
    keep = rec.confidence >= threshold
    if keep.all():
        return rec
    if not keep.any():
        raise EmptyRecordingError(f"recording {rec.id!r}: no samples with confidence >= {threshold}")
    return rec.with_samples(keep)


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    subject_id: str
    activity_id: str
    subscores: tuple[float, ...]


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.entries)


def read_manifest(path) -> DatasetManifest:
    """Parse a manifest CSV; relative recording paths resolve against its directory."""
    path = Path(path)
    entries, seen = [], set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(h.strip() for h in reader.fieldnames) != MANIFEST_HEADER:
            raise RecordingError(f"{path}:1: expected header {','.join(MANIFEST_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            rec_path = Path(row["path"])
            if not rec_path.is_absolute():
                rec_path = path.parent / rec_path
            if rec_path in seen:
                raise RecordingError(f"{path}:{lineno}: duplicate recording path {row['path']!r}")
            seen.add(rec_path)
            scores = tuple(_parse_float(row[s], path, lineno, s) for s in SUBSCALES)
            if any(not (0.0 <= s <= 100.0) for s in scores):
                raise RecordingError(f"{path}:{lineno}: TLX subscore outside [0, 100]")
            entries.append(ManifestEntry(rec_path, row["subject"], row["activity"], scores))
    return DatasetManifest(tuple(entries))


def write_manifest(entries: Sequence[ManifestEntry], path) -> None:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for e in entries:
            try:
                p = Path(e.path).relative_to(path.parent)
            except ValueError:
                p = Path(e.path)
            writer.writerow([p.as_posix(), e.subject_id, e.activity_id] + [repr(s) for s in e.subscores])


def load_dataset(manifest, confidence_threshold: float = DEFAULT_CONFIDENCE,
                 nominal_rate: float = DEFAULT_RATE_HZ) -> list[Recording]:
    if not isinstance(manifest, DatasetManifest):
        manifest = read_manifest(manifest)
    recordings = []
    for e in manifest.entries:
        rec = load_recording(e.path, id=e.path.stem, label=TlxLabel(e.subscores),
                             subject_id=e.subject_id, activity_id=e.activity_id,
                             nominal_rate=nominal_rate)
        recordings.append(filter_confidence(rec, confidence_threshold))
    return recordings


def split_train_test(dataset: Sequence, train_fraction: float = 0.8, seed: int = 0):
    """Random recording-level partition with ``round(train_fraction * N)`` training items.

    Both sides are kept non-empty, so ``N`` must be at least 2.
    """
    if not (0.0 < train_fraction < 1.0):
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction!r}")
    n = len(dataset)
    if n < 2:
        raise ValueError(f"need at least 2 recordings to split, got {n}")
    n_train = min(max(int(math.floor(train_fraction * n + 0.5)), 1), n - 1)
    order = np.random.default_rng(seed).permutation(n)
    train = [dataset[i] for i in sorted(order[:n_train])]
    test = [dataset[i] for i in sorted(order[n_train:])]
    return train, test
