"""CSV/JSON serialization of samples, manifests, matrices, clusterings and verdicts."""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .clustering import Clustering
from .core import Sample
from .distance import DistanceMatrix


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_sample_csv(path, sample: Sample):
    """One row per time step, ``d`` comma-separated columns, no header."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in sample.values.tolist():
            w.writerow([_fmt(v) for v in row])


def read_sample_csv(path, alphabet: Optional[Sequence[int]] = None, id: str = "") -> Sample:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"{path}: empty sample file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: rows have differing numbers of columns")
    try:
        if alphabet is not None:
            vals = np.array([[int(float(c)) for c in r] for r in rows], dtype=np.int64)
            return Sample(vals, alphabet=tuple(alphabet), id=id)
        vals = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    return Sample(vals, id=id)


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    path: str
    format: str = "csv"
    alphabet: Optional[tuple] = None

    def to_dict(self) -> dict:
        d = {"id": self.id, "path": self.path, "format": self.format}
        if self.alphabet is not None:
            d["alphabet"] = list(self.alphabet)
        return d


@dataclass(frozen=True)
class Manifest:
    entries: tuple
    base: str = "."

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("manifest ids must be unique")

    def load(self) -> List[Sample]:
        out = []
        for e in self.entries:
            if e.format != "csv":
                raise ValueError(f"unsupported sample format {e.format!r}")
            path = Path(self.base) / e.path
            if not path.exists():
                raise ValueError(f"manifest entry {e.id!r}: no such file {path}")
            out.append(read_sample_csv(path, e.alphabet, id=e.id))
        return out

    @property
    def ids(self) -> list:
        return [e.id for e in self.entries]


def read_manifest(path) -> Manifest:
    path = Path(path)
    with open(path) as fh:
        raw = json.load(fh)
    items = raw["entries"] if isinstance(raw, dict) else raw
    entries = []
    for item in items:
        unknown = set(item) - {"id", "path", "format", "alphabet"}
        if unknown:
            raise ValueError(f"manifest entry has unknown field(s): {', '.join(sorted(unknown))}")
        alpha = item.get("alphabet")
        entries.append(ManifestEntry(str(item["id"]), item["path"], item.get("format", "csv"),
                                     None if alpha is None else tuple(int(a) for a in alpha)))
    return Manifest(tuple(entries), base=str(path.parent))


def write_manifest(path, entries: Sequence[ManifestEntry]):
    write_json(path, {"entries": [e.to_dict() for e in entries]})


def write_matrix_csv(fh_or_path, dm: DistanceMatrix):
    """Header row of ids, then one row of full-precision distances per sample."""
    if isinstance(fh_or_path, (str, os.PathLike)):
        with open(fh_or_path, "w", newline="") as fh:
            return write_matrix_csv(fh, dm)
    w = csv.writer(fh_or_path)
    w.writerow(dm.ids)
    for row in dm.values.tolist():
        w.writerow([repr(float(v)) for v in row])


def read_matrix_csv(path) -> DistanceMatrix:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    ids, body = rows[0], rows[1:]
    return DistanceMatrix(tuple(ids), np.array([[float(v) for v in r] for r in body]))


def clustering_to_json(c: Clustering) -> str:
    return json.dumps(c.to_dict(), indent=2)


def clustering_from_json(text: str) -> Clustering:
    raw = json.loads(text)
    return Clustering({str(k): int(v) for k, v in raw["assignment"].items()}, int(raw["K"]))


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
