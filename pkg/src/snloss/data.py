"""Labeled feature-vector datasets: synthesis, CSV I/O, and query/gallery splits.

A dataset is a columnar store of feature vectors with integer identity and
camera labels. Synthetic data places one Gaussian cluster per identity plus a
per-camera offset, which stands in for real image features while keeping every
experiment runnable on a CPU in seconds.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

FLOAT_FORMAT = "%.17g"  # lossless text form for float64


@dataclass(frozen=True)
class LabeledSample:
    """One feature vector with its identity label and camera tag."""

    sample_id: int
    identity: int
    camera: int
    features: np.ndarray


@dataclass
class Dataset:
    """Ordered collection of labeled samples stored column-wise.

    ``features`` is (N, D) float64; ``identities``, ``cameras`` and
    ``sample_ids`` are (N,) int64. ``sample_ids`` are unique within a dataset
    and survive subsetting, so split provenance can always be traced.
    """

    features: np.ndarray
    identities: np.ndarray
    cameras: np.ndarray
    sample_ids: np.ndarray
    _identity_index: dict[int, np.ndarray] | None = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=np.float64)
        self.identities = np.asarray(self.identities, dtype=np.int64)
        self.cameras = np.asarray(self.cameras, dtype=np.int64)
        self.sample_ids = np.asarray(self.sample_ids, dtype=np.int64)
        n = len(self.features)
        if self.features.ndim != 2:
            raise ValidationError("features must be a 2-d array")
        for name, col in (
            ("identities", self.identities),
            ("cameras", self.cameras),
            ("sample_ids", self.sample_ids),
        ):
            if col.shape != (n,):
                raise ValidationError(f"{name} must have one entry per sample")
        if not np.isfinite(self.features).all():
            raise ValidationError("features contain non-finite entries")
        if np.any(self.identities < 0) or np.any(self.cameras < 0):
            raise ValidationError("identity and camera labels must be >= 0")
        if len(np.unique(self.sample_ids)) != n:
            raise ValidationError("sample_ids must be unique within a dataset")

    def __len__(self) -> int:
        return len(self.features)

    @property
    def dimension(self) -> int:
        return self.features.shape[1]

    @property
    def identity_index(self) -> dict[int, np.ndarray]:
        """Map identity label -> array of row indices, built on first use."""
        if self._identity_index is None:
            index: dict[int, np.ndarray] = {}
            for ident in np.unique(self.identities):
                index[int(ident)] = np.flatnonzero(self.identities == ident)
            self._identity_index = index
        return self._identity_index

    @property
    def num_identities(self) -> int:
        return len(self.identity_index)

    def sample(self, i: int) -> LabeledSample:
        return LabeledSample(
            sample_id=int(self.sample_ids[i]),
            identity=int(self.identities[i]),
            camera=int(self.cameras[i]),
            features=self.features[i],
        )

    def subset(self, indices: np.ndarray) -> "Dataset":
        """New dataset holding the given rows, original sample_ids kept."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            features=self.features[idx].copy(),
            identities=self.identities[idx].copy(),
            cameras=self.cameras[idx].copy(),
            sample_ids=self.sample_ids[idx].copy(),
        )


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for an identity-clustered Gaussian dataset.

    Each identity gets a center drawn from N(0, identity_spread^2 I), each
    camera a shared offset with std ``camera_shift``, and each sample adds
    isotropic noise with std ``intra_spread``. Cameras are assigned
    round-robin within each identity.
    """

    num_identities: int
    samples_per_identity: int
    num_cameras: int = 2
    dimension: int = 128
    identity_spread: float = 1.0
    intra_spread: float = 0.3
    camera_shift: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if self.num_identities <= 0:
            raise ValidationError("num_identities must be positive")
        if self.samples_per_identity <= 0:
            raise ValidationError("samples_per_identity must be positive")
        if self.num_cameras <= 0:
            raise ValidationError("num_cameras must be positive")
        if self.dimension <= 0:
            raise ValidationError("dimension must be positive")
        for name, value in (
            ("identity_spread", self.identity_spread),
            ("intra_spread", self.intra_spread),
            ("camera_shift", self.camera_shift),
        ):
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite")
        if self.identity_spread <= 0:
            raise ValidationError("identity_spread must be positive")
        if self.intra_spread <= 0:
            raise ValidationError("intra_spread must be positive")
        if self.camera_shift < 0:
            raise ValidationError("camera_shift must be non-negative")


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """Generate an identity-clustered dataset, deterministic for a fixed seed."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n = spec.num_identities * spec.samples_per_identity

    centers = rng.normal(0.0, spec.identity_spread,
                         size=(spec.num_identities, spec.dimension))
    offsets = rng.normal(0.0, spec.camera_shift,
                         size=(spec.num_cameras, spec.dimension))
    noise = rng.normal(0.0, spec.intra_spread, size=(n, spec.dimension))

    identities = np.repeat(np.arange(spec.num_identities), spec.samples_per_identity)
    cameras = np.tile(np.arange(spec.samples_per_identity) % spec.num_cameras,
                      spec.num_identities)
    features = centers[identities] + offsets[cameras] + noise
    return Dataset(
        features=features,
        identities=identities,
        cameras=cameras,
        sample_ids=np.arange(n),
    )


def save_features(dataset: Dataset, path) -> None:
    """Write a dataset as CSV: header ``id,camera,f0,...``, 17-digit floats."""
    d = dataset.dimension
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "camera"] + [f"f{i}" for i in range(d)])
        for i in range(len(dataset)):
            row = [str(int(dataset.identities[i])), str(int(dataset.cameras[i]))]
            row += [FLOAT_FORMAT % v for v in dataset.features[i]]
            writer.writerow(row)


_FEATURE_COL = re.compile(r"f(\d+)$")


def load_features(path) -> Dataset:
    """Read a feature CSV written by :func:`save_features` (or compatible).

    The header must be ``id,camera,f0,...,f{D-1}``; every data row needs the
    same width. Errors name the offending data row (1-based).
    """
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file: missing header") from None
        header = [h.strip() for h in header]
        if len(header) < 3 or header[0] != "id" or header[1] != "camera":
            raise ParseError("header must start with 'id,camera' followed by feature columns")
        for pos, name in enumerate(header[2:]):
            m = _FEATURE_COL.match(name)
            if not m or int(m.group(1)) != pos:
                raise ParseError(f"feature columns must be f0..f{{D-1}} in order, got {name!r}")
        d = len(header) - 2

        identities, cameras, rows = [], [], []
        for rownum, row in enumerate(reader, start=1):
            if len(row) != d + 2:
                raise ParseError(
                    f"row {rownum}: expected {d + 2} columns, got {len(row)}")
            try:
                identities.append(int(row[0]))
                cameras.append(int(row[1]))
                rows.append([float(v) for v in row[2:]])
            except ValueError as exc:
                raise ParseError(f"row {rownum}: non-numeric entry ({exc})") from None
    if not rows:
        raise ParseError("file has a header but no data rows")
    return Dataset(
        features=np.array(rows, dtype=np.float64),
        identities=np.array(identities, dtype=np.int64),
        cameras=np.array(cameras, dtype=np.int64),
        sample_ids=np.arange(len(rows)),
    )


def split_query_gallery(dataset: Dataset, query_fraction: float,
                        seed: int) -> tuple[Dataset, Dataset]:
    """Split per identity into held-out query rows and gallery rows.

    Every identity lands in both splits (at least one sample each side); the
    per-identity query count is round(count * query_fraction), clamped to
    [1, count-1]. Deterministic for a fixed seed.
    """
    if not 0.0 < query_fraction < 1.0:
        raise ValidationError("query_fraction must lie in (0, 1)")
    singles = [ident for ident, idx in dataset.identity_index.items() if len(idx) < 2]
    if singles:
        raise ValidationError(
            f"identities with a single sample cannot be split: {sorted(singles)}")

    rng = np.random.default_rng(seed)
    query_rows: list[np.ndarray] = []
    for ident in sorted(dataset.identity_index):
        idx = dataset.identity_index[ident]
        n_query = int(round(len(idx) * query_fraction))
        n_query = min(max(n_query, 1), len(idx) - 1)
        query_rows.append(rng.choice(idx, size=n_query, replace=False))

    query_mask = np.zeros(len(dataset), dtype=bool)
    query_mask[np.concatenate(query_rows)] = True
    return (dataset.subset(np.flatnonzero(query_mask)),
            dataset.subset(np.flatnonzero(~query_mask)))


def relabel_identities(dataset: Dataset, offset: int) -> Dataset:
    """Copy of the dataset with every identity label shifted by ``offset``."""
    if offset < 0:
        raise ValidationError("identity offset must be non-negative")
    return Dataset(
        features=dataset.features.copy(),
        identities=dataset.identities + offset,
        cameras=dataset.cameras.copy(),
        sample_ids=dataset.sample_ids.copy(),
    )
