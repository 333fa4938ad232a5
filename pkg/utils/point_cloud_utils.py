from dataclasses import dataclass, field
from typing import List, Optional, Sequence
import logging

import numpy as np
from scipy.spatial.distance import pdist, squareform

logger = logging.getLogger(__name__)

NORMALIZATION_MODES = ("zscore", "minmax")


@dataclass(frozen=True)
class PointCloud:
    """n x d table of finite reals with row and column labels"""
    values: np.ndarray
    row_labels: List[str] = field(default_factory=list)
    column_labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"❌ Point cloud must be a 2-D matrix, got {values.ndim}-D")
        n, d = values.shape
        if n < 1 or d < 1:
            raise ValueError(f"❌ Point cloud needs at least one row and one column, got {n}x{d}")
        if not np.all(np.isfinite(values)):
            raise ValueError("❌ Point cloud contains NaN or infinite entries")

        row_labels = list(self.row_labels) if self.row_labels else [str(i) for i in range(n)]
        column_labels = list(self.column_labels) if self.column_labels else [f"col{j}" for j in range(d)]
        if len(row_labels) != n:
            raise ValueError(f"❌ {len(row_labels)} row labels for {n} rows")
        if len(column_labels) != d:
            raise ValueError(f"❌ {len(column_labels)} column labels for {d} columns")

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "row_labels", row_labels)
        object.__setattr__(self, "column_labels", column_labels)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]

    def drop_columns(self, count: int) -> "PointCloud":
        """Point cloud without its first `count` columns"""
        return PointCloud(self.values[:, count:], self.row_labels, self.column_labels[count:])


@dataclass(frozen=True)
class DistanceMatrix:
    dist: np.ndarray

    def __post_init__(self):
        dist = np.array(self.dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise ValueError(f"❌ Distance matrix must be square, got shape {dist.shape}")
        if np.any(dist < 0):
            raise ValueError("❌ Distance matrix has negative entries")
        if not np.array_equal(dist, dist.T):
            raise ValueError("❌ Distance matrix is not symmetric")
        if np.any(np.diag(dist) != 0):
            raise ValueError("❌ Distance matrix has a non-zero diagonal")
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def upper_triangle(self) -> np.ndarray:
        rows, cols = np.triu_indices(self.n, k=1)
        return self.dist[rows, cols]


@dataclass(frozen=True)
class DistortionStats:
    min_original: float
    max_original: float
    mean_original: float
    min_reduced: float
    max_reduced: float
    mean_reduced: float
    pearson_correlation: float


class PointCloudUtils:
    @staticmethod
    def normalize_columns(pc: PointCloud, mode: str = "zscore",
                          columns: Optional[Sequence[int]] = None) -> PointCloud:
        """Rescale columns by z-score (population std) or to [0, 1]; constant columns become zeros"""
        if mode not in NORMALIZATION_MODES:
            raise ValueError(f"❌ Unknown normalization mode '{mode}', expected one of {NORMALIZATION_MODES}")

        values = pc.values.copy()
        targets = range(pc.n_columns) if columns is None else columns
        for j in targets:
            column = values[:, j]
            low, high = column.min(), column.max()
            if high == low:
                logger.warning(f"Column '{pc.column_labels[j]}' is constant; normalized to zeros")
                values[:, j] = 0.0
                continue
            if mode == "zscore":
                std = column.std()
                values[:, j] = (column - column.mean()) / std if std > 0 else 0.0
            else:
                values[:, j] = (column - low) / (high - low)

        return PointCloud(values, pc.row_labels, pc.column_labels)

    @staticmethod
    def pairwise_distances(pc: PointCloud) -> DistanceMatrix:
        """Euclidean distances between rows; each unordered pair computed once"""
        if pc.n_rows == 1:
            return DistanceMatrix(np.zeros((1, 1)))
        return DistanceMatrix(squareform(pdist(pc.values, metric="euclidean")))

    @staticmethod
    def distance_distortion_report(dm_original: DistanceMatrix, dm_reduced: DistanceMatrix) -> DistortionStats:
        """Compare upper-triangle distances of two matrices over the same points"""
        if dm_original.n != dm_reduced.n:
            raise ValueError(f"❌ Distance matrices cover {dm_original.n} and {dm_reduced.n} points")
        if dm_original.n < 2:
            raise ValueError("❌ Distortion report needs at least two points: no pairs to compare")

        original = dm_original.upper_triangle()
        reduced = dm_reduced.upper_triangle()
        return DistortionStats(
            min_original=float(original.min()),
            max_original=float(original.max()),
            mean_original=float(original.mean()),
            min_reduced=float(reduced.min()),
            max_reduced=float(reduced.max()),
            mean_reduced=float(reduced.mean()),
            pearson_correlation=PointCloudUtils.pearson(original, reduced),
        )

    @staticmethod
    def pearson(first: np.ndarray, second: np.ndarray) -> float:
        # Zero-variance sides: 1 when both are constant, 0 otherwise.
        first_centered = first - first.mean()
        second_centered = second - second.mean()
        first_norm = np.sqrt(np.dot(first_centered, first_centered))
        second_norm = np.sqrt(np.dot(second_centered, second_centered))
        if first_norm == 0 or second_norm == 0:
            return 1.0 if first_norm == second_norm else 0.0
        correlation = np.dot(first_centered, second_centered) / (first_norm * second_norm)
        return float(np.clip(correlation, -1.0, 1.0))
