from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import networkx as nx
import numpy as np
from joblib import Parallel, delayed
from sklearn.cluster import DBSCAN

from config.tda_config import TDA_CONFIG
from utils.point_cloud_utils import PointCloud

logger = logging.getLogger(__name__)

NOISE = -1


@dataclass(frozen=True)
class ProjectedData:
    coords: np.ndarray
    component_loadings: np.ndarray
    explained_variance_ratio: np.ndarray
    dominant_columns: List[int]

    @property
    def n_rows(self) -> int:
        return self.coords.shape[0]

    @property
    def n_components(self) -> int:
        return self.coords.shape[1]


@dataclass(frozen=True)
class CoverElement:
    index: Tuple[int, ...]
    box: Tuple[Tuple[float, float], ...]

    def contains(self, coords: np.ndarray) -> np.ndarray:
        """Boolean mask of the rows whose leading len(box) coordinates lie in the closed box"""
        inside = np.ones(coords.shape[0], dtype=bool)
        for axis, (lo, hi) in enumerate(self.box):
            inside &= (coords[:, axis] >= lo) & (coords[:, axis] <= hi)
        return inside


@dataclass(frozen=True)
class MapperNode:
    id: int
    members: Tuple[int, ...]
    cover_index: Tuple[int, ...]
    cluster_label: int
    color_value: float


@dataclass(frozen=True)
class MapperGraph:
    nodes: List[MapperNode]
    edges: List[Tuple[int, int, int]]
    n_rows: int = 0

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(node.id for node in self.nodes)
        graph.add_edges_from((source, target, {"shared": shared}) for source, target, shared in self.edges)
        return graph


def pca_fit_transform(pc: PointCloud, k: int) -> ProjectedData:
    """Top-k principal components of the covariance matrix, sign-fixed and ordered deterministically"""
    n, d = pc.values.shape
    if not 1 <= k <= min(n - 1, d):
        raise ValueError(
            f"❌ Lens dimension {k} out of range: need 1 <= k <= min(n - 1, d) = {min(n - 1, d)} "
            f"for {n} row(s) and {d} column(s)"
        )

    centered = pc.values - pc.values.mean(axis=0)
    covariance = centered.T @ centered / n
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    eigenvalues = np.clip(eigenvalues, 0.0, None)

    order = _component_order(eigenvalues, eigenvectors)[:k]
    loadings = eigenvectors[:, order].T.copy()
    for row in loadings:
        lead = int(np.argmax(np.abs(row)))
        if row[lead] < 0:
            row *= -1.0

    total = eigenvalues.sum()
    ratios = eigenvalues[order] / total if total > 0 else np.zeros(k)
    dominant = [int(np.argmax(np.abs(row))) for row in loadings]

    logger.info(
        f"PCA k={k}: explained variance {np.round(ratios, 4).tolist()}, dominant columns "
        f"{[pc.column_labels[j] for j in dominant]}"
    )
    return ProjectedData(centered @ loadings.T, loadings, ratios, dominant)


def _component_order(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> List[int]:
    # Descending eigenvalue; ties (within tolerance) go to the eigenvector whose
    # largest-magnitude loading sits in the smallest column index.
    tolerance = 1e-10 * max(float(eigenvalues.max()), 1e-300)
    lead = np.argmax(np.abs(eigenvectors), axis=0)
    descending = sorted(range(len(eigenvalues)), key=lambda i: -eigenvalues[i])

    order: List[int] = []
    group = [descending[0]]
    for i in descending[1:]:
        if eigenvalues[group[0]] - eigenvalues[i] <= tolerance:
            group.append(i)
        else:
            order.extend(sorted(group, key=lambda j: (lead[j], j)))
            group = [i]
    order.extend(sorted(group, key=lambda j: (lead[j], j)))
    return order


def build_cover(coords: np.ndarray, n_intervals: int = TDA_CONFIG["mapper"]["n_intervals"],
                overlap: float = TDA_CONFIG["mapper"]["overlap"]) -> List[CoverElement]:
    """Cartesian product of per-axis overlapping intervals spanning the data range"""
    if n_intervals < 1:
        raise ValueError(f"❌ n_intervals must be at least 1, got {n_intervals}")
    if not 0 <= overlap < 1:
        raise ValueError(f"❌ overlap must lie in [0, 1), got {overlap}")

    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]

    per_axis = [_axis_intervals(coords[:, axis], n_intervals, overlap, axis) for axis in range(coords.shape[1])]
    cover = []
    for combination in product(*(list(enumerate(intervals)) for intervals in per_axis)):
        cover.append(CoverElement(
            index=tuple(i for i, _ in combination),
            box=tuple(interval for _, interval in combination),
        ))
    return cover


def _axis_intervals(values: np.ndarray, n_intervals: int, overlap: float, axis: int) -> List[Tuple[float, float]]:
    low, high = float(values.min()), float(values.max())
    if high == low:
        logger.warning(f"Cover axis {axis} is degenerate (all values {low}); using a single interval")
        return [(low - 0.5, high + 0.5)]

    length = (high - low) / (n_intervals * (1 - overlap) + overlap)
    step = length * (1 - overlap)
    starts = [low + i * step for i in range(n_intervals)]
    intervals = []
    for i, start in enumerate(starts):
        if i == n_intervals - 1:
            end = high
        else:
            # Rounding must never open a gap before the next start.
            end = max(start + length, starts[i + 1])
        intervals.append((low if i == 0 else start, end))
    return intervals


def dbscan(coords: np.ndarray, eps: float = TDA_CONFIG["mapper"]["eps"],
           min_samples: int = TDA_CONFIG["mapper"]["min_samples"]) -> np.ndarray:
    """Density clustering; cluster ids follow the first core point in row order, NOISE = -1"""
    if eps <= 0:
        raise ValueError(f"❌ eps must be positive, got {eps}")
    if min_samples < 1:
        raise ValueError(f"❌ min_samples must be at least 1, got {min_samples}")
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 1:
        coords = coords[:, None]
    if coords.shape[0] == 0:
        return np.zeros(0, dtype=int)
    return DBSCAN(eps=eps, min_samples=min_samples, metric="euclidean").fit(coords).labels_.astype(int)


def _cluster_element(element: CoverElement, coords: np.ndarray, eps: float,
                     min_samples: int) -> List[Tuple[int, List[int]]]:
    rows = np.flatnonzero(element.contains(coords))
    if rows.size == 0:
        return []
    labels = dbscan(coords[rows], eps, min_samples)
    clusters = []
    for label in sorted(set(labels.tolist()) - {NOISE}):
        clusters.append((label, rows[labels == label].tolist()))
    return clusters


def build_mapper_graph(projected: ProjectedData, cover: Sequence[CoverElement],
                       eps: float = TDA_CONFIG["mapper"]["eps"],
                       min_samples: int = TDA_CONFIG["mapper"]["min_samples"],
                       n_jobs: int = TDA_CONFIG["mapper"]["n_jobs"]) -> MapperGraph:
    """Cluster each cover pre-image and connect clusters that share rows"""
    coords = projected.coords
    if cover and len(cover[0].box) > projected.n_components:
        raise ValueError(
            f"❌ Cover has {len(cover[0].box)} axes but the projection only {projected.n_components}"
        )

    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_cluster_element)(element, coords, eps, min_samples) for element in cover
    )

    nodes: List[MapperNode] = []
    for element, clusters in zip(cover, results):
        for label, members in clusters:
            nodes.append(MapperNode(
                id=len(nodes),
                members=tuple(members),
                cover_index=element.index,
                cluster_label=int(label),
                color_value=float(np.mean(members)),
            ))

    memberships: Dict[int, List[int]] = {}
    for node in nodes:
        for row in node.members:
            memberships.setdefault(row, []).append(node.id)
    shared: Dict[Tuple[int, int], int] = {}
    for node_ids in memberships.values():
        for a in range(len(node_ids)):
            for b in range(a + 1, len(node_ids)):
                key = (min(node_ids[a], node_ids[b]), max(node_ids[a], node_ids[b]))
                shared[key] = shared.get(key, 0) + 1
    edges = [(source, target, count) for (source, target), count in sorted(shared.items())]

    if not nodes:
        logger.warning("Mapper graph is empty: every point was noise in every cover element")
    logger.info(f"Mapper graph: {len(nodes)} node(s), {len(edges)} edge(s)")
    return MapperGraph(nodes, edges, projected.n_rows)


def graph_cycle_rank(g: MapperGraph) -> int:
    """E - V + C"""
    graph = g.to_networkx()
    components = nx.number_connected_components(graph) if graph.number_of_nodes() else 0
    return graph.number_of_edges() - graph.number_of_nodes() + components


class Step4Mapper:
    def __init__(self, lens_dim: int = TDA_CONFIG["mapper"]["lens_dim"], cover_dim: Optional[int] = None,
                 n_intervals: int = TDA_CONFIG["mapper"]["n_intervals"],
                 overlap: float = TDA_CONFIG["mapper"]["overlap"],
                 eps: float = TDA_CONFIG["mapper"]["eps"],
                 min_samples: int = TDA_CONFIG["mapper"]["min_samples"],
                 n_jobs: int = TDA_CONFIG["mapper"]["n_jobs"]):
        self.lens_dim = lens_dim
        self.cover_dim = cover_dim or lens_dim
        self.n_intervals = n_intervals
        self.overlap = overlap
        self.eps = eps
        self.min_samples = min_samples
        self.n_jobs = n_jobs

    def run(self, pc: PointCloud) -> Tuple[ProjectedData, MapperGraph]:
        if not 1 <= self.cover_dim <= self.lens_dim:
            raise ValueError(f"❌ cover_dim={self.cover_dim} must lie in 1 .. lens_dim={self.lens_dim}")
        projected = pca_fit_transform(pc, self.lens_dim)
        cover = build_cover(projected.coords[:, :self.cover_dim], self.n_intervals, self.overlap)
        graph = build_mapper_graph(projected, cover, self.eps, self.min_samples, self.n_jobs)
        return projected, graph
