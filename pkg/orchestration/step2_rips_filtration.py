from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from config.tda_config import TDA_CONFIG
from utils.file_utils import FileUtils
from utils.point_cloud_utils import DistanceMatrix, PointCloud, PointCloudUtils

logger = logging.getLogger(__name__)

# Strictly increasing vertex indices; dimension = len - 1.
Simplex = Tuple[int, ...]


def as_simplex(vertices: Sequence[int]) -> Simplex:
    simplex = tuple(sorted(int(v) for v in vertices))
    if not simplex:
        raise ValueError("❌ A simplex needs at least one vertex")
    if len(set(simplex)) != len(simplex):
        raise ValueError(f"❌ Repeated vertex in simplex {tuple(vertices)}")
    return simplex


class _SimplexTreeNode:
    __slots__ = ("filtration", "children")

    def __init__(self, filtration: float):
        self.filtration = filtration
        self.children: Dict[int, "_SimplexTreeNode"] = {}


class SimplexTree:
    """Trie of filtered simplices keyed by their sorted vertex sequence"""

    def __init__(self, n_vertices: int, max_edge_length: float, max_dimension: int):
        self.n_vertices = n_vertices
        self.max_edge_length = max_edge_length
        self.max_dimension = max_dimension
        self._root: Dict[int, _SimplexTreeNode] = {}
        self._counts = [0] * (max_dimension + 1)
        self._ordered: Optional[List[Tuple[Simplex, float]]] = None

    def insert(self, simplex: Simplex, filtration: float) -> _SimplexTreeNode:
        """Add a simplex whose prefix face is already stored"""
        if len(simplex) - 1 > self.max_dimension:
            raise ValueError(f"❌ Simplex {simplex} exceeds max_dimension={self.max_dimension}")
        children = self._root
        for vertex in simplex[:-1]:
            node = children.get(vertex)
            if node is None:
                raise ValueError(f"❌ Cannot insert {simplex}: face {simplex[:-1]} is missing")
            children = node.children
        node = children.get(simplex[-1])
        if node is None:
            node = _SimplexTreeNode(filtration)
            children[simplex[-1]] = node
            self._counts[len(simplex) - 1] += 1
            self._ordered = None
        return node

    def find(self, simplex: Simplex) -> Optional[_SimplexTreeNode]:
        children = self._root
        node = None
        for vertex in simplex:
            node = children.get(vertex)
            if node is None:
                return None
            children = node.children
        return node

    def __iter__(self) -> Iterator[Tuple[Simplex, float]]:
        """Depth-first, lexicographic order"""
        stack = [((vertex,), self._root[vertex]) for vertex in sorted(self._root, reverse=True)]
        while stack:
            simplex, node = stack.pop()
            yield simplex, node.filtration
            for vertex in sorted(node.children, reverse=True):
                stack.append((simplex + (vertex,), node.children[vertex]))

    @property
    def num_simplices(self) -> int:
        return sum(self._counts)

    @property
    def dimension(self) -> int:
        """Largest dimension actually present"""
        present = [k for k, count in enumerate(self._counts) if count]
        return present[-1] if present else -1

    def count(self, dimension: int) -> int:
        if dimension < 0 or dimension >= len(self._counts):
            return 0
        return self._counts[dimension]

    def ordered(self) -> List[Tuple[Simplex, float]]:
        if self._ordered is None:
            self._ordered = sorted(self, key=lambda item: (item[1], len(item[0]), item[0]))
        return self._ordered


def build_rips(dm: DistanceMatrix, max_edge_length: float = TDA_CONFIG["rips"]["max_edge_length"],
               max_dimension: int = TDA_CONFIG["rips"]["max_dimension"]) -> SimplexTree:
    """Vietoris-Rips filtration: edges up to max_edge_length, cliques up to max_dimension"""
    if max_dimension < 1:
        raise ValueError(f"❌ max_dimension must be at least 1, got {max_dimension}")
    if max_edge_length <= 0:
        raise ValueError(f"❌ max_edge_length must be positive, got {max_edge_length}")

    n = dm.n
    tree = SimplexTree(n, float(max_edge_length), int(max_dimension))
    for vertex in range(n):
        tree.insert((vertex,), 0.0)

    rows, cols = np.triu_indices(n, k=1)
    lengths = dm.dist[rows, cols]
    keep = lengths <= max_edge_length
    rows, cols, lengths = rows[keep], cols[keep], lengths[keep]
    order = np.lexsort((cols, rows, lengths))

    # upper_neighbors[v][w] = length of edge (v, w) for w > v
    upper_neighbors: List[Dict[int, float]] = [{} for _ in range(n)]
    for idx in order:
        u, v, length = int(rows[idx]), int(cols[idx]), float(lengths[idx])
        tree.insert((u, v), length)
        upper_neighbors[u][v] = length

    if max_dimension >= 2:
        for u in range(n):
            vertex_node = tree.find((u,))
            for v in sorted(upper_neighbors[u]):
                candidates = set(upper_neighbors[u]).intersection(upper_neighbors[v])
                if candidates:
                    _expand(tree, vertex_node.children[v], (u, v), candidates, upper_neighbors)

    logger.info(
        f"Rips complex of dimension {tree.dimension}: "
        + ", ".join(f"{tree.count(k)} {k}-simplices" for k in range(max_dimension + 1))
    )
    return tree


def _expand(tree: SimplexTree, node: _SimplexTreeNode, simplex: Simplex, candidates,
            upper_neighbors: List[Dict[int, float]]) -> None:
    """Add every coface simplex + (w,) for common upper neighbors w, recursively"""
    if len(simplex) > tree.max_dimension:
        return
    can_grow = len(simplex) + 1 <= tree.max_dimension
    for w in sorted(candidates):
        value = max(node.filtration, max(upper_neighbors[v][w] for v in simplex))
        child = _SimplexTreeNode(value)
        node.children[w] = child
        tree._counts[len(simplex)] += 1
        if can_grow:
            deeper = candidates.intersection(upper_neighbors[w])
            if deeper:
                _expand(tree, child, simplex + (w,), deeper, upper_neighbors)
    tree._ordered = None


def simplices_in_filtration_order(tree: SimplexTree) -> List[Tuple[Simplex, float]]:
    """Ascending filtration value, then dimension, then lexicographic vertices"""
    return tree.ordered()


def simplex_count(tree: SimplexTree, dimension: int) -> int:
    return tree.count(dimension)


def filtration_of(tree: SimplexTree, simplex: Sequence[int]) -> Optional[float]:
    node = tree.find(as_simplex(simplex))
    return None if node is None else node.filtration


def dump_simplices(tree: SimplexTree, path: Union[str, Path]) -> Path:
    """Debug dump: `v0 v1 ... vk<TAB>filtration`, one simplex per line, in filtration order"""
    lines = [
        " ".join(str(v) for v in simplex) + "\t" + FileUtils.format_float(value)
        for simplex, value in tree.ordered()
    ]
    return FileUtils.atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


class Step2RipsFiltration:
    def __init__(self, max_edge_length: float = TDA_CONFIG["rips"]["max_edge_length"],
                 max_dimension: int = TDA_CONFIG["rips"]["max_dimension"]):
        self.max_edge_length = max_edge_length
        self.max_dimension = max_dimension

    def build(self, pc: PointCloud) -> SimplexTree:
        """Distances then Rips complex for a (normalized) point cloud"""
        dm = PointCloudUtils.pairwise_distances(pc)
        return build_rips(dm, self.max_edge_length, self.max_dimension)
