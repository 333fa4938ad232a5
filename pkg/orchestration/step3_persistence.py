from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Set, Tuple, Union
import math
import logging

import pandas as pd

from config.tda_config import TDA_CONFIG
from orchestration.step2_rips_filtration import Simplex, SimplexTree
from utils.file_utils import FileUtils
from utils.union_find import UnionFind

logger = logging.getLogger(__name__)

INF = math.inf


@dataclass(frozen=True, order=True)
class PersistencePair:
    dimension: int
    birth: float
    death: float = INF

    def __post_init__(self):
        if self.dimension < 0:
            raise ValueError(f"❌ Negative homology dimension {self.dimension}")
        if self.birth < 0:
            raise ValueError(f"❌ Negative birth {self.birth}")
        if not self.death > self.birth:
            raise ValueError(f"❌ Bar ({self.birth}, {self.death}) has no positive length")

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)

    @property
    def persistence(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    pairs: Tuple[PersistencePair, ...]
    max_homology_dimension: int

    def bars(self, dimension: int) -> List[PersistencePair]:
        return [pair for pair in self.pairs if pair.dimension == dimension]

    def restricted(self, dimensions: Iterable[int]) -> "PersistenceDiagram":
        keep = set(dimensions)
        return PersistenceDiagram(
            tuple(pair for pair in self.pairs if pair.dimension in keep),
            min(self.max_homology_dimension, max(keep)) if keep else self.max_homology_dimension,
        )


@dataclass(frozen=True)
class MergeEvent:
    filtration_value: float
    edge: Simplex
    absorbed_root: int
    surviving_root: int


def compute_persistence(tree: SimplexTree,
                        max_homology_dim: int = max(TDA_CONFIG["persistence"]["homology_dims"]),
                        clearing: bool = True) -> PersistenceDiagram:
    """Mod-2 boundary matrix reduction over the filtration order.

    With `clearing` the columns are reduced one dimension at a time, highest
    first, skipping columns already known to be positive; otherwise a single
    left-to-right pass over all columns is made. Both give the same pairs.
    """
    if max_homology_dim < 0 or max_homology_dim > tree.max_dimension - 1:
        raise ValueError(
            f"❌ max_homology_dim={max_homology_dim} needs simplices of dimension {max_homology_dim + 1}, "
            f"but the complex was built with max_dimension={tree.max_dimension}"
        )

    top = max_homology_dim + 1
    ordered = [(simplex, value) for simplex, value in tree.ordered() if len(simplex) - 1 <= top]
    if clearing:
        raw_pairs = _reduce_with_clearing(ordered, top)
    else:
        raw_pairs = _reduce_standard(ordered)

    pairs = []
    for dimension, birth, death in raw_pairs:
        if dimension > max_homology_dim or death == birth:
            continue
        pairs.append(PersistencePair(dimension, birth, death))
    pairs.sort()

    diagram = PersistenceDiagram(tuple(pairs), max_homology_dim)
    logger.info(
        "Persistence: " + ", ".join(f"{len(diagram.bars(k))} dim-{k} bar(s)" for k in range(max_homology_dim + 1))
    )
    return diagram


def _faces(simplex: Simplex) -> List[Simplex]:
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


def _reduce_with_clearing(ordered: List[Tuple[Simplex, float]], top: int) -> List[Tuple[int, float, float]]:
    # Columns as int bitmasks over the local index of the (k-1)-simplices;
    # the local order of each dimension agrees with the global order.
    by_dim: List[List[Tuple[Simplex, float]]] = [[] for _ in range(top + 1)]
    for simplex, value in ordered:
        by_dim[len(simplex) - 1].append((simplex, value))
    index_of: List[Dict[Simplex, int]] = [
        {simplex: i for i, (simplex, _) in enumerate(simplices)} for simplices in by_dim
    ]

    cleared: List[Set[int]] = [set() for _ in range(top + 1)]
    negative: List[Set[int]] = [set() for _ in range(top + 1)]
    raw_pairs = []

    for k in range(top, 0, -1):
        faces_index = index_of[k - 1]
        pivots: Dict[int, int] = {}
        for col, (simplex, value) in enumerate(by_dim[k]):
            if col in cleared[k]:
                continue
            mask = 0
            for face in _faces(simplex):
                mask |= 1 << faces_index[face]
            while mask:
                low = mask.bit_length() - 1
                other = pivots.get(low)
                if other is None:
                    pivots[low] = mask
                    cleared[k - 1].add(low)
                    negative[k].add(col)
                    raw_pairs.append((k - 1, by_dim[k - 1][low][1], value))
                    break
                mask ^= other

    for k in range(top):
        for col, (simplex, value) in enumerate(by_dim[k]):
            if col not in negative[k] and col not in cleared[k]:
                raw_pairs.append((k, value, INF))
    return raw_pairs


def _reduce_standard(ordered: List[Tuple[Simplex, float]]) -> List[Tuple[int, float, float]]:
    index_of = {simplex: i for i, (simplex, _) in enumerate(ordered)}
    pivots: Dict[int, int] = {}
    paired: Set[int] = set()
    raw_pairs = []

    for col, (simplex, value) in enumerate(ordered):
        mask = 0
        if len(simplex) > 1:
            for face in _faces(simplex):
                mask |= 1 << index_of[face]
        while mask:
            low = mask.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = mask
                paired.update((low, col))
                birth_simplex, birth_value = ordered[low]
                raw_pairs.append((len(birth_simplex) - 1, birth_value, value))
                break
            mask ^= other

    for col, (simplex, value) in enumerate(ordered):
        if col not in paired:
            raw_pairs.append((len(simplex) - 1, value, INF))
    return raw_pairs


def compute_merge_events(tree: SimplexTree) -> List[MergeEvent]:
    """Union-find over edges in filtration order; one event per merge of two components"""
    components = UnionFind(tree.n_vertices)
    events = []
    for simplex, value in tree.ordered():
        if len(simplex) != 2:
            continue
        merged, absorbed, surviving = components.unite(*simplex)
        if merged:
            events.append(MergeEvent(value, simplex, absorbed, surviving))
    logger.info(f"{len(events)} merge event(s), {components.components} final component(s)")
    return events


def betti_at(diagram: PersistenceDiagram, t: float, k: int) -> int:
    """Number of dim-k bars alive at t, bars taken half-open [birth, death)"""
    if k > diagram.max_homology_dimension:
        raise ValueError(
            f"❌ Diagram only covers dimensions up to {diagram.max_homology_dimension}, asked for {k}"
        )
    return sum(1 for pair in diagram.pairs if pair.dimension == k and pair.birth <= t < pair.death)


def dim1_spike_count(diagram: PersistenceDiagram,
                     window_low: float = TDA_CONFIG["persistence"]["spike_window"][0],
                     window_high: float = TDA_CONFIG["persistence"]["spike_window"][1]) -> int:
    """Number of dim-1 bars born inside [window_low, window_high]"""
    if not window_low < window_high:
        raise ValueError(f"❌ Empty spike window [{window_low}, {window_high}]")
    return sum(1 for pair in diagram.pairs if pair.dimension == 1 and window_low <= pair.birth <= window_high)


def diagram_to_csv(diagram: PersistenceDiagram) -> str:
    frame = pd.DataFrame(
        [(str(p.dimension), FileUtils.format_float(p.birth), FileUtils.format_float(p.death)) for p in diagram.pairs],
        columns=["dimension", "birth", "death"],
    )
    return frame.to_csv(index=False, lineterminator="\n")


def merge_events_to_csv(events: Sequence[MergeEvent]) -> str:
    frame = pd.DataFrame(
        [
            (FileUtils.format_float(e.filtration_value), str(e.edge[0]), str(e.edge[1]),
             str(e.absorbed_root), str(e.surviving_root))
            for e in events
        ],
        columns=["filtration", "edge_u", "edge_v", "absorbed_root", "surviving_root"],
    )
    return frame.to_csv(index=False, lineterminator="\n")


def write_diagram_csv(diagram: PersistenceDiagram, path: Union[str, Path]) -> Path:
    return FileUtils.atomic_write_text(path, diagram_to_csv(diagram))


def write_merge_csv(events: Sequence[MergeEvent], path: Union[str, Path]) -> Path:
    return FileUtils.atomic_write_text(path, merge_events_to_csv(events))


class Step3Persistence:
    def __init__(self, homology_dims: Sequence[int] = TDA_CONFIG["persistence"]["homology_dims"]):
        self.homology_dims = tuple(sorted(set(homology_dims)))

    def run(self, tree: SimplexTree) -> Tuple[PersistenceDiagram, List[MergeEvent]]:
        diagram = compute_persistence(tree, max(self.homology_dims))
        return diagram.restricted(self.homology_dims), compute_merge_events(tree)
