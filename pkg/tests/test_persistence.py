import math

import numpy as np
import pytest

from conftest import UNIT_SQUARE, circle_points
from orchestration.step2_rips_filtration import build_rips
from orchestration.step3_persistence import (
    INF, MergeEvent, PersistenceDiagram, PersistencePair, Step3Persistence, betti_at, compute_merge_events,
    compute_persistence, diagram_to_csv, dim1_spike_count, merge_events_to_csv, write_diagram_csv, write_merge_csv,
)
from utils.point_cloud_utils import DistanceMatrix, PointCloud, PointCloudUtils

SQRT2 = math.sqrt(2)


def rips_of(points, max_edge_length=2.0, max_dimension=2):
    dm = PointCloudUtils.pairwise_distances(PointCloud(np.asarray(points, dtype=float)))
    return build_rips(dm, max_edge_length, max_dimension)


def triangle_tree(max_edge_length=10.0):
    dm = DistanceMatrix(np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]]))
    return build_rips(dm, max_edge_length, 2)


class TestComputePersistence:
    def test_single_point(self):
        diagram = compute_persistence(rips_of([[0.0, 0.0]]), 1)
        assert diagram.pairs == (PersistencePair(0, 0.0, INF),)

    def test_two_points(self):
        diagram = compute_persistence(rips_of([[0.0], [0.5]]), 1)
        assert diagram.pairs == (PersistencePair(0, 0.0, 0.5), PersistencePair(0, 0.0, INF))

    def test_unit_square(self):
        diagram = compute_persistence(rips_of(UNIT_SQUARE), 1)
        assert len(diagram.bars(0)) == 4
        assert sum(pair.is_infinite for pair in diagram.bars(0)) == 1
        (loop,) = diagram.bars(1)
        assert loop.birth == pytest.approx(1.0, abs=1e-9)
        assert loop.death == pytest.approx(SQRT2, abs=1e-9)

    def test_eight_points_on_circle_have_one_loop(self):
        for clearing in (True, False):
            diagram = compute_persistence(rips_of(circle_points(8)), 1, clearing=clearing)
            assert len(diagram.bars(1)) == 1

    def test_no_zero_length_bars(self):
        diagram = compute_persistence(rips_of([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]), 1)
        assert all(pair.death > pair.birth for pair in diagram.pairs)
        assert len(diagram.bars(0)) == 2

    def test_components_give_infinite_bars(self):
        diagram = compute_persistence(rips_of([[0.0], [0.1], [5.0], [5.1], [20.0]], max_edge_length=1.0), 1)
        assert sum(pair.is_infinite for pair in diagram.bars(0)) == 3

    def test_permutation_invariance(self):
        rng = np.random.default_rng(5)
        points = rng.random((10, 2))
        original = compute_persistence(rips_of(points, 0.8), 1)
        shuffled = compute_persistence(rips_of(points[rng.permutation(10)], 0.8), 1)
        assert len(original.pairs) == len(shuffled.pairs)
        for a, b in zip(original.pairs, shuffled.pairs):
            assert a.dimension == b.dimension
            assert a.birth == pytest.approx(b.birth)
            assert a.death == pytest.approx(b.death)

    def test_homology_dim_needs_higher_simplices(self):
        with pytest.raises(ValueError, match="max_dimension=2"):
            compute_persistence(rips_of(UNIT_SQUARE), 2)
        with pytest.raises(ValueError):
            compute_persistence(rips_of(UNIT_SQUARE), -1)

    def test_step_restricts_to_requested_dims(self):
        diagram, events = Step3Persistence((1,)).run(rips_of(UNIT_SQUARE))
        assert [pair.dimension for pair in diagram.pairs] == [1]
        assert len(events) == 3


class TestMergeEvents:
    def test_hand_run_example(self):
        events = compute_merge_events(triangle_tree())
        assert events == [MergeEvent(1.0, (0, 1), 1, 0), MergeEvent(2.0, (0, 2), 2, 0)]

    def test_no_edges(self):
        assert compute_merge_events(rips_of([[0.0], [5.0]], max_edge_length=1.0)) == []

    def test_collinear_chain(self):
        events = compute_merge_events(rips_of([[0.0], [1.0], [2.0], [3.0]], max_edge_length=1.0))
        assert [e.filtration_value for e in events] == [1.0, 1.0, 1.0]
        assert all(e.absorbed_root != e.surviving_root for e in events)

    def test_events_match_finite_dim0_bars(self):
        rng = np.random.default_rng(2)
        tree = rips_of(rng.random((15, 2)), 0.5)
        diagram = compute_persistence(tree, 1)
        events = compute_merge_events(tree)
        finite = sorted(pair.death for pair in diagram.bars(0) if not pair.is_infinite)
        assert finite == [e.filtration_value for e in events]


class TestBettiAndSpikes:
    def test_half_open_count(self):
        diagram = PersistenceDiagram(
            (PersistencePair(0, 0.0, 1.0), PersistencePair(0, 0.0, 2.0), PersistencePair(0, 0.0, INF)), 1
        )
        assert betti_at(diagram, 1.5, 0) == 2
        assert betti_at(diagram, 1.0, 0) == 2
        assert betti_at(diagram, 0.0, 0) == 3
        assert betti_at(diagram, 0.5, 1) == 0

    def test_square_betti(self):
        diagram = compute_persistence(rips_of(UNIT_SQUARE), 1)
        assert betti_at(diagram, 0.0, 0) == 4
        assert betti_at(diagram, 1.2, 1) == 1
        assert dim1_spike_count(diagram, 0.9, 1.1) == 1

    def test_betti_above_max_dimension(self):
        with pytest.raises(ValueError):
            betti_at(PersistenceDiagram((), 1), 0.5, 2)

    def test_spike_window(self):
        assert dim1_spike_count(PersistenceDiagram((), 1)) == 0
        with pytest.raises(ValueError):
            dim1_spike_count(PersistenceDiagram((), 1), 1.1, 0.9)


class TestPersistencePair:
    def test_zero_length_rejected(self):
        with pytest.raises(ValueError):
            PersistencePair(0, 1.0, 1.0)

    def test_persistence(self):
        assert PersistencePair(1, 1.0, 1.5).persistence == 0.5
        assert PersistencePair(0, 0.0).is_infinite


class TestCsv:
    def test_merge_csv(self, tmp_path):
        path = write_merge_csv(compute_merge_events(triangle_tree()), tmp_path / "merges.csv")
        assert path.read_text() == (
            "filtration,edge_u,edge_v,absorbed_root,surviving_root\n"
            "1,0,1,1,0\n"
            "2,0,2,2,0\n"
        )

    def test_empty_merge_csv_is_header_only(self):
        assert merge_events_to_csv([]) == "filtration,edge_u,edge_v,absorbed_root,surviving_root\n"

    def test_diagram_csv(self, tmp_path):
        diagram = compute_persistence(rips_of(UNIT_SQUARE), 1)
        path = write_diagram_csv(diagram, tmp_path / "diagram.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "dimension,birth,death"
        assert lines[1:4] == ["0,0,1"] * 3
        assert lines[4] == "0,0,inf"
        assert lines[5] == "1,1,1.4142135623730951"

    def test_diagram_csv_of_empty_diagram(self):
        assert diagram_to_csv(PersistenceDiagram((), 1)) == "dimension,birth,death\n"

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError):
            write_diagram_csv(PersistenceDiagram((), 1), tmp_path / "missing" / "diagram.csv")
