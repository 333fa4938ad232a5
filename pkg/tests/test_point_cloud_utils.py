import math

import numpy as np
import pytest

from utils.file_utils import FileUtils
from utils.point_cloud_utils import DistanceMatrix, PointCloud, PointCloudUtils
from utils.union_find import UnionFind


class TestPointCloud:
    def test_default_labels(self):
        pc = PointCloud(np.zeros((2, 3)))
        assert pc.row_labels == ["0", "1"]
        assert pc.column_labels == ["col0", "col1", "col2"]
        assert (pc.n_rows, pc.n_columns) == (2, 3)

    def test_values_are_read_only(self):
        pc = PointCloud([[1.0, 2.0]])
        with pytest.raises(ValueError):
            pc.values[0, 0] = 5.0

    @pytest.mark.parametrize("values", [[[1.0, float("nan")]], [[float("inf")]], np.zeros((0, 2)), [1.0, 2.0]])
    def test_rejects_bad_matrices(self, values):
        with pytest.raises(ValueError):
            PointCloud(values)

    def test_label_count_must_match(self):
        with pytest.raises(ValueError, match="row labels"):
            PointCloud([[1.0], [2.0]], ["only one"])

    def test_drop_columns(self):
        pc = PointCloud([[1.0, 2.0, 3.0]], column_labels=["year", "week", "deaths"])
        dropped = pc.drop_columns(2)
        assert dropped.column_labels == ["deaths"]
        assert dropped.values.tolist() == [[3.0]]


class TestNormalizeColumns:
    def test_zscore_uses_population_std(self):
        pc = PointCloud([[1.0], [2.0], [3.0]])
        z = PointCloudUtils.normalize_columns(pc, "zscore")
        assert z.values[:, 0] == pytest.approx([-1.224744871, 0.0, 1.224744871])

    def test_minmax(self):
        pc = PointCloud([[2.0], [4.0], [6.0]])
        assert PointCloudUtils.normalize_columns(pc, "minmax").values[:, 0].tolist() == [0.0, 0.5, 1.0]

    def test_constant_column_becomes_zeros(self, caplog):
        pc = PointCloud([[7.0, 1.0], [7.0, 2.0]], column_labels=["flat", "x"])
        z = PointCloudUtils.normalize_columns(pc)
        assert z.values[:, 0].tolist() == [0.0, 0.0]
        assert "flat" in caplog.text

    def test_column_subset_leaves_other_columns(self):
        pc = PointCloud([[2020.0, 1.0], [2021.0, 3.0]])
        z = PointCloudUtils.normalize_columns(pc, "zscore", columns=[1])
        assert z.values[:, 0].tolist() == [2020.0, 2021.0]
        assert z.values[:, 1].tolist() == [-1.0, 1.0]

    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="Unknown normalization"):
            PointCloudUtils.normalize_columns(PointCloud([[1.0]]), "robust")

    def test_zscore_is_idempotent(self):
        values = np.random.default_rng(5).normal(10.0, 3.0, size=(10, 4))
        values[:, 2] = 4.0
        once = PointCloudUtils.normalize_columns(PointCloud(values), "zscore")
        twice = PointCloudUtils.normalize_columns(once, "zscore")
        assert np.allclose(twice.values, once.values, rtol=0.0, atol=1e-9)


class TestDistances:
    def test_pairwise_distances_of_square(self):
        dm = PointCloudUtils.pairwise_distances(PointCloud([[0, 0], [1, 0], [1, 1], [0, 1]]))
        assert dm.dist[0, 1] == 1.0
        assert dm.dist[0, 2] == pytest.approx(math.sqrt(2))
        assert np.array_equal(dm.dist, dm.dist.T)
        assert dm.upper_triangle().shape == (6,)

    def test_single_point(self):
        dm = PointCloudUtils.pairwise_distances(PointCloud([[3.0, 4.0]]))
        assert dm.dist.shape == (1, 1) and dm.n == 1

    def test_matches_double_loop(self):
        points = np.random.default_rng(8).normal(size=(5, 4))
        dm = PointCloudUtils.pairwise_distances(PointCloud(points))
        for i in range(5):
            for j in range(5):
                expected = math.sqrt(sum((points[i, c] - points[j, c]) ** 2 for c in range(4)))
                assert dm.dist[i, j] == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_triangle_inequality(self, seed):
        d = PointCloudUtils.pairwise_distances(PointCloud(np.random.default_rng(seed).normal(size=(20, 3)))).dist
        # d[i, k] <= d[i, j] + d[j, k] for every i, j, k
        assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :] + 1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_orthogonal_transform_keeps_distances(self, seed):
        rng = np.random.default_rng(seed)
        points = rng.normal(size=(12, 3))
        rotation, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        before = PointCloudUtils.pairwise_distances(PointCloud(points)).dist
        after = PointCloudUtils.pairwise_distances(PointCloud(points @ rotation)).dist
        assert np.allclose(after, before, rtol=0.0, atol=1e-9)

    @pytest.mark.parametrize("dist", [
        [[0, 1], [2, 0]],
        [[0, -1], [-1, 0]],
        [[1, 1], [1, 0]],
        [[0, 1, 2]],
    ])
    def test_distance_matrix_validation(self, dist):
        with pytest.raises(ValueError):
            DistanceMatrix(np.array(dist, dtype=float))


class TestDistortion:
    def test_exact_projection_has_unit_correlation(self):
        rng = np.random.default_rng(3)
        pc = PointCloud(rng.normal(size=(12, 2)))
        padded = PointCloud(np.column_stack([pc.values, np.zeros(12)]))
        stats = PointCloudUtils.distance_distortion_report(
            PointCloudUtils.pairwise_distances(padded), PointCloudUtils.pairwise_distances(pc)
        )
        assert stats.pearson_correlation == pytest.approx(1.0)
        assert stats.max_original == pytest.approx(stats.max_reduced)

    def test_single_point_has_no_pairs(self):
        dm = PointCloudUtils.pairwise_distances(PointCloud([[1.0]]))
        with pytest.raises(ValueError, match="no pairs"):
            PointCloudUtils.distance_distortion_report(dm, dm)

    def test_doubled_distances(self):
        dm = PointCloudUtils.pairwise_distances(PointCloud(np.random.default_rng(4).normal(size=(7, 3))))
        stats = PointCloudUtils.distance_distortion_report(dm, DistanceMatrix(2 * dm.dist))
        assert stats.pearson_correlation == pytest.approx(1.0)
        assert stats.mean_reduced == pytest.approx(2 * stats.mean_original)
        assert stats.max_reduced == pytest.approx(2 * stats.max_original)

    def test_correlation_matches_direct_formula(self):
        rng = np.random.default_rng(6)
        first = PointCloudUtils.pairwise_distances(PointCloud(rng.normal(size=(6, 3))))
        second = PointCloudUtils.pairwise_distances(PointCloud(rng.normal(size=(6, 2))))
        x = [first.dist[i, j] for i in range(6) for j in range(i + 1, 6)]
        y = [second.dist[i, j] for i in range(6) for j in range(i + 1, 6)]
        mx, my = sum(x) / len(x), sum(y) / len(y)
        covariance = sum((a - mx) * (b - my) for a, b in zip(x, y)) / len(x)
        sx = math.sqrt(sum((a - mx) ** 2 for a in x) / len(x))
        sy = math.sqrt(sum((b - my) ** 2 for b in y) / len(y))

        stats = PointCloudUtils.distance_distortion_report(first, second)
        assert stats.pearson_correlation == pytest.approx(covariance / (sx * sy), abs=1e-9)
        assert (stats.min_original, stats.max_original) == (min(x), max(x))
        assert stats.mean_reduced == pytest.approx(my)

    def test_mismatched_sizes(self):
        a = PointCloudUtils.pairwise_distances(PointCloud([[0.0], [1.0]]))
        b = PointCloudUtils.pairwise_distances(PointCloud([[0.0], [1.0], [2.0]]))
        with pytest.raises(ValueError):
            PointCloudUtils.distance_distortion_report(a, b)

    def test_pearson_zero_variance(self):
        assert PointCloudUtils.pearson(np.ones(3), np.ones(3)) == 1.0
        assert PointCloudUtils.pearson(np.ones(3), np.arange(3.0)) == 0.0


class TestUnionFind:
    def test_surviving_side_has_smaller_minimum(self):
        uf = UnionFind(4)
        assert uf.unite(2, 3) == (True, 3, 2)
        assert uf.unite(3, 0) == (True, 2, 0)
        assert uf.unite(2, 0) == (False, 0, 0)
        assert uf.find(3) == uf.find(0) != uf.find(1)
        assert uf.components == 2


class TestFileUtils:
    def test_format_float(self):
        assert FileUtils.format_float(float("inf")) == "inf"
        assert FileUtils.format_float(1.0) == "1"
        assert FileUtils.format_float(math.sqrt(2)) == "1.4142135623730951"

    def test_atomic_write_replaces_and_leaves_no_temp(self, tmp_path):
        target = tmp_path / "out.txt"
        target.write_text("old")
        FileUtils.atomic_write_text(target, "new\n")
        assert target.read_text() == "new\n"
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]

    def test_missing_directory(self, tmp_path):
        with pytest.raises(OSError):
            FileUtils.atomic_write_text(tmp_path / "nope" / "out.txt", "x")
