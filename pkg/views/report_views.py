from typing import List

from orchestration.step4_mapper import ProjectedData
from utils.point_cloud_utils import DistortionStats


class ReportTextView:
    @staticmethod
    def pca_report(projected: ProjectedData, column_labels: List[str], title: str = "") -> str:
        """Explained variance and dominant column of every lens component"""
        lines = []
        if title:
            lines.append(f"# {title}")
        lines.append("component\texplained_variance_ratio\tdominant_column\tdominant_label")
        for i, (ratio, column) in enumerate(zip(projected.explained_variance_ratio, projected.dominant_columns)):
            lines.append(f"{i}\t{ratio:.6f}\t{column}\t{column_labels[column]}")
        lines.append(f"total\t{float(sum(projected.explained_variance_ratio)):.6f}\t\t")
        return "\n".join(lines) + "\n"

    @staticmethod
    def distortion_report(stats: DistortionStats, title: str = "") -> str:
        """Original vs reduced pairwise-distance ranges"""
        lines = []
        if title:
            lines.append(f"# {title}")
        lines.extend([
            "space\tmin\tmean\tmax",
            f"original\t{stats.min_original:.6f}\t{stats.mean_original:.6f}\t{stats.max_original:.6f}",
            f"reduced\t{stats.min_reduced:.6f}\t{stats.mean_reduced:.6f}\t{stats.max_reduced:.6f}",
            f"pearson_correlation\t{stats.pearson_correlation:.6f}",
        ])
        return "\n".join(lines) + "\n"
