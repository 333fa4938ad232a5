from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple
import argparse
import sys
import os
import logging

from joblib import Parallel, delayed

# Add the project root directory to Python path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.tda_config import TDA_CONFIG
from orchestration.step1_data_ingest import (
    DATE_COLUMNS, DatasetVariant, MortalityTable, RegionSpec, SchemaConfig, Step1DataIngest,
    load_raw_points, to_point_cloud,
)
from orchestration.step2_rips_filtration import Step2RipsFiltration, dump_simplices
from orchestration.step3_persistence import Step3Persistence, write_diagram_csv, write_merge_csv
from orchestration.step4_mapper import Step4Mapper, pca_fit_transform
from utils.file_utils import FileUtils
from utils.point_cloud_utils import PointCloud, PointCloudUtils
from views.barcode_views import BarcodeSVGView
from views.graph_views import MapperGraphView
from views.report_views import ReportTextView

logger = logging.getLogger(__name__)

RAW_POINTS_REGION = "points"
RAW_POINTS_VARIANT = "raw"


def region_slug(name: str) -> str:
    return "-".join(name.lower().split())


@dataclass
class RunConfig:
    input_path: str
    region: str = "all"
    variant: DatasetVariant = DatasetVariant.WITH_DATES
    max_edge_length: float = TDA_CONFIG["rips"]["max_edge_length"]
    max_dimension: int = TDA_CONFIG["rips"]["max_dimension"]
    homology_dims: Tuple[int, ...] = TDA_CONFIG["persistence"]["homology_dims"]
    lens_dim: int = TDA_CONFIG["mapper"]["lens_dim"]
    cover_dim: Optional[int] = None
    n_intervals: int = TDA_CONFIG["mapper"]["n_intervals"]
    overlap: float = TDA_CONFIG["mapper"]["overlap"]
    eps: float = TDA_CONFIG["mapper"]["eps"]
    min_samples: int = TDA_CONFIG["mapper"]["min_samples"]
    # None picks zscore for CDC tables and no rescaling for raw points
    normalization: Optional[str] = None
    normalize_dates: bool = TDA_CONFIG["ingest"]["normalize_dates"]
    output_dir: Optional[str] = None
    raw_points: bool = False
    schema_config: Optional[str] = None
    region_spec: Optional[str] = None
    axis_max: Optional[float] = None
    html: bool = False
    dump_simplices: bool = False
    n_jobs: int = TDA_CONFIG["mapper"]["n_jobs"]

    def resolved_output_dir(self) -> Path:
        ingest = TDA_CONFIG["ingest"]
        return Path(self.output_dir or os.environ.get(ingest["output_dir_env"]) or ingest["output_dir"])

    def resolved_normalization(self) -> str:
        if self.normalization:
            return self.normalization
        ingest = TDA_CONFIG["ingest"]
        return ingest["raw_points_normalization"] if self.raw_points else ingest["normalization"]


class MainOrchestrator:
    def __init__(self, config: RunConfig):
        self.config = config
        self.output_dir = config.resolved_output_dir()

    def run_barcode(self) -> Dict[str, Path]:
        """Normalize, Rips complex, persistence; write diagram, merge events and barcode per region"""
        rips = Step2RipsFiltration(self.config.max_edge_length, self.config.max_dimension)
        persistence = Step3Persistence(self.config.homology_dims)

        def _one(prefix: str, title: str, pc: PointCloud) -> Dict[str, Path]:
            tree = rips.build(pc)
            diagram, events = persistence.run(tree)
            written = {
                f"{prefix}_diagram.csv": write_diagram_csv(diagram, self.output_dir / f"{prefix}_diagram.csv"),
                f"{prefix}_merges.csv": write_merge_csv(events, self.output_dir / f"{prefix}_merges.csv"),
            }
            svg = BarcodeSVGView(title, self.config.axis_max).render(diagram, self.config.max_edge_length)
            written[f"{prefix}_barcode.svg"] = FileUtils.atomic_write_text(self.output_dir / f"{prefix}_barcode.svg", svg)
            if self.config.dump_simplices:
                written[f"{prefix}_simplices.txt"] = dump_simplices(tree, self.output_dir / f"{prefix}_simplices.txt")
            return written

        return self._run_each(_one, keep_dates_raw=not self.config.normalize_dates)

    def run_mapper(self) -> Dict[str, Path]:
        """Normalize, PCA lens, cover, DBSCAN; write graph exports and the PCA report per region"""
        mapper = Step4Mapper(
            lens_dim=self.config.lens_dim, cover_dim=self.config.cover_dim,
            n_intervals=self.config.n_intervals, overlap=self.config.overlap,
            eps=self.config.eps, min_samples=self.config.min_samples, n_jobs=self.config.n_jobs,
        )

        def _one(prefix: str, title: str, pc: PointCloud) -> Dict[str, Path]:
            projected, graph = mapper.run(pc)
            view = MapperGraphView(graph, title)
            written = {
                f"{prefix}_graph.json": FileUtils.atomic_write_text(self.output_dir / f"{prefix}_graph.json", view.to_json()),
                f"{prefix}_graph.dot": FileUtils.atomic_write_text(self.output_dir / f"{prefix}_graph.dot", view.to_dot()),
                f"{prefix}_pca.txt": FileUtils.atomic_write_text(
                    self.output_dir / f"{prefix}_pca.txt",
                    ReportTextView.pca_report(projected, pc.column_labels, title),
                ),
            }
            if self.config.html:
                written[f"{prefix}_graph.html"] = FileUtils.atomic_write_text(
                    self.output_dir / f"{prefix}_graph.html", view.to_html()
                )
            return written

        return self._run_each(_one)

    def run_diagnose(self) -> Dict[str, str]:
        """Distortion of pairwise distances between the normalized data and its PCA lens"""
        reports = {}
        for prefix, title, pc in self._point_clouds():
            if pc.n_rows < 2:
                raise ValueError(f"❌ {title}: a single row gives no pairs to compare")
            original = PointCloudUtils.pairwise_distances(pc)
            projected = pca_fit_transform(pc, self.config.lens_dim)
            reduced = PointCloudUtils.pairwise_distances(PointCloud(projected.coords, pc.row_labels))
            stats = PointCloudUtils.distance_distortion_report(original, reduced)
            reports[prefix] = ReportTextView.distortion_report(stats, f"{title}, lens_dim={self.config.lens_dim}")
        return reports

    def _run_each(self, task, keep_dates_raw: bool = False) -> Dict[str, Path]:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        jobs = self._point_clouds(keep_dates_raw)
        results = Parallel(n_jobs=self.config.n_jobs, prefer="threads")(
            delayed(task)(prefix, title, pc) for prefix, title, pc in jobs
        )
        written: Dict[str, Path] = {}
        for result in results:
            written.update(result)
        return written

    def _point_clouds(self, keep_dates_raw: bool = False) -> List[Tuple[str, str, PointCloud]]:
        """(output prefix, title, normalized point cloud) for every requested region

        keep_dates_raw leaves year/week on their integer scale and rescales only the cause columns.
        """
        if self.config.raw_points:
            pc = load_raw_points(self.config.input_path)
            return [(f"{RAW_POINTS_REGION}_{RAW_POINTS_VARIANT}", "points", self._normalize(pc, False))]

        ingest = Step1DataIngest(
            SchemaConfig.from_file(self.config.schema_config) if self.config.schema_config else None,
            RegionSpec.from_file(self.config.region_spec) if self.config.region_spec else None,
        )
        tables = ingest.load_regions(self.config.input_path)
        selected = self._select_regions(tables)

        variant = self.config.variant
        clouds = []
        for name, table in selected:
            if table.empty:
                raise ValueError(f"❌ Region {name} has no rows in {self.config.input_path}")
            dates_raw = keep_dates_raw and variant is DatasetVariant.WITH_DATES
            pc = self._normalize(to_point_cloud(table, variant), dates_raw)
            clouds.append((f"{region_slug(name)}_{variant.slug}", f"{name} ({variant.value})", pc))
        return clouds

    def _select_regions(self, tables: Dict[str, MortalityTable]) -> List[Tuple[str, MortalityTable]]:
        by_slug = {region_slug(name): (name, table) for name, table in tables.items()}
        wanted = region_slug(self.config.region)
        if wanted == "all":
            return list(by_slug.values())
        if wanted not in by_slug:
            raise ValueError(
                f"❌ Unknown region '{self.config.region}', expected one of {', '.join(list(by_slug) + ['all'])}"
            )
        return [by_slug[wanted]]

    def _normalize(self, pc: PointCloud, keep_dates_raw: bool) -> PointCloud:
        mode = self.config.resolved_normalization()
        if mode == "none":
            return pc
        columns = range(len(DATE_COLUMNS), pc.n_columns) if keep_dates_raw else None
        return PointCloudUtils.normalize_columns(pc, mode, columns)


def cmd_barcode(config: RunConfig) -> Dict[str, Path]:
    return MainOrchestrator(config).run_barcode()


def cmd_mapper(config: RunConfig) -> Dict[str, Path]:
    return MainOrchestrator(config).run_mapper()


def cmd_diagnose(config: RunConfig) -> Dict[str, str]:
    return MainOrchestrator(config).run_diagnose()


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        values = tuple(sorted({int(part) for part in text.split(",") if part.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")
    if not values or min(values) < 0:
        raise argparse.ArgumentTypeError(f"expected non-negative dimensions, got '{text}'")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mortality-tda",
        description="Persistent homology barcodes and Mapper graphs for weekly mortality tables.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input-path", required=True, help="CDC-schema CSV, or coordinates with --raw-points")
    common.add_argument("--region", default="all",
                        help="west, midwest, northeast, south, non-contiguous, whole-us or all")
    dates = common.add_mutually_exclusive_group()
    dates.add_argument("--variant", choices=[v.value for v in DatasetVariant], default=DatasetVariant.WITH_DATES.value)
    dates.add_argument("--no-dates", dest="variant", action="store_const", const=DatasetVariant.WITHOUT_DATES.value)
    common.add_argument("--normalization", choices=["zscore", "minmax", "none"], default=None)
    common.add_argument("--lens-dim", type=int, default=TDA_CONFIG["mapper"]["lens_dim"], choices=[1, 2, 3])
    common.add_argument("--output-dir", default=None, help=f"falls back to ${TDA_CONFIG['ingest']['output_dir_env']}")
    common.add_argument("--raw-points", action="store_true", help="treat the input as a plain coordinate CSV")
    common.add_argument("--schema-config", default=None, help="key = value file naming the CSV columns")
    common.add_argument("--region-spec", default=None, help="'region: state, state, ...' file")
    common.add_argument("--n-jobs", type=int, default=TDA_CONFIG["mapper"]["n_jobs"])
    common.add_argument("--verbose", action="store_true")

    barcode = commands.add_parser("barcode", parents=[common], help="Rips persistence barcodes")
    barcode.add_argument("--max-edge-length", type=float, default=TDA_CONFIG["rips"]["max_edge_length"])
    barcode.add_argument("--max-dimension", type=int, default=TDA_CONFIG["rips"]["max_dimension"])
    barcode.add_argument("--homology-dims", type=_int_list, default=TDA_CONFIG["persistence"]["homology_dims"])
    barcode.add_argument("--axis-max", type=float, default=None, help="right end of the barcode t axis")
    barcode.add_argument("--normalize-dates", action="store_true",
                         help="also rescale the year/week columns (kept on their integer scale by default)")
    barcode.add_argument("--dump-simplices", action="store_true")

    mapper = commands.add_parser("mapper", parents=[common], help="Mapper graph over a PCA lens")
    mapper.add_argument("--cover-dim", type=int, default=None, help="lens axes covered (default: all)")
    mapper.add_argument("--n-intervals", type=int, default=TDA_CONFIG["mapper"]["n_intervals"])
    mapper.add_argument("--overlap", type=float, default=TDA_CONFIG["mapper"]["overlap"])
    mapper.add_argument("--eps", type=float, default=TDA_CONFIG["mapper"]["eps"])
    mapper.add_argument("--min-samples", type=int, default=TDA_CONFIG["mapper"]["min_samples"])
    mapper.add_argument("--html", action="store_true", help="also write a static HTML page")

    commands.add_parser("diagnose", parents=[common], help="distance distortion of the PCA lens")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {name: value for name, value in vars(args).items() if name in RunConfig.__dataclass_fields__}
    fields["variant"] = DatasetVariant(args.variant)
    return RunConfig(**fields)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    config = config_from_args(args)
    try:
        if args.command == "barcode":
            written = cmd_barcode(config)
        elif args.command == "mapper":
            written = cmd_mapper(config)
        else:
            for report in cmd_diagnose(config).values():
                print(report, end="")
            return 0
    except Exception as e:
        logger.error(f"Error running {args.command}: {str(e)}")
        print(f"❌ Error: {str(e).lstrip('❌ ')}", file=sys.stderr)
        return 1

    for name, path in written.items():
        print(f"✅ {name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
