from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union
import sys
import os
import logging

import numpy as np
import pandas as pd

# Add the project root directory to Python path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.region_config import REGION_CONFIG
from config.schema_config import SCHEMA_CONFIG
from utils.point_cloud_utils import PointCloud

logger = logging.getLogger(__name__)

DATE_COLUMNS = ["year", "week"]


class DatasetVariant(Enum):
    WITH_DATES = "with-dates"
    WITHOUT_DATES = "no-dates"

    @property
    def slug(self) -> str:
        return "dates" if self is DatasetVariant.WITH_DATES else "nodates"


@dataclass(frozen=True)
class SchemaConfig:
    """Maps the logical columns to header names of the source CSV"""
    year: str
    week: str
    jurisdiction: str
    causes: List[str]
    start: Tuple[int, int] = (2020, 1)
    end: Tuple[int, int] = (2023, 39)

    @classmethod
    def default(cls) -> "SchemaConfig":
        schema = SCHEMA_CONFIG["cdc_weekly"]
        return cls(
            year=schema["year"],
            week=schema["week"],
            jurisdiction=schema["jurisdiction"],
            causes=list(schema["causes"]),
            start=(schema["start_year"], schema["start_week"]),
            end=(schema["end_year"], schema["end_week"]),
        )

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SchemaConfig":
        """Parse `key = value` lines; `cause` repeats once per cause column, in order"""
        default = cls.default()
        settings: Dict[str, str] = {}
        causes: List[str] = []
        for line_no, raw_line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"❌ Schema file {path}, line {line_no}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lower()
            if key == "cause":
                causes.append(value)
            elif key in ("year", "week", "jurisdiction", "start_year", "start_week", "end_year", "end_week"):
                settings[key] = value
            else:
                raise ValueError(f"❌ Schema file {path}, line {line_no}: unknown key '{key}'")

        def _int(key: str, fallback: int) -> int:
            try:
                return int(settings[key]) if key in settings else fallback
            except ValueError:
                raise ValueError(f"❌ Schema file {path}: '{key}' must be an integer")

        return cls(
            year=settings.get("year", default.year),
            week=settings.get("week", default.week),
            jurisdiction=settings.get("jurisdiction", default.jurisdiction),
            causes=causes or default.causes,
            start=(_int("start_year", default.start[0]), _int("start_week", default.start[1])),
            end=(_int("end_year", default.end[0]), _int("end_week", default.end[1])),
        )


@dataclass(frozen=True)
class MortalityTable:
    """Weekly counts; `frame` holds year, week, jurisdiction and the cause columns in schema order

    `imputed` shares the frame's index and counts, per cell, the blank source
    cells that were read as 0 (more than one after aggregation).
    """
    frame: pd.DataFrame
    cause_columns: List[str]
    imputed: Optional[pd.DataFrame] = None

    def __post_init__(self):
        if self.imputed is None:
            object.__setattr__(
                self, "imputed", pd.DataFrame(0, index=self.frame.index, columns=list(self.cause_columns))
            )
        elif not self.imputed.index.equals(self.frame.index):
            raise ValueError("❌ Imputation counts are not aligned with the table rows")

    @property
    def imputed_counts(self) -> Dict[str, int]:
        """Cause -> number of blank source cells behind this table, causes without blanks omitted"""
        totals = self.imputed[self.cause_columns].sum()
        return {cause: int(total) for cause, total in totals.items() if total}

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def empty(self) -> bool:
        return self.frame.empty

    @classmethod
    def empty_like(cls, other: "MortalityTable") -> "MortalityTable":
        return cls(other.frame.iloc[0:0].copy(), list(other.cause_columns))


@dataclass(frozen=True)
class RegionSpec:
    """Ordered region name -> jurisdiction list, plus jurisdictions to skip"""
    regions: Dict[str, List[str]]
    ignore: List[str] = field(default_factory=list)
    aliases: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        seen: Dict[str, str] = {}
        for region, jurisdictions in self.regions.items():
            for jurisdiction in jurisdictions:
                key = _jurisdiction_key(jurisdiction)
                if key in seen:
                    raise ValueError(
                        f"❌ Jurisdiction '{jurisdiction}' listed in both {seen[key]} and {region}"
                    )
                seen[key] = region

    @classmethod
    def default(cls) -> "RegionSpec":
        return cls(
            regions={name: list(states) for name, states in REGION_CONFIG["regions"].items()},
            ignore=list(REGION_CONFIG["ignore"]),
            aliases=dict(REGION_CONFIG["aliases"]),
        )

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "RegionSpec":
        """Parse `region: jurisdiction, jurisdiction, ...` lines; a line named `ignore` lists skipped ones"""
        regions: Dict[str, List[str]] = {}
        ignore: List[str] = []
        for line_no, raw_line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise ValueError(f"❌ Region file {path}, line {line_no}: expected 'region: state, state, ...'")
            name, members = (part.strip() for part in line.split(":", 1))
            jurisdictions = [member.strip() for member in members.split(",") if member.strip()]
            if name.lower() == "ignore":
                ignore.extend(jurisdictions)
            else:
                regions[name] = jurisdictions
        if not regions:
            raise ValueError(f"❌ Region file {path} defines no regions")
        return cls(regions=regions, ignore=ignore, aliases=dict(REGION_CONFIG["aliases"]))

    def canonical(self, jurisdiction: str) -> str:
        key = _jurisdiction_key(jurisdiction)
        return _jurisdiction_key(self.aliases.get(key, key))

    def lookup(self) -> Dict[str, Tuple[str, int]]:
        """Canonical jurisdiction key -> (region, position within the region)"""
        table = {}
        for region, jurisdictions in self.regions.items():
            for position, jurisdiction in enumerate(jurisdictions):
                table[self.canonical(jurisdiction)] = (region, position)
        return table


def _jurisdiction_key(name: str) -> str:
    return " ".join(str(name).split()).lower()


def load_cdc_csv(path: Union[str, Path], schema_config: Optional[SchemaConfig] = None) -> MortalityTable:
    """Load a CDC-schema weekly mortality CSV into a typed table"""
    schema = schema_config or SchemaConfig.default()
    raw = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    raw.columns = [str(column).strip() for column in raw.columns]

    required = [schema.year, schema.week, schema.jurisdiction] + list(schema.causes)
    missing = [column for column in required if column not in raw.columns]
    if missing:
        raise ValueError(f"❌ Missing required column(s) in {path}: {', '.join(missing)}")

    frame = pd.DataFrame({
        "year": _parse_integer_column(raw[schema.year], schema.year, allow_blank=False),
        "week": _parse_integer_column(raw[schema.week], schema.week, allow_blank=False),
        "jurisdiction": raw[schema.jurisdiction].map(lambda value: " ".join(str(value).split())),
    })

    bad_weeks = frame.index[(frame["week"] < 1) | (frame["week"] > 53)]
    if len(bad_weeks):
        raise ValueError(f"❌ Week outside 1-53 at row {int(bad_weeks[0]) + 2}")

    imputed = pd.DataFrame(index=frame.index)
    for cause in schema.causes:
        blanks = raw[cause].str.strip() == ""
        if blanks.any():
            logger.warning(f"Imputed {int(blanks.sum())} blank/suppressed cell(s) as 0 in '{cause}'")
        imputed[cause] = blanks.astype(np.int64)
        frame[cause] = _parse_integer_column(raw[cause], cause, allow_blank=True)

    key = list(zip(frame["year"], frame["week"]))
    in_range = pd.Series([schema.start <= k <= schema.end for k in key], index=frame.index, dtype=bool)
    dropped = int((~in_range).sum())
    if dropped:
        logger.info(f"Dropped {dropped} row(s) outside {schema.start} .. {schema.end}")
    frame = frame[in_range].reset_index(drop=True)
    imputed = imputed[in_range].reset_index(drop=True)

    duplicated = frame.assign(_key=frame["jurisdiction"].map(_jurisdiction_key)).duplicated(
        subset=["year", "week", "_key"], keep=False
    )
    if duplicated.any():
        first = frame[duplicated].iloc[0]
        raise ValueError(
            f"❌ Duplicate row for ({first['year']}, {first['week']}, {first['jurisdiction']})"
        )

    logger.info(f"Loaded {len(frame)} row(s) with {len(schema.causes)} cause column(s) from {path}")
    return MortalityTable(frame, list(schema.causes), imputed)


def _parse_integer_column(values: pd.Series, name: str, allow_blank: bool) -> pd.Series:
    cleaned = values.map(lambda value: str(value).strip().replace(",", ""))
    if allow_blank:
        cleaned = cleaned.where(cleaned != "", "0")
    parsed = pd.to_numeric(cleaned, errors="coerce")
    invalid = parsed.isna() | (parsed != parsed.round()) | (parsed < 0)
    if invalid.any():
        row = int(invalid[invalid].index[0])
        raise ValueError(
            f"❌ Unparsable value '{values.iloc[row]}' in column '{name}' at row {row + 2}"
        )
    return parsed.astype(np.int64)


def partition_by_region(table: MortalityTable, spec: Optional[RegionSpec] = None) -> Dict[str, MortalityTable]:
    """Split rows by region, ordered by the RegionSpec jurisdiction order then (year, week)"""
    spec = spec or RegionSpec.default()
    lookup = spec.lookup()
    ignored = {spec.canonical(name) for name in spec.ignore}

    keys = table.frame["jurisdiction"].map(spec.canonical)
    unknown = sorted({
        jurisdiction for jurisdiction, key in zip(table.frame["jurisdiction"], keys)
        if key not in lookup and key not in ignored
    })
    if unknown:
        raise ValueError(f"❌ Unknown jurisdiction(s) not in any region: {', '.join(unknown)}")

    frame = table.frame.assign(
        _region=keys.map(lambda key: lookup.get(key, (None, -1))[0]),
        _position=keys.map(lambda key: lookup.get(key, (None, -1))[1]),
    )

    partition = {}
    for region in spec.regions:
        rows = frame[frame["_region"] == region]
        rows = rows.sort_values(["_position", "year", "week"], kind="mergesort")
        imputed = table.imputed.loc[rows.index].reset_index(drop=True)
        rows = rows.drop(columns=["_region", "_position"]).reset_index(drop=True)
        partition[region] = MortalityTable(rows, list(table.cause_columns), imputed)
        logger.info(f"Region {region}: {len(rows)} row(s)")
    return partition


def aggregate_whole_us(table: MortalityTable) -> MortalityTable:
    """Sum every cause over jurisdictions, one row per (year, week)"""
    jurisdiction = REGION_CONFIG["whole_us"]["jurisdiction"]
    summed = (
        table.frame.groupby(["year", "week"], sort=True)[table.cause_columns]
        .sum()
        .reset_index()
    )
    summed.insert(2, "jurisdiction", jurisdiction)
    for cause in table.cause_columns:
        summed[cause] = summed[cause].astype(np.int64)
    imputed = (
        table.imputed.assign(year=table.frame["year"], week=table.frame["week"])
        .groupby(["year", "week"], sort=True)[table.cause_columns]
        .sum()
        .reset_index(drop=True)
    )
    return MortalityTable(summed, list(table.cause_columns), imputed)


def concat_tables(tables: List[MortalityTable]) -> MortalityTable:
    non_empty = [t for t in tables if not t.empty]
    if not non_empty:
        return MortalityTable.empty_like(tables[0])
    return MortalityTable(
        pd.concat([t.frame for t in non_empty], ignore_index=True),
        list(tables[0].cause_columns),
        pd.concat([t.imputed for t in non_empty], ignore_index=True),
    )


def to_point_cloud(table: MortalityTable, variant: DatasetVariant) -> PointCloud:
    """Numeric matrix of the table; jurisdiction survives only in the row labels"""
    if table.empty:
        raise ValueError("❌ Cannot build a point cloud from an empty table")

    columns = DATE_COLUMNS + list(table.cause_columns)
    row_labels = [
        f"{jurisdiction} {int(year):04d}-W{int(week):02d}"
        for jurisdiction, year, week in zip(table.frame["jurisdiction"], table.frame["year"], table.frame["week"])
    ]
    with_dates = PointCloud(table.frame[columns].to_numpy(dtype=float), row_labels, columns)
    if variant is DatasetVariant.WITH_DATES:
        return with_dates
    return with_dates.drop_columns(len(DATE_COLUMNS))


def load_raw_points(path: Union[str, Path]) -> PointCloud:
    """Load a headed CSV of numeric coordinates, one point per row"""
    frame = pd.read_csv(path)
    non_numeric = [column for column in frame.columns if not pd.api.types.is_numeric_dtype(frame[column])]
    if non_numeric:
        raise ValueError(f"❌ Non-numeric column(s) in raw points file {path}: {', '.join(map(str, non_numeric))}")
    if frame.empty:
        raise ValueError(f"❌ Raw points file {path} has no rows")
    return PointCloud(
        frame.to_numpy(dtype=float),
        [f"row {i}" for i in range(len(frame))],
        [str(column) for column in frame.columns],
    )


class Step1DataIngest:
    def __init__(self, schema_config: Optional[SchemaConfig] = None, region_spec: Optional[RegionSpec] = None):
        self.schema = schema_config or SchemaConfig.default()
        self.region_spec = region_spec or RegionSpec.default()

    def load_regions(self, path: Union[str, Path]) -> Dict[str, MortalityTable]:
        """Load the CSV and return every region table plus the Whole-US aggregate"""
        table = load_cdc_csv(path, self.schema)
        partition = partition_by_region(table, self.region_spec)
        regional_rows = concat_tables(list(partition.values()))
        tables = dict(partition)
        tables[REGION_CONFIG["whole_us"]["name"]] = aggregate_whole_us(regional_rows)
        return tables
