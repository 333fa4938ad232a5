import math
import os
import sys

import numpy as np
import pandas as pd
import pytest

# Add the project root directory to Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.schema_config import SCHEMA_CONFIG

SCHEMA = SCHEMA_CONFIG["cdc_weekly"]
CAUSES = list(SCHEMA["causes"])
UNIT_SQUARE = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]


def circle_points(n, radius_noise=0.0, seed=0):
    """n evenly spaced angles on the unit circle, radius optionally jittered"""
    rng = np.random.default_rng(seed)
    angles = 2 * math.pi * np.arange(n) / n
    radii = 1.0 + (rng.normal(0.0, radius_noise, n) if radius_noise else 0.0)
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


def cdc_rows(jurisdictions, weeks, counts=None):
    """Records in the CDC weekly schema; `counts(jurisdiction, year, week)` gives the 15 cause values"""
    counts = counts or (lambda j, year, week: [100 + 10 * c + week for c in range(len(CAUSES))])
    rows = []
    for jurisdiction in jurisdictions:
        for year, week in weeks:
            record = {SCHEMA["jurisdiction"]: jurisdiction, SCHEMA["year"]: year, SCHEMA["week"]: week}
            record.update(zip(CAUSES, counts(jurisdiction, year, week)))
            rows.append(record)
    return rows


def write_rows(path, rows):
    pd.DataFrame(rows).to_csv(path, index=False)
    return str(path)


def seasonal_counts(levels):
    """Smooth yearly cycle shared by every jurisdiction plus a per-jurisdiction level shift"""
    def counts(jurisdiction, year, week):
        phase = 2 * math.pi * week / 52
        seasonal = [
            round(1000 + 100 * math.sqrt(2) * math.sin(phase)),
            round(1000 + 100 * math.sqrt(2) * math.cos(phase)),
            round(1000 + 100 * math.sqrt(2) * math.sin(2 * phase)),
            round(1000 + 100 * math.sqrt(2) * math.cos(2 * phase)),
        ]
        level = [1000 + 100 * levels[jurisdiction]] * 3
        flat = [500] * (len(CAUSES) - len(seasonal) - len(level))
        return seasonal + level + flat
    return counts


@pytest.fixture
def square_csv(tmp_path):
    return write_rows(tmp_path / "square.csv", [{"x": x, "y": y} for x, y in UNIT_SQUARE])


@pytest.fixture
def every_region_csv(tmp_path):
    """Eight weeks of 2020 for one jurisdiction in each of the five regions"""
    weeks = [(2020, week) for week in range(1, 9)]
    rows = cdc_rows(["California", "Ohio", "Maine", "Texas", "Hawaii"], weeks)
    return write_rows(tmp_path / "cdc.csv", rows)


@pytest.fixture
def seasonal_csv(tmp_path):
    """Three jurisdictions x 104 weeks with identical seasonal cycles in both years"""
    levels = {"Texas": -1, "Florida": 0, "Georgia": 1}
    weeks = [(year, week) for year in (2020, 2021) for week in range(1, 53)]
    return write_rows(tmp_path / "seasonal.csv", cdc_rows(list(levels), weeks, seasonal_counts(levels)))
