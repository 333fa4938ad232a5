TDA_CONFIG = {}

TDA_CONFIG["rips"] = {
    "max_edge_length": 2.0,
    "max_dimension": 2,
}

TDA_CONFIG["persistence"] = {
    "homology_dims": (0, 1),
    "spike_window": (0.9, 1.1),
}

TDA_CONFIG["mapper"] = {
    "lens_dim": 2,
    "n_intervals": 20,
    "overlap": 0.3,
    "eps": 30.0,
    "min_samples": 10,
    "n_jobs": 1,
}

TDA_CONFIG["ingest"] = {
    "normalization": "zscore",
    "normalize_dates": False,
    "raw_points_normalization": "none",
    "output_dir": "output",
    "output_dir_env": "TDA_OUTPUT_DIR",
}

TDA_CONFIG["render"] = {
    "width": 800,
    "bar_height": 6,
    "bar_gap": 2,
    "margin_left": 60,
    "margin_right": 40,
    "margin_top": 40,
    "margin_bottom": 40,
    "dim_colors": {0: "#d62728", 1: "#1f77b4", 2: "#2ca02c", 3: "#9467bd"},
    "colormap": "viridis_r",
    "layout_seed": 42,
}
