"""Error tables over (order, L) grids and their CSV layouts."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .config import TableConfig
from .modeling import ErrorReport, run


def run_table(config: TableConfig, threads: int = 1, progress=None) -> dict[tuple[int, int], ErrorReport]:
    """ErrorReport for every (order, L) cell, in row-major order."""
    results = {}
    for L in config.Ls:
        for n in config.orders:
            results[(n, L)] = run(config.experiment(n, L), threads)
            if progress is not None:
                progress(n, L, results[(n, L)])
    return {(n, L): results[(n, L)] for n in config.orders for L in config.Ls}


def format_cell(report: ErrorReport, random: bool) -> str:
    if random:
        return f"{report.error:.6f} ({report.error_std:.6f})"
    return f"{report.error:.6f}"


def table_csv(config: TableConfig, results) -> str:
    """Rows n, columns L = ..., cells error or "mean (std)"."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n"] + [f"L={L}" for L in config.Ls])
    for n in config.orders:
        writer.writerow([n] + [format_cell(results[(n, L)], config.random) for L in config.Ls])
    return buf.getvalue()


LONG_FIELDS = [
    "error", "error_std", "apriori", "apriori_std",
    "apriori_upper", "apriori_upper_std", "tau", "M",
]


def long_csv(config: TableConfig, results) -> str:
    """One row per cell with every ErrorReport field."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["family", "n", "L"] + LONG_FIELDS)
    for (n, L), rep in results.items():
        row = [config.family.value, n, L]
        for name in LONG_FIELDS:
            value = getattr(rep, name)
            row.append(value if isinstance(value, int) else f"{value:.12e}")
        writer.writerow(row)
    return buf.getvalue()


def write_tables(config: TableConfig, results, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / f"{config.name}.csv", out_dir / f"{config.name}_long.csv"]
    paths[0].write_text(table_csv(config, results))
    paths[1].write_text(long_csv(config, results))
    return paths
