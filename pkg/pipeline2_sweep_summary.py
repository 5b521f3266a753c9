#!/usr/bin/env python3
"""
Pipeline Step 2: Sweep Summary
Reads the results CSV written by pipeline1_order_sweep.py and aggregates the
runs per fractional order q: convergence rate, mean iterations, worst
residual and worst error against the exact solution.

The summary is written next to the results as sweep_summary.csv and printed
as a table.
"""

import argparse
import os

import pandas as pd

from cfde_log import table_lines
from cfde_utils import load_json_config

SUMMARY_FILENAME = "sweep_summary.csv"


def summarize_sweep(results_df):
    """
    Per-q aggregates of a sweep results table.

    Returns:
        DataFrame: q, runs, converged_rate, mean_iterations, max_residual, max_error, min_R0
    """
    grouped = results_df.groupby("q", sort=True)
    summary = pd.DataFrame({
        "runs": grouped.size(),
        "converged_rate": grouped["converged"].mean(),
        "mean_iterations": grouped["iterations"].mean(),
        "max_residual": grouped["residual"].max(),
        "max_error": grouped["max_error"].max(),
        "min_R0": grouped["R0"].min(),
    })
    return summary.reset_index()


def print_summary(summary_df):
    header = list(summary_df.columns)
    rows = [[f"{value:.6g}" if isinstance(value, float) else str(value) for value in row]
            for row in summary_df.itertuples(index=False)]
    print("\n".join(table_lines(header, rows)))


def main():
    parser = argparse.ArgumentParser(
        description="Aggregate order-sweep results per fractional order"
    )
    parser.add_argument(
        'config_file',
        help='Path to the configuration JSON file'
    )
    args = parser.parse_args()

    config = load_json_config(args.config_file)
    if config is None:
        raise SystemExit(1)

    output_dir = config['simulation_settings']['output_directory']
    results_path = os.path.join(output_dir, config['simulation_settings']['results_filename'])
    if not os.path.exists(results_path):
        raise FileNotFoundError(f"Sweep results not found: {results_path}")

    print(f"Loading sweep results from: {results_path}")
    results_df = pd.read_csv(results_path)
    print(f"Loaded {len(results_df)} runs")

    summary_df = summarize_sweep(results_df)
    output_file = os.path.join(output_dir, SUMMARY_FILENAME)
    summary_df.to_csv(output_file, index=False, float_format="%.17g")

    print_summary(summary_df)
    print(f"Summary saved to: {output_file}")


if __name__ == "__main__":
    main()
