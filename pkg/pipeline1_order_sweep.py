#!/usr/bin/env python3
"""
Pipeline Step 1: Order Sweep
Solves one problem family for every combination of fractional order q and
initial value b listed in the configuration, and writes one CSV row per run.

Configuration sections:
    spec                 problem-spec template (q and b are overwritten)
    sweep                {"q": [...], "b": [...]}; b entries are numbers or [re, im]
    simulation_settings  output_directory, results_filename, threads, solver
"""

import csv
import itertools
import os
import sys

from cfde_existence import ConditionIVViolation, ProblemSpec
from cfde_solver import SolverConfig, solve
from cfde_utils import SpecFileError, load_json_config, parse_complex, validate_spec

RESULT_FIELDS = [
    "ID", "q", "b_re", "b_im", "M", "R0", "branch", "iterations",
    "residual", "max_error", "converged", "status",
]


def generate_all_runs(config):
    """
    All (q, b) combinations of the sweep section.

    Returns:
        list: run dictionaries with id, q and complex b
    """
    sweep = config["sweep"]
    b_values = [parse_complex(b) for b in sweep.get("b", [config["spec"].get("b", 0.0)])]

    runs = []
    for run_id, (q, b) in enumerate(itertools.product(sweep["q"], b_values), 1):
        runs.append({"id": run_id, "q": float(q), "b": b})
    return runs


def run_single(config, run):
    """
    Solve one sweep point.

    Returns:
        dict: CSV row; a refused problem is recorded with status condition_iv
    """
    settings = config.get("simulation_settings", {})
    template = dict(config["spec"])
    template["q"] = run["q"]
    template["b"] = [run["b"].real, run["b"].imag]
    spec = ProblemSpec.from_config(validate_spec(template))
    cfg = SolverConfig.resolve(spec.solver, settings.get("solver"))

    row = {"ID": run["id"], "q": run["q"], "b_re": run["b"].real, "b_im": run["b"].imag}
    try:
        sol = solve(spec, cfg, threads=settings.get("threads", 1))
    except ConditionIVViolation:
        row.update({"converged": 0, "status": "condition_iv"})
        return row

    row.update({
        "M": sol.M,
        "R0": sol.R0,
        "branch": sol.branch,
        "iterations": sol.iterations,
        "residual": sol.residual,
        "max_error": sol.max_error,
        "converged": 1 if sol.converged else 0,
        "status": sol.status,
    })
    return row


def simulate_all_runs(config_file):
    """
    Run the whole sweep defined in the configuration file.

    Returns:
        bool: True if the sweep was written, False otherwise
    """
    config = load_json_config(config_file)
    if config is None:
        print(f"Failed to load configuration from {config_file}")
        return False

    try:
        runs = generate_all_runs(config)
    except (KeyError, SpecFileError) as e:
        print(f"Invalid sweep configuration: {e}")
        return False
    print(f"Generated {len(runs)} sweep points")

    output_dir = config["simulation_settings"]["output_directory"]
    os.makedirs(output_dir, exist_ok=True)
    output_file = os.path.join(output_dir, config["simulation_settings"]["results_filename"])
    print(f"Solving and writing results to {output_file}...")

    with open(output_file, "w", newline="") as csvfile:
        writer = csv.DictWriter(csvfile, fieldnames=RESULT_FIELDS)
        writer.writeheader()

        total = len(runs)
        for i, run in enumerate(runs):
            if (i + 1) % 5 == 0 or (i + 1) == total:
                print(f"Processing sweep point {i + 1}/{total}...")
            try:
                row = run_single(config, run)
            except (SpecFileError, ValueError) as e:
                print(f"Failed to process sweep point {run['id']}: {e}")
                continue
            writer.writerow({key: ("" if value is None else value) for key, value in row.items()})

    print(f"Sweep completed. Results written to {output_file}")
    return True


def main():
    """Main function to handle command line arguments and run the sweep."""
    if len(sys.argv) != 2:
        print("Usage: python pipeline1_order_sweep.py <config_file>")
        sys.exit(1)

    config_file = sys.argv[1]
    print(f"Starting order sweep with configuration from {config_file}")
    if simulate_all_runs(config_file):
        print("Sweep completed successfully.")
    else:
        print("Sweep failed.")
        sys.exit(1)


if __name__ == "__main__":
    main()
