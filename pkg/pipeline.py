#!/usr/bin/env python3
"""
Order-Sweep Pipeline
Runs the sweep study in sequence:

1. pipeline1_order_sweep.py - Solve the problem family for every (q, b)
2. pipeline2_sweep_summary.py - Aggregate convergence and accuracy per q

Both steps read the same configuration file. The pipeline never prompts:
after a failed step it stops, unless --keep-going is given.
"""

import argparse
import json
import os
import subprocess
import sys
import time

STEP_TIMEOUT = 3600

PIPELINE_STEPS = [
    ("pipeline1_order_sweep.py", "Solve the sweep"),
    ("pipeline2_sweep_summary.py", "Summarise the sweep"),
]


def run_script(script_name, config_file, step_number, total_steps):
    """
    Run one pipeline script as a subprocess.

    Args:
        script_name (str): Script to run
        config_file (str): Configuration file passed as its only argument
        step_number (int): Current step number
        total_steps (int): Total number of steps

    Returns:
        bool: True if the script exited with status 0
    """
    print(f"\n{'='*60}")
    print(f"STEP {step_number}/{total_steps}: {script_name}")
    print(f"{'='*60}")

    script_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), script_name)
    if not os.path.exists(script_path):
        print(f"ERROR: Script {script_name} not found!")
        return False

    start_time = time.time()
    try:
        print(f"Running: python {script_name} {config_file}")
        result = subprocess.run(
            [sys.executable, script_path, config_file],
            capture_output=True,
            text=True,
            timeout=STEP_TIMEOUT,
        )
    except subprocess.TimeoutExpired:
        print(f"❌ STEP {step_number} FAILED: Timeout after {STEP_TIMEOUT} s")
        return False
    except OSError as e:
        print(f"❌ STEP {step_number} FAILED: {e}")
        return False

    duration = time.time() - start_time
    if result.stdout:
        print("STDOUT:")
        print(result.stdout)
    if result.stderr:
        print("STDERR:")
        print(result.stderr)

    if result.returncode == 0:
        print(f"✅ STEP {step_number} COMPLETED SUCCESSFULLY (Duration: {duration:.1f}s)")
        return True
    print(f"❌ STEP {step_number} FAILED (Return code: {result.returncode})")
    return False


def validate_config_file(config_file):
    """
    Check that the configuration exists, parses, and has the sweep sections.

    Returns:
        bool: True if valid, False otherwise
    """
    if not os.path.exists(config_file):
        print(f"ERROR: Configuration file not found: {config_file}")
        return False

    try:
        with open(config_file, 'r', encoding='utf-8') as f:
            config = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        print(f"ERROR: Invalid configuration file {config_file}: {e}")
        return False

    missing = [key for key in ("spec", "sweep", "simulation_settings") if key not in config]
    if missing:
        print(f"ERROR: Configuration file {config_file} lacks sections: {', '.join(missing)}")
        return False

    print(f"✅ Configuration file validated: {config_file}")
    return True


def print_pipeline_summary(successful_steps, failed_steps, total_duration):
    """Print a summary of the pipeline execution."""
    print(f"\n{'='*60}")
    print("PIPELINE EXECUTION SUMMARY")
    print(f"{'='*60}")
    print(f"Total duration: {total_duration:.1f} seconds ({total_duration/60:.1f} minutes)")
    print(f"Successful steps: {len(successful_steps)}")
    print(f"Failed steps: {len(failed_steps)}")

    for step in successful_steps:
        print(f"   ✅ {step}")
    for step in failed_steps:
        print(f"   ❌ {step}")

    if failed_steps:
        print("\n⚠️  PIPELINE COMPLETED WITH ERRORS!")
    else:
        print("\n🎉 PIPELINE COMPLETED SUCCESSFULLY!")


def run_pipeline(config_file, skip_steps=(), keep_going=False):
    """
    Execute the pipeline steps in order.

    Returns:
        int: 0 when every executed step succeeded, 1 otherwise
    """
    if not validate_config_file(config_file):
        return 1

    skip_steps = set(skip_steps)
    if skip_steps:
        print(f"Skipping steps: {sorted(skip_steps)}")

    print("🚀 STARTING ORDER-SWEEP PIPELINE")
    print(f"Configuration file: {config_file}")
    print(f"Total steps: {len(PIPELINE_STEPS)}")

    start_time = time.time()
    successful_steps = []
    failed_steps = []

    for i, (script_name, description) in enumerate(PIPELINE_STEPS, 1):
        if i in skip_steps:
            print(f"\n⏭️  STEP {i}/{len(PIPELINE_STEPS)}: {script_name} (SKIPPED)")
            continue

        if run_script(script_name, config_file, i, len(PIPELINE_STEPS)):
            successful_steps.append(f"Step {i}: {description}")
            continue

        failed_steps.append(f"Step {i}: {description}")
        if not keep_going:
            print(f"\nStep {i} failed, stopping (use --keep-going to run the remaining steps).")
            break

    print_pipeline_summary(successful_steps, failed_steps, time.time() - start_time)
    return 1 if failed_steps else 0


def main():
    parser = argparse.ArgumentParser(
        description="Run the order-sweep pipeline",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Pipeline Steps:
1. Solve the problem family for every (q, b) in the sweep
2. Aggregate the results per q

Example:
    python pipeline.py data/sweep_config.json
        """
    )
    parser.add_argument(
        'config_file',
        help='Path to the configuration JSON file'
    )
    parser.add_argument(
        '--skip-step',
        action='append',
        type=int,
        help='Skip specific step numbers (can be used multiple times)'
    )
    parser.add_argument(
        '--keep-going',
        action='store_true',
        help='Continue with the remaining steps after a failure'
    )
    args = parser.parse_args()
    sys.exit(run_pipeline(args.config_file, args.skip_step or [], args.keep_going))


if __name__ == "__main__":
    main()
