#!/usr/bin/env python3
"""
Example showing how to tune adialab with environment variables from a .env file.
This demonstrates loading the numerical settings from .env and running one experiment.
"""

import os
from dotenv import load_dotenv

from adialab import parse_config, run_experiment
from adialab.config import get_default_quadrature_spec, get_lattice_budget, get_output_dir, get_tail_tolerance

# Load environment variables from .env file
load_dotenv()

SETTINGS = [
    "ADIALAB_REL_TOL",
    "ADIALAB_ABS_TOL",
    "ADIALAB_MAX_REFINEMENTS",
    "ADIALAB_LATTICE_BUDGET",
    "ADIALAB_TAIL_TOL",
    "ADIALAB_OUTPUT_DIR",
]


def main():
    """Main function to demonstrate adialab with .env file"""

    print("🔧 adialab with .env Configuration")
    print("=" * 50)

    for name in SETTINGS:
        value = os.getenv(name)
        print(f"{name}: {value if value else '(default)'}")

    spec = get_default_quadrature_spec()
    print(f"\nQuadrature: rel_tol={spec.rel_tol:g} abs_tol={spec.abs_tol:g} refinements={spec.max_refinements}")
    print(f"Lattice budget: {get_lattice_budget()} points, tail tolerance {get_tail_tolerance():g}")
    print(f"Output directory: {get_output_dir()}")
    print("\n   Example .env file content:")
    print("   ADIALAB_REL_TOL=1e-11")
    print("   ADIALAB_LATTICE_BUDGET=100000000")
    print("   ADIALAB_OUTPUT_DIR=results")

    print("\n🧮 Running the Sol mismatch experiment...")
    print("-" * 50)

    try:
        state = run_experiment(parse_config("sol", {"alpha": 1.0, "t": [0.5, 1.0, 2.0]}))
        for check in state["results"]:
            print(f"t={check['t']:g}: ratio {check['ratio']:.6f} ({'pass' if check['passed'] else 'FAIL'})")
        print(f"\n{state['verdict']}")

    except Exception as e:
        print(f"❌ Error running experiment: {e}")
        print("   Check the ADIALAB_* values in your .env file")


if __name__ == "__main__":
    main()
