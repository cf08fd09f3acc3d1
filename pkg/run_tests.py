#!/usr/bin/env python3
"""
Test runner script for the Gaussian power sums project.

    python run_tests.py              install deps, run the fast suite
    python run_tests.py --slow       include the long acceptance ranges
    python run_tests.py --no-install skip pip
"""
import argparse
import os
import subprocess
import sys
from pathlib import Path


def run_step(command: list, description: str) -> bool:
    """Run one step, echoing the command; True on exit status 0."""
    print(f"\n{'=' * 60}\n{description}\n$ {' '.join(command)}\n{'=' * 60}")
    return subprocess.run(command).returncode == 0


def main() -> int:
    parser = argparse.ArgumentParser(description="Gaussian power sums test runner")
    parser.add_argument("--slow", action="store_true", help="include tests marked slow")
    parser.add_argument("--no-install", action="store_true", help="do not install requirements.txt")
    options = parser.parse_args()

    os.chdir(Path(__file__).parent)

    steps = []
    if not options.no_install:
        steps.append(([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"], "Installing dependencies"))
    pytest_command = [sys.executable, "-m", "pytest", "tests/unit/"]
    if not options.slow:
        pytest_command += ["-m", "not slow"]
    steps.append((pytest_command, "Running unit tests with coverage"))

    for command, description in steps:
        if not run_step(command, description):
            print(f"\nFailed: {description}")
            return 1

    print("\nAll tests passed. Coverage report: htmlcov/index.html")
    return 0


if __name__ == "__main__":
    sys.exit(main())
