"""
Main entry point for the sfa-simulation command line.
"""
import sys

from sfa_simulation.cli import main

if __name__ == "__main__":
	sys.exit(main())
