"""Entry point for running the lab as a module: python -m rslab"""
import sys

from rslab.cli.__main__ import main

if __name__ == "__main__":
	sys.exit(main())
