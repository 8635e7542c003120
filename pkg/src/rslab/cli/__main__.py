"""Entry point wrapper for the rslab CLI that reports a missing installation."""
import sys


def _show_installation_error() -> None:
	print("=" * 70, file=sys.stderr)
	print("ERROR: rslab module not found!", file=sys.stderr)
	print("=" * 70, file=sys.stderr)
	print("\nThe package is not installed in this interpreter.", file=sys.stderr)
	print("\n  From the repository root run: pip install -e .", file=sys.stderr)
	print("  If you use a virtual environment, make sure it is activated.", file=sys.stderr)
	print("\nCurrent Python path:", file=sys.stderr)
	for p in sys.path:
		print(f"  - {p}", file=sys.stderr)
	print("=" * 70, file=sys.stderr)


def main() -> int:
	try:
		from rslab.cli.main import main as cli_main
	except ModuleNotFoundError as e:
		if "rslab" in str(e):
			_show_installation_error()
			return 1
		raise
	return cli_main()


if __name__ == "__main__":
	sys.exit(main())
