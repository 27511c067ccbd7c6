"""``python -m freerat`` entry point."""
from freerat.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
