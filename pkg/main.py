"""
Main entry point for the multiway join simulator.

Usage:
    python main.py run --shape self-linear --n 10000 --d 100 --all --verify
    python main.py sweep --axis g_bkt --values 1,2,4,8 --n 1e5 --d 1e5
"""

import sys
import logging

from src import get_settings
from src.cli import main as cli_main

logger = logging.getLogger(__name__)


def main() -> None:
    """Run the ``mwjoin`` command line."""
    try:
        settings = get_settings()
        settings.validate()

        sys.exit(cli_main(sys.argv[1:]))

    except KeyboardInterrupt:
        print("\n\n👋 Interrupted by user")
        sys.exit(130)

    except ValueError as e:
        print(f"\n❌ Configuration Error: {e}", file=sys.stderr)
        print("Please check your .env file and settings", file=sys.stderr)
        sys.exit(1)

    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        print(f"\n❌ Unexpected Error: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
