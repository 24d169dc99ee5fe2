"""
Command-line interface of the multiway join simulator.
"""

import logging
import sys
from typing import List, Optional

from ..models import JoinSimError, PlanInfeasibleError
from .commands import COMMANDS
from .parser import build_parser

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the subcommand and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 after --help and 2 on usage errors
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR

    try:
        return COMMANDS[args.command](args)
    except PlanInfeasibleError as e:
        print(f"Error: infeasible plan: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (JoinSimError, ValueError, OSError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_ERROR", "EXIT_INFEASIBLE"]
