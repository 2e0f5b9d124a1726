"""
Main entry point for the intent classification benchmark.
Parses the command line and dispatches to a subcommand.
"""

import sys

from src.cli.commands import EXIT_FAILURE, build_parser, dispatch
from src.constants import Status
from src.logging_config import BenchLogger


def main(argv=None) -> int:
    """Main application entry point."""
    logger = BenchLogger.get_instance()
    args = build_parser().parse_args(argv)

    logger.log_debug(
        message=f"Starting command {args.command}",
        status=Status.Running,
        source="Main"
    )

    try:
        return dispatch(args)

    except KeyboardInterrupt:
        logger.log_info(
            message="Interrupted",
            status=Status.Failed,
            source="Main"
        )
        return EXIT_FAILURE

    except Exception as e:
        logger.log_error(
            message=f"Application error: {str(e)}",
            status=Status.Failed,
            source="Main"
        )
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
