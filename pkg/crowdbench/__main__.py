"""Main entry point of the benchmark command line.

Dependencies:
    - sys: Exit status.
    - logger: Loguru logger for logging events.
    - configure_logging: Routes all logging to stderr at the configured level.
    - run: The argparse command dispatcher.
"""

import sys

from loguru import logger

from crowdbench.harness.cli import run
from crowdbench.logging import configure_logging


def main() -> None:
    """Entrypoint of the application.

    Configures logging, runs the requested command and exits with its status.
    """
    configure_logging()
    status = run(sys.argv[1:])
    logger.debug(f"Exiting with status {status}.")
    sys.exit(status)


if __name__ == "__main__":
    main()
