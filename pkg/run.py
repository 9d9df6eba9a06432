#!/usr/bin/env python3
"""
Over-the-air computation toolkit - Main Entry Point
Configures logging and dispatches to the command-line interface.
"""
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from core.settings import LOG_FILE, LOG_LEVEL

handlers = [logging.StreamHandler(sys.stderr)]
if LOG_FILE:
    handlers.append(logging.FileHandler(LOG_FILE))

logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=handlers
)

logger = logging.getLogger(__name__)

from cli.commands import main as cli_main


def main():
    """Main entry point for the toolkit."""
    try:
        code = cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        code = 130
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        code = 1
    sys.exit(code)


if __name__ == "__main__":
    main()
