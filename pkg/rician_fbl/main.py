"""
Main application coordinator for the Rician finite-blocklength bounds toolkit.

This module wires configuration, logging, the event system, the run state and
the sweep engine together, runs one sweep and writes its rows.
"""

import logging
import sys
from typing import Optional, Sequence

from .cli.models import CliConfig
from .cli.parser import parse
from .cli.progress import ProgressReporter
from .cli.writer import emit, print_summary
from .core.events import EventSystem
from .core.exceptions import OutputError, UsageError
from .core.logging_config import get_error_tracker, get_performance_logger, setup_logging
from .core.state_manager import SweepState
from .engine.sweep import SweepEngine

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class RicianBoundsApp:
    """Runs one sweep described by a CliConfig"""

    def __init__(self, cli_config: CliConfig):
        self.cli_config = cli_config
        self.config = cli_config.to_config()

        self.logger_setup = setup_logging(log_level=self.config.system.log_level, log_file=self.config.system.log_file)
        self.logger = logging.getLogger(__name__)

        self.error_tracker = get_error_tracker("main")
        self.performance_logger = get_performance_logger("main")

        self.event_system = EventSystem()
        self.state = SweepState()
        self.engine = SweepEngine(self.config, self.event_system, self.state)

    def run(self) -> int:
        """Run the sweep, write the rows and return the exit code"""
        spec = self.cli_config.to_sweep_spec()
        self.logger.debug(f"Effective configuration: {self.config.to_dict()}")

        self.performance_logger.start_timer("run")
        with ProgressReporter(self.event_system, enabled=self.config.system.show_progress):
            rows = self.engine.run(spec)
        summary = self.engine.get_summary()

        try:
            emit(rows, self.config.output)
        except OutputError as e:
            self.error_tracker.log_error(e, "emit")
            print_summary(summary)
            return EXIT_FAILURE

        print_summary(summary)
        self.performance_logger.end_timer("run")
        if summary["failed"]:
            self.logger.error(f"{summary['failed']} parameter point(s) failed; see the error rows")
            return EXIT_FAILURE
        return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the application"""
    try:
        cli_config = parse(argv)
    except UsageError as e:
        print(f"rician-fbl: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return RicianBoundsApp(cli_config).run()
    except UsageError as e:
        logging.getLogger(__name__).error(f"Usage error: {e}")
        return EXIT_USAGE
    except Exception as e:
        logging.getLogger(__name__).error(f"Fatal error: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
