"""
Logging configuration for the Rician finite-blocklength bounds toolkit.

This module provides logging setup with rotation, formatting, and per-component
levels. Console output goes to stderr because stdout may carry the CSV product.
"""

import logging
import logging.handlers
import os
import sys
import time
from datetime import datetime
from typing import Any, Dict, Optional


class ColoredFormatter(logging.Formatter):
    """Colored formatter for console output"""

    # ANSI color codes
    COLORS = {
        "DEBUG": "\033[36m",  # Cyan
        "INFO": "\033[32m",  # Green
        "WARNING": "\033[33m",  # Yellow
        "ERROR": "\033[31m",  # Red
        "CRITICAL": "\033[35m",  # Magenta
        "RESET": "\033[0m",  # Reset
    }

    def format(self, record):
        # Color a copy so file handlers sharing the record stay plain
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.COLORS['RESET']}"
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


class BoundsLogger:
    """Root logger setup for the toolkit"""

    def __init__(self, log_level: str = "WARNING", log_file: Optional[str] = None, enable_console: bool = True, enable_rotation: bool = True, use_color: Optional[bool] = None):
        self.log_level = log_level.upper()
        self.log_file = log_file
        self.enable_console = enable_console
        self.enable_rotation = enable_rotation
        self.use_color = sys.stderr.isatty() if use_color is None else use_color

        self._setup_logging()

    def _setup_logging(self) -> None:
        """Configure handlers on the root logger"""
        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, self.log_level))
        root_logger.handlers.clear()

        detailed_formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s")
        plain_formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        colored_formatter = ColoredFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

        if self.enable_console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(getattr(logging, self.log_level))
            console_handler.setFormatter(colored_formatter if self.use_color else plain_formatter)
            root_logger.addHandler(console_handler)

        if self.log_file:
            try:
                log_dir = os.path.dirname(self.log_file)
                if log_dir and not os.path.exists(log_dir):
                    os.makedirs(log_dir)

                if self.enable_rotation:
                    # 10MB per file, keep 5 backups
                    file_handler = logging.handlers.RotatingFileHandler(self.log_file, maxBytes=10 * 1024 * 1024, backupCount=5)
                else:
                    file_handler = logging.FileHandler(self.log_file)

                file_handler.setLevel(logging.DEBUG)
                file_handler.setFormatter(detailed_formatter)
                root_logger.addHandler(file_handler)

            except OSError as e:
                print(f"Warning: Could not setup file logging: {e}", file=sys.stderr)

        self._setup_component_loggers()

        logger = logging.getLogger(__name__)
        logger.debug(f"Logging initialized - Level: {self.log_level}, File: {self.log_file}")

    def _setup_component_loggers(self) -> None:
        """Quiet the inner-loop components unless debugging"""
        inner_level = logging.DEBUG if self.log_level == "DEBUG" else logging.WARNING
        logging.getLogger("rician_fbl.numerics").setLevel(inner_level)
        logging.getLogger("rician_fbl.density").setLevel(inner_level)

        logging.getLogger("rician_fbl.engine").setLevel(getattr(logging, self.log_level))

    @staticmethod
    def setup_exception_logging():
        """Route uncaught exceptions through logging"""

        def handle_exception(exc_type, exc_value, exc_traceback):
            if issubclass(exc_type, KeyboardInterrupt):
                sys.__excepthook__(exc_type, exc_value, exc_traceback)
                return

            logger = logging.getLogger("uncaught_exception")
            logger.critical("Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback))

        sys.excepthook = handle_exception


class PerformanceLogger:
    """Wall-clock timing for named operations"""

    def __init__(self, name: str):
        self.logger = logging.getLogger(f"performance.{name}")
        self._starts: Dict[str, float] = {}
        self.durations: Dict[str, float] = {}

    def start_timer(self, operation: str) -> None:
        self._starts[operation] = time.perf_counter()
        self.logger.debug(f"Started: {operation}")

    def end_timer(self, operation: str) -> float:
        start = self._starts.pop(operation, None)
        if start is None:
            self.logger.warning(f"Timer not started for: {operation}")
            return 0.0

        duration = time.perf_counter() - start
        self.durations[operation] = duration
        self.logger.info(f"Completed: {operation} in {duration:.3f}s")
        return duration


class ErrorTracker:
    """Track and log errors with context"""

    def __init__(self, component_name: str):
        self.component_name = component_name
        self.logger = logging.getLogger(f"errors.{component_name}")
        self.error_count = 0
        self.warning_count = 0
        self.last_error_time: Optional[datetime] = None

    def log_error(self, error: Exception, context: str = "", additional_data: Optional[Dict[str, Any]] = None) -> None:
        self.error_count += 1
        self.last_error_time = datetime.now()

        error_msg = f"Error in {self.component_name}"
        if context:
            error_msg += f" ({context})"
        error_msg += f": {error}"

        if additional_data:
            error_msg += f" | Data: {additional_data}"

        self.logger.error(error_msg, exc_info=self.logger.isEnabledFor(logging.DEBUG))

    def log_warning(self, message: str, context: str = "") -> None:
        self.warning_count += 1
        warning_msg = f"Warning in {self.component_name}"
        if context:
            warning_msg += f" ({context})"
        warning_msg += f": {message}"

        self.logger.warning(warning_msg)

    def get_error_stats(self) -> Dict[str, Any]:
        return {
            "component": self.component_name,
            "error_count": self.error_count,
            "warning_count": self.warning_count,
            "last_error_time": self.last_error_time.isoformat() if self.last_error_time else None,
        }


def verbosity_to_level(verbosity: int) -> str:
    """Map a repeatable -v count to a level name"""
    if verbosity <= 0:
        return "WARNING"
    if verbosity == 1:
        return "INFO"
    return "DEBUG"


def setup_logging(log_level: str = "WARNING", log_file: Optional[str] = None) -> BoundsLogger:
    """Setup logging for the entire application"""
    logger_setup = BoundsLogger(log_level=log_level, log_file=log_file, enable_console=True, enable_rotation=True)
    BoundsLogger.setup_exception_logging()
    return logger_setup


def get_performance_logger(component_name: str) -> PerformanceLogger:
    return PerformanceLogger(component_name)


def get_error_tracker(component_name: str) -> ErrorTracker:
    return ErrorTracker(component_name)
