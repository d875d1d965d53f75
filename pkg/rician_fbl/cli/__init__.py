"""
Command-line front end: flag parsing, progress and CSV output.
"""

from .models import CliConfig
from .parser import build_parser, parse
from .progress import ProgressReporter
from .writer import HEADER, emit, format_float, format_summary, print_summary

__all__ = ["CliConfig", "build_parser", "parse", "ProgressReporter", "HEADER", "emit", "format_float", "format_summary", "print_summary"]
