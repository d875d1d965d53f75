"""
Core services: configuration, logging, errors, events and run state.
"""

from .config import Config, FigurePreset, PRESETS, get_preset
from .events import EventSystem, EventType
from .exceptions import ConvergenceError, DomainError, OutputError, RicianFBLError, UsageError
from .state_manager import PointStatus, SweepState

__all__ = ["Config", "FigurePreset", "PRESETS", "get_preset", "EventSystem", "EventType", "ConvergenceError", "DomainError", "OutputError", "RicianFBLError", "UsageError", "PointStatus", "SweepState"]
