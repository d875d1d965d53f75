"""
Exception hierarchy for the Rician finite-blocklength bounds toolkit.

Domain and usage errors subclass ValueError so callers that only know about
the standard library still catch them; convergence failures carry the
numerical state that led to them.
"""

from typing import Any, Dict, Optional


class RicianFBLError(Exception):
    """Base class for all toolkit errors"""


class DomainError(RicianFBLError, ValueError):
    """Argument lies outside the mathematical domain of an operation"""


class UsageError(RicianFBLError, ValueError):
    """Operation called with an invalid shape or configuration"""


class ConvergenceError(RicianFBLError, RuntimeError):
    """Iterative numerical procedure failed to reach its tolerance"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = diagnostics or {}

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{key}={value}" for key, value in self.diagnostics.items())
        return f"{base} | {details}"


class OutputError(RicianFBLError, OSError):
    """Results could not be written"""
