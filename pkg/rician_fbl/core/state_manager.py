"""
Run-state management for the Rician finite-blocklength bounds toolkit.

This module holds the only mutable state shared by sweep workers: an
append-only, index-addressed result buffer plus skip/failure counters and
per-point timings, all guarded by one lock.
"""

import logging
import threading
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional


class PointStatus(Enum):
    """Outcome of one parameter point"""

    PENDING = "pending"
    COMPLETED = "completed"
    SKIPPED = "skipped"
    FAILED = "failed"


@dataclass
class PointRecord:
    """Bookkeeping for one parameter point"""

    index: int
    label: str
    status: PointStatus = PointStatus.PENDING
    duration_seconds: Optional[float] = None
    message: Optional[str] = None
    flags: List[str] = field(default_factory=list)


class SweepState:
    """Thread-safe result buffer for a sweep"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self._lock = threading.RLock()

        self._results: Dict[int, List[Any]] = {}
        self._points: Dict[int, PointRecord] = {}

        self.started_at: Optional[datetime] = None
        self.finished_at: Optional[datetime] = None

    def start(self) -> None:
        """Clear previous results and mark the sweep start"""
        with self._lock:
            self._results.clear()
            self._points.clear()
            self.started_at = datetime.now()
            self.finished_at = None

    def finish(self) -> None:
        with self._lock:
            self.finished_at = datetime.now()

    def register_point(self, index: int, label: str) -> None:
        with self._lock:
            if index not in self._points:
                self._points[index] = PointRecord(index=index, label=label)

    def store(self, index: int, rows: List[Any], status: PointStatus, duration_seconds: Optional[float] = None, message: Optional[str] = None, flags: Optional[List[str]] = None) -> None:
        """Record the rows of one point; each index may be written once"""
        with self._lock:
            if index in self._results:
                raise RuntimeError(f"Result slot {index} already written")
            self._results[index] = list(rows)

            record = self._points.setdefault(index, PointRecord(index=index, label=str(index)))
            record.status = status
            record.duration_seconds = duration_seconds
            record.message = message
            record.flags = list(flags or [])

            self.logger.debug(f"Stored {len(rows)} row(s) for point #{index} ({status.value})")

    def ordered_rows(self) -> List[Any]:
        """All stored rows, ordered by point index"""
        with self._lock:
            return [row for index in sorted(self._results) for row in self._results[index]]

    def count(self, status: PointStatus) -> int:
        with self._lock:
            return sum(1 for record in self._points.values() if record.status == status)

    def get_points(self) -> List[PointRecord]:
        with self._lock:
            return [self._points[index] for index in sorted(self._points)]

    def wall_clock_seconds(self) -> float:
        with self._lock:
            if not self.started_at:
                return 0.0
            end = self.finished_at or datetime.now()
            return (end - self.started_at).total_seconds()

    def get_summary(self) -> Dict[str, Any]:
        """Footer data: counts, timings, failures"""
        with self._lock:
            points = self.get_points()
            return {
                "points": len(points),
                "completed": self.count(PointStatus.COMPLETED),
                "skipped": self.count(PointStatus.SKIPPED),
                "failed": self.count(PointStatus.FAILED),
                "rows": sum(len(rows) for rows in self._results.values()),
                "wall_clock_seconds": self.wall_clock_seconds(),
                "point_seconds": {p.label: p.duration_seconds for p in points if p.duration_seconds is not None},
                "skipped_points": [f"{p.label}: {p.message}" for p in points if p.status == PointStatus.SKIPPED],
                "failed_points": [f"{p.label}: {p.message}" for p in points if p.status == PointStatus.FAILED],
                "flags": {p.label: p.flags for p in points if p.flags},
            }
