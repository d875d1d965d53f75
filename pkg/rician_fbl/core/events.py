"""
Event system for the Rician finite-blocklength bounds toolkit.

This module provides a thread-safe publish/subscribe channel through which the
sweep engine reports progress (points started, completed, skipped or failed) to
front ends such as the CLI progress bar.
"""

import logging
import threading
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Dict, List, Optional


class EventType(Enum):
    """Event types emitted during a sweep"""

    SWEEP_STARTED = "sweep_started"
    POINT_STARTED = "point_started"
    POINT_COMPLETED = "point_completed"
    POINT_SKIPPED = "point_skipped"
    POINT_FAILED = "point_failed"
    SWEEP_FINISHED = "sweep_finished"


@dataclass
class Event:
    """Event data structure"""

    event_type: EventType
    source: str
    data: Dict[str, Any]
    timestamp: datetime = field(default_factory=datetime.now)


class EventSystem:
    """Thread-safe event system for inter-component communication"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self._subscribers: Dict[EventType, List[Callable[[Event], None]]] = {}
        self._lock = threading.RLock()

    def subscribe(self, event_type: EventType, callback: Callable[[Event], None]) -> None:
        with self._lock:
            callbacks = self._subscribers.setdefault(event_type, [])
            if callback not in callbacks:
                callbacks.append(callback)
                self.logger.debug(f"Subscribed to {event_type.value}")

    def unsubscribe(self, event_type: EventType, callback: Callable[[Event], None]) -> None:
        with self._lock:
            try:
                self._subscribers.get(event_type, []).remove(callback)
                self.logger.debug(f"Unsubscribed from {event_type.value}")
            except ValueError:
                pass  # Callback wasn't subscribed

    def publish(self, event_type: EventType, source: str, data: Optional[Dict[str, Any]] = None) -> None:
        self._notify_subscribers(Event(event_type=event_type, source=source, data=data or {}))

    def _notify_subscribers(self, event: Event) -> None:
        with self._lock:
            subscribers = list(self._subscribers.get(event.event_type, []))

        for callback in subscribers:
            try:
                callback(event)
            except Exception as e:
                self.logger.error(f"Error in event callback for {event.event_type.value}: {e}")
