"""
Progress bar over sweep points, driven by engine events.
"""

import sys
from typing import Optional

from tqdm import tqdm

from ..core.events import Event, EventSystem, EventType

_POINT_DONE = (EventType.POINT_COMPLETED, EventType.POINT_SKIPPED, EventType.POINT_FAILED)


class ProgressReporter:
    """tqdm bar that advances once per finished parameter point"""

    def __init__(self, event_system: EventSystem, enabled: bool = True):
        self.event_system = event_system
        self.enabled = enabled
        self.bar: Optional[tqdm] = None
        self.failed = 0

    def __enter__(self) -> "ProgressReporter":
        self.event_system.subscribe(EventType.SWEEP_STARTED, self._on_started)
        for event_type in _POINT_DONE:
            self.event_system.subscribe(event_type, self._on_point)
        self.event_system.subscribe(EventType.SWEEP_FINISHED, self._on_finished)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.event_system.unsubscribe(EventType.SWEEP_STARTED, self._on_started)
        for event_type in _POINT_DONE:
            self.event_system.unsubscribe(event_type, self._on_point)
        self.event_system.unsubscribe(EventType.SWEEP_FINISHED, self._on_finished)
        self._close()

    def _on_started(self, event: Event) -> None:
        # disable=None turns the bar off when stderr is not a terminal
        self.bar = tqdm(total=event.data.get("points", 0), unit="pt", desc="sweep", file=sys.stderr, disable=None if self.enabled else True, leave=False)

    def _on_point(self, event: Event) -> None:
        if event.event_type is EventType.POINT_FAILED:
            self.failed += 1
        if self.bar is not None:
            self.bar.set_postfix_str(event.data.get("label", ""), refresh=False)
            self.bar.update(1)

    def _on_finished(self, event: Event) -> None:
        self._close()

    def _close(self) -> None:
        if self.bar is not None:
            self.bar.close()
            self.bar = None
