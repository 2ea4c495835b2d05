"""Single-slot mailbox and the background policy worker of asynchronous rollouts.

Posting overwrites whatever the slot holds; taking never blocks. The control
loop therefore always runs on the freshest chunk that is ready, stale or not.
"""

import logging
import threading
from typing import Any, Callable, Generic, TypeVar


logger = logging.getLogger(__name__)

T = TypeVar("T")


class Mailbox(Generic[T]):

    def __init__(self):
        self._lock = threading.Lock()
        self._item: T | None = None
        self._posted = threading.Event()

    def post(self, item: T) -> bool:
        """Store `item`; returns True when it replaced an item nobody took."""
        with self._lock:
            replaced = self._item is not None
            self._item = item
            self._posted.set()
        return replaced

    def take(self) -> T | None:
        with self._lock:
            item, self._item = self._item, None
            self._posted.clear()
        return item

    def wait(self, timeout: float | None = None) -> T | None:
        """Block until an item is posted (worker side only)."""
        if self._posted.wait(timeout):
            return self.take()
        return None


class PolicyWorker(threading.Thread):
    """Evaluates `predict(request)` for the latest request and posts `(request, result)` back."""

    def __init__(self, predict: Callable[[Any], Any], poll: float = 0.05):
        super().__init__(name="policy-worker", daemon=True)
        self.predict = predict
        self.poll = poll
        self.requests: Mailbox[Any] = Mailbox()
        self.results: Mailbox[tuple[Any, Any]] = Mailbox()
        self.error: BaseException | None = None
        self._stopping = threading.Event()

    def submit(self, request: Any) -> None:
        if self.requests.post(request):
            logger.debug("policy request superseded before evaluation")

    def run(self) -> None:
        while not self._stopping.is_set():
            request = self.requests.wait(self.poll)
            if request is None:
                continue
            try:
                result = self.predict(request)
            except Exception as error:  # surfaced to the control loop through `error`
                self.error = error
                logger.exception("policy worker failed")
                return
            self.results.post((request, result))

    def stop(self, timeout: float | None = 5.0) -> None:
        self._stopping.set()
        self.join(timeout)
