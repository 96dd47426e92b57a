from __future__ import annotations

import time

from .errors import BudgetExceeded


class Deadline:
    """Wall-clock compile budget shared by every stage of one compilation."""

    def __init__(self, budget_seconds: float | None, clock=time.monotonic):
        self.budget_seconds = budget_seconds
        self._clock = clock
        self.start = clock()

    @property
    def elapsed(self) -> float:
        return self._clock() - self.start

    def expired(self) -> bool:
        return self.budget_seconds is not None and self.elapsed > self.budget_seconds

    def check(self, stage: str) -> None:
        if self.expired():
            raise BudgetExceeded(self.budget_seconds, stage)


def check(deadline: Deadline | None, stage: str) -> None:
    if deadline is not None:
        deadline.check(stage)
