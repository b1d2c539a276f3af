"""
Edge (MEC) storage for redirected delay-tolerant content.
"""

import math
from collections.abc import Iterable, Iterator

from sortedcontainers import SortedList

from src.cce.traffic import ContentItem
from src.shared.errors import BufferOverflowError, InvalidParamsError


def _edf_key(item: ContentItem) -> tuple[float, str]:
    return (item.deadline_at, item.id)


class EdgeBuffer:
    """
    Deadline-ordered content store with a bit capacity.

    Iteration and pop() follow earliest-deadline-first, ties broken by id.
    """

    def __init__(self, capacity: float = math.inf, items: Iterable[ContentItem] = ()):
        if not capacity > 0:
            raise InvalidParamsError(f"buffer capacity must be > 0, got {capacity}")
        self.capacity = capacity
        self._items = SortedList(items, key=_edf_key)
        self.occupancy = float(sum(item.size for item in self._items))

    def fits(self, item: ContentItem) -> bool:
        return self.occupancy + item.size <= self.capacity

    def push(self, item: ContentItem) -> None:
        if item.deadline_at is None:
            raise InvalidParamsError(f"item {item.id} has no deadline; classify it first")
        if not self.fits(item):
            raise BufferOverflowError(
                f"item {item.id} ({item.size:g} bits) exceeds free space "
                f"{self.capacity - self.occupancy:g} bits"
            )
        self._items.add(item)
        self.occupancy += item.size

    def peek(self) -> ContentItem | None:
        return self._items[0] if self._items else None

    def pop(self) -> ContentItem:
        item = self._items.pop(0)
        self.occupancy -= item.size
        if not self._items:
            self.occupancy = 0.0
        return item

    def copy(self) -> "EdgeBuffer":
        clone = EdgeBuffer(self.capacity)
        clone._items = self._items.copy()
        clone.occupancy = self.occupancy
        return clone

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[ContentItem]:
        return iter(self._items)
