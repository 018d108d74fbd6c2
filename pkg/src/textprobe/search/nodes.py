"""Search graph nodes and the min-heap frontier."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterator

from textprobe.threat.verdict import ThreatVerdict


@dataclass(frozen=True)
class Edit:
    """One substitution: which position, what it was, what it became."""

    position: int
    original: str
    replacement: str

    def to_list(self) -> list:
        return [self.position, self.original, self.replacement]


@dataclass(frozen=True)
class SearchNode:
    """A candidate text with its priority and provenance.

    ``priority`` is the classifier's confidence in the ground-truth label
    for this text; lower is closer to a successful test case. ``seq`` is
    the creation ordinal and breaks priority ties first-in-first-out.
    """

    surfaces: tuple[str, ...]
    text: str
    priority: float
    edits: tuple[Edit, ...]
    seq: int
    verdict: ThreatVerdict

    def __post_init__(self):
        positions = [e.position for e in self.edits]
        if len(positions) != len(set(positions)):
            raise ValueError("edit positions must be distinct")


class NodeQueue:
    """Min-heap of nodes keyed by (priority, seq)."""

    def __init__(self):
        self._heap: list[tuple[float, int, SearchNode]] = []

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def __iter__(self) -> Iterator[SearchNode]:
        return (node for _, _, node in self._heap)

    def push(self, node: SearchNode) -> None:
        heapq.heappush(self._heap, (node.priority, node.seq, node))

    def pop(self) -> SearchNode:
        return heapq.heappop(self._heap)[2]

    def peek(self) -> SearchNode:
        return self._heap[0][2]
