"""Node-array geometry for all-to-all fabrics.

A fabric is a rows x cols array of processing nodes on a square pitch. Every
ordered pair of distinct nodes gets its own directional link, so an N-node
array carries N*(N-1) links, each routed Manhattan-style.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np


class NodeId(NamedTuple):
    row: int
    col: int


class Link(NamedTuple):
    src: NodeId
    dst: NodeId
    length_cm: float


@dataclass(frozen=True)
class NodeGrid:
    rows: int
    cols: int
    pitch_cm: float = 10.0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid needs at least one row and column, got {self.rows}x{self.cols}")
        if not self.pitch_cm > 0:
            raise ValueError(f"pitch must be positive, got {self.pitch_cm}")

    @property
    def node_count(self) -> int:
        return self.rows * self.cols

    @property
    def link_count(self) -> int:
        n = self.node_count
        return n * (n - 1)

    @property
    def diameter_cm(self) -> float:
        return (self.rows - 1 + self.cols - 1) * self.pitch_cm

    def nodes(self) -> Iterator[NodeId]:
        for r in range(self.rows):
            for c in range(self.cols):
                yield NodeId(r, c)

    def contains(self, node: NodeId) -> bool:
        return 0 <= node.row < self.rows and 0 <= node.col < self.cols


def manhattan_length(a: NodeId, b: NodeId, pitch_cm: float) -> float:
    return (abs(a.row - b.row) + abs(a.col - b.col)) * pitch_cm


def all_to_all_links(grid: NodeGrid) -> list[Link]:
    """One directional link per ordered pair of distinct nodes."""
    nodes = list(grid.nodes())
    return [
        Link(a, b, manhattan_length(a, b, grid.pitch_cm))
        for a in nodes
        for b in nodes
        if a != b
    ]


@dataclass(frozen=True)
class LengthHistogram:
    bins: dict[float, int] = field(default_factory=dict)
    total: int = 0

    def count_at_least(self, length_cm: float) -> int:
        return sum(n for length, n in self.bins.items() if length >= length_cm)

    @property
    def max_length_cm(self) -> float:
        return max(self.bins) if self.bins else 0.0


def length_histogram(grid: NodeGrid) -> LengthHistogram:
    """Link-length distribution over all ordered links.

    Counts by row/column offset instead of enumerating pairs: an offset
    (dr, dc) occurs (rows-|dr|)*(cols-|dc|) times, so the cost is
    O(rows*cols) rather than O(N^2).
    """
    dr = np.arange(-(grid.rows - 1), grid.rows)
    dc = np.arange(-(grid.cols - 1), grid.cols)
    counts = np.outer(grid.rows - np.abs(dr), grid.cols - np.abs(dc))
    steps = np.add.outer(np.abs(dr), np.abs(dc))
    per_step = np.bincount(steps.ravel(), weights=counts.ravel()).astype(np.int64)

    bins = {
        int(s) * grid.pitch_cm: int(n)
        for s, n in enumerate(per_step)
        if s > 0 and n > 0
    }
    return LengthHistogram(bins=bins, total=sum(bins.values()))


@dataclass(frozen=True)
class ShuffleMap:
    """Perfect-shuffle wiring of n nodes with n lanes each.

    Transmit lane k of node i lands on receive lane i of node k, so each node
    owns exactly one lane to every node (itself included).
    """

    nodes: int

    def __post_init__(self):
        if self.nodes < 1:
            raise ValueError(f"shuffle needs at least one node, got {self.nodes}")

    @property
    def lanes(self) -> int:
        return self.nodes

    def route(self, node: int, lane: int) -> tuple[int, int]:
        if not (0 <= node < self.nodes and 0 <= lane < self.lanes):
            raise IndexError(f"endpoint ({node}, {lane}) outside {self.nodes}x{self.lanes} shuffle")
        return lane, node

    @property
    def mapping(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {
            (i, k): self.route(i, k)
            for i in range(self.nodes)
            for k in range(self.lanes)
        }


def perfect_shuffle(n: int) -> ShuffleMap:
    return ShuffleMap(n)
