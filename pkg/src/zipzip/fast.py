"""Compiled builder for trees whose keys arrive in increasing order.

Inserting keys ``0..n-1`` in order only ever walks the right spine, so the
insertion algorithm reduces to a spine stack: descend while the spine node's
rank is at least the new rank, hang the remainder of the spine off the new
node's left side.  The routines here replay that exact procedure (including
the comparison and tie counts a descent incurs) so the experiment harness can
run thousands of trials at ``n = 2**16``.  ``tests/test_fast.py`` checks the
produced shapes against :class:`zipzip.ziptree.ZipTree` node for node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit


@njit(cache=True)
def _build(r1, r2, left, right, stack, prefix):
    # Returns (root, comparisons, ties, tie_mass).  ``tie_mass`` is the summed
    # conditional probability of a tie at each comparison, assuming r1 holds a
    # uniform rank and the range upper bound is ``prefix[0]`` on entry.
    n = r1.shape[0]
    top = 0
    root = -1
    comparisons = 0
    ties = 0
    inv_range = prefix[0]
    prefix[0] = 0.0
    tie_mass = 0.0
    for i in range(n):
        a1 = r1[i]
        a2 = r2[i]
        last = -1
        while top > 0:
            s = stack[top - 1]
            if r1[s] < a1 or (r1[s] == a1 and r2[s] < a2):
                last = s
                top -= 1
            else:
                break
        c = top + (1 if last != -1 else 0)
        comparisons += c
        if c > 0:
            tie_mass += inv_range + prefix[c - 1]
        t = top - 1
        while t >= 0 and r1[stack[t]] == a1 and r2[stack[t]] == a2:
            ties += 1
            t -= 1
        left[i] = last
        right[i] = -1
        if top > 0:
            right[stack[top - 1]] = i
        else:
            root = i
        stack[top] = i
        prefix[top + 1] = prefix[top] + (1.0 / a1 if a1 > 0 else 0.0)
        top += 1
    return root, comparisons, ties, tie_mass


@njit(cache=True)
def _depths(root, r1, left, right, depth, group):
    # Fills 1-based depths and r1-group labels (label = group root index).
    n = left.shape[0]
    if root < 0:
        return
    stack = np.empty(n, dtype=np.int64)
    top = 0
    stack[0] = root
    top = 1
    depth[root] = 1
    group[root] = root
    while top > 0:
        top -= 1
        v = stack[top]
        for c in (left[v], right[v]):
            if c >= 0:
                depth[c] = depth[v] + 1
                group[c] = group[v] if r1[c] == r1[v] else c
                stack[top] = c
                top += 1


@dataclass
class SequentialRun:
    """Shape and counters of one in-order build."""

    root: int
    left: np.ndarray
    right: np.ndarray
    depth: np.ndarray
    group: np.ndarray
    comparisons: int
    ties: int
    tie_mass: float

    @property
    def height(self) -> int:
        return int(self.depth.max()) if self.depth.size else 0

    def group_sizes(self) -> np.ndarray:
        counts = np.bincount(self.group, minlength=self.group.size)
        return counts[counts > 0]


def build_sequential(r1: np.ndarray, r2: np.ndarray | None = None,
                     uniform_range: int | None = None) -> SequentialRun:
    """Insert keys ``0..n-1`` in order with the given ranks.

    ``r2`` of ``None`` means no secondary rank.  ``uniform_range`` enables the
    tie-probability accumulator (meaningful only when ``r1`` is a uniform rank
    on ``[1, uniform_range]``).
    """
    r1 = np.ascontiguousarray(r1, dtype=np.int64)
    n = r1.shape[0]
    if r2 is None:
        r2 = np.zeros(n, dtype=np.int64)
    else:
        r2 = np.ascontiguousarray(r2, dtype=np.int64)
    left = np.empty(n, dtype=np.int64)
    right = np.empty(n, dtype=np.int64)
    stack = np.empty(n + 1, dtype=np.int64)
    prefix = np.empty(n + 2, dtype=np.float64)
    prefix[0] = 1.0 / uniform_range if uniform_range else 0.0
    root, comparisons, ties, tie_mass = _build(r1, r2, left, right, stack, prefix)
    depth = np.zeros(n, dtype=np.int64)
    group = np.zeros(n, dtype=np.int64)
    _depths(root, r1, left, right, depth, group)
    return SequentialRun(int(root), left, right, depth, group,
                         int(comparisons), int(ties), float(tie_mass))
