"""Partially persistent zip trees built from fat nodes.

Every child pointer is a list of ``(version, child)`` slots.  Updates run the
ordinary zip-tree insert/delete against the newest version; each pointer
write becomes a slot stamped with the version being built.  Reads at an old
version take the last slot whose stamp does not exceed it.
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_right
from typing import NamedTuple, Optional

from .ranks import KeyedRng, RankPolicy
from .ziptree import ZipTree, _fmt_node

VersionId = int


class _Clock:
    __slots__ = ("version", "writes")

    def __init__(self):
        self.version = 0
        self.writes = 0


class FatNode:
    __slots__ = ("key", "rank", "_clock", "_lv", "_lc", "_rv", "_rc")

    def __init__(self, key, rank, clock):
        self.key = key
        self.rank = rank
        self._clock = clock
        self._lv, self._lc = [], []
        self._rv, self._rc = [], []

    def _write(self, versions, children, value):
        clock = self._clock
        if versions and versions[-1] == clock.version:
            before = children[-2] if len(children) > 1 else None
            if value is before:
                versions.pop()
                children.pop()
                clock.writes -= 1
            else:
                children[-1] = value
        elif (children[-1] if children else None) is not value:
            versions.append(clock.version)
            children.append(value)
            clock.writes += 1

    @property
    def left(self):
        return self._lc[-1] if self._lc else None

    @left.setter
    def left(self, value):
        self._write(self._lv, self._lc, value)

    @property
    def right(self):
        return self._rc[-1] if self._rc else None

    @right.setter
    def right(self, value):
        self._write(self._rv, self._rc, value)

    def left_at(self, version):
        i = bisect_right(self._lv, version)
        return self._lc[i - 1] if i else None

    def right_at(self, version):
        i = bisect_right(self._rv, version)
        return self._rc[i - 1] if i else None

    def slot_count(self) -> int:
        return len(self._lv) + len(self._rv)


class _FatEngine(ZipTree):
    def __init__(self, policy, rng, clock):
        super().__init__(policy, rng)
        self.clock = clock
        self.pool = {}

    def _new_node(self, key, rank):
        # Deleted keys come back as the same fat node; keyed ranks make the
        # rank identical, and old versions still read the old slots.
        node = self.pool.get(key)
        if node is None:
            node = self.pool[key] = FatNode(key, rank, self.clock)
        return node


class SpaceStats(NamedTuple):
    versions: int
    nodes: int
    slot_entries: int
    slots_per_update: float


class PersistentTree:
    """Partially persistent zip tree; version 0 is the empty tree."""

    def __init__(self, policy: Optional[RankPolicy] = None,
                 rng: Optional[KeyedRng] = None):
        rng = rng if rng is not None else KeyedRng()
        if rng.mode != "keyed":
            raise ValueError("persistent trees need a keyed rng")
        self._clock = _Clock()
        self._engine = _FatEngine(policy, rng, self._clock)
        self.policy = self._engine.policy
        self.rng = rng
        self.roots = [None]
        self.sizes = [0]
        self.cumulative_slots = [0]

    @property
    def newest(self) -> VersionId:
        return len(self.roots) - 1

    @property
    def change_count(self) -> int:
        """Slot entries plus root-table entries."""
        return self._clock.writes + len(self.roots)

    def _update(self, op, key) -> VersionId:
        self._clock.version = len(self.roots)
        op(key)
        self.roots.append(self._engine.root)
        self.sizes.append(self._engine.size)
        self.cumulative_slots.append(self._clock.writes)
        return self.newest

    def p_insert(self, key) -> VersionId:
        return self._update(self._engine.insert, key)

    def p_delete(self, key) -> VersionId:
        return self._update(self._engine.delete, key)

    def _check(self, version):
        if not 0 <= version < len(self.roots):
            raise ValueError(f"unknown version {version} (newest is {self.newest})")

    def p_search(self, version: VersionId, key) -> bool:
        self._check(version)
        cur = self.roots[version]
        while cur is not None:
            if key == cur.key:
                return True
            cur = cur.left_at(version) if key < cur.key else cur.right_at(version)
        return False

    def keys_at(self, version: VersionId) -> list[int]:
        self._check(version)
        out, stack = [], []
        cur = self.roots[version]
        while stack or cur is not None:
            while cur is not None:
                stack.append(cur)
                cur = cur.left_at(version)
            cur = stack.pop()
            out.append(cur.key)
            cur = cur.right_at(version)
        return out

    def dumps(self, version: Optional[VersionId] = None) -> str:
        """Canonical text form of one version (same format as ZipTree)."""
        version = self.newest if version is None else version
        self._check(version)
        lines = []
        root = self.roots[version]
        stack = [(root, 1, "")] if root is not None else []
        while stack:
            node, depth, side = stack.pop()
            lines.append("  " * (depth - 1) + (f"{side}:" if side else "")
                         + _fmt_node(node.key, node.rank))
            r, l = node.right_at(version), node.left_at(version)
            if r is not None:
                stack.append((r, depth + 1, "R"))
            if l is not None:
                stack.append((l, depth + 1, "L"))
        return "\n".join(lines)

    def space_stats(self) -> SpaceStats:
        updates = self.newest
        slots = self._clock.writes
        return SpaceStats(len(self.roots), len(self._engine.pool), slots,
                          slots / updates if updates else 0)

    def space_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("version", "cumulative_slots", "slots_per_update"))
        for v, total in enumerate(self.cumulative_slots):
            w.writerow((v, total, f"{total / v:.6g}" if v else "0"))
        return buf.getvalue()
