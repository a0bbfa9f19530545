"""Binary zip trees: search, insert by unzipping, delete by zipping.

The same engine serves the original, uniform, zip-zip, variable-p and biased
variants; they differ only in the :class:`~zipzip.ranks.RankPolicy` used to
draw ranks.  Subclasses (the just-in-time tree, the persistent tree's
fat-node engine) override the node factory and the dominance test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .ranks import (KeyedRng, RankPair, RankPolicy, UnresolvedTie, dominates,
                    make_rank)


class Node:
    __slots__ = ("key", "rank", "left", "right")

    def __init__(self, key, rank):
        self.key = key
        self.rank = rank
        self.left = None
        self.right = None

    def __repr__(self):
        return f"Node({self.key}, {self.rank})"


@dataclass
class TreeStats:
    """Depth profile of one tree.

    ``per_key_depth`` is 1-based (the root has depth 1).  It is a dict for
    trees built by the engine; the compiled in-order builder hands back a
    numpy array indexed by key instead.
    """

    per_key_depth: object
    height: int
    root_r1: Optional[int]
    rank_group_sizes: list = field(default_factory=list)

    def _depth_values(self):
        d = self.per_key_depth
        return list(d.values()) if isinstance(d, dict) else d

    @property
    def n(self) -> int:
        return len(self.per_key_depth)

    @property
    def smallest_depth(self) -> int:
        d = self.per_key_depth
        return d[min(d)] if isinstance(d, dict) else int(d[0])

    @property
    def largest_depth(self) -> int:
        d = self.per_key_depth
        return d[max(d)] if isinstance(d, dict) else int(d[-1])

    @property
    def mean_depth(self) -> float:
        vals = self._depth_values()
        return float(sum(vals)) / len(vals) if len(vals) else 0.0


class ZipTree:
    """A zip tree over distinct integer keys.

    >>> t = ZipTree(RankPolicy("original"), KeyedRng(7))
    >>> t.insert(3), t.insert(3)
    (True, False)
    >>> t.search(3)
    (True, 1)
    """

    def __init__(self, policy: Optional[RankPolicy] = None,
                 rng: Optional[KeyedRng] = None):
        self.policy = policy if policy is not None else RankPolicy()
        self.rng = rng if rng is not None else KeyedRng()
        self.root = None
        self.size = 0
        self.comparisons = 0
        self.ties = 0

    # -- hooks -----------------------------------------------------------

    def _new_node(self, key, rank):
        return Node(key, rank)

    def _draw_rank(self, key):
        return make_rank(self.policy, key, self.rng)

    def _dominates(self, a, b) -> bool:
        self.comparisons += 1
        ra, rb = a.rank, b.rank
        if ra == rb:
            self.ties += 1
            return a.key < b.key
        return ra > rb

    def _ordered(self, parent, child) -> bool:
        # Non-mutating heap-order check used by the validators.
        try:
            return dominates((parent.rank, parent.key), (child.rank, child.key))
        except UnresolvedTie:
            return False

    # -- dictionary operations ------------------------------------------

    def __len__(self):
        return self.size

    def __contains__(self, key):
        return self._find(key) is not None

    def __iter__(self) -> Iterator[int]:
        for node in self.nodes():
            yield node.key

    def _find(self, key):
        cur = self.root
        while cur is not None and cur.key != key:
            cur = cur.left if key < cur.key else cur.right
        return cur

    def search(self, key) -> tuple[bool, int]:
        depth = 0
        cur = self.root
        while cur is not None:
            depth += 1
            if key == cur.key:
                return True, depth
            cur = cur.left if key < cur.key else cur.right
        return False, depth

    def insert(self, key, rank: Optional[RankPair] = None) -> bool:
        """Insert ``key``; ``rank`` overrides the policy draw (oracles, tests)."""
        if self._find(key) is not None:
            return False
        if rank is None:
            rank = self._draw_rank(key)
        x = self._new_node(key, rank)
        x.left = None
        x.right = None

        cur = self.root
        prev = None
        while cur is not None and self._dominates(cur, x):
            prev = cur
            cur = cur.left if key < cur.key else cur.right

        if prev is None:
            self.root = x
        elif key < prev.key:
            prev.left = x
        else:
            prev.right = x
        self.size += 1
        if cur is None:
            return True
        if key < cur.key:
            x.right = cur
        else:
            x.left = cur

        # Unzip the rest of the search path into the smaller-key path hanging
        # left of x and the larger-key path hanging right of x.
        prev = x
        while cur is not None:
            fix = prev
            if cur.key < key:
                while True:
                    prev = cur
                    cur = cur.right
                    if cur is None or cur.key > key:
                        break
            else:
                while True:
                    prev = cur
                    cur = cur.left
                    if cur is None or cur.key < key:
                        break
            if fix.key > key or (fix is x and prev.key > key):
                fix.left = cur
            else:
                fix.right = cur
        return True

    def delete(self, key) -> bool:
        cur = self.root
        prev = None
        while cur is not None and cur.key != key:
            prev = cur
            cur = cur.left if key < cur.key else cur.right
        if cur is None:
            return False

        left, right = cur.left, cur.right
        if left is None:
            top = right
        elif right is None:
            top = left
        elif self._dominates(left, right):
            top = left
        else:
            top = right
        if prev is None:
            self.root = top
        elif key < prev.key:
            prev.left = top
        else:
            prev.right = top

        # Zip the right spine of the left subtree with the left spine of the
        # right subtree, highest rank first.
        while left is not None and right is not None:
            if self._dominates(left, right):
                while True:
                    prev = left
                    left = left.right
                    if left is None or not self._dominates(left, right):
                        break
                prev.right = right
            else:
                while True:
                    prev = right
                    right = right.left
                    if right is None or self._dominates(left, right):
                        break
                prev.left = left
        self.size -= 1
        return True

    # -- traversal, inspection ------------------------------------------

    def nodes(self) -> Iterator[Node]:
        """In-order node iterator (iterative, safe for path-shaped trees)."""
        stack = []
        cur = self.root
        while stack or cur is not None:
            while cur is not None:
                stack.append(cur)
                cur = cur.left
            cur = stack.pop()
            yield cur
            cur = cur.right

    def items(self) -> list[tuple[int, RankPair]]:
        return [(n.key, n.rank) for n in self.nodes()]

    def _preorder(self):
        # Yields (node, depth, side) with side in {"", "L", "R"}.
        if self.root is None:
            return
        stack = [(self.root, 1, "")]
        while stack:
            node, depth, side = stack.pop()
            yield node, depth, side
            if node.right is not None:
                stack.append((node.right, depth + 1, "R"))
            if node.left is not None:
                stack.append((node.left, depth + 1, "L"))

    def stats(self) -> TreeStats:
        depths = {}
        group_of = {}
        sizes = {}
        for node, depth, _ in self._preorder():
            depths[node.key] = depth
        # Group each node with its parent when the r1 values agree.
        stack = [(self.root, None)] if self.root is not None else []
        while stack:
            node, parent = stack.pop()
            if parent is not None and parent.rank[0] == node.rank[0]:
                g = group_of[parent.key]
            else:
                g = node.key
            group_of[node.key] = g
            sizes[g] = sizes.get(g, 0) + 1
            for child in (node.left, node.right):
                if child is not None:
                    stack.append((child, node))
        height = max(depths.values()) if depths else 0
        root_r1 = self.root.rank[0] if self.root is not None else None
        return TreeStats(depths, height, root_r1, list(sizes.values()))

    def validate(self) -> list[str]:
        problems = []
        count = 0
        if self.root is not None:
            stack = [(self.root, None, None)]
            while stack:
                node, lo, hi = stack.pop()
                count += 1
                if (lo is not None and node.key <= lo) or (hi is not None and node.key >= hi):
                    problems.append(f"BST order violated at key {node.key}")
                for child in (node.left, node.right):
                    if child is not None and not self._ordered(node, child):
                        problems.append(
                            f"heap order violated: {node.key}{node.rank} above "
                            f"{child.key}{child.rank}")
                if node.right is not None:
                    stack.append((node.right, node.key, hi))
                if node.left is not None:
                    stack.append((node.left, lo, node.key))
        if count != self.size:
            problems.append(f"size {self.size} but {count} reachable nodes")
        return problems

    def check_skiplist_isomorphism(self) -> bool:
        """Check the tree against the skip list its (key, r1) pairs define.

        Every r1-rank group must be exactly the run of level-r1 keys that the
        skip list holds between two consecutive taller keys, and the group
        root's subtree must span exactly that interval.
        """
        if not self.policy.geometric:
            raise ValueError("skip-list isomorphism needs geometric r1 ranks")
        if self.validate():
            return False
        items = self.items()
        keys = [k for k, _ in items]
        levels = [r[0] for _, r in items]
        n = len(keys)
        # Nearest strictly taller key on each side (index, or -1 / n for the
        # -inf / +inf sentinels).
        lt, gt = [-1] * n, [n] * n
        stack = []
        for i in range(n):
            while stack and levels[stack[-1]] <= levels[i]:
                stack.pop()
            lt[i] = stack[-1] if stack else -1
            stack.append(i)
        stack = []
        for i in range(n - 1, -1, -1):
            while stack and levels[stack[-1]] <= levels[i]:
                stack.pop()
            gt[i] = stack[-1] if stack else n
            stack.append(i)
        index = {k: i for i, k in enumerate(keys)}

        members = {}
        subtree_span = {}
        stack = [(self.root, None)] if self.root is not None else []
        group_root = {}
        while stack:
            node, parent = stack.pop()
            if parent is not None and parent.rank[0] == node.rank[0]:
                group_root[node.key] = group_root[parent.key]
            else:
                group_root[node.key] = node.key
            members.setdefault(group_root[node.key], []).append(index[node.key])
            for child in (node.left, node.right):
                if child is not None:
                    stack.append((child, node))
        for node, _, _ in self._preorder():
            if group_root[node.key] == node.key:
                lo = hi = node
                while lo.left is not None:
                    lo = lo.left
                while hi.right is not None:
                    hi = hi.right
                subtree_span[node.key] = (index[lo.key], index[hi.key])

        for g, idxs in members.items():
            i = idxs[0]
            a, b = lt[i], gt[i]
            run = [j for j in range(a + 1, b) if levels[j] == levels[i]]
            if sorted(idxs) != run:
                return False
            if subtree_span[g] != (a + 1, b - 1):
                return False
        return True

    # -- canonical text form --------------------------------------------

    def dumps(self) -> str:
        lines = []
        for node, depth, side in self._preorder():
            lines.append("  " * (depth - 1) + (f"{side}:" if side else "")
                         + _fmt_node(node.key, node.rank))
        return "\n".join(lines)

    @classmethod
    def loads(cls, text: str, policy: Optional[RankPolicy] = None,
              rng: Optional[KeyedRng] = None) -> "ZipTree":
        """Rebuild a tree from :meth:`dumps` output without validating it."""
        tree = cls(policy, rng)
        path = []
        for line in text.splitlines():
            if not line.strip():
                continue
            stripped = line.lstrip(" ")
            depth = (len(line) - len(stripped)) // 2
            side = ""
            if stripped[1] == ":":
                side, stripped = stripped[0], stripped[2:]
            key, rank = _parse_node(stripped)
            node = tree._new_node(key, rank)
            del path[depth:]
            if depth == 0:
                tree.root = node
            elif side == "L":
                path[-1].left = node
            else:
                path[-1].right = node
            path.append(node)
            tree.size += 1
        return tree


def _fmt_node(key, rank) -> str:
    r2 = rank[1] if len(rank) > 1 else None
    if r2 is None:
        r2s = "-"
    elif isinstance(r2, str):
        r2s = "b" + r2
    else:
        r2s = str(r2)
    return f"({key},{rank[0]},{r2s})"


def _parse_node(text: str):
    key, r1, r2 = text.strip().strip("()").split(",")
    if r2 == "-":
        r2v = None
    elif r2.startswith("b"):
        r2v = r2[1:]
    else:
        r2v = int(r2)
    return int(key), RankPair(int(r1), r2v)


def build_canonical(pairs, policy: Optional[RankPolicy] = None,
                    rng: Optional[KeyedRng] = None) -> ZipTree:
    """Build the unique zip tree on ``pairs`` directly from its definition.

    The root of every key range is the pair dominating all others in it
    (highest rank, smallest key on ties); the ranges left and right of it are
    built the same way.  No insertion code is involved.
    """
    pairs = list(pairs)
    for (a, _), (b, _) in zip(pairs, pairs[1:]):
        if a >= b:
            raise ValueError("build_canonical needs strictly increasing keys")
    tree = ZipTree(policy, rng)
    tree.size = len(pairs)
    work = [(0, len(pairs), None, "")]
    while work:
        lo, hi, parent, side = work.pop()
        if lo >= hi:
            continue
        best = lo
        for i in range(lo + 1, hi):
            k, r = pairs[i]
            bk, br = pairs[best]
            if dominates((r, k), (br, bk)):
                best = i
        node = Node(*pairs[best])
        if parent is None:
            tree.root = node
        elif side == "L":
            parent.left = node
        else:
            parent.right = node
        work.append((lo, best, node, "L"))
        work.append((best + 1, hi, node, "R"))
    return tree


def validate(tree) -> list[str]:
    return tree.validate()


def stats(tree) -> TreeStats:
    return tree.stats()


def check_skiplist_isomorphism(tree) -> bool:
    return tree.check_skiplist_isomorphism()
