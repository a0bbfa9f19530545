"""External (leaf-oriented) zip-zip trees.

Items live in external nodes; internal nodes hold routing keys and ranks.
Each internal node's routing key is the smallest item key in its right
subtree, so every item except the smallest one has exactly one internal node.
With keyed ranks the internal node for routing key ``k`` always carries the
rank drawn for ``k``, which keeps the shape a function of the item set.
"""

from __future__ import annotations

from typing import Optional

from .ranks import KeyedRng, RankPolicy, dominates, make_rank
from .ziptree import _fmt_node


class Internal:
    __slots__ = ("key", "rank", "left", "right")

    def __init__(self, key, rank, left=None, right=None):
        self.key = key
        self.rank = rank
        self.left = left
        self.right = right


class External:
    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key


class SmallestKeyLemmaViolation(AssertionError):
    pass


def _beats(a, b) -> bool:
    # Internal nodes dominate every external node.
    if isinstance(b, External):
        return True
    if isinstance(a, External):
        return False
    return a.rank > b.rank if a.rank != b.rank else a.key < b.key


class ExtTree:
    def __init__(self, policy: Optional[RankPolicy] = None,
                 rng: Optional[KeyedRng] = None):
        self.policy = policy if policy is not None else RankPolicy("zipzip")
        self.rng = rng if rng is not None else KeyedRng()
        self.root = None
        self.size = 0
        self.special_inserts = 0

    def __len__(self):
        return self.size

    def __contains__(self, key):
        return self.search(key)[0]

    def __iter__(self):
        for leaf in self.leaves():
            yield leaf.key

    def search(self, key) -> tuple[bool, int]:
        cur = self.root
        if cur is None:
            return False, 0
        depth = 1
        while isinstance(cur, Internal):
            cur = cur.left if key < cur.key else cur.right
            depth += 1
        return cur.key == key, depth

    def _min_leaf(self):
        cur = self.root
        while isinstance(cur, Internal):
            cur = cur.left
        return cur

    def insert(self, key) -> bool:
        if self.root is None:
            self.root = External(key)
            self.size = 1
            return True
        if self.search(key)[0]:
            return False
        smallest = self._min_leaf()
        # A new minimum leaves the old minimum as the routing key of the new
        # internal node, so that is whose rank (and tie-break key) it takes.
        route = smallest.key if key < smallest.key else key
        rank = make_rank(self.policy, route, self.rng)
        new_int = Internal(route, rank)
        new_ext = External(key)

        cur, parent = self.root, None
        while isinstance(cur, Internal) and _beats(cur, new_int):
            parent = cur
            cur = cur.left if key < cur.key else cur.right
        if parent is None:
            self.root = new_int
        elif key < parent.key:
            parent.left = new_int
        else:
            parent.right = new_int

        # Unzip the path below: smaller keys chain through right children,
        # larger keys through left children.
        p_top = p_bot = q_top = q_bot = None
        while cur is not None:
            nxt = None
            if isinstance(cur, Internal):
                nxt = cur.left if key < cur.key else cur.right
            if cur.key < key:
                if p_bot is None:
                    p_top = cur
                else:
                    p_bot.right = cur
                p_bot = cur
            else:
                if q_bot is None:
                    q_top = cur
                else:
                    q_bot.left = cur
                q_bot = cur
            cur = nxt

        if isinstance(q_bot, External):
            if p_top is not None or key >= q_bot.key or q_bot is not smallest:
                raise SmallestKeyLemmaViolation(
                    f"Q ends in external {q_bot.key} while inserting {key}")
            self.special_inserts += 1
            new_int.left = new_ext
            new_int.right = q_top
        else:
            new_int.left = p_top
            if q_bot is None:
                new_int.right = new_ext
            else:
                q_bot.left = new_ext
                new_int.right = q_top
        self.size += 1
        return True

    def delete(self, key) -> bool:
        cur, parent, grand = self.root, None, None
        while isinstance(cur, Internal) and cur.key != key:
            grand, parent = parent, cur
            cur = cur.left if key < cur.key else cur.right
        if cur is None:
            return False
        if isinstance(cur, External):
            if cur.key != key:
                return False
            # Smallest item: drop the leaf and its parent.
            if parent is None:
                self.root = None
            else:
                self._replace(grand, parent, parent.right)
            self.size -= 1
            return True

        # Right spine of the left subtree, left spine of the right subtree
        # minus its bottom leaf (the item being deleted).
        p = []
        node = cur.left
        while True:
            p.append(node)
            if isinstance(node, External):
                break
            node = node.right
        q = []
        node = cur.right
        while isinstance(node, Internal):
            q.append(node)
            node = node.left
        if node.key != key:
            raise AssertionError(f"routing key {key} does not match its leaf")

        merged = []
        i = j = 0
        while i < len(p) and j < len(q):
            if _beats(p[i], q[j]):
                merged.append(p[i])
                i += 1
            else:
                merged.append(q[j])
                j += 1
        merged.extend(p[i:])
        merged.extend(q[j:])
        for upper, lower in zip(merged, merged[1:]):
            if lower.key < upper.key:
                upper.left = lower
            else:
                upper.right = lower
        self._replace(parent, cur, merged[0])
        self.size -= 1
        return True

    def _replace(self, parent, old, new):
        if parent is None:
            self.root = new
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    def leaves(self):
        stack = []
        cur = self.root
        while stack or cur is not None:
            while isinstance(cur, Internal):
                stack.append(cur)
                cur = cur.left
            if cur is not None:
                yield cur
            if not stack:
                break
            cur = stack.pop().right

    def counts(self) -> tuple[int, int]:
        """(internal, external) node counts."""
        n_int = n_ext = 0
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            if isinstance(node, Internal):
                n_int += 1
                stack.append(node.left)
                stack.append(node.right)
            else:
                n_ext += 1
        return n_int, n_ext

    def validate(self) -> list[str]:
        problems = []
        n_int, n_ext = self.counts()
        if n_ext != self.size:
            problems.append(f"size {self.size} but {n_ext} external nodes")
        if self.size >= 1 and n_int != n_ext - 1:
            problems.append(f"{n_int} internal vs {n_ext} external nodes")
        if self.size == 1 and not isinstance(self.root, External):
            problems.append("single item is not a lone external node")
        leaves = [leaf.key for leaf in self.leaves()]
        for a, b in zip(leaves, leaves[1:]):
            if a >= b:
                problems.append(f"external nodes out of order at {a}, {b}")
        routing = set()
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            if isinstance(node, External):
                continue
            if node.left is None or node.right is None:
                problems.append(f"internal node {node.key} is missing a child")
                continue
            routing.add(node.key)
            succ = node.right
            while isinstance(succ, Internal):
                succ = succ.left
            if succ.key != node.key:
                problems.append(
                    f"routing key {node.key} differs from successor item {succ.key}")
            for child in (node.left, node.right):
                if isinstance(child, Internal) and not dominates(
                        (node.rank, node.key), (child.rank, child.key)):
                    problems.append(
                        f"heap order violated: {node.key} above {child.key}")
                stack.append(child)
        if leaves and leaves[0] in routing:
            problems.append(f"smallest item {leaves[0]} appears as a routing key")
        return problems

    def dumps(self) -> str:
        lines = []
        stack = [(self.root, 0, "")] if self.root is not None else []
        while stack:
            node, depth, side = stack.pop()
            pad = "  " * depth + (f"{side}:" if side else "")
            if isinstance(node, External):
                lines.append(f"{pad}[{node.key}]")
                continue
            lines.append(pad + _fmt_node(node.key, node.rank))
            stack.append((node.right, depth + 1, "R"))
            stack.append((node.left, depth + 1, "L"))
        return "\n".join(lines)
