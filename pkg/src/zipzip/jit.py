"""Just-in-time zip-zip trees.

Each key keeps a geometric r1 and an r2 that starts as the empty bit string.
Whenever an update compares two rank pairs that cannot yet be ordered, both
r2 strings are extended with random bits until they can.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .ranks import KeyedRng, RankPair, RankPolicy
from .ziptree import ZipTree

CSV_HEADER = ("n", "r1_diff_bits", "r2_bits", "root_bits", "bits_per_node")


class JitNode:
    __slots__ = ("key", "r1", "bits", "left", "right")

    def __init__(self, key, r1, bits=""):
        self.key = key
        self.r1 = r1
        self.bits = bits
        self.left = None
        self.right = None

    @property
    def rank(self) -> RankPair:
        return RankPair(self.r1, self.bits)

    def __repr__(self):
        return f"JitNode({self.key}, {self.r1}, {self.bits!r})"


def _prefix_tied(a: str, b: str) -> bool:
    m = min(len(a), len(b))
    return a[:m] == b[:m]


def resolve_tie(a: JitNode, b: JitNode, rng) -> int:
    """Grow the r2 strings of a tied pair until they differ; return rounds.

    Each round supplies the next bit to every string that does not have one
    at the first undecided position, so a string that is already longer is
    never padded needlessly.
    """
    if a.r1 != b.r1 or not _prefix_tied(a.bits, b.bits):
        raise ValueError(f"{a!r} and {b!r} are not tied")
    rounds = 0
    while _prefix_tied(a.bits, b.bits):
        m = min(len(a.bits), len(b.bits))
        if len(a.bits) == m:
            a.bits += "1" if rng.getrandbits(1) else "0"
        if len(b.bits) == m:
            b.bits += "1" if rng.getrandbits(1) else "0"
        rounds += 1
    return rounds


class JitZipTree(ZipTree):
    """Zip-zip tree whose secondary ranks are generated lazily.

    Not history independent: which bits exist depends on which comparisons
    the update sequence happened to make.
    """

    def __init__(self, rng: Optional[KeyedRng] = None,
                 bit_rng: Optional[random.Random] = None):
        super().__init__(RankPolicy("original"), rng if rng is not None else KeyedRng(mode="fresh"))
        if bit_rng is None:
            bit_rng = random.Random(self.rng.master_seed ^ 0x9E3779B97F4A7C15)
        self.bit_rng = bit_rng
        self.tie_rounds = 0

    def _new_node(self, key, rank):
        bits = rank[1] if len(rank) > 1 and rank[1] is not None else ""
        return JitNode(key, rank[0], bits)

    def _dominates(self, a, b) -> bool:
        self.comparisons += 1
        if a.r1 != b.r1:
            return a.r1 > b.r1
        if _prefix_tied(a.bits, b.bits):
            self.ties += 1
            self.tie_rounds += resolve_tie(a, b, self.bit_rng)
        m = min(len(a.bits), len(b.bits))
        return a.bits[:m] > b.bits[:m]


@dataclass
class MetadataReport:
    """Rank-metadata bit counts of a JIT tree.

    r1 is charged as parent-minus-child differences in unary (``d`` costs
    ``d + 1`` bits); the root's absolute r1 costs ``ceil(log2(r1 + 2))`` bits.
    ``r1_diff_sum`` is the raw sum of differences, for comparison with
    encodings that charge only the difference itself.
    """

    n: int
    r1_diff_bits: int
    r1_diff_sum: int
    r2_bits: int
    root_bits: int

    @property
    def bits_per_node(self) -> float:
        if self.n == 0:
            return 0.0
        return (self.r1_diff_bits + self.r2_bits + self.root_bits) / self.n

    def csv_row(self) -> tuple:
        return (self.n, self.r1_diff_bits, self.r2_bits, self.root_bits,
                self.bits_per_node)


def metadata(tree: ZipTree) -> MetadataReport:
    diff_bits = diff_sum = r2_bits = 0
    root = tree.root
    if root is None:
        return MetadataReport(0, 0, 0, 0, 0)
    stack = [root]
    n = 0
    while stack:
        node = stack.pop()
        n += 1
        bits = node.rank[1]
        r2_bits += len(bits) if isinstance(bits, str) else 0
        for child in (node.left, node.right):
            if child is not None:
                d = node.rank[0] - child.rank[0]
                diff_sum += d
                diff_bits += d + 1
                stack.append(child)
    root_bits = math.ceil(math.log2(root.rank[0] + 2))
    return MetadataReport(n, diff_bits, diff_sum, r2_bits, root_bits)
