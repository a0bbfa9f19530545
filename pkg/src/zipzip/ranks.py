"""Rank generation and the dominance order shared by every tree variant."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Union

VARIANTS = ("original", "uniform", "zipzip", "variable_p", "biased")

R2 = Union[None, int, str]


class UnresolvedTie(Exception):
    """Two JIT rank pairs cannot be ordered until more r2 bits exist."""


class RankPair(NamedTuple):
    r1: int
    r2: R2 = None

    def __str__(self):
        return f"({self.r1},{'-' if self.r2 is None else self.r2})"


@dataclass(frozen=True)
class RankPolicy:
    """How ranks are drawn for a tree.

    ``n_cap`` sizes the uniform ranges once, at tree creation, so that a key's
    rank never depends on the tree's current size.
    """

    variant: str = "zipzip"
    p: float = 0.5
    c: float = 3
    n_cap: int = 2 ** 16
    weight_fn: Optional[Callable[[int], int]] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown rank variant {self.variant!r}")
        if not 0 < self.p < 1:
            raise ValueError("p must lie strictly between 0 and 1")
        if self.n_cap < 1:
            raise ValueError("n_cap must be positive")
        if self.variant == "biased" and self.weight_fn is None:
            raise ValueError("biased policy needs a weight_fn")

    @property
    def geometric(self) -> bool:
        return self.variant != "uniform"

    @property
    def r2_range(self) -> int:
        """Upper end of the secondary rank interval, ceil((log2 n_cap)**c)."""
        return max(1, math.ceil(math.log2(self.n_cap) ** self.c))

    @property
    def uniform_range(self) -> int:
        """Upper end of the uniform-variant interval, n_cap**c."""
        return max(1, math.ceil(self.n_cap ** self.c))


class KeyedRng:
    """Random source for rank draws.

    In ``fresh`` mode every draw consumes the next values of one stream seeded
    by ``master_seed``.  In ``keyed`` mode each key gets its own stream derived
    from ``(master_seed, key)``, so a key's rank is the same no matter when or
    how often it is inserted.
    """

    __slots__ = ("master_seed", "mode", "_stream")

    def __init__(self, master_seed: int = 0, mode: str = "keyed"):
        if mode not in ("fresh", "keyed"):
            raise ValueError(f"unknown rng mode {mode!r}")
        self.master_seed = master_seed & 0xFFFFFFFFFFFFFFFF
        self.mode = mode
        self._stream = random.Random(self.master_seed)

    def stream(self, key: int) -> random.Random:
        if self.mode == "fresh":
            return self._stream
        return random.Random((self.master_seed << 64) | (key & 0xFFFFFFFFFFFFFFFF))

    def __repr__(self):
        return f"KeyedRng(master_seed={self.master_seed}, mode={self.mode!r})"


def gen_geometric(rng, p: float = 0.5) -> int:
    """Number of failed Bernoulli(p) trials before the first success."""
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    k = 0
    while rng.random() >= p:
        k += 1
    return k


def gen_uniform_rank(rng, lo: int, hi: int) -> int:
    if lo > hi:
        raise ValueError(f"empty rank interval [{lo}, {hi}]")
    return rng.randint(lo, hi)


def _r2_greater(a: R2, b: R2) -> Optional[bool]:
    # True/False when ordered, None when equal.
    if a is None and b is None:
        return None
    if isinstance(a, str) or isinstance(b, str):
        if not (isinstance(a, str) and isinstance(b, str)):
            raise TypeError("cannot compare bit-string r2 with integer r2")
        m = min(len(a), len(b))
        if a[:m] != b[:m]:
            return a[:m] > b[:m]
        raise UnresolvedTie(f"r2 bit strings {a!r} and {b!r} are prefix-tied")
    if a is None or b is None:
        raise TypeError("cannot compare absent r2 with present r2")
    if a == b:
        return None
    return a > b


def dominates(a: tuple[RankPair, int], b: tuple[RankPair, int]) -> bool:
    """True iff ``a`` would be the ancestor of ``b``.

    Ranks compare lexicographically on ``(r1, r2)``; equal ranks go to the
    smaller key.  Bit-string r2 values compare as binary fractions and raise
    :class:`UnresolvedTie` when one is a prefix of the other.
    """
    (ra, ka), (rb, kb) = a, b
    if ra[0] != rb[0]:
        return ra[0] > rb[0]
    greater = _r2_greater(ra[1], rb[1])
    if greater is None:
        return ka < kb
    return greater


def make_rank(policy: RankPolicy, key: int, rng: KeyedRng) -> RankPair:
    s = rng.stream(key)
    v = policy.variant
    if v == "original":
        return RankPair(gen_geometric(s, 0.5))
    if v == "variable_p":
        return RankPair(gen_geometric(s, policy.p))
    if v == "uniform":
        return RankPair(gen_uniform_rank(s, 1, policy.uniform_range))
    if v == "zipzip":
        r1 = gen_geometric(s, policy.p)
        return RankPair(r1, gen_uniform_rank(s, 1, policy.r2_range))
    w = policy.weight_fn(key)
    if w is None or w < 1 or int(w) != w:
        raise ValueError(f"key {key} needs a positive integer weight, got {w!r}")
    r1 = int(w).bit_length() - 1 + gen_geometric(s, 0.5)
    return RankPair(r1, gen_uniform_rank(s, 1, policy.r2_range))
