"""Trial runners behind the CLI and the acceptance suite.

Every trial draws from its own generator seeded by
``(master_seed, tag, n, trial)``, so results do not depend on how trials are
scheduled.  Static-rank trees are history independent, so the depth
experiments build them with keys inserted in increasing order using the
compiled builder in :mod:`zipzip.fast`.
"""

from __future__ import annotations

import math
import random
import zlib
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .external import ExtTree
from .fast import SequentialRun, build_sequential
from .jit import JitZipTree, MetadataReport, metadata
from .persist import PersistentTree
from .ranks import KeyedRng, RankPolicy
from .ziptree import TreeStats, ZipTree, build_canonical

MASK64 = (1 << 64) - 1


def trial_seed(master_seed: int, tag: str, n: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        [master_seed & MASK64, zlib.crc32(tag.encode()), n, trial])


def trial_rng(master_seed: int, tag: str, n: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(trial_seed(master_seed, tag, n, trial)))


def trial_int_seed(master_seed: int, tag: str, n: int, trial: int) -> int:
    return int(trial_seed(master_seed, tag, n, trial).generate_state(2, np.uint64)[0])


def _floor_log2(weights: np.ndarray) -> np.ndarray:
    out = np.empty(weights.shape, dtype=np.int64)
    for w in np.unique(weights):
        if w < 1:
            raise ValueError("weights must be positive integers")
        out[weights == w] = int(w).bit_length() - 1
    return out


def draw_ranks(variant: str, n: int, gen: np.random.Generator, p: float = 0.5,
               c: float = 3, weights: Optional[np.ndarray] = None):
    """Vectorised rank draw for keys ``0..n-1``: ``(r1, r2, uniform_range)``."""
    policy = RankPolicy(variant, p=p, c=c, n_cap=max(n, 1),
                        weight_fn=(lambda k: 1) if variant == "biased" else None)
    if variant == "uniform":
        hi = policy.uniform_range
        if hi >= 2 ** 62:
            raise ValueError(f"uniform rank range n**c = {hi} overflows int64")
        return gen.integers(1, hi + 1, n, dtype=np.int64), None, hi
    if variant == "original":
        return gen.geometric(0.5, n).astype(np.int64) - 1, None, None
    if variant == "variable_p":
        return gen.geometric(p, n).astype(np.int64) - 1, None, None
    r1 = gen.geometric(p if variant == "zipzip" else 0.5, n).astype(np.int64) - 1
    if variant == "biased":
        if weights is None:
            raise ValueError("biased ranks need weights")
        r1 += _floor_log2(np.asarray(weights, dtype=np.int64))
    r2 = gen.integers(1, policy.r2_range + 1, n, dtype=np.int64)
    return r1, r2, None


def sequential_run(variant: str, n: int, gen: np.random.Generator, p=0.5, c=3,
                   weights=None) -> SequentialRun:
    r1, r2, hi = draw_ranks(variant, n, gen, p, c, weights)
    return build_sequential(r1, r2, hi)


def run_stats(run: SequentialRun, r1_root: Optional[int] = None) -> TreeStats:
    return TreeStats(run.depth, run.height, r1_root, run.group_sizes())


def depth_trials(variant: str, n: int, trials: int, seed: int, p=0.5, c=3,
                 tag: Optional[str] = None) -> Iterator[TreeStats]:
    tag = tag or variant
    for t in range(trials):
        gen = trial_rng(seed, tag, n, t)
        r1, r2, hi = draw_ranks(variant, n, gen, p, c)
        run = build_sequential(r1, r2, hi)
        yield run_stats(run, int(r1[run.root]) if n else None)


@dataclass
class GroupSummary:
    nodes: int
    groups: int
    max_size: int

    @property
    def mean_size(self) -> float:
        return self.nodes / self.groups if self.groups else 0.0


def rank_groups(n: int, trials: int, seed: int, variant="zipzip") -> GroupSummary:
    nodes = groups = biggest = 0
    for st in depth_trials(variant, n, trials, seed, tag=f"groups-{variant}"):
        sizes = st.rank_group_sizes
        nodes += int(sizes.sum())
        groups += len(sizes)
        biggest = max(biggest, int(sizes.max()))
    return GroupSummary(nodes, groups, biggest)


@dataclass
class TieCount:
    insertions: int = 0
    comparisons: int = 0
    ties: int = 0
    tie_mass: float = math.nan

    @property
    def ties_per_insertion(self) -> float:
        return self.ties / self.insertions if self.insertions else 0.0

    @property
    def ties_per_comparison(self) -> float:
        return self.ties / self.comparisons if self.comparisons else 0.0

    @property
    def expected_ties_per_comparison(self) -> float:
        return self.tie_mass / self.comparisons if self.comparisons else math.nan


def count_ties(variant: str, n: int, trials: int, seed: int, c=3,
               order="sequential") -> TieCount:
    """Rank comparisons and full rank ties over ``trials`` builds.

    For the uniform variant with in-order keys ``tie_mass`` also accumulates
    the exact conditional tie probability of every comparison made: a new
    rank that got past a spine node of rank ``s`` is uniform on ``[1, s]``, so
    it equals the next spine rank with probability ``1/s``.  Its sum has the
    same expectation as the raw tie count and stays measurable when ties are
    far too rare to observe.
    """
    out = TieCount(tie_mass=0.0 if order == "sequential" else math.nan)
    for t in range(trials):
        if order == "sequential":
            run = sequential_run(variant, n, trial_rng(seed, f"ties-{variant}", n, t), c=c)
            out.comparisons += run.comparisons
            out.ties += run.ties
            if variant == "uniform":
                out.tie_mass += run.tie_mass
        else:
            s = trial_int_seed(seed, f"ties-{variant}", n, t)
            tree = ZipTree(RankPolicy(variant, c=c, n_cap=n), KeyedRng(s, "fresh"))
            keys = list(range(n))
            random.Random(s).shuffle(keys)
            for k in keys:
                tree.insert(k)
            out.comparisons += tree.comparisons
            out.ties += tree.ties
        out.insertions += n
    if variant != "uniform":
        out.tie_mass = math.nan
    return out


def jit_trial(n: int, seed: int, trial: int, order="sequential") -> MetadataReport:
    s = trial_int_seed(seed, f"jit-{order}", n, trial)
    tree = JitZipTree(KeyedRng(s, "fresh"), random.Random(s ^ 0x5DEECE66D))
    keys = list(range(n))
    if order == "random":
        random.Random(s).shuffle(keys)
    for k in keys:
        tree.insert(k)
    return metadata(tree)


def biased_depths(n: int, heavy_weight: int, trials: int, seed: int,
                  heavy_index: Optional[int] = None) -> np.ndarray:
    """Depth of one heavy key (all other keys weigh 1) in each trial."""
    heavy_index = n // 2 if heavy_index is None else heavy_index
    weights = np.ones(n, dtype=np.int64)
    weights[heavy_index] = heavy_weight
    out = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        gen = trial_rng(seed, f"biased-{heavy_weight}", n, t)
        run = sequential_run("biased", n, gen, weights=weights)
        out[t] = run.depth[heavy_index]
    return out


# -- history independence and fuzzing ---------------------------------------

HI_VARIANTS = ("original", "uniform", "zipzip", "external", "persist")


def make_tree(variant: str, seed: int, n_cap: int = 1024):
    """Fresh keyed-rng tree of the named variant."""
    rng = KeyedRng(seed, "keyed")
    if variant == "external":
        return ExtTree(RankPolicy("zipzip", n_cap=n_cap), rng)
    if variant == "persist":
        return PersistentTree(RankPolicy("zipzip", n_cap=n_cap), rng)
    if variant == "jit":
        return JitZipTree(KeyedRng(seed, "fresh"), random.Random(seed))
    if variant == "biased":
        policy = RankPolicy("biased", n_cap=n_cap, weight_fn=lambda k: 1 + (k * 2654435761) % 97)
        return ZipTree(policy, rng)
    if variant == "variable_p":
        return ZipTree(RankPolicy("variable_p", p=0.25, n_cap=n_cap), rng)
    return ZipTree(RankPolicy(variant, n_cap=n_cap), rng)


def apply(tree, op: str, key: int):
    if isinstance(tree, PersistentTree):
        return tree.p_insert(key) if op == "+" else tree.p_delete(key)
    return tree.insert(key) if op == "+" else tree.delete(key)


def _ops_to(rnd: random.Random, start: set, target: set, universe: int) -> list:
    """Random interleaved insert/delete sequence taking ``start`` to ``target``."""
    ops = [("+", k) for k in target - start] + [("-", k) for k in start - target]
    extra = rnd.sample(range(universe), min(universe, rnd.randint(0, len(target) // 2 + 2)))
    for k in extra:
        # Touch a key and undo it later; both orders are valid updates.
        if k in target and k in start:
            ops += [("-", k), ("+", k)]
        elif k not in target and k not in start:
            ops += [("+", k), ("-", k)]
    rnd.shuffle(ops)
    # Restore a valid final state: replay so the last op on each key is right.
    last = {}
    for i, (op, k) in enumerate(ops):
        last[k] = i
    fixed = []
    for i, (op, k) in enumerate(ops):
        if last[k] == i:
            op = "+" if k in target else "-"
        fixed.append((op, k))
    return fixed


def _structure(tree) -> str:
    return tree.dumps()


@dataclass
class HiFailure:
    variant: str
    pair: int
    seed: int


def hi_pairs(variant: str, pairs: int, n_max: int, seed: int) -> list[HiFailure]:
    """Drive two copies of one state to the same key set by different routes."""
    failures = []
    for i in range(pairs):
        s = trial_int_seed(seed, f"hi-{variant}", n_max, i)
        rnd = random.Random(s)
        m = int(round(math.exp(rnd.uniform(0, math.log(n_max))))) if n_max > 1 else n_max
        universe = 2 * m + 2
        start = set(rnd.sample(range(universe), rnd.randint(0, m)))
        target = set(rnd.sample(range(universe), m))
        prefix = _ops_to(rnd, set(), start, universe)
        x = _ops_to(rnd, start, target, universe)
        y = _ops_to(rnd, start, target, universe)
        tree_seed = s ^ 0xABCDEF
        a, b = make_tree(variant, tree_seed, universe), make_tree(variant, tree_seed, universe)
        for op, k in prefix:
            apply(a, op, k)
            apply(b, op, k)
        for op, k in x:
            apply(a, op, k)
        for op, k in y:
            apply(b, op, k)
        if _structure(a) != _structure(b) or sorted(target) != list(_keys(a)):
            failures.append(HiFailure(variant, i, s))
    return failures


def _keys(tree):
    if isinstance(tree, PersistentTree):
        return tree.keys_at(tree.newest)
    return list(tree)


FUZZ_VARIANTS = ("original", "uniform", "zipzip", "variable_p", "biased",
                 "jit", "external", "persist")


def fuzz(variant: str, ops: int, seed: int, universe: int = 64,
         check_every: int = 1, fault: bool = False) -> list[str]:
    """Random mixed updates checked against a sorted-set oracle.

    After every ``check_every`` operations the tree is validated, compared to
    the oracle key set and (for geometric r1 ranks) checked for skip-list
    isomorphism.  Persistent trees additionally answer queries at random
    past versions against recorded snapshots.  ``fault`` corrupts the tree
    midway as a negative control.
    """
    rnd = random.Random(trial_int_seed(seed, f"fuzz-{variant}", ops, 0))
    tree = make_tree(variant, rnd.getrandbits(63), universe)
    live: set = set()
    snapshots = [frozenset()]
    problems: list[str] = []
    geometric = variant not in ("uniform", "external", "persist")
    for step in range(ops):
        k = rnd.randrange(universe)
        op = "+" if rnd.random() < 0.55 else "-"
        apply(tree, op, k)
        if op == "+":
            live.add(k)
        else:
            live.discard(k)
        if isinstance(tree, PersistentTree):
            snapshots.append(frozenset(live))
        if fault and step == ops // 2:
            _inject_fault(tree)
        if (step + 1) % check_every and step != ops - 1:
            continue
        where = f"{variant} step {step}"
        if isinstance(tree, PersistentTree):
            if tree.keys_at(tree.newest) != sorted(live):
                problems.append(f"{where}: key set differs from oracle")
            v = rnd.randrange(len(snapshots))
            q = rnd.randrange(universe)
            if tree.p_search(v, q) != (q in snapshots[v]):
                problems.append(f"{where}: version {v} answers wrongly for key {q}")
            engine = tree._engine
            problems += [f"{where}: {p}" for p in engine.validate()]
        else:
            if list(tree) != sorted(live):
                problems.append(f"{where}: key set differs from oracle")
            problems += [f"{where}: {p}" for p in tree.validate()]
            if geometric and not tree.check_skiplist_isomorphism():
                problems.append(f"{where}: skip-list isomorphism fails")
        if problems:
            break
    return problems


def _inject_fault(tree):
    root = tree._engine.root if isinstance(tree, PersistentTree) else tree.root
    if root is None:
        return
    if isinstance(tree, ExtTree) and not hasattr(root, "left"):
        return
    root.left, root.right = root.right, root.left


def oracle_equivalence(pairs: list, rnd: random.Random, extra: int = 3) -> bool:
    """Insert/delete churn ending at ``pairs`` matches :func:`build_canonical`."""
    ranks = dict(pairs)
    keys = list(ranks)
    tree = ZipTree(RankPolicy("original"))
    top = (max(keys) if keys else 0) + 1
    with_r2 = any(r[1] is not None for r in ranks.values())
    spare = {top + i: (rnd.randint(0, 3), rnd.randint(1, 2) if with_r2 else None)
             for i in range(extra)}
    ops = [("+", k) for k in keys] + [("+", k) for k in spare]
    rnd.shuffle(ops)
    # Delete and re-add a few real keys and drop every spare key.
    for k in rnd.sample(keys, min(len(keys), extra)):
        ops.insert(rnd.randrange(len(ops) + 1), ("-", k))
        ops.append(("+", k))
    ops += [("-", k) for k in spare]
    rnd.shuffle(ops)
    ops = _repair(ops, set(keys))
    rank_of = {**ranks, **{k: _as_pair(v) for k, v in spare.items()}}
    for op, k in ops:
        if op == "+":
            tree.insert(k, rank_of[k])
        else:
            tree.delete(k)
    return tree.dumps() == build_canonical(sorted(pairs)).dumps()


def _as_pair(v):
    from .ranks import RankPair
    return RankPair(*v)


def _repair(ops, target):
    last = {}
    for i, (_, k) in enumerate(ops):
        last[k] = i
    return [("+" if k in target else "-", k) if last[k] == i else (op, k)
            for i, (op, k) in enumerate(ops)]
