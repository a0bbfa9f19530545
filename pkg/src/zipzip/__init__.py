"""Zip trees and their zip-zip cultivars."""

from .external import ExtTree
from .jit import JitZipTree, MetadataReport, metadata, resolve_tie
from .persist import PersistentTree, SpaceStats
from .ranks import (KeyedRng, RankPair, RankPolicy, UnresolvedTie, dominates,
                    gen_geometric, gen_uniform_rank, make_rank)
from .stats import (DepthSummary, FitResult, expected_depth, fit_linear,
                    fit_loglog, harmonic, summarize)
from .ziptree import (Node, TreeStats, ZipTree, build_canonical,
                      check_skiplist_isomorphism, stats, validate)

__all__ = [
    "DepthSummary", "ExtTree", "FitResult", "JitZipTree", "KeyedRng",
    "MetadataReport", "Node", "PersistentTree", "RankPair", "RankPolicy",
    "SpaceStats", "TreeStats", "UnresolvedTie", "ZipTree", "build_canonical",
    "check_skiplist_isomorphism", "dominates", "expected_depth", "fit_linear",
    "fit_loglog", "gen_geometric", "gen_uniform_rank", "harmonic",
    "make_rank", "metadata", "resolve_tie", "stats", "summarize", "validate",
]
