"""``zipzip <command>``: experiment harness writing CSV and SVG output."""

from __future__ import annotations

import argparse
import csv
import io
import math
import random
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import experiments as E
from .ranks import RankPair
from .stats import fit_linear, fit_loglog, summarize
from .svg import line_chart

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

COMMANDS = ("depth-discrepancy", "depth-height", "rank-ties", "jit-bits",
            "vary-p", "biased", "hi-check", "validate")
DEPTH_VARIANTS = ("original", "uniform", "zipzip")
DEFAULT_P_SWEEP = (1e-5, 1e-4, 2e-4, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class ExperimentConfig:
    command: str
    variants: list
    n_list: list
    trials: int = 100
    master_seed: int = 0
    c: float = 3
    p: list = field(default_factory=lambda: [0.5])
    order: Optional[str] = None
    out: Optional[str] = None
    format: str = "csv"
    budget: int = 1 << 22
    ops: int = 10000
    inject_fault: bool = False

    def __post_init__(self):
        if not self.n_list:
            raise UsageError("n list is empty")
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if any(not 0 < p < 1 for p in self.p):
            raise UsageError("p must lie strictly between 0 and 1")


def parse_n(text: str) -> list[int]:
    """``"256..65536"`` (powers of two inclusive) or a comma list."""
    try:
        if ".." in text:
            lo, hi = (int(v) for v in text.split(".."))
            if lo < 1 or hi < lo or lo & (lo - 1) or hi & (hi - 1):
                raise UsageError(f"range {text!r} needs powers of two lo <= hi")
            return [1 << e for e in range(lo.bit_length() - 1, hi.bit_length())]
        ns = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse n list {text!r}") from None
    if not ns or any(n < 1 for n in ns):
        raise UsageError(f"n values must be positive: {text!r}")
    return ns


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="zipzip", description=__doc__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--variant", help="comma-separated variants")
    ap.add_argument("--n", help='"256..65536" or a comma list')
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--c", type=float, default=3)
    ap.add_argument("--p", help="success probability (comma list for vary-p)")
    ap.add_argument("--order", choices=("sequential", "random"))
    ap.add_argument("--out", help="output path (CSV; SVG gets a .svg suffix)")
    ap.add_argument("--format", choices=("csv", "svg", "both"), default="csv")
    ap.add_argument("--budget", type=int, default=1 << 22,
                    help="rank-ties: minimum insertions per n")
    ap.add_argument("--ops", type=int, default=10000, help="validate: ops per variant")
    ap.add_argument("--inject-fault", action="store_true",
                    help="validate: corrupt each tree midway (negative control)")
    return ap


_DEFAULTS = {
    # command: (variants, n list, trials)
    "depth-discrepancy": (DEPTH_VARIANTS, "256..65536", 100),
    "depth-height": (DEPTH_VARIANTS, "256..65536", 100),
    "rank-ties": (("uniform", "zipzip"), "256..65536", 100),
    "jit-bits": (("jit",), "256..65536", 10),
    "vary-p": (("variable_p",), "65536", 100),
    "biased": (("biased",), "16384", 100),
    "hi-check": (E.HI_VARIANTS + ("jit",), "1000", 1000),
    "validate": (E.FUZZ_VARIANTS, "64", 1),
}

_ALLOWED = {
    "depth-discrepancy": set(DEPTH_VARIANTS),
    "depth-height": set(DEPTH_VARIANTS),
    "rank-ties": {"uniform", "zipzip", "original", "variable_p"},
    "jit-bits": {"jit"},
    "vary-p": {"variable_p"},
    "biased": {"biased"},
    "hi-check": set(E.HI_VARIANTS) | {"jit"},
    "validate": set(E.FUZZ_VARIANTS),
}


def make_config(argv) -> ExperimentConfig:
    a = build_parser().parse_args(argv)
    variants, n_text, trials = _DEFAULTS[a.command]
    if a.variant:
        variants = [v.strip() for v in a.variant.split(",") if v.strip()]
        bad = [v for v in variants if v not in _ALLOWED[a.command]]
        if bad or not variants:
            raise UsageError(f"{a.command} does not accept variant(s) {bad or variants}; "
                             f"choose from {sorted(_ALLOWED[a.command])}")
    if a.format != "csv" and not a.out:
        raise UsageError("--format svg/both needs --out")
    if a.command == "vary-p":
        p = _floats(a.p) if a.p else list(DEFAULT_P_SWEEP)
    else:
        p = [float(a.p)] if a.p else [0.5]
    return ExperimentConfig(a.command, list(variants), parse_n(a.n or n_text),
                            a.trials if a.trials is not None else trials, a.seed,
                            a.c, p, a.order, a.out, a.format, a.budget, a.ops,
                            a.inject_fault)


# -- commands ----------------------------------------------------------------
# Each returns (header, rows, chart spec, exit code, messages).

def _g(v) -> str:
    if isinstance(v, float):
        return "nan" if v != v else f"{v:.6g}"
    return str(v)


def _summary(variant, n, cfg, **kw):
    return summarize(E.depth_trials(variant, n, cfg.trials, cfg.master_seed, **kw), n)


def cmd_depth_discrepancy(cfg):
    header = ("variant", "n", "trials", "seed", "smallest_depth", "largest_depth",
              "smallest_scaled", "largest_scaled")
    rows = []
    for v in cfg.variants:
        for n in cfg.n_list:
            s = _summary(v, n, cfg)
            rows.append((v, n, s.trials, cfg.master_seed, s.mean_depth_smallest,
                         s.mean_depth_largest, s.smallest_scaled, s.largest_scaled))
    chart = {"y": ("smallest_scaled", "largest_scaled"), "ylabel": "depth / log2 n"}
    return header, rows, chart, EXIT_OK, []


def _edges_scaled(value, n):
    return (value - 1) / math.log2(n) if n > 1 else math.nan


def cmd_depth_height(cfg):
    header = ("variant", "n", "trials", "seed", "mean_depth", "mean_height",
              "depth_scaled", "height_scaled", "depth_edges_scaled", "height_edges_scaled")
    rows = []
    for v in cfg.variants:
        for n in cfg.n_list:
            s = _summary(v, n, cfg)
            rows.append((v, n, s.trials, cfg.master_seed, s.mean_depth_all, s.mean_height,
                         s.depth_scaled, s.height_scaled,
                         _edges_scaled(s.mean_depth_all, n), _edges_scaled(s.mean_height, n)))
    chart = {"y": ("depth_edges_scaled", "height_edges_scaled"), "ylabel": "per log2 n"}
    return header, rows, chart, EXIT_OK, []


def cmd_rank_ties(cfg):
    order = cfg.order or "sequential"
    header = ("variant", "n", "trials", "seed", "order", "insertions", "comparisons",
              "ties", "ties_per_insertion", "ties_per_comparison",
              "expected_ties_per_comparison")
    rows, msgs = [], []
    for v in cfg.variants:
        points = []
        for n in cfg.n_list:
            trials = max(cfg.trials, -(-cfg.budget // n)) if order == "sequential" else cfg.trials
            t = E.count_ties(v, n, trials, cfg.master_seed, c=cfg.c, order=order)
            rows.append((v, n, trials, cfg.master_seed, order, t.insertions, t.comparisons,
                         t.ties, t.ties_per_insertion, t.ties_per_comparison,
                         t.expected_ties_per_comparison))
            if v == "uniform":
                y = t.expected_ties_per_comparison
                if y != y:
                    y = t.ties_per_comparison
            else:
                y = t.ties_per_insertion
            points.append((n, y))
        axis = "log" if v == "uniform" else "loglog"
        usable = [(x, y) for x, y in points if y > 0 and (axis == "log" or x > 2)]
        if len(usable) >= 3:
            fit = fit_loglog(usable, axis)
            msgs.append(f"fit {v}: slope {fit.slope:.4g} vs log2 {'n' if axis == 'log' else 'log2 n'}"
                        f", r^2 {fit.r_squared:.4g}")
        else:
            msgs.append(f"fit {v}: too few points with observed ties")
    chart = {"y": ("ties_per_insertion",), "ylabel": "ties per insertion"}
    return header, rows, chart, EXIT_OK, msgs


def cmd_jit_bits(cfg):
    orders = [cfg.order] if cfg.order else ["sequential", "random"]
    header = ("variant", "n", "trials", "seed", "order", "r1_diff_bits_per_node",
              "r2_bits_per_node", "root_bits", "bits_per_node", "max_total_bits")
    rows = []
    for order in orders:
        for n in cfg.n_list:
            acc = np.zeros(4)
            worst = 0
            for t in range(cfg.trials):
                m = E.jit_trial(n, cfg.master_seed, t, order)
                acc += (m.r1_diff_bits / n, m.r2_bits / n, m.root_bits, m.bits_per_node)
                worst = max(worst, m.r1_diff_bits + m.r2_bits + m.root_bits)
            acc /= cfg.trials
            rows.append(("jit", n, cfg.trials, cfg.master_seed, order,
                         *map(float, acc), worst))
    chart = {"y": ("r1_diff_bits_per_node", "r2_bits_per_node", "bits_per_node"),
             "ylabel": "bits per node", "split": "order"}
    return header, rows, chart, EXIT_OK, []


def cmd_vary_p(cfg):
    header = ("variant", "n", "trials", "seed", "p", "depth_scaled", "height_scaled",
              "depth_edges_scaled", "height_edges_scaled", "root_r1_scaled")
    rows = []
    for n in cfg.n_list:
        for p in cfg.p:
            s = _summary("variable_p", n, cfg, p=p, tag=f"vary-p-{p!r}")
            rows.append(("variable_p", n, s.trials, cfg.master_seed, p, s.depth_scaled,
                         s.height_scaled, _edges_scaled(s.mean_depth_all, n),
                         _edges_scaled(s.mean_height, n), s.root_r1_scaled))
    chart = {"x": "p", "y": ("depth_edges_scaled", "height_edges_scaled", "root_r1_scaled"),
             "ylabel": "scaled value"}
    return header, rows, chart, EXIT_OK, []


def biased_profiles(n: int) -> list[tuple[str, int]]:
    """(profile name, heavy weight); every other key weighs 1."""
    return [("equal", 1), ("sqrt_n", max(1, round(math.sqrt(n)))), ("n", n),
            ("n_squared", n * n), ("half", max(1, n - 1))]


def cmd_biased(cfg):
    header = ("variant", "n", "trials", "seed", "profile", "heavy_weight", "total_weight",
              "log2_W_over_w", "heavy_depth", "heavy_depth_sd")
    rows, msgs = [], []
    for n in cfg.n_list:
        xs, ys = [], []
        for name, w in biased_profiles(n):
            d = E.biased_depths(n, w, cfg.trials, cfg.master_seed)
            total = w + n - 1
            x = math.log2(total / w)
            rows.append(("biased", n, cfg.trials, cfg.master_seed, name, w, total, x,
                         float(d.mean()), float(d.std(ddof=1)) if len(d) > 1 else 0.0))
            if name in ("sqrt_n", "n", "n_squared"):
                xs.append(x)
                ys.append(float(d.mean()))
        fit = fit_linear(xs, ys)
        msgs.append(f"fit n={n}: heavy depth = {fit.slope:.4g} * log2(W/w) + "
                    f"{fit.intercept:.4g}, r^2 {fit.r_squared:.4g}")
    chart = {"x": "log2_W_over_w", "y": ("heavy_depth",), "ylabel": "heavy-key depth",
             "log_x": False}
    return header, rows, chart, EXIT_OK, msgs


def cmd_hi_check(cfg):
    header = ("variant", "n", "trials", "seed", "failures", "status")
    rows, msgs, code = [], [], EXIT_OK
    for v in cfg.variants:
        for n in cfg.n_list:
            if v == "jit":
                rows.append((v, n, cfg.trials, cfg.master_seed, 0, "exempt"))
                msgs.append("jit: exempt, lazily drawn bits depend on the update history")
                continue
            fails = E.hi_pairs(v, cfg.trials, n, cfg.master_seed)
            rows.append((v, n, cfg.trials, cfg.master_seed, len(fails),
                         "pass" if not fails else "FAIL"))
            for f in fails[:5]:
                msgs.append(f"{v}: pair {f.pair} differs, reproduce with pair seed {f.seed}")
            if fails:
                code = EXIT_FAIL
    return header, rows, None, code, msgs


def cmd_validate(cfg):
    header = ("variant", "n", "trials", "seed", "ops", "violations", "status")
    rows, msgs, code = [], [], EXIT_OK
    for v in cfg.variants:
        for n in cfg.n_list:
            problems = E.fuzz(v, cfg.ops, cfg.master_seed, universe=n, fault=cfg.inject_fault)
            rows.append((v, n, cfg.trials, cfg.master_seed, cfg.ops, len(problems),
                         "pass" if not problems else "FAIL"))
            msgs += problems[:3]
            if problems:
                code = EXIT_FAIL
    rnd = random.Random(cfg.master_seed)
    mismatches = 0
    for _ in range(100 * cfg.trials):
        size = rnd.randint(0, 12)
        with_r2 = rnd.random() < 0.5
        pairs = [(k, RankPair(rnd.randint(0, 2), rnd.randint(1, 2) if with_r2 else None))
                 for k in range(size)]
        mismatches += not E.oracle_equivalence(pairs, rnd)
    rows.append(("oracle", 12, 100 * cfg.trials, cfg.master_seed, 0, mismatches,
                 "pass" if not mismatches else "FAIL"))
    if mismatches:
        code = EXIT_FAIL
        msgs.append(f"oracle: {mismatches} mismatches against canonical construction")
    return header, rows, None, code, msgs


RUNNERS = {
    "depth-discrepancy": cmd_depth_discrepancy,
    "depth-height": cmd_depth_height,
    "rank-ties": cmd_rank_ties,
    "jit-bits": cmd_jit_bits,
    "vary-p": cmd_vary_p,
    "biased": cmd_biased,
    "hi-check": cmd_hi_check,
    "validate": cmd_validate,
}


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g(v) for v in row])
    return buf.getvalue()


def render_svg(cfg, header, rows, chart) -> str:
    xcol = chart.get("x", "n")
    xi = header.index(xcol)
    split = chart.get("split")
    series = {}
    for row in rows:
        label = row[0] if split is None else f"{row[0]} {row[header.index(split)]}"
        for col in chart["y"]:
            series.setdefault(f"{label} {col}", []).append(
                (float(row[xi]), float(row[header.index(col)])))
    return line_chart(series, title=cfg.command, xlabel=xcol, ylabel=chart["ylabel"],
                      log_x=chart.get("log_x", True))


def run(cfg: ExperimentConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    header, rows, chart, code, msgs = RUNNERS[cfg.command](cfg)
    text = render_csv(header, rows)
    if cfg.out is None:
        stdout.write(text)
    else:
        if cfg.format in ("csv", "both"):
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        if cfg.format in ("svg", "both"):
            path = cfg.out if cfg.format == "svg" else _svg_path(cfg.out)
            if chart is None:
                stderr.write(f"{cfg.command} has no chart; SVG skipped\n")
            else:
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(render_svg(cfg, header, rows, chart))
    for m in msgs:
        stderr.write(m + "\n")
    return code


def _svg_path(path: str) -> str:
    return (path[:-4] if path.endswith(".csv") else path) + ".svg"


def main(argv=None) -> int:
    try:
        cfg = make_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        sys.stderr.write(f"zipzip: usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
