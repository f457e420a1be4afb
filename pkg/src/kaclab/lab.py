"""Experiment drivers: theorem events, small-ball sweeps and root atlases.

All reports are pure functions of the configuration.  Trials are split into
contiguous index blocks across worker processes; every trial draws from its
own (seed, trial) stream and results are reassembled in trial order, so the
worker count never changes an emitted byte.  Wall-clock timings go to a
separate ``*_timing.json`` file for the same reason.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .coefficients import CoefficientLaw, sample_coefficients
from .errors import FitUndefinedError, GuardExceededError
from .evaluator import RegionEvaluator, tail_functional
from .region import build_region_spec, render_svg
from .roots import angular_ks, find_roots, radial_stats, region_root_count
from .smallball import (Constants, Z95, ci_halfwidth, fit_log_log, fit_scaling,
                        rv_admissible, small_ball_table, with_bounds)

ROOT_ATLAS_GUARD = 10**7
ROOT_COLUMNS = ["trial", "re", "im", "modulus", "argument", "residual"]


def fmt(x):
    """17 significant digits; integers and strings pass through."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(header, rows))


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def resolve_out(out):
    """KACLAB_OUT wins over the configured directory."""
    env = os.environ.get("KACLAB_OUT")
    if env:
        return Path(env)
    return None if out is None else Path(out)


def ensure_writable(out):
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".kaclab_write_probe"
    try:
        probe.write_text("")
    finally:
        if probe.exists():
            probe.unlink()


def derived_seed(master_seed, *tags):
    """A 64-bit seed for one (master seed, tags) combination."""
    ss = np.random.SeedSequence([int(master_seed) & ((1 << 64) - 1), *[int(t) for t in tags]])
    return int(ss.generate_state(1, np.uint64)[0])


def proportion_ci(count, trials):
    return ci_halfwidth(count, trials)


def pooled_ci(c1, n1, c2, n2):
    """95% half width of p1 - p2 under the pooled proportion."""
    p = (c1 + c2) / (n1 + n2)
    return Z95 * math.sqrt(p * (1.0 - p) * (1.0 / n1 + 1.0 / n2))


def _run_blocks(fn, args, trials, workers):
    """Evaluate fn(*args, start, stop) over trial blocks and concatenate in order."""
    if workers <= 1 or trials < 2 * workers:
        return fn(*args, 0, trials)
    edges = np.linspace(0, trials, workers + 1).astype(int)
    jobs = [(*args, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(fn, *zip(*jobs)))
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


# ---------------------------------------------------------------- theorem


@dataclass(frozen=True)
class ExperimentConfig:
    law: str = "rademacher"
    n_list: Sequence[int] = (128, 256, 512)
    p: float = 1.0
    beta: float = 1.0
    regime: str = "half"
    trials: int = 100
    master_seed: int = 0
    workers: int = 1
    out: Optional[str] = None
    roots: bool = False

    def __post_init__(self):
        ns = list(self.n_list)
        if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_list must be non-empty and strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        CoefficientLaw.parse(self.law)
        object.__setattr__(self, "n_list", tuple(int(n) for n in ns))

    def echo(self):
        """The configuration minus settings that must not affect results."""
        d = asdict(self)
        d.pop("workers")
        d.pop("out")
        d["n_list"] = list(self.n_list)
        return d


@dataclass(frozen=True)
class TheoremRow:
    n: int
    trials: int
    delta: float
    N: int
    m: int
    threshold: float
    g: float
    count_min_event: int
    count_joint_event: int
    count_Fn_fail: int
    mean_min_modulus: float
    root_in_region_rate: float = math.nan
    roots_in_region_total: int = -1

    @property
    def p_min_event(self):
        return self.count_min_event / self.trials

    @property
    def p_joint_event(self):
        return self.count_joint_event / self.trials

    @property
    def p_Fn_fail(self):
        return self.count_Fn_fail / self.trials

    def ci(self, count):
        return proportion_ci(count, self.trials)


THEOREM_COLUMNS = [
    "n", "trials", "delta", "N", "m", "threshold", "g",
    "count_min_event", "p_min_event", "ci_min_event",
    "count_joint_event", "p_joint_event", "ci_joint_event",
    "count_Fn_fail", "p_Fn_fail", "ci_Fn_fail",
    "mean_min_modulus", "root_in_region_rate", "ci_root_in_region", "roots_in_region_total",
]


@dataclass
class ExperimentReport:
    config: dict
    rows: list
    slopes: dict
    wall_time: dict = field(default_factory=dict)

    def row(self, n):
        return next(r for r in self.rows if r.n == n)

    def csv_rows(self):
        for r in self.rows:
            root_rate = r.root_in_region_rate
            root_ci = math.nan
            if r.roots_in_region_total >= 0:
                root_ci = proportion_ci(round(root_rate * r.trials), r.trials)
            yield [r.n, r.trials, r.delta, r.N, r.m, r.threshold, r.g,
                   r.count_min_event, r.p_min_event, r.ci(r.count_min_event),
                   r.count_joint_event, r.p_joint_event, r.ci(r.count_joint_event),
                   r.count_Fn_fail, r.p_Fn_fail, r.ci(r.count_Fn_fail),
                   r.mean_min_modulus, root_rate, root_ci, r.roots_in_region_total]

    def to_csv(self):
        return csv_text(THEOREM_COLUMNS, self.csv_rows())

    def to_json(self):
        doc = {
            "kind": "theorem",
            "config": self.config,
            "slopes": {k: (None if v is None else dict(v._asdict())) for k, v in self.slopes.items()},
            "versions": versions(),
        }
        return json.dumps(doc, indent=2, sort_keys=True, default=fmt) + "\n"

    def write(self, out):
        out = Path(out)
        ensure_writable(out)
        (out / "theorem.csv").write_text(self.to_csv())
        (out / "theorem.json").write_text(self.to_json())
        (out / "theorem_timing.json").write_text(json.dumps(self.wall_time, indent=2, sort_keys=True) + "\n")


def versions():
    import scipy
    return {"kaclab": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def _theorem_block(law_token, n, p, beta, regime, seed, with_roots, start, stop):
    law = CoefficientLaw.parse(law_token)
    spec = build_region_spec(n, p, beta, regime)
    ev = RegionEvaluator(spec)
    size = stop - start
    out = {
        "min": np.empty(size), "max": np.empty(size), "tail": np.empty(size),
        "roots_in": np.full(size, -1, dtype=np.int64),
    }
    for i, trial in enumerate(range(start, stop)):
        s = sample_coefficients(law, n, seed, trial)
        lo, hi, _, _ = ev.min_max(s.coefficients)
        out["min"][i] = lo
        out["max"][i] = hi
        out["tail"][i] = tail_functional(s, spec.delta)
        if with_roots:
            out["roots_in"][i] = region_root_count(find_roots(s), spec)
    return out


def _slope(rows, attr, min_hits=5):
    pts = [(r.n, getattr(r, "count_" + attr) / r.trials) for r in rows
           if getattr(r, "count_" + attr) >= min_hits]
    if len(pts) < 2:
        return None
    try:
        return fit_log_log(*zip(*pts))
    except FitUndefinedError:
        return None


def run_theorem_experiment(cfg: ExperimentConfig, write=True) -> ExperimentReport:
    """Count the min event, the joint event and F_n failures for each n.

    The min event is "min over ball centers <= threshold + g*delta" with
    threshold = n**(-e) log(n)**(-beta); the joint event adds
    "max over centers <= g"; an F_n failure is tail_functional(xi, delta) > g.
    """
    out = resolve_out(cfg.out)
    if write and out is not None:
        ensure_writable(out)
    rows, timing = [], {}
    for n in cfg.n_list:
        t0 = time.perf_counter()
        spec = build_region_spec(n, cfg.p, cfg.beta, cfg.regime)
        seed = derived_seed(cfg.master_seed, n)
        res = _run_blocks(_theorem_block,
                          (cfg.law, n, cfg.p, cfg.beta, cfg.regime, seed, cfg.roots),
                          cfg.trials, cfg.workers)
        level = spec.threshold + spec.g * spec.delta
        min_event = res["min"] <= level
        joint = min_event & (res["max"] <= spec.g)
        fn_fail = res["tail"] > spec.g
        if cfg.roots:
            rate = float(np.mean(res["roots_in"] > 0))
            total = int(res["roots_in"].sum())
        else:
            rate, total = math.nan, -1
        rows.append(TheoremRow(
            n=n, trials=cfg.trials, delta=spec.delta, N=spec.N, m=spec.m,
            threshold=spec.threshold, g=spec.g,
            count_min_event=int(min_event.sum()), count_joint_event=int(joint.sum()),
            count_Fn_fail=int(fn_fail.sum()),
            mean_min_modulus=math.fsum(res["min"]) / cfg.trials,
            root_in_region_rate=rate, roots_in_region_total=total,
        ))
        timing[str(n)] = time.perf_counter() - t0
    slopes = {fam: _slope(rows, fam) for fam in ("min_event", "joint_event", "Fn_fail")}
    timing["workers"] = cfg.workers
    report = ExperimentReport(cfg.echo(), rows, slopes, timing)
    if write and out is not None:
        report.write(out)
    return report


# ---------------------------------------------------------------- small ball


def resolve_k(rule, n, seed=0):
    """k from a rule: an integer literal, "n/4", "random" or "maxgcd".

    "random" is a deterministic admissible k; "maxgcd" is the smallest k in
    the largest admissible gcd class.
    """
    rule = str(rule)
    if rule.lstrip("-").isdigit():
        return int(rule) % n
    if rule == "n/4":
        return max(1, n // 4)
    admissible = [k for k in range(1, n) if rv_admissible(n, k)]
    if rule == "random":
        rng = np.random.default_rng([int(seed), int(n), 7])
        return int(rng.choice(admissible))
    if rule == "maxgcd":
        return max(admissible, key=lambda k: (math.gcd(n, k), -k))
    raise ValueError(f"unknown k rule {rule!r}")


def resolve_t(rule, n):
    rule = str(rule)
    if rule in ("sqrt(n)/8", "sqrtn/8"):
        return math.sqrt(n) / 8.0
    return float(rule)


SMALLBALL_COLUMNS = ["n", "k", "gcd", "t", "trials", "hits", "p_hat", "ci", "bound_value",
                     "k_rule", "t_rule", "slope"]


def run_smallball_sweep(law, n_list, k_rules=("1",), t_rules=("1",), trials=10**4, seed=0,
                        workers=1, constants: Optional[Constants] = None, out=None):
    """Small-ball estimates over the grid n_list x k_rules x t_rules.

    The ``slope`` column is the log-log fit of p_hat against n within each
    (k rule, t rule) group (NaN when fewer than two usable n).
    """
    if isinstance(law, str):
        law = CoefficientLaw.parse(law)
    out = resolve_out(out)
    if out is not None:
        ensure_writable(out)
    cells = []
    for n in n_list:
        ks = [resolve_k(r, n, seed) for r in k_rules]
        ts = [resolve_t(r, n) for r in t_rules]
        uniq = sorted(set(ks))
        est = small_ball_table(law, n, uniq, sorted(set(ts)), trials, derived_seed(seed, n), workers)
        if constants is not None:
            est = with_bounds(est, constants)
        lookup = {(e.k, e.t): e for e in est}
        for kr, k in zip(k_rules, ks):
            for tr, t in zip(t_rules, ts):
                cells.append((str(kr), str(tr), lookup[(k, t)]))
    slopes = {}
    for kr in k_rules:
        for tr in t_rules:
            group = [e for a, b, e in cells if a == str(kr) and b == str(tr)]
            try:
                slopes[(str(kr), str(tr))] = fit_scaling(group, min_distinct_n=2).slope
            except (FitUndefinedError, ValueError):
                slopes[(str(kr), str(tr))] = math.nan
    rows = [[e.n, e.k, e.gcd_nk, e.t, e.trials, e.hits, e.p_hat, e.ci_halfwidth,
             e.bound_value, kr, tr, slopes[(kr, tr)]] for kr, tr, e in cells]
    if out is not None:
        write_csv(out / "smallball.csv", SMALLBALL_COLUMNS, rows)
        meta = {"kind": "smallball", "law": law.token, "n_list": list(n_list),
                "k_rules": list(map(str, k_rules)), "t_rules": list(map(str, t_rules)),
                "trials": trials, "seed": seed, "versions": versions(),
                "constants": None if constants is None else constants._asdict()}
        (out / "smallball.json").write_text(json.dumps(meta, indent=2, sort_keys=True, default=fmt) + "\n")
    return rows


# ---------------------------------------------------------------- roots


def _atlas_block(law_token, n, seed, start, stop):
    law = CoefficientLaw.parse(law_token)
    roots, resid, conv = [], [], []
    for trial in range(start, stop):
        rs = find_roots(sample_coefficients(law, n, seed, trial))
        roots.append(rs.roots)
        resid.append(rs.residuals)
        conv.append(rs.converged)
    return {"roots": np.stack(roots), "residuals": np.stack(resid), "converged": np.array(conv)}


@dataclass
class AtlasReport:
    n: int
    trials: int
    ks: np.ndarray
    max_dist: np.ndarray
    median_dist: np.ndarray
    converged: np.ndarray
    roots: np.ndarray

    @property
    def mean_ks(self):
        return float(np.mean(self.ks))


def run_root_atlas(law="rademacher", n=1024, trials=20, seed=0, workers=1, out=None,
                   p=1.0, beta=1.0, regime="half", coefficients=None, bins=50):
    """Roots of ``trials`` sampled polynomials with radial and angular summaries.

    Writes roots.csv (trial, re, im, modulus, argument, residual),
    radial_hist.csv, ks.csv and overlay.svg when an output directory is given.
    ``coefficients`` replaces sampling by one fixed polynomial.
    """
    if trials * n > ROOT_ATLAS_GUARD:
        raise GuardExceededError(f"trials*n = {trials * n} exceeds the {ROOT_ATLAS_GUARD} guard")
    out = resolve_out(out)
    if out is not None:
        ensure_writable(out)
    if coefficients is not None:
        c = np.asarray(coefficients, dtype=float)
        n, trials = c.size, 1
        rs = find_roots(c)
        res = {"roots": rs.roots[None, :], "residuals": rs.residuals[None, :],
               "converged": np.array([rs.converged])}
    else:
        token = law if isinstance(law, str) else law.token
        res = _run_blocks(_atlas_block, (token, n, derived_seed(seed, n)), trials, workers)
    roots = res["roots"]
    ks = np.array([angular_ks(r) for r in roots])
    radial = [radial_stats(r) for r in roots]
    report = AtlasReport(n, trials, ks, np.array([s.max_dist for s in radial]),
                         np.array([s.median_dist for s in radial]), res["converged"], roots)
    if out is not None:
        rows = []
        for t, (rr, res_t) in enumerate(zip(roots, res["residuals"])):
            for z, r in zip(rr, res_t):
                rows.append([t, z.real, z.imag, abs(z), np.angle(z), r])
        write_csv(out / "roots.csv", ROOT_COLUMNS, rows)
        dist = np.abs(np.abs(roots.ravel()) - 1.0)
        edges = np.quantile(dist, np.linspace(0, 1, bins + 1)) if dist.size else np.zeros(bins + 1)
        counts, edges = np.histogram(dist, bins=np.unique(edges)) if dist.size else (np.zeros(0), edges)
        write_csv(out / "radial_hist.csv", ["lo", "hi", "count"],
                  [[a, b, int(c)] for a, b, c in zip(edges[:-1], edges[1:], counts)])
        write_csv(out / "ks.csv", ["trial", "ks", "max_dist", "median_dist", "converged"],
                  [[t, k, a, b, bool(c)] for t, (k, a, b, c) in
                   enumerate(zip(ks, report.max_dist, report.median_dist, report.converged))])
        if n >= 4:
            spec = build_region_spec(n, p, beta, regime)
            (out / "overlay.svg").write_text(render_svg(spec, points=roots.ravel()))
    return report
