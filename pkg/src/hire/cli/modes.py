"""One runner per experiment mode, each producing a CSV table."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from hire.approx.lowrank import fit_low_rank_svd, random_low_rank
from hire.approx.scorers import ApproxScorer, ExactCopyScorer, LowRankScorer
from hire.bench.gather import sweep_gather
from hire.cli.config import ExperimentConfig, Mode
from hire.cli.instances import load_instance, make_ffn, make_scorer, sample_batch
from hire.common.logging import get_logger
from hire.common.models import CandidateSet, TopKSet, format_real
from hire.common.rng import gaussian, make_rng
from hire.common.settings import get_settings
from hire.core.config import HireConfig
from hire.core.hire import approx_only_topk, hire_topk
from hire.core.softmax import softmax_topk
from hire.distributed.da_topk import da_group_sparse, da_topk
from hire.distributed.sharding import shard
from hire.ffn.group_sparse import (
    check_group_counts,
    ffn_group_sparse,
    per_sample_groups,
    select_groups,
)
from hire.ffn.layers import ffn_dense, ffn_topk
from hire.linalg.topk import exact_topk
from hire.metrics.cost import param_bytes
from hire.metrics.overlap import overlap_histogram, overlap_ratio
from hire.metrics.recall import RecallReport, recall

log = get_logger(__name__)


@dataclass
class Table:
    header: list[str]
    rows: list[list[str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    sidecar: Table | None = None


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def _per_trial[R](cfg: ExperimentConfig, fn: Callable[[int], R]) -> list[R]:
    """Evaluate ``fn`` for every trial, results in trial order."""
    with ThreadPoolExecutor(max_workers=get_settings().max_workers) as pool:
        return list(pool.map(fn, range(cfg.trials)))


def _topk_table(top: TopKSet) -> Table:
    rows = [row.split(",") for row in top.serialize().splitlines()]
    return Table(["rank", "index", "value"], rows)


def _rel_err(approx: npt.NDArray[np.float32], ref: npt.NDArray[np.float32]) -> float:
    denom = float(np.linalg.norm(ref.astype(np.float64)))
    diff = float(np.linalg.norm(approx.astype(np.float64) - ref.astype(np.float64)))
    return diff / denom if denom > 0 else diff


# --- Top-k modes ---


def run_hire_topk(cfg: ExperimentConfig) -> Table:
    z, x = load_instance(cfg, 0)
    a = make_scorer(cfg.scorer, z, cfg.r, cfg.seed, 0)
    hcfg = HireConfig(k=cfg.k, k_prime=cfg.k_prime[0], phi=cfg.activation)
    top, candidates = hire_topk(x, z, a, hcfg)
    exact = exact_topk(z, x, cfg.k, cfg.activation)
    rep = recall(candidates, exact, top)
    if top.clamped:
        log.warning("hire_topk_clamped", k=cfg.k, k_prime=cfg.k_prime[0], l=z.l)
    table = _topk_table(top)
    table.notes.append(
        f"recall={_fmt(rep.recall)} candidates={len(candidates)} clamped={top.clamped}"
    )
    return table


def run_distributed(cfg: ExperimentConfig) -> Table:
    z, x = load_instance(cfg, 0)
    a = make_scorer(cfg.scorer, z, cfg.r, cfg.seed, 0)
    hcfg = HireConfig(k=cfg.k, k_prime=cfg.k_prime[0], phi=cfg.activation)
    top, comm = da_topk(shard(z, a, cfg.shards), x, hcfg)
    table = _topk_table(top)
    per_shard = ";".join(str(c) for c in comm.candidates_per_shard)
    table.notes.append(
        f"comm bytes_gathered={comm.bytes_gathered} candidates_per_shard={per_shard} "
        f"values_concatenated={comm.values_concatenated}"
    )
    return table


def run_softmax_topk(cfg: ExperimentConfig) -> Table:
    w, x = load_instance(cfg, 0)
    a = make_scorer(cfg.scorer, w, cfg.r, cfg.seed, 0)
    dist = softmax_topk(w, x, a, HireConfig(k=cfg.k, k_prime=cfg.k_prime[0]))
    rows = [
        [str(rank), str(int(i)), format_real(p), format_real(z)]
        for rank, (i, p, z) in enumerate(
            zip(dist.indices, dist.probabilities, dist.logits, strict=True)
        )
    ]
    return Table(["rank", "index", "probability", "logit"], rows)


# --- Sweeps ---


def _sweep_trial(cfg: ExperimentConfig, trial: int) -> list[RecallReport]:
    z, x = load_instance(cfg, trial)
    a = make_scorer(cfg.scorer, z, cfg.r, cfg.seed, trial)
    phi = cfg.activation
    exact = exact_topk(z, x, cfg.k, phi)
    reports = []
    if cfg.include_approx_only:
        approx = approx_only_topk(x, a, cfg.k, phi)
        as_candidates = CandidateSet(np.sort(approx.indices), "approx_only", approx.clamped)
        reports.append(recall(as_candidates, exact, approx))
    for kp in cfg.k_prime:
        # k′ < k keeps all k′ candidates; the intersection is then bounded by k′.
        hcfg = HireConfig(k=min(cfg.k, kp), k_prime=kp, phi=phi)
        top, candidates = hire_topk(x, z, a, hcfg)
        reports.append(recall(candidates, exact, top))
    return reports


def run_kprime_sweep(cfg: ExperimentConfig) -> Table:
    per_trial = _per_trial(cfg, lambda t: _sweep_trial(cfg, t))
    labels = (["none"] if cfg.include_approx_only else []) + [str(kp) for kp in cfg.k_prime]
    table = Table(["k_prime", "recall", "intersection_k", "top1_agree"])
    for row, label in enumerate(labels):
        reps = [reports[row] for reports in per_trial]
        table.rows.append(
            [
                label,
                _fmt(float(np.mean([r.recall for r in reps]))),
                _fmt(float(np.mean([r.intersection_k for r in reps]))),
                _fmt(float(np.mean([r.top1_agree for r in reps]))),
            ]
        )
    return table


def run_projection_ablation(cfg: ExperimentConfig) -> Table:
    phi = cfg.activation
    hcfg = HireConfig(k=min(cfg.k, cfg.k_prime[0]), k_prime=cfg.k_prime[0], phi=phi)

    def trial(t: int) -> tuple[float, float]:
        z, x = load_instance(cfg, t)
        exact = exact_topk(z, x, cfg.k, phi)
        sketch_seed = int(make_rng(cfg.seed, t, 2).integers(2**32))
        scorers: Sequence[ApproxScorer] = (
            LowRankScorer(fit_low_rank_svd(z, cfg.r)),
            LowRankScorer(random_low_rank(z, cfg.r, sketch_seed)),
        )
        svd_rec, rnd_rec = (recall(hire_topk(x, z, a, hcfg)[1], exact).recall for a in scorers)
        return svd_rec, rnd_rec

    results = _per_trial(cfg, trial)
    table = Table(["instance", "svd_recall", "random_recall"])
    for t, (svd_rec, rnd_rec) in enumerate(results):
        table.rows.append([str(t), _fmt(svd_rec), _fmt(rnd_rec)])
    svd_mean = float(np.mean([s for s, _ in results]))
    rnd_mean = float(np.mean([r for _, r in results]))
    table.notes.append(f"mean svd_recall={_fmt(svd_mean)} random_recall={_fmt(rnd_mean)}")
    return table


# --- FFN ---


def _ffn_trial(cfg: ExperimentConfig, trial: int) -> list[tuple[str, str, float, float, float]]:
    c = make_ffn(cfg, trial)
    f = c.sparse_part
    x = gaussian(make_rng(cfg.seed, trial, 1), cfg.d)
    a = make_scorer(cfg.scorer, f.u, cfg.r, cfg.seed, trial)
    dense_part = ffn_dense(c.dense_part, x) if c.dense_part is not None else None

    def with_common(out: npt.NDArray[np.float32]) -> npt.NDArray[np.float32]:
        return out if dense_part is None else dense_part + out

    for kp in cfg.k_prime:
        check_group_counts(f, cfg.k, kp)
    dense = with_common(ffn_dense(f, x))
    topk_ref = with_common(ffn_topk(f, x, cfg.k))
    exact_groups = select_groups(f, x, ExactCopyScorer(f.u), cfg.k // f.g, f.n_groups).id_set

    rows: list[tuple[str, str, float, float, float]] = [
        ("topk", "full", _rel_err(topk_ref, dense), 0.0, 1.0)
    ]
    variant = "common_path" if c.dense_part is not None else "group_sparse"
    for kp in cfg.k_prime:
        out, groups = ffn_group_sparse(f, x, a, cfg.k, kp)
        out = with_common(out)
        hits = len(groups.id_set & exact_groups) / len(exact_groups)
        rows.append((variant, str(kp), _rel_err(out, dense), _rel_err(out, topk_ref), hits))
        if cfg.shards > 1:
            da_out, da_groups = da_group_sparse(f, x, a, cfg.shards, cfg.k, kp)
            da_out = with_common(da_out)
            da_hits = len(da_groups.id_set & exact_groups) / len(exact_groups)
            rows.append(
                (
                    "da_group_sparse",
                    str(kp),
                    _rel_err(da_out, dense),
                    _rel_err(da_out, topk_ref),
                    da_hits,
                )
            )
    return rows


def run_ffn(cfg: ExperimentConfig) -> Table:
    per_trial = _per_trial(cfg, lambda t: _ffn_trial(cfg, t))
    table = Table(["variant", "k", "k_prime", "rel_err_dense", "rel_err_topk", "group_recall"])
    for row in range(len(per_trial[0])):
        variant, kp = per_trial[0][row][:2]
        cols = [[trial_rows[row][i] for trial_rows in per_trial] for i in (2, 3, 4)]
        table.rows.append(
            [variant, str(cfg.k), kp, *(_fmt(float(np.mean(c))) for c in cols)]
        )
    return table


def run_overlap(cfg: ExperimentConfig) -> Table:
    k_groups = cfg.k // cfg.g

    def trial(t: int) -> tuple[int, float]:
        f = make_ffn(cfg, t).sparse_part
        a = make_scorer(cfg.scorer, f.u, cfg.r, cfg.seed, t)
        # samples are already spread over the trial pool
        sets = per_sample_groups(f, sample_batch(cfg, t), a, cfg.k, cfg.k_prime[0], max_workers=1)
        union: set[int] = set()
        for s in sets:
            union |= s.id_set
        return len(union), overlap_ratio(sets, k_groups)

    results = _per_trial(cfg, trial)
    table = Table(["trial", "union_groups", "overlap_ratio"])
    for t, (union, ratio) in enumerate(results):
        table.rows.append([str(t), str(union), _fmt(ratio)])
    hist = overlap_histogram([ratio for _, ratio in results], cfg.histogram_bins)
    table.sidecar = Table(
        ["bin_lo", "bin_hi", "count"],
        [[_fmt(lo), _fmt(hi), str(n)] for lo, hi, n in hist],
    )
    return table


# --- Systems ---


def run_bench_gather(cfg: ExperimentConfig) -> Table:
    results = sweep_gather(
        cfg.g_values,
        total_vectors=cfg.total_vectors,
        d=cfg.d,
        fraction_selected=cfg.fraction_selected,
        repeats=cfg.repeats,
        seed=cfg.seed,
    )
    table = Table(["g", "bytes", "sparse_ns", "dense_ns", "efficiency_paper", "efficiency_ratio"])
    for res in results:
        table.rows.append(
            [
                str(res.g),
                str(res.bytes),
                str(res.sparse_time),
                str(res.dense_time),
                _fmt(res.efficiency_paper),
                _fmt(res.efficiency_ratio),
            ]
        )
    return table


def run_cost(cfg: ExperimentConfig) -> Table:
    report = param_bytes(cfg.d, cfg.l, cfg.r, cfg.k_prime[0])
    table = Table(["method", "bytes"], [[name, str(b)] for name, b in report.rows()])
    if report.no_saving:
        table.notes.append(f"no_saving={';'.join(report.no_saving)}")
    return table


RUNNERS: dict[Mode, Callable[[ExperimentConfig], Table]] = {
    Mode.SOFTMAX_TOPK: run_softmax_topk,
    Mode.HIRE_TOPK: run_hire_topk,
    Mode.FFN: run_ffn,
    Mode.DISTRIBUTED: run_distributed,
    Mode.BENCH_GATHER: run_bench_gather,
    Mode.KPRIME_SWEEP: run_kprime_sweep,
    Mode.PROJECTION_ABLATION: run_projection_ablation,
    Mode.OVERLAP: run_overlap,
    Mode.COST: run_cost,
}


def run_mode(cfg: ExperimentConfig) -> Table:
    log.info("mode_start", mode=cfg.mode.value, seed=cfg.seed, trials=cfg.trials)
    table = RUNNERS[cfg.mode](cfg)
    log.info("mode_done", mode=cfg.mode.value, rows=len(table.rows))
    return table

