"""End-to-end tests for the ``hire`` command line."""

from __future__ import annotations

import io
import json

import pytest
from pydantic import ValidationError

from hire.approx import fit_low_rank_svd, relative_residual
from hire.cli.config import ExperimentConfig, Mode
from hire.cli.instances import Spectrum, gen_instance
from hire.cli.main import EXIT_CONFIG, EXIT_IO, EXIT_RUNTIME, main
from hire.common.settings import reset_settings


def _run(tmp_path, config, *flags):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    out = io.StringIO()
    code = main(["run", "--config", str(path), *flags], stdout=out)
    return code, out.getvalue()


def _rows(text):
    """CSV body without manifest, note and header lines."""
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    return [line.split(",") for line in lines[1:]]


def _header(text):
    return next(line for line in text.splitlines() if not line.startswith("#"))


SWEEP = {
    "mode": "kprime-sweep",
    "d": 16,
    "l": 512,
    "k": 8,
    "k_prime": [8, 16, 64, 128, 512],
    "scorer": "quantized",
    "trials": 3,
    "seed": 5,
}


# --- Config ---


class TestExperimentConfig:
    def test_scalar_k_prime_becomes_list(self):
        assert ExperimentConfig(mode=Mode.COST, k_prime=50).k_prime == [50]

    def test_activation_default_per_mode(self):
        assert ExperimentConfig(mode=Mode.FFN, k_prime=[16]).activation == "relu"
        assert ExperimentConfig(mode=Mode.HIRE_TOPK).activation == "identity"

    def test_file_instance_needs_paths(self):
        with pytest.raises(ValidationError, match="matrix_path"):
            ExperimentConfig(mode=Mode.HIRE_TOPK, instance="file")

    def test_single_k_prime_modes(self):
        with pytest.raises(ValidationError, match="single value"):
            ExperimentConfig(mode=Mode.HIRE_TOPK, k_prime=[64, 128])

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"mode": "cost", "colour": "red"})

    def test_m2_must_complement_m1(self):
        with pytest.raises(ValidationError, match="m2"):
            ExperimentConfig(mode=Mode.FFN, m=64, m1=16, m2=32)


# --- Modes ---


def test_cost_worked_example(tmp_path):
    code, text = _run(tmp_path, {"mode": "cost", "d": 100, "l": 1000, "r": 10, "k_prime": 50})
    assert code == 0
    assert text.startswith("# mode=cost seed=0 dims=d=100,l=1000 versions=hire-")
    assert _header(text) == "method,bytes"
    assert _rows(text)[:3] == [["baseline", "200000"], ["hire_lr", "32000"], ["hire_q", "60000"]]


def test_kprime_sweep_recall_non_decreasing(tmp_path):
    code, text = _run(tmp_path, SWEEP)
    assert code == 0
    assert _header(text) == "k_prime,recall,intersection_k,top1_agree"
    rows = _rows(text)
    assert [r[0] for r in rows] == ["8", "16", "64", "128", "512"]
    recalls = [float(r[1]) for r in rows]
    assert recalls == sorted(recalls)
    assert recalls[-1] == 1.0
    assert float(rows[-1][2]) == 8.0


def test_sweep_approx_only_row_is_opt_in(tmp_path):
    code, text = _run(tmp_path, {**SWEEP, "include_approx_only": True})
    assert code == 0
    rows = _rows(text)
    assert [r[0] for r in rows] == ["none", "8", "16", "64", "128", "512"]
    assert float(rows[0][1]) <= float(rows[-1][1])


def test_sweep_is_deterministic(tmp_path):
    _, first = _run(tmp_path, SWEEP)
    _, second = _run(tmp_path, SWEEP)
    assert first == second


def test_flags_override_config(tmp_path):
    code, text = _run(tmp_path, SWEEP, "--kprime", "16,32", "--seed", "9")
    assert code == 0
    assert "seed=9" in text.splitlines()[0]
    assert [r[0] for r in _rows(text)] == ["16", "32"]


def test_distributed_single_shard_matches_hire_topk(tmp_path):
    base = {"d": 16, "l": 300, "k": 6, "k_prime": 30, "seed": 3, "scorer": "low_rank", "r": 4}
    _, single = _run(tmp_path, {**base, "mode": "hire-topk"})
    _, dist = _run(tmp_path, {**base, "mode": "distributed", "shards": 1})
    assert _header(single) == _header(dist) == "rank,index,value"
    assert _rows(single) == _rows(dist)
    assert len(_rows(single)) == 6
    assert any(line.startswith("# comm bytes_gathered=") for line in dist.splitlines())


def test_softmax_topk_probabilities(tmp_path):
    code, text = _run(tmp_path, {"mode": "softmax-topk", "d": 8, "l": 64, "k": 4, "k_prime": 16})
    assert code == 0
    assert _header(text) == "rank,index,probability,logit"
    probs = [float(r[2]) for r in _rows(text)]
    assert len(probs) == 4
    assert sum(probs) == pytest.approx(1.0, abs=1e-5)
    assert probs == sorted(probs, reverse=True)


def test_projection_ablation(tmp_path):
    cfg = {
        "mode": "projection-ablation",
        "instance": "decaying",
        "d": 16,
        "l": 256,
        "r": 4,
        "k": 4,
        "k_prime": 32,
        "trials": 3,
    }
    code, text = _run(tmp_path, cfg)
    assert code == 0
    assert _header(text) == "instance,svd_recall,random_recall"
    assert [r[0] for r in _rows(text)] == ["0", "1", "2"]
    assert "# mean svd_recall=" in text


def test_ffn_rows(tmp_path):
    cfg = {"mode": "ffn", "d": 16, "m": 64, "g": 4, "k": 16, "k_prime": [16, 32], "trials": 2}
    code, text = _run(tmp_path, cfg)
    assert code == 0
    assert _header(text) == "variant,k,k_prime,rel_err_dense,rel_err_topk,group_recall"
    rows = _rows(text)
    assert [(r[0], r[2]) for r in rows] == [
        ("topk", "full"),
        ("group_sparse", "16"),
        ("group_sparse", "32"),
    ]


def test_ffn_common_path_and_shards(tmp_path):
    cfg = {"mode": "ffn", "d": 16, "m": 80, "m1": 16, "g": 4, "k": 16, "k_prime": 32, "shards": 2}
    code, text = _run(tmp_path, cfg)
    assert code == 0
    assert [r[0] for r in _rows(text)] == ["topk", "common_path", "da_group_sparse"]


def test_overlap_writes_histogram_sidecar(tmp_path):
    out = tmp_path / "res" / "overlap.csv"
    cfg = {
        "mode": "overlap",
        "d": 16,
        "m": 64,
        "g": 4,
        "k": 8,
        "k_prime": 16,
        "n_samples": 4,
        "trials": 5,
        "out": str(out),
    }
    code, _ = _run(tmp_path, cfg)
    assert code == 0
    rows = _rows(out.read_text())
    assert len(rows) == 5
    for _, union, ratio in rows:
        assert 2 <= int(union) <= 8
        assert 0.25 <= float(ratio) <= 1.0
    hist = (tmp_path / "res" / "overlap.hist.csv").read_text()
    assert _header(hist) == "bin_lo,bin_hi,count"
    assert sum(int(r[2]) for r in _rows(hist)) == 5


def test_bench_gather_schema(tmp_path):
    cfg = {
        "mode": "bench-gather",
        "d": 4,
        "g_values": [1, 4],
        "total_vectors": 256,
        "repeats": 3,
    }
    code, text = _run(tmp_path, cfg)
    assert code == 0
    assert _header(text) == "g,bytes,sparse_ns,dense_ns,efficiency_paper,efficiency_ratio"
    assert [r[0] for r in _rows(text)] == ["1", "4"]


# --- Instances ---


def test_gen_instance_is_reproducible(tmp_path):
    for name in ("a", "b"):
        argv = ["gen-instance", "--d", "8", "--l", "32", "--seed", "4"]
        code = main([*argv, "--out-dir", str(tmp_path / name)])
        assert code == 0
    for f in ("matrix.bin", "vector.bin"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_file_instance_round_trip(tmp_path):
    main(["gen-instance", "--d", "8", "--l", "40", "--out-dir", str(tmp_path)])
    cfg = {
        "mode": "hire-topk",
        "instance": "file",
        "matrix_path": str(tmp_path / "matrix.bin"),
        "vector_path": str(tmp_path / "vector.bin"),
        "k": 3,
        "k_prime": 40,
        "scorer": "quantized",
    }
    code, text = _run(tmp_path, cfg)
    assert code == 0
    assert len(_rows(text)) == 3


def test_decaying_spectrum_fits_better_at_low_rank():
    flat, _ = gen_instance(32, 256, 0, Spectrum.FLAT)
    decaying, _ = gen_instance(32, 256, 0, Spectrum.DECAYING)
    assert relative_residual(decaying, fit_low_rank_svd(decaying, 8)) < relative_residual(
        flat, fit_low_rank_svd(flat, 8)
    )


# --- Exit codes ---


def test_missing_mode_is_config_error(tmp_path):
    code, _ = _run(tmp_path, {"d": 8})
    assert code == EXIT_CONFIG


def test_invalid_field_is_config_error(tmp_path):
    code, _ = _run(tmp_path, {"mode": "hire-topk", "k": 64, "k_prime": 8})
    assert code == EXIT_CONFIG


def test_divisibility_is_config_error(tmp_path):
    cfg = {"mode": "distributed", "d": 8, "l": 64, "k": 6, "k_prime": 16, "shards": 4}
    code, _ = _run(tmp_path, cfg)
    assert code == EXIT_CONFIG


def test_missing_config_file_is_io_error(tmp_path):
    code = main(["run", "--config", str(tmp_path / "absent.json")], stdout=io.StringIO())
    assert code == EXIT_IO


def test_non_convergence_is_numeric_error(tmp_path, monkeypatch):
    monkeypatch.setenv("HIRE_SVD_METHOD", "power")
    monkeypatch.setenv("HIRE_SVD_MAX_ITER", "1")
    reset_settings()
    cfg = {"mode": "hire-topk", "d": 8, "l": 64, "k": 2, "k_prime": 8, "scorer": "low_rank"}
    code, _ = _run(tmp_path, cfg)
    assert code == EXIT_RUNTIME
