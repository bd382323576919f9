import json
from pathlib import Path

import numpy as np
import pytest

from hydrocast.catalog import REFERENCE_POINTS
from hydrocast.cli import main
from hydrocast.dataset import SplitSpec, load_csv, split, write_csv
from hydrocast.pipeline import PipelineConfig, derive_seed, run_pipeline, synth_seed
from hydrocast.selection import BoostConfig, SelectionConfig, run_selection
from hydrocast.cart import TreeConfig

POINTS = "p01,p02"


def small_config(data, output, **kwargs):
    return {
        "data": str(data),
        "output": str(output),
        "seed": 7,
        "points": POINTS,
        "boost": {"trees_per_stage": 20, "max_stages": 2},
        "learners": {
            "rf": {"n_trees": 10},
            "knn": {"k": 3},
            "svr": {"epochs": 60},
            "lr": {},
            "mlp": {"epochs": 60},
        },
        **kwargs,
    }


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def synth(tmp_path, out="data.csv", samples=60, extra=()):
    data = tmp_path / out
    code = main([
        "synth", "--samples", str(samples), "--seed", "7",
        "--points", POINTS, "--out", str(data), *extra,
    ])
    assert code == 0
    return data


def read_tree(output):
    files = {}
    for path in sorted(Path(output).rglob("*")):
        if path.is_file():
            files[str(path.relative_to(output))] = path.read_bytes()
    return files


def test_synth_is_deterministic(tmp_path):
    a = synth(tmp_path, "a.csv")
    b = synth(tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    main(["synth", "--samples", "60", "--seed", "8", "--points", POINTS, "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()


def test_synth_writes_requested_points(tmp_path):
    data = synth(tmp_path)
    for pid in ("p01", "p02"):
        point = next(p for p in REFERENCE_POINTS if p.id == pid)
        assert len(load_csv(data, point)) == 60


def test_run_single_point_noiseless_linear_gives_perfect_lr(tmp_path):
    data = tmp_path / "lin.csv"
    code = main([
        "synth", "--samples", "80", "--seed", "3", "--points", "p01",
        "--planted", "air_l01,hgt_l02", "--linear", "--out", str(data),
    ])
    assert code == 0
    out = tmp_path / "out"
    payload = small_config(data, out, points="p01")
    # full feature visibility makes recovery of the two planted columns certain
    payload["boost"]["feature_subset_size"] = 85
    cfg = write_config(tmp_path, payload)
    assert main(["run", "--config", str(cfg)]) == 0
    report = json.loads((out / "report.json").read_text())
    lr_row = next(r for r in report["rows"] if r["model"] == "lr")
    assert lr_row["pearson"] == pytest.approx(1.0, abs=1e-6)
    assert lr_row["mae"] < 1e-8


def test_run_writes_all_artifacts(tmp_path):
    data = synth(tmp_path)
    out = tmp_path / "out"
    cfg = write_config(tmp_path, small_config(data, out))
    assert main(["run", "--config", str(cfg)]) == 0
    for label in ("27.5_67.5", "30_67.5"):
        for name in ("selection.json", "models.json", "evaluation.json"):
            assert (out / label / name).exists()
    for name in ("report.json", "report.csv", "report.txt", "selection_summary.json"):
        assert (out / name).exists()
    report = json.loads((out / "report.json").read_text())
    assert len(report["rows"]) == 10  # 2 points x 5 models
    assert len(report["best_per_point"]) == 2
    assert not (out / "errors.json").exists()


def test_selection_json_contents(tmp_path):
    data = synth(tmp_path)
    out = tmp_path / "out"
    cfg = write_config(tmp_path, small_config(data, out))
    assert main(["select", "--config", str(cfg)]) == 0
    payload = json.loads((out / "27.5_67.5" / "selection.json").read_text())
    assert payload["selected_on"] == "train"
    assert payload["n_rows_used"] == 54  # 60 - round(6)
    assert payload["kappa"] == 10
    assert 0 < len(payload["top_features"]) <= 10
    assert payload["occurrence_total"] == sum(payload["occurrence"].values())
    assert set(payload["top_features"]) <= set(payload["kept_after_prune"])
    mse = payload["training_mse_per_stage"]
    assert all(b <= a for a, b in zip(mse, mse[1:]))


def test_stage_composition_equals_run(tmp_path):
    data = synth(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    cfg_a = write_config(tmp_path, small_config(data, out_a), "a.json")
    cfg_b = write_config(tmp_path, small_config(data, out_b), "b.json")
    assert main(["run", "--config", str(cfg_a)]) == 0
    for stage in ("select", "train", "evaluate"):
        assert main([stage, "--config", str(cfg_b)]) == 0
    assert main(["report", "--config", str(cfg_b), "--format", "text"]) == 0
    assert main(["report", "--config", str(cfg_b), "--format", "csv"]) == 0
    assert read_tree(out_a) == read_tree(out_b)


def test_end_to_end_determinism(tmp_path):
    data = synth(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        cfg = write_config(tmp_path, small_config(data, out), f"{out.name}.json")
        assert main(["run", "--config", str(cfg)]) == 0
    assert read_tree(out_a) == read_tree(out_b)


def test_selection_ignores_test_rows(tmp_path):
    data = synth(tmp_path, samples=80, extra=("--noise-rel", "0.1"))
    out_a = tmp_path / "a"
    cfg_a = write_config(tmp_path, small_config(data, out_a), "a.json")
    assert main(["select", "--config", str(cfg_a)]) == 0

    # perturb only the held-out rows (chronological split: the last 8)
    point = REFERENCE_POINTS[0]
    full = load_csv(data, point)
    train, test = split(full, SplitSpec())
    perturbed = test.features + 123.456
    stacked = np.vstack([train.features, perturbed])
    precip = np.concatenate([train.precip, test.precip + 1.0])
    from hydrocast.dataset import Dataset

    tampered = tmp_path / "tampered.csv"
    write_csv(
        [Dataset(point, full.timestamps, stacked, precip),
         load_csv(data, REFERENCE_POINTS[1])],
        tampered,
    )
    out_b = tmp_path / "b"
    cfg_b = write_config(tmp_path, small_config(tampered, out_b), "b.json")
    assert main(["select", "--config", str(cfg_b)]) == 0

    sel_a = (out_a / "27.5_67.5" / "selection.json").read_bytes()
    sel_b = (out_b / "27.5_67.5" / "selection.json").read_bytes()
    assert sel_a == sel_b

    # while selecting on all rows does notice the tampering
    out_c, out_d = tmp_path / "c", tmp_path / "d"
    cfg_c = write_config(tmp_path, small_config(data, out_c, select_on_all=True), "c.json")
    cfg_d = write_config(tmp_path, small_config(tampered, out_d, select_on_all=True), "d.json")
    assert main(["select", "--config", str(cfg_c)]) == 0
    assert main(["select", "--config", str(cfg_d)]) == 0
    assert (out_c / "27.5_67.5" / "selection.json").read_bytes() != (
        out_d / "27.5_67.5" / "selection.json").read_bytes()


def test_selection_matches_inmemory_train_only_run(tmp_path):
    data = synth(tmp_path, samples=70)
    out = tmp_path / "out"
    cfg_file = write_config(tmp_path, small_config(data, out))
    assert main(["select", "--config", str(cfg_file)]) == 0
    payload = json.loads((out / "27.5_67.5" / "selection.json").read_text())

    point = REFERENCE_POINTS[0]
    train, _ = split(load_csv(data, point), SplitSpec())
    cfg = SelectionConfig(
        boost=BoostConfig(trees_per_stage=20, max_stages=2,
                          weak_tree=TreeConfig(max_depth=3, min_samples_leaf=5),
                          seed=derive_seed(7, 1, 0)),
    )
    result = run_selection(train.features, train.precip, cfg)
    from hydrocast.catalog import FEATURE_NAMES

    assert [FEATURE_NAMES[f] for f in result.top_k] == payload["top_features"]
    assert result.occurrence_total == payload["occurrence_total"]


def test_pooled_selection_shares_features_across_points(tmp_path):
    data = synth(tmp_path)
    out = tmp_path / "out"
    cfg = write_config(tmp_path, small_config(data, out, pooled=True))
    assert main(["select", "--config", str(cfg)]) == 0
    a = json.loads((out / "27.5_67.5" / "selection.json").read_text())
    b = json.loads((out / "30_67.5" / "selection.json").read_text())
    assert a["pooled"] and b["pooled"]
    assert a["top_features"] == b["top_features"]
    assert a["occurrence"] == b["occurrence"]


def test_flags_override_config_file(tmp_path):
    data = synth(tmp_path)
    out = tmp_path / "out"
    cfg = write_config(tmp_path, small_config(data, out, gamma=0.95))
    assert main(["select", "--config", str(cfg), "--gamma", "0.8", "--kappa", "5"]) == 0
    payload = json.loads((out / "27.5_67.5" / "selection.json").read_text())
    assert payload["gamma"] == 0.8
    assert payload["kappa"] == 5
    assert len(payload["top_features"]) <= 5


def test_partial_failure_records_errors_and_continues(tmp_path):
    data = synth(tmp_path)  # contains p01 and p02 only
    out = tmp_path / "out"
    cfg = write_config(tmp_path, small_config(data, out, points="p01,p03"))
    code = main(["run", "--config", str(cfg)])
    assert code == 2  # p03 has no rows -> data error
    errors = json.loads((out / "errors.json").read_text())
    assert "30_70" in errors
    report = json.loads((out / "report.json").read_text())
    assert {r["model"] for r in report["rows"]} == {"rf", "knn", "svr", "lr", "mlp"}
    assert len(report["rows"]) == 5  # p01 still made it through


def test_usage_error_exits_1():
    with pytest.raises(SystemExit) as err:
        main(["select", "--no-such-flag"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 1


def test_data_error_exits_2(tmp_path):
    assert main(["run", "--data", str(tmp_path / "missing.csv"),
                 "--output", str(tmp_path / "out"), "--points", "p01"]) == 2
    assert main(["report", "--output", str(tmp_path / "never_ran")]) == 2


def test_report_formats(tmp_path, capsys):
    data = synth(tmp_path)
    out = tmp_path / "out"
    cfg = write_config(tmp_path, small_config(data, out))
    assert main(["run", "--config", str(cfg)]) == 0
    capsys.readouterr()
    assert main(["report", "--config", str(cfg), "--format", "csv"]) == 0
    printed = capsys.readouterr().out
    assert printed.splitlines()[0] == "lon,lat,elev,model,pearson,mae,std,is_best"
    assert (out / "report.csv").read_text() == printed
    assert main(["report", "--config", str(cfg), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["rows"]) == 10


def test_run_pipeline_api_returns_results(tmp_path):
    data = synth(tmp_path)
    out = tmp_path / "out"
    cfg = PipelineConfig(
        data_path=str(data),
        output_dir=str(out),
        points=tuple(p for p in REFERENCE_POINTS if p.id in ("p01", "p02")),
        boost=BoostConfig(trees_per_stage=10, max_stages=2),
        seed=7,
    )
    result = run_pipeline(cfg)
    assert set(result.selections) == {"27.5_67.5", "30_67.5"}
    assert result.report is not None
    assert len(result.report.rows) == 10
    assert result.errors == {}


def test_synth_seed_derivation_is_stable():
    # frozen values guard against accidental reseeding changes
    assert synth_seed(7, 0) == synth_seed(7, 0)
    assert synth_seed(7, 0) != synth_seed(7, 1)
    assert synth_seed(7, 0) != synth_seed(8, 0)


def test_console_entry_point(tmp_path):
    import shutil
    import subprocess

    exe = shutil.which("hydrocast")
    if exe is None:
        pytest.skip("console script not on PATH")
    out = tmp_path / "cli.csv"
    proc = subprocess.run(
        [exe, "synth", "--samples", "20", "--seed", "1", "--points", "p01",
         "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
    proc = subprocess.run([exe, "run", "--data", str(out)], capture_output=True, text=True)
    assert proc.returncode == 1  # missing --output is a usage-level problem
    proc = subprocess.run(
        [exe, "report", "--output", str(tmp_path / "none")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
