"""Per-point orchestration: load, select, train, evaluate, report.

Every stage reads and writes documented file artifacts under the output
directory, so the stages can run as separate commands and the all-in-one
runner is literally their composition. One master seed derives every
sub-seed, and feature selection sees only training rows unless the
configuration explicitly opts into selecting on all rows.

Artifacts (all JSON unless noted):
    <output>/<lon>_<lat>/selection.json   pruning, occurrence counts, top features
    <output>/<lon>_<lat>/models.json      five serialized fitted models
    <output>/<lon>_<lat>/evaluation.json  per-model test metrics
    <output>/report.json                  all rows plus best model per point
    <output>/selection_summary.json       per-point top lists and occurrence totals
    <output>/report.csv, report.txt       rendered by the report stage
    <output>/errors.json                  only when some points failed
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .catalog import FEATURE_NAMES, IndexPoint, REFERENCE_POINTS, column_of
from .dataset import Dataset, SplitSpec, load_csv, split
from .errors import HydrocastError
from .evaluation import (
    CSV_FORMAT,
    EvalResult,
    EvaluationReport,
    JSON_FORMAT,
    TEXT_TABLE,
    error_std,
    mae,
    pearson,
    render_report,
)
from .learners import KIND_ORDER, LearnerSpec, fit_all, model_from_dict, model_to_dict
from .selection import (
    BoostConfig,
    ColinearityConfig,
    SelectionConfig,
    SelectionResult,
    run_selection,
)

# Purpose codes for seed derivation; point index and kind index are appended.
_SEED_BOOST = 1
_SEED_LEARNER = 2
_SEED_SYNTH = 3
_POOLED_POINT_CODE = 10_000


def derive_seed(*parts: int) -> int:
    """Stable 64-bit sub-seed from integer path components."""
    seq = np.random.SeedSequence([int(p) for p in parts])
    return int(seq.generate_state(1, np.uint64)[0])


def synth_seed(master: int, point_index: int) -> int:
    return derive_seed(master, _SEED_SYNTH, point_index)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one end-to-end run needs; see README for the file schema."""

    data_path: str
    output_dir: str
    points: tuple[IndexPoint, ...] = REFERENCE_POINTS
    gamma: float = 0.9
    norm: str = "l2"
    kappa: int = 10
    boost: BoostConfig = field(default_factory=BoostConfig)
    split: SplitSpec = field(default_factory=SplitSpec)
    learners: tuple = tuple((kind, None) for kind in KIND_ORDER)
    seed: int = 0
    select_on_all: bool = False
    pooled_selection: bool = False

    def selection_config(self, seed: int) -> SelectionConfig:
        boost = BoostConfig(
            trees_per_stage=self.boost.trees_per_stage,
            max_stages=self.boost.max_stages,
            shrinkage=self.boost.shrinkage,
            stop_tolerance=self.boost.stop_tolerance,
            weak_tree=self.boost.weak_tree,
            feature_subset_size=self.boost.feature_subset_size,
            seed=seed,
        )
        return SelectionConfig(
            colinearity=ColinearityConfig(gamma=self.gamma, norm=self.norm),
            boost=boost,
            kappa=self.kappa,
        )

    def learner_specs(self, point_index: int) -> list[LearnerSpec]:
        specs = []
        for kind_index, (kind, hyper) in enumerate(self.learners):
            specs.append(
                LearnerSpec(
                    kind,
                    hyper,
                    seed=derive_seed(self.seed, _SEED_LEARNER, point_index, kind_index),
                )
            )
        return specs


@dataclass
class PipelineResult:
    selections: dict[str, SelectionResult]
    report: EvaluationReport | None
    errors: dict[str, str]


def _point_dir(cfg: PipelineConfig, point: IndexPoint) -> Path:
    d = Path(cfg.output_dir) / point.label
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _read_json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def _point_payload(point: IndexPoint) -> dict:
    return {"lon": point.lon, "lat": point.lat, "elev": point.elev, "id": point.id}


def _selection_rows(cfg: PipelineConfig, data: Dataset) -> Dataset:
    if cfg.select_on_all:
        return data
    train, _ = split(data, cfg.split)
    return train


def _ordered_occurrence(selection: SelectionResult) -> dict[str, int]:
    items = sorted(
        ((f, c) for f, c in selection.occurrence.items() if c > 0),
        key=lambda fc: (-fc[1], fc[0]),
    )
    return {FEATURE_NAMES[f]: c for f, c in items}


def selection_payload(point: IndexPoint, selection: SelectionResult, seed: int,
                      cfg: PipelineConfig, n_rows: int, pooled: bool) -> dict:
    return {
        "point": _point_payload(point),
        "seed": seed,
        "selected_on": "all" if cfg.select_on_all else "train",
        "pooled": pooled,
        "n_rows_used": n_rows,
        "gamma": cfg.gamma,
        "norm": cfg.norm,
        "kappa": cfg.kappa,
        "kept_after_prune": [FEATURE_NAMES[f] for f in selection.kept_after_prune],
        "dropped_pairs": [
            {"kept": FEATURE_NAMES[i], "dropped": FEATURE_NAMES[j], "cosine": c}
            for i, j, c in selection.dropped_pairs
        ],
        "occurrence": _ordered_occurrence(selection),
        "occurrence_total": selection.occurrence_total,
        "top_features": [FEATURE_NAMES[f] for f in selection.top_k],
        "n_stages": selection.n_stages,
        "training_mse_per_stage": list(selection.training_mse_per_stage),
    }


def stage_select(cfg: PipelineConfig) -> PipelineResult:
    """Prune and boost-rank features per point; write selection.json files."""
    selections: dict[str, SelectionResult] = {}
    errors: dict[str, str] = {}

    pooled_selection = None
    pooled_seed = derive_seed(cfg.seed, _SEED_BOOST, _POOLED_POINT_CODE)
    if cfg.pooled_selection:
        blocks_X, blocks_y = [], []
        for point in cfg.points:
            rows = _selection_rows(cfg, load_csv(cfg.data_path, point))
            blocks_X.append(rows.features)
            blocks_y.append(rows.precip)
        pooled_selection = run_selection(
            np.vstack(blocks_X), np.concatenate(blocks_y), cfg.selection_config(pooled_seed)
        )

    for idx, point in enumerate(cfg.points):
        label = point.label
        try:
            data = load_csv(cfg.data_path, point)
            rows = _selection_rows(cfg, data)
            if pooled_selection is not None:
                selection, seed, pooled = pooled_selection, pooled_seed, True
            else:
                seed, pooled = derive_seed(cfg.seed, _SEED_BOOST, idx), False
                selection = run_selection(rows.features, rows.precip, cfg.selection_config(seed))
            selections[label] = selection
            _write_json(
                _point_dir(cfg, point) / "selection.json",
                selection_payload(point, selection, seed, cfg, len(rows), pooled),
            )
        except HydrocastError as exc:
            errors[label] = str(exc)
    return PipelineResult(selections, None, errors)


def stage_train(cfg: PipelineConfig, errors: dict[str, str] | None = None) -> dict[str, dict]:
    """Fit the configured learners on the selected training columns."""
    fitted: dict[str, dict] = {}
    errors = errors if errors is not None else {}
    for idx, point in enumerate(cfg.points):
        point_dir = _point_dir(cfg, point)
        selection_file = point_dir / "selection.json"
        if not selection_file.exists():
            continue
        try:
            payload = _read_json(selection_file)
            columns = [column_of(name) for name in payload["top_features"]]
            if not columns:
                errors[point.label] = "selection produced no features"
                continue
            data = load_csv(cfg.data_path, point)
            train, _ = split(data, cfg.split)
            models = fit_all(
                cfg.learner_specs(idx), train.features[:, columns], train.precip, columns
            )
            fitted[point.label] = models
            _write_json(
                point_dir / "models.json",
                {
                    "point": _point_payload(point),
                    "features": payload["top_features"],
                    "models": {kind: model_to_dict(models[kind]) for kind, _ in cfg.learners},
                },
            )
        except HydrocastError as exc:
            errors[point.label] = str(exc)
    return fitted


def stage_evaluate(cfg: PipelineConfig, errors: dict[str, str] | None = None) -> EvaluationReport | None:
    """Score every stored model on its point's test months."""
    rows: list[EvalResult] = []
    errors = errors if errors is not None else {}
    for point in cfg.points:
        point_dir = Path(cfg.output_dir) / point.label
        models_file = point_dir / "models.json"
        if not models_file.exists():
            continue
        try:
            payload = _read_json(models_file)
            columns = [column_of(name) for name in payload["features"]]
            data = load_csv(cfg.data_path, point)
            _, test = split(data, cfg.split)
        except HydrocastError as exc:
            errors[point.label] = str(exc)
            continue
        X_test = test.features[:, columns]
        metrics = {}
        for kind, _ in cfg.learners:
            try:
                model = model_from_dict(payload["models"][kind])
                predicted = model.predict_batch(X_test)
                row = EvalResult(
                    point,
                    kind,
                    pearson(test.precip, predicted),
                    mae(test.precip, predicted),
                    error_std(test.precip, predicted),
                    len(test),
                )
            except HydrocastError as exc:
                errors[f"{point.label}:{kind}"] = str(exc)
                continue
            rows.append(row)
            metrics[kind] = {"pearson": row.rho, "mae": row.mae, "std": row.std}
        _write_json(
            point_dir / "evaluation.json",
            {"point": _point_payload(point), "n_test": len(test), "metrics": metrics},
        )

    if not rows:
        return None
    report = EvaluationReport(rows)
    _write_json(Path(cfg.output_dir) / "report.json", report.to_dict())
    _write_selection_summary(cfg)
    return report


def _write_selection_summary(cfg: PipelineConfig) -> None:
    top_per_point: dict[str, list[str]] = {}
    totals: dict[str, int] = {}
    membership: dict[str, int] = {}
    for point in cfg.points:
        selection_file = Path(cfg.output_dir) / point.label / "selection.json"
        if not selection_file.exists():
            continue
        payload = _read_json(selection_file)
        top_per_point[point.label] = payload["top_features"]
        for name, count in payload["occurrence"].items():
            totals[name] = totals.get(name, 0) + count
        for name in payload["top_features"]:
            membership[name] = membership.get(name, 0) + 1

    order = {name: i for i, name in enumerate(FEATURE_NAMES)}
    totals = dict(sorted(totals.items(), key=lambda kv: (-kv[1], order[kv[0]])))
    membership = dict(sorted(membership.items(), key=lambda kv: (-kv[1], order[kv[0]])))
    _write_json(
        Path(cfg.output_dir) / "selection_summary.json",
        {
            "top_features_per_point": top_per_point,
            "occurrence_totals": totals,
            "occurrence_total_sum": sum(totals.values()),
            "top_feature_membership": membership,
        },
    )


def stage_report(cfg: PipelineConfig, fmt: str = TEXT_TABLE) -> str:
    """Render the stored report; also writes report.csv / report.txt."""
    report = EvaluationReport.from_dict(_read_json(Path(cfg.output_dir) / "report.json"))
    rendered = render_report(report, fmt)
    suffix = {TEXT_TABLE: "report.txt", CSV_FORMAT: "report.csv", JSON_FORMAT: "report.out.json"}
    out = Path(cfg.output_dir) / suffix[fmt]
    out.write_text(rendered, encoding="utf-8")
    return rendered


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """select -> train -> evaluate -> report, sharing one artifact tree."""
    result = stage_select(cfg)
    errors = result.errors
    stage_train(cfg, errors)
    report = stage_evaluate(cfg, errors)
    if report is not None:
        stage_report(cfg, TEXT_TABLE)
        stage_report(cfg, CSV_FORMAT)
    if errors:
        _write_json(Path(cfg.output_dir) / "errors.json", errors)
    return PipelineResult(result.selections, report, errors)
