"""Command-line entry point: generate streams, evaluate predictors, emit
leaderboards.

All randomness flows from the single top-level seed in the config file, so
any command rerun with identical inputs writes byte-identical outputs
(wall-clock fields aside).  Relative paths inside a config file resolve
against the directory containing that file.  Exit codes: 0 on completion,
2 when any evaluated dataset was disqualified, 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baseline import BaselineConfig, BaselinePredictor
from .data import save_dataset
from .harness import DatasetRef, PhaseConfig, SubprocessPredictor, run_suite
from .metrics import DatasetScore
from .ranking import (
    SubmissionEntry,
    build_leaderboard,
    merge_bundles,
    read_submission,
    render_leaderboard_csv,
    write_submission,
)
from .synth import DATASET_SHAPES, DriftGenSpec, generate_drift_stream

PHASES = ("feedback", "final")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    dataset_id: str
    phase: str
    gen: DriftGenSpec
    budget_seconds: float


@dataclass(frozen=True)
class PredictorSpec:
    name: str
    kind: str               # "baseline" or "command"
    bundle: str
    options: dict
    command: tuple[str, ...]


@dataclass(frozen=True)
class RunConfig:
    seed: int
    n_blocks: int
    data_dir: Path
    output_dir: Path
    datasets: tuple[DatasetSpec, ...]
    predictors: tuple[PredictorSpec, ...]

    def phase_datasets(self, phase: str) -> tuple[DatasetSpec, ...]:
        return tuple(d for d in self.datasets if d.phase == phase)

    def predictor(self, name: str) -> PredictorSpec:
        for p in self.predictors:
            if p.name == name:
                return p
        raise ConfigError(f"unknown predictor {name!r}; registered: "
                          + ", ".join(p.name for p in self.predictors))


def _derived_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence((seed, index)).generate_state(1)[0])


def load_config(path: str | Path, seed_override: int | None = None) -> RunConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})")

    base = path.parent
    seed = int(raw.get("seed", 0)) if seed_override is None else seed_override
    n_blocks = int(raw.get("n_blocks", 10))

    datasets = []
    for i, d in enumerate(raw.get("datasets", [])):
        try:
            dataset_id = d["id"]
            phase = d.get("phase", "feedback")
            if phase not in PHASES:
                raise ConfigError(f"dataset {dataset_id}: unknown phase {phase!r}")
            if "shape" in d:
                n_cat, n_num, n_mvc, n_time, _ = DATASET_SHAPES[d["shape"]]
            else:
                n_cat, n_num = int(d["cat"]), int(d["num"])
                n_mvc, n_time = int(d.get("mvc", 0)), int(d.get("time", 0))
            gen = DriftGenSpec(
                n_rows=int(d["rows"]),
                n_cat=n_cat, n_num=n_num, n_mvc=n_mvc, n_time=n_time,
                n_blocks=int(d.get("n_blocks", n_blocks)),
                drift=d.get("drift", "none"),
                drift_magnitude=float(d.get("drift_magnitude", 0.0)),
                cat_cardinality=int(d.get("cat_cardinality", 30)),
                power_exponent=float(d.get("power_exponent", 1.3)),
                seed=_derived_seed(seed, i),
                dataset_id=dataset_id,
            )
            datasets.append(DatasetSpec(
                dataset_id=dataset_id, phase=phase, gen=gen,
                budget_seconds=float(d["budget_seconds"]),
            ))
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"dataset entry {i}: {exc}")

    predictors = []
    for i, p in enumerate(raw.get("predictors", [])):
        try:
            kind = p.get("type", "baseline")
            if kind not in ("baseline", "command"):
                raise ConfigError(f"predictor {p.get('name', i)}: unknown type {kind!r}")
            command = tuple(str(c) for c in p.get("command", ()))
            if kind == "command" and not command:
                raise ConfigError(f"predictor {p.get('name', i)}: command predictors need a command")
            predictors.append(PredictorSpec(
                name=p["name"],
                kind=kind,
                bundle=p.get("bundle", "default"),
                options=dict(p.get("options", {})),
                command=command,
            ))
        except KeyError as exc:
            raise ConfigError(f"predictor entry {i}: missing key {exc}")

    return RunConfig(
        seed=seed,
        n_blocks=n_blocks,
        data_dir=base / raw.get("data_dir", "data"),
        output_dir=base / raw.get("output_dir", "out"),
        datasets=tuple(datasets),
        predictors=tuple(predictors),
    )


def dataset_paths(config: RunConfig, spec: DatasetSpec) -> tuple[Path, Path]:
    stem = config.data_dir / spec.dataset_id
    return Path(f"{stem}.data.csv"), Path(f"{stem}.schema.csv")


# ---------------------------------------------------------------------------
# commands


def cmd_generate(config: RunConfig) -> int:
    config.data_dir.mkdir(parents=True, exist_ok=True)
    print(f"{'dataset':>8} {'phase':>9} {'budget(s)':>10} {'cat':>5} {'num':>5} "
          f"{'mvc':>5} {'time':>5} {'features':>9} {'rows':>8}")
    for spec in config.datasets:
        dataset = generate_drift_stream(spec.gen)
        data_path, schema_path = dataset_paths(config, spec)
        save_dataset(dataset, data_path, schema_path)
        g = spec.gen
        print(f"{spec.dataset_id:>8} {spec.phase:>9} {spec.budget_seconds:>10.1f} "
              f"{g.n_cat:>5} {g.n_num:>5} {g.n_mvc:>5} {g.n_time:>5} "
              f"{g.n_features:>9} {g.n_rows:>8}")
    return 0


def _make_factory(config: RunConfig, pred: PredictorSpec, workdir: Path):
    if pred.kind == "baseline":
        options = dict(pred.options)
        options.setdefault("seed", config.seed)

        def factory(ref: DatasetRef) -> BaselinePredictor:
            return BaselinePredictor(BaselineConfig(**options), name=pred.name)

        return factory

    def factory(ref: DatasetRef) -> SubprocessPredictor:
        return SubprocessPredictor(
            pred.command,
            workdir=workdir / pred.name / ref.dataset_id,
            name=pred.name,
        )

    return factory


def _evaluate_one(config: RunConfig, phase: PhaseConfig, pred: PredictorSpec,
                  out_dir: Path, workdir: Path) -> list[DatasetScore]:
    pred_dir = out_dir / pred.name
    pred_dir.mkdir(parents=True, exist_ok=True)

    def on_result(score: DatasetScore, trace) -> None:
        score_payload = {
            "dataset": score.dataset_id,
            "mean_auc": score.mean_auc,
            "disqualified": score.disqualified,
            "outcome": trace.outcome,
            "budget_seconds": trace.budget_seconds,
            "total_elapsed_seconds": score.total_elapsed_seconds,
            "blocks": [
                {"block": b.block, "auc": b.auc, "elapsed_seconds": b.elapsed_seconds}
                for b in score.block_scores
            ],
        }
        trace_payload = {
            "dataset": trace.dataset_id,
            "outcome": trace.outcome,
            "error": trace.error,
            "budget_seconds": trace.budget_seconds,
            "total_elapsed_seconds": trace.total_elapsed_seconds,
            "steps": [
                {
                    "step": s.step,
                    "trained_rows": s.trained_rows,
                    "block": s.block,
                    "auc": s.score.auc,
                    "elapsed_seconds": s.score.elapsed_seconds,
                    "single_class": s.single_class,
                }
                for s in trace.steps
            ],
        }
        for suffix, payload in (("score", score_payload), ("trace", trace_payload)):
            out = pred_dir / f"{score.dataset_id}.{suffix}.json"
            out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                           encoding="utf-8")

    scores = run_suite(phase, _make_factory(config, pred, workdir),
                       on_result=on_result)
    entry = SubmissionEntry(
        team=pred.name,
        bundle=pred.bundle,
        aucs={s.dataset_id: s.mean_auc for s in scores},
        duration_seconds=sum(s.total_elapsed_seconds for s in scores),
        disqualified={s.dataset_id: s.disqualified for s in scores},
    )
    write_submission(pred_dir / "submission.json", entry)
    return scores


def cmd_evaluate(config: RunConfig, phase_name: str, predictor_names: list[str],
                 out_dir: Path, workdir: Path, jobs: int) -> int:
    if phase_name not in PHASES:
        raise ConfigError(f"unknown phase {phase_name!r}; expected one of {PHASES}")
    specs = config.phase_datasets(phase_name)
    if not specs:
        raise ConfigError(f"no datasets configured for phase {phase_name!r}")
    refs = []
    for spec in specs:
        data_path, schema_path = dataset_paths(config, spec)
        if not data_path.exists() or not schema_path.exists():
            raise ConfigError(
                f"dataset {spec.dataset_id}: files missing under {config.data_dir} "
                f"(run the generate command first)"
            )
        refs.append(DatasetRef(spec.dataset_id, data_path, schema_path,
                               spec.budget_seconds))
    phase = PhaseConfig(phase=phase_name, datasets=tuple(refs),
                        n_blocks=config.n_blocks)
    predictors = [config.predictor(name) for name in predictor_names]

    out_dir.mkdir(parents=True, exist_ok=True)
    if jobs > 1 and len(predictors) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            all_scores = list(pool.map(
                lambda p: _evaluate_one(config, phase, p, out_dir, workdir),
                predictors,
            ))
    else:
        all_scores = [_evaluate_one(config, phase, p, out_dir, workdir)
                      for p in predictors]

    any_disqualified = any(s.disqualified for scores in all_scores for s in scores)
    for pred, scores in zip(predictors, all_scores):
        for s in scores:
            flag = " DISQUALIFIED" if s.disqualified else ""
            print(f"{pred.name:>16} {s.dataset_id:>8} auc={s.mean_auc:.4f} "
                  f"elapsed={s.total_elapsed_seconds:.2f}s{flag}")
    return 2 if any_disqualified else 0


def cmd_leaderboard(score_dirs: list[Path], merge: bool, out_dir: Path) -> int:
    entries = []
    for d in score_dirs:
        sub = Path(d) / "submission.json"
        if not sub.exists():
            raise ConfigError(f"{d}: no submission.json found")
        try:
            entries.append(read_submission(sub))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"{sub}: malformed submission file ({exc})")
    if not entries:
        raise ConfigError("no score directories given")

    datasets = sorted(entries[0].aucs)
    for e in entries:
        if sorted(e.aucs) != datasets:
            raise ConfigError(
                f"submission {e.team!r} scored datasets {sorted(e.aucs)}, "
                f"expected {datasets}"
            )

    by_bundle: dict[str, list[SubmissionEntry]] = {}
    for e in entries:
        by_bundle.setdefault(e.bundle, []).append(e)

    out_dir.mkdir(parents=True, exist_ok=True)
    for bundle in sorted(by_bundle):
        board = build_leaderboard(by_bundle[bundle], datasets)
        path = out_dir / f"leaderboard_{bundle}.csv"
        path.write_text(render_leaderboard_csv(board), encoding="utf-8")
        print(f"wrote {path}")
    if merge:
        board = merge_bundles(by_bundle, datasets)
        path = out_dir / "leaderboard_merged.csv"
        path.write_text(render_leaderboard_csv(board), encoding="utf-8")
        print(f"wrote {path}")
        if board.excluded_teams:
            print("excluded (submitted to multiple bundles): "
                  + ", ".join(board.excluded_teams))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driftbench",
        description="Lifelong evaluation harness for drifting tabular streams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="synthesize the configured datasets")
    gen.add_argument("--config", required=True)
    gen.add_argument("--seed", type=int, default=None, help="override the config seed")

    ev = sub.add_parser("evaluate", help="run predictors through a phase")
    ev.add_argument("--config", required=True)
    ev.add_argument("--phase", default="feedback", help="feedback or final")
    ev.add_argument("--predictor", action="append", required=True,
                    help="registered predictor name; repeatable")
    ev.add_argument("--out", default=None, help="output directory for score/trace files")
    ev.add_argument("--workdir", default=None,
                    help="scratch root for external predictors "
                         "(default: $DRIFTBENCH_WORKDIR or <out>/work)")
    ev.add_argument("--jobs", type=int, default=1,
                    help="predictors evaluated concurrently")
    ev.add_argument("--seed", type=int, default=None, help="override the config seed")

    lb = sub.add_parser("leaderboard", help="rank scored submissions")
    lb.add_argument("score_dirs", nargs="+",
                    help="directories holding submission.json files")
    lb.add_argument("--merge", action="store_true",
                    help="also emit the merged cross-bundle board")
    lb.add_argument("--out", default=".", help="directory for leaderboard files")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            config = load_config(args.config, seed_override=args.seed)
            return cmd_generate(config)
        if args.command == "evaluate":
            config = load_config(args.config, seed_override=args.seed)
            out_dir = Path(args.out) if args.out else config.output_dir
            workdir = Path(
                args.workdir
                or os.environ.get("DRIFTBENCH_WORKDIR")
                or out_dir / "work"
            )
            return cmd_evaluate(config, args.phase, args.predictor, out_dir,
                                workdir, args.jobs)
        if args.command == "leaderboard":
            return cmd_leaderboard([Path(d) for d in args.score_dirs],
                                   args.merge, Path(args.out))
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
