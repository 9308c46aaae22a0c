"""Lifelong predict-then-reveal evaluation loop.

A dataset cut into N blocks is evaluated in N-1 steps: at step k the
predictor learns from the newly revealed labeled block k-1 (its own job to
buffer history) and then scores the unlabeled block k.  Wall-clock spent
inside the predictor's ``learn`` and ``predict`` calls counts against the
dataset's time budget; harness file I/O does not.  Exceeding the budget, or
crashing, zeroes the dataset's AUC.

External predictors speak a file protocol: per step the harness writes a
train file (with labels), a test file (without) and the schema file, then
invokes ``<command> --train F --test F --schema F --pred-out F
--remaining-budget S --step K --workdir D`` and reads one decimal score per
test row from the predictions file.  The work directory persists across
steps so the program can keep state.
"""

from __future__ import annotations

import math
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol, Sequence, runtime_checkable

import numpy as np

from .data import BlockPlan, ChronoDataset, FeatureSchema, load_dataset, split_blocks, write_rows, write_schema
from .metrics import BlockScore, DatasetScore, UndefinedAUCError, aggregate_dataset, auc

OUTCOME_COMPLETED = "completed"
OUTCOME_TIMED_OUT = "timed-out"
OUTCOME_PREDICTOR_ERROR = "predictor-error"


class PredictorError(RuntimeError):
    """The predictor crashed or returned malformed predictions."""


class PredictorTimeout(RuntimeError):
    """The predictor exceeded its remaining budget and was stopped."""

    def __init__(self, message: str, elapsed_seconds: float):
        super().__init__(message)
        self.elapsed_seconds = elapsed_seconds


@runtime_checkable
class PredictorAdapter(Protocol):
    """Behavioral contract every predictor implements.

    ``learn`` receives only the newly revealed labeled block; the adapter
    holds all cross-step state.  ``predict`` returns exactly one finite
    real per input row.  Adapters may accumulate time the harness should
    not bill (their own file staging) in an ``unbilled_seconds`` attribute.
    """

    name: str

    def learn(self, rows: Sequence[tuple[str, ...]], labels, schema: FeatureSchema,
              remaining_budget_seconds: float) -> None: ...

    def predict(self, rows: Sequence[tuple[str, ...]]) -> Sequence[float]: ...


class ConstantPredictor:
    """Scores every row with the same constant; the do-nothing reference."""

    def __init__(self, value: float = 0.5, name: str = "constant"):
        self.value = value
        self.name = name

    def learn(self, rows, labels, schema, remaining_budget_seconds) -> None:
        pass

    def predict(self, rows):
        return np.full(len(rows), self.value)


@dataclass(frozen=True)
class StepRecord:
    """One predict-then-reveal step: trained on blocks [0, block), scored
    on ``block``.  ``single_class`` flags an unscorable all-one-label test
    block, which receives the neutral AUC 0.5."""

    step: int
    trained_rows: int
    block: int
    score: BlockScore
    single_class: bool = False


@dataclass(frozen=True)
class EvaluationTrace:
    dataset_id: str
    steps: tuple[StepRecord, ...]
    total_elapsed_seconds: float
    outcome: str
    budget_seconds: float
    error: str = ""

    def to_score(self) -> DatasetScore:
        return aggregate_dataset(
            (s.score for s in self.steps),
            self.budget_seconds,
            dataset_id=self.dataset_id,
            failed=self.outcome != OUTCOME_COMPLETED,
            total_elapsed_seconds=self.total_elapsed_seconds,
        )


@dataclass(frozen=True)
class DatasetRef:
    dataset_id: str
    data_path: Path
    schema_path: Path
    budget_seconds: float


@dataclass(frozen=True)
class PhaseConfig:
    """One evaluation phase: which datasets, their budgets, how many blocks.

    The daily submission cap is informational; this harness runs whatever
    it is asked to run.
    """

    phase: str
    datasets: tuple[DatasetRef, ...]
    n_blocks: int = 10
    daily_submission_cap: int = 2

    def __post_init__(self) -> None:
        for ref in self.datasets:
            if ref.budget_seconds <= 0:
                raise ValueError(f"{ref.dataset_id}: budget must be positive")


class _BudgetClock:
    """Accumulates billable predictor time against a budget."""

    def __init__(self, budget_seconds: float):
        self.budget = budget_seconds
        self.consumed = 0.0

    @property
    def remaining(self) -> float:
        return self.budget - self.consumed

    def charge(self, predictor, fn, *args) -> object:
        before_unbilled = float(getattr(predictor, "unbilled_seconds", 0.0))
        t0 = time.perf_counter()
        try:
            result = fn(*args)
        except PredictorTimeout as exc:
            self.consumed += exc.elapsed_seconds
            raise
        wall = time.perf_counter() - t0
        after_unbilled = float(getattr(predictor, "unbilled_seconds", 0.0))
        self.consumed += max(0.0, wall - (after_unbilled - before_unbilled))
        return result


def run_lifelong(dataset: ChronoDataset, plan: BlockPlan, predictor: PredictorAdapter,
                 budget_seconds: float, *, dataset_id: str | None = None) -> EvaluationTrace:
    """Run the predict-then-reveal loop for one dataset and predictor.

    Steps 1..N-1: reveal block k-1 to ``learn``, score ``predict`` on block
    k.  Aborts on budget overrun (timed-out) or any predictor failure
    (predictor-error); either way the dataset is later scored 0.
    """
    if plan.n_rows != len(dataset):
        raise ValueError(f"plan covers {plan.n_rows} rows, dataset has {len(dataset)}")
    if budget_seconds <= 0:
        raise ValueError("budget must be positive")
    ds_id = dataset_id if dataset_id is not None else dataset.provenance
    clock = _BudgetClock(budget_seconds)
    steps: list[StepRecord] = []
    outcome = OUTCOME_COMPLETED
    error = ""

    for k in range(1, plan.n_blocks):
        reveal_lo, reveal_hi = plan.ranges[k - 1]
        test_lo, test_hi = plan.ranges[k]
        try:
            clock.charge(
                predictor, predictor.learn,
                dataset.rows[reveal_lo:reveal_hi],
                dataset.labels[reveal_lo:reveal_hi],
                dataset.schema,
                clock.remaining,
            )
            if clock.remaining < 0:
                outcome = OUTCOME_TIMED_OUT
                break
            scores = clock.charge(predictor, predictor.predict,
                                  dataset.rows[test_lo:test_hi])
            _check_predictions(scores, test_hi - test_lo)
        except PredictorTimeout as exc:
            outcome = OUTCOME_TIMED_OUT
            error = str(exc)
            break
        except Exception as exc:  # noqa: BLE001 -- predictor code is untrusted
            outcome = OUTCOME_PREDICTOR_ERROR
            error = f"{type(exc).__name__}: {exc}"
            break
        if clock.remaining < 0:
            outcome = OUTCOME_TIMED_OUT
            break

        block_labels = dataset.labels[test_lo:test_hi]
        try:
            block_auc = auc(block_labels, np.asarray(scores, dtype=np.float64))
            single_class = False
        except UndefinedAUCError:
            block_auc = 0.5
            single_class = True
        steps.append(StepRecord(
            step=k,
            trained_rows=reveal_hi,
            block=k,
            score=BlockScore(block=k, auc=block_auc, elapsed_seconds=clock.consumed),
            single_class=single_class,
        ))

    # Per-step elapsed is cumulative; convert to per-block increments.
    records: list[StepRecord] = []
    prev = 0.0
    for rec in steps:
        records.append(StepRecord(
            step=rec.step, trained_rows=rec.trained_rows, block=rec.block,
            score=BlockScore(rec.score.block, rec.score.auc,
                             rec.score.elapsed_seconds - prev),
            single_class=rec.single_class,
        ))
        prev = rec.score.elapsed_seconds

    return EvaluationTrace(
        dataset_id=ds_id,
        steps=tuple(records),
        total_elapsed_seconds=clock.consumed,
        outcome=outcome,
        budget_seconds=budget_seconds,
        error=error,
    )


def _check_predictions(scores, expected: int) -> None:
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != expected:
        raise PredictorError(
            f"predictor returned {arr.shape[0] if arr.ndim == 1 else 'non-flat'} "
            f"scores for {expected} rows"
        )
    if not np.all(np.isfinite(arr)):
        raise PredictorError("predictor returned a non-finite score")


def run_suite(phase: PhaseConfig,
              make_predictor: Callable[[DatasetRef], PredictorAdapter],
              *, on_result: Callable[[DatasetScore, EvaluationTrace], None] | None = None
              ) -> list[DatasetScore]:
    """Evaluate a fresh predictor on every dataset of a phase, in order.

    Failures are isolated: a dataset that cannot be loaded or evaluated is
    scored 0 / disqualified and the suite continues.
    """
    results: list[DatasetScore] = []
    for ref in phase.datasets:
        try:
            dataset = load_dataset(ref.data_path, ref.schema_path,
                                   provenance=ref.dataset_id)
            plan = split_blocks(dataset, phase.n_blocks)
            predictor = make_predictor(ref)
            trace = run_lifelong(dataset, plan, predictor, ref.budget_seconds,
                                 dataset_id=ref.dataset_id)
        except Exception as exc:  # noqa: BLE001 -- error isolation contract
            trace = EvaluationTrace(
                dataset_id=ref.dataset_id, steps=(), total_elapsed_seconds=0.0,
                outcome=OUTCOME_PREDICTOR_ERROR, budget_seconds=ref.budget_seconds,
                error=f"{type(exc).__name__}: {exc}",
            )
        score = trace.to_score()
        results.append(score)
        if on_result is not None:
            on_result(score, trace)
    return results


# ---------------------------------------------------------------------------
# subprocess predictors


class SubprocessPredictor:
    """Adapter that drives an external program through the file protocol.

    One invocation per step carries the newly revealed train block and the
    pending test block.  The process is killed the moment the remaining
    budget expires.  File staging time accumulates in ``unbilled_seconds``
    and is not billed against the budget.
    """

    def __init__(self, command: Sequence[str] | str | Path, workdir: str | Path,
                 name: str = "external"):
        if isinstance(command, (str, Path)):
            command = [str(command)]
        self.command = [str(c) for c in command]
        self.workdir = Path(workdir)
        self.workdir.mkdir(parents=True, exist_ok=True)
        self.name = name
        self.unbilled_seconds = 0.0
        self._step = 0
        self._pending: tuple | None = None
        self._remaining = math.inf

    def learn(self, rows, labels, schema, remaining_budget_seconds: float) -> None:
        self._pending = (rows, labels, schema)
        self._remaining = remaining_budget_seconds

    def predict(self, rows) -> np.ndarray:
        if self._pending is None:
            raise PredictorError("protocol violation: predict before learn")
        train_rows, train_labels, schema = self._pending
        self._pending = None
        self._step += 1

        t0 = time.perf_counter()
        train_path = self.workdir / f"train_{self._step:03d}.csv"
        test_path = self.workdir / f"test_{self._step:03d}.csv"
        pred_path = self.workdir / f"pred_{self._step:03d}.txt"
        schema_path = self.workdir / "schema.csv"
        write_rows(train_path, schema, train_rows, train_labels)
        write_rows(test_path, schema, rows, None)
        if self._step == 1:
            write_schema(schema, schema_path)
        self.unbilled_seconds += time.perf_counter() - t0

        argv = self.command + [
            "--train", str(train_path),
            "--test", str(test_path),
            "--schema", str(schema_path),
            "--pred-out", str(pred_path),
            "--remaining-budget", f"{self._remaining:.3f}",
            "--step", str(self._step),
            "--workdir", str(self.workdir),
        ]
        run_start = time.perf_counter()
        proc = subprocess.Popen(argv, stdout=subprocess.DEVNULL,
                                stderr=subprocess.PIPE)
        try:
            _, stderr = proc.communicate(timeout=max(self._remaining, 0.0))
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.communicate()
            elapsed = time.perf_counter() - run_start
            raise PredictorTimeout(
                f"step {self._step}: killed after {elapsed:.2f}s "
                f"(remaining budget was {self._remaining:.2f}s)",
                elapsed_seconds=elapsed,
            ) from None
        elapsed = time.perf_counter() - run_start
        if proc.returncode != 0:
            tail = stderr.decode("utf-8", "replace").strip().splitlines()[-3:]
            raise PredictorError(
                f"step {self._step}: exit code {proc.returncode}"
                + (f"; stderr: {' | '.join(tail)}" if tail else "")
            )

        t1 = time.perf_counter()
        scores = self._read_predictions(pred_path, expected=len(rows))
        self.unbilled_seconds += time.perf_counter() - t1
        return scores

    def _read_predictions(self, path: Path, expected: int) -> np.ndarray:
        if not path.exists():
            raise PredictorError(f"step {self._step}: predictions file not written")
        lines = [ln for ln in path.read_text(encoding="utf-8").split("\n") if ln]
        if len(lines) != expected:
            raise PredictorError(
                f"step {self._step}: {len(lines)} predictions for {expected} test rows"
            )
        try:
            scores = np.array([float(ln) for ln in lines], dtype=np.float64)
        except ValueError as exc:
            raise PredictorError(f"step {self._step}: unparseable prediction: {exc}")
        if not np.all(np.isfinite(scores)):
            raise PredictorError(f"step {self._step}: non-finite prediction")
        return scores
