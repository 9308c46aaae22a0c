"""Incrementally grown gradient-boosted tree ensemble with subsampling.

The ensemble starts with ``initial_trees`` weak learners fitted on the
first labeled block and appends ``trees_per_block`` more each time a block
is revealed.  Each weak learner is a regression tree fitted to the negative
gradient of the logistic loss (the residual ``y - p``) on a capped,
policy-driven subsample of the retained history.  Three drift policies are
available:

* ``grow-full-history`` -- keep every block, subsample with recency bias;
* ``sliding-window``    -- retain only the last ``window_blocks`` blocks;
* ``adaptive-lr``       -- full history, learning rate decayed per block.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .data import FeatureSchema
from .encoding import (
    EncoderKind,
    FittedEncoder,
    extend_ordinal,
    fit_dataset_encoders,
    transform_rows,
)

DRIFT_POLICIES = ("grow-full-history", "sliding-window", "adaptive-lr")

_PRIOR_CLIP = 1e-6


def sigmoid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def log_loss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, 1e-12, 1.0 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def _prior_logit(y: np.ndarray) -> float:
    p = float(np.clip(np.mean(y), _PRIOR_CLIP, 1.0 - _PRIOR_CLIP))
    return float(np.log(p / (1.0 - p)))


@dataclass(frozen=True)
class BaselineConfig:
    initial_trees: int = 100          # weak learners fitted on block 0
    trees_per_block: int = 20         # weak learners appended per revealed block
    max_depth: int = 4
    learning_rate: float = 0.1
    subsample_cap: int = 100_000      # max rows used by any single fit call
    policy: str = "grow-full-history"
    window_blocks: int = 2
    decay: float = 0.8                # recency sampling weight and lr decay base
    seed: int = 0
    cat_encoder: EncoderKind = EncoderKind.ORDINAL
    mvc_encoder: EncoderKind | None = None
    target_smoothing: float = 10.0
    co_encode: bool = False           # extend encoder vocabulary with pending test rows

    def __post_init__(self) -> None:
        if self.initial_trees < 1 or self.trees_per_block < 1:
            raise ValueError("tree counts must be >= 1")
        if self.max_depth < 1:
            raise ValueError("tree depth must be >= 1")
        if not (0.0 < self.learning_rate <= 1.0):
            raise ValueError("learning rate must be in (0, 1]")
        if self.subsample_cap < 1:
            raise ValueError("subsample cap must be >= 1")
        if self.window_blocks < 1:
            raise ValueError("window must span >= 1 block")
        if self.policy not in DRIFT_POLICIES:
            raise ValueError(f"policy must be one of {DRIFT_POLICIES}, got {self.policy!r}")


class RegressionTree:
    """Axis-aligned regression tree fitted by exact greedy variance
    reduction on the residuals, with midpoint thresholds.

    Nodes live in parallel arrays; ``feature[i] < 0`` marks node ``i`` as a
    leaf carrying ``value[i]``.
    """

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)

    @classmethod
    def fit(cls, X: np.ndarray, residual: np.ndarray, max_depth: int) -> "RegressionTree":
        feature: list[int] = []
        threshold: list[float] = []
        left: list[int] = []
        right: list[int] = []
        value: list[float] = []

        def new_node() -> int:
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(0.0)
            return len(feature) - 1

        def grow(node: int, idx: np.ndarray, depth: int) -> None:
            r = residual[idx]
            value[node] = float(r.mean())
            if depth >= max_depth or idx.size < 2:
                return
            split = _best_split(X[idx], r)
            if split is None:
                return
            j, thr = split
            go_left = X[idx, j] <= thr
            node_l, node_r = new_node(), new_node()
            feature[node] = j
            threshold[node] = thr
            left[node] = node_l
            right[node] = node_r
            grow(node_l, idx[go_left], depth + 1)
            grow(node_r, idx[~go_left], depth + 1)

        root = new_node()
        grow(root, np.arange(X.shape[0]), 0)
        return cls(feature, threshold, left, right, value)

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int32)
        while True:
            feats = self.feature[node]
            active = np.nonzero(feats >= 0)[0]
            if active.size == 0:
                break
            cur = node[active]
            go_left = X[active, self.feature[cur]] <= self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])
        return self.value[node]

    @property
    def n_nodes(self) -> int:
        return len(self.feature)


def _best_split(X: np.ndarray, r: np.ndarray):
    """Best (feature, midpoint threshold) by variance reduction, or None.

    Maximizing sum-of-squared-child-sums over child sizes is equivalent to
    maximizing variance reduction for a fixed node, so prefix sums over the
    per-feature sort suffice.
    """
    n = r.shape[0]
    total = r.sum()
    best_gain = 0.0
    best = None
    base = total * total / n
    for j in range(X.shape[1]):
        v = X[:, j]
        order = np.argsort(v, kind="mergesort")
        vs = v[order]
        cum = np.cumsum(r[order])
        cuts = np.nonzero(vs[:-1] < vs[1:])[0]
        if cuts.size == 0:
            continue
        n_left = cuts + 1
        s_left = cum[cuts]
        s_right = total - s_left
        gain = s_left * s_left / n_left + s_right * s_right / (n - n_left) - base
        i = int(np.argmax(gain))
        if gain[i] > best_gain + 1e-12:
            best_gain = float(gain[i])
            best = (j, float(0.5 * (vs[cuts[i]] + vs[cuts[i] + 1])))
    return best


@dataclass(frozen=True, eq=False)
class TrainingPool:
    """Labeled rows retained across blocks, tagged with their block id."""

    blocks: tuple[tuple[int, np.ndarray, np.ndarray], ...]

    @classmethod
    def start(cls, X: np.ndarray, y: np.ndarray) -> "TrainingPool":
        return cls(((0, X, y),))

    def add(self, block_id: int, X: np.ndarray, y: np.ndarray) -> "TrainingPool":
        return TrainingPool(self.blocks + ((block_id, X, y),))

    def keep_last(self, k: int) -> "TrainingPool":
        return TrainingPool(self.blocks[-k:])

    @property
    def block_ids(self) -> tuple[int, ...]:
        return tuple(b for b, _, _ in self.blocks)

    @property
    def n_rows(self) -> int:
        return sum(X.shape[0] for _, X, _ in self.blocks)

    def stacked(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All rows with their block ids, oldest block first."""
        X = np.concatenate([X for _, X, _ in self.blocks])
        y = np.concatenate([y for _, _, y in self.blocks])
        ids = np.concatenate([
            np.full(Xb.shape[0], b, dtype=np.int64) for b, Xb, _ in self.blocks
        ])
        return X, y, ids


def select_training_pool(pool: TrainingPool, policy: str, cap: int, seed,
                         *, window_blocks: int = 2, decay: float = 0.8):
    """Pick at most ``cap`` rows from the pool for one fit call.

    Sliding-window restricts eligibility to the last ``window_blocks``
    blocks and samples uniformly; the full-history policies sample with
    probability proportional to ``decay ** age`` (age in blocks, newest is
    0), so recent rows are preferred.  Deterministic given the seed.
    """
    if policy not in DRIFT_POLICIES:
        raise ValueError(f"policy must be one of {DRIFT_POLICIES}, got {policy!r}")
    if policy == "sliding-window":
        pool = pool.keep_last(window_blocks)
    X, y, ids = pool.stacked()
    n = X.shape[0]
    if n <= cap:
        return X, y, ids
    rng = np.random.default_rng(seed)
    if policy == "sliding-window":
        pick = rng.choice(n, size=cap, replace=False)
    else:
        age = ids.max() - ids
        weights = decay ** age.astype(np.float64)
        pick = rng.choice(n, size=cap, replace=False, p=weights / weights.sum())
    pick.sort()  # keep chronological order inside the sample
    return X[pick], y[pick], ids[pick]


@dataclass(frozen=True, eq=False)
class BoostedEnsemble:
    """Immutable boosted ensemble; ``extend`` returns a grown copy and
    never touches existing trees.

    Scores are ``sigmoid(base_score + sum(rate_t * tree_t(x)))``.  Under the
    full-history policy the tree count after k revealed blocks is
    ``initial_trees + k * trees_per_block`` exactly.
    """

    base_score: float
    trees: tuple[RegressionTree, ...]
    tree_rates: tuple[float, ...]
    n_features: int
    revealed_blocks: int
    pool: TrainingPool
    loss_history: tuple[np.ndarray, ...] = ()

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def ensemble_margin(ensemble: BoostedEnsemble, X: np.ndarray,
                    n_trees: int | None = None) -> np.ndarray:
    """Raw additive score, optionally truncated to the first trees only."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != ensemble.n_features:
        raise ValueError(
            f"expected rows of width {ensemble.n_features}, got shape {X.shape}"
        )
    margin = np.full(X.shape[0], ensemble.base_score, dtype=np.float64)
    trees = ensemble.trees if n_trees is None else ensemble.trees[:n_trees]
    rates = ensemble.tree_rates if n_trees is None else ensemble.tree_rates[:n_trees]
    for tree, rate in zip(trees, rates):
        margin += rate * tree.predict(X)
    return margin


def predict_scores(ensemble: BoostedEnsemble, X: np.ndarray) -> np.ndarray:
    """Scores in (0, 1); deterministic and finite."""
    return sigmoid(ensemble_margin(ensemble, X))


def _boost(X: np.ndarray, y: np.ndarray, margin: np.ndarray, n_trees: int,
           rate: float, max_depth: int):
    trees: list[RegressionTree] = []
    losses = [log_loss(y, sigmoid(margin))]
    margin = margin.copy()
    for _ in range(n_trees):
        residual = y - sigmoid(margin)
        tree = RegressionTree.fit(X, residual, max_depth)
        trees.append(tree)
        margin += rate * tree.predict(X)
        losses.append(log_loss(y, sigmoid(margin)))
    return trees, np.asarray(losses)


def fit_initial(X: np.ndarray, y: np.ndarray, config: BaselineConfig) -> BoostedEnsemble:
    """Fit the starting ensemble on the first labeled block.

    A single-class block degenerates to the prior: the base score is set to
    its (clipped) log-odds and no trees are fitted.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    pool = TrainingPool.start(X, y)
    base = _prior_logit(y)
    if np.all(y == y[0]):
        return BoostedEnsemble(base, (), (), X.shape[1], 0, pool)
    Xs, ys, _ = select_training_pool(
        pool, config.policy, config.subsample_cap,
        np.random.SeedSequence((config.seed, 0)),
        window_blocks=config.window_blocks, decay=config.decay,
    )
    start = np.full(Xs.shape[0], base)
    trees, losses = _boost(Xs, ys, start, config.initial_trees,
                           config.learning_rate, config.max_depth)
    return BoostedEnsemble(
        base_score=base,
        trees=tuple(trees),
        tree_rates=(config.learning_rate,) * len(trees),
        n_features=X.shape[1],
        revealed_blocks=0,
        pool=pool,
        loss_history=(losses,),
    )


def extend(ensemble: BoostedEnsemble, X_new: np.ndarray, y_new: np.ndarray,
           config: BaselineConfig) -> BoostedEnsemble:
    """Grow the ensemble with the newly revealed block.

    Appends ``trees_per_block`` trees fitted on the policy's training pool;
    prior trees and (for a two-class pool) the base score are untouched.  A
    pool that has collapsed to a single class updates only the base score.
    """
    X_new = np.asarray(X_new, dtype=np.float64)
    y_new = np.asarray(y_new, dtype=np.float64)
    if X_new.shape[1] != ensemble.n_features:
        raise ValueError(
            f"expected rows of width {ensemble.n_features}, got {X_new.shape[1]}"
        )
    k = ensemble.revealed_blocks + 1
    pool = ensemble.pool.add(k, X_new, y_new)
    if config.policy == "sliding-window":
        pool = pool.keep_last(config.window_blocks)

    _, y_all, _ = pool.stacked()
    if np.all(y_all == y_all[0]):
        return replace(ensemble, base_score=_prior_logit(y_all),
                       revealed_blocks=k, pool=pool)

    Xs, ys, _ = select_training_pool(
        pool, config.policy, config.subsample_cap,
        np.random.SeedSequence((config.seed, k)),
        window_blocks=config.window_blocks, decay=config.decay,
    )
    rate = config.learning_rate
    if config.policy == "adaptive-lr":
        rate = config.learning_rate * config.decay ** k
    start = ensemble_margin(ensemble, Xs)
    trees, losses = _boost(Xs, ys, start, config.trees_per_block, rate,
                           config.max_depth)
    return replace(
        ensemble,
        trees=ensemble.trees + tuple(trees),
        tree_rates=ensemble.tree_rates + (rate,) * len(trees),
        revealed_blocks=k,
        pool=pool,
        loss_history=ensemble.loss_history + (losses,),
    )


class BaselinePredictor:
    """Adapter wrapping the boosted ensemble for the lifelong harness.

    Buffers nothing beyond what the drift policy retains: encoders grow
    their vocabulary with each revealed block (ordinal only; count and
    target-mean stay frozen on the first block so earlier trees keep their
    feature semantics), and the ensemble is extended per policy.
    """

    def __init__(self, config: BaselineConfig | None = None, name: str = "baseline",
                 freeze_after_initial: bool = False):
        self.config = config if config is not None else BaselineConfig()
        self.name = name
        self.freeze_after_initial = freeze_after_initial
        self.schema: FeatureSchema | None = None
        self.encoders: dict[str, FittedEncoder] = {}
        self.ensemble: BoostedEnsemble | None = None

    def learn(self, rows: Sequence[tuple[str, ...]], labels, schema: FeatureSchema,
              remaining_budget_seconds: float) -> None:
        if self.ensemble is None:
            self.schema = schema
            self.encoders = fit_dataset_encoders(
                schema, rows, labels,
                cat_kind=self.config.cat_encoder,
                mvc_kind=self.config.mvc_encoder,
                smoothing=self.config.target_smoothing,
            )
            X = transform_rows(schema, rows, self.encoders)
            self.ensemble = fit_initial(X, np.asarray(labels, dtype=np.float64),
                                        self.config)
            return
        if self.freeze_after_initial:
            return
        self._grow_vocabulary(rows)
        X = transform_rows(self.schema, rows, self.encoders)
        self.ensemble = extend(self.ensemble, X, np.asarray(labels, dtype=np.float64),
                               self.config)

    def predict(self, rows: Sequence[tuple[str, ...]]) -> np.ndarray:
        if self.ensemble is None:
            raise RuntimeError("predict before any learn call")
        if self.config.co_encode:
            self._grow_vocabulary(rows)
        X = transform_rows(self.schema, rows, self.encoders)
        return predict_scores(self.ensemble, X)

    def _grow_vocabulary(self, rows: Sequence[tuple[str, ...]]) -> None:
        for j, (name, _kind) in enumerate(self.schema.columns):
            enc = self.encoders.get(name)
            if enc is not None and enc.kind is EncoderKind.ORDINAL:
                self.encoders[name] = extend_ordinal(enc, [row[j] for row in rows])
