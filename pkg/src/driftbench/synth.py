"""Synthetic drifting tabular streams.

Rows are labeled by a latent linear score over the numeric features plus
per-category effects.  Drift rotates the latent parameters toward an
orthogonal direction: gradually block by block, or all at once at the
midpoint block.  Categorical values follow a power-law frequency
distribution, which is what large real-world id-like columns look like.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import ChronoDataset, FeatureKind, FeatureSchema, plan_blocks

DRIFT_PROFILES = ("none", "gradual", "abrupt")

#: Feature-type mix (cat, num, mvc, time) and time budget in seconds of the
#: five public challenge streams; used to shape desk-scale analogs.
DATASET_SHAPES = {
    "A": (51, 23, 6, 2, 3600.0),
    "B": (17, 7, 1, 0, 600.0),
    "C": (44, 20, 9, 6, 1200.0),
    "D": (17, 54, 1, 4, 600.0),
    "E": (25, 6, 1, 2, 1800.0),
}


@dataclass(frozen=True)
class DriftGenSpec:
    """Recipe for one synthetic stream; equal specs generate equal bytes."""

    n_rows: int
    n_cat: int
    n_num: int
    n_mvc: int = 0
    n_time: int = 1
    n_blocks: int = 10
    drift: str = "none"
    drift_magnitude: float = 0.0
    cat_cardinality: int = 30
    power_exponent: float = 1.3
    seed: int = 0
    label_sharpness: float = 3.0
    mvc_max_tokens: int = 3
    dataset_id: str = "synth"

    def __post_init__(self) -> None:
        if self.drift not in DRIFT_PROFILES:
            raise ValueError(f"drift profile must be one of {DRIFT_PROFILES}, got {self.drift!r}")
        if self.drift_magnitude < 0:
            raise ValueError("drift magnitude must be >= 0")
        if self.cat_cardinality < 1:
            raise ValueError("categorical cardinality must be positive")
        if self.power_exponent <= 0:
            raise ValueError("power-law exponent must be > 0")
        if min(self.n_rows, self.n_blocks) < 1 or self.n_blocks > self.n_rows:
            raise ValueError("need 1 <= n_blocks <= n_rows")
        if self.n_cat + self.n_num + self.n_mvc + self.n_time < 1:
            raise ValueError("spec declares no feature columns")

    @property
    def n_features(self) -> int:
        return self.n_cat + self.n_num + self.n_mvc + self.n_time


def power_law_probs(cardinality: int, exponent: float) -> np.ndarray:
    """Sampling probabilities proportional to rank**-exponent, rank 1-based."""
    ranks = np.arange(1, cardinality + 1, dtype=np.float64)
    w = ranks ** (-exponent)
    return w / w.sum()


def build_schema(spec: DriftGenSpec) -> FeatureSchema:
    columns: list[tuple[str, FeatureKind]] = []
    columns += [(f"cat_{i:02d}", FeatureKind.CATEGORICAL) for i in range(spec.n_cat)]
    columns += [(f"num_{i:02d}", FeatureKind.NUMERICAL) for i in range(spec.n_num)]
    columns += [(f"mvc_{i:02d}", FeatureKind.MULTI_CATEGORICAL) for i in range(spec.n_mvc)]
    columns += [(f"time_{i:02d}", FeatureKind.TIME) for i in range(spec.n_time)]
    return FeatureSchema(tuple(columns), label="label")


def _rotated(theta_a: np.ndarray, theta_b: np.ndarray, angle: np.ndarray) -> np.ndarray:
    # angle has one entry per row; parameters get shape (n_rows, dim)
    return np.cos(angle)[:, None] * theta_a[None, :] + np.sin(angle)[:, None] * theta_b[None, :]


def generate_drift_stream(spec: DriftGenSpec) -> ChronoDataset:
    """Generate one stream per ``spec``; deterministic given the seed."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n_rows
    plan = plan_blocks(n, spec.n_blocks) if spec.n_blocks >= 2 else None

    block_of_row = np.zeros(n, dtype=np.int64)
    if plan is not None:
        for b, (lo, hi) in enumerate(plan.ranges):
            block_of_row[lo:hi] = b

    # Drift position t in [0, 1] per row.
    if spec.drift == "none" or spec.drift_magnitude == 0.0 or spec.n_blocks < 2:
        t = np.zeros(n)
    elif spec.drift == "gradual":
        t = block_of_row / max(spec.n_blocks - 1, 1)
    else:  # abrupt: switch at the midpoint block
        t = (block_of_row >= spec.n_blocks // 2).astype(np.float64)
    angle = t * spec.drift_magnitude

    # Latent parameters: a base direction and an orthogonal drift target,
    # drawn for the numeric weights and for every categorical effect table.
    w_a = rng.standard_normal(spec.n_num)
    w_b = rng.standard_normal(spec.n_num)
    cat_probs = power_law_probs(spec.cat_cardinality, spec.power_exponent)
    cat_eff = [
        (rng.standard_normal(spec.cat_cardinality), rng.standard_normal(spec.cat_cardinality))
        for _ in range(spec.n_cat)
    ]
    mvc_eff = [
        (rng.standard_normal(spec.cat_cardinality), rng.standard_normal(spec.cat_cardinality))
        for _ in range(spec.n_mvc)
    ]

    score = np.zeros(n)

    cat_codes = []
    for j in range(spec.n_cat):
        codes = rng.choice(spec.cat_cardinality, size=n, p=cat_probs)
        cat_codes.append(codes)
        e_a, e_b = cat_eff[j]
        eff = _rotated(e_a, e_b, angle)
        score += eff[np.arange(n), codes]

    x_num = rng.standard_normal((n, spec.n_num))
    if spec.n_num:
        w = _rotated(w_a, w_b, angle)
        score += np.einsum("ij,ij->i", x_num, w)

    mvc_cells = []
    for j in range(spec.n_mvc):
        counts = rng.integers(1, spec.mvc_max_tokens + 1, size=n)
        token_draws = rng.choice(spec.cat_cardinality, size=(n, spec.mvc_max_tokens), p=cat_probs)
        e_a, e_b = mvc_eff[j]
        eff = _rotated(e_a, e_b, angle)
        cells = []
        cell_effect = np.zeros(n)
        for i in range(n):
            toks = token_draws[i, : counts[i]]
            seen: list[int] = []
            for tok in toks.tolist():
                if tok not in seen:
                    seen.append(tok)
            cells.append("|".join(f"v{tok + 1}" for tok in seen))
            cell_effect[i] = eff[i, seen].mean()
        mvc_cells.append(cells)
        score += cell_effect

    time_cols = []
    for _ in range(spec.n_time):
        ticks = np.cumsum(rng.integers(0, 3, size=n))
        time_cols.append(1_600_000_000 + ticks)

    std = score.std()
    if std > 0:
        score = score / std
    p = 1.0 / (1.0 + np.exp(-spec.label_sharpness * score))
    labels = (rng.random(n) < p).astype(np.int64)

    rows = []
    for i in range(n):
        cells: list[str] = []
        for j in range(spec.n_cat):
            cells.append(f"v{cat_codes[j][i] + 1}")
        for j in range(spec.n_num):
            cells.append(f"{x_num[i, j]:.6f}")
        for j in range(spec.n_mvc):
            cells.append(mvc_cells[j][i])
        for j in range(spec.n_time):
            cells.append(str(int(time_cols[j][i])))
        rows.append(tuple(cells))

    return ChronoDataset(
        schema=build_schema(spec),
        rows=tuple(rows),
        labels=labels,
        provenance=f"{spec.dataset_id}(seed={spec.seed},drift={spec.drift})",
    )


def desk_spec(shape: str, n_rows: int, *, n_blocks: int = 10, drift: str = "none",
              drift_magnitude: float = 0.0, seed: int = 0,
              cat_cardinality: int = 30, power_exponent: float = 1.3) -> DriftGenSpec:
    """A desk-scale spec with the feature-type mix of one of the five
    public challenge streams (see :data:`DATASET_SHAPES`)."""
    if shape not in DATASET_SHAPES:
        raise ValueError(f"unknown dataset shape {shape!r}; pick one of {sorted(DATASET_SHAPES)}")
    n_cat, n_num, n_mvc, n_time, _budget = DATASET_SHAPES[shape]
    return DriftGenSpec(
        n_rows=n_rows, n_cat=n_cat, n_num=n_num, n_mvc=n_mvc, n_time=n_time,
        n_blocks=n_blocks, drift=drift, drift_magnitude=drift_magnitude,
        cat_cardinality=cat_cardinality, power_exponent=power_exponent,
        seed=seed, dataset_id=shape,
    )
