"""Community-detection experiments: noisy observation, classification, sweeps.

A sweep runs one sampler over a list of budgets on a labeled graph, observes
noisy labels on the selected nodes, predicts every node's label from the
posterior mean, and emits one record per (budget, trial). All randomness is
derived from the config seed through numpy SeedSequence, so identical
configs replay to byte-identical records.
"""
from __future__ import annotations

import dataclasses
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .graphs import (Graph, Regularizer, builtin_dataset, laplacian,
                     load_edge_list, load_labels, normalized_laplacian)
from .linalg import DEFAULT_POLICY, NumericPolicy
from .sampling import (MeasurementMatrix, greedy_sample, initial_state,
                       extend_state, posterior_mean, random_sample)

CSV_COLUMNS = ("dataset", "regularizer", "sampler", "budget", "seed", "loss",
               "accuracy", "selected_nodes", "wall_time_s")


def derive_seed(*parts: int) -> int:
    """Deterministic child seed from integer parts (order-sensitive)."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def add_label_noise(labels_s: np.ndarray, noise_var: float,
                    seed: int) -> np.ndarray:
    """Observed labels: truth on S plus zero-mean Gaussian noise."""
    if not noise_var > 0:
        raise ValueError(f"noise_var must be positive, got {noise_var}")
    y = np.asarray(labels_s, dtype=float)
    rng = np.random.default_rng(seed)
    return y + rng.normal(0.0, np.sqrt(noise_var), size=y.shape)


def classify(x_hat: np.ndarray) -> np.ndarray:
    """Signs of the prediction; exact zeros count as +1."""
    x = np.asarray(x_hat, dtype=float)
    return np.where(x >= 0.0, 1, -1)


def accuracy(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Fraction of agreeing entries, over every node."""
    p = np.asarray(predicted)
    t = np.asarray(truth)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {t.shape}")
    return float(np.mean(p == t))


def overlap_fraction(s1, s2) -> float:
    """Percentage of shared nodes between two equal-size selections."""
    a, b = set(s1), set(s2)
    if not a or len(a) != len(b):
        raise ValueError("selections must be non-empty and equal-sized")
    return 100.0 * len(a & b) / len(a)


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a dataset, a regularizer, a sampler, and budgets.

    noise_var None selects the trace-reciprocal policy sigma^2 = 1/tr(Omega_0)
    at graph-load time; a float fixes it. labels_path is only consulted for
    file datasets (builtin datasets carry their labels).
    """

    dataset: str
    regularizer_kind: str
    budgets: tuple[int, ...]
    sampler: str = "greedy"
    trials: int = 10
    noise_var: float | None = None
    seed: int = 0
    labels_path: str | None = None

    def __post_init__(self):
        if self.regularizer_kind not in ("L", "Ln"):
            raise ValueError(
                f"regularizer_kind must be 'L' or 'Ln', got "
                f"{self.regularizer_kind!r}")
        if self.sampler not in ("greedy", "random"):
            raise ValueError(
                f"sampler must be 'greedy' or 'random', got {self.sampler!r}")
        budgets = tuple(int(b) for b in self.budgets)
        if not budgets:
            raise ValueError("budgets must be non-empty")
        if any(b < 1 for b in budgets):
            raise ValueError("budgets must all be >= 1")
        if list(budgets) != sorted(budgets):
            raise ValueError("budgets must be sorted ascending")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.noise_var is not None and not self.noise_var > 0:
            raise ValueError(
                f"noise_var must be positive, got {self.noise_var}")
        object.__setattr__(self, "budgets", budgets)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        raw = json.loads(text)
        if not isinstance(raw, dict):
            raise ValueError("config must be a JSON object")
        known = {"dataset", "regularizer", "budgets", "sampler", "trials",
                 "sigma2", "seed", "labels"}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        missing = {"dataset", "budgets"} - set(raw)
        if missing:
            raise ValueError(f"missing config keys: {sorted(missing)}")
        sigma2 = raw.get("sigma2", "trace")
        noise_var = None if sigma2 == "trace" else float(sigma2)
        return cls(dataset=raw["dataset"],
                   regularizer_kind=raw.get("regularizer", "L"),
                   budgets=tuple(raw["budgets"]),
                   sampler=raw.get("sampler", "greedy"),
                   trials=int(raw.get("trials", 10)),
                   noise_var=noise_var,
                   seed=int(raw.get("seed", 0)),
                   labels_path=raw.get("labels"))


@dataclass(frozen=True)
class RunRecord:
    """One sweep point: a selection and how well its predictor did."""

    dataset: str
    regularizer: str
    sampler: str
    budget: int
    seed: int
    loss: float
    accuracy: float
    selected: tuple[int, ...]
    wall_time_s: float


def load_dataset(config: ExperimentConfig) -> Graph:
    """Resolve the config's dataset to a labeled Graph."""
    name = config.dataset.strip().lower()
    if name in ("karate", "dolphin", "dolphins"):
        return builtin_dataset(name)
    with open(config.dataset, "r", encoding="utf-8") as fh:
        g = load_edge_list(fh.read())
    if config.labels_path is None:
        raise ValueError("file datasets need a labels path for sweeps")
    with open(config.labels_path, "r", encoding="utf-8") as fh:
        labels = load_labels(fh.read(), g.n)
    return Graph(n=g.n, edges=g.edges, node_labels=labels)


def build_regularizer(g: Graph, kind: str,
                      policy: NumericPolicy = DEFAULT_POLICY) -> Regularizer:
    if kind == "L":
        return laplacian(g, policy)
    if kind == "Ln":
        return normalized_laplacian(g, policy)
    raise ValueError(f"unknown regularizer kind {kind!r}")


def resolve_noise_var(config: ExperimentConfig, reg: Regularizer) -> float:
    if config.noise_var is not None:
        return config.noise_var
    return 1.0 / float(np.trace(reg.matrix))


def _predict_accuracy(reg: Regularizer, c: MeasurementMatrix,
                      selected: tuple[int, ...], noise_var: float,
                      labels: np.ndarray, noise_seed: int,
                      policy: NumericPolicy) -> float:
    state = initial_state(reg, c, noise_var, policy)
    for v in selected:
        state = extend_state(state, reg, c, v, policy)
    y = add_label_noise(labels[list(selected)], noise_var, noise_seed)
    x_hat = posterior_mean(state, c, y)
    return accuracy(classify(x_hat), labels)


def sweep(config: ExperimentConfig,
          policy: NumericPolicy = DEFAULT_POLICY,
          log=None) -> list[RunRecord]:
    """Run the configured sampler over all budgets; one record per trial.

    Noise is drawn fresh per budget from a seed derived from (seed, budget)
    and shared by every trial at that budget. Random-baseline selections use
    a per-(budget, trial) derived seed. Records are ordered by budget, then
    trial.
    """
    log = log if log is not None else sys.stderr
    g = load_dataset(config)
    if g.node_labels is None:
        raise ValueError("sweep requires ground-truth labels")
    reg = build_regularizer(g, config.regularizer_kind, policy)
    noise_var = resolve_noise_var(config, reg)
    c = MeasurementMatrix.identity(g.n)
    if max(config.budgets) > g.n:
        raise ValueError(
            f"max budget {max(config.budgets)} exceeds node count {g.n}")
    labels = g.node_labels
    records: list[RunRecord] = []
    if config.sampler == "random":
        print("note: random baseline observes noisy labels, like the greedy "
              "pipeline, for comparability", file=log)
    for budget in config.budgets:
        noise_seed = derive_seed(config.seed, budget)
        if config.sampler == "greedy":
            t0 = time.perf_counter()
            result = greedy_sample(reg, c, noise_var, budget, policy)
            acc = _predict_accuracy(reg, c, result.state.selected, noise_var,
                                    labels, noise_seed, policy)
            records.append(RunRecord(
                dataset=config.dataset, regularizer=config.regularizer_kind,
                sampler="greedy", budget=budget, seed=noise_seed,
                loss=result.state.objective, accuracy=acc,
                selected=result.state.selected,
                wall_time_s=time.perf_counter() - t0))
        else:
            for trial in range(config.trials):
                t0 = time.perf_counter()
                # trial+1: SeedSequence pads with zeros, so ([s,b,0]) would
                # collide with the noise seed ([s,b])
                sel_seed = derive_seed(config.seed, budget, trial + 1)
                selected = random_sample(g.n, budget, sel_seed)
                state = initial_state(reg, c, noise_var, policy)
                for v in selected:
                    state = extend_state(state, reg, c, v, policy)
                y = add_label_noise(labels[list(selected)], noise_var,
                                    noise_seed)
                x_hat = posterior_mean(state, c, y)
                acc = accuracy(classify(x_hat), labels)
                records.append(RunRecord(
                    dataset=config.dataset,
                    regularizer=config.regularizer_kind,
                    sampler="random", budget=budget, seed=sel_seed,
                    loss=state.objective, accuracy=acc, selected=selected,
                    wall_time_s=time.perf_counter() - t0))
    return records


def mean_by_budget(records: list[RunRecord]) -> dict[int, tuple[float, float]]:
    """budget -> (mean loss, mean accuracy) over the records at that budget."""
    by_budget: dict[int, list[RunRecord]] = {}
    for r in records:
        by_budget.setdefault(r.budget, []).append(r)
    return {b: (float(np.mean([r.loss for r in rs])),
                float(np.mean([r.accuracy for r in rs])))
            for b, rs in sorted(by_budget.items())}


def _record_row(r: RunRecord) -> list[str]:
    return [r.dataset, r.regularizer, r.sampler, str(r.budget), str(r.seed),
            repr(r.loss), repr(r.accuracy),
            ";".join(str(v) for v in r.selected), repr(r.wall_time_s)]


def records_to_csv(records: list[RunRecord]) -> str:
    """Render records in the delimited exchange format (full precision)."""
    import csv
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(_record_row(r))
    return buf.getvalue()


def records_to_jsonl(records: list[RunRecord]) -> str:
    """One JSON object per line, same fields as the CSV."""
    lines = []
    for r in records:
        d = dataclasses.asdict(r)
        d["selected_nodes"] = ";".join(str(v) for v in d.pop("selected"))
        lines.append(json.dumps(d, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")
