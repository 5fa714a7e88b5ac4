"""Per-instance best-format prediction via binary-relevance logistic scorers.

Label sets are the formats the reasoning model solved an instance with;
training minimizes a binary cross-entropy summed over format labels and
averaged over instances, with one independent linear scorer per format
on top of a shared hashed text featurizer.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy import sparse

from .core import Instance, MetricError
from .execution import ReasoningOutcome
from .formats import CANONICAL_FORMATS, TabularFormat, infer_sql_type

logger = logging.getLogger(__name__)

DEFAULT_HASH_DIM = 2 ** 15
N_DENSE_STATS = 4
EPS = 1e-12

_WORD = re.compile(r"\w+")


class CollectionError(ValueError):
    pass


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class FeaturizerConfig:
    hash_dim: int = DEFAULT_HASH_DIM

    @property
    def dim(self) -> int:
        return self.hash_dim + N_DENSE_STATS


@dataclass(frozen=True)
class LabelRecord:
    instance_id: str
    features: sparse.csr_matrix  # 1 x dim
    labels: tuple[int, ...]  # canonical format order

    def __post_init__(self):
        if len(self.labels) != len(CANONICAL_FORMATS):
            raise ValueError("label vector length must match candidate formats")
        if any(v not in (0, 1) for v in self.labels):
            raise ValueError("labels must be binary")

    @property
    def label_count(self) -> int:
        return sum(self.labels)


@dataclass
class TrainConfig:
    learning_rate: float = 0.5
    epochs: int = 300
    batch_size: int = 32
    seed: int = 0
    max_label_threshold: int = 2
    l2: float = 1e-4

    def __post_init__(self):
        if min(self.learning_rate, self.epochs, self.batch_size, self.l2 + 1) <= 0:
            raise ValueError("training hyperparameters must be positive")
        if not 0 < self.max_label_threshold < len(CANONICAL_FORMATS):
            raise ValueError("max_label_threshold must lie in [1, |formats|)")


def _hash_token(token: str, dim: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dim


def table_stats(instance: Instance) -> tuple[float, float, float, float]:
    """Row count, column count, int-typed column fraction, question word count."""
    table = instance.table
    int_cols = sum(
        1 for i in range(table.n_cols)
        if infer_sql_type(table.column(i)) == "int")
    words = _WORD.findall(instance.question)
    return (float(table.n_rows), float(table.n_cols),
            int_cols / table.n_cols, float(len(words)))


def featurize(instance: Instance,
              config: FeaturizerConfig = FeaturizerConfig()) -> sparse.csr_matrix:
    """Hashed unigram+bigram bag over question and headers, plus table stats."""
    tokens = [w.lower() for w in _WORD.findall(instance.question)]
    for header in instance.table.header:
        tokens.extend(w.lower() for w in _WORD.findall(header))
    grams = list(tokens)
    grams.extend(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))

    counts: dict[int, float] = {}
    for gram in grams:
        idx = _hash_token(gram, config.hash_dim)
        counts[idx] = counts.get(idx, 0.0) + 1.0
    for offset, value in enumerate(table_stats(instance)):
        counts[config.hash_dim + offset] = value

    indices = sorted(counts)
    data = np.array([counts[i] for i in indices], dtype=np.float64)
    return sparse.csr_matrix(
        (data, (np.zeros(len(indices), dtype=np.int64), np.array(indices, dtype=np.int64))),
        shape=(1, config.dim))


def collect_labels(instances: Sequence[Instance],
                   outcomes: Mapping[TabularFormat, Mapping[str, ReasoningOutcome]],
                   config: FeaturizerConfig = FeaturizerConfig()) -> list[LabelRecord]:
    """Label bit r is 1 iff format r's outcome exactly matches gold."""
    records = []
    for inst in instances:
        bits = []
        for fmt in CANONICAL_FORMATS:
            per_format = outcomes.get(fmt)
            if per_format is None or inst.id not in per_format:
                raise CollectionError(
                    f"missing outcome for instance {inst.id!r}, format {fmt.value}")
            outcome = per_format[inst.id]
            bits.append(int(outcome.ok and outcome.answer in inst.gold_answers))
        records.append(LabelRecord(instance_id=inst.id,
                                   features=featurize(inst, config),
                                   labels=tuple(bits)))
    return records


def filter_training(records: Sequence[LabelRecord],
                    k: Optional[int] = None) -> list[LabelRecord]:
    """Drop records with no correct format or too many correct formats.

    Default keeps label counts in [1, floor(|F|/2)]; an explicit threshold
    k keeps [1, k] instead (the ablation sweep).
    """
    cap = len(CANONICAL_FORMATS) // 2 if k is None else k
    return [r for r in records if 1 <= r.label_count <= cap]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def bce_loss(predictions: np.ndarray, labels: np.ndarray) -> float:
    """Binary cross-entropy summed over format labels, averaged over instances."""
    predictions = np.asarray(predictions, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if predictions.shape != labels.shape:
        raise ValueError(
            f"shape mismatch: {predictions.shape} vs {labels.shape}")
    p = np.clip(predictions, EPS, 1.0 - EPS)
    per_cell = labels * np.log(p) + (1.0 - labels) * np.log(1.0 - p)
    return float(-per_cell.sum() / predictions.shape[0])


def loss_and_grad(weights: np.ndarray, bias: np.ndarray, x: sparse.csr_matrix,
                  y: np.ndarray, l2: float) -> tuple[float, np.ndarray, np.ndarray]:
    """Objective (bce + l2 on weights) and its analytic gradient."""
    n = x.shape[0]
    z = x @ weights + bias
    p = _sigmoid(z)
    loss = bce_loss(p, y) + l2 * float((weights ** 2).sum())
    residual = (p - y) / n
    grad_w = np.asarray(x.T @ residual) + 2.0 * l2 * weights
    grad_b = residual.sum(axis=0)
    return loss, grad_w, grad_b


@dataclass
class FormatClassifier:
    weights: np.ndarray  # dim x |F|
    bias: np.ndarray  # |F|
    featurizer: FeaturizerConfig
    seed: int
    formats: tuple[TabularFormat, ...] = field(default=CANONICAL_FORMATS)

    def scores(self, instance: Instance) -> np.ndarray:
        """Per-format sigmoid scores in (0, 1)."""
        x = featurize(instance, self.featurizer)
        return _sigmoid(np.asarray(x @ self.weights).ravel() + self.bias)

    def probabilities(self, instance: Instance) -> np.ndarray:
        """Scores normalized to sum to one (reported; argmax-preserving)."""
        s = self.scores(instance)
        return s / s.sum()

    def save(self, path: str | Path) -> None:
        meta = {
            "version": 1,
            "formats": [f.value for f in self.formats],
            "hash_dim": self.featurizer.hash_dim,
            "seed": self.seed,
        }
        # Write through a file object so np.savez cannot append ".npz".
        with open(path, "wb") as fh:
            np.savez(fh, weights=self.weights, bias=self.bias,
                     meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8))

    @classmethod
    def load(cls, path: str | Path) -> "FormatClassifier":
        with np.load(path) as data:
            meta = json.loads(bytes(data["meta"].tobytes()).decode())
            if meta.get("version") != 1:
                raise ValueError(f"unsupported model version: {meta.get('version')}")
            return cls(
                weights=data["weights"], bias=data["bias"],
                featurizer=FeaturizerConfig(hash_dim=meta["hash_dim"]),
                seed=meta["seed"],
                formats=tuple(TabularFormat(f) for f in meta["formats"]))


def train(records: Sequence[LabelRecord], config: TrainConfig) -> FormatClassifier:
    """Mini-batch gradient descent on the per-label logistic scorers.

    Deterministic given the seed: shuffle order is driven by a fixed RNG.
    """
    if not records:
        raise TrainingError("no training records")
    x = sparse.vstack([r.features for r in records]).tocsr()
    y = np.array([r.labels for r in records], dtype=np.float64)
    n_formats = len(CANONICAL_FORMATS)
    if y.sum() == 0:
        raise TrainingError("all labels are zero; filter the records first")
    never_positive = [CANONICAL_FORMATS[j].value for j in range(n_formats)
                      if y[:, j].sum() == 0]
    if never_positive:
        logger.warning("formats never labeled positive: %s", never_positive)

    dim = x.shape[1]
    weights = np.zeros((dim, n_formats))
    bias = np.zeros(n_formats)
    rng = np.random.default_rng(config.seed)
    n = x.shape[0]
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            _, grad_w, grad_b = loss_and_grad(
                weights, bias, x[idx], y[idx], config.l2)
            weights -= config.learning_rate * grad_w
            bias -= config.learning_rate * grad_b
    return FormatClassifier(weights=weights, bias=bias,
                            featurizer=FeaturizerConfig(hash_dim=dim - N_DENSE_STATS),
                            seed=config.seed)


def predict_format(classifier: FormatClassifier, instance: Instance) -> TabularFormat:
    """Normalized-score argmax; ties break toward canonical format order."""
    probs = classifier.probabilities(instance)
    return classifier.formats[int(np.argmax(probs))]


def classification_accuracy(classifier: FormatClassifier,
                            records: Sequence[LabelRecord],
                            instances: Sequence[Instance]) -> float:
    """Fraction of records whose predicted format sits inside the label set."""
    if not records:
        raise MetricError("classification accuracy over empty records is undefined")
    by_id = {inst.id: inst for inst in instances}
    hits = 0
    for record in records:
        inst = by_id.get(record.instance_id)
        if inst is None:
            raise CollectionError(f"no instance for record {record.instance_id!r}")
        fmt = predict_format(classifier, inst)
        hits += record.labels[fmt.canonical_index]
    return hits / len(records)
