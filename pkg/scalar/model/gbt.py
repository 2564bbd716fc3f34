"""Multi-class gradient boosting over regression trees (multinomial deviance).

Each round fits one least-squares regression tree per class to the residual
``one_hot(label) - probability``; leaves take a single Newton step and are shrunk
by the learning rate. A round whose update would raise the training log-loss is
halved until it does not, so the recorded loss never goes up.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from scalar.errors import ContractViolationError, DegenerateTrainingError, StratificationError
from scalar.model.metrics import evaluate

logger = logging.getLogger(__name__)

LEAF = -1
# Floor for the prior of a class absent from the training data, keeps base scores finite
MIN_PRIOR = 1e-12
MIN_GAIN = 1e-12
MAX_HALVINGS = 20


@dataclass(frozen=True)
class Hyperparameters:
    n_rounds: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_samples_leaf: int = 1
    seed: int = 42

    def __post_init__(self):
        if self.n_rounds < 0:
            raise ContractViolationError(f'n_rounds must be non-negative, got {self.n_rounds}')
        if not 0 < self.learning_rate <= 1:
            raise ContractViolationError(f'learning_rate must be in (0, 1], got {self.learning_rate}')
        if self.max_depth < 1:
            raise ContractViolationError(f'max_depth must be positive, got {self.max_depth}')
        if self.min_samples_leaf < 1:
            raise ContractViolationError(f'min_samples_leaf must be positive, got {self.min_samples_leaf}')


@dataclass(frozen=True)
class LabeledExample:
    features: np.ndarray
    label: str
    # The identifier's words and this word's 0-based position in them, when known
    words: tuple[str, ...] = ()
    position: int = 0


@dataclass(frozen=True)
class RegressionTree:
    # Parallel node arrays; node 0 is the root, leaves have feature == LEAF
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def node_count(self) -> int:
        return int(self.feature.shape[0])

    def depth(self) -> int:
        def walk(node: int) -> int:
            if self.feature[node] == LEAF:
                return 0
            return 1 + max(walk(int(self.left[node])), walk(int(self.right[node])))

        return walk(0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        nodes = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[nodes] != LEAF
        while active.any():
            rows = np.nonzero(active)[0]
            current = nodes[rows]
            goes_left = X[rows, self.feature[current]] <= self.threshold[current]
            nodes[rows] = np.where(goes_left, self.left[current], self.right[current])
            active = self.feature[nodes] != LEAF
        return self.value[nodes]

    def scaled(self, factor: float) -> 'RegressionTree':
        value = np.where(self.feature == LEAF, self.value * factor, 0.0)
        return RegressionTree(self.feature, self.threshold, self.left, self.right, value)


@dataclass
class BoostedEnsemble:
    classes: tuple[str, ...]
    trees: list[list[RegressionTree]]
    base_scores: np.ndarray
    hyperparameters: Hyperparameters
    n_features: int
    training_loss: list[float] = field(default_factory=list)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        scores = np.tile(self.base_scores, (X.shape[0], 1))
        for round_trees in self.trees:
            for k, tree in enumerate(round_trees):
                scores[:, k] += tree.predict(X)
        return scores


@dataclass(frozen=True)
class Prediction:
    tag: str
    probabilities: tuple[float, ...]


@dataclass(frozen=True)
class FoldResult:
    fold: int
    train_size: int
    test_size: int
    accuracy: float
    balanced_accuracy: float


@dataclass(frozen=True)
class CrossValidationReport:
    folds: list[FoldResult]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean([f.accuracy for f in self.folds]))

    @property
    def mean_balanced_accuracy(self) -> float:
        return float(np.mean([f.balanced_accuracy for f in self.folds]))

    def to_dict(self) -> dict:
        return {
            'folds': [f.__dict__ for f in self.folds],
            'mean_accuracy': self.mean_accuracy,
            'mean_balanced_accuracy': self.mean_balanced_accuracy,
        }


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - np.max(scores, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def log_loss(scores: np.ndarray, one_hot: np.ndarray) -> float:
    """Mean multinomial deviance of raw scores against one-hot targets."""
    top = np.max(scores, axis=1, keepdims=True)
    log_norm = top[:, 0] + np.log(np.sum(np.exp(scores - top), axis=1))
    return float(np.mean(log_norm - np.sum(scores * one_hot, axis=1)))


def _as_matrix(examples: Sequence[LabeledExample]) -> tuple[np.ndarray, list[str]]:
    X = np.array([np.asarray(e.features, dtype=np.float64) for e in examples], dtype=np.float64)
    return X, [e.label for e in examples]


def _best_split(X: np.ndarray, residual: np.ndarray, min_samples_leaf: int) -> tuple[int, float] | None:
    """Least-squares split maximising variance reduction.

    Ties go to the lowest feature index, then the lowest threshold.
    """
    n = X.shape[0]
    if n < 2 * min_samples_leaf or n < 2:
        return None

    order = np.argsort(X, axis=0, kind='stable')
    xs = np.take_along_axis(X, order, axis=0)
    rs = residual[order]

    total = float(residual.sum())
    left_sum = np.cumsum(rs, axis=0)[:-1]
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left
    gain = left_sum**2 / n_left + (total - left_sum) ** 2 / n_right - total**2 / n

    valid = (xs[1:] > xs[:-1]) & (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    gain = np.where(valid, gain, -np.inf).T

    best = int(np.argmax(gain))
    feature, position = divmod(best, n - 1)
    if not gain[feature, position] > MIN_GAIN:
        return None

    low, high = xs[position, feature], xs[position + 1, feature]
    threshold = (low + high) / 2.0
    if not low <= threshold < high:
        threshold = low
    return feature, float(threshold)


class _TreeBuilder:
    def __init__(self, X: np.ndarray, residual: np.ndarray, hessian: np.ndarray, hp: Hyperparameters, n_classes: int):
        self.X = X
        self.residual = residual
        self.hessian = hessian
        self.hp = hp
        self.newton_scale = (n_classes - 1) / n_classes
        self.nodes: list[list[float]] = []

    def build(self) -> RegressionTree:
        self._grow(np.arange(self.X.shape[0]), depth=0)
        table = np.array(self.nodes, dtype=np.float64).reshape(-1, 5)
        return RegressionTree(
            feature=table[:, 0].astype(np.int64),
            threshold=table[:, 1],
            left=table[:, 2].astype(np.int64),
            right=table[:, 3].astype(np.int64),
            value=table[:, 4],
        )

    def _leaf_value(self, rows: np.ndarray) -> float:
        numerator = float(self.residual[rows].sum()) * self.newton_scale
        denominator = float(self.hessian[rows].sum())
        if abs(denominator) < 1e-150:
            return 0.0
        return self.hp.learning_rate * numerator / denominator

    def _grow(self, rows: np.ndarray, depth: int) -> int:
        node = len(self.nodes)
        self.nodes.append([LEAF, 0.0, LEAF, LEAF, 0.0])

        split = None
        if depth < self.hp.max_depth:
            split = _best_split(self.X[rows], self.residual[rows], self.hp.min_samples_leaf)
        if split is None:
            self.nodes[node][4] = self._leaf_value(rows)
            return node

        feature, threshold = split
        goes_left = self.X[rows, feature] <= threshold
        left = self._grow(rows[goes_left], depth + 1)
        right = self._grow(rows[~goes_left], depth + 1)
        self.nodes[node] = [feature, threshold, left, right, 0.0]
        return node


def fit(train: Sequence[LabeledExample], hp: Hyperparameters, classes: Sequence[str] | None = None) -> BoostedEnsemble:
    """Train a boosted ensemble; ``classes`` fixes the class order (defaults to sorted labels)."""
    if not train:
        raise DegenerateTrainingError('Training set is empty')

    X, labels = _as_matrix(train)
    distinct = sorted(set(labels))
    if len(distinct) < 2:
        raise DegenerateTrainingError(f'Training set has a single class {distinct}')

    classes = tuple(classes) if classes is not None else tuple(distinct)
    unknown = set(distinct) - set(classes)
    if unknown:
        raise ContractViolationError(f'Labels {sorted(unknown)} are not among the model classes')

    n, n_classes = len(labels), len(classes)
    column = {c: k for k, c in enumerate(classes)}
    one_hot = np.zeros((n, n_classes), dtype=np.float64)
    one_hot[np.arange(n), [column[label] for label in labels]] = 1.0

    prior = one_hot.sum(axis=0) / n
    base_scores = np.log(np.maximum(prior, MIN_PRIOR))
    scores = np.tile(base_scores, (n, 1))
    loss = log_loss(scores, one_hot)

    trees: list[list[RegressionTree]] = []
    history: list[float] = []
    for round_no in range(hp.n_rounds):
        probabilities = softmax(scores)
        round_trees = []
        for k in range(n_classes):
            p = probabilities[:, k]
            builder = _TreeBuilder(X, one_hot[:, k] - p, p * (1.0 - p), hp, n_classes)
            round_trees.append(builder.build())

        candidate, new_loss = _apply_round(scores, round_trees, X, one_hot)
        halvings = 0
        while new_loss > loss and halvings < MAX_HALVINGS:
            halvings += 1
            shrunk = [tree.scaled(0.5**halvings) for tree in round_trees]
            candidate, new_loss = _apply_round(scores, shrunk, X, one_hot)
        if new_loss > loss:
            shrunk = [tree.scaled(0.0) for tree in round_trees]
            candidate, new_loss = _apply_round(scores, shrunk, X, one_hot)
        if halvings:
            round_trees = shrunk
            logger.debug(f'Round {round_no + 1}: update halved {halvings} times to keep log-loss from rising')

        trees.append(round_trees)
        scores, loss = candidate, new_loss
        history.append(loss)

    logger.info(f'Trained {hp.n_rounds} rounds x {n_classes} classes on {n} rows, final log-loss {loss:.6f}')
    return BoostedEnsemble(
        classes=classes,
        trees=trees,
        base_scores=base_scores,
        hyperparameters=hp,
        n_features=X.shape[1],
        training_loss=history,
    )


def _apply_round(
    scores: np.ndarray, round_trees: list[RegressionTree], X: np.ndarray, one_hot: np.ndarray
) -> tuple[np.ndarray, float]:
    candidate = scores.copy()
    for k, tree in enumerate(round_trees):
        candidate[:, k] += tree.predict(X)
    return candidate, log_loss(candidate, one_hot)


def predict_proba(model: BoostedEnsemble, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ContractViolationError(f'Expected {model.n_features} features, got {X.shape[1]}')
    return softmax(model.decision_function(X))


def predict(model: BoostedEnsemble, features) -> Prediction:
    """Most probable class for one feature vector; ties go to the earlier class in ``model.classes``."""
    row = features.as_array() if hasattr(features, 'as_array') else np.asarray(features, dtype=np.float64)
    if row.ndim != 1:
        raise ContractViolationError('predict takes a single feature vector')
    probabilities = predict_proba(model, row[None, :])[0]
    return Prediction(tag=model.classes[int(np.argmax(probabilities))], probabilities=tuple(float(p) for p in probabilities))


def _group_by_label(labels: Sequence[str]) -> dict[str, list[int]]:
    groups: dict[str, list[int]] = defaultdict(list)
    for i, label in enumerate(labels):
        groups[label].append(i)
    return groups


def stratified_split(
    data: Sequence[LabeledExample], train_fraction: float, seed: int
) -> tuple[list[LabeledExample], list[LabeledExample]]:
    """Split each class separately: a seeded shuffle, then the first ``round(fraction * size)`` go to train."""
    if not 0 < train_fraction < 1:
        raise ContractViolationError(f'train_fraction must be in (0, 1), got {train_fraction}')

    groups = _group_by_label([e.label for e in data])
    rng = np.random.default_rng(seed)
    train_rows: list[int] = []
    for label in sorted(groups):
        rows = groups[label]
        if len(rows) < 2:
            raise StratificationError(f'Class {label!r} has {len(rows)} example(s), at least 2 are needed')
        permutation = rng.permutation(len(rows))
        n_train = min(max(math.floor(train_fraction * len(rows) + 0.5), 1), len(rows) - 1)
        train_rows.extend(rows[int(p)] for p in permutation[:n_train])

    in_train = set(train_rows)
    train = [e for i, e in enumerate(data) if i in in_train]
    test = [e for i, e in enumerate(data) if i not in in_train]
    return train, test


def stratified_folds(labels: Sequence[str], k: int, seed: int) -> list[list[int]]:
    """Assign row indices to ``k`` folds.

    Classes are visited in sorted order; within a class the rows are shuffled with the
    seeded generator and dealt round-robin, continuing from where the previous class
    stopped so fold sizes stay within one of each other.
    """
    if k < 2:
        raise ContractViolationError(f'Fold count must be at least 2, got {k}')
    if k > len(labels):
        raise ContractViolationError(f'Fold count {k} exceeds dataset size {len(labels)}')

    groups = _group_by_label(labels)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for label in sorted(groups):
        rows = groups[label]
        if len(rows) < k:
            logger.warning(f'Class {label!r} has {len(rows)} examples, fewer than {k} folds; some folds will lack it')
        for position, p in enumerate(rng.permutation(len(rows))):
            folds[(cursor + position) % k].append(rows[int(p)])
        cursor += len(rows)
    return [sorted(fold) for fold in folds]


def cross_validate(
    data: Sequence[LabeledExample],
    hp: Hyperparameters,
    k: int,
    classes: Sequence[str] | None = None,
) -> CrossValidationReport:
    """Stratified k-fold cross-validation; each fold is scored by a model fit on the other k-1."""
    labels = [e.label for e in data]
    folds = stratified_folds(labels, k, hp.seed)
    metric_labels = tuple(classes) if classes is not None else tuple(sorted(set(labels)))

    results = []
    for number, test_rows in enumerate(folds, start=1):
        held_out = set(test_rows)
        train = [e for i, e in enumerate(data) if i not in held_out]
        test = [data[i] for i in test_rows]
        model = fit(train, hp, classes=classes)
        X_test, gold = _as_matrix(test)
        probabilities = predict_proba(model, X_test)
        predicted = [model.classes[int(i)] for i in np.argmax(probabilities, axis=1)]
        report = evaluate(list(zip(gold, predicted)), elapsed=0.0, labels=metric_labels)
        results.append(
            FoldResult(
                fold=number,
                train_size=len(train),
                test_size=len(test),
                accuracy=report.accuracy,
                balanced_accuracy=report.balanced_accuracy,
            )
        )
        logger.info(f'Fold {number}/{k}: accuracy {report.accuracy:.4f}, balanced {report.balanced_accuracy:.4f}')
    return CrossValidationReport(folds=results)
