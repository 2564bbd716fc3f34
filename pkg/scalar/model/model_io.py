import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from scalar.errors import ModelFormatError
from scalar.model.gbt import LEAF, BoostedEnsemble, Hyperparameters, RegressionTree

logger = logging.getLogger(__name__)

MODEL_FORMAT = 'scalar-gbt'
MODEL_FORMAT_VERSION = 1


def _tree_to_nodes(tree: RegressionTree) -> list[list]:
    return [
        [int(tree.feature[i]), float(tree.threshold[i]), int(tree.left[i]), int(tree.right[i]), float(tree.value[i])]
        for i in range(tree.node_count)
    ]


def _nodes_to_tree(nodes: list[list], n_features: int) -> RegressionTree:
    if not nodes:
        raise ModelFormatError('Tree has no nodes')
    for node in nodes:
        if len(node) != 5:
            raise ModelFormatError(f'Malformed tree node {node!r}')
        feature, _, left, right, _ = node
        if feature != LEAF and not (0 <= feature < n_features and 0 < left < len(nodes) and 0 < right < len(nodes)):
            raise ModelFormatError(f'Tree node {node!r} points outside the tree or feature range')
    return RegressionTree(
        feature=np.array([n[0] for n in nodes], dtype=np.int64),
        threshold=np.array([n[1] for n in nodes], dtype=np.float64),
        left=np.array([n[2] for n in nodes], dtype=np.int64),
        right=np.array([n[3] for n in nodes], dtype=np.int64),
        value=np.array([n[4] for n in nodes], dtype=np.float64),
    )


def dumps_model(model: BoostedEnsemble) -> str:
    """Serialize to a versioned JSON document; floats are written with round-trip precision."""
    hp = model.hyperparameters
    document = {
        'format': MODEL_FORMAT,
        'version': MODEL_FORMAT_VERSION,
        'classes': list(model.classes),
        'n_features': model.n_features,
        'hyperparameters': {
            'n_rounds': hp.n_rounds,
            'learning_rate': hp.learning_rate,
            'max_depth': hp.max_depth,
            'min_samples_leaf': hp.min_samples_leaf,
            'seed': hp.seed,
        },
        'base_scores': [float(s) for s in model.base_scores],
        'training_loss': [float(loss) for loss in model.training_loss],
        # trees[round][class] -> [feature, threshold, left, right, value] per node
        'trees': [[_tree_to_nodes(tree) for tree in round_trees] for round_trees in model.trees],
    }
    return json.dumps(document, separators=(',', ':'), allow_nan=False) + '\n'


def loads_model(text: str) -> BoostedEnsemble:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f'Model is not valid JSON: {e}') from e
    if not isinstance(document, dict) or document.get('format') != MODEL_FORMAT:
        raise ModelFormatError('Not a boosted-ensemble model document')
    if document.get('version') != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f'Unsupported model format version {document.get("version")!r}')

    try:
        classes = tuple(str(c) for c in document['classes'])
        n_features = int(document['n_features'])
        hp = Hyperparameters(**document['hyperparameters'])
        base_scores = np.array(document['base_scores'], dtype=np.float64)
        trees = [[_nodes_to_tree(nodes, n_features) for nodes in round_trees] for round_trees in document['trees']]
        training_loss = [float(loss) for loss in document.get('training_loss', [])]
    except (KeyError, TypeError, ValueError) as e:
        raise ModelFormatError(f'Malformed model document: {e}') from e

    if len(base_scores) != len(classes) or any(len(r) != len(classes) for r in trees):
        raise ModelFormatError('Tree or base-score count does not match the class count')
    if len(trees) != hp.n_rounds:
        raise ModelFormatError(f'Model declares {hp.n_rounds} rounds but stores {len(trees)}')

    return BoostedEnsemble(
        classes=classes,
        trees=trees,
        base_scores=base_scores,
        hyperparameters=hp,
        n_features=n_features,
        training_loss=training_loss,
    )


def save_model(model: BoostedEnsemble, path: str | Path) -> str:
    """Write the model atomically and return its version hash."""
    text = dumps_model(model)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    version = text_version(text)
    logger.info(f'Saved model {version} to {path}')
    return version


def load_model(path: str | Path) -> BoostedEnsemble:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ModelFormatError(f'Cannot read model file {path}: {e}') from e
    model = loads_model(text)
    logger.info(f'Loaded model {text_version(text)} from {path}')
    return model


def text_version(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def model_version(model: BoostedEnsemble) -> str:
    """Short content hash of the serialized model."""
    return text_version(dumps_model(model))
