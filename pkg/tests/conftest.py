import logging
import time
from dataclasses import dataclass

import pytest

from scalar.config.config import config
from scalar.dataset import ingest, seed_dataset_path
from scalar.lexical.embeddings import VectorStore
from scalar.lexical.lexicon import Lexicon
from scalar.model.gbt import BoostedEnsemble, Hyperparameters, LabeledExample, fit
from scalar.model.model_io import save_model
from scalar.services.resources import TaggerResources, load_resources
from scalar.tagset import TAG_ORDER


@dataclass(frozen=True)
class SeedTraining:
    examples: list[LabeledExample]
    model: BoostedEnsemble
    seconds: float


@pytest.fixture(scope='session')
def resources() -> TaggerResources:
    return load_resources()


@pytest.fixture(scope='session')
def seed_training(resources) -> SeedTraining:
    """Default hyperparameters, fit on every word of the shipped seed dataset."""
    started = time.perf_counter()
    examples = ingest(seed_dataset_path(), resources)
    model = fit(examples, Hyperparameters(), classes=TAG_ORDER)
    return SeedTraining(examples=examples, model=model, seconds=time.perf_counter() - started)


@pytest.fixture(scope='session')
def seed_model(seed_training) -> BoostedEnsemble:
    return seed_training.model


@pytest.fixture
def seed_model_file(seed_model, tmp_path):
    path = tmp_path / 'model.json'
    save_model(seed_model, path)
    return path


@pytest.fixture
def small_lexicon() -> Lexicon:
    return Lexicon.build(
        dictionary=['stack', 'widget', 'line', 'lines', 'set', 'end', 'bit', 'name', 'employee', 'value'],
        user_words=['gimp'],
        user_abbreviations=['ptr', 'xml'],
        prepositions=['behind', 'at', 'under', 'for', 'to', 'in front of'],
        conjunctions=['and', 'for', 'nor', 'but', 'or', 'yet', 'so'],
        determiners=['the', 'each', 'all', 'which'],
        pronouns=['my', 'it', 'their'],
    )


@pytest.fixture
def toy_store() -> VectorStore:
    return VectorStore.from_mapping(
        {
            'behind': [0.0, 0.0, 1.0],
            'at': [0.1, 0.0, 0.9],
            'stack': [1.0, 0.1, 0.0],
            'widget': [0.9, 0.0, 0.1],
            'run': [0.0, 1.0, 0.0],
            'set': [0.2, 0.8, 0.0],
        }
    )


@pytest.fixture
def quiet_cli(monkeypatch):
    """Keep CLI runs from writing log files and drop their handlers afterwards."""
    monkeypatch.setattr(config.app, 'log_dir', '')
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)
    for handler in list(root.handlers):
        if getattr(handler, '_scalar_handler', False):
            root.removeHandler(handler)
            handler.close()
