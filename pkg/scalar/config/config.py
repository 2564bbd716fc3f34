import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv(override=False)

ENV_PREFIX = 'SCALAR_'


def _env(name: str, default: str) -> str:
    return os.getenv(f'{ENV_PREFIX}{name}', default)


def _env_int(name: str, default: int) -> int:
    raw = _env(name, str(default))
    try:
        return int(raw)
    except ValueError as e:
        raise ValueError(f'{ENV_PREFIX}{name} must be an integer, got {raw!r}') from e


def _env_float(name: str, default: float) -> float:
    raw = _env(name, str(default))
    try:
        return float(raw)
    except ValueError as e:
        raise ValueError(f'{ENV_PREFIX}{name} must be a number, got {raw!r}') from e


def _env_path(name: str) -> str | None:
    # Unset or empty falls back to the packaged data file
    return _env(name, '') or None


@dataclass
class ServerConfig:
    host: str
    port: int
    cache_file: str
    cache_flush_interval_seconds: int


@dataclass
class ResourceConfig:
    dictionary: str | None = None
    user_words: str | None = None
    abbreviations: str | None = None
    embeddings: str | None = None
    tag_lexicon: str | None = None
    namespace_prefixes: str | None = None
    type_initials: str | None = None


@dataclass
class ModelConfig:
    model_path: str
    rounds: int
    learning_rate: float
    max_depth: int
    min_samples_leaf: int
    seed: int
    folds: int
    train_fraction: float


@dataclass
class AppConfig:
    log_level: str
    log_dir: str


class Config:
    def __init__(self):
        self.server = self._load_server_config()
        self.resources = self._load_resource_config()
        self.model = self._load_model_config()
        self.app = self._load_app_config()

    @staticmethod
    def _load_server_config() -> ServerConfig:
        return ServerConfig(
            host=_env('HOST', '0.0.0.0'),
            port=_env_int('PORT', 8080),
            cache_file=_env('CACHE_FILE', 'scalar_cache.json'),
            cache_flush_interval_seconds=_env_int('CACHE_FLUSH_INTERVAL_SECONDS', 60),
        )

    @staticmethod
    def _load_resource_config() -> ResourceConfig:
        return ResourceConfig(
            dictionary=_env_path('DICTIONARY'),
            user_words=_env_path('USER_WORDS'),
            abbreviations=_env_path('ABBREVIATIONS'),
            embeddings=_env_path('EMBEDDINGS'),
            tag_lexicon=_env_path('TAG_LEXICON'),
            namespace_prefixes=_env_path('NAMESPACE_PREFIXES'),
            type_initials=_env_path('TYPE_INITIALS'),
        )

    @staticmethod
    def _load_model_config() -> ModelConfig:
        return ModelConfig(
            model_path=_env('MODEL', 'scalar_model.json'),
            # Boosting defaults follow the usual GradientBoostingClassifier defaults
            rounds=_env_int('ROUNDS', 100),
            learning_rate=_env_float('LEARNING_RATE', 0.1),
            max_depth=_env_int('MAX_DEPTH', 3),
            min_samples_leaf=_env_int('MIN_SAMPLES_LEAF', 1),
            seed=_env_int('SEED', 42),
            # Evaluation protocol
            folds=_env_int('FOLDS', 10),
            train_fraction=_env_float('TRAIN_FRACTION', 0.7),
        )

    @staticmethod
    def _load_app_config() -> AppConfig:
        return AppConfig(
            log_level=_env('LOG_LEVEL', 'INFO'),
            log_dir=_env('LOG_DIR', 'logs'),
        )


config = Config()
