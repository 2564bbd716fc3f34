import logging
import time
from dataclasses import dataclass

from scalar.cache.result_cache import CacheEntry, ResultCache
from scalar.errors import CacheUnavailableError, ModelNotLoadedError
from scalar.model.gbt import BoostedEnsemble
from scalar.model.model_io import model_version
from scalar.services.pipeline import tag_identifier
from scalar.services.resources import TaggerResources
from scalar.tagset import IdentifierContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TagResponse:
    identifier: str
    context: str
    words: list[dict]
    first_seen: int
    last_seen: int
    count: int
    cached: bool

    @classmethod
    def from_entry(cls, entry: CacheEntry, cached: bool) -> 'TagResponse':
        identifier, context = entry.key
        return cls(
            identifier=identifier,
            context=context.value,
            words=[word.to_dict() for word in entry.annotation],
            first_seen=entry.first_seen,
            last_seen=entry.last_seen,
            count=entry.count,
            cached=cached,
        )

    def to_dict(self) -> dict:
        return {
            'identifier': self.identifier,
            'context': self.context,
            'words': self.words,
            'first_seen': self.first_seen,
            'last_seen': self.last_seen,
            'count': self.count,
            'cached': self.cached,
        }


class TaggingService:
    """Tag identifiers through the result cache."""

    def __init__(self, model: BoostedEnsemble | None, resources: TaggerResources, cache: ResultCache):
        self.model = model
        self.resources = resources
        self.cache = cache
        self.model_version = model_version(model) if model is not None else None
        self.started_at = time.monotonic()

    def tag(self, identifier: str, context: str) -> TagResponse:
        """Tag one identifier; raises ValueError subclasses for bad input and ModelNotLoadedError."""
        kind = IdentifierContext.parse(context)
        if self.model is None:
            raise ModelNotLoadedError('No trained model is loaded')

        key = (identifier, kind)
        entry = self.cache.lookup(key)
        if entry is not None:
            return TagResponse.from_entry(entry, cached=True)

        annotation = tag_identifier(identifier, kind, self.model, self.resources)
        # A concurrent request may have stored the same key while we were tagging
        entry, cached = self.cache.record(key, annotation)
        return TagResponse.from_entry(entry, cached=cached)

    def health(self) -> dict:
        return {
            'status': 'ok' if self.model is not None else 'no-model',
            'model_version': self.model_version,
            'cache_size': len(self.cache),
            'uptime_seconds': round(time.monotonic() - self.started_at, 3),
        }

    def flush_cache(self):
        try:
            self.cache.flush()
        except CacheUnavailableError as e:
            logger.error(f'Cache flush failed: {e}')
