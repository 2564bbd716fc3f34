import logging

from scalar.cache.result_cache import ResultCache
from scalar.errors import CacheUnavailableError

logger = logging.getLogger(__name__)


def get_cache(path: str | None, model_version: str) -> ResultCache:
    """
    Factory function to get the result cache, preloaded from disk when possible.
    """
    cache = ResultCache(path, model_version)
    try:
        cache.load()
    except CacheUnavailableError as e:
        # An unreadable file should not keep the tagger from serving
        logger.error(f'{e}; starting with an empty cache')
    return cache
