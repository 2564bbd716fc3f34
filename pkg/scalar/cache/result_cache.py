import json
import logging
import os
import tempfile
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path

from scalar.errors import CacheUnavailableError, ContractViolationError
from scalar.services.pipeline import AnnotatedWord
from scalar.tagset import IdentifierContext

logger = logging.getLogger(__name__)

CACHE_FORMAT_VERSION = 1

CacheKey = tuple[str, IdentifierContext]


def key_string(key: CacheKey) -> str:
    identifier, context = key
    return f'{IdentifierContext(context).value}:{identifier}'


def parse_key(text: str) -> CacheKey:
    context, _, identifier = text.partition(':')
    return identifier, IdentifierContext(context)


@dataclass(frozen=True)
class CacheEntry:
    key: CacheKey
    annotation: tuple[AnnotatedWord, ...]
    first_seen: int
    last_seen: int
    count: int

    def to_dict(self) -> dict:
        return {
            'annotation': [word.to_dict() for word in self.annotation],
            'first_seen': self.first_seen,
            'last_seen': self.last_seen,
            'count': self.count,
        }

    @classmethod
    def from_dict(cls, key: CacheKey, data: dict) -> 'CacheEntry':
        return cls(
            key=key,
            annotation=tuple(AnnotatedWord.from_dict(w) for w in data['annotation']),
            first_seen=int(data['first_seen']),
            last_seen=int(data['last_seen']),
            count=int(data['count']),
        )


def _now() -> int:
    return int(time.time())


class ResultCache:
    """Memoized annotations with first/last-seen UNIX timestamps and encounter counts.

    All reads and updates go through one lock; ``flush`` writes a temp file and
    renames it over the cache file.
    """

    def __init__(self, path: str | Path | None, model_version: str):
        self.path = Path(path) if path else None
        self.model_version = model_version
        self._entries: dict[CacheKey, CacheEntry] = {}
        self._lock = threading.Lock()
        self._flush_lock = threading.Lock()
        self._dirty = False

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def load(self):
        """Read the cache file; a file written for another model version is discarded."""
        if self.path is None or not self.path.exists():
            return
        try:
            document = json.loads(self.path.read_text(encoding='utf-8'))
        except (OSError, json.JSONDecodeError) as e:
            raise CacheUnavailableError(f'Cannot read cache file {self.path}: {e}') from e

        if not isinstance(document, dict):
            raise CacheUnavailableError(f'Cache file {self.path} does not hold a JSON object')
        if document.get('model_version') != self.model_version:
            logger.warning(
                f'Cache {self.path} was written for model {document.get("model_version")}, '
                f'current model is {self.model_version}; starting empty'
            )
            return

        entries = {}
        try:
            for text, data in document.get('entries', {}).items():
                key = parse_key(text)
                entries[key] = CacheEntry.from_dict(key, data)
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            raise CacheUnavailableError(f'Cache file {self.path} has a malformed entry: {e!r}') from e
        with self._lock:
            self._entries = entries
            self._dirty = False
        logger.info(f'Loaded {len(entries)} cached identifiers from {self.path}')

    def lookup(self, key: CacheKey, now: int | None = None) -> CacheEntry | None:
        """Return the entry with this encounter recorded, or None on a miss."""
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                return None
            entry = self._record_hit(entry, now)
        return entry

    def store(self, key: CacheKey, annotation: list[AnnotatedWord], now: int | None = None) -> CacheEntry:
        with self._lock:
            if key in self._entries:
                raise ContractViolationError(f'{key_string(key)} is already cached')
            return self._insert(key, annotation, now)

    def record(self, key: CacheKey, annotation: list[AnnotatedWord], now: int | None = None) -> tuple[CacheEntry, bool]:
        """Store a fresh annotation, or count a hit if another caller stored it first.

        Returns the entry and whether it was already cached.
        """
        with self._lock:
            existing = self._entries.get(key)
            if existing is not None:
                return self._record_hit(existing, now), True
            return self._insert(key, annotation, now), False

    def _insert(self, key: CacheKey, annotation: list[AnnotatedWord], now: int | None) -> CacheEntry:
        timestamp = _now() if now is None else int(now)
        entry = CacheEntry(key=key, annotation=tuple(annotation), first_seen=timestamp, last_seen=timestamp, count=1)
        self._entries[key] = entry
        self._dirty = True
        return entry

    def _record_hit(self, entry: CacheEntry, now: int | None) -> CacheEntry:
        timestamp = _now() if now is None else int(now)
        updated = replace(entry, last_seen=max(entry.last_seen, timestamp), count=entry.count + 1)
        self._entries[entry.key] = updated
        self._dirty = True
        return updated

    def snapshot(self) -> dict:
        with self._lock:
            self._dirty = False
            return {
                'version': CACHE_FORMAT_VERSION,
                'model_version': self.model_version,
                'entries': {key_string(key): entry.to_dict() for key, entry in sorted(self._entries.items())},
            }

    def flush(self, force: bool = False):
        """Write the cache to disk if anything changed since the last flush."""
        if self.path is None:
            return
        with self._flush_lock:
            if not (self._dirty or force):
                return
            document = self.snapshot()
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=f'.{self.path.name}.', suffix='.tmp')
                with os.fdopen(fd, 'w', encoding='utf-8') as f:
                    json.dump(document, f, indent=1)
                os.replace(tmp, self.path)
            except OSError as e:
                self._dirty = True
                raise CacheUnavailableError(f'Cannot write cache file {self.path}: {e}') from e
            logger.info(f'Flushed {len(document["entries"])} cached identifiers to {self.path}')
