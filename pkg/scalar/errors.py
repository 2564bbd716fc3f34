class ScalarError(Exception):
    """Base class for every error raised by the tagger."""


class MalformedIdentifierError(ScalarError, ValueError):
    pass


class ContractViolationError(ScalarError, ValueError):
    pass


class ResourceLoadError(ScalarError):
    pass


class LexiconLoadError(ResourceLoadError):
    pass


class VectorLoadError(ResourceLoadError):
    pass


class ConceptConstructionError(ScalarError):
    pass


class StratificationError(ScalarError):
    pass


class DegenerateTrainingError(ScalarError):
    pass


class ModelFormatError(ScalarError):
    pass


class DatasetError(ScalarError):
    pass


class CacheUnavailableError(ScalarError):
    pass


class ModelNotLoadedError(ScalarError):
    pass
