"""Exception types shared across the toolkit.

Everything raised on purpose derives from PraiseKitError so callers (and the
CLI) can catch one base class.
"""


class PraiseKitError(Exception):
    """Base class for all praisekit errors."""


# -- corpus ingestion ---------------------------------------------------------

class MalformedRecordError(PraiseKitError):
    """A corpus record is missing fields, has wrong types, or bad offsets."""


class UnknownPraiseTypeError(PraiseKitError):
    """A gold span names a praise type outside {effort, outcome}."""


class DuplicateIdError(PraiseKitError):
    """Two corpus responses share an id."""


class MissingPredictionError(PraiseKitError):
    """Predicted spans were requested on a response that has none."""


# -- metrics ------------------------------------------------------------------

class InvalidAlphaError(PraiseKitError):
    """The false-positive weight must be a real number >= 0."""


class LengthMismatchError(PraiseKitError):
    """Paired sequences differ in length (or are too short to compare)."""


class DegenerateVarianceError(PraiseKitError):
    """Correlation is undefined because a sequence is constant."""


class RatingOutOfRangeError(PraiseKitError):
    """A Likert rating fell outside 1..5."""


class EmptyInputError(PraiseKitError):
    """An aggregate was requested over zero values."""


# -- chat provider ------------------------------------------------------------

class ProviderError(PraiseKitError):
    """The chat-completion provider failed in a non-retryable way."""


class ProviderTimeoutError(ProviderError):
    """The provider did not answer within the configured timeout."""


class AuthFailureError(ProviderError):
    """The provider rejected our credentials."""


class RateLimitedError(ProviderError):
    """Still rate-limited after exhausting retries."""


class MissingFixtureError(ProviderError):
    """Replay mode has no recorded reply for this request digest."""


# -- extraction ---------------------------------------------------------------

class ExtractionError(PraiseKitError):
    """Model output could not be turned into phrase lists."""


class NoObjectFoundError(ExtractionError):
    """Raw model output contains no JSON object literal."""


class SchemaViolationError(ExtractionError):
    """The JSON object lacks the required keys or has non-string phrases."""


class EmptyResponseError(PraiseKitError):
    """A prompt was requested for an empty tutor response."""


# -- experiment protocol ------------------------------------------------------

class CorpusTooSmallError(PraiseKitError):
    """The corpus is too small to split."""


class SizeExceedsTrainError(PraiseKitError):
    """A partition size exceeds the training set size."""


class EmptyGroupError(PraiseKitError):
    """A (size, seed) group contains no score records."""


class InsufficientOverlapError(PraiseKitError):
    """Fewer than two joined rows are available for a correlation cell."""
