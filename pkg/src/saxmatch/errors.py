"""Exception types raised across the toolkit.

Hierarchy: everything derives from :class:`SaxmatchError`. Validation-style
errors also derive from ``ValueError`` so plain Python callers can catch them
idiomatically; storage errors derive from ``OSError``.
"""


class SaxmatchError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(SaxmatchError, ValueError):
    """Bad argument or precondition violation."""


# core
class LengthMismatch(ValidationError):
    """Two series (or a series and residual vector) differ in length."""


class ZeroVariance(ValidationError):
    """Constant series cannot be normalized; reject at ingestion."""


# quantization
class InvalidAlphabet(ValidationError):
    """Alphabet size outside the supported range."""


class InvalidSd(ValidationError):
    """Non-positive standard deviation for breakpoint construction."""


class InvalidRange(ValidationError):
    """Empty or inverted interval for uniform breakpoints."""


class OutOfDomain(ValidationError):
    """Probability argument outside (0, 1)."""


class BreakpointOutOfRange(ValidationError):
    """Trend breakpoints exceed the feasible angle range for the series length."""


# representations
class SegmentMismatch(ValidationError):
    """Segment count does not divide the series length."""


class SeasonMismatch(ValidationError):
    """Season length does not divide the series length."""


class ShapeMismatch(ValidationError):
    """Representations built for different lengths or segment counts."""


class AlphabetMismatch(ValidationError):
    """Representations or tables built over different alphabets."""


class OutOfRange(ValidationError):
    """Component strength outside [0, 1]."""


class DegenerateLength(ValidationError):
    """Series too short for the requested operation (T < 2)."""


# matching / evaluation
class EmptyInput(ValidationError):
    """Aggregate requested over an empty collection."""


class InconsistentResults(ValidationError):
    """Approximate match reported a smaller Euclidean distance than the exact match."""


class ZeroEuclidean(ValidationError):
    """TLB is undefined for a pair at Euclidean distance zero."""


class InfeasibleBudget(ValidationError):
    """No admissible alphabet fits the requested bit budget."""


class ConvergenceFailure(SaxmatchError, RuntimeError):
    """Strength bisection failed to reach tolerance after all retries."""


# storage
class StorageError(SaxmatchError, OSError):
    """Base class for on-disk layout errors."""


class IoFailure(StorageError):
    """Underlying read/write failed; message names the path."""


class StoreReadFailure(IoFailure):
    """Raw series read failed during the matching scan."""


class SizeMismatch(StorageError):
    """Series file length disagrees with the manifest."""


class ParseFailure(StorageError):
    """Malformed manifest; message carries the line number."""


class VersionMismatch(StorageError):
    """Persisted index written by an incompatible format version."""


class ConfigMismatch(StorageError):
    """Persisted index built under a different configuration."""
