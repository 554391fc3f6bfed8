"""Error hierarchy shared across the package.

Every domain error carries a stable ``code`` string so the CLI and the HTTP
service can report machine-readable failures without string matching.
"""

from __future__ import annotations


class StackIndexError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __str__(self) -> str:
        msg = super().__str__()
        return msg if msg else self.code


# --- dataset ---------------------------------------------------------------

class MalformedHeader(StackIndexError):
    code = "malformed_header"


class NonContiguousMonths(StackIndexError):
    code = "non_contiguous_months"

    def __init__(self, gap_month, message=None):
        self.gap_month = gap_month
        super().__init__(message or f"month gap: {gap_month} is missing")


class DuplicateMonth(StackIndexError):
    code = "duplicate_month"


class DuplicateTag(StackIndexError):
    code = "duplicate_tag"


class NegativeCount(StackIndexError):
    code = "negative_count"


class UnparseableCell(StackIndexError):
    code = "unparseable_cell"

    def __init__(self, row: int, col: int, cell: str, message=None):
        self.row = row
        self.col = col
        self.cell = cell
        super().__init__(message or f"cannot parse cell at row {row}, column {col}: {cell!r}")


class TagNotFound(StackIndexError):
    code = "tag_not_found"

    def __init__(self, tag: str):
        self.tag = tag
        super().__init__(f"tag not found: {tag!r}")


class AmbiguousTag(StackIndexError):
    code = "ambiguous_tag"


class NoObservedValues(StackIndexError):
    code = "no_observed_values"


class DuplicateMember(StackIndexError):
    code = "duplicate_member"


class TooFewMembers(StackIndexError):
    code = "too_few_members"


# --- forecast models --------------------------------------------------------

class SeriesTooShort(StackIndexError):
    code = "series_too_short"


class SingularDesign(StackIndexError):
    code = "singular_design"


class HorizonTooLarge(StackIndexError):
    code = "horizon_too_large"


class InvalidLevel(StackIndexError):
    code = "invalid_level"


class InvalidOrder(StackIndexError):
    code = "invalid_order"


class UnknownModelKind(StackIndexError):
    code = "unknown_model_kind"


class MismatchedHorizons(StackIndexError):
    code = "mismatched_horizons"


class MismatchedOrigins(StackIndexError):
    code = "mismatched_origins"


class MismatchedLevels(StackIndexError):
    code = "mismatched_levels"


# --- evaluation --------------------------------------------------------------

class LengthMismatch(StackIndexError):
    code = "length_mismatch"


class EmptyInput(StackIndexError):
    code = "empty_input"


class HoldoutTooLong(StackIndexError):
    code = "holdout_too_long"


class WindowTooLong(StackIndexError):
    code = "window_too_long"


# --- ingestion ----------------------------------------------------------------

class TransportError(StackIndexError):
    code = "transport_error"


class QuotaExhausted(StackIndexError):
    """Raised when the API quota runs out; carries whatever was fetched."""

    code = "quota_exhausted"

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class UnknownTag(StackIndexError):
    code = "unknown_tag"


class RangeEmpty(StackIndexError):
    code = "range_empty"


class IoError(StackIndexError):
    code = "io_error"


class ChecksumMismatch(StackIndexError):
    code = "checksum_mismatch"


class VersionUnsupported(StackIndexError):
    code = "version_unsupported"

    def __init__(self, found: str, supported: str):
        self.found = found
        self.supported = supported
        super().__init__(f"metadata version {found!r} is not supported (this build reads version {supported!r})")
