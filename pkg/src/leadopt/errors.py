"""Shared exception hierarchy.

Every error raised on a documented failure path derives from LeadoptError so
callers can catch platform errors without catching programming mistakes.
"""

from __future__ import annotations


class LeadoptError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------------------
# molgraph
# ---------------------------------------------------------------------------

class SmilesError(LeadoptError):
    """Base for SMILES parsing/validation errors; carries a 0-based offset."""

    def __init__(self, message: str, smiles: str = "", offset: int = 0) -> None:
        self.smiles = smiles
        self.offset = offset
        super().__init__(f"{message} (offset {offset})")


class SmilesSyntaxError(SmilesError):
    """Malformed SMILES text: unbalanced brackets, bad symbols, open rings."""


class ValenceError(SmilesError):
    """An atom exceeds its allowed valence."""


class AromaticityError(ValenceError):
    """A ring marked aromatic fails the electron-count check."""


class MultiFragmentError(LeadoptError):
    """A multi-fragment molecule reached an operation that needs one fragment."""


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

class UnclassifiableAtomError(LeadoptError):
    """An atom matched no pattern in a contribution table."""


class EmptyVocabularyError(LeadoptError):
    """A fragment vocabulary with no entries was supplied."""


# ---------------------------------------------------------------------------
# features
# ---------------------------------------------------------------------------

class EmptyCorpusError(LeadoptError):
    """Vocabulary construction was asked to run over an empty corpus."""


class NoTokensError(LeadoptError):
    """A molecule produced no fragment tokens."""


class LengthMismatchError(LeadoptError):
    """Two fingerprints of different lengths were compared."""


# ---------------------------------------------------------------------------
# qsar
# ---------------------------------------------------------------------------

class InsufficientDataError(LeadoptError):
    """Not enough samples for the requested operation."""


class DimensionMismatchError(LeadoptError):
    """Feature vector dimension does not match the model."""


class ZeroVarianceError(LeadoptError):
    """R^2 is undefined because the reference values are constant."""


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

class BackendError(LeadoptError):
    """Base for generator-backend failures."""


class BackendTimeoutError(BackendError):
    """The remote backend did not answer within the configured timeout."""


class MalformedResponseError(BackendError):
    """No parseable payload was found in a backend response."""

    def __init__(self, message: str, raw_text: str = "") -> None:
        self.raw_text = raw_text
        super().__init__(message)


class NonNumericActivityError(MalformedResponseError):
    """A prediction response carried a non-numeric activity field."""


# ---------------------------------------------------------------------------
# campaign / metrics
# ---------------------------------------------------------------------------

class EmptyBatchError(LeadoptError):
    """Batch metrics were requested for an empty batch."""


class TooFewSamplesError(LeadoptError):
    """A distribution fit needs at least two samples per set."""


# ---------------------------------------------------------------------------
# data / service
# ---------------------------------------------------------------------------

class SchemaMismatchError(LeadoptError):
    """An input file header does not match the expected schema."""


class DatasetMissingError(LeadoptError):
    """A referenced dataset is not registered."""


class NotFoundError(LeadoptError):
    """A referenced campaign or session id does not exist."""


class ConflictError(LeadoptError):
    """An operation conflicts with existing state (e.g. duplicate id)."""


class ValidationError(LeadoptError):
    """A configuration or request payload failed validation."""
